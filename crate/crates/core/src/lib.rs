//! Bounded reconfiguration of independent sets under token jumping.
//!
//! The solver unrolls a propositional encoding of the reconfiguration
//! transition system one step at a time and asks an embedded CDCL engine,
//! under a per-bound goal selector, whether the goal is reachable in exactly
//! that many jumps. A brute-force oracle over the explicit state space is
//! included for cross-checking at small scale.
//!
//! The crate is `no_std` and needs only `alloc`; time enters through the
//! [`driver::Clock`] trait.

#![no_std]

extern crate alloc;

pub mod driver;
pub mod encoder;
pub mod model;
pub mod oracle;
pub mod sat;

pub use driver::{run_longest, solve_bcr, solve_bcr_observed, Clock, Driver, DriverError, FrozenClock};
pub use model::{
    is_independent_set, is_token_jump, validate_sequence, Graph, Hints, IsrpInstance, Mode, NodeId,
    ReconfigSequence, SearchConfig, SolveOutcome, Status, StopOn, TokenState,
};
