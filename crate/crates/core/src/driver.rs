//! The bound loop: unroll one step at a time, move the goal selector
//! forward, and stop according to the configured mode.

use alloc::vec::Vec;
use core::time::Duration;

use thiserror::Error;

use crate::encoder::{EncodeError, Encoder, EncoderOptions};
use crate::model::{
    validate_sequence, BoundStatus, ConfigError, IsrpInstance, Mode, ReconfigSequence, SearchConfig, SolveOutcome,
    Status, StepStats, StopOn, ValidationReport,
};
use crate::sat::{EngineConfig, Model, SolveResult, Solver};

/// Monotonic time source. The core has no clock of its own.
pub trait Clock {
    /// Time elapsed since an arbitrary fixed origin.
    fn now(&self) -> Duration;
}

/// A clock that never advances; timeouts never fire.
#[derive(Debug, Clone, Copy, Default)]
pub struct FrozenClock;

impl Clock for FrozenClock {
    fn now(&self) -> Duration {
        Duration::ZERO
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DriverError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("internal error: decoded sequence at bound {bound} is invalid: {report}")]
    InvalidSequence { bound: usize, report: ValidationReport },
}

/// Best sequence found so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Found {
    pub bound: usize,
    pub sequence: ReconfigSequence,
}

/// Incremental solver state for one instance: encoder, engine, selectors.
pub struct Driver<'c> {
    encoder: Encoder<Solver>,
    clock: &'c dyn Clock,
    deadline: Option<Duration>,
    require_simple: bool,
    best: Option<Found>,
    last: Option<BoundStatus>,
}

impl<'c> Driver<'c> {
    pub fn new(instance: IsrpInstance, config: &SearchConfig, clock: &'c dyn Clock) -> Self {
        let engine = EngineConfig {
            seed: config.seed,
            ..EngineConfig::default()
        };
        let options = EncoderOptions {
            hints: config.hints,
            no_loop: config.no_loop,
        };
        let deadline = config.timeout.map(|t| clock.now() + t);
        Driver {
            encoder: Encoder::new(Solver::with_config(engine), instance, options),
            clock,
            deadline,
            require_simple: config.no_loop,
            best: None,
            last: None,
        }
    }

    pub fn encoder(&self) -> &Encoder<Solver> {
        &self.encoder
    }

    /// Next bound to be encoded and solved.
    pub fn next_bound(&self) -> usize {
        self.encoder.budget().encoded
    }

    pub fn best(&self) -> Option<&Found> {
        self.best.as_ref()
    }

    pub fn last_status(&self) -> Option<BoundStatus> {
        self.last
    }

    pub fn out_of_time(&self) -> bool {
        self.deadline.is_some_and(|d| self.clock.now() >= d)
    }

    /// Encodes the next bound, retires the previous selector, and solves
    /// under the new one.
    pub fn step(&mut self) -> Result<StepStats, DriverError> {
        let bound = self.next_bound();
        let started = self.clock.now();
        let selector = self
            .encoder
            .encode_step()?
            .expect("the driver always encodes with goal selectors");
        let before = self.encoder.sink().stats();
        let clock = self.clock;
        let deadline = self.deadline;
        let mut interrupt = || deadline.is_some_and(|d| clock.now() >= d);
        let result = self
            .encoder
            .sink_mut()
            .solve_with_interrupt(&[selector], &mut interrupt);
        let after = self.encoder.sink().stats();
        let status = match result {
            SolveResult::Sat(model) => {
                let sequence = self.decode_checked(&model, bound)?;
                self.best = Some(Found { bound, sequence });
                BoundStatus::Sat
            }
            SolveResult::Unsat { .. } => BoundStatus::Unsat,
            SolveResult::Interrupted => BoundStatus::Interrupted,
        };
        self.last = Some(status);
        Ok(StepStats {
            bound,
            status,
            decisions: after.decisions - before.decisions,
            conflicts: after.conflicts - before.conflicts,
            propagations: after.propagations - before.propagations,
            elapsed: self.clock.now().saturating_sub(started),
        })
    }

    fn decode_checked(&self, model: &Model, bound: usize) -> Result<ReconfigSequence, DriverError> {
        let sequence = decode_model(&self.encoder, model, bound)?;
        let report = validate_sequence(self.encoder.instance(), &sequence, self.require_simple);
        if !report.is_ok() {
            return Err(DriverError::InvalidSequence { bound, report });
        }
        Ok(sequence)
    }
}

/// States `0..=bound` of a model, one per step.
pub fn decode_model(encoder: &Encoder<Solver>, model: &Model, bound: usize) -> Result<ReconfigSequence, EncodeError> {
    encoder.decode(model, bound)
}

/// Runs the bound loop for `config` and reports the outcome.
pub fn solve_bcr(instance: &IsrpInstance, config: &SearchConfig, clock: &dyn Clock) -> Result<SolveOutcome, DriverError> {
    solve_bcr_observed(instance, config, clock, &mut |_| {})
}

/// [`solve_bcr`], reporting each bound's record to `observer` as it finishes.
pub fn solve_bcr_observed(
    instance: &IsrpInstance,
    config: &SearchConfig,
    clock: &dyn Clock,
    observer: &mut dyn FnMut(&StepStats),
) -> Result<SolveOutcome, DriverError> {
    config.validate()?;
    let (min_steps, max_steps) = match config.mode {
        // In longest mode `max_steps` is the largest length tried, inclusive.
        Mode::Longest => {
            let limit = config.max_steps.map(|m| m + 1);
            (limit, limit)
        }
        Mode::Existent | Mode::Shortest => (config.min_steps, config.max_steps),
    };
    let stop = match config.stop {
        StopOn::Sat => BoundStatus::Sat,
        StopOn::Unsat => BoundStatus::Unsat,
    };

    let mut driver = Driver::new(instance.clone(), config, clock);
    let mut stats = Vec::new();
    let mut i = 0usize;
    let mut ret: Option<BoundStatus> = None;
    let mut timed_out = false;
    while max_steps.is_none_or(|m| i < m) && (min_steps.is_none_or(|m| i < m) || ret != Some(stop)) {
        if driver.out_of_time() {
            timed_out = true;
            break;
        }
        let record = driver.step()?;
        observer(&record);
        ret = Some(record.status);
        stats.push(record);
        if ret == Some(BoundStatus::Interrupted) {
            timed_out = true;
            break;
        }
        i += 1;
    }

    let (status, sequence) = match driver.best.take() {
        Some(found) => (Status::Reachable, Some(found.sequence)),
        None if max_steps.is_some_and(|m| i >= m) => (Status::Unreachable, None),
        None => (Status::Unknown, None),
    };
    Ok(SolveOutcome {
        status,
        sequence,
        stats,
        complete: !timed_out,
    })
}

/// Longest loop-free sequence: every bound up to `max_steps` is tried and
/// the largest satisfiable one is reported.
pub fn run_longest(instance: &IsrpInstance, config: &SearchConfig, clock: &dyn Clock) -> Result<SolveOutcome, DriverError> {
    if config.mode != Mode::Longest {
        let mut longest = config.clone();
        longest.mode = Mode::Longest;
        return solve_bcr(instance, &longest, clock);
    }
    solve_bcr(instance, config, clock)
}

/// Steps gained by a longest sequence over the shortest one.
pub fn steps_gained(shortest: usize, longest: usize) -> usize {
    longest.saturating_sub(shortest)
}
