//! Incremental CDCL engine.
//!
//! Two watched literals per clause, first-UIP learning with local
//! minimization, activity ordering refined by user priority levels, Luby
//! restarts, and solving under assumptions with failed-assumption cores.
//! After every `solve` the engine is back at decision level 0, so clauses
//! can be added between calls.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Not;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

/// A propositional variable. Indices start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Wraps a 1-based index.
    pub fn from_index(index: u32) -> Var {
        assert!(index > 0, "variable indices start at 1");
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    fn slot(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn negative(self) -> Lit {
        Lit::new(self, false)
    }
}

/// A literal, packed as `2 * (var - 1) + negated`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(((var.0 - 1) << 1) | (!positive) as u32)
    }

    pub fn var(self) -> Var {
        Var((self.0 >> 1) + 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    fn code(self) -> usize {
        self.0 as usize
    }

    /// Signed DIMACS form.
    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var().0);
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    /// Inverse of [`Lit::to_dimacs`]; `None` for 0 or out-of-range values.
    pub fn from_dimacs(value: i64) -> Option<Lit> {
        let index = u32::try_from(value.unsigned_abs()).ok().filter(|&i| i > 0)?;
        Some(Lit::new(Var(index), value > 0))
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("variable {0} has not been allocated")]
    UnknownVar(u32),
}

/// Anything that accepts variables and clauses: the engine itself, or a
/// plain [`Cnf`] collector for one-shot dumps.
pub trait ClauseSink {
    fn new_var(&mut self) -> Var;
    fn add_clause(&mut self, lits: &[Lit]) -> Result<(), SatError>;
    /// Branching preference; ignored by sinks that do not branch.
    fn set_polarity(&mut self, _var: Var, _preferred: bool) {}
    /// Decision-order priority; ignored by sinks that do not branch.
    fn bump_priority(&mut self, _var: Var, _amount: f64) {}
}

/// A plain CNF formula.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
}

impl ClauseSink for Cnf {
    fn new_var(&mut self) -> Var {
        self.num_vars += 1;
        Var(self.num_vars)
    }

    fn add_clause(&mut self, lits: &[Lit]) -> Result<(), SatError> {
        if let Some(bad) = lits.iter().find(|l| l.var().0 > self.num_vars) {
            return Err(SatError::UnknownVar(bad.var().0));
        }
        self.clauses.push(lits.to_vec());
        Ok(())
    }
}

/// A total assignment returned with a SAT answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn value(&self, var: Var) -> bool {
        self.values[var.slot()]
    }

    pub fn lit_value(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Model),
    /// `core` is a subset of the assumptions that is already unsatisfiable
    /// with the clauses; empty when the clauses alone are unsatisfiable.
    Unsat { core: Vec<Lit> },
    Interrupted,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolveResult::Unsat { .. })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
}

/// Tunable constants of the engine, kept in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub var_decay: f64,
    pub clause_decay: f64,
    /// Conflicts per Luby unit.
    pub restart_base: u64,
    /// Fraction of decisions taken on a random unassigned variable.
    pub random_decision_freq: f64,
    pub seed: u64,
    /// Initial learnt-clause budget as a fraction of the problem clauses.
    pub learnt_size_factor: f64,
    pub learnt_size_growth: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            var_decay: 0.95,
            clause_decay: 0.999,
            restart_base: 100,
            random_decision_freq: 0.0,
            seed: 0,
            learnt_size_factor: 1.0 / 3.0,
            learnt_size_growth: 1.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Value {
    True,
    False,
    Unassigned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ClauseRef(u32);

#[derive(Debug, Clone)]
struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: ClauseRef,
    blocker: Lit,
}

/// Max-heap of variable slots keyed by `(priority, activity)`.
#[derive(Debug, Clone, Default)]
struct VarOrder {
    heap: Vec<u32>,
    position: Vec<u32>,
}

const NOT_IN_HEAP: u32 = u32::MAX;

impl VarOrder {
    fn grow(&mut self) {
        self.position.push(NOT_IN_HEAP);
    }

    fn contains(&self, v: usize) -> bool {
        self.position[v] != NOT_IN_HEAP
    }

    fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    fn before(a: u32, b: u32, priority: &[f64], activity: &[f64]) -> bool {
        let (a, b) = (a as usize, b as usize);
        match priority[a].partial_cmp(&priority[b]) {
            Some(core::cmp::Ordering::Greater) => true,
            Some(core::cmp::Ordering::Less) => false,
            _ => activity[a] > activity[b] || (activity[a] == activity[b] && a < b),
        }
    }

    fn insert(&mut self, v: usize, priority: &[f64], activity: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.position[v] = self.heap.len() as u32;
        self.heap.push(v as u32);
        self.sift_up(self.heap.len() - 1, priority, activity);
    }

    fn update(&mut self, v: usize, priority: &[f64], activity: &[f64]) {
        if self.contains(v) {
            let i = self.position[v] as usize;
            self.sift_up(i, priority, activity);
        }
    }

    fn pop(&mut self, priority: &[f64], activity: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.position[top as usize] = NOT_IN_HEAP;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.position[last as usize] = 0;
            self.sift_down(0, priority, activity);
        }
        Some(top as usize)
    }

    fn sift_up(&mut self, mut i: usize, priority: &[f64], activity: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::before(v, self.heap[parent], priority, activity) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.position[self.heap[i] as usize] = i as u32;
            i = parent;
        }
        self.heap[i] = v;
        self.position[v as usize] = i as u32;
    }

    fn sift_down(&mut self, mut i: usize, priority: &[f64], activity: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && Self::before(self.heap[right], self.heap[left], priority, activity) {
                right
            } else {
                left
            };
            if !Self::before(self.heap[child], v, priority, activity) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.position[self.heap[i] as usize] = i as u32;
            i = child;
        }
        self.heap[i] = v;
        self.position[v as usize] = i as u32;
    }
}

enum SearchOutcome {
    Sat,
    Unsat,
    Restart,
    Interrupted,
}

/// The engine. One instance serves one client at a time.
#[derive(Debug, Clone)]
pub struct Solver {
    config: EngineConfig,
    // Problem clauses as added (normalized), for dumps and audits.
    original: Vec<Vec<Lit>>,
    clauses: Vec<Clause>,
    learnts: Vec<ClauseRef>,
    watches: Vec<Vec<Watcher>>,
    values: Vec<Value>,
    level: Vec<u32>,
    reason: Vec<Option<ClauseRef>>,
    saved_phase: Vec<bool>,
    preferred: Vec<Option<bool>>,
    activity: Vec<f64>,
    priority: Vec<f64>,
    order: VarOrder,
    seen: Vec<bool>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    var_inc: f64,
    cla_inc: f64,
    max_learnts: f64,
    ok: bool,
    conflict_limit: Option<u64>,
    rng: SmallRng,
    stats: EngineStats,
    problem_clause_count: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Self::with_config(EngineConfig::default())
    }

    pub fn with_config(config: EngineConfig) -> Self {
        Solver {
            config,
            original: Vec::new(),
            clauses: Vec::new(),
            learnts: Vec::new(),
            watches: Vec::new(),
            values: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            saved_phase: Vec::new(),
            preferred: Vec::new(),
            activity: Vec::new(),
            priority: Vec::new(),
            order: VarOrder::default(),
            seen: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            var_inc: 1.0,
            cla_inc: 1.0,
            max_learnts: 0.0,
            ok: true,
            conflict_limit: None,
            rng: SmallRng::seed_from_u64(config.seed),
            stats: EngineStats::default(),
            problem_clause_count: 0,
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    /// Clauses added so far (deduplicated, tautologies dropped), in order.
    pub fn original_clauses(&self) -> &[Vec<Lit>] {
        &self.original
    }

    /// Snapshot of the problem formula.
    pub fn to_cnf(&self) -> Cnf {
        Cnf {
            num_vars: self.num_vars(),
            clauses: self.original.clone(),
        }
    }

    /// False once the clauses alone are known to be unsatisfiable.
    pub fn is_consistent(&self) -> bool {
        self.ok
    }

    /// Caps the number of conflicts per `solve` call; `None` removes the cap.
    pub fn set_conflict_limit(&mut self, limit: Option<u64>) {
        self.conflict_limit = limit;
    }

    pub fn new_var(&mut self) -> Var {
        let slot = self.values.len();
        self.values.push(Value::Unassigned);
        self.level.push(0);
        self.reason.push(None);
        self.saved_phase.push(false);
        self.preferred.push(None);
        self.activity.push(0.0);
        self.priority.push(0.0);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.order.grow();
        self.order.insert(slot, &self.priority, &self.activity);
        Var(slot as u32 + 1)
    }

    pub fn set_polarity(&mut self, var: Var, preferred: bool) {
        self.preferred[var.slot()] = Some(preferred);
    }

    pub fn preferred_polarity(&self, var: Var) -> Option<bool> {
        self.preferred[var.slot()]
    }

    /// Raises the decision priority level of `var` by `amount`. Variables on
    /// a higher level are always decided before lower ones.
    pub fn bump_priority(&mut self, var: Var, amount: f64) {
        if amount <= 0.0 || amount.is_nan() {
            return;
        }
        let v = var.slot();
        self.priority[v] += amount;
        self.order.update(v, &self.priority, &self.activity);
    }

    pub fn priority(&self, var: Var) -> f64 {
        self.priority[var.slot()]
    }

    fn lit_value(&self, lit: Lit) -> Value {
        match self.values[lit.var().slot()] {
            Value::Unassigned => Value::Unassigned,
            Value::True if lit.is_positive() => Value::True,
            Value::False if !lit.is_positive() => Value::True,
            _ => Value::False,
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    pub fn add_clause(&mut self, lits: &[Lit]) -> Result<(), SatError> {
        let n = self.num_vars();
        if let Some(bad) = lits.iter().find(|l| l.var().0 > n) {
            return Err(SatError::UnknownVar(bad.var().0));
        }
        let mut clause = lits.to_vec();
        clause.sort_unstable();
        clause.dedup();
        if clause.windows(2).any(|w| w[0] == !w[1]) {
            return Ok(());
        }
        self.original.push(clause.clone());
        if !self.ok {
            return Ok(());
        }
        debug_assert_eq!(self.decision_level(), 0);
        // Drop literals false at the root; skip clauses already satisfied.
        if clause.iter().any(|&l| self.lit_value(l) == Value::True) {
            return Ok(());
        }
        clause.retain(|&l| self.lit_value(l) != Value::False);
        match clause.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(clause[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(clause, false);
                self.problem_clause_count += 1;
            }
        }
        Ok(())
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> ClauseRef {
        let cref = ClauseRef(self.clauses.len() as u32);
        self.watches[lits[0].code()].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[lits[1].code()].push(Watcher {
            cref,
            blocker: lits[0],
        });
        self.clauses.push(Clause {
            lits,
            learnt,
            deleted: false,
            activity: 0.0,
        });
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    fn enqueue(&mut self, lit: Lit, reason: Option<ClauseRef>) {
        let v = lit.var().slot();
        debug_assert_eq!(self.values[v], Value::Unassigned);
        self.values[v] = if lit.is_positive() { Value::True } else { Value::False };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    /// Unit propagation; returns a conflicting clause if one is found.
    fn propagate(&mut self) -> Option<ClauseRef> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut watchers = core::mem::take(&mut self.watches[false_lit.code()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < watchers.len() {
                let w = watchers[i];
                i += 1;
                if self.clauses[w.cref.0 as usize].deleted {
                    continue;
                }
                if self.lit_value(w.blocker) == Value::True {
                    watchers[j] = w;
                    j += 1;
                    continue;
                }
                let clause = &mut self.clauses[w.cref.0 as usize].lits;
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                let kept = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && self.lit_value(first) == Value::True {
                    watchers[j] = kept;
                    j += 1;
                    continue;
                }
                let clause = &self.clauses[w.cref.0 as usize].lits;
                let replacement = (2..clause.len()).find(|&k| self.lit_value(clause[k]) != Value::False);
                if let Some(k) = replacement {
                    let clause = &mut self.clauses[w.cref.0 as usize].lits;
                    clause.swap(1, k);
                    let new_watch = clause[1];
                    self.watches[new_watch.code()].push(kept);
                    continue;
                }
                watchers[j] = kept;
                j += 1;
                if self.lit_value(first) == Value::False {
                    conflict = Some(w.cref);
                    self.qhead = self.trail.len();
                    while i < watchers.len() {
                        watchers[j] = watchers[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            watchers.truncate(j);
            let slot = &mut self.watches[false_lit.code()];
            // Watchers added to this list during the loop (none for the
            // falsified literal itself) are preserved.
            watchers.append(slot);
            *slot = watchers;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.update(v, &self.priority, &self.activity);
    }

    fn bump_clause(&mut self, cref: ClauseRef) {
        let c = &mut self.clauses[cref.0 as usize];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &r in &self.learnts {
                self.clauses[r.0 as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP analysis. Returns the learnt clause (asserting literal
    /// first) and the backjump level.
    fn analyze(&mut self, mut confl: ClauseRef) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level();
        loop {
            if self.clauses[confl.0 as usize].learnt {
                self.bump_clause(confl);
            }
            let start = usize::from(p.is_some());
            let len = self.clauses[confl.0 as usize].lits.len();
            for k in start..len {
                let q = self.clauses[confl.0 as usize].lits[k];
                let v = q.var().slot();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().slot()] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            let v = lit.var().slot();
            self.seen[v] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[v].expect("implied literal has a reason");
        }
        learnt[0] = !p.unwrap();

        // Local minimization: drop literals implied by the rest.
        let mut minimized = Vec::with_capacity(learnt.len());
        minimized.push(learnt[0]);
        for &lit in &learnt[1..] {
            let v = lit.var().slot();
            let redundant = match self.reason[v] {
                None => false,
                Some(r) => self.clauses[r.0 as usize].lits[1..].iter().all(|q| {
                    let qv = q.var().slot();
                    self.seen[qv] || self.level[qv] == 0
                }),
            };
            if !redundant {
                minimized.push(lit);
            }
        }
        for &lit in &learnt {
            self.seen[lit.var().slot()] = false;
        }

        let backjump = if minimized.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for k in 2..minimized.len() {
                if self.level[minimized[k].var().slot()] > self.level[minimized[max_i].var().slot()] {
                    max_i = k;
                }
            }
            minimized.swap(1, max_i);
            self.level[minimized[1].var().slot()]
        };
        (minimized, backjump)
    }

    /// Assumptions responsible for `failed` being false.
    fn analyze_final(&mut self, failed: Lit) -> Vec<Lit> {
        let mut core = vec![!failed];
        if self.decision_level() == 0 {
            return core;
        }
        let fv = failed.var().slot();
        self.seen[fv] = true;
        for idx in (self.trail_lim[0]..self.trail.len()).rev() {
            let lit = self.trail[idx];
            let v = lit.var().slot();
            if !self.seen[v] {
                continue;
            }
            match self.reason[v] {
                None => {
                    debug_assert!(self.level[v] > 0);
                    core.push(lit);
                }
                Some(r) => {
                    for k in 1..self.clauses[r.0 as usize].lits.len() {
                        let q = self.clauses[r.0 as usize].lits[k].var().slot();
                        if self.level[q] > 0 {
                            self.seen[q] = true;
                        }
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[fv] = false;
        core.sort_unstable();
        core.dedup();
        core
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for idx in (lim..self.trail.len()).rev() {
            let lit = self.trail[idx];
            let v = lit.var().slot();
            self.values[v] = Value::Unassigned;
            self.reason[v] = None;
            self.saved_phase[v] = lit.is_positive();
            self.order.insert(v, &self.priority, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        let mut next = None;
        if self.config.random_decision_freq > 0.0
            && !self.order.is_empty()
            && self.rng.gen::<f64>() < self.config.random_decision_freq
        {
            let candidate = self.order.heap[self.rng.gen_range(0..self.order.heap.len())] as usize;
            if self.values[candidate] == Value::Unassigned {
                next = Some(candidate);
            }
        }
        while next.is_none() {
            let v = self.order.pop(&self.priority, &self.activity)?;
            if self.values[v] == Value::Unassigned {
                next = Some(v);
            }
        }
        let v = next?;
        let sign = self.preferred[v].unwrap_or(self.saved_phase[v]);
        Some(Lit::new(Var(v as u32 + 1), sign))
    }

    fn reduce_learnts(&mut self) {
        let mut candidates: Vec<ClauseRef> = self
            .learnts
            .iter()
            .copied()
            .filter(|&r| {
                let c = &self.clauses[r.0 as usize];
                !c.deleted && c.lits.len() > 2 && !self.is_locked(r)
            })
            .collect();
        candidates.sort_by(|a, b| {
            let (x, y) = (self.clauses[a.0 as usize].activity, self.clauses[b.0 as usize].activity);
            x.partial_cmp(&y).unwrap_or(core::cmp::Ordering::Equal)
        });
        let remove = candidates.len() / 2;
        for &r in &candidates[..remove] {
            let c = &mut self.clauses[r.0 as usize];
            c.deleted = true;
            c.lits = Vec::new();
        }
        let clauses = &self.clauses;
        self.learnts.retain(|r| !clauses[r.0 as usize].deleted);
        for list in &mut self.watches {
            list.retain(|w| !clauses[w.cref.0 as usize].deleted);
        }
    }

    fn is_locked(&self, cref: ClauseRef) -> bool {
        let first = self.clauses[cref.0 as usize].lits[0];
        let v = first.var().slot();
        self.lit_value(first) == Value::True && self.reason[v] == Some(cref)
    }

    fn search(
        &mut self,
        nof_conflicts: u64,
        assumptions: &[Lit],
        core: &mut Vec<Lit>,
        conflict_budget_end: Option<u64>,
        interrupt: &mut dyn FnMut() -> bool,
    ) -> SearchOutcome {
        let mut conflicts_here = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_here += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SearchOutcome::Unsat;
                }
                let (learnt, backjump) = self.analyze(confl);
                self.cancel_until(backjump);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let asserting = learnt[0];
                    let cref = self.attach(learnt, true);
                    self.bump_clause(cref);
                    self.enqueue(asserting, Some(cref));
                }
                self.var_inc /= self.config.var_decay;
                self.cla_inc /= self.config.clause_decay;
                if self.stats.conflicts.is_multiple_of(64) && interrupt() {
                    return SearchOutcome::Interrupted;
                }
                if conflict_budget_end.is_some_and(|end| self.stats.conflicts >= end) {
                    return SearchOutcome::Interrupted;
                }
            } else {
                if conflicts_here >= nof_conflicts {
                    self.cancel_until(0);
                    return SearchOutcome::Restart;
                }
                if self.learnts.len() as f64 - self.trail.len() as f64 >= self.max_learnts {
                    self.reduce_learnts();
                }
                let mut next = None;
                while (self.decision_level() as usize) < assumptions.len() {
                    let a = assumptions[self.decision_level() as usize];
                    match self.lit_value(a) {
                        Value::True => self.trail_lim.push(self.trail.len()),
                        Value::False => {
                            *core = self.analyze_final(!a);
                            return SearchOutcome::Unsat;
                        }
                        Value::Unassigned => {
                            next = Some(a);
                            break;
                        }
                    }
                }
                if next.is_none() {
                    self.stats.decisions += 1;
                    if self.stats.decisions.is_multiple_of(4096) && interrupt() {
                        return SearchOutcome::Interrupted;
                    }
                    next = self.pick_branch();
                    if next.is_none() {
                        return SearchOutcome::Sat;
                    }
                }
                self.trail_lim.push(self.trail.len());
                self.enqueue(next.unwrap(), None);
            }
        }
    }

    /// Solves under `assumptions` without an external interrupt.
    pub fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        self.solve_with_interrupt(assumptions, &mut || false)
    }

    /// Solves under `assumptions`. `interrupt` is polled periodically; once
    /// it returns true the call ends with [`SolveResult::Interrupted`]. The
    /// conflict limit, if set, ends the call the same way.
    pub fn solve_with_interrupt(&mut self, assumptions: &[Lit], interrupt: &mut dyn FnMut() -> bool) -> SolveResult {
        let n = self.num_vars();
        assert!(
            assumptions.iter().all(|l| l.var().0 <= n),
            "assumption over unallocated variable"
        );
        if !self.ok {
            return SolveResult::Unsat { core: Vec::new() };
        }
        self.max_learnts = (self.problem_clause_count as f64 * self.config.learnt_size_factor).max(1000.0);
        let budget_end = self.conflict_limit.map(|l| self.stats.conflicts + l);
        let mut core = Vec::new();
        let mut restarts = 0u32;
        let outcome = loop {
            let limit = luby(2.0, restarts) * self.config.restart_base as f64;
            match self.search(limit as u64, assumptions, &mut core, budget_end, interrupt) {
                SearchOutcome::Restart => {
                    restarts += 1;
                    self.stats.restarts += 1;
                    self.max_learnts *= self.config.learnt_size_growth;
                }
                other => break other,
            }
        };
        let result = match outcome {
            SearchOutcome::Sat => {
                let values = self.values.iter().map(|&v| v == Value::True).collect();
                SolveResult::Sat(Model { values })
            }
            SearchOutcome::Unsat => SolveResult::Unsat { core },
            SearchOutcome::Interrupted => SolveResult::Interrupted,
            SearchOutcome::Restart => unreachable!(),
        };
        self.cancel_until(0);
        result
    }
}

impl ClauseSink for Solver {
    fn new_var(&mut self) -> Var {
        Solver::new_var(self)
    }

    fn add_clause(&mut self, lits: &[Lit]) -> Result<(), SatError> {
        Solver::add_clause(self, lits)
    }

    fn set_polarity(&mut self, var: Var, preferred: bool) {
        Solver::set_polarity(self, var, preferred)
    }

    fn bump_priority(&mut self, var: Var, amount: f64) {
        Solver::bump_priority(self, var, amount)
    }
}

/// Luby sequence value `y^k` for restart number `x`.
fn luby(y: f64, mut x: u32) -> f64 {
    let mut size = 1u32;
    let mut seq = 0i32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    let mut out = 1.0;
    for _ in 0..seq {
        out *= y;
    }
    out
}
