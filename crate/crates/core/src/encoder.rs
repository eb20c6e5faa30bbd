//! Step-indexed propositional encoding of independent set reconfiguration
//! under token jumping.
//!
//! Step `t` owns one variable `in(v,t)` per node. Each step carries an
//! exactly-k constraint and the edge constraints; each transition defines
//! `moved_from(v,t)` (and `moved_to(v,t)` when a token hint needs it) by
//! full equivalence and requires exactly one mover. The goal of bound `t`
//! sits behind the selector `query(t)`, which the driver assumes for the
//! active bound and later fixes to false.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::model::{Hints, IsrpInstance, ReconfigSequence, TokenState};
use crate::sat::{ClauseSink, Cnf, Lit, Model, SatError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("cannot require {k} true literals out of {n}")]
    CardinalityTooLarge { k: usize, n: usize },
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error("step {step} decodes to {actual} tokens, expected {k}")]
    Decode { step: usize, actual: usize, k: usize },
    #[error("bound {0} has not been encoded")]
    MissingStep(usize),
}

/// Value of a counter output that may be a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Term {
    True,
    False,
    Lit(Lit),
}

/// Sequential (staircase) counter over a literal family.
///
/// `levels[j-1][i-j]` is `s(i,j)`: at least `j` of the first `i` inputs are
/// true, defined by full equivalence
/// `s(i,j) <-> s(i-1,j) | (x_i & s(i-1,j-1))`. Levels are added on demand.
#[derive(Debug, Clone)]
pub struct Counter {
    inputs: Vec<Lit>,
    levels: Vec<Vec<Lit>>,
}

impl Counter {
    fn new(inputs: Vec<Lit>) -> Self {
        Counter {
            inputs,
            levels: Vec::new(),
        }
    }

    pub fn inputs(&self) -> &[Lit] {
        &self.inputs
    }

    /// Number of levels built so far.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    fn get(&self, i: usize, j: usize) -> Term {
        if j == 0 {
            Term::True
        } else if j > i {
            Term::False
        } else {
            Term::Lit(self.levels[j - 1][i - j])
        }
    }

    fn output(&self, j: usize) -> Term {
        self.get(self.inputs.len(), j)
    }

    fn aux_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.levels.iter().flatten().map(|l| l.var())
    }
}

/// Index of a counter owned by an [`Encoder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterId(usize);

/// Variables of the encoding, by meaning.
#[derive(Debug, Clone, Default)]
pub struct VarMap {
    /// `in(v,t)`, indexed `[t][dense node]`.
    pub in_vars: Vec<Vec<Var>>,
    /// `moved_from(v,t)`; empty at `t = 0`.
    pub moved_from: Vec<Vec<Var>>,
    /// `moved_to(v,t)`; empty at `t = 0` and when no token hint is enabled.
    pub moved_to: Vec<Vec<Var>>,
    /// `query(t)`; absent for steps without a goal selector.
    pub query: Vec<Option<Var>>,
    /// Exactly-k counter of each step.
    pub state_counters: Vec<CounterId>,
    /// Exactly-one counter over `moved_from` of each transition.
    pub move_counters: Vec<Option<CounterId>>,
    /// Counter over `{!in(v,t) : v in start}` for the start-distance hint.
    pub start_gap: Vec<Option<CounterId>>,
    /// Counter over `{!in(v,T) : v in goal}` for the goal-distance hint.
    pub goal_gap: Vec<Option<CounterId>>,
    /// No-loop witnesses `w(v,T,t)` as `(T, t, per-node vars)`.
    pub witnesses: Vec<(usize, usize, Vec<Var>)>,
}

/// Which optional constraints the encoder emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EncoderOptions {
    pub hints: Hints,
    pub no_loop: bool,
}

/// How the goal of a step is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoalMode {
    /// Every step gets a selector `query(t)` guarding its goal clauses.
    Selector,
    /// One-shot formula: only the given bound carries the goal, unguarded.
    Fixed(usize),
}

/// Clause bookkeeping of the encoded steps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepBudget {
    /// Number of steps encoded; steps `0..encoded` exist.
    pub encoded: usize,
    /// Clauses emitted while encoding each step (including the retirement
    /// of the previous selector).
    pub clauses_per_step: Vec<usize>,
}

impl StepBudget {
    /// Highest encoded step.
    pub fn current_bound(&self) -> Option<usize> {
        self.encoded.checked_sub(1)
    }
}

/// Incremental encoder bound to one clause sink.
pub struct Encoder<S: ClauseSink> {
    sink: S,
    instance: IsrpInstance,
    options: EncoderOptions,
    goal_mode: GoalMode,
    counters: Vec<Counter>,
    vars: VarMap,
    budget: StepBudget,
    clause_count: usize,
    constant_true: Option<Var>,
    start_dense: Vec<usize>,
    goal_dense: Vec<usize>,
}

impl<S: ClauseSink> Encoder<S> {
    pub fn new(sink: S, instance: IsrpInstance, options: EncoderOptions) -> Self {
        Self::with_goal_mode(sink, instance, options, GoalMode::Selector)
    }

    pub fn with_goal_mode(sink: S, instance: IsrpInstance, options: EncoderOptions, goal_mode: GoalMode) -> Self {
        let graph = instance.graph();
        let dense = |s: &TokenState| -> Vec<usize> {
            s.nodes()
                .iter()
                .map(|&id| graph.index_of(id).expect("instance states are graph nodes"))
                .collect()
        };
        let start_dense = dense(instance.start());
        let goal_dense = dense(instance.goal());
        Encoder {
            sink,
            instance,
            options,
            goal_mode,
            counters: Vec::new(),
            vars: VarMap::default(),
            budget: StepBudget::default(),
            clause_count: 0,
            constant_true: None,
            start_dense,
            goal_dense,
        }
    }

    pub fn sink(&self) -> &S {
        &self.sink
    }

    pub fn sink_mut(&mut self) -> &mut S {
        &mut self.sink
    }

    pub fn into_sink(self) -> S {
        self.sink
    }

    pub fn instance(&self) -> &IsrpInstance {
        &self.instance
    }

    pub fn options(&self) -> EncoderOptions {
        self.options
    }

    pub fn var_map(&self) -> &VarMap {
        &self.vars
    }

    pub fn budget(&self) -> &StepBudget {
        &self.budget
    }

    pub fn counter(&self, id: CounterId) -> &Counter {
        &self.counters[id.0]
    }

    /// Total clauses emitted so far.
    pub fn clause_count(&self) -> usize {
        self.clause_count
    }

    fn clause(&mut self, lits: &[Lit]) -> Result<(), EncodeError> {
        self.clause_count += 1;
        self.sink.add_clause(lits)?;
        Ok(())
    }

    fn true_lit(&mut self) -> Result<Lit, EncodeError> {
        if let Some(v) = self.constant_true {
            return Ok(v.positive());
        }
        let v = self.sink.new_var();
        self.constant_true = Some(v);
        self.clause(&[v.positive()])?;
        Ok(v.positive())
    }

    fn term_lit(&mut self, term: Term) -> Result<Lit, EncodeError> {
        match term {
            Term::Lit(l) => Ok(l),
            Term::True => self.true_lit(),
            Term::False => Ok(!self.true_lit()?),
        }
    }

    /// Adds `!guard | !term` (or `!term` without a guard).
    fn forbid(&mut self, guard: Option<Lit>, term: Term) -> Result<(), EncodeError> {
        match term {
            Term::False => Ok(()),
            Term::True => match guard {
                Some(g) => self.clause(&[!g]),
                None => self.clause(&[]),
            },
            Term::Lit(l) => match guard {
                Some(g) => self.clause(&[!g, !l]),
                None => self.clause(&[!l]),
            },
        }
    }

    fn require(&mut self, term: Term) -> Result<(), EncodeError> {
        match term {
            Term::True => Ok(()),
            Term::False => self.clause(&[]),
            Term::Lit(l) => self.clause(&[l]),
        }
    }

    /// Registers a counter over `family` without building any level.
    pub fn new_counter(&mut self, family: Vec<Lit>) -> CounterId {
        self.counters.push(Counter::new(family));
        CounterId(self.counters.len() - 1)
    }

    /// Builds levels of `id` up to `j` (capped at the family size).
    fn extend_counter(&mut self, id: CounterId, j: usize) -> Result<(), EncodeError> {
        let n = self.counters[id.0].inputs.len();
        let target = j.min(n);
        while self.counters[id.0].levels.len() < target {
            let level = self.counters[id.0].levels.len() + 1;
            let mut column = Vec::with_capacity(n + 1 - level);
            for _ in level..=n {
                column.push(self.sink.new_var().positive());
            }
            self.counters[id.0].levels.push(column);
            for i in level..=n {
                let counter = &self.counters[id.0];
                let s = match counter.get(i, level) {
                    Term::Lit(l) => l,
                    _ => unreachable!("level {level} defined for i >= level"),
                };
                let x = counter.inputs[i - 1];
                let same = counter.get(i - 1, level);
                let lower = counter.get(i - 1, level - 1);
                // s(i-1,j) -> s
                if let Term::Lit(ps) = same {
                    self.clause(&[!ps, s])?;
                }
                // x & s(i-1,j-1) -> s
                match lower {
                    Term::True => self.clause(&[!x, s])?,
                    Term::Lit(pl) => self.clause(&[!x, !pl, s])?,
                    Term::False => {}
                }
                // s -> s(i-1,j) | x
                match same {
                    Term::Lit(ps) => self.clause(&[!s, ps, x])?,
                    _ => self.clause(&[!s, x])?,
                }
                // s -> s(i-1,j) | s(i-1,j-1)
                match (same, lower) {
                    (_, Term::True) => {}
                    (Term::Lit(ps), Term::Lit(pl)) => self.clause(&[!s, ps, pl])?,
                    (_, Term::Lit(pl)) => self.clause(&[!s, pl])?,
                    (_, Term::False) => self.clause(&[!s])?,
                }
            }
        }
        Ok(())
    }

    fn counter_output(&mut self, id: CounterId, j: usize) -> Result<Term, EncodeError> {
        self.extend_counter(id, j)?;
        Ok(self.counters[id.0].output(j))
    }

    /// Literal true iff at least `j` of the counter's inputs are true.
    pub fn at_least(&mut self, id: CounterId, j: usize) -> Result<Lit, EncodeError> {
        let term = self.counter_output(id, j)?;
        self.term_lit(term)
    }

    /// Literal meaning "at least `j` of `family` are true" over a fresh
    /// counter. For `j` above the family size the result is fixed false.
    pub fn encode_at_least(&mut self, family: &[Lit], j: usize) -> Result<Lit, EncodeError> {
        let id = self.new_counter(family.to_vec());
        self.at_least(id, j)
    }

    /// Exactly `k` of the counter's inputs are true.
    pub fn exactly(&mut self, id: CounterId, k: usize) -> Result<(), EncodeError> {
        let n = self.counters[id.0].inputs.len();
        if k > n {
            return Err(EncodeError::CardinalityTooLarge { k, n });
        }
        let lower = self.counter_output(id, k)?;
        self.require(lower)?;
        let upper = self.counter_output(id, k + 1)?;
        self.forbid(None, upper)
    }

    /// Exactly `k` of `family` are true, over a fresh counter.
    pub fn encode_exactly_k(&mut self, family: &[Lit], k: usize) -> Result<CounterId, EncodeError> {
        if k > family.len() {
            return Err(EncodeError::CardinalityTooLarge { k, n: family.len() });
        }
        let id = self.new_counter(family.to_vec());
        self.exactly(id, k)?;
        Ok(id)
    }

    fn in_lit(&self, v: usize, t: usize) -> Lit {
        self.vars.in_vars[t][v].positive()
    }

    fn encode_start(&mut self) -> Result<(), EncodeError> {
        for i in 0..self.start_dense.len() {
            let l = self.in_lit(self.start_dense[i], 0);
            self.clause(&[l])?;
        }
        Ok(())
    }

    fn encode_state_constraints(&mut self, t: usize) -> Result<(), EncodeError> {
        let family: Vec<Lit> = self.vars.in_vars[t].iter().map(|v| v.positive()).collect();
        let id = self.encode_exactly_k(&family, self.instance.k())?;
        self.vars.state_counters.push(id);
        for e in 0..self.instance.graph().dense_edges().len() {
            let (a, b) = self.instance.graph().dense_edges()[e];
            let (la, lb) = (self.in_lit(a, t), self.in_lit(b, t));
            self.clause(&[!la, !lb])?;
        }
        Ok(())
    }

    fn encode_transition(&mut self, t: usize) -> Result<(), EncodeError> {
        let n = self.instance.graph().node_count();
        let mut from = Vec::with_capacity(n);
        for v in 0..n {
            let (prev, cur) = (self.in_lit(v, t - 1), self.in_lit(v, t));
            let m = self.sink.new_var();
            let ml = m.positive();
            self.clause(&[!ml, prev])?;
            self.clause(&[!ml, !cur])?;
            self.clause(&[ml, !prev, cur])?;
            from.push(m);
        }
        let family: Vec<Lit> = from.iter().map(|v| v.positive()).collect();
        self.vars.moved_from.push(from);
        let id = self.encode_exactly_k(&family, 1.min(n))?;
        self.vars.move_counters.push(Some(id));
        if n == 0 {
            // No node can host a mover.
            self.clause(&[])?;
        }

        let mut to = Vec::new();
        if self.options.hints.needs_moved_to() {
            for v in 0..n {
                let (prev, cur) = (self.in_lit(v, t - 1), self.in_lit(v, t));
                let m = self.sink.new_var();
                let ml = m.positive();
                self.clause(&[!ml, !prev])?;
                self.clause(&[!ml, cur])?;
                self.clause(&[ml, prev, !cur])?;
                to.push(m);
            }
        }
        self.vars.moved_to.push(to);
        Ok(())
    }

    /// Goal clauses of step `t`; returns the selector in selector mode.
    fn encode_goal(&mut self, t: usize) -> Result<Option<Lit>, EncodeError> {
        match self.goal_mode {
            GoalMode::Selector => {
                let q = self.sink.new_var();
                self.vars.query.push(Some(q));
                for i in 0..self.goal_dense.len() {
                    let l = self.in_lit(self.goal_dense[i], t);
                    self.clause(&[q.negative(), l])?;
                }
                Ok(Some(q.positive()))
            }
            GoalMode::Fixed(bound) => {
                self.vars.query.push(None);
                if t == bound {
                    for i in 0..self.goal_dense.len() {
                        let l = self.in_lit(self.goal_dense[i], t);
                        self.clause(&[l])?;
                    }
                }
                Ok(None)
            }
        }
    }

    /// At most `t` start tokens are missing at step `t`.
    fn encode_hint_d1(&mut self, t: usize) -> Result<(), EncodeError> {
        let k = self.instance.k();
        if t >= k {
            self.vars.start_gap.push(None);
            return Ok(());
        }
        let family: Vec<Lit> = self.start_dense.iter().map(|&v| !self.in_lit(v, t)).collect();
        let id = self.new_counter(family);
        self.vars.start_gap.push(Some(id));
        let over = self.counter_output(id, t + 1)?;
        self.forbid(None, over)
    }

    /// With the goal at step `t`, at most `t - T` goal tokens are missing
    /// at each earlier step `T`.
    fn encode_hint_d2(&mut self, t: usize, selector: Option<Lit>) -> Result<(), EncodeError> {
        let k = self.instance.k();
        // The goal-gap counter of step t itself is created here so later
        // goal steps can reuse it.
        if self.vars.goal_gap.len() <= t {
            let family: Vec<Lit> = self.goal_dense.iter().map(|&v| !self.in_lit(v, t)).collect();
            let id = if family.is_empty() { None } else { Some(self.new_counter(family)) };
            self.vars.goal_gap.push(id);
        }
        let active = match (self.goal_mode, selector) {
            (GoalMode::Selector, Some(_)) => true,
            (GoalMode::Fixed(bound), _) => t == bound,
            _ => false,
        };
        if !active {
            return Ok(());
        }
        for earlier in 0..t {
            let slack = t - earlier;
            if slack >= k {
                continue;
            }
            let id = self.vars.goal_gap[earlier].expect("k > slack implies a non-empty goal");
            let over = self.counter_output(id, slack + 1)?;
            self.forbid(selector, over)?;
        }
        Ok(())
    }

    /// No token lands on the node a token left in the previous transition.
    fn encode_hint_t1(&mut self, t: usize) -> Result<(), EncodeError> {
        for v in 0..self.instance.graph().node_count() {
            let left = self.vars.moved_from[t - 1][v].positive();
            let arrived = self.vars.moved_to[t][v].positive();
            self.clause(&[!left, !arrived])?;
        }
        Ok(())
    }

    /// No token leaves the node a token reached in the previous transition.
    fn encode_hint_t2(&mut self, t: usize) -> Result<(), EncodeError> {
        for v in 0..self.instance.graph().node_count() {
            let arrived = self.vars.moved_to[t - 1][v].positive();
            let left = self.vars.moved_from[t][v].positive();
            self.clause(&[!arrived, !left])?;
        }
        Ok(())
    }

    /// State `t` differs from every earlier state: some witness node is in
    /// the earlier state and not in state `t`.
    fn encode_noloop(&mut self, t: usize) -> Result<(), EncodeError> {
        let n = self.instance.graph().node_count();
        for earlier in 0..t {
            let mut witnesses = Vec::with_capacity(n);
            for v in 0..n {
                let (then, now) = (self.in_lit(v, earlier), self.in_lit(v, t));
                let w = self.sink.new_var().positive();
                self.clause(&[!w, then])?;
                self.clause(&[!w, !now])?;
                self.clause(&[w, !then, now])?;
                witnesses.push(w);
            }
            self.clause(&witnesses)?;
            self.vars
                .witnesses
                .push((earlier, t, witnesses.iter().map(|l| l.var()).collect()));
        }
        Ok(())
    }

    fn apply_maximality_heuristic(&mut self, t: usize) {
        prefer_tokens(&mut self.sink, &self.vars.in_vars[t]);
    }

    /// Encodes the next step `t` (0, 1, 2, ... in order) and retires the
    /// selector of step `t - 1`. Returns `query(t)` in selector mode.
    pub fn encode_step(&mut self) -> Result<Option<Lit>, EncodeError> {
        let t = self.budget.encoded;
        let before = self.clause_count;
        let n = self.instance.graph().node_count();
        let vars: Vec<Var> = (0..n).map(|_| self.sink.new_var()).collect();
        self.vars.in_vars.push(vars);
        if t == 0 {
            self.encode_start()?;
            self.vars.moved_from.push(Vec::new());
            self.vars.moved_to.push(Vec::new());
            self.vars.move_counters.push(None);
        }
        self.encode_state_constraints(t)?;
        if t > 0 {
            self.encode_transition(t)?;
        }
        let selector = self.encode_goal(t)?;
        let hints = self.options.hints;
        if hints.d1 {
            self.encode_hint_d1(t)?;
        }
        if hints.d2 {
            self.encode_hint_d2(t, selector)?;
        }
        if t >= 2 {
            if hints.t1 {
                self.encode_hint_t1(t)?;
            }
            if hints.t2 {
                self.encode_hint_t2(t)?;
            }
        }
        if self.options.no_loop && t > 0 {
            self.encode_noloop(t)?;
        }
        if hints.h {
            self.apply_maximality_heuristic(t);
        }
        if t > 0 {
            if let Some(prev) = self.vars.query[t - 1] {
                self.clause(&[prev.negative()])?;
            }
        }
        self.budget.encoded += 1;
        self.budget.clauses_per_step.push(self.clause_count - before);
        Ok(selector)
    }

    /// Encodes steps until `bound` exists.
    pub fn encode_through(&mut self, bound: usize) -> Result<Option<Lit>, EncodeError> {
        let mut last = self.selector(bound);
        while self.budget.encoded <= bound {
            last = self.encode_step()?;
        }
        Ok(last)
    }

    pub fn selector(&self, t: usize) -> Option<Lit> {
        self.vars.query.get(t).copied().flatten().map(|v| v.positive())
    }

    /// Reads states `0..=bound` out of a model.
    pub fn decode(&self, model: &Model, bound: usize) -> Result<ReconfigSequence, EncodeError> {
        if bound >= self.budget.encoded {
            return Err(EncodeError::MissingStep(bound));
        }
        let graph = self.instance.graph();
        let k = self.instance.k();
        let mut states = Vec::with_capacity(bound + 1);
        for (step, vars) in self.vars.in_vars[..=bound].iter().enumerate() {
            let state: TokenState = vars
                .iter()
                .enumerate()
                .filter(|(_, &v)| model.value(v))
                .map(|(i, _)| graph.id_of(i))
                .collect();
            if state.len() != k {
                return Err(EncodeError::Decode {
                    step,
                    actual: state.len(),
                    k,
                });
            }
            states.push(state);
        }
        Ok(ReconfigSequence::new(states))
    }

    /// Every variable the encoder allocated, with a label. Each variable
    /// appears exactly once.
    pub fn all_vars(&self) -> Vec<(String, Var)> {
        let mut out = self.named_atoms();
        if let Some(v) = self.constant_true {
            out.push((String::from("true"), v));
        }
        for (i, c) in self.counters.iter().enumerate() {
            for v in c.aux_vars() {
                out.push((format!("counter#{i}"), v));
            }
        }
        out
    }

    /// Named atoms: `in`, `moved_from`, `moved_to`, `query`, `w`.
    pub fn named_atoms(&self) -> Vec<(String, Var)> {
        let graph = self.instance.graph();
        let mut out = Vec::new();
        for (t, vars) in self.vars.in_vars.iter().enumerate() {
            for (i, &v) in vars.iter().enumerate() {
                out.push((format!("in({},{t})", graph.id_of(i)), v));
            }
        }
        for (t, vars) in self.vars.moved_from.iter().enumerate() {
            for (i, &v) in vars.iter().enumerate() {
                out.push((format!("moved_from({},{t})", graph.id_of(i)), v));
            }
        }
        for (t, vars) in self.vars.moved_to.iter().enumerate() {
            for (i, &v) in vars.iter().enumerate() {
                out.push((format!("moved_to({},{t})", graph.id_of(i)), v));
            }
        }
        for (t, q) in self.vars.query.iter().enumerate() {
            if let Some(q) = q {
                out.push((format!("query({t})"), *q));
            }
        }
        for (earlier, t, vars) in &self.vars.witnesses {
            for (i, &v) in vars.iter().enumerate() {
                out.push((format!("w({},{earlier},{t})", graph.id_of(i)), v));
            }
        }
        out
    }
}

/// Decide the given node variables first, and true.
fn prefer_tokens<S: ClauseSink>(sink: &mut S, vars: &[Var]) {
    for &v in vars {
        sink.set_polarity(v, true);
        sink.bump_priority(v, 1.0);
    }
}

/// The one-shot formula for bound `bound`: steps `0..=bound`, goal fixed at
/// `bound`, no selectors.
pub fn encode_monolithic(instance: &IsrpInstance, options: EncoderOptions, bound: usize) -> Result<Cnf, EncodeError> {
    let mut enc = Encoder::with_goal_mode(Cnf::default(), instance.clone(), options, GoalMode::Fixed(bound));
    enc.encode_through(bound)?;
    Ok(enc.into_sink())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::model::{Graph, NodeId};
    use crate::sat::{SolveResult, Solver};

    fn eight_node() -> IsrpInstance {
        let g = Graph::new(
            1..=8,
            [(1, 3), (2, 5), (3, 4), (3, 6), (4, 5), (5, 8), (6, 7), (7, 8)],
        )
        .unwrap();
        IsrpInstance::new(g, 3, TokenState::new([1, 2, 4]), TokenState::new([3, 5, 7])).unwrap()
    }

    fn instance(n: u32, edges: &[(NodeId, NodeId)], start: &[NodeId], goal: &[NodeId]) -> IsrpInstance {
        let g = Graph::new(1..=n, edges.iter().copied()).unwrap();
        IsrpInstance::with_inferred_k(g, TokenState::new(start.iter().copied()), TokenState::new(goal.iter().copied()))
            .unwrap()
    }

    /// Counts assignments of `inputs` for which clauses + assumptions are SAT.
    fn projected_models(solver: &mut Solver, inputs: &[Var]) -> usize {
        let n = inputs.len();
        (0u32..1 << n)
            .filter(|mask| {
                let assumptions: Vec<Lit> = inputs
                    .iter()
                    .enumerate()
                    .map(|(i, v)| Lit::new(*v, mask >> i & 1 == 1))
                    .collect();
                solver.solve(&assumptions).is_sat()
            })
            .count()
    }

    fn fresh_inputs(n: usize) -> (Encoder<Solver>, Vec<Var>) {
        let mut solver = Solver::new();
        let inputs: Vec<Var> = (0..n).map(|_| solver.new_var()).collect();
        let enc = Encoder::new(solver, eight_node(), EncoderOptions::default());
        (enc, inputs)
    }

    #[test]
    fn at_least_on_forced_inputs() {
        let (mut enc, inputs) = fresh_inputs(3);
        for v in &inputs {
            enc.sink_mut().add_clause(&[v.positive()]).unwrap();
        }
        let family: Vec<Lit> = inputs.iter().map(|v| v.positive()).collect();
        let two = enc.encode_at_least(&family, 2).unwrap();
        assert!(enc.sink_mut().solve(&[!two]).is_unsat());
        assert!(enc.sink_mut().solve(&[two]).is_sat());

        let (mut enc, inputs) = fresh_inputs(3);
        for v in &inputs {
            enc.sink_mut().add_clause(&[v.negative()]).unwrap();
        }
        let family: Vec<Lit> = inputs.iter().map(|v| v.positive()).collect();
        let one = enc.encode_at_least(&family, 1).unwrap();
        assert!(enc.sink_mut().solve(&[one]).is_unsat());
    }

    #[test]
    fn at_least_two_of_four_has_eleven_models() {
        let (mut enc, inputs) = fresh_inputs(4);
        let family: Vec<Lit> = inputs.iter().map(|v| v.positive()).collect();
        let out = enc.encode_at_least(&family, 2).unwrap();
        enc.sink_mut().add_clause(&[out]).unwrap();
        assert_eq!(projected_models(enc.sink_mut(), &inputs), 11);
    }

    #[test]
    fn at_least_beyond_family_is_false() {
        let (mut enc, inputs) = fresh_inputs(2);
        let family: Vec<Lit> = inputs.iter().map(|v| v.positive()).collect();
        let out = enc.encode_at_least(&family, 3).unwrap();
        assert!(enc.sink_mut().solve(&[out]).is_unsat());
    }

    #[test]
    fn exactly_k_edge_cases() {
        let (mut enc, inputs) = fresh_inputs(4);
        let family: Vec<Lit> = inputs.iter().map(|v| v.positive()).collect();
        enc.encode_exactly_k(&family, 2).unwrap();
        assert_eq!(projected_models(enc.sink_mut(), &inputs), 6);

        let (mut enc, inputs) = fresh_inputs(4);
        let family: Vec<Lit> = inputs.iter().map(|v| v.positive()).collect();
        enc.encode_exactly_k(&family, 0).unwrap();
        match enc.sink_mut().solve(&[]) {
            SolveResult::Sat(m) => assert!(inputs.iter().all(|&v| !m.value(v))),
            other => panic!("{other:?}"),
        }

        let (mut enc, inputs) = fresh_inputs(4);
        let family: Vec<Lit> = inputs.iter().map(|v| v.positive()).collect();
        enc.encode_exactly_k(&family, 4).unwrap();
        assert_eq!(projected_models(enc.sink_mut(), &inputs), 1);
        match enc.sink_mut().solve(&[]) {
            SolveResult::Sat(m) => assert!(inputs.iter().all(|&v| m.value(v))),
            other => panic!("{other:?}"),
        }

        let (mut enc, inputs) = fresh_inputs(2);
        let family: Vec<Lit> = inputs.iter().map(|v| v.positive()).collect();
        assert_eq!(
            enc.encode_exactly_k(&family, 3).unwrap_err(),
            EncodeError::CardinalityTooLarge { k: 3, n: 2 }
        );
    }

    #[test]
    fn counter_extends_lazily() {
        let (mut enc, inputs) = fresh_inputs(5);
        let id = enc.new_counter(inputs.iter().map(|v| v.positive()).collect());
        enc.at_least(id, 2).unwrap();
        assert_eq!(enc.counter(id).depth(), 2);
        enc.at_least(id, 1).unwrap();
        assert_eq!(enc.counter(id).depth(), 2);
        enc.at_least(id, 4).unwrap();
        assert_eq!(enc.counter(id).depth(), 4);
        // Level j over n inputs has n - j + 1 staircase variables.
        let aux: usize = enc.counter(id).levels.iter().map(Vec::len).sum();
        assert_eq!(aux, 5 + 4 + 3 + 2);
    }

    #[test]
    fn start_units_fix_step_zero() {
        let mut enc = Encoder::new(Solver::new(), eight_node(), EncoderOptions::default());
        enc.encode_step().unwrap();
        let units: Vec<Vec<Lit>> = enc
            .sink()
            .original_clauses()
            .iter()
            .filter(|c| c.len() == 1)
            .cloned()
            .collect();
        for (id, dense) in [(1u32, 0usize), (2, 1), (4, 3)] {
            assert_eq!(enc.instance().graph().index_of(id), Some(dense));
            assert!(units.contains(&vec![enc.var_map().in_vars[0][dense].positive()]));
        }
        // Block each model's state at step 0 until UNSAT: exactly one state.
        let mut states = Vec::new();
        while let SolveResult::Sat(m) = enc.sink_mut().solve(&[]) {
            let seq = enc.decode(&m, 0).unwrap();
            states.push(seq.states[0].clone());
            let block: Vec<Lit> = enc.var_map().in_vars[0]
                .iter()
                .map(|&v| Lit::new(v, !m.value(v)))
                .collect();
            enc.sink_mut().add_clause(&block).unwrap();
        }
        assert_eq!(states, vec![TokenState::new([1, 2, 4])]);
    }

    #[test]
    fn triangle_with_two_tokens_has_no_state() {
        // Construct the instance directly; it cannot be validated because
        // no start state exists, so encode the step constraints alone.
        let g = Graph::new(1..=3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let single = IsrpInstance::new(g, 1, TokenState::new([1]), TokenState::new([1])).unwrap();
        let mut enc = Encoder::new(Solver::new(), single, EncoderOptions::default());
        enc.encode_step().unwrap();
        let family: Vec<Lit> = enc.var_map().in_vars[0].iter().map(|v| v.positive()).collect();
        enc.encode_exactly_k(&family, 2).unwrap();
        assert!(enc.sink_mut().solve(&[]).is_unsat());
    }

    #[test]
    fn edge_clauses_per_step() {
        let mut enc = Encoder::new(Solver::new(), eight_node(), EncoderOptions::default());
        enc.encode_step().unwrap();
        let edge_clauses = enc
            .sink()
            .original_clauses()
            .iter()
            .filter(|c| c.len() == 2 && c.iter().all(|l| !l.is_positive()))
            .filter(|c| c.iter().all(|l| enc.var_map().in_vars[0].contains(&l.var())))
            .count();
        assert_eq!(edge_clauses, 8);
    }

    #[test]
    fn eight_node_first_transition_moves_node_two() {
        let inst = eight_node();
        let mut enc = Encoder::new(Solver::new(), inst.clone(), EncoderOptions::default());
        enc.encode_through(1).unwrap();
        let g = inst.graph();
        let assume: Vec<Lit> = [1u32, 4, 7]
            .iter()
            .map(|&id| enc.var_map().in_vars[1][g.index_of(id).unwrap()].positive())
            .collect();
        match enc.sink_mut().solve(&assume) {
            SolveResult::Sat(m) => {
                let movers: Vec<NodeId> = enc.var_map().moved_from[1]
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| m.value(v))
                    .map(|(i, _)| g.id_of(i))
                    .collect();
                assert_eq!(movers, vec![2]);
            }
            other => panic!("{other:?}"),
        }
        // Staying put is not a transition.
        let stay: Vec<Lit> = [1u32, 2, 4]
            .iter()
            .map(|&id| enc.var_map().in_vars[1][g.index_of(id).unwrap()].positive())
            .collect();
        assert!(enc.sink_mut().solve(&stay).is_unsat());
    }

    #[test]
    fn goal_selector_semantics() {
        let mut enc = Encoder::new(Solver::new(), eight_node(), EncoderOptions::default());
        let q2 = enc.encode_through(2).unwrap().unwrap();
        assert!(enc.sink_mut().solve(&[q2]).is_unsat());
        // The selector off: goal clauses inert.
        assert!(enc.sink_mut().solve(&[!q2]).is_sat());
        let q3 = enc.encode_step().unwrap().unwrap();
        assert!(enc.sink_mut().solve(&[q3]).is_sat());
        // query(2) has been retired.
        assert!(enc.sink_mut().solve(&[q2]).is_unsat());
    }

    #[test]
    fn goal_clauses_per_step() {
        let mut enc = Encoder::new(Solver::new(), eight_node(), EncoderOptions::default());
        let q = enc.encode_step().unwrap().unwrap();
        let guarded = enc
            .sink()
            .original_clauses()
            .iter()
            .filter(|c| c.contains(&!q))
            .count();
        assert_eq!(guarded, 3);
    }

    #[test]
    fn d2_forbids_far_goal() {
        // The eight-node example with the goal at step 3: step 1 may not miss all three goal
        // tokens, since only two transitions remain.
        let inst = eight_node();
        let options = EncoderOptions {
            hints: Hints { d2: true, ..Hints::NONE },
            no_loop: false,
        };
        let mut enc = Encoder::new(Solver::new(), inst.clone(), options);
        let q3 = enc.encode_through(3).unwrap().unwrap();
        let g = inst.graph();
        let at = |enc: &Encoder<Solver>, ids: &[u32], t: usize| -> Vec<Lit> {
            ids.iter()
                .map(|&id| enc.var_map().in_vars[t][g.index_of(id).unwrap()].positive())
                .collect()
        };
        let mut assume = at(&enc, &[1, 2, 4], 1);
        assume.push(q3);
        assert!(enc.sink_mut().solve(&assume).is_unsat());
        // Without the hint the same prefix is only impossible for the
        // distance reason, which the plain encoding also detects.
        let mut plain = Encoder::new(Solver::new(), inst.clone(), EncoderOptions::default());
        let q3p = plain.encode_through(3).unwrap().unwrap();
        let mut assume = at(&plain, &[1, 2, 4], 1);
        assume.push(q3p);
        assert!(plain.sink_mut().solve(&assume).is_unsat());
        // One goal token missing at T = t - 1 is allowed.
        let mut assume = at(&enc, &[1, 5, 7], 2);
        assume.push(q3);
        assert!(enc.sink_mut().solve(&assume).is_sat());
    }

    #[test]
    fn d2_clause_is_inert_without_selector() {
        let inst = eight_node();
        let options = EncoderOptions {
            hints: Hints { d2: true, ..Hints::NONE },
            no_loop: false,
        };
        let mut enc = Encoder::new(Solver::new(), inst.clone(), options);
        let q3 = enc.encode_through(3).unwrap().unwrap();
        let g = inst.graph();
        let assume: Vec<Lit> = [1u32, 2, 4]
            .iter()
            .map(|&id| enc.var_map().in_vars[2][g.index_of(id).unwrap()].positive())
            .chain([!q3])
            .collect();
        assert!(enc.sink_mut().solve(&assume).is_sat());
    }

    fn path_instance() -> IsrpInstance {
        // Path 1-2-3 with one token; jumps may go anywhere.
        instance(3, &[(1, 2), (2, 3)], &[1], &[2])
    }

    #[test]
    fn t1_forbids_jumping_back() {
        let inst = instance(3, &[], &[1, 3], &[1, 2]);
        let options = EncoderOptions {
            hints: Hints { t1: true, ..Hints::NONE },
            no_loop: false,
        };
        let mut enc = Encoder::new(Solver::new(), inst.clone(), options);
        enc.encode_through(2).unwrap();
        let g = inst.graph();
        let pin = |enc: &Encoder<Solver>, ids: &[u32], t: usize| -> Vec<Lit> {
            ids.iter()
                .map(|&id| enc.var_map().in_vars[t][g.index_of(id).unwrap()].positive())
                .collect()
        };
        // {1,3} -> {2,3} -> {1,2}: node 1 vacated then re-entered.
        let mut assume = pin(&enc, &[2, 3], 1);
        assume.extend(pin(&enc, &[1, 2], 2));
        assert!(enc.sink_mut().solve(&assume).is_unsat());
        // {1,3} -> {1,2} -> {2,3}: node 3 vacated then re-entered.
        let mut assume = pin(&enc, &[1, 2], 1);
        assume.extend(pin(&enc, &[2, 3], 2));
        assert!(enc.sink_mut().solve(&assume).is_unsat());

        let mut free = Encoder::new(Solver::new(), path_instance(), options);
        free.encode_through(2).unwrap();
        let gp = path_instance();
        let pinp = |enc: &Encoder<Solver>, ids: &[u32], t: usize| -> Vec<Lit> {
            ids.iter()
                .map(|&id| enc.var_map().in_vars[t][gp.graph().index_of(id).unwrap()].positive())
                .collect()
        };
        // {1} -> {2} -> {3}: distinct nodes throughout, allowed.
        let mut assume = pinp(&free, &[2], 1);
        assume.extend(pinp(&free, &[3], 2));
        assert!(free.sink_mut().solve(&assume).is_sat());
    }

    #[test]
    fn t2_forbids_leaving_fresh_node() {
        let options = EncoderOptions {
            hints: Hints { t2: true, ..Hints::NONE },
            no_loop: false,
        };
        let inst = path_instance();
        let mut enc = Encoder::new(Solver::new(), inst.clone(), options);
        enc.encode_through(2).unwrap();
        let g = inst.graph();
        let pin = |enc: &Encoder<Solver>, id: u32, t: usize| enc.var_map().in_vars[t][g.index_of(id).unwrap()].positive();
        // {1} -> {2} -> {3}: token enters 2 then leaves it.
        let assume = [pin(&enc, 2, 1), pin(&enc, 3, 2)];
        assert!(enc.sink_mut().solve(&assume).is_unsat());
        // Entering 3 and staying is not a transition pattern t2 forbids, but
        // staying is not a jump; two tokens show the stay case.
        let inst2 = instance(4, &[], &[1, 2], &[3, 4]);
        let mut enc2 = Encoder::new(Solver::new(), inst2.clone(), options);
        enc2.encode_through(2).unwrap();
        let g2 = inst2.graph();
        let pin2 = |enc: &Encoder<Solver>, ids: &[u32], t: usize| -> Vec<Lit> {
            ids.iter()
                .map(|&id| enc.var_map().in_vars[t][g2.index_of(id).unwrap()].positive())
                .collect()
        };
        // {1,2} -> {2,3} -> {3,4}: node 3 entered and kept.
        let mut assume = pin2(&enc2, &[2, 3], 1);
        assume.extend(pin2(&enc2, &[3, 4], 2));
        assert!(enc2.sink_mut().solve(&assume).is_sat());
    }

    #[test]
    fn noloop_excludes_returning_state() {
        let inst = path_instance();
        let options = EncoderOptions {
            hints: Hints::NONE,
            no_loop: true,
        };
        let mut enc = Encoder::new(Solver::new(), inst.clone(), options);
        enc.encode_through(2).unwrap();
        let g = inst.graph();
        let x2_is_start = enc.var_map().in_vars[2][g.index_of(1).unwrap()].positive();
        assert!(enc.sink_mut().solve(&[x2_is_start]).is_unsat());
        let mut looped = Encoder::new(Solver::new(), inst, EncoderOptions::default());
        looped.encode_through(2).unwrap();
        assert!(looped.sink_mut().solve(&[x2_is_start]).is_sat());
    }

    #[test]
    fn heuristic_sets_preferences() {
        let options = EncoderOptions {
            hints: Hints { h: true, ..Hints::NONE },
            no_loop: false,
        };
        let mut enc = Encoder::new(Solver::new(), eight_node(), options);
        enc.encode_through(1).unwrap();
        for t in 0..2 {
            for &v in &enc.var_map().in_vars[t] {
                assert_eq!(enc.sink().preferred_polarity(v), Some(true));
                assert_eq!(enc.sink().priority(v), 1.0);
            }
        }
        let mut plain = Encoder::new(Solver::new(), eight_node(), EncoderOptions::default());
        plain.encode_through(1).unwrap();
        for &v in &plain.var_map().in_vars[1] {
            assert_eq!(plain.sink().preferred_polarity(v), None);
            assert_eq!(plain.sink().priority(v), 0.0);
        }
    }

    #[test]
    fn heuristic_yields_maximal_independent_set_without_cardinality() {
        // Only the edge constraints of one step: preferred-true decisions
        // leave a node out only when a neighbor already holds a token.
        let inst = eight_node();
        let g = inst.graph();
        let mut solver = Solver::new();
        let vars: Vec<Var> = (0..g.node_count()).map(|_| solver.new_var()).collect();
        for &(a, b) in g.dense_edges() {
            solver.add_clause(&[vars[a].negative(), vars[b].negative()]).unwrap();
        }
        prefer_tokens(&mut solver, &vars);
        match solver.solve(&[]) {
            SolveResult::Sat(m) => {
                let chosen: Vec<usize> = (0..vars.len()).filter(|&i| m.value(vars[i])).collect();
                for (i, &v) in vars.iter().enumerate() {
                    if !m.value(v) {
                        assert!(g.neighbors(i).iter().any(|n| chosen.contains(n)), "node {} could be added", g.id_of(i));
                    }
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn heuristic_keeps_states_feasible() {
        let options = EncoderOptions {
            hints: Hints { h: true, ..Hints::NONE },
            no_loop: false,
        };
        let inst = eight_node();
        let mut enc = Encoder::new(Solver::new(), inst.clone(), options);
        enc.encode_through(1).unwrap();
        match enc.sink_mut().solve(&[]) {
            SolveResult::Sat(m) => {
                let seq = enc.decode(&m, 1).unwrap();
                assert!(inst.is_feasible(&seq.states[1]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn var_map_is_injective() {
        let options = EncoderOptions {
            hints: Hints::ALL,
            no_loop: true,
        };
        let mut enc = Encoder::new(Solver::new(), eight_node(), options);
        enc.encode_through(4).unwrap();
        let mut vars: Vec<u32> = enc.all_vars().iter().map(|(_, v)| v.index()).collect();
        let total = vars.len();
        vars.sort_unstable();
        vars.dedup();
        assert_eq!(vars.len(), total);
        assert_eq!(total as u32, enc.sink().num_vars());
    }

    /// Clauses of counter level `j` over `n` inputs.
    fn level_clauses(n: usize, j: usize) -> usize {
        (n - j) + 2 * (n - j + 1) + if j >= 2 { n - j + 1 } else { 0 }
    }

    fn exactly_clauses(n: usize, k: usize) -> usize {
        let levels: usize = (1..=(k + 1).min(n)).map(|j| level_clauses(n, j)).sum();
        levels + usize::from(k >= 1) + usize::from(k < n)
    }

    #[test]
    fn clause_counts_match_closed_form() {
        let inst = eight_node();
        let (n, m, k) = (8usize, 8usize, 3usize);
        let mut enc = Encoder::new(Solver::new(), inst, EncoderOptions::default());
        enc.encode_through(4).unwrap();
        let step0 = k + exactly_clauses(n, k) + m + k;
        let step_t = exactly_clauses(n, k) + m + 3 * n + exactly_clauses(n, 1) + k + 1;
        assert_eq!(enc.budget().clauses_per_step, vec![step0, step_t, step_t, step_t, step_t]);
        assert_eq!(enc.budget().current_bound(), Some(4));
    }

    #[test]
    fn monolithic_has_no_selectors() {
        let cnf = encode_monolithic(&eight_node(), EncoderOptions::default(), 3).unwrap();
        let mut s = Solver::new();
        for _ in 0..cnf.num_vars {
            s.new_var();
        }
        for c in &cnf.clauses {
            s.add_clause(c).unwrap();
        }
        assert!(s.solve(&[]).is_sat());
        let cnf = encode_monolithic(&eight_node(), EncoderOptions::default(), 2).unwrap();
        let mut s = Solver::new();
        for _ in 0..cnf.num_vars {
            s.new_var();
        }
        for c in &cnf.clauses {
            s.add_clause(c).unwrap();
        }
        assert!(s.solve(&[]).is_unsat());
    }
}
