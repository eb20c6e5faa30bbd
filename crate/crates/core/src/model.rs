//! Instances, token states, reconfiguration sequences and their semantic
//! checks. Nothing in here knows about the propositional encoding.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use thiserror::Error;

/// Identifier of a graph node as it appears in input files.
pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("node id 0 is not allowed (ids are positive)")]
    ZeroNode,
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("{which} state has {actual} tokens, expected k = {k}")]
    WrongSize {
        which: &'static str,
        actual: usize,
        k: usize,
    },
    #[error("{which} state is not independent: edge {u}-{v}")]
    NotIndependent {
        which: &'static str,
        u: NodeId,
        v: NodeId,
    },
}

/// Undirected simple graph over arbitrary positive node ids.
///
/// Ids are mapped to dense indices `0..n` in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<NodeId>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph. Duplicate nodes and duplicate edges (in either
    /// orientation) collapse; self-loops and dangling endpoints are errors.
    pub fn new<N, E>(nodes: N, edges: E) -> Result<Self, ModelError>
    where
        N: IntoIterator<Item = NodeId>,
        E: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut ids: Vec<NodeId> = nodes.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.first() == Some(&0) {
            return Err(ModelError::ZeroNode);
        }
        let index = |id: NodeId| ids.binary_search(&id).map_err(|_| ModelError::UnknownNode(id));
        let mut dense = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(ModelError::SelfLoop(u));
            }
            let (a, b) = (index(u)?, index(v)?);
            dense.push((a.min(b), a.max(b)));
        }
        dense.sort_unstable();
        dense.dedup();
        let mut adjacency = alloc::vec![Vec::new(); ids.len()];
        for &(a, b) in &dense {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            ids,
            edges: dense,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Node ids in ascending order; position equals the dense index.
    pub fn node_ids(&self) -> &[NodeId] {
        &self.ids
    }

    /// Edges as dense index pairs `(a, b)` with `a < b`, sorted.
    pub fn dense_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges as id pairs with the smaller id first, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().map(|&(a, b)| (self.ids[a], self.ids[b]))
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn id_of(&self, index: usize) -> NodeId {
        self.ids[index]
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index_of(id).is_some()
    }

    pub fn neighbors(&self, index: usize) -> &[usize] {
        &self.adjacency[index]
    }

    pub fn adjacent_dense(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn adjacent(&self, u: NodeId, v: NodeId) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(a), Some(b)) => self.adjacent_dense(a, b),
            _ => false,
        }
    }

    /// First edge with both endpoints in `nodes`, if any.
    fn conflicting_edge(&self, nodes: &[NodeId]) -> Result<Option<(NodeId, NodeId)>, ModelError> {
        let mut dense = Vec::with_capacity(nodes.len());
        for &id in nodes {
            dense.push(self.index_of(id).ok_or(ModelError::UnknownNode(id))?);
        }
        for (i, &a) in dense.iter().enumerate() {
            for &b in &dense[i + 1..] {
                if self.adjacent_dense(a, b) {
                    let (u, v) = (self.ids[a], self.ids[b]);
                    return Ok(Some((u.min(v), u.max(v))));
                }
            }
        }
        Ok(None)
    }
}

/// True iff no edge has both endpoints in `nodes`.
pub fn is_independent_set(graph: &Graph, nodes: &[NodeId]) -> Result<bool, ModelError> {
    Ok(graph.conflicting_edge(nodes)?.is_none())
}

/// A set of token positions, kept in ascending order so that equality is
/// structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TokenState {
    nodes: Vec<NodeId>,
}

impl TokenState {
    pub fn new<I: IntoIterator<Item = NodeId>>(nodes: I) -> Self {
        let mut nodes: Vec<NodeId> = nodes.into_iter().collect();
        nodes.sort_unstable();
        nodes.dedup();
        TokenState { nodes }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.binary_search(&id).is_ok()
    }

    /// Members of `self` absent from `other`.
    pub fn difference<'a>(&'a self, other: &'a TokenState) -> impl Iterator<Item = NodeId> + 'a {
        self.nodes.iter().copied().filter(move |&v| !other.contains(v))
    }
}

impl FromIterator<NodeId> for TokenState {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        TokenState::new(iter)
    }
}

impl fmt::Display for TokenState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.nodes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// True iff exactly one token leaves and exactly one token arrives.
pub fn is_token_jump(a: &TokenState, b: &TokenState) -> bool {
    a.difference(b).count() == 1 && b.difference(a).count() == 1
}

/// An independent set reconfiguration instance under token jumping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsrpInstance {
    graph: Graph,
    k: usize,
    start: TokenState,
    goal: TokenState,
}

impl IsrpInstance {
    pub fn new(graph: Graph, k: usize, start: TokenState, goal: TokenState) -> Result<Self, ModelError> {
        for (which, state) in [("start", &start), ("goal", &goal)] {
            if state.len() != k {
                return Err(ModelError::WrongSize {
                    which,
                    actual: state.len(),
                    k,
                });
            }
            if let Some((u, v)) = graph.conflicting_edge(state.nodes())? {
                return Err(ModelError::NotIndependent { which, u, v });
            }
        }
        Ok(IsrpInstance {
            graph,
            k,
            start,
            goal,
        })
    }

    /// Infers `k` as the size of the start state.
    pub fn with_inferred_k(graph: Graph, start: TokenState, goal: TokenState) -> Result<Self, ModelError> {
        let k = start.len();
        Self::new(graph, k, start, goal)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn start(&self) -> &TokenState {
        &self.start
    }

    pub fn goal(&self) -> &TokenState {
        &self.goal
    }

    /// True iff `state` is a feasible solution of this instance.
    pub fn is_feasible(&self, state: &TokenState) -> bool {
        state.len() == self.k && matches!(self.graph.conflicting_edge(state.nodes()), Ok(None))
    }
}

/// Ordered list of states; its length is the number of transitions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReconfigSequence {
    pub states: Vec<TokenState>,
}

impl ReconfigSequence {
    pub fn new(states: Vec<TokenState>) -> Self {
        ReconfigSequence { states }
    }

    /// Number of transitions, `states.len() - 1` (0 for an empty sequence).
    pub fn len(&self) -> usize {
        self.states.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    WrongStart,
    WrongGoal,
    UnknownNode { step: usize, node: NodeId },
    WrongSize { step: usize, size: usize, k: usize },
    NotIndependent { step: usize, u: NodeId, v: NodeId },
    /// Transition `step -> step + 1` moves `moved` tokens instead of one.
    NotTokenJump { step: usize, moved: usize },
    Repeated { first: usize, second: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => f.write_str("sequence has no states"),
            Violation::WrongStart => f.write_str("step 0: first state is not the start state"),
            Violation::WrongGoal => f.write_str("last state is not the goal state"),
            Violation::UnknownNode { step, node } => write!(f, "step {step}: unknown node {node}"),
            Violation::WrongSize { step, size, k } => {
                write!(f, "step {step}: state has {size} tokens, expected {k}")
            }
            Violation::NotIndependent { step, u, v } => {
                write!(f, "step {step}: nodes {u} and {v} are adjacent")
            }
            Violation::NotTokenJump { step, moved } => write!(
                f,
                "step {step} -> {}: {moved} tokens moved, expected exactly 1",
                step + 1
            ),
            Violation::Repeated { first, second } => {
                write!(f, "steps {first} and {second}: state repeats")
            }
        }
    }
}

/// Every violated condition of a candidate sequence, in step order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks a sequence against the instance, collecting all violations.
pub fn validate_sequence(instance: &IsrpInstance, seq: &ReconfigSequence, require_simple: bool) -> ValidationReport {
    let mut violations = Vec::new();
    let states = &seq.states;
    if states.is_empty() {
        violations.push(Violation::Empty);
        return ValidationReport { violations };
    }
    if states[0] != instance.start {
        violations.push(Violation::WrongStart);
    }
    if states[states.len() - 1] != instance.goal {
        violations.push(Violation::WrongGoal);
    }
    let graph = &instance.graph;
    for (step, state) in states.iter().enumerate() {
        if state.len() != instance.k {
            violations.push(Violation::WrongSize {
                step,
                size: state.len(),
                k: instance.k,
            });
        }
        match graph.conflicting_edge(state.nodes()) {
            Ok(Some((u, v))) => violations.push(Violation::NotIndependent { step, u, v }),
            Ok(None) => {}
            Err(_) => {
                for &node in state.nodes() {
                    if !graph.contains(node) {
                        violations.push(Violation::UnknownNode { step, node });
                    }
                }
            }
        }
    }
    for (step, pair) in states.windows(2).enumerate() {
        if !is_token_jump(&pair[0], &pair[1]) {
            let moved = pair[0].difference(&pair[1]).count().max(pair[1].difference(&pair[0]).count());
            violations.push(Violation::NotTokenJump { step, moved });
        }
    }
    if require_simple {
        let mut order: Vec<usize> = (0..states.len()).collect();
        order.sort_by(|&a, &b| states[a].cmp(&states[b]).then(a.cmp(&b)));
        let mut repeats = Vec::new();
        for w in order.windows(2) {
            if states[w[0]] == states[w[1]] {
                repeats.push((w[0], w[1]));
            }
        }
        repeats.sort_unstable();
        violations.extend(
            repeats
                .into_iter()
                .map(|(first, second)| Violation::Repeated { first, second }),
        );
    }
    ValidationReport { violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Existent,
    Shortest,
    Longest,
}

impl core::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "existent" => Ok(Mode::Existent),
            "shortest" => Ok(Mode::Shortest),
            "longest" => Ok(Mode::Longest),
            other => Err(alloc::format!("unknown mode `{other}`")),
        }
    }
}

/// Solve result that ends the bound loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopOn {
    Sat,
    Unsat,
}

impl core::str::FromStr for StopOn {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sat" => Ok(StopOn::Sat),
            "unsat" => Ok(StopOn::Unsat),
            _ => Err(alloc::format!("unknown stop criterion `{s}`")),
        }
    }
}

/// Optional constraints and heuristic layered over the base encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct Hints {
    /// At most `t` start tokens missing at step `t`.
    pub d1: bool,
    /// At most `t - T` goal tokens missing at step `T` when the goal is at `t`.
    pub d2: bool,
    /// No token jumps back onto a node vacated by the previous transition.
    pub t1: bool,
    /// No token jumps off a node occupied by the previous transition.
    pub t2: bool,
    /// Branch toward putting tokens on nodes.
    pub h: bool,
}

impl Hints {
    pub const NONE: Hints = Hints {
        d1: false,
        d2: false,
        t1: false,
        t2: false,
        h: false,
    };
    pub const ALL: Hints = Hints {
        d1: true,
        d2: true,
        t1: true,
        t2: true,
        h: true,
    };
    pub const LONGEST_DEFAULT: Hints = Hints {
        d1: true,
        d2: true,
        t1: false,
        t2: false,
        h: true,
    };

    /// All 32 combinations, in bit order `d1, d2, t1, t2, h`.
    pub fn all_subsets() -> impl Iterator<Item = Hints> {
        (0u8..32).map(|bits| Hints {
            d1: bits & 1 != 0,
            d2: bits & 2 != 0,
            t1: bits & 4 != 0,
            t2: bits & 8 != 0,
            h: bits & 16 != 0,
        })
    }

    pub fn needs_moved_to(&self) -> bool {
        self.t1 || self.t2
    }
}

impl core::str::FromStr for Hints {
    type Err = String;

    /// Comma-separated subset of `d1,d2,t1,t2,h`, or `none` / `all`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "none" | "" => return Ok(Hints::NONE),
            "all" => return Ok(Hints::ALL),
            _ => {}
        }
        let mut hints = Hints::NONE;
        for part in s.split(',') {
            match part.trim() {
                "d1" => hints.d1 = true,
                "d2" => hints.d2 = true,
                "t1" => hints.t1 = true,
                "t2" => hints.t2 = true,
                "h" => hints.h = true,
                other => return Err(alloc::format!("unknown hint `{other}`")),
            }
        }
        Ok(hints)
    }
}

impl fmt::Display for Hints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = [
            (self.d1, "d1"),
            (self.d2, "d2"),
            (self.t1, "t1"),
            (self.t2, "t2"),
            (self.h, "h"),
        ];
        let mut first = true;
        for (on, name) in names {
            if on {
                if !first {
                    f.write_str(",")?;
                }
                f.write_str(name)?;
                first = false;
            }
        }
        if first {
            f.write_str("none")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("longest mode requires a maximum number of steps")]
    LongestNeedsMax,
    #[error("longest mode requires the no-loop constraint")]
    LongestNeedsNoLoop,
    #[error("hints t1/t2 cannot be used in longest mode")]
    LongestForbidsTokenHints,
}

/// Parameters of the bound loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub mode: Mode,
    pub min_steps: Option<usize>,
    pub max_steps: Option<usize>,
    pub stop: StopOn,
    pub hints: Hints,
    pub no_loop: bool,
    pub timeout: Option<Duration>,
    /// Seed for the engine's randomized tie-breaking.
    pub seed: u64,
}

impl SearchConfig {
    /// Defaults for `mode`: all hints outside longest mode; `d1,d2,h` and
    /// no-loop in longest mode.
    pub fn new(mode: Mode) -> Self {
        let longest = mode == Mode::Longest;
        SearchConfig {
            mode,
            min_steps: Some(1),
            max_steps: None,
            stop: StopOn::Sat,
            hints: if longest { Hints::LONGEST_DEFAULT } else { Hints::ALL },
            no_loop: longest,
            timeout: None,
            seed: 0,
        }
    }

    pub fn shortest() -> Self {
        Self::new(Mode::Shortest)
    }

    pub fn longest(max_steps: usize) -> Self {
        SearchConfig {
            max_steps: Some(max_steps),
            ..Self::new(Mode::Longest)
        }
    }

    pub fn with_hints(mut self, hints: Hints) -> Self {
        self.hints = hints;
        self
    }

    pub fn with_max_steps(mut self, max_steps: Option<usize>) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn with_timeout(mut self, timeout: Option<Duration>) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.mode == Mode::Longest {
            if self.max_steps.is_none() {
                return Err(ConfigError::LongestNeedsMax);
            }
            if !self.no_loop {
                return Err(ConfigError::LongestNeedsNoLoop);
            }
            if self.hints.t1 || self.hints.t2 {
                return Err(ConfigError::LongestForbidsTokenHints);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Reachable,
    Unreachable,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Reachable => "REACHABLE",
            Status::Unreachable => "UNREACHABLE",
            Status::Unknown => "UNKNOWN",
        })
    }
}

/// Result of solving a single bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStatus {
    Sat,
    Unsat,
    Interrupted,
}

/// One record per solved bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepStats {
    pub bound: usize,
    pub status: BoundStatus,
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: Status,
    pub sequence: Option<ReconfigSequence>,
    pub stats: Vec<StepStats>,
    /// False when the time budget cut the search short; a longest-mode
    /// sequence reported in that state is not known to be the longest.
    pub complete: bool,
}

impl SolveOutcome {
    pub fn unknown() -> Self {
        SolveOutcome {
            status: Status::Unknown,
            sequence: None,
            stats: Vec::new(),
            complete: false,
        }
    }

    /// Largest bound attempted, if any.
    pub fn last_bound(&self) -> Option<usize> {
        self.stats.last().map(|s| s.bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::string::ToString;

    pub(crate) fn eight_node_graph() -> Graph {
        Graph::new(
            1..=8,
            [(1, 3), (2, 5), (3, 4), (3, 6), (4, 5), (5, 8), (6, 7), (7, 8)],
        )
        .unwrap()
    }

    fn eight_node() -> IsrpInstance {
        IsrpInstance::new(eight_node_graph(), 3, TokenState::new([1, 2, 4]), TokenState::new([3, 5, 7])).unwrap()
    }

    fn ts(v: &[NodeId]) -> TokenState {
        TokenState::new(v.iter().copied())
    }

    #[test]
    fn independence_on_eight_node() {
        let g = eight_node_graph();
        assert!(is_independent_set(&g, &[1, 2, 4]).unwrap());
        assert!(!is_independent_set(&g, &[3, 4]).unwrap());
        assert!(is_independent_set(&g, &[]).unwrap());
        assert_eq!(is_independent_set(&g, &[9]), Err(ModelError::UnknownNode(9)));
    }

    #[test]
    fn token_jumps() {
        assert!(is_token_jump(&ts(&[1, 2, 4]), &ts(&[1, 4, 7])));
        assert!(!is_token_jump(&ts(&[1, 2, 4]), &ts(&[1, 2, 4])));
        assert!(!is_token_jump(&ts(&[1, 2, 4]), &ts(&[3, 5, 7])));
    }

    #[test]
    fn graph_rejects_bad_input() {
        assert_eq!(Graph::new([1, 2], [(1, 1)]), Err(ModelError::SelfLoop(1)));
        assert_eq!(Graph::new([1, 2], [(1, 3)]), Err(ModelError::UnknownNode(3)));
        assert_eq!(Graph::new([0, 2], []), Err(ModelError::ZeroNode));
        let g = Graph::new([5, 2, 9], [(9, 2), (2, 9)]).unwrap();
        assert_eq!(g.node_ids(), &[2, 5, 9]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(2, 9)]);
    }

    #[test]
    fn instance_checks_size_and_independence() {
        let g = Graph::new([1, 2], [(1, 2)]).unwrap();
        let err = IsrpInstance::new(g.clone(), 2, ts(&[1, 2]), ts(&[1, 2])).unwrap_err();
        assert!(matches!(err, ModelError::NotIndependent { which: "start", .. }));
        let err = IsrpInstance::new(g, 1, ts(&[1]), ts(&[])).unwrap_err();
        assert!(matches!(err, ModelError::WrongSize { which: "goal", .. }));
    }

    #[test]
    fn eight_node_sequence_validates() {
        let seq = ReconfigSequence::new(vec![ts(&[1, 2, 4]), ts(&[1, 4, 7]), ts(&[1, 5, 7]), ts(&[3, 5, 7])]);
        let report = validate_sequence(&eight_node(), &seq, true);
        assert!(report.is_ok(), "{report}");
        assert_eq!(seq.len(), 3);
    }

    #[test]
    fn zero_length_sequence() {
        let g = Graph::new([1], []).unwrap();
        let inst = IsrpInstance::new(g, 1, ts(&[1]), ts(&[1])).unwrap();
        let seq = ReconfigSequence::new(vec![ts(&[1])]);
        assert!(validate_sequence(&inst, &seq, true).is_ok());
        assert_eq!(seq.len(), 0);
    }

    #[test]
    fn corrupted_eight_node_sequence_reports_all_violations() {
        // X1 = {1,3,7}: two tokens moved from X0 and edge 1-3 inside X1.
        let seq = ReconfigSequence::new(vec![ts(&[1, 2, 4]), ts(&[1, 3, 7]), ts(&[1, 5, 7]), ts(&[3, 5, 7])]);
        let report = validate_sequence(&eight_node(), &seq, false);
        assert!(!report.is_ok());
        assert!(report.violations.contains(&Violation::NotIndependent { step: 1, u: 1, v: 3 }));
        assert!(report.violations.contains(&Violation::NotTokenJump { step: 0, moved: 2 }));
        // {1,3,7} -> {1,5,7} is itself a single jump.
        assert_eq!(report.violations.len(), 2);
    }

    #[test]
    fn loops_flagged_only_when_simple_required() {
        let seq = ReconfigSequence::new(vec![
            ts(&[1, 2, 4]),
            ts(&[1, 4, 7]),
            ts(&[1, 2, 4]),
            ts(&[1, 4, 7]),
            ts(&[1, 5, 7]),
            ts(&[3, 5, 7]),
        ]);
        assert!(validate_sequence(&eight_node(), &seq, false).is_ok());
        let report = validate_sequence(&eight_node(), &seq, true);
        assert_eq!(
            report.violations,
            vec![
                Violation::Repeated { first: 0, second: 2 },
                Violation::Repeated { first: 1, second: 3 }
            ]
        );
    }

    #[test]
    fn empty_and_wrong_endpoints() {
        let report = validate_sequence(&eight_node(), &ReconfigSequence::default(), false);
        assert_eq!(report.violations, vec![Violation::Empty]);
        let seq = ReconfigSequence::new(vec![ts(&[1, 4, 7])]);
        let report = validate_sequence(&eight_node(), &seq, false);
        assert_eq!(report.violations, vec![Violation::WrongStart, Violation::WrongGoal]);
    }

    #[test]
    fn config_invariants() {
        assert!(SearchConfig::shortest().validate().is_ok());
        assert!(SearchConfig::longest(5).validate().is_ok());
        let mut c = SearchConfig::longest(5);
        c.max_steps = None;
        assert_eq!(c.validate(), Err(ConfigError::LongestNeedsMax));
        let c = SearchConfig::longest(5).with_hints(Hints::ALL);
        assert_eq!(c.validate(), Err(ConfigError::LongestForbidsTokenHints));
        let mut c = SearchConfig::longest(5);
        c.no_loop = false;
        assert_eq!(c.validate(), Err(ConfigError::LongestNeedsNoLoop));
    }

    #[test]
    fn hints_parse_and_print() {
        assert_eq!("none".parse::<Hints>().unwrap(), Hints::NONE);
        assert_eq!("d1,d2,h".parse::<Hints>().unwrap(), Hints::LONGEST_DEFAULT);
        assert_eq!(Hints::LONGEST_DEFAULT.to_string(), "d1,d2,h");
        assert!("d3".parse::<Hints>().is_err());
        assert_eq!(Hints::all_subsets().count(), 32);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn state() -> impl Strategy<Value = TokenState> {
            proptest::collection::btree_set(1u32..12, 3).prop_map(TokenState::new)
        }

        proptest! {
            #[test]
            fn token_jump_is_symmetric(a in state(), b in state()) {
                prop_assert_eq!(is_token_jump(&a, &b), is_token_jump(&b, &a));
            }

            #[test]
            fn canonical_equality(mut v in proptest::collection::vec(1u32..20, 0..8)) {
                let a = TokenState::new(v.clone());
                v.reverse();
                let b = TokenState::new(v);
                prop_assert_eq!(&a, &b);
                prop_assert!(a.nodes().windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}
