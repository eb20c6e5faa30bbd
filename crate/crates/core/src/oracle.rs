//! Brute-force ground truth over the explicit space of feasible states.
//!
//! Only usable on small instances; every operation refuses, rather than
//! approximates, once its budget is spent.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::model::{is_token_jump, IsrpInstance, ReconfigSequence, TokenState};

/// Default cap on visited partial subsets during enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;
/// Default cap on node expansions of the longest-path search.
pub const DEFAULT_EXPANSION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("state enumeration exceeded the cap of {cap} partial subsets")]
    CapacityExceeded { cap: u64 },
    #[error("{0} state is not a feasible state of the instance")]
    NotAState(&'static str),
    #[error("longest-path search exhausted its budget of {budget} expansions")]
    BudgetExhausted { budget: u64 },
}

/// All size-k independent sets, in ascending lexicographic order.
pub fn enumerate_states(instance: &IsrpInstance, cap: u64) -> Result<Vec<TokenState>, OracleError> {
    let graph = instance.graph();
    let n = graph.node_count();
    let k = instance.k();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut visited = 0u64;

    // Depth-first over increasing dense indices; a node is only added when
    // it has no neighbor among the chosen ones.
    #[allow(clippy::too_many_arguments)]
    fn extend(
        next: usize,
        n: usize,
        k: usize,
        chosen: &mut Vec<usize>,
        visited: &mut u64,
        cap: u64,
        instance: &IsrpInstance,
        out: &mut Vec<TokenState>,
    ) -> Result<(), OracleError> {
        *visited += 1;
        if *visited > cap {
            return Err(OracleError::CapacityExceeded { cap });
        }
        if chosen.len() == k {
            let g = instance.graph();
            out.push(TokenState::new(chosen.iter().map(|&i| g.id_of(i))));
            return Ok(());
        }
        let remaining = k - chosen.len();
        for v in next..n {
            if n - v < remaining {
                break;
            }
            if chosen.iter().any(|&c| instance.graph().adjacent_dense(c, v)) {
                continue;
            }
            chosen.push(v);
            extend(v + 1, n, k, chosen, visited, cap, instance, out)?;
            chosen.pop();
        }
        Ok(())
    }

    extend(0, n, k, &mut chosen, &mut visited, cap, instance, &mut out)?;
    Ok(out)
}

/// Number of feasible states.
pub fn count_states(instance: &IsrpInstance, cap: u64) -> Result<usize, OracleError> {
    enumerate_states(instance, cap).map(|s| s.len())
}

/// The reconfiguration graph: feasible states joined by token jumps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconfigGraph {
    pub states: Vec<TokenState>,
    pub adjacency: Vec<Vec<usize>>,
}

impl ReconfigGraph {
    pub fn index_of(&self, state: &TokenState) -> Option<usize> {
        self.states.binary_search(state).ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().copied().filter(move |&b| a < b).map(move |b| (a, b)))
    }
}

/// Joins every pair of states one token jump apart. `states` must be
/// sorted (as returned by [`enumerate_states`]).
pub fn build_reconfig_graph(states: Vec<TokenState>) -> ReconfigGraph {
    let n = states.len();
    let mut adjacency = vec![Vec::new(); n];
    for a in 0..n {
        for b in a + 1..n {
            if is_token_jump(&states[a], &states[b]) {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
    }
    ReconfigGraph { states, adjacency }
}

fn endpoints(instance: &IsrpInstance, graph: &ReconfigGraph) -> Result<(usize, usize), OracleError> {
    let s = graph.index_of(instance.start()).ok_or(OracleError::NotAState("start"))?;
    let g = graph.index_of(instance.goal()).ok_or(OracleError::NotAState("goal"))?;
    Ok((s, g))
}

/// Breadth-first distance from start to goal with one witness path.
pub fn bfs_shortest(instance: &IsrpInstance, cap: u64) -> Result<Option<(usize, ReconfigSequence)>, OracleError> {
    let graph = build_reconfig_graph(enumerate_states(instance, cap)?);
    bfs_in(instance, &graph)
}

/// [`bfs_shortest`] over an already built graph.
pub fn bfs_in(instance: &IsrpInstance, graph: &ReconfigGraph) -> Result<Option<(usize, ReconfigSequence)>, OracleError> {
    let (start, goal) = endpoints(instance, graph)?;
    let mut parent = vec![usize::MAX; graph.states.len()];
    parent[start] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        if u == goal {
            let mut path = vec![u];
            let mut cur = u;
            while cur != start {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            let len = path.len() - 1;
            let seq = ReconfigSequence::new(path.into_iter().map(|i| graph.states[i].clone()).collect());
            return Ok(Some((len, seq)));
        }
        for &v in &graph.adjacency[u] {
            if parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    Ok(None)
}

/// Exact longest loop-free path from start to goal, by exhaustive DFS.
///
/// `Ok(None)` means the goal is unreachable. Running out of `budget`
/// expansions is an error, never a partial answer.
pub fn longest_simple_path(
    instance: &IsrpInstance,
    cap: u64,
    budget: u64,
) -> Result<Option<(usize, ReconfigSequence)>, OracleError> {
    let graph = build_reconfig_graph(enumerate_states(instance, cap)?);
    longest_in(instance, &graph, budget)
}

/// [`longest_simple_path`] over an already built graph.
pub fn longest_in(
    instance: &IsrpInstance,
    graph: &ReconfigGraph,
    budget: u64,
) -> Result<Option<(usize, ReconfigSequence)>, OracleError> {
    let (start, goal) = endpoints(instance, graph)?;
    let n = graph.states.len();
    let mut search = LongestSearch {
        graph,
        goal,
        on_path: vec![false; n],
        path: vec![start],
        best: None,
        expansions: 0,
        budget,
        mark: vec![0; n],
        epoch: 0,
    };
    search.on_path[start] = true;
    search.dfs(start)?;
    Ok(search.best.map(|p| {
        let len = p.len() - 1;
        (len, ReconfigSequence::new(p.into_iter().map(|i| graph.states[i].clone()).collect()))
    }))
}

struct LongestSearch<'a> {
    graph: &'a ReconfigGraph,
    goal: usize,
    on_path: Vec<bool>,
    path: Vec<usize>,
    best: Option<Vec<usize>>,
    expansions: u64,
    budget: u64,
    mark: Vec<u32>,
    epoch: u32,
}

impl LongestSearch<'_> {
    /// Size of the region reachable from `from` avoiding the current path,
    /// if it contains the goal.
    fn reachable_region(&mut self, from: usize) -> Option<usize> {
        self.epoch += 1;
        let epoch = self.epoch;
        let mut stack = vec![from];
        self.mark[from] = epoch;
        let mut size = 0;
        let mut found = false;
        while let Some(u) = stack.pop() {
            size += 1;
            found |= u == self.goal;
            for &v in &self.graph.adjacency[u] {
                if !self.on_path[v] && self.mark[v] != epoch {
                    self.mark[v] = epoch;
                    stack.push(v);
                }
            }
        }
        found.then_some(size)
    }

    fn dfs(&mut self, u: usize) -> Result<(), OracleError> {
        self.expansions += 1;
        if self.expansions > self.budget {
            return Err(OracleError::BudgetExhausted { budget: self.budget });
        }
        if u == self.goal {
            if self.best.as_ref().is_none_or(|b| b.len() < self.path.len()) {
                self.best = Some(self.path.clone());
            }
            return Ok(());
        }
        for i in 0..self.graph.adjacency[u].len() {
            let v = self.graph.adjacency[u][i];
            if self.on_path[v] {
                continue;
            }
            // Prune branches that cannot reach the goal, or cannot beat the
            // best path even by visiting every reachable state.
            self.on_path[v] = true;
            let region = if v == self.goal { Some(1) } else { self.reachable_region(v) };
            self.on_path[v] = false;
            let Some(region) = region else { continue };
            let best_len = self.best.as_ref().map_or(0, |b| b.len());
            if self.best.is_some() && self.path.len() + region <= best_len {
                continue;
            }
            self.on_path[v] = true;
            self.path.push(v);
            let r = self.dfs(v);
            self.path.pop();
            self.on_path[v] = false;
            r?;
        }
        Ok(())
    }
}
