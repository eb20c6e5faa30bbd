#![allow(dead_code)]

use std::ops::RangeInclusive;
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use reconf_core::model::{Graph, IsrpInstance, NodeId};
use reconf_core::oracle::{build_reconfig_graph, enumerate_states, ReconfigGraph};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// Random graph with `n <= max_n` nodes and edge density in 0.1..0.5, with
/// start and goal drawn from its size-k independent sets. A third of the
/// draws put the goal outside the start's component when there is one.
pub fn random_instance(rng: &mut StdRng, max_n: u32, max_k: usize) -> IsrpInstance {
    random_instance_in(rng, 1..=max_n, 1..=max_k, 0.1..=0.5, 1.0 / 3.0)
}

/// Dense graphs with many tokens, where the state space often splits; the
/// goal is then always taken from another component.
pub fn fragmented_instance(rng: &mut StdRng) -> IsrpInstance {
    random_instance_in(rng, 8..=12, 3..=4, 0.4..=0.5, 1.0)
}

pub fn random_instance_in(
    rng: &mut StdRng,
    nodes: RangeInclusive<u32>,
    tokens: RangeInclusive<usize>,
    density: RangeInclusive<f64>,
    split: f64,
) -> IsrpInstance {
    loop {
        let n = rng.gen_range(nodes.clone());
        let k = rng.gen_range(tokens.clone()).min(n as usize);
        let density = rng.gen_range(density.clone());
        let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                if rng.gen_bool(density) {
                    edges.push((u, v));
                }
            }
        }
        let graph = Graph::new(1..=n, edges).unwrap();
        let Some(seed_state) = first_state(&graph, k) else { continue };
        let probe = IsrpInstance::new(graph.clone(), k, seed_state.clone(), seed_state).unwrap();
        let rg = build_reconfig_graph(enumerate_states(&probe, 1_000_000).unwrap());
        let comp = components(&rg);
        let n_states = rg.states.len();
        let s = rng.gen_range(0..n_states);
        let mut g = rng.gen_range(0..n_states);
        if rng.gen_bool(split) {
            let others: Vec<usize> = (0..n_states).filter(|&i| comp[i] != comp[s]).collect();
            if !others.is_empty() {
                g = others[rng.gen_range(0..others.len())];
            }
        }
        let (start, goal) = (rg.states[s].clone(), rg.states[g].clone());
        return IsrpInstance::new(graph, k, start, goal).unwrap();
    }
}

fn components(rg: &ReconfigGraph) -> Vec<usize> {
    let mut comp = vec![usize::MAX; rg.states.len()];
    let mut next = 0;
    for root in 0..rg.states.len() {
        if comp[root] != usize::MAX {
            continue;
        }
        let mut stack = vec![root];
        comp[root] = next;
        while let Some(u) = stack.pop() {
            for &v in &rg.adjacency[u] {
                if comp[v] == usize::MAX {
                    comp[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Some size-k independent set, used only to seed the enumeration.
fn first_state(graph: &Graph, k: usize) -> Option<reconf_core::TokenState> {
    let n = graph.node_count();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .find(|&m| {
            graph
                .dense_edges()
                .iter()
                .all(|&(a, b)| m >> a & 1 == 0 || m >> b & 1 == 0)
        })
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| graph.id_of(i)).collect())
}

/// Alternates [`random_instance`] and [`fragmented_instance`] draws.
pub fn suite(seed: u64, count: usize, max_n: u32, max_k: usize) -> Vec<IsrpInstance> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                random_instance(&mut rng, max_n, max_k)
            } else {
                fragmented_instance(&mut rng)
            }
        })
        .collect()
}
