//! Shared randomized-instance builders for the integration suites. All
//! generators are deterministic functions of the supplied RNG.

#![allow(dead_code)]

use anticoord_core::{Configuration, Graph, Mode, Permutation, ThresholdSystem};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gnp graph patched so no vertex is isolated (SN threshold ranges need
/// degree >= 1).
pub fn gnp_no_isolated(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    assert!(n >= 2);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let mut degree = vec![0usize; n];
    for &(u, v) in &edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    for v in 0..n {
        if degree[v] == 0 {
            let mut u = rng.random_range(0..n - 1);
            if u >= v {
                u += 1;
            }
            edges.push((v.min(u), v.max(u)));
            degree[v] += 1;
            degree[u] += 1;
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::undirected(n, edges).expect("simple graph")
}

/// Per-vertex threshold drawn uniformly from [1, d] (SN) or [1, d+1] (SE);
/// an SN vertex of degree 0 gets 1.
pub fn random_tau(graph: &Graph, mode: Mode, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..graph.n())
        .map(|v| {
            let d = graph.degree(v);
            let hi = match mode {
                Mode::SelfEssential => d + 1,
                Mode::SelfNonEssential => d.max(1),
            };
            rng.random_range(1..=hi)
        })
        .collect()
}

pub fn random_system(graph: Graph, mode: Mode, rng: &mut ChaCha8Rng) -> ThresholdSystem {
    let tau = random_tau(&graph, mode, rng);
    ThresholdSystem::new(graph, tau, mode).expect("valid system")
}

pub fn random_config(n: usize, rng: &mut ChaCha8Rng) -> Configuration {
    Configuration::new((0..n).map(|_| rng.random_range(0..=1u8)).collect()).expect("binary")
}

pub fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Permutation::new(order).expect("permutation")
}

/// Random graph whose biconnected components are single edges or odd
/// cycles: grow a tree, sometimes attaching a whole odd cycle at an
/// existing vertex.
pub fn random_cactus(target_n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut n = 1usize;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    while n < target_n {
        let anchor = rng.random_range(0..n);
        if rng.random_bool(0.45) && n + 2 <= target_n {
            // Attach an odd cycle of length 3 or 5 through the anchor.
            let len = if rng.random_bool(0.5) && n + 4 <= target_n { 5 } else { 3 };
            let fresh: Vec<usize> = (n..n + len - 1).collect();
            let mut ring = vec![anchor];
            ring.extend(&fresh);
            for i in 0..ring.len() {
                let a = ring[i];
                let b = ring[(i + 1) % ring.len()];
                edges.push((a.min(b), a.max(b)));
            }
            n += len - 1;
        } else {
            edges.push((anchor, n));
            n += 1;
        }
    }
    Graph::undirected(n, edges).expect("cactus is simple")
}

/// Random DAG on `n` vertices: each forward pair (i, j), i < j, gets an arc
/// with probability `p`.
pub fn random_dag(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::directed(n, edges).expect("dag is simple")
}

/// Fixed points of a small system as sorted bit patterns, via the oracle.
pub fn oracle_fp_bits(system: &ThresholdSystem) -> Vec<u64> {
    anticoord_core::enumerate::enumerate_fixed_points(system, 25)
        .expect("within budget")
        .fixed_points
        .iter()
        .map(|c| c.as_u64())
        .collect()
}
