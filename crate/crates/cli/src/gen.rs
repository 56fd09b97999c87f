//! Synthetic network generators and per-instance randomization.
//!
//! Every function here is a pure function of (parameters, seed). Per-vertex
//! draws use stream splitting: the master seed and a stream id are mixed
//! through splitmix64 into an independent ChaCha8 stream, so the draw for
//! vertex v does not depend on the order vertices are visited in.

use anticoord_core::{Configuration, Graph, Mode};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorSpec {
    /// Erdos-Renyi: each of the C(n,2) pairs is an edge with probability p.
    Gnp { n: usize, p: f64 },
    /// Preferential attachment seeded from a clique on `attach_count`
    /// vertices; each later vertex attaches to `attach_count` distinct
    /// earlier vertices chosen proportionally to degree.
    BarabasiAlbert { n: usize, attach_count: usize },
    /// Ring lattice (each vertex linked to its k/2 nearest neighbors on each
    /// side) with independent per-edge rewiring of the far endpoint.
    WattsStrogatz { n: usize, k: usize, rewire_prob: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenError {
    InvalidParams(String),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::InvalidParams(msg) => write!(f, "invalid generator parameters: {}", msg),
        }
    }
}

impl std::error::Error for GenError {}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Independent RNG for (seed, stream). Streams with distinct ids are
/// decorrelated regardless of creation order.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed) ^ splitmix64(stream.wrapping_mul(0xA076_1D64_78BD_642F)))
}

const STREAM_EDGES: u64 = 1;
const STREAM_THRESHOLDS: u64 = 2;
const STREAM_CONFIG: u64 = 3;

pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<Graph, GenError> {
    match *spec {
        GeneratorSpec::Gnp { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(GenError::InvalidParams(format!("p = {} outside [0, 1]", p)));
            }
            if n == 0 {
                return Err(GenError::InvalidParams("n must be positive".into()));
            }
            let mut rng = stream_rng(seed, STREAM_EDGES);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Ok(Graph::undirected(n, edges).expect("gnp is simple"))
        }
        GeneratorSpec::BarabasiAlbert { n, attach_count } => {
            let a = attach_count;
            if a < 1 {
                return Err(GenError::InvalidParams("attach_count must be >= 1".into()));
            }
            if n < a + 1 {
                return Err(GenError::InvalidParams(format!(
                    "n = {} too small for attach_count = {}",
                    n, a
                )));
            }
            let mut rng = stream_rng(seed, STREAM_EDGES);
            let mut edges: Vec<(usize, usize)> = Vec::new();
            // Urn of edge endpoints: vertex multiplicity equals its degree.
            let mut urn: Vec<usize> = Vec::new();
            for u in 0..a {
                for v in (u + 1)..a {
                    edges.push((u, v));
                    urn.push(u);
                    urn.push(v);
                }
            }
            if a == 1 {
                // Degenerate clique K1 has an empty urn; let the first
                // attachment pick vertex 0 directly.
                urn.push(0);
            }
            for v in a..n {
                let mut targets: Vec<usize> = Vec::with_capacity(a);
                while targets.len() < a {
                    let t = urn[rng.random_range(0..urn.len())];
                    if !targets.contains(&t) {
                        targets.push(t);
                    }
                }
                for &t in &targets {
                    edges.push((t.min(v), t.max(v)));
                    urn.push(t);
                    urn.push(v);
                }
            }
            edges.sort_unstable();
            Ok(Graph::undirected(n, edges).expect("ba is simple"))
        }
        GeneratorSpec::WattsStrogatz { n, k, rewire_prob } => {
            if k % 2 != 0 || k >= n {
                return Err(GenError::InvalidParams(format!(
                    "k = {} must be even and < n = {}",
                    k, n
                )));
            }
            if !(0.0..=1.0).contains(&rewire_prob) {
                return Err(GenError::InvalidParams(format!(
                    "rewire_prob = {} outside [0, 1]",
                    rewire_prob
                )));
            }
            let mut rng = stream_rng(seed, STREAM_EDGES);
            let mut present: Vec<(usize, usize)> = Vec::new();
            let has = |present: &Vec<(usize, usize)>, a: usize, b: usize| {
                present.contains(&(a.min(b), a.max(b)))
            };
            for j in 1..=k / 2 {
                for i in 0..n {
                    let far = (i + j) % n;
                    // An earlier rewire may already occupy this slot; then
                    // the lattice edge must move somewhere else to keep the
                    // edge count at n*k/2.
                    let must_move = has(&present, i, far);
                    let target = if must_move || rng.random_bool(rewire_prob) {
                        // Rewire the far endpoint; fall back to the lattice
                        // edge if no legal target shows up within the retry
                        // budget.
                        let mut picked = far;
                        for _ in 0..8 * n {
                            let t = rng.random_range(0..n);
                            if t != i && !has(&present, i, t) {
                                picked = t;
                                break;
                            }
                        }
                        picked
                    } else {
                        far
                    };
                    if !has(&present, i, target) {
                        present.push((i.min(target), i.max(target)));
                    }
                }
            }
            present.sort_unstable();
            Ok(Graph::undirected(n, present).expect("ws is simple"))
        }
    }
}

/// Per-vertex uniform threshold draw: [1, d+1] for SE, [1, d] for SN.
/// Isolated vertices under SN have an empty range; they get 1 and a warning.
pub fn random_thresholds(graph: &Graph, mode: Mode, seed: u64) -> (Vec<usize>, Vec<String>) {
    let mut warnings = Vec::new();
    let tau = (0..graph.n())
        .map(|v| {
            let d = graph.degree(v);
            let hi = match mode {
                Mode::SelfEssential => d + 1,
                Mode::SelfNonEssential => {
                    if d == 0 {
                        warnings.push(format!("vertex {} is isolated; threshold forced to 1", v));
                        1
                    } else {
                        d
                    }
                }
            };
            stream_rng(seed, STREAM_THRESHOLDS ^ ((v as u64) << 8)).random_range(1..=hi)
        })
        .collect();
    (tau, warnings)
}

/// Independent per-vertex initial state: 0 with probability `p_zero`.
pub fn random_config(n: usize, p_zero: f64, seed: u64) -> Result<Configuration, GenError> {
    if !(0.0..=1.0).contains(&p_zero) {
        return Err(GenError::InvalidParams(format!(
            "p_zero = {} outside [0, 1]",
            p_zero
        )));
    }
    let states = (0..n)
        .map(|v| {
            let zero = stream_rng(seed, STREAM_CONFIG ^ ((v as u64) << 8)).random_bool(p_zero);
            if zero {
                0u8
            } else {
                1u8
            }
        })
        .collect();
    Ok(Configuration::new(states).expect("binary states"))
}
