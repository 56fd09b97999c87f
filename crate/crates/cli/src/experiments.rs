//! Experiment harness: trial grids over generated or loaded instances, with
//! deterministic seeding, a capped worker pool, and CSV/JSON emission.
//!
//! Determinism contract: a result is a pure function of the plan (including
//! the master seed). Trials run on a rayon pool (capped by the
//! ANTICOORD_THREADS env var) and are merged in (instance, seed) order, so
//! completion order never shows through.

use crate::gen::{self, GeneratorSpec};
use anticoord_core::enumerate::{enumerate_fixed_points, EnumError};
use anticoord_core::{simulate, Mode, Permutation, Scheme, Terminal, ThresholdSystem};
use rand::prelude::*;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub enum ExperimentError {
    InvalidParams(String),
    Budget(String),
}

impl fmt::Display for ExperimentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExperimentError::InvalidParams(msg) => write!(f, "invalid parameters: {}", msg),
            ExperimentError::Budget(msg) => write!(f, "budget exceeded: {}", msg),
        }
    }
}

impl std::error::Error for ExperimentError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Sync,
    Seq,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeKind::Sync => write!(f, "sync"),
            SchemeKind::Seq => write!(f, "seq"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub instance: usize,
    pub seed: u64,
    pub mode: String,
    pub scheme: String,
    pub p_zero: f64,
    pub steps: usize,
    pub terminal: String,
    pub avg_flip_rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub degree: usize,
    pub mode: String,
    pub mean_steps: f64,
    pub stdev_steps: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Aggregates {
    pub runs: usize,
    pub mean_steps: f64,
    pub max_steps: usize,
    pub terminal_counts: BTreeMap<String, usize>,
}

/// One experiment's full output. `command` carries the provenance (the exact
/// invocation including seeds) so the JSON sidecar is self-describing.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub command: String,
    pub seed: u64,
    pub records: Vec<RunRecord>,
    pub sweep_rows: Vec<SweepRow>,
    /// Per-mode map: fixed-point count -> number of (instance, draw) pairs.
    pub ne_histograms: BTreeMap<String, BTreeMap<u64, usize>>,
    pub aggregates: Aggregates,
}

impl ExperimentResult {
    fn new(command: String, seed: u64) -> Self {
        ExperimentResult {
            command,
            seed,
            records: Vec::new(),
            sweep_rows: Vec::new(),
            ne_histograms: BTreeMap::new(),
            aggregates: Aggregates::default(),
        }
    }

    fn finish(mut self) -> Self {
        self.records
            .sort_by(|a, b| (a.instance, a.seed).cmp(&(b.instance, b.seed)));
        let runs = self.records.len();
        if runs > 0 {
            let total: usize = self.records.iter().map(|r| r.steps).sum();
            self.aggregates.mean_steps = total as f64 / runs as f64;
            self.aggregates.max_steps = self.records.iter().map(|r| r.steps).max().unwrap_or(0);
        }
        self.aggregates.runs = runs;
        for r in &self.records {
            *self
                .aggregates
                .terminal_counts
                .entry(r.terminal.clone())
                .or_insert(0) += 1;
        }
        self
    }

    /// CSV with a fixed column order. Simulation records, sweep rows, and
    /// NE histograms use distinct headers; whichever section is populated
    /// is emitted.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if !self.records.is_empty() {
            out.push_str("instance,seed,mode,scheme,p_zero,steps,terminal,avg_flip_rate\n");
            for r in &self.records {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.instance, r.seed, r.mode, r.scheme, r.p_zero, r.steps, r.terminal, r.avg_flip_rate
                ));
            }
        } else if !self.sweep_rows.is_empty() {
            out.push_str("degree,mode,mean_steps,stdev_steps\n");
            for r in &self.sweep_rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.degree, r.mode, r.mean_steps, r.stdev_steps
                ));
            }
        } else if !self.ne_histograms.is_empty() {
            out.push_str("mode,ne_count,instances\n");
            for (mode, hist) in &self.ne_histograms {
                for (count, num) in hist {
                    out.push_str(&format!("{},{},{}\n", mode, count, num));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serializes");
        s.push('\n');
        s
    }
}

/// Run `f` on a rayon pool sized from ANTICOORD_THREADS (global pool when
/// unset or unparsable).
pub fn with_worker_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var("ANTICOORD_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1);
    match cap {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("worker pool")
            .install(f),
        None => f(),
    }
}

fn terminal_name(t: &Terminal) -> &'static str {
    match t {
        Terminal::FixedPoint(_) => "fixed_point",
        Terminal::TwoCycle(_, _) => "two_cycle",
        Terminal::LongCycle { .. } => "long_cycle",
        Terminal::Unconverged => "unconverged",
    }
}

fn sub_seed(master: u64, a: u64, b: u64, c: u64) -> u64 {
    gen::stream_rng(master, 0x5eed ^ (a << 40) ^ (b << 20) ^ c).random()
}

#[derive(Debug, Clone)]
pub struct SimulatePlan {
    /// Instances to exercise, tagged with stable ids for the records.
    pub systems: Vec<(usize, ThresholdSystem)>,
    pub scheme: SchemeKind,
    pub p_zero_grid: Vec<f64>,
    /// Initial-configuration draws per (instance, p_zero) cell.
    pub trials: usize,
    pub seed: u64,
    pub max_steps: Option<usize>,
    pub command: String,
}

pub fn run_simulate(plan: &SimulatePlan) -> Result<ExperimentResult, ExperimentError> {
    if plan.trials == 0 {
        return Err(ExperimentError::InvalidParams("trials must be >= 1".into()));
    }
    for &p in &plan.p_zero_grid {
        if !(0.0..=1.0).contains(&p) {
            return Err(ExperimentError::InvalidParams(format!(
                "p_zero = {} outside [0, 1]",
                p
            )));
        }
    }
    let mut jobs: Vec<(usize, &ThresholdSystem, f64, u64)> = Vec::new();
    for (id, sys) in &plan.systems {
        for (pi, &p_zero) in plan.p_zero_grid.iter().enumerate() {
            for t in 0..plan.trials {
                let seed = sub_seed(plan.seed, *id as u64, pi as u64, t as u64);
                jobs.push((*id, sys, p_zero, seed));
            }
        }
    }
    let scheme_kind = plan.scheme;
    let records: Vec<RunRecord> = with_worker_pool(|| {
        jobs.par_iter()
            .map(|&(id, sys, p_zero, seed)| {
                let initial = gen::random_config(sys.n(), p_zero, seed).expect("valid p_zero");
                let scheme = match scheme_kind {
                    SchemeKind::Sync => Scheme::Synchronous,
                    SchemeKind::Seq => {
                        let mut order: Vec<usize> = (0..sys.n()).collect();
                        order.shuffle(&mut gen::stream_rng(seed, 0x9e57));
                        Scheme::Sequential(Permutation::new(order).expect("permutation"))
                    }
                };
                let max_steps = plan
                    .max_steps
                    .unwrap_or_else(|| anticoord_core::dynamics::default_max_steps(sys, &scheme));
                let trace = simulate(sys, &scheme, &initial, max_steps).expect("simulate");
                let flip = anticoord_core::avg_flip_rate(&trace)
                    .map(|f| f.mean())
                    .unwrap_or(f64::NAN);
                RunRecord {
                    instance: id,
                    seed,
                    mode: sys.mode().to_string(),
                    scheme: scheme_kind.to_string(),
                    p_zero,
                    steps: trace.steps_taken,
                    terminal: terminal_name(&trace.terminal).to_string(),
                    avg_flip_rate: flip,
                }
            })
            .collect()
    });
    let mut result = ExperimentResult::new(plan.command.clone(), plan.seed);
    result.records = records;
    Ok(result.finish())
}

pub fn run_density_sweep(
    n: usize,
    degrees: &[usize],
    modes: &[Mode],
    trials: usize,
    seed: u64,
    command: String,
) -> Result<ExperimentResult, ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::InvalidParams("trials must be >= 1".into()));
    }
    for &d in degrees {
        if d == 0 || d >= n {
            return Err(ExperimentError::InvalidParams(format!(
                "degree {} must be in [1, n-1]",
                d
            )));
        }
    }
    let mut jobs: Vec<(usize, Mode, usize)> = Vec::new();
    for &d in degrees {
        for &mode in modes {
            for t in 0..trials {
                jobs.push((d, mode, t));
            }
        }
    }
    let samples: Vec<(usize, Mode, usize)> = with_worker_pool(|| {
        jobs.par_iter()
            .map(|&(d, mode, t)| {
                let s = sub_seed(seed, d as u64, mode as u64, t as u64);
                let p = d as f64 / (n - 1) as f64;
                let graph = gen::generate(&GeneratorSpec::Gnp { n, p }, s).expect("gnp");
                let (tau, _) = gen::random_thresholds(&graph, mode, s ^ 1);
                let sys = ThresholdSystem::new(graph, tau, mode).expect("system");
                let initial = gen::random_config(n, 0.5, s ^ 2).expect("config");
                let scheme = Scheme::Synchronous;
                let max =
                    anticoord_core::dynamics::default_max_steps(&sys, &scheme);
                let trace = simulate(&sys, &scheme, &initial, max).expect("simulate");
                (d, mode, trace.steps_taken)
            })
            .collect()
    });
    let mut rows = Vec::new();
    for &d in degrees {
        for &mode in modes {
            let steps: Vec<f64> = samples
                .iter()
                .filter(|&&(sd, sm, _)| sd == d && sm == mode)
                .map(|&(_, _, s)| s as f64)
                .collect();
            let mean = steps.iter().sum::<f64>() / steps.len() as f64;
            let var = steps.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / steps.len() as f64;
            rows.push(SweepRow {
                degree: d,
                mode: mode.to_string(),
                mean_steps: mean,
                stdev_steps: var.sqrt(),
            });
        }
    }
    let mut result = ExperimentResult::new(command, seed);
    result.sweep_rows = rows;
    Ok(result.finish())
}

/// Enumeration cap for count-ne batches; larger instances must go through
/// the special-case solvers instead.
pub const COUNT_NE_N_LIMIT: usize = 20;

pub fn run_count_ne(
    num_instances: usize,
    n: usize,
    avg_degree: usize,
    threshold_draws: usize,
    modes: &[Mode],
    seed: u64,
    command: String,
) -> Result<ExperimentResult, ExperimentError> {
    if n > COUNT_NE_N_LIMIT {
        return Err(ExperimentError::Budget(format!(
            "n = {} exceeds the enumeration cap {}",
            n, COUNT_NE_N_LIMIT
        )));
    }
    if n < 2 || avg_degree == 0 || avg_degree >= n {
        return Err(ExperimentError::InvalidParams(format!(
            "need 2 <= n <= {} and 1 <= avg_degree < n",
            COUNT_NE_N_LIMIT
        )));
    }
    let mut jobs: Vec<(usize, usize, Mode)> = Vec::new();
    for i in 0..num_instances {
        for j in 0..threshold_draws {
            for &mode in modes {
                jobs.push((i, j, mode));
            }
        }
    }
    let p = avg_degree as f64 / (n - 1) as f64;
    let counts: Vec<(Mode, u64)> = with_worker_pool(|| {
        jobs.par_iter()
            .map(|&(i, j, mode)| {
                let graph_seed = sub_seed(seed, i as u64, 0, 0);
                let graph = gen::generate(&GeneratorSpec::Gnp { n, p }, graph_seed).expect("gnp");
                let (tau, _) =
                    gen::random_thresholds(&graph, mode, sub_seed(seed, i as u64, 1, j as u64));
                let sys = ThresholdSystem::new(graph, tau, mode).expect("system");
                let count = enumerate_fixed_points(&sys, COUNT_NE_N_LIMIT)
                    .map(|s| s.num_fixed_points)
                    .map_err(|e| match e {
                        EnumError::OverBudget { n, n_limit } => ExperimentError::Budget(format!(
                            "n = {} exceeds the enumeration cap {}",
                            n, n_limit
                        )),
                    })
                    .expect("within checked cap");
                (mode, count)
            })
            .collect()
    });
    let mut result = ExperimentResult::new(command, seed);
    for (mode, count) in counts {
        *result
            .ne_histograms
            .entry(mode.to_string())
            .or_default()
            .entry(count)
            .or_insert(0) += 1;
    }
    Ok(result.finish())
}
