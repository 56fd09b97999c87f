//! Brute-force phase-space oracle for small instances.
//!
//! Configurations are swept as ascending integer bit patterns with vertex 0
//! at the least significant bit. Local functions are evaluated with
//! per-vertex input bitmasks and popcounts, which must (and is tested to)
//! agree with the naive per-vertex evaluation.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::system::{Configuration, Mode, ThresholdSystem};

pub const DEFAULT_FP_LIMIT: usize = 25;
pub const DEFAULT_CYCLE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumError {
    OverBudget { n: usize, n_limit: usize },
}

impl fmt::Display for EnumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EnumError::OverBudget { n, n_limit } => {
                write!(f, "instance has {} vertices, over the enumeration budget of {}", n, n_limit)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseSpaceSummary {
    pub num_fixed_points: u64,
    pub fixed_points: Vec<Configuration>,
    /// Cycle length -> number of cycles; filled by the cycle scan only.
    pub cycle_length_histogram: BTreeMap<usize, usize>,
    pub configs_scanned: u64,
}

/// Per-vertex input masks and thresholds, precomputed for word-wise scans.
/// Usable for n <= 63.
pub struct MaskTables {
    n: usize,
    inputs: Vec<u64>,
    tau1: Vec<u32>,
}

impl MaskTables {
    pub fn new(system: &ThresholdSystem) -> Self {
        let n = system.n();
        assert!(n <= 63, "mask tables require n <= 63");
        let se = system.mode() == Mode::SelfEssential;
        let inputs = (0..n)
            .map(|v| {
                let mut mask = if se { 1u64 << v } else { 0 };
                for &u in system.graph().neighbors(v) {
                    mask |= 1u64 << u;
                }
                mask
            })
            .collect();
        let tau1 = (0..n).map(|v| system.tau1(v) as u32).collect();
        MaskTables { n, inputs, tau1 }
    }

    #[inline]
    pub fn next_state(&self, config: u64, v: usize) -> u64 {
        ((!config & self.inputs[v]).count_ones() >= self.tau1[v]) as u64
    }

    #[inline]
    pub fn is_fixed_point(&self, config: u64) -> bool {
        (0..self.n).all(|v| self.next_state(config, v) == (config >> v) & 1)
    }

    #[inline]
    pub fn step_sync(&self, config: u64) -> u64 {
        (0..self.n).fold(0u64, |acc, v| acc | (self.next_state(config, v) << v))
    }
}

/// Count fixed points among bit patterns in `[start, end)`. Building block
/// for partitioned parallel scans.
pub fn count_fixed_points_in_range(system: &ThresholdSystem, start: u64, end: u64) -> u64 {
    let tables = MaskTables::new(system);
    (start..end).filter(|&c| tables.is_fixed_point(c)).count() as u64
}

/// Exhaustive fixed-point enumeration over all 2^n configurations. The
/// result is scheme-agnostic: synchronous and sequential dynamics share one
/// fixed-point set.
pub fn enumerate_fixed_points(
    system: &ThresholdSystem,
    n_limit: usize,
) -> Result<PhaseSpaceSummary, EnumError> {
    let n = system.n();
    if n > n_limit {
        return Err(EnumError::OverBudget { n, n_limit });
    }
    let tables = MaskTables::new(system);
    let total = 1u64 << n;
    let mut fixed_points = Vec::new();
    for c in 0..total {
        if tables.is_fixed_point(c) {
            fixed_points.push(Configuration::from_bits(c, n));
        }
    }
    Ok(PhaseSpaceSummary {
        num_fixed_points: fixed_points.len() as u64,
        fixed_points,
        cycle_length_histogram: BTreeMap::new(),
        configs_scanned: total,
    })
}

/// Exhaustive limit-cycle census of the synchronous map, treated as a
/// functional graph on 2^n nodes. For threshold systems the histogram may
/// only contain lengths 1 and 2; the engine reports whatever it finds so
/// that property is checkable from outside.
pub fn enumerate_sync_cycles(
    system: &ThresholdSystem,
    n_limit: usize,
) -> Result<PhaseSpaceSummary, EnumError> {
    let n = system.n();
    if n > n_limit {
        return Err(EnumError::OverBudget { n, n_limit });
    }
    let tables = MaskTables::new(system);
    let total = 1u64 << n;
    // 0 = unvisited, 1 = on the current walk, 2 = finished.
    let mut color = alloc::vec![0u8; total as usize];
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut fixed_points = Vec::new();
    let mut path: Vec<u64> = Vec::new();
    for start in 0..total {
        if color[start as usize] != 0 {
            continue;
        }
        path.clear();
        let mut x = start;
        while color[x as usize] == 0 {
            color[x as usize] = 1;
            path.push(x);
            x = tables.step_sync(x);
        }
        if color[x as usize] == 1 {
            // x is on the current walk: the tail from its position is a new
            // cycle.
            let pos = path.iter().rposition(|&y| y == x).expect("on-walk node");
            let len = path.len() - pos;
            *histogram.entry(len).or_insert(0) += 1;
            if len == 1 {
                fixed_points.push(Configuration::from_bits(x, n));
            }
        }
        for &y in &path {
            color[y as usize] = 2;
        }
    }
    fixed_points.sort();
    Ok(PhaseSpaceSummary {
        num_fixed_points: fixed_points.len() as u64,
        fixed_points,
        cycle_length_histogram: histogram,
        configs_scanned: total,
    })
}

/// Fixed-point counts for a batch of instances; over-budget entries are
/// reported per-instance rather than failing the batch.
pub fn count_ne_batch(
    instances: &[ThresholdSystem],
    n_limit: usize,
) -> Vec<Result<u64, EnumError>> {
    instances
        .iter()
        .map(|sys| enumerate_fixed_points(sys, n_limit).map(|s| s.num_fixed_points))
        .collect()
}
