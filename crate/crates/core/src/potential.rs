//! Executable convergence certificates: the sequential-SN potential and the
//! synchronous potential (both modes).
//!
//! The sequential potential assigns `tau0(u)` to a 0-state vertex, `tau1(u)`
//! to a 1-state vertex, and 1 to each monochromatic edge; every flipping
//! substep drops it by at least 1 and it lives in [0, 3m].
//!
//! The synchronous potential compares a configuration with its synchronous
//! successor: P = sum over edges of C(u)C'(v) + C(v)C'(u) minus sum over
//! vertices of (C(u)+C'(u))(tau0(u) - 1/2). Halves are kept exact by storing
//! doubled integers. Each step with C != C'' drops it by at least 1/2; it is
//! never positive. In SE mode a vertex additionally counts as a neighbor of
//! itself, which adds a C(u)C'(u) term to the edge sum and uses the SE tau0.

use alloc::vec::Vec;
use core::fmt;

use crate::dynamics::step_sync;
use crate::system::{Configuration, Mode, Permutation, SystemError, ThresholdSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialError {
    WrongMode,
    ConstantVertex(usize),
    System(SystemError),
}

impl fmt::Display for PotentialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialError::WrongMode => {
                write!(f, "the sequential potential is defined only for SN systems")
            }
            PotentialError::ConstantVertex(v) => {
                write!(f, "vertex {} has a constant local function; potential undefined", v)
            }
            PotentialError::System(e) => write!(f, "{}", e),
        }
    }
}

impl From<SystemError> for PotentialError {
    fn from(e: SystemError) -> Self {
        PotentialError::System(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SdsPotentialReport {
    pub vertex_sum: i64,
    pub edge_sum: i64,
    pub total: i64,
}

/// Synchronous potential, all fields doubled so half-integers stay exact:
/// `total_x2 = edge_sum_x2 - vertex_sum_x2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SydsPotentialReport {
    pub edge_sum_x2: i64,
    pub vertex_sum_x2: i64,
    pub total_x2: i64,
}

fn reject_constants(system: &ThresholdSystem) -> Result<(), PotentialError> {
    for v in 0..system.n() {
        if system.is_constant(v) {
            return Err(PotentialError::ConstantVertex(v));
        }
    }
    Ok(())
}

/// Sequential-SN potential of a configuration. Requires SN mode and no
/// constant vertices (tau1 in [1, d]).
pub fn sds_potential(
    system: &ThresholdSystem,
    config: &Configuration,
) -> Result<SdsPotentialReport, PotentialError> {
    if system.mode() != Mode::SelfNonEssential {
        return Err(PotentialError::WrongMode);
    }
    reject_constants(system)?;
    system.check_config(config)?;
    let mut vertex_sum = 0i64;
    for u in 0..system.n() {
        vertex_sum += if config.get(u) == 0 {
            system.tau0(u) as i64
        } else {
            system.tau1(u) as i64
        };
    }
    let mut edge_sum = 0i64;
    for &(u, v) in system.graph().edges() {
        if config.get(u) == config.get(v) {
            edge_sum += 1;
        }
    }
    Ok(SdsPotentialReport { vertex_sum, edge_sum, total: vertex_sum + edge_sum })
}

/// Upper bound 3m on the sequential potential.
pub fn sds_upper_bound(system: &ThresholdSystem) -> i64 {
    3 * system.m() as i64
}

/// Weak lower bound: sum of min(tau0, tau1) over vertices. (The exact bound
/// adds the minimum monochromatic-edge count over all bipartitions, which is
/// itself hard to compute, so only the vertex term is certified.)
pub fn sds_lower_bound(system: &ThresholdSystem) -> i64 {
    (0..system.n())
        .map(|u| core::cmp::min(system.tau0(u), system.tau1(u) as isize) as i64)
        .sum()
}

/// Synchronous potential of a configuration; its successor is computed
/// internally. Defined for both modes; constant vertices rejected.
pub fn syds_potential(
    system: &ThresholdSystem,
    config: &Configuration,
) -> Result<SydsPotentialReport, PotentialError> {
    reject_constants(system)?;
    let next = step_sync(system, config)?;
    syds_potential_with_successor(system, config, &next)
}

/// Same as [`syds_potential`] when the successor is already at hand.
pub fn syds_potential_with_successor(
    system: &ThresholdSystem,
    config: &Configuration,
    next: &Configuration,
) -> Result<SydsPotentialReport, PotentialError> {
    reject_constants(system)?;
    system.check_config(config)?;
    system.check_config(next)?;
    let mut vertex_sum_x2 = 0i64;
    for u in 0..system.n() {
        let occupancy = (config.get(u) + next.get(u)) as i64;
        // tau0 - 1/2, doubled.
        let tilde_tau0_x2 = 2 * system.tau0(u) as i64 - 1;
        vertex_sum_x2 += occupancy * tilde_tau0_x2;
    }
    let mut edge_sum_x2 = 0i64;
    for &(u, v) in system.graph().edges() {
        let p = (config.get(u) * next.get(v) + config.get(v) * next.get(u)) as i64;
        edge_sum_x2 += 2 * p;
    }
    if system.mode() == Mode::SelfEssential {
        // Self treated as a neighbor: one C(u)C'(u) term per vertex.
        for u in 0..system.n() {
            edge_sum_x2 += 2 * (config.get(u) * next.get(u)) as i64;
        }
    }
    Ok(SydsPotentialReport {
        edge_sum_x2,
        vertex_sum_x2,
        total_x2: edge_sum_x2 - vertex_sum_x2,
    })
}

/// Doubled lower bound on the synchronous potential: the edge sum is
/// nonnegative and each vertex contributes at most 2*(tau0_max - 1/2), which
/// works out to -(8m - 2n) for SN and -(8m + 2n) for SE (the self terms
/// raise the vertex budget by one per vertex).
pub fn syds_lower_bound_x2(system: &ThresholdSystem) -> i64 {
    let m = system.m() as i64;
    let n = system.n() as i64;
    match system.mode() {
        Mode::SelfNonEssential => -(8 * m - 2 * n),
        Mode::SelfEssential => -(8 * m + 2 * n),
    }
}

/// One sequential pass over `config` in `permutation` order, recording the
/// potential delta of every substep that flips a state. Each delta is <= -1.
pub fn check_decrease_seq(
    system: &ThresholdSystem,
    config: &Configuration,
    permutation: &Permutation,
) -> Result<Vec<i64>, PotentialError> {
    if system.mode() != Mode::SelfNonEssential {
        return Err(PotentialError::WrongMode);
    }
    reject_constants(system)?;
    system.check_config(config)?;
    if permutation.len() != system.n() {
        return Err(PotentialError::System(SystemError::InvalidPermutation));
    }
    let mut cur = config.clone();
    let mut before = sds_potential(system, &cur)?.total;
    let mut deltas = Vec::new();
    for &v in permutation.order() {
        let s = (system.zero_inputs(&cur, v) >= system.tau1(v)) as u8;
        if s != cur.get(v) {
            cur.set(v, s);
            let after = sds_potential(system, &cur)?.total;
            deltas.push(after - before);
            before = after;
        }
    }
    Ok(deltas)
}

/// Synchronous run from `config` until convergence (C = C''), recording the
/// doubled potential delta of every step: <= -1 (i.e. <= -1/2) while still
/// moving, exactly 0 once converged. The final recorded delta is the first
/// converged one.
pub fn check_decrease_sync(
    system: &ThresholdSystem,
    config: &Configuration,
    max_steps: usize,
) -> Result<Vec<i64>, PotentialError> {
    reject_constants(system)?;
    system.check_config(config)?;
    let mut cur = config.clone();
    let mut next = step_sync(system, &cur)?;
    let mut p = syds_potential_with_successor(system, &cur, &next)?.total_x2;
    let mut deltas = Vec::new();
    for _ in 0..max_steps {
        let after = step_sync(system, &next)?;
        let p_next = syds_potential_with_successor(system, &next, &after)?.total_x2;
        deltas.push(p_next - p);
        let converged = after == cur;
        cur = next;
        next = after;
        p = p_next;
        if converged {
            break;
        }
    }
    Ok(deltas)
}
