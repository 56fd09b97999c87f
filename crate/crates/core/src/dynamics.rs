//! Trajectory simulation for both update schemes.
//!
//! Synchronous runs (either mode) and sequential SN runs can only terminate
//! in a fixed point or a 2-cycle, so the engine detects those with the cheap
//! `C = C'` / `C = C''` comparisons. Sequential SE admits limit cycles of
//! exponential length, so that case keeps a fingerprint index of every
//! visited configuration (with exact-match confirmation) under a memory
//! budget; past the budget, detection degrades to `Unconverged` at
//! `max_steps`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::system::{Configuration, Mode, Permutation, SystemError, ThresholdSystem};

/// Visited-set cap for sequential-SE cycle detection.
const VISITED_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scheme {
    Synchronous,
    Sequential(Permutation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Terminal {
    FixedPoint(Configuration),
    TwoCycle(Configuration, Configuration),
    LongCycle { length: usize, entry_step: usize },
    Unconverged,
}

/// Record of one simulation run. `configs` holds every computed
/// configuration starting from the initial one; at a fixed point a clone is
/// appended so flip-rate pairs exist even for immediate convergence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub steps_taken: usize,
    pub flip_counts: Vec<usize>,
    pub terminal: Terminal,
    pub configs: Vec<Configuration>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicsError {
    System(SystemError),
    ZeroMaxSteps,
    TraceTooShort,
}

impl fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicsError::System(e) => write!(f, "{}", e),
            DynamicsError::ZeroMaxSteps => write!(f, "max_steps must be at least 1"),
            DynamicsError::TraceTooShort => {
                write!(f, "trace too short to compute a flip rate (need 3 configurations)")
            }
        }
    }
}

impl From<SystemError> for DynamicsError {
    fn from(e: SystemError) -> Self {
        DynamicsError::System(e)
    }
}

/// One synchronous step: every vertex evaluated against the input config.
pub fn step_sync(
    system: &ThresholdSystem,
    config: &Configuration,
) -> Result<Configuration, SystemError> {
    system.check_config(config)?;
    let mut next = config.clone();
    for v in 0..system.n() {
        next.set(v, (system.zero_inputs(config, v) >= system.tau1(v)) as u8);
    }
    Ok(next)
}

/// One sequential step: n substeps in permutation order, each seeing all
/// earlier substeps' results.
pub fn step_seq(
    system: &ThresholdSystem,
    config: &Configuration,
    permutation: &Permutation,
) -> Result<Configuration, SystemError> {
    system.check_config(config)?;
    if permutation.len() != system.n() {
        return Err(SystemError::InvalidPermutation);
    }
    let mut cur = config.clone();
    for &v in permutation.order() {
        let s = (system.zero_inputs(&cur, v) >= system.tau1(v)) as u8;
        cur.set(v, s);
    }
    Ok(cur)
}

/// Theory-backed step budgets: 8m + 16 synchronous, 3m + 16 sequential SN,
/// and a flat default for sequential SE where no polynomial bound exists.
pub fn default_max_steps(system: &ThresholdSystem, scheme: &Scheme) -> usize {
    match (scheme, system.mode()) {
        (Scheme::Synchronous, _) => 8 * system.m() + 16,
        (Scheme::Sequential(_), Mode::SelfNonEssential) => 3 * system.m() + 16,
        (Scheme::Sequential(_), Mode::SelfEssential) => 10_000,
    }
}

fn fingerprint(config: &Configuration) -> u64 {
    // FNV-1a over the state bytes.
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in config.states() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Iterate the dynamics from `initial` for at most `max_steps` steps,
/// classifying the terminal behavior. `steps_taken` is the first step index
/// whose configuration belongs to the terminal pattern (0 for a fixed-point
/// start).
pub fn simulate(
    system: &ThresholdSystem,
    scheme: &Scheme,
    initial: &Configuration,
    max_steps: usize,
) -> Result<Trace, DynamicsError> {
    if max_steps == 0 {
        return Err(DynamicsError::ZeroMaxSteps);
    }
    system.check_config(initial)?;
    if let Scheme::Sequential(p) = scheme {
        if p.len() != system.n() {
            return Err(DynamicsError::System(SystemError::InvalidPermutation));
        }
    }

    let track_long_cycles =
        matches!(scheme, Scheme::Sequential(_)) && system.mode() == Mode::SelfEssential;

    let mut configs: Vec<Configuration> = Vec::new();
    configs.push(initial.clone());
    let mut flip_counts: Vec<usize> = Vec::new();
    // fingerprint -> indices into `configs`; exact comparison resolves
    // collisions.
    let mut seen: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    if track_long_cycles {
        seen.insert(fingerprint(initial), alloc::vec![0]);
    }

    for t in 0..max_steps {
        let cur = &configs[t];
        let next = match scheme {
            Scheme::Synchronous => step_sync(system, cur)?,
            Scheme::Sequential(p) => step_seq(system, cur, p)?,
        };
        flip_counts.push(cur.hamming(&next));

        if track_long_cycles {
            let fp = fingerprint(&next);
            let hit = seen
                .get(&fp)
                .and_then(|idxs| idxs.iter().find(|&&i| configs[i] == next).copied());
            if let Some(i) = hit {
                let length = t + 1 - i;
                configs.push(next);
                let terminal = match length {
                    1 => Terminal::FixedPoint(configs[i].clone()),
                    2 => Terminal::TwoCycle(configs[i].clone(), configs[i + 1].clone()),
                    _ => Terminal::LongCycle { length, entry_step: i },
                };
                pad_for_flip_pairs(system, scheme, &mut configs, &mut flip_counts)?;
                return Ok(Trace { steps_taken: i, flip_counts, terminal, configs });
            }
            if configs.len() < VISITED_BUDGET {
                seen.entry(fp).or_default().push(t + 1);
            }
            configs.push(next);
        } else {
            if next == configs[t] {
                let terminal = Terminal::FixedPoint(next.clone());
                configs.push(next);
                pad_for_flip_pairs(system, scheme, &mut configs, &mut flip_counts)?;
                return Ok(Trace { steps_taken: t, flip_counts, terminal, configs });
            }
            if t >= 1 && next == configs[t - 1] {
                let terminal = Terminal::TwoCycle(configs[t - 1].clone(), configs[t].clone());
                configs.push(next);
                pad_for_flip_pairs(system, scheme, &mut configs, &mut flip_counts)?;
                return Ok(Trace { steps_taken: t - 1, flip_counts, terminal, configs });
            }
            configs.push(next);
        }
    }

    Ok(Trace { steps_taken: max_steps, flip_counts, terminal: Terminal::Unconverged, configs })
}

/// Extend a just-terminated trajectory until it holds at least 3
/// configurations so a (t, t+2) flip pair exists even for step-0
/// convergence. The extension just keeps stepping, which is exact for fixed
/// points and cycles alike.
fn pad_for_flip_pairs(
    system: &ThresholdSystem,
    scheme: &Scheme,
    configs: &mut Vec<Configuration>,
    flip_counts: &mut Vec<usize>,
) -> Result<(), DynamicsError> {
    while configs.len() < 3 {
        let cur = configs.last().expect("non-empty trajectory");
        let next = match scheme {
            Scheme::Synchronous => step_sync(system, cur)?,
            Scheme::Sequential(p) => step_seq(system, cur, p)?,
        };
        flip_counts.push(cur.hamming(&next));
        configs.push(next);
    }
    Ok(())
}

/// Exact mean of Hamming(C_t, C_{t+2}) over the recorded trajectory, kept as
/// a sum/count pair so comparisons stay integer-exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipRate {
    pub sum: u64,
    pub pairs: u64,
}

impl FlipRate {
    pub fn mean(&self) -> f64 {
        self.sum as f64 / self.pairs as f64
    }

    pub fn is_zero(&self) -> bool {
        self.sum == 0
    }
}

/// Average number of vertices whose state differs two steps apart.
pub fn avg_flip_rate(trace: &Trace) -> Result<FlipRate, DynamicsError> {
    if trace.configs.len() < 3 {
        return Err(DynamicsError::TraceTooShort);
    }
    let mut sum = 0u64;
    let mut pairs = 0u64;
    for w in trace.configs.windows(3) {
        sum += w[0].hamming(&w[2]) as u64;
        pairs += 1;
    }
    Ok(FlipRate { sum, pairs })
}
