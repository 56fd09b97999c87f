//! Threshold systems: a graph, a per-vertex threshold `tau1`, and a decision
//! mode. Vertex `v` wants to play 1 when enough of its inputs play 0; the
//! local function outputs 1 iff the number of 0-state inputs is at least
//! `tau1(v)`. In SE (self essential) mode a vertex's own state counts as an
//! input; in SN (self non-essential) mode it does not.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    SelfEssential,
    SelfNonEssential,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::SelfEssential => write!(f, "se"),
            Mode::SelfNonEssential => write!(f, "sn"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemError {
    ThresholdLengthMismatch { expected: usize, got: usize },
    ConfigLengthMismatch { expected: usize, got: usize },
    InvalidState { vertex: usize, value: u8 },
    VertexOutOfRange { vertex: usize, n: usize },
    InvalidPermutation,
}

impl fmt::Display for SystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SystemError::ThresholdLengthMismatch { expected, got } => {
                write!(f, "threshold vector has length {} but the graph has {} vertices", got, expected)
            }
            SystemError::ConfigLengthMismatch { expected, got } => {
                write!(f, "configuration has length {} but the graph has {} vertices", got, expected)
            }
            SystemError::InvalidState { vertex, value } => {
                write!(f, "state {} at vertex {} is not binary", value, vertex)
            }
            SystemError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {} out of range for n = {}", vertex, n)
            }
            SystemError::InvalidPermutation => write!(f, "order is not a permutation of 0..n-1"),
        }
    }
}

/// Binary action profile over the vertex set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(Vec<u8>);

impl Configuration {
    pub fn new(states: Vec<u8>) -> Result<Self, SystemError> {
        for (v, &s) in states.iter().enumerate() {
            if s > 1 {
                return Err(SystemError::InvalidState { vertex: v, value: s });
            }
        }
        Ok(Configuration(states))
    }

    pub fn zeros(n: usize) -> Self {
        Configuration(alloc::vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        Configuration(alloc::vec![1; n])
    }

    /// Unpack the low `n` bits of `bits`; vertex 0 is the least significant
    /// bit.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        assert!(n <= 64);
        Configuration((0..n).map(|v| ((bits >> v) & 1) as u8).collect())
    }

    /// Pack into a word, vertex 0 at the least significant bit. Requires
    /// n <= 64.
    pub fn as_u64(&self) -> u64 {
        assert!(self.0.len() <= 64);
        self.0
            .iter()
            .enumerate()
            .fold(0u64, |acc, (v, &s)| acc | ((s as u64) << v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> u8 {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, state: u8) {
        debug_assert!(state <= 1);
        self.0[v] = state;
    }

    pub fn states(&self) -> &[u8] {
        &self.0
    }

    /// Number of positions where the two configurations differ.
    pub fn hamming(&self, other: &Configuration) -> usize {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Vertex update order for the sequential scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self, SystemError> {
        let n = order.len();
        let mut seen = alloc::vec![false; n];
        for &v in &order {
            if v >= n || seen[v] {
                return Err(SystemError::InvalidPermutation);
            }
            seen[v] = true;
        }
        Ok(Permutation(order))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The complete game instance: graph, thresholds, mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdSystem {
    graph: Graph,
    tau1: Vec<usize>,
    mode: Mode,
}

impl ThresholdSystem {
    pub fn new(graph: Graph, tau1: Vec<usize>, mode: Mode) -> Result<Self, SystemError> {
        if tau1.len() != graph.n() {
            return Err(SystemError::ThresholdLengthMismatch {
                expected: graph.n(),
                got: tau1.len(),
            });
        }
        Ok(ThresholdSystem { graph, tau1, mode })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn tau1(&self, v: usize) -> usize {
        self.tau1[v]
    }

    pub fn tau1_vec(&self) -> &[usize] {
        &self.tau1
    }

    /// Number of inputs of `v`: its degree, plus one for itself in SE mode.
    pub fn num_inputs(&self, v: usize) -> usize {
        match self.mode {
            Mode::SelfEssential => self.graph.degree(v) + 1,
            Mode::SelfNonEssential => self.graph.degree(v),
        }
    }

    /// Complementary threshold: the minimum number of 1-inputs that forces
    /// output 0. Equals d+1-tau1 (SN) or d+2-tau1 (SE); may be negative for
    /// over-range tau1, hence the signed return.
    pub fn tau0(&self, v: usize) -> isize {
        let d = self.graph.degree(v) as isize;
        let base = match self.mode {
            Mode::SelfNonEssential => d + 1,
            Mode::SelfEssential => d + 2,
        };
        base - self.tau1[v] as isize
    }

    /// Local function always outputs 1 regardless of input.
    pub fn is_constant_one(&self, v: usize) -> bool {
        self.tau1[v] == 0
    }

    /// Local function always outputs 0: the threshold exceeds the number of
    /// inputs, so it can never be met.
    pub fn is_constant_zero(&self, v: usize) -> bool {
        self.tau1[v] > self.num_inputs(v)
    }

    pub fn is_constant(&self, v: usize) -> bool {
        self.is_constant_one(v) || self.is_constant_zero(v)
    }

    pub fn has_constant_vertex(&self) -> bool {
        (0..self.n()).any(|v| self.is_constant(v))
    }

    /// Number of 0-state inputs of `v` under `config` (self included in SE).
    pub fn zero_inputs(&self, config: &Configuration, v: usize) -> usize {
        let mut zeros = self
            .graph
            .neighbors(v)
            .iter()
            .filter(|&&u| config.get(u) == 0)
            .count();
        if self.mode == Mode::SelfEssential && config.get(v) == 0 {
            zeros += 1;
        }
        zeros
    }

    /// Next state of `v`: 1 iff at least tau1(v) inputs are 0.
    pub fn eval_local(&self, config: &Configuration, v: usize) -> Result<u8, SystemError> {
        if v >= self.n() {
            return Err(SystemError::VertexOutOfRange { vertex: v, n: self.n() });
        }
        self.check_config(config)?;
        Ok((self.zero_inputs(config, v) >= self.tau1[v]) as u8)
    }

    pub fn is_fixed_point(&self, config: &Configuration) -> bool {
        config.len() == self.n()
            && (0..self.n()).all(|v| (self.zero_inputs(config, v) >= self.tau1[v]) as u8 == config.get(v))
    }

    pub fn check_config(&self, config: &Configuration) -> Result<(), SystemError> {
        if config.len() != self.n() {
            return Err(SystemError::ConfigLengthMismatch {
                expected: self.n(),
                got: config.len(),
            });
        }
        Ok(())
    }

    /// Non-fatal diagnostics: constant vertices, out-of-range thresholds,
    /// disconnected structure.
    pub fn validate(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        for v in 0..self.n() {
            if self.is_constant_one(v) {
                warnings.push(format!("constant-1 vertex {} (tau1 = 0)", v));
            } else if self.is_constant_zero(v) {
                warnings.push(format!(
                    "constant-0 vertex {} (tau1 = {} exceeds its {} inputs)",
                    v,
                    self.tau1[v],
                    self.num_inputs(v)
                ));
                if self.tau1[v] > self.num_inputs(v) + 1 {
                    warnings.push(format!(
                        "threshold out of range at vertex {}: tau1 = {} (function is constant 0)",
                        v, self.tau1[v]
                    ));
                }
            }
        }
        let components = self.graph.connected_components();
        if components.len() > 1 {
            warnings.push(format!("graph has {} connected components", components.len()));
        }
        warnings
    }
}
