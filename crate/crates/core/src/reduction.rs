//! Constructive 3SAT-to-fixed-point reduction.
//!
//! Every variable contributes a 15-vertex block: literal vertices y (the
//! positive side) and z (the negative side), a consistency vertex a, a pair
//! d/e anchoring e at state 0, and one K(3,3) copy gadget per literal vertex
//! that pins the gadget's h-side to the literal's complement. Every clause
//! contributes one vertex wired to its literal vertices. The resulting SE
//! system's fixed points correspond one-to-one with satisfying assignments:
//! x_i is true exactly when y_i holds state 0.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::enumerate::MaskTables;
use crate::graph::Graph;
use crate::system::{Configuration, Mode, ThresholdSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionError {
    Parse { line: usize, message: String },
    AssignmentLengthMismatch { expected: usize, got: usize },
    NotAFixedPoint,
    OverBudget { vertices: usize, limit: usize },
}

impl fmt::Display for ReductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionError::Parse { line, message } => {
                write!(f, "parse error at line {}: {}", line, message)
            }
            ReductionError::AssignmentLengthMismatch { expected, got } => {
                write!(f, "assignment has {} variables, formula has {}", got, expected)
            }
            ReductionError::NotAFixedPoint => {
                write!(f, "configuration is not a fixed point of the reduction system")
            }
            ReductionError::OverBudget { vertices, limit } => {
                write!(f, "exhaustive scan over {} vertices exceeds the {}-vertex budget", vertices, limit)
            }
        }
    }
}

/// CNF with exactly three literal slots per clause; clauses with fewer
/// distinct literals repeat one. Literals are signed 1-based variable
/// indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self, ReductionError> {
        for (i, clause) in clauses.iter().enumerate() {
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if lit == 0 || var > num_vars {
                    return Err(ReductionError::Parse {
                        line: i + 1,
                        message: alloc::format!("literal {} out of range", lit),
                    });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = assignment[(lit.unsigned_abs() - 1) as usize];
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }

    /// Count satisfying assignments by full enumeration (2^num_vars).
    pub fn count_satisfying(&self) -> u64 {
        assert!(self.num_vars <= 32);
        let mut count = 0;
        for bits in 0u64..(1 << self.num_vars) {
            let assignment: Vec<bool> =
                (0..self.num_vars).map(|i| (bits >> i) & 1 == 1).collect();
            if self.satisfied_by(&assignment) {
                count += 1;
            }
        }
        count
    }
}

/// Parse DIMACS CNF. Clauses of one or two literals are padded by repeating
/// the last literal; clauses with more than three literals are rejected.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, ReductionError> {
    let mut num_vars: Option<usize> = None;
    let mut declared_clauses = 0usize;
    let mut clauses: Vec<[i32; 3]> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(ReductionError::Parse {
                    line,
                    message: String::from("malformed problem header, expected 'p cnf <vars> <clauses>'"),
                });
            }
            let nv = parts[2].parse().map_err(|_| ReductionError::Parse {
                line,
                message: String::from("bad variable count"),
            })?;
            declared_clauses = parts[3].parse().map_err(|_| ReductionError::Parse {
                line,
                message: String::from("bad clause count"),
            })?;
            num_vars = Some(nv);
            continue;
        }
        if num_vars.is_none() {
            return Err(ReductionError::Parse {
                line,
                message: String::from("clause before the problem header"),
            });
        }
        for tok in trimmed.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| ReductionError::Parse {
                line,
                message: alloc::format!("bad literal '{}'", tok),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(ReductionError::Parse {
                        line,
                        message: String::from("empty clause"),
                    });
                }
                if current.len() > 3 {
                    return Err(ReductionError::Parse {
                        line,
                        message: alloc::format!("clause has {} literals, at most 3 allowed", current.len()),
                    });
                }
                while current.len() < 3 {
                    current.push(*current.last().expect("non-empty"));
                }
                clauses.push([current[0], current[1], current[2]]);
                current.clear();
            } else {
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        return Err(ReductionError::Parse {
            line: text.lines().count(),
            message: String::from("unterminated clause (missing trailing 0)"),
        });
    }
    let num_vars = num_vars.ok_or(ReductionError::Parse {
        line: 1,
        message: String::from("missing problem header"),
    })?;
    if clauses.len() != declared_clauses {
        return Err(ReductionError::Parse {
            line: text.lines().count(),
            message: alloc::format!(
                "header declares {} clauses, found {}",
                declared_clauses,
                clauses.len()
            ),
        });
    }
    CnfFormula::new(num_vars, clauses)
}

/// Vertex ids of one variable block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarVertices {
    pub y: usize,
    pub z: usize,
    pub a: usize,
    pub d: usize,
    pub e: usize,
}

/// One K(3,3) copy gadget: the literal vertex plus {g1, g2} on its side and
/// {h1, h2, h3} opposite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetVertices {
    pub literal: usize,
    pub g: [usize; 2],
    pub h: [usize; 3],
}

#[derive(Debug, Clone)]
pub struct ReductionArtifact {
    pub system: ThresholdSystem,
    pub formula: CnfFormula,
    pub var_to_vertices: Vec<VarVertices>,
    pub clause_to_vertex: Vec<usize>,
    pub gadget_map: Vec<GadgetVertices>,
}

/// Vertices per variable block: y, z, a, d, e and two 5-vertex gadgets.
pub const VERTICES_PER_VAR: usize = 15;

/// Build the SE system whose fixed points are the satisfying assignments.
/// Layout: variable blocks first (15 vertices each, gadget of y then gadget
/// of z), then one vertex per clause.
pub fn build_reduction(formula: &CnfFormula) -> ReductionArtifact {
    let nv = formula.num_vars;
    let nc = formula.clauses.len();
    let n = VERTICES_PER_VAR * nv + nc;
    let mut tau1 = vec![0usize; n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut var_to_vertices = Vec::with_capacity(nv);
    let mut gadget_map = Vec::with_capacity(2 * nv);

    let add_gadget = |edges: &mut Vec<(usize, usize)>,
                          tau1: &mut Vec<usize>,
                          literal: usize,
                          base: usize| {
        let g = [base, base + 1];
        let h = [base + 2, base + 3, base + 4];
        for &x in g.iter().chain(h.iter()) {
            tau1[x] = 3;
        }
        for &side_a in [literal, g[0], g[1]].iter() {
            for &side_b in h.iter() {
                edges.push((side_a, side_b));
            }
        }
        GadgetVertices { literal, g, h }
    };

    for i in 0..nv {
        let base = VERTICES_PER_VAR * i;
        let (y, z, a, d, e) = (base, base + 1, base + 2, base + 3, base + 4);
        tau1[y] = 3;
        tau1[z] = 3;
        tau1[a] = 1;
        tau1[d] = 1;
        tau1[e] = 3;
        edges.push((a, y));
        edges.push((a, z));
        edges.push((e, d));
        edges.push((e, y));
        edges.push((e, z));
        gadget_map.push(add_gadget(&mut edges, &mut tau1, y, base + 5));
        gadget_map.push(add_gadget(&mut edges, &mut tau1, z, base + 10));
        var_to_vertices.push(VarVertices { y, z, a, d, e });
    }

    let mut clause_to_vertex = Vec::with_capacity(nc);
    for (j, clause) in formula.clauses.iter().enumerate() {
        let w = VERTICES_PER_VAR * nv + j;
        tau1[w] = 1;
        clause_to_vertex.push(w);
        let mut targets: Vec<usize> = clause
            .iter()
            .map(|&lit| {
                let i = (lit.unsigned_abs() - 1) as usize;
                if lit > 0 {
                    var_to_vertices[i].y
                } else {
                    var_to_vertices[i].z
                }
            })
            .collect();
        targets.sort_unstable();
        targets.dedup(); // repeated literals collapse to one edge
        for t in targets {
            edges.push((w, t));
        }
    }

    let graph = Graph::undirected(n, edges).expect("reduction graph is simple");
    let system =
        ThresholdSystem::new(graph, tau1, Mode::SelfEssential).expect("threshold vector matches");
    ReductionArtifact {
        system,
        formula: formula.clone(),
        var_to_vertices,
        clause_to_vertex,
        gadget_map,
    }
}

/// The canonical configuration image of an assignment: a true variable puts
/// y at 0 and z at 1 (false is the mirror); a, d, and clause vertices sit at
/// 1, e at 0; gadget g-vertices copy their literal vertex and h-vertices
/// complement it. If the assignment satisfies the formula, the image is a
/// fixed point.
pub fn assignment_to_config(
    artifact: &ReductionArtifact,
    assignment: &[bool],
) -> Result<Configuration, ReductionError> {
    let nv = artifact.formula.num_vars;
    if assignment.len() != nv {
        return Err(ReductionError::AssignmentLengthMismatch {
            expected: nv,
            got: assignment.len(),
        });
    }
    let mut states = vec![0u8; artifact.system.n()];
    for (i, vv) in artifact.var_to_vertices.iter().enumerate() {
        let (y_state, z_state) = if assignment[i] { (0, 1) } else { (1, 0) };
        states[vv.y] = y_state;
        states[vv.z] = z_state;
        states[vv.a] = 1;
        states[vv.d] = 1;
        states[vv.e] = 0;
    }
    for gadget in &artifact.gadget_map {
        let v = states[gadget.literal];
        for &g in &gadget.g {
            states[g] = v;
        }
        for &h in &gadget.h {
            states[h] = 1 - v;
        }
    }
    for &w in &artifact.clause_to_vertex {
        states[w] = 1;
    }
    Ok(Configuration::new(states).expect("binary states"))
}

/// Read the assignment off a fixed point: x_i is true iff y_i holds 0.
pub fn config_to_assignment(
    artifact: &ReductionArtifact,
    config: &Configuration,
) -> Result<Vec<bool>, ReductionError> {
    if !artifact.system.is_fixed_point(config) {
        return Err(ReductionError::NotAFixedPoint);
    }
    Ok(artifact
        .var_to_vertices
        .iter()
        .map(|vv| config.get(vv.y) == 0)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsimonyReport {
    pub exhaustive: bool,
    pub num_satisfying: u64,
    /// Fixed-point count from the full configuration scan (exhaustive only).
    pub num_fixed_points: Option<u64>,
    pub counts_match: bool,
    /// Every fixed point examined round-trips through
    /// config -> assignment -> config unchanged.
    pub round_trip_ok: bool,
    /// Every satisfying assignment's image passes is_fixed_point.
    pub sat_images_are_fixed_points: bool,
}

impl ParsimonyReport {
    pub fn holds(&self) -> bool {
        self.counts_match && self.round_trip_ok && self.sat_images_are_fixed_points
    }
}

pub const EXHAUSTIVE_VERTEX_LIMIT: usize = 32;

/// Check the one-to-one correspondence between fixed points and satisfying
/// assignments. Exhaustive mode scans all 2^n configurations (n capped at
/// [`EXHAUSTIVE_VERTEX_LIMIT`]); otherwise only the assignment-side checks
/// run: every satisfying assignment must map to a fixed point that
/// round-trips.
pub fn verify_parsimony(
    artifact: &ReductionArtifact,
    exhaustive: bool,
) -> Result<ParsimonyReport, ReductionError> {
    let n = artifact.system.n();
    let num_satisfying = artifact.formula.count_satisfying();

    let mut sat_images_ok = true;
    let mut round_trip_ok = true;
    for bits in 0u64..(1 << artifact.formula.num_vars) {
        let assignment: Vec<bool> = (0..artifact.formula.num_vars)
            .map(|i| (bits >> i) & 1 == 1)
            .collect();
        let image = assignment_to_config(artifact, &assignment)?;
        let satisfies = artifact.formula.satisfied_by(&assignment);
        let is_fp = artifact.system.is_fixed_point(&image);
        if satisfies != is_fp {
            sat_images_ok = false;
        }
        if is_fp && config_to_assignment(artifact, &image)? != assignment {
            round_trip_ok = false;
        }
    }

    if !exhaustive {
        // Sampled check: hunt for fixed points with seeded synchronous
        // restarts; any found must map back and round-trip.
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut rand = || {
            // splitmix64
            rng_state = rng_state.wrapping_add(0x9e3779b97f4a7c15);
            let mut x = rng_state;
            x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
            x ^ (x >> 31)
        };
        let max_steps = 8 * artifact.system.m() + 16;
        for _ in 0..64 {
            let mut states = vec![0u8; n];
            for s in states.iter_mut() {
                *s = (rand() & 1) as u8;
            }
            let start = Configuration::new(states).expect("binary states");
            if let Ok(trace) = crate::dynamics::simulate(
                &artifact.system,
                &crate::dynamics::Scheme::Synchronous,
                &start,
                max_steps,
            ) {
                if let crate::dynamics::Terminal::FixedPoint(fp) = trace.terminal {
                    let assignment = config_to_assignment(artifact, &fp)?;
                    if assignment_to_config(artifact, &assignment)? != fp
                        || !artifact.formula.satisfied_by(&assignment)
                    {
                        round_trip_ok = false;
                    }
                }
            }
        }
        return Ok(ParsimonyReport {
            exhaustive: false,
            num_satisfying,
            num_fixed_points: None,
            counts_match: sat_images_ok,
            round_trip_ok,
            sat_images_are_fixed_points: sat_images_ok,
        });
    }

    if n > EXHAUSTIVE_VERTEX_LIMIT {
        return Err(ReductionError::OverBudget { vertices: n, limit: EXHAUSTIVE_VERTEX_LIMIT });
    }
    let tables = MaskTables::new(&artifact.system);
    let mut num_fixed_points = 0u64;
    for c in 0u64..(1u64 << n) {
        if tables.is_fixed_point(c) {
            num_fixed_points += 1;
            let config = Configuration::from_bits(c, n);
            let assignment = config_to_assignment(artifact, &config)?;
            let back = assignment_to_config(artifact, &assignment)?;
            if back != config {
                round_trip_ok = false;
            }
        }
    }
    Ok(ParsimonyReport {
        exhaustive: true,
        num_satisfying,
        num_fixed_points: Some(num_fixed_points),
        counts_match: num_fixed_points == num_satisfying,
        round_trip_ok,
        sat_images_are_fixed_points: sat_images_ok,
    })
}
