//! Equilibrium finders.
//!
//! SN systems always admit a fixed point and [`solve_sn_general`] finds one
//! by running sequential best response. For SE systems the general problem
//! is intractable, but four structural classes have polynomial solvers:
//! NAND/NOR threshold patterns, DAGs, graphs without even cycles, and
//! complete graphs. Each solver verifies its answer with `is_fixed_point`
//! before returning, and only emits `NoEquilibrium` when every deduction
//! along the way was forced (so a failed verification certifies
//! nonexistence).

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::{simulate, Scheme, Terminal};
use crate::system::{Configuration, Mode, Permutation, ThresholdSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Found(Configuration),
    NoEquilibrium,
    NotApplicable(String),
}

impl SolveOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SolveOutcome::Found(_))
    }
}

/// Find a fixed point of an SN system by sequential best response from the
/// all-zeros configuration in ascending vertex order. The potential argument
/// bounds the run at 3m flips, so this always terminates in a fixed point.
pub fn solve_sn_general(system: &ThresholdSystem) -> SolveOutcome {
    solve_sn_general_from(
        system,
        &Configuration::zeros(system.n()),
        &Permutation::identity(system.n()),
    )
}

/// Same search from a caller-chosen start and update order, for harvesting
/// different equilibria.
pub fn solve_sn_general_from(
    system: &ThresholdSystem,
    initial: &Configuration,
    permutation: &Permutation,
) -> SolveOutcome {
    if system.mode() != Mode::SelfNonEssential {
        return SolveOutcome::NotApplicable(String::from(
            "general best-response search applies only to SN systems",
        ));
    }
    let max_steps = 3 * system.m() + system.n() + 16;
    let scheme = Scheme::Sequential(permutation.clone());
    match simulate(system, &scheme, initial, max_steps) {
        Ok(trace) => match trace.terminal {
            Terminal::FixedPoint(c) if system.is_fixed_point(&c) => SolveOutcome::Found(c),
            _ => SolveOutcome::NotApplicable(String::from(
                "internal: sequential SN run failed to reach a fixed point",
            )),
        },
        Err(e) => SolveOutcome::NotApplicable(alloc::format!("internal: {}", e)),
    }
}

fn is_nand(system: &ThresholdSystem, v: usize) -> bool {
    system.tau1(v) == 1
}

fn is_nor(system: &ThresholdSystem, v: usize) -> bool {
    // 1 iff all inputs are 0.
    system.tau1(v) == system.num_inputs(v)
}

/// Solver for systems whose local functions are all NANDs (tau1 = 1) or
/// NORs (tau1 = number of inputs). SE: the fixed point is unique if it
/// exists (NANDs 1, NORs 0), so build and check it. SN: initial assignment
/// NANDs 1 / NORs 0, then one ascending pass flips vertices isolated within
/// their own kind; always Found.
pub fn solve_nand_nor(system: &ThresholdSystem) -> SolveOutcome {
    for v in 0..system.n() {
        if !is_nand(system, v) && !is_nor(system, v) {
            return SolveOutcome::NotApplicable(alloc::format!(
                "vertex {} has tau1 = {}, neither nand (1) nor nor ({})",
                v,
                system.tau1(v),
                system.num_inputs(v)
            ));
        }
    }
    let n = system.n();
    // NAND takes precedence where tau1 = 1 also equals the input count.
    let mut config = Configuration::zeros(n);
    for v in 0..n {
        config.set(v, if is_nand(system, v) { 1 } else { 0 });
    }
    match system.mode() {
        Mode::SelfEssential => {
            // In any SE fixed point every nand vertex is 1 and every nor
            // vertex is 0, so the candidate is the only possibility.
            if system.is_fixed_point(&config) {
                SolveOutcome::Found(config)
            } else {
                SolveOutcome::NoEquilibrium
            }
        }
        Mode::SelfNonEssential => {
            for v in 0..n {
                let nbrs = system.graph().neighbors(v);
                if is_nand(system, v) {
                    if nbrs.iter().all(|&u| config.get(u) == 1) {
                        config.set(v, 0);
                    }
                } else if nbrs.iter().all(|&u| config.get(u) == 0) {
                    config.set(v, 1);
                }
            }
            if system.is_fixed_point(&config) {
                SolveOutcome::Found(config)
            } else {
                // The pass above is proven to land on a fixed point; fall
                // back to best response rather than report nonsense.
                solve_sn_general(system)
            }
        }
    }
}

/// Solver for directed acyclic graphs, where a vertex's inputs are its
/// in-neighbors. States propagate along a topological order; every
/// deduction is forced, so SE can certify nonexistence. SN always finds the
/// (unique) fixed point.
pub fn solve_dag(system: &ThresholdSystem) -> SolveOutcome {
    let order = match system.graph().topological_order() {
        Some(o) => o,
        None => {
            return SolveOutcome::NotApplicable(String::from(
                "graph is not a directed acyclic graph",
            ))
        }
    };
    let mut config = Configuration::zeros(system.n());
    for &v in &order {
        let zeros = system
            .graph()
            .neighbors(v)
            .iter()
            .filter(|&&u| config.get(u) == 0)
            .count();
        let state = match system.mode() {
            Mode::SelfNonEssential => (zeros >= system.tau1(v)) as u8,
            Mode::SelfEssential => {
                let t = system.tau1(v) as isize - zeros as isize;
                if t <= 0 {
                    1
                } else if t == 1 {
                    // Neither state is consistent: 0 supplies the missing
                    // zero itself, 1 leaves the count short.
                    return SolveOutcome::NoEquilibrium;
                } else {
                    0
                }
            }
        };
        config.set(v, state);
    }
    if system.is_fixed_point(&config) {
        SolveOutcome::Found(config)
    } else {
        SolveOutcome::NotApplicable(String::from("internal: DAG propagation failed verification"))
    }
}

/// Solver for complete graphs. In a complete graph a fixed point is
/// determined by the global number of zeros a0: a 1-vertex sees a0 zeros
/// and needs tau1 <= a0, while a 0-vertex needs its threshold strictly
/// above what it sees (a0 in SE, a0 - 1 in SN). Scan all candidate a0.
pub fn solve_complete(system: &ThresholdSystem) -> SolveOutcome {
    if !system.graph().is_complete() {
        return SolveOutcome::NotApplicable(String::from("graph is not complete"));
    }
    let n = system.n();
    for a0 in 0..=n {
        let ones_needed = n - a0;
        let candidate = match system.mode() {
            Mode::SelfEssential => {
                // tau1 <= a0 forces state 1, tau1 > a0 forces state 0; no
                // freedom, so the counts must match exactly.
                let ones: Vec<usize> =
                    (0..n).filter(|&v| system.tau1(v) <= a0).collect();
                if ones.len() != ones_needed {
                    continue;
                }
                Some(ones)
            }
            Mode::SelfNonEssential => {
                // tau1 < a0 forces 1, tau1 > a0 forces 0, tau1 = a0 vertices
                // may take either state; fill them ascending as needed.
                let forced: Vec<usize> =
                    (0..n).filter(|&v| system.tau1(v) < a0).collect();
                let flexible: Vec<usize> =
                    (0..n).filter(|&v| system.tau1(v) == a0).collect();
                if forced.len() > ones_needed || forced.len() + flexible.len() < ones_needed {
                    continue;
                }
                let mut ones = forced;
                ones.extend(flexible.into_iter().take(ones_needed - ones.len()));
                Some(ones)
            }
        };
        if let Some(ones) = candidate {
            let mut config = Configuration::zeros(n);
            for v in ones {
                config.set(v, 1);
            }
            if system.is_fixed_point(&config) {
                return SolveOutcome::Found(config);
            }
        }
    }
    SolveOutcome::NoEquilibrium
}

// ---------------------------------------------------------------------------
// Even-cycle-free solver
// ---------------------------------------------------------------------------

/// Biconnected components (as edge lists) of the alive-induced subgraph,
/// via depth-first search with an edge stack.
fn biconnected_blocks(n: usize, adj: &[Vec<usize>], alive: &[bool]) -> Vec<Vec<(usize, usize)>> {
    let mut disc = vec![0usize; n]; // 1-based discovery time, 0 = unvisited
    let mut low = vec![0usize; n];
    let mut timer = 0usize;
    let mut blocks = Vec::new();
    let mut estack: Vec<(usize, usize)> = Vec::new();
    // (vertex, parent, next adjacency index)
    let mut frames: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if !alive[root] || disc[root] != 0 {
            continue;
        }
        timer += 1;
        disc[root] = timer;
        low[root] = timer;
        frames.push((root, usize::MAX, 0));
        while let Some(&(v, parent, idx)) = frames.last() {
            if idx < adj[v].len() {
                frames.last_mut().expect("frame").2 += 1;
                let u = adj[v][idx];
                if !alive[u] || u == parent {
                    continue;
                }
                if disc[u] == 0 {
                    estack.push((v, u));
                    timer += 1;
                    disc[u] = timer;
                    low[u] = timer;
                    frames.push((u, v, 0));
                } else if disc[u] < disc[v] {
                    estack.push((v, u));
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _, _)) = frames.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = estack.pop() {
                            block.push(e);
                            if e == (p, v) {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

fn block_vertices(block: &[(usize, usize)]) -> BTreeSet<usize> {
    block.iter().flat_map(|&(u, v)| [u, v]).collect()
}

/// A graph has no even cycle iff every biconnected component is a single
/// edge or a single odd cycle.
pub fn is_even_cycle_free(n: usize, adj: &[Vec<usize>]) -> bool {
    let alive = vec![true; n];
    biconnected_blocks(n, adj, &alive).iter().all(|block| {
        let eb = block.len();
        let vb = block_vertices(block).len();
        eb == 1 || (eb == vb && vb % 2 == 1)
    })
}

/// Pick a leaf cycle block of the alive subgraph: a block that is a cycle
/// and contains at most one cut vertex (its gate). Returns the block's
/// vertices in cyclic order starting at the gate (or the smallest vertex if
/// gateless), plus the gate.
fn pick_leaf_cycle(
    n: usize,
    adj: &[Vec<usize>],
    alive: &[bool],
) -> Option<(Vec<usize>, Option<usize>)> {
    let blocks = biconnected_blocks(n, adj, alive);
    let mut membership = vec![0usize; n];
    let vertex_sets: Vec<BTreeSet<usize>> = blocks.iter().map(|b| block_vertices(b)).collect();
    for vs in &vertex_sets {
        for &v in vs {
            membership[v] += 1;
        }
    }
    let mut best: Option<(usize, usize)> = None; // (min vertex id, block index)
    for (i, block) in blocks.iter().enumerate() {
        let vs = &vertex_sets[i];
        if block.len() != vs.len() {
            continue; // not a cycle (single edge)
        }
        let cuts: Vec<usize> = vs.iter().copied().filter(|&v| membership[v] > 1).collect();
        if cuts.len() > 1 {
            continue;
        }
        let min_id = *vs.iter().next().expect("non-empty block");
        if best.map_or(true, |(m, _)| min_id < m) {
            best = Some((min_id, i));
        }
    }
    let (_, bi) = best?;
    let vs = &vertex_sets[bi];
    let gate = vs.iter().copied().find(|&v| membership[v] > 1);
    // Walk the cycle starting from the anchor.
    let mut local: alloc::collections::BTreeMap<usize, Vec<usize>> =
        vs.iter().map(|&v| (v, Vec::new())).collect();
    for &(u, v) in &blocks[bi] {
        local.get_mut(&u).expect("member").push(v);
        local.get_mut(&v).expect("member").push(u);
    }
    for nb in local.values_mut() {
        nb.sort_unstable();
    }
    let start = gate.unwrap_or(*vs.iter().next().expect("non-empty"));
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = local[&start][0];
    while cur != start {
        order.push(cur);
        let nb = &local[&cur];
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
    }
    Some((order, gate))
}

/// Find a consistent assignment around a cycle of `k` positions, if one
/// exists. `ok(i, l, s, r)` says whether position i may take state `s` when
/// its cyclic neighbors hold `l` and `r`. Position 0 may be pinned with
/// `fixed0`; its own consistency is checked only when `check0` is set (a
/// gate's condition involves vertices outside the cycle, so the caller
/// skips it). States preferring 1 are chosen first, so the returned
/// assignment contributes as few zeros as possible, greedily from position
/// 0.
fn solve_cycle<F: Fn(usize, u8, u8, u8) -> bool>(
    k: usize,
    fixed0: Option<u8>,
    check0: bool,
    ok: F,
) -> Option<Vec<u8>> {
    debug_assert!(k >= 3);
    let choices: &[u8] = &[1, 0];
    let x0_options: Vec<u8> = match fixed0 {
        Some(s) => vec![s],
        None => vec![1, 0],
    };
    for &x0 in &x0_options {
        for &x1 in choices {
            // feas[j][a][b]: pair (x_j = a, x_{j+1} = b) extendable through
            // positions j+1..k-1 and the wrap check at position 0.
            let mut feas = vec![[[false; 2]; 2]; k];
            for a in 0..2u8 {
                feas[k - 1][a as usize][x0 as usize] =
                    !check0 || ok(0, a, x0, x1);
            }
            for j in (0..k - 1).rev() {
                for a in 0..2u8 {
                    for b in 0..2u8 {
                        feas[j][a as usize][b as usize] = choices.iter().any(|&c| {
                            ok(j + 1, a, b, c) && feas[j + 1][b as usize][c as usize]
                        });
                    }
                }
            }
            if !feas[0][x0 as usize][x1 as usize] {
                continue;
            }
            let mut x = vec![x0, x1];
            for j in 1..k - 1 {
                let c = choices
                    .iter()
                    .copied()
                    .find(|&c| ok(j, x[j - 1], x[j], c) && feas[j][x[j] as usize][c as usize])
                    .expect("feasible per DP");
                x.push(c);
            }
            return Some(x);
        }
    }
    None
}

/// Deferred resolutions recorded during SN peeling, replayed in reverse.
enum Pending {
    /// `child` takes the complement of `parent`'s final state.
    Complement { child: usize, parent: usize },
    /// A folded cycle: once the gate's state is known, its members take the
    /// stored assignment for that gate state.
    Bundle {
        gate: usize,
        members: Vec<usize>,
        sols: [Option<Vec<u8>>; 2],
    },
}

/// Large offset encoding "this gate state admits no cycle assignment" in
/// the conditional zero counters.
const BIG: isize = 1 << 20;

/// Solver for graphs with no even cycle (every biconnected component is an
/// edge or an odd cycle). SE deductions are all forced, so a failed final
/// verification certifies `NoEquilibrium`. The SN variant makes safe (but
/// not always forced) choices and defers complement-coupled vertices and
/// folded cycles for back-substitution; if it paints itself into a corner
/// it reports `NotApplicable` rather than guess.
pub fn solve_even_cycle_free(system: &ThresholdSystem) -> SolveOutcome {
    if system.graph().is_directed() {
        return SolveOutcome::NotApplicable(String::from(
            "even-cycle-free solver expects an undirected graph",
        ));
    }
    let n = system.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| system.graph().neighbors(v).to_vec()).collect();
    if !is_even_cycle_free(n, &adj) {
        return SolveOutcome::NotApplicable(String::from("graph contains an even cycle"));
    }
    match system.mode() {
        Mode::SelfEssential => solve_ecf_se(system, &adj),
        Mode::SelfNonEssential => solve_ecf_sn(system, &adj),
    }
}

fn solve_ecf_se(system: &ThresholdSystem, adj: &[Vec<usize>]) -> SolveOutcome {
    let n = system.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| adj[v].len()).collect();
    let mut z = vec![0isize; n]; // zeros inherited from removed neighbors
    let mut state = vec![0u8; n];
    let mut queue: BTreeSet<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();

    let mut remaining = n;
    while remaining > 0 {
        while let Some(&v) = queue.iter().next() {
            queue.remove(&v);
            if !alive[v] {
                continue;
            }
            let t = system.tau1(v) as isize - z[v];
            let s = if deg[v] == 0 {
                // Only the self input is left.
                if t <= 0 {
                    1
                } else if t == 1 {
                    // 0 would supply the missing zero itself; 1 leaves the
                    // count short. Forced contradiction.
                    return SolveOutcome::NoEquilibrium;
                } else {
                    0
                }
            } else {
                // One undecided neighbor. t <= 0: always enough zeros.
                // t == 1: state 0 is impossible (self covers the gap), so 1
                // is forced. t >= 2: state 1 is impossible, 0 is forced.
                if t <= 1 {
                    1
                } else {
                    0
                }
            };
            state[v] = s;
            alive[v] = false;
            remaining -= 1;
            for &u in &adj[v] {
                if alive[u] {
                    deg[u] -= 1;
                    if s == 0 {
                        z[u] += 1;
                    }
                    if deg[u] <= 1 {
                        queue.insert(u);
                    }
                }
            }
        }
        if remaining == 0 {
            break;
        }
        // Minimum alive degree is now 2: pick a leaf cycle block.
        let (order, gate) = match pick_leaf_cycle(n, adj, &alive) {
            Some(x) => x,
            None => {
                return SolveOutcome::NotApplicable(String::from(
                    "internal: stuck without a leaf cycle",
                ))
            }
        };
        let members: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&v| Some(v) != gate)
            .collect();
        // A cycle member with effective threshold 2 is consistent only when
        // both neighbors oppose it, which cannot close around an odd cycle;
        // if every member is in that state, no fixed point exists.
        let forced = members
            .iter()
            .copied()
            .filter(|&w| system.tau1(w) as isize - z[w] != 2)
            .min();
        let w = match forced {
            Some(w) => w,
            None => return SolveOutcome::NoEquilibrium,
        };
        let t = system.tau1(w) as isize - z[w];
        let s = if t <= 1 { 1 } else { 0 };
        state[w] = s;
        alive[w] = false;
        remaining -= 1;
        for &u in &adj[w] {
            if alive[u] {
                deg[u] -= 1;
                if s == 0 {
                    z[u] += 1;
                }
                if deg[u] <= 1 {
                    queue.insert(u);
                }
            }
        }
    }
    let config = Configuration::new(state).expect("binary states");
    if system.is_fixed_point(&config) {
        SolveOutcome::Found(config)
    } else {
        // Every assignment above was forced, so the contradiction is real.
        SolveOutcome::NoEquilibrium
    }
}

fn solve_ecf_sn(system: &ThresholdSystem, adj: &[Vec<usize>]) -> SolveOutcome {
    let n = system.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| adj[v].len()).collect();
    // Zeros inherited from resolved neighbors, conditional on the vertex's
    // own eventual state (deferred complements contribute only when the
    // parent is 1; folded cycles differ per gate state).
    let mut z0 = vec![0isize; n];
    let mut z1 = vec![0isize; n];
    let mut state = vec![0u8; n];
    let mut decided = vec![false; n];
    let mut pending: Vec<Pending> = Vec::new();
    let mut queue: BTreeSet<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();

    let mut remaining = n;
    // Removes a decided vertex, propagating its zero to alive neighbors.
    macro_rules! settle {
        ($v:expr, $s:expr) => {{
            let v = $v;
            let s = $s;
            state[v] = s;
            decided[v] = true;
            alive[v] = false;
            remaining -= 1;
            for &u in &adj[v] {
                if alive[u] {
                    deg[u] -= 1;
                    if s == 0 {
                        z0[u] += 1;
                        z1[u] += 1;
                    }
                    if deg[u] <= 1 {
                        queue.insert(u);
                    }
                }
            }
        }};
    }

    while remaining > 0 {
        while let Some(&v) = queue.iter().next() {
            queue.remove(&v);
            if !alive[v] {
                continue;
            }
            let t0 = system.tau1(v) as isize - z0[v];
            let t1 = system.tau1(v) as isize - z1[v];
            if deg[v] == 0 {
                if t0 >= 1 {
                    settle!(v, 0);
                } else if t1 <= 0 {
                    settle!(v, 1);
                } else {
                    return SolveOutcome::NotApplicable(String::from(
                        "peeling dead end at an isolated vertex",
                    ));
                }
            } else {
                // One undecided neighbor u. State 0 is safe when even a
                // 0-neighbor leaves the count short (t0 >= 2); state 1 is
                // safe when the count is already met (t1 <= 0). Otherwise,
                // with t0 = t1 = 1, the vertex is exactly the complement of
                // its neighbor: defer it.
                let u = adj[v]
                    .iter()
                    .copied()
                    .find(|&u| alive[u])
                    .expect("degree-1 vertex has an alive neighbor");
                if t0 >= 2 {
                    settle!(v, 0);
                } else if t1 <= 0 {
                    settle!(v, 1);
                } else if t0 == 1 && t1 == 1 {
                    pending.push(Pending::Complement { child: v, parent: u });
                    alive[v] = false;
                    remaining -= 1;
                    deg[u] -= 1;
                    z1[u] += 1; // v is 0 exactly when u is 1
                    if deg[u] <= 1 {
                        queue.insert(u);
                    }
                } else {
                    return SolveOutcome::NotApplicable(String::from(
                        "peeling dead end at a degree-1 vertex",
                    ));
                }
            }
        }
        if remaining == 0 {
            break;
        }
        let (order, gate) = match pick_leaf_cycle(n, adj, &alive) {
            Some(x) => x,
            None => {
                return SolveOutcome::NotApplicable(String::from(
                    "internal: stuck without a leaf cycle",
                ))
            }
        };
        let k = order.len();
        // Consistency of cycle position i under (left, self, right); all
        // removed-neighbor zeros are already folded into z0/z1.
        let ok = |i: usize, l: u8, s: u8, r: u8| -> bool {
            let w = order[i];
            let zeros = (l == 0) as isize + (r == 0) as isize;
            if s == 1 {
                zeros >= system.tau1(w) as isize - z1[w]
            } else {
                zeros < system.tau1(w) as isize - z0[w]
            }
        };
        match gate {
            Some(g) => {
                let sols: [Option<Vec<u8>>; 2] = [
                    solve_cycle(k, Some(0), false, &ok),
                    solve_cycle(k, Some(1), false, &ok),
                ];
                if sols[0].is_none() && sols[1].is_none() {
                    return SolveOutcome::NotApplicable(String::from(
                        "no cycle assignment for either gate state",
                    ));
                }
                let members: Vec<usize> = order[1..].to_vec();
                for (gs, sol) in sols.iter().enumerate() {
                    let z = if gs == 0 { &mut z0 } else { &mut z1 };
                    match sol {
                        Some(x) => {
                            // Zeros the two gate-adjacent members feed the
                            // gate when it takes state gs.
                            z[g] += (x[1] == 0) as isize + (x[k - 1] == 0) as isize;
                        }
                        // Make state gs inconsistent for the gate.
                        None if gs == 0 => z0[g] += BIG,
                        None => z1[g] -= BIG,
                    }
                }
                for &w in &members {
                    alive[w] = false;
                    remaining -= 1;
                }
                deg[g] -= 2;
                if deg[g] <= 1 {
                    queue.insert(g);
                }
                pending.push(Pending::Bundle {
                    gate: g,
                    members,
                    sols: [
                        sols[0].as_ref().map(|x| x[1..].to_vec()),
                        sols[1].as_ref().map(|x| x[1..].to_vec()),
                    ],
                });
            }
            None => {
                // The whole component is one odd cycle.
                match solve_cycle(k, None, true, &ok) {
                    Some(x) => {
                        for (i, &w) in order.iter().enumerate() {
                            state[w] = x[i];
                            decided[w] = true;
                            alive[w] = false;
                            remaining -= 1;
                        }
                    }
                    None => {
                        return SolveOutcome::NotApplicable(String::from(
                            "no assignment for an isolated cycle",
                        ))
                    }
                }
            }
        }
    }

    // Back-substitution in reverse order: everything a record depends on was
    // recorded later or survives to the end, so it is already decided.
    for p in pending.iter().rev() {
        match p {
            Pending::Complement { child, parent } => {
                if !decided[*parent] {
                    return SolveOutcome::NotApplicable(String::from(
                        "internal: complement parent undecided",
                    ));
                }
                state[*child] = 1 - state[*parent];
                decided[*child] = true;
            }
            Pending::Bundle { gate, members, sols } => {
                if !decided[*gate] {
                    return SolveOutcome::NotApplicable(String::from(
                        "internal: bundle gate undecided",
                    ));
                }
                match &sols[state[*gate] as usize] {
                    Some(x) => {
                        for (i, &w) in members.iter().enumerate() {
                            state[w] = x[i];
                            decided[w] = true;
                        }
                    }
                    None => {
                        return SolveOutcome::NotApplicable(String::from(
                            "gate settled on a state with no cycle assignment",
                        ))
                    }
                }
            }
        }
    }

    let config = Configuration::new(state).expect("binary states");
    if system.is_fixed_point(&config) {
        SolveOutcome::Found(config)
    } else {
        // SN systems always have an equilibrium; an unlucky safe choice may
        // still strand the search, in which case we decline to answer.
        SolveOutcome::NotApplicable(String::from("peeled assignment failed verification"))
    }
}
