//! Inverted-threshold graphical dynamical systems for networked
//! anti-coordination games.
//!
//! A system is a graph plus a per-vertex threshold `tau1`: the local function
//! of vertex `v` outputs 1 iff at least `tau1(v)` of its inputs are 0. Inputs
//! are the open neighborhood (self non-essential, SN) or the closed
//! neighborhood (self essential, SE). Fixed points of the dynamics are the
//! pure Nash equilibria of the underlying anti-coordination game.
//!
//! The crate provides:
//! - [`graph`] / [`system`]: instances, local-function evaluation, validation
//! - [`dynamics`]: synchronous and sequential stepping with limit-cycle
//!   detection
//! - [`potential`]: the two potential families certifying convergence bounds
//! - [`solvers`]: the general SN equilibrium finder and the four
//!   special-case solvers (nand/nor, DAG, even-cycle-free, complete graph)
//! - [`reduction`]: the constructive 3SAT-to-fixed-point gadget builder with
//!   parsimony verification
//! - [`enumerate`]: brute-force phase-space oracle for small instances
//!
//! The crate is `no_std` (with `alloc`) so the algorithmic core stays free of
//! platform dependencies; IO, random generation, and the CLI live in the
//! companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod enumerate;
pub mod graph;
pub mod potential;
pub mod reduction;
pub mod solvers;
pub mod system;

pub use dynamics::{avg_flip_rate, simulate, step_seq, step_sync, Scheme, Terminal, Trace};
pub use graph::{Graph, GraphError};
pub use solvers::SolveOutcome;
pub use system::{Configuration, Mode, Permutation, SystemError, ThresholdSystem};
