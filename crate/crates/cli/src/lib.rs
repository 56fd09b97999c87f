//! Std companion to the core engine: synthetic network generation, file
//! formats, and the experiment harness behind the `anticoord` binary.

pub mod experiments;
pub mod gen;
pub mod io;

pub use experiments::{ExperimentResult, RunRecord, SchemeKind, SweepRow};
pub use gen::{generate, random_config, random_thresholds, GeneratorSpec};
pub use io::{read_edge_list, read_instance, write_edge_list, write_instance};
