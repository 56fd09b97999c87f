//! Generator statistics, format round-trips, and binary smoke tests.

use anticoord::gen::{generate, random_config, random_thresholds, GeneratorSpec};
use anticoord::io;
use anticoord_core::{Graph, Mode, ThresholdSystem};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_anticoord"))
}

fn tmp_path(name: &str) -> std::path::PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("anticoord-test-{}-{}", std::process::id(), name));
    p
}

#[test]
fn generators_are_deterministic() {
    let specs = [
        GeneratorSpec::Gnp { n: 50, p: 0.2 },
        GeneratorSpec::BarabasiAlbert { n: 50, attach_count: 2 },
        GeneratorSpec::WattsStrogatz { n: 50, k: 4, rewire_prob: 0.3 },
    ];
    for spec in &specs {
        let a = generate(spec, 99).unwrap();
        let b = generate(spec, 99).unwrap();
        assert_eq!(a.edges(), b.edges(), "{:?}", spec);
        let c = generate(spec, 100).unwrap();
        assert_ne!(a.edges(), c.edges(), "{:?} ignored the seed", spec);
    }
}

#[test]
fn gnp_extremes() {
    let empty = generate(&GeneratorSpec::Gnp { n: 10, p: 0.0 }, 1).unwrap();
    assert_eq!(empty.m(), 0);
    let full = generate(&GeneratorSpec::Gnp { n: 10, p: 1.0 }, 1).unwrap();
    assert_eq!(full.m(), 45);
    assert!(full.is_complete());
}

#[test]
fn gnp_edge_count_concentration() {
    // n=1000, p=0.02: mean 9990, sigma ~98.9; stay within 5 sigma.
    let g = generate(&GeneratorSpec::Gnp { n: 1000, p: 0.02 }, 7).unwrap();
    let mean: f64 = 0.02 * 999.0 * 500.0;
    let sigma = (mean * 0.98).sqrt();
    let m = g.m() as f64;
    assert!((m - mean).abs() < 5.0 * sigma, "m = {}", m);
}

#[test]
fn barabasi_albert_edge_count() {
    // Clique on a vertices plus a edges per later vertex.
    let g = generate(&GeneratorSpec::BarabasiAlbert { n: 100, attach_count: 3 }, 3).unwrap();
    assert_eq!(g.m(), 3 + 3 * 97);
    let g1 = generate(&GeneratorSpec::BarabasiAlbert { n: 40, attach_count: 1 }, 3).unwrap();
    assert_eq!(g1.m(), 39);
}

#[test]
fn watts_strogatz_preserves_edge_count() {
    for &rewire in &[0.0, 0.3, 1.0] {
        let g = generate(&GeneratorSpec::WattsStrogatz { n: 30, k: 4, rewire_prob: rewire }, 11)
            .unwrap();
        assert_eq!(g.m(), 30 * 2, "rewire = {}", rewire);
    }
    let lattice =
        generate(&GeneratorSpec::WattsStrogatz { n: 10, k: 4, rewire_prob: 0.0 }, 0).unwrap();
    for v in 0..10 {
        assert_eq!(lattice.degree(v), 4);
    }
}

#[test]
fn generator_parameter_validation() {
    assert!(generate(&GeneratorSpec::Gnp { n: 10, p: 1.5 }, 0).is_err());
    assert!(generate(&GeneratorSpec::WattsStrogatz { n: 10, k: 3, rewire_prob: 0.1 }, 0).is_err());
    assert!(generate(&GeneratorSpec::WattsStrogatz { n: 4, k: 4, rewire_prob: 0.1 }, 0).is_err());
    assert!(generate(&GeneratorSpec::BarabasiAlbert { n: 3, attach_count: 3 }, 0).is_err());
}

#[test]
fn threshold_draws_are_uniform_per_vertex() {
    // Vertex 0 of K4 has degree 3; under SN its threshold is uniform on
    // {1,2,3}. Chi-squared over 10^4 seeds with 2 dof; 16.0 is far past the
    // 0.1% tail.
    let g = Graph::complete(4);
    let mut counts = [0usize; 3];
    for seed in 0..10_000u64 {
        let (tau, warnings) = random_thresholds(&g, Mode::SelfNonEssential, seed);
        assert!(warnings.is_empty());
        counts[tau[0] - 1] += 1;
    }
    let expected = 10_000.0 / 3.0;
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    assert!(chi2 < 16.0, "chi2 = {}, counts = {:?}", chi2, counts);
}

#[test]
fn threshold_ranges_respect_mode() {
    let g = generate(&GeneratorSpec::Gnp { n: 40, p: 0.2 }, 5).unwrap();
    for seed in 0..50 {
        let (se, _) = random_thresholds(&g, Mode::SelfEssential, seed);
        let (sn, _) = random_thresholds(&g, Mode::SelfNonEssential, seed);
        for v in 0..g.n() {
            let d = g.degree(v);
            assert!((1..=d + 1).contains(&se[v]));
            assert!((1..=d.max(1)).contains(&sn[v]));
        }
    }
}

#[test]
fn isolated_vertex_under_sn_is_warned() {
    let g = Graph::undirected(3, vec![(0, 1)]).unwrap();
    let (tau, warnings) = random_thresholds(&g, Mode::SelfNonEssential, 0);
    assert_eq!(tau[2], 1);
    assert_eq!(warnings.len(), 1);
    assert!(warnings[0].contains("vertex 2"));
}

#[test]
fn random_config_extremes_and_balance() {
    let zeros = random_config(50, 1.0, 9).unwrap();
    assert!(zeros.states().iter().all(|&s| s == 0));
    let ones = random_config(50, 0.0, 9).unwrap();
    assert!(ones.states().iter().all(|&s| s == 1));
    let half = random_config(10_000, 0.5, 42).unwrap();
    let frac = half.states().iter().filter(|&&s| s == 0).count() as f64 / 10_000.0;
    assert!((frac - 0.5).abs() < 0.02, "zero fraction = {}", frac);
    assert!(random_config(10, 1.5, 0).is_err());
}

#[test]
fn edge_list_round_trip() {
    let g = generate(&GeneratorSpec::Gnp { n: 30, p: 0.2 }, 13).unwrap();
    let text = io::write_edge_list(&g);
    let back = io::read_edge_list(&text).unwrap();
    assert_eq!(g.n(), back.n());
    assert_eq!(g.edges(), back.edges());
}

#[test]
fn edge_list_parsing() {
    let g = io::read_edge_list("# a path\n0 1\n1 2\n").unwrap();
    assert_eq!(g.n(), 3);
    assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    match io::read_edge_list("a b\n") {
        Err(io::FormatError::Line { line: 1, .. }) => {}
        other => panic!("expected line-1 error, got {:?}", other.map(|g| g.n())),
    }
    match io::read_edge_list("0 1\n2 2\n") {
        Err(io::FormatError::Line { line: 2, .. }) => {}
        other => panic!("expected line-2 error, got {:?}", other.map(|g| g.n())),
    }
}

#[test]
fn instance_json_round_trip() {
    let graph = Graph::complete_bipartite(3, 3);
    let sys = ThresholdSystem::new(graph, vec![3; 6], Mode::SelfEssential).unwrap();
    let json = io::write_instance(&sys);
    let back = io::read_instance(&json).unwrap();
    assert_eq!(back.mode(), sys.mode());
    assert_eq!(back.tau1_vec(), sys.tau1_vec());
    assert_eq!(back.graph().edges(), sys.graph().edges());
    assert_eq!(io::write_instance(&back), json);
}

#[test]
fn cli_gen_is_byte_deterministic() {
    let run = || {
        bin()
            .args(["gen", "--model", "ws", "--n", "24", "--k", "4", "--rewire", "0.2", "--seed", "8"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cli_simulate_emits_csv_and_sidecar() {
    let out = tmp_path("sim.csv");
    let status = bin()
        .args([
            "simulate", "--model", "gnp", "--n", "40", "--p", "0.2", "--mode", "sn", "--scheme",
            "seq", "--trials", "4", "--seed", "3", "--p-zero-grid", "0.2,0.8",
        ])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance,seed,mode,scheme,p_zero,steps,terminal,avg_flip_rate"
    );
    assert_eq!(lines.count(), 8);
    let sidecar = std::fs::read_to_string(out.with_extension("json")).unwrap();
    assert!(sidecar.contains("\"seed\": 3"));
    assert!(sidecar.contains("--p-zero-grid"));
    let _ = std::fs::remove_file(&out);
    let _ = std::fs::remove_file(out.with_extension("json"));
}

#[test]
fn cli_exit_codes() {
    // Usage errors -> 1.
    let usage = bin().args(["simulate", "--bogus-flag"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
    // Missing input file -> 2.
    let missing = bin()
        .args(["solve", "--instance", "/nonexistent/x.json"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
    // Enumeration cap -> 3.
    let budget = bin().args(["count-ne", "--n", "30", "--instances", "1"]).output().unwrap();
    assert_eq!(budget.status.code(), Some(3));
}

#[test]
fn cli_solve_reports_outcome() {
    let graph = Graph::cycle(5);
    let sys = ThresholdSystem::new(graph, vec![2; 5], Mode::SelfEssential).unwrap();
    let path = tmp_path("c5.json");
    std::fs::write(&path, io::write_instance(&sys)).unwrap();
    let output = bin()
        .args(["solve", "--solver", "even-cycle-free"])
        .arg("--instance")
        .arg(&path)
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("outcome=no-equilibrium"), "{}", text);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn cli_reduce_reports_parsimony() {
    let path = tmp_path("f.cnf");
    std::fs::write(&path, "c single variable, one clause\np cnf 1 1\n1 0\n").unwrap();
    let output = bin().args(["reduce", "--verify"]).arg("--cnf").arg(&path).output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("vertices=16"), "{}", text);
    assert!(text.contains("#SAT=1 #FP=1 parsimonious=true"), "{}", text);
    let _ = std::fs::remove_file(&path);
}
