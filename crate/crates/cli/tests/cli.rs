use std::path::Path;
use std::process::{Command, Output};

use segment_upgrade::solver::SolverTemplate;
use segment_upgrade::upgrade::SegmentInstance;
use segment_upgrade_cli::bench::{run_bench, BenchConfig};
use segment_upgrade_cli::exit;
use segment_upgrade_cli::report::{BenchmarkReport, Mode};

fn segup(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segup"))
        .args(args)
        .current_dir(dir)
        .env_remove("SEGUP_OUT_DIR")
        .output()
        .expect("run segup")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_solver_reports_the_thirteen_element_basis() {
    let dir = tempfile::tempdir().unwrap();
    let o = segup(dir.path(), &["gen-solver", "--n", "9", "--seed", "3", "--out", "s9.txt"]);
    assert_eq!(o.status.code(), Some(exit::OK), "{o:?}");
    assert!(stdout(&o).contains("reduced basis 13"));
    let t = SolverTemplate::from_text(&std::fs::read_to_string(dir.path().join("s9.txt")).unwrap()).unwrap();
    assert_eq!(t.n, 9);

    let o = segup(dir.path(), &["gen-solver", "--n", "50", "--out", "s50.txt"]);
    let t50 = SolverTemplate::from_text(&std::fs::read_to_string(dir.path().join("s50.txt")).unwrap()).unwrap();
    assert_eq!(o.status.code(), Some(exit::OK));
    assert!(t50.stats.basis_len < t.stats.basis_len);
}

#[test]
fn too_few_segments_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(segup(dir.path(), &["gen-solver", "--n", "8"]).status.code(), Some(exit::USAGE));
    assert_eq!(segup(dir.path(), &["gen-instance", "--n", "8"]).status.code(), Some(exit::USAGE));
    assert_eq!(
        segup(dir.path(), &["gen-solver", "--n", "9", "--order", "grevlex:h1"]).status.code(),
        Some(exit::USAGE)
    );
}

#[test]
fn gen_instance_honours_the_output_directory_variable() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_segup"))
        .args(["gen-instance", "--n", "9", "--seed", "2"])
        .env("SEGUP_OUT_DIR", dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(exit::OK), "{o:?}");
    let path = dir.path().join("out/instance-template-n9-s2.txt");
    let inst = SegmentInstance::from_text(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!((inst.n(), inst.kind.as_str()), (9, "template"));
}

#[test]
fn exact_solve_succeeds_with_small_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    segup(d, &["gen-solver", "--n", "12", "--seed", "1", "--out", "s.txt"]);
    segup(d, &["gen-instance", "--n", "12", "--seed", "5", "--kind", "float", "--out", "x.txt"]);
    let o = segup(d, &["solve", "--solver", "s.txt", "--instance", "x.txt"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(exit::OK), "{out}");
    assert_eq!(out.matches("solution (").count(), 4);
    assert!(out.contains("outcome success"));
    for line in out.lines().filter(|l| l.contains("max |d - d'|")) {
        let r: f64 = line.split_whitespace().nth(4).unwrap().parse().unwrap();
        assert!(r < 1e-9, "{line}");
    }
}

#[test]
fn noisy_solve_reports_no_real_solution() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    segup(d, &["gen-solver", "--n", "25", "--out", "s.txt"]);
    let args = ["gen-instance", "--n", "25", "--seed", "1000", "--kind", "float", "--sigma", "0.001", "--out", "x.txt"];
    segup(d, &args);
    let o = segup(d, &["solve", "--solver", "s.txt", "--instance", "x.txt"]);
    assert_eq!(o.status.code(), Some(exit::NO_REAL_SOLUTION));
    assert!(stdout(&o).contains("outcome no-real-solution"));
}

#[test]
fn mismatched_segment_counts_are_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    segup(d, &["gen-solver", "--n", "9", "--out", "s.txt"]);
    segup(d, &["gen-instance", "--n", "10", "--kind", "float", "--out", "x.txt"]);
    let o = segup(d, &["solve", "--solver", "s.txt", "--instance", "x.txt"]);
    assert_eq!(o.status.code(), Some(exit::USAGE));
    let o = segup(d, &["solve", "--solver", "missing.txt", "--instance", "x.txt"]);
    assert_eq!(o.status.code(), Some(exit::IO));
}

#[test]
fn bench_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = |name: &str| {
        let args = [
            "bench", "--mode", "exact", "--n", "25", "--solvers", "2", "--datasets", "2", "--out", name,
        ];
        assert_eq!(segup(d, &args).status.code(), Some(exit::OK));
        std::fs::read(d.join(name)).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
    let o = segup(d, &["bench", "--mode", "noise", "--n", "25", "--solvers", "2", "--datasets", "3", "--format", "md"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    let md = std::fs::read_to_string(d.join("bench-noise.md")).unwrap();
    assert!(md.contains("solver    0") && md.contains("| success rate |"));
}

#[test]
fn aggregates_recompute_from_persisted_records() {
    let mut c = BenchConfig::new(Mode::Exact, vec![25, 50]);
    c.solvers = 2;
    c.datasets = 2;
    let r = run_bench(&c).unwrap();
    assert_eq!(r.records.len(), 8);
    let back = BenchmarkReport::from_csv(&r.to_csv()).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.aggregates(), r.aggregates());
    assert!(r.aggregates().iter().all(|a| a.success_rate >= 0.5));
}
