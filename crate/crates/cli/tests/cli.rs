use std::path::Path;
use std::process::{Command, Output};

fn fracmatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracmatch")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn run_consistent_instance_reaches_c() {
    let o = fracmatch(&["run", "--instance", "consistent:4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("min ratio: c (0.5914…)"), "{text}");
    assert!(text.contains("invariants: pass"));
    assert!(text.contains("opt: 6"));
}

#[test]
fn missing_instance_file_is_a_config_error() {
    assert_eq!(code(&fracmatch(&["run", "--instance", "file:missing.txt"])), 2);
    assert_eq!(code(&fracmatch(&["run", "--instance", "no-such-builtin"])), 2);
    assert_eq!(code(&fracmatch(&["run"])), 2);
}

#[test]
fn degree_four_streams_are_rejected_by_the_engine() {
    assert_eq!(code(&fracmatch(&["run", "--instance", "degree4"])), 2);
}

#[test]
fn batch_checkpoints_give_one_ratio_line_per_batch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.jsonl");
    let o = fracmatch(&["run", "--instance", "consistent:50", "--checkpoints", "batch", "--trace", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let lines: Vec<serde_json::Value> = std::fs::read_to_string(&path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let arrivals = lines.iter().filter(|l| l.get("kind").is_some()).count();
    let ratios: Vec<&serde_json::Value> = lines.iter().filter(|l| l.get("ratio").is_some()).collect();
    assert_eq!(arrivals, 195);
    // First edge, 49 rounds, then the spokes.
    assert_eq!(ratios.len(), 51);
    assert!(lines.iter().filter(|l| l.get("kind").is_some()).all(|l| l["invariants"] == "pass"));
    assert_eq!(ratios.last().unwrap()["opt"], 98);
}

#[test]
fn traces_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let read = |name: &str| {
        let path = dir.path().join(name);
        let o = fracmatch(&["run", "--instance", "random:5:40", "--trace", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        (std::fs::read(&path).unwrap(), o.stdout)
    };
    assert_eq!(read("a.jsonl"), read("b.jsonl"));
}

#[test]
fn instance_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.inst");
    let stream = fracmatch::instances::builtin("consistent:6").unwrap();
    fracmatch::instances::save_instance(&stream, &path).unwrap();
    let o = fracmatch(&["run", "--instance", &format!("file:{}", path.display())]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("min ratio: c"));
}

#[test]
fn fuzz_passes_and_reports_counts() {
    let o = fracmatch(&["fuzz", "--count", "1000", "--edges", "40", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("fuzz: 1000 runs, 40000 arrivals, 0 failures"));
    let o = fracmatch(&["fuzz", "--count", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("fuzz: 0 runs"));
}

#[test]
fn injected_fault_exits_three_with_seed() {
    let o = fracmatch(&["fuzz", "--count", "3", "--edges", "12", "--seed", "77", "--inject-fault"]);
    assert_eq!(code(&o), 3);
    let text = stdout(&o);
    assert!(text.contains("first failure: seed 77"), "{text}");
    assert!(text.contains("run --instance random:77:12"));
}

#[test]
fn bounds_print_exact_values_and_dump_programs() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.lp");
    let o = fracmatch(&["bounds", "--dump", target.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("minindex: 5/9 = 0.5556"), "{text}");
    assert!(text.contains("integral-deg3: 18/31 = 0.580645 ≈ 0.58065"), "{text}");
    assert!(text.contains("degree4: 3/5"), "{text}");
    for name in ["minindex", "integral-deg3", "degree4"] {
        let p = dir.path().join(format!("out-{name}.lp"));
        let lp = fracmatch::lp::LinearProgram::parse(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert!(!lp.constraints().is_empty());
    }
    assert!(!Path::new(&target).exists());
}

#[test]
fn minindex_families() {
    let o = fracmatch(&["minindex", "--family", "1", "--n", "2", "--p", "5/9,3/9,1/9,0"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("sizes: 7,10,6,4"), "{text}");
    assert!(text.contains("E[|M|]: 71/9"));
    let o = fracmatch(&["minindex", "--family", "2", "--n", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("opt: 6"));
}

#[test]
fn invalid_probabilities_exit_two() {
    assert_eq!(code(&fracmatch(&["minindex", "--family", "1", "--n", "2", "--p", "1/2,1/3"])), 2);
    assert_eq!(code(&fracmatch(&["minindex", "--family", "1", "--n", "2", "--p", "-1,2"])), 2);
    assert_eq!(code(&fracmatch(&["minindex", "--family", "1", "--n", "2", "--p", "x"])), 2);
    assert_eq!(code(&fracmatch(&["minindex", "--family", "3", "--n", "2"])), 2);
}

#[test]
fn minindex_trace_has_one_line_per_edge() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.jsonl");
    let o = fracmatch(&["minindex", "--family", "1", "--n", "3", "--trace", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 39);
    assert!(text.lines().all(|l| l.contains("placed_index") || l.contains("rejected")));
}

#[test]
fn oracle_matches_declared_sizes() {
    let o = fracmatch(&["oracle", "--instance", "degree4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("opt: 1,2,4,6,8,10,11,"), "{text}");
    assert!(text.contains("expected: match"));
    let o = fracmatch(&["oracle", "--instance", "consistent:3", "--checkpoints", "arrival"]);
    assert_eq!(code(&o), 0);
}
