use std::path::Path;
use std::process::{Command, Output};

use gridex::adversary::trap_ladder_opt;
use gridex::engine::parse_trace_csv;
use gridex::opt::optimal_cost;
use gridex::{parse_instance, serialize_instance, GridSpec, Instance};

fn gridex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridex"))
        .args(args)
        .env_remove("GRIDEX_STEP_BUDGET")
        .output()
        .expect("spawn gridex")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn field(out: &str, name: &str) -> u64 {
    out.split_whitespace()
        .find_map(|t| t.strip_prefix(&format!("{name}=")))
        .unwrap_or_else(|| panic!("no {name} in {out}"))
        .parse()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_instance(dir: &Path, name: &str, inst: &Instance) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serialize_instance(inst)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn explore_all_ones_ladder_with_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "ones.grid", &Instance::all_ones(GridSpec::ladder(4)));
    let trace = dir.path().join("t.csv");
    let o = gridex(&["explore", "--instance", &inst, "--strategy", "sweep", "--trace", p(&trace)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "cost=7 complete=true\n");
    let steps = parse_trace_csv(&std::fs::read(&trace).unwrap()).unwrap();
    assert_eq!(steps.len(), 7);
    assert_eq!(steps.iter().map(|s| s.weight).sum::<u64>(), 7);
}

#[test]
fn explore_trap_counts_heavy_moves() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("trap.grid");
    let o = gridex(&["gen", "trap-ladder", "--n", "10", "--k", "100", "--out", p(&inst)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let trace = dir.path().join("t.csv");
    let o = gridex(&["explore", "--instance", p(&inst), "--strategy", "greedy", "--trace", p(&trace)]);
    assert!(o.status.success());
    let steps = parse_trace_csv(&std::fs::read(&trace).unwrap()).unwrap();
    let heavy = steps.iter().filter(|s| s.weight == 100).count();
    assert_eq!(heavy, 36);
    let light = steps.len() - heavy;
    assert_eq!(stdout(&o), format!("cost={} complete=true\n", 100 * 36 + light));
}

#[test]
fn missing_instance_is_a_runtime_error() {
    let o = gridex(&["explore", "--instance", "/nonexistent/x.grid", "--strategy", "greedy"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(gridex(&["explore", "--bogus"]).status.code(), Some(1));
    assert_eq!(gridex(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(gridex(&["--help"]).status.code(), Some(0));
}

#[test]
fn unknown_strategy_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "a.grid", &Instance::all_ones(GridSpec::ladder(2)));
    let o = gridex(&["explore", "--instance", &inst, "--strategy", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown strategy"));
}

#[test]
fn opt_small_instances() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "ones.grid", &Instance::all_ones(GridSpec::ladder(6)));
    let witness = dir.path().join("w.csv");
    let o = gridex(&["opt", "--instance", &inst, "--witness", p(&witness)]);
    assert_eq!(stdout(&o), "opt=11\n");
    let steps = parse_trace_csv(&std::fs::read(&witness).unwrap()).unwrap();
    assert_eq!(steps.iter().map(|s| s.weight).sum::<u64>(), 11);
}

#[test]
fn opt_too_large_suggests_replay() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "sq.grid", &Instance::all_ones(GridSpec::undirected(5, 5)));
    let o = gridex(&["opt", "--instance", &inst]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("error:") && err.contains("25") && err.contains("replay"), "{err}");
}

#[test]
fn hard_pair_files_have_opt_eight() {
    let dir = tempfile::tempdir().unwrap();
    let o = gridex(&["gen", "hard-pair", "--k", "5", "--out", p(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    for name in ["I1", "I2"] {
        let path = dir.path().join(format!("{name}.grid"));
        let inst = parse_instance(&std::fs::read(&path).unwrap()).unwrap();
        assert_eq!(optimal_cost(&inst).unwrap().cost, 8);
        let o = gridex(&["opt", "--instance", p(&path)]);
        assert_eq!(stdout(&o), "opt=8\n");
    }
    assert_ne!(
        std::fs::read(dir.path().join("I1.grid")).unwrap(),
        std::fs::read(dir.path().join("I2.grid")).unwrap()
    );
}

#[test]
fn gadget_ladder_validates() {
    let o = gridex(&["gen", "gadget-ladder", "--m", "2", "--k", "5"]);
    assert!(o.status.success());
    let inst = parse_instance(&o.stdout).unwrap();
    assert_eq!((inst.spec.rows, inst.spec.cols), (2, 8));
    assert!(gridex::grid::validate_instance(&inst).is_empty());
    let bad = gridex(&["gen", "gadget-ladder", "--m", "2", "--choices", "F"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn random_generation_is_seeded() {
    let a = gridex(&["gen", "random", "--rows", "3", "--cols", "4", "--seed", "7"]);
    let b = gridex(&["gen", "random", "--rows", "3", "--cols", "4", "--seed", "7"]);
    let c = gridex(&["gen", "random", "--rows", "3", "--cols", "4", "--seed", "8"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn ratio_all_ones_suite_is_one() {
    let dir = tempfile::tempdir().unwrap();
    for n in 1..=5 {
        write_instance(dir.path(), &format!("ones{n}.grid"), &Instance::all_ones(GridSpec::ladder(n)));
    }
    write_instance(dir.path(), "sq3.grid", &Instance::all_ones(GridSpec::undirected(3, 3)));
    let out = dir.path().join("r.csv");
    let glob = format!("{}/*.grid", p(dir.path()));
    let o = gridex(&["ratio", "--instances", &glob, "--strategy", "greedy", "--out", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("instance,strategy,alg_cost,opt_cost,ratio_exact,ratio_decimal,complete,error")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    let mut labels: Vec<&str> = rows.iter().map(|r| r.split(',').next().unwrap()).collect();
    let sorted = labels.clone();
    labels.sort();
    assert_eq!(labels, sorted);
    for r in rows {
        assert!(r.ends_with(",1/1,1.000000,true,"), "{r}");
    }
}

#[test]
fn ratio_is_deterministic_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..6 {
        let path = dir.path().join(format!("r{seed}.grid"));
        let s = seed.to_string();
        gridex(&["gen", "random", "--rows", "2", "--cols", "5", "--seed", &s, "--out", p(&path)]);
    }
    let glob = format!("{}/*.grid", p(dir.path()));
    let one = gridex(&["ratio", "--instances", &glob, "--strategy", "sweep", "--jobs", "1"]);
    let four = gridex(&["ratio", "--instances", &glob, "--strategy", "sweep", "--jobs", "4"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn ratio_trap_ladders() {
    let dir = tempfile::tempdir().unwrap();
    for n in [8u32, 16] {
        let path = dir.path().join(format!("trap{n:02}.grid"));
        let n = n.to_string();
        gridex(&["gen", "trap-ladder", "--n", &n, "--k", "100", "--out", p(&path)]);
    }
    let glob = format!("{}/trap*.grid", p(dir.path()));
    let limited = gridex(&["ratio", "--instances", &glob, "--strategy", "greedy"]);
    assert_eq!(limited.status.code(), Some(2));
    assert!(stdout(&limited).contains("replay a witness walk"));

    let o = gridex(&["ratio", "--instances", &glob, "--strategy", "greedy", "--opt-limit", "32"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    for (row, n, floor) in [(&rows[0], 8u32, 2u64), (&rows[1], 16, 4)] {
        let alg: u64 = row[2].parse().unwrap();
        let opt: u64 = row[3].parse().unwrap();
        assert_eq!(opt, trap_ladder_opt(n, 100));
        assert!(alg >= floor * opt, "n={n}: {alg}/{opt}");
    }
}

#[test]
fn ratio_gadget_ladders_with_sweep_within_four() {
    let dir = tempfile::tempdir().unwrap();
    for m in 1..=3 {
        let path = dir.path().join(format!("g{m}.grid"));
        let m = m.to_string();
        gridex(&["gen", "gadget-ladder", "--m", &m, "--out", p(&path)]);
    }
    let glob = format!("{}/g*.grid", p(dir.path()));
    let o = gridex(&["ratio", "--instances", &glob, "--strategy", "sweep"]);
    assert!(o.status.success(), "{}", stderr(&o));
    for line in stdout(&o).lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (alg, opt): (u64, u64) = (f[2].parse().unwrap(), f[3].parse().unwrap());
        assert!(alg <= 4 * opt, "{line}");
    }
}

#[test]
fn ratio_missing_glob_and_bad_file() {
    let dir = tempfile::tempdir().unwrap();
    let glob = format!("{}/*.grid", p(dir.path()));
    assert_eq!(gridex(&["ratio", "--instances", &glob, "--strategy", "greedy"]).status.code(), Some(2));
    std::fs::write(dir.path().join("bad.grid"), "grid 2 2 SIDEWAYS\n").unwrap();
    let o = gridex(&["ratio", "--instances", &glob, "--strategy", "greedy"]);
    assert_eq!(o.status.code(), Some(2));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(row.contains("bad.grid,greedy,,,,,false,"), "{row}");
}

#[test]
fn minimax_small_ladders() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    let o = gridex(&["minimax", "--rows", "2", "--cols", "2", "--k", "5", "--start", "1,1", "--witness", p(&w)]);
    assert_eq!(stdout(&o), "value=5/4\n");
    let tree = std::fs::read_to_string(&w).unwrap();
    assert!(tree.starts_with("0 pos=1,1 "));
    let o = gridex(&["minimax", "--rows", "2", "--cols", "1", "--k", "1"]);
    assert_eq!(stdout(&o), "value=1/1\n");
    let o = gridex(&["minimax", "--cols", "2", "--k", "5", "--start", "3,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn adaptive_runs() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("a.grid");
    let trace = dir.path().join("a.csv");
    let o = gridex(&[
        "adaptive", "--strategy", "greedy", "--m", "4", "--k", "5",
        "--instance-out", p(&inst), "--trace", p(&trace),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let (cost, opt) = (field(&out, "cost"), field(&out, "opt"));
    // cost / opt >= 11/9 - 2/36
    assert!(36 * cost >= 42 * opt, "{out}");
    let committed = parse_instance(&std::fs::read(&inst).unwrap()).unwrap();
    let steps = parse_trace_csv(&std::fs::read(&trace).unwrap()).unwrap();
    let walk: Vec<_> = std::iter::once(committed.start).chain(steps.iter().map(|s| s.to)).collect();
    assert_eq!(committed.walk_cost(&walk), Some(cost));

    let o = gridex(&["adaptive", "--strategy", "sweep", "--m", "4"]);
    let out = stdout(&o);
    assert!(field(&out, "cost") <= 4 * field(&out, "opt"), "{out}");

    let o = gridex(&["adaptive", "--strategy", "greedy", "--m", "1"]);
    let out = stdout(&o);
    assert!(8 * field(&out, "cost") >= 10 * field(&out, "opt"), "{out}");
}

#[test]
fn step_budget_env_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "ones.grid", &Instance::all_ones(GridSpec::ladder(4)));
    let o = Command::new(env!("CARGO_BIN_EXE_gridex"))
        .args(["explore", "--instance", &inst, "--strategy", "greedy"])
        .env("GRIDEX_STEP_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&o.stdout), "cost=3 complete=false\n");
    let o = Command::new(env!("CARGO_BIN_EXE_gridex"))
        .args(["explore", "--instance", &inst, "--strategy", "greedy"])
        .env("GRIDEX_STEP_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
