use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn tlvc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlvc"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const GRID: &str = "rows = 4\ncols = 4\nwalls = [[1, 1]]\nregion.r = [3, 3, 3, 3]\nregion.q = [0, 0, 3, 3]\nregion.b = [1, 2, 2, 2]\n";

fn workspace() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("grid.toml"), GRID).unwrap();
    dir
}

fn heatmap_values(path: &Path) -> Vec<f64> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect()
}

#[test]
fn parse_prints_json_ast() {
    let d = workspace();
    fs::write(d.path().join("s.tl"), "F r & G q\n").unwrap();
    let o = tlvc(d.path(), &["parse", "s.tl", "--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object() || v.is_array());
}

#[test]
fn parse_error_has_caret_and_exit_one() {
    let d = workspace();
    let o = tlvc(d.path(), &["parse", "-e", "F ("]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains('^'), "{err}");
    assert!(err.contains("column 4"), "{err}");
}

#[test]
fn negated_temporal_is_a_fragment_error() {
    let d = workspace();
    let o = tlvc(d.path(), &["parse", "--normalize", "-e", "!F a"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FragmentError(NegatedTemporal)"), "{}", stderr(&o));
}

#[test]
fn missing_spec_file_is_a_user_error() {
    let d = workspace();
    let o = tlvc(d.path(), &["parse", "nope.tl"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn compile_counts_value_nodes() {
    let d = workspace();
    let o = tlvc(d.path(), &["compile", "-e", "F r1 & F r2 & G q", "--dot"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("value nodes: 3"), "{}", stdout(&o));
    assert!(d.path().join("out/dvg.json").exists());
    assert!(d.path().join("out/dvg.dot").exists());
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.path().join("out/dvg.json")).unwrap()).unwrap();
    assert!(json.is_object());
}

#[test]
fn compile_reports_two_node_loop() {
    let d = workspace();
    let o = tlvc(d.path(), &["compile", "-e", "G(F a & F b)"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("loop: 2"), "{s}");
    assert!(s.contains("largest loop scc: 2"), "{s}");
}

#[test]
fn missing_env_file_exits_one() {
    let d = workspace();
    let o = tlvc(d.path(), &["--env", "absent.toml", "compile", "-e", "F r"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn unknown_atom_in_env_is_rejected() {
    let d = workspace();
    let o = tlvc(d.path(), &["--env", "grid.toml", "solve", "-e", "F zz"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn bad_gamma_schedule_is_rejected() {
    let d = workspace();
    let o = tlvc(d.path(), &["--env", "grid.toml", "--gamma", "0.99,0.9", "solve", "-e", "F r"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn safe_everywhere_gives_constant_heatmap() {
    let d = workspace();
    let o = tlvc(d.path(), &["--env", "grid.toml", "solve", "-e", "G true"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = heatmap_values(&d.path().join("out/heatmap_root.csv"));
    assert_eq!(v.len(), 15);
    assert!(v.iter().all(|&x| x == 1.0), "{v:?}");

    // A region covering the grid scores its interior level everywhere.
    let o = tlvc(d.path(), &["--env", "grid.toml", "--out", "q", "solve", "-e", "G q"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = heatmap_values(&d.path().join("q/heatmap_root.csv"));
    assert!(v.iter().all(|&x| x == v[0]), "{v:?}");
    assert!(v[0] > 0.0);
}

fn csv_values(path: &Path) -> Vec<(String, usize, f64)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn canoe_root_is_strictly_below_both_objectives() {
    let d = workspace();
    let value = |spec: &str, out: &str| -> f64 {
        let o = tlvc(d.path(), &["--env", "builtin:canoe", "--out", out, "solve", "-e", spec]);
        assert!(o.status.success(), "{}", stderr(&o));
        let root = stdout(&o).lines().find_map(|l| l.strip_prefix("root: ").map(str::to_string)).unwrap();
        csv_values(&d.path().join(out).join("values.csv"))
            .into_iter()
            .find(|(n, x, _)| *n == root && *x == 0)
            .unwrap()
            .2
    };
    let both = value("F r & G q", "a");
    let fr = value("F r", "b");
    let gq = value("G q", "c");
    assert!(both < fr.min(gq), "{both} vs {fr} {gq}");
    assert!(both <= -0.05 && fr >= 0.05 && gq >= 0.05);
}

#[test]
fn solve_is_bitwise_reproducible() {
    let d = workspace();
    for out in ["a", "b"] {
        let o = tlvc(d.path(), &["--env", "grid.toml", "--out", out, "solve", "-e", "F r & F b & G !q"]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for f in ["values.csv", "values.bin", "heatmap_root.csv"] {
        assert_eq!(fs::read(d.path().join("a").join(f)).unwrap(), fs::read(d.path().join("b").join(f)).unwrap(), "{f}");
    }
}

fn robustness(o: &Output) -> f64 {
    stdout(o).lines().find_map(|l| l.strip_prefix("robustness: ")).unwrap().parse().unwrap()
}

#[test]
fn rollout_reaches_both_goals() {
    let d = workspace();
    let o = tlvc(d.path(), &["--env", "grid.toml", "rollout", "-e", "F r & F b", "--x0", "0,0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(robustness(&o) > 0.0);
    assert!(stdout(&o).contains("satisfied: true"));
    let trace = fs::read_to_string(d.path().join("out/trace.csv")).unwrap();
    assert!(trace.starts_with("t,state,row,col,active,action,trigger"));
}

#[test]
fn infeasible_start_reports_negative_robustness() {
    let d = workspace();
    let grid = "rows = 1\ncols = 3\nwalls = [[0, 1]]\nregion.r = [0, 2, 0, 2]\n";
    fs::write(d.path().join("split.toml"), grid).unwrap();
    let o = tlvc(d.path(), &["--env", "split.toml", "rollout", "-e", "F r", "--x0", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(robustness(&o) < 0.0);
    assert!(stdout(&o).contains("satisfied: false"));
}

#[test]
fn horizon_one_on_absorbing_state_scores_the_atom() {
    let d = workspace();
    let grid = "rows = 1\ncols = 1\nregion.q = [0, 0, 0, 0]\n";
    fs::write(d.path().join("one.toml"), grid).unwrap();
    let o = tlvc(d.path(), &["--env", "one.toml", "rollout", "-e", "G q", "--horizon", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(robustness(&o), 0.5);
}

#[test]
fn rollout_start_out_of_range_is_a_user_error() {
    let d = workspace();
    let o = tlvc(d.path(), &["--env", "grid.toml", "rollout", "-e", "F r", "--x0", "99"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_reports_no_sign_disagreements() {
    let d = workspace();
    let o = tlvc(d.path(), &["--env", "grid.toml", "verify", "-e", "F r & G !b", "--samples", "50"]);
    let s = stdout(&o);
    assert!(s.contains("sign disagreements: 0"), "{s}{}", stderr(&o));
    assert!(o.status.success(), "{s}");
    assert!(s.ends_with("result: PASS\n"));
    assert!(s.starts_with("tlvc verify seed=0"));
}

#[test]
fn verify_contraction_self_test_passes() {
    let d = workspace();
    let o = tlvc(d.path(), &["--env", "grid.toml", "verify", "-e", "F r", "--samples", "0", "--contraction", "200"]);
    let s = stdout(&o);
    assert!(s.contains("violations avoid=0 reach-avoid=0 loop=0"), "{s}");
}

#[test]
fn verify_output_is_deterministic() {
    let d = workspace();
    let run = |out: &str| {
        let _ = tlvc(d.path(), &["--env", "grid.toml", "--seed", "7", "--out", out, "verify", "-e", "F r & F b", "--samples", "30"]);
        fs::read(d.path().join(out).join("verify.txt")).unwrap()
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn jobs_flag_does_not_change_results() {
    let d = workspace();
    for (out, jobs) in [("a", "1"), ("b", "3")] {
        let o = tlvc(d.path(), &["--env", "grid.toml", "--jobs", jobs, "--out", out, "solve", "-e", "F r & F b"]);
        assert!(o.status.success());
    }
    assert_eq!(fs::read(d.path().join("a/values.bin")).unwrap(), fs::read(d.path().join("b/values.bin")).unwrap());
}
