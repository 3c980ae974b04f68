use std::path::Path;
use std::process::{Command, Output};

fn tlsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlsr"))
        .args(args)
        .output()
        .expect("spawn tlsr")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bounds_prints_default_ratio() {
    let o = tlsr(&["bounds", "--cs", "9", "--cc", "30"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("763/270 ≈ 2.825926"), "{}", stdout(&o));
    assert!(stderr(&o).starts_with("config: {"));
}

#[test]
fn bounds_with_trust_and_error() {
    let o = tlsr(&[
        "bounds", "--cs", "9", "--cc", "30", "--theta", "1/2", "--eta", "0", "--opt", "30",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("ladtsr bound: 7/4 ≈ 1.750000"), "{out}");
    assert!(out.contains("robustness bound: 11 ≈ 11.000000"), "{out}");
}

#[test]
fn run_baseline_on_item_bursts() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("bursts.csv");
    let mut body = String::from("t,item,amount\n");
    for k in 1..=20 {
        body.push_str(&format!("{k},{k},9\n"));
    }
    std::fs::write(&trace, body).unwrap();

    let o = tlsr(&[
        "run",
        "--trace",
        path_str(&trace),
        "--algo",
        "dtsr",
        "--cs",
        "9",
        "--cc",
        "30",
        "--k",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("total: 180\n"), "{out}");
    assert!(out.contains("opt: 30\n"), "{out}");
    assert!(out.contains("ratio: 6 ≈ 6.000000"), "{out}");

    let o = tlsr(&[
        "run",
        "--trace",
        path_str(&trace),
        "--algo",
        "rdtsr",
        "--k",
        "20",
    ]);
    let out = stdout(&o);
    assert!(out.contains("total: 57\n"), "{out}");
}

#[test]
fn gen_then_run_learned_policy() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    let pred = dir.path().join("p.csv");
    let o = tlsr(&[
        "gen",
        "--kind",
        "long-tailed",
        "--k",
        "6",
        "--multi-unit",
        "--seed",
        "5",
        "--out",
        path_str(&trace),
        "--pred-out",
        path_str(&pred),
        "--bias",
        "-3",
        "--noise",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("t,item,amount\n") && text.ends_with('\n'));
    assert!(std::fs::read_to_string(&pred)
        .unwrap()
        .starts_with("item,y\n"));

    let o = tlsr(&[
        "run",
        "--trace",
        path_str(&trace),
        "--algo",
        "ladtsr",
        "--theta",
        "0.5",
        "--pred",
        path_str(&pred),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    for key in [
        "algo: ladtsr:theta=1/2",
        "rent: ",
        "single: ",
        "combo: ",
        "total: ",
        "opt: ",
        "ratio: ",
    ] {
        assert!(out.contains(key), "missing {key:?} in {out}");
    }
}

#[test]
fn sweep_cc_is_repeatable_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let json = dir.path().join("a.json");
    let common = [
        "sweep-cc", "--cs", "9", "--cc", "15:40:5", "--count", "300", "--seed", "7",
    ];
    let mut args_a: Vec<&str> = common.to_vec();
    args_a.extend([
        "--jobs",
        "1",
        "--out",
        path_str(&a),
        "--json",
        path_str(&json),
    ]);
    let mut args_b: Vec<&str> = common.to_vec();
    args_b.extend(["--jobs", "4", "--out", path_str(&b)]);
    assert_eq!(tlsr(&args_a).status.code(), Some(0));
    assert_eq!(tlsr(&args_b).status.code(), Some(0));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("axis,algo,count,skipped,empirical_cr,avg_ratio,bound\n"));
    assert_eq!(text.lines().count(), 1 + 6 * 2);

    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["meta"]["seed"], 7);
    assert_eq!(v["results"].as_array().unwrap().len(), 6);
}

#[test]
fn sweep_theta_labels_endpoints() {
    let o = tlsr(&[
        "sweep-theta",
        "--count",
        "50",
        "--biases",
        "-10,0,10",
        "--thetas",
        "0,1/2,1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains(",ladtsr:theta=0:ftp,"));
    assert!(out.contains(",ladtsr:theta=1:rdtsr,"));
    assert!(out.contains("-10,ladtsr:theta=1/2,"));
}

#[test]
fn oracle_check_passes() {
    let o = tlsr(&["oracle-check", "--random", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.contains("exhaustive grid: 14005/14005 agree (pass)"),
        "{out}"
    );
    assert!(
        out.contains("random instances: 200/200 agree (pass)"),
        "{out}"
    );
}

#[test]
fn validation_errors_exit_one_with_one_line() {
    for args in [
        &["bounds", "--cs", "9", "--cc", "60", "--k", "6"][..],
        &["sweep-cc", "--cc", "40:15"][..],
        &["sweep-theta", "--thetas", "2"][..],
        &["run", "--trace", "x.csv", "--algo", "lru"][..],
        &["bounds", "--frobnicate"][..],
    ] {
        let o = tlsr(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = stderr(&o);
        let msgs: Vec<&str> = err.lines().filter(|l| !l.starts_with("config:")).collect();
        assert_eq!(msgs.len(), 1, "{args:?}: {err}");
    }
}

#[test]
fn missing_files_exit_two() {
    let o = tlsr(&["run", "--trace", "/nonexistent/dir/trace.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent/dir/trace.csv"));
}

#[test]
fn malformed_trace_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("bad.csv");
    std::fs::write(&trace, "t,item,amount\n1,1,2\n2,9,1\n").unwrap();
    let o = tlsr(&["run", "--trace", path_str(&trace)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.csv:3"), "{}", stderr(&o));
}

#[test]
fn help_documents_defaults() {
    let o = tlsr(&["sweep-cc", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for flag in [
        "--cs",
        "--cc",
        "--count",
        "--seed",
        "--jobs",
        "--out",
        "--json",
        "--multi-unit",
    ] {
        assert!(out.contains(flag), "help lacks {flag}");
    }
    assert!(out.contains("[default: 15:40]"));
}
