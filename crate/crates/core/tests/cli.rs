use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn motexp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motexp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn eval_gauss_sum() {
    let spec = fixture("gauss.spec");
    let o = motexp(&["eval", spec.to_str().unwrap(), "--field", "mixed,5,1,6", "--psi", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!stdout(&o).is_empty());
}

#[test]
fn eval_reports_parse_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.spec");
    std::fs::write(&bad, "class exp\nvars { x: VF }\nsummand { g: x + }\n").unwrap();
    let o = motexp(&["eval", bad.to_str().unwrap(), "--field", "eq,5,1,6", "--x", "t"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.spec:3:"), "{}", stderr(&o));
}

#[test]
fn sweep_writes_reproducible_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = [
        "sweep".to_string(),
        "bound".into(),
        fixture("polar_multi.spec").to_str().unwrap().to_string(),
        fixture("two.spec").to_str().unwrap().to_string(),
        "--config".into(),
        fixture("sweep.config").to_str().unwrap().to_string(),
        "--pmax".into(),
        "11".into(),
        "--out".into(),
        out.into(),
    ];
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = motexp(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let first = std::fs::read_to_string(dir.path().join("bound.json")).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("bound.csv")).unwrap();
    assert!(csv.starts_with("statement,p,field,depth,grid_size,hypothesis_ok,min_N,violations,flags"));
    assert_eq!(csv.lines().count(), 1 + 3 * 2);
    let json: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["manifest"]["seed"], 42);
    assert_eq!(json["summary"]["violated"], false);

    let o = motexp(&args);
    assert!(o.status.success());
    assert_eq!(first, std::fs::read_to_string(dir.path().join("bound.json")).unwrap());
}

#[test]
fn sweep_rejects_oscillating_bound() {
    let dir = tempfile::tempdir().unwrap();
    let o = motexp(&[
        "sweep",
        "bound",
        fixture("one.spec").to_str().unwrap(),
        fixture("bad_not_ce.spec").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("must be in"), "{}", stderr(&o));
}

#[test]
fn factor_collision_exits_with_violation() {
    let dir = tempfile::tempdir().unwrap();
    let spec = fixture("factor_shifted.spec");
    let base = [
        "sweep",
        "factor",
        spec.to_str().unwrap(),
        "--pmin",
        "7",
        "--pmax",
        "7",
        "--grid",
        "x: vf [0, 0] digits 2",
        "--samples",
        "200",
        "--out",
        dir.path().to_str().unwrap(),
    ];
    assert_eq!(motexp(&base).status.code(), Some(1));
    let mut refined = base.to_vec();
    refined.extend(["--profile", "x^2 - 1"]);
    let o = motexp(&refined);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn reduce_asks_for_more_depth() {
    let spec = fixture("polar_depth2.spec");
    let o = motexp(&[
        "reduce",
        spec.to_str().unwrap(),
        "--field",
        "eq,5,1,8",
        "--grid",
        "x: vf [1, 1] digits 2; w: vf inv x",
        "--depth",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("rerun with --depth 2"), "{}", stderr(&o));
}

#[test]
fn lindep_and_fourier_demo_run() {
    let o = motexp(&[
        "lindep",
        fixture("dep_linear.spec").to_str().unwrap(),
        fixture("dep_cube.spec").to_str().unwrap(),
        "--field",
        "eq,5,1,8",
        "--grid",
        "x: vf [1, 3]",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = motexp(&["fourier-demo", "--group", "2,4", "--seed", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(motexp(&["fourier-demo", "--group", "3,4"]).status.code(), Some(2));
    assert_eq!(motexp(&["frobnicate"]).status.code(), Some(2));
}
