use std::path::Path;
use std::process::{Command, Output};

fn minkowski(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minkowski"))
        .args(args)
        .output()
        .expect("failed to launch minkowski")
}

fn csv_row(out: &Output) -> Vec<(String, String)> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let keys = lines.next().unwrap().split(',');
    let values = lines.next().unwrap().split(',');
    keys.zip(values).map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn field(row: &[(String, String)], key: &str) -> f64 {
    row.iter().find(|(k, _)| k == key).unwrap().1.parse().unwrap()
}

fn read_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn constants_at_two() {
    let out = minkowski(&["constants", "--p", "2", "--format", "csv"]);
    assert!(out.status.success());
    let row = csv_row(&out);
    assert!((field(&row, "tau_p") - 0.267_949_19).abs() < 5e-9);
    assert!((field(&row, "sigma_p") - 1.732_050_81).abs() < 5e-9);
    assert!((field(&row, "delta") - 0.866_025_4).abs() < 5e-8);

    let text = String::from_utf8(minkowski(&["constants", "--p", "2"]).stdout).unwrap();
    assert!(text.contains("0.267949"));
    assert!(text.contains("Davis"));
}

#[test]
fn exit_codes() {
    let out = minkowski(&["constants", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p must be ≥ 1"));

    assert_eq!(minkowski(&["constants", "--p", "-3"]).status.code(), Some(2));
    assert_eq!(minkowski(&["constants"]).status.code(), Some(2));
    assert_eq!(minkowski(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(minkowski(&["oracle", "--p", "2", "--grid", "10"]).status.code(), Some(2));

    let out = minkowski(&["sweep", "--out", "/nonexistent-dir/sweep.csv", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = minkowski(&[
        "sweep", "--p-min", "1", "--p-max", "4", "--steps", "301", "--oracle", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let header = std::fs::read_to_string(&path).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "p,class,branch,delta,density,ihma,shma,oracle_delta,oracle_gap");
    let rows = read_rows(&path);
    assert_eq!(rows.len(), 301);

    let density = |r: &Vec<String>| r[4].parse::<f64>().unwrap();
    assert!((density(&rows[0]) - 1.0).abs() < 1e-12);
    let at_two = rows.iter().find(|r| r[0].parse::<f64>().unwrap() == 2.0).unwrap();
    assert!((density(at_two) - 0.906_90).abs() < 1e-3);

    let max_gap = rows.iter().map(|r| r[8].parse::<f64>().unwrap().abs()).fold(0.0, f64::max);
    assert!(max_gap < 1e-6, "max gap {max_gap}");
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str], name: &str| {
        let path = dir.path().join(name);
        let mut full = args.to_vec();
        full.extend(["--out", path.to_str().unwrap()]);
        assert!(minkowski(&full).status.success());
        std::fs::read(path).unwrap()
    };
    let sweep = ["sweep", "--p-min", "1", "--p-max", "6", "--steps", "41", "--m", "1"];
    assert_eq!(run(&sweep, "a.csv"), run(&sweep, "b.csv"));
    for what in ["packing", "hexagons", "moduli"] {
        let args = ["render", "--what", what, "--p", "2.3", "--m", "1"];
        let first = run(&args, "a.svg");
        assert!(first.starts_with(b"<svg"));
        assert_eq!(first, run(&args, "b.svg"));
    }
}

#[test]
fn verify_detects_perturbation() {
    let out = minkowski(&["verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("davis_constant ≈ 2.5725"));

    let out = minkowski(&["verify", "--perturb-tau", "1e-3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[FAIL] contacts_admissibility"));
}

#[test]
fn lattice_and_limits() {
    let row = csv_row(&minkowski(&["lattice", "--p", "3", "--m", "2", "--format", "csv"]));
    assert_eq!(field(&row, "index_in_level0"), 16.0);
    assert_eq!(row.iter().find(|(k, _)| k == "admissible").unwrap().1, "true");

    let row = csv_row(&minkowski(&["limits", "--p", "2", "--x", "3", "--y", "0", "--format", "csv"]));
    assert_eq!(field(&row, "level"), 2.0);
    assert_eq!(field(&row, "index_level3"), 4.0);
}
