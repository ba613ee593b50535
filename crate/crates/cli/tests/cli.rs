use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sicforge::io::ReportBundle;

const BIN: &str = env!("CARGO_BIN_EXE_sicforge");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("SICFORGE_SEED").output().expect("run sicforge")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn solve(dir: &Path, d: usize) -> PathBuf {
    let path = dir.join(format!("f{d}.json"));
    let out = run(&["solve", "--dim", &d.to_string(), "--seed", "3", "-o", path_str(&path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn basis(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    let mut full = vec!["basis"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path_str(&path)]);
    let out = run(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn check_json(formulation: &str, basis: &Path) -> (i32, ReportBundle) {
    let out = run(&["--json", "check", "--formulation", formulation, path_str(basis)]);
    let bundle = ReportBundle::parse(&String::from_utf8_lossy(&out.stdout)).expect("report/1 output");
    (code(&out), bundle)
}

#[test]
fn solve_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let f = solve(dir.path(), 4);
    let out = run(&["verify", path_str(&f)]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS") && !text.contains("FAIL"), "{text}");
}

#[test]
fn outputs_are_deterministic() {
    let a = run(&["solve", "--dim", "3", "--seed", "9"]);
    let b = run(&["solve", "--dim", "3", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let f = solve(dir.path(), 3);
    let b = basis(dir.path(), "adj", &["--kind", "adjoint", "--fiducial", path_str(&f)]);
    let x = run(&["--json", "check", "--formulation", "all", path_str(&b)]);
    let y = run(&["--json", "check", "--formulation", "all", path_str(&b)]);
    assert_eq!(x.stdout, y.stdout);
    assert!(!String::from_utf8_lossy(&x.stdout).contains("timestamp"));
}

#[test]
fn nonconvergence_exits_two() {
    assert_eq!(code(&run(&["solve", "--dim", "5", "--max-iters", "1", "--restarts", "1"])), 2);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["solve"])), 1);
    assert_eq!(code(&run(&["check", "/nonexistent/basis.json"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let f = solve(dir.path(), 3);
    let out = run(&["basis", "--kind", "lie", "--fiducial", path_str(&f), "--eta", &(-1.0f64 / 3.0).to_string()]);
    assert_eq!(code(&out), 1);
    assert_eq!(code(&run(&["basis", "--kind", "adjoint", "--fiducial", path_str(&f), "--epsilon", "2"])), 1);
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{\"schema\": \"sic-fiducial/1\"}").unwrap();
    assert_eq!(code(&run(&["check", path_str(&garbage)])), 1);
}

#[test]
fn random_basis_fails_all_formulations() {
    let dir = tempfile::tempdir().unwrap();
    let b = basis(dir.path(), "rand", &["--kind", "random", "--dim", "3", "--seed", "5"]);
    let (c, bundle) = check_json("all", &b);
    assert_eq!(c, 2);
    assert!(!bundle.overall);
    let eq = bundle.reports.iter().find(|r| r.check == "equivalence").unwrap();
    assert_eq!(eq.values["passes"], 0.0);
    assert!(eq.verdicts["agree"]);
}

#[test]
fn mixed_sign_lie_basis_is_not_group_type() {
    let dir = tempfile::tempdir().unwrap();
    let f = solve(dir.path(), 3);
    let b = basis(
        dir.path(),
        "lie",
        &["--kind", "lie", "--fiducial", path_str(&f), "--epsilons", "1,-1,1,1,1,1,1,1,1", "--ell", "2", "--eta", "0.3"],
    );
    assert_eq!(check_json("lie", &b).0, 0);
    assert_eq!(check_json("group", &b).0, 2);
}

#[test]
fn d2_all_runs_two_formulations() {
    let dir = tempfile::tempdir().unwrap();
    let f = solve(dir.path(), 2);
    let b = basis(dir.path(), "adj2", &["--kind", "adjoint", "--fiducial", path_str(&f)]);
    let (c, bundle) = check_json("all", &b);
    assert_eq!(c, 0);
    let eq = bundle.reports.iter().find(|r| r.check == "equivalence").unwrap();
    assert_eq!((eq.values["applicable"], eq.values["passes"]), (2.0, 2.0));
    let j = basis(dir.path(), "jor2", &["--kind", "jordan", "--fiducial", path_str(&f)]);
    assert_eq!(check_json("jordan", &j).0, 0);
}

#[test]
fn stochastic_csv_and_mdl() {
    let dir = tempfile::tempdir().unwrap();
    let f = solve(dir.path(), 3);
    let b = basis(dir.path(), "adj", &["--kind", "adjoint", "--fiducial", path_str(&f)]);
    let csv = dir.path().join("s.csv");
    let out = run(&["stochastic", path_str(&b), "--samples", "10", "--antiunitary", "--csv", path_str(&csv)]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "sampleIndex,minEntry,rowSumMaxErr,colSumMaxErr");
    assert_eq!(lines.count(), 10);
    assert_eq!(code(&run(&["mdl", path_str(&b)])), 0);
}

#[test]
fn irreps_and_structure_export() {
    let out = run(&["irreps", "--dim", "8"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("70"));
    let dir = tempfile::tempdir().unwrap();
    let b = basis(dir.path(), "gm", &["--kind", "gell-mann", "--dim", "2"]);
    let s = dir.path().join("s.json");
    let out = run(&["structure", path_str(&b), "--product", "jordan", "-o", path_str(&s)]);
    assert_eq!(code(&out), 0);
    assert!(std::fs::read_to_string(&s).unwrap().contains("jordan-structure/1"));
}
