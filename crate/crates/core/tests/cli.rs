use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rydberg-floquet"));
    c.env_remove("RYDBERG_FLOQUET_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn resonant_rabi_oscillation() {
    let o = run(&["dynamics", "--initial", "g", "--delta", "0", "--tmax", "6.283185307179586", "--dt", "0.1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = String::from_utf8(o.stdout).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "time,p_g,p_e,norm");
    for r in rows(&csv) {
        let want = (r[0] / 2.0).sin().powi(2);
        assert!((r[2] - want).abs() < 1e-8, "t = {}: {} vs {want}", r[0], r[2]);
        assert!((r[3] - 1.0).abs() < 1e-9);
    }
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(&["dynamics", "--initial", "xy"])), 2);
    assert_eq!(code(&run(&["figure", "99"])), 2);
    assert_eq!(code(&run(&["dynamics", "--omega", "-1"])), 2);
    assert_eq!(code(&run(&["ipr-map", "--axis", "beta=0:1:3"])), 2);
    assert_eq!(code(&run(&["floquet", "--basis", "symmetric", "--initial", "ge"])), 2);
    assert_eq!(code(&run(&["nonsense"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = blocker.join("x.csv");
    let o = run(&["dynamics", "--tmax", "0.1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
}

fn sweep_into(path: &Path, threads: &str) {
    let o = bin()
        .args(["--threads", threads, "ipr-map", "--n", "2", "--v0", "8", "--basis", "symmetric"])
        .args(["--axis", "alpha=0:4:21", "--initial", "gg,ee", "--refine-crossings", "--out"])
        .arg(path)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sweep_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    sweep_into(&a, "1");
    sweep_into(&b, "4");
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    assert_eq!(meta["kind"], "sweep");
    let header = String::from_utf8(ta).unwrap().lines().next().unwrap().to_string();
    assert_eq!(meta["columns"].as_array().unwrap().len(), header.split(',').count());
    assert!(meta["run_spec"]["argv"].as_array().unwrap().iter().any(|a| a == "ipr-map"));
}

#[test]
fn floquet_and_resonances() {
    let o = run(&["floquet", "--v0", "8", "--alpha", "2.404825557695773", "--basis", "symmetric", "--initial", "gg"]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    assert!(csv.starts_with("mode,eps,theta,group,p_gg,p_plus,p_ee,char_gg\n"));
    assert_eq!(csv.lines().count(), 4);
    let best = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!(best > 0.99);

    let o = run(&["resonances", "--v0", "10", "--range", "0:20", "--max-index", "3"]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    let r2: Vec<&str> = csv.lines().filter(|l| l.starts_with("R2,")).collect();
    assert_eq!(r2.len(), 3);
}

#[test]
fn entropy_and_figure_outputs() {
    let o = run(&["entropy", "--v0", "5", "--tmax", "0.5", "--dt", "0.25"]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    assert!(csv.lines().next().unwrap().ends_with(",entropy"));
    assert!((rows(&csv)[0].last().unwrap() - 1.0).abs() < 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let o = run(&["figure", "fig3c", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig3c.json")).unwrap()).unwrap();
    assert_eq!(meta["figure"]["figure"], "3c");
    assert!(dir.path().join("fig3c.csv").exists());
}

#[test]
fn two_atom_resonance_run() {
    let o = run(&["dynamics", "--n", "2", "--v0", "10", "--delta", "15", "--omega", "8", "--delta0", "8", "--initial", "gg", "--tmax", "20"]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "time,p_gg,p_ge,p_eg,p_ee,norm");
    let data = rows(&csv);
    assert_eq!(data.len(), 2001);
    assert!(data.iter().all(|r| r[4] <= 0.1));
    assert!(data.iter().map(|r| r[1]).fold(1.0, f64::min) < 0.3);

    let o = run(&["dynamics", "--n", "1", "--delta", "0", "--delta0", "0", "--tmax", "6.283"]);
    assert_eq!(code(&o), 0);
    let data = rows(&String::from_utf8(o.stdout).unwrap());
    let peak = data.iter().map(|r| r[2]).fold(0.0, f64::max);
    assert!(peak > 0.9999 && data.last().unwrap()[2] < 1e-6);
}
