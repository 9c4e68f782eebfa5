//! End-to-end runs of the `majorana` binary on files in a scratch directory.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

use majorana::json::{self, ConstellationJson, PathJson, StarJson, StateJson, TrajectoryJson};
use majorana::sample;
use majorana_core::{
    constellation_to_state, geometric_phase, moments, partition_function, state_to_constellation, Constellation,
    PhaseMethod, StarPath,
};
use serde_json::Value;

struct Scratch(PathBuf);

impl Scratch {
    fn new() -> Self {
        static NEXT: AtomicUsize = AtomicUsize::new(0);
        let dir = std::env::temp_dir().join(format!(
            "majorana-cli-{}-{}",
            std::process::id(),
            NEXT.fetch_add(1, Ordering::Relaxed)
        ));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.0.join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn majorana(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majorana")).args(args).output().expect("binary runs")
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn spread(two_j: u32, seed: u64) -> Constellation {
    sample::spread_constellation(&mut sample::rng(seed), two_j, 0.3, Some(0.9))
}

#[test]
fn convert_round_trip_matches_library_bytes() {
    let dir = Scratch::new();
    let psi = sample::state(&mut sample::rng(11), 5);
    let state_file = dir.write("psi.json", &json::to_string(&StateJson::from(&psi)));

    let text = stdout(&majorana(&["convert", "--state", arg(&state_file)]));
    let expected = json::to_string(&ConstellationJson::from(&state_to_constellation(&psi).unwrap()));
    assert_eq!(text.trim_end(), expected);

    let c_file = dir.write("c.json", &text);
    let out_file = dir.path("back.json");
    assert_eq!(stdout(&majorana(&["convert", "--constellation", arg(&c_file), "--out", arg(&out_file)])), "\n");
    let back = psi_from(&out_file);
    assert!(1.0 - psi.fidelity(&back) < 1e-10);
}

fn psi_from(path: &Path) -> majorana_core::SpinState {
    majorana_core::SpinState::try_from(&json::read::<StateJson>(path).unwrap()).unwrap()
}

#[test]
fn norm_and_moments_agree_with_dense_state() {
    let dir = Scratch::new();
    let c = spread(4, 3);
    let file = dir.write("c.json", &json::to_string(&ConstellationJson::from(&c)));

    let norm: Value = serde_json::from_str(&stdout(&majorana(&["norm", "--constellation", arg(&file)]))).unwrap();
    let z = norm["Z"].as_f64().unwrap();
    assert_eq!(z, partition_function(&c).unwrap());
    assert!((z - constellation_to_state(&c).norm_sqr() / 5.0).abs() < 1e-12 * z);
    assert!((norm["F"].as_f64().unwrap() + z.ln()).abs() < 1e-12);

    let m: Value = serde_json::from_str(&stdout(&majorana(&["moments", "--constellation", arg(&file)]))).unwrap();
    let lib = moments(&c).unwrap();
    for a in 0..3 {
        assert_eq!(m["dipole"][a].as_f64().unwrap(), lib.dipole[a]);
        for b in 0..3 {
            assert_eq!(m["quadrupole"][a][b].as_f64().unwrap(), lib.quadrupole[(a, b)]);
        }
    }
}

#[test]
fn tensors_are_square_and_kahler() {
    let dir = Scratch::new();
    let file = dir.write("c.json", &json::to_string(&ConstellationJson::from(&spread(3, 5))));
    let t: Value = serde_json::from_str(&stdout(&majorana(&["tensors", "--constellation", arg(&file)]))).unwrap();
    let g = t["g"].as_array().unwrap();
    let f = t["f"].as_array().unwrap();
    assert_eq!(g.len(), 6);
    for r in (0..6).step_by(2) {
        for c in (0..6).step_by(2) {
            let at = |m: &Vec<Value>, i: usize, j: usize| m[i][j].as_f64().unwrap();
            assert!((2.0 * at(f, r, c + 1) - at(g, r, c)).abs() < 1e-9);
            assert!((at(g, r, c) - at(g, r + 1, c + 1)).abs() < 1e-9);
        }
    }
}

#[test]
fn phase_of_a_latitude_circle() {
    let dir = Scratch::new();
    let theta: f64 = 2.0;
    let n = 400;
    let samples: Vec<ConstellationJson> = (0..n)
        .map(|k| {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let star = StarJson { x: theta.sin() * phi.cos(), y: theta.sin() * phi.sin(), z: theta.cos() };
            ConstellationJson { two_j: 1, stars: vec![star] }
        })
        .collect();
    let path = PathJson { closed: true, samples };
    let file = dir.write("path.json", &json::to_string(&path));

    let v: Value = serde_json::from_str(&stdout(&majorana(&["phase", "--path", arg(&file)]))).unwrap();
    let lib = StarPath::try_from(&path).unwrap();
    assert_eq!(v["holonomy"].as_f64().unwrap(), geometric_phase(&lib, PhaseMethod::Holonomy).unwrap());
    assert_eq!(v["line_integral"].as_f64().unwrap(), geometric_phase(&lib, PhaseMethod::LineIntegral).unwrap());
    assert!(v["delta"].as_f64().unwrap() < 1e-3);

    let line: Value =
        serde_json::from_str(&stdout(&majorana(&["phase", "--path", arg(&file), "--method", "line"]))).unwrap();
    assert!(line.get("holonomy").is_none());
}

#[test]
fn evolve_tracks_the_oracle_and_writes_csv() {
    let dir = Scratch::new();
    let c = spread(3, 7);
    let u0 = dir.write("u0.json", &json::to_string(&ConstellationJson::from(&c)));
    let h = dir.write(
        "h.json",
        r#"{"b_field": [0.1, 0.0, 0.3], "quad": [[0.2, 0.1, 0.0], [0.1, -0.5, 0.05], [0.0, 0.05, 0.3]]}"#,
    );
    let csv = dir.path("stars.csv");
    let out = majorana(&[
        "evolve",
        "--j",
        "3/2",
        "--h",
        arg(&h),
        "--u0",
        arg(&u0),
        "--dt",
        "0.01",
        "--steps",
        "50",
        "--oracle",
        "--csv",
        arg(&csv),
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["max_displacement"].as_f64().unwrap() < 1e-6);
    let stars: TrajectoryJson = serde_json::from_value(v["stars"].clone()).unwrap();
    assert_eq!(stars.times.len(), 51);
    let drift = stars.energies.iter().map(|e| (e - stars.energies[0]).abs()).fold(0.0, f64::max);
    assert!(drift < 1e-9);

    let rows = std::fs::read_to_string(&csv).unwrap();
    let mut lines = rows.lines();
    assert_eq!(lines.next(), Some("t,star,x,y,z"));
    assert_eq!(lines.count(), 51 * 3);
}

#[test]
fn exit_codes_separate_bad_input_from_numerical_failure() {
    let dir = Scratch::new();
    let missing = majorana(&["norm", "--constellation", arg(&dir.path("nope.json"))]);
    assert_eq!(missing.status.code(), Some(2));

    let junk = dir.write("junk.json", r#"{"two_j": 2, "stars": [{"x": 1, "y": 0, "z": 0}], "extra": 1}"#);
    assert_eq!(majorana(&["norm", "--constellation", arg(&junk)]).status.code(), Some(2));

    let unnormalized = dir.write("u.json", r#"{"two_j": 1, "stars": [{"x": 2, "y": 0, "z": 0}]}"#);
    assert_eq!(majorana(&["moments", "--constellation", arg(&unnormalized)]).status.code(), Some(2));

    let coherent =
        dir.write("cs.json", r#"{"two_j": 2, "stars": [{"x": 1, "y": 0, "z": 0}, {"x": 1, "y": 0, "z": 0}]}"#);
    let h = dir.write("h.json", r#"{"quad": [[1, 0, 0], [0, -1, 0], [0, 0, 0]]}"#);
    let singular = majorana(&["evolve", "--h", arg(&h), "--u0", arg(&coherent), "--dt", "0.01", "--steps", "3"]);
    assert_eq!(singular.status.code(), Some(1), "{}", String::from_utf8_lossy(&singular.stderr));

    let wrong_spin =
        majorana(&["evolve", "--j", "1/2", "--h", arg(&h), "--u0", arg(&coherent), "--dt", "0.1", "--steps", "1"]);
    assert_eq!(wrong_spin.status.code(), Some(2));

    assert_eq!(majorana(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn quick_selftest_passes() {
    let out = majorana(&["selftest", "--seed", "7"]);
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 8, "{text}");
    assert!(text.ends_with("8 passed, 0 failed\n"));
}
