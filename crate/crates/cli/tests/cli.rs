use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_worldline"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn status(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn nine(sub: &str, out: &Path, extra: &[&str]) -> Output {
    let cfg = config("nine_root.toml");
    let mut args = vec![sub, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn parse_echoes_canonical_polynomials() {
    let dir = tempfile::tempdir().unwrap();
    let out = nine("parse", dir.path(), &[]);
    assert_eq!(status(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("N = 9"), "{text}");
    assert!(text.starts_with("F1 = "), "{text}");
}

#[test]
fn simulate_writes_one_row_per_particle_and_sample() {
    let dir = tempfile::tempdir().unwrap();
    let out = nine("simulate", dir.path(), &["--steps", "40", "--t-range", "-3", "-1"]);
    assert_eq!(status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,particle_id,kind,re_x,im_x,re_y,im_y,re_vx,im_vx,re_vy,im_vy,re_ax,im_ax,re_ay,im_ay,near_event"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 40 * 9);
    assert!(rows.iter().all(|r| r.split(',').count() == 16));
    assert!(rows.iter().any(|r| r.ends_with(",1")), "the grid passes t = -3");
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let args = ["--steps", "25", "--t-range", "-1", "2"];
        assert_eq!(status(&nine("simulate", dir.path(), &args)), 0);
        assert_eq!(status(&nine("events", dir.path(), &args)), 0);
        assert_eq!(status(&nine("audit", dir.path(), &args)), 0);
    }
    for file in ["trajectory.csv", "events.json", "report.json"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert_eq!(x, y, "{file}");
    }
}

#[test]
fn audit_reports_zero_energy_and_angular_momentum() {
    let dir = tempfile::tempdir().unwrap();
    let out = nine("audit", dir.path(), &["--steps", "60"]);
    assert_eq!(status(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    let law = |name: &str| {
        report
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["law"] == name)
            .unwrap_or_else(|| panic!("missing {name}"))
            .clone()
    };
    let energy = law("energy");
    assert_eq!(energy["expected"]["exact"], "0");
    assert_eq!(energy["verdict"], "pass");
    let angular = law("angular_momentum");
    assert!(angular["expected"]["approx"].as_f64().unwrap().abs() < 1e-8);
    assert_eq!(law("momentum_x")["expected"]["exact"], "0");
    for r in report.as_array().unwrap() {
        assert!(r["max_drift"].is_number(), "{r}");
        assert!(r["expected"].get("approx").is_some(), "{r}");
    }
}

#[test]
fn events_carry_exact_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let out = nine("events", dir.path(), &["--steps", "50"]);
    assert_eq!(status(&out), 0);
    let text = std::fs::read_to_string(dir.path().join("events.json")).unwrap();
    let events: serde_json::Value = serde_json::from_str(&text).unwrap();
    let events = events.as_array().unwrap();
    assert_eq!(events.len(), 4);
    for e in events {
        let lo = e["t_lo"].as_str().unwrap();
        assert!(worldline::poly::parse_rational(lo).is_some(), "{lo}");
        assert!(["creation", "annihilation"].contains(&e["kind"].as_str().unwrap()));
        assert!(e["location"].is_array());
    }
}

#[test]
fn eliminate_prints_leading_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("six_root.toml");
    let out = run(&["eliminate", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(status(&out), 0);
    let text = std::fs::read_to_string(dir.path().join("eliminants.txt")).unwrap();
    assert!(text.contains("leading coefficient R_y = -358343"), "{text}");
    assert!(text.contains("leading coefficient R_x = -358343"), "{text}");
    assert!(text.contains("deg D = 18"), "{text}");
}

#[test]
fn config_errors_exit_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(status(&nine("simulate", dir.path(), &["--t-range", "2", "1"])), 2);
    assert_eq!(status(&nine("simulate", dir.path(), &["--t-range", "0.5", "1"])), 2);
    assert_eq!(status(&nine("simulate", dir.path(), &["--tol-bogus", "1"])), 2);
    assert_eq!(status(&nine("simulate", dir.path(), &["--steps", "1"])), 2);
    assert_eq!(status(&run(&["simulate", "--config", "/nonexistent.toml"])), 2);
    assert_eq!(status(&run(&["frobnicate"])), 2);
}

#[test]
fn degenerate_system_exits_with_status_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("degenerate.toml");
    std::fs::write(
        &cfg,
        "F1 = \"x^2 - y^2 + t\"\nF2 = \"x - y + 1\"\nt_start = 0\nt_end = 1\nsteps = 5\n",
    )
    .unwrap();
    let out = run(&["eliminate", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(status(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn tight_tolerance_fails_the_audit() {
    let dir = tempfile::tempdir().unwrap();
    let out = nine("audit", dir.path(), &["--steps", "20", "--tol-energy", "1e-300"]);
    assert_eq!(status(&out), 1);
}
