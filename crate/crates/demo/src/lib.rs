//! WebAssembly bindings behind `www/index.html`.
//!
//! Every export returns a JSON document; times travel as exact rationals
//! written `p/q` so the page never rounds a sampling instant.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;
use worldline::audit::{audit_all, energy_constant};
use worldline::config::{uniform_grid, RunConfig, Tolerances};
use worldline::elimination::leading_coeff_check;
use worldline::poly::{format_rational, parse_rational};
use worldline::tracker::{Trajectory, Tracker, TrajectorySample};
use worldline::{ComplexValue, PolySystem, Rational};

const PRESETS: [(&str, &str); 2] = [
    ("nine_root", include_str!("../../cli/configs/nine_root.toml")),
    ("six_root", include_str!("../../cli/configs/six_root.toml")),
];

/// Bundled systems as `[{name, f1, f2, t_start, t_end}]`.
#[wasm_bindgen]
pub fn presets() -> String {
    let list: Vec<Value> = PRESETS
        .iter()
        .filter_map(|(name, text)| {
            let cfg = RunConfig::from_toml(text).ok()?;
            Some(json!({
                "name": name,
                "f1": cfg.f1,
                "f2": cfg.f2,
                "t_start": format_rational(&cfg.t_start),
                "t_end": format_rational(&cfg.t_end),
            }))
        })
        .collect();
    Value::Array(list).to_string()
}

/// A generating system with its eliminants and event polynomial.
#[wasm_bindgen]
pub struct Demo {
    tracker: Tracker,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(f1: &str, f2: &str) -> Result<Demo, JsError> {
        Self::build(f1, f2).map_err(|e| JsError::new(&e))
    }

    /// Samples, particles and events on `steps` evenly spaced times.
    pub fn trajectory(&self, t_start: &str, t_end: &str, steps: usize) -> Result<String, JsError> {
        self.trajectory_json(t_start, t_end, steps).map_err(|e| JsError::new(&e))
    }

    /// Positions, velocities and accelerations at one time.
    pub fn snapshot(&self, t: &str) -> Result<String, JsError> {
        self.snapshot_json(t).map_err(|e| JsError::new(&e))
    }

    /// Exact constants next to the measured drift of every audited law.
    pub fn conservation(&self, t_start: &str, t_end: &str, steps: usize) -> Result<String, JsError> {
        self.conservation_json(t_start, t_end, steps).map_err(|e| JsError::new(&e))
    }
}

impl Demo {
    pub fn build(f1: &str, f2: &str) -> Result<Self, String> {
        let sys = PolySystem::parse(f1, f2).map_err(|e| e.to_string())?;
        leading_coeff_check(&sys).map_err(|e| e.to_string())?;
        let tracker = Tracker::new(&sys, &Tolerances::default()).map_err(|e| e.to_string())?;
        Ok(Self { tracker })
    }

    fn track(&self, t_start: &str, t_end: &str, steps: usize) -> Result<Trajectory, String> {
        let (a, b) = (time(t_start)?, time(t_end)?);
        if a >= b || steps < 2 {
            return Err("need t_start < t_end and at least two steps".into());
        }
        self.tracker.track(&uniform_grid(&a, &b, steps)).map_err(|e| e.to_string())
    }

    pub fn trajectory_json(&self, t_start: &str, t_end: &str, steps: usize) -> Result<String, String> {
        let traj = self.track(t_start, t_end, steps)?;
        let events: Vec<Value> = traj
            .events
            .iter()
            .map(|e| {
                json!({
                    "kind": e.kind.label(),
                    "t_lo": format_rational(&e.t_star.lo),
                    "t_hi": format_rational(&e.t_star.hi),
                    "t": e.approx_time(),
                    "location": e.location.map(|(x, y)| [x, y]),
                })
            })
            .collect();
        let samples: Vec<Value> = traj.samples.iter().map(sample_json).collect();
        Ok(json!({ "samples": samples, "events": events }).to_string())
    }

    pub fn snapshot_json(&self, t: &str) -> Result<String, String> {
        let (_, _, sample) = self.tracker.snapshot(&time(t)?, None, false).map_err(|e| e.to_string())?;
        Ok(sample_json(&sample).to_string())
    }

    pub fn conservation_json(&self, t_start: &str, t_end: &str, steps: usize) -> Result<String, String> {
        let traj = self.track(t_start, t_end, steps)?;
        let el = &self.tracker.eliminants;
        let reports = audit_all(el, &traj.samples, 2, None, &self.tracker.tol).map_err(|e| e.to_string())?;
        let laws: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "law": r.law.to_string(),
                    "exact": r.expected.as_ref().map(format_rational),
                    "approx": r.expected_approx,
                    "max_drift": r.max_drift,
                    "verdict": r.verdict.label(),
                })
            })
            .collect();
        let energy = energy_constant(el).map_err(|e| e.to_string())?;
        Ok(json!({
            "particles": el.ry.poly.degree(),
            "energy": format_rational(&energy),
            "events_in_range": traj.events.len(),
            "laws": laws,
        })
        .to_string())
    }
}

fn time(text: &str) -> Result<Rational, String> {
    parse_rational(text.trim()).ok_or_else(|| format!("'{text}' is not an exact rational"))
}

fn pair(z: ComplexValue) -> [f64; 2] {
    [z.re, z.im]
}

fn sample_json(s: &TrajectorySample) -> Value {
    let particles: Vec<Value> = s
        .particles
        .iter()
        .enumerate()
        .map(|(k, p)| {
            json!({
                "id": p.id,
                "kind": p.kind.label(),
                "x": pair(p.x),
                "y": pair(p.y),
                "v": s.velocities[k].map(|v| [pair(v[0]), pair(v[1])]),
                "a": s.accelerations[k].map(|a| [pair(a[0]), pair(a[1])]),
            })
        })
        .collect();
    json!({
        "t": format_rational(&s.t),
        "t_approx": s.t_f64(),
        "near_event": s.near_event,
        "particles": particles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nine() -> Demo {
        Demo::build("-2*x^3 + y^3 + t*x + t*y + y + 2", "-x^3 - 2*x^2*y + t + 3").unwrap()
    }

    #[test]
    fn presets_parse() {
        let v: Value = serde_json::from_str(&presets()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 2);
        assert_eq!(v[0]["t_start"], "-5");
    }

    #[test]
    fn trajectory_has_every_particle() {
        let v: Value = serde_json::from_str(&nine().trajectory_json("-1", "1", 5).unwrap()).unwrap();
        let samples = v["samples"].as_array().unwrap();
        assert_eq!(samples.len(), 5);
        assert_eq!(samples[2]["t"], "0");
        assert!(samples.iter().all(|s| s["particles"].as_array().unwrap().len() == 9));
    }

    #[test]
    fn snapshot_momentum_vanishes() {
        let v: Value = serde_json::from_str(&nine().snapshot_json("1/2").unwrap()).unwrap();
        let total: f64 = v["particles"].as_array().unwrap().iter().map(|p| p["v"][0][0].as_f64().unwrap()).sum();
        assert!(total.abs() < 1e-8);
    }

    #[test]
    fn conservation_summary_passes() {
        let v: Value = serde_json::from_str(&nine().conservation_json("1", "2", 11).unwrap()).unwrap();
        assert_eq!(v["energy"], "0");
        assert_eq!(v["particles"], 9);
        assert!(v["laws"].as_array().unwrap().iter().all(|l| l["verdict"] == "pass"));
    }

    #[test]
    fn bad_input_is_reported() {
        assert!(Demo::build("x^2 - y^2 + t", "x - y + 1").is_err());
        assert!(nine().trajectory_json("1", "0", 5).is_err());
        assert!(nine().snapshot_json("0.5").is_err());
    }
}
