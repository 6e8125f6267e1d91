//! Run configuration documents (TOML).
//!
//! ```toml
//! F1 = "-2*x^3 + y^3 + t*x + t*y + y + 2"
//! F2 = "-x^3 - 2*x^2*y + t + 3"
//! t_start = "-5"          # integer or "p/q" string
//! t_end = "5"
//! steps = 200
//! exact_angular = false   # optional
//! higher_sums_max = 3     # optional
//!
//! [tolerances]            # optional, any subset
//! root = 1e-12
//!
//! [outputs]               # optional
//! dir = "out"
//! ```
//!
//! Unknown keys are rejected.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::poly::{format_rational, parse_rational, Rational};
use crate::system::PolySystem;

/// Numerical tolerances for every floating point stage.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Scaled residual accepted by the root solver.
    pub root: f64,
    /// Relative imaginary part below which a root counts as real.
    pub real: f64,
    /// Distance within which a root's conjugate must be found.
    pub conj: f64,
    /// Relative distance under which roots share a multiplicity cluster.
    pub cluster: f64,
    /// Pairing residual, relative to the local term magnitude.
    pub pair: f64,
    /// Relative size under which an eliminant derivative counts as vanishing.
    pub deriv: f64,
    /// Half-width of the exclusion zone around event instants.
    pub event: f64,
    /// Absolute tolerance on the total momentum.
    pub momentum: f64,
    /// Absolute tolerance on the sum of accelerations.
    pub force: f64,
    /// Energy analogue drift, relative to `1 + |constant|`.
    pub energy: f64,
    /// Total angular momentum drift, relative to `1 + |constant|`.
    pub angular: f64,
    /// Imaginary residue allowed in sums that must be real.
    pub imag: f64,
    /// Relative tolerance of numeric power sums against their exact polynomials.
    pub power_sum: f64,
    /// Smallest sub-step used when continuation is ambiguous.
    pub min_step: f64,
    pub max_iterations: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            root: 1e-12,
            real: 1e-9,
            conj: 1e-8,
            cluster: 1e-6,
            pair: 1e-7,
            deriv: 1e-10,
            event: 1e-6,
            momentum: 1e-8,
            force: 1e-6,
            energy: 1e-6,
            angular: 1e-8,
            imag: 1e-9,
            power_sum: 1e-6,
            min_step: 1e-9,
            max_iterations: 500,
        }
    }
}

impl Tolerances {
    /// Overrides one tolerance by name, as used by `--tol-<name>`.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "root" => &mut self.root,
            "real" => &mut self.real,
            "conj" => &mut self.conj,
            "cluster" => &mut self.cluster,
            "pair" => &mut self.pair,
            "deriv" => &mut self.deriv,
            "event" => &mut self.event,
            "momentum" => &mut self.momentum,
            "force" => &mut self.force,
            "energy" => &mut self.energy,
            "angular" => &mut self.angular,
            "imag" => &mut self.imag,
            "power_sum" => &mut self.power_sum,
            "min_step" => &mut self.min_step,
            "max_iterations" => {
                self.max_iterations = value as usize;
                return Ok(());
            }
            _ => return Err(Error::Config(format!("unknown tolerance '{name}'"))),
        };
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Config(format!("tolerance '{name}' must be positive")));
        }
        *slot = value;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub dir: String,
    pub trajectory: String,
    pub events: String,
    pub report: String,
    pub eliminants: String,
    pub angular: String,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            dir: "out".into(),
            trajectory: "trajectory.csv".into(),
            events: "events.json".into(),
            report: "report.json".into(),
            eliminants: "eliminants.txt".into(),
            angular: "angular.json".into(),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalField {
    Int(i64),
    Text(String),
}

impl RationalField {
    fn value(&self, key: &str) -> Result<Rational> {
        match self {
            RationalField::Int(n) => Ok(crate::poly::int(*n)),
            RationalField::Text(s) => parse_rational(s)
                .ok_or_else(|| Error::Config(format!("{key}: '{s}' is not an exact rational"))),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "F1")]
    f1: String,
    #[serde(rename = "F2")]
    f2: String,
    t_start: RationalField,
    t_end: RationalField,
    steps: usize,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    outputs: Outputs,
    #[serde(default)]
    exact_angular: bool,
    #[serde(default = "default_higher_sums")]
    higher_sums_max: usize,
}

fn default_higher_sums() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub f1: String,
    pub f2: String,
    pub t_start: Rational,
    pub t_end: Rational,
    pub steps: usize,
    pub tolerances: Tolerances,
    pub outputs: Outputs,
    pub exact_angular: bool,
    pub higher_sums_max: usize,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let cfg = Self {
            f1: raw.f1,
            f2: raw.f2,
            t_start: raw.t_start.value("t_start")?,
            t_end: raw.t_end.value("t_end")?,
            steps: raw.steps,
            tolerances: raw.tolerances,
            outputs: raw.outputs,
            exact_angular: raw.exact_angular,
            higher_sums_max: raw.higher_sums_max,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_start >= self.t_end {
            return Err(Error::Config(format!(
                "t_start ({}) must be below t_end ({})",
                format_rational(&self.t_start),
                format_rational(&self.t_end)
            )));
        }
        if self.steps < 2 {
            return Err(Error::Config("steps must be at least 2".into()));
        }
        Ok(())
    }

    pub fn system(&self) -> Result<PolySystem> {
        PolySystem::parse(&self.f1, &self.f2)
    }

    /// Evenly spaced exact grid from `t_start` to `t_end` inclusive.
    pub fn grid(&self) -> Vec<Rational> {
        uniform_grid(&self.t_start, &self.t_end, self.steps)
    }
}

pub fn uniform_grid(start: &Rational, end: &Rational, steps: usize) -> Vec<Rational> {
    let span = end - start;
    let denom = crate::poly::int((steps.max(2) - 1) as i64);
    (0..steps)
        .map(|k| start + &span * crate::poly::int(k as i64) / &denom)
        .collect()
}

/// Parses a config document and returns its validated system.
pub fn load_system(config: &str) -> Result<PolySystem> {
    RunConfig::from_toml(config)?.system()
}
