use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use worldline::angular::AngularMomentumPipeline;
use worldline::audit::ConservationReport;
use worldline::poly::{format_rational, rational_to_f64};
use worldline::tracker::{Event, TrajectorySample};
use worldline::{ComplexValue, Error, Rational, Result};

pub const TRAJECTORY_HEADER: [&str; 16] = [
    "t",
    "particle_id",
    "kind",
    "re_x",
    "im_x",
    "re_y",
    "im_y",
    "re_vx",
    "im_vx",
    "re_vy",
    "im_vy",
    "re_ax",
    "im_ax",
    "re_ay",
    "im_ay",
    "near_event",
];

#[derive(Serialize)]
pub struct Exact {
    pub exact: Option<String>,
    pub approx: Option<f64>,
}

impl Exact {
    pub fn of(r: &Rational) -> Self {
        Self {
            exact: Some(format_rational(r)),
            approx: rational_to_f64(r),
        }
    }
}

#[derive(Serialize)]
struct ReportRecord {
    law: String,
    expected: Exact,
    max_drift: f64,
    max_imag: f64,
    tolerance: f64,
    verdict: &'static str,
}

#[derive(Serialize)]
struct EventRecord {
    kind: &'static str,
    t_lo: String,
    t_hi: String,
    t_approx: f64,
    real_before: usize,
    real_after: usize,
    location: Option<[f64; 2]>,
    involved: Vec<usize>,
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Config(format!("cannot write {}: {e}", path.display()))
}

pub fn prepare(dir: &Path, file: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    Ok(dir.join(file))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_error(path, e))?;
    text.push('\n');
    write_text(path, &text)
}

fn pair(z: Option<ComplexValue>) -> [String; 2] {
    match z {
        Some(z) => [z.re.to_string(), z.im.to_string()],
        None => ["NaN".into(), "NaN".into()],
    }
}

pub fn write_trajectory(path: &Path, samples: &[TrajectorySample]) -> Result<usize> {
    let file = fs::File::create(path).map_err(|e| io_error(path, e))?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    w.write_record(TRAJECTORY_HEADER).map_err(|e| io_error(path, e))?;
    let mut rows = 0;
    for s in samples {
        let t = s.t_f64().to_string();
        for (k, p) in s.particles.iter().enumerate() {
            let v = s.velocities.get(k).copied().flatten();
            let a = s.accelerations.get(k).copied().flatten();
            let [re_vx, im_vx] = pair(v.map(|v| v[0]));
            let [re_vy, im_vy] = pair(v.map(|v| v[1]));
            let [re_ax, im_ax] = pair(a.map(|a| a[0]));
            let [re_ay, im_ay] = pair(a.map(|a| a[1]));
            w.write_record([
                t.clone(),
                p.id.to_string(),
                p.kind.label().to_string(),
                p.x.re.to_string(),
                p.x.im.to_string(),
                p.y.re.to_string(),
                p.y.im.to_string(),
                re_vx,
                im_vx,
                re_vy,
                im_vy,
                re_ax,
                im_ax,
                re_ay,
                im_ay,
                u8::from(s.near_event).to_string(),
            ])
            .map_err(|e| io_error(path, e))?;
            rows += 1;
        }
    }
    w.into_inner()
        .map_err(|e| io_error(path, e))?
        .flush()
        .map_err(|e| io_error(path, e))?;
    Ok(rows)
}

pub fn report_records(reports: &[ConservationReport]) -> serde_json::Value {
    let records: Vec<ReportRecord> = reports
        .iter()
        .map(|r| ReportRecord {
            law: r.law.to_string(),
            expected: Exact {
                exact: r.expected.as_ref().map(format_rational),
                approx: r.expected_approx,
            },
            max_drift: r.max_drift,
            max_imag: r.max_imag,
            tolerance: r.tolerance,
            verdict: r.verdict.label(),
        })
        .collect();
    serde_json::to_value(records).expect("plain records serialize")
}

pub fn event_records(events: &[Event]) -> serde_json::Value {
    let records: Vec<EventRecord> = events
        .iter()
        .map(|e| EventRecord {
            kind: e.kind.label(),
            t_lo: format_rational(&e.t_star.lo),
            t_hi: format_rational(&e.t_star.hi),
            t_approx: e.approx_time(),
            real_before: e.real_before,
            real_after: e.real_after,
            location: e.location.map(|(x, y)| [x, y]),
            involved: e.involved.clone(),
        })
        .collect();
    serde_json::to_value(records).expect("plain records serialize")
}

pub fn pipeline_record(run: &AngularMomentumPipeline) -> serde_json::Value {
    let times = |ts: &[Rational]| ts.iter().map(format_rational).collect::<Vec<_>>();
    serde_json::json!({
        "m_z": Exact::of(&run.m_z),
        "g": run.g.to_string(),
        "g_degree_in_m": run.m_degree(),
        "alpha": run.alpha.to_string(),
        "beta": run.beta.to_string(),
        "a": run.a.to_string(),
        "a_over_d": run.a_over_d.as_ref().map(format_rational),
        "sample_times": times(&run.sample_times),
        "skipped_times": times(&run.skipped_times),
        "splits": run.splits.iter().map(|s| serde_json::json!({
            "t": format_rational(&s.t),
            "e_degree": s.e_degree,
            "g_degree": s.g_degree,
            "quotient_degree": s.quotient_degree,
        })).collect::<Vec<_>>(),
        "numeric_matches": run.matches.iter().map(|m| serde_json::json!({
            "t": format_rational(&m.t),
            "max_gap": m.max_gap,
        })).collect::<Vec<_>>(),
    })
}
