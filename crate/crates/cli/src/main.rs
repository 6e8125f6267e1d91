//! `worldline`: elimination, simulation, event detection and conservation audits from a TOML config.
//!
//! Exit status: 0 ok, 1 audit failure, 2 config error, 3 degenerate system.

mod args;
mod output;

use std::process::ExitCode;

use clap::Parser;
use worldline::angular::{angular_momentum_exact, AngularMomentumPipeline, PipelineOptions};
use worldline::audit::{angular_momentum_numeric, audit_all};
use worldline::config::RunConfig;
use worldline::elimination::leading_coeff_check;
use worldline::poly::format_rational;
use worldline::tracker::{Trajectory, Tracker};
use worldline::{Error, PolySystem, Result};

use args::{Cli, Command};

enum Outcome {
    Ok,
    AuditFailed,
}

fn main() -> ExitCode {
    let (rest, tols) = match args::split_tolerances(std::env::args().collect()) {
        Ok(split) => split,
        Err(e) => return fail(&e),
    };
    let cli = match Cli::try_parse_from(rest) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.load(&tols).and_then(|cfg| run(&cli, &cfg)) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::AuditFailed) => ExitCode::from(1),
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(match e {
        Error::Config(_) | Error::Syntax { .. } => 2,
        Error::DegenerateSystem(_) => 3,
        _ => 1,
    })
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<Outcome> {
    let sys = cfg.system()?;
    if cli.command == Command::Parse {
        return parse(&sys);
    }
    let check = leading_coeff_check(&sys)?;
    let tracker = Tracker::new(&sys, &cfg.tolerances)?;
    let dir = cli.out_dir(cfg);
    match cli.command {
        Command::Parse => unreachable!(),
        Command::Eliminate => {
            let mut text = String::new();
            text.push_str(&format!("R_y(x, t) = {}\n", tracker.eliminants.ry.poly));
            text.push_str(&format!("R_x(y, t) = {}\n", tracker.eliminants.rx.poly));
            let lead = |l: &Option<worldline::Rational>| l.as_ref().map_or("non-constant".into(), format_rational);
            let summary = format!(
                "leading-form resultant = {}\nleading coefficient R_y = {}\nleading coefficient R_x = {}\nconsistent = {}\nD(t) = {}\ndeg D = {}\n",
                format_rational(&check.value),
                lead(&check.ry_leading),
                lead(&check.rx_leading),
                check.consistent(),
                tracker.d,
                tracker.d.degree().unwrap_or(0),
            );
            text.push_str(&summary);
            output::write_text(&output::prepare(&dir, &cfg.outputs.eliminants)?, &text)?;
            print!("{summary}");
            Ok(Outcome::Ok)
        }
        Command::Simulate => {
            let traj = tracker.track(&cfg.grid())?;
            let path = output::prepare(&dir, &cfg.outputs.trajectory)?;
            let rows = output::write_trajectory(&path, &traj.samples)?;
            let flagged = traj.samples.iter().filter(|s| s.near_event).count();
            println!(
                "{} samples, {rows} rows, {flagged} flagged near events -> {}",
                traj.samples.len(),
                path.display()
            );
            Ok(Outcome::Ok)
        }
        Command::Events => {
            let traj = tracker.track(&cfg.grid())?;
            let path = output::prepare(&dir, &cfg.outputs.events)?;
            output::write_json(&path, &output::event_records(&traj.events))?;
            for e in &traj.events {
                println!(
                    "{} at t in [{}, {}] (~{:.6}), real {} -> {}",
                    e.kind.label(),
                    format_rational(&e.t_star.lo),
                    format_rational(&e.t_star.hi),
                    e.approx_time(),
                    e.real_before,
                    e.real_after
                );
            }
            Ok(Outcome::Ok)
        }
        Command::Audit => {
            let traj = tracker.track(&cfg.grid())?;
            let exact = exact_angular(&sys, &tracker, cfg)?;
            let reports = audit_all(
                &tracker.eliminants,
                &traj.samples,
                cfg.higher_sums_max,
                exact.as_ref().map(|run| run.m_z.clone()),
                &cfg.tolerances,
            )?;
            let path = output::prepare(&dir, &cfg.outputs.report)?;
            output::write_json(&path, &output::report_records(&reports))?;
            for r in &reports {
                let expected = r.expected.as_ref().map_or("-".into(), format_rational);
                println!("{:<18} {:<6} expected {expected} drift {:.3e}", r.law.to_string(), r.verdict.label(), r.max_drift);
            }
            let exact_ok = exact.as_ref().is_none_or(pipeline_consistent);
            Ok(if reports.iter().all(|r| r.passed()) && exact_ok {
                Outcome::Ok
            } else {
                Outcome::AuditFailed
            })
        }
        Command::Angular => angular(&sys, &tracker, cfg, &dir),
    }
}

fn parse(sys: &PolySystem) -> Result<Outcome> {
    println!("F1 = {}", sys.f1);
    println!("F2 = {}", sys.f2);
    println!("n = {}, m = {}, N = {}", sys.n, sys.m, sys.root_count());
    for w in &sys.warnings {
        println!(
            "warning: F{} degree-{} part has t^{} (allowed t^{})",
            w.equation, w.xy_degree, w.t_degree, w.allowed
        );
    }
    Ok(Outcome::Ok)
}

fn exact_angular(sys: &PolySystem, tracker: &Tracker, cfg: &RunConfig) -> Result<Option<AngularMomentumPipeline>> {
    if !cfg.exact_angular {
        return Ok(None);
    }
    angular_momentum_exact(sys, tracker, &PipelineOptions::default(), &cfg.tolerances).map(Some)
}

fn pipeline_consistent(run: &AngularMomentumPipeline) -> bool {
    run.ratio_is_constant() && run.splits.iter().all(|s| s.quotient_degree.is_some())
}

fn angular(sys: &PolySystem, tracker: &Tracker, cfg: &RunConfig, dir: &std::path::Path) -> Result<Outcome> {
    let traj: Trajectory = tracker.track(&cfg.grid())?;
    let exact = exact_angular(sys, tracker, cfg)?;
    let numeric = angular_momentum_numeric(&traj.samples, exact.as_ref().map(|r| r.m_z.clone()), &cfg.tolerances);
    let record = serde_json::json!({
        "numeric": output::report_records(std::slice::from_ref(&numeric))[0],
        "exact": exact.as_ref().map(output::pipeline_record),
    });
    output::write_json(&output::prepare(dir, &cfg.outputs.angular)?, &record)?;
    println!(
        "numeric M_z ~ {} (drift {:.3e}, max imaginary {:.3e}) {}",
        numeric.expected_approx.unwrap_or(f64::NAN),
        numeric.max_drift,
        numeric.max_imag,
        numeric.verdict.label()
    );
    if let Some(run) = &exact {
        println!("exact {}", run.summary());
    }
    let exact_ok = exact.as_ref().is_none_or(pipeline_consistent);
    Ok(if numeric.passed() && exact_ok {
        Outcome::Ok
    } else {
        Outcome::AuditFailed
    })
}
