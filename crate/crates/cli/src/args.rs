use std::path::PathBuf;

use clap::{Parser, Subcommand};
use worldline::config::RunConfig;
use worldline::poly::parse_rational;
use worldline::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "worldline", version, about = "Root-particle worldlines of implicit polynomial systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory, overriding `outputs.dir`.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Number of grid samples, overriding `steps`.
    #[arg(long, global = true, value_name = "N")]
    pub steps: Option<usize>,

    /// Time range as exact rationals, e.g. `--t-range -5 5/2`.
    #[arg(long, global = true, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
    pub t_range: Option<Vec<String>>,

    /// Run the exact angular momentum elimination (slow).
    #[arg(long, global = true)]
    pub exact_angular: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Echo the canonical generating polynomials.
    Parse,
    /// Write both eliminants, the leading-form check and the event polynomial.
    Eliminate,
    /// Track every root-particle over the grid and write the trajectory CSV.
    Simulate,
    /// Locate creation and annihilation events.
    Events,
    /// Check every conservation law on a simulated trajectory.
    Audit,
    /// Total angular momentum, numeric and optionally exact.
    Angular,
}

/// `--tol-<name> <value>` or `--tol-<name>=<value>` pairs, removed from the argument list.
pub fn split_tolerances(args: Vec<String>) -> Result<(Vec<String>, Vec<(String, String)>)> {
    let mut rest = Vec::with_capacity(args.len());
    let mut tols = Vec::new();
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let Some(spec) = arg.strip_prefix("--tol-") else {
            rest.push(arg);
            continue;
        };
        let (name, value) = match spec.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| Error::Config(format!("--tol-{spec} needs a value")))?;
                (spec.to_string(), v)
            }
        };
        tols.push((name.replace('-', "_"), value));
    }
    Ok((rest, tols))
}

impl Cli {
    /// Reads the config file and applies every command-line override.
    pub fn load(&self, tols: &[(String, String)]) -> Result<RunConfig> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| Error::Config("--config <PATH> is required".into()))?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = RunConfig::from_toml(&text)?;
        if let Some(steps) = self.steps {
            cfg.steps = steps;
        }
        if let Some(range) = &self.t_range {
            let value = |s: &String| {
                parse_rational(s).ok_or_else(|| Error::Config(format!("--t-range: '{s}' is not an exact rational")))
            };
            cfg.t_start = value(&range[0])?;
            cfg.t_end = value(&range[1])?;
        }
        cfg.exact_angular |= self.exact_angular;
        for (name, value) in tols {
            let v: f64 = value
                .parse()
                .map_err(|_| Error::Config(format!("--tol-{name}: '{value}' is not a number")))?;
            cfg.tolerances.set(name, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn out_dir(&self, cfg: &RunConfig) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(&cfg.outputs.dir))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn tolerance_flags_are_extracted() {
        let (rest, tols) =
            split_tolerances(strings(&["worldline", "audit", "--tol-root", "1e-10", "--tol-min-step=1e-8"])).unwrap();
        assert_eq!(rest, strings(&["worldline", "audit"]));
        assert_eq!(
            tols,
            vec![("root".into(), "1e-10".into()), ("min_step".into(), "1e-8".into())]
        );
        assert!(split_tolerances(strings(&["worldline", "--tol-root"])).is_err());
    }

    #[test]
    fn negative_range_parses() {
        let cli = Cli::try_parse_from(["worldline", "simulate", "--t-range", "-5", "-1/2", "--steps", "7"]).unwrap();
        assert_eq!(cli.command, Command::Simulate);
        assert_eq!(cli.t_range, Some(strings(&["-5", "-1/2"])));
        assert_eq!(cli.steps, Some(7));
    }
}
