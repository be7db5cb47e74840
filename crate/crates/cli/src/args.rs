//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::{Command, Overrides, RunConfig, DEFAULT_OUT, OUT_ENV};

#[derive(Debug, Parser)]
#[command(name = "acf", version, about = "Convergence-factor experiments on compact plane sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Library scenario name or scenario file; repeat for several. Default: whole library.
    #[arg(long, global = true)]
    pub scenario: Vec<String>,
    /// Output root; each command writes into `<out>/<command>/`.
    #[arg(long, global = true, env = OUT_ENV, default_value = DEFAULT_OUT)]
    pub out: PathBuf,
    /// Largest polynomial degree (at most 80).
    #[arg(long, global = true)]
    pub degree_max: Option<usize>,
    /// Offset of the comparison curves from the set.
    #[arg(long, global = true)]
    pub margin: Option<f64>,
    /// Boundary nodes per unit length (at least 16).
    #[arg(long, global = true)]
    pub density: Option<f64>,
    /// Degree window of the slope fit, as `lo,hi`.
    #[arg(long, global = true, value_parser = parse_window)]
    pub window: Option<(usize, usize)>,
    /// Worker threads for scenario-level parallelism.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Geometric lower bound per scenario.
    Bound,
    /// Green's function, capacity, saddles, level-curve atlas.
    Green,
    /// Minimax errors d_n and the fitted ratio.
    Rho,
    /// Leja and refined Fekete points, diameters, decay check.
    Fekete,
    /// Interpolants at Leja points against their error bound.
    Approx,
    /// Two-disk construction with the inequality checks.
    Prop15 {
        #[arg(long, default_value_t = 2.0)]
        h0: f64,
        #[arg(long, default_value_t = 0.3)]
        delta0: f64,
    },
    /// θ for the disk plus shrinking disk sequence.
    Prop16 {
        #[arg(long, default_value_t = 2.0)]
        h0: f64,
        #[arg(long, default_value_t = 8)]
        steps: usize,
    },
    /// Both ρ estimates against the lower bound; exit 1 on a violation.
    Gate,
    /// Summary table over the manifests in a directory.
    Report {
        /// Directory to summarize (default: the output root).
        dir: Option<PathBuf>,
    },
}

fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected lo,hi, got {s:?}"))?;
    let lo = a.trim().parse::<usize>().map_err(|e| format!("{a:?}: {e}"))?;
    let hi = b.trim().parse::<usize>().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((lo, hi))
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let command = match self.command {
            CliCommand::Bound => Command::Bound,
            CliCommand::Green => Command::Green,
            CliCommand::Rho => Command::Rho,
            CliCommand::Fekete => Command::Fekete,
            CliCommand::Approx => Command::Approx,
            CliCommand::Prop15 { h0, delta0 } => Command::Prop15 { h0, delta0 },
            CliCommand::Prop16 { h0, steps } => Command::Prop16 { h0, steps },
            CliCommand::Gate => Command::Gate,
            CliCommand::Report { dir } => Command::Report { dir },
        };
        let c = self.common;
        RunConfig {
            command,
            scenarios: c.scenario,
            out: c.out,
            overrides: Overrides {
                degree_max: c.degree_max,
                margin: c.margin,
                density: c.density,
                window: c.window,
                seed: c.seed,
            },
            jobs: c.jobs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags_after_subcommand() {
        let cli = Cli::try_parse_from([
            "acf", "gate", "--scenario", "disk_point", "--window", "10,30", "--jobs", "2", "--out", "x",
        ])
        .unwrap();
        let cfg = cli.into_config();
        assert_eq!(cfg.command, Command::Gate);
        assert_eq!(cfg.scenarios, vec!["disk_point".to_string()]);
        assert_eq!(cfg.overrides.window, Some((10, 30)));
        assert_eq!(cfg.jobs, 2);
        assert_eq!(cfg.out, PathBuf::from("x"));
    }

    #[test]
    fn prop15_defaults() {
        let cfg = Cli::try_parse_from(["acf", "prop15", "--out", "x"]).unwrap().into_config();
        assert_eq!(cfg.command, Command::Prop15 { h0: 2.0, delta0: 0.3 });
    }

    #[test]
    fn bad_window_is_rejected() {
        assert!(Cli::try_parse_from(["acf", "rho", "--window", "10"]).is_err());
    }
}
