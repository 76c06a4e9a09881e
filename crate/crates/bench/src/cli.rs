use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{self, ConvergeArgs, DerivCheckArgs, Outcome, SweepArgs};
use crate::error::CliResult;

/// Error tables and utilities for nonlinear quadrature rules.
#[derive(Parser, Debug)]
#[command(name = "nlq", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Single-step errors on [a, a + h] over a geometric grid of h
    Sweep {
        /// f1, f2, f3 or f4
        #[arg(long)]
        integrand: String,
        #[arg(long, default_value = "exp-q1")]
        rule: String,
        #[arg(long, default_value = "trapezoid")]
        baseline: String,
        #[arg(long, default_value_t = commands::DEFAULT_H_MIN)]
        h_min: f64,
        /// Defaults to min(0.5, b - a)
        #[arg(long)]
        h_max: Option<f64>,
        #[arg(long, default_value_t = commands::DEFAULT_POINTS)]
        points: usize,
        /// Curvature for the curvature-trapezoid rule
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Composite estimates over the preset interval for several panel counts
    Converge {
        #[arg(long)]
        integrand: String,
        /// Comma-separated rule ids
        #[arg(long, default_value = "exp-q1,trapezoid")]
        rules: String,
        /// Comma-separated increasing panel counts
        #[arg(long, default_value = commands::DEFAULT_PANELS)]
        panels: String,
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Newton-Cotes weights from the trapezoid combination
    NcWeights {
        /// Odd node count, 3 to 9
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diagonal partial-derivative relations of a two-point rule
    DerivCheck {
        #[arg(long, default_value = "exp-q1")]
        rule: String,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, default_value_t = 1e-5)]
        fd_step: f64,
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moment of an equispaced `x,f` series, optionally with the tail to infinity
    Moments {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long)]
        tail: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs a command; text destined for standard output is returned in the outcome.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let (outcome, out) = match &cli.command {
        Command::Sweep {
            integrand,
            rule,
            baseline,
            h_min,
            h_max,
            points,
            kappa,
            out,
        } => (
            commands::sweep(&SweepArgs {
                integrand: integrand.clone(),
                rule: rule.clone(),
                baseline: baseline.clone(),
                h_min: *h_min,
                h_max: *h_max,
                points: *points,
                kappa: *kappa,
            })?,
            out,
        ),
        Command::Converge {
            integrand,
            rules,
            panels,
            kappa,
            out,
        } => (
            commands::converge(&ConvergeArgs {
                integrand: integrand.clone(),
                rules: rules.clone(),
                panels: panels.clone(),
                kappa: *kappa,
            })?,
            out,
        ),
        Command::NcWeights { n, out } => (commands::nc_weights(*n)?, out),
        Command::DerivCheck {
            rule,
            c,
            fd_step,
            kappa,
            out,
        } => (
            commands::deriv_check(&DerivCheckArgs {
                rule: rule.clone(),
                c: *c,
                fd_step: *fd_step,
                kappa: *kappa,
            })?,
            out,
        ),
        Command::Moments { input, n, tail, out } => {
            let series = commands::read_series(input)?;
            (commands::moments(&series, *n, *tail)?, out)
        }
    };
    let text = commands::emit(&outcome.text, out.as_ref())?.unwrap_or_default();
    Ok(Outcome {
        text,
        code: outcome.code,
    })
}
