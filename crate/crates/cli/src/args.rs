use std::path::PathBuf;

use adiabat::models::Model;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "adiabat",
    version,
    about = "Entropy from adiabatic accessibility"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Sampled property suite for the six accessibility axioms
    Axioms,
    /// Comparison hypothesis on one comparability class
    Compare,
    /// Entropy table from the accessibility relation alone
    Construct,
    /// Decide whether a finite relation admits an additive entropy
    Existence,
    /// Rubbing-world counterexample: incomparable pairs, BFS check, infeasibility
    Counterexample,
    /// One-bar heating curve of water
    WaterTable,
    /// Temperature from the reconstructed entropy
    Temperature,
    /// Entropy change along a polygonal path of the ideal gas
    Loop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertices(pub Vec<(f64, f64)>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    #[arg(long, global = true, default_value = "ideal-gas", value_parser = parse_model)]
    pub model: Model,
    /// Sample count; each subcommand has its own default
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// lambda_max bisection tolerance
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = parse_positive)]
    pub tol: f64,
    /// Strictness margin for the existence program
    #[arg(long, global = true, default_value_t = 1.0, value_parser = parse_positive)]
    pub margin: f64,
    /// Grid as WxH
    #[arg(long, global = true, value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    /// Relation file (JSON)
    #[arg(long, global = true)]
    pub relation: Option<PathBuf>,
    /// Path vertices as `U,V;U,V;...`
    #[arg(long, global = true, value_parser = parse_path)]
    pub path: Option<Vertices>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub parallel: bool,
}

impl Opts {
    pub fn samples_or(&self, default: usize) -> usize {
        self.samples.map_or(default, |n| n as usize)
    }

    pub fn grid_or(&self, default: (usize, usize)) -> (usize, usize) {
        self.grid.unwrap_or(default)
    }
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse()
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got `{s}`"))?;
    let w: usize = w.trim().parse().map_err(|e| format!("grid width: {e}"))?;
    let h: usize = h.trim().parse().map_err(|e| format!("grid height: {e}"))?;
    if w == 0 || h == 0 {
        return Err("grid dimensions must be positive".into());
    }
    Ok((w, h))
}

fn parse_path(s: &str) -> Result<Vertices, String> {
    s.split(';')
        .map(|v| {
            let (u, vol) = v
                .split_once(',')
                .ok_or_else(|| format!("expected U,V, got `{v}`"))?;
            let u = u.trim().parse::<f64>().map_err(|e| format!("{e}"))?;
            let vol = vol.trim().parse::<f64>().map_err(|e| format!("{e}"))?;
            Ok((u, vol))
        })
        .collect::<Result<_, _>>()
        .map(Vertices)
}
