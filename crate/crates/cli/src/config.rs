//! Command-line surface and the parsing of grid specifications.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lumpgeom_core::profile::{profile_by_name, CoefficientProfile, TabulatedProfile};
use lumpgeom_core::{GeomError, Result};

pub const QUAD_ORDER_ENV: &str = "LUMPGEOM_QUAD_ORDER";

#[derive(Debug, Parser, Serialize)]
#[command(name = "lumpgeom", version, about = "L² geometry of harmonic-map moduli spaces")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct Common {
    /// Generator profile: `l2`, `fs`, or `csv:<path>` for tabulated samples.
    #[arg(long, global = true, default_value = "l2")]
    pub profile: String,
    /// Sphere quadrature order (angular nodes; radial nodes per chart).
    #[arg(long, global = true, env = QUAD_ORDER_ENV, default_value_t = lumpgeom_core::quadrature::DEFAULT_ORDER)]
    pub order: usize,
    /// Tolerance for refinement checks.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Curvature functions on a λ grid, as CSV.
    Tabulate {
        /// `start:stop:count` or `start:stop:count:log`.
        #[arg(long, default_value = "0:10:101")]
        grid: String,
    },
    /// Run verification suites and write a JSON report.
    Verify {
        /// Comma-separated suite names, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Finite-difference step of the Kähler symmetry check.
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
    /// Integrate a geodesic and write the trajectory as CSV.
    Geodesic {
        #[command(flatten)]
        flow: FlowArgs,
        #[arg(long, default_value_t = lumpgeom_core::dynamics::DEFAULT_DT)]
        dt: f64,
    },
    /// Spin flow of `H = c·λ^p`, as CSV.
    Hamiltonian {
        #[command(flatten)]
        flow: FlowArgs,
        #[arg(long, default_value_t = 1.0)]
        h_coeff: f64,
        #[arg(long, default_value_t = 2)]
        h_power: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Volume, radial-curve length and diameter bound, as JSON.
    Volume,
    /// Computations on the RP² moduli space.
    Rp2 {
        #[arg(long, value_enum, default_value_t = Rp2Mode::FRho)]
        mode: Rp2Mode,
        /// Odd degree.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Exponents `k` with `ρ = 1 − 10^{−k}`: `a:b` or a comma list.
        #[arg(long, default_value = "2:6")]
        rho_grid: String,
        /// Fixed-set chart JSON (file path or inline) for `--mode chart`.
        #[arg(long)]
        init: Option<String>,
    },
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct FlowArgs {
    /// Initial condition JSON (file path or inline):
    /// `{"lambda":[..],"rotation":[..],"lambda_dot":[..],"omega":[..]}`.
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long = "T", default_value_t = 1.0)]
    pub t_final: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Rp2Mode {
    FRho,
    Length,
    Chart,
}

pub fn load_profile(name: &str) -> Result<Box<dyn CoefficientProfile>> {
    match name.strip_prefix("csv:") {
        Some(path) => Ok(Box::new(TabulatedProfile::from_path(std::path::Path::new(path))?)),
        None => profile_by_name(name),
    }
}

/// Reads JSON from a file path, or parses the argument itself when it
/// starts with `{`.
pub fn read_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    Ok(serde_json::from_str(&text)?)
}

/// `start:stop:count[:log]`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || GeomError::InvalidInput(format!("grid must be start:stop:count[:log], got `{text}`"));
    let parts: Vec<&str> = text.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    let log = match parts.get(3) {
        None | Some(&"lin") => false,
        Some(&"log") => true,
        _ => return Err(bad()),
    };
    if count == 0 {
        return Err(GeomError::InvalidInput("grid is empty".into()));
    }
    if !(start.is_finite() && stop.is_finite()) || stop < start || start < 0.0 {
        return Err(GeomError::InvalidInput(format!("grid needs 0 ≤ start ≤ stop, got `{text}`")));
    }
    if log && start <= 0.0 {
        return Err(GeomError::InvalidInput("a log grid needs start > 0".into()));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = |i: usize| i as f64 / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if log {
                (start.ln() + (stop.ln() - start.ln()) * step(i)).exp()
            } else {
                start + (stop - start) * step(i)
            }
        })
        .collect())
}

/// `a:b` (inclusive) or `a,b,c`.
pub fn parse_k_list(text: &str) -> Result<Vec<u32>> {
    let bad = || GeomError::InvalidInput(format!("expected a:b or a comma list of integers, got `{text}`"));
    let ks: Vec<u32> = if let Some((a, b)) = text.split_once(':') {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        text.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if ks.is_empty() {
        return Err(GeomError::InvalidInput("empty ρ grid".into()));
    }
    Ok(ks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:10:3").unwrap(), vec![0.0, 5.0, 10.0]);
        let g = parse_grid("1:1e4:5:log").unwrap();
        assert!((g[4] - 1e4).abs() < 1e-9 && (g[1] - 10.0).abs() < 1e-12);
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
        assert_eq!(parse_k_list("2:4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_k_list("2,5").unwrap(), vec![2, 5]);
    }
}
