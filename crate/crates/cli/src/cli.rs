use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eqcenter_core::harness::{isosceles_tetrahedron, random_simplex, regular_simplex};
use eqcenter_core::Tolerance;
use serde::Serialize;

use crate::commands;
use crate::error::CliError;
use crate::format::{self, SimplexFile};
use crate::report::VerifyText;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(
    name = "eqcenter",
    version,
    about = "Symmetry, fixed subspaces and equivariant centers of simplices"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Absolute tolerance.
    #[arg(long, global = true, default_value_t = Tolerance::default().abs, value_parser = parse_tolerance)]
    pub tol_abs: f64,

    /// Relative tolerance.
    #[arg(long, global = true, default_value_t = Tolerance::default().rel, value_parser = parse_tolerance)]
    pub tol_rel: f64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

impl GlobalArgs {
    pub fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.tol_abs, self.tol_rel)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    /// One JSON document.
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Affine independence, equifacetality, symmetry group and fixed subspace.
    Analyze {
        /// Simplex file, or `-` for stdin.
        path: PathBuf,
    },
    /// Values of the centroid, the h-weighted center and, in the plane, the
    /// classical triangle centers.
    Centers { path: PathBuf },
    /// Runs the coincidence/certificate harness.
    Verify {
        /// Dimensions as a list and/or ranges, e.g. `2,3` or `2-5`.
        #[arg(long, default_value = "2-5", value_parser = parse_dims)]
        dims: Dims,
        /// Random simplices per dimension.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Evaluates the orbit-transport center built from BASE and ANCHOR at TARGET.
    Transport {
        base: PathBuf,
        /// Comma-separated coordinates of a point fixed by every symmetry of BASE.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        anchor: Coords,
        target: PathBuf,
    },
    /// Writes a simplex file.
    Generate {
        #[command(subcommand)]
        kind: Generate,
        /// Output path; stdout when omitted.
        #[arg(long, short, global = true)]
        output: Option<PathBuf>,
        #[arg(long, global = true)]
        label: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// Regular simplex with unit edges, centered at the origin.
    Regular { n: usize },
    /// Tetrahedron with opposite edges of equal lengths `x`, `y`, `z`.
    Isosceles { x: f64, y: f64, z: f64 },
    /// Random simplex with coordinates in [-1, 1].
    Random {
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dims(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq)]
pub struct Coords(pub Vec<f64>);

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x >= 0.0 {
        Ok(x)
    } else {
        Err("tolerance must be finite and non-negative".into())
    }
}

/// `2,3,5`, `2-5` and mixtures such as `2-4,6`; duplicates are dropped and
/// the result is sorted.
pub fn parse_dims(s: &str) -> Result<Dims, String> {
    let mut dims = Vec::new();
    for part in s.split(',').map(str::trim) {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid dimension `{t}`"))
        };
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if lo > hi {
                    return Err(format!("empty range `{part}`"));
                }
                dims.extend(lo..=hi);
            }
            None => dims.push(num(part)?),
        }
    }
    if dims.contains(&0) {
        return Err("dimensions start at 1".into());
    }
    dims.sort_unstable();
    dims.dedup();
    Ok(Dims(dims))
}

pub fn parse_point(s: &str) -> Result<Coords, String> {
    let coords = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("invalid coordinate `{t}`"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Coords(coords))
}

fn emit<R: Serialize>(
    out: &mut impl Write,
    format: OutputFormat,
    report: &R,
    text: &dyn std::fmt::Display,
) -> Result<(), CliError> {
    let rendered = match format {
        OutputFormat::Text => text.to_string(),
        OutputFormat::Structured => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::Output(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    out.write_all(rendered.as_bytes())
        .map_err(|source| CliError::Io {
            context: "writing output".into(),
            source,
        })
}

pub fn run(cli: &Cli, out: &mut impl Write) -> Result<(), CliError> {
    let tol = cli.global.tolerance();
    let fmt = cli.global.format;
    match &cli.command {
        Command::Analyze { path } => {
            let report = commands::cmd_analyze(path, &tol)?;
            emit(out, fmt, &report, &report)
        }
        Command::Centers { path } => {
            let report = commands::cmd_centers(path, &tol)?;
            emit(out, fmt, &report, &report)
        }
        Command::Verify { dims, count, seed } => {
            let report = commands::cmd_verify(&dims.0, *count, *seed, &tol);
            emit(out, fmt, &report, &VerifyText(&report))?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Verification(report.total_failures()))
            }
        }
        Command::Transport {
            base,
            anchor,
            target,
        } => {
            let report = commands::cmd_transport(base, &anchor.0, target, &tol)?;
            emit(out, fmt, &report, &report)
        }
        Command::Generate {
            kind,
            output,
            label,
        } => {
            let simplex = match kind {
                Generate::Regular { n } => regular_simplex(*n)?,
                Generate::Isosceles { x, y, z } => isosceles_tetrahedron(*x, *y, *z, true)?,
                Generate::Random { n, seed } => {
                    if *n == 0 {
                        return Err(eqcenter_core::Error::ZeroDimension.into());
                    }
                    random_simplex(*n, *seed)
                }
            };
            let file = SimplexFile::from_simplex(&simplex, label.clone());
            match output {
                Some(path) => format::write(path, &file),
                None => out
                    .write_all(format::to_string(&file).as_bytes())
                    .map_err(|source| CliError::Io {
                        context: "writing output".into(),
                        source,
                    }),
            }
        }
    }
}
