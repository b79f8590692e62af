use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qid",
    version,
    about = "Unambiguous identification of quantum states",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub output: Format,

    /// Write the report here instead of stdout
    #[arg(long = "out", value_name = "PATH", global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for sampling
    #[arg(long, value_name = "K", value_parser = positive, global = true)]
    pub workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum McKind {
    Identification,
    Discrimination,
    Moment,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal identification probability and its large-N limit
    Pmax {
        #[arg(long, value_parser = positive)]
        d: usize,
        #[arg(long = "N", value_parser = positive)]
        n: usize,
        /// Allowed gap between closed form and spectral value
        #[arg(long, default_value_t = 1e-10, value_parser = tolerance)]
        tol: f64,
    },
    /// Spectrum of A grouped into Young-diagram blocks
    Spectrum {
        #[arg(long, value_parser = positive)]
        d: usize,
        #[arg(long = "N", value_parser = positive)]
        n: usize,
        #[arg(long, default_value_t = 1e-10, value_parser = tolerance)]
        tol: f64,
    },
    /// Validate the optimal measurement
    PovmCheck {
        #[arg(long, value_parser = positive)]
        d: usize,
        #[arg(long = "N", value_parser = positive)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 1e-12, value_parser = tolerance)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo estimates over Haar-random references
    Mc {
        #[arg(long, value_parser = positive)]
        d: usize,
        /// Copies per reference (identification) or tensor power (moment)
        #[arg(long = "N", value_parser = positive, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum, default_value_t = McKind::Identification)]
        kind: McKind,
        #[arg(long, default_value_t = 200_000, value_parser = positive)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative band for estimates, absolute bound for the moment check
        #[arg(long, default_value_t = 0.01, value_parser = tolerance)]
        tol: f64,
    },
    /// Identification curves against N for several d
    Figure {
        /// Comma-separated list
        #[arg(long, value_parser = d_list, default_value = "2,3,4")]
        d: DList,
        /// Inclusive range A..B or a single value
        #[arg(long = "N", value_parser = n_range, default_value = "1..20")]
        n: RangeInclusive<usize>,
        /// Also draw the curves as an SVG line chart
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Qubit recoupling matrices
    Racah {
        #[arg(long = "N", value_parser = positive)]
        n: usize,
        #[arg(long, default_value_t = 1e-12, value_parser = tolerance)]
        tol: f64,
    },
    /// Compare compressed symmetrizers with the full tensor-space average
    Oracle {
        #[arg(long, value_parser = positive)]
        d: usize,
        #[arg(long = "N", value_parser = positive)]
        n: usize,
        #[arg(long, default_value_t = 1e-12, value_parser = tolerance)]
        tol: f64,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(0) => Err("must be at least 1".to_string()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn tolerance(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be a positive number".to_string())
    }
}

/// Sorted, deduplicated list of dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DList(pub Vec<usize>);

fn d_list(s: &str) -> Result<DList, String> {
    let mut out = s.split(',').map(positive).collect::<Result<Vec<_>, _>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(DList(out))
}

fn n_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (positive(a)?, positive(b)?),
        None => {
            let v = positive(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(lo..=hi)
}
