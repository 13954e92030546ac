//! Command-line front end: exact spectra and overlaps, 6j sweeps, bending
//! traces and tetrahedron reports.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "recoupling", version, about = "SU(2) recoupling and polygon-space verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Joint spectrum of the H_a against the coloring formula.
    Spectrum(SpectrumArgs),
    /// List the admissible colorings of a graph.
    Colorings(SpectrumArgs),
    /// Overlap matrix between the joint eigenbases of two graphs.
    Overlap(OverlapArgs),
    /// Exact 6j-symbol.
    Sixj(SixjArgs),
    /// Exact 6j against its large-label asymptotics over a range of k.
    Sweep(SweepArgs),
    /// Trace of lengths and angles along a schedule of bending flows.
    Bend(BendArgs),
    /// Volume, exterior dihedral angles, phase, area and ω of a tetrahedron.
    Tetra(TetraArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args)]
pub struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args)]
pub struct SpectrumArgs {
    /// Built-in alias (g4, g4p, star6, cat<n>), a file, or inline graph text.
    #[arg(long)]
    pub graph: Option<String>,
    /// Boundary labels, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ell: Vec<u32>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args)]
pub struct OverlapArgs {
    #[arg(long, default_value = "g4")]
    pub graph: String,
    #[arg(long, default_value = "g4p")]
    pub graph2: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub ell: Vec<u32>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args)]
pub struct SixjArgs {
    /// m1,m2,m,m3,m4,m' (twice the spins).
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub labels: Vec<u32>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Four boundary lengths; labels are kℓ − 1.
    #[arg(long, value_delimiter = ',', default_value = "2,2,2,2")]
    pub ell: Vec<u32>,
    /// Single k (overrides --k-range).
    #[arg(long)]
    pub k: Option<u32>,
    /// Inclusive range a:b.
    #[arg(long, default_value = "10:200")]
    pub k_range: String,
    #[arg(long = "target-E", default_value_t = 4.0)]
    pub target_e: f64,
    #[arg(long = "target-Ep", default_value_t = 4.0)]
    pub target_ep: f64,
    /// Largest accepted log-log error slope.
    #[arg(long, default_value_t = -2.3, allow_hyphen_values = true)]
    pub tol_slope: f64,
    /// Largest accepted max/median of k^{5/2}|err|.
    #[arg(long, default_value_t = 10.0)]
    pub tol_uniformity: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args)]
pub struct BendArgs {
    #[arg(long)]
    pub graph: Option<String>,
    /// Side lengths.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ell: Vec<f64>,
    /// Starting internal lengths; random interior point if absent.
    #[arg(long, value_delimiter = ',')]
    pub point: Option<Vec<f64>>,
    /// Starting torus angles; random if absent.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub angles: Option<Vec<f64>>,
    /// Segments edge:periods, one period being π.
    #[arg(long, value_delimiter = ',')]
    pub schedule: Option<Vec<String>>,
    /// Samples per segment.
    #[arg(long, default_value_t = 8)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol_conservation: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args)]
pub struct TetraArgs {
    /// √E,√E′,ℓ1,ℓ2,ℓ3,ℓ4.
    #[arg(long, value_delimiter = ',')]
    pub lengths: Option<Vec<f64>>,
    #[arg(long = "target-E")]
    pub target_e: Option<f64>,
    #[arg(long = "target-Ep")]
    pub target_ep: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub ell: Option<Vec<f64>>,
    #[command(flatten)]
    pub output: Output,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Colorings(a) => commands::colorings(a),
        Command::Overlap(a) => commands::overlap(a),
        Command::Sixj(a) => commands::sixj(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Bend(a) => commands::bend(a),
        Command::Tetra(a) => commands::tetra(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verdict: FAIL");
            ExitCode::from(1)
        }
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
