mod commands;
mod probes;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Check regularity of convex-valued mappings on [0, T], build càdlàg
/// selections and Castaing families, and verify the interchange rule for
/// integral functionals.
#[derive(Debug, Parser)]
#[command(name = "cadselect", version, about)]
#[command(after_help = "Exit codes: 0 pass, 2 check failed, 3 infeasible, 4 input error.\n\
The CADSELECT_THREADS environment variable caps the number of worker threads.")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Number of uniform grid cells before breakpoint refinement.
    #[arg(long = "grid", global = true, default_value_t = 1000)]
    pub grid: usize,

    /// Geometric tolerance for membership and containment.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_geom: f64,

    /// Final accuracy of the iterative selection.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol_sel: f64,

    /// Largest distance from Γ_t accepted for a projection-selection value.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_proj: f64,

    /// Relative tolerance of the interchange gap.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub tol_int: f64,

    /// Seed for sampled probe points and excess samples.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Probe catalog as `step=0.25,inflate=1,radii=0.25:0.5:1:2`; omitted
    /// keys keep their defaults.
    #[arg(long, global = true)]
    pub probes: Option<String>,

    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    /// Worker threads.
    #[arg(long, global = true, env = "CADSELECT_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the regularity checks and write `report.toml`.
    Check {
        /// Mapping or integrand spec (the integrand's domain is checked).
        spec: PathBuf,
    },
    /// Build one selection and write it as CSV.
    Select {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Michael)]
        method: Method,
        /// Reference point of the projection selection, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Option<Vec<f64>>,
        /// Accuracy of the ε-selection.
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Build a Castaing family: one CSV per member plus `manifest.toml`.
    Castaing {
        spec: PathBuf,
        /// Finest target level K; level k uses ε = 2^-k.
        #[arg(long, default_value_t = 6)]
        levels: usize,
        /// Random samples per node when measuring the excess.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Compare min K(y) over candidate selections with ∫ inf h dμ.
    Interchange {
        /// Integrand spec.
        spec: PathBuf,
        /// Target level of the Castaing family used as candidates.
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Brute-force references: dense-lattice distances to Γ_t, and the
    /// dense excess of Γ_t over a family when `--family` is given.
    Oracle {
        spec: PathBuf,
        /// Query point for distances, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<f64>,
        /// Lattice cell diameter.
        #[arg(long, default_value_t = 1e-2)]
        step: f64,
        /// Use every `stride`-th grid node.
        #[arg(long, default_value_t = 50)]
        stride: usize,
        /// Directory of member CSVs written by `castaing`.
        #[arg(long)]
        family: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Michael,
    Projection,
    Epsilon,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(status) => {
            println!("{}", status.summary);
            ExitCode::from(status.code)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
