//! `wzterm` command-line front end. [`run`] parses an argument vector, dispatches to the
//! library and returns a [`ResultEnvelope`].

mod commands;
mod envelope;

pub use envelope::{leaves, parse_text, Format, Metadata, ResultEnvelope, Tolerances};

use clap::{Args, Parser, Subcommand};
use std::fmt;
use std::path::PathBuf;
use wzterm_core::WzError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn bad_input(message: impl Into<String>) -> Self {
        Self { code: EXIT_BAD_INPUT, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<WzError> for CliError {
    fn from(e: WzError) -> Self {
        let code = if e.is_convergence() { EXIT_NO_CONVERGENCE } else { EXIT_BAD_INPUT };
        Self { code, message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "wzterm", version, about = "Wess-Zumino terms and energies of harmonic maps into Lie groups")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// CSV output for spectral, moduli-holonomy and flat-check
    #[arg(long, global = true)]
    pub dump_samples: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub quad_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub angle_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub branch_floor: f64,
    /// worker threads (falls back to WZTERM_THREADS, then all cores)
    #[arg(long, global = true, env = "WZTERM_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Root-system record of a simple type
    GroupInfo(GroupArgs),
    /// Wess-Zumino term of a homomorphism T^2 -> T
    WzTorusHom(TorusArgs),
    /// Wess-Zumino term of a map into a symmetric space
    WzSymmetric(SymmetricArgs),
    /// Composition with the equatorial 2-sphere
    WzDegree(DegreeArgs),
    /// Harmonic 2-sphere of given energy
    WzSphere(SphereArgs),
    /// Chern-Simons holonomy along a path of flat torus connections
    ModuliHolonomy(ModuliArgs),
    /// Genus-0 spectral curve: holonomy integral, energy, Gamma
    Spectral(SpectralArgs),
    /// The Clifford torus
    Clifford(CliffordArgs),
    /// Flatness of the connection loop of a sampled map
    FlatCheck(FlatArgs),
    /// Energy of a sampled map
    EnergyNumeric(EnergyArgs),
    /// Monte Carlo volume fraction in S^3
    Volume(VolumeArgs),
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    #[arg(long)]
    pub group: String,
    /// also run the brute-force Killing-form computation and compare
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct TorusArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long, allow_hyphen_values = true)]
    pub m: String,
    #[arg(long, allow_hyphen_values = true)]
    pub n: String,
}

#[derive(Debug, Args)]
pub struct SymmetricArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub n: i64,
}

#[derive(Debug, Args)]
pub struct DegreeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub deg: i64,
}

#[derive(Debug, Args)]
pub struct SphereArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long, allow_negative_numbers = true)]
    pub energy: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ModuliArgs {
    /// CartanPath JSON file
    #[arg(long, conflicts_with_all = ["group", "lambda1", "lambda2"])]
    pub path: Option<PathBuf>,
    /// straight path from 0 to (lambda1, lambda2)
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda2: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct SpectralArgs {
    /// `re,im` of the nonconformal parameter
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    pub alpha: Option<String>,
    /// curve JSON file
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// starting Simpson intervals
    #[arg(long, default_value_t = 1024)]
    pub intervals: usize,
}

#[derive(Debug, Args)]
pub struct CliffordArgs {
    #[arg(long, default_value_t = 1024)]
    pub intervals: usize,
}

#[derive(Debug, Args)]
pub struct FlatArgs {
    /// `clifford` or a map JSON file
    #[arg(long, default_value = "clifford")]
    pub map: String,
    /// grid size of the generated map (coarsest level)
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    /// generated grids grid, 2 grid, ...
    #[arg(long, default_value_t = 2)]
    pub levels: usize,
    /// right-multiplication perturbation of the generated map
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub perturb: f64,
    /// comma-separated angles, default pi/4, pi/2, 3 pi/4
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long, default_value_t = 1e-3)]
    pub projection_limit: f64,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[arg(long, default_value = "clifford")]
    pub map: String,
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub perturb: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub projection_limit: f64,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[arg(long)]
    pub surface: String,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Parses `argv` (without the program name) and runs the command.
pub fn run<I, S>(argv: I) -> Result<ResultEnvelope, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> =
        std::iter::once("wzterm".into()).chain(argv.into_iter().map(Into::into)).collect();
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::bad_input(e.to_string()))?;
    run_parsed(&cli)
}

pub fn run_parsed(cli: &Cli) -> Result<ResultEnvelope, CliError> {
    match cli.threads {
        Some(0) => Err(CliError::bad_input("--threads must be positive")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::bad_input(e.to_string()))?;
            pool.install(|| commands::dispatch(cli))
        }
        None => commands::dispatch(cli),
    }
}
