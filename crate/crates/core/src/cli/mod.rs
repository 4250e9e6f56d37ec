//! Command-line front end: argument definitions, the commands and their
//! reports.

mod commands;
mod report;
mod source;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{
    cmd_analyze, cmd_bench, cmd_convert, cmd_microbench, cmd_model, cmd_sweep_sigma, rhs_vector,
};
pub use report::{num, OutputFormat, Report, REPORT_VERSION};
pub use source::{load_matrix, LoadedMatrix, MatrixSource};

use crate::error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "sellkit",
    version,
    about = "SELL-C-σ conversion, analysis, modeling and SpMV benchmarking"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structure statistics and chunk occupancy for a list of sorting scopes.
    Analyze(AnalyzeArgs),
    /// Build a SELL matrix and write it as a binary cache file.
    Convert(ConvertArgs),
    /// Time SpMV with one kernel.
    Bench(BenchArgs),
    /// Occupancy, simulated RHS traffic and performance across sorting scopes.
    SweepSigma(SweepArgs),
    /// Roofline prediction from model parameters.
    Model(ModelArgs),
    /// Copy or read-only memory bandwidth.
    Microbench(MicrobenchArgs),
}

/// Chunk heights tuned for particular hardware.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// C = 4
    Avx,
    /// C = 16
    Mic,
    /// C = 32
    GpuWarp,
    /// C = 32
    Unified,
}

impl Preset {
    pub fn chunk_height(self) -> usize {
        match self {
            Preset::Avx => 4,
            Preset::Mic => 16,
            Preset::GpuWarp | Preset::Unified => 32,
        }
    }
}

pub const DEFAULT_PRESET: Preset = Preset::Unified;

#[derive(Debug, Clone, Default, Args)]
pub struct LayoutArgs {
    /// Chunk height C; overrides --preset.
    #[arg(short = 'C', long = "chunk-height")]
    pub chunk_height: Option<usize>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

impl LayoutArgs {
    pub fn with_c(c: usize) -> Self {
        Self {
            chunk_height: Some(c),
            preset: None,
        }
    }

    /// Explicit C, then preset, then `fallback` (a cache file's own C), then
    /// the unified default.
    pub fn resolve(&self, fallback: Option<usize>) -> usize {
        self.chunk_height
            .or(self.preset.map(Preset::chunk_height))
            .or(fallback)
            .unwrap_or(DEFAULT_PRESET.chunk_height())
    }

    pub fn is_set(&self) -> bool {
        self.chunk_height.is_some() || self.preset.is_some()
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ThreadArgs {
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long, env = "SELLKIT_THREADS")]
    pub threads: Option<usize>,
}

impl ThreadArgs {
    pub fn resolve(&self) -> usize {
        self.threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// .mtx file, .sell cache or generator spec such as `gen:worst-case:4,4`.
    pub matrix: String,
    #[command(flatten)]
    pub layout: LayoutArgs,
    /// Sorting scopes, comma separated; defaults to 1 (or the cache's σ).
    #[arg(long, value_delimiter = ',')]
    pub sigma: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ConvertArgs {
    pub matrix: String,
    /// Destination cache file.
    pub output: PathBuf,
    #[command(flatten)]
    pub layout: LayoutArgs,
    #[arg(long, default_value_t = 1)]
    pub sigma: usize,
    /// Byte alignment of each chunk's index array; 1 disables padding.
    #[arg(long, default_value_t = 1)]
    pub align_bytes: usize,
    /// Apply the row permutation to column indices too (square only).
    #[arg(long)]
    pub permute_cols: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    Crs,
    CrsUnrolled,
    Sell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchedArg {
    Auto,
    Static,
    Guided1,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    pub matrix: String,
    /// Storage format and kernel.
    #[arg(long, value_enum, default_value_t = KernelKind::Sell)]
    pub kernel: KernelKind,
    #[command(flatten)]
    pub layout: LayoutArgs,
    /// Sorting scope; defaults to 1 (or the cache's σ).
    #[arg(long)]
    pub sigma: Option<usize>,
    #[arg(long)]
    pub permute_cols: bool,
    #[arg(long, default_value_t = 50)]
    pub reps: usize,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[arg(long, value_enum, default_value_t = SchedArg::Auto)]
    pub sched: SchedArg,
    /// Last-level cache size for the auto schedule; detected when omitted.
    #[arg(long)]
    pub llc_bytes: Option<usize>,
    /// Memory bandwidth in GB/s; adds roofline columns.
    #[arg(long)]
    pub bandwidth: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    pub matrix: String,
    #[command(flatten)]
    pub layout: LayoutArgs,
    /// First scope; a power-of-two multiple of C, default C.
    #[arg(long)]
    pub sigma_min: Option<usize>,
    /// Last scope; default the first doubling that covers all rows.
    #[arg(long)]
    pub sigma_max: Option<usize>,
    /// Simulated cache size; defaults to the detected last-level cache.
    #[arg(long)]
    pub cache_bytes: Option<usize>,
    #[arg(long, default_value_t = 64)]
    pub line_bytes: usize,
    /// Timed repetitions per scope; 0 skips timing.
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long)]
    pub permute_cols: bool,
    #[command(flatten)]
    pub threads: ThreadArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Matrix supplying any parameter not given explicitly.
    #[arg(long)]
    pub matrix: Option<String>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Analyze report in JSON (`-` for stdin) supplying β, N_nzr and N_nzc.
    #[arg(long)]
    pub beta_from: Option<String>,
    /// Row of the analyze report to use; defaults to the last.
    #[arg(long)]
    pub row: Option<usize>,
    /// A number, `ideal` (1/N_nzc) or `simulate` (needs --matrix).
    #[arg(long, default_value = "ideal")]
    pub alpha: String,
    #[arg(long)]
    pub nnzr: Option<f64>,
    #[arg(long)]
    pub nnzc: Option<f64>,
    /// Memory bandwidth in GB/s; repeat for several rows.
    #[arg(long, required = true)]
    pub bandwidth: Vec<f64>,
    #[command(flatten)]
    pub layout: LayoutArgs,
    #[arg(long, default_value_t = 1)]
    pub sigma: usize,
    #[arg(long)]
    pub cache_bytes: Option<usize>,
    #[arg(long, default_value_t = 64)]
    pub line_bytes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MicrobenchKind {
    Copy,
    Read,
}

#[derive(Debug, Clone, Args)]
pub struct MicrobenchArgs {
    #[arg(value_enum)]
    pub kind: MicrobenchKind,
    /// Array size in MiB; defaults to four times the last-level cache.
    #[arg(long)]
    pub size_mb: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[command(flatten)]
    pub threads: ThreadArgs,
}

/// Runs one command and returns its report.
pub fn execute(command: &Command) -> Result<Report> {
    match command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Convert(a) => cmd_convert(a),
        Command::Bench(a) => cmd_bench(a),
        Command::SweepSigma(a) => cmd_sweep_sigma(a),
        Command::Model(a) => cmd_model(a, &mut std::io::stdin().lock()),
        Command::Microbench(a) => cmd_microbench(a),
    }
}

/// Runs the parsed command line and writes the report.
pub fn run(cli: &Cli) -> Result<()> {
    let text = execute(&cli.command)?.render(cli.format);
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
