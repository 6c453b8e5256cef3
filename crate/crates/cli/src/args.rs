use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "quench-info", version, about = "Correlations generated by quenching transverse-field spin chains")]
pub struct Cli {
    /// Flat `key = value` file of flag defaults. Keys are flag names without
    /// the leading dashes; flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measures for a single (protocol, tau, n).
    #[command(args_override_self = true)]
    Measures(MeasuresArgs),
    /// Measures over a grid of tau, or of J3 at fixed tau.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Log-log power-law fit of one column of a sweep CSV.
    #[command(args_override_self = true)]
    Fit(FitArgs),
    /// Decoherence factor, discord and concurrence of two central qubits.
    #[command(args_override_self = true)]
    Decohere(DecohereArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolKind {
    Ising,
    Multicritical,
    ThreeSpin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measurement {
    /// Projective measurements along any Bloch direction.
    Full,
    /// Projective measurements in the xy plane.
    Equatorial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Over {
    Tau,
    J3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Args)]
pub struct ProtocolArgs {
    #[arg(long, value_enum, default_value_t = ProtocolKind::Ising)]
    pub protocol: ProtocolKind,

    /// Anisotropy (Ising only, default 1).
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Three-spin coupling (three-spin only).
    #[arg(long)]
    pub j3: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output path; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WorkerArgs {
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct MeasuresArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,

    #[arg(long)]
    pub tau: f64,

    /// Site separation (2, 4 or 6).
    #[arg(long, default_value_t = 2)]
    pub n: u32,

    #[arg(long, value_enum, default_value_t = Measurement::Equatorial)]
    pub measurement: Measurement,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,

    #[arg(long, value_enum, default_value_t = Over::Tau)]
    pub over: Over,

    /// Fixed tau of a J3 sweep.
    #[arg(long)]
    pub tau: Option<f64>,

    #[arg(long)]
    pub tau_min: Option<f64>,

    #[arg(long)]
    pub tau_max: Option<f64>,

    #[arg(long)]
    pub j3_min: Option<f64>,

    #[arg(long)]
    pub j3_max: Option<f64>,

    #[arg(long, default_value_t = 21)]
    pub points: usize,

    /// Grid spacing (default: log for tau, linear for J3).
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,

    #[arg(long, default_value_t = 2)]
    pub n: u32,

    #[arg(long, value_enum, default_value_t = Measurement::Equatorial)]
    pub measurement: Measurement,

    #[command(flatten)]
    pub workers: WorkerArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Sweep CSV; `-` reads standard input.
    #[arg(long)]
    pub input: PathBuf,

    /// Column to fit.
    #[arg(long, default_value = "Q")]
    pub column: String,

    /// Abscissa column (default: `j3` when present, else `tau`).
    #[arg(long)]
    pub x: Option<String>,

    #[arg(long)]
    pub window_min: f64,

    #[arg(long)]
    pub window_max: f64,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DecohereArgs {
    /// Environment size N (even).
    #[arg(long, default_value_t = 500)]
    pub spins: usize,

    /// Coupling to the central qubits.
    #[arg(long)]
    pub delta: f64,

    #[arg(long)]
    pub tau: f64,

    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,

    /// Werner weight of the initial qubit state.
    #[arg(long)]
    pub a: f64,

    /// Field at which the environment starts in its ground state.
    #[arg(long, default_value_t = quench_info::central::DEFAULT_H_START)]
    pub h_start: f64,

    /// First output time (t = 0 where h = 1).
    #[arg(long, allow_negative_numbers = true)]
    pub t0: f64,

    #[arg(long, allow_negative_numbers = true)]
    pub t1: f64,

    #[arg(long)]
    pub dt: f64,

    #[command(flatten)]
    pub workers: WorkerArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}
