//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stratiflow::hodograph::{CurveKind, Expansion, InitialMode};
use stratiflow::models::{Order, Scaling};
use stratiflow::ratpoly::VarPair;
use stratiflow::simulator::Scheme;
use stratiflow::spectral::WaveFamily;

/// Conserved densities, first-order deformations, hyperbolicity, hodograph
/// solutions and simulations of two-layer stratified flow.
#[derive(Debug, Parser)]
#[command(name = "stratiflow", version, args_override_self = true)]
pub struct Cli {
    /// Directory receiving the artifacts.
    #[arg(long, global = true, default_value = "stratiflow-out")]
    pub out: PathBuf,
    /// Representation of tabular artifacts.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for randomized initial data.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// TOML or JSON file supplying flags; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate or verify conserved densities.
    #[command(subcommand)]
    Conserved(ConservedCommand),
    /// First-order deformations of the polynomial densities.
    Deform(DeformArgs),
    /// Hyperbolicity region and simple waves.
    Hyper(HyperArgs),
    /// Hodograph solutions and curve families.
    #[command(subcommand)]
    Hodograph(HodographCommand),
    /// Method-of-lines simulations.
    #[command(subcommand)]
    Sim(SimCommand),
}

#[derive(Debug, Subcommand)]
pub enum ConservedCommand {
    /// Emit a family of densities as JSON.
    Gen(GenArgs),
    /// Pairwise involution table of the deformed densities.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Poly,
    Alg,
    Toda,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VarsArg {
    Uv,
    Xs,
}

impl From<VarsArg> for VarPair {
    fn from(v: VarsArg) -> Self {
        match v {
            VarsArg::Uv => VarPair::UV,
            VarsArg::Xs => VarPair::XiSigma,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Number of densities.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = VarsArg::Xs)]
    pub vars: VarsArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TruncationArg {
    /// Modulo `r²`.
    O1,
    /// Exactly in `r`.
    Exact,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Pairs `j,k` to test; repeat or separate with spaces.
    #[arg(long, num_args = 1.., required_unless_present = "max_index")]
    pub pairs: Vec<String>,
    /// Test every pair `j < k <= J` instead of explicit pairs.
    #[arg(long)]
    pub max_index: Option<usize>,
    #[arg(long, value_enum, default_value_t = TruncationArg::O1)]
    pub order: TruncationArg,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct DeformArgs {
    #[command(subcommand)]
    pub action: Option<DeformAction>,
    /// Index `j` of the density to deform.
    #[arg(long)]
    pub index: Option<usize>,
    /// Deform every index from `--index` up to this one.
    #[arg(long)]
    pub max_index: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum DeformAction {
    /// Pairwise involution table of the deformed densities.
    Involution(InvolutionArgs),
}

#[derive(Debug, Args)]
pub struct InvolutionArgs {
    #[arg(long)]
    pub max_index: usize,
    #[arg(long, value_enum, default_value_t = TruncationArg::O1)]
    pub order: TruncationArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Full,
    O1,
    O0,
}

impl From<OrderArg> for Order {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Full => Order::Full,
            OrderArg::O1 => Order::FirstOrder,
            OrderArg::O0 => Order::ZerothOrder,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScalingArg {
    Boussinesq,
    FixedG,
}

impl From<ScalingArg> for Scaling {
    fn from(s: ScalingArg) -> Self {
        match s {
            ScalingArg::Boussinesq => Scaling::Boussinesq,
            ScalingArg::FixedG => Scaling::FixedG,
        }
    }
}

/// Model selection shared by several commands.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Inertia parameter.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = OrderArg::Full)]
    pub order: OrderArg,
    #[arg(long, value_enum, default_value_t = ScalingArg::Boussinesq)]
    pub scaling: ScalingArg,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct HyperArgs {
    #[command(subcommand)]
    pub action: Option<HyperAction>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Use fixed-gravity units (same as `--scaling fixed-g`).
    #[arg(long)]
    pub appendix_b: bool,
    /// Number of boundary samples.
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum HyperAction {
    /// Simple-wave curve through a start point.
    SimpleWave(SimpleWaveArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WaveArg {
    Plus,
    Minus,
    Both,
}

impl WaveArg {
    pub fn families(self) -> Vec<WaveFamily> {
        match self {
            WaveArg::Plus => vec![WaveFamily::Plus],
            WaveArg::Minus => vec![WaveFamily::Minus],
            WaveArg::Both => vec![WaveFamily::Plus, WaveFamily::Minus],
        }
    }
}

#[derive(Debug, Args)]
pub struct SimpleWaveArgs {
    /// Start point `ξ,σ`.
    #[arg(long, allow_hyphen_values = true)]
    pub start: String,
    #[arg(long, value_enum, default_value_t = WaveArg::Both)]
    pub family: WaveArg,
    /// Integrator tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Subcommand)]
pub enum HodographCommand {
    /// Snapshots of the hodograph solution.
    Run(HodographRunArgs),
    /// Level sets of the time or space curve family.
    Curves(CurvesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    SigmaZero,
    XiConstant,
}

impl From<ModeArg> for InitialMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::SigmaZero => InitialMode::SigmaZero,
            ModeArg::XiConstant => InitialMode::XiConstant,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpansionArg {
    Exact,
    Linearized,
}

impl From<ExpansionArg> for Expansion {
    fn from(e: ExpansionArg) -> Self {
        match e {
            ExpansionArg::Exact => Expansion::Exact,
            ExpansionArg::Linearized => Expansion::Linearized,
        }
    }
}

/// The deformed density and model of a hodograph problem.
#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Index of the deformed density (odd).
    #[arg(long = "F-index", alias = "f-index", default_value_t = 3)]
    pub f_index: usize,
    /// Inertia parameter of the first-order model.
    #[arg(long, default_value_t = 0.05)]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::SigmaZero)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct HodographRunArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Snapshot times `start:end:step`.
    #[arg(long, default_value = "0:2:0.5")]
    pub t: String,
    /// Grid `start:end:count`.
    #[arg(long, default_value = "-0.5:0.5:101", allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, value_enum, default_value_t = ExpansionArg::Exact)]
    pub expansion: ExpansionArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveArg {
    Time,
    Space,
}

impl From<CurveArg> for CurveKind {
    fn from(c: CurveArg) -> Self {
        match c {
            CurveArg::Time => CurveKind::TimeFamily,
            CurveArg::Space => CurveKind::SpaceFamily,
        }
    }
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value_t = CurveArg::Time)]
    pub kind: CurveArg,
    /// Levels `start:end:step`.
    #[arg(long, default_value = "0:2:0.5", allow_hyphen_values = true)]
    pub levels: String,
    /// Number of `ξ` samples per level.
    #[arg(long, default_value_t = 80)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum SimCommand {
    /// Integrate from initial data and report conservation drift.
    Run(SimRunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Rk4,
    Lf,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Rk4 => Scheme::CentralRk4,
            SchemeArg::Lf => Scheme::LaxFriedrichs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Periodic,
    Extend,
}

#[derive(Debug, Args)]
pub struct SimRunArgs {
    /// Model truncation.
    #[arg(long, value_enum, default_value_t = OrderArg::Full)]
    pub model: OrderArg,
    #[arg(long, default_value_t = 0.0)]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = ScalingArg::Boussinesq)]
    pub scaling: ScalingArg,
    /// Initial data: a CSV file with columns `x,xi,sigma`,
    /// `hodograph:index=3,mode=sigma-zero,a=-0.5,b=-0.2,expansion=exact`,
    /// `wave:xi=0.2,sigma=0.2,offset=0` or `random:modes=3,amp=0.1`.
    #[arg(long, default_value = "wave")]
    pub ic: String,
    /// Final time.
    #[arg(long = "T", alias = "t-end", default_value_t = 1.0)]
    pub t_end: f64,
    /// Number of grid nodes (ignored for file data).
    #[arg(long, default_value_t = 256)]
    pub nx: usize,
    #[arg(long, value_enum, default_value_t = SchemeArg::Rk4)]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 0.4)]
    pub cfl: f64,
    /// Snapshot times, comma separated (the final state is always written).
    #[arg(long, default_value = "")]
    pub snapshots: String,
    /// Boundary treatment for file data.
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    pub boundary: BoundaryArg,
    /// Largest density index monitored in the drift report.
    #[arg(long, default_value_t = 4)]
    pub monitor_max: usize,
}
