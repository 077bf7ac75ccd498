use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "parahiggs",
    version,
    about = "Compactness certificates and Kronecker stability from the command line"
)]
pub struct Cli {
    /// Cap on the number of subspaces an exhaustive search may visit.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    pub budget: u64,
    /// Worker threads for `sweep` (default: all cores).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Add the wall time to the report (makes reports differ between runs).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Multiweight construction and certification.
    #[command(subcommand)]
    Weights(WeightsCmd),
    /// Stability decisions for Kronecker data.
    #[command(subcommand)]
    Stability(StabilityCmd),
    /// Hilbert–Mumford weights.
    #[command(subcommand)]
    Mu(MuCmd),
    /// Binary form det(X·A1 + Y·A2) and semistability of a square pencil.
    Pencil(PencilArgs),
    /// Antisymmetric and symmetric tuples for the real forms.
    #[command(subcommand)]
    Realform(RealformCmd),
    /// Low-discrepancy sweep over the ε-profile box.
    Sweep(SweepArgs),
    /// Closed-form components.
    #[command(subcommand)]
    Component(ComponentCmd),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightsCmd {
    /// Constant multiweight for (p, q, s, a) with its certificate
    Construct(ConstructArgs),
    /// Compactness certificate of a multiweight file and degree d
    Certify(CertifyArgs),
    /// Self-dual multiweight for Sp(2p, R)
    Sp(SpArgs),
    /// Torsion line bundle action on a multiweight
    Twist(TwistArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    /// Comma-separated ε^j, e.g. "1/10,1/10,1/10".
    #[arg(long)]
    pub eps_profile: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct CertifyArgs {
    /// Multiweight JSON.
    #[arg(long)]
    pub file: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
}

#[derive(Debug, Args, Serialize)]
pub struct SpArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub eps_profile: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct TwistArgs {
    /// Comma-separated residues in Z_{p+q}, one per puncture.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: String,
    /// Multiweight JSON.
    #[arg(long)]
    pub file: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    /// Apply the twist this many times.
    #[arg(long, default_value_t = 1)]
    pub times: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldArg {
    /// Characteristic zero.
    Ql,
    F2,
    F3,
    F5,
    F7,
    F11,
    F13,
}

impl FieldArg {
    pub fn prime(self) -> Option<u64> {
        match self {
            FieldArg::Ql => None,
            FieldArg::F2 => Some(2),
            FieldArg::F3 => Some(3),
            FieldArg::F5 => Some(5),
            FieldArg::F7 => Some(7),
            FieldArg::F11 => Some(11),
            FieldArg::F13 => Some(13),
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityCmd {
    /// King criterion; over Q via good-prime reductions.
    King(KingArgs),
    /// Stability with flag weights at the punctures.
    Feathered(FeatheredArgs),
    /// Kronecker verdict against the Higgs-side verdict for a constant multiweight.
    Equivalence(EquivalenceArgs),
    /// Alternating scaling of a rational tuple.
    Scaling(ScalingArgs),
    /// Existence of semistable and stable points for (p, q, r).
    Existence(ExistenceArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct KingArgs {
    /// Tuple JSON.
    #[arg(long)]
    pub file: String,
    /// Field to decide over; defaults to the tuple's own field.
    #[arg(long, value_enum)]
    pub field: Option<FieldArg>,
    #[arg(long, default_value_t = 200)]
    pub iters: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct FeatheredArgs {
    /// Tuple JSON.
    #[arg(long)]
    pub tuple: String,
    /// Flag configuration JSON.
    #[arg(long)]
    pub flags: String,
    /// Feather weights JSON.
    #[arg(long)]
    pub feathers: String,
    /// Reduce a rational tuple to this prime field first.
    #[arg(long, value_enum)]
    pub field: Option<FieldArg>,
}

#[derive(Debug, Args, Serialize)]
pub struct EquivalenceArgs {
    #[arg(long)]
    pub tuple: String,
    /// Multiweight JSON.
    #[arg(long)]
    pub mw: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long, value_enum)]
    pub field: Option<FieldArg>,
}

#[derive(Debug, Args, Serialize)]
pub struct ScalingArgs {
    #[arg(long)]
    pub file: String,
    #[arg(long, default_value_t = 200)]
    pub iters: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ExistenceArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub r: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MuCmd {
    /// μ_χ(λ, A) for a 1-PS and a tuple.
    Chi(MuChiArgs),
    /// Weight of a 1-PS on the Grassmannian point of a subspace.
    Grass(MuGrassArgs),
    /// Feathered weight of an invariant pair.
    Pair(MuPairArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct MuChiArgs {
    /// Tuple JSON; its field is used for the 1-PS.
    #[arg(long)]
    pub tuple: String,
    /// One-parameter subgroup JSON.
    #[arg(long)]
    pub lambda: String,
}

#[derive(Debug, Args, Serialize)]
pub struct MuGrassArgs {
    /// Grading JSON (list of weight/space parts).
    #[arg(long)]
    pub lambda: String,
    /// Subspace JSON.
    #[arg(long)]
    pub subspace: String,
    #[arg(long)]
    pub i: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long, value_enum, default_value = "ql")]
    pub field: FieldArg,
}

#[derive(Debug, Args, Serialize)]
pub struct MuPairArgs {
    /// Subspace JSON for U.
    #[arg(long)]
    pub u: String,
    /// Subspace JSON for V.
    #[arg(long)]
    pub v: String,
    #[arg(long)]
    pub flags: String,
    #[arg(long)]
    pub feathers: String,
    #[arg(long, value_enum, default_value = "ql")]
    pub field: FieldArg,
}

#[derive(Debug, Args, Serialize)]
pub struct PencilArgs {
    /// Matrix as JSON rows, e.g. '[[1,0],[0,"1/2"]]'.
    #[arg(long)]
    pub a1: String,
    #[arg(long)]
    pub a2: String,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RealformCmd {
    /// Antisymmetric triple of odd size p.
    Sostar(SostarArgs),
    /// Symmetric tuple with s − 2 entries.
    Sp(RealSpArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SostarArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 500)]
    pub max_attempts: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct RealSpArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub s: usize,
    /// Number of sampled ε-profiles (rows).
    #[arg(long)]
    pub grid: usize,
    /// Degree parameter; defaults to the smallest admissible value.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<i64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub out: OutFormat,
    /// Random F_5 tuples to try when looking for a stable Kronecker point (0 = skip).
    #[arg(long, default_value_t = 0)]
    pub search_draws: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentCmd {
    /// The SU(1,1) component over s punctures.
    Su11(Su11Args),
}

#[derive(Debug, Args, Serialize)]
pub struct Su11Args {
    #[arg(long)]
    pub s: usize,
    /// One β for every puncture, or a comma-separated list.
    #[arg(long)]
    pub beta: String,
}
