use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "csphere",
    version,
    about = "Lattice points on arithmetic c-spheres: counts, exponential sums, quadrature, discrepancy and kernels",
    args_conflicts_with_subcommands = true,
    subcommand_required = false
)]
pub struct Cli {
    /// Directory receiving CSV/JSON/binary outputs and manifest.json.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Worker threads; falls back to CSPHERE_THREADS, then to the available parallelism.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// Run the invariant suite of the command; exit 3 on any violation.
    #[arg(long, global = true)]
    pub check: bool,

    /// Re-run the command recorded in a manifest and compare the outputs.
    #[arg(long, value_name = "MANIFEST")]
    pub replay: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Representation counts r(lambda) for lambda = 0..=lmax.
    Count(CountArgs),
    /// Counts against the main term, dyadic window means, cumulative count.
    Asym(AsymArgs),
    /// Convolution sums j2 (and j3) of the derivative sequences.
    Jfun(JfunArgs),
    /// Grid values and suprema of F_lambda - G_lambda.
    Expsum(ExpsumArgs),
    /// Van der Corput second-derivative bound on explicit or random phases.
    Vdc(VdcArgs),
    /// Surface mass and the polar identity on S_c.
    Surface(SurfaceArgs),
    /// Fourier transform of the surface measure, pointwise or as a shell decay profile.
    Fourier(FourierArgs),
    /// Normalized cap measures nu(a) (optionally smoothed).
    Cap(CapArgs),
    /// Projected lattice cloud x lambda^{-1/c}.
    Project(ProjectArgs),
    /// Normalized Weyl sums of a test function over the projected cloud.
    Weyl(WeylArgs),
    /// Cap discrepancy over seeded or listed directions.
    Disc(DiscArgs),
    /// Circle-method kernels: partition defect, comparisons and field dumps.
    Kernels(KernelsArgs),
    /// Discrete spherical averages and their maximal function.
    Average(AverageArgs),
    /// Torus rotation multipliers.
    Ergodic(ErgodicArgs),
    /// r-variation seminorm of a sequence.
    Variation(VariationArgs),
    /// Minor-arc l2 profile.
    Minor(MinorArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Count(_) => "count",
            Command::Asym(_) => "asym",
            Command::Jfun(_) => "jfun",
            Command::Expsum(_) => "expsum",
            Command::Vdc(_) => "vdc",
            Command::Surface(_) => "surface",
            Command::Fourier(_) => "fourier",
            Command::Cap(_) => "cap",
            Command::Project(_) => "project",
            Command::Weyl(_) => "weyl",
            Command::Disc(_) => "disc",
            Command::Kernels(_) => "kernels",
            Command::Average(_) => "average",
            Command::Ergodic(_) => "ergodic",
            Command::Variation(_) => "variation",
            Command::Minor(_) => "minor",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Enum,
    Fft,
}

#[derive(Args, Debug, Serialize)]
pub struct CountArgs {
    /// Exponent as p/q or an integer.
    #[arg(long, required_unless_present = "fun", conflicts_with = "fun")]
    pub c: Option<String>,
    /// Catalog function per coordinate (1 to 3), e.g. pow:c=21/20; counts positive tuples.
    #[arg(long = "fn", value_name = "SPEC")]
    pub fun: Vec<String>,
    /// Largest lambda.
    #[arg(long)]
    pub lmax: u64,
    #[arg(long, value_enum, default_value = "fft")]
    pub method: MethodArg,
    /// With c = 2: zero counts exactly at 4^m(8n+7) and r(4^m) = 6.
    #[arg(long)]
    pub check_legendre: bool,
    #[arg(long, hide = true)]
    pub oracle: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct AsymArgs {
    #[arg(long, required_unless_present = "fun", conflicts_with = "fun")]
    pub c: Option<String>,
    /// Three catalog functions for the general main term.
    #[arg(long = "fn", value_name = "SPEC")]
    pub fun: Vec<String>,
    #[arg(long)]
    pub lmax: u64,
    #[arg(long, value_enum, default_value = "fft")]
    pub method: MethodArg,
}

#[derive(Args, Debug, Serialize)]
pub struct JfunArgs {
    /// One to three catalog functions; one is used for every slot.
    #[arg(long = "fn", value_name = "SPEC", required = true)]
    pub fun: Vec<String>,
    #[arg(long)]
    pub lmax: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct ExpsumArgs {
    #[arg(long = "fn", value_name = "SPEC", required_unless_present = "c", conflicts_with = "c")]
    pub fun: Option<String>,
    /// Exponent as p/q; shorthand for --fn pow:c=<c>.
    #[arg(long)]
    pub c: Option<String>,
    /// Single lambda: writes t,re,im,abs on the grid.
    #[arg(long, conflicts_with_all = ["kmin", "kmax"])]
    pub lambda: Option<u64>,
    /// Dyadic range 2^kmin..=2^kmax: writes one summary row per lambda.
    #[arg(long, requires = "kmax")]
    pub kmin: Option<u32>,
    #[arg(long, requires = "kmin")]
    pub kmax: Option<u32>,
    /// Admissible chi; defaults to 0.01 inside the admissible range.
    #[arg(long)]
    pub chi: Option<f64>,
    /// Grid resolution for a single lambda (at least 8 lambda).
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Keep only the minor arcs |t| >= N_c(lambda).
    #[arg(long)]
    pub minor: bool,
    /// Rows kept for the fitted-constant spread.
    #[arg(long, default_value_t = 4)]
    pub window: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum PhaseKind {
    Quadratic,
    Power,
}

#[derive(Args, Debug, Serialize)]
pub struct VdcArgs {
    #[arg(long, value_enum, required_unless_present = "random")]
    pub phase: Option<PhaseKind>,
    /// Quadratic phase alpha k^2 + beta k.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub beta: f64,
    /// Power phase m k^power.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    #[arg(long)]
    pub power: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<i64>,
    /// Lower bound for |F''|; defaults to the minimum at the endpoints.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Ratio of the upper to the lower bound for |F''|.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub c0: f64,
    /// Run N randomized phases instead (half quadratic, half power, length <= 1e4).
    #[arg(long, conflicts_with = "phase")]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct SurfaceArgs {
    /// Exponent, as a float or p/q.
    #[arg(long)]
    pub c: String,
    /// Integrate 1 and compare with the closed-form mass.
    #[arg(long)]
    pub mass: bool,
    /// Polar identity on the Gaussian e^{-pi |x|^2}.
    #[arg(long)]
    pub polar: bool,
    /// Nodes per parameter axis (a multiple of 16).
    #[arg(long, default_value_t = 128)]
    pub nq: usize,
    #[arg(long, hide = true)]
    pub oracle: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct FourierArgs {
    #[arg(long)]
    pub c: String,
    /// Single frequency x,y,z.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "radii")]
    pub xi: Option<Vec<f64>>,
    /// Shell radii for the decay profile.
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also report the scaled gradient maximum per shell.
    #[arg(long)]
    pub gradient: bool,
    #[arg(long, hide = true)]
    pub oracle: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct CapArgs {
    #[arg(long)]
    pub c: String,
    /// Direction x,y,z (normalized on input).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub xi: Vec<f64>,
    /// Thresholds a.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "grid")]
    pub a: Option<Vec<f64>>,
    /// Evenly spaced thresholds on [0, a_max].
    #[arg(long)]
    pub grid: Option<usize>,
    /// Mollify with width delta.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Upper smoothing (shift the mollifier outward).
    #[arg(long, requires = "delta")]
    pub upper: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ProjectArgs {
    /// Exponent as p/q or an integer.
    #[arg(long)]
    pub c: String,
    #[arg(long)]
    pub lambda: u64,
    #[arg(long, hide = true)]
    pub oracle: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct WeylArgs {
    #[arg(long)]
    pub c: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<u64>,
    /// const:v | trig:m1,m2,m3 | mono:a1,a2,a3
    #[arg(long, default_value = "trig:1,2,3", allow_hyphen_values = true)]
    pub test: String,
}

#[derive(Args, Debug, Serialize)]
pub struct DiscArgs {
    #[arg(long)]
    pub c: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<u64>,
    /// Number of seeded directions.
    #[arg(long, default_value_t = 16, conflicts_with = "directions")]
    pub dirs: usize,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// File with one direction per line, whitespace separated.
    #[arg(long)]
    pub directions: Option<PathBuf>,
    #[arg(long, default_value_t = 8192)]
    pub bins: usize,
    #[arg(long, default_value_t = 256)]
    pub profile_intervals: usize,
    /// Clouds up to this size are scanned exactly.
    #[arg(long, default_value_t = 4_000_000)]
    pub exact_limit: u64,
    #[arg(long, hide = true)]
    pub oracle: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum KernelArg {
    Sigma,
    Major,
    Minor,
    Omega,
    K,
}

#[derive(Args, Debug, Serialize)]
pub struct KernelsArgs {
    #[arg(long)]
    pub c: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<u64>,
    /// Field box x0,y0,z0,x1,y1,z1 (inclusive); dumps every kernel as binary.
    #[arg(long = "box", value_delimiter = ',', allow_hyphen_values = true)]
    pub field_box: Option<Vec<i64>>,
    /// Restrict the dump to these kernels.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub kernel: Vec<KernelArg>,
    /// Fitted domination constant (needs counts up to 4 lambda).
    #[arg(long)]
    pub domination: bool,
    /// Samples for the omega translation comparison (0 disables).
    #[arg(long, default_value_t = 0)]
    pub omega_samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct AverageArgs {
    #[arg(long)]
    pub c: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<u64>,
    /// Support points of f, each as x,y,z; f is the sum of their indicators.
    #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
    pub point: Vec<String>,
    /// Keep a lacunary subsequence with this ratio.
    #[arg(long)]
    pub lacunary: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct ErgodicArgs {
    #[arg(long)]
    pub c: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<u64>,
    /// Rotation vector a,b,c or "golden".
    #[arg(long, default_value = "golden", allow_hyphen_values = true)]
    pub theta: String,
    /// Character m1,m2,m3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,1,1")]
    pub m: Vec<i64>,
}

#[derive(Args, Debug, Serialize)]
pub struct VariationArgs {
    /// Values, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_unless_present = "input", conflicts_with = "input")]
    pub values: Option<Vec<f64>>,
    /// File with one value per line ("re" or "re im").
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub r: f64,
    #[arg(long, hide = true)]
    pub oracle: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct MinorArgs {
    #[arg(long)]
    pub c: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    pub stride: u64,
}
