use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use densq_core::corealg::{fmt_rat, parse_rat};
use densq_core::{Mode, Rat};
use serde::{Serialize, Serializer};

/// A weight given on the command line: an exact rational or the formal
/// parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    Value(Rat),
    Param,
}

impl FromStr for Weight {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "param" {
            return Ok(Weight::Param);
        }
        parse_rat(s).map(Weight::Value).ok_or_else(|| format!("`{s}` is not an exact rational p/q or `param`"))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Value(r) => f.write_str(&fmt_rat(r)),
            Weight::Param => f.write_str("param"),
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Coordinate domain accepted by `--mode`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Line,
    Circle,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Line => Mode::Line,
            ModeArg::Circle => Mode::Circle,
        }
    }
}

/// Truncation triple `N,D,F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TruncArg {
    pub order: usize,
    pub degree: usize,
    pub freq: usize,
}

impl FromStr for TruncArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let nums: Result<Vec<usize>, _> = parts.iter().map(|p| p.parse::<usize>()).collect();
        match nums {
            Ok(v) if v.len() == 3 => Ok(TruncArg { order: v[0], degree: v[1], freq: v[2] }),
            _ => Err(format!("`{s}` is not a truncation N,D,F of three nonnegative integers")),
        }
    }
}

/// A list of rationals: comma-separated values and integer ranges `a..b`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RatList(pub Vec<Rat>);

impl FromStr for RatList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if let Some((a, b)) = item.split_once("..") {
                let lo: i64 = a.trim().parse().map_err(|_| format!("bad range start in `{item}`"))?;
                let hi: i64 = b.trim().parse().map_err(|_| format!("bad range end in `{item}`"))?;
                if hi - lo > 10_000 {
                    return Err(format!("range `{item}` is too long"));
                }
                out.extend((lo..=hi).map(|n| Rat::from_integer(n.into())));
            } else {
                out.push(parse_rat(item).ok_or_else(|| format!("`{item}` is not an exact rational"))?);
            }
        }
        Ok(RatList(out))
    }
}

impl Serialize for RatList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(fmt_rat).collect();
        v.serialize(s)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "densq",
    version,
    about = "Exact invariant operators, cohomology and quantization on weighted densities",
    args_override_self = true
)]
pub struct Cli {
    /// Emit a JSON report instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for grid computations.
    #[arg(long, global = true, env = "DENSQ_JOBS")]
    pub jobs: Option<usize>,
    /// Truncation window `N,D,F`: operator order, Laurent degree, frequency.
    #[arg(long, global = true)]
    pub trunc: Option<TruncArg>,
    /// TOML file with `[defaults]` and `[[job]]` tables.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

/// Algebra selection shared by most subcommands.
#[derive(Args, Debug, Clone, Serialize)]
pub struct AlgebraArgs {
    /// g0, a1, h0, lN, k1, k2 or vect.
    #[arg(long, default_value = "vect")]
    pub algebra: String,
    #[arg(long, value_enum, default_value = "line")]
    pub mode: ModeArg,
    /// Frequency `s` of h0, k1, k2.
    #[arg(long, default_value_t = 1)]
    pub scale: i64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FiniteAlgebraArgs {
    /// g0, a1, h0, lN, k1 or k2.
    #[arg(long)]
    pub algebra: String,
    #[arg(long, value_enum, default_value = "line")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    pub scale: i64,
}

/// Source weight `λ` and target weight via `--mu` or `--delta`.
#[derive(Args, Debug, Clone, Serialize)]
pub struct PairArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Weight,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "delta")]
    pub mu: Option<Weight>,
    /// `μ − λ`.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<Weight>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CochainArg {
    /// `X′ψ` on `F_λ`.
    C1,
    /// `Xψ` on `F_λ`.
    C2,
    /// The invariant operator `{X, dψ}`.
    PoissonD,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepJob {
    Cohomology,
    Relative,
    SolveQuant,
    FullQuant,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// List the catalog algebras with structure data.
    Catalog {
        #[arg(long, value_enum, default_value = "line")]
        mode: ModeArg,
        /// Largest `n` of the algebras `l_n`.
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        #[arg(long, default_value_t = 1)]
        scale: i64,
    },
    /// Invariant bilinear operators up to an order, on a grid or at one point.
    Classify {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArgs,
        #[arg(long, default_value_t = 3)]
        order_max: usize,
        #[arg(long, allow_hyphen_values = true, requires = "lambda")]
        gamma: Option<Weight>,
        #[arg(long, allow_hyphen_values = true, requires = "gamma")]
        lambda: Option<Weight>,
    },
    /// Solve the invariance system of one order, one weight may be formal.
    Invariants {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        order: usize,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Weight,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Weight,
        #[arg(long, allow_hyphen_values = true)]
        mu: Weight,
    },
    /// The order-k transvectant and its invariance.
    Transvectant {
        #[arg(long)]
        order: usize,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Weight,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Weight,
        #[arg(long, value_enum, default_value = "line")]
        mode: ModeArg,
    },
    /// The Grozman operator and its invariance.
    Grozman {
        #[arg(long, value_enum, default_value = "line")]
        mode: ModeArg,
    },
    /// Evaluate the 1-cocycle condition for a named cochain.
    CocycleCheck {
        #[arg(long, value_enum)]
        cochain: CochainArg,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        lambda: Weight,
        #[arg(long, value_enum, default_value = "line")]
        mode: ModeArg,
    },
    /// First cohomology with coefficients in operators `F_λ → F_μ`.
    Cohomology {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArgs,
        #[command(flatten)]
        #[serde(flatten)]
        pair: PairArgs,
        /// Report the first truncation level only.
        #[arg(long)]
        no_stabilize: bool,
        /// Extra operator order allowed for coboundaries.
        #[arg(long, default_value_t = 0)]
        extra: usize,
    },
    /// Cohomology of Vect relative to a finite algebra.
    Relative {
        #[command(flatten)]
        #[serde(flatten)]
        alg: FiniteAlgebraArgs,
        #[command(flatten)]
        #[serde(flatten)]
        pair: PairArgs,
        /// Cochain order bound.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Whether `X′ψ` and `Xψ` are coboundaries on the line and on the circle.
    CircleCheck {
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        lambda: Weight,
    },
    /// The explicit order-1 or order-2 symbol map.
    Quantize {
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        #[serde(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value = "line")]
        mode: ModeArg,
        /// Also test equivariance under this algebra.
        #[arg(long)]
        check: Option<String>,
    },
    /// Solve the symbol-map equivariance conditions.
    SolveQuant {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        #[serde(flatten)]
        pair: PairArgs,
    },
    /// Existence of the full order-2 quantization.
    FullQuant {
        #[command(flatten)]
        #[serde(flatten)]
        alg: FiniteAlgebraArgs,
        #[command(flatten)]
        #[serde(flatten)]
        pair: PairArgs,
    },
    /// Run a job over a grid of weights.
    Sweep {
        #[arg(value_enum)]
        job: SweepJob,
        #[arg(long, default_value = "vect")]
        algebra: String,
        #[arg(long, value_enum, default_value = "line")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1)]
        scale: i64,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        lambda: RatList,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "delta")]
        mu: Option<RatList>,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<RatList>,
        /// Order for solve-quant, cochain order bound for relative.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        no_stabilize: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Catalog { .. } => "catalog",
            Command::Classify { .. } => "classify",
            Command::Invariants { .. } => "invariants",
            Command::Transvectant { .. } => "transvectant",
            Command::Grozman { .. } => "grozman",
            Command::CocycleCheck { .. } => "cocycle-check",
            Command::Cohomology { .. } => "cohomology",
            Command::Relative { .. } => "relative",
            Command::CircleCheck { .. } => "circle-check",
            Command::Quantize { .. } => "quantize",
            Command::SolveQuant { .. } => "solve-quant",
            Command::FullQuant { .. } => "full-quant",
            Command::Sweep { .. } => "sweep",
        }
    }
}
