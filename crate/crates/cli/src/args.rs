use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmalg_core::scalars::{parse_scalar, Rational};

#[derive(Parser, Debug, Clone)]
#[command(name = "qmalg", version, about = "Exact checks for braidings, quantum matrix algebras and their determinants")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// `symbolic` (proofs over Q(q)) or `numeric=<q0>` (screening at a rational q0).
    #[arg(long, global = true, default_value = "symbolic", value_parser = parse_q_mode)]
    pub q_mode: QMode,
    /// Largest word length for ideal membership queries.
    #[arg(long, global = true)]
    pub degree_cap: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Allow numeric mode and skip symbolic proofs where a screen exists.
    #[arg(long, global = true)]
    pub screen_only: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QMode {
    Symbolic,
    Numeric(Rational),
}

impl QMode {
    pub fn label(&self) -> &'static str {
        match self {
            QMode::Symbolic => "symbolic",
            QMode::Numeric(_) => "numeric",
        }
    }
}

fn parse_q_mode(s: &str) -> Result<QMode, String> {
    if s == "symbolic" {
        return Ok(QMode::Symbolic);
    }
    let value = s
        .strip_prefix("numeric=")
        .ok_or_else(|| format!("expected `symbolic` or `numeric=<q0>`, got {s:?}"))?;
    parse_scalar(value)
        .map_err(|e| e.to_string())?
        .as_rational()
        .map(QMode::Numeric)
        .ok_or_else(|| format!("q0 must be a rational number, got {value:?}"))
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlavorArg {
    Rational,
    Trigonometric,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindArg {
    Skew,
    Symmetric,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemArg {
    Qma,
    HqaSymSkew,
    HqaSkewSym,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChKindArg {
    Re,
    GeneralQma,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairsArg {
    Total,
    Each,
}

/// A single operator file.
#[derive(Args, Debug, Clone)]
pub struct OneInput {
    #[arg(long)]
    pub input: String,
}

/// `R` from a file; `F` from a file, `rtt` (the flip) or `re` (`F = R`).
#[derive(Args, Debug, Clone)]
pub struct PairInput {
    #[arg(long = "R")]
    pub r: String,
    #[arg(long = "F")]
    pub f: String,
}

#[derive(Args, Debug, Clone)]
pub struct AlgebraInput {
    #[command(flatten)]
    pub pair: PairInput,
    #[arg(long, value_enum, default_value_t = SystemArg::Qma)]
    pub system: SystemArg,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Braid relation R12 R23 R12 = R23 R12 R23.
    CheckBraiding(OneInput),
    /// Involutive, Hecke, or neither; skew-invertibility.
    Classify(OneInput),
    /// Compatibility of a pair (R, F).
    CheckCompat(PairInput),
    /// Skew-inverse Ψ and the matrix C.
    SkewInverse(OneInput),
    /// Parametric braid relation and degenerations of the Baxterized braiding.
    BaxterizeCheck {
        #[command(flatten)]
        input: OneInput,
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        /// Number of random numeric points in the screen.
        #[arg(long, default_value_t = 8)]
        screen_count: usize,
    },
    /// Projector tower and dimensions of the homogeneous components.
    Symmetrizers {
        #[command(flatten)]
        input: OneInput,
        #[arg(long, value_enum, default_value_t = KindArg::Skew)]
        kind: KindArg,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Evenness certificate (m, u, v).
    DetectEven {
        #[command(flatten)]
        input: OneInput,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Generators and relations of the algebra.
    Present(AlgebraInput),
    /// Remainder of an expression modulo the relations.
    Reduce {
        #[command(flatten)]
        algebra: AlgebraInput,
        #[arg(long)]
        expr: String,
    },
    /// Whether an expression commutes with every generator modulo the relations.
    Central {
        #[command(flatten)]
        algebra: AlgebraInput,
        #[arg(long)]
        expr: String,
    },
    /// Quantum determinant report.
    Qdet {
        #[command(flatten)]
        algebra: AlgebraInput,
        /// Candidate expressions to prove equal to the canonical determinant.
        #[arg(long = "form")]
        forms: Vec<String>,
        /// Use the R-trace for e_m instead of the F-trace.
        #[arg(long)]
        r_trace: bool,
        #[arg(long)]
        k_max: Option<usize>,
        /// Count centrality of the determinant among the verifications.
        #[arg(long)]
        require_central: bool,
    },
    /// Cayley–Hamilton identity, characteristic polynomial and inverse.
    CayleyHamilton {
        #[command(flatten)]
        pair: PairInput,
        #[arg(long, value_enum)]
        kind: Option<ChKindArg>,
        /// Also build and verify the inverse of L (needs F = R).
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Truncated Yangian: Bethe commutativity, determinant factor and the specialized ratio.
    Yangian {
        #[command(flatten)]
        pair: PairInput,
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        #[arg(long = "truncation", default_value_t = 1)]
        truncation: usize,
        /// L[0] = I; defaults to on when F = R.
        #[arg(long)]
        re_type: Option<bool>,
        /// Order pairs (r, s) examined: r + s ≤ K, or every r, s ≤ K.
        #[arg(long, value_enum, default_value_t = PairsArg::Total)]
        pairs: PairsArg,
    },
    /// Run the regression fixtures and compare with their stored reports.
    Corpus {
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Overwrite the stored reports with the current output.
        #[arg(long)]
        bless: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckBraiding(_) => "check-braiding",
            Command::Classify(_) => "classify",
            Command::CheckCompat(_) => "check-compat",
            Command::SkewInverse(_) => "skew-inverse",
            Command::BaxterizeCheck { .. } => "baxterize-check",
            Command::Symmetrizers { .. } => "symmetrizers",
            Command::DetectEven { .. } => "detect-even",
            Command::Present(_) => "present",
            Command::Reduce { .. } => "reduce",
            Command::Central { .. } => "central",
            Command::Qdet { .. } => "qdet",
            Command::CayleyHamilton { .. } => "cayley-hamilton",
            Command::Yangian { .. } => "yangian",
            Command::Corpus { .. } => "corpus",
        }
    }

    /// Input arguments as written, for the report.
    pub fn inputs(&self) -> Vec<String> {
        let pair = |p: &PairInput| vec![p.r.clone(), p.f.clone()];
        match self {
            Command::CheckBraiding(i) | Command::Classify(i) | Command::SkewInverse(i) => vec![i.input.clone()],
            Command::BaxterizeCheck { input, .. }
            | Command::Symmetrizers { input, .. }
            | Command::DetectEven { input, .. } => vec![input.input.clone()],
            Command::CheckCompat(p) | Command::CayleyHamilton { pair: p, .. } | Command::Yangian { pair: p, .. } => pair(p),
            Command::Present(a)
            | Command::Reduce { algebra: a, .. }
            | Command::Central { algebra: a, .. }
            | Command::Qdet { algebra: a, .. } => pair(&a.pair),
            Command::Corpus { dir, .. } => dir.iter().map(|d| d.display().to_string()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn q_mode_values() {
        assert_eq!(parse_q_mode("symbolic").unwrap(), QMode::Symbolic);
        let QMode::Numeric(q0) = parse_q_mode("numeric=7/5").unwrap() else { panic!() };
        assert_eq!(q0.to_string(), "7/5");
        assert!(parse_q_mode("numeric=q").is_err());
        assert!(parse_q_mode("numeric").is_err());
    }

    #[test]
    fn argument_table_is_consistent() {
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["qmalg", "qdet", "--R", "r.json", "--F", "rtt", "--form", "a*d"]).unwrap();
        assert_eq!(cli.command.name(), "qdet");
        assert_eq!(cli.command.inputs(), ["r.json", "rtt"]);
        assert_eq!(cli.global.q_mode, QMode::Symbolic);
    }
}
