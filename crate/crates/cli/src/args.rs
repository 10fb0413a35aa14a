use clap::{Args, Parser, Subcommand, ValueEnum};
use heun_core::Complex64;

#[derive(Parser, Debug)]
#[command(
    name = "heun-connect",
    version,
    about = "Local solutions and connection matrices of the Heun equation with a = -1, q = 0"
)]
pub struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate local solutions at points, or continue one along a path.
    Eval(EvalArgs),
    /// Print the Frobenius coefficients A_0 .. A_n.
    Coeffs(CoeffsArgs),
    /// Connection coefficients and matrices.
    Connect(ConnectArgs),
    /// Residuals of the connection matrices against independent evaluations.
    Verify(VerifyArgs),
    /// The limit sequence for c12 with Richardson extrapolants.
    LimitTable(LimitArgs),
    /// Numerical checks of the Beta, gamma-ratio and integral lemmas.
    Lemmas(LemmaArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Human,
    /// Whitespace-separated columns for gnuplot.
    Dat,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Recurrence,
    Closed,
}

/// `re[,im]`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let mut parts = s.split(',');
    let re = parts.next().unwrap_or("").trim();
    let re: f64 = re.parse().map_err(|_| format!("'{s}' is not a number or re,im pair"))?;
    let im = match parts.next() {
        Some(p) => p
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("'{s}' has a bad imaginary part"))?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(format!("'{s}' has more than two components"));
    }
    if !re.is_finite() || !im.is_finite() {
        return Err(format!("'{s}' is not finite"));
    }
    Ok(Complex64::new(re, im))
}

/// Semicolon-separated complex values.
pub fn parse_points(s: &str) -> Result<Points, String> {
    let points = s
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(parse_complex)
        .collect::<Result<Vec<_>, _>>()?;
    if points.is_empty() {
        return Err("expected at least one point".into());
    }
    Ok(Points(points))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Points(pub Vec<Complex64>);

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0.5")]
    pub alpha: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0.8")]
    pub beta: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0.9")]
    pub gamma: Complex64,
}

/// General-parameter mode: all three must be given together.
#[derive(Args, Debug, Clone)]
pub struct GeneralArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires_all = ["q", "delta"])]
    pub a: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "a")]
    pub q: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "a")]
    pub delta: Option<Complex64>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Draw this many admissible parameter sets instead of using --alpha/--beta/--gamma.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub general: GeneralArgs,
    /// y01, y02, y+1, y+2, y-1, y-2, yinf1, yinf2, or all.
    #[arg(long, default_value = "y01", allow_hyphen_values = true)]
    pub solution: String,
    #[arg(long, value_parser = parse_points, allow_hyphen_values = true)]
    pub points: Option<Points>,
    /// Continue the solution along these waypoints and report the end value.
    #[arg(long, value_parser = parse_points, allow_hyphen_values = true, conflicts_with = "points")]
    pub path: Option<Points>,
    #[arg(long, default_value_t = 1e-13)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub general: GeneralArgs,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Rule::Recurrence)]
    pub rule: Rule,
}

#[derive(Args, Debug)]
pub struct ConnectArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// 0+, 0-, inf+, inf- or all.
    #[arg(long, default_value = "all", allow_hyphen_values = true)]
    pub matrix: String,
    /// Override the documented branch for the (-)^w factors.
    #[arg(long, value_enum)]
    pub branch: Option<Branch>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long, default_value = "all", allow_hyphen_values = true)]
    pub matrix: String,
    /// Sample points (single matrix only); defaults depend on the matrix.
    #[arg(long, value_parser = parse_points, allow_hyphen_values = true)]
    pub points: Option<Points>,
    #[arg(long, value_enum)]
    pub branch: Option<Branch>,
    /// Largest acceptable row residual.
    #[arg(long, default_value_t = 1e-8)]
    pub threshold: f64,
}

#[derive(Args, Debug)]
pub struct LimitArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 200)]
    pub n_max: usize,
}

#[derive(Args, Debug)]
pub struct LemmaArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}
