use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rug::ops::Pow;
use rug::{Integer, Rational};

/// Exact enumeration and asymptotic checks for tree-child networks.
#[derive(Debug, Parser)]
#[command(name = "treechild", version, about)]
pub struct Cli {
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true, env = "TREECHILD_JOBS")]
    pub jobs: Option<usize>,

    /// Working precision in decimal digits (at least 15).
    #[arg(long, global = true, env = "TREECHILD_PRECISION", default_value_t = 40)]
    pub precision: u32,

    /// Range exponent epsilon, as a decimal or a fraction.
    #[arg(long, global = true, env = "TREECHILD_EPS", default_value = "1/20", value_parser = parse_rational)]
    pub eps: Rational,

    /// Quartic coefficient of the upper certificate, above 1/18.
    #[arg(long, global = true, env = "TREECHILD_ETA", default_value = "1/17", value_parser = parse_rational)]
    pub eta: Rational,

    /// Directory for cached tables.
    #[arg(long, global = true, env = "TREECHILD_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Permit the long enumerations (networks with 5 leaves, words with 6 or 7 letters).
    #[arg(long, global = true)]
    pub allow_long: bool,

    /// Write results here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print exact counts.
    Count(CountArgs),
    /// Run a named check suite; exit 1 on a failure, 3 when only precision is lacking.
    Verify(VerifyArgs),
    /// Main-term logarithms and ratios to the exact counts.
    Asymptote(AsymptoteArgs),
    /// Convert between maximal networks and words.
    Bijection {
        #[command(subcommand)]
        direction: Direction,
    },
    /// Evaluate one certificate inequality over the (n, m) grid.
    Scan(ScanArgs),
    /// Dump a table as CSV/JSON.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true)))]
pub struct CountArgs {
    /// TC_n from exhaustive enumeration.
    #[arg(long, group = "what", value_name = "RANGE")]
    pub networks: Option<Span>,
    /// a_n from the recurrence.
    #[arg(long, group = "what", value_name = "RANGE")]
    pub words: Option<Span>,
    /// 1-TC_n from the closed form.
    #[arg(long, group = "what", value_name = "RANGE")]
    pub one_component: Option<Span>,
    /// TC_{n,n-1} = n! a_{n-1}.
    #[arg(long, group = "what", value_name = "RANGE")]
    pub max_retic: Option<Span>,
    /// One row per reticulation count.
    #[arg(long)]
    pub by_k: bool,
    /// Add a column counted by brute force (networks, words, one-component).
    #[arg(long)]
    pub brute: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Bijection,
    Bounds,
    Certificates,
    Appendix,
    Laplace,
    Dhat,
    Theta,
    Airy,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub suite: Suite,
    /// Leaf count for `bijection`.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// First n of a certificate scan.
    #[arg(long, default_value_t = 100)]
    pub n_min: usize,
    /// Last n (certificates 2000, bounds 1000, dhat 150).
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Largest 2n for `appendix`.
    #[arg(long, default_value_t = 40)]
    pub two_n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    /// a_n
    An,
    /// TC_n
    Tc,
    /// 1-TC_n
    OneTc,
    /// 1-hat-TC_N (odd N)
    OneHatTc,
    /// Lower and upper bounds on hat-TC_N (odd N)
    HatTc,
    /// The largest zero of Ai
    A1,
}

#[derive(Debug, Args)]
pub struct AsymptoteArgs {
    pub formula: Formula,
    #[arg(long, value_name = "RANGE", default_value = "100..1000")]
    pub range: Span,
    #[arg(long, default_value_t = 1)]
    pub step: usize,
    /// Significant digits printed for `a1`.
    #[arg(long, default_value_t = 10)]
    pub digits: u32,
}

#[derive(Debug, Subcommand)]
pub enum Direction {
    /// Networks in text form (file or `-` for stdin) to words.
    Encode { input: PathBuf },
    /// Words, one per line (file or `-`), to networks.
    Decode { input: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Lb,
    Ub,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    pub side: SideArg,
    #[arg(long, default_value_t = 100)]
    pub n_min: usize,
    #[arg(long, default_value_t = 2000)]
    pub n_max: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableName {
    /// b_{n,m}
    B,
    /// a_n
    A,
    /// d_{n,m}, exact
    D,
    /// d̂_{n,m}, exact
    Dhat,
    /// p_{l,m,2n}, exact
    P,
    HatTc,
    OneTc,
    /// a_n over its main term
    Theta,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub table: TableName,
    #[arg(long, value_name = "RANGE", default_value = "1..20")]
    pub range: Span,
}

/// Inclusive range of naturals: `a..b`, `a..=b` or a single `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl Span {
    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad bound {t:?}: {e}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = num(s)?;
                (v, v)
            }
        };
        if hi < lo {
            return Err(format!("empty range {s}"));
        }
        Ok(Span { lo, hi })
    }
}

/// `p/q`, an integer, or a terminating decimal, read exactly.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.contains('/') {
        return s.parse::<Rational>().map_err(|e| format!("{s:?}: {e}"));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits = format!("{int}{frac}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{s:?} is not a number"));
    }
    let num: Integer = digits.parse().map_err(|e| format!("{s:?}: {e}"))?;
    let den = Integer::from(10).pow(frac.len() as u32);
    let r = Rational::from((num, den));
    Ok(if neg { -r } else { r })
}
