//! Command-line front end for the `treechild` library.
//!
//! Every subcommand writes its result to one `Write` sink and its progress
//! and summaries to another, so runs are reproducible byte for byte and the
//! whole surface is testable in-process.

pub mod args;
mod asymptote;
mod count;
mod export;
pub mod report;
mod scan;
mod transcode;
mod verify;

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Result};
use rug::Rational;
use treechild::asymptotics::{CertificateParams, MIN_DIGITS};
use treechild::enumerate::EnumerateConfig;
use treechild::exec::{self, Strategy};

pub use args::{Cli, Format};
use args::Command;
use report::Table;

/// Outcome of a run, mapped onto the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    /// 0 pass, 1 fail, 3 undecided at the available precision. Errors exit 2.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }

    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Largest leaf count enumerated by default, and with `--allow-long`.
const NETWORK_LIMIT: usize = 4;
const NETWORK_LIMIT_LONG: usize = 5;
/// Same for the word enumerator.
const WORD_LIMIT: usize = 5;
const WORD_LIMIT_LONG: usize = 7;

/// Validated settings shared by all subcommands.
struct Ctx {
    digits: u32,
    eps: Rational,
    eta: Rational,
    cache_dir: Option<PathBuf>,
    format: Format,
    allow_long: bool,
    strategy: Strategy,
}

impl Ctx {
    fn new(cli: &Cli) -> Result<Self> {
        if cli.precision < MIN_DIGITS {
            bail!("--precision must be at least {MIN_DIGITS} digits, got {}", cli.precision);
        }
        if cli.eps <= 0 || cli.eps >= Rational::from((2, 3)) {
            bail!("--eps must lie in (0, 2/3), got {}", cli.eps);
        }
        if cli.eta <= Rational::from((1, 18)) {
            bail!("--eta must exceed 1/18, got {}", cli.eta);
        }
        if cli.jobs == Some(0) {
            bail!("--jobs must be positive");
        }
        let strategy = match cli.jobs {
            Some(1) => Strategy::Sequential,
            _ => Strategy::Parallel,
        };
        Ok(Ctx {
            digits: cli.precision,
            eps: cli.eps.clone(),
            eta: cli.eta.clone(),
            cache_dir: cli.cache_dir.clone(),
            format: cli.format,
            allow_long: cli.allow_long,
            strategy,
        })
    }

    fn enumerate_config(&self) -> EnumerateConfig {
        EnumerateConfig {
            strategy: self.strategy,
            ..EnumerateConfig::default()
        }
    }

    fn certificate_params(&self, n_min: usize, n_max: usize) -> CertificateParams {
        CertificateParams {
            eps: self.eps.clone(),
            eta: self.eta.clone(),
            n_min,
            n_max,
            digits: self.digits,
        }
    }

    fn check_networks(&self, n: usize) -> Result<()> {
        if n == 0 {
            bail!("networks need at least one leaf");
        }
        if n > NETWORK_LIMIT_LONG {
            bail!("network enumeration is limited to n <= {NETWORK_LIMIT_LONG}, got {n}");
        }
        if n > NETWORK_LIMIT && !self.allow_long {
            bail!("n = {n} takes minutes to enumerate; pass --allow-long");
        }
        Ok(())
    }

    fn check_words(&self, n: usize) -> Result<()> {
        if n > WORD_LIMIT_LONG {
            bail!("word enumeration is limited to n <= {WORD_LIMIT_LONG}, got {n}");
        }
        if n > WORD_LIMIT && !self.allow_long {
            bail!("enumerating words with {n} letters is slow; pass --allow-long");
        }
        Ok(())
    }

    fn emit(&self, table: &Table, out: &mut dyn Write) -> Result<()> {
        table.write(self.format, out)?;
        Ok(())
    }
}

/// Runs one parsed command line.
pub fn run(cli: &Cli, out: &mut dyn Write, log: &mut dyn Write) -> Result<Status> {
    let ctx = Ctx::new(cli)?;
    if let Some(jobs) = cli.jobs {
        exec::configure_threads(jobs);
    }
    let status = match &cli.command {
        Command::Count(a) => count::run(&ctx, a, out, log)?,
        Command::Verify(a) => verify::run(&ctx, a, out, log)?,
        Command::Asymptote(a) => asymptote::run(&ctx, a, out, log)?,
        Command::Bijection { direction } => transcode::run(&ctx, direction, out)?,
        Command::Scan(a) => scan::run(&ctx, a, out, log)?,
        Command::Export(a) => export::run(&ctx, a, out)?,
    };
    out.flush()?;
    Ok(status)
}
