//! The Airy certificates for the lower and upper bounds on `d_{2n,0}`.
//!
//! With `c = (2/3)^{1/3}` and `A(n, m) = Ai(a_1 + c (m+1) n^{-1/3})`:
//!
//! ```text
//! s~(n)   = 2 + 2^{2/3} a_1 / (3^{2/3} n^{2/3}) - 2/(3n) - n^{-7/6}
//! s^(n)   = 2 + 2^{2/3} a_1 / (3^{2/3} n^{2/3}) - 2/(3n) + n^{-7/6}
//! X~(n,m) = (1 - m^2/(3n) - 25m/(18n)) A(n, m)
//! X^(n,m) = (1 - m^2/(3n) - 25m/(18n) + eta m^4/n^2) A(n, m)
//! ```
//!
//! The lower-bound certificate asks, for `0 <= m < n^{2/3-eps}`,
//!
//! ```text
//! s~(n) X~(n,m) <= w1 X~(n-1,m+1) + w2 X~(n-1,m-1)
//! ```
//!
//! with `w1 = (3n+m-4)/(3n+m-6)`, `w2 = (3n+m-4)/(3n+3m)` and `X(n,-1) = 0`.
//! The upper-bound certificate asks for the reverse inequality with `X^`
//! and `s^` for `0 <= m < n^{1-eps}`.
//!
//! Both sides are enclosed in intervals. A cell is decided only when the
//! enclosure of the margin lies on one side of zero; otherwise it is
//! recomputed at doubled precision and reported inconclusive if that is
//! still not enough.

use std::fmt;
use std::sync::OnceLock;

use rug::{Float, Integer, Rational};
use serde::Serialize;

use super::airy::AiryContext;
use super::interval::Interval;
use super::tables::range_len;
use crate::exec::{self, Strategy};
use crate::{Error, Result};

/// Doublings of the precision tried before a cell is left inconclusive.
const MAX_BUMPS: usize = 3;

/// Rows processed per parallel batch during a scan.
const BATCH_ROWS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Lower => "lb",
            Side::Upper => "ub",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    fn of_margin(margin: &Interval) -> Self {
        if *margin.lo() >= 0 {
            Verdict::Holds
        } else if *margin.hi() < 0 {
            Verdict::Fails
        } else {
            Verdict::Inconclusive
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Parameters of a certificate scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateParams {
    /// Range exponent `eps`, `0 < eps < 2/3`.
    pub eps: Rational,
    /// Quartic coefficient `eta > 1/18` of the upper certificate.
    pub eta: Rational,
    /// First and last `n` of a scan.
    pub n_min: usize,
    pub n_max: usize,
    /// Working precision in decimal digits.
    pub digits: u32,
}

impl Default for CertificateParams {
    fn default() -> Self {
        CertificateParams {
            eps: Rational::from((1, 20)),
            eta: Rational::from((1, 17)),
            n_min: 100,
            n_max: 2000,
            digits: 40,
        }
    }
}

impl CertificateParams {
    pub fn validate(&self) -> Result<()> {
        if self.eps <= 0 || self.eps >= Rational::from((2, 3)) {
            return Err(Error::OutOfRange(format!("eps = {} not in (0, 2/3)", self.eps)));
        }
        if self.eta <= Rational::from((1, 18)) {
            return Err(Error::OutOfRange(format!("eta = {} must exceed 1/18", self.eta)));
        }
        if self.n_min < 3 || self.n_max < self.n_min {
            return Err(Error::OutOfRange(format!(
                "scan range {}..={} (need 3 <= n_min <= n_max)",
                self.n_min, self.n_max
            )));
        }
        if self.digits < super::airy::MIN_DIGITS {
            return Err(Error::OutOfRange(format!("precision {} digits", self.digits)));
        }
        Ok(())
    }

    /// Exponent bounding `m` on the given side: `2/3 - eps` or `1 - eps`.
    pub fn exponent(&self, side: Side) -> Rational {
        match side {
            Side::Lower => Rational::from((2, 3)) - &self.eps,
            Side::Upper => Rational::from(1) - &self.eps,
        }
    }

    /// Number of `m` checked in row `n`.
    pub fn row_len(&self, side: Side, n: usize) -> usize {
        range_len(n, &self.exponent(side))
    }
}

/// Evaluator for `s~`, `s^`, `X~`, `X^` at a fixed precision.
#[derive(Debug)]
pub struct Certifier {
    airy: AiryContext,
    prec: u32,
    /// `(2/3)^{1/3}`
    c: Interval,
    /// `(2/3)^{2/3} a_1`
    s_coeff: Interval,
    bumped: OnceLock<Box<Certifier>>,
    bump_level: usize,
}

impl Certifier {
    pub fn new(digits: u32) -> Result<Self> {
        Self::with_level(digits, 0)
    }

    fn with_level(digits: u32, bump_level: usize) -> Result<Self> {
        let airy = AiryContext::new(digits)?;
        let prec = airy.prec() + 16;
        let c = Interval::ratio(prec, 2, 3).cbrt();
        let s_coeff = c.square().mul(&airy.a1().with_prec(prec));
        Ok(Certifier {
            airy,
            prec,
            c,
            s_coeff,
            bumped: OnceLock::new(),
            bump_level,
        })
    }

    pub fn airy(&self) -> &AiryContext {
        &self.airy
    }

    pub fn digits(&self) -> u32 {
        self.airy.digits()
    }

    fn next_level(&self) -> Result<Option<&Certifier>> {
        if self.bump_level >= MAX_BUMPS {
            return Ok(None);
        }
        if let Some(c) = self.bumped.get() {
            return Ok(Some(c));
        }
        let next = Certifier::with_level(self.digits() * 2, self.bump_level + 1)?;
        Ok(Some(self.bumped.get_or_init(|| Box::new(next))))
    }

    fn int(&self, x: i64) -> Interval {
        Interval::from_int(self.prec, x)
    }

    fn n_cbrt(&self, n: usize) -> Interval {
        self.int(n as i64).cbrt()
    }

    fn s_common(&self, n: usize) -> Interval {
        let nc = self.n_cbrt(n);
        let lead = self.s_coeff.div(&nc.square()).expect("n > 0");
        self.int(2).add(&lead).sub(&Interval::ratio(self.prec, 2, 3 * n as i64))
    }

    fn n_pow_7_6(&self, n: usize) -> Interval {
        self.int(n as i64).mul(&self.n_cbrt(n).sqrt())
    }

    fn s_for(&self, side: Side, n: usize) -> Interval {
        match side {
            Side::Lower => self.s_tilde(n),
            Side::Upper => self.s_hat(n),
        }
    }

    pub fn s_tilde(&self, n: usize) -> Interval {
        let tail = self.n_pow_7_6(n).recip().expect("n > 0");
        self.s_common(n).sub(&tail)
    }

    pub fn s_hat(&self, n: usize) -> Interval {
        let tail = self.n_pow_7_6(n).recip().expect("n > 0");
        self.s_common(n).add(&tail)
    }

    /// Argument `a_1 + c j n^{-1/3}` of the Airy factor at `m = j - 1`.
    pub fn airy_arg(&self, n: usize, j: usize) -> Interval {
        let step = self.c.mul_int(j as i64).div(&self.n_cbrt(n)).expect("n > 0");
        self.airy.a1().with_prec(self.prec).add(&step)
    }

    /// `Ai(a_1 + c j n^{-1/3})`.
    pub fn airy_factor(&self, n: usize, j: usize) -> Result<Interval> {
        self.airy.ai_interval(&self.airy_arg(n, j))
    }

    fn poly(&self, side: Side, n: usize, m: usize, eta: &Rational) -> Interval {
        let (n, m) = (Integer::from(n), Integer::from(m));
        let mut r = Rational::from(1)
            - Rational::from((m.clone() * &m, n.clone() * 3u32))
            - Rational::from((m.clone() * 25u32, n.clone() * 18u32));
        if side == Side::Upper {
            let m4 = m.clone() * &m * &m * &m;
            r += Rational::from((m4, n.clone() * &n)) * eta;
        }
        Interval::from_rational(self.prec, &r)
    }

    fn x_with(&self, side: Side, n: usize, m: i64, eta: &Rational, ai: &Interval) -> Interval {
        if m < 0 {
            return Interval::zero(self.prec);
        }
        self.poly(side, n, m as usize, eta).mul(ai)
    }

    /// `X~(n, m)`, zero at `m = -1`.
    pub fn x_tilde(&self, n: usize, m: i64) -> Result<Interval> {
        if m < 0 {
            return Ok(Interval::zero(self.prec));
        }
        let ai = self.airy_factor(n, m as usize + 1)?;
        Ok(self.x_with(Side::Lower, n, m, &Rational::new(), &ai))
    }

    /// `X^(n, m)`, zero at `m = -1`.
    pub fn x_hat(&self, n: usize, m: i64, eta: &Rational) -> Result<Interval> {
        if m < 0 {
            return Ok(Interval::zero(self.prec));
        }
        let ai = self.airy_factor(n, m as usize + 1)?;
        Ok(self.x_with(Side::Upper, n, m, eta, &ai))
    }

    /// Builds the cell from Airy factors `Ai` at `(n, m+1)`, `(n-1, m+2)`
    /// and `(n-1, m)`.
    fn cell_from(
        &self,
        side: Side,
        n: usize,
        m: usize,
        eta: &Rational,
        s: &Interval,
        ai: [&Interval; 3],
    ) -> CellReport {
        let (ni, mi) = (n as i64, m as i64);
        let w1 = Interval::ratio(self.prec, 3 * ni + mi - 4, 3 * ni + mi - 6);
        let w2 = Interval::ratio(self.prec, 3 * ni + mi - 4, 3 * ni + 3 * mi);
        let here = self.x_with(side, n, mi, eta, ai[0]);
        let up = self.x_with(side, n - 1, mi + 1, eta, ai[1]);
        let down = self.x_with(side, n - 1, mi - 1, eta, ai[2]);
        let lhs = s.mul(&here);
        let rhs = w1.mul(&up).add(&w2.mul(&down));
        let margin = match side {
            Side::Lower => rhs.sub(&lhs),
            Side::Upper => lhs.sub(&rhs),
        };
        CellReport {
            side,
            n,
            m,
            verdict: Verdict::of_margin(&margin),
            digits: self.digits(),
            lhs,
            rhs,
            margin,
        }
    }

    fn cell(&self, side: Side, n: usize, m: usize, eta: &Rational) -> Result<CellReport> {
        if n < 3 {
            return Err(Error::OutOfRange(format!("certificates need n >= 3, got {n}")));
        }
        let a = self.airy_factor(n, m + 1)?;
        let b = self.airy_factor(n - 1, m + 2)?;
        let c = self.airy_factor(n - 1, m)?;
        let s = self.s_for(side, n);
        Ok(self.cell_from(side, n, m, eta, &s, [&a, &b, &c]))
    }

    /// Decides a cell, doubling the precision while it is inconclusive.
    fn decide(&self, side: Side, n: usize, m: usize, eta: &Rational, first: CellReport) -> Result<CellReport> {
        let mut report = first;
        let mut level = self;
        while report.verdict == Verdict::Inconclusive {
            match level.next_level()? {
                Some(next) => {
                    level = next;
                    report = level.cell(side, n, m, eta)?;
                }
                None => break,
            }
        }
        Ok(report)
    }

    /// `s~(n) X~(n,m) <= w1 X~(n-1,m+1) + w2 X~(n-1,m-1)`.
    pub fn check_lb_inequality(&self, n: usize, m: usize) -> Result<CellReport> {
        let first = self.cell(Side::Lower, n, m, &Rational::new())?;
        self.decide(Side::Lower, n, m, &Rational::new(), first)
    }

    /// `s^(n) X^(n,m) >= w1 X^(n-1,m+1) + w2 X^(n-1,m-1)`.
    pub fn check_ub_inequality(&self, n: usize, m: usize, eta: &Rational) -> Result<CellReport> {
        let first = self.cell(Side::Upper, n, m, eta)?;
        self.decide(Side::Upper, n, m, eta, first)
    }

    /// `Ai(a_1 + c j n^{-1/3})` for `j = 0..=len`.
    fn airy_row(&self, n: usize, len: usize) -> Result<Vec<Interval>> {
        (0..=len).map(|j| self.airy_factor(n, j)).collect()
    }
}

/// One evaluated inequality.
#[derive(Clone, Debug)]
pub struct CellReport {
    pub side: Side,
    pub n: usize,
    pub m: usize,
    /// `s X(n,m)`
    pub lhs: Interval,
    /// `w1 X(n-1,m+1) + w2 X(n-1,m-1)`
    pub rhs: Interval,
    /// Slack in the required direction; non-negative when the cell holds.
    pub margin: Interval,
    pub verdict: Verdict,
    /// Precision (decimal digits) at which the verdict was reached.
    pub digits: u32,
}

pub const CSV_HEADER: &str = "n,m,side_lhs,side_rhs,margin,verdict";

fn fmt_float(x: &Float) -> String {
    x.to_string_radix(10, Some(17))
}

impl CellReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n,
            self.m,
            fmt_float(&self.lhs.mid()),
            fmt_float(&self.rhs.mid()),
            fmt_float(&self.margin.mid()),
            self.verdict
        )
    }
}

/// Outcome of a scan over `n_min..=n_max`.
#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub side: Side,
    pub n_min: usize,
    pub n_max: usize,
    pub digits: u32,
    pub cells: usize,
    pub holds: usize,
    /// Cells decided only after a precision bump.
    pub bumped: usize,
    pub fails: Vec<(usize, usize)>,
    pub inconclusive: Vec<(usize, usize)>,
    /// Smallest `n0` such that every cell with `n >= n0` holds.
    pub threshold: Option<usize>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.fails.is_empty() && self.inconclusive.is_empty()
    }

    /// Largest `n` with a failing cell.
    pub fn last_failing_n(&self) -> Option<usize> {
        self.fails.iter().map(|&(n, _)| n).max()
    }
}

/// Scans one side over the parameter range, streaming every cell to `sink`
/// in `(n, m)` order.
pub fn scan(
    certifier: &Certifier,
    side: Side,
    params: &CertificateParams,
    strategy: Strategy,
    mut sink: impl FnMut(&CellReport),
) -> Result<ScanReport> {
    params.validate()?;
    let eta = match side {
        Side::Lower => Rational::new(),
        Side::Upper => params.eta.clone(),
    };
    let len = |n: usize| params.row_len(side, n);
    // Row n needs j <= len(n); as row n-1 of n+1 it needs j <= len(n+1)+1.
    let airy_len = |n: usize| len(n).max(len(n + 1) + 1);

    let mut report = ScanReport {
        side,
        n_min: params.n_min,
        n_max: params.n_max,
        digits: certifier.digits(),
        cells: 0,
        holds: 0,
        bumped: 0,
        fails: Vec::new(),
        inconclusive: Vec::new(),
        threshold: None,
    };
    let mut prev = certifier.airy_row(params.n_min - 1, airy_len(params.n_min - 1))?;
    let mut start = params.n_min;
    while start <= params.n_max {
        let end = (start + BATCH_ROWS - 1).min(params.n_max);
        let rows: Vec<usize> = (start..=end).collect();
        let airy: Vec<Vec<Interval>> = exec::map(strategy, &rows, |&n| certifier.airy_row(n, airy_len(n)))
            .into_iter()
            .collect::<Result<_>>()?;
        for (i, &n) in rows.iter().enumerate() {
            let here = &airy[i];
            let below = if i == 0 { &prev } else { &airy[i - 1] };
            let s = certifier.s_for(side, n);
            let cells: Vec<CellReport> = exec::map_range(strategy, 0, len(n), |m| {
                let first = certifier.cell_from(side, n, m, &eta, &s, [&here[m + 1], &below[m + 2], &below[m]]);
                certifier.decide(side, n, m, &eta, first)
            })
            .into_iter()
            .collect::<Result<_>>()?;
            for cell in &cells {
                report.cells += 1;
                if cell.digits != certifier.digits() {
                    report.bumped += 1;
                }
                match cell.verdict {
                    Verdict::Holds => report.holds += 1,
                    Verdict::Fails => report.fails.push((n, cell.m)),
                    Verdict::Inconclusive => report.inconclusive.push((n, cell.m)),
                }
                sink(cell);
            }
        }
        prev = airy.into_iter().last().expect("non-empty batch");
        start = end + 1;
    }
    let last_bad = report
        .fails
        .iter()
        .chain(&report.inconclusive)
        .map(|&(n, _)| n)
        .max();
    report.threshold = match last_bad {
        None => Some(params.n_min),
        Some(n) if n < params.n_max => Some(n + 1),
        Some(_) => None,
    };
    Ok(report)
}
