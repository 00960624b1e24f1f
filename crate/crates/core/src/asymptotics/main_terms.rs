//! Log-scale main terms of the maximal and total tree-child counts.
//!
//! ```text
//! TC_n    ~ n^{-2/3} e^{a_1 (3n)^{1/3}} (12/e^2)^n n^{2n}         (up to Θ)
//! a_{n-1} ~ n! n^{-5/3} e^{a_1 (3n)^{1/3}} 12^n                   (up to Θ)
//! ```
//!
//! Everything is evaluated with 128-bit MPFR arithmetic and returned as a
//! natural logarithm in `f64`.

use std::sync::OnceLock;

use rug::{Float, Integer};

use super::airy::AiryContext;
use crate::recurrences::a_seq;
use crate::{Error, Result};

const PREC: u32 = 128;

/// `a_1` to well beyond double precision, computed once.
pub fn a1_f64() -> f64 {
    static A1: OnceLock<f64> = OnceLock::new();
    *A1.get_or_init(|| {
        AiryContext::new(30)
            .expect("30 digits is a supported precision")
            .a1()
            .to_f64()
    })
}

fn fl(x: impl Into<f64>) -> Float {
    Float::with_val(PREC, x.into())
}

/// `ln x` of a positive integer.
pub fn ln_integer(x: &Integer) -> f64 {
    assert!(*x > 0, "log of non-positive integer");
    Float::with_val(PREC, x).ln().to_f64()
}

/// `ln Γ(x)`.
fn ln_gamma(x: usize) -> Float {
    Float::with_val(PREC, x).ln_gamma()
}

fn a1_cbrt_term(n: Float) -> Float {
    // a_1 (3n)^{1/3}
    Float::with_val(PREC, n * 3u32).cbrt() * a1_f64()
}

/// `ln( n^{-2/3} e^{a_1 (3n)^{1/3}} (12/e^2)^n n^{2n} )`.
pub fn main_term_log_tc(n: usize) -> f64 {
    assert!(n >= 1, "n >= 1");
    let nf = fl(n as f64);
    let ln_n = Float::with_val(PREC, nf.ln_ref());
    let ln12 = fl(12.0).ln();
    let mut v = Float::with_val(PREC, &ln_n * -2i32) / 3u32;
    v += a1_cbrt_term(nf.clone());
    v += Float::with_val(PREC, ln12 - 2u32) * &nf;
    v += Float::with_val(PREC, &ln_n * &nf) * 2u32;
    v.to_f64()
}

/// `ln` of the main term of `a_n`, that is the displayed `a_{n-1}` form
/// taken at `n + 1`: `ln((n+1)! (n+1)^{-5/3} e^{a_1 (3(n+1))^{1/3}} 12^{n+1})`.
pub fn main_term_log_an(n: usize) -> f64 {
    assert!(n >= 1, "n >= 1");
    let n1 = n + 1;
    let nf = fl(n1 as f64);
    let mut v = ln_gamma(n1 + 1);
    v -= Float::with_val(PREC, nf.ln_ref()) * 5u32 / 3u32;
    v += a1_cbrt_term(nf.clone());
    v += fl(12.0).ln() * &nf;
    v.to_f64()
}

/// `a_n` divided by its main term.
pub fn theta_ratio(n: usize, a_n: &Integer) -> f64 {
    (ln_integer(a_n) - main_term_log_an(n)).exp()
}

/// `theta_ratio` over `n_lo..=n_hi`.
#[derive(Clone, Debug)]
pub struct ThetaReport {
    pub ratios: Vec<(usize, f64)>,
    pub min: f64,
    pub max: f64,
    /// `max / min` over the whole range.
    pub window: f64,
    /// `max / min` over the last tenth of the range.
    pub top_oscillation: f64,
}

pub fn theta_report(n_lo: usize, n_hi: usize) -> Result<ThetaReport> {
    if n_lo < 1 || n_hi < n_lo {
        return Err(Error::OutOfRange(format!("bad range {n_lo}..={n_hi}")));
    }
    let a = a_seq(n_hi);
    let ratios: Vec<(usize, f64)> = (n_lo..=n_hi).map(|n| (n, theta_ratio(n, &a[n - 1]))).collect();
    let span = |rs: &[(usize, f64)]| {
        let lo = rs.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        let hi = rs.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let (min, max) = span(&ratios);
    let top_start = n_hi - (n_hi - n_lo) / 10;
    let (tlo, thi) = span(&ratios[top_start - n_lo..]);
    Ok(ThetaReport {
        min,
        max,
        window: max / min,
        top_oscillation: thi / tlo,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_matches_printed_digits() {
        assert!((a1_f64() + 2.338_107_410).abs() < 1e-9);
    }

    #[test]
    fn consecutive_main_terms_grow_like_12n() {
        // a_n: 12^n n! gives a step of 12 (n+1); TC_n: (12/e^2)^n n^{2n}
        // gives 12 n^2 to first order.
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for n in [100, 1000, 10000] {
            let an = main_term_log_an(n + 1) - main_term_log_an(n) - (12.0 * n as f64).ln();
            let tc = main_term_log_tc(n + 1) - main_term_log_tc(n) - (12.0 * (n * n) as f64).ln();
            assert!(an.abs() < prev.0 && tc.abs() < prev.1, "n = {n}: {an} {tc}");
            assert!(an.abs() < 0.05 && tc.abs() < 0.05);
            prev = (an.abs(), tc.abs());
        }
    }

    #[test]
    fn theta_ratio_is_finite() {
        let a = a_seq(120);
        for n in [1, 10, 100, 120] {
            let r = theta_ratio(n, &a[n - 1]);
            assert!(r.is_finite() && r > 0.0, "n = {n}: {r}");
        }
    }
}
