//! Node-labeled counts and the closed forms for 1-component networks.
//!
//! A node-labeled tree-child network carries labels `1..=N` on its `N`
//! non-root nodes. With `n` leaves and `k` reticulations it has
//! `N = 2n + 2k - 1` non-root nodes, so `N` is odd and
//!
//! ```text
//! hat-TC_N = sum_{n = ceil((N+3)/4)}^{(N+1)/2} N!/n! TC_{n,(N+1)/2-n}.
//! ```
//!
//! In a 1-component network every reticulation's child is a leaf, and
//! `1-TC_{n,k} = C(n,k) (2n-2)! / (2^{n-1} (n-k-1)!)`.

use std::collections::BTreeMap;

use rug::{Float, Integer};

use crate::asymptotics::main_terms::{a1_f64, ln_integer};
use crate::enumerate::{enumerate_tree_child, EnumerateConfig};
use crate::recurrences::{binomial, factorial};
use crate::{Error, Result};

const PREC: u32 = 128;

fn fl(x: f64) -> Float {
    Float::with_val(PREC, x)
}

/// `1-TC_{n,k}` for `n >= 1`, `0 <= k <= n - 1`.
pub fn one_tc_nk(n: usize, k: usize) -> Result<Integer> {
    if n == 0 || k >= n {
        return Err(Error::OutOfRange(format!("1-TC needs 0 <= k < n, got n={n}, k={k}")));
    }
    let num = binomial(n, k) * factorial(2 * n - 2);
    let den = (Integer::from(1) << (n as u32 - 1)) * factorial(n - k - 1);
    let (q, r) = num.div_rem(den);
    debug_assert_eq!(r, 0);
    Ok(q)
}

/// `1-TC_n = sum_k 1-TC_{n,k}`.
pub fn one_tc(n: usize) -> Result<Integer> {
    (0..n).map(|k| one_tc_nk(n, k)).sum()
}

/// `ln( (1/(2 sqrt e)) n^{-5/4} e^{2 sqrt n} (2/e^2)^n n^{2n} )`.
pub fn one_tc_main_term_log(n: usize) -> f64 {
    assert!(n >= 1, "n >= 1");
    let nf = fl(n as f64);
    let ln_n = Float::with_val(PREC, nf.ln_ref());
    let mut v = -fl(2.0).ln() - 0.5f64;
    v -= Float::with_val(PREC, &ln_n * 5u32) / 4u32;
    v += Float::with_val(PREC, nf.sqrt_ref()) * 2u32;
    v += Float::with_val(PREC, fl(2.0).ln() - 2u32) * &nf;
    v += Float::with_val(PREC, &ln_n * &nf) * 2u32;
    v.to_f64()
}

/// Source of the counts `TC_{n,k}` consumed by [`hat_tc`].
pub trait TcProvider {
    fn tc(&self, n: usize, k: usize) -> Option<Integer>;
}

impl<F> TcProvider for F
where
    F: Fn(usize, usize) -> Option<Integer>,
{
    fn tc(&self, n: usize, k: usize) -> Option<Integer> {
        self(n, k)
    }
}

/// Explicit `TC_{n,k}` values.
#[derive(Clone, Debug, Default)]
pub struct TcTable {
    counts: BTreeMap<(usize, usize), Integer>,
}

impl TcTable {
    pub fn new() -> Self {
        TcTable::default()
    }

    pub fn insert(&mut self, n: usize, k: usize, value: Integer) {
        self.counts.insert((n, k), value);
    }

    /// Counts from exhaustive enumeration for every `n <= n_max`.
    pub fn from_enumeration(n_max: usize, config: &EnumerateConfig) -> Result<Self> {
        let mut table = TcTable::new();
        for n in 1..=n_max {
            let counts = enumerate_tree_child(n, config)?;
            for k in 0..n {
                table.insert(n, k, counts.count(k));
            }
        }
        Ok(table)
    }
}

impl TcProvider for TcTable {
    fn tc(&self, n: usize, k: usize) -> Option<Integer> {
        self.counts.get(&(n, k)).cloned()
    }
}

/// The summation range `ceil((N+3)/4) ..= (N+1)/2` for odd `N`.
pub fn hat_tc_range(big_n: usize) -> std::ops::RangeInclusive<usize> {
    (big_n + 3).div_ceil(4)..=(big_n + 1) / 2
}

fn node_labeled_sum(
    big_n: usize,
    mut term: impl FnMut(usize, usize) -> Result<Integer>,
) -> Result<Integer> {
    if big_n == 0 {
        return Err(Error::OutOfRange("N must be positive".into()));
    }
    if big_n % 2 == 0 {
        return Ok(Integer::new());
    }
    let half = (big_n + 1) / 2;
    let mut total = Integer::new();
    for n in hat_tc_range(big_n) {
        let k = half - n;
        total += term(n, k)? * (factorial(big_n) / factorial(n));
    }
    Ok(total)
}

/// Node-labeled count `hat-TC_N`; zero for even `N`.
pub fn hat_tc(big_n: usize, provider: &impl TcProvider) -> Result<Integer> {
    node_labeled_sum(big_n, |n, k| provider.tc(n, k).ok_or(Error::MissingCount { n, k }))
}

/// Index of the largest summand, `floor(N/4 + 11/8 + sqrt(12N+61)/8)`.
pub fn hat_tc_maximizer(big_n: usize) -> usize {
    let s = Integer::from(12 * big_n + 61).sqrt();
    // floor((2N + 11 + sqrt(12N+61)) / 8) only depends on floor(sqrt(.)).
    (2 * big_n + 11 + s.to_usize().expect("fits")) / 8
}

/// Logs of the lower and upper bound expressions for `hat-TC_N`, without
/// their unknown constants:
/// `N^{1/12} e^{a_1 (3N/4)^{1/3}} (3/e^5)^{N/4} N^{5N/4}` and
/// `N^2 e^{sqrt(3N)/2} (3/e^5)^{N/4} N^{5N/4}`.
pub fn hat_tc_bounds_log(big_n: usize) -> (f64, f64) {
    assert!(big_n >= 1, "N >= 1");
    let nf = fl(big_n as f64);
    let ln_n = Float::with_val(PREC, nf.ln_ref());
    let common = Float::with_val(PREC, fl(3.0).ln() - 5u32) * &nf / 4u32
        + Float::with_val(PREC, &ln_n * &nf) * 5u32 / 4u32;
    let lower = Float::with_val(PREC, &ln_n / 12u32)
        + Float::with_val(PREC, Float::with_val(PREC, &nf * 3u32) / 4u32).cbrt() * a1_f64()
        + &common;
    let upper = Float::with_val(PREC, &ln_n * 2u32)
        + Float::with_val(PREC, Float::with_val(PREC, &nf * 3u32).sqrt() / 2u32)
        + &common;
    (lower.to_f64(), upper.to_f64())
}

/// `sum_n C(N,n) (N-n)! 1-TC_{n,(N+1)/2-n}`; zero for even `N`.
pub fn one_hat_tc(big_n: usize) -> Result<Integer> {
    node_labeled_sum(big_n, one_tc_nk)
}

/// `ln` of `2^{9/8} e^{-1/32} N^{-7/8}
/// e^{(2N)^{3/4}/2 + sqrt(2N)/16 - 3 (2N)^{1/4}/64} (1/(2e^5))^{N/4} N^{5N/4}`.
pub fn one_hat_tc_main_term_log(big_n: usize) -> f64 {
    assert!(big_n >= 1, "N >= 1");
    let nf = fl(big_n as f64);
    let ln_n = Float::with_val(PREC, nf.ln_ref());
    let two_n = Float::with_val(PREC, &nf * 2u32);
    let q = Float::with_val(PREC, two_n.sqrt_ref()).sqrt(); // (2N)^{1/4}
    let ln2 = fl(2.0).ln();
    let mut v = Float::with_val(PREC, &ln2 * 9u32) / 8u32 - 1f64 / 32.0;
    v -= Float::with_val(PREC, &ln_n * 7u32) / 8u32;
    v += Float::with_val(PREC, q.clone().square() * &q) / 2u32;
    v += Float::with_val(PREC, q.clone().square()) / 16u32;
    v -= Float::with_val(PREC, &q * 3u32) / 64u32;
    v -= Float::with_val(PREC, ln2 + 5u32) * &nf / 4u32;
    v += Float::with_val(PREC, &ln_n * &nf) * 5u32 / 4u32;
    v.to_f64()
}

/// `exact / main term` from logs.
pub fn ratio_to_main(exact: &Integer, log_main: f64) -> f64 {
    (ln_integer(exact) - log_main).exp()
}

pub const HAT_TC_CSV_HEADER: &str = "N,hat_tc,log_main_lower,log_main_upper";
pub const ONE_TC_CSV_HEADER: &str = "n,one_tc,log_main,ratio";

/// Rows `N,hat_tc,log_main_lower,log_main_upper` for odd `N` in the list;
/// `hat_tc` is left empty when the provider lacks an input.
pub fn hat_tc_csv(ns: &[usize], provider: &impl TcProvider) -> Result<Vec<String>> {
    ns.iter()
        .map(|&n| {
            let value = match hat_tc(n, provider) {
                Ok(v) => v.to_string(),
                Err(Error::MissingCount { .. }) => String::new(),
                Err(e) => return Err(e),
            };
            let (lo, hi) = hat_tc_bounds_log(n);
            Ok(format!("{n},{value},{lo:.12},{hi:.12}"))
        })
        .collect()
}

/// Rows `n,one_tc,log_main,ratio`.
pub fn one_tc_csv(ns: &[usize]) -> Result<Vec<String>> {
    ns.iter()
        .map(|&n| {
            let exact = one_tc(n)?;
            let log_main = one_tc_main_term_log(n);
            let ratio = ratio_to_main(&exact, log_main);
            Ok(format!("{n},{exact},{log_main:.12},{ratio:.12}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_oracle() -> TcTable {
        let mut t = TcTable::new();
        t.insert(1, 0, Integer::from(1));
        t.insert(2, 0, Integer::from(1));
        t.insert(2, 1, Integer::from(2));
        t.insert(3, 0, Integer::from(3));
        t.insert(3, 1, Integer::from(21));
        t.insert(3, 2, Integer::from(42));
        t
    }

    #[test]
    fn one_tc_values() {
        assert_eq!(one_tc_nk(2, 0).unwrap(), 1);
        assert_eq!(one_tc_nk(2, 1).unwrap(), 2);
        let row: Vec<Integer> = (0..3).map(|k| one_tc_nk(3, k).unwrap()).collect();
        assert_eq!(row, [3, 18, 18]);
        assert_eq!(one_tc(2).unwrap(), 3);
        assert_eq!(one_tc(3).unwrap(), 39);
        assert!(one_tc_nk(3, 3).is_err());
        // k = 0 gives the (2n-3)!! trees
        for n in 2..10 {
            let dfact: Integer = (1..=(2 * n - 3)).step_by(2).map(Integer::from).product();
            assert_eq!(one_tc_nk(n, 0).unwrap(), dfact);
        }
    }

    #[test]
    fn node_labeled_small() {
        let t = small_oracle();
        assert_eq!(hat_tc(5, &t).unwrap(), 180);
        assert_eq!(hat_tc(3, &t).unwrap(), 3);
        assert_eq!(hat_tc(1, &t).unwrap(), 1);
        assert_eq!(hat_tc(4, &t).unwrap(), 0);
        assert!(matches!(hat_tc(9, &t), Err(Error::MissingCount { .. })));
        assert_eq!(one_hat_tc(3).unwrap(), 3);
        assert_eq!(one_hat_tc(5).unwrap(), 180);
        assert_eq!(one_hat_tc(6).unwrap(), 0);
        assert_eq!(hat_tc_range(7), 3..=4);
        let closure = |n: usize, k: usize| t.tc(n, k);
        assert_eq!(hat_tc(5, &closure).unwrap(), 180);
    }

    #[test]
    fn maximizer_in_range() {
        for big_n in (1..2000).step_by(2) {
            let m = hat_tc_maximizer(big_n);
            let exact = big_n as f64 / 4.0 + 11.0 / 8.0 + ((12 * big_n + 61) as f64).sqrt() / 8.0;
            assert_eq!(m, exact.floor() as usize, "N = {big_n}");
            // N = 1, 3, 5 sit past the upper end of the range.
            assert_eq!(hat_tc_range(big_n).contains(&m), big_n >= 7, "N = {big_n}");
        }
    }

    #[test]
    fn bounds_share_the_exponential_part() {
        for big_n in [11, 101, 1001] {
            let (lo, hi) = hat_tc_bounds_log(big_n);
            let nf = big_n as f64;
            let common = nf / 4.0 * (3f64.ln() - 5.0) + 1.25 * nf * nf.ln();
            assert!((lo - common - (nf.ln() / 12.0 + a1_f64() * (0.75 * nf).cbrt())).abs() < 1e-9);
            assert!((hi - common - (2.0 * nf.ln() + (3.0 * nf).sqrt() / 2.0)).abs() < 1e-9);
            assert!(lo < hi);
        }
    }

    #[test]
    fn csv_rows() {
        let rows = one_tc_csv(&[2, 3]).unwrap();
        assert!(rows[0].starts_with("2,3,"));
        assert!(rows[1].starts_with("3,39,"));
        let t = small_oracle();
        let rows = hat_tc_csv(&[5, 9], &t).unwrap();
        assert!(rows[0].starts_with("5,180,"));
        assert!(rows[1].starts_with("9,,"));
    }
}
