//! Exact rational tables: the normalized counts `d_{n,m}`, their truncation
//! `d̂_{n,m}`, and the weighted path sums `p_{l,m,2n}`.
//!
//! `d_{n,m} = b_{N,M} / (3^N N!)` with `N = (n+m)/2`, `M = (n-m)/2`, and
//! zero when `n - m` is odd. It satisfies, for `n >= 3`,
//!
//! ```text
//! d_{n,m} = (3n+m-4)/(3n+m-6) d_{n-1,m+1} + (3n+m-4)/(3n+3m) d_{n-1,m-1}
//! ```
//!
//! from `d_{2,0} = 1/3`. Read backwards, the weights are those of a lattice
//! path with up-steps `(3a+b)/(3a+3b+6)` and down-steps
//! `(3a+b-2)/(3a+b-4)` from `(a,b)`.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::{Error, Result};

/// Exact values indexed by `(row, column)`; missing entries read as zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalTable {
    first_row: usize,
    rows: Vec<Vec<Rational>>,
}

impl RationalTable {
    fn new(first_row: usize) -> Self {
        RationalTable {
            first_row,
            rows: Vec::new(),
        }
    }

    pub fn first_row(&self) -> usize {
        self.first_row
    }

    pub fn last_row(&self) -> usize {
        self.first_row + self.rows.len() - 1
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        i.checked_sub(self.first_row)
            .and_then(|r| self.rows.get(r))
            .map_or(&[], Vec::as_slice)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Rational> {
        self.row(i).get(j)
    }

    /// Entry as an owned value, zero outside the stored range.
    pub fn value(&self, i: usize, j: usize) -> Rational {
        self.get(i, j).cloned().unwrap_or_default()
    }

    fn get_signed(&self, i: usize, j: i64) -> Option<&Rational> {
        usize::try_from(j).ok().and_then(|j| self.get(i, j))
    }
}

/// Whether `m < n^alpha` for a non-negative rational exponent `p/q`, decided
/// exactly as `m^q < n^p`.
pub fn below_power(m: usize, n: usize, alpha: &Rational) -> bool {
    assert!(*alpha >= 0, "negative exponent");
    let p = alpha.numer().to_u32().expect("exponent numerator fits u32");
    let q = alpha.denom().to_u32().expect("exponent denominator fits u32");
    Integer::from(m).pow(q) < Integer::from(n).pow(p)
}

/// Number of `m >= 0` with `m < n^alpha`.
pub fn range_len(n: usize, alpha: &Rational) -> usize {
    let guess = (n as f64).powf(alpha.to_f64()).ceil() as usize;
    let mut len = guess.saturating_sub(1);
    while len > 0 && !below_power(len - 1, n, alpha) {
        len -= 1;
    }
    while below_power(len, n, alpha) {
        len += 1;
    }
    len
}

fn weight_up(n: i64, m: i64) -> Rational {
    // weight of d_{n-1,m-1} in d_{n,m}
    Rational::from((3 * n + m - 4, 3 * n + 3 * m))
}

fn weight_down(n: i64, m: i64) -> Rational {
    // weight of d_{n-1,m+1} in d_{n,m}
    Rational::from((3 * n + m - 4, 3 * n + m - 6))
}

fn d_rows(n_max: usize, keep: impl Fn(usize, usize) -> bool) -> Result<RationalTable> {
    if n_max < 2 {
        return Err(Error::OutOfRange(format!("n_max = {n_max} < 2")));
    }
    let mut table = RationalTable::new(2);
    let mut first = vec![Rational::new(); 3];
    first[0] = Rational::from((1, 3));
    table.rows.push(first);
    for n in 3..=n_max {
        let mut row = vec![Rational::new(); n + 1];
        for m in 0..=n {
            if (n - m) % 2 == 1 || !keep(n, m) {
                continue;
            }
            let (ni, mi) = (n as i64, m as i64);
            let mut v = Rational::new();
            if let Some(x) = table.get_signed(n - 1, mi + 1) {
                if *x != 0 {
                    v += weight_down(ni, mi) * x;
                }
            }
            if let Some(x) = table.get_signed(n - 1, mi - 1) {
                if *x != 0 {
                    v += weight_up(ni, mi) * x;
                }
            }
            row[m] = v;
        }
        table.rows.push(row);
    }
    Ok(table)
}

/// `d_{n,m}` for `2 <= n <= n_max`, `0 <= m <= n`.
pub fn d_table(n_max: usize) -> Result<RationalTable> {
    d_rows(n_max, |_, _| true)
}

/// The recurrence restricted to `m < n^(1-eps)`, zero elsewhere.
pub fn d_hat_table(n_max: usize, eps: &Rational) -> Result<RationalTable> {
    if *eps <= 0 || *eps >= 1 {
        return Err(Error::OutOfRange(format!("eps = {eps} not in (0, 1)")));
    }
    let alpha = Rational::from(1) - eps;
    d_rows(n_max, |n, m| below_power(m, n, &alpha))
}

/// Weighted path sums `p_{l,m,2n}` towards `(2n, 0)`.
#[derive(Clone, Debug)]
pub struct PathTable {
    two_n: usize,
    table: RationalTable,
    origin: Rational,
}

impl PathTable {
    pub fn two_n(&self) -> usize {
        self.two_n
    }

    /// `p_{l,m,2n}` for `2 <= l <= 2n`; zero outside.
    pub fn get(&self, l: usize, m: usize) -> Rational {
        self.table.value(l, m)
    }

    /// `p_{0,0,2n}`, defined as `d_{2,0} p_{2,0,2n}`: the weights out of
    /// `(0,0)` and `(1,1)` are degenerate, so paths enter at `(2,0)` with
    /// the initial value `1/3`.
    pub fn origin(&self) -> &Rational {
        &self.origin
    }

    pub fn rows(&self) -> &RationalTable {
        &self.table
    }
}

/// `p_{l,m,2n}` for `2 <= l <= 2n`, `0 <= m <= 2n`, with `p_{2n,0,2n} = 1`
/// and `p_{2n,m,2n} = 0` for `m >= 1`.
pub fn p_table(n: usize) -> Result<PathTable> {
    if n < 1 {
        return Err(Error::OutOfRange("p_table needs n >= 1".into()));
    }
    let two_n = 2 * n;
    let width = two_n + 1;
    let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); two_n - 1];
    let mut last = vec![Rational::new(); width];
    last[0] = Rational::from(1);
    rows[two_n - 2] = last;
    for l in (2..two_n).rev() {
        let mut row = vec![Rational::new(); width];
        let next = &rows[l + 1 - 2];
        for (m, slot) in row.iter_mut().enumerate() {
            let (a, b) = (l as i64, m as i64);
            let mut v = Rational::new();
            if m + 1 < width && next[m + 1] != 0 {
                v += Rational::from((3 * a + b, 3 * a + 3 * b + 6)) * &next[m + 1];
            }
            if m >= 1 && next[m - 1] != 0 {
                v += Rational::from((3 * a + b - 2, 3 * a + b - 4)) * &next[m - 1];
            }
            *slot = v;
        }
        rows[l - 2] = row;
    }
    let origin = Rational::from((1, 3)) * &rows[0][0];
    Ok(PathTable {
        two_n,
        table: RationalTable { first_row: 2, rows },
        origin,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixReport {
    pub two_n: usize,
    pub comparisons: usize,
    /// First `(l, j, k)` with `p_{l,j}/(j+1)^2 < p_{l,k}/(k+1)^2`.
    pub violation: Option<(usize, usize, usize)>,
}

impl AppendixReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `p_{l,j,2n}/(j+1)^2 >= p_{l,k,2n}/(k+1)^2` for all
/// `0 <= j < k <= l <= 2n` with `k - j` even, over the rows `l >= 2` where
/// the recurrence is defined.
pub fn check_appendix_lemma(n: usize) -> Result<AppendixReport> {
    let p = p_table(n)?;
    Ok(appendix_report(&p))
}

pub fn appendix_report(p: &PathTable) -> AppendixReport {
    let mut comparisons = 0;
    for l in 2..=p.two_n {
        for k in 1..=l {
            let rk = p.get(l, k) * Rational::from((1, (k + 1) * (k + 1)));
            for j in (k % 2..k).step_by(2) {
                comparisons += 1;
                let rj = p.get(l, j) * Rational::from((1, (j + 1) * (j + 1)));
                if rj < rk {
                    return AppendixReport {
                        two_n: p.two_n,
                        comparisons,
                        violation: Some((l, j, k)),
                    };
                }
            }
        }
    }
    AppendixReport {
        two_n: p.two_n,
        comparisons,
        violation: None,
    }
}

#[derive(Clone, Debug)]
pub struct DhatRow {
    pub n: usize,
    pub d: Rational,
    pub d_hat: Rational,
    /// `d_{2n,0} <= 2 d̂_{2n,0}`
    pub holds: bool,
    /// `d̂_{2n,0} <= d_{2n,0}`
    pub below: bool,
}

impl DhatRow {
    pub fn ratio(&self) -> f64 {
        if self.d_hat == 0 {
            f64::INFINITY
        } else {
            Rational::from(&self.d / &self.d_hat).to_f64()
        }
    }
}

#[derive(Clone, Debug)]
pub struct DhatReport {
    pub eps: Rational,
    pub rows: Vec<DhatRow>,
    /// Smallest `n0` in the range such that the bound holds for every
    /// checked `n >= n0`.
    pub onset: Option<usize>,
}

impl DhatReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// Compares `d_{2n,0}` with `2 d̂_{2n,0}` for `n` in `n_lo..=n_hi`.
pub fn check_d_vs_dhat(n_lo: usize, n_hi: usize, eps: &Rational) -> Result<DhatReport> {
    if n_lo < 1 || n_hi < n_lo {
        return Err(Error::OutOfRange(format!("bad range {n_lo}..={n_hi}")));
    }
    let top = (2 * n_hi).max(2);
    let d = d_table(top)?;
    let dh = d_hat_table(top, eps)?;
    let rows: Vec<DhatRow> = (n_lo..=n_hi)
        .map(|n| {
            let (a, b) = (d.value(2 * n, 0), dh.value(2 * n, 0));
            DhatRow {
                n,
                holds: a <= Rational::from(&b * 2u32),
                below: b <= a,
                d: a,
                d_hat: b,
            }
        })
        .collect();
    let onset = match rows.iter().rposition(|r| !r.holds) {
        None => Some(n_lo),
        Some(i) if i + 1 < rows.len() => Some(rows[i + 1].n),
        Some(_) => None,
    };
    Ok(DhatReport {
        eps: eps.clone(),
        rows,
        onset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let d = d_table(6).unwrap();
        assert_eq!(d.value(2, 0), Rational::from((1, 3)));
        assert_eq!(d.value(3, 1), Rational::from((1, 6)));
        assert_eq!(d.value(4, 0), Rational::from((2, 9)));
        assert_eq!(d.value(3, 0), 0);
        assert_eq!(d.value(5, 2), 0);
        assert_eq!(d.first_row(), 2);
        assert_eq!(d.last_row(), 6);
    }

    #[test]
    fn path_weights_reproduce_small_values() {
        let p = p_table(1).unwrap();
        assert_eq!(p.get(2, 0), 1);
        assert_eq!(*p.origin(), Rational::from((1, 3)));
        let p = p_table(2).unwrap();
        // (2,0) -> (3,1) -> (4,0): 1/2 * 8/6
        assert_eq!(p.get(2, 0), Rational::from((2, 3)));
        assert_eq!(*p.origin(), d_table(4).unwrap().value(4, 0));
        assert!(check_appendix_lemma(3).unwrap().holds());
    }

    #[test]
    fn exact_range_tests() {
        let a = Rational::from((19, 20));
        assert!(below_power(0, 1, &a));
        assert!(!below_power(1, 1, &a));
        assert!(below_power(8, 10, &a));
        assert!(!below_power(9, 10, &a));
        assert_eq!(range_len(10, &a), 9);
        let lb = Rational::from((37, 60));
        for n in [100, 257, 1000, 2000] {
            let len = range_len(n, &lb);
            assert!(below_power(len - 1, n, &lb) && !below_power(len, n, &lb));
        }
    }

    #[test]
    fn truncation_is_below() {
        let eps = Rational::from((1, 20));
        let d = d_table(40).unwrap();
        let dh = d_hat_table(40, &eps).unwrap();
        for n in 2..=40 {
            for m in 0..=n {
                assert!(dh.value(n, m) <= d.value(n, m));
            }
        }
        // Rows whose nonzero entries all satisfy m < n^0.95 are untouched.
        for n in 2..=9 {
            assert_eq!(dh.row(n), d.row(n), "row {n}");
        }
        assert!(d_hat_table(10, &Rational::from(1)).is_err());
    }
}
