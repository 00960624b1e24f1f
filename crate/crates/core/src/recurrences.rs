//! Exact integer tables: `b_{n,m}`, `a_n`, ballot and Catalan numbers, and
//! the elementary bounds built from them.
//!
//! `b_{n,m}` counts the words of `A_n` that have exactly `n - m` letters
//! between the last two occurrences of `n`. It satisfies `b_{1,1} = 1` and, for `n >= 2`,
//! `b_{n,m} = (2n+m-2) * sum_{k<=m} b_{n-1,k}`, with `a_n = sum_m b_{n,m}`.

use std::cmp::Ordering;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rug::{Complete, Integer, Rational};

use crate::{Error, Result};

/// Lower-triangular table with rows `1..=n_max`; row `n` holds
/// `m = 1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTriangle {
    rows: Vec<Vec<Integer>>,
}

impl CountTriangle {
    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    /// Entry `(n, m)`, zero outside `1 <= m <= n <= n_max`.
    pub fn get(&self, n: usize, m: usize) -> Integer {
        if n == 0 || m == 0 || m > n || n > self.n_max() {
            return Integer::new();
        }
        self.rows[n - 1][m - 1].clone()
    }

    pub fn row(&self, n: usize) -> &[Integer] {
        &self.rows[n - 1]
    }

    pub fn row_sum(&self, n: usize) -> Integer {
        self.row(n).iter().sum()
    }

    /// `n,m,b` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m,b\n");
        for (i, row) in self.rows.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                out.push_str(&format!("{},{},{b}\n", i + 1, j + 1));
            }
        }
        out
    }

    const CACHE_HEADER: &'static str = "# treechild b-table v1";

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(fs::File::create(path)?);
        writeln!(f, "{}", Self::CACHE_HEADER)?;
        writeln!(f, "n_max {}", self.n_max())?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Integer::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        f.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let reader = BufReader::new(fs::File::open(path)?);
        let mut lines = reader.lines().enumerate();
        let mut next = |what: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((i, line)) => Ok((i + 1, line?)),
                None => Err(Error::Parse {
                    line: 0,
                    message: format!("unexpected end of cache, expected {what}"),
                }),
            }
        };
        let (line, header) = next("header")?;
        if header.trim() != Self::CACHE_HEADER {
            return Err(Error::Parse {
                line,
                message: format!("unsupported cache header {header:?}"),
            });
        }
        let (line, size) = next("n_max")?;
        let n_max: usize = size
            .strip_prefix("n_max ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse {
                line,
                message: "expected `n_max <count>`".into(),
            })?;
        let mut rows = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let (line, text) = next("a table row")?;
            let row: Vec<Integer> = text
                .split_whitespace()
                .map(|t| t.parse::<Integer>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })?;
            if row.len() != n {
                return Err(Error::Parse {
                    line,
                    message: format!("row {n} has {} entries", row.len()),
                });
            }
            rows.push(row);
        }
        Ok(CountTriangle { rows })
    }
}

/// Streams the rows of the `b` triangle, `b_{1,·}` first.
#[derive(Clone, Debug, Default)]
pub struct BRows {
    prev: Vec<Integer>,
}

impl Iterator for BRows {
    type Item = Vec<Integer>;

    fn next(&mut self) -> Option<Vec<Integer>> {
        let n = self.prev.len() + 1;
        let row = if n == 1 {
            vec![Integer::from(1)]
        } else {
            let mut partial = Integer::new();
            (1..=n)
                .map(|m| {
                    if m < n {
                        partial += &self.prev[m - 1];
                    }
                    Integer::from(&partial * (2 * n + m - 2) as u64)
                })
                .collect()
        };
        self.prev = row.clone();
        Some(row)
    }
}

pub fn b_rows() -> BRows {
    BRows::default()
}

pub fn b_table(n_max: usize) -> CountTriangle {
    CountTriangle {
        rows: b_rows().take(n_max).collect(),
    }
}

/// The same table via
/// `b_{n,m} = (2n+m-2)/(2n+m-3) * b_{n,m-1} + (2n+m-2) * b_{n-1,m}`,
/// where the division is exact.
pub fn b_table_alt(n_max: usize) -> CountTriangle {
    let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(n_max);
    if n_max >= 1 {
        rows.push(vec![Integer::from(1)]);
    }
    for n in 2..=n_max {
        let mut row: Vec<Integer> = Vec::with_capacity(n);
        for m in 1..=n {
            let w = (2 * n + m - 2) as u64;
            let mut value = Integer::new();
            if m > 1 {
                let (q, r) = (&row[m - 2] * w).complete().div_rem(Integer::from(w - 1));
                assert!(r == 0, "inexact division in b recurrence at ({n}, {m})");
                value += q;
            }
            if m < n {
                value += &rows[n - 2][m - 1] * w;
            }
            row.push(value);
        }
        rows.push(row);
    }
    CountTriangle { rows }
}

/// `a_1, ..., a_{n_max}` without holding the table.
pub fn a_seq(n_max: usize) -> Vec<Integer> {
    b_rows().take(n_max).map(|r| r.iter().sum()).collect()
}

/// `a_n` with the convention `a_0 = 1` (the empty word).
pub fn a_n(n: usize) -> Integer {
    if n == 0 {
        Integer::from(1)
    } else {
        b_rows().nth(n - 1).unwrap().iter().sum()
    }
}

pub fn factorial(n: usize) -> Integer {
    Integer::factorial(n as u32).complete()
}

pub fn binomial(n: usize, k: usize) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(n).binomial(k as u32)
}

/// Ballot number `g_{n,m} = (n-m+1)/n * C(n+m-2, n-1)`.
pub fn ballot_g(n: usize, m: usize) -> Result<Integer> {
    if m == 0 || m > n {
        return Err(Error::OutOfRange(format!("ballot g_{{{n},{m}}} needs 1 <= m <= n")));
    }
    let num = binomial(n + m - 2, n - 1) * (n - m + 1) as u64;
    Ok(num / n as u64)
}

pub fn catalan(n: usize) -> Integer {
    binomial(2 * n, n) / (n as u64 + 1)
}

/// Ballot triangle from `g_{1,1} = 1`, `g_{n,m} = sum_{k<=m} g_{n-1,k}`.
pub fn ballot_table(n_max: usize) -> CountTriangle {
    let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if n == 1 {
            rows.push(vec![Integer::from(1)]);
            continue;
        }
        let mut partial = Integer::new();
        let row = (1..=n)
            .map(|m| {
                if m < n {
                    partial += &rows[n - 2][m - 1];
                }
                partial.clone()
            })
            .collect();
        rows.push(row);
    }
    CountTriangle { rows }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallotBoundReport {
    pub n_max: usize,
    pub entries_checked: usize,
    /// First `(n, m)` with `3^n n! g_{n,m} < b_{n,m}`.
    pub entry_violation: Option<(usize, usize)>,
    /// First `n` with `a_n > 3^n n! C_n`.
    pub row_violation: Option<usize>,
}

impl BallotBoundReport {
    pub fn holds(&self) -> bool {
        self.entry_violation.is_none() && self.row_violation.is_none()
    }
}

/// Checks `3^n n! g_{n,m} >= b_{n,m}` entrywise and `a_n <= 3^n n! C_n`,
/// streaming both triangles.
pub fn check_ballot_bound(n_max: usize) -> BallotBoundReport {
    let mut report = BallotBoundReport {
        n_max,
        entries_checked: 0,
        entry_violation: None,
        row_violation: None,
    };
    let mut g_prev: Vec<Integer> = Vec::new();
    let mut scale = Integer::from(1);
    for (i, b_row) in b_rows().take(n_max).enumerate() {
        let n = i + 1;
        scale *= 3 * n as u64;
        let g_row: Vec<Integer> = if n == 1 {
            vec![Integer::from(1)]
        } else {
            let mut partial = Integer::new();
            (1..=n)
                .map(|m| {
                    if m < n {
                        partial += &g_prev[m - 1];
                    }
                    partial.clone()
                })
                .collect()
        };
        for (j, (b, g)) in b_row.iter().zip(&g_row).enumerate() {
            report.entries_checked += 1;
            if report.entry_violation.is_none() && (&scale * g).complete() < *b {
                report.entry_violation = Some((n, j + 1));
            }
        }
        let a: Integer = b_row.iter().sum();
        if report.row_violation.is_none() && a > (&scale * &catalan(n)).complete() {
            report.row_violation = Some(n);
        }
        g_prev = g_row;
    }
    report
}

/// `TC_{n,n-1} = n! a_{n-1}`.
pub fn tc_max_retic(n: usize) -> Result<Integer> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    Ok(factorial(n) * a_n(n - 1))
}

/// Upper bound `TC_{n,n-1} / (2^{n-1-k} (n-k-1)!)` on `TC_{n,k}`, rounded up.
pub fn tc_upper_k(n: usize, k: usize) -> Result<Integer> {
    if k + 1 > n {
        return Err(Error::OutOfRange(format!("need k <= n - 1, got n={n}, k={k}")));
    }
    let top = tc_max_retic(n)?;
    let gap = n - 1 - k;
    let den = (Integer::from(1) << gap as u32) * factorial(gap);
    Ok(top.div_rem_ceil(den).0)
}

/// Partial sum `sum_{j<=terms} 1/j!`, a lower bound on `e` within
/// `1 / (terms! * terms)`.
fn e_partial(terms: usize) -> (Rational, Rational) {
    let mut sum = Rational::new();
    let mut term = Rational::from(1);
    for j in 0..=terms {
        if j > 0 {
            term /= j as u64;
        }
        sum += &term;
    }
    let tail = Rational::from((1, 1)) / (factorial(terms) * terms as u64);
    (sum, tail)
}

/// Compares `x` with `sqrt(e) * y` exactly (`x, y >= 0`). Never returns
/// `Equal` for `y > 0` since `e` is irrational.
pub fn cmp_sqrt_e(x: &Integer, y: &Integer) -> Ordering {
    assert!(*x >= 0 && *y >= 0, "cmp_sqrt_e expects non-negative arguments");
    if *y == 0 {
        return x.cmp(y);
    }
    let lhs = Rational::from(x.clone().square());
    let y2 = y.clone().square();
    let mut terms = 8;
    loop {
        let (lo, tail) = e_partial(terms);
        let hi = (&lo + &tail).complete();
        if lhs < Rational::from(&lo * &y2) {
            return Ordering::Less;
        }
        if lhs > Rational::from(&hi * &y2) {
            return Ordering::Greater;
        }
        terms *= 2;
    }
}

/// Cached `b` table keyed by `n_max` inside `dir`; built and written on a
/// miss.
pub fn b_table_cached(dir: &Path, n_max: usize) -> Result<CountTriangle> {
    let path = cache_path(dir, n_max);
    if path.exists() {
        let table = CountTriangle::load(&path)?;
        if table.n_max() == n_max {
            return Ok(table);
        }
    }
    let table = b_table(n_max);
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    table.save(&tmp)?;
    fs::rename(&tmp, &path)?;
    Ok(table)
}

fn cache_path(dir: &Path, n_max: usize) -> PathBuf {
    dir.join(format!("b-table-{n_max}.txt"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_rows() {
        let b = b_table(3);
        assert_eq!(b.get(1, 1), 1);
        assert_eq!((b.get(2, 1), b.get(2, 2)), (Integer::from(3), Integer::from(4)));
        assert_eq!(b.row_sum(2), 7);
        assert_eq!(b.row_sum(3), 106);
        assert_eq!(b.get(2, 3), 0);
        assert_eq!(b.get(9, 1), 0);
    }

    #[test]
    fn alt_matches_small() {
        assert_eq!(b_table(40), b_table_alt(40));
        assert_eq!(b_table_alt(2).get(2, 1), 3);
    }

    #[test]
    fn a_values() {
        assert_eq!(a_seq(7), [1, 7, 106, 2575, 87595, 3864040, 210455470]);
        assert_eq!(a_n(0), 1);
        assert_eq!(a_n(5), 87595);
    }

    #[test]
    fn diagonal_relation() {
        let b = b_table(60);
        for n in 2..=60 {
            assert_eq!(b.get(n, n), b.row_sum(n - 1) * (3 * n as u64 - 2));
        }
    }

    #[test]
    fn ballot_numbers() {
        assert_eq!(ballot_g(3, 2).unwrap(), 2);
        assert_eq!((1..=3).map(|m| ballot_g(3, m).unwrap()).sum::<Integer>(), 5);
        assert_eq!(catalan(3), 5);
        let g = ballot_table(30);
        for n in 1..=30 {
            assert_eq!(ballot_g(n, 1).unwrap(), 1);
            for m in 1..=n {
                assert_eq!(g.get(n, m), ballot_g(n, m).unwrap(), "g({n},{m})");
            }
            assert_eq!(g.row_sum(n), catalan(n));
        }
        assert!(ballot_g(2, 3).is_err());
    }

    #[test]
    fn ballot_bound_small() {
        let r = check_ballot_bound(50);
        assert!(r.holds());
        assert_eq!(r.entries_checked, 50 * 51 / 2);
    }

    #[test]
    fn max_retic_counts() {
        assert_eq!(tc_max_retic(1).unwrap(), 1);
        assert_eq!(tc_max_retic(2).unwrap(), 2);
        assert_eq!(tc_max_retic(4).unwrap(), 2544);
        assert_eq!(tc_upper_k(4, 2).unwrap(), 1272);
        assert_eq!(tc_upper_k(4, 3).unwrap(), 2544);
        assert!(tc_upper_k(4, 4).is_err());
    }

    #[test]
    fn sqrt_e_comparison() {
        // sqrt(e) = 1.6487212707...
        let cmp = |x: u64, y: u64| cmp_sqrt_e(&Integer::from(x), &Integer::from(y));
        assert_eq!(cmp(16487, 10000), Ordering::Less);
        assert_eq!(cmp(16488, 10000), Ordering::Greater);
        assert_eq!(cmp(16487212707, 10000000000), Ordering::Less);
        assert_eq!(cmp(16487212708, 10000000000), Ordering::Greater);
        assert_eq!(cmp(0, 0), Ordering::Equal);
        assert_eq!(cmp(1, 0), Ordering::Greater);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let built = b_table_cached(dir.path(), 25).unwrap();
        assert!(cache_path(dir.path(), 25).exists());
        let loaded = b_table_cached(dir.path(), 25).unwrap();
        assert_eq!(built, loaded);
        assert_eq!(built, b_table(25));
        fs::write(cache_path(dir.path(), 3), "garbage\n").unwrap();
        assert!(matches!(b_table_cached(dir.path(), 3), Err(Error::Parse { .. })));
    }

    #[test]
    fn csv_export() {
        let csv = b_table(2).to_csv();
        assert_eq!(csv, "n,m,b\n1,1,1\n2,1,3\n2,2,4\n");
    }
}
