//! Table dumps. Exact values are printed in full; fractions as `p/q`.

use std::io::Write;

use anyhow::{bail, Result};
use treechild::asymptotics::{d_hat_table, d_table, p_table, theta_ratio, RationalTable};
use treechild::closed_forms::{hat_tc, hat_tc_range, one_tc_nk, TcTable};
use treechild::recurrences::{a_seq, b_table, b_table_cached};
use treechild::Error;

use crate::args::{ExportArgs, Span, TableName};
use crate::report::Table;
use crate::{Ctx, Status};

pub(crate) fn run(ctx: &Ctx, a: &ExportArgs, out: &mut dyn Write) -> Result<Status> {
    let r = a.range;
    let table = match a.table {
        TableName::B => b(ctx, r)?,
        TableName::A => {
            positive(r)?;
            let a = a_seq(r.hi);
            rows(&["n", "a_n"], r.iter().map(|n| vec![n.to_string(), a[n - 1].to_string()]))
        }
        TableName::D => rational(&d_table(r.hi.max(2))?, r),
        TableName::Dhat => rational(&d_hat_table(r.hi.max(2), &ctx.eps)?, r),
        TableName::P => p(r)?,
        TableName::HatTc => hat(ctx, r)?,
        TableName::OneTc => {
            positive(r)?;
            let mut t = Table::new(&["n", "k", "one_tc"]);
            for n in r.iter() {
                for k in 0..n {
                    t.push(vec![n.to_string(), k.to_string(), one_tc_nk(n, k)?.to_string()]);
                }
            }
            t
        }
        TableName::Theta => {
            positive(r)?;
            let a = a_seq(r.hi);
            rows(
                &["n", "theta"],
                r.iter().map(|n| vec![n.to_string(), format!("{:.12}", theta_ratio(n, &a[n - 1]))]),
            )
        }
    };
    ctx.emit(&table, out)?;
    Ok(Status::Pass)
}

fn positive(r: Span) -> Result<()> {
    if r.lo == 0 {
        bail!("this table starts at n = 1");
    }
    Ok(())
}

fn rows(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Table {
    let mut t = Table::new(header);
    for row in rows {
        t.push(row);
    }
    t
}

fn b(ctx: &Ctx, r: Span) -> Result<Table> {
    positive(r)?;
    let b = match &ctx.cache_dir {
        Some(dir) => b_table_cached(dir, r.hi)?,
        None => b_table(r.hi),
    };
    let mut t = Table::new(&["n", "m", "b"]);
    for n in r.iter() {
        for m in 1..=n {
            t.push(vec![n.to_string(), m.to_string(), b.get(n, m).to_string()]);
        }
    }
    Ok(t)
}

/// Non-zero entries of the rows in range.
fn rational(table: &RationalTable, r: Span) -> Table {
    let mut t = Table::new(&["n", "m", "value"]);
    for n in r.iter().filter(|&n| n >= table.first_row()) {
        for (m, v) in table.row(n).iter().enumerate() {
            if *v != 0 {
                t.push(vec![n.to_string(), m.to_string(), v.to_string()]);
            }
        }
    }
    t
}

/// `p_{l,m,2n}` with `2n` the top of the range, rows `l` in range.
fn p(r: Span) -> Result<Table> {
    if r.hi < 2 || r.hi % 2 == 1 {
        bail!("the top of the range is 2n and must be even and at least 2, got {}", r.hi);
    }
    let p = p_table(r.hi / 2)?;
    let mut t = rational(p.rows(), r);
    t.header = vec!["l".into(), "m".into(), "p".into()];
    Ok(t)
}

fn hat(ctx: &Ctx, r: Span) -> Result<Table> {
    positive(r)?;
    let limit = if ctx.allow_long { crate::NETWORK_LIMIT_LONG } else { crate::NETWORK_LIMIT };
    let top = r.iter().map(|n| *hat_tc_range(n).end()).max().unwrap_or(1).min(limit);
    let counts = TcTable::from_enumeration(top, &ctx.enumerate_config())?;
    let mut t = Table::new(&["N", "hat_tc"]);
    for big_n in r.iter() {
        match hat_tc(big_n, &counts) {
            Ok(v) => t.push(vec![big_n.to_string(), v.to_string()]),
            Err(Error::MissingCount { .. }) => break,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use crate::testing::*;

    #[test]
    fn small_tables() {
        assert_eq!(stdout_of(&["export", "a", "--range", "1..3"]), "n,a_n\n1,1\n2,7\n3,106\n");
        assert_eq!(
            stdout_of(&["export", "b", "--range", "1..2"]),
            "n,m,b\n1,1,1\n2,1,3\n2,2,4\n"
        );
        assert_eq!(
            stdout_of(&["export", "hat-tc", "--range", "1..6"]),
            "N,hat_tc\n1,1\n2,0\n3,3\n4,0\n5,180\n6,0\n"
        );
        assert_eq!(
            stdout_of(&["export", "one-tc", "--range", "2"]),
            "n,k,one_tc\n2,0,1\n2,1,2\n"
        );
    }

    #[test]
    fn rational_tables() {
        let d = stdout_of(&["export", "d", "--range", "2..3"]);
        assert_eq!(d, "n,m,value\n2,0,1/3\n3,1,1/6\n");
        let p = stdout_of(&["export", "p", "--range", "2..4"]);
        assert!(p.starts_with("l,m,p\n"), "{p}");
        let dh = stdout_of(&["export", "dhat", "--range", "2..3"]);
        assert!(dh.starts_with("n,m,value\n2,0,"), "{dh}");
        assert!(run_args(&["export", "p", "--range", "1..3"]).2.is_err());
    }

    #[test]
    fn hat_tc_stops_at_missing_counts() {
        let out = stdout_of(&["export", "hat-tc", "--range", "1..40"]);
        assert_eq!(out.lines().last().unwrap().split(',').next(), Some("8"));
    }

    #[test]
    fn cached_b_table_matches() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().to_str().unwrap();
        let plain = stdout_of(&["export", "b", "--range", "1..30"]);
        let first = stdout_of(&["--cache-dir", path, "export", "b", "--range", "1..30"]);
        let second = stdout_of(&["--cache-dir", path, "export", "b", "--range", "1..30"]);
        assert_eq!(plain, first);
        assert_eq!(first, second);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
