//! Main-term logarithms, alongside the exact values where they are cheap.

use std::io::Write;

use anyhow::{bail, Result};
use treechild::asymptotics::{airy_root_a1, main_term_log_an, main_term_log_tc};
use treechild::closed_forms::{
    hat_tc_csv, hat_tc_range, one_hat_tc, one_hat_tc_main_term_log, one_tc_csv, ratio_to_main, TcTable,
    HAT_TC_CSV_HEADER, ONE_TC_CSV_HEADER,
};
use treechild::recurrences::a_seq;

use crate::args::{AsymptoteArgs, Formula, Span};
use crate::count::tree_child_counts;
use crate::report::Table;
use crate::{Ctx, Status};

pub(crate) fn run(ctx: &Ctx, a: &AsymptoteArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<Status> {
    if a.step == 0 {
        bail!("--step must be positive");
    }
    let ns: Vec<usize> = a.range.iter().step_by(a.step).collect();
    let table = match a.formula {
        Formula::An => an(a.range, &ns)?,
        Formula::Tc => tc(ctx, &ns, log)?,
        Formula::OneTc => from_csv(ONE_TC_CSV_HEADER, one_tc_csv(&nonzero(&ns)?)?),
        Formula::OneHatTc => one_hat(&odd(&ns)?)?,
        Formula::HatTc => hat(ctx, &odd(&ns)?)?,
        Formula::A1 => a1(ctx, a.digits)?,
    };
    ctx.emit(&table, out)?;
    Ok(Status::Pass)
}

fn nonzero(ns: &[usize]) -> Result<Vec<usize>> {
    if ns.first() == Some(&0) {
        bail!("main terms start at n = 1");
    }
    Ok(ns.to_vec())
}

/// Node-labeled counts vanish for even `N`, so only odd `N` are listed.
fn odd(ns: &[usize]) -> Result<Vec<usize>> {
    let odd: Vec<usize> = ns.iter().copied().filter(|n| n % 2 == 1).collect();
    if odd.is_empty() {
        bail!("the range holds no odd N");
    }
    Ok(odd)
}

fn from_csv(header: &str, rows: Vec<String>) -> Table {
    let header: Vec<&str> = header.split(',').collect();
    let mut t = Table::new(&header);
    for row in rows {
        t.push(row.split(',').map(str::to_string).collect());
    }
    t
}

fn an(range: Span, ns: &[usize]) -> Result<Table> {
    let ns = nonzero(ns)?;
    let a = a_seq(range.hi);
    let mut t = Table::new(&["n", "log_main", "ratio"]);
    for &n in &ns {
        let log_main = main_term_log_an(n);
        let ratio = ratio_to_main(&a[n - 1], log_main);
        t.push(vec![n.to_string(), format!("{log_main:.12}"), format!("{ratio:.12}")]);
    }
    Ok(t)
}

/// Exact `TC_n` is known only by enumeration, so the ratio column is empty
/// past the enumeration limit.
fn tc(ctx: &Ctx, ns: &[usize], log: &mut dyn Write) -> Result<Table> {
    let ns = nonzero(ns)?;
    let limit = if ctx.allow_long { crate::NETWORK_LIMIT_LONG } else { crate::NETWORK_LIMIT };
    let mut t = Table::new(&["n", "log_main", "ratio"]);
    for &n in &ns {
        let log_main = main_term_log_tc(n);
        let ratio = if n <= limit {
            let exact = tree_child_counts(ctx, n, log)?.total;
            format!("{:.12}", ratio_to_main(&exact, log_main))
        } else {
            String::new()
        };
        t.push(vec![n.to_string(), format!("{log_main:.12}"), ratio]);
    }
    Ok(t)
}

fn one_hat(ns: &[usize]) -> Result<Table> {
    let mut t = Table::new(&["N", "one_hat_tc", "log_main", "ratio"]);
    for &n in ns {
        let exact = one_hat_tc(n)?;
        let log_main = one_hat_tc_main_term_log(n);
        let ratio = ratio_to_main(&exact, log_main);
        t.push(vec![n.to_string(), exact.to_string(), format!("{log_main:.12}"), format!("{ratio:.12}")]);
    }
    Ok(t)
}

/// Only `N` whose summation range stays within the enumeration limit get
/// an exact value.
fn hat(ctx: &Ctx, ns: &[usize]) -> Result<Table> {
    let limit = if ctx.allow_long { crate::NETWORK_LIMIT_LONG } else { crate::NETWORK_LIMIT };
    let table = if ns.iter().any(|&n| *hat_tc_range(n).start() <= limit) {
        let top = ns.iter().map(|&n| *hat_tc_range(n).end()).max().unwrap_or(1);
        TcTable::from_enumeration(top.min(limit), &ctx.enumerate_config())?
    } else {
        TcTable::new()
    };
    Ok(from_csv(HAT_TC_CSV_HEADER, hat_tc_csv(ns, &table)?))
}

fn a1(ctx: &Ctx, digits: u32) -> Result<Table> {
    if digits == 0 || digits + 5 > ctx.digits {
        bail!("--digits must lie in 1..={} at --precision {}", ctx.digits.saturating_sub(5), ctx.digits);
    }
    let root = airy_root_a1(ctx.digits)?;
    let mid = root.mid();
    let value = format!("{:.*}", digits as usize, mid);
    let width = root.width().to_f64();
    let mut t = Table::new(&["a1", "enclosure_width"]);
    t.push(vec![value, format!("{width:.3e}")]);
    Ok(t)
}
