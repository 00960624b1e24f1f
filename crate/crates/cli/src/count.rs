use std::io::Write;

use anyhow::{bail, Result};
use rug::Integer;
use treechild::closed_forms::{one_tc, one_tc_nk};
use treechild::enumerate::{
    enumerate_one_component, enumerate_tree_child_with, enumerate_words, CountByReticulation,
};
use treechild::recurrences::{a_seq, tc_max_retic};

use crate::args::{CountArgs, Span};
use crate::report::Table;
use crate::{Ctx, Status};

pub(crate) fn run(ctx: &Ctx, a: &CountArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<Status> {
    let table = if let Some(span) = a.networks {
        if a.brute {
            bail!("--networks is already a brute-force count; --brute applies to the other kinds");
        }
        networks(ctx, span, a.by_k, log)?
    } else if let Some(span) = a.words {
        words(ctx, span, a.brute)?
    } else if let Some(span) = a.one_component {
        one_component(ctx, span, a.by_k, a.brute)?
    } else if let Some(span) = a.max_retic {
        max_retic(ctx, span, a.brute, log)?
    } else {
        unreachable!("clap requires one count kind")
    };
    ctx.emit(&table, out)?;
    Ok(Status::Pass)
}

/// Exhaustive `TC_{n,k}`, with per-level progress for the long runs.
pub(crate) fn tree_child_counts(ctx: &Ctx, n: usize, log: &mut dyn Write) -> Result<CountByReticulation> {
    ctx.check_networks(n)?;
    let noisy = n > crate::NETWORK_LIMIT;
    if noisy {
        writeln!(log, "enumerating tree-child networks with {n} leaves")?;
    }
    let mut level = 0;
    let mut seen = 0u64;
    let counts = enumerate_tree_child_with(n, &ctx.enumerate_config(), |k, _| {
        if noisy && k != level {
            let _ = writeln!(log, "  k = {level}: {seen} networks");
            level = k;
            seen = 0;
        }
        seen += 1;
        Ok(())
    })?;
    if noisy {
        writeln!(log, "  k = {level}: {seen} networks")?;
    }
    Ok(counts)
}

fn networks(ctx: &Ctx, span: Span, by_k: bool, log: &mut dyn Write) -> Result<Table> {
    let mut t = if by_k {
        Table::new(&["n", "k", "tc"])
    } else {
        Table::new(&["n", "tc"])
    };
    for n in span.iter() {
        let counts = tree_child_counts(ctx, n, log)?;
        if by_k {
            for k in 0..n {
                t.push(vec![n.to_string(), k.to_string(), counts.count(k).to_string()]);
            }
        } else {
            t.push(vec![n.to_string(), counts.total.to_string()]);
        }
    }
    Ok(t)
}

fn words(ctx: &Ctx, span: Span, brute: bool) -> Result<Table> {
    if span.lo == 0 {
        bail!("words are counted from n = 1");
    }
    let a = a_seq(span.hi);
    let mut t = if brute {
        Table::new(&["n", "a_n", "enumerated"])
    } else {
        Table::new(&["n", "a_n"])
    };
    for n in span.iter() {
        let mut row = vec![n.to_string(), a[n - 1].to_string()];
        if brute {
            ctx.check_words(n)?;
            let cfg = treechild::enumerate::EnumerateConfig {
                max_word_letters: crate::WORD_LIMIT_LONG,
                ..ctx.enumerate_config()
            };
            row.push(enumerate_words(n, &cfg)?.to_string());
        }
        t.push(row);
    }
    Ok(t)
}

fn one_component(ctx: &Ctx, span: Span, by_k: bool, brute: bool) -> Result<Table> {
    if span.lo == 0 {
        bail!("networks need at least one leaf");
    }
    let mut header = vec!["n"];
    if by_k {
        header.push("k");
    }
    header.push("one_tc");
    if brute {
        header.push("enumerated");
    }
    let mut t = Table::new(&header);
    for n in span.iter() {
        let oracle = if brute {
            ctx.check_networks(n)?;
            Some(enumerate_one_component(n, &ctx.enumerate_config())?)
        } else {
            None
        };
        if by_k {
            for k in 0..n {
                let mut row = vec![n.to_string(), k.to_string(), one_tc_nk(n, k)?.to_string()];
                row.extend(oracle.as_ref().map(|o| o.count(k).to_string()));
                t.push(row);
            }
        } else {
            let mut row = vec![n.to_string(), one_tc(n)?.to_string()];
            row.extend(oracle.as_ref().map(|o| o.total.to_string()));
            t.push(row);
        }
    }
    Ok(t)
}

fn max_retic(ctx: &Ctx, span: Span, brute: bool, log: &mut dyn Write) -> Result<Table> {
    let mut t = if brute {
        Table::new(&["n", "tc_max", "enumerated"])
    } else {
        Table::new(&["n", "tc_max"])
    };
    for n in span.iter() {
        let mut row = vec![n.to_string(), tc_max_retic(n)?.to_string()];
        if brute {
            let counts = tree_child_counts(ctx, n, log)?;
            let top: Integer = counts.count(n - 1);
            row.push(top.to_string());
        }
        t.push(row);
    }
    Ok(t)
}
