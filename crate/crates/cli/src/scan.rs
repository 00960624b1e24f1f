//! One certificate inequality over the `(n, m)` grid, cell by cell.

use std::io::Write;

use anyhow::Result;
use treechild::asymptotics::certificates::CSV_HEADER;
use treechild::asymptotics::{scan, Certifier, Side};

use crate::args::{Format, ScanArgs, SideArg};
use crate::report::Table;
use crate::{Ctx, Status};

pub(crate) fn run(ctx: &Ctx, a: &ScanArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<Status> {
    let side = match a.side {
        SideArg::Lb => Side::Lower,
        SideArg::Ub => Side::Upper,
    };
    let params = ctx.certificate_params(a.n_min, a.n_max);
    params.validate()?;
    let cert = Certifier::new(ctx.digits)?;

    // CSV streams as cells are decided; the other formats need every row.
    let streaming = ctx.format == Format::Csv;
    let header: Vec<&str> = CSV_HEADER.split(',').collect();
    let mut table = Table::new(&header);
    let mut io_error = None;
    if streaming {
        writeln!(out, "{CSV_HEADER}")?;
    }
    let report = scan(&cert, side, &params, ctx.strategy, |cell| {
        let row = cell.csv_row();
        if streaming {
            if io_error.is_none() {
                io_error = writeln!(out, "{row}").err();
            }
        } else {
            table.push(row.split(',').map(str::to_string).collect());
        }
    })?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    if !streaming {
        ctx.emit(&table, out)?;
    }

    let onset = report.threshold.map_or("none".to_string(), |t| t.to_string());
    writeln!(
        log,
        "{side} over n = {}..{} at {} digits: {} cells, {} hold, {} fail, {} inconclusive, {} bumped; holds from n = {onset}",
        report.n_min,
        report.n_max,
        report.digits,
        report.cells,
        report.holds,
        report.fails.len(),
        report.inconclusive.len(),
        report.bumped,
    )?;
    Ok(if !report.fails.is_empty() {
        Status::Fail
    } else if !report.inconclusive.is_empty() {
        Status::Inconclusive
    } else {
        Status::Pass
    })
}
