//! Named check suites. Each check yields a verdict and a one-line detail;
//! the run fails if any check fails.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use anyhow::{bail, Result};
use rug::{Integer, Rational};
use treechild::asymptotics::{
    airy_ai, airy_ai_prime, airy_root_a1, check_appendix_lemma, check_d_vs_dhat, d_table, p_table, scan,
    theta_report, Certifier, ScanReport, Side,
};
use treechild::closed_forms::{
    one_hat_tc, one_hat_tc_main_term_log, one_tc, one_tc_main_term_log, one_tc_nk, ratio_to_main,
};
use treechild::enumerate::{enumerate_one_component, enumerate_tree_child_with, enumerate_words_with};
use treechild::networks::canonical_code;
use treechild::recurrences::{a_n, a_seq, b_table, b_table_alt, check_ballot_bound, cmp_sqrt_e, factorial};
use treechild::words::{component_labeling, is_valid_word, network_to_word, word_to_network, Word};

use crate::args::{Suite, VerifyArgs};
use crate::count::tree_child_counts;
use crate::report::Table;
use crate::{Ctx, Status};

struct Check {
    name: &'static str,
    status: Status,
    detail: String,
}

fn check(name: &'static str, ok: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        status: Status::of(ok),
        detail: detail.into(),
    }
}

pub(crate) fn run(ctx: &Ctx, a: &VerifyArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<Status> {
    let checks = match a.suite {
        Suite::Bijection => bijection(ctx, a.n, log)?,
        Suite::Bounds => bounds(ctx, a.n_max.unwrap_or(1000), log)?,
        Suite::Certificates => certificates(ctx, a.n_min, a.n_max.unwrap_or(2000), log)?,
        Suite::Appendix => appendix(a.two_n)?,
        Suite::Laplace => laplace()?,
        Suite::Dhat => dhat(ctx, a.n_max.unwrap_or(150))?,
        Suite::Theta => theta(a.n_min, a.n_max.unwrap_or(1000))?,
        Suite::Airy => airy(ctx)?,
    };
    let suite = format!("{:?}", a.suite).to_lowercase();
    let mut t = Table::new(&["suite", "check", "verdict", "detail"]);
    let mut status = Status::Pass;
    for c in &checks {
        status = status.max(c.status);
        t.push(vec![suite.clone(), c.name.to_string(), c.status.label().to_string(), c.detail.clone()]);
    }
    ctx.emit(&t, out)?;
    writeln!(log, "{suite}: {}", status.label())?;
    Ok(status)
}

fn bijection(ctx: &Ctx, n: usize, log: &mut dyn Write) -> Result<Vec<Check>> {
    ctx.check_networks(n)?;
    if n > crate::NETWORK_LIMIT {
        writeln!(log, "enumerating maximal networks with {n} leaves")?;
    }
    let cfg = treechild::enumerate::EnumerateConfig {
        k_max: Some(n - 1),
        ..ctx.enumerate_config()
    };
    let mut classes: BTreeMap<Word, BTreeSet<Vec<u8>>> = BTreeMap::new();
    let (mut invalid, mut bad_round_trip) = (0usize, 0usize);
    enumerate_tree_child_with(n, &cfg, |k, net| {
        if k + 1 != n {
            return Ok(());
        }
        let word = network_to_word(net)?;
        if !is_valid_word(word.letters()) {
            invalid += 1;
        }
        let back = word_to_network(&word)?;
        if canonical_code(&back)? != canonical_code(&component_labeling(net)?)? {
            bad_round_trip += 1;
        }
        classes.entry(word).or_default().insert(canonical_code(net)?);
        Ok(())
    })?;
    let mut class = BTreeSet::new();
    let mut identity_failures = 0usize;
    enumerate_words_with(n - 1, &ctx.enumerate_config(), |w| {
        let ok = word_to_network(&w).and_then(|net| network_to_word(&net)).map(|back| back == w);
        if !matches!(ok, Ok(true)) {
            identity_failures += 1;
        }
        class.insert(w);
    })?;
    let labelings = factorial(n);
    let uneven = classes.values().filter(|codes| codes.len() != labelings).count();
    let onto = classes.keys().eq(class.iter());
    Ok(vec![
        check("words_valid", invalid == 0, format!("{invalid} invalid images")),
        check(
            "image_is_word_class",
            onto,
            format!("{} distinct words, |A_{}| = {}", classes.len(), n - 1, class.len()),
        ),
        check(
            "fibres_are_leaf_labelings",
            uneven == 0,
            format!("each word has {labelings} labeled preimages; {uneven} exceptions"),
        ),
        check(
            "network_word_network",
            bad_round_trip == 0,
            format!("{bad_round_trip} mismatches up to leaf labels"),
        ),
        check("word_network_word", identity_failures == 0, format!("{identity_failures} mismatches")),
    ])
}

fn bounds(ctx: &Ctx, n_max: usize, log: &mut dyn Write) -> Result<Vec<Check>> {
    if n_max < 1 {
        bail!("--n-max must be positive");
    }
    let mut checks = Vec::new();
    let ballot = check_ballot_bound(n_max);
    checks.push(check(
        "ballot_bound",
        ballot.holds(),
        format!("a_n <= 3^n n! C_n and entrywise, n <= {n_max}"),
    ));
    let small = n_max.min(200);
    checks.push(check(
        "b_table_two_routes",
        b_table(small) == b_table_alt(small),
        format!("n <= {small}"),
    ));
    let d = d_table(2 * small)?;
    let b = b_table(small);
    let a = a_seq(small);
    let mut scale = Integer::from(1);
    let mut chain_ok = true;
    for n in 1..=small {
        scale *= 3 * n as u64;
        let lhs = Rational::from(scale.clone()) * d.value(2 * n, 0);
        chain_ok &= lhs == b.get(n, n);
        if n >= 2 {
            chain_ok &= b.get(n, n) == Integer::from(&a[n - 2] * (3 * n - 2) as u64);
        }
    }
    checks.push(check(
        "transform_chain",
        chain_ok,
        format!("3^n n! d_(2n,0) = b_(n,n) = (3n-2) a_(n-1), n <= {small}"),
    ));

    let mut ident = true;
    let mut growth = true;
    let mut sandwich = true;
    let mut lemma = true;
    let mut one_comp = true;
    for n in 3..=4 {
        let counts = tree_child_counts(ctx, n, log)?;
        let tc = |k: usize| counts.count(k);
        ident &= tc(n - 1) == factorial(n) * a_n(n - 1) && tc(n - 1) == tc(n - 2) * 2u32;
        for k in 0..=n - 2 {
            growth &= tc(k) * (2 * (n - k - 1)) as u32 <= tc(k + 1);
        }
        sandwich &= Rational::from((tc(n - 1) * 25u32, 16)) <= counts.total
            && cmp_sqrt_e(&counts.total, &tc(n - 1)) == Ordering::Less;
        lemma &= tc(n - 3) * 8u32 >= tc(n - 2);
        let oc = enumerate_one_component(n, &ctx.enumerate_config())?;
        for k in 0..n {
            one_comp &= oc.count(k) == one_tc_nk(n, k)?;
        }
        one_comp &= one_tc(n)? <= counts.total;
    }
    checks.push(check("max_level_identities", ident, "TC_(n,n-1) = n! a_(n-1) = 2 TC_(n,n-2), n = 3, 4"));
    checks.push(check("level_growth", growth, "2(n-k-1) TC_(n,k) <= TC_(n,k+1), n = 3, 4"));
    checks.push(check("theta_sandwich", sandwich, "(25/16) TC_(n,n-1) <= TC_n < sqrt(e) TC_(n,n-1), n = 3, 4"));
    checks.push(check("third_level_bound", lemma, "8 TC_(n,n-3) >= TC_(n,n-2), n = 3, 4"));
    checks.push(check("one_component_closed_form", one_comp, "1-TC_(n,k) against enumeration, n = 3, 4"));
    Ok(checks)
}

fn scan_check(name: &'static str, r: &ScanReport) -> Check {
    let status = if !r.fails.is_empty() {
        Status::Fail
    } else if !r.inconclusive.is_empty() {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    let onset = r.threshold.map_or("none".to_string(), |t| t.to_string());
    Check {
        name,
        status,
        detail: format!(
            "n = {}..{}: {} cells, {} fail, {} inconclusive, {} bumped; holds from n = {onset}",
            r.n_min,
            r.n_max,
            r.cells,
            r.fails.len(),
            r.inconclusive.len(),
            r.bumped
        ),
    }
}

fn certificates(ctx: &Ctx, n_min: usize, n_max: usize, log: &mut dyn Write) -> Result<Vec<Check>> {
    let params = ctx.certificate_params(n_min, n_max);
    params.validate()?;
    let cert = Certifier::new(ctx.digits)?;
    let mut checks = Vec::new();
    for (name, side) in [("lower_certificate", Side::Lower), ("upper_certificate", Side::Upper)] {
        writeln!(log, "scanning {side} over n = {n_min}..{n_max}")?;
        let report = scan(&cert, side, &params, ctx.strategy, |_| {})?;
        checks.push(scan_check(name, &report));
    }
    Ok(checks)
}

fn appendix(two_n: usize) -> Result<Vec<Check>> {
    if two_n < 2 || two_n % 2 == 1 {
        bail!("--two-n must be even and at least 2, got {two_n}");
    }
    let d = d_table(two_n)?;
    let mut origin_ok = true;
    let mut lemma_ok = true;
    let mut comparisons = 0;
    let mut first_violation = None;
    for n in 1..=two_n / 2 {
        origin_ok &= *p_table(n)?.origin() == d.value(2 * n, 0);
        let r = check_appendix_lemma(n)?;
        comparisons += r.comparisons;
        if let (Some(v), None) = (r.violation, first_violation) {
            first_violation = Some((2 * n, v));
        }
        lemma_ok &= r.holds();
    }
    let lemma_detail = match first_violation {
        None => format!("{comparisons} exact comparisons, 2n <= {two_n}"),
        Some((t, (l, j, k))) => format!("violated at 2n = {t}, l = {l}, j = {j}, k = {k}"),
    };
    Ok(vec![
        check("path_sum_equals_d", origin_ok, format!("p_(0,0,2n) = d_(2n,0), 2n <= {two_n}")),
        check("monotone_ratio_lemma", lemma_ok, lemma_detail),
    ])
}

/// `|ratio - 1|` strictly decreasing and the last ratio within 10%.
fn laplace_trend(points: &[(usize, f64)]) -> bool {
    let dev: Vec<f64> = points.iter().map(|p| (p.1 - 1.0).abs()).collect();
    dev.windows(2).all(|w| w[1] < w[0]) && dev.last().is_some_and(|&d| d < 0.1)
}

fn fmt_points(points: &[(usize, f64)]) -> String {
    points.iter().map(|(n, r)| format!("{n}: {r:.6}")).collect::<Vec<_>>().join("; ")
}

fn laplace() -> Result<Vec<Check>> {
    let mut one = Vec::new();
    for n in [500, 1000, 2000] {
        one.push((n, ratio_to_main(&one_tc(n)?, one_tc_main_term_log(n))));
    }
    let mut hat = Vec::new();
    for big_n in [501, 1001, 2001] {
        hat.push((big_n, ratio_to_main(&one_hat_tc(big_n)?, one_hat_tc_main_term_log(big_n))));
    }
    Ok(vec![
        check("one_tc_ratio", laplace_trend(&one), fmt_points(&one)),
        check("one_hat_tc_ratio", laplace_trend(&hat), fmt_points(&hat)),
    ])
}

fn dhat(ctx: &Ctx, n_max: usize) -> Result<Vec<Check>> {
    let r = check_d_vs_dhat(1, n_max, &ctx.eps)?;
    let worst = r.rows.iter().map(|row| row.ratio()).fold(0.0, f64::max);
    let onset = r.onset.map_or("none".to_string(), |n| n.to_string());
    Ok(vec![
        check(
            "d_at_most_twice_dhat",
            r.all_hold(),
            format!("n = 1..{n_max}, eps = {}: holds from n = {onset}, max d/d^ = {worst:.9}", ctx.eps),
        ),
        check("dhat_below_d", r.rows.iter().all(|row| row.below), "d^_(2n,0) <= d_(2n,0)"),
    ])
}

fn theta(n_lo: usize, n_hi: usize) -> Result<Vec<Check>> {
    let r = theta_report(n_lo, n_hi)?;
    Ok(vec![
        check(
            "window",
            r.window <= 1.5,
            format!("n = {n_lo}..{n_hi}: ratio in [{:.6}, {:.6}], max/min = {:.6}", r.min, r.max, r.window),
        ),
        check(
            "top_decade_oscillation",
            r.top_oscillation <= 1.2,
            format!("max/min on the last tenth = {:.6}", r.top_oscillation),
        ),
    ])
}

fn airy(ctx: &Ctx) -> Result<Vec<Check>> {
    let a1 = airy_root_a1(ctx.digits)?;
    let mid = a1.mid();
    let value = airy_ai(&mid, ctx.digits)?;
    let slope = airy_ai_prime(&mid, ctx.digits)?;
    let printed = -2.338_107_410;
    let err = (mid.to_f64() - printed).abs();
    Ok(vec![
        check("a1_printed_digits", err < 1e-9, format!("a1 = {}", mid.to_string_radix(10, Some(20)))),
        check("ai_vanishes", value.mag().to_f64() < 1e-9, format!("|Ai(a1)| <= {:.3e}", value.mag().to_f64())),
        check("ai_prime_nonzero", !slope.contains_zero(), format!("Ai'(a1) = {:.12}", slope.mid().to_f64())),
    ])
}

#[cfg(test)]
mod tests {
    use crate::testing::*;
    use crate::Status;

    fn verdicts(out: &str) -> Vec<String> {
        out.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().to_string()).collect()
    }

    #[test]
    fn bijection_suite_passes() {
        let out = stdout_of(&["verify", "bijection", "--n", "4"]);
        assert_eq!(verdicts(&out), ["PASS"; 5]);
        assert!(out.contains("106 distinct words"));
    }

    #[test]
    fn exact_suites_pass() {
        for suite in [
            &["verify", "appendix", "--two-n", "40"][..],
            &["verify", "bounds", "--n-max", "300"],
            &["verify", "laplace"],
            &["verify", "dhat"],
            &["verify", "theta"],
            &["verify", "airy"],
        ] {
            let out = stdout_of(suite);
            assert!(verdicts(&out).iter().all(|v| v == "PASS"), "{out}");
        }
    }

    #[test]
    fn certificate_failures_exit_nonzero() {
        let (out, log, status) = run_args(&["verify", "certificates", "--n-min", "100", "--n-max", "110"]);
        assert_eq!(status.unwrap(), Status::Fail);
        assert!(out.contains("FAIL"), "{out}");
        assert!(log.contains("certificates: FAIL"));
        let (out, _, status) = run_args(&["verify", "certificates", "--n-min", "480", "--n-max", "490"]);
        assert_eq!(status.unwrap(), Status::Pass, "{out}");
    }

    #[test]
    fn bad_suite_arguments_are_errors() {
        let (_, _, status) = run_args(&["verify", "appendix", "--two-n", "7"]);
        assert!(status.is_err());
        let (_, _, status) = run_args(&["verify", "bijection", "--n", "5"]);
        assert!(status.is_err());
    }
}
