//! Certificate inequalities: verdicts against an independent route built
//! on MPFR's own Ai, and scans past the onset thresholds.

use rug::{Float, Rational};
use treechild::asymptotics::{scan, CertificateParams, Certifier, Side, Verdict};
use treechild::exec::Strategy;

const P: u32 = 320;

/// Plain high-precision evaluation, no interval bookkeeping.
struct Direct {
    a1: Float,
    c: Float,
    eta: Float,
}

impl Direct {
    fn new() -> Self {
        let (mut lo, mut hi) = (Float::with_val(P, -3), Float::with_val(P, -2));
        for _ in 0..(P - 8) {
            let mid = Float::with_val(P, &lo + &hi) / 2u32;
            // Ai < 0 left of a_1 on this bracket.
            if Float::with_val(P, mid.ai_ref()) < 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Direct {
            a1: lo,
            c: Float::with_val(P, Rational::from((2, 3))).cbrt(),
            eta: Float::with_val(P, Rational::from((1, 17))),
        }
    }

    fn x(&self, side: Side, n: usize, m: i64) -> Float {
        if m < 0 {
            return Float::new(P);
        }
        let nf = Float::with_val(P, n);
        let mf = Float::with_val(P, m);
        let arg = Float::with_val(P, &self.a1 + Float::with_val(P, &self.c * (m + 1)) / Float::with_val(P, nf.cbrt_ref()));
        let mut poly = Float::with_val(P, 1) - Float::with_val(P, mf.square_ref()) / (3 * n as u64)
            - Float::with_val(P, &mf * 25u32) / (18 * n as u64);
        if side == Side::Upper {
            let m4 = Float::with_val(P, mf.square_ref()).square();
            poly += m4 * &self.eta / Float::with_val(P, nf.square_ref());
        }
        poly * arg.ai()
    }

    fn s(&self, side: Side, n: usize) -> Float {
        let nf = Float::with_val(P, n);
        let lead = Float::with_val(P, &self.c * &self.c) * &self.a1 / Float::with_val(P, nf.cbrt_ref()).square();
        let tail = Float::with_val(P, nf.cbrt_ref()).sqrt() * &nf;
        let tail = Float::with_val(P, tail.recip_ref());
        let base = lead + 2u32 - Float::with_val(P, Rational::from((2, 3 * n as u64)));
        match side {
            Side::Lower => base - tail,
            Side::Upper => base + tail,
        }
    }

    /// Margin in the direction the certificate requires.
    fn margin(&self, side: Side, n: usize, m: usize) -> Float {
        let (ni, mi) = (n as i64, m as i64);
        let w1 = Float::with_val(P, Rational::from((3 * ni + mi - 4, 3 * ni + mi - 6)));
        let w2 = Float::with_val(P, Rational::from((3 * ni + mi - 4, 3 * ni + 3 * mi)));
        let lhs = self.s(side, n) * self.x(side, n, mi);
        let rhs = w1 * self.x(side, n - 1, mi + 1) + w2 * self.x(side, n - 1, mi - 1);
        match side {
            Side::Lower => rhs - lhs,
            Side::Upper => lhs - rhs,
        }
    }
}

fn sample_rows() -> Vec<usize> {
    vec![100, 101, 160, 271, 272, 479, 480, 777, 1500, 2000]
}

#[test]
fn verdicts_match_the_direct_route() {
    let cert = Certifier::new(40).unwrap();
    let direct = Direct::new();
    let params = CertificateParams::default();
    let eta = params.eta.clone();
    let mut seen = [0usize; 2];
    for side in [Side::Lower, Side::Upper] {
        for n in sample_rows() {
            let len = params.row_len(side, n);
            let ms: Vec<usize> = (0..len).filter(|m| m % 11 == 0 || *m + 1 == len || *m < 20).collect();
            for m in ms {
                let cell = match side {
                    Side::Lower => cert.check_lb_inequality(n, m).unwrap(),
                    Side::Upper => cert.check_ub_inequality(n, m, &eta).unwrap(),
                };
                let margin = direct.margin(side, n, m);
                let scale = cell.lhs.mag().to_f64().abs().max(1e-300);
                let rel = margin.to_f64() / scale;
                if rel.abs() > 1e-25 {
                    let expected = if margin > 0 { Verdict::Holds } else { Verdict::Fails };
                    assert_eq!(cell.verdict, expected, "{side} n = {n}, m = {m}");
                    seen[usize::from(expected == Verdict::Fails)] += 1;
                }
                let diff = Float::with_val(P, cell.margin.mid() - &margin).abs().to_f64() / scale;
                assert!(
                    cell.margin.contains(&margin) || diff < 1e-30,
                    "{side} n = {n}, m = {m}: {} vs {} (lhs {})",
                    cell.margin, margin.to_f64(), cell.lhs
                );
            }
        }
    }
    // Both verdicts occur on the sampled rows.
    assert!(seen[0] > 100 && seen[1] > 10, "{seen:?}");
}

fn scan_range(side: Side, n_min: usize, n_max: usize) -> treechild::asymptotics::ScanReport {
    let params = CertificateParams {
        n_min,
        n_max,
        ..CertificateParams::default()
    };
    let cert = Certifier::new(params.digits).unwrap();
    scan(&cert, side, &params, Strategy::Parallel, |_| {}).unwrap()
}

#[test]
fn lower_certificate_holds_from_480() {
    let report = scan_range(Side::Lower, 480, 2000);
    assert!(report.passed(), "fails at {:?}", report.fails.first());
    assert_eq!(report.threshold, Some(480));
    // Row 479 still has a failing cell.
    let below = scan_range(Side::Lower, 479, 479);
    assert!(!below.fails.is_empty());
}

#[test]
fn upper_certificate_holds_from_272() {
    for (lo, hi) in [(272, 420), (1960, 2000)] {
        let report = scan_range(Side::Upper, lo, hi);
        assert!(report.passed(), "fails at {:?}", report.fails.first());
    }
    let below = scan_range(Side::Upper, 271, 271);
    assert!(!below.fails.is_empty());
}

#[test]
fn strategies_give_identical_scans() {
    let params = CertificateParams {
        n_min: 300,
        n_max: 340,
        ..CertificateParams::default()
    };
    let cert = Certifier::new(params.digits).unwrap();
    let mut rows = [Vec::new(), Vec::new()];
    for (i, strategy) in [Strategy::Sequential, Strategy::Parallel].into_iter().enumerate() {
        scan(&cert, Side::Upper, &params, strategy, |c| rows[i].push(c.csv_row())).unwrap();
    }
    assert_eq!(rows[0], rows[1]);
}
