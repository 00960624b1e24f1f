//! Rigorous enclosures of the Airy function `Ai`, its derivative and its
//! first zero `a_1`.
//!
//! Moderate arguments use the Maclaurin series `Ai = c1 f - c2 g` summed in
//! interval arithmetic with extra working bits to absorb cancellation. Large
//! positive arguments use the exponentially scaled asymptotic expansion,
//! whose remainder is bounded by the first omitted term.

use rug::float::{Constant, Round};
use rug::Float;

use super::interval::{down, up, Interval};
use crate::{Error, Result};

/// Smallest supported target precision in decimal digits.
pub const MIN_DIGITS: u32 = 15;

/// Upper limit on working precision before giving up.
const MAX_WORKING_BITS: u32 = 1 << 15;

/// Bits per decimal digit.
const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

pub(crate) fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * BITS_PER_DIGIT).ceil() as u32 + 16
}

/// Precomputed constants for one target precision.
#[derive(Clone, Debug)]
pub struct AiryContext {
    digits: u32,
    prec: u32,
    c1: Interval,
    c2: Interval,
    sqrt_pi: Interval,
    a1: Interval,
}

impl AiryContext {
    /// Context targeting `digits` significant decimal digits.
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::OutOfRange(format!("need at least {MIN_DIGITS} digits, got {digits}")));
        }
        let prec = digits_to_bits(digits);
        // The series is used while zeta < (prec + 40) ln 2 / 2, so its
        // working precision never exceeds about 2 prec + 80 bits.
        let wp = 2 * prec + 128;
        let gamma = |num: i64| {
            // Gamma is decreasing on (0, 1.46), so the ends swap.
            let x = Interval::ratio(wp, num, 3);
            Interval::new(down(wp, x.hi().gamma_ref()), up(wp, x.lo().gamma_ref()))
        };
        let three = Interval::from_int(wp, 3);
        let cbrt3 = three.cbrt();
        let c1 = cbrt3.square().mul(&gamma(2)).recip().expect("positive");
        let c2 = cbrt3.mul(&gamma(1)).recip().expect("positive");
        let sqrt_pi = Interval::new(
            down(wp, Float::with_val_round(wp, Constant::Pi, Round::Down).0.sqrt_ref()),
            up(wp, Float::with_val_round(wp, Constant::Pi, Round::Up).0.sqrt_ref()),
        );
        let mut ctx = AiryContext {
            digits,
            prec,
            c1,
            c2,
            sqrt_pi,
            a1: Interval::zero(prec),
        };
        ctx.a1 = ctx.certify_a1()?;
        Ok(ctx)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Target precision in bits.
    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Enclosure of the first (largest) zero of `Ai`.
    pub fn a1(&self) -> &Interval {
        &self.a1
    }

    pub fn ai(&self, x: &Float) -> Result<Interval> {
        self.point(x, false)
    }

    pub fn ai_prime(&self, x: &Float) -> Result<Interval> {
        self.point(x, true)
    }

    /// Enclosure of `Ai` over an interval argument.
    ///
    /// Uses monotonicity on `(a'_2, a'_1)` and on `(a'_1, inf)`, where
    /// `a'_1 = -1.0188...` and `a'_2 = -3.2482...` are the first zeros of
    /// `Ai'`; elsewhere falls back to the series in interval arithmetic.
    pub fn ai_interval(&self, x: &Interval) -> Result<Interval> {
        if x.is_point() {
            return self.ai(x.lo());
        }
        let (lo, hi) = (x.lo(), x.hi());
        if self.asymptotic_applies(lo) {
            return self.asymptotic(x, false);
        }
        if *lo >= -1.01 {
            let (a, b) = (self.ai(hi)?, self.ai(lo)?);
            return Ok(Interval::new(a.lo().clone(), b.hi().clone()));
        }
        if *lo >= -3.24 && *hi <= -1.02 {
            let (a, b) = (self.ai(lo)?, self.ai(hi)?);
            return Ok(Interval::new(a.lo().clone(), b.hi().clone()));
        }
        if *lo >= -3.24 && *hi <= 0 {
            // |Ai'| < 1 here, so the hull of the ends widened by the width
            // covers the interior maximum.
            let hull = self.ai(lo)?.hull(&self.ai(hi)?);
            return Ok(hull.widen(&x.width()));
        }
        self.maclaurin(x, false)
    }

    fn asymptotic_applies(&self, x: &Float) -> bool {
        *x > 0 && zeta_f64(x) > f64::from(self.prec + 40) * std::f64::consts::LN_2 / 2.0
    }

    fn point(&self, x: &Float, prime: bool) -> Result<Interval> {
        if !x.is_finite() {
            return Err(Error::OutOfRange(format!("Airy argument {x}")));
        }
        if self.asymptotic_applies(x) {
            return self.asymptotic(&Interval::point(x.clone()), prime);
        }
        let p = self.prec + 8;
        self.maclaurin(&Interval::point(Float::with_val(p.max(x.prec()), x)), prime)
    }

    /// `Ai` or `Ai'` from the Maclaurin series in interval arithmetic.
    fn maclaurin(&self, x: &Interval, prime: bool) -> Result<Interval> {
        let xm = x.mag().to_f64();
        let zeta = 2.0 / 3.0 * xm.powf(1.5);
        let growth = (zeta * std::f64::consts::LOG2_E).ceil() as u32;
        let wp = self.prec + 2 * growth + 40;
        if wp > MAX_WORKING_BITS {
            return Err(Error::PrecisionBudget(format!(
                "Airy series at |x| = {xm:.3e} needs {wp} bits"
            )));
        }
        // Absolute cut-off for the last kept term.
        let cutoff = Float::with_val(64, Float::i_exp(1, -((self.prec + growth + 24) as i32)));
        let x = x.with_prec(wp);
        let x3 = x.square().mul(&x);
        let x3mag = x3.mag().to_f64();

        // Term sequences: t_0 and the ratio denominators (a k + b)(c k + d).
        let (f0, fden, g0, gden): (Interval, Den, Interval, Den) = if prime {
            (x.square().div_int(2), (3, 0, 3, 2), Interval::from_int(wp, 1), (3, 1, 3, 3))
        } else {
            (Interval::from_int(wp, 1), (3, 2, 3, 3), x.clone(), (3, 3, 3, 4))
        };
        // f' starts at k = 1, every other series at k = 0.
        let fk0 = u64::from(prime);
        let f = sum_series(f0, fk0, fden, &x3, x3mag, &cutoff)?;
        let g = sum_series(g0, 0, gden, &x3, x3mag, &cutoff)?;
        let c1 = self.c1.with_prec(wp);
        let c2 = self.c2.with_prec(wp);
        Ok(c1.mul(&f).sub(&c2.mul(&g)).with_prec(self.prec))
    }

    /// Asymptotic expansion for large positive `x`.
    /// Valid for interval arguments: every ingredient is monotone in `x`
    /// and the remainder bound holds pointwise.
    fn asymptotic(&self, x: &Interval, prime: bool) -> Result<Interval> {
        let wp = self.prec + 32;
        let xi = x.with_prec(wp);
        let sx = xi.sqrt();
        let zeta = xi.mul(&sx).mul_int(2).div_int(3);
        let inv_zeta = zeta.recip().expect("positive");
        let quarter = sx.sqrt();
        let cutoff = Float::with_val(64, Float::i_exp(1, -((self.prec + 16) as i32)));

        // term_k = (-1)^k u_k zeta^-k (or v_k for the derivative)
        let mut u = Interval::from_int(wp, 1);
        let mut sum = Interval::from_int(wp, 1);
        let mut k: i64 = 1;
        loop {
            let num = (6 * k - 5) * (6 * k - 3) * (6 * k - 1);
            let den = (2 * k - 1) * 216 * k;
            let next_u = u.mul_int(num).div_int(den).mul(&inv_zeta).neg();
            let term = if prime {
                next_u.mul_int(6 * k + 1).div_int(6 * k - 1).neg()
            } else {
                next_u.clone()
            };
            if term.mag() < cutoff {
                // The first omitted term bounds the remainder.
                sum = sum.widen(&term.mag());
                break;
            }
            if next_u.mag() >= u.mag() {
                return Err(Error::PrecisionBudget(format!(
                    "asymptotic Airy series diverges before reaching precision at x = {}",
                    x.lo()
                )));
            }
            sum = sum.add(&term);
            u = next_u;
            k += 1;
        }
        let scale = zeta.neg().exp().div(&self.sqrt_pi.with_prec(wp).mul_int(2)).expect("positive");
        let value = if prime {
            scale.mul(&quarter).mul(&sum).neg()
        } else {
            scale.div(&quarter).expect("positive").mul(&sum)
        };
        Ok(value.with_prec(self.prec))
    }

    /// Newton iteration from a bisection start, then a sign-checked bracket.
    fn certify_a1(&self) -> Result<Interval> {
        let p = self.prec + 8;
        let mid_sign = |x: &Float| -> Result<bool> { Ok(self.ai(x)?.mid() > 0) };
        let (mut lo, mut hi) = (Float::with_val(p, -3), Float::with_val(p, -2));
        for _ in 0..12 {
            let m = Float::with_val(p, &lo + &hi) / 2;
            if mid_sign(&m)? {
                hi = m;
            } else {
                lo = m;
            }
        }
        let mut r = Float::with_val(p, &lo + &hi) / 2;
        for _ in 0..64 {
            let step = Float::with_val(p, self.ai(&r)?.mid() / self.ai_prime(&r)?.mid());
            r -= &step;
            if step.is_zero() || step.get_exp().is_some_and(|e| e < -(self.prec as i32) - 4) {
                break;
            }
        }
        // Ai is increasing through a_1.
        for shift in 6..40 {
            let delta = Float::with_val(p, Float::i_exp(1, -(self.prec as i32) + shift));
            let a = Float::with_val(p, &r - &delta);
            let b = Float::with_val(p, &r + &delta);
            if self.ai(&a)?.hi() < &0 && self.ai(&b)?.lo() > &0 {
                return Ok(Interval::new(a, b).with_prec(self.prec));
            }
        }
        Err(Error::PrecisionBudget("could not certify a bracket for a_1".into()))
    }
}

/// Ratio denominators `(a k + b)(c k + d)`.
type Den = (u64, u64, u64, u64);

/// Sums `t_k0 + t_{k0+1} + ...` with `t_{k+1} = t_k x^3 / den(k)`, adding a
/// geometric tail bound once the ratio stays below one half.
fn sum_series(
    first: Interval,
    k0: u64,
    (a, b, c, d): Den,
    x3: &Interval,
    x3mag: f64,
    cutoff: &Float,
) -> Result<Interval> {
    let mut term = first;
    let mut sum = term.clone();
    let mut k = k0;
    loop {
        let den = (a * k + b) * (c * k + d);
        term = term.mul(x3).div_int(den as i64);
        k += 1;
        let next_den = ((a * k + b) * (c * k + d)) as f64;
        if x3mag * 2.0 <= next_den && term.mag() < *cutoff {
            // All later ratios are below 1/2: the tail is at most 2 |term|.
            let r = Float::with_val(64, term.mag() * 2u32);
            return Ok(sum.widen(&r));
        }
        sum = sum.add(&term);
        if k > 1_000_000 {
            return Err(Error::PrecisionBudget("Airy series did not converge".into()));
        }
    }
}

fn zeta_f64(x: &Float) -> f64 {
    2.0 / 3.0 * x.to_f64().powf(1.5)
}

/// `Ai(x)` enclosed at `digits` decimal digits.
pub fn airy_ai(x: &Float, digits: u32) -> Result<Interval> {
    AiryContext::new(digits)?.ai(x)
}

/// `Ai'(x)` enclosed at `digits` decimal digits.
pub fn airy_ai_prime(x: &Float, digits: u32) -> Result<Interval> {
    AiryContext::new(digits)?.ai_prime(x)
}

/// Certified enclosure of `a_1 = -2.3381...`.
pub fn airy_root_a1(digits: u32) -> Result<Interval> {
    Ok(AiryContext::new(digits)?.a1().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> AiryContext {
        AiryContext::new(40).unwrap()
    }

    fn f(x: f64) -> Float {
        Float::with_val(200, x)
    }

    #[test]
    fn values_at_zero() {
        let c = ctx();
        let ai0 = c.ai(&f(0.0)).unwrap();
        let ai0p = c.ai_prime(&f(0.0)).unwrap();
        assert!((ai0.to_f64() - 0.355_028_053_887_817_2).abs() < 1e-15);
        assert!((ai0p.to_f64() + 0.258_819_403_792_806_8).abs() < 1e-15);
        assert!(ai0.width() < 1e-38);
    }

    #[test]
    fn first_zero() {
        let a1 = airy_root_a1(40).unwrap();
        let known = Float::parse("-2.338107410459767038489197252446735440638").unwrap();
        let known = Float::with_val(200, known);
        let err = Float::with_val(200, a1.mid() - &known).abs();
        assert!(err < 1e-38, "{a1}");
        assert!(a1.width() < 1e-35);
    }

    #[test]
    fn matches_mpfr_oracle() {
        let c = ctx();
        for &x in &[-3.1, -2.0, -1.015, -0.5, 0.25, 1.0, 3.7, 10.0, 19.0, 21.0, 35.0, 95.0] {
            let v = c.ai(&f(x)).unwrap();
            let oracle = Float::with_val(200, f(x).ai_ref());
            let rel = Float::with_val(200, (v.mid() - &oracle) / &oracle).abs().to_f64();
            assert!(rel < 1e-30, "x = {x}: {v} vs {oracle}");
            assert!(v.contains(&oracle) || rel < 1e-38, "x = {x}: {v} vs {oracle}");
        }
    }

    #[test]
    fn derivative_satisfies_airy_equation() {
        // (Ai'(x+h) - Ai'(x-h)) / 2h = x Ai(x) + O(h^2)
        let c = ctx();
        let h = 1e-6;
        for &x in &[-2.5, -0.3, 0.0, 1.5, 8.0, 25.0, 40.0] {
            let hi = c.ai_prime(&f(x + h)).unwrap().mid();
            let lo = c.ai_prime(&f(x - h)).unwrap().mid();
            let lhs = Float::with_val(200, hi - lo) / (2.0 * h);
            let ai = c.ai(&f(x)).unwrap().mid();
            let rhs = Float::with_val(200, &ai * x);
            let scale = ai.abs().max(&Float::with_val(200, rhs.abs_ref()));
            let resid = Float::with_val(200, (lhs - &rhs) / scale).abs().to_f64();
            assert!(resid < 1e-9 * (1.0 + x * x), "x = {x}: residual {resid}");
        }
    }

    #[test]
    fn ode_residual_below_target_precision() {
        // Second difference at h = 1e-20 has truncation error near 1e-41;
        // evaluating at 120 digits keeps the rounding part far below that.
        let digits = 40;
        let c = AiryContext::new(3 * digits).unwrap();
        let p = 512;
        let h = Float::with_val(p, Float::parse("1e-20").unwrap());
        let tol = Float::with_val(p, Float::parse(format!("1e-{}", digits - 2)).unwrap());
        for x in ["-3.0", "-2.338", "-1.5", "-0.25", "0", "0.75", "2.5", "6", "12", "19.5"] {
            let x = Float::with_val(p, Float::parse(x).unwrap());
            let at = |t: Float| c.ai(&t).unwrap().mid();
            let plus = at(Float::with_val(p, &x + &h));
            let minus = at(Float::with_val(p, &x - &h));
            let mid = at(x.clone());
            let second = Float::with_val(p, plus + minus - Float::with_val(p, &mid * 2u32)) / Float::with_val(p, h.square_ref());
            let resid = Float::with_val(p, second - Float::with_val(p, &mid * &x)).abs();
            assert!(resid < tol, "x = {x}: residual {resid}");
        }
        // Ai(a_1) = 0 and Ai'(a_1) != 0
        let a1 = c.a1().mid();
        assert!(c.ai(&a1).unwrap().mag() < 1e-100);
        assert!(c.ai_prime(&a1).unwrap().mig() > 0.7);
    }

    #[test]
    fn interval_arguments() {
        let c = ctx();
        for (lo, hi) in [(-3.0, -2.9), (-1.03, -1.0), (-0.7, -0.69), (4.0, 4.001), (50.0, 50.5)] {
            let x = Interval::new(f(lo), f(hi));
            let enc = c.ai_interval(&x).unwrap();
            for t in 0..=10 {
                let p = f(lo + (hi - lo) * f64::from(t) / 10.0);
                let v = c.ai(&p).unwrap();
                assert!(enc.lo() <= v.lo() && enc.hi() >= v.hi(), "{p} not in {enc}");
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let c = ctx();
        assert!(matches!(c.ai(&f(-5000.0)), Err(Error::PrecisionBudget(_))));
        assert!(matches!(AiryContext::new(14), Err(Error::OutOfRange(_))));
    }
}
