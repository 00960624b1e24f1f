//! Closed intervals with MPFR endpoints and outward (directed) rounding.
//!
//! Every operation returns an interval containing all results of applying
//! the exact operation to points of the operands.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::AssignRound;
use rug::{Float, Integer, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

pub(crate) fn down<T>(prec: u32, value: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, value, Round::Down).0
}

pub(crate) fn up<T>(prec: u32, value: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, value, Round::Up).0
}

impl Interval {
    /// `[lo, hi]`; panics when `lo > hi` or either end is NaN.
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo} > {hi}");
        Interval { lo, hi }
    }

    pub fn point(x: Float) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Interval::point(Float::new(prec))
    }

    pub fn from_int(prec: u32, x: i64) -> Self {
        Interval::new(down(prec, x), up(prec, x))
    }

    pub fn from_integer(prec: u32, x: &Integer) -> Self {
        Interval::new(down(prec, x), up(prec, x))
    }

    pub fn from_rational(prec: u32, x: &Rational) -> Self {
        Interval::new(down(prec, x), up(prec, x))
    }

    /// `num / den` for machine integers, `den != 0`.
    pub fn ratio(prec: u32, num: i64, den: i64) -> Self {
        Interval::from_rational(prec, &Rational::from((num, den)))
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    /// Midpoint rounded to nearest.
    pub fn mid(&self) -> Float {
        let mut m = Float::with_val(self.prec() + 1, &self.lo + &self.hi);
        m /= 2;
        m
    }

    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    /// `Greater`/`Less` when every point is positive/negative, `Equal`
    /// when the interval straddles or touches zero.
    pub fn sign(&self) -> Ordering {
        if self.lo > 0 {
            Ordering::Greater
        } else if self.hi < 0 {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn with_prec(&self, prec: u32) -> Interval {
        Interval::new(down(prec, &self.lo), up(prec, &self.hi))
    }

    pub fn neg(&self) -> Interval {
        Interval::new(Float::with_val(self.hi.prec(), -&self.hi), Float::with_val(self.lo.prec(), -&self.lo))
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let p = self.prec().max(other.prec());
        Interval::new(down(p, &self.lo + &other.lo), up(p, &self.hi + &other.hi))
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        let p = self.prec().max(other.prec());
        Interval::new(down(p, &self.lo - &other.hi), up(p, &self.hi - &other.lo))
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let p = self.prec().max(other.prec());
        // Sign-definite factors need only two products.
        let (a, b) = (self, other);
        let pos = |x: &Interval| x.lo >= 0;
        let neg = |x: &Interval| x.hi <= 0;
        let pick = |l: (&Float, &Float), h: (&Float, &Float)| {
            Interval::new(down(p, l.0 * l.1), up(p, h.0 * h.1))
        };
        if pos(a) && pos(b) {
            return pick((&a.lo, &b.lo), (&a.hi, &b.hi));
        }
        if neg(a) && neg(b) {
            return pick((&a.hi, &b.hi), (&a.lo, &b.lo));
        }
        if pos(a) && neg(b) {
            return pick((&a.hi, &b.lo), (&a.lo, &b.hi));
        }
        if neg(a) && pos(b) {
            return pick((&a.lo, &b.hi), (&a.hi, &b.lo));
        }
        if pos(b) {
            return pick((&a.lo, &b.hi), (&a.hi, &b.hi));
        }
        if pos(a) {
            return pick((&a.hi, &b.lo), (&a.hi, &b.hi));
        }
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let l = down(p, a * b);
            let h = up(p, a * b);
            if lo.as_ref().is_none_or(|x| l < *x) {
                lo = Some(l);
            }
            if hi.as_ref().is_none_or(|x| h > *x) {
                hi = Some(h);
            }
        }
        Interval::new(lo.unwrap(), hi.unwrap())
    }

    pub fn mul_int(&self, k: i64) -> Interval {
        let p = self.prec();
        if k >= 0 {
            Interval::new(down(p, &self.lo * k), up(p, &self.hi * k))
        } else {
            Interval::new(down(p, &self.hi * k), up(p, &self.lo * k))
        }
    }

    pub fn square(&self) -> Interval {
        let p = self.prec();
        let (l2, h2) = (down(p, self.lo.square_ref()), up(p, self.lo.square_ref()));
        let (m2, n2) = (down(p, self.hi.square_ref()), up(p, self.hi.square_ref()));
        if self.contains_zero() {
            Interval::new(Float::new(p), h2.max(&n2))
        } else if self.lo > 0 {
            Interval::new(l2, n2)
        } else {
            Interval::new(m2, h2)
        }
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        let p = self.prec();
        Some(Interval::new(down(p, self.hi.recip_ref()), up(p, self.lo.recip_ref())))
    }

    /// Quotient; `None` when the divisor contains zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        Some(self.mul(&other.recip()?))
    }

    pub fn div_int(&self, k: i64) -> Interval {
        assert!(k != 0, "division by zero");
        let p = self.prec();
        if k > 0 {
            Interval::new(down(p, &self.lo / k), up(p, &self.hi / k))
        } else {
            Interval::new(down(p, &self.hi / k), up(p, &self.lo / k))
        }
    }

    /// Largest absolute value over the interval, rounded up.
    pub fn mag(&self) -> Float {
        let a = Float::with_val(self.lo.prec(), self.lo.abs_ref());
        let b = Float::with_val(self.hi.prec(), self.hi.abs_ref());
        a.max(&b)
    }

    /// Smallest absolute value over the interval.
    pub fn mig(&self) -> Float {
        if self.contains_zero() {
            Float::new(self.prec())
        } else {
            let a = Float::with_val(self.lo.prec(), self.lo.abs_ref());
            let b = Float::with_val(self.hi.prec(), self.hi.abs_ref());
            a.min(&b)
        }
    }

    /// `self ± r` for a non-negative radius `r`.
    pub fn widen(&self, r: &Float) -> Interval {
        let p = self.prec();
        Interval::new(down(p, &self.lo - r), up(p, &self.hi + r))
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        let lo = if self.lo < other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi > other.hi { self.hi.clone() } else { other.hi.clone() };
        Interval::new(lo, hi)
    }

    fn monotone(&self, f: impl Fn(&Float, Round) -> Float) -> Interval {
        Interval::new(f(&self.lo, Round::Down), f(&self.hi, Round::Up))
    }

    pub fn exp(&self) -> Interval {
        let p = self.prec();
        self.monotone(|x, r| Float::with_val_round(p, x.exp_ref(), r).0)
    }

    /// Natural log; requires a positive interval.
    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0, "ln of non-positive interval");
        let p = self.prec();
        self.monotone(|x, r| Float::with_val_round(p, x.ln_ref(), r).0)
    }

    /// Square root; requires a non-negative interval.
    pub fn sqrt(&self) -> Interval {
        assert!(self.lo >= 0, "sqrt of negative interval");
        let p = self.prec();
        self.monotone(|x, r| Float::with_val_round(p, x.sqrt_ref(), r).0)
    }

    pub fn cbrt(&self) -> Interval {
        let p = self.prec();
        self.monotone(|x, r| Float::with_val_round(p, x.cbrt_ref(), r).0)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_string_radix(10, Some(20)), self.hi.to_string_radix(10, Some(20)))
    }
}
