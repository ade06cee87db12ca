//! Certified real intervals with dyadic endpoints.
//!
//! An [`Interval`] stores integers `lo <= hi` together with a precision `p`
//! and stands for the closed real interval `[lo / 2^p, hi / 2^p]`. Every
//! operation rounds its lower endpoint down and its upper endpoint up, so the
//! true value of any expression built from enclosing intervals stays inside
//! the result. Operands of different precision are aligned to the finer one
//! before combining.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn shl(x: &BigInt, bits: u32) -> BigInt {
    x << (bits as usize)
}

fn floor_shr(x: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x.clone();
    }
    x.div_floor(&(BigInt::one() << (bits as usize)))
}

fn ceil_shr(x: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x.clone();
    }
    x.div_ceil(&(BigInt::one() << (bits as usize)))
}

impl Interval {
    /// Builds `[lo, hi] * 2^-prec`, swapping the endpoints if needed.
    pub fn from_scaled(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        if lo <= hi {
            Interval { lo, hi, prec }
        } else {
            Interval { lo: hi, hi: lo, prec }
        }
    }

    pub fn point_int(n: &BigInt, prec: u32) -> Self {
        let v = shl(n, prec);
        Interval { lo: v.clone(), hi: v, prec }
    }

    /// Tightest enclosure of `num / den` at precision `prec`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let scaled = shl(num, prec);
        let lo = scaled.div_floor(den);
        let hi = scaled.div_ceil(den);
        Interval::from_scaled(lo, hi, prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Interval::from_ratio(q.numer(), q.denom(), prec)
    }

    /// Hull of two rationals.
    pub fn hull_rational(a: &BigRational, b: &BigRational, prec: u32) -> Self {
        let ia = Interval::from_rational(a, prec);
        let ib = Interval::from_rational(b, prec);
        ia.hull(&ib)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_scaled(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_scaled(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << (self.prec as usize))
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << (self.prec as usize))
    }

    /// Re-expresses the interval at another precision, rounding outward when
    /// the precision drops.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let d = prec - self.prec;
                Interval { lo: shl(&self.lo, d), hi: shl(&self.hi, d), prec }
            }
            Ordering::Less => {
                let d = self.prec - prec;
                Interval { lo: floor_shr(&self.lo, d), hi: ceil_shr(&self.hi, d), prec }
            }
        }
    }

    fn aligned(&self, other: &Interval) -> (Interval, Interval) {
        let p = self.prec.max(other.prec);
        (self.with_prec(p), other.with_prec(p))
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval { lo: a.lo + b.lo, hi: a.hi + b.hi, prec: a.prec }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval { lo: a.lo - b.hi, hi: a.hi - b.lo, prec: a.prec }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        let p = a.prec;
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        Interval { lo: floor_shr(min, p), hi: ceil_shr(max, p), prec: p }
    }

    pub fn mul_int(&self, k: &BigInt) -> Interval {
        Interval::from_scaled(&self.lo * k, &self.hi * k, self.prec)
    }

    /// Reciprocal, or `None` when the interval touches zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        let p = self.prec;
        let num = BigInt::one() << (2 * p as usize);
        // 1/[a, b] = [1/b, 1/a] for intervals of constant sign.
        let lo = num.div_floor(&self.hi);
        let hi = num.div_ceil(&self.lo);
        Some(Interval::from_scaled(lo, hi, p))
    }

    pub fn div(&self, other: &Interval) -> Option<Interval> {
        let (a, b) = self.aligned(other);
        b.recip().map(|r| a.mul(&r))
    }

    pub fn abs(&self) -> Interval {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = (-&self.lo).max(self.hi.clone());
            Interval { lo: BigInt::zero(), hi: m, prec: self.prec }
        } else if self.hi.sign() != Sign::Plus && self.lo.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Square root of the non-negative part of the interval.
    pub fn sqrt(&self) -> Interval {
        let p = self.prec;
        let clamp = |x: &BigInt| if x.is_negative() { BigInt::zero() } else { x.clone() };
        let lo = clamp(&self.lo) << (p as usize);
        let hi = clamp(&self.hi) << (p as usize);
        let lo_root = lo.sqrt();
        let mut hi_root = hi.sqrt();
        if &hi_root * &hi_root < hi {
            hi_root += 1;
        }
        Interval { lo: lo_root, hi: hi_root, prec: p }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval { lo: a.lo.min(b.lo), hi: a.hi.max(b.hi), prec: a.prec }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        self.lo() <= *q && *q <= self.hi()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// `Some(sign)` once the interval excludes zero.
    pub fn sign(&self) -> Option<i8> {
        if self.is_positive() {
            Some(1)
        } else if self.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    /// Certified `self < other`, `self > other`, or `None` when they overlap.
    pub fn compare(&self, other: &Interval) -> Option<Ordering> {
        let (a, b) = self.aligned(other);
        if a.hi < b.lo {
            Some(Ordering::Less)
        } else if a.lo > b.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// True when `hi - lo <= 2^-bits`.
    pub fn width_at_most(&self, bits: u32) -> bool {
        let w = &self.hi - &self.lo;
        if bits > self.prec {
            w.is_zero()
        } else {
            w <= BigInt::one() << ((self.prec - bits) as usize)
        }
    }

    /// Floor of every point of the interval, if they agree.
    pub fn floor(&self) -> Option<BigInt> {
        let a = floor_shr(&self.lo, self.prec);
        let b = floor_shr(&self.hi, self.prec);
        (a == b).then_some(a)
    }

    pub fn floor_lo(&self) -> BigInt {
        floor_shr(&self.lo, self.prec)
    }

    pub fn floor_hi(&self) -> BigInt {
        floor_shr(&self.hi, self.prec)
    }

    pub fn midpoint_f64(&self) -> f64 {
        let (lo, hi) = self.to_f64_bounds();
        0.5 * (lo + hi)
    }

    /// Outward-rounded `f64` enclosure.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        let lo = scaled_to_f64(&self.lo, self.prec);
        let hi = scaled_to_f64(&self.hi, self.prec);
        (next_down(lo), next_up(hi))
    }

    /// Outward enclosure of the natural logarithm of a positive interval.
    pub fn ln_bounds(&self) -> Option<(f64, f64)> {
        if !self.is_positive() {
            return None;
        }
        let lo = ln_big(&self.lo) - self.prec as f64 * std::f64::consts::LN_2;
        let hi = ln_big(&self.hi) - self.prec as f64 * std::f64::consts::LN_2;
        let pad = |x: f64| 8.0 * f64::EPSILON * x.abs().max(1.0);
        Some((lo - pad(lo), hi + pad(hi)))
    }
}

fn scaled_to_f64(x: &BigInt, prec: u32) -> f64 {
    let bits = x.bits();
    if bits <= 900 {
        return x.to_f64().unwrap_or(f64::NAN) * (-(prec as f64)).exp2();
    }
    let shift = bits - 64;
    let top = (x >> (shift as usize)).to_f64().unwrap();
    top * ((shift as f64) - prec as f64).exp2()
}

/// Natural log of a positive big integer with error a few ulps.
pub fn ln_big(x: &BigInt) -> f64 {
    debug_assert!(x.is_positive());
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> (shift as usize)).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub(crate) fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let b = x.to_bits();
    if x > 0.0 {
        f64::from_bits(b + 1)
    } else {
        f64::from_bits(b - 1)
    }
}

pub(crate) fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_f64_bounds();
        write!(f, "[{lo:.17e}, {hi:.17e}]")
    }
}
