//! Outward-rounded interval arithmetic over dyadic endpoints.
//!
//! Every inexact operation takes a working precision in bits and rounds the lower
//! endpoint down and the upper endpoint up, so a result interval always encloses the
//! exact mathematical result of the operation applied to any points of the inputs.

use super::dyadic::{Dir, Dyadic};
use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::Signed;
use std::cmp::Ordering;
use std::fmt;

/// Certified sign of an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignClass {
    Positive,
    Negative,
    /// Contains zero in its interior or at an endpoint: sign undecided.
    Mixed,
    /// Exactly the point zero.
    Zero,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Interval {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Interval {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Interval {
        Interval::point(Dyadic::zero())
    }

    pub fn one() -> Interval {
        Interval::point(Dyadic::one())
    }

    pub fn from_int(n: i64) -> Interval {
        Interval::point(Dyadic::from_int(n))
    }

    pub fn from_rat(q: &BigRational, prec: u32) -> Interval {
        Interval {
            lo: Dyadic::from_rat(q, prec, Dir::Down),
            hi: Dyadic::from_rat(q, prec, Dir::Up),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).scale2(-1)
    }

    /// Upper bound on |x| over the interval.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound on |x| over the interval (zero if it straddles zero).
    pub fn mig(&self) -> Dyadic {
        match self.sign_class() {
            SignClass::Positive => self.lo.clone(),
            SignClass::Negative => self.hi.abs(),
            _ => Dyadic::zero(),
        }
    }

    pub fn round_out(&self, prec: u32) -> Interval {
        Interval { lo: self.lo.round(prec, Dir::Down), hi: self.hi.round(prec, Dir::Up) }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, rhs: &Interval, prec: u32) -> Interval {
        Interval {
            lo: self.lo.add(&rhs.lo).round(prec, Dir::Down),
            hi: self.hi.add(&rhs.hi).round(prec, Dir::Up),
        }
    }

    pub fn sub(&self, rhs: &Interval, prec: u32) -> Interval {
        self.add(&rhs.neg(), prec)
    }

    pub fn mul(&self, rhs: &Interval, prec: u32) -> Interval {
        let cands = [
            self.lo.mul(&rhs.lo),
            self.lo.mul(&rhs.hi),
            self.hi.mul(&rhs.lo),
            self.hi.mul(&rhs.hi),
        ];
        let lo = cands.iter().min().unwrap().round(prec, Dir::Down);
        let hi = cands.iter().max().unwrap().round(prec, Dir::Up);
        Interval { lo, hi }
    }

    /// Division; errors when the divisor interval contains zero.
    pub fn div(&self, rhs: &Interval, prec: u32) -> Result<Interval> {
        match rhs.sign_class() {
            SignClass::Positive | SignClass::Negative => {}
            _ => return Err(Error::DivisionByZeroInterval),
        }
        let q = |a: &Dyadic, b: &Dyadic, dir: Dir| a.div(b, prec, dir);
        let cands_lo = [
            q(&self.lo, &rhs.lo, Dir::Down),
            q(&self.lo, &rhs.hi, Dir::Down),
            q(&self.hi, &rhs.lo, Dir::Down),
            q(&self.hi, &rhs.hi, Dir::Down),
        ];
        let cands_hi = [
            q(&self.lo, &rhs.lo, Dir::Up),
            q(&self.lo, &rhs.hi, Dir::Up),
            q(&self.hi, &rhs.lo, Dir::Up),
            q(&self.hi, &rhs.hi, Dir::Up),
        ];
        Ok(Interval {
            lo: cands_lo.iter().min().unwrap().clone(),
            hi: cands_hi.iter().max().unwrap().clone(),
        })
    }

    /// Square root; lower endpoint clamps to zero when the interval dips
    /// (possibly spuriously) below zero. Errors when entirely negative.
    pub fn sqrt(&self, prec: u32) -> Result<Interval> {
        if self.hi.is_negative() {
            return Err(Error::SqrtOfNegative);
        }
        let lo = if self.lo.is_negative() {
            Dyadic::zero()
        } else {
            self.lo.sqrt(prec, Dir::Down)
        };
        Ok(Interval { lo, hi: self.hi.sqrt(prec, Dir::Up) })
    }

    pub fn powi(&self, n: u32, prec: u32) -> Interval {
        match n {
            0 => Interval::one(),
            _ => {
                // Even powers need the image, not the naive product.
                if n % 2 == 0 {
                    let m = self.mag();
                    let lo = self.mig();
                    let mut plo = Dyadic::one();
                    let mut phi = Dyadic::one();
                    for _ in 0..n {
                        plo = plo.mul(&lo);
                        phi = phi.mul(&m);
                    }
                    Interval { lo: plo.round(prec, Dir::Down), hi: phi.round(prec, Dir::Up) }
                } else {
                    let mut r = self.clone();
                    for _ in 1..n {
                        r = r.mul(self, prec);
                    }
                    r
                }
            }
        }
    }

    pub fn scale2(&self, k: i64) -> Interval {
        if k >= 0 {
            Interval { lo: self.lo.scale2(k), hi: self.hi.scale2(k) }
        } else {
            Interval { lo: self.lo.scale2(k), hi: self.hi.scale2(k) }
        }
    }

    pub fn hull(&self, rhs: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(rhs.lo.clone()),
            hi: self.hi.clone().max(rhs.hi.clone()),
        }
    }

    pub fn intersect(&self, rhs: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(rhs.lo.clone());
        let hi = self.hi.clone().min(rhs.hi.clone());
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_rat(&self, q: &BigRational) -> bool {
        self.lo.to_rat() <= *q && *q <= self.hi.to_rat()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_interval(&self, rhs: &Interval) -> bool {
        self.lo <= rhs.lo && rhs.hi <= self.hi
    }

    pub fn sign_class(&self) -> SignClass {
        if self.lo.is_positive() {
            SignClass::Positive
        } else if self.hi.is_negative() {
            SignClass::Negative
        } else if self.lo.is_zero() && self.hi.is_zero() {
            SignClass::Zero
        } else {
            SignClass::Mixed
        }
    }

    /// Inflates both endpoints by `delta >= 0`.
    pub fn inflate(&self, delta: &Dyadic) -> Interval {
        debug_assert!(!delta.is_negative());
        Interval { lo: self.lo.sub(delta), hi: self.hi.add(delta) }
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (
            Interval { lo: self.lo.clone(), hi: m.clone() },
            Interval { lo: m, hi: self.hi.clone() },
        )
    }

    /// True when `width <= 2^-bits`.
    pub fn width_below(&self, bits: i64) -> bool {
        let w = self.width();
        if w.is_zero() {
            return true;
        }
        w.ilog2() < -bits
    }

    pub fn to_f64_mid(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn cmp_lo(&self, other: &Interval) -> Ordering {
        self.lo.cmp_val(&other.lo)
    }

    /// Certified strictly-less test: every point of `self` below every point of `rhs`.
    pub fn certainly_lt(&self, rhs: &Interval) -> bool {
        self.hi < rhs.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn iv(a: i64, ad: i64, b: i64, bd: i64) -> Interval {
        Interval::new(
            Dyadic::from_rat(&rat(a, ad), 60, Dir::Down),
            Dyadic::from_rat(&rat(b, bd), 60, Dir::Up),
        )
    }

    #[test]
    fn mul_encloses_products() {
        let a = iv(-1, 2, 3, 4); // [-0.5, 0.75]
        let b = iv(-2, 1, 1, 3); // [-2, 1/3]
        let p = a.mul(&b, 60);
        // extreme product: -0.75 * -2? no: 0.75 * -2 = -1.5 ; -0.5 * -2 = 1.0
        assert!(p.contains_rat(&rat(-3, 2)));
        assert!(p.contains_rat(&rat(1, 1)));
        assert!(!p.contains_rat(&rat(2, 1)));
    }

    #[test]
    fn div_rejects_zero_divisor() {
        let a = iv(1, 1, 2, 1);
        let b = iv(-1, 1, 1, 1);
        assert!(a.div(&b, 50).is_err());
        let c = iv(1, 3, 1, 2);
        let q = a.div(&c, 50).unwrap();
        assert!(q.contains_rat(&rat(3, 1)));
        assert!(q.contains_rat(&rat(6, 1)));
    }

    #[test]
    fn even_power_image() {
        let a = iv(-1, 2, 1, 4); // [-0.5, 0.25]
        let sq = a.powi(2, 60);
        assert!(sq.contains_rat(&rat(0, 1)));
        assert!(sq.contains_rat(&rat(1, 4)));
        assert!(!sq.contains_rat(&rat(-1, 100)));
        assert!(!sq.contains_rat(&rat(26, 100)));
    }

    #[test]
    fn sqrt_clamps_at_zero() {
        let a = iv(-1, 100, 4, 1);
        let s = a.sqrt(60).unwrap();
        assert!(!s.lo().is_negative());
        assert!(s.contains_rat(&rat(2, 1)));
    }

    #[test]
    fn sign_classes() {
        assert_eq!(iv(1, 10, 2, 1).sign_class(), SignClass::Positive);
        assert_eq!(iv(-2, 1, -1, 10).sign_class(), SignClass::Negative);
        assert_eq!(iv(-1, 10, 1, 10).sign_class(), SignClass::Mixed);
        assert_eq!(Interval::zero().sign_class(), SignClass::Zero);
    }
}
