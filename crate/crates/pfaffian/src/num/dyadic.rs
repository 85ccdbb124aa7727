//! Arbitrary-precision dyadic reals `m * 2^e` with directed rounding.
//!
//! Dyadics are the endpoint type of [`crate::num::interval::Interval`]. Addition and
//! multiplication are exact; division, square roots and rational conversion round in a
//! requested direction so interval code can stay outward-rounded.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rounding direction for the inexact operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Down,
    Up,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }
}

/// A dyadic rational `mant * 2^exp`, normalized so `mant` is odd (or zero with `exp = 0`).
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{} (~{})", self.mant, self.exp, self.to_f64())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: i64) -> Dyadic {
        Dyadic::new(BigInt::from(n), 0)
    }

    /// Builds `mant * 2^exp` and normalizes.
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0) as i64;
        if tz > 0 {
            Dyadic { mant: &mant >> (tz as usize), exp: exp + tz }
        } else {
            Dyadic { mant, exp }
        }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Bit length of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Multiplies by `2^k` (exact).
    pub fn scale2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic { mant: self.mant.clone(), exp: self.exp + k }
        }
    }

    pub fn add(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << ((self.exp - e) as usize);
        let b = &rhs.mant << ((rhs.exp - e) as usize);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, rhs: &Dyadic) -> Dyadic {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: &self.mant * &rhs.mant, exp: self.exp + rhs.exp }
    }

    /// `floor(log2(|x|))`; exact order of magnitude. Panics on zero.
    pub fn ilog2(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.mant.bits() as i64 - 1
    }

    /// Rounds to at most `prec` mantissa bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Dir) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let drop = (bits - prec as u64) as usize;
        // floor division by 2^drop on the signed mantissa gives rounding toward -inf.
        let floored = self.mant.clone() >> drop;
        let m = match dir {
            Dir::Down => floored,
            Dir::Up => {
                let back = &floored << drop;
                if back == self.mant {
                    floored
                } else {
                    floored + 1
                }
            }
        };
        Dyadic::new(m, self.exp + drop as i64)
    }

    /// Division with `prec` result bits, rounded in direction `dir`.
    pub fn div(&self, rhs: &Dyadic, prec: u32, dir: Dir) -> Dyadic {
        assert!(!rhs.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Shift numerator so the integer quotient carries >= prec+1 significant bits.
        let shift = (rhs.mant.bits() as i64 - self.mant.bits() as i64 + prec as i64 + 2).max(0) as usize;
        let num = &self.mant << shift;
        let (q, r) = num.div_rem(&rhs.mant);
        let exact = r.is_zero();
        // div_rem truncates toward zero; fix up for directed rounding.
        let negative = self.mant.is_negative() != rhs.mant.is_negative();
        let q = match (dir, exact, negative) {
            (_, true, _) => q,
            (Dir::Down, false, true) => q - 1,
            (Dir::Down, false, false) => q,
            (Dir::Up, false, true) => q,
            (Dir::Up, false, false) => q + 1,
        };
        Dyadic::new(q, self.exp - rhs.exp - shift as i64).round(prec, dir)
    }

    /// Square root with `prec` result bits, rounded in direction `dir`. Panics if negative.
    pub fn sqrt(&self, prec: u32, dir: Dir) -> Dyadic {
        assert!(!self.is_negative(), "dyadic sqrt of negative");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Scale to an even exponent with enough bits, take the integer sqrt.
        let want = 2 * (prec as i64 + 2);
        let mut shift = (want - self.mant.bits() as i64).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let scaled = &self.mant << (shift as usize);
        let root = scaled.sqrt();
        let e = (self.exp - shift) / 2;
        match dir {
            Dir::Down => Dyadic::new(root, e).round(prec, Dir::Down),
            Dir::Up => {
                let exact = &root * &root == scaled;
                let r = if exact { root } else { root + 1 };
                Dyadic::new(r, e).round(prec, Dir::Up)
            }
        }
    }

    /// Directed conversion from an exact rational.
    pub fn from_rat(q: &BigRational, prec: u32, dir: Dir) -> Dyadic {
        let num = Dyadic::new(q.numer().clone(), 0);
        if q.denom().is_one() {
            return num;
        }
        let den = Dyadic::new(q.denom().clone(), 0);
        num.div(&den, prec, dir)
    }

    /// Exact conversion back to a rational.
    pub fn to_rat(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as usize))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Keep 64 mantissa bits so the conversion never overflows for sane exponents.
        let r = self.round(64, Dir::Down);
        let m = r.mant.to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(r.exp.clamp(-2000, 2000) as i32)
    }

    pub fn cmp_val(&self, rhs: &Dyadic) -> Ordering {
        match (self.mant.sign(), rhs.mant.sign()) {
            (Sign::Minus, Sign::NoSign)
            | (Sign::Minus, Sign::Plus)
            | (Sign::NoSign, Sign::Plus) => return Ordering::Less,
            (Sign::Plus, Sign::NoSign)
            | (Sign::Plus, Sign::Minus)
            | (Sign::NoSign, Sign::Minus) => return Ordering::Greater,
            (Sign::NoSign, Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        let d = self.sub(rhs);
        if d.mant.is_negative() {
            Ordering::Less
        } else if d.mant.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_val(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_val(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn normalization_strips_trailing_zeros() {
        let d = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(d.mant(), &BigInt::from(3));
        assert_eq!(d.exp(), 2);
    }

    #[test]
    fn add_and_mul_are_exact() {
        let a = Dyadic::new(BigInt::from(3), -2); // 0.75
        let b = Dyadic::new(BigInt::from(5), -3); // 0.625
        assert_eq!(a.add(&b).to_rat(), rat(11, 8));
        assert_eq!(a.mul(&b).to_rat(), rat(15, 32));
    }

    #[test]
    fn directed_division_brackets_quotient() {
        let a = Dyadic::from_int(1);
        let b = Dyadic::from_int(3);
        let lo = a.div(&b, 20, Dir::Down);
        let hi = a.div(&b, 20, Dir::Up);
        assert!(lo.to_rat() < rat(1, 3));
        assert!(hi.to_rat() > rat(1, 3));
        assert!(hi.sub(&lo).to_rat() < rat(1, 1 << 18));
    }

    #[test]
    fn directed_sqrt_brackets_root() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(40, Dir::Down);
        let hi = two.sqrt(40, Dir::Up);
        assert!(lo.mul(&lo).to_rat() <= rat(2, 1));
        assert!(hi.mul(&hi).to_rat() >= rat(2, 1));
        assert!(hi.sub(&lo).to_rat() < rat(1, 1i64 << 36));
    }

    #[test]
    fn round_directions_bracket() {
        let x = Dyadic::new(BigInt::from(0b101011), 0); // 43
        let down = x.round(3, Dir::Down);
        let up = x.round(3, Dir::Up);
        assert!(down.to_rat() <= rat(43, 1));
        assert!(up.to_rat() >= rat(43, 1));
        let neg = x.neg();
        let ndown = neg.round(3, Dir::Down);
        let nup = neg.round(3, Dir::Up);
        assert!(ndown.to_rat() <= rat(-43, 1));
        assert!(nup.to_rat() >= rat(-43, 1));
    }

    #[test]
    fn from_rat_directed() {
        let q = rat(1, 7);
        let lo = Dyadic::from_rat(&q, 30, Dir::Down);
        let hi = Dyadic::from_rat(&q, 30, Dir::Up);
        assert!(lo.to_rat() < q && q < hi.to_rat());
    }
}
