//! Rectangular complex intervals.

use super::dyadic::Dyadic;
use super::interval::Interval;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

impl CInterval {
    pub fn new(re: Interval, im: Interval) -> CInterval {
        CInterval { re, im }
    }

    pub fn real(re: Interval) -> CInterval {
        CInterval { re, im: Interval::zero() }
    }

    pub fn zero() -> CInterval {
        CInterval { re: Interval::zero(), im: Interval::zero() }
    }

    pub fn one() -> CInterval {
        CInterval { re: Interval::one(), im: Interval::zero() }
    }

    pub fn i() -> CInterval {
        CInterval { re: Interval::zero(), im: Interval::one() }
    }

    pub fn neg(&self) -> CInterval {
        CInterval { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> CInterval {
        CInterval { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn add(&self, rhs: &CInterval, prec: u32) -> CInterval {
        CInterval { re: self.re.add(&rhs.re, prec), im: self.im.add(&rhs.im, prec) }
    }

    pub fn sub(&self, rhs: &CInterval, prec: u32) -> CInterval {
        CInterval { re: self.re.sub(&rhs.re, prec), im: self.im.sub(&rhs.im, prec) }
    }

    pub fn mul(&self, rhs: &CInterval, prec: u32) -> CInterval {
        let ac = self.re.mul(&rhs.re, prec);
        let bd = self.im.mul(&rhs.im, prec);
        let ad = self.re.mul(&rhs.im, prec);
        let bc = self.im.mul(&rhs.re, prec);
        CInterval { re: ac.sub(&bd, prec), im: ad.add(&bc, prec) }
    }

    pub fn scale(&self, s: &Interval, prec: u32) -> CInterval {
        CInterval { re: self.re.mul(s, prec), im: self.im.mul(s, prec) }
    }

    /// |z|^2 as an interval.
    pub fn norm_sq(&self, prec: u32) -> Interval {
        self.re.powi(2, prec).add(&self.im.powi(2, prec), prec)
    }

    /// |z|, certified.
    pub fn abs(&self, prec: u32) -> Result<Interval> {
        self.norm_sq(prec).sqrt(prec)
    }

    pub fn div(&self, rhs: &CInterval, prec: u32) -> Result<CInterval> {
        let d = rhs.norm_sq(prec);
        let num = self.mul(&rhs.conj(), prec);
        Ok(CInterval { re: num.re.div(&d, prec)?, im: num.im.div(&d, prec)? })
    }

    pub fn inv(&self, prec: u32) -> Result<CInterval> {
        CInterval::one().div(self, prec)
    }

    /// Principal square root, valid when the result's real part is certified
    /// positive (i.e. the argument avoids the closed negative real axis).
    /// Uses u = sqrt((|z| + re)/2), v = im / (2u).
    pub fn sqrt_principal(&self, prec: u32) -> Result<CInterval> {
        let r = self.abs(prec)?;
        let u = r.add(&self.re, prec).scale2(-1).sqrt(prec)?;
        let two_u = u.scale2(1);
        let v = self.im.div(&two_u, prec)?;
        Ok(CInterval { re: u, im: v })
    }

    pub fn powi(&self, n: u32, prec: u32) -> CInterval {
        let mut r = CInterval::one();
        for _ in 0..n {
            r = r.mul(self, prec);
        }
        r
    }

    pub fn mid_f64(&self) -> (f64, f64) {
        (self.re.to_f64_mid(), self.im.to_f64_mid())
    }

    pub fn width_below(&self, bits: i64) -> bool {
        self.re.width_below(bits) && self.im.width_below(bits)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn round_out(&self, prec: u32) -> CInterval {
        CInterval { re: self.re.round_out(prec), im: self.im.round_out(prec) }
    }

    pub fn mag_upper(&self) -> Dyadic {
        // cheap upper bound |re| + |im| >= |z|
        self.re.mag().add(&self.im.mag())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::dyadic::{Dir, Dyadic};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn c(re: (i64, i64), im: (i64, i64)) -> CInterval {
        CInterval::new(
            Interval::from_rat(&rat(re.0, re.1), 60),
            Interval::from_rat(&rat(im.0, im.1), 60),
        )
    }

    #[test]
    fn complex_mul_i_squared() {
        let i = CInterval::i();
        let m = i.mul(&i, 60);
        assert!(m.re.contains_rat(&rat(-1, 1)));
        assert!(m.im.contains_zero());
    }

    #[test]
    fn sqrt_principal_squares_back() {
        let z = c((3, 1), (4, 1));
        let s = z.sqrt_principal(80).unwrap();
        // sqrt(3+4i) = 2+i
        assert!(s.re.contains_rat(&rat(2, 1)));
        assert!(s.im.contains_rat(&rat(1, 1)));
        let back = s.mul(&s, 80);
        assert!(back.re.contains_rat(&rat(3, 1)));
        assert!(back.im.contains_rat(&rat(4, 1)));
    }

    #[test]
    fn division_roundtrip() {
        let z = c((1, 2), (-5, 3));
        let w = c((7, 4), (2, 9));
        let q = z.div(&w, 80).unwrap();
        let back = q.mul(&w, 80);
        assert!(back.re.contains_rat(&rat(1, 2)));
        assert!(back.im.contains_rat(&rat(-5, 3)));
        let _ = Dyadic::from_rat(&rat(1, 3), 30, Dir::Down);
    }
}
