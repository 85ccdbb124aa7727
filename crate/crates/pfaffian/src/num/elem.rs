//! Certified elementary constants and functions on dyadic intervals: pi, exp,
//! sin/cos, and the complex exponential e^{2*pi*i*t}. Everything returns an
//! enclosure; tails of the Taylor series are bounded explicitly.

use super::complex::CInterval;
use super::dyadic::{Dir, Dyadic};
use super::interval::Interval;
use crate::error::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::sync::Mutex;
use std::sync::OnceLock;

fn pi_cache() -> &'static Mutex<BTreeMap<u32, Interval>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Machin: pi = 16 atan(1/5) - 4 atan(1/239), with exact rational partial sums
/// and an alternating-series tail bound.
fn atan_inv(n: i64, terms: usize) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let ninv2 = BigRational::new(BigInt::one(), BigInt::from(n) * BigInt::from(n));
    let mut pow = BigRational::new(BigInt::one(), BigInt::from(n));
    for k in 0..terms {
        let term = &pow / BigRational::from_integer(BigInt::from(2 * k as i64 + 1));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        pow *= &ninv2;
    }
    let tail = &pow / BigRational::from_integer(BigInt::from(2 * terms as i64 + 1));
    (sum, tail)
}

pub fn pi(prec: u32) -> Interval {
    if let Some(v) = pi_cache().lock().unwrap().get(&prec) {
        return v.clone();
    }
    // terms so that 5^-(2k+1) < 2^-(prec+8)
    let t5 = (prec as usize + 10) / 4 + 2;
    let t239 = (prec as usize + 10) / 15 + 2;
    let (a5, tail5) = atan_inv(5, t5);
    let (a239, tail239) = atan_inv(239, t239);
    let sixteen = BigRational::from_integer(BigInt::from(16));
    let four = BigRational::from_integer(BigInt::from(4));
    let val = &sixteen * &a5 - &four * &a239;
    let err = &sixteen * &tail5 + &four * &tail239;
    let lo = Dyadic::from_rat(&(&val - &err), prec, Dir::Down);
    let hi = Dyadic::from_rat(&(&val + &err), prec, Dir::Up);
    let out = Interval::new(lo, hi);
    pi_cache().lock().unwrap().insert(prec, out.clone());
    out
}

/// exp on a point dyadic with directed enclosure: returns an interval of width
/// ~2^-prec containing e^x.
fn exp_point(x: &Dyadic, prec: u32) -> Interval {
    let wp = prec + 16;
    // Argument reduction: e^x = (e^{x/2^m})^{2^m} with |x/2^m| <= 1/2.
    let mut m = 0i64;
    if !x.is_zero() {
        let mag = x.ilog2();
        if mag >= -1 {
            m = mag + 2;
        }
    }
    let r = x.scale2(-m);
    // Taylor sum of e^r with |r| <= 1/2; stop when term < 2^-(wp+8).
    let mut term = Interval::one();
    let mut sum = Interval::one();
    let mut k: i64 = 1;
    loop {
        term = term.mul(&Interval::point(r.clone()), wp);
        term = term
            .div(&Interval::from_int(k), wp)
            .expect("factorial divisor nonzero");
        sum = sum.add(&term, wp);
        let t = term.mag();
        if t.is_zero() || t.ilog2() < -(wp as i64 + 8) {
            break;
        }
        k += 1;
        if k > 500 {
            break;
        }
    }
    // Tail bound: |R| <= 2*|term| (ratio <= 1/2 for |r| <= 1/2 past a few terms).
    let tail = term.mag().scale2(1);
    let mut enc = sum.inflate(&tail);
    for _ in 0..m {
        enc = enc.mul(&enc.clone(), wp);
    }
    enc.round_out(prec)
}

/// exp over an interval (monotone).
pub fn exp(x: &Interval, prec: u32) -> Interval {
    let lo = exp_point(x.lo(), prec);
    let hi = exp_point(x.hi(), prec);
    Interval::new(lo.lo().clone(), hi.hi().clone())
}

/// sin and cos at a point with |x| <= ~8; Taylor with explicit tail.
fn sincos_point(x: &Dyadic, prec: u32) -> (Interval, Interval) {
    let wp = prec + 16;
    let xi = Interval::point(x.clone());
    let x2 = xi.powi(2, wp);
    let mut sin_term = xi.clone();
    let mut sin_sum = xi.clone();
    let mut cos_term = Interval::one();
    let mut cos_sum = Interval::one();
    let mut k: i64 = 1;
    loop {
        // cos: next term *= -x^2 / ((2k-1)(2k))
        cos_term = cos_term.mul(&x2, wp).neg();
        cos_term = cos_term
            .div(&Interval::from_int((2 * k - 1) * (2 * k)), wp)
            .unwrap();
        cos_sum = cos_sum.add(&cos_term, wp);
        // sin: next term *= -x^2 / ((2k)(2k+1))
        sin_term = sin_term.mul(&x2, wp).neg();
        sin_term = sin_term
            .div(&Interval::from_int((2 * k) * (2 * k + 1)), wp)
            .unwrap();
        sin_sum = sin_sum.add(&sin_term, wp);
        let t = cos_term.mag().max(sin_term.mag());
        // Stop when terms are tiny and the series has entered its decaying regime
        // (|x|^2/((2k)(2k+1)) < 1/2 ensures the tail is < 2*next term).
        let decaying = {
            let ratio_num = x2.mag();
            let den = Dyadic::from_int((2 * k + 1) * (2 * k + 2));
            ratio_num < den.scale2(-1)
        };
        if decaying && (t.is_zero() || t.ilog2() < -(wp as i64 + 8)) {
            break;
        }
        k += 1;
        if k > 300 {
            break;
        }
    }
    let tail = cos_term.mag().max(sin_term.mag()).scale2(1);
    (
        sin_sum.inflate(&tail).round_out(prec),
        cos_sum.inflate(&tail).round_out(prec),
    )
}

/// sin/cos over an interval via midpoint + Lipschitz bound (|sin'|,|cos'| <= 1).
pub fn sincos(x: &Interval, prec: u32) -> (Interval, Interval) {
    let m = x.mid();
    let rad = x.width().scale2(-1);
    let (s, c) = sincos_point(&m, prec);
    (s.inflate(&rad).round_out(prec), c.inflate(&rad).round_out(prec))
}

/// e^{2*pi*i*t} for real interval t: argument reduced by the integer part so the
/// trig evaluation stays near the origin.
pub fn exp_2pi_i(t: &Interval, prec: u32) -> Result<CInterval> {
    let wp = prec + 16;
    // shift t by round(mid) (exact integer): e^{2 pi i (t-n)} = e^{2 pi i t}
    let mid = t.mid().to_rat();
    let n = mid.round();
    let shift = Interval::from_rat(&n, wp);
    let t0 = t.sub(&shift, wp);
    let arg = t0.mul(&pi(wp), wp).scale2(1);
    let (s, c) = sincos(&arg, prec);
    Ok(CInterval::new(c, s))
}

/// e^{2*pi*i*z} for complex z = x + i y: equals e^{-2 pi y} * e^{2 pi i x}.
pub fn exp_2pi_i_complex(z: &CInterval, prec: u32) -> Result<CInterval> {
    let wp = prec + 16;
    let rot = exp_2pi_i(&z.re, wp)?;
    let damp = exp(&z.im.mul(&pi(wp), wp).scale2(1).neg(), wp);
    Ok(rot.scale(&damp, wp).round_out(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn pi_digits() {
        let p = pi(128);
        // 3.14159265358979323846264338327950288 (reference digits)
        let lo = rat(314159265358979323, 100000000000000000);
        let hi = rat(314159265358979324, 100000000000000000);
        assert!(p.lo().to_rat() > lo && p.hi().to_rat() < hi);
        assert!(p.width_below(120));
    }

    #[test]
    fn exp_one_matches_series_oracle() {
        // oracle: exact rational partial sum of e with factorial tail bound
        let mut sum = BigRational::zero();
        let mut fact = BigRational::one();
        for k in 0..30u32 {
            if k > 0 {
                fact *= BigRational::from_integer(BigInt::from(k));
            }
            sum += fact.recip();
        }
        let e = exp(&Interval::one(), 96);
        assert!(e.contains_rat(&sum) || {
            // sum is slightly below e; check bracketing explicitly
            e.lo().to_rat() < sum.clone() + rat(1, i64::MAX) && e.hi().to_rat() > sum
        });
        assert!(e.width_below(40));
        // e in (2.718281828, 2.718281829)
        assert!(e.lo().to_rat() > rat(2718281828, 1000000000));
        assert!(e.hi().to_rat() < rat(2718281829, 1000000000));
    }

    #[test]
    fn exp_zero_is_one() {
        let e = exp(&Interval::zero(), 64);
        assert!(e.contains_rat(&rat(1, 1)));
        assert!(e.width_below(32));
    }

    #[test]
    fn sincos_quarter_turn() {
        let p = pi(96);
        let half_pi = p.scale2(-1);
        let (s, c) = sincos(&half_pi, 80);
        assert!(s.contains_rat(&rat(1, 1)));
        assert!(c.contains_zero());
        assert!(c.width_below(40));
    }

    #[test]
    fn unit_circle_full_turn() {
        let z = exp_2pi_i(&Interval::from_rat(&rat(1, 1), 64), 64).unwrap();
        assert!(z.re.contains_rat(&rat(1, 1)));
        assert!(z.im.contains_zero());
        let quarter = exp_2pi_i(&Interval::from_rat(&rat(1, 4), 64), 64).unwrap();
        assert!(quarter.re.contains_zero());
        assert!(quarter.im.contains_rat(&rat(1, 1)));
    }

    #[test]
    fn damped_complex_exponential() {
        // e^{2 pi i (i)} = e^{-2 pi} ~ 0.00186744
        let z = CInterval::new(Interval::zero(), Interval::one());
        let v = exp_2pi_i_complex(&z, 64).unwrap();
        assert!(v.im.contains_zero());
        assert!(v.re.lo().to_rat() > rat(186, 100000));
        assert!(v.re.hi().to_rat() < rat(187, 100000));
    }
}
