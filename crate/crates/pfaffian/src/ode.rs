//! Validated evaluation of Pfaffian functions by Taylor stepping.
//!
//! Chain values at a point are obtained by integrating the defining polynomial
//! system along an axis-parallel path from the basepoint. Each step computes
//! Taylor coefficients of the solution by Picard iteration on truncated series,
//! validates an a-priori enclosure over the step by a Picard contraction check,
//! and bounds the truncation error with the order-K coefficient evaluated over
//! that enclosure. Values along frequently used lines are cached at exact
//! rational abscissae.

use crate::chain::{PfaffianChain, PfaffianFunction};
use crate::error::{Error, Result};
use crate::num::{Dir, Dyadic, Interval};
use crate::poly::SparsePolynomial;
use crate::Rat;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::sync::Mutex;

/// Hard cap for the precision escalation ladder.
pub const PREC_CAP: u32 = 4096;

/// Truncated Taylor series with interval coefficients.
#[derive(Clone, Debug)]
struct Series {
    c: Vec<Interval>,
}

impl Series {
    fn zero(len: usize) -> Series {
        Series { c: vec![Interval::zero(); len] }
    }

    fn constant(v: Interval, len: usize) -> Series {
        let mut s = Series::zero(len);
        s.c[0] = v;
        s
    }

    fn linear(c0: Interval, c1: Interval, len: usize) -> Series {
        let mut s = Series::zero(len);
        s.c[0] = c0;
        if len > 1 {
            s.c[1] = c1;
        }
        s
    }

    fn add(&self, rhs: &Series, prec: u32) -> Series {
        Series {
            c: self
                .c
                .iter()
                .zip(rhs.c.iter())
                .map(|(a, b)| a.add(b, prec))
                .collect(),
        }
    }

    fn mul(&self, rhs: &Series, prec: u32) -> Series {
        let n = self.c.len();
        let mut out = Series::zero(n);
        for i in 0..n {
            if matches!(self.c[i].sign_class(), crate::num::SignClass::Zero) {
                continue;
            }
            for j in 0..(n - i) {
                let t = self.c[i].mul(&rhs.c[j], prec);
                out.c[i + j] = out.c[i + j].add(&t, prec);
            }
        }
        out
    }

    fn scale(&self, k: &Interval, prec: u32) -> Series {
        Series { c: self.c.iter().map(|a| a.mul(k, prec)).collect() }
    }

    /// Antiderivative with zero constant term, truncated to the same length.
    fn integrate(&self, prec: u32) -> Series {
        let n = self.c.len();
        let mut out = Series::zero(n);
        for k in 0..(n - 1) {
            out.c[k + 1] = self.c[k]
                .div(&Interval::from_int((k + 1) as i64), prec)
                .expect("nonzero integer");
        }
        out
    }

    /// Evaluates sum c_k s^k over the interval `s` (Horner).
    fn eval(&self, s: &Interval, prec: u32) -> Interval {
        let mut acc = Interval::zero();
        for k in (0..self.c.len()).rev() {
            acc = acc.mul(s, prec).add(&self.c[k], prec);
        }
        acc
    }
}

/// Evaluates a polynomial at series arguments.
fn poly_at_series(p: &SparsePolynomial, vars: &[Series], len: usize, prec: u32) -> Series {
    let mut acc = Series::zero(len);
    for (e, coef) in p.terms() {
        let mut t = Series::constant(Interval::from_rat(coef, prec), len);
        for (vi, &pow) in vars.iter().zip(e.iter()) {
            for _ in 0..pow {
                t = t.mul(vi, prec);
            }
        }
        acc = acc.add(&t, prec);
    }
    acc
}

/// Evaluates a polynomial at interval arguments (thin wrapper, kept here so the
/// stepping code reads uniformly).
fn poly_at_intervals(p: &SparsePolynomial, vars: &[Interval], prec: u32) -> Interval {
    p.eval_interval(vars, prec)
}

struct StepResult {
    /// Enclosure of the chain values at the step endpoint.
    end_values: Vec<Interval>,
    /// Enclosure of the chain values over the whole step (for range queries).
    range: Vec<Interval>,
    /// Magnitude of the Lagrange remainder term (step acceptance signal).
    remainder_mag: Dyadic,
}

/// One validated Taylor step for the chain along `axis`, from `t0` with values
/// `y0`, over the signed rational step `h`. `frozen` holds the full coordinate
/// vector; entry `axis` is ignored.
fn taylor_step(
    chain: &PfaffianChain,
    axis: usize,
    frozen: &[Interval],
    t0: &Interval,
    y0: &[Interval],
    h: &Rat,
    order: usize,
    prec: u32,
) -> Option<StepResult> {
    let n = chain.n();
    let l = chain.chain_len();
    let len = order + 1;
    let h_iv = Interval::from_rat(h, prec);
    // Step interval [0,h] (or [h,0] for negative h).
    let step_iv = if h.is_negative() {
        Interval::new(h_iv.lo().clone(), Dyadic::zero())
    } else {
        Interval::new(Dyadic::zero(), h_iv.hi().clone())
    };
    let t_range = t0.add(&step_iv, prec);

    // ---- a-priori enclosure by Picard contraction ----
    let mut boxes: Vec<Interval> = y0.to_vec();
    // Initial inflation guess from one crude Picard application.
    {
        let mut vars: Vec<Interval> = Vec::with_capacity(n + l);
        for (j, fz) in frozen.iter().enumerate().take(n) {
            vars.push(if j == axis { t_range.clone() } else { fz.clone() });
        }
        vars.extend_from_slice(&boxes);
        for i in 0..l {
            let p = poly_at_intervals(chain.defining_poly(i, axis), &vars, prec);
            let delta = p.mul(&step_iv, prec);
            boxes[i] = y0[i].add(&delta, prec).hull(&y0[i]);
        }
    }
    let mut validated = false;
    for _attempt in 0..6 {
        // Inflate a little, then check contraction.
        let inflated: Vec<Interval> = boxes
            .iter()
            .map(|b| {
                let w = b.width().scale2(-3).add(&Dyadic::new(1.into(), -(prec as i64)));
                b.inflate(&w)
            })
            .collect();
        let mut vars: Vec<Interval> = Vec::with_capacity(n + l);
        for (j, fz) in frozen.iter().enumerate().take(n) {
            vars.push(if j == axis { t_range.clone() } else { fz.clone() });
        }
        vars.extend_from_slice(&inflated);
        let mut next: Vec<Interval> = Vec::with_capacity(l);
        let mut ok = true;
        for i in 0..l {
            let p = poly_at_intervals(chain.defining_poly(i, axis), &vars, prec);
            let cand = y0[i].add(&p.mul(&step_iv, prec), prec);
            if !inflated[i].contains_interval(&cand) {
                ok = false;
            }
            next.push(cand);
        }
        if ok {
            boxes = next;
            validated = true;
            break;
        }
        boxes = inflated
            .iter()
            .zip(next.iter())
            .map(|(a, b)| a.hull(b))
            .collect();
    }
    if !validated {
        return None;
    }

    // ---- Taylor coefficients at the point (Picard on truncated series) ----
    let coeffs_point = picard_series(chain, axis, frozen, t0, y0, len, prec);
    // ---- Taylor coefficients over the enclosure (for the remainder) ----
    let coeffs_box = picard_series(chain, axis, frozen, &t_range, &boxes, len, prec);

    // endpoint: sum_{k<order} c_k h^k + c_box[order] h^order
    let mut end_values = Vec::with_capacity(l);
    let mut range = Vec::with_capacity(l);
    let mut remainder_mag = Dyadic::zero();
    let h_pow = {
        let mut p = Interval::one();
        for _ in 0..order {
            p = p.mul(&h_iv, prec);
        }
        p
    };
    for i in 0..l {
        let mut trunc = coeffs_point[i].clone();
        // replace the top coefficient by the box coefficient (Lagrange form)
        trunc.c[order] = coeffs_box[i].c[order].clone();
        let rem = coeffs_box[i].c[order].mul(&h_pow, prec).mag();
        remainder_mag = remainder_mag.max(rem);
        end_values.push(trunc.eval(&h_iv, prec));
        range.push(trunc.eval(&step_iv, prec).intersect_or(&boxes[i]));
    }
    Some(StepResult { end_values, range, remainder_mag })
}

trait IntersectOr {
    fn intersect_or(&self, fallback: &Interval) -> Interval;
}

impl IntersectOr for Interval {
    fn intersect_or(&self, fallback: &Interval) -> Interval {
        self.intersect(fallback).unwrap_or_else(|| fallback.clone())
    }
}

/// Picard iteration on truncated series; returns one series per chain entry.
fn picard_series(
    chain: &PfaffianChain,
    axis: usize,
    frozen: &[Interval],
    t0: &Interval,
    y0: &[Interval],
    len: usize,
    prec: u32,
) -> Vec<Series> {
    let n = chain.n();
    let l = chain.chain_len();
    let mut ys: Vec<Series> = y0.iter().map(|v| Series::constant(v.clone(), len)).collect();
    let mut vars: Vec<Series> = Vec::with_capacity(n + l);
    for (j, fz) in frozen.iter().enumerate().take(n) {
        if j == axis {
            vars.push(Series::linear(t0.clone(), Interval::one(), len));
        } else {
            vars.push(Series::constant(fz.clone(), len));
        }
    }
    for s in ys.iter() {
        vars.push(s.clone());
    }
    for _ in 0..len {
        for (i, y) in ys.iter_mut().enumerate() {
            let rhs = poly_at_series(chain.defining_poly(i, axis), &vars, len, prec);
            let integral = rhs.integrate(prec);
            *y = Series::constant(y0[i].clone(), len).add(&integral, prec);
        }
        for (i, y) in ys.iter().enumerate() {
            vars[n + i] = y.clone();
        }
    }
    ys
}

type LineKey = (usize, Vec<Rat>, u32);
type LineCache = BTreeMap<LineKey, BTreeMap<Rat, Vec<Interval>>>;

static CACHE: Mutex<Option<LineCache>> = Mutex::new(None);

fn with_cache<T>(f: impl FnOnce(&mut LineCache) -> T) -> T {
    let mut guard = CACHE.lock().unwrap();
    let cache = guard.get_or_insert_with(BTreeMap::new);
    // Crude global growth guard.
    if cache.len() > 4096 {
        cache.clear();
    }
    f(cache)
}

/// Clears the evaluation cache (mostly for deterministic benchmarks).
pub fn clear_cache() {
    let mut guard = CACHE.lock().unwrap();
    *guard = None;
}

fn line_key(chain: &PfaffianChain, axis: usize, coords: &[Rat], prec: u32) -> LineKey {
    // The chain pointer is not stable across constructions; key on the chain's
    // structural identity instead: name when present plus basepoint and axis
    // data. Unnamed chains get a key from their defining polynomials' debug
    // rendering, which is canonical because term maps are ordered.
    let mut tag: Vec<Rat> = Vec::new();
    tag.extend_from_slice(chain.basepoint());
    for (j, c) in coords.iter().enumerate() {
        if j != axis {
            tag.push(c.clone());
        }
    }
    let mut name_hash: i64 = 0;
    let descr = match chain.name() {
        Some(n) => n.to_string(),
        None => format!("{:?}", chain),
    };
    for b in descr.bytes() {
        name_hash = name_hash.wrapping_mul(131).wrapping_add(b as i64);
    }
    tag.push(Rat::from_integer(name_hash.into()));
    (axis, tag, prec)
}

/// Chain values at an exact rational point, marching from the basepoint.
pub fn chain_values(chain: &PfaffianChain, x: &[Rat], prec: u32) -> Result<Vec<Interval>> {
    let n = chain.n();
    if x.len() != n {
        return Err(Error::BadInput("evaluation point dimension mismatch".into()));
    }
    if !chain.domain().contains_closed(x) {
        return Err(Error::OutOfDomain);
    }
    if chain.chain_len() == 0 {
        return Ok(vec![]);
    }
    let wp = prec;
    let mut coords: Vec<Rat> = chain.basepoint().to_vec();
    let mut values = chain.initial_intervals(wp)?;
    for axis in 0..n {
        if coords[axis] == x[axis] {
            continue;
        }
        // If the chain is constant along this axis, just move the coordinate.
        let constant_axis = (0..chain.chain_len()).all(|i| chain.defining_poly(i, axis).is_zero());
        if constant_axis {
            coords[axis] = x[axis].clone();
            continue;
        }
        values = march_line(chain, axis, &coords, values, &x[axis], wp)?;
        coords[axis] = x[axis].clone();
    }
    Ok(values)
}

/// Integrates from (coords[axis], values) to target along `axis`, caching
/// intermediate values at rational abscissae on the way.
fn march_line(
    chain: &PfaffianChain,
    axis: usize,
    coords: &[Rat],
    values_at_start: Vec<Interval>,
    target: &Rat,
    prec: u32,
) -> Result<Vec<Interval>> {
    let key = line_key(chain, axis, coords, prec);
    let start = coords[axis].clone();
    // Look for a cached point on this line between start and target, as close to
    // the target as possible.
    let (mut t_cur, mut vals) = with_cache(|c| {
        let line = c.entry(key.clone()).or_default();
        line.insert(start.clone(), values_at_start.clone());
        let lo = start.clone().min(target.clone());
        let hi = start.clone().max(target.clone());
        let mut best: Option<(Rat, Vec<Interval>)> = None;
        let mut best_dist: Option<Rat> = None;
        for (t, v) in line.range(lo..=hi) {
            let d = crate::chain::rat_abs(&(t - target));
            if best_dist.as_ref().map_or(true, |bd| d < *bd) {
                best_dist = Some(d);
                best = Some((t.clone(), v.clone()));
            }
        }
        best.unwrap_or((start.clone(), values_at_start.clone()))
    });

    let order = (prec as usize / 5).clamp(10, 40);
    let base_step = {
        let w = chain.domain().upper()[axis].clone() - chain.domain().lower()[axis].clone();
        w / Rat::from_integer(16.into())
    };
    let mut frozen: Vec<Interval> = coords.iter().map(|c| Interval::from_rat(c, prec)).collect();
    frozen[axis] = Interval::zero(); // unused slot
    let mut steps_taken = 0usize;
    while t_cur != *target {
        let remaining = target - &t_cur;
        let dir_pos = remaining.is_positive();
        let mut h_rat = if crate::chain::rat_abs(&remaining) <= base_step {
            remaining.clone()
        } else if dir_pos {
            base_step.clone()
        } else {
            -base_step.clone()
        };
        // Try the step, halving on validation failure or an oversized remainder.
        let mut halvings = 0;
        loop {
            let t0 = Interval::from_rat(&t_cur, prec);
            match taylor_step(chain, axis, &frozen, &t0, &vals, &h_rat, order, prec) {
                Some(res) => {
                    let rem_ok = res.remainder_mag.is_zero()
                        || res.remainder_mag.ilog2() < -(3 * prec as i64 / 4);
                    if rem_ok || halvings >= 12 {
                        t_cur = &t_cur + &h_rat;
                        vals = res.end_values;
                        break;
                    }
                    halvings += 1;
                    h_rat = h_rat / Rat::from_integer(2.into());
                }
                None => {
                    halvings += 1;
                    if halvings > 24 {
                        return Err(Error::PrecisionExhausted);
                    }
                    h_rat = h_rat / Rat::from_integer(2.into());
                }
            }
        }
        steps_taken += 1;
        if steps_taken > 4096 {
            return Err(Error::PrecisionExhausted);
        }
        // Cache every accepted abscissa.
        let t_snapshot = t_cur.clone();
        let v_snapshot = vals.clone();
        with_cache(|c| {
            c.entry(key.clone()).or_default().insert(t_snapshot, v_snapshot);
        });
    }
    Ok(vals)
}

/// Raw evaluation of a Pfaffian function at a rational point, at working
/// precision `prec` (no width contract).
pub fn eval_raw(f: &PfaffianFunction, x: &[Rat], prec: u32) -> Result<Interval> {
    if let Some(v) = f.eval_exact(x) {
        return Ok(Interval::from_rat(&v, prec.max(64)));
    }
    let values = chain_values(f.chain(), x, prec)?;
    let mut vars: Vec<Interval> = x.iter().map(|q| Interval::from_rat(q, prec)).collect();
    vars.extend(values);
    Ok(f.top().eval_interval(&vars, prec))
}

/// Certified evaluation: returns an interval of width <= 2^(-precision/2),
/// escalating the working precision (doubling, capped) as needed.
pub fn eval(f: &PfaffianFunction, x: &[Rat], precision: u32) -> Result<Interval> {
    let target_bits = (precision / 2) as i64;
    let mut wp = precision.max(32);
    loop {
        let v = eval_raw(f, x, wp)?;
        if v.width_below(target_bits) {
            return Ok(v);
        }
        if wp >= PREC_CAP {
            return Err(Error::PrecisionExhausted);
        }
        wp = (wp * 2).min(PREC_CAP);
    }
}

/// Certified derivative evaluation along a multi-index.
pub fn eval_deriv(f: &PfaffianFunction, alpha: &[u32], x: &[Rat], precision: u32) -> Result<Interval> {
    let d = f.derivative_multi(alpha);
    eval(&d, x, precision)
}

/// Range enclosure of a univariate Pfaffian function over an interval box, by
/// covering the box with validated Taylor steps and hulling their ranges.
pub fn eval_box1(f: &PfaffianFunction, x: &Interval, prec: u32) -> Result<Interval> {
    let n = f.chain().n();
    if n != 1 {
        return Err(Error::BadInput("eval_box1 expects a univariate function".into()));
    }
    if f.is_polynomial() {
        let mut vars = vec![x.clone()];
        vars.extend(std::iter::repeat(Interval::zero()).take(f.chain().chain_len()));
        return Ok(f.top().eval_interval(&vars, prec));
    }
    let dom = f.chain().domain();
    let lo = x.lo().to_rat().max(dom.lower()[0].clone());
    let hi = x.hi().to_rat().min(dom.upper()[0].clone());
    if lo > hi {
        return Err(Error::OutOfDomain);
    }
    if lo == hi {
        return eval_raw(f, std::slice::from_ref(&lo), prec);
    }
    let order = (prec as usize / 5).clamp(8, 24);
    let frozen = vec![Interval::zero()];
    let mut queue: Vec<(Rat, Rat)> = vec![(lo, hi)];
    let mut range_vals: Option<Vec<Interval>> = None;
    let mut work = 0usize;
    while let Some((a, b)) = queue.pop() {
        work += 1;
        if work > 2048 {
            return Err(Error::PrecisionExhausted);
        }
        if a == b {
            continue;
        }
        let va = chain_values(f.chain(), std::slice::from_ref(&a), prec)?;
        let t0 = Interval::from_rat(&a, prec);
        let h = b.clone() - a.clone();
        match taylor_step(f.chain(), 0, &frozen, &t0, &va, &h, order, prec) {
            Some(res) => match &mut range_vals {
                Some(rv) => {
                    for (acc, r) in rv.iter_mut().zip(res.range.iter()) {
                        *acc = acc.hull(r);
                    }
                }
                None => range_vals = Some(res.range),
            },
            None => {
                let m = (a.clone() + b.clone()) / Rat::from_integer(2.into());
                queue.push((a, m.clone()));
                queue.push((m, b));
            }
        }
    }
    let range_vals = range_vals.ok_or(Error::PrecisionExhausted)?;
    let mut vars = vec![x.clone()];
    vars.extend(range_vals);
    Ok(f.top().eval_interval(&vars, prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rat_i64;
    use num_bigint::BigInt;
    use num_traits::One;

    fn rat(n: i64, d: i64) -> Rat {
        rat_i64(n, d)
    }

    /// High-precision series oracle for e: exact rational partial sum.
    fn e_oracle() -> Rat {
        let mut sum = Rat::zero();
        let mut fact = Rat::one();
        for k in 0..40u32 {
            if k > 0 {
                fact *= Rat::from_integer(BigInt::from(k));
            }
            sum += fact.recip();
        }
        sum
    }

    #[test]
    fn exp_at_zero_is_one() {
        let f = catalog::exp_fn();
        let v = eval(&f, &[Rat::zero()], 64).unwrap();
        assert!(v.contains_rat(&rat(1, 1)));
        assert!(v.width_below(30));
    }

    #[test]
    fn exp_at_one_matches_series_oracle() {
        let f = catalog::exp_fn();
        let v = eval(&f, &[rat(1, 1)], 64).unwrap();
        let e = e_oracle();
        assert!(v.contains_rat(&e), "enclosure {:?} misses e", v);
        assert!(v.width_below(30));
        // enclosure of 2.718281828...
        assert!(v.lo().to_rat() > rat(2718281828, 1000000000));
        assert!(v.hi().to_rat() < rat(2718281829, 1000000000));
    }

    #[test]
    fn tanh_at_zero_and_symmetry() {
        let f = catalog::tanh_fn();
        let v = eval(&f, &[Rat::zero()], 64).unwrap();
        assert!(v.contains_zero());
        let a = eval(&f, &[rat(1, 2)], 64).unwrap();
        let b = eval(&f, &[rat(-1, 2)], 64).unwrap();
        // odd function: a + b contains 0
        assert!(a.add(&b.clone(), 64).contains_zero());
        // tanh(1/2) = 0.46211715726...
        assert!(a.lo().to_rat() > rat(46211, 100000));
        assert!(a.hi().to_rat() < rat(46212, 100000));
    }

    #[test]
    fn derivative_consistency_exp() {
        // d/dx exp = exp: eval_deriv vs eval agree.
        let f = catalog::exp_fn();
        for t in [rat(0, 1), rat(1, 3), rat(7, 8), rat(1, 1)] {
            let a = eval_deriv(&f, &[1], std::slice::from_ref(&t), 64).unwrap();
            let b = eval(&f, std::slice::from_ref(&t), 64).unwrap();
            assert!(a.intersect(&b).is_some(), "at {}: {:?} vs {:?}", t, a, b);
        }
    }

    #[test]
    fn eval_deriv_second_order_exp_at_zero() {
        let f = catalog::exp_fn();
        let v = eval_deriv(&f, &[2], &[Rat::zero()], 64).unwrap();
        assert!(v.contains_rat(&rat(1, 1)));
    }

    #[test]
    fn polynomial_exact_path() {
        // x^2 derivative at 1/2 -> 1
        let f = catalog::poly_fn_1d(&[rat(0, 1), rat(0, 1), rat(1, 1)], &rat(-1, 1), &rat(2, 1));
        let v = eval_deriv(&f, &[1], &[rat(1, 2)], 64).unwrap();
        assert!(v.contains_rat(&rat(1, 1)));
        assert!(v.width_below(32));
    }

    #[test]
    fn out_of_domain_rejected() {
        let f = catalog::tanh_fn();
        assert!(matches!(eval(&f, &[rat(3, 1)], 64), Err(Error::OutOfDomain)));
    }

    #[test]
    fn arctan_quarter_pi() {
        let f = catalog::arctan_fn();
        let v = eval(&f, &[rat(1, 1)], 80).unwrap();
        // arctan(1) = pi/4 = 0.78539816...
        assert!(v.lo().to_rat() > rat(78539, 100000));
        assert!(v.hi().to_rat() < rat(78540, 100000));
    }

    #[test]
    fn precision_escalation_tightens() {
        let f = catalog::tanh_fn();
        let coarse = eval(&f, &[rat(9, 10)], 48).unwrap();
        let fine = eval(&f, &[rat(9, 10)], 128).unwrap();
        assert!(fine.width() < coarse.width() || fine.width().is_zero());
        assert!(coarse.intersect(&fine).is_some());
    }

    #[test]
    fn range_enclosure_contains_point_values() {
        let f = catalog::exp_fn();
        let x = Interval::new(
            Dyadic::from_rat(&rat(1, 4), 64, Dir::Down),
            Dyadic::from_rat(&rat(3, 4), 64, Dir::Up),
        );
        let r = eval_box1(&f, &x, 64).unwrap();
        for t in [rat(1, 4), rat(1, 2), rat(3, 4)] {
            let v = eval(&f, std::slice::from_ref(&t), 64).unwrap();
            assert!(r.intersect(&v).is_some(), "range {:?} missing value {:?}", r, v);
        }
    }

    #[test]
    fn lifted_2d_eval_moves_only_active_axis() {
        let f = catalog::tanh_fn();
        let g = catalog::lift_to_2d(&f, 0, &rat(-1, 1), &rat(2, 1)).unwrap();
        let v2 = eval(&g, &[rat(1, 2), rat(1, 5)], 64).unwrap();
        let v1 = eval(&f, &[rat(1, 2)], 64).unwrap();
        assert!(v2.intersect(&v1).is_some());
    }
}
