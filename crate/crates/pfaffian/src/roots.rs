//! Certified root isolation for univariate functions.
//!
//! Strategy: recurse on the derivative chain to get monotone pieces (a Pfaffian
//! function has finitely many zeros, and at the bottom an adaptive interval sweep
//! certifies constant sign), then bracket the single root of each monotone piece by
//! sign-certified bisection. Every returned interval carries certified endpoint
//! signs, and the complement of the returned intervals is certified root-free.

use crate::error::{Error, Result};
use crate::num::{Dir, Dyadic, Interval, SignClass};
use crate::realfn::{Budget, RealFn1};
use crate::Rat;
use std::sync::Arc;

/// One isolated root (or a certified root-free gap record).
#[derive(Clone, Debug)]
pub struct IsolatingInterval {
    pub lo: Rat,
    pub hi: Rat,
    /// Certified sign of f just left/right of the bracket: -1 or +1.
    pub sign_left: i8,
    pub sign_right: i8,
    pub multiplicity_hint: u32,
}

impl IsolatingInterval {
    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(2.into())
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn to_interval(&self, prec: u32) -> Interval {
        Interval::new(
            Dyadic::from_rat(&self.lo, prec, Dir::Down),
            Dyadic::from_rat(&self.hi, prec, Dir::Up),
        )
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.lo <= *x && *x <= self.hi
    }
}

/// Result of an adaptive sign sweep over an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignSweep {
    /// Certified constant sign everywhere (+1 or -1).
    Constant(i8),
    /// Certified sign changes: the function provably vanishes somewhere.
    Changes,
    /// Could not certify within the budget/width floor.
    Unknown,
}

/// Adaptive interval-evaluation sweep establishing the function's sign on `[lo, hi]`.
pub fn sign_sweep(
    f: &dyn RealFn1,
    lo: &Rat,
    hi: &Rat,
    prec: u32,
    budget: &Budget,
) -> Result<SignSweep> {
    if f.is_zero_fn() {
        return Ok(SignSweep::Unknown);
    }
    let mut queue = vec![(lo.clone(), hi.clone(), 0u32)];
    let mut seen_pos = false;
    let mut seen_neg = false;
    let mut unknown = false;
    let max_depth = 12u32;
    while let Some((a, b, depth)) = queue.pop() {
        if !budget.spend(1) {
            return Ok(SignSweep::Unknown);
        }
        let x = Interval::new(
            Dyadic::from_rat(&a, prec, Dir::Down),
            Dyadic::from_rat(&b, prec, Dir::Up),
        );
        let v = f.eval_box(&x, prec)?;
        match v.sign_class() {
            SignClass::Positive => seen_pos = true,
            SignClass::Negative => seen_neg = true,
            _ => {
                if depth >= max_depth {
                    unknown = true;
                } else {
                    let m = (&a + &b) / Rat::from_integer(2.into());
                    queue.push((a, m.clone(), depth + 1));
                    queue.push((m, b, depth + 1));
                }
            }
        }
        if seen_pos && seen_neg {
            return Ok(SignSweep::Changes);
        }
    }
    if unknown {
        Ok(SignSweep::Unknown)
    } else if seen_pos {
        Ok(SignSweep::Constant(1))
    } else if seen_neg {
        Ok(SignSweep::Constant(-1))
    } else {
        Ok(SignSweep::Unknown)
    }
}

/// Sign query outcome at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointSign {
    Pos,
    Neg,
    /// Certified exactly zero (degenerate enclosure at 0).
    ExactZero,
}

/// Certified sign query at an exact rational point, escalating the working
/// precision. Detects certified exact zeros (degenerate zero enclosures, as
/// produced by exact polynomial evaluation or exact initial values).
pub fn sign_query(f: &dyn RealFn1, x: &Rat, prec: u32) -> Result<PointSign> {
    let mut wp = prec.max(32);
    loop {
        let v = f.eval_point(x, wp)?;
        match v.sign_class() {
            SignClass::Positive => return Ok(PointSign::Pos),
            SignClass::Negative => return Ok(PointSign::Neg),
            SignClass::Zero => return Ok(PointSign::ExactZero),
            SignClass::Mixed => {}
        }
        if wp >= crate::ode::PREC_CAP {
            return Err(Error::PrecisionExhausted);
        }
        wp *= 2;
    }
}

/// Certified nonzero sign at a point; errors if the value is (or is numerically
/// indistinguishable from) zero.
pub fn sign_at(f: &dyn RealFn1, x: &Rat, prec: u32) -> Result<i8> {
    match sign_query(f, x, prec)? {
        PointSign::Pos => Ok(1),
        PointSign::Neg => Ok(-1),
        PointSign::ExactZero => Err(Error::PrecisionExhausted),
    }
}

/// Bisects a certified sign-change bracket down to width <= 2^-target_bits.
/// A probe landing exactly on a root collapses the bracket to that point.
fn refine_bracket(
    f: &dyn RealFn1,
    mut lo: Rat,
    mut hi: Rat,
    sign_lo: i8,
    prec: u32,
    target_bits: u32,
) -> Result<(Rat, Rat)> {
    let target = Rat::new(1.into(), crate::Int::from(2).pow(target_bits));
    let probe_fracs = [(1i64, 2i64), (2, 5), (4, 7), (5, 11)];
    'outer: while &hi - &lo > target {
        for (num, den) in probe_fracs {
            let mid = &lo + (&hi - &lo) * Rat::new(num.into(), den.into());
            match sign_query(f, &mid, prec) {
                Ok(PointSign::ExactZero) => {
                    return Ok((mid.clone(), mid));
                }
                Ok(PointSign::Pos) => {
                    if sign_lo > 0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    continue 'outer;
                }
                Ok(PointSign::Neg) => {
                    if sign_lo < 0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    continue 'outer;
                }
                Err(Error::PrecisionExhausted) => continue, // try the next probe
                Err(e) => return Err(e),
            }
        }
        break; // all probes undecidable: keep the (sound) wider bracket
    }
    Ok((lo, hi))
}

/// Isolates all roots of `f` on the interval `(lo, hi)`.
///
/// Postcondition: each returned interval contains exactly one root, certified
/// by an endpoint sign change; the complement of the intervals is certified
/// root-free. Results are sorted.
pub fn isolate_roots(
    f: &dyn RealFn1,
    lo: &Rat,
    hi: &Rat,
    prec: u32,
    budget: &Budget,
) -> Result<Vec<IsolatingInterval>> {
    isolate_roots_depth(f, lo, hi, prec, budget, 6)
}

fn isolate_roots_depth(
    f: &dyn RealFn1,
    lo: &Rat,
    hi: &Rat,
    prec: u32,
    budget: &Budget,
    depth: u32,
) -> Result<Vec<IsolatingInterval>> {
    if f.is_zero_fn() {
        return Err(Error::IdenticallyZeroSuspected);
    }
    if let SignSweep::Constant(_) = sign_sweep(f, lo, hi, prec, budget)? {
        return Ok(vec![]);
    }
    if depth == 0 {
        return Err(Error::PrecisionExhausted);
    }
    let df = f.differentiate()?;
    // Monotone pieces: breakpoints are the derivative's roots.
    let crit: Vec<IsolatingInterval> = if df.is_zero_fn() {
        vec![]
    } else {
        match sign_sweep(df.as_ref(), lo, hi, prec, budget)? {
            SignSweep::Constant(_) => vec![],
            _ => isolate_roots_depth(df.as_ref(), lo, hi, prec, budget, depth - 1)?,
        }
    };

    // Breakpoint brackets: domain ends plus critical brackets.
    let mut marks: Vec<(Rat, Rat)> = Vec::with_capacity(crit.len() + 2);
    marks.push((lo.clone(), lo.clone()));
    for c in crit.iter() {
        marks.push((c.lo.clone(), c.hi.clone()));
    }
    marks.push((hi.clone(), hi.clone()));

    let mut out: Vec<IsolatingInterval> = Vec::new();
    let mut exact_roots: Vec<Rat> = Vec::new();
    let target_bits = prec.min(80);

    for w in marks.windows(2) {
        let (a, b) = (&w[0].1, &w[1].0);
        if a >= b {
            continue;
        }
        if !budget.spend(4) {
            return Err(Error::BudgetExhausted("root isolation".into()));
        }
        let qa = sign_query(f, a, prec)?;
        let qb = sign_query(f, b, prec)?;
        // f is strictly monotone on (a, b) (the derivative is root-free there),
        // so an endpoint zero precludes an interior root on this gap.
        if qa == PointSign::ExactZero && a > lo {
            exact_roots.push(a.clone());
        }
        if qb == PointSign::ExactZero && b < hi {
            exact_roots.push(b.clone());
        }
        if let (PointSign::Pos | PointSign::Neg, PointSign::Pos | PointSign::Neg) = (qa, qb) {
            let sa: i8 = if qa == PointSign::Pos { 1 } else { -1 };
            let sb: i8 = if qb == PointSign::Pos { 1 } else { -1 };
            if sa != sb {
                let (rlo, rhi) = refine_bracket(f, a.clone(), b.clone(), sa, prec, target_bits)?;
                out.push(IsolatingInterval {
                    lo: rlo,
                    hi: rhi,
                    sign_left: sa,
                    sign_right: sb,
                    multiplicity_hint: 1,
                });
            }
        }
    }

    // Roots hiding inside a nondegenerate critical bracket: detected by a sign
    // change across the bracket itself.
    for c in crit.iter() {
        if c.lo <= *lo || c.hi >= *hi || c.lo == c.hi {
            continue;
        }
        let qa = sign_query(f, &c.lo, prec)?;
        let qb = sign_query(f, &c.hi, prec)?;
        match (qa, qb) {
            (PointSign::ExactZero, _) | (_, PointSign::ExactZero) => {
                // handled by the gap pass (shared endpoints)
            }
            _ => {
                let sa: i8 = if qa == PointSign::Pos { 1 } else { -1 };
                let sb: i8 = if qb == PointSign::Pos { 1 } else { -1 };
                if sa != sb {
                    let (rlo, rhi) =
                        refine_bracket(f, c.lo.clone(), c.hi.clone(), sa, prec, target_bits)?;
                    out.push(IsolatingInterval {
                        lo: rlo,
                        hi: rhi,
                        sign_left: sa,
                        sign_right: sb,
                        multiplicity_hint: 1,
                    });
                } else {
                    // Same sign on both sides; the bracket may still hide a tangency.
                    let x = Interval::new(
                        Dyadic::from_rat(&c.lo, prec, Dir::Down),
                        Dyadic::from_rat(&c.hi, prec, Dir::Up),
                    );
                    let v = f.eval_box(&x, prec)?;
                    if v.contains_zero() {
                        let deeper = sign_sweep(
                            f,
                            &c.lo,
                            &c.hi,
                            prec.saturating_mul(2).min(crate::ode::PREC_CAP),
                            budget,
                        )?;
                        if !matches!(deeper, SignSweep::Constant(_)) {
                            return Err(Error::PrecisionExhausted);
                        }
                    }
                }
            }
        }
    }

    // Exact roots found at gap endpoints: dedupe and attach side signs.
    exact_roots.sort();
    exact_roots.dedup();
    for root in exact_roots {
        let left_sample = nearest_sample_left(&root, &marks, lo);
        let right_sample = nearest_sample_right(&root, &marks, hi);
        let sl = sign_at(f, &left_sample, prec).unwrap_or(0);
        let sr = sign_at(f, &right_sample, prec).unwrap_or(0);
        out.push(IsolatingInterval {
            lo: root.clone(),
            hi: root,
            sign_left: sl,
            sign_right: sr,
            multiplicity_hint: if sl == sr && sl != 0 { 2 } else { 1 },
        });
    }

    out.sort_by(|p, q| p.lo.cmp(&q.lo));
    Ok(out)
}

fn nearest_sample_left(root: &Rat, marks: &[(Rat, Rat)], lo: &Rat) -> Rat {
    let mut left = lo.clone();
    for (_, hi_m) in marks.iter() {
        if hi_m < root && *hi_m > left {
            left = hi_m.clone();
        }
    }
    (&left + root) / Rat::from_integer(2.into())
}

fn nearest_sample_right(root: &Rat, marks: &[(Rat, Rat)], hi: &Rat) -> Rat {
    let mut right = hi.clone();
    for (lo_m, _) in marks.iter() {
        if lo_m > root && *lo_m < right {
            right = lo_m.clone();
        }
    }
    (root + &right) / Rat::from_integer(2.into())
}

/// Monotonicity behavior of f^{(r)} on a piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Behavior {
    Increasing,
    Decreasing,
    Constant,
}

/// A maximal interval on which f^{(r)} is strictly increasing, strictly
/// decreasing, or constant.
#[derive(Clone, Debug)]
pub struct MonotonePiece {
    pub lo: Rat,
    pub hi: Rat,
    pub behavior: Behavior,
}

/// Partition of the domain (minus isolated points) into pieces on which f^{(r)}
/// is strictly monotone or constant, certified by the sign of f^{(r+1)}.
pub fn monotonicity_partition(
    f: &dyn RealFn1,
    r: u32,
    lo: &Rat,
    hi: &Rat,
    prec: u32,
    budget: &Budget,
) -> Result<Vec<MonotonePiece>> {
    let mut g: Arc<dyn RealFn1> = f.differentiate()?;
    for _ in 0..r {
        g = g.differentiate()?;
    }
    if g.is_zero_fn() {
        return Ok(vec![MonotonePiece {
            lo: lo.clone(),
            hi: hi.clone(),
            behavior: Behavior::Constant,
        }]);
    }
    let roots = match sign_sweep(g.as_ref(), lo, hi, prec, budget)? {
        SignSweep::Constant(s) => {
            return Ok(vec![MonotonePiece {
                lo: lo.clone(),
                hi: hi.clone(),
                behavior: if s > 0 { Behavior::Increasing } else { Behavior::Decreasing },
            }]);
        }
        _ => isolate_roots(g.as_ref(), lo, hi, prec, budget)?,
    };
    let mut cuts: Vec<Rat> = vec![lo.clone()];
    for rt in roots.iter() {
        cuts.push(rt.midpoint());
    }
    cuts.push(hi.clone());
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a >= b {
            continue;
        }
        let sample = (a + b) / Rat::from_integer(2.into());
        let s = sign_at(g.as_ref(), &sample, prec)?;
        out.push(MonotonePiece {
            lo: a.clone(),
            hi: b.clone(),
            behavior: if s > 0 { Behavior::Increasing } else { Behavior::Decreasing },
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rat_i64;
    use crate::realfn::ShiftedFn;
    use num_traits::Zero;

    /// Independent high-precision oracle for ln 2 via the atanh series:
    /// ln 2 = 2 atanh(1/3) = 2 sum (1/3)^(2k+1)/(2k+1).
    fn ln2_oracle() -> (Rat, Rat) {
        let mut sum = Rat::zero();
        let third = rat_i64(1, 3);
        let mut pow = third.clone();
        for k in 0..40i64 {
            sum += &pow / Rat::from_integer((2 * k + 1).into());
            pow *= &third * &third;
        }
        let tail = &pow / Rat::from_integer(81.into());
        (sum * rat_i64(2, 1), tail * rat_i64(4, 1))
    }

    #[test]
    fn exp_minus_two_has_one_root_at_ln2() {
        let f = catalog::exp_fn();
        let shifted = ShiftedFn { f: std::sync::Arc::new(f), minus: rat_i64(2, 1) };
        let budget = Budget::default();
        let roots = isolate_roots(&shifted, &rat_i64(0, 1), &rat_i64(1, 1), 48, &budget).unwrap();
        assert_eq!(roots.len(), 1);
        let (ln2, err) = ln2_oracle();
        assert!(roots[0].lo < ln2.clone() + err.clone());
        assert!(roots[0].hi > ln2 - err);
        assert!(roots[0].width() < rat_i64(1, 1 << 30));
    }

    #[test]
    fn tanh_root_at_zero() {
        let f = catalog::tanh_fn();
        let budget = Budget::default();
        let roots = isolate_roots(&f, &rat_i64(-1, 1), &rat_i64(1, 1), 48, &budget).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].contains(&Rat::zero()) || roots[0].width() < rat_i64(1, 1000));
    }

    #[test]
    fn positive_function_has_no_roots() {
        let f = catalog::exp_fn();
        let budget = Budget::default();
        let roots = isolate_roots(&f, &rat_i64(0, 1), &rat_i64(1, 1), 48, &budget).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn cubic_three_roots() {
        // x^3 - x on (-2, 2): roots -1, 0, 1
        let f = catalog::poly_fn_1d(
            &[rat_i64(0, 1), rat_i64(-1, 1), rat_i64(0, 1), rat_i64(1, 1)],
            &rat_i64(-2, 1),
            &rat_i64(2, 1),
        );
        let budget = Budget::default();
        let roots = isolate_roots(&f, &rat_i64(-2, 1), &rat_i64(2, 1), 48, &budget).unwrap();
        assert_eq!(roots.len(), 3);
        for (root, expected) in roots.iter().zip([-1i64, 0, 1]) {
            assert!(root.contains(&rat_i64(expected, 1)));
        }
    }

    #[test]
    fn monotonicity_of_x_cubed_first_derivative() {
        // f = x^3, r = 1: f' = 3x^2 decreasing then increasing, split at 0.
        let f = catalog::poly_fn_1d(
            &[rat_i64(0, 1), rat_i64(0, 1), rat_i64(0, 1), rat_i64(1, 1)],
            &rat_i64(-1, 1),
            &rat_i64(1, 1),
        );
        let budget = Budget::default();
        let pieces =
            monotonicity_partition(&f, 1, &rat_i64(-1, 1), &rat_i64(1, 1), 48, &budget).unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].behavior, Behavior::Decreasing);
        assert_eq!(pieces[1].behavior, Behavior::Increasing);
    }

    #[test]
    fn monotonicity_exp_always_increasing() {
        let f = catalog::exp_fn();
        let budget = Budget::default();
        for r in 0..3 {
            let pieces =
                monotonicity_partition(&f, r, &rat_i64(0, 1), &rat_i64(1, 1), 48, &budget)
                    .unwrap();
            assert_eq!(pieces.len(), 1);
            assert_eq!(pieces[0].behavior, Behavior::Increasing);
        }
    }

    #[test]
    fn monotonicity_tanh_order_zero() {
        // tanh' = 1 - tanh^2 > 0: single increasing piece at r = 0.
        let f = catalog::tanh_fn();
        let budget = Budget::default();
        let pieces =
            monotonicity_partition(&f, 0, &rat_i64(-1, 1), &rat_i64(1, 1), 48, &budget).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].behavior, Behavior::Increasing);
    }

    #[test]
    fn polynomial_constant_piece() {
        // f = x^2, r = 2: f'' = 2 constant.
        let f = catalog::poly_fn_1d(
            &[rat_i64(0, 1), rat_i64(0, 1), rat_i64(1, 1)],
            &rat_i64(0, 1),
            &rat_i64(1, 1),
        );
        let budget = Budget::default();
        let pieces =
            monotonicity_partition(&f, 2, &rat_i64(0, 1), &rat_i64(1, 1), 48, &budget).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].behavior, Behavior::Constant);
    }
}
