//! Builtin chains, functions and named example sets.
//!
//! The transcendental inputs every experiment needs: exp, tanh, 1/(1+x^2), arctan
//! (stacked on the previous), and the restricted Weierstrass pair (wp, wp') on a real
//! segment avoiding poles. All basepoints and box corners are rational; wp initial
//! values are computed on demand from the analytic side.

use crate::chain::{ChainKind, DomainBox, InitialValues, PfaffianChain, PfaffianFunction};
use crate::error::{Error, Result};
use crate::num::Interval;
use crate::poly::SparsePolynomial;
use crate::rat_i64;
use crate::Rat;
use num_traits::Zero;
use std::sync::Arc;
use std::sync::OnceLock;

fn dom(lo: (i64, i64), hi: (i64, i64)) -> DomainBox {
    DomainBox::new(vec![rat_i64(lo.0, lo.1)], vec![rat_i64(hi.0, hi.1)]).unwrap()
}

/// exp chain: n=1, l=1, P_{1,1} = y1, basepoint 0, initial 1.
pub fn exp_chain() -> Arc<PfaffianChain> {
    static CHAIN: OnceLock<Arc<PfaffianChain>> = OnceLock::new();
    CHAIN
        .get_or_init(|| {
            Arc::new(
                PfaffianChain::new(
                    1,
                    1,
                    dom((-1, 1), (3, 2)),
                    vec![vec![SparsePolynomial::var(2, 1)]],
                    vec![Rat::zero()],
                    InitialValues::Exact(vec![rat_i64(1, 1)]),
                    ChainKind::Pfaffian,
                )
                .unwrap()
                .with_name("exp"),
            )
        })
        .clone()
}

pub fn exp_fn() -> PfaffianFunction {
    PfaffianFunction::new(exp_chain(), SparsePolynomial::var(2, 1)).unwrap()
}

/// e^{c x + d} with rational c != 0, d, on a chain based at -d/c (so the initial
/// value is exactly 1). The domain must contain the basepoint strictly.
pub fn exp_affine_chain(c: &Rat, d: &Rat, domain: DomainBox) -> Result<Arc<PfaffianChain>> {
    if c.is_zero() {
        return Err(Error::BadInput("exp_affine needs c != 0".into()));
    }
    let base = -(d / c);
    let p = SparsePolynomial::var(2, 1).scale(c);
    Ok(Arc::new(PfaffianChain::new(
        1,
        1,
        domain,
        vec![vec![p]],
        vec![base],
        InitialValues::Exact(vec![rat_i64(1, 1)]),
        ChainKind::Pfaffian,
    )?))
}

/// tanh chain: P_{1,1} = 1 - y1^2, basepoint 0, initial 0.
pub fn tanh_chain() -> Arc<PfaffianChain> {
    static CHAIN: OnceLock<Arc<PfaffianChain>> = OnceLock::new();
    CHAIN
        .get_or_init(|| {
            let one = SparsePolynomial::one(2);
            let y2 = SparsePolynomial::var(2, 1).mul(&SparsePolynomial::var(2, 1));
            Arc::new(
                PfaffianChain::new(
                    1,
                    1,
                    dom((-2, 1), (2, 1)),
                    vec![vec![one.sub(&y2)]],
                    vec![Rat::zero()],
                    InitialValues::Exact(vec![Rat::zero()]),
                    ChainKind::Pfaffian,
                )
                .unwrap()
                .with_name("tanh"),
            )
        })
        .clone()
}

pub fn tanh_fn() -> PfaffianFunction {
    PfaffianFunction::new(tanh_chain(), SparsePolynomial::var(2, 1)).unwrap()
}

/// tanh(c x + d): P_{1,1} = c (1 - y1^2), basepoint -d/c (initial 0).
pub fn tanh_affine_chain(c: &Rat, d: &Rat, domain: DomainBox) -> Result<Arc<PfaffianChain>> {
    if c.is_zero() {
        return Err(Error::BadInput("tanh_affine needs c != 0".into()));
    }
    let base = -(d / c);
    let one = SparsePolynomial::one(2);
    let y2 = SparsePolynomial::var(2, 1).mul(&SparsePolynomial::var(2, 1));
    Ok(Arc::new(PfaffianChain::new(
        1,
        1,
        domain,
        vec![vec![one.sub(&y2).scale(c)]],
        vec![base],
        InitialValues::Exact(vec![Rat::zero()]),
        ChainKind::Pfaffian,
    )?))
}

pub fn tanh_affine_fn(c: &Rat, d: &Rat, domain: DomainBox) -> Result<PfaffianFunction> {
    PfaffianFunction::new(tanh_affine_chain(c, d, domain)?, SparsePolynomial::var(2, 1))
}

/// 1/(1+x^2): P_{1,1} = -2 x y1^2, basepoint 0, initial 1.
pub fn invsq_chain() -> Arc<PfaffianChain> {
    static CHAIN: OnceLock<Arc<PfaffianChain>> = OnceLock::new();
    CHAIN
        .get_or_init(|| {
            let x = SparsePolynomial::var(2, 0);
            let y2 = SparsePolynomial::var(2, 1).mul(&SparsePolynomial::var(2, 1));
            let p = x.mul(&y2).scale(&rat_i64(-2, 1));
            Arc::new(
                PfaffianChain::new(
                    1,
                    1,
                    dom((-2, 1), (2, 1)),
                    vec![vec![p]],
                    vec![Rat::zero()],
                    InitialValues::Exact(vec![rat_i64(1, 1)]),
                    ChainKind::Pfaffian,
                )
                .unwrap()
                .with_name("invsq"),
            )
        })
        .clone()
}

pub fn invsq_fn() -> PfaffianFunction {
    PfaffianFunction::new(invsq_chain(), SparsePolynomial::var(2, 1)).unwrap()
}

/// arctan stacked on 1/(1+x^2): P_{1,1} = -2 x y1^2, P_{2,1} = y1.
pub fn arctan_chain() -> Arc<PfaffianChain> {
    static CHAIN: OnceLock<Arc<PfaffianChain>> = OnceLock::new();
    CHAIN
        .get_or_init(|| {
            let x = SparsePolynomial::var(3, 0);
            let y1 = SparsePolynomial::var(3, 1);
            let p11 = x.mul(&y1).mul(&y1).scale(&rat_i64(-2, 1));
            Arc::new(
                PfaffianChain::new(
                    1,
                    2,
                    dom((-2, 1), (2, 1)),
                    vec![vec![p11], vec![y1]],
                    vec![Rat::zero()],
                    InitialValues::Exact(vec![rat_i64(1, 1), Rat::zero()]),
                    ChainKind::Pfaffian,
                )
                .unwrap()
                .with_name("arctan"),
            )
        })
        .clone()
}

pub fn arctan_fn() -> PfaffianFunction {
    PfaffianFunction::new(arctan_chain(), SparsePolynomial::var(3, 2)).unwrap()
}

/// The (wp, wp') mutual system for invariants (g2, g3): P_{1,1} = y2,
/// P_{2,1} = 6 y1^2 - g2/2, on a rational segment with given basepoint. The
/// initial values must be supplied (they are transcendental in general).
pub fn wp_chain_with_initials(
    g2: &Rat,
    g3: &Rat,
    segment: DomainBox,
    basepoint: Rat,
    initials: InitialValues,
) -> Result<Arc<PfaffianChain>> {
    let _ = g3;
    let y2 = SparsePolynomial::var(3, 2);
    let y1sq = SparsePolynomial::var(3, 1).mul(&SparsePolynomial::var(3, 1));
    let p21 = y1sq.scale(&rat_i64(6, 1)).add(&SparsePolynomial::constant(3, -(g2 / rat_i64(2, 1))));
    Ok(Arc::new(
        PfaffianChain::new(
            1,
            2,
            segment,
            vec![vec![y2], vec![p21]],
            vec![basepoint],
            initials,
            ChainKind::Mutual,
        )?
        .with_name("wp"),
    ))
}

/// Bookkeeping-only wp chain (placeholder zero initials); used where only
/// format/degree/validation are exercised, never evaluation.
pub fn wp_chain_symbolic(g2: &Rat, g3: &Rat) -> Arc<PfaffianChain> {
    wp_chain_with_initials(
        g2,
        g3,
        dom((1, 8), (5, 2)),
        rat_i64(1, 1),
        InitialValues::Exact(vec![Rat::zero(), Rat::zero()]),
    )
    .unwrap()
}

pub fn wp_fn_symbolic(g2: &Rat, g3: &Rat) -> PfaffianFunction {
    PfaffianFunction::new(wp_chain_symbolic(g2, g3), SparsePolynomial::var(3, 1)).unwrap()
}

/// wp evaluation chain for a named curve, with analytic initial values. The
/// segment is a rational interval strictly inside (0, omega_1).
pub fn wp_chain_analytic(a: &Rat, b: &Rat, segment: DomainBox, basepoint: Rat) -> Result<Arc<PfaffianChain>> {
    let g2 = rat_i64(-4, 1) * a;
    let g3 = rat_i64(-4, 1) * b;
    let a_c = a.clone();
    let b_c = b.clone();
    let bp = basepoint.clone();
    let init = InitialValues::Dynamic(Arc::new(move |prec: u32| -> Result<Vec<Interval>> {
        let curve = crate::elliptic::EllipticCurveW::new(a_c.clone(), b_c.clone())?;
        let lat = crate::elliptic::periods(&curve, prec + 16)?;
        let (wp, wpd) = crate::elliptic::wp_eval_real(&lat, &bp, prec + 8)?;
        Ok(vec![wp, wpd])
    }));
    wp_chain_with_initials(&g2, &g3, segment, basepoint, init)
}

/// Lifts a univariate Pfaffian function to ambient dimension 2: the chain moves
/// with `axis`, is constant along the other axis, and the top polynomial is
/// reinterpreted over the variables (x1, x2, y1..yl).
pub fn lift_to_2d(f: &PfaffianFunction, axis: usize, other_lo: &Rat, other_hi: &Rat) -> Result<PfaffianFunction> {
    assert!(axis < 2);
    let chain = f.chain();
    if chain.n() != 1 {
        return Err(Error::BadInput("lift_to_2d expects a univariate chain".into()));
    }
    let l = chain.chain_len();
    let old_arity = 1 + l;
    // variable map: old x -> axis, old y_i -> 2 + i
    let mut map = Vec::with_capacity(old_arity);
    map.push(axis);
    for i in 0..l {
        map.push(2 + i);
    }
    let mut defining = Vec::with_capacity(l);
    for i in 0..l {
        let moving = chain.defining_poly(i, 0).embed(2 + l, &map);
        let frozen = SparsePolynomial::zero(2 + l);
        let row = if axis == 0 { vec![moving, frozen] } else { vec![frozen, moving] };
        defining.push(row);
    }
    let (lo1, hi1) = (chain.domain().lower()[0].clone(), chain.domain().upper()[0].clone());
    let (lower, upper) = if axis == 0 {
        (vec![lo1, other_lo.clone()], vec![hi1, other_hi.clone()])
    } else {
        (vec![other_lo.clone(), lo1], vec![other_hi.clone(), hi1])
    };
    let domain = DomainBox::new(lower, upper)?;
    let base1 = chain.basepoint()[0].clone();
    let base_other = (other_lo + other_hi) / rat_i64(2, 1);
    let basepoint = if axis == 0 { vec![base1, base_other] } else { vec![base_other, base1] };
    let lifted = PfaffianChain::new(
        2,
        l,
        domain,
        defining,
        basepoint,
        chain.initials().clone(),
        chain.kind(),
    )?;
    let top = f.top().embed(2 + l, &map);
    PfaffianFunction::new(Arc::new(lifted), top)
}

/// Univariate polynomial as a Pfaffian function on a rational interval.
pub fn poly_fn_1d(coeffs: &[Rat], lo: &Rat, hi: &Rat) -> PfaffianFunction {
    let mut p = SparsePolynomial::zero(1);
    for (k, c) in coeffs.iter().enumerate() {
        p.add_term(vec![k as u32], c.clone());
    }
    let domain = DomainBox::new(vec![lo.clone()], vec![hi.clone()]).unwrap();
    PfaffianFunction::polynomial(p, domain).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_chains_validate() {
        for f in [exp_fn(), tanh_fn(), invsq_fn(), arctan_fn()] {
            assert!(f.chain().validate().is_valid(), "{:?}", f.chain().name());
        }
    }

    #[test]
    fn arctan_bookkeeping() {
        let f = arctan_fn();
        assert_eq!(f.format(), 3);
        // deg P11 = 3 (x*y1^2), deg P21 = 1, deg top = 1
        assert_eq!(f.degree(), 5);
    }

    #[test]
    fn lift_preserves_validation_and_degree() {
        let f = tanh_fn();
        let g = lift_to_2d(&f, 0, &rat_i64(-1, 1), &rat_i64(2, 1)).unwrap();
        assert!(g.chain().validate().is_valid());
        assert_eq!(g.degree(), f.degree());
        assert_eq!(g.format(), f.format() + 1);
    }
}
