//! Semi- and sub-Pfaffian set descriptions with format/degree metadata and
//! certified three-valued membership.
//!
//! Equality conditions on transcendental functions are only decidable at
//! certified exact values, so membership answers In/Out only when every
//! relevant leaf sign is certified, and Unknown otherwise. Decided answers are
//! never wrong; raising precision can only resolve Unknown.

use crate::chain::{DomainBox, InitialValues, PfaffianChain, PfaffianFunction};
use crate::error::{Error, Result};
use crate::num::{Interval, SignClass};
use crate::ode;
use crate::realfn::Budget;
use crate::Rat;
use std::fmt::Debug;
use std::sync::Arc;

/// Three-valued membership verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    Unknown,
}

impl Membership {
    pub fn negate(self) -> Membership {
        match self {
            Membership::In => Membership::Out,
            Membership::Out => Membership::In,
            Membership::Unknown => Membership::Unknown,
        }
    }
}

/// A certified scalar evaluator that is not given by an explicit chain; used
/// for the Betti-coordinate encodings of torsion sets, which carry declared
/// format/degree bookkeeping from their construction.
pub trait AnalyticAtom: Debug + Send + Sync {
    fn eval_point(&self, x: &[Rat], prec: u32) -> Result<Interval>;
    fn format(&self) -> u32;
    fn degree(&self) -> u32;
    /// Structural exact-vanishing decision, when the atom can supply one.
    fn exact_zero_at(&self, _x: &[Rat]) -> Option<bool> {
        None
    }
}

/// The function of a sign condition.
#[derive(Clone, Debug)]
pub enum AtomFn {
    Pfaffian(PfaffianFunction),
    Analytic(Arc<dyn AnalyticAtom>),
}

impl AtomFn {
    pub fn format(&self) -> u32 {
        match self {
            AtomFn::Pfaffian(f) => f.format(),
            AtomFn::Analytic(a) => a.format(),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            AtomFn::Pfaffian(f) => f.degree(),
            AtomFn::Analytic(a) => a.degree(),
        }
    }

    pub fn eval_point(&self, x: &[Rat], prec: u32) -> Result<Interval> {
        match self {
            AtomFn::Pfaffian(f) => ode::eval_raw(f, x, prec),
            AtomFn::Analytic(a) => a.eval_point(x, prec),
        }
    }

    pub fn as_pfaffian(&self) -> Option<&PfaffianFunction> {
        match self {
            AtomFn::Pfaffian(f) => Some(f),
            AtomFn::Analytic(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CondKind {
    EqZero,
    Gt0,
}

#[derive(Clone, Debug)]
pub struct SignCondition {
    pub f: AtomFn,
    pub kind: CondKind,
}

#[derive(Clone, Debug)]
pub enum SetFormula {
    True,
    False,
    Leaf(SignCondition),
    And(Vec<SetFormula>),
    Or(Vec<SetFormula>),
    Not(Box<SetFormula>),
}

impl SetFormula {
    pub fn leaves(&self) -> Vec<&SignCondition> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a SignCondition>) {
        match self {
            SetFormula::True | SetFormula::False => {}
            SetFormula::Leaf(c) => out.push(c),
            SetFormula::And(v) | SetFormula::Or(v) => {
                for f in v {
                    f.collect_leaves(out);
                }
            }
            SetFormula::Not(f) => f.collect_leaves(out),
        }
    }
}

/// A semi-Pfaffian set: a boolean sign-condition formula over a box.
#[derive(Clone, Debug)]
pub struct SemiPfaffianSet {
    pub formula: SetFormula,
    pub ambient: DomainBox,
    pub n: usize,
    /// Presentation-level star-format/degree metadata. Carried but not
    /// consumed by any algorithm here.
    pub star_format: Option<u32>,
    pub star_degree: Option<u32>,
}

impl SemiPfaffianSet {
    pub fn new(formula: SetFormula, ambient: DomainBox) -> SemiPfaffianSet {
        let n = ambient.dim();
        SemiPfaffianSet { formula, ambient, n, star_format: None, star_degree: None }
    }

    /// Format: max of leaf formats; ambient dimension when there are no leaves.
    pub fn format(&self) -> u32 {
        self.formula
            .leaves()
            .iter()
            .map(|c| c.f.format())
            .max()
            .unwrap_or(self.n as u32)
    }

    /// Degree: sum of leaf degrees (0 for the empty formula).
    pub fn degree(&self) -> u32 {
        self.formula.leaves().iter().map(|c| c.f.degree()).sum()
    }
}

/// Certified three-valued truth of one sign condition at a point.
fn leaf_truth(cond: &SignCondition, x: &[Rat], prec: u32) -> Membership {
    // Exact decision paths first.
    match &cond.f {
        AtomFn::Pfaffian(f) => {
            if let Some(v) = f.eval_exact(x) {
                use num_traits::Signed;
                use num_traits::Zero;
                return match cond.kind {
                    CondKind::EqZero => {
                        if v.is_zero() {
                            Membership::In
                        } else {
                            Membership::Out
                        }
                    }
                    CondKind::Gt0 => {
                        if v.is_positive() {
                            Membership::In
                        } else {
                            Membership::Out
                        }
                    }
                };
            }
        }
        AtomFn::Analytic(a) => {
            if let Some(z) = a.exact_zero_at(x) {
                return match (cond.kind, z) {
                    (CondKind::EqZero, true) => Membership::In,
                    (CondKind::EqZero, false) => Membership::Out,
                    (CondKind::Gt0, true) => Membership::Out,
                    (CondKind::Gt0, false) => Membership::Unknown,
                };
            }
        }
    }
    let v = match cond.f.eval_point(x, prec) {
        Ok(v) => v,
        Err(_) => return Membership::Unknown,
    };
    match cond.kind {
        CondKind::EqZero => match v.sign_class() {
            SignClass::Zero => Membership::In,
            SignClass::Positive | SignClass::Negative => Membership::Out,
            SignClass::Mixed => Membership::Unknown,
        },
        CondKind::Gt0 => match v.sign_class() {
            SignClass::Positive => Membership::In,
            SignClass::Negative | SignClass::Zero => Membership::Out,
            SignClass::Mixed => {
                // hi <= 0 certifies "not greater than zero"
                if !v.hi().is_positive() {
                    Membership::Out
                } else {
                    Membership::Unknown
                }
            }
        },
    }
}

fn formula_truth(formula: &SetFormula, x: &[Rat], prec: u32) -> Membership {
    match formula {
        SetFormula::True => Membership::In,
        SetFormula::False => Membership::Out,
        SetFormula::Leaf(c) => leaf_truth(c, x, prec),
        SetFormula::Not(f) => formula_truth(f, x, prec).negate(),
        SetFormula::And(fs) => {
            let mut any_unknown = false;
            for f in fs {
                match formula_truth(f, x, prec) {
                    Membership::Out => return Membership::Out,
                    Membership::Unknown => any_unknown = true,
                    Membership::In => {}
                }
            }
            if any_unknown {
                Membership::Unknown
            } else {
                Membership::In
            }
        }
        SetFormula::Or(fs) => {
            let mut any_unknown = false;
            for f in fs {
                match formula_truth(f, x, prec) {
                    Membership::In => return Membership::In,
                    Membership::Unknown => any_unknown = true,
                    Membership::Out => {}
                }
            }
            if any_unknown {
                Membership::Unknown
            } else {
                Membership::Out
            }
        }
    }
}

/// Certified three-valued membership. Decided verdicts are never wrong;
/// raising precision only resolves Unknown.
pub fn membership(set: &SemiPfaffianSet, x: &[Rat], precision: u32) -> Result<Membership> {
    if x.len() != set.n {
        return Err(Error::BadInput("membership point dimension mismatch".into()));
    }
    if !set.ambient.contains_closed(x) {
        return Err(Error::OutOfDomain);
    }
    let mut wp = precision.max(32);
    let wp_cap = (precision.max(32)).saturating_mul(4).min(ode::PREC_CAP);
    loop {
        let m = formula_truth(&set.formula, x, wp);
        if m != Membership::Unknown || wp >= wp_cap {
            return Ok(m);
        }
        wp = (wp * 2).min(wp_cap);
    }
}

/// A sub-Pfaffian set: projection of a semi-Pfaffian set to the first k coordinates.
#[derive(Clone, Debug)]
pub struct SubPfaffianSet {
    pub source: SemiPfaffianSet,
    pub k: usize,
}

impl SubPfaffianSet {
    pub fn new(source: SemiPfaffianSet, k: usize) -> Result<SubPfaffianSet> {
        if k > source.n {
            return Err(Error::BadInput("projection arity exceeds ambient dimension".into()));
        }
        Ok(SubPfaffianSet { source, k })
    }

    pub fn format(&self) -> u32 {
        self.source.format()
    }

    pub fn degree(&self) -> u32 {
        self.source.degree()
    }
}

/// Restricts a Pfaffian function on an n-dimensional chain to the line where
/// coordinate `axis` is frozen at the exact rational `value`: the result is a
/// function on an (n-1)-dimensional chain whose initial values are computed
/// from the parent chain on demand.
pub fn restrict_axis(f: &PfaffianFunction, axis: usize, value: &Rat) -> Result<PfaffianFunction> {
    let chain = f.chain().clone();
    let n = chain.n();
    let l = chain.chain_len();
    if axis >= n {
        return Err(Error::BadInput("restrict axis out of range".into()));
    }
    if n < 2 {
        return Err(Error::BadInput("cannot restrict a univariate chain".into()));
    }
    if value < &chain.domain().lower()[axis] || value > &chain.domain().upper()[axis] {
        return Err(Error::OutOfDomain);
    }
    // Remaining axes keep their order. Note: polynomial variable layout is
    // (x_1..x_n, y_1..y_l); substituting x_axis shifts later x's down by one.
    let keep: Vec<usize> = (0..n).filter(|&j| j != axis).collect();
    let mut defining = Vec::with_capacity(l);
    for i in 0..l {
        let mut row = Vec::with_capacity(n - 1);
        for &j in keep.iter() {
            row.push(chain.defining_poly(i, j).substitute_const(axis, value));
        }
        defining.push(row);
    }
    let lower: Vec<Rat> = keep.iter().map(|&j| chain.domain().lower()[j].clone()).collect();
    let upper: Vec<Rat> = keep.iter().map(|&j| chain.domain().upper()[j].clone()).collect();
    let domain = DomainBox::new(lower, upper)?;
    let basepoint: Vec<Rat> = keep.iter().map(|&j| chain.basepoint()[j].clone()).collect();
    // Anchor: parent chain values at the point with x_axis = value and the
    // other coordinates at the parent basepoint.
    let parent = chain.clone();
    let mut anchor: Vec<Rat> = parent.basepoint().to_vec();
    anchor[axis] = value.clone();
    let initials = InitialValues::Dynamic(Arc::new(move |prec: u32| {
        ode::chain_values(&parent, &anchor, prec)
    }));
    let kind = chain.kind();
    let restricted = PfaffianChain::new(n - 1, l, domain, defining, basepoint, initials, kind)?
        .with_name(&format!("{}|x{}={}", chain.name().unwrap_or("anon"), axis, value));
    let top = f.top().substitute_const(axis, value);
    PfaffianFunction::new(Arc::new(restricted), top)
}

/// Restricts every Pfaffian leaf of a formula (used for fiber queries).
pub fn restrict_formula(formula: &SetFormula, axis: usize, value: &Rat) -> Result<SetFormula> {
    Ok(match formula {
        SetFormula::True => SetFormula::True,
        SetFormula::False => SetFormula::False,
        SetFormula::Leaf(c) => {
            let f = match &c.f {
                AtomFn::Pfaffian(f) => AtomFn::Pfaffian(restrict_axis(f, axis, value)?),
                AtomFn::Analytic(_) => {
                    return Err(Error::BadInput(
                        "cannot restrict an analytic atom along an axis".into(),
                    ))
                }
            };
            SetFormula::Leaf(SignCondition { f, kind: c.kind })
        }
        SetFormula::And(v) => SetFormula::And(
            v.iter().map(|f| restrict_formula(f, axis, value)).collect::<Result<_>>()?,
        ),
        SetFormula::Or(v) => SetFormula::Or(
            v.iter().map(|f| restrict_formula(f, axis, value)).collect::<Result<_>>()?,
        ),
        SetFormula::Not(f) => SetFormula::Not(Box::new(restrict_formula(f, axis, value)?)),
    })
}

/// Certified membership for a projection: searches the fiber over the query
/// point. In requires a certified witness; Out requires certified fiber
/// emptiness; budget exhaustion folds into Unknown.
pub fn sub_membership(
    set: &SubPfaffianSet,
    y: &[Rat],
    precision: u32,
    budget: &Budget,
) -> Result<Membership> {
    if y.len() != set.k {
        return Err(Error::BadInput("query arity mismatch".into()));
    }
    if budget.exhausted() {
        return Ok(Membership::Unknown);
    }
    let n = set.source.n;
    if set.k == n {
        return membership(&set.source, y, precision);
    }
    if n - set.k != 1 {
        return Err(Error::BadInput("fiber search supports codimension-1 projections".into()));
    }
    // Freeze the first k coordinates one by one; only the last axis remains.
    let mut formula = set.source.formula.clone();
    for v in y.iter() {
        formula = restrict_formula(&formula, 0, v)?;
    }
    let fiber = SemiPfaffianSet::new(
        formula,
        DomainBox::new(
            vec![set.source.ambient.lower()[n - 1].clone()],
            vec![set.source.ambient.upper()[n - 1].clone()],
        )?,
    );
    match crate::celldec::decompose_1d(&fiber, precision, budget) {
        Ok(cells) => {
            let mut any_unknown = false;
            for cell in cells.iter() {
                match cell.label {
                    Membership::In => return Ok(Membership::In),
                    Membership::Unknown => any_unknown = true,
                    Membership::Out => {}
                }
            }
            if any_unknown {
                Ok(Membership::Unknown)
            } else {
                Ok(Membership::Out)
            }
        }
        Err(Error::BudgetExhausted(_)) | Err(Error::PrecisionExhausted) => Ok(Membership::Unknown),
        Err(e) => Err(e),
    }
}

/// Leaf helper: f (kind) 0.
pub fn leaf(f: PfaffianFunction, kind: CondKind) -> SetFormula {
    SetFormula::Leaf(SignCondition { f: AtomFn::Pfaffian(f), kind })
}

/// All Pfaffian leaves' chain domains contain the set's box.
pub fn leaves_share_box(set: &SemiPfaffianSet) -> bool {
    set.formula.leaves().iter().all(|c| match &c.f {
        AtomFn::Pfaffian(f) => {
            let d = f.chain().domain();
            d.dim() == set.n
                && d.lower().iter().zip(set.ambient.lower().iter()).all(|(dl, sl)| dl <= sl)
                && d.upper().iter().zip(set.ambient.upper().iter()).all(|(du, su)| du >= su)
        }
        AtomFn::Analytic(_) => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rat_i64;

    fn unit_box2() -> DomainBox {
        DomainBox::unit(2)
    }

    /// {y > tanh(x)} on (0,1)^2 via the lifted tanh chain.
    fn above_tanh() -> SemiPfaffianSet {
        let t = catalog::tanh_fn();
        let lifted = catalog::lift_to_2d(&t, 0, &rat_i64(-1, 1), &rat_i64(2, 1)).unwrap();
        let y = crate::poly::SparsePolynomial::var(3, 1);
        let top = y.sub(lifted.top());
        let f = PfaffianFunction::new(lifted.chain().clone(), top).unwrap();
        SemiPfaffianSet::new(leaf(f, CondKind::Gt0), unit_box2())
    }

    /// {e^x = 2} on (0,1).
    fn exp_eq_two() -> SemiPfaffianSet {
        let e = catalog::exp_fn();
        let top = e.top().sub(&crate::poly::SparsePolynomial::constant(2, rat_i64(2, 1)));
        let f = PfaffianFunction::new(e.chain().clone(), top).unwrap();
        SemiPfaffianSet::new(
            leaf(f, CondKind::EqZero),
            DomainBox::new(vec![rat_i64(0, 1)], vec![rat_i64(1, 1)]).unwrap(),
        )
    }

    #[test]
    fn format_and_degree_of_graph_set() {
        // {e^x - y = 0} on (0,1)^2: chain n=2, l=1 gives format 3.
        let e = catalog::exp_fn();
        let lifted = catalog::lift_to_2d(&e, 0, &rat_i64(-1, 1), &rat_i64(4, 1)).unwrap();
        let y = crate::poly::SparsePolynomial::var(3, 1);
        let top = lifted.top().sub(&y);
        let f = PfaffianFunction::new(lifted.chain().clone(), top).unwrap();
        let deg = f.degree();
        let s = SemiPfaffianSet::new(leaf(f, CondKind::EqZero), unit_box2());
        assert_eq!(s.format(), 3);
        assert_eq!(s.degree(), deg);
        assert!(leaves_share_box(&s));
    }

    #[test]
    fn degree_sums_over_leaves() {
        let a = catalog::poly_fn_1d(
            &[rat_i64(0, 1), rat_i64(0, 1), rat_i64(1, 1)],
            &rat_i64(0, 1),
            &rat_i64(1, 1),
        );
        let b = catalog::poly_fn_1d(
            &[rat_i64(1, 1), rat_i64(0, 1), rat_i64(0, 1), rat_i64(0, 1), rat_i64(1, 1)],
            &rat_i64(0, 1),
            &rat_i64(1, 1),
        );
        assert_eq!(a.degree(), 2);
        assert_eq!(b.degree(), 4);
        let s = SemiPfaffianSet::new(
            SetFormula::And(vec![leaf(a, CondKind::Gt0), leaf(b, CondKind::Gt0)]),
            DomainBox::unit(1),
        );
        assert_eq!(s.degree(), 6);
    }

    #[test]
    fn empty_formula_true() {
        let s = SemiPfaffianSet::new(SetFormula::True, unit_box2());
        assert_eq!(s.degree(), 0);
        assert_eq!(s.format(), 2);
        let m = membership(&s, &[rat_i64(1, 2), rat_i64(1, 2)], 48).unwrap();
        assert_eq!(m, Membership::In);
    }

    #[test]
    fn membership_above_tanh() {
        let s = above_tanh();
        let m = membership(&s, &[rat_i64(0, 1), rat_i64(1, 2)], 48).unwrap();
        assert_eq!(m, Membership::In);
        // tanh(1/2) = 0.462 > 0.1: outside
        let m2 = membership(&s, &[rat_i64(1, 2), rat_i64(1, 10)], 48).unwrap();
        assert_eq!(m2, Membership::Out);
    }

    #[test]
    fn equality_certifiably_out() {
        let s = exp_eq_two();
        let m = membership(&s, &[rat_i64(1, 2)], 48).unwrap();
        assert_eq!(m, Membership::Out);
    }

    #[test]
    fn equality_at_near_root_is_unknown() {
        let s = exp_eq_two();
        // dyadic approximation of ln 2 = 0.6931471805599453...
        let approx = Rat::new(
            crate::Int::from(6243314768165359i64),
            crate::Int::from(2u8).pow(53),
        );
        let m = membership(&s, &[approx], 48).unwrap();
        assert_eq!(m, Membership::Unknown);
    }

    #[test]
    fn boolean_duality() {
        let s = above_tanh();
        let neg = SemiPfaffianSet::new(
            SetFormula::Not(Box::new(s.formula.clone())),
            s.ambient.clone(),
        );
        for (x, y) in [(rat_i64(0, 1), rat_i64(1, 2)), (rat_i64(1, 2), rat_i64(1, 10))] {
            let m = membership(&s, &[x.clone(), y.clone()], 48).unwrap();
            let mn = membership(&neg, &[x, y], 48).unwrap();
            assert_eq!(m.negate(), mn);
        }
    }

    #[test]
    fn monotone_precision_never_flips() {
        let s = exp_eq_two();
        let pts = [rat_i64(1, 2), rat_i64(7, 10), rat_i64(693, 1000)];
        for p in pts {
            let lo = membership(&s, std::slice::from_ref(&p), 32).unwrap();
            let hi = membership(&s, std::slice::from_ref(&p), 128).unwrap();
            match (lo, hi) {
                (Membership::In, Membership::Out) | (Membership::Out, Membership::In) => {
                    panic!("precision flip at {}", p)
                }
                _ => {}
            }
        }
    }

    #[test]
    fn restrict_axis_matches_full_eval() {
        let s = above_tanh();
        let binding = s.formula.leaves();
        let f = binding[0].f.as_pfaffian().unwrap();
        let restricted = restrict_axis(f, 0, &rat_i64(1, 2)).unwrap();
        let v1 = ode::eval_raw(&restricted, &[rat_i64(3, 4)], 64).unwrap();
        let v2 = ode::eval_raw(f, &[rat_i64(1, 2), rat_i64(3, 4)], 64).unwrap();
        assert!(v1.intersect(&v2).is_some());
    }
}
