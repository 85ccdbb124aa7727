//! Pfaffian chains and functions with format/degree bookkeeping.
//!
//! A chain is a finite list of analytic functions f_1..f_l on a box, each defined by
//! polynomial first-order data dP f_i/dx_j = P_{i,j}(x, f_1..f_i) together with a
//! basepoint and initial values. A function is a polynomial in the variables and the
//! chain entries. Strict chains are triangular (P_{i,j} sees only levels <= i);
//! mutual systems such as the Weierstrass pair (wp, wp') are carried with
//! `ChainKind::Mutual` and the same bookkeeping.

use crate::error::{Error, Result};
use crate::num::{Dir, Dyadic, Interval};
use crate::poly::SparsePolynomial;
use crate::Rat;
use num_traits::Signed;
use std::fmt;
use std::sync::Arc;

/// Axis-aligned open box with exact rational corners.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainBox {
    lower: Vec<Rat>,
    upper: Vec<Rat>,
}

impl DomainBox {
    pub fn new(lower: Vec<Rat>, upper: Vec<Rat>) -> Result<DomainBox> {
        if lower.len() != upper.len() {
            return Err(Error::BadInput("box corner dimensions differ".into()));
        }
        for (lo, hi) in lower.iter().zip(upper.iter()) {
            if lo >= hi {
                return Err(Error::BadInput(format!("box side empty: {} >= {}", lo, hi)));
            }
        }
        Ok(DomainBox { lower, upper })
    }

    pub fn unit(n: usize) -> DomainBox {
        DomainBox {
            lower: vec![Rat::from_integer(0.into()); n],
            upper: vec![Rat::from_integer(1.into()); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[Rat] {
        &self.lower
    }

    pub fn upper(&self) -> &[Rat] {
        &self.upper
    }

    pub fn contains_strict(&self, x: &[Rat]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(self.upper.iter()))
                .all(|(v, (lo, hi))| lo < v && v < hi)
    }

    /// Closed containment (allows landing on the boundary).
    pub fn contains_closed(&self, x: &[Rat]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(self.upper.iter()))
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }
}

/// Strict (triangular) versus mutual (Noetherian-style) polynomial systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainKind {
    Pfaffian,
    Mutual,
}

/// Initial values of the chain entries at the basepoint.
#[derive(Clone)]
pub enum InitialValues {
    /// Exact rational initial values.
    Exact(Vec<Rat>),
    /// Computed on demand to any requested precision (used by the wp builtin,
    /// whose initial values are transcendental).
    Dynamic(Arc<dyn Fn(u32) -> Result<Vec<Interval>> + Send + Sync>),
}

impl fmt::Debug for InitialValues {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialValues::Exact(v) => write!(f, "Exact({:?})", v),
            InitialValues::Dynamic(_) => write!(f, "Dynamic(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PfaffianChain {
    n: usize,
    l: usize,
    domain: DomainBox,
    /// defining[i][j] = P_{i+1, j+1}, stored with uniform arity n + l.
    defining: Vec<Vec<SparsePolynomial>>,
    basepoint: Vec<Rat>,
    initials: InitialValues,
    kind: ChainKind,
    name: Option<String>,
}

/// One triangularity/arity violation, in the paper's 1-based indexing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArityViolation {
    pub i: usize,
    pub j: usize,
    /// 1-based index of the offending chain entry.
    pub references: usize,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<ArityViolation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl PfaffianChain {
    pub fn new(
        n: usize,
        l: usize,
        domain: DomainBox,
        defining: Vec<Vec<SparsePolynomial>>,
        basepoint: Vec<Rat>,
        initials: InitialValues,
        kind: ChainKind,
    ) -> Result<PfaffianChain> {
        if domain.dim() != n {
            return Err(Error::MalformedChain("domain dimension != n".into()));
        }
        if defining.len() != l || defining.iter().any(|row| row.len() != n) {
            return Err(Error::MalformedChain("defining polynomial array is not l x n".into()));
        }
        // Uniformize arity to n + l; reject polynomials that are too wide.
        let mut rows = Vec::with_capacity(l);
        for (i, row) in defining.into_iter().enumerate() {
            let mut new_row = Vec::with_capacity(n);
            for (j, p) in row.into_iter().enumerate() {
                if p.arity() > n + l {
                    return Err(Error::ArityViolation { i: i + 1, j: j + 1 });
                }
                let map: Vec<usize> = (0..p.arity()).collect();
                new_row.push(p.embed(n + l, &map));
            }
            rows.push(new_row);
        }
        if basepoint.len() != n || !domain.contains_strict(&basepoint) {
            return Err(Error::MalformedChain("basepoint must lie strictly inside the domain".into()));
        }
        if let InitialValues::Exact(v) = &initials {
            if v.len() != l {
                return Err(Error::MalformedChain("initial value count != l".into()));
            }
        }
        Ok(PfaffianChain {
            n,
            l,
            domain,
            defining: rows,
            basepoint,
            initials,
            kind,
            name: None,
        })
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chain_len(&self) -> usize {
        self.l
    }

    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }

    pub fn basepoint(&self) -> &[Rat] {
        &self.basepoint
    }

    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn defining_poly(&self, i: usize, j: usize) -> &SparsePolynomial {
        &self.defining[i][j]
    }

    /// Initial values as intervals at the requested precision.
    pub fn initial_intervals(&self, prec: u32) -> Result<Vec<Interval>> {
        match &self.initials {
            InitialValues::Exact(v) => Ok(v.iter().map(|q| Interval::from_rat(q, prec)).collect()),
            InitialValues::Dynamic(f) => f(prec),
        }
    }

    pub fn initials(&self) -> &InitialValues {
        &self.initials
    }

    /// Checks the arity/triangularity constraints, reporting each violation with
    /// its 1-based (i, j) index. Mutual chains only forbid references beyond the
    /// chain length (which the constructor already rules out), so they validate
    /// with a note instead of a triangularity violation.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for i in 0..self.l {
            for j in 0..self.n {
                let p = &self.defining[i][j];
                for k in (i + 1)..self.l {
                    if p.uses_var(self.n + k) {
                        match self.kind {
                            ChainKind::Pfaffian => report.violations.push(ArityViolation {
                                i: i + 1,
                                j: j + 1,
                                references: k + 1,
                            }),
                            ChainKind::Mutual => report.notes.push(format!(
                                "P[{},{}] references level-{} entry (mutual system)",
                                i + 1,
                                j + 1,
                                k + 1
                            )),
                        }
                    }
                }
            }
        }
        report
    }

    /// Sum of the degrees of all defining polynomials.
    pub fn defining_degree_sum(&self) -> u32 {
        self.defining
            .iter()
            .flat_map(|row| row.iter())
            .map(|p| p.degree())
            .sum()
    }

    /// Max over i of deg P_{i,j} for a fixed axis j (0-based).
    pub fn max_defining_degree_on_axis(&self, j: usize) -> u32 {
        self.defining.iter().map(|row| row[j].degree()).max().unwrap_or(0)
    }

    /// The domain side along axis `j` as a dyadic interval enclosure.
    pub fn axis_interval(&self, j: usize, prec: u32) -> Interval {
        Interval::new(
            Dyadic::from_rat(&self.domain.lower[j], prec, Dir::Down),
            Dyadic::from_rat(&self.domain.upper[j], prec, Dir::Up),
        )
    }
}

/// A Pfaffian function: a polynomial in the variables and chain entries.
#[derive(Clone, Debug)]
pub struct PfaffianFunction {
    chain: Arc<PfaffianChain>,
    top: SparsePolynomial,
}

impl PfaffianFunction {
    pub fn new(chain: Arc<PfaffianChain>, top: SparsePolynomial) -> Result<PfaffianFunction> {
        if top.arity() > chain.n() + chain.chain_len() {
            return Err(Error::MalformedChain("top polynomial arity exceeds n + l".into()));
        }
        let map: Vec<usize> = (0..top.arity()).collect();
        let top = top.embed(chain.n() + chain.chain_len(), &map);
        Ok(PfaffianFunction { chain, top })
    }

    /// A plain polynomial as a Pfaffian function on the empty chain.
    pub fn polynomial(p: SparsePolynomial, domain: DomainBox) -> Result<PfaffianFunction> {
        let n = p.arity();
        let basepoint: Vec<Rat> = domain
            .lower()
            .iter()
            .zip(domain.upper().iter())
            .map(|(lo, hi)| (lo + hi) / Rat::from_integer(2.into()))
            .collect();
        let chain = PfaffianChain::new(
            n,
            0,
            domain,
            vec![],
            basepoint,
            InitialValues::Exact(vec![]),
            ChainKind::Pfaffian,
        )?;
        PfaffianFunction::new(Arc::new(chain), p)
    }

    pub fn chain(&self) -> &Arc<PfaffianChain> {
        &self.chain
    }

    pub fn top(&self) -> &SparsePolynomial {
        &self.top
    }

    pub fn ambient_dim(&self) -> usize {
        self.chain.n()
    }

    /// Format: n + l.
    pub fn format(&self) -> u32 {
        (self.chain.n() + self.chain.chain_len()) as u32
    }

    /// Degree: sum of the defining polynomial degrees plus the top degree.
    pub fn degree(&self) -> u32 {
        self.chain.defining_degree_sum() + self.top.degree()
    }

    /// Partial derivative along axis `j` (0-based), on the same chain:
    /// d(P(x, f)) = P_{x_j} + sum_i P_{y_i} * P_{i,j}.
    pub fn derivative(&self, j: usize) -> PfaffianFunction {
        assert!(j < self.chain.n());
        let n = self.chain.n();
        let l = self.chain.chain_len();
        let mut out = self.top.derivative(j);
        for i in 0..l {
            let py = self.top.derivative(n + i);
            if !py.is_zero() {
                out = out.add(&py.mul(self.chain.defining_poly(i, j)));
            }
        }
        PfaffianFunction { chain: self.chain.clone(), top: out }
    }

    /// Derivative along a multi-index (repeated single derivatives).
    pub fn derivative_multi(&self, alpha: &[u32]) -> PfaffianFunction {
        let mut f = self.clone();
        for (j, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                f = f.derivative(j);
            }
        }
        f
    }

    /// True when the function is a pure polynomial in the variables (no chain
    /// entries referenced), so exact rational evaluation applies.
    pub fn is_polynomial(&self) -> bool {
        let n = self.chain.n();
        let l = self.chain.chain_len();
        (0..l).all(|i| !self.top.uses_var(n + i))
    }

    /// Exact evaluation for the polynomial case.
    pub fn eval_exact(&self, x: &[Rat]) -> Option<Rat> {
        if !self.is_polynomial() {
            return None;
        }
        let n = self.chain.n();
        let l = self.chain.chain_len();
        let mut full: Vec<Rat> = x.to_vec();
        full.extend(std::iter::repeat(Rat::from_integer(0.into())).take(l));
        debug_assert_eq!(full.len(), n + l);
        Some(self.top.eval_rat(&full))
    }
}

/// Convenience: |q| as a rational.
pub fn rat_abs(q: &Rat) -> Rat {
    if q.is_negative() {
        -q.clone()
    } else {
        q.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rat_i64;

    #[test]
    fn exp_chain_is_valid_and_bookkeeps() {
        let f = catalog::exp_fn();
        assert!(f.chain().validate().is_valid());
        assert_eq!(f.format(), 2);
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn arity_violation_reported_with_index() {
        // l = 1 chain whose P_{1,1} references y_2: rejected at construction
        // because the polynomial is wider than n + l.
        let p = SparsePolynomial::var(3, 2); // (x, y1, y2) -> y2
        let r = PfaffianChain::new(
            1,
            1,
            DomainBox::unit(1),
            vec![vec![p]],
            vec![rat_i64(1, 2)],
            InitialValues::Exact(vec![rat_i64(0, 1)]),
            ChainKind::Pfaffian,
        );
        match r {
            Err(Error::ArityViolation { i: 1, j: 1 }) => {}
            other => panic!("expected ArityViolation(1,1), got {:?}", other),
        }
        // l = 2 strict chain with P_{1,1} = y2 validates with a violation record.
        let p11 = SparsePolynomial::var(3, 2);
        let p21 = SparsePolynomial::var(3, 1);
        let chain = PfaffianChain::new(
            1,
            2,
            DomainBox::unit(1),
            vec![vec![p11], vec![p21]],
            vec![rat_i64(1, 2)],
            InitialValues::Exact(vec![rat_i64(0, 1), rat_i64(0, 1)]),
            ChainKind::Pfaffian,
        )
        .unwrap();
        let report = chain.validate();
        assert_eq!(
            report.violations,
            vec![ArityViolation { i: 1, j: 1, references: 2 }]
        );
    }

    #[test]
    fn wp_style_mutual_chain_is_valid() {
        // (wp, wp') as a mutual system: P_{1,1} = y2, P_{2,1} = 6 y1^2 - g2/2.
        let chain = catalog::wp_chain_symbolic(&rat_i64(4, 1), &rat_i64(0, 1));
        let report = chain.validate();
        assert!(report.is_valid());
        assert!(!report.notes.is_empty());
    }

    #[test]
    fn derivative_of_exp_is_exp() {
        let f = catalog::exp_fn();
        let d = f.derivative(0);
        assert_eq!(d.top(), f.top());
        // degree postcondition: deg(f') <= deg(f) + max_i deg(P_{i,1})
        assert!(d.degree() <= f.degree() + f.chain().max_defining_degree_on_axis(0));
    }

    #[test]
    fn derivative_with_product_rule_on_chain() {
        // f = x * y1 on the exp chain; f' = y1 + x*y1.
        let f = catalog::exp_fn();
        let x = SparsePolynomial::var(2, 0);
        let y = SparsePolynomial::var(2, 1);
        let g = PfaffianFunction::new(f.chain().clone(), x.mul(&y)).unwrap();
        let d = g.derivative(0);
        let expected = y.add(&SparsePolynomial::var(2, 0).mul(&y));
        assert_eq!(d.top(), &expected);
    }

    #[test]
    fn wp_function_format_and_degree() {
        let f = catalog::wp_fn_symbolic(&rat_i64(4, 1), &rat_i64(0, 1));
        assert_eq!(f.format(), 3); // n=1, l=2
        assert_eq!(f.degree(), 4); // deg P11=1, deg P21=2, deg top=1
    }

    #[test]
    fn polynomial_function_format_and_exact_eval() {
        // x^2 + 1 on an empty chain with n = 3 has format 3.
        let p = SparsePolynomial::from_terms(
            3,
            vec![(vec![2, 0, 0], rat_i64(1, 1)), (vec![0, 0, 0], rat_i64(1, 1))],
        );
        let f = PfaffianFunction::polynomial(p, DomainBox::unit(3)).unwrap();
        assert_eq!(f.format(), 3);
        assert_eq!(f.degree(), 2);
        let v = f.eval_exact(&[rat_i64(1, 2), rat_i64(0, 1), rat_i64(0, 1)]).unwrap();
        assert_eq!(v, rat_i64(5, 4));
    }
}
