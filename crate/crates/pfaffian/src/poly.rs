//! Sparse multivariate polynomials over exact rationals.
//!
//! Exponent vectors are the map keys, so representation is canonical and
//! serialization is order-stable. No zero coefficients are ever stored.

use crate::error::{Error, Result};
use crate::num::{CInterval, Interval};
use crate::{Int, Rat};
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    arity: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

/// Serialized term: exponent vector and coefficient as a "p/q" string.
#[derive(Serialize, Deserialize)]
struct TermDto {
    exps: Vec<u32>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct PolyDto {
    arity: usize,
    terms: Vec<TermDto>,
}

/// Renders a rational as "p" or "p/q".
pub fn rat_to_string(q: &Rat) -> String {
    if q.denom() == &Int::one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses "p", "p/q", or a plain decimal literal like "-1.25" exactly.
pub fn rat_from_string(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = Int::from_str(num.trim()).map_err(|e| Error::BadInput(format!("bad rational: {e}")))?;
        let d = Int::from_str(den.trim()).map_err(|e| Error::BadInput(format!("bad rational: {e}")))?;
        if d.is_zero() {
            return Err(Error::BadInput("zero denominator".into()));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let i = if int_part.is_empty() || int_part == "-" {
            Int::zero()
        } else {
            Int::from_str(int_part).map_err(|e| Error::BadInput(format!("bad decimal: {e}")))?
        };
        let frac_digits = frac_part.len() as u32;
        let f = if frac_part.is_empty() {
            Int::zero()
        } else {
            Int::from_str(frac_part).map_err(|e| Error::BadInput(format!("bad decimal: {e}")))?
        };
        let scale = Int::from(10u32).pow(frac_digits);
        let mag = i.abs() * &scale + f;
        let signed = if neg { -mag } else { mag };
        return Ok(Rat::new(signed, scale));
    }
    let n = Int::from_str(s).map_err(|e| Error::BadInput(format!("bad integer: {e}")))?;
    Ok(Rat::from_integer(n))
}

impl Serialize for SparsePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dto = PolyDto {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermDto { exps: e.clone(), coef: rat_to_string(c) })
                .collect(),
        };
        dto.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SparsePolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dto = PolyDto::deserialize(deserializer)?;
        let mut p = SparsePolynomial::zero(dto.arity);
        for t in dto.terms {
            if t.exps.len() != dto.arity {
                return Err(D::Error::custom("exponent vector length != arity"));
            }
            let c = rat_from_string(&t.coef).map_err(D::Error::custom)?;
            p.add_term(t.exps, c);
        }
        Ok(p)
    }
}

impl fmt::Debug for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0)
                    .map(|(i, &p)| if p == 1 { format!("v{}", i) } else { format!("v{}^{}", i, p) })
                    .collect();
                if vars.is_empty() {
                    format!("{}", c)
                } else {
                    format!("{}*{}", c, vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl SparsePolynomial {
    pub fn zero(arity: usize) -> SparsePolynomial {
        SparsePolynomial { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Rat) -> SparsePolynomial {
        let mut p = SparsePolynomial::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    pub fn one(arity: usize) -> SparsePolynomial {
        SparsePolynomial::constant(arity, Rat::one())
    }

    /// The monomial x_i (0-indexed).
    pub fn var(arity: usize, i: usize) -> SparsePolynomial {
        assert!(i < arity);
        let mut e = vec![0; arity];
        e[i] = 1;
        let mut p = SparsePolynomial::zero(arity);
        p.add_term(e, Rat::one());
        p
    }

    pub fn from_terms(arity: usize, terms: Vec<(Vec<u32>, Rat)>) -> SparsePolynomial {
        let mut p = SparsePolynomial::zero(arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity, "exponent vector length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, expt: Vec<u32>, coef: Rat) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(expt);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = o.get() + coef;
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
        }
    }

    /// Max total degree of stored exponent vectors; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Degree in the single variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// True when the polynomial references variable `i`.
    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    pub fn add(&self, rhs: &SparsePolynomial) -> SparsePolynomial {
        assert_eq!(self.arity, rhs.arity);
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> SparsePolynomial {
        SparsePolynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, rhs: &SparsePolynomial) -> SparsePolynomial {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: &Rat) -> SparsePolynomial {
        if s.is_zero() {
            return SparsePolynomial::zero(self.arity);
        }
        SparsePolynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, rhs: &SparsePolynomial) -> SparsePolynomial {
        assert_eq!(self.arity, rhs.arity);
        let mut out = SparsePolynomial::zero(self.arity);
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in rhs.terms.iter() {
                let e: Vec<u32> = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero(self.arity);
        for (e, c) in self.terms.iter() {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * Rat::from_integer(Int::from(e[i])));
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rat(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.arity);
        let mut acc = Rat::zero();
        for (e, c) in self.terms.iter() {
            let mut t = c.clone();
            for (xi, &p) in x.iter().zip(e.iter()) {
                for _ in 0..p {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    /// Certified evaluation on an interval box.
    pub fn eval_interval(&self, x: &[Interval], prec: u32) -> Interval {
        assert_eq!(x.len(), self.arity);
        let mut acc = Interval::zero();
        for (e, c) in self.terms.iter() {
            let mut t = Interval::from_rat(c, prec);
            for (xi, &p) in x.iter().zip(e.iter()) {
                if p > 0 {
                    t = t.mul(&xi.powi(p, prec), prec);
                }
            }
            acc = acc.add(&t, prec);
        }
        acc
    }

    /// Certified evaluation on a complex box.
    pub fn eval_cinterval(&self, x: &[CInterval], prec: u32) -> CInterval {
        assert_eq!(x.len(), self.arity);
        let mut acc = CInterval::zero();
        for (e, c) in self.terms.iter() {
            let mut t = CInterval::real(Interval::from_rat(c, prec));
            for (xi, &p) in x.iter().zip(e.iter()) {
                if p > 0 {
                    t = t.mul(&xi.powi(p, prec), prec);
                }
            }
            acc = acc.add(&t, prec);
        }
        acc
    }

    /// Reinterprets the polynomial in a larger variable set, mapping old
    /// variable `i` to new variable `map[i]`.
    pub fn embed(&self, new_arity: usize, map: &[usize]) -> SparsePolynomial {
        assert_eq!(map.len(), self.arity);
        let mut out = SparsePolynomial::zero(new_arity);
        for (e, c) in self.terms.iter() {
            let mut e2 = vec![0u32; new_arity];
            for (i, &p) in e.iter().enumerate() {
                e2[map[i]] += p;
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Substitutes variable `i` by the affine expression `a*x_i + b`.
    pub fn compose_affine(&self, i: usize, a: &Rat, b: &Rat) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero(self.arity);
        for (e, c) in self.terms.iter() {
            let p = e[i];
            // (a x + b)^p expanded by binomial
            let mut binom = Rat::one();
            for k in 0..=p {
                // binom = C(p, k) a^k b^(p-k)
                let coeff = {
                    let mut t = binom.clone();
                    for _ in 0..k {
                        t *= a;
                    }
                    for _ in 0..(p - k) {
                        t *= b;
                    }
                    t
                };
                let mut e2 = e.clone();
                e2[i] = k;
                out.add_term(e2, c * coeff);
                if k < p {
                    binom = binom * Rat::from_integer(Int::from(p - k))
                        / Rat::from_integer(Int::from(k + 1));
                }
            }
        }
        out
    }

    /// Substitutes variable `i` by an exact rational constant, dropping arity by one.
    pub fn substitute_const(&self, i: usize, v: &Rat) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero(self.arity - 1);
        for (e, c) in self.terms.iter() {
            let mut t = c.clone();
            for _ in 0..e[i] {
                t *= v;
            }
            let mut e2 = Vec::with_capacity(self.arity - 1);
            for (j, &p) in e.iter().enumerate() {
                if j != i {
                    e2.push(p);
                }
            }
            out.add_term(e2, t);
        }
        out
    }

    /// Clears denominators and divides by content: the primitive integer form.
    /// Errors on the zero polynomial.
    pub fn primitive_integer(&self) -> Result<SparsePolynomial> {
        if self.is_zero() {
            return Err(Error::BadInput("zero polynomial has no primitive form".into()));
        }
        let mut den = Int::one();
        for (_, c) in self.terms.iter() {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let mut nums: Vec<(Vec<u32>, Int)> = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.numer() * (&den / c.denom())))
            .collect();
        let mut g = Int::zero();
        for (_, n) in nums.iter() {
            g = num_integer::gcd(g, n.abs());
        }
        let mut out = SparsePolynomial::zero(self.arity);
        // Normalize the sign so the lexicographically largest term is positive.
        let flip = nums.last().map(|(_, n)| n.is_negative()).unwrap_or(false);
        for (e, n) in nums.drain(..) {
            let mut v = n / &g;
            if flip {
                v = -v;
            }
            out.add_term(e, Rat::from_integer(v));
        }
        Ok(out)
    }

    /// Univariate only: exact coefficient list (ascending degree).
    pub fn univariate_coeffs(&self) -> Vec<Rat> {
        assert_eq!(self.arity, 1);
        let d = self.degree() as usize;
        let mut out = vec![Rat::zero(); d + 1];
        for (e, c) in self.terms.iter() {
            out[e[0] as usize] = c.clone();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat_i64;

    fn x2_plus_1() -> SparsePolynomial {
        // x^2 + 1 in one variable
        SparsePolynomial::from_terms(1, vec![(vec![2], rat_i64(1, 1)), (vec![0], rat_i64(1, 1))])
    }

    #[test]
    fn degree_and_zero_coeff_erasure() {
        let mut p = x2_plus_1();
        assert_eq!(p.degree(), 2);
        p.add_term(vec![2], rat_i64(-1, 1));
        assert_eq!(p.degree(), 0);
        assert_eq!(p.num_terms(), 1);
        p.add_term(vec![0], rat_i64(-1, 1));
        assert!(p.is_zero());
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn eval_exact_and_interval_agree() {
        let p = SparsePolynomial::from_terms(
            2,
            vec![
                (vec![2, 0], rat_i64(3, 2)),
                (vec![1, 1], rat_i64(-1, 3)),
                (vec![0, 0], rat_i64(7, 5)),
            ],
        );
        let x = vec![rat_i64(1, 2), rat_i64(2, 3)];
        let exact = p.eval_rat(&x);
        let iv = p.eval_interval(
            &[Interval::from_rat(&x[0], 80), Interval::from_rat(&x[1], 80)],
            80,
        );
        assert!(iv.contains_rat(&exact));
        assert!(iv.width_below(60));
    }

    #[test]
    fn derivative_of_product_rule_case() {
        let p = x2_plus_1();
        let d = p.derivative(0);
        assert_eq!(d.degree(), 1);
        assert_eq!(d.eval_rat(&[rat_i64(3, 1)]), rat_i64(6, 1));
    }

    #[test]
    fn compose_affine_matches_eval() {
        let p = x2_plus_1();
        // q(x) = p(2x + 1)
        let q = p.compose_affine(0, &rat_i64(2, 1), &rat_i64(1, 1));
        for t in [-2i64, 0, 1, 5] {
            let x = rat_i64(t, 1);
            let lhs = q.eval_rat(&[x.clone()]);
            let rhs = p.eval_rat(&[rat_i64(2 * t + 1, 1)]);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn primitive_integer_clears_denominators() {
        let p = SparsePolynomial::from_terms(
            1,
            vec![(vec![1], rat_i64(2, 3)), (vec![0], rat_i64(-4, 9))],
        );
        let q = p.primitive_integer().unwrap();
        let coeffs = q.univariate_coeffs();
        assert_eq!(coeffs[1], rat_i64(3, 1));
        assert_eq!(coeffs[0], rat_i64(-2, 1));
    }
}
