//! Exact exponential-polynomial scalars.
//!
//! An [`ExpPoly`] is a finite sum of terms `c(params) * x^m * exp(q . x)` where
//! `c` is a Laurent polynomial in formal parameters over Q, `x^m` is a
//! coordinate monomial and `q` a rational covector. Terms are kept in a
//! canonical order with merged keys and no zero coefficients, so equality of
//! functions is structural equality: the functions `x^m exp(q . x)` with
//! distinct `(m, q)` are linearly independent.

mod param;
pub(crate) mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub(crate) use param::q_to_f64;
pub use param::{format_rational, ParamMonomial, ParamPoly, Symbol};
pub use parse::{
    coord_name, format_field, frame_name, parse_document, parse_expr, parse_field, Alphabet,
    ParseError, ParseErrorKind,
};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("parameter `{0}` is not assigned")]
    UnassignedParameter(String),
    #[error("parameter `{0}` assigned zero but occurs with a negative power")]
    SingularAssignment(String),
    #[error("coordinate index {index} out of range for dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },
}

/// Rational coefficients of the coordinates inside an exponential.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExponentVector(Vec<Q>);

impl ExponentVector {
    pub fn zero(dim: usize) -> Self {
        ExponentVector(vec![Q::zero(); dim])
    }

    pub fn new(entries: Vec<Q>) -> Self {
        ExponentVector(entries)
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        ExponentVector(entries.iter().map(|&e| qi(e)).collect())
    }

    pub fn entries(&self) -> &[Q] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Self {
        ExponentVector(self.0.iter().map(|a| -a).collect())
    }
}

/// Natural-number exponents of the coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn var(dim: usize, index: usize) -> Self {
        let mut m = Self::one(dim);
        m.0[index] = 1;
        m
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All monomials in `dim` variables of total degree at most `max_degree`,
    /// graded then lexicographic.
    pub fn up_to_degree(dim: usize, max_degree: u32) -> Vec<Monomial> {
        fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() == dim - 1 {
                prefix.push(left);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e);
                rec(dim, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if dim == 0 {
            out.push(Monomial(Vec::new()));
            return out;
        }
        for deg in 0..=max_degree {
            rec(dim, deg, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// One term `coeff * x^monomial * exp(exponent . x)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term {
    pub coeff: ParamPoly,
    pub monomial: Monomial,
    pub exponent: ExponentVector,
}

/// Canonical exponential-polynomial in `dim` coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExpPoly {
    dim: usize,
    terms: BTreeMap<(ExponentVector, Monomial), ParamPoly>,
}

impl ExpPoly {
    pub fn zero(dim: usize) -> Self {
        ExpPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Q) -> Self {
        Self::term(
            dim,
            ParamPoly::constant(c),
            Monomial::one(dim),
            ExponentVector::zero(dim),
        )
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Q::one())
    }

    pub fn coord(dim: usize, index: usize) -> Self {
        Self::term(
            dim,
            ParamPoly::one(),
            Monomial::var(dim, index),
            ExponentVector::zero(dim),
        )
    }

    pub fn param(dim: usize, sym: Symbol) -> Self {
        Self::term(
            dim,
            ParamPoly::param(sym),
            Monomial::one(dim),
            ExponentVector::zero(dim),
        )
    }

    pub fn exp(exponent: ExponentVector) -> Self {
        let dim = exponent.dim();
        Self::term(dim, ParamPoly::one(), Monomial::one(dim), exponent)
    }

    pub fn term(
        dim: usize,
        coeff: ParamPoly,
        monomial: Monomial,
        exponent: ExponentVector,
    ) -> Self {
        let mut out = Self::zero(dim);
        out.push(exponent, monomial, coeff);
        out
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = Term>) -> Self {
        let mut out = Self::zero(dim);
        for t in terms {
            assert_eq!(t.monomial.0.len(), dim, "monomial length");
            assert_eq!(t.exponent.dim(), dim, "exponent length");
            out.push(t.exponent, t.monomial, t.coeff);
        }
        out
    }

    fn push(&mut self, exponent: ExponentVector, monomial: Monomial, coeff: ParamPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((exponent, monomial)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&coeff);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True iff this is the zero function.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order: by exponent vector, then monomial.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Monomial, &ParamPoly)> {
        self.terms.iter().map(|((e, m), c)| (e, m, c))
    }

    pub fn to_terms(&self) -> Vec<Term> {
        self.terms()
            .map(|(e, m, c)| Term {
                coeff: c.clone(),
                monomial: m.clone(),
                exponent: e.clone(),
            })
            .collect()
    }

    pub fn is_parameter_free(&self) -> bool {
        self.terms.values().all(ParamPoly::is_constant)
    }

    pub fn params(&self) -> BTreeSet<Symbol> {
        self.terms
            .values()
            .flat_map(|c| c.symbols().cloned())
            .collect()
    }

    pub fn exponents(&self) -> BTreeSet<ExponentVector> {
        self.terms.keys().map(|(e, _)| e.clone()).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(_, m)| m.degree())
            .max()
            .unwrap_or(0)
    }

    fn check_dim(&self, other: &Self) -> Result<(), ExprError> {
        if self.dim != other.dim {
            Err(ExprError::DimensionMismatch(self.dim, other.dim))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExprError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for ((e, m), c) in &other.terms {
            out.push(e.clone(), m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExprError> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for ((ea, ma), ca) in &self.terms {
            for ((eb, mb), cb) in &other.terms {
                out.push(ea.add(eb), ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero(self.dim);
        }
        ExpPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(key, c)| (key.clone(), c.scale(k)))
                .collect(),
        }
    }

    pub fn scale_param(&self, k: &ParamPoly) -> Self {
        let mut out = Self::zero(self.dim);
        for ((e, m), c) in &self.terms {
            out.push(e.clone(), m.clone(), c.mul(k));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to coordinate `coord`:
    /// `d(p e^{q.x})/dx_i = (dp/dx_i + q_i p) e^{q.x}`.
    ///
    /// Panics if `coord >= dim`.
    pub fn derive(&self, coord: usize) -> Self {
        assert!(
            coord < self.dim,
            "coordinate {coord} out of range for dimension {}",
            self.dim
        );
        let mut out = Self::zero(self.dim);
        for ((e, m), c) in &self.terms {
            let qi = &e.0[coord];
            if !qi.is_zero() {
                out.push(e.clone(), m.clone(), c.scale(qi));
            }
            let k = m.0[coord];
            if k > 0 {
                let mut m2 = m.clone();
                m2.0[coord] -= 1;
                out.push(e.clone(), m2, c.scale(&Q::from_integer(BigInt::from(k))));
            }
        }
        out
    }

    /// Substitute rational values for every parameter.
    pub fn subst_params(&self, assignment: &BTreeMap<Symbol, Q>) -> Result<Self, ExprError> {
        let mut out = Self::zero(self.dim);
        for ((e, m), c) in &self.terms {
            let v = c.subst(assignment)?;
            out.push(e.clone(), m.clone(), ParamPoly::constant(v));
        }
        Ok(out)
    }

    /// Substitute the assigned parameters and keep the others symbolic.
    pub fn subst_params_partial(
        &self,
        assignment: &BTreeMap<Symbol, Q>,
    ) -> Result<Self, ExprError> {
        let mut out = Self::zero(self.dim);
        for ((e, m), c) in &self.terms {
            out.push(e.clone(), m.clone(), c.subst_partial(assignment)?);
        }
        Ok(out)
    }

    /// Floating-point evaluation; only for randomized cross-checks.
    pub fn eval_numeric(
        &self,
        point: &[f64],
        params: &BTreeMap<Symbol, f64>,
    ) -> Result<f64, ExprError> {
        if point.len() != self.dim {
            return Err(ExprError::DimensionMismatch(self.dim, point.len()));
        }
        let mut acc = 0.0;
        for ((e, m), c) in &self.terms {
            let coeff = c.eval_f64(params)?;
            let mono: f64 =
                m.0.iter()
                    .zip(point)
                    .map(|(&k, &x)| x.powi(k as i32))
                    .product();
            let lin: f64 = e.0.iter().zip(point).map(|(q, &x)| q_to_f64(q) * x).sum();
            acc += coeff * mono * lin.exp();
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a single term without coordinate powers.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let ((e, m), c) = self.terms.iter().next()?;
        if m.degree() != 0 {
            return None;
        }
        Some(Self::term(self.dim, c.unit_inverse()?, m.clone(), e.neg()))
    }

    /// The covector `q` if this is the parameter-free linear form `q . x`.
    pub fn as_linear_form(&self) -> Option<ExponentVector> {
        let mut q = vec![Q::zero(); self.dim];
        for ((e, m), c) in &self.terms {
            if !e.is_zero() || m.degree() != 1 {
                return None;
            }
            let coeff = c.as_constant()?;
            let idx = m.0.iter().position(|&k| k == 1)?;
            q[idx] = coeff;
        }
        Some(ExponentVector(q))
    }

    /// Rational value of a parameter-free constant, if this is one.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let ((e, m), c) = self.terms.iter().next()?;
                if e.is_zero() && m.degree() == 0 {
                    c.as_constant()
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// The coefficient if this function does not depend on the coordinates.
    pub fn as_param_poly(&self) -> Option<ParamPoly> {
        match self.terms.len() {
            0 => Some(ParamPoly::zero()),
            1 => {
                let ((e, m), c) = self.terms.iter().next()?;
                (e.is_zero() && m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Rewrite under `x = B x~ + t`. Fails with `None` if an exponential would
    /// pick up a nonzero constant factor `e^{q.t}`, which is not rational.
    pub(crate) fn substitute_affine(&self, b: &[Vec<Q>], t: &[Q]) -> Option<Self> {
        let n = self.dim;
        // images of the coordinates
        let images: Vec<ExpPoly> = (0..n)
            .map(|i| {
                let mut p = Self::constant(n, t[i].clone());
                for (j, bij) in b[i].iter().enumerate() {
                    p = &p + &Self::coord(n, j).scale(bij);
                }
                p
            })
            .collect();
        let mut out = Self::zero(n);
        for ((e, m), c) in &self.terms {
            let shift: Q = e.0.iter().zip(t).map(|(qi, ti)| qi * ti).sum();
            if !shift.is_zero() {
                return None;
            }
            let new_e = ExponentVector(
                (0..n)
                    .map(|j| (0..n).map(|i| &e.0[i] * &b[i][j]).sum())
                    .collect(),
            );
            let mut poly = Self::term(n, c.clone(), Monomial::one(n), new_e);
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    poly = &poly * &images[i].pow(k);
                }
            }
            out = &out + &poly;
        }
        Some(out)
    }
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        self.try_add(rhs).expect("ExpPoly addition")
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        self.try_add(&-rhs).expect("ExpPoly subtraction")
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        self.try_mul(rhs).expect("ExpPoly multiplication")
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::format_expr(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ExpPoly {
        let alpha = Alphabet::new(3, &["l", "lambda", "a", "b"]);
        parse_expr(s, &alpha).unwrap()
    }

    #[test]
    fn additive_inverse_is_empty() {
        let s = &p("x") + &p("-x");
        assert!(s.is_zero());
        assert_eq!(s.num_terms(), 0);
    }

    #[test]
    fn like_terms_merge() {
        assert_eq!(&p("exp(x)*y") + &p("exp(x)*y"), p("2*exp(x)*y"));
    }

    #[test]
    fn parameters_cancel() {
        assert_eq!(&p("z^2/2 + l") + &p("z^2/2 - l"), p("z^2"));
    }

    #[test]
    fn exponentials_multiply() {
        assert_eq!(&p("exp(x)") * &p("exp(-x)"), ExpPoly::one(3));
        assert_eq!(&p("exp((-x+y)/2)") * &p("exp((-x+y)/2)"), p("exp(-x+y)"));
        assert_eq!(&p("y") * &p("y/2"), p("y^2/2"));
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("exp(2*x)*y").derive(0), p("2*exp(2*x)*y"));
        assert_eq!(p("z^2/2 + l").derive(2), p("z"));
        assert_eq!(p("exp((-x+y)/2)*z").derive(1), p("1/2*exp((-x+y)/2)*z"));
    }

    #[test]
    fn parameter_substitution() {
        let env = |pairs: &[(&str, Q)]| -> BTreeMap<Symbol, Q> {
            pairs
                .iter()
                .map(|(s, v)| (Symbol::new(s), v.clone()))
                .collect()
        };
        let f = p("a^2 + 2*b");
        assert!(f
            .subst_params(&env(&[("a", qi(2)), ("b", qi(-2))]))
            .unwrap()
            .is_zero());
        let f = p("lambda*y");
        assert!(f
            .subst_params(&env(&[("lambda", qi(0))]))
            .unwrap()
            .is_zero());
        let f = p("(z+l)^2");
        assert_eq!(
            f.subst_params(&env(&[("l", qi(1))])).unwrap(),
            p("z^2 + 2*z + 1")
        );
        let err = p("a*y").subst_params(&BTreeMap::new()).unwrap_err();
        assert_eq!(err, ExprError::UnassignedParameter("a".into()));
    }

    #[test]
    fn numeric_evaluation() {
        let none = BTreeMap::new();
        assert_eq!(
            p("exp(x)*y").eval_numeric(&[0.0, 3.0, 0.0], &none).unwrap(),
            3.0
        );
        assert_eq!(
            ExpPoly::zero(3)
                .eval_numeric(&[1.0, 2.0, 3.0], &none)
                .unwrap(),
            0.0
        );
        assert_eq!(p("z^2").eval_numeric(&[0.0, 0.0, 2.0], &none).unwrap(), 4.0);
        assert!(p("a*x").eval_numeric(&[1.0, 1.0, 1.0], &none).is_err());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = ExpPoly::coord(3, 0);
        let b = ExpPoly::coord(4, 0);
        assert_eq!(a.try_add(&b), Err(ExprError::DimensionMismatch(3, 4)));
        assert_eq!(a.try_mul(&b), Err(ExprError::DimensionMismatch(3, 4)));
    }

    #[test]
    fn monomial_enumeration_counts() {
        // C(d + n, n)
        assert_eq!(Monomial::up_to_degree(3, 2).len(), 10);
        assert_eq!(Monomial::up_to_degree(3, 6).len(), 84);
        assert_eq!(Monomial::up_to_degree(3, 0), vec![Monomial::one(3)]);
    }
}
