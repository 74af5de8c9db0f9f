//! Laurent polynomials over Q in commuting formal parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{ExprError, Q};

/// Interned parameter name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// Product of parameter powers; exponents are nonzero and may be negative.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ParamMonomial(Vec<(Symbol, i32)>);

impl ParamMonomial {
    pub fn one() -> Self {
        ParamMonomial(Vec::new())
    }

    pub fn var(sym: Symbol, exp: i32) -> Self {
        if exp == 0 {
            Self::one()
        } else {
            ParamMonomial(vec![(sym, exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Symbol, i32)] {
        &self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (&self.0[i], &other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a.1 + b.1;
                    if e != 0 {
                        out.push((a.0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        ParamMonomial(out)
    }

    pub fn inverse(&self) -> Self {
        ParamMonomial(self.0.iter().map(|(s, e)| (s.clone(), -e)).collect())
    }

    fn eval(&self, assignment: &BTreeMap<Symbol, Q>) -> Result<Q, ExprError> {
        let mut acc = Q::one();
        for (sym, e) in &self.0 {
            let v = assignment
                .get(sym)
                .ok_or_else(|| ExprError::UnassignedParameter(sym.to_string()))?;
            if *e < 0 && v.is_zero() {
                return Err(ExprError::SingularAssignment(sym.to_string()));
            }
            acc *= pow_q(v, *e);
        }
        Ok(acc)
    }

    fn eval_f64(&self, assignment: &BTreeMap<Symbol, f64>) -> Result<f64, ExprError> {
        let mut acc = 1.0;
        for (sym, e) in &self.0 {
            let v = assignment
                .get(sym)
                .ok_or_else(|| ExprError::UnassignedParameter(sym.to_string()))?;
            acc *= v.powi(*e);
        }
        Ok(acc)
    }
}

pub(crate) fn pow_q(v: &Q, e: i32) -> Q {
    let mut acc = Q::one();
    for _ in 0..e.unsigned_abs() {
        acc *= v;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Sparse Laurent polynomial with rational coefficients; zero coefficients
/// are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMonomial, Q>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(ParamMonomial::one(), c);
        }
        p
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn monomial(m: ParamMonomial, c: Q) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn param(sym: Symbol) -> Self {
        Self::monomial(ParamMonomial::var(sym, 1), Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value if no parameter occurs.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&ParamMonomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(ParamMonomial::is_one)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(s, _)| s))
    }

    pub fn add_term(&mut self, m: ParamMonomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn neg(&self) -> Self {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        // Fast path for the overwhelmingly common parameter-free case.
        if let (Some(a), Some(b)) = (self.as_constant(), other.as_constant()) {
            return Self::constant(a * b);
        }
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Inverse of a single-monomial polynomial, if it is one.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        Some(Self::monomial(m.inverse(), c.recip()))
    }

    pub fn subst(&self, assignment: &BTreeMap<Symbol, Q>) -> Result<Q, ExprError> {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            acc += m.eval(assignment)? * c;
        }
        Ok(acc)
    }

    /// Substitute only the assigned parameters, leaving the rest symbolic.
    pub fn subst_partial(&self, assignment: &BTreeMap<Symbol, Q>) -> Result<Self, ExprError> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for (sym, e) in &m.0 {
                match assignment.get(sym) {
                    Some(v) => {
                        if *e < 0 && v.is_zero() {
                            return Err(ExprError::SingularAssignment(sym.to_string()));
                        }
                        coeff *= pow_q(v, *e);
                    }
                    None => rest.push((sym.clone(), *e)),
                }
            }
            out.add_term(ParamMonomial(rest), coeff);
        }
        Ok(out)
    }

    pub fn eval_f64(&self, assignment: &BTreeMap<Symbol, f64>) -> Result<f64, ExprError> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            acc += m.eval_f64(assignment)? * q_to_f64(c);
        }
        Ok(acc)
    }
}

pub(crate) fn q_to_f64(q: &Q) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Prints a rational as `p` or `p/q` (sign included).
pub fn format_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let factors: Vec<String> =
                m.0.iter()
                    .map(|(s, e)| {
                        if *e == 1 {
                            s.to_string()
                        } else {
                            format!("{s}^{e}")
                        }
                    })
                    .collect();
            if factors.is_empty() {
                f.write_str(&format_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn laurent_monomials_cancel() {
        let a = Symbol::new("a");
        let m = ParamMonomial::var(a.clone(), 2).mul(&ParamMonomial::var(a, -2));
        assert!(m.is_one());
    }

    #[test]
    fn constraint_vanishes_on_admissible_values() {
        let (a, b) = (Symbol::new("a"), Symbol::new("b"));
        let p = ParamPoly::param(a.clone())
            .mul(&ParamPoly::param(a.clone()))
            .add(&ParamPoly::param(b.clone()).scale(&q(2, 1)));
        let env: BTreeMap<_, _> = [(a.clone(), q(2, 1)), (b.clone(), q(-2, 1))].into();
        assert_eq!(p.subst(&env).unwrap(), Q::zero());
        let env: BTreeMap<_, _> = [(a, q(2, 1)), (b, q(0, 1))].into();
        assert_eq!(p.subst(&env).unwrap(), q(4, 1));
    }

    #[test]
    fn inverse_power_rejects_zero() {
        let a = Symbol::new("a");
        let p = ParamPoly::monomial(ParamMonomial::var(a.clone(), -1), q(1, 2));
        let env: BTreeMap<_, _> = [(a, Q::zero())].into();
        assert!(matches!(
            p.subst(&env),
            Err(ExprError::SingularAssignment(_))
        ));
    }

    #[test]
    fn display_is_readable() {
        let a = Symbol::new("a");
        let p = ParamPoly::param(a.clone()).add(&ParamPoly::constant(q(-1, 2)));
        assert_eq!(p.to_string(), "-1/2 + a");
    }
}
