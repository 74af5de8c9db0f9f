//! Vector fields with exponential-polynomial coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{parse::format_field, ExpPoly, ExponentVector, ExprError, ParamPoly, Symbol, Q};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("affine map has a singular linear part")]
    SingularMap,
    #[error("affine shift would multiply exp({exponent}) by a transcendental constant")]
    TranscendentalShift { exponent: String },
}

/// `sum_i X^i d/dx_i`, stored as its `n` coefficient functions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VectorField {
    comps: Vec<ExpPoly>,
}

impl VectorField {
    pub fn zero(dim: usize) -> Self {
        VectorField {
            comps: vec![ExpPoly::zero(dim); dim],
        }
    }

    /// The coordinate field `d/dx_index`.
    pub fn frame(dim: usize, index: usize) -> Self {
        let mut v = Self::zero(dim);
        v.comps[index] = ExpPoly::one(dim);
        v
    }

    pub fn new(comps: Vec<ExpPoly>) -> Result<Self, ExprError> {
        let n = comps.len();
        for c in &comps {
            if c.dim() != n {
                return Err(ExprError::DimensionMismatch(n, c.dim()));
            }
        }
        Ok(VectorField { comps })
    }

    /// A field with a single nonzero component.
    pub fn along(coeff: ExpPoly, index: usize) -> Self {
        let mut v = Self::zero(coeff.dim());
        v.comps[index] = coeff;
        v
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[ExpPoly] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &ExpPoly {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(ExpPoly::is_zero)
    }

    pub fn is_parameter_free(&self) -> bool {
        self.comps.iter().all(ExpPoly::is_parameter_free)
    }

    pub fn params(&self) -> BTreeSet<Symbol> {
        self.comps.iter().flat_map(|c| c.params()).collect()
    }

    pub fn exponents(&self) -> BTreeSet<ExponentVector> {
        self.comps.iter().flat_map(|c| c.exponents()).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.comps
            .iter()
            .map(ExpPoly::max_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, k: &Q) -> Self {
        self.map(|c| c.scale(k))
    }

    pub fn scale_param(&self, k: &ParamPoly) -> Self {
        self.map(|c| c.scale_param(k))
    }

    /// Multiply every component by the scalar function `f`.
    pub fn scale_by(&self, f: &ExpPoly) -> Self {
        self.map(|c| c * f)
    }

    fn map(&self, f: impl Fn(&ExpPoly) -> ExpPoly) -> Self {
        VectorField {
            comps: self.comps.iter().map(f).collect(),
        }
    }

    fn check_dim(&self, other: usize) -> Result<(), ExprError> {
        if self.dim() != other {
            Err(ExprError::DimensionMismatch(self.dim(), other))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExprError> {
        self.check_dim(other.dim())?;
        Ok(VectorField {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// The derivation `X(f) = sum_i X^i df/dx_i`.
    pub fn apply(&self, f: &ExpPoly) -> Result<ExpPoly, ExprError> {
        self.check_dim(f.dim())?;
        let mut acc = ExpPoly::zero(self.dim());
        for (i, xi) in self.comps.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let d = f.derive(i);
            if !d.is_zero() {
                acc = &acc + &(xi * &d);
            }
        }
        Ok(acc)
    }

    /// `[X, Y]^i = X(Y^i) - Y(X^i)`.
    pub fn try_bracket(&self, other: &Self) -> Result<Self, ExprError> {
        self.check_dim(other.dim())?;
        let comps = (0..self.dim())
            .map(|i| {
                let a = self.apply(&other.comps[i])?;
                let b = other.apply(&self.comps[i])?;
                Ok(&a - &b)
            })
            .collect::<Result<Vec<_>, ExprError>>()?;
        Ok(VectorField { comps })
    }

    /// Panics on a dimension mismatch; see [`VectorField::try_bracket`].
    pub fn bracket(&self, other: &Self) -> Self {
        self.try_bracket(other)
            .expect("bracket of fields of different dimension")
    }

    pub fn subst_params(&self, assignment: &BTreeMap<Symbol, Q>) -> Result<Self, ExprError> {
        Ok(VectorField {
            comps: self
                .comps
                .iter()
                .map(|c| c.subst_params(assignment))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn subst_params_partial(
        &self,
        assignment: &BTreeMap<Symbol, Q>,
    ) -> Result<Self, ExprError> {
        Ok(VectorField {
            comps: self
                .comps
                .iter()
                .map(|c| c.subst_params_partial(assignment))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Express the field in the coordinates `x~ = A x + s`.
    pub fn affine_pullback(&self, map: &AffineMap) -> Result<Self, FieldError> {
        let n = self.dim();
        self.check_dim(map.dim())?;
        let pulled: Vec<ExpPoly> = self
            .comps
            .iter()
            .map(|c| {
                c.substitute_affine(&map.inverse, &map.inverse_shift)
                    .ok_or_else(|| {
                        let bad = c
                            .exponents()
                            .into_iter()
                            .find(|e| {
                                let dot: Q = e
                                    .entries()
                                    .iter()
                                    .zip(&map.inverse_shift)
                                    .map(|(a, b)| a * b)
                                    .sum();
                                !dot.is_zero()
                            })
                            .expect("some exponent is shifted");
                        FieldError::TranscendentalShift {
                            exponent: crate::expr::parse::format_linear(&bad),
                        }
                    })
            })
            .collect::<Result<_, _>>()?;
        let comps = (0..n)
            .map(|j| {
                let mut acc = ExpPoly::zero(n);
                for (i, p) in pulled.iter().enumerate() {
                    let a = &map.linear[j][i];
                    if !a.is_zero() && !p.is_zero() {
                        acc = &acc + &p.scale(a);
                    }
                }
                acc
            })
            .collect();
        Ok(VectorField { comps })
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        self.try_add(rhs)
            .expect("adding fields of different dimension")
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        self.try_add(&-rhs)
            .expect("subtracting fields of different dimension")
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        self.map(|c| -c)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_field(self))
    }
}

/// Rational combination `sum_k coeffs[k] * fields[k]`.
pub fn combine(dim: usize, coeffs: &[Q], fields: &[VectorField]) -> VectorField {
    let mut acc = VectorField::zero(dim);
    for (c, f) in coeffs.iter().zip(fields) {
        if !c.is_zero() {
            acc = &acc + &f.scale(c);
        }
    }
    acc
}

/// Invertible affine change of coordinates `x~ = A x + s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    linear: Vec<Vec<Q>>,
    shift: Vec<Q>,
    inverse: Vec<Vec<Q>>,
    inverse_shift: Vec<Q>,
}

impl AffineMap {
    pub fn new(linear: Vec<Vec<Q>>, shift: Vec<Q>) -> Result<Self, FieldError> {
        let n = shift.len();
        if linear.len() != n || linear.iter().any(|r| r.len() != n) {
            return Err(FieldError::Expr(ExprError::DimensionMismatch(
                n,
                linear.len(),
            )));
        }
        let inverse = linalg::inverse(&linear).ok_or(FieldError::SingularMap)?;
        // x = A^{-1} x~ - A^{-1} s
        let inverse_shift = (0..n)
            .map(|i| -(0..n).map(|j| &inverse[i][j] * &shift[j]).sum::<Q>())
            .collect();
        Ok(AffineMap {
            linear,
            shift,
            inverse,
            inverse_shift,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::linear_only(linalg::identity(n)).expect("identity is invertible")
    }

    pub fn linear_only(linear: Vec<Vec<Q>>) -> Result<Self, FieldError> {
        let n = linear.len();
        Self::new(linear, vec![Q::zero(); n])
    }

    pub fn translation(shift: Vec<Q>) -> Self {
        let n = shift.len();
        Self::new(linalg::identity(n), shift).expect("identity is invertible")
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn linear(&self) -> &[Vec<Q>] {
        &self.linear
    }

    pub fn shift(&self) -> &[Q] {
        &self.shift
    }
}

/// Component matrix entry `(row = coordinate, column = field)`.
fn minor(fields: &[&VectorField], rows: &[usize], cols: &[usize]) -> ExpPoly {
    let n = fields[0].dim();
    let k = rows.len();
    // Expansion along rows, memoized on the set of used columns.
    let mut memo: BTreeMap<u32, ExpPoly> = BTreeMap::new();
    memo.insert(0, ExpPoly::one(n));
    for (r, &row) in rows.iter().enumerate() {
        let mut next: BTreeMap<u32, ExpPoly> = BTreeMap::new();
        for (mask, val) in &memo {
            if val.is_zero() {
                continue;
            }
            for (c, &col) in cols.iter().enumerate() {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let entry = fields[col].component(row);
                if entry.is_zero() {
                    continue;
                }
                // sign = (-1)^(number of used columns to the right of c)
                let later = (mask >> (c + 1)).count_ones();
                let mut term = val * entry;
                if later % 2 == 1 {
                    term = -&term;
                }
                let slot = next
                    .entry(mask | (1 << c))
                    .or_insert_with(|| ExpPoly::zero(n));
                *slot = &*slot + &term;
            }
        }
        memo = next;
        if r + 1 < k && memo.values().all(ExpPoly::is_zero) {
            return ExpPoly::zero(n);
        }
    }
    memo.remove(&((1u32 << k) - 1))
        .unwrap_or_else(|| ExpPoly::zero(n))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Above this many minors of one size, fall back to the greedy search.
const MINOR_BUDGET: usize = 20_000;

fn any_nonzero_minor(fields: &[&VectorField], rows: &[Vec<usize>], cols: &[Vec<usize>]) -> bool {
    let pairs: Vec<(&Vec<usize>, &Vec<usize>)> = rows
        .iter()
        .flat_map(|r| cols.iter().map(move |c| (r, c)))
        .collect();
    pairs
        .par_iter()
        .any(|(r, c)| !minor(fields, r, c).is_zero())
}

/// Largest `k` such that some `k x k` minor of the component matrix is not
/// identically zero. Sizes are searched downward; within a size, minors are
/// visited in lexicographic order of (rows, columns). Very wide families
/// use the column-greedy search instead, which yields the same rank because
/// columns with a nonvanishing maximal minor form a matroid.
pub fn generic_rank(fields: &[VectorField]) -> usize {
    let live: Vec<&VectorField> = {
        let mut seen = BTreeSet::new();
        fields
            .iter()
            .filter(|f| !f.is_zero())
            .filter(|f| seen.insert(format_field(f)))
            .collect()
    };
    if live.is_empty() {
        return 0;
    }
    let n = live[0].dim();
    let m = live.len();
    assert!(n < 32, "generic_rank supports at most 31 coordinates");
    let top = n.min(m);
    if binomial(n, top).saturating_mul(binomial(m, top)) > MINOR_BUDGET {
        return greedy_rank(&live);
    }
    for k in (1..=top).rev() {
        if any_nonzero_minor(&live, &subsets(n, k), &subsets(m, k)) {
            return k;
        }
    }
    0
}

fn greedy_rank(fields: &[&VectorField]) -> usize {
    let n = fields[0].dim();
    let mut chosen: Vec<usize> = Vec::new();
    for j in 0..fields.len() {
        if chosen.len() == n {
            break;
        }
        let mut cols = chosen.clone();
        cols.push(j);
        if any_nonzero_minor(fields, &subsets(n, cols.len()), &[cols.clone()]) {
            chosen = cols;
        }
    }
    chosen.len()
}

/// `sum_i M_ij x_j d/dx_i`; note `[xi_A, xi_B] = -xi_[A,B]`.
pub fn linear_field(matrix: &[Vec<Q>]) -> VectorField {
    let n = matrix.len();
    let comps = (0..n)
        .map(|i| {
            let mut acc = ExpPoly::zero(n);
            for (j, a) in matrix[i].iter().enumerate() {
                if !a.is_zero() {
                    acc = &acc + &ExpPoly::coord(n, j).scale(a);
                }
            }
            acc
        })
        .collect();
    VectorField { comps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, parse_field, q, qi, Alphabet};

    fn alpha() -> Alphabet {
        Alphabet::new(3, &["lambda", "l", "d"])
    }

    fn f(s: &str) -> VectorField {
        parse_field(s, &alpha()).unwrap()
    }

    fn e(s: &str) -> ExpPoly {
        parse_expr(s, &alpha()).unwrap()
    }

    #[test]
    fn derivation_action() {
        assert_eq!(f("Dy").apply(&e("y")).unwrap(), ExpPoly::one(3));
        assert_eq!(
            f("exp(x)*Dy").apply(&e("exp(-x)*y")).unwrap(),
            ExpPoly::one(3)
        );
        assert_eq!(f("y*Dx + Dz").apply(&e("x")).unwrap(), e("y"));
    }

    #[test]
    fn brackets() {
        assert_eq!(f("Dy").bracket(&f("y*Dx + Dz")), f("Dx"));
        let x = f("exp(x)*(Dx + Dy + z*Dz)");
        assert!(x.bracket(&x).is_zero());
        let y = f("exp(-x)*(-Dx + Dy + z*Dz)");
        assert_eq!(x.bracket(&y), f("2*Dx"));
    }

    #[test]
    fn ranks() {
        assert_eq!(generic_rank(&[f("Dx"), f("Dy"), f("y*Dx + Dz")]), 3);
        assert_eq!(generic_rank(&[f("Dx"), f("Dy"), f("y*Dx + lambda*Dy")]), 2);
        assert_eq!(generic_rank(&[VectorField::zero(3)]), 0);
        assert_eq!(generic_rank(&[f("exp(x)*Dx"), f("exp(-x)*Dx"), f("Dx")]), 1);
        let wide: Vec<VectorField> = (0..40)
            .map(|k| f(&format!("z^{k}*Dx + y^{k}*Dy")))
            .collect();
        assert_eq!(greedy_rank(&wide.iter().collect::<Vec<_>>()), 2);
    }

    #[test]
    fn affine_changes() {
        let x = f("exp(x)*y*Dz + z^2*Dx");
        assert_eq!(x.affine_pullback(&AffineMap::identity(3)).unwrap(), x);

        let mut a = linalg::identity(3);
        a[0][0] = qi(2);
        let t = AffineMap::linear_only(a).unwrap();
        assert_eq!(f("Dx").affine_pullback(&t).unwrap(), f("2*Dx"));

        // z~ = z - 1/2
        let t = AffineMap::translation(vec![qi(0), qi(0), q(-1, 2)]);
        let before = f("-((z - 1/2)^2 + d - 1/4)*Dz");
        assert_eq!(
            before.affine_pullback(&t).unwrap(),
            f("-(z^2 + d - 1/4)*Dz")
        );

        let singular = vec![vec![qi(0); 3]; 3];
        assert_eq!(
            AffineMap::linear_only(singular),
            Err(FieldError::SingularMap)
        );
        let t = AffineMap::translation(vec![qi(1), qi(0), qi(0)]);
        assert!(matches!(
            f("exp(x)*Dx").affine_pullback(&t),
            Err(FieldError::TranscendentalShift { .. })
        ));
    }

    #[test]
    fn linear_fields_anti_represent() {
        let e = vec![vec![qi(0), qi(1)], vec![qi(0), qi(0)]];
        let g = vec![vec![qi(0), qi(0)], vec![qi(1), qi(0)]];
        let h = vec![vec![qi(1), qi(0)], vec![qi(0), qi(-1)]];
        assert_eq!(
            linear_field(&e).bracket(&linear_field(&g)),
            -&linear_field(&h)
        );
    }
}
