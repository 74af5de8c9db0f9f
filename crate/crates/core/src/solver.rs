//! Linear bracket constraints on an unknown field drawn from a finite ansatz.
//!
//! The unknown is `X = sum_j c_j b_j` over the ansatz basis. Every constraint
//! is linear in the `c_j`, so the solution set is found by exact elimination
//! of the images `L(b_j)` in a target space whose keys are discovered while
//! the images are computed.

use std::collections::BTreeSet;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{ExpPoly, ExponentVector, Monomial, ParamPoly, Q};
use crate::linalg::{Echelon, Inserted, KeyIndex, SparseVec};
use crate::vectorfield::{combine, generic_rank, VectorField};

/// Default cap on the number of target coordinates.
pub const DEFAULT_TARGET_BOUND: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("constraint {0} has parameters; substitute them first")]
    Parameterized(usize),
    #[error("constraint {index} lives in dimension {found}, the ansatz in {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("derived target space has {size} coordinates, over the bound {bound}")]
    AnsatzExplosion { size: usize, bound: usize },
    #[error("invalid ansatz: {0}")]
    InvalidAnsatz(String),
}

/// Fields `x^m exp(q.x) d/dx_i` with `q` in `exponents`, `|m| <= max_degree`
/// and `i` in `components`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnsatzSpace {
    dim: usize,
    exponents: Vec<ExponentVector>,
    max_degree: u32,
    components: Vec<usize>,
}

impl AnsatzSpace {
    pub fn new(
        dim: usize,
        exponents: impl IntoIterator<Item = ExponentVector>,
        max_degree: u32,
        components: impl IntoIterator<Item = usize>,
    ) -> Result<Self, SolveError> {
        let exponents: Vec<ExponentVector> = exponents
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let components: Vec<usize> = components
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if let Some(e) = exponents.iter().find(|e| e.dim() != dim) {
            return Err(SolveError::InvalidAnsatz(format!(
                "exponent of length {} in dimension {dim}",
                e.dim()
            )));
        }
        if let Some(c) = components.iter().find(|&&c| c >= dim) {
            return Err(SolveError::InvalidAnsatz(format!(
                "component {c} in dimension {dim}"
            )));
        }
        Ok(AnsatzSpace {
            dim,
            exponents,
            max_degree,
            components,
        })
    }

    /// Polynomial fields of degree at most `d` in every component.
    pub fn polynomial(dim: usize, d: u32) -> Self {
        Self::new(dim, [ExponentVector::zero(dim)], d, 0..dim).expect("valid ansatz")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponents(&self) -> &[ExponentVector] {
        &self.exponents
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn components(&self) -> &[usize] {
        &self.components
    }

    pub fn with_degree(&self, d: u32) -> Self {
        AnsatzSpace {
            max_degree: d,
            ..self.clone()
        }
    }

    /// Basis ordered by exponent, then monomial (graded), then component.
    pub fn basis(&self) -> Vec<VectorField> {
        let monos = Monomial::up_to_degree(self.dim, self.max_degree);
        let mut out = Vec::with_capacity(self.size());
        for e in &self.exponents {
            for m in &monos {
                for &i in &self.components {
                    let coeff = ExpPoly::term(self.dim, ParamPoly::one(), m.clone(), e.clone());
                    out.push(VectorField::along(coeff, i));
                }
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.exponents.len()
            * Monomial::up_to_degree(self.dim, self.max_degree).len()
            * self.components.len()
    }
}

impl std::fmt::Display for AnsatzSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let exps: Vec<String> = self
            .exponents
            .iter()
            .map(|e| {
                let parts: Vec<String> = e
                    .entries()
                    .iter()
                    .map(crate::expr::format_rational)
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let comps: Vec<String> = self
            .components
            .iter()
            .map(|&c| crate::expr::frame_name(self.dim, c))
            .collect();
        write!(
            f,
            "n={} E={{{}}} d={} components={{{}}}",
            self.dim,
            exps.join(", "),
            self.max_degree,
            comps.join(",")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintKind {
    /// `[K, X] = c X`
    Eigen(Q),
    /// `[K, X] = 0`
    Zero,
    /// `[K, X] = T`
    Equals(VectorField),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketConstraint {
    pub known: VectorField,
    pub kind: ConstraintKind,
}

impl BracketConstraint {
    pub fn eigen(known: VectorField, c: Q) -> Self {
        BracketConstraint {
            known,
            kind: ConstraintKind::Eigen(c),
        }
    }

    pub fn zero(known: VectorField) -> Self {
        BracketConstraint {
            known,
            kind: ConstraintKind::Zero,
        }
    }

    pub fn equals(known: VectorField, target: VectorField) -> Self {
        BracketConstraint {
            known,
            kind: ConstraintKind::Equals(target),
        }
    }

    /// `[K, X] - c X` (or `[K, X]`), the linear part of the constraint.
    pub fn apply(&self, x: &VectorField) -> VectorField {
        let b = self.known.bracket(x);
        match &self.kind {
            ConstraintKind::Eigen(c) => &b - &x.scale(c),
            _ => b,
        }
    }

    /// True iff `x` satisfies the constraint exactly.
    pub fn holds(&self, x: &VectorField) -> bool {
        let lhs = self.apply(x);
        match &self.kind {
            ConstraintKind::Equals(t) => &lhs == t,
            _ => lhs.is_zero(),
        }
    }
}

/// Constraint index plus the part of `T - [K, X0]` that no ansatz field reaches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistency {
    pub constraint: usize,
    pub residual: VectorField,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Basis of the homogeneous solutions.
    pub basis: Vec<VectorField>,
    /// One solution of the inhomogeneous system, when consistent.
    pub particular: Option<VectorField>,
    pub inconsistency: Option<Inconsistency>,
    /// Rank of the assembled constraint matrix.
    pub rank: usize,
    pub ansatz_dim: usize,
    pub target_dim: usize,
}

impl Solution {
    pub fn is_consistent(&self) -> bool {
        self.inconsistency.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Solver {
    pub target_bound: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            target_bound: DEFAULT_TARGET_BOUND,
        }
    }
}

impl Solver {
    pub fn solve(
        &self,
        constraints: &[BracketConstraint],
        ansatz: &AnsatzSpace,
    ) -> Result<Solution, SolveError> {
        let n = ansatz.dim();
        for (i, c) in constraints.iter().enumerate() {
            let fields = std::iter::once(&c.known).chain(match &c.kind {
                ConstraintKind::Equals(t) => Some(t),
                _ => None,
            });
            for f in fields {
                if f.dim() != n {
                    return Err(SolveError::DimensionMismatch {
                        index: i,
                        expected: n,
                        found: f.dim(),
                    });
                }
                if !f.is_parameter_free() {
                    return Err(SolveError::Parameterized(i));
                }
            }
        }
        if ansatz.size() > self.target_bound {
            return Err(SolveError::AnsatzExplosion {
                size: ansatz.size(),
                bound: self.target_bound,
            });
        }
        let basis = ansatz.basis();
        let images: Vec<Vec<VectorField>> = basis
            .par_iter()
            .map(|b| constraints.iter().map(|c| c.apply(b)).collect())
            .collect();

        // Target keys: (constraint * n + component, exponent, monomial).
        let mut keys = KeyIndex::new();
        let vectorize = |fields: &[VectorField], keys: &mut KeyIndex| -> SparseVec {
            let mut v = SparseVec::new();
            for (ci, f) in fields.iter().enumerate() {
                for (i, comp) in f.components().iter().enumerate() {
                    for (e, m, coeff) in comp.terms() {
                        let k = keys.intern((ci * n + i, e.clone(), m.clone()));
                        v.insert(k, coeff.as_constant().expect("parameter-free"));
                    }
                }
            }
            v
        };
        let columns: Vec<SparseVec> = images.iter().map(|img| vectorize(img, &mut keys)).collect();
        let rhs_fields: Vec<VectorField> = constraints
            .iter()
            .map(|c| match &c.kind {
                ConstraintKind::Equals(t) => t.clone(),
                _ => VectorField::zero(n),
            })
            .collect();
        let rhs = vectorize(&rhs_fields, &mut keys);
        if keys.len() > self.target_bound {
            return Err(SolveError::AnsatzExplosion {
                size: keys.len(),
                bound: self.target_bound,
            });
        }

        let mut ech = Echelon::new();
        let mut kernel = Vec::new();
        for (j, col) in columns.into_iter().enumerate() {
            if let Inserted::Dependent(combo) = ech.insert(j, col) {
                kernel.push(combo);
            }
        }
        let to_field = |combo: &SparseVec| -> VectorField {
            let mut coeffs = vec![Q::zero(); basis.len()];
            for (j, c) in combo {
                coeffs[*j] = c.clone();
            }
            combine(n, &coeffs, &basis)
        };
        let hom: Vec<VectorField> = kernel.iter().map(to_field).collect();

        let (residual, used) = ech.reduce(rhs);
        let (particular, inconsistency) = if residual.is_empty() {
            (Some(to_field(&used)), None)
        } else {
            (None, Some(residual_witness(&residual, &keys, n)))
        };
        Ok(Solution {
            basis: hom,
            particular,
            inconsistency,
            rank: ech.rank(),
            ansatz_dim: basis.len(),
            target_dim: keys.len(),
        })
    }

    /// Generic rank of the fields in the ansatz commuting with all of `algebra`.
    pub fn centralizer_rank(
        &self,
        algebra: &[VectorField],
        ansatz: &AnsatzSpace,
    ) -> Result<usize, SolveError> {
        let constraints: Vec<BracketConstraint> = algebra
            .iter()
            .cloned()
            .map(BracketConstraint::zero)
            .collect();
        let sol = self.solve(&constraints, ansatz)?;
        Ok(generic_rank(&sol.basis))
    }
}

fn residual_witness(residual: &SparseVec, keys: &KeyIndex, n: usize) -> Inconsistency {
    let all = keys.keys();
    let first = *residual.keys().next().expect("nonempty residual");
    let constraint = all[first].0 / n;
    let mut comps = vec![ExpPoly::zero(n); n];
    for (k, c) in residual {
        let (slot, e, m) = &all[*k];
        if slot / n != constraint {
            continue;
        }
        let t = ExpPoly::term(n, ParamPoly::constant(c.clone()), m.clone(), e.clone());
        comps[slot % n] = &comps[slot % n] + &t;
    }
    Inconsistency {
        constraint,
        residual: VectorField::new(comps).expect("consistent dimension"),
    }
}

/// Solve with the default bound.
pub fn solve(
    constraints: &[BracketConstraint],
    ansatz: &AnsatzSpace,
) -> Result<Solution, SolveError> {
    Solver::default().solve(constraints, ansatz)
}

pub fn centralizer_rank(
    algebra: &[VectorField],
    ansatz: &AnsatzSpace,
) -> Result<usize, SolveError> {
    Solver::default().centralizer_rank(algebra, ansatz)
}

/// Solve at each degree in turn, e.g. the sweep `{2, 4, 6}`.
pub fn degree_sweep(
    constraints: &[BracketConstraint],
    ansatz: &AnsatzSpace,
    degrees: &[u32],
) -> Result<Vec<(u32, Solution)>, SolveError> {
    degrees
        .iter()
        .map(|&d| Ok((d, solve(constraints, &ansatz.with_degree(d))?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_field, qi, Alphabet};
    use crate::liealg::span_basis;

    fn f(s: &str) -> VectorField {
        parse_field(s, &Alphabet::new(3, &[])).unwrap()
    }

    #[test]
    fn eigenfields_of_dx() {
        let ansatz = AnsatzSpace::new(3, [ExponentVector::from_ints(&[1, 0, 0])], 0, 0..3).unwrap();
        let sol = solve(&[BracketConstraint::eigen(f("Dx"), qi(1))], &ansatz).unwrap();
        assert_eq!(
            sol.basis,
            vec![f("exp(x)*Dx"), f("exp(x)*Dy"), f("exp(x)*Dz")]
        );
    }

    #[test]
    fn heisenberg_centralizers() {
        let form2 = [f("Dx"), f("Dy"), f("y*Dx")];
        let cons: Vec<_> = form2.iter().cloned().map(BracketConstraint::zero).collect();
        let sol = solve(&cons, &AnsatzSpace::polynomial(3, 2)).unwrap();
        assert_eq!(sol.basis.len(), 6);
        let expected = span_basis(&[
            f("Dx"),
            f("z*Dx"),
            f("z^2*Dx"),
            f("Dz"),
            f("z*Dz"),
            f("z^2*Dz"),
        ])
        .unwrap();
        let mut both = expected.clone();
        both.extend(sol.basis.iter().cloned());
        assert_eq!(span_basis(&both).unwrap().len(), 6);

        let form3 = [f("Dx"), f("Dy"), f("y*Dx + z*Dy")];
        let cons: Vec<_> = form3.iter().cloned().map(BracketConstraint::zero).collect();
        assert_eq!(
            solve(&cons, &AnsatzSpace::polynomial(3, 2))
                .unwrap()
                .basis
                .len(),
            3
        );

        assert_eq!(
            centralizer_rank(&form2, &AnsatzSpace::polynomial(3, 4)),
            Ok(2)
        );
        assert_eq!(
            centralizer_rank(&form3, &AnsatzSpace::polynomial(3, 4)),
            Ok(1)
        );
        let abelian = [f("Dx"), f("Dy"), f("Dz")];
        assert_eq!(
            centralizer_rank(&abelian, &AnsatzSpace::polynomial(3, 0)),
            Ok(3)
        );
    }

    #[test]
    fn inhomogeneous_systems() {
        // [Dy, X] = Dx has the solution y*Dx
        let sol = solve(
            &[BracketConstraint::equals(f("Dy"), f("Dx"))],
            &AnsatzSpace::polynomial(3, 1),
        )
        .unwrap();
        let x = sol.particular.unwrap();
        assert!(BracketConstraint::equals(f("Dy"), f("Dx")).holds(&x));
        // [Dy, X] = y^5*Dx is out of reach at degree 1
        let c = BracketConstraint::equals(f("Dy"), f("y^5*Dx"));
        let sol = solve(&[c], &AnsatzSpace::polynomial(3, 1)).unwrap();
        let w = sol.inconsistency.unwrap();
        assert_eq!(w.constraint, 0);
        assert!(!w.residual.is_zero());
    }

    #[test]
    fn explosion_is_reported() {
        let solver = Solver { target_bound: 10 };
        let r = solver.solve(
            &[BracketConstraint::zero(f("Dx"))],
            &AnsatzSpace::polynomial(3, 2),
        );
        assert!(matches!(r, Err(SolveError::AnsatzExplosion { .. })));
    }

    #[test]
    fn parameters_are_rejected() {
        let k = parse_field("a*Dx", &Alphabet::new(3, &["a"])).unwrap();
        let r = solve(
            &[BracketConstraint::zero(k)],
            &AnsatzSpace::polynomial(3, 1),
        );
        assert_eq!(r, Err(SolveError::Parameterized(0)));
    }
}
