//! Finite-dimensional Lie algebras spanned by concrete vector fields.

// Index loops mirror the tensor notation c^k_{ij}.
#![allow(clippy::needless_range_loop)]

use std::fmt::Write as _;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{format_rational, Q};
use crate::linalg::{self, FieldSpan, Parameterized};
use crate::vectorfield::VectorField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error(transparent)]
    Parameterized(#[from] Parameterized),
    #[error("field {0} is not in the span of the basis")]
    NotInSpan(String),
    #[error("bracket closure exceeds {0} dimensions")]
    NotFiniteDimensionalWithinBound(usize),
    #[error("basis is linearly dependent")]
    DependentBasis,
}

/// Maximal linearly independent sublist, in input order.
pub fn span_basis(fields: &[VectorField]) -> Result<Vec<VectorField>, LieError> {
    let mut span = FieldSpan::new();
    for f in fields {
        span.insert(f)?;
    }
    Ok(span.into_basis())
}

/// Basis of the smallest bracket-closed span containing `fields`: input
/// order first, then brackets in order of discovery.
pub fn close_under_bracket(
    fields: &[VectorField],
    max_dim: usize,
) -> Result<Vec<VectorField>, LieError> {
    let mut span = FieldSpan::new();
    for f in fields {
        span.insert(f)?;
        if span.len() > max_dim {
            return Err(LieError::NotFiniteDimensionalWithinBound(max_dim));
        }
    }
    let mut j = 1;
    while j < span.len() {
        for i in 0..j {
            let b = span.basis()[i].bracket(&span.basis()[j]);
            if span.insert(&b)? && span.len() > max_dim {
                return Err(LieError::NotFiniteDimensionalWithinBound(max_dim));
            }
        }
        j += 1;
    }
    Ok(span.into_basis())
}

fn independent_span(basis: &[VectorField]) -> Result<FieldSpan, LieError> {
    let mut span = FieldSpan::new();
    for b in basis {
        if !span.insert(b)? {
            return Err(LieError::DependentBasis);
        }
    }
    Ok(span)
}

/// Exact coordinates of `x` in an independent `basis`.
pub fn express_in_basis(x: &VectorField, basis: &[VectorField]) -> Result<Vec<Q>, LieError> {
    let span = independent_span(basis)?;
    span.coordinates(x)?
        .ok_or_else(|| LieError::NotInSpan(x.to_string()))
}

/// Structure constants `[b_i, b_j] = sum_k c[k][i][j] b_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTensor {
    dim: usize,
    c: Vec<Vec<Vec<Q>>>,
}

impl StructureTensor {
    /// Builds a tensor from `f(i, j) = coordinates of [b_i, b_j]` for `i < j`.
    pub fn from_upper(dim: usize, f: impl Fn(usize, usize) -> Vec<Q>) -> Self {
        let mut c = vec![vec![vec![Q::zero(); dim]; dim]; dim];
        for i in 0..dim {
            for j in i + 1..dim {
                let v = f(i, j);
                for k in 0..dim {
                    c[k][j][i] = -&v[k];
                    c[k][i][j] = v[k].clone();
                }
            }
        }
        StructureTensor { dim, c }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, k: usize, i: usize, j: usize) -> &Q {
        &self.c[k][i][j]
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim;
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    if !self.c[k][i][j].is_zero() {
                        *o += &xy * &self.c[k][i][j];
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad(b_i)`: entry `(k, j)` is `c[k][i][j]`.
    pub fn ad(&self, i: usize) -> Vec<Vec<Q>> {
        (0..self.dim)
            .map(|k| (0..self.dim).map(|j| self.c[k][i][j].clone()).collect())
            .collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim;
        (0..n).all(|k| (0..n).all(|i| (0..n).all(|j| self.c[k][i][j] == -&self.c[k][j][i])))
    }

    /// Jacobi identity on basis triples.
    pub fn satisfies_jacobi(&self) -> bool {
        let n = self.dim;
        let e = |i: usize| -> Vec<Q> {
            (0..n)
                .map(|k| {
                    if k == i {
                        Q::from_integer(1.into())
                    } else {
                        Q::zero()
                    }
                })
                .collect()
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (e(i), e(j), e(k));
                    let t1 = self.bracket(&a, &self.bracket(&b, &c));
                    let t2 = self.bracket(&b, &self.bracket(&c, &a));
                    let t3 = self.bracket(&c, &self.bracket(&a, &b));
                    if (0..n).any(|m| !(&t1[m] + &t2[m] + &t3[m]).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Plain-text table, one nonzero `c[k][i][j] = p/q` per line with `i < j`.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in 0..self.dim {
                    let v = &self.c[k][i][j];
                    if !v.is_zero() {
                        writeln!(s, "c[{k}][{i}][{j}] = {}", format_rational(v)).unwrap();
                    }
                }
            }
        }
        s
    }
}

/// Structure tensor of an independent, bracket-closed basis.
pub fn structure_tensor(basis: &[VectorField]) -> Result<StructureTensor, LieError> {
    let span = independent_span(basis)?;
    let n = basis.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let coords: Vec<Vec<Q>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let b = basis[i].bracket(&basis[j]);
            span.coordinates(&b)?
                .ok_or_else(|| LieError::NotInSpan(b.to_string()))
        })
        .collect::<Result<_, LieError>>()?;
    let mut it = coords.into_iter();
    let mut table = vec![vec![Vec::new(); n]; n];
    for &(i, j) in &pairs {
        table[i][j] = it.next().expect("one entry per pair");
    }
    let t = StructureTensor::from_upper(n, |i, j| table[i][j].clone());
    debug_assert!(t.is_antisymmetric() && t.satisfies_jacobi());
    Ok(t)
}

/// `K_ij = tr(ad_i ad_j)`.
pub fn killing_form(t: &StructureTensor) -> Vec<Vec<Q>> {
    let n = t.dim;
    let ads: Vec<Vec<Vec<Q>>> = (0..n).map(|i| t.ad(i)).collect();
    let mut k = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let mut tr = Q::zero();
            for a in 0..n {
                for b in 0..n {
                    if !ads[i][a][b].is_zero() && !ads[j][b][a].is_zero() {
                        tr += &ads[i][a][b] * &ads[j][b][a];
                    }
                }
            }
            k[j][i] = tr.clone();
            k[i][j] = tr;
        }
    }
    k
}

pub fn killing_determinant(t: &StructureTensor) -> Q {
    linalg::determinant(&killing_form(t))
}

/// Cartan's criterion: nondegenerate Killing form.
pub fn is_semisimple(t: &StructureTensor) -> bool {
    t.dim > 0 && !killing_determinant(t).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_field, qi, Alphabet};

    fn f(s: &str) -> VectorField {
        parse_field(s, &Alphabet::new(3, &[])).unwrap()
    }

    fn fs(list: &[&str]) -> Vec<VectorField> {
        list.iter().map(|s| f(s)).collect()
    }

    #[test]
    fn spans() {
        assert_eq!(
            span_basis(&fs(&["Dx", "2*Dx", "Dy"])).unwrap(),
            fs(&["Dx", "Dy"])
        );
        assert!(span_basis(&[VectorField::zero(3)]).unwrap().is_empty());
        assert_eq!(
            span_basis(&fs(&["Dx", "Dy", "y*Dx + Dz"])).unwrap().len(),
            3
        );
    }

    #[test]
    fn closures() {
        assert_eq!(
            close_under_bracket(&fs(&["Dx", "Dy"]), 10).unwrap().len(),
            2
        );
        let sl2 = close_under_bracket(&fs(&["exp(x)*Dx", "exp(-x)*Dx"]), 10).unwrap();
        assert_eq!(sl2.len(), 3);
        assert_eq!(express_in_basis(&f("Dx"), &sl2).unwrap().len(), 3);
        assert_eq!(
            close_under_bracket(&fs(&["Dx", "x^2*Dx", "exp(x)*Dx"]), 12),
            Err(LieError::NotFiniteDimensionalWithinBound(12))
        );
    }

    #[test]
    fn coordinates() {
        let b = fs(&["Dx", "Dy", "y*Dx + Dz"]);
        assert_eq!(
            express_in_basis(&f("Dx"), &b[..2]).unwrap(),
            vec![qi(1), qi(0)]
        );
        let br = b[1].bracket(&b[2]);
        assert_eq!(
            express_in_basis(&br, &b).unwrap(),
            vec![qi(1), qi(0), qi(0)]
        );
        assert!(matches!(
            express_in_basis(&f("z*Dz"), &b[..2]),
            Err(LieError::NotInSpan(_))
        ));
    }

    #[test]
    fn heisenberg_tensor() {
        let t = structure_tensor(&fs(&["Dx", "Dy", "y*Dx + Dz"])).unwrap();
        assert_eq!(t.to_table(), "c[0][1][2] = 1\n");
        let k = killing_form(&t);
        assert!(k[0].iter().all(Zero::is_zero));
        assert!(!is_semisimple(&t));
        let abelian = structure_tensor(&fs(&["Dx", "Dy"])).unwrap();
        assert!(killing_form(&abelian).iter().flatten().all(Zero::is_zero));
    }

    #[test]
    fn sl2_from_exponentials() {
        let t = structure_tensor(&fs(&["Dx", "exp(x)*Dx", "exp(-x)*Dx"])).unwrap();
        // [H,E] = E, [H,F] = -F, [E,F] = -2H
        assert_eq!(
            t.bracket(&[qi(1), qi(0), qi(0)], &[qi(0), qi(1), qi(0)]),
            vec![qi(0), qi(1), qi(0)]
        );
        assert_eq!(
            t.bracket(&[qi(1), qi(0), qi(0)], &[qi(0), qi(0), qi(1)]),
            vec![qi(0), qi(0), qi(-1)]
        );
        assert_eq!(
            t.bracket(&[qi(0), qi(1), qi(0)], &[qi(0), qi(0), qi(1)]),
            vec![qi(-2), qi(0), qi(0)]
        );
        assert!(is_semisimple(&t));
    }

    #[test]
    fn standard_sl2_killing() {
        // basis h, e, f
        let t = StructureTensor::from_upper(3, |i, j| match (i, j) {
            (0, 1) => vec![qi(0), qi(2), qi(0)],
            (0, 2) => vec![qi(0), qi(0), qi(-2)],
            _ => vec![qi(1), qi(0), qi(0)],
        });
        let k = killing_form(&t);
        assert_eq!(k[0][0], qi(8));
        assert_eq!(k[1][2], qi(4));
        assert_eq!(killing_determinant(&t), qi(-128));
    }
}
