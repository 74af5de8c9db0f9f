//! Exact linear algebra over Q: small dense matrices and an incremental
//! sparse echelon form with combination tracking.

use std::collections::{BTreeMap, HashMap};
use std::ops::Bound;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::expr::{ExponentVector, Monomial, Q};
use crate::vectorfield::VectorField;

pub fn identity(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect()
}

/// Row-reduce in place; returns the pivot columns.
fn row_reduce(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (pivot_row, row) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in row.iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut a = m.to_vec();
    row_reduce(&mut a).len()
}

#[allow(clippy::needless_range_loop)]
pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub type SparseVec = BTreeMap<usize, Q>;

fn axpy(y: &mut SparseVec, a: &Q, x: &SparseVec) {
    for (k, v) in x {
        let t = a * v;
        match y.entry(*k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(t);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += t;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

struct Row {
    vec: SparseVec,
    combo: SparseVec,
}

/// Incremental row echelon form. Each stored row has leading coefficient 1
/// at its smallest key and remembers which combination of inputs it is.
#[derive(Default)]
pub struct Echelon {
    rows: Vec<Row>,
    pivots: HashMap<usize, usize>,
}

/// Outcome of [`Echelon::insert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inserted {
    Independent,
    /// Coefficients `c` with `sum_i c_i input_i = 0` (the new input included).
    Dependent(SparseVec),
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Returns `(residual, s)` with `v = residual + sum_i s_i input_i`.
    pub fn reduce(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut used = SparseVec::new();
        let mut cursor: Option<usize> = None;
        loop {
            let next = match cursor {
                None => v.iter().next(),
                Some(c) => v.range((Bound::Excluded(c), Bound::Unbounded)).next(),
            }
            .map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            if let Some(&ri) = self.pivots.get(&k) {
                let row = &self.rows[ri];
                axpy(&mut v, &-&c, &row.vec);
                axpy(&mut used, &c, &row.combo);
            }
            cursor = Some(k);
        }
        (v, used)
    }

    /// Insert input number `index` with value `v`.
    pub fn insert(&mut self, index: usize, v: SparseVec) -> Inserted {
        let (res, used) = self.reduce(v);
        let mut combo = SparseVec::new();
        combo.insert(index, Q::one());
        axpy(&mut combo, &-Q::one(), &used);
        let Some((&lead, c)) = res.iter().next() else {
            return Inserted::Dependent(combo);
        };
        let inv = c.recip();
        let scale = |m: SparseVec| m.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(Row {
            vec: scale(res),
            combo: scale(combo),
        });
        Inserted::Independent
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("field has parameters; substitute them before linear algebra")]
pub struct Parameterized;

/// Assigns dense indices to `(component, exponent, monomial)` keys.
#[derive(Default, Clone)]
pub struct KeyIndex {
    map: HashMap<(usize, ExponentVector, Monomial), usize>,
}

impl KeyIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn intern(&mut self, key: (usize, ExponentVector, Monomial)) -> usize {
        let next = self.map.len();
        *self.map.entry(key).or_insert(next)
    }

    pub fn get(&self, key: &(usize, ExponentVector, Monomial)) -> Option<usize> {
        self.map.get(key).copied()
    }

    /// Keys in index order.
    pub fn keys(&self) -> Vec<(usize, ExponentVector, Monomial)> {
        let mut out: Vec<_> = self.map.iter().map(|(k, &i)| (i, k.clone())).collect();
        out.sort_by_key(|(i, _)| *i);
        out.into_iter().map(|(_, k)| k).collect()
    }

    /// Coefficient vector of a parameter-free field, interning new keys.
    pub fn vectorize(&mut self, f: &VectorField) -> Result<SparseVec, Parameterized> {
        let mut out = SparseVec::new();
        for (i, c) in f.components().iter().enumerate() {
            for (e, m, coeff) in c.terms() {
                let v = coeff.as_constant().ok_or(Parameterized)?;
                let k = self.intern((i, e.clone(), m.clone()));
                out.insert(k, v);
            }
        }
        Ok(out)
    }
}

/// A growing Q-linearly independent family of fields.
#[derive(Default)]
pub struct FieldSpan {
    keys: KeyIndex,
    echelon: Echelon,
    basis: Vec<VectorField>,
}

impl FieldSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(&self) -> &[VectorField] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<VectorField> {
        self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Adds `f` if it is independent of the current basis.
    pub fn insert(&mut self, f: &VectorField) -> Result<bool, Parameterized> {
        let v = self.keys.vectorize(f)?;
        let (res, _) = self.echelon.reduce(v.clone());
        if res.is_empty() {
            return Ok(false);
        }
        self.echelon.insert(self.basis.len(), v);
        self.basis.push(f.clone());
        Ok(true)
    }

    /// Coordinates of `f` in the basis, or `None` if outside the span.
    pub fn coordinates(&self, f: &VectorField) -> Result<Option<Vec<Q>>, Parameterized> {
        let mut v = SparseVec::new();
        for (i, c) in f.components().iter().enumerate() {
            for (e, m, coeff) in c.terms() {
                let x = coeff.as_constant().ok_or(Parameterized)?;
                match self.keys.get(&(i, e.clone(), m.clone())) {
                    Some(k) => {
                        v.insert(k, x);
                    }
                    None => return Ok(None),
                }
            }
        }
        let (res, used) = self.echelon.reduce(v);
        if !res.is_empty() {
            return Ok(None);
        }
        Ok(Some(
            (0..self.basis.len())
                .map(|i| used.get(&i).cloned().unwrap_or_else(Q::zero))
                .collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{q, qi};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| qi(x)).collect())
            .collect()
    }

    #[test]
    fn dense_basics() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(determinant(&a), qi(1));
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert_eq!(inverse(&m(&[&[1, 2], &[2, 4]])), None);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]])), 2);
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), qi(-1));
        let b = vec![vec![q(1, 2), qi(0)], vec![qi(0), qi(4)]];
        assert_eq!(determinant(&b), qi(2));
    }

    #[test]
    fn echelon_tracks_dependencies() {
        let v = |pairs: &[(usize, i64)]| -> SparseVec {
            pairs.iter().map(|&(k, x)| (k, qi(x))).collect()
        };
        let mut e = Echelon::new();
        assert_eq!(e.insert(0, v(&[(0, 1), (1, 1)])), Inserted::Independent);
        assert_eq!(e.insert(1, v(&[(1, 1), (2, 1)])), Inserted::Independent);
        // (1,2,1) = in0 + in1
        match e.insert(2, v(&[(0, 1), (1, 2), (2, 1)])) {
            Inserted::Dependent(c) => assert_eq!(c, v(&[(0, -1), (1, -1), (2, 1)])),
            Inserted::Independent => panic!("expected a dependency"),
        }
        assert_eq!(e.rank(), 2);
    }
}
