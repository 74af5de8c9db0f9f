//! Shared proptest strategies: small exponential polynomials and fields on C^3.

#![allow(dead_code)]

use lvf_core::expr::{q, ExpPoly, ExponentVector, Monomial, ParamMonomial, ParamPoly, Term};
use lvf_core::{Symbol, VectorField, Q};
use proptest::prelude::*;

pub const DIM: usize = 3;

pub fn rational() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Q> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=3).prop_map(|(n, d)| q(n, d))
}

/// Exponents drawn from a small lattice so that products collide often.
pub fn exponent() -> impl Strategy<Value = ExponentVector> {
    prop::collection::vec(
        prop_oneof![3 => Just(0i64), 1 => Just(1), 1 => Just(-1), 1 => Just(2)],
        DIM,
    )
    .prop_map(|v| ExponentVector::new(v.into_iter().map(|k| q(k, 2)).collect()))
}

pub fn monomial(max: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max, DIM).prop_map(Monomial::new)
}

/// Laurent coefficient in `a` (powers -1..=2) or a plain rational.
pub fn coeff(with_params: bool) -> BoxedStrategy<ParamPoly> {
    if !with_params {
        return nonzero_rational().prop_map(ParamPoly::constant).boxed();
    }
    prop::collection::vec((-1i32..=2, rational()), 1..=2)
        .prop_map(|parts| {
            let mut p = ParamPoly::zero();
            for (e, c) in parts {
                let m = if e == 0 {
                    ParamMonomial::one()
                } else {
                    ParamMonomial::var(Symbol::new("a"), e)
                };
                p.add_term(m, c);
            }
            p
        })
        .boxed()
}

pub fn exppoly_with(
    max_terms: usize,
    max_deg: u32,
    exps: bool,
    params: bool,
) -> BoxedStrategy<ExpPoly> {
    let exp: BoxedStrategy<ExponentVector> = if exps {
        exponent().boxed()
    } else {
        Just(ExponentVector::zero(DIM)).boxed()
    };
    prop::collection::vec((coeff(params), monomial(max_deg), exp), 0..=max_terms)
        .prop_map(|ts| {
            ExpPoly::from_terms(
                DIM,
                ts.into_iter().map(|(coeff, monomial, exponent)| Term {
                    coeff,
                    monomial,
                    exponent,
                }),
            )
        })
        .boxed()
}

pub fn exppoly() -> BoxedStrategy<ExpPoly> {
    exppoly_with(3, 2, true, false)
}

pub fn param_exppoly() -> BoxedStrategy<ExpPoly> {
    exppoly_with(3, 2, true, true)
}

pub fn field_with(
    max_terms: usize,
    max_deg: u32,
    exps: bool,
    params: bool,
) -> BoxedStrategy<VectorField> {
    prop::collection::vec(exppoly_with(max_terms, max_deg, exps, params), DIM)
        .prop_map(|c| VectorField::new(c).expect("three components"))
        .boxed()
}

pub fn field() -> BoxedStrategy<VectorField> {
    field_with(2, 2, true, false)
}

pub fn polynomial_field() -> BoxedStrategy<VectorField> {
    field_with(2, 2, false, false)
}

/// Invertible integer-ish 3x3 matrix: unit lower times unit upper triangular, times a diagonal.
pub fn invertible() -> impl Strategy<Value = Vec<Vec<Q>>> {
    (
        prop::collection::vec(-2i64..=2, 6),
        prop::collection::vec(prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2)], 3),
    )
        .prop_map(|(off, diag)| {
            let l = [[1, 0, 0], [off[0], 1, 0], [off[1], off[2], 1]];
            let u = [
                [diag[0], off[3], off[4]],
                [0, diag[1], off[5]],
                [0, 0, diag[2]],
            ];
            (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| q((0..3).map(|k| l[i][k] * u[k][j]).sum(), 1))
                        .collect()
                })
                .collect()
        })
}

/// 1000 cases, no regression files.
pub fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 1000,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// Random rational combination of an ansatz basis.
pub fn element_of(basis: Vec<VectorField>) -> BoxedStrategy<VectorField> {
    let n = basis.len();
    prop::collection::vec(prop_oneof![2 => Just(q(0, 1)), 1 => rational()], n)
        .prop_map(move |cs| lvf_core::vectorfield::combine(DIM, &cs, &basis))
        .boxed()
}
