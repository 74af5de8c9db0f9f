//! Solver soundness and completeness on random linear bracket systems.

mod support;

use lvf_core::liealg::span_basis;
use lvf_core::solver::{solve, AnsatzSpace, BracketConstraint};
use lvf_core::VectorField;
use proptest::prelude::*;
use support::strategies::*;

fn constraint() -> impl Strategy<Value = BracketConstraint> {
    (field_with(2, 1, false, false), prop::option::of(rational())).prop_map(|(k, c)| match c {
        Some(c) => BracketConstraint::eigen(k, c),
        None => BracketConstraint::zero(k),
    })
}

fn ansatz_element() -> BoxedStrategy<VectorField> {
    element_of(AnsatzSpace::polynomial(DIM, 1).basis())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn homogeneous_soundness_and_rank_nullity(cons in prop::collection::vec(constraint(), 1..=3), d in 0u32..=2) {
        let ansatz = AnsatzSpace::polynomial(DIM, d);
        let sol = solve(&cons, &ansatz).unwrap();
        for b in &sol.basis {
            for c in &cons {
                prop_assert!(c.holds(b), "{} violates a constraint", b);
            }
        }
        prop_assert_eq!(sol.rank + sol.basis.len(), ansatz.size());
        prop_assert_eq!(span_basis(&sol.basis).unwrap().len(), sol.basis.len());
        prop_assert!(sol.is_consistent());
    }

    #[test]
    fn planted_solutions_are_found(ks in prop::collection::vec(field_with(2, 1, false, false), 1..=3), x0 in ansatz_element()) {
        let ansatz = AnsatzSpace::polynomial(DIM, 1);
        let cons: Vec<_> = ks.iter().map(|k| BracketConstraint::equals(k.clone(), k.bracket(&x0))).collect();
        let sol = solve(&cons, &ansatz).unwrap();
        let p = sol.particular.clone().expect("planted system is consistent");
        for c in &cons {
            prop_assert!(c.holds(&p));
        }
        // x0 - p solves the homogeneous system, hence lies in the returned span
        let diff = &x0 - &p;
        let mut family = sol.basis.clone();
        let before = span_basis(&family).unwrap().len();
        family.push(diff);
        prop_assert_eq!(span_basis(&family).unwrap().len(), before);
    }

    #[test]
    fn unreachable_targets_are_inconsistent(k in field_with(2, 1, false, false)) {
        // [k, X] for X of degree <= 1 has degree <= 1 + deg k; exp(x) is never reached
        let target = lvf_core::parse_field("exp(x)*Dz", &lvf_core::Alphabet::new(DIM, &[])).unwrap();
        let sol = solve(&[BracketConstraint::equals(k, target)], &AnsatzSpace::polynomial(DIM, 1)).unwrap();
        prop_assert!(!sol.is_consistent());
        prop_assert!(sol.particular.is_none());
    }
}
