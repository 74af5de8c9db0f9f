//! The three Heisenberg forms are told apart by rank and centralizer rank.

use lvf_core::catalog::Catalog;
use lvf_core::expr::qi;
use lvf_core::solver::{centralizer_rank, AnsatzSpace};
use lvf_core::{generic_rank, Symbol};

#[test]
fn generic_ranks() {
    let cat = Catalog::builtin();
    let ranks: Vec<usize> = ["heisenberg.1", "heisenberg.2", "heisenberg.3"]
        .iter()
        .map(|id| {
            let r = cat.get(id).unwrap();
            generic_rank(&r.fields(&r.defaults()).unwrap())
        })
        .collect();
    assert_eq!(ranks, [3, 2, 2]);
}

#[test]
fn centralizer_ranks_at_degree_four() {
    let cat = Catalog::builtin();
    let ansatz = AnsatzSpace::polynomial(3, 4);
    let rank = |id: &str, lambda: Option<i64>| {
        let r = cat.get(id).unwrap();
        let mut a = r.defaults();
        if let Some(l) = lambda {
            a.insert(Symbol::new("lambda"), qi(l));
        }
        centralizer_rank(&r.fields(&a).unwrap(), &ansatz).unwrap()
    };
    assert_eq!(rank("heisenberg.2", Some(0)), 2);
    assert_eq!(rank("heisenberg.3", None), 1);
    assert_eq!(rank("heisenberg.1", None), 3);
}

#[test]
fn relations_hold_for_any_lambda() {
    let cat = Catalog::builtin();
    let r = cat.get("heisenberg.2").unwrap();
    for l in [-3, 1, 5] {
        let mut a = r.defaults();
        a.insert(Symbol::new("lambda"), qi(l));
        let fields = r.instantiate(&a).unwrap();
        for rel in &r.relations {
            assert!(
                r.residual(rel, &fields).unwrap().is_zero(),
                "lambda = {l}: {rel}"
            );
        }
    }
}

#[test]
fn centralizer_ranks_are_stable_in_degree() {
    let cat = Catalog::builtin();
    for (id, expected) in [("heisenberg.2", 2), ("heisenberg.3", 1)] {
        let r = cat.get(id).unwrap();
        let fields = r.fields(&r.defaults()).unwrap();
        for d in [2, 3, 5, 6] {
            let rank = centralizer_rank(&fields, &AnsatzSpace::polynomial(3, d)).unwrap();
            assert_eq!(rank, expected, "{id} at degree {d}");
        }
    }
}
