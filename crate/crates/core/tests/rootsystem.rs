//! Root data against a brute-force oracle built from Gram matrices, and the
//! Chevalley construction on the sl(4) model.

use std::collections::BTreeSet;

use lvf_core::catalog::Catalog;
use lvf_core::expr::qi;
use lvf_core::rootsystem::{build_chevalley, induce, Model, Root, RootSystem, RootType};

/// Inner products of the simple roots, alpha first; alpha is long in B2 and G2.
fn gram(kind: RootType) -> [[i64; 2]; 2] {
    match kind {
        RootType::A1xA1 => [[2, 0], [0, 2]],
        RootType::A2 => [[2, -1], [-1, 2]],
        RootType::B2 => [[2, -1], [-1, 1]],
        RootType::G2 => [[6, -3], [-3, 2]],
    }
}

fn norm(g: [[i64; 2]; 2], (i, j): (i64, i64)) -> i64 {
    g[0][0] * i * i + 2 * g[0][1] * i * j + g[1][1] * j * j
}

/// For rank two, the roots are exactly the lattice vectors whose length is
/// one of the two simple root lengths.
fn oracle_roots(kind: RootType) -> BTreeSet<(i32, i32)> {
    let g = gram(kind);
    let lengths = [g[0][0], g[1][1]];
    let mut out = BTreeSet::new();
    for i in -4i64..=4 {
        for j in -4i64..=4 {
            if (i, j) != (0, 0) && lengths.contains(&norm(g, (i, j))) {
                out.insert((i as i32, j as i32));
            }
        }
    }
    out
}

const KINDS: [RootType; 4] = [RootType::A1xA1, RootType::A2, RootType::B2, RootType::G2];

#[test]
fn roots_match_the_oracle() {
    for kind in KINDS {
        let sys = RootSystem::new(kind);
        let ours: BTreeSet<(i32, i32)> = sys.roots().iter().map(|r| (r.0, r.1)).collect();
        assert_eq!(ours, oracle_roots(kind), "{kind}");
        assert!(sys.positive_roots().iter().all(|r| r.is_positive()));
    }
    let counts: Vec<usize> = KINDS
        .iter()
        .map(|&k| RootSystem::new(k).positive_roots().len())
        .collect();
    assert_eq!(counts, [2, 3, 4, 6]);
}

#[test]
fn cartan_matrix_matches_gram() {
    for kind in KINDS {
        let g = gram(kind);
        let expected: [[i32; 2]; 2] =
            [0, 1].map(|i| [0, 1].map(|j| (2 * g[i][j] / g[j][j]) as i32));
        assert_eq!(RootSystem::new(kind).cartan_matrix(), expected, "{kind}");
    }
}

#[test]
fn cartan_integers_match_gram_for_every_pair() {
    for kind in KINDS {
        let g = gram(kind);
        let sys = RootSystem::new(kind);
        for a in sys.roots() {
            for b in sys.roots() {
                let ip = g[0][0] * (b.0 * a.0) as i64
                    + g[0][1] * (b.0 * a.1 + b.1 * a.0) as i64
                    + g[1][1] * (b.1 * a.1) as i64;
                let expected = 2 * ip / norm(g, (a.0 as i64, a.1 as i64));
                assert_eq!(
                    sys.cartan_integer(b, a),
                    Ok(expected as i32),
                    "{kind} <{b},{a}>"
                );
            }
        }
    }
}

#[test]
fn every_model_is_a_chevalley_system() {
    for model in [Model::Sl2Sl2, Model::Sl3, Model::Sl4, Model::G2Seven] {
        let cs = model
            .build()
            .unwrap_or_else(|e| panic!("{}: {e}", model.name()));
        let sys = &cs.system;
        // [H_i, X_r] = <r, alpha_i> X_r
        for (r, x) in &cs.vectors {
            for i in 0..2 {
                let k = sys.cartan_integer(*r, Root::simple(i)).unwrap();
                assert_eq!(cs.cartan[i].bracket(x), x.scale(&qi(k as i64)));
            }
        }
        let t = cs.structure_tensor().unwrap();
        assert!(t.is_antisymmetric() && t.satisfies_jacobi());
    }
}

#[test]
fn sl4_constants_verify_the_first_b2_form() {
    let model = Model::Sl4.build().unwrap();
    let cat = Catalog::builtin();
    let b21 = cat.get("b2.1").unwrap();
    let fields = b21.instantiate(&b21.defaults()).unwrap();
    let simple = b21.simple_vectors(&fields).unwrap();
    let sys = RootSystem::new(RootType::B2);
    let (vectors, cartan) = induce(&sys, &simple).unwrap();
    let x = |r: Root| &vectors.iter().find(|(s, _)| *s == r).unwrap().1;
    let mut checked = 0;
    for &r in &sys.roots() {
        for &s in &sys.roots() {
            let sum = r.add(s);
            let b = x(r).bracket(x(s));
            if sum.is_zero() {
                let c = &model.coroots[&r];
                let h = &cartan[0].scale(&c[0]) + &cartan[1].scale(&c[1]);
                assert_eq!(b, h, "[X_{r}, X_{s}]");
            } else if let Some(n) = model.constant(r, s) {
                assert_eq!(b, x(sum).scale(n), "[X_{r}, X_{s}]");
            } else {
                assert!(b.is_zero(), "[X_{r}, X_{s}]");
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 64);
    // the catalog form itself carries the same constants
    let ours = build_chevalley(&sys, &simple).unwrap();
    assert_eq!(ours.constants, model.constants);
}

#[test]
fn g2_model_has_fourteen_dimensions() {
    let cs = Model::G2Seven.build().unwrap();
    assert_eq!(cs.basis().len(), 14);
    assert_eq!(cs.labels().last().map(String::as_str), Some("H_beta"));
}
