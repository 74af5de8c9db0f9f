//! Lie bracket identities and naturality under affine changes of coordinates.

mod support;

use lvf_core::vectorfield::AffineMap;
use lvf_core::VectorField;
use proptest::prelude::*;
use support::strategies::*;

fn jacobiator(x: &VectorField, y: &VectorField, z: &VectorField) -> VectorField {
    let a = x.bracket(&y.bracket(z));
    let b = y.bracket(&z.bracket(x));
    let c = z.bracket(&x.bracket(y));
    &(&a + &b) + &c
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn antisymmetry(x in field(), y in field()) {
        prop_assert_eq!(x.bracket(&y), -&y.bracket(&x));
        prop_assert!(x.bracket(&x).is_zero());
    }

    #[test]
    fn bilinearity(x in field(), y in field(), z in field(), a in rational(), b in rational()) {
        let combo = &x.scale(&a) + &y.scale(&b);
        let lhs = combo.bracket(&z);
        let rhs = &x.bracket(&z).scale(&a) + &y.bracket(&z).scale(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi(x in field(), y in field(), z in field()) {
        prop_assert!(jacobiator(&x, &y, &z).is_zero());
    }

    #[test]
    fn jacobi_with_parameters(x in field_with(1, 2, true, true), y in field_with(1, 2, true, true), z in field_with(1, 1, true, true)) {
        prop_assert!(jacobiator(&x, &y, &z).is_zero());
    }

    #[test]
    fn bracket_is_a_derivation_commutator(x in field(), y in field(), f in exppoly()) {
        // [X, Y] f = X(Y f) - Y(X f)
        let lhs = x.bracket(&y).apply(&f).unwrap();
        let rhs = &x.apply(&y.apply(&f).unwrap()).unwrap() - &y.apply(&x.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn linear_pullback_is_natural(x in field_with(2, 1, true, false), y in field_with(2, 1, true, false), a in invertible()) {
        let map = AffineMap::linear_only(a).unwrap();
        let pull = |v: &VectorField| v.affine_pullback(&map).unwrap();
        prop_assert_eq!(pull(&x.bracket(&y)), pull(&x).bracket(&pull(&y)));
    }

    #[test]
    fn affine_pullback_is_natural(x in field_with(2, 1, false, false), y in field_with(2, 1, false, false), a in invertible(), s in prop::collection::vec(rational(), DIM)) {
        let map = AffineMap::new(a, s).unwrap();
        let pull = |v: &VectorField| v.affine_pullback(&map).unwrap();
        prop_assert_eq!(pull(&x.bracket(&y)), pull(&x).bracket(&pull(&y)));
    }

    #[test]
    fn shifted_exponentials_are_refused_or_natural(x in field(), y in field(), s in prop::collection::vec(rational(), DIM)) {
        let map = AffineMap::translation(s);
        // exponents of [x, y] are sums of exponents of x and y, so they are never shifted when x and y are not
        if let (Ok(px), Ok(py)) = (x.affine_pullback(&map), y.affine_pullback(&map)) {
            let pb = x.bracket(&y).affine_pullback(&map);
            prop_assert_eq!(pb, Ok(px.bracket(&py)));
        } else {
            prop_assert!(!x.exponents().iter().chain(y.exponents().iter()).all(|e| e.is_zero()));
        }
    }
}
