//! Ring laws, the Leibniz rule and the print/parse fixpoint for exponential polynomials.

mod support;

use lvf_core::expr::{format_field, parse_expr, parse_field, Alphabet, ExpPoly};
use proptest::prelude::*;
use support::strategies::*;

fn alphabet() -> Alphabet {
    Alphabet::new(DIM, &["a"])
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn addition_is_a_group(f in param_exppoly(), g in param_exppoly(), h in param_exppoly()) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&f + &ExpPoly::zero(DIM), f.clone());
        prop_assert!((&f - &f.clone()).is_zero());
    }

    #[test]
    fn multiplication_laws(f in param_exppoly(), g in param_exppoly(), h in param_exppoly()) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f * &ExpPoly::one(DIM), f.clone());
        prop_assert!((&f * &ExpPoly::zero(DIM)).is_zero());
    }

    #[test]
    fn scaling_is_multiplication_by_a_constant(f in param_exppoly(), c in rational()) {
        prop_assert_eq!(f.scale(&c), &f * &ExpPoly::constant(DIM, c.clone()));
    }

    #[test]
    fn leibniz(f in param_exppoly(), g in param_exppoly(), i in 0usize..DIM) {
        let lhs = (&f * &g).derive(i);
        let rhs = &(&f.derive(i) * &g) + &(&f * &g.derive(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivatives_commute(f in param_exppoly(), i in 0usize..DIM, j in 0usize..DIM) {
        prop_assert_eq!(f.derive(i).derive(j), f.derive(j).derive(i));
    }

    #[test]
    fn scalar_print_parse_fixpoint(f in param_exppoly()) {
        let text = f.to_string();
        let back = parse_expr(&text, &alphabet()).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn field_print_parse_fixpoint(v in field_with(2, 2, true, true)) {
        let text = format_field(&v);
        let back = parse_field(&text, &alphabet()).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&back, &v);
        prop_assert_eq!(format_field(&back), text);
    }
}
