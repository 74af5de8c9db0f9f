use lvf_core::catalog::Catalog;
use lvf_core::obstruction::{
    b2_control, b2_control_ansatz, default_ansatz, degree_sweep, g2_obstruction, sign_flip_sweep,
    Verdict,
};
use lvf_core::rootsystem::Root;

fn vanished_is_long_critical(v: &Verdict) -> bool {
    matches!(v, Verdict::Obstructed { vanished } if *vanished == Root(1, 2) || *vanished == Root(2, 3))
}

#[test]
fn every_a2_form_is_obstructed_at_low_degree() {
    let cat = Catalog::builtin();
    for form in 1..=3 {
        for (d, v) in degree_sweep(&cat, form, &[2, 4, 6]).unwrap() {
            assert!(vanished_is_long_critical(&v), "form {form} degree {d}: {v}");
        }
    }
}

#[test]
fn sign_conventions_do_not_matter() {
    let cat = Catalog::builtin();
    for form in 1..=3 {
        for (flip, v) in sign_flip_sweep(&cat, form, &default_ansatz(2)).unwrap() {
            assert!(
                vanished_is_long_critical(&v),
                "form {form} flip {flip:?}: {v}"
            );
        }
    }
}

#[test]
fn report_is_self_consistent() {
    let cat = Catalog::builtin();
    let rep = g2_obstruction(&cat, 2, &default_ansatz(4)).unwrap();
    assert!(rep.recheck());
    assert_eq!(rep.constraints.len(), 6);
    assert!(rep.branches.iter().all(|b| !b.vanished.is_empty()));
    assert!(rep.to_text().ends_with(&format!("{}\n", rep.verdict)));
}

#[test]
fn unknown_form_is_an_error() {
    assert!(g2_obstruction(&Catalog::builtin(), 4, &default_ansatz(2)).is_err());
}

#[test]
fn b2_control_is_not_obstructed() {
    let ctl = b2_control(&Catalog::builtin(), &b2_control_ansatz()).unwrap();
    assert!(
        !ctl.report.verdict.is_obstructed(),
        "{}",
        ctl.report.to_text()
    );
    assert!(ctl.reference_in_span && ctl.beta_matches);
    assert!(ctl.report.recheck());
}
