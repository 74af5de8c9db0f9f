use lvf_core::catalog::format::parse_catalog;
use lvf_core::catalog::Catalog;
use lvf_core::expr::{q, qi};
use lvf_core::verifier::{verify_all, verify_entries, verify_realization};

const CORRUPTED: &str = include_str!("fixtures/corrupted.catalog");

#[test]
fn every_builtin_entry_passes() {
    let summary = verify_all(&Catalog::builtin(), &[]);
    for r in &summary.reports {
        assert!(r.passed(), "{}", r.to_text());
        assert!(r
            .relations
            .iter()
            .all(|c| c.residual.as_ref().is_ok_and(|v| v.is_zero())));
    }
    assert_eq!((summary.passed(), summary.failed()), (16, 0));
    assert!(summary.to_text().trim_end().ends_with("16/16 pass"));
}

#[test]
fn corrupted_fixture_fails_exactly_one_entry() {
    let entries = parse_catalog(CORRUPTED).unwrap();
    let summary = verify_entries(&entries, &[]);
    assert_eq!(summary.failed(), 1);
    let bad = summary.reports.iter().find(|r| !r.passed()).unwrap();
    assert_eq!(bad.id, "sl2.1");
    let failed: Vec<String> = bad
        .failed_relations()
        .map(|c| c.relation.to_string())
        .collect();
    // rescaling Y leaves [H, Y] = -Y intact
    assert_eq!(failed, ["[X, Y] = H"]);
}

#[test]
fn constraint_on_sl2xsl2_3() {
    let r = Catalog::builtin().get("sl2xsl2.3").unwrap().clone();
    let a = |b| vec![("a".to_string(), qi(2)), ("b".to_string(), b)];
    let good = verify_realization(&r, &a(qi(-2)));
    assert!(good.passed(), "{}", good.to_text());
    let bad = verify_realization(&r, &a(qi(0)));
    assert!(!bad.constraints.iter().all(|c| c.holds()));
    assert!(bad.failed_relations().count() >= 1);
    // any point on the curve a^2 + 2b = 0 works
    let other = verify_realization(&r, &[("a".into(), qi(3)), ("b".into(), q(-9, 2))]);
    assert!(other.passed(), "{}", other.to_text());
}

#[test]
fn records_are_deterministic() {
    let cat = Catalog::builtin();
    let first = verify_all(&cat, &[]).to_records();
    let second = verify_all(&cat, &[]).to_records();
    assert_eq!(first, second);
    for line in first.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["id", "check", "lhs", "rhs", "status", "residual"] {
            assert!(v.get(key).is_some(), "{key} missing in {line}");
        }
    }
}
