//! End-to-end checks of catalog entries. Failures are report entries, never errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{Catalog, ConstraintStatus, Family, Realization, Relation};
use crate::expr::{format_rational, Symbol, Q};
use crate::liealg::{close_under_bracket, killing_determinant, structure_tensor};
use crate::rootsystem::{build_chevalley, Model, RootSystem};
use crate::vectorfield::{generic_rank, VectorField};

/// Closure search stops past this dimension.
pub const CLOSURE_BOUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub relation: Relation,
    /// `[A, B] - rhs`, or the reason it could not be formed.
    pub residual: Result<VectorField, String>,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        matches!(&self.residual, Ok(r) if r.is_zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub id: String,
    pub family: Family,
    pub assignment: BTreeMap<Symbol, Q>,
    /// Set when the entry could not be instantiated at all.
    pub setup_error: Option<String>,
    pub constraints: Vec<ConstraintStatus>,
    pub relations: Vec<RelationCheck>,
    pub rank: Option<usize>,
    pub expected_rank: usize,
    pub closure_dim: Result<usize, String>,
    pub killing_determinant: Option<Q>,
    /// `Some` for entries with root data: `Ok` iff the induced Chevalley
    /// system exists and its structure constants equal the model's.
    pub chevalley: Option<Result<(), String>>,
}

impl Report {
    pub fn rank_ok(&self) -> bool {
        self.rank == Some(self.expected_rank)
    }

    pub fn closure_ok(&self) -> bool {
        self.closure_dim == Ok(self.family.algebra_dim())
    }

    pub fn semisimple(&self) -> Option<bool> {
        self.killing_determinant
            .as_ref()
            .map(|d| *d != Q::from_integer(0.into()))
    }

    pub fn semisimple_ok(&self) -> bool {
        self.semisimple() == Some(self.family.semisimple())
    }

    pub fn passed(&self) -> bool {
        self.setup_error.is_none()
            && self.constraints.iter().all(ConstraintStatus::holds)
            && self.relations.iter().all(RelationCheck::passed)
            && self.rank_ok()
            && self.closure_ok()
            && self.semisimple_ok()
            && self.chevalley.as_ref().is_none_or(|c| c.is_ok())
    }

    pub fn failed_relations(&self) -> impl Iterator<Item = &RelationCheck> {
        self.relations.iter().filter(|c| !c.passed())
    }

    pub fn to_text(&self) -> String {
        let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} [{}] {}",
            self.id,
            self.family,
            if self.passed() { "PASS" } else { "FAIL" }
        );
        if !self.assignment.is_empty() {
            let ps: Vec<String> = self
                .assignment
                .iter()
                .map(|(k, v)| format!("{k} = {}", format_rational(v)))
                .collect();
            let _ = writeln!(s, "  params {}", ps.join(", "));
        }
        if let Some(e) = &self.setup_error {
            let _ = writeln!(s, "  error: {e}");
            return s;
        }
        for c in &self.constraints {
            let _ = writeln!(
                s,
                "  constraint {} = {}  {}",
                c.constraint,
                format_rational(&c.value),
                mark(c.holds())
            );
        }
        for c in &self.relations {
            let _ = write!(s, "  {}  {}", c.relation, mark(c.passed()));
            match &c.residual {
                Ok(r) if !r.is_zero() => {
                    let _ = write!(s, "  residual {r}");
                }
                Err(e) => {
                    let _ = write!(s, "  {e}");
                }
                Ok(_) => {}
            }
            s.push('\n');
        }
        let rank = self.rank.map_or("?".into(), |r| r.to_string());
        let _ = writeln!(
            s,
            "  generic rank {rank} (expected {})  {}",
            self.expected_rank,
            mark(self.rank_ok())
        );
        let closure = match &self.closure_dim {
            Ok(d) => d.to_string(),
            Err(e) => e.clone(),
        };
        let _ = writeln!(
            s,
            "  closure dimension {closure} (expected {})  {}",
            self.family.algebra_dim(),
            mark(self.closure_ok())
        );
        let det = self
            .killing_determinant
            .as_ref()
            .map_or("?".into(), format_rational);
        let kind = match self.semisimple() {
            Some(true) => "semisimple",
            Some(false) => "not semisimple",
            None => "unknown",
        };
        let _ = writeln!(
            s,
            "  killing determinant {det}, {kind}  {}",
            mark(self.semisimple_ok())
        );
        if let Some(c) = &self.chevalley {
            match c {
                Ok(()) => s.push_str("  chevalley basis matches the model  ok\n"),
                Err(e) => {
                    let _ = writeln!(s, "  chevalley basis: {e}  FAIL");
                }
            }
        }
        s
    }

    /// One JSON object per line: every relation, then the whole-entry checks.
    pub fn to_records(&self) -> String {
        let mut out = Vec::new();
        let mut push = |check: &str, lhs: String, rhs: String, ok: bool, residual: String| {
            out.push(Record {
                id: &self.id,
                check: check.to_string(),
                lhs,
                rhs,
                status: if ok { "pass" } else { "fail" },
                residual,
            })
        };
        if let Some(e) = &self.setup_error {
            push("setup", String::new(), String::new(), false, e.clone());
        }
        for c in &self.constraints {
            push(
                "constraint",
                c.constraint.to_string(),
                "0".into(),
                c.holds(),
                format_rational(&c.value),
            );
        }
        for c in &self.relations {
            let residual = match &c.residual {
                Ok(r) => r.to_string(),
                Err(e) => e.clone(),
            };
            push(
                "relation",
                c.relation.lhs_text(),
                c.relation.rhs_text(),
                c.passed(),
                residual,
            );
        }
        if self.setup_error.is_none() {
            let rank = self.rank.map_or("?".into(), |r| r.to_string());
            push(
                "rank",
                rank,
                self.expected_rank.to_string(),
                self.rank_ok(),
                String::new(),
            );
            let closure = match &self.closure_dim {
                Ok(d) => d.to_string(),
                Err(e) => e.clone(),
            };
            push(
                "closure",
                closure,
                self.family.algebra_dim().to_string(),
                self.closure_ok(),
                String::new(),
            );
            let det = self
                .killing_determinant
                .as_ref()
                .map_or("?".into(), format_rational);
            let expect = if self.family.semisimple() {
                "nonzero"
            } else {
                "0"
            };
            push(
                "killing",
                det,
                expect.into(),
                self.semisimple_ok(),
                String::new(),
            );
            if let Some(c) = &self.chevalley {
                let err = c.as_ref().err().cloned().unwrap_or_default();
                push(
                    "chevalley",
                    "constants".into(),
                    "model".into(),
                    c.is_ok(),
                    err,
                );
            }
        }
        let mut s = String::new();
        for r in out {
            s.push_str(&serde_json::to_string(&r).expect("records serialize"));
            s.push('\n');
        }
        s
    }
}

#[derive(Serialize)]
struct Record<'a> {
    id: &'a str,
    check: String,
    lhs: String,
    rhs: String,
    status: &'static str,
    residual: String,
}

fn model_for(family: Family) -> Option<Model> {
    match family {
        Family::A2 => Some(Model::Sl3),
        Family::B2 => Some(Model::Sl4),
        _ => None,
    }
}

fn chevalley_check(
    r: &Realization,
    fields: &BTreeMap<String, VectorField>,
) -> Option<Result<(), String>> {
    let model = model_for(r.family)?;
    let Some(simple) = r.simple_vectors(fields) else {
        return Some(Err("missing simple root vectors".into()));
    };
    let sys = RootSystem::new(model.root_type());
    let result = (|| {
        let ours = build_chevalley(&sys, &simple).map_err(|e| e.to_string())?;
        let theirs = model.build().map_err(|e| e.to_string())?;
        for (key, n) in &theirs.constants {
            if ours.constants.get(key) != Some(n) {
                let (a, b) = key;
                return Err(format!(
                    "N({a}, {b}) differs from the {} model",
                    model.name()
                ));
            }
        }
        if ours.coroots != theirs.coroots {
            return Err("coroot coordinates differ from the model".into());
        }
        Ok(())
    })();
    Some(result)
}

/// Verifies one entry at its defaults overridden by `overrides`.
pub fn verify_realization(r: &Realization, overrides: &[(String, Q)]) -> Report {
    let mut report = Report {
        id: r.id.clone(),
        family: r.family,
        assignment: BTreeMap::new(),
        setup_error: None,
        constraints: Vec::new(),
        relations: Vec::new(),
        rank: None,
        expected_rank: r.expected_rank,
        closure_dim: Err("not computed".into()),
        killing_determinant: None,
        chevalley: None,
    };
    let setup = (|| {
        let assignment = r.assignment(overrides)?;
        let constraints = r.constraint_status(&assignment)?;
        let fields = r.instantiate(&assignment)?;
        Ok::<_, crate::catalog::CatalogError>((assignment, constraints, fields))
    })();
    let (assignment, constraints, fields) = match setup {
        Ok(x) => x,
        Err(e) => {
            report.setup_error = Some(e.to_string());
            return report;
        }
    };
    report.assignment = assignment;
    report.constraints = constraints;
    report.relations = r
        .relations
        .iter()
        .map(|rel| RelationCheck {
            relation: rel.clone(),
            residual: r.residual(rel, &fields).map_err(|e| e.to_string()),
        })
        .collect();
    let ordered: Vec<VectorField> = r
        .generators
        .iter()
        .map(|g| fields[&g.name].clone())
        .collect();
    report.rank = Some(generic_rank(&ordered));
    match close_under_bracket(&ordered, CLOSURE_BOUND) {
        Ok(basis) => {
            report.closure_dim = Ok(basis.len());
            report.killing_determinant = structure_tensor(&basis)
                .ok()
                .map(|t| killing_determinant(&t));
        }
        Err(e) => report.closure_dim = Err(e.to_string()),
    }
    report.chevalley = chevalley_check(r, &fields);
    report
}

/// Reports in catalog order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub reports: Vec<Report>,
}

impl Summary {
    pub fn passed(&self) -> usize {
        self.reports.iter().filter(|r| r.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.reports.len() - self.passed()
    }

    /// Vacuously true for an empty catalog.
    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn to_text(&self) -> String {
        let mut s: String = self.reports.iter().map(Report::to_text).collect();
        let _ = writeln!(s, "{}/{} pass", self.passed(), self.reports.len());
        s
    }

    pub fn to_records(&self) -> String {
        self.reports.iter().map(Report::to_records).collect()
    }
}

/// Verifies every entry of `catalog`, in parallel. Overrides apply to the
/// entries that declare the parameter and are ignored elsewhere.
pub fn verify_all(catalog: &Catalog, overrides: &[(String, Q)]) -> Summary {
    verify_entries(catalog.entries(), overrides)
}

/// As [`verify_all`] for an unvalidated list, e.g. a deliberately broken fixture.
pub fn verify_entries(entries: &[Realization], overrides: &[(String, Q)]) -> Summary {
    let reports = entries
        .par_iter()
        .map(|r| {
            let own: Vec<(String, Q)> = overrides
                .iter()
                .filter(|(n, _)| r.params.iter().any(|(s, _)| s.as_str() == n))
                .cloned()
                .collect();
            verify_realization(r, &own)
        })
        .collect();
    Summary { reports }
}
