//! Can an A2 realization in three variables be the long-root part of a G2
//! realization? The short root vector `X_{alpha+beta}` is solved for on a
//! bounded ansatz, the remaining positive root vectors are built from it by
//! brackets, and the outcome is checked for vanishing vectors.
//!
//! Conventions: in G2 and B2 the simple root `alpha` is long. The long roots
//! of G2 form an A2 with simple roots `alpha`, `alpha+3beta`; the long roots
//! of B2 form an A1xA1 with `alpha`, `alpha+2beta`. Catalog vectors of the
//! small system are relabelled through that embedding.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{Catalog, CatalogError};
use crate::expr::{format_field, ExpPoly, ExponentVector, ParamPoly, Symbol, Q};
use crate::liealg::span_basis;
use crate::linalg::FieldSpan;
use crate::rootsystem::{
    flip_signs, induce, ChevalleyError, Root, RootSystem, RootType, SimpleVectors,
};
use crate::solver::{solve, AnsatzSpace, BracketConstraint, SolveError};
use crate::vectorfield::VectorField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("form must be 1, 2 or 3, got {0}")]
    UnknownForm(u8),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("the long-root copy is degenerate: {0}")]
    Chevalley(#[from] ChevalleyError),
    #[error("long-root copy: {0}")]
    Copy(String),
}

/// Catalog id of each of the three A2 forms, in the order the G2 argument lists them.
pub fn g2_form_id(form: u8) -> Option<&'static str> {
    match form {
        1 => Some("a2.3"),
        2 => Some("a2.1"),
        3 => Some("a2.2"),
        _ => None,
    }
}

/// Polynomial fields of degree at most `d` in every component of C^3.
pub fn default_ansatz(d: u32) -> AnsatzSpace {
    AnsatzSpace::polynomial(3, d)
}

/// Exponents `(i/2, j/2, 0)`, `-2 <= i, j <= 2`, degree 2: wide enough for b2.1.
pub fn b2_control_ansatz() -> AnsatzSpace {
    let exps = (-2..=2).flat_map(|i| {
        (-2..=2).map(move |j| {
            ExponentVector::new(vec![
                Q::new(i.into(), 2.into()),
                Q::new(j.into(), 2.into()),
                Q::from_integer(0.into()),
            ])
        })
    });
    AnsatzSpace::new(3, exps, 2, 0..3).expect("valid ansatz")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every admissible `X_{alpha+beta}` forces this root vector to vanish.
    Obstructed { vanished: Root },
    /// Some solution keeps every checked vector nonzero; nothing is claimed.
    InconclusiveAtDegree(u32),
}

impl Verdict {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, Verdict::Obstructed { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Obstructed { vanished } => write!(f, "OBSTRUCTED: X_{{{vanished}}} = 0"),
            Verdict::InconclusiveAtDegree(d) => write!(
                f,
                "INCONCLUSIVE at degree {d}: no root vector is forced to vanish"
            ),
        }
    }
}

/// One basis solution for the unknown vector and what it generates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub unknown: VectorField,
    /// Positive root vectors built from `X_alpha`, `X_beta` and the unknown.
    pub derived: Vec<(Root, VectorField)>,
    pub vanished: Vec<Root>,
    /// Long roots whose derived vector is nonzero but not proportional to the copy's.
    pub mismatched: Vec<Root>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub source: String,
    pub target: RootType,
    pub unknown_root: Root,
    pub ansatz: AnsatzSpace,
    /// Labelled constraints, e.g. `[H_alpha, X] = 1*X`.
    pub constraints: Vec<(String, BracketConstraint)>,
    pub solutions: Vec<VectorField>,
    pub branches: Vec<Branch>,
    /// Vectors that vanish for the general solution `sum c_i b_i`.
    pub generic_vanished: Vec<Root>,
    /// Do the eigen constraints alone force every component to depend only on the last coordinate?
    pub eigen_shape_last_coord_only: bool,
    pub verdict: Verdict,
}

impl ObstructionReport {
    /// Every solution satisfies every constraint (re-checked by bracketing).
    pub fn recheck(&self) -> bool {
        self.solutions
            .iter()
            .all(|x| self.constraints.iter().all(|(_, c)| c.holds(x)))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} inside {}: solving for X_{{{}}}",
            self.source, self.target, self.unknown_root
        );
        let _ = writeln!(
            s,
            "  ansatz {} ({} unknowns)",
            self.ansatz,
            self.ansatz.size()
        );
        for (label, _) in &self.constraints {
            let _ = writeln!(s, "  constraint {label}");
        }
        let _ = writeln!(s, "  solution space dimension {}", self.solutions.len());
        for (i, b) in self.branches.iter().enumerate() {
            let _ = writeln!(
                s,
                "  branch {}: X_{{{}}} = {}",
                i + 1,
                self.unknown_root,
                format_field(&b.unknown)
            );
            for (r, v) in &b.derived {
                let _ = writeln!(s, "    X_{{{r}}} = {}", format_field(v));
            }
            for r in &b.mismatched {
                let _ = writeln!(
                    s,
                    "    X_{{{r}}} is not proportional to the long-root vector"
                );
            }
        }
        let shape = if self.eigen_shape_last_coord_only {
            "yes"
        } else {
            "no"
        };
        let _ = writeln!(
            s,
            "  eigen constraints force last-coordinate-only components: {shape}"
        );
        let vanished: Vec<String> = self
            .generic_vanished
            .iter()
            .map(|r| format!("X_{{{r}}}"))
            .collect();
        let _ = writeln!(
            s,
            "  vanishing for the general solution: {}",
            if vanished.is_empty() {
                "none".into()
            } else {
                vanished.join(", ")
            }
        );
        let _ = writeln!(s, "{}", self.verdict);
        s
    }

    pub fn to_records(&self) -> String {
        #[derive(Serialize)]
        struct Rec<'a> {
            id: &'a str,
            check: &'static str,
            lhs: String,
            rhs: String,
            status: String,
            residual: String,
        }
        let mut out = Vec::new();
        for (label, c) in &self.constraints {
            let ok = self.solutions.iter().all(|x| c.holds(x));
            out.push(Rec {
                id: &self.source,
                check: "constraint",
                lhs: label.clone(),
                rhs: String::new(),
                status: if ok { "pass" } else { "fail" }.into(),
                residual: String::new(),
            });
        }
        for (i, b) in self.branches.iter().enumerate() {
            for (r, v) in &b.derived {
                out.push(Rec {
                    id: &self.source,
                    check: "derived",
                    lhs: format!("branch {} X_{{{r}}}", i + 1),
                    rhs: format_field(v),
                    status: if v.is_zero() { "zero" } else { "nonzero" }.into(),
                    residual: String::new(),
                });
            }
        }
        out.push(Rec {
            id: &self.source,
            check: "verdict",
            lhs: format!("X_{{{}}}", self.unknown_root),
            rhs: self.solutions.len().to_string(),
            status: self.verdict.to_string(),
            residual: String::new(),
        });
        out.iter()
            .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
            .collect()
    }
}

/// A root subsystem of `target` spanned by two long roots, with vectors for all its roots.
struct Copy {
    target: RootSystem,
    known: BTreeMap<Root, VectorField>,
    /// Normalized coroots of the two simple roots of the copy.
    cartan: [(Root, VectorField); 2],
}

fn proportional(a: &VectorField, b: &VectorField) -> bool {
    !a.is_zero()
        && !b.is_zero()
        && span_basis(&[a.clone(), b.clone()])
            .map(|s| s.len() == 1)
            .unwrap_or(false)
}

/// `[X_r, X_{-r}]` scaled so that it acts on `X_r` by 2.
fn coroot(xp: &VectorField, xn: &VectorField) -> Result<VectorField, ObstructionError> {
    let h = xp.bracket(xn);
    let mut span = FieldSpan::new();
    span.insert(xp)
        .map_err(|e| ObstructionError::Copy(e.to_string()))?;
    let c = span
        .coordinates(&h.bracket(xp))
        .map_err(|e| ObstructionError::Copy(e.to_string()))?
        .and_then(|v| v.into_iter().next())
        .filter(|c| !num_traits::Zero::is_zero(c))
        .ok_or_else(|| {
            ObstructionError::Copy("[X_r, X_-r] does not act on X_r by a nonzero scalar".into())
        })?;
    Ok(h.scale(&(Q::from_integer(2.into()) / c)))
}

impl Copy {
    /// `simple` are vectors of the copy's simple roots; `embed` are their images in `target`.
    fn new(
        small: RootType,
        simple: &SimpleVectors,
        target: RootType,
        embed: [Root; 2],
    ) -> Result<Self, ObstructionError> {
        let small_sys = RootSystem::new(small);
        let (vectors, _) = induce(&small_sys, simple)?;
        let map = |r: Root| {
            Root(
                r.0 * embed[0].0 + r.1 * embed[1].0,
                r.0 * embed[0].1 + r.1 * embed[1].1,
            )
        };
        let known: BTreeMap<Root, VectorField> =
            vectors.into_iter().map(|(r, v)| (map(r), v)).collect();
        let target = RootSystem::new(target);
        for r in known.keys() {
            if !target.is_root(*r) {
                return Err(ObstructionError::Copy(format!(
                    "{r} is not a root of {}",
                    target.kind()
                )));
            }
        }
        let cartan = [0, 1].map(|i| {
            let r = embed[i];
            coroot(&known[&r], &known[&r.neg()]).map(|h| (r, h))
        });
        let [a, b] = cartan;
        Ok(Copy {
            target,
            known,
            cartan: [a?, b?],
        })
    }

    fn constraints(&self, u: Root) -> Vec<(String, BracketConstraint)> {
        let mut out = Vec::new();
        for (r, h) in &self.cartan {
            let k = self.target.cartan_integer(u, *r).expect("roots");
            out.push((
                format!("[H_{{{r}}}, X_{{{u}}}] = {k}*X_{{{u}}}"),
                BracketConstraint::eigen(h.clone(), Q::from_integer(k.into())),
            ));
        }
        for (r, x) in &self.known {
            let sum = u.add(*r);
            if !sum.is_zero() && !self.target.is_root(sum) {
                out.push((
                    format!("[X_{{{r}}}, X_{{{u}}}] = 0"),
                    BracketConstraint::zero(x.clone()),
                ));
            }
        }
        out
    }

    /// Builds every positive root vector from `X_alpha`, `X_beta = [X_{-alpha}, X_u]` and `X_u`.
    fn derive(&self, u: Root, xu: &VectorField) -> Vec<(Root, VectorField)> {
        let alpha = Root::ALPHA;
        let mut pos: BTreeMap<Root, VectorField> = BTreeMap::new();
        pos.insert(alpha, self.known[&alpha].clone());
        pos.insert(Root::BETA, self.known[&alpha.neg()].bracket(xu));
        pos.insert(u, xu.clone());
        let simple = [pos[&alpha].clone(), pos[&Root::BETA].clone()];
        let positives = self.target.positive_roots().to_vec();
        for &r in &positives {
            if pos.contains_key(&r) {
                continue;
            }
            let i = (0..2)
                .find(|&i| positives.contains(&r.sub(Root::simple(i))))
                .expect("non-simple positive root has a predecessor");
            let v = simple[i].bracket(&pos[&r.sub(Root::simple(i))]);
            pos.insert(r, v);
        }
        positives
            .into_iter()
            .filter(|r| *r != alpha)
            .map(|r| (r, pos[&r].clone()))
            .collect()
    }

    /// `u + beta` and the highest root.
    fn critical(&self, u: Root) -> Vec<Root> {
        let top = *self
            .target
            .positive_roots()
            .iter()
            .max_by_key(|r| r.height())
            .expect("roots");
        let mut out = vec![u.add(Root::BETA)];
        if !out.contains(&top) {
            out.push(top);
        }
        out
    }

    fn branch(&self, u: Root, xu: &VectorField) -> Branch {
        let derived = self.derive(u, xu);
        let critical = self.critical(u);
        let vanished = derived
            .iter()
            .filter(|(r, v)| critical.contains(r) && v.is_zero())
            .map(|(r, _)| *r)
            .collect();
        let mismatched = derived
            .iter()
            .filter(|(r, v)| !v.is_zero() && self.known.get(r).is_some_and(|k| !proportional(k, v)))
            .map(|(r, _)| *r)
            .collect();
        Branch {
            unknown: xu.clone(),
            derived,
            vanished,
            mismatched,
        }
    }

    /// Critical vectors that vanish identically for `sum_i c_i basis_i`, with `c_i` symbolic.
    fn generic_vanished(&self, u: Root, basis: &[VectorField]) -> Vec<Root> {
        let mut general = VectorField::zero(self.target_dim());
        for (i, b) in basis.iter().enumerate() {
            let c = ParamPoly::param(Symbol::new(&format!("c{}", i + 1)));
            general = &general + &b.scale_param(&c);
        }
        let critical = self.critical(u);
        self.derive(u, &general)
            .into_iter()
            .filter(|(r, v)| critical.contains(r) && v.is_zero())
            .map(|(r, _)| r)
            .collect()
    }

    fn target_dim(&self) -> usize {
        self.known.values().next().map_or(0, VectorField::dim)
    }

    fn run(
        &self,
        source: &str,
        u: Root,
        ansatz: &AnsatzSpace,
    ) -> Result<ObstructionReport, ObstructionError> {
        let constraints = self.constraints(u);
        let all: Vec<BracketConstraint> = constraints.iter().map(|(_, c)| c.clone()).collect();
        let solutions = solve(&all, ansatz)?.basis;
        let eigen: Vec<BracketConstraint> = all[..2].to_vec();
        let last = self.target_dim().saturating_sub(1);
        let eigen_shape_last_coord_only = solve(&eigen, ansatz)?
            .basis
            .iter()
            .all(|f| depends_only_on(f, last));
        let branches: Vec<Branch> = if solutions.is_empty() {
            vec![self.branch(u, &VectorField::zero(self.target_dim()))]
        } else {
            solutions.par_iter().map(|x| self.branch(u, x)).collect()
        };
        let generic_vanished = self.generic_vanished(u, &solutions);
        let verdict = match generic_vanished.first() {
            Some(&r) => Verdict::Obstructed { vanished: r },
            None => Verdict::InconclusiveAtDegree(ansatz.max_degree()),
        };
        Ok(ObstructionReport {
            source: source.to_string(),
            target: self.target.kind(),
            unknown_root: u,
            ansatz: ansatz.clone(),
            constraints,
            solutions,
            branches,
            generic_vanished,
            eigen_shape_last_coord_only,
            verdict,
        })
    }
}

fn depends_only_on(f: &VectorField, coord: usize) -> bool {
    f.components().iter().all(|c: &ExpPoly| {
        c.terms().all(|(e, m, _)| {
            e.is_zero()
                && m.exps()
                    .iter()
                    .enumerate()
                    .all(|(i, &k)| i == coord || k == 0)
        })
    })
}

fn simple_of(
    catalog: &Catalog,
    id: &str,
    names: [&str; 4],
) -> Result<SimpleVectors, ObstructionError> {
    let r = catalog.get(id)?;
    let fields = r.instantiate(&r.defaults())?;
    let get = |n: &str| {
        fields.get(n).cloned().ok_or_else(|| {
            ObstructionError::Catalog(CatalogError::UnknownGenerator {
                id: id.to_string(),
                name: n.to_string(),
            })
        })
    };
    Ok(SimpleVectors {
        positive: [get(names[0])?, get(names[1])?],
        negative: [get(names[2])?, get(names[3])?],
    })
}

const A2_NAMES: [&str; 4] = ["X_alpha", "X_beta", "X_neg_alpha", "X_neg_beta"];

/// The G2 extension search for one A2 form, optionally with the simple root
/// vectors of the A2 copy negated.
pub fn g2_obstruction_flipped(
    catalog: &Catalog,
    form: u8,
    ansatz: &AnsatzSpace,
    flip: [bool; 2],
) -> Result<ObstructionReport, ObstructionError> {
    let id = g2_form_id(form).ok_or(ObstructionError::UnknownForm(form))?;
    let simple = flip_signs(&simple_of(catalog, id, A2_NAMES)?, flip);
    let copy = Copy::new(
        RootType::A2,
        &simple,
        RootType::G2,
        [Root::ALPHA, Root(1, 3)],
    )?;
    copy.run(id, Root(1, 1), ansatz)
}

pub fn g2_obstruction(
    catalog: &Catalog,
    form: u8,
    ansatz: &AnsatzSpace,
) -> Result<ObstructionReport, ObstructionError> {
    g2_obstruction_flipped(catalog, form, ansatz, [false, false])
}

/// Verdicts under all four sign conventions for the A2 copy.
pub fn sign_flip_sweep(
    catalog: &Catalog,
    form: u8,
    ansatz: &AnsatzSpace,
) -> Result<Vec<([bool; 2], Verdict)>, ObstructionError> {
    [[false, false], [true, false], [false, true], [true, true]]
        .par_iter()
        .map(|&f| Ok((f, g2_obstruction_flipped(catalog, form, ansatz, f)?.verdict)))
        .collect()
}

/// Verdicts of the default ansatz at each degree.
pub fn degree_sweep(
    catalog: &Catalog,
    form: u8,
    degrees: &[u32],
) -> Result<Vec<(u32, Verdict)>, ObstructionError> {
    degrees
        .par_iter()
        .map(|&d| {
            Ok((
                d,
                g2_obstruction(catalog, form, &default_ansatz(d))?.verdict,
            ))
        })
        .collect()
}

/// Control run: the same pipeline extending the long-root A1xA1 of b2.1 to B2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlReport {
    pub report: ObstructionReport,
    /// The catalog's `X_{alpha+beta}` lies in the solution space.
    pub reference_in_span: bool,
    /// `[X_{-alpha}, X_{alpha+beta}]` from the catalog is proportional to its `X_beta`.
    pub beta_matches: bool,
}

pub fn b2_control(
    catalog: &Catalog,
    ansatz: &AnsatzSpace,
) -> Result<ControlReport, ObstructionError> {
    let id = "b2.1";
    let simple = simple_of(
        catalog,
        id,
        [
            "X_alpha",
            "X_alpha_2beta",
            "X_neg_alpha",
            "X_neg_alpha_2beta",
        ],
    )?;
    let copy = Copy::new(
        RootType::A1xA1,
        &simple,
        RootType::B2,
        [Root::ALPHA, Root(1, 2)],
    )?;
    let u = Root(1, 1);
    let report = copy.run(id, u, ansatz)?;
    let r = catalog.get(id)?;
    let fields = r.instantiate(&r.defaults())?;
    let reference = &fields["X_alpha_beta"];
    let mut both = report.solutions.clone();
    let before = span_basis(&both).map(|b| b.len()).unwrap_or(0);
    both.push(reference.clone());
    let after = span_basis(&both).map(|b| b.len()).unwrap_or(0);
    let beta = copy.known[&Root::ALPHA.neg()].bracket(reference);
    Ok(ControlReport {
        reference_in_span: !reference.is_zero() && before == after,
        beta_matches: proportional(&beta, &fields["X_beta"]),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_ids() {
        assert_eq!(g2_form_id(1), Some("a2.3"));
        assert_eq!(g2_form_id(4), None);
    }

    #[test]
    fn polynomial_form_is_obstructed() {
        let cat = Catalog::builtin();
        let rep = g2_obstruction(&cat, 2, &default_ansatz(4)).unwrap();
        assert!(rep.recheck());
        assert_eq!(
            rep.verdict,
            Verdict::Obstructed {
                vanished: Root(1, 2)
            }
        );
        assert_eq!(rep.verdict.to_string(), "OBSTRUCTED: X_{alpha+2beta} = 0");
    }

    #[test]
    fn constraint_set_for_g2() {
        let cat = Catalog::builtin();
        let rep = g2_obstruction(&cat, 2, &default_ansatz(1)).unwrap();
        let labels: Vec<&str> = rep.constraints.iter().map(|(l, _)| l.as_str()).collect();
        // two eigen constraints, then the four non-root sums
        assert_eq!(labels.len(), 6, "{labels:?}");
        assert_eq!(labels[0], "[H_{alpha}, X_{alpha+beta}] = 1*X_{alpha+beta}");
        assert_eq!(
            labels[1],
            "[H_{alpha+3beta}, X_{alpha+beta}] = 0*X_{alpha+beta}"
        );
    }

    #[test]
    fn b2_control_extends() {
        let cat = Catalog::builtin();
        let c = b2_control(&cat, &b2_control_ansatz()).unwrap();
        assert!(!c.report.verdict.is_obstructed(), "{}", c.report.to_text());
        assert!(c.reference_in_span);
        assert!(c.beta_matches);
        assert!(c.report.recheck());
    }
}
