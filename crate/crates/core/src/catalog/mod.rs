//! The library of canonical realizations and its text serialization.

mod builtin;
pub mod format;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::expr::{format_rational, Alphabet, ExprError, ParamPoly, Symbol, Q};
use crate::rootsystem::{RootType, SimpleVectors};
use crate::vectorfield::{generic_rank, VectorField};

pub use format::{parse_catalog, write_catalog};

/// Abstract type of a realization; fixes the expected closure dimension and
/// whether the algebra is semisimple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Heisenberg,
    Sl2,
    Sl2xSl2,
    A2,
    B2,
}

impl Family {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "heisenberg" => Some(Family::Heisenberg),
            "sl2" => Some(Family::Sl2),
            "sl2xsl2" => Some(Family::Sl2xSl2),
            "a2" => Some(Family::A2),
            "b2" => Some(Family::B2),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Heisenberg => "heisenberg",
            Family::Sl2 => "sl2",
            Family::Sl2xSl2 => "sl2xsl2",
            Family::A2 => "a2",
            Family::B2 => "b2",
        }
    }

    pub fn algebra_dim(self) -> usize {
        match self {
            Family::Heisenberg | Family::Sl2 => 3,
            Family::Sl2xSl2 => 6,
            Family::A2 => 8,
            Family::B2 => 10,
        }
    }

    pub fn semisimple(self) -> bool {
        self != Family::Heisenberg
    }

    pub fn root_type(self) -> Option<RootType> {
        match self {
            Family::A2 => Some(RootType::A2),
            Family::B2 => Some(RootType::B2),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    /// Listed in the canonical form itself.
    Published,
    /// Obtained from published fields by brackets.
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub field: VectorField,
    pub kind: GenKind,
}

/// `[lhs.0, lhs.1] = sum_k rhs[k].0 * rhs[k].1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub lhs: (String, String),
    pub rhs: Vec<(Q, String)>,
}

impl Relation {
    pub fn new(a: &str, b: &str, rhs: Vec<(Q, String)>) -> Self {
        Relation {
            lhs: (a.to_string(), b.to_string()),
            rhs: rhs.into_iter().filter(|(c, _)| !c.is_zero()).collect(),
        }
    }

    pub fn lhs_text(&self) -> String {
        format!("[{}, {}]", self.lhs.0, self.lhs.1)
    }

    pub fn rhs_text(&self) -> String {
        if self.rhs.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (c, name)) in self.rhs.iter().enumerate() {
            let body = if c.abs().is_one() {
                name.clone()
            } else {
                format!("{}*{name}", format_rational(&c.abs()))
            };
            match (i, c.is_negative()) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&body);
        }
        s
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs_text(), self.rhs_text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("{line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("unknown realization `{0}`")]
    UnknownId(String),
    #[error("duplicate realization `{0}`")]
    DuplicateId(String),
    #[error("{id}: unknown generator `{name}`")]
    UnknownGenerator { id: String, name: String },
    #[error("{id}: unknown parameter `{name}`")]
    UnknownParameter { id: String, name: String },
    #[error("{id}: constraint {constraint} = {value} with the default parameters")]
    ConstraintViolated {
        id: String,
        constraint: String,
        value: String,
    },
    #[error("{id}: relation {relation} fails, residual {residual}")]
    RelationViolated {
        id: String,
        relation: String,
        residual: String,
    },
    #[error("{id}: generic rank {found}, expected {expected}")]
    RankMismatch {
        id: String,
        expected: usize,
        found: usize,
    },
    #[error("{id}: {source}")]
    Expr { id: String, source: ExprError },
    #[error("i/o: {0}")]
    Io(String),
}

/// A named map from abstract generators to vector fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub id: String,
    pub dim: usize,
    pub family: Family,
    /// Parameters with admissible default values.
    pub params: Vec<(Symbol, Q)>,
    /// Parameter polynomials required to vanish.
    pub constraints: Vec<ParamPoly>,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
    pub expected_rank: usize,
    pub source: String,
    pub notes: Vec<String>,
}

/// Value of every constraint under an assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintStatus {
    pub constraint: ParamPoly,
    pub value: Q,
}

impl ConstraintStatus {
    pub fn holds(&self) -> bool {
        self.value.is_zero()
    }
}

impl Realization {
    pub fn alphabet(&self) -> Alphabet {
        Alphabet::with_params(self.dim, self.params.iter().map(|(s, _)| s.clone()))
    }

    pub fn defaults(&self) -> BTreeMap<Symbol, Q> {
        self.params.iter().cloned().collect()
    }

    /// Defaults with the given overrides; unknown names are an error.
    pub fn assignment(
        &self,
        overrides: &[(String, Q)],
    ) -> Result<BTreeMap<Symbol, Q>, CatalogError> {
        let mut a = self.defaults();
        for (name, v) in overrides {
            let sym = Symbol::new(name);
            if !a.contains_key(&sym) {
                return Err(CatalogError::UnknownParameter {
                    id: self.id.clone(),
                    name: name.clone(),
                });
            }
            a.insert(sym, v.clone());
        }
        Ok(a)
    }

    pub fn constraint_status(
        &self,
        assignment: &BTreeMap<Symbol, Q>,
    ) -> Result<Vec<ConstraintStatus>, CatalogError> {
        self.constraints
            .iter()
            .map(|c| {
                let value = c.subst(assignment).map_err(|source| CatalogError::Expr {
                    id: self.id.clone(),
                    source,
                })?;
                Ok(ConstraintStatus {
                    constraint: c.clone(),
                    value,
                })
            })
            .collect()
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name == name)
    }

    /// All fields with parameters substituted, keyed by name.
    pub fn instantiate(
        &self,
        assignment: &BTreeMap<Symbol, Q>,
    ) -> Result<BTreeMap<String, VectorField>, CatalogError> {
        self.generators
            .iter()
            .map(|g| {
                let f = g
                    .field
                    .subst_params(assignment)
                    .map_err(|source| CatalogError::Expr {
                        id: self.id.clone(),
                        source,
                    })?;
                Ok((g.name.clone(), f))
            })
            .collect()
    }

    /// Fields in declaration order under an assignment.
    pub fn fields(
        &self,
        assignment: &BTreeMap<Symbol, Q>,
    ) -> Result<Vec<VectorField>, CatalogError> {
        let map = self.instantiate(assignment)?;
        Ok(self
            .generators
            .iter()
            .map(|g| map[&g.name].clone())
            .collect())
    }

    /// `[A, B] - rhs`; zero iff the relation holds.
    pub fn residual(
        &self,
        rel: &Relation,
        fields: &BTreeMap<String, VectorField>,
    ) -> Result<VectorField, CatalogError> {
        let get = |name: &str| {
            fields
                .get(name)
                .ok_or_else(|| CatalogError::UnknownGenerator {
                    id: self.id.clone(),
                    name: name.to_string(),
                })
        };
        let mut r = get(&rel.lhs.0)?.bracket(get(&rel.lhs.1)?);
        for (c, name) in &rel.rhs {
            r = &r - &get(name)?.scale(c);
        }
        Ok(r)
    }

    /// Simple root vectors of an A2 or B2 entry.
    pub fn simple_vectors(&self, fields: &BTreeMap<String, VectorField>) -> Option<SimpleVectors> {
        let get = |n: &str| fields.get(n).cloned();
        Some(SimpleVectors {
            positive: [get("X_alpha")?, get("X_beta")?],
            negative: [get("X_neg_alpha")?, get("X_neg_beta")?],
        })
    }

    /// Checks names, default constraints, every relation and the rank.
    pub fn validate(&self) -> Result<(), CatalogError> {
        for rel in &self.relations {
            for name in [&rel.lhs.0, &rel.lhs.1]
                .into_iter()
                .chain(rel.rhs.iter().map(|(_, n)| n))
            {
                if self.generator(name).is_none() {
                    return Err(CatalogError::UnknownGenerator {
                        id: self.id.clone(),
                        name: name.clone(),
                    });
                }
            }
        }
        let defaults = self.defaults();
        for st in self.constraint_status(&defaults)? {
            if !st.holds() {
                return Err(CatalogError::ConstraintViolated {
                    id: self.id.clone(),
                    constraint: st.constraint.to_string(),
                    value: format_rational(&st.value),
                });
            }
        }
        let fields = self.instantiate(&defaults)?;
        for rel in &self.relations {
            let r = self.residual(rel, &fields)?;
            if !r.is_zero() {
                return Err(CatalogError::RelationViolated {
                    id: self.id.clone(),
                    relation: rel.to_string(),
                    residual: r.to_string(),
                });
            }
        }
        let all: Vec<VectorField> = fields.into_values().collect();
        let found = generic_rank(&all);
        if found != self.expected_rank {
            return Err(CatalogError::RankMismatch {
                id: self.id.clone(),
                expected: self.expected_rank,
                found,
            });
        }
        Ok(())
    }
}

/// An ordered, validated list of realizations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Catalog {
    entries: Vec<Realization>,
}

impl Catalog {
    /// Validates every entry and rejects duplicate ids.
    pub fn new(entries: Vec<Realization>) -> Result<Self, CatalogError> {
        let mut seen = std::collections::BTreeSet::new();
        for r in &entries {
            if !seen.insert(r.id.clone()) {
                return Err(CatalogError::DuplicateId(r.id.clone()));
            }
        }
        // Validation is independent per entry; report the first failure in order.
        use rayon::prelude::*;
        let results: Vec<Result<(), CatalogError>> =
            entries.par_iter().map(Realization::validate).collect();
        results.into_iter().collect::<Result<(), _>>()?;
        Ok(Catalog { entries })
    }

    pub fn builtin() -> Self {
        Catalog::new(builtin::entries()).expect("builtin catalog is valid")
    }

    /// Parse and validate catalog text.
    pub fn from_text(text: &str) -> Result<Self, CatalogError> {
        Catalog::new(parse_catalog(text)?)
    }

    pub fn to_text(&self) -> String {
        write_catalog(&self.entries)
    }

    pub fn read(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CatalogError::Io(format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), CatalogError> {
        std::fs::write(path, self.to_text())
            .map_err(|e| CatalogError::Io(format!("{}: {e}", path.display())))
    }

    pub fn entries(&self) -> &[Realization] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Result<&Realization, CatalogError> {
        self.entries
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| CatalogError::UnknownId(id.to_string()))
    }
}

/// The builtin entries without validation, e.g. for deliberate corruption in tests.
pub fn builtin_entries() -> Vec<Realization> {
    builtin::entries()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_field, qi};

    #[test]
    fn builtin_counts() {
        let cat = Catalog::builtin();
        let count = |fam: Family| cat.entries().iter().filter(|r| r.family == fam).count();
        assert_eq!(cat.len(), 16);
        assert_eq!(count(Family::Heisenberg), 3);
        assert_eq!(count(Family::Sl2), 4);
        assert_eq!(count(Family::Sl2xSl2), 4);
        assert_eq!(count(Family::A2), 3);
        assert_eq!(count(Family::B2), 2);
    }

    #[test]
    fn lookups() {
        let cat = Catalog::builtin();
        let h1 = cat.get("heisenberg.1").unwrap();
        let a3 = Alphabet::new(3, &[]);
        assert_eq!(
            h1.generator("Y").unwrap().field,
            parse_field("y*Dx + Dz", &a3).unwrap()
        );
        assert_eq!(h1.expected_rank, 3);
        let a23 = cat.get("a2.3").unwrap();
        assert_eq!(
            a23.generator("X_neg_beta").unwrap().field,
            parse_field("x*Dy - z^2*Dz", &a3).unwrap()
        );
        let b21 = cat.get("b2.1").unwrap();
        let xnb = &b21.generator("X_neg_beta").unwrap().field;
        // stored at four times the listed scale
        let listed = parse_field("exp((x-y)/2)*(z*Dx + (z+1/2)*Dy + (z^2 + z/4)*Dz)", &a3).unwrap();
        assert_eq!(xnb, &listed.scale(&qi(4)));
        assert_eq!(cat.get("nope"), Err(CatalogError::UnknownId("nope".into())));
    }

    #[test]
    fn constraint_defaults_enforced() {
        let mut entries = builtin_entries();
        let r = entries.iter_mut().find(|r| r.id == "sl2xsl2.3").unwrap();
        r.params = vec![(Symbol::new("a"), qi(2)), (Symbol::new("b"), qi(0))];
        assert!(matches!(
            r.validate(),
            Err(CatalogError::ConstraintViolated { .. })
        ));
    }

    #[test]
    fn relation_display() {
        let rel = Relation::new(
            "H",
            "X",
            vec![
                (qi(-2), "X".into()),
                (Q::new(1.into(), 2.into()), "Y".into()),
            ],
        );
        assert_eq!(rel.to_string(), "[H, X] = -2*X + 1/2*Y");
        assert_eq!(Relation::new("A", "B", vec![]).to_string(), "[A, B] = 0");
    }
}
