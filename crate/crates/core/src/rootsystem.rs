//! Rank-2 root systems and the inductive construction of root vectors.
//!
//! Roots are integer pairs `(a, b)` meaning `a*alpha + b*beta`. For the
//! non-simply-laced types `alpha` is the long simple root.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{parse_field, qi, Alphabet, Q};
use crate::liealg::{self, StructureTensor};
use crate::linalg::FieldSpan;
use crate::vectorfield::VectorField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootType {
    A1xA1,
    A2,
    B2,
    G2,
}

impl RootType {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1XA1" | "A1A1" => Some(RootType::A1xA1),
            "A2" => Some(RootType::A2),
            "B2" => Some(RootType::B2),
            "G2" => Some(RootType::G2),
            _ => None,
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootType::A1xA1 => "A1xA1",
            RootType::A2 => "A2",
            RootType::B2 => "B2",
            RootType::G2 => "G2",
        })
    }
}

/// `a*alpha + b*beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root(pub i32, pub i32);

// `add`/`neg`/`sub` take roots by value and read better than operator impls here.
#[allow(clippy::should_implement_trait)]
impl Root {
    pub const ALPHA: Root = Root(1, 0);
    pub const BETA: Root = Root(0, 1);

    pub fn simple(i: usize) -> Root {
        [Root::ALPHA, Root::BETA][i]
    }

    pub fn add(self, o: Root) -> Root {
        Root(self.0 + o.0, self.1 + o.1)
    }

    pub fn sub(self, o: Root) -> Root {
        Root(self.0 - o.0, self.1 - o.1)
    }

    pub fn neg(self) -> Root {
        Root(-self.0, -self.1)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0 && self.1 == 0
    }

    pub fn is_positive(self) -> bool {
        self.0 >= 0 && self.1 >= 0 && !self.is_zero()
    }

    pub fn height(self) -> i32 {
        self.0 + self.1
    }

    fn pieces(self) -> Vec<String> {
        let piece = |k: i32, name: &str| match k.abs() {
            0 => None,
            1 => Some(name.to_string()),
            m => Some(format!("{m}{name}")),
        };
        [piece(self.0, "alpha"), piece(self.1, "beta")]
            .into_iter()
            .flatten()
            .collect()
    }

    /// Identifier form: `alpha_2beta`, `neg_alpha_beta`.
    pub fn ident(self) -> String {
        let body = self.pieces().join("_");
        if self.is_positive() {
            body
        } else {
            format!("neg_{body}")
        }
    }

    /// Inverse of [`Root::ident`].
    pub fn from_ident(s: &str) -> Option<Root> {
        let (neg, body) = match s.strip_prefix("neg_") {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let mut r = Root(0, 0);
        for part in body.split('_') {
            let (k, name) = match part.find(|c: char| c.is_ascii_alphabetic()) {
                Some(0) => (1, part),
                Some(p) => (part[..p].parse().ok()?, &part[p..]),
                None => return None,
            };
            match name {
                "alpha" if r.0 == 0 => r.0 = k,
                "beta" if r.1 == 0 => r.1 = k,
                _ => return None,
            }
        }
        if r.is_zero() {
            return None;
        }
        Some(if neg { r.neg() } else { r })
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.is_positive() { "" } else { "-" };
        let joiner = if self.is_positive() { "+" } else { "-" };
        write!(f, "{sign}{}", self.pieces().join(joiner))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("{0} is not a root of {1}")]
    NotARoot(Root, RootType),
}

/// Rank-2 root data in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    kind: RootType,
    /// Symmetric form on simple roots; only Cartan integers are exposed.
    gram: [[i32; 2]; 2],
    positive: Vec<Root>,
}

impl RootSystem {
    pub fn new(kind: RootType) -> Self {
        let gram = match kind {
            RootType::A1xA1 => [[2, 0], [0, 2]],
            RootType::A2 => [[2, -1], [-1, 2]],
            RootType::B2 => [[2, -1], [-1, 1]],
            RootType::G2 => [[6, -3], [-3, 2]],
        };
        let mut sys = RootSystem {
            kind,
            gram,
            positive: Vec::new(),
        };
        sys.positive = sys.string_closure();
        sys
    }

    fn pairing(&self, x: Root, y: Root) -> i32 {
        let g = &self.gram;
        x.0 * (g[0][0] * y.0 + g[0][1] * y.1) + x.1 * (g[1][0] * y.0 + g[1][1] * y.1)
    }

    fn raw_cartan(&self, b: Root, a: Root) -> i32 {
        2 * self.pairing(b, a) / self.pairing(a, a)
    }

    /// Positive roots by root strings, in order of height.
    fn string_closure(&self) -> Vec<Root> {
        let mut roots = vec![Root::ALPHA, Root::BETA];
        let mut frontier = roots.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &r in &frontier {
                for i in 0..2 {
                    let a = Root::simple(i);
                    let mut p = 0;
                    while roots.contains(&r.sub(a).sub(Root(p * a.0, p * a.1))) {
                        p += 1;
                    }
                    let q = p - self.raw_cartan(r, a);
                    let up = r.add(a);
                    if q > 0 && !roots.contains(&up) && !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
            roots.extend(next.iter().copied());
            frontier = next;
        }
        roots.sort_by_key(|r| r.height());
        roots
    }

    pub fn kind(&self) -> RootType {
        self.kind
    }

    /// `A_ij = <alpha_i, alpha_j>`.
    pub fn cartan_matrix(&self) -> [[i32; 2]; 2] {
        let s = [Root::ALPHA, Root::BETA];
        [
            [self.raw_cartan(s[0], s[0]), self.raw_cartan(s[0], s[1])],
            [self.raw_cartan(s[1], s[0]), self.raw_cartan(s[1], s[1])],
        ]
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// Positive roots, then their negatives in the same order.
    pub fn roots(&self) -> Vec<Root> {
        self.positive
            .iter()
            .copied()
            .chain(self.positive.iter().map(|r| r.neg()))
            .collect()
    }

    pub fn is_root(&self, r: Root) -> bool {
        self.positive.contains(&r) || self.positive.contains(&r.neg())
    }

    pub fn is_long(&self, r: Root) -> bool {
        let max = self
            .positive
            .iter()
            .map(|&p| self.pairing(p, p))
            .max()
            .unwrap_or(0);
        self.pairing(r, r) == max
    }

    /// `<b, a> = 2(b, a)/(a, a)`.
    pub fn cartan_integer(&self, b: Root, a: Root) -> Result<i32, RootError> {
        for r in [a, b] {
            if !self.is_root(r) {
                return Err(RootError::NotARoot(r, self.kind));
            }
        }
        Ok(self.raw_cartan(b, a))
    }
}

/// `X_{+-alpha}`, `X_{+-beta}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleVectors {
    pub positive: [VectorField; 2],
    pub negative: [VectorField; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChevalleyError {
    #[error("simple root vectors must be parameter-free")]
    Parameterized,
    #[error("root vector X_{{{0}}} vanished")]
    ZeroRootVector(Root),
    #[error("[H_{{{1}}}, X_{{{0}}}] is not <{0}, {1}> X_{{{0}}}")]
    CartanRelationViolated(Root, Root),
    #[error("[X_{{{0}}}, X_{{{1}}}] is nonzero although the sum is not a root")]
    NonRootBracketNonzero(Root, Root),
    #[error("[X_{{{0}}}, X_{{{1}}}] is not a multiple of X_{{{2}}}")]
    NotProportional(Root, Root, Root),
    #[error("[X_{{{0}}}, X_{{-{0}}}] is not in the span of the Cartan elements")]
    CorootOutsideCartan(Root),
    #[error("root vectors and Cartan elements are linearly dependent")]
    Degenerate,
}

/// All root vectors, Cartan elements and structure constants produced by the
/// first-simple-root induction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChevalleySystem {
    pub system: RootSystem,
    /// Indexed like [`RootSystem::roots`].
    pub vectors: Vec<(Root, VectorField)>,
    pub cartan: [VectorField; 2],
    /// `[X_r, X_s] = N_{r,s} X_{r+s}` whenever `r + s` is a root.
    pub constants: BTreeMap<(Root, Root), Q>,
    /// `[X_r, X_{-r}] = c_0 H_alpha + c_1 H_beta`.
    pub coroots: BTreeMap<Root, [Q; 2]>,
}

impl ChevalleySystem {
    pub fn vector(&self, r: Root) -> Option<&VectorField> {
        self.vectors.iter().find(|(s, _)| *s == r).map(|(_, v)| v)
    }

    /// Positive roots, negative roots, then `H_alpha, H_beta`.
    pub fn basis(&self) -> Vec<VectorField> {
        self.vectors
            .iter()
            .map(|(_, v)| v.clone())
            .chain(self.cartan.iter().cloned())
            .collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.vectors
            .iter()
            .map(|(r, _)| format!("X_{}", r.ident()))
            .chain(["H_alpha".to_string(), "H_beta".to_string()])
            .collect()
    }

    pub fn structure_tensor(&self) -> Result<StructureTensor, liealg::LieError> {
        liealg::structure_tensor(&self.basis())
    }

    pub fn constant(&self, r: Root, s: Root) -> Option<&Q> {
        self.constants.get(&(r, s))
    }
}

/// Root vectors in root order, and the two simple Cartan elements.
pub type Induced = (Vec<(Root, VectorField)>, [VectorField; 2]);

/// Root vectors for every root (ordered like [`RootSystem::roots`]) by the
/// induction `X_r = [X_{alpha_i}, X_{r - alpha_i}]`, `alpha_i` the first simple
/// root with `r - alpha_i` positive, and `H_i = [X_{alpha_i}, X_{-alpha_i}]`.
/// Parameters are allowed here.
pub fn induce(sys: &RootSystem, simple: &SimpleVectors) -> Result<Induced, ChevalleyError> {
    let mut pos: BTreeMap<Root, VectorField> = BTreeMap::new();
    let mut neg: BTreeMap<Root, VectorField> = BTreeMap::new();
    for i in 0..2 {
        pos.insert(Root::simple(i), simple.positive[i].clone());
        neg.insert(Root::simple(i), simple.negative[i].clone());
    }
    for &r in sys.positive_roots() {
        if pos.contains_key(&r) {
            continue;
        }
        let i = (0..2)
            .find(|&i| sys.positive_roots().contains(&r.sub(Root::simple(i))))
            .expect("every non-simple positive root has a positive predecessor");
        let rest = r.sub(Root::simple(i));
        let xp = simple.positive[i].bracket(&pos[&rest]);
        let xn = simple.negative[i].bracket(&neg[&rest]);
        for (v, root) in [(&xp, r), (&xn, r.neg())] {
            if v.is_zero() {
                return Err(ChevalleyError::ZeroRootVector(root));
            }
        }
        pos.insert(r, xp);
        neg.insert(r, xn);
    }
    let vectors = sys
        .roots()
        .into_iter()
        .map(|r| {
            let v = if r.is_positive() {
                &pos[&r]
            } else {
                &neg[&r.neg()]
            };
            (r, v.clone())
        })
        .collect();
    let cartan = [0, 1].map(|i| simple.positive[i].bracket(&simple.negative[i]));
    Ok((vectors, cartan))
}

/// Runs [`induce`], then verifies every Cartan relation and extracts the
/// structure constants.
pub fn build_chevalley(
    sys: &RootSystem,
    simple: &SimpleVectors,
) -> Result<ChevalleySystem, ChevalleyError> {
    if simple
        .positive
        .iter()
        .chain(&simple.negative)
        .any(|v| !v.is_parameter_free())
    {
        return Err(ChevalleyError::Parameterized);
    }
    let (vectors, cartan) = induce(sys, simple)?;

    // Cartan relations for every root.
    for (r, x) in &vectors {
        for (i, h) in cartan.iter().enumerate() {
            let k = sys.raw_cartan(*r, Root::simple(i));
            if h.bracket(x) != x.scale(&qi(k as i64)) {
                return Err(ChevalleyError::CartanRelationViolated(*r, Root::simple(i)));
            }
        }
    }

    let mut span = FieldSpan::new();
    for (_, v) in &vectors {
        if !span.insert(v).map_err(|_| ChevalleyError::Parameterized)? {
            return Err(ChevalleyError::Degenerate);
        }
    }
    let mut cartan_span = FieldSpan::new();
    for h in &cartan {
        if !cartan_span
            .insert(h)
            .map_err(|_| ChevalleyError::Parameterized)?
            || !span.insert(h).map_err(|_| ChevalleyError::Parameterized)?
        {
            return Err(ChevalleyError::Degenerate);
        }
    }

    enum Entry {
        Constant(Root, Root, Q),
        Coroot(Root, [Q; 2]),
        Zero,
    }
    let index: BTreeMap<Root, usize> = vectors
        .iter()
        .enumerate()
        .map(|(i, (r, _))| (*r, i))
        .collect();
    let pairs: Vec<(usize, usize)> = (0..vectors.len())
        .flat_map(|i| {
            (0..vectors.len())
                .filter(move |&j| j != i)
                .map(move |j| (i, j))
        })
        .collect();
    let entries: Vec<Entry> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (r, xr) = &vectors[i];
            let (s, xs) = &vectors[j];
            let b = xr.bracket(xs);
            let sum = r.add(*s);
            if sum.is_zero() {
                let c = cartan_span
                    .coordinates(&b)
                    .ok()
                    .flatten()
                    .ok_or(ChevalleyError::CorootOutsideCartan(*r))?;
                Ok(Entry::Coroot(*r, [c[0].clone(), c[1].clone()]))
            } else if sys.is_root(sum) {
                let c = span
                    .coordinates(&b)
                    .ok()
                    .flatten()
                    .ok_or(ChevalleyError::NotProportional(*r, *s, sum))?;
                let target = index[&sum];
                if c.iter()
                    .enumerate()
                    .any(|(k, x)| k != target && !x.is_zero())
                {
                    return Err(ChevalleyError::NotProportional(*r, *s, sum));
                }
                Ok(Entry::Constant(*r, *s, c[target].clone()))
            } else if b.is_zero() {
                Ok(Entry::Zero)
            } else {
                Err(ChevalleyError::NonRootBracketNonzero(*r, *s))
            }
        })
        .collect::<Result<_, _>>()?;
    let mut constants = BTreeMap::new();
    let mut coroots = BTreeMap::new();
    for e in entries {
        match e {
            Entry::Constant(r, s, n) => {
                constants.insert((r, s), n);
            }
            Entry::Coroot(r, c) => {
                coroots.insert(r, c);
            }
            Entry::Zero => {}
        }
    }
    Ok(ChevalleySystem {
        system: sys.clone(),
        vectors,
        cartan,
        constants,
        coroots,
    })
}

/// Built-in linear models used as sources of structure constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// `sl(2) x sl(2)` on C^4.
    Sl2Sl2,
    /// `sl(3)` on C^3.
    Sl3,
    /// The long-root `sp(4)` inside `sl(4)` on C^4.
    Sl4,
    /// The 7-dimensional representation of G2.
    G2Seven,
}

impl Model {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sl2xsl2" => Some(Model::Sl2Sl2),
            "sl3" => Some(Model::Sl3),
            "sl4" => Some(Model::Sl4),
            "g2-7" => Some(Model::G2Seven),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Sl2Sl2 => "sl2xsl2",
            Model::Sl3 => "sl3",
            Model::Sl4 => "sl4",
            Model::G2Seven => "g2-7",
        }
    }

    pub fn default_for(kind: RootType) -> Self {
        match kind {
            RootType::A1xA1 => Model::Sl2Sl2,
            RootType::A2 => Model::Sl3,
            RootType::B2 => Model::Sl4,
            RootType::G2 => Model::G2Seven,
        }
    }

    pub fn root_type(self) -> RootType {
        match self {
            Model::Sl2Sl2 => RootType::A1xA1,
            Model::Sl3 => RootType::A2,
            Model::Sl4 => RootType::B2,
            Model::G2Seven => RootType::G2,
        }
    }

    pub fn simple_vectors(self) -> SimpleVectors {
        let (dim, [a, b, na, nb]) = match self {
            Model::Sl2Sl2 => (4, ["x*Dy", "z*Dw", "y*Dx", "w*Dz"]),
            Model::Sl3 => (3, ["y*Dx", "z*Dy", "x*Dy", "y*Dz"]),
            Model::Sl4 => (4, ["y*Dz", "x*Dy + z*Dw", "z*Dy", "y*Dx + w*Dz"]),
            Model::G2Seven => (
                7,
                [
                    "x3*D2 + x6*D5",
                    "x2*D1 + 2*x4*D3 + x5*D4 + x7*D6",
                    "x2*D3 + x5*D6",
                    "x1*D2 + x3*D4 + 2*x4*D5 + x6*D7",
                ],
            ),
        };
        let alpha = Alphabet::new(dim, &[]);
        let f = |s: &str| parse_field(s, &alpha).expect("model field parses");
        SimpleVectors {
            positive: [f(a), f(b)],
            negative: [f(na), f(nb)],
        }
    }

    pub fn build(self) -> Result<ChevalleySystem, ChevalleyError> {
        build_chevalley(&RootSystem::new(self.root_type()), &self.simple_vectors())
    }
}

/// A sign flip of the simple root vectors `X_{+-alpha_i} -> -X_{+-alpha_i}`.
pub fn flip_signs(v: &SimpleVectors, flip: [bool; 2]) -> SimpleVectors {
    let s = |f: &VectorField, on: bool| if on { -f } else { f.clone() };
    SimpleVectors {
        positive: [s(&v.positive[0], flip[0]), s(&v.positive[1], flip[1])],
        negative: [s(&v.negative[0], flip[0]), s(&v.negative[1], flip[1])],
    }
}
