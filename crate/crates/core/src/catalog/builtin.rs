use crate::expr::{parse_expr, parse_field, qi, Symbol, Q};
use crate::rootsystem::{induce, ChevalleySystem, Model, Root, RootSystem, SimpleVectors};

use super::format::parse_relation;
use super::{Family, GenKind, Generator, Realization, Relation};

struct Entry<'a> {
    id: &'a str,
    family: Family,
    params: Vec<(&'a str, Q)>,
    constraints: &'a [&'a str],
    gens: &'a [(&'a str, &'a str)],
    aux: &'a [(&'a str, &'a str)],
    rels: &'a [&'a str],
    rank: usize,
    source: &'a str,
    notes: &'a [&'a str],
}

fn build(e: Entry) -> Realization {
    let mut r = Realization {
        id: e.id.into(),
        dim: 3,
        family: e.family,
        params: e
            .params
            .iter()
            .map(|(s, v)| (Symbol::new(s), v.clone()))
            .collect(),
        constraints: Vec::new(),
        generators: Vec::new(),
        relations: Vec::new(),
        expected_rank: e.rank,
        source: e.source.into(),
        notes: e.notes.iter().map(|s| s.to_string()).collect(),
    };
    let alpha = r.alphabet();
    r.constraints = e
        .constraints
        .iter()
        .map(|c| parse_expr(c, &alpha).unwrap().as_param_poly().unwrap())
        .collect();
    for (list, kind) in [(e.gens, GenKind::Published), (e.aux, GenKind::Derived)] {
        for (name, text) in list {
            r.generators.push(Generator {
                name: name.to_string(),
                field: parse_field(text, &alpha)
                    .unwrap_or_else(|err| panic!("{}: {name}: {err}", e.id)),
                kind,
            });
        }
    }
    r.relations = e.rels.iter().map(|s| parse_relation(s).unwrap()).collect();
    r
}

const HEISENBERG_RELS: &[&str] = &["[X, Y] = Z", "[Z, X] = 0", "[Z, Y] = 0"];
const SL2_RELS: &[&str] = &["[X, Y] = H", "[H, X] = X", "[H, Y] = -Y"];
const HEISENBERG_NOTE: &str = "Z is central and spans the derived algebra.";
const DY_NOTE: &str = "The published form puts the y^2/2 coefficient on Dz; the brackets close only with Dy, which is stored.";

/// id, the Y field, default parameters, expected rank
type HeisenbergForm = (&'static str, &'static str, Vec<(&'static str, Q)>, usize);

fn heisenberg() -> Vec<Realization> {
    let forms: [HeisenbergForm; 3] = [
        ("heisenberg.1", "y*Dx + Dz", vec![], 3),
        (
            "heisenberg.2",
            "y*Dx + lambda*Dy",
            vec![("lambda", qi(0))],
            2,
        ),
        ("heisenberg.3", "y*Dx + z*Dy", vec![], 2),
    ];
    forms
        .into_iter()
        .enumerate()
        .map(|(k, (id, y, params, rank))| {
            build(Entry {
                id,
                family: Family::Heisenberg,
                params,
                constraints: &[],
                gens: &[("Z", "Dx"), ("X", "Dy"), ("Y", y)],
                aux: &[],
                rels: HEISENBERG_RELS,
                rank,
                source: &format!("Heisenberg canonical form ({})", k + 1),
                notes: &[HEISENBERG_NOTE],
            })
        })
        .collect()
}

fn sl2() -> Vec<Realization> {
    vec![
        build(Entry {
            id: "sl2.1",
            family: Family::Sl2,
            params: vec![],
            constraints: &[],
            gens: &[("X", "exp(x)*Dx"), ("Y", "-1/2*exp(-x)*Dx")],
            aux: &[("H", "Dx")],
            rels: SL2_RELS,
            rank: 1,
            source: "sl2 canonical form (1)",
            notes: &[
                "The published form lists two fields; the stored algebra is their 3-dimensional closure with H = Dx.",
                "Y is the listed exp(-x)*Dx times -1/2, so that [X, Y] = H.",
            ],
        }),
        build(Entry {
            id: "sl2.2",
            family: Family::Sl2,
            params: vec![("l", qi(0))],
            constraints: &[],
            gens: &[("X", "exp(x)*Dy"), ("Y", "exp(-x)*(y*Dx + (y^2/2 + l)*Dy)")],
            aux: &[("H", "Dx")],
            rels: SL2_RELS,
            rank: 2,
            source: "sl2 canonical form (2)",
            notes: &[DY_NOTE],
        }),
        build(Entry {
            id: "sl2.3",
            family: Family::Sl2,
            params: vec![],
            constraints: &[],
            gens: &[("X", "exp(x)*Dy"), ("Y", "exp(-x)*(y*Dx + (y^2/2 + z)*Dy)")],
            aux: &[("H", "Dx")],
            rels: SL2_RELS,
            rank: 2,
            source: "sl2 canonical form (3)",
            notes: &[DY_NOTE],
        }),
        build(Entry {
            id: "sl2.4",
            family: Family::Sl2,
            params: vec![],
            constraints: &[],
            gens: &[("X", "exp(x)*Dy"), ("Y", "exp(-x)*(y*Dx + y^2/2*Dy + Dz)")],
            aux: &[("H", "Dx")],
            rels: SL2_RELS,
            rank: 3,
            source: "sl2 canonical form (4)",
            notes: &[],
        }),
    ]
}

const COMMUTING: [&str; 4] = [
    "[X, Y] = 0",
    "[X, Y_minus] = 0",
    "[X_minus, Y] = 0",
    "[X_minus, Y_minus] = 0",
];

fn sl2xsl2_rels(hx: i64, hy: i64) -> Vec<String> {
    let term = |k: i64, name: &str| match k {
        1 => name.to_string(),
        -1 => format!("-{name}"),
        _ => format!("{k}*{name}"),
    };
    let mut rels = vec![
        "[X, X_minus] = H_X".to_string(),
        format!("[H_X, X] = {}", term(hx, "X")),
        format!("[H_X, X_minus] = {}", term(-hx, "X_minus")),
        "[Y, Y_minus] = H_Y".to_string(),
        format!("[H_Y, Y] = {}", term(hy, "Y")),
        format!("[H_Y, Y_minus] = {}", term(-hy, "Y_minus")),
        "[H_X, H_Y] = 0".to_string(),
    ];
    rels.extend(COMMUTING.iter().map(|s| s.to_string()));
    rels
}

fn sl2xsl2() -> Vec<Realization> {
    const CARTAN_NOTE: &str = "[H_X, X] = X as for sl2; H_Y = [Y, Y_minus] is kept at the scale the listed fields produce.";
    let forms: Vec<(Entry, Vec<String>)> = vec![
        (
            Entry {
                id: "sl2xsl2.1",
                family: Family::Sl2xSl2,
                params: vec![("beta", qi(0))],
                constraints: &[],
                gens: &[
                    ("X", "exp(x)*Dz"),
                    ("Y", "exp(y)*Dy"),
                    ("X_minus", "exp(-x)*(z*Dx + (z^2/2 + beta)*Dz)"),
                    ("Y_minus", "exp(-y)*Dy"),
                ],
                aux: &[("H_X", "Dx"), ("H_Y", "-2*Dy")],
                rels: &[],
                rank: 3,
                source: "sl2 x sl2 canonical form (1)",
                notes: &[CARTAN_NOTE],
            },
            sl2xsl2_rels(1, -2),
        ),
        (
            Entry {
                id: "sl2xsl2.2",
                family: Family::Sl2xSl2,
                params: vec![],
                constraints: &[],
                gens: &[
                    ("X", "exp(x)*Dz"),
                    ("Y", "exp(y)*(Dx - Dy + z*Dz)"),
                    ("X_minus", "exp(-x)*(z*Dx + z^2/2*Dz)"),
                    ("Y_minus", "exp(-y)*(Dx + Dy + z*Dz)"),
                ],
                aux: &[("H_X", "Dx"), ("H_Y", "2*Dy")],
                rels: &[],
                rank: 3,
                source: "sl2 x sl2 canonical form (2)",
                notes: &[CARTAN_NOTE],
            },
            sl2xsl2_rels(1, 2),
        ),
        (
            Entry {
                id: "sl2xsl2.3",
                family: Family::Sl2xSl2,
                params: vec![("a", qi(2)), ("b", qi(-2))],
                constraints: &["a^2 + 2*b"],
                gens: &[
                    ("X", "exp(x)*Dz"),
                    ("Y", "exp(y)*(Dx - Dy + (z + a)*Dz)"),
                    ("X_minus", "exp(-x)*(z*Dx + a*Dy + (z^2/2 + b)*Dz)"),
                    ("Y_minus", "exp(-y)*(Dx + Dy + (z - a)*Dz)"),
                ],
                aux: &[("H_X", "Dx"), ("H_Y", "2*Dy")],
                rels: &[],
                rank: 3,
                source: "sl2 x sl2 canonical form (3)",
                notes: &[
                    CARTAN_NOTE,
                    "The constants a, b belong to this form only; root labels elsewhere are alpha, beta.",
                ],
            },
            sl2xsl2_rels(1, 2),
        ),
        (
            Entry {
                id: "sl2xsl2.4",
                family: Family::Sl2xSl2,
                params: vec![],
                constraints: &[],
                gens: &[
                    ("X", "exp(x)*Dx"),
                    ("X_minus", "exp(-x)*Dx"),
                    ("Y", "exp(y)*Dy"),
                    ("Y_minus", "exp(-y)*Dy"),
                ],
                aux: &[("H_X", "-2*Dx"), ("H_Y", "-2*Dy")],
                rels: &[],
                rank: 2,
                source: "sl2 x sl2 canonical form (4)",
                notes: &["The rank-2 product of two copies of sl2 form (1); Cartan elements at the listed scale."],
            },
            sl2xsl2_rels(-2, -2),
        ),
    ];
    forms
        .into_iter()
        .map(|(entry, rels)| {
            let mut r = build(entry);
            r.relations = rels.iter().map(|s| parse_relation(s).unwrap()).collect();
            r
        })
        .collect()
}

/// Full multiplication table of a model Chevalley system, by generator name.
pub(crate) fn model_relations(model: &ChevalleySystem) -> Vec<Relation> {
    let sys = &model.system;
    let name = |r: Root| format!("X_{}", r.ident());
    let hs = ["H_alpha", "H_beta"];
    let mut rels = Vec::new();
    for (i, h) in hs.iter().enumerate() {
        for r in sys.roots() {
            let k = sys.cartan_integer(r, Root::simple(i)).expect("root");
            rels.push(Relation::new(h, &name(r), vec![(qi(k as i64), name(r))]));
        }
    }
    rels.push(Relation::new(hs[0], hs[1], vec![]));
    let roots = sys.roots();
    for (a, &r) in roots.iter().enumerate() {
        for &s in &roots[a + 1..] {
            let rhs = if r.add(s).is_zero() {
                let c = &model.coroots[&r];
                vec![
                    (c[0].clone(), hs[0].to_string()),
                    (c[1].clone(), hs[1].to_string()),
                ]
            } else if let Some(n) = model.constant(r, s) {
                vec![(n.clone(), name(r.add(s)))]
            } else {
                vec![]
            };
            rels.push(Relation::new(&name(r), &name(s), rhs));
        }
    }
    rels
}

#[allow(clippy::too_many_arguments)]
fn root_entry(
    id: &str,
    family: Family,
    model: Model,
    params: Vec<(&str, Q)>,
    simple: [&str; 4],
    rank: usize,
    source: &str,
    notes: &[&str],
) -> Realization {
    let names = ["X_alpha", "X_beta", "X_neg_alpha", "X_neg_beta"];
    let gens: Vec<(&str, &str)> = names.iter().copied().zip(simple).collect();
    let mut r = build(Entry {
        id,
        family,
        params,
        constraints: &[],
        gens: &gens,
        aux: &[],
        rels: &[],
        rank,
        source,
        notes,
    });
    let f = |i: usize| r.generators[i].field.clone();
    let sv = SimpleVectors {
        positive: [f(0), f(1)],
        negative: [f(2), f(3)],
    };
    let sys = RootSystem::new(model.root_type());
    let (vectors, cartan) = induce(&sys, &sv).expect("catalog root vectors are nonzero");
    for (root, v) in vectors {
        if root.height().abs() > 1 {
            r.generators.push(Generator {
                name: format!("X_{}", root.ident()),
                field: v,
                kind: GenKind::Derived,
            });
        }
    }
    for (name, h) in ["H_alpha", "H_beta"].into_iter().zip(cartan) {
        r.generators.push(Generator {
            name: name.into(),
            field: h,
            kind: GenKind::Derived,
        });
    }
    r.relations = model_relations(&model.build().expect("model builds"));
    r
}

fn a2() -> Vec<Realization> {
    let xa = "Dy";
    let xna = "-x*y*Dx - y^2*Dy";
    let derived = "Root vectors of non-simple roots and H_alpha, H_beta are brackets of the listed fields; relations are the sl3 model's table.";
    vec![
        root_entry(
            "a2.1",
            Family::A2,
            Model::Sl3,
            vec![],
            [xa, "y*Dx", xna, "x*Dy"],
            2,
            "A2 canonical form (1)",
            &[derived, "The G2 extension check calls this form 2."],
        ),
        root_entry(
            "a2.2",
            Family::A2,
            Model::Sl3,
            vec![],
            [xa, "y*Dx", "-x*y*Dx - y^2*Dy + y*Dz", "x*Dy"],
            3,
            "A2 canonical form (2)",
            &[derived, "The G2 extension check calls this form 3."],
        ),
        root_entry(
            "a2.3",
            Family::A2,
            Model::Sl3,
            vec![],
            [
                xa,
                "y*Dx + Dz",
                "-x*y*Dx - y^2*Dy + (y*z - x)*Dz",
                "x*Dy - z^2*Dz",
            ],
            3,
            "A2 canonical form (3)",
            &[derived, "The G2 extension check calls this form 1."],
        ),
    ]
}

fn b2() -> Vec<Realization> {
    let derived = "Root vectors of non-simple roots and H_alpha, H_beta are brackets of the listed fields; relations are the sl4 model's table (alpha long).";
    let scale = "X_neg_beta is 4 times the listed field, so that H_beta = [X_beta, X_neg_beta] gives [H_beta, X_beta] = 2*X_beta.";
    vec![
        root_entry(
            "b2.1",
            Family::B2,
            Model::Sl4,
            vec![],
            [
                "exp(x)*(Dx + Dy + z*Dz)",
                "exp((-x+y)/2)*(Dx - Dy - (z + 1/4)*Dz)",
                "exp(-x)*(-Dx + Dy + z*Dz)",
                "4*exp((x-y)/2)*(z*Dx + (z + 1/2)*Dy + (z^2 + z/4)*Dz)",
            ],
            3,
            "B2 canonical form (1)",
            &[derived, scale],
        ),
        root_entry(
            "b2.2",
            Family::B2,
            Model::Sl4,
            vec![("a", qi(2))],
            [
                "exp(x)*(-Dx + Dy + (z + a)*Dz)",
                "exp((-x+y)/2)*(Dy + (z - a)*Dz)",
                "exp(-x)*(Dx + Dy + (z - a)*Dz)",
                "4*exp((x-y)/2)*(Dx + ((z + a)/(2*a) - 1)*Dy + ((z + a)^2/(2*a) - (z + a))*Dz)",
            ],
            3,
            "B2 canonical form (2)",
            &[derived, scale, "The parameter a must be nonzero."],
        ),
    ]
}

pub(super) fn entries() -> Vec<Realization> {
    let mut out = heisenberg();
    out.extend(sl2());
    out.extend(sl2xsl2());
    out.extend(a2());
    out.extend(b2());
    out
}
