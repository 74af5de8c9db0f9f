//! Constraint files for `lvf solve`.
//!
//! ```text
//! # header lines, all optional
//! dim 3
//! param a, b
//! degree 2
//! exp 1/2 -1/2 0        # repeatable; default is the zero exponent only
//! components x z        # default: every component
//! # one constraint per line; X is the unknown field
//! [Dx, X] = X
//! [y*Dx, X] = -1/2*X
//! [Dy, X] = 0
//! [Dz, X] = exp(x)*Dy
//! ```

use lvf_core::expr::{coord_name, ExponentVector};
use lvf_core::solver::{AnsatzSpace, BracketConstraint};
use lvf_core::{parse_field, Alphabet, Symbol, Q};

#[derive(Debug)]
pub struct Problem {
    pub ansatz: AnsatzSpace,
    pub constraints: Vec<BracketConstraint>,
}

fn fail<T>(line: usize, msg: impl std::fmt::Display) -> Result<T, String> {
    Err(format!("line {line}: {msg}"))
}

/// `X`, `-X`, `c*X`, `-c*X` with `c` rational; `None` if `rhs` is not of that shape.
fn eigenvalue(rhs: &str) -> Option<Q> {
    let compact: String = rhs.chars().filter(|c| !c.is_whitespace()).collect();
    let body = compact.strip_suffix('X')?;
    match body {
        "" | "+" => Some(Q::from_integer(1.into())),
        "-" => Some(Q::from_integer((-1).into())),
        _ => {
            let c = body.strip_suffix('*')?;
            c.parse().ok()
        }
    }
}

/// Splits `[K, X] = rhs` at the top-level comma before the closing `X]`.
fn split_constraint(line: &str) -> Option<(&str, &str)> {
    let inner = line.strip_prefix('[')?;
    let close = inner.find(']')?;
    let (bracket, rest) = inner.split_at(close);
    let (known, unknown) = bracket.rsplit_once(',')?;
    if unknown.trim() != "X" {
        return None;
    }
    let rhs = rest[1..].trim_start().strip_prefix('=')?;
    Some((known.trim(), rhs.trim()))
}

pub fn parse_problem(
    text: &str,
    default_dim: usize,
    default_params: &[String],
) -> Result<Problem, String> {
    let mut dim = default_dim;
    let mut params: Vec<String> = default_params.to_vec();
    let mut degree = 2;
    let mut exps: Vec<Vec<Q>> = Vec::new();
    let mut components: Option<Vec<String>> = None;
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            raw.push((n, line));
            continue;
        }
        if !raw.is_empty() {
            return fail(n, "header lines must precede the constraints");
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match key {
            "dim" => dim = rest.trim().parse().or_else(|_| fail(n, "bad dimension"))?,
            "degree" => degree = rest.trim().parse().or_else(|_| fail(n, "bad degree"))?,
            "param" => params.extend(
                rest.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty()),
            ),
            "exp" => {
                let v: Result<Vec<Q>, _> = rest.split_whitespace().map(str::parse).collect();
                exps.push(v.or_else(|_| fail(n, "bad exponent entry"))?);
            }
            "components" => components = Some(rest.split_whitespace().map(String::from).collect()),
            other => return fail(n, format!("unknown header `{other}`")),
        }
    }
    if dim == 0 {
        return fail(1, "dimension must be positive");
    }
    let alphabet = Alphabet::with_params(dim, params.iter().map(|p| Symbol::new(p)));
    let exponents = if exps.is_empty() {
        vec![ExponentVector::zero(dim)]
    } else {
        exps.into_iter().map(ExponentVector::new).collect()
    };
    let comps: Vec<usize> = match components {
        None => (0..dim).collect(),
        Some(names) => names
            .iter()
            .map(|c| {
                (0..dim)
                    .find(|&i| coord_name(dim, i) == *c || format!("x{}", i + 1) == *c)
                    .ok_or_else(|| format!("unknown component `{c}`"))
            })
            .collect::<Result<_, _>>()?,
    };
    let ansatz = AnsatzSpace::new(dim, exponents, degree, comps).map_err(|e| e.to_string())?;
    let mut constraints = Vec::new();
    for (n, line) in raw {
        let Some((known, rhs)) = split_constraint(line) else {
            return fail(n, "expected `[FIELD, X] = RHS`");
        };
        let k = parse_field(known, &alphabet).or_else(|e| fail(n, e))?;
        let c = if rhs == "0" {
            BracketConstraint::zero(k)
        } else if let Some(c) = eigenvalue(rhs) {
            BracketConstraint::eigen(k, c)
        } else {
            BracketConstraint::equals(k, parse_field(rhs, &alphabet).or_else(|e| fail(n, e))?)
        };
        constraints.push(c);
    }
    Ok(Problem {
        ansatz,
        constraints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use lvf_core::solver::ConstraintKind;

    #[test]
    fn eigenvalues() {
        assert_eq!(eigenvalue("X"), Some(Q::from_integer(1.into())));
        assert_eq!(eigenvalue("- X"), Some(Q::from_integer((-1).into())));
        assert_eq!(eigenvalue("-1/2*X"), Some(Q::new((-1).into(), 2.into())));
        assert_eq!(eigenvalue("Dx"), None);
    }

    #[test]
    fn parses_a_problem() {
        let text = "dim 3\ndegree 1\nexp 1 0 0\ncomponents y\n[Dx, X] = X\n[Dz, X] = 0\n[Dy, X] = exp(x)*Dy\n";
        let p = parse_problem(text, 3, &[]).unwrap();
        assert_eq!(p.constraints.len(), 3);
        assert_eq!(p.ansatz.components(), &[1]);
        assert!(matches!(p.constraints[2].kind, ConstraintKind::Equals(_)));
    }

    #[test]
    fn reports_lines() {
        let err = parse_problem("[Dx, Y] = 0", 3, &[]).unwrap_err();
        assert!(err.starts_with("line 1"), "{err}");
        let err = parse_problem("[Dx, X] = 0\ndim 2", 3, &[]).unwrap_err();
        assert!(err.starts_with("line 2"), "{err}");
    }
}
