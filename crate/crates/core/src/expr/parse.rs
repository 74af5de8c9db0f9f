//! Text syntax for scalars and vector fields.
//!
//! ```text
//! document := ("param" ident ("," ident)* ";")* expr
//! expr     := term (("+" | "-") term)*
//! term     := unary (("*" | "/") unary)*
//! unary    := ("-" | "+") unary | power
//! power    := atom ("^" ["-"] integer)?
//! atom     := integer | ident | "exp" "(" expr ")" | "(" expr ")"
//! ```
//!
//! Identifiers are coordinates (`x y z w` when the dimension is at most 4,
//! `x1..xn` always), frame fields (`Dx Dy Dz Dw`, `D1..Dn`) or declared
//! parameters. Division is allowed only by a single-term unit such as `2`,
//! `a` or `exp(x)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use super::{format_rational, ExpPoly, ExponentVector, ParamMonomial, ParamPoly, Symbol, Q};
use crate::vectorfield::VectorField;

/// Ambient dimension plus the declared parameter names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub dim: usize,
    pub params: BTreeSet<Symbol>,
}

impl Alphabet {
    pub fn new(dim: usize, params: &[&str]) -> Self {
        Alphabet {
            dim,
            params: params.iter().map(|p| Symbol::new(p)).collect(),
        }
    }

    pub fn with_params(dim: usize, params: impl IntoIterator<Item = Symbol>) -> Self {
        Alphabet {
            dim,
            params: params.into_iter().collect(),
        }
    }

    fn coordinate(&self, name: &str) -> Option<usize> {
        if self.dim <= 4 {
            if let Some(i) = ["x", "y", "z", "w"].iter().position(|c| *c == name) {
                return (i < self.dim).then_some(i);
            }
        }
        let idx: usize = name.strip_prefix('x')?.parse().ok()?;
        (1..=self.dim).contains(&idx).then(|| idx - 1)
    }

    fn frame(&self, name: &str) -> Option<usize> {
        let rest = name.strip_prefix('D')?;
        if let Ok(idx) = rest.parse::<usize>() {
            return (1..=self.dim).contains(&idx).then(|| idx - 1);
        }
        self.coordinate(rest)
    }

    pub fn is_reserved(&self, name: &str) -> bool {
        name == "exp"
            || name == "param"
            || self.coordinate(name).is_some()
            || self.frame(name).is_some()
    }
}

/// Display name of coordinate `index`.
pub fn coord_name(dim: usize, index: usize) -> String {
    if dim <= 4 {
        ["x", "y", "z", "w"][index].to_string()
    } else {
        format!("x{}", index + 1)
    }
}

/// Display name of the frame field `d/dx_index`.
pub fn frame_name(dim: usize, index: usize) -> String {
    if dim <= 4 {
        format!("D{}", ["x", "y", "z", "w"][index])
    } else {
        format!("D{}", index + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownIdentifier(String),
    Type(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::UnknownIdentifier(name) => write!(f, "unknown identifier `{name}`"),
            ParseErrorKind::Type(m) => write!(f, "type error: {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(usize, Tok)>, ParseError> {
        let mut lx = Lexer {
            src,
            toks: Vec::new(),
        };
        let bytes = lx.src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = lx.src[start..i].parse().expect("digits");
                lx.toks.push((start, Tok::Num(n)));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                lx.toks
                    .push((start, Tok::Ident(lx.src[start..i].to_string())));
            } else if "+-*/^(),;".contains(c) {
                lx.toks.push((i, Tok::Sym(c)));
                i += 1;
            } else {
                return Err(ParseError {
                    pos: i,
                    kind: ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
                });
            }
        }
        lx.toks.push((src.len(), Tok::End));
        Ok(lx.toks)
    }
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(ExpPoly),
    Field(VectorField),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    alpha: &'a Alphabet,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, kind: ParseErrorKind) -> PResult<T> {
        Err(ParseError {
            pos: self.pos(),
            kind,
        })
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> PResult<T> {
        self.err(ParseErrorKind::Syntax(msg.into()))
    }

    fn type_err<T>(&self, pos: usize, msg: &str) -> PResult<T> {
        Err(ParseError {
            pos,
            kind: ParseErrorKind::Type(msg.to_string()),
        })
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> PResult<Value> {
        let mut acc = self.term()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.add(pos, acc, rhs)?;
                }
                Tok::Sym('-') => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.add(pos, acc, negate(rhs))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<Value> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.mul(pos, acc, rhs)?;
                }
                Tok::Sym('/') => {
                    self.bump();
                    let rhs = self.unary()?;
                    let inv = match rhs {
                        Value::Scalar(s) => s.unit_inverse(),
                        Value::Field(_) => None,
                    };
                    match inv {
                        Some(inv) => acc = self.mul(pos, acc, Value::Scalar(inv))?,
                        None => {
                            return self
                                .type_err(pos, "division only by a nonzero single-term scalar")
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<Value> {
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                Ok(negate(self.unary()?))
            }
            Tok::Sym('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<Value> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        let pos = self.pos();
        self.bump();
        let mut neg = false;
        let paren = *self.peek() == Tok::Sym('(');
        if paren {
            self.bump();
        }
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            neg = true;
        }
        let n = match self.bump() {
            Tok::Num(n) => n,
            _ => return self.syntax("expected an integer exponent"),
        };
        if paren {
            self.expect(')')?;
        }
        let n: u32 = match u32::try_from(&n) {
            Ok(n) if n <= 64 => n,
            _ => return self.type_err(pos, "exponent too large"),
        };
        let s = match base {
            Value::Scalar(s) => s,
            Value::Field(_) => return self.type_err(pos, "cannot raise a vector field to a power"),
        };
        if neg {
            match s.unit_inverse() {
                Some(inv) => Ok(Value::Scalar(inv.pow(n))),
                None => self.type_err(pos, "negative powers only of a nonzero single-term scalar"),
            }
        } else {
            Ok(Value::Scalar(s.pow(n)))
        }
    }

    fn atom(&mut self) -> PResult<Value> {
        let pos = self.pos();
        let dim = self.alpha.dim;
        match self.bump() {
            Tok::Num(n) => Ok(Value::Scalar(ExpPoly::constant(dim, Q::from_integer(n)))),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Ident(name) if name == "exp" => {
                self.expect('(')?;
                let arg_pos = self.pos();
                let arg = self.expr()?;
                self.expect(')')?;
                let s = match arg {
                    Value::Scalar(s) => s,
                    Value::Field(_) => return self.type_err(arg_pos, "exp of a vector field"),
                };
                match s.as_linear_form() {
                    Some(q) => Ok(Value::Scalar(ExpPoly::exp(q))),
                    None => self.type_err(
                        arg_pos,
                        "exp argument must be a linear form in the coordinates with rational coefficients",
                    ),
                }
            }
            Tok::Ident(name) => {
                if let Some(i) = self.alpha.coordinate(&name) {
                    Ok(Value::Scalar(ExpPoly::coord(dim, i)))
                } else if let Some(i) = self.alpha.frame(&name) {
                    Ok(Value::Field(VectorField::frame(dim, i)))
                } else if self.alpha.params.contains(&Symbol::new(&name)) {
                    Ok(Value::Scalar(ExpPoly::param(dim, Symbol::new(&name))))
                } else {
                    Err(ParseError {
                        pos,
                        kind: ParseErrorKind::UnknownIdentifier(name),
                    })
                }
            }
            Tok::End => Err(ParseError {
                pos,
                kind: ParseErrorKind::Syntax("unexpected end of input".into()),
            }),
            Tok::Sym(c) => Err(ParseError {
                pos,
                kind: ParseErrorKind::Syntax(format!("unexpected `{c}`")),
            }),
        }
    }

    fn add(&self, pos: usize, a: Value, b: Value) -> PResult<Value> {
        match (a, b) {
            (Value::Scalar(a), Value::Scalar(b)) => Ok(Value::Scalar(&a + &b)),
            (Value::Field(a), Value::Field(b)) => Ok(Value::Field(&a + &b)),
            (Value::Field(f), Value::Scalar(s)) | (Value::Scalar(s), Value::Field(f))
                if s.is_zero() =>
            {
                Ok(Value::Field(f))
            }
            _ => self.type_err(pos, "cannot add a scalar and a vector field"),
        }
    }

    fn mul(&self, pos: usize, a: Value, b: Value) -> PResult<Value> {
        match (a, b) {
            (Value::Scalar(a), Value::Scalar(b)) => Ok(Value::Scalar(&a * &b)),
            (Value::Scalar(s), Value::Field(f)) | (Value::Field(f), Value::Scalar(s)) => {
                Ok(Value::Field(f.scale_by(&s)))
            }
            (Value::Field(_), Value::Field(_)) => {
                self.type_err(pos, "cannot multiply two vector fields")
            }
        }
    }
}

fn negate(v: Value) -> Value {
    match v {
        Value::Scalar(s) => Value::Scalar(-&s),
        Value::Field(f) => Value::Field(-&f),
    }
}

fn parse_value(text: &str, alpha: &Alphabet) -> PResult<Value> {
    let toks = Lexer::run(text)?;
    let mut p = Parser { toks, at: 0, alpha };
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return p.syntax("trailing input");
    }
    Ok(v)
}

/// Parse a scalar exponential-polynomial.
pub fn parse_expr(text: &str, alpha: &Alphabet) -> Result<ExpPoly, ParseError> {
    match parse_value(text, alpha)? {
        Value::Scalar(s) => Ok(s),
        Value::Field(_) => Err(ParseError {
            pos: 0,
            kind: ParseErrorKind::Type("expected a scalar, found a vector field".into()),
        }),
    }
}

/// Parse a vector field written as a combination of `Dx Dy ...`.
pub fn parse_field(text: &str, alpha: &Alphabet) -> Result<VectorField, ParseError> {
    match parse_value(text, alpha)? {
        Value::Field(f) => Ok(f),
        Value::Scalar(s) if s.is_zero() => Ok(VectorField::zero(alpha.dim)),
        Value::Scalar(_) => Err(ParseError {
            pos: 0,
            kind: ParseErrorKind::Type("expected a vector field, found a scalar".into()),
        }),
    }
}

/// Parse `param a, b; <field>` and return the extended alphabet with the field.
pub fn parse_document(text: &str, base: &Alphabet) -> Result<(Alphabet, VectorField), ParseError> {
    let toks = Lexer::run(text)?;
    let mut alpha = base.clone();
    let mut at = 0;
    while toks[at].1 == Tok::Ident("param".into()) {
        at += 1;
        loop {
            match &toks[at].1 {
                Tok::Ident(name) if !alpha.is_reserved(name) => {
                    alpha.params.insert(Symbol::new(name));
                    at += 1;
                }
                Tok::Ident(name) => {
                    return Err(ParseError {
                        pos: toks[at].0,
                        kind: ParseErrorKind::Syntax(format!("`{name}` is reserved")),
                    })
                }
                _ => {
                    return Err(ParseError {
                        pos: toks[at].0,
                        kind: ParseErrorKind::Syntax("expected a parameter name".into()),
                    })
                }
            }
            match &toks[at].1 {
                Tok::Sym(',') => at += 1,
                Tok::Sym(';') => {
                    at += 1;
                    break;
                }
                _ => {
                    return Err(ParseError {
                        pos: toks[at].0,
                        kind: ParseErrorKind::Syntax("expected `,` or `;`".into()),
                    })
                }
            }
        }
    }
    let offset = toks[at].0;
    let field = parse_field(&text[offset..], &alpha).map_err(|mut e| {
        e.pos += offset;
        e
    })?;
    Ok((alpha, field))
}

/// One printed summand: sign, absolute coefficient and its factors.
struct Printed {
    negative: bool,
    abs: Q,
    factors: Vec<String>,
}

impl Printed {
    fn body(&self) -> String {
        if self.factors.is_empty() {
            format_rational(&self.abs)
        } else if self.abs.is_one() {
            self.factors.join("*")
        } else {
            format!("{}*{}", format_rational(&self.abs), self.factors.join("*"))
        }
    }
}

fn printed_terms(f: &ExpPoly) -> Vec<Printed> {
    let dim = f.dim();
    let mut groups: Vec<(&ExponentVector, Vec<(&super::Monomial, &ParamPoly)>)> = Vec::new();
    for (e, m, c) in f.terms() {
        match groups.last_mut() {
            Some((ge, items)) if *ge == e => items.push((m, c)),
            _ => groups.push((e, vec![(m, c)])),
        }
    }
    let mut out = Vec::new();
    for (e, mut items) in groups {
        // Highest monomial first within one exponential.
        items.sort_by(|a, b| b.0.cmp(a.0));
        for (m, c) in items {
            for (pm, coeff) in c.terms() {
                let mut factors = param_factors(pm);
                for (i, &k) in m.exps().iter().enumerate() {
                    match k {
                        0 => {}
                        1 => factors.push(coord_name(dim, i)),
                        _ => factors.push(format!("{}^{}", coord_name(dim, i), k)),
                    }
                }
                if !e.is_zero() {
                    factors.push(format!("exp({})", format_linear(e)));
                }
                out.push(Printed {
                    negative: coeff.is_negative(),
                    abs: coeff.abs(),
                    factors,
                });
            }
        }
    }
    out
}

fn param_factors(pm: &ParamMonomial) -> Vec<String> {
    pm.factors()
        .iter()
        .map(|(s, e)| {
            if *e == 1 {
                s.to_string()
            } else {
                format!("{s}^{e}")
            }
        })
        .collect()
}

pub(crate) fn format_linear(e: &ExponentVector) -> String {
    let dim = e.dim();
    let mut lin = ExpPoly::zero(dim);
    for (i, qi) in e.entries().iter().enumerate() {
        lin = &lin + &ExpPoly::coord(dim, i).scale(qi);
    }
    format_expr(&lin)
}

fn join_printed(items: &[Printed]) -> String {
    let mut s = String::new();
    for (i, p) in items.iter().enumerate() {
        match (i, p.negative) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&p.body());
    }
    s
}

/// Canonical text of a scalar; `parse_expr(format_expr(f)) == f`.
pub fn format_expr(f: &ExpPoly) -> String {
    if f.is_zero() {
        return "0".into();
    }
    join_printed(&printed_terms(f))
}

/// Canonical text of a vector field, e.g. `y*Dx + Dz`.
pub fn format_field(v: &VectorField) -> String {
    let dim = v.dim();
    let mut s = String::new();
    for (i, c) in v.components().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let frame = frame_name(dim, i);
        let terms = printed_terms(c);
        let (negative, body) = if terms.len() == 1 {
            let t = &terms[0];
            let body = if t.factors.is_empty() && t.abs.is_one() {
                frame
            } else {
                format!("{}*{frame}", t.body())
            };
            (t.negative, body)
        } else {
            (false, format!("({})*{frame}", join_printed(&terms)))
        };
        match (s.is_empty(), negative) {
            (true, true) => s.push('-'),
            (true, false) => {}
            (false, true) => s.push_str(" - "),
            (false, false) => s.push_str(" + "),
        }
        s.push_str(&body);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::q;

    fn a3() -> Alphabet {
        Alphabet::new(3, &["lambda", "l", "a", "b"])
    }

    #[test]
    fn coordinate_parses() {
        assert_eq!(parse_expr("y", &a3()).unwrap(), ExpPoly::coord(3, 1));
    }

    #[test]
    fn half_integer_exponential() {
        let f = parse_expr("exp((-x+y)/2)*(z+1/4)", &a3()).unwrap();
        let exps: Vec<_> = f.exponents().into_iter().collect();
        assert_eq!(
            exps,
            vec![ExponentVector::new(vec![q(-1, 2), q(1, 2), q(0, 1)])]
        );
        // z + 1/4 gives two monomials under the same exponential
        assert_eq!(f.num_terms(), 2);
    }

    #[test]
    fn normalizes_on_format() {
        let f = parse_expr("2*y + y", &a3()).unwrap();
        assert_eq!(format_expr(&f), "3*y");
    }

    #[test]
    fn fields_format_compactly() {
        let alpha = a3();
        let v = parse_field("y*Dx + Dz", &alpha).unwrap();
        assert_eq!(format_field(&v), "y*Dx + Dz");
        let v = parse_field("-x*y*Dx - y^2*Dy + (y*z - x)*Dz", &alpha).unwrap();
        assert_eq!(format_field(&v), "-x*y*Dx - y^2*Dy + (-x + y*z)*Dz");
        let v = parse_field("exp(x)*(Dx + Dy + z*Dz)", &alpha).unwrap();
        assert_eq!(format_field(&v), "exp(x)*Dx + exp(x)*Dy + z*exp(x)*Dz");
    }

    #[test]
    fn laurent_parameters_round_trip() {
        let alpha = a3();
        let f = parse_expr("(z+a)/(2*a) - 1", &alpha).unwrap();
        let text = format_expr(&f);
        assert_eq!(text, "1/2*a^-1*z - 1/2");
        assert_eq!(parse_expr(&text, &alpha).unwrap(), f);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_expr("x + q", &a3()).unwrap_err();
        assert_eq!(err.pos, 4);
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("q".into()));
        let err = parse_expr("x + * y", &a3()).unwrap_err();
        assert_eq!(err.pos, 4);
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert!(parse_expr("exp(x*y)", &a3()).is_err());
        assert!(parse_expr("exp(x + 1)", &a3()).is_err());
        assert!(parse_expr("x/y", &a3()).is_err());
        assert!(parse_field("Dx*Dy", &a3()).is_err());
        assert!(parse_field("x + Dy", &a3()).is_err());
    }

    #[test]
    fn document_declares_parameters() {
        let (alpha, v) = parse_document("param k, g; k*Dx + g*Dy", &Alphabet::new(3, &[])).unwrap();
        assert!(alpha.params.contains(&Symbol::new("k")));
        assert_eq!(format_field(&v), "k*Dx + g*Dy");
        assert!(parse_document("param x; Dx", &Alphabet::new(3, &[])).is_err());
    }

    #[test]
    fn positional_coordinates_in_high_dimension() {
        let alpha = Alphabet::new(7, &[]);
        let v = parse_field("x3*D2 + x6*D5", &alpha).unwrap();
        assert_eq!(format_field(&v), "x3*D2 + x6*D5");
        // aliases are only for n <= 4
        assert!(parse_expr("y", &alpha).is_err());
        let alpha4 = Alphabet::new(4, &[]);
        assert_eq!(
            parse_field("x2*Dz", &alpha4).unwrap(),
            parse_field("y*Dz", &alpha4).unwrap()
        );
    }
}
