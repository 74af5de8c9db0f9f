//! Catalog text format.
//!
//! ```text
//! # comment
//! realization a2.1 {
//!     dim 3;
//!     family a2;
//!     params { a = 2, b = -1/2 };
//!     constraints { "a^2 + 2*b" };
//!     gen X_alpha = "Dy";
//!     aux H_alpha = "...";
//!     rel [H_alpha, X_alpha] = 2*X_alpha;
//!     expected_rank 2;
//!     source "...";
//!     note "...";
//! }
//! ```
//!
//! Field and constraint strings use the expression grammar over the entry's
//! coordinates and declared parameters, so `dim` and `params` must precede them.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::expr::{format_field, format_rational, parse_expr, parse_field, Alphabet, Symbol, Q};

use super::{CatalogError, Family, GenKind, Generator, Realization, Relation};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Str(String),
    Punct(char),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> CatalogError {
    CatalogError::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

fn lex(text: &str) -> Result<Vec<Spanned>, CatalogError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        if c.is_whitespace() {
            bump!();
        } else if c == '#' {
            while matches!(chars.peek(), Some(&c) if c != '\n') {
                bump!();
            }
        } else if is_ident_start(c) {
            let mut s = String::new();
            while matches!(chars.peek(), Some(&c) if is_ident_char(c)) {
                s.push(bump!().unwrap());
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: l,
                col: k,
            });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while matches!(chars.peek(), Some(c) if c.is_ascii_digit()) {
                s.push(bump!().unwrap());
            }
            let n = s.parse().map_err(|_| err(l, k, "integer too large"))?;
            out.push(Spanned {
                tok: Tok::Int(n),
                line: l,
                col: k,
            });
        } else if c == '"' {
            bump!();
            let mut s = String::new();
            loop {
                match bump!() {
                    None | Some('\n') => return Err(err(l, k, "unterminated string")),
                    Some('"') => break,
                    Some('\\') => match bump!() {
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        Some('n') => s.push('\n'),
                        other => return Err(err(line, col - 1, format!("bad escape {other:?}"))),
                    },
                    Some(c) => s.push(c),
                }
            }
            out.push(Spanned {
                tok: Tok::Str(s),
                line: l,
                col: k,
            });
        } else if "{}[];=,-+*/".contains(c) {
            bump!();
            out.push(Spanned {
                tok: Tok::Punct(c),
                line: l,
                col: k,
            });
        } else {
            return Err(err(l, k, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Result<Self, CatalogError> {
        let toks = lex(text)?;
        let lines = text.split('\n').collect::<Vec<_>>();
        let end = (
            lines.len(),
            lines.last().map_or(0, |l| l.chars().count()) + 1,
        );
        Ok(Parser { toks, pos: 0, end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |s| (s.line, s.col))
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, CatalogError> {
        let (l, c) = self.here();
        Err(err(l, c, msg))
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.peek().cloned();
        self.pos += 1;
        t
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Int(n)) => format!("`{n}`"),
            Some(Tok::Str(_)) => "a string".into(),
            Some(Tok::Punct(c)) => format!("`{c}`"),
        }
    }

    fn punct(&mut self, c: char) -> Result<(), CatalogError> {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected `{c}`, found {}", self.describe()))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, CatalogError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail(format!("expected a name, found {}", self.describe())),
        }
    }

    fn int(&mut self) -> Result<u64, CatalogError> {
        match self.peek() {
            Some(&Tok::Int(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail(format!("expected an integer, found {}", self.describe())),
        }
    }

    /// Returns the string and the position of its opening quote.
    fn string(&mut self) -> Result<(String, usize, usize), CatalogError> {
        let (l, c) = self.here();
        match self.peek() {
            Some(Tok::Str(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, l, c))
            }
            _ => self.fail(format!("expected a string, found {}", self.describe())),
        }
    }

    /// `[-] INT [/ INT]`
    fn rational(&mut self) -> Result<Q, CatalogError> {
        let neg = self.eat('-');
        let n = self.int()?;
        let mut v = Q::from_integer(n.into());
        if self.eat('/') {
            let (l, c) = self.here();
            let d = self.int()?;
            if d == 0 {
                return Err(err(l, c, "zero denominator"));
            }
            v /= Q::from_integer(d.into());
        }
        Ok(if neg { -v } else { v })
    }

    /// `[A, B] = 0` or `[A, B] = [-] [q *] NAME {(+|-) [q *] NAME}`
    fn relation(&mut self) -> Result<Relation, CatalogError> {
        self.punct('[')?;
        let a = self.ident()?;
        self.punct(',')?;
        let b = self.ident()?;
        self.punct(']')?;
        self.punct('=')?;
        if self.peek() == Some(&Tok::Int(0))
            && !matches!(
                self.toks.get(self.pos + 1).map(|t| &t.tok),
                Some(Tok::Punct('/'))
            )
        {
            self.pos += 1;
            return Ok(Relation::new(&a, &b, vec![]));
        }
        let mut rhs = Vec::new();
        let mut sign = if self.eat('-') { -1 } else { 1 };
        loop {
            let coeff = if matches!(self.peek(), Some(Tok::Int(_))) {
                let c = self.rational()?;
                self.punct('*')?;
                c
            } else {
                Q::from_integer(1.into())
            };
            let name = self.ident()?;
            rhs.push((if sign < 0 { -coeff } else { coeff }, name));
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                break;
            }
        }
        Ok(Relation::new(&a, &b, rhs))
    }

    fn realization(&mut self) -> Result<Realization, CatalogError> {
        let (l0, c0) = self.here();
        match self.next() {
            Some(Tok::Ident(k)) if k == "realization" => {}
            _ => {
                self.pos -= 1;
                return self.fail(format!("expected `realization`, found {}", self.describe()));
            }
        }
        let id = self.ident()?;
        self.punct('{')?;
        let mut dim = None;
        let mut family = None;
        let mut params: Vec<(Symbol, Q)> = Vec::new();
        let mut constraints = Vec::new();
        let mut generators: Vec<Generator> = Vec::new();
        let mut relations = Vec::new();
        let mut expected_rank = None;
        let mut source = None;
        let mut notes = Vec::new();
        let alphabet = |dim: Option<usize>, params: &[(Symbol, Q)]| {
            Alphabet::with_params(dim.unwrap_or(3), params.iter().map(|(s, _)| s.clone()))
        };
        while !self.eat('}') {
            let (kl, kc) = self.here();
            let key = self.ident()?;
            match key.as_str() {
                "dim" => {
                    let n = self.int()?;
                    if n == 0 {
                        return Err(err(kl, kc, "dimension must be positive"));
                    }
                    dim = Some(n as usize);
                }
                "family" => {
                    let (l, c) = self.here();
                    let name = self.ident()?;
                    family = Some(
                        Family::parse(&name)
                            .ok_or_else(|| err(l, c, format!("unknown family `{name}`")))?,
                    );
                }
                "params" => {
                    self.punct('{')?;
                    while !self.eat('}') {
                        let (l, c) = self.here();
                        let name = self.ident()?;
                        if alphabet(dim, &[]).is_reserved(&name)
                            || params.iter().any(|(s, _)| s.as_str() == name)
                        {
                            return Err(err(
                                l,
                                c,
                                format!("parameter name `{name}` is reserved or repeated"),
                            ));
                        }
                        self.punct('=')?;
                        params.push((Symbol::new(&name), self.rational()?));
                        if !self.eat(',') {
                            self.punct('}')?;
                            break;
                        }
                    }
                }
                "constraints" => {
                    self.punct('{')?;
                    while !self.eat('}') {
                        let (s, l, c) = self.string()?;
                        let e = parse_expr(&s, &alphabet(dim, &params))
                            .map_err(|e| err(l, c + 1 + e.pos, e.to_string()))?;
                        let p = e
                            .as_param_poly()
                            .ok_or_else(|| err(l, c, "a constraint may only involve parameters"))?;
                        constraints.push(p);
                        if !self.eat(',') {
                            self.punct('}')?;
                            break;
                        }
                    }
                }
                "gen" | "aux" => {
                    let (l, c) = self.here();
                    let name = self.ident()?;
                    if generators.iter().any(|g| g.name == name) {
                        return Err(err(l, c, format!("generator `{name}` defined twice")));
                    }
                    self.punct('=')?;
                    let (s, l, c) = self.string()?;
                    let field = parse_field(&s, &alphabet(dim, &params))
                        .map_err(|e| err(l, c + 1 + e.pos, e.to_string()))?;
                    let kind = if key == "gen" {
                        GenKind::Published
                    } else {
                        GenKind::Derived
                    };
                    generators.push(Generator { name, field, kind });
                }
                "rel" => relations.push(self.relation()?),
                "expected_rank" => expected_rank = Some(self.int()? as usize),
                "source" => source = Some(self.string()?.0),
                "note" => notes.push(self.string()?.0),
                other => return Err(err(kl, kc, format!("unknown key `{other}`"))),
            }
            self.punct(';')?;
        }
        let missing = |what: &str| err(l0, c0, format!("realization `{id}` lacks `{what}`"));
        Ok(Realization {
            dim: dim.ok_or_else(|| missing("dim"))?,
            family: family.ok_or_else(|| missing("family"))?,
            expected_rank: expected_rank.ok_or_else(|| missing("expected_rank"))?,
            source: source.unwrap_or_default(),
            id,
            params,
            constraints,
            generators,
            relations,
            notes,
        })
    }
}

/// Parses catalog text without validating the mathematics.
pub fn parse_catalog(text: &str) -> Result<Vec<Realization>, CatalogError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while p.peek().is_some() {
        out.push(p.realization()?);
    }
    Ok(out)
}

/// Parses a single `[A, B] = ...` relation.
pub fn parse_relation(text: &str) -> Result<Relation, CatalogError> {
    let mut p = Parser::new(text)?;
    let r = p.relation()?;
    if p.peek().is_some() {
        return p.fail(format!("trailing input {}", p.describe()));
    }
    Ok(r)
}

fn quote(s: &str) -> String {
    let mut out = String::from('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn rational_text(v: &Q) -> String {
    if v.is_negative() {
        format!("-{}", format_rational(&v.abs()))
    } else if v.is_zero() {
        "0".into()
    } else {
        format_rational(v)
    }
}

/// Canonical text; `parse_catalog(write_catalog(x)) == x`.
pub fn write_catalog(entries: &[Realization]) -> String {
    let mut s = String::new();
    for (i, r) in entries.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "realization {} {{", r.id);
        let _ = writeln!(s, "    dim {};", r.dim);
        let _ = writeln!(s, "    family {};", r.family);
        if !r.params.is_empty() {
            let ps: Vec<String> = r
                .params
                .iter()
                .map(|(p, v)| format!("{p} = {}", rational_text(v)))
                .collect();
            let _ = writeln!(s, "    params {{ {} }};", ps.join(", "));
        }
        if !r.constraints.is_empty() {
            let cs: Vec<String> = r
                .constraints
                .iter()
                .map(|c| quote(&c.to_string()))
                .collect();
            let _ = writeln!(s, "    constraints {{ {} }};", cs.join(", "));
        }
        for g in &r.generators {
            let kw = match g.kind {
                GenKind::Published => "gen",
                GenKind::Derived => "aux",
            };
            let _ = writeln!(
                s,
                "    {kw} {} = {};",
                g.name,
                quote(&format_field(&g.field))
            );
        }
        for rel in &r.relations {
            let _ = writeln!(s, "    rel {rel};");
        }
        let _ = writeln!(s, "    expected_rank {};", r.expected_rank);
        if !r.source.is_empty() {
            let _ = writeln!(s, "    source {};", quote(&r.source));
        }
        for n in &r.notes {
            let _ = writeln!(s, "    note {};", quote(n));
        }
        s.push_str("}\n");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::qi;

    #[test]
    fn relations_parse() {
        let r = parse_relation("[H, X] = -2*X + 1/2*Y - Z").unwrap();
        assert_eq!(
            r.rhs,
            vec![
                (qi(-2), "X".into()),
                (Q::new(1.into(), 2.into()), "Y".into()),
                (qi(-1), "Z".into())
            ]
        );
        assert!(parse_relation("[A, B] = 0").unwrap().rhs.is_empty());
        assert!(parse_relation("[A, B] = 0 X").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let text = "realization t {\n    dim 3;\n    gen X = \"Dq\";\n}\n";
        match parse_catalog(text) {
            Err(CatalogError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_catalog("realization t {\n  dim 3;\n  colour red;\n}") {
            Err(CatalogError::Parse { line, col, msg }) => {
                assert_eq!((line, col), (3, 3));
                assert!(msg.contains("colour"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_catalog("realization t {"),
            Err(CatalogError::Parse { .. })
        ));
        assert!(parse_catalog("# nothing\n").unwrap().is_empty());
    }

    #[test]
    fn builtin_round_trips() {
        let entries = super::super::builtin_entries();
        let text = write_catalog(&entries);
        assert_eq!(parse_catalog(&text).unwrap(), entries);
        assert_eq!(write_catalog(&parse_catalog(&text).unwrap()), text);
    }

    #[test]
    fn strings_escape() {
        assert_eq!(quote("a\"b\\c"), "\"a\\\"b\\\\c\"");
    }
}
