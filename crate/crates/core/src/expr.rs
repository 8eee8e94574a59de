//! Parser for algebra expressions.
//!
//! ```text
//! element := term (('+'|'-') term)*
//! term    := sign* [scalar] atom*        juxtaposition is the product
//! atom    := edge | edge'*' | vertex | '(' element ')' ['*']
//! ```
//!
//! A term that is only a scalar multiplies the unit `Σ v`.

use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Atom, Graph, Path, VertexId};
use crate::lpa::LpaElement;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Ghost(String),
    Number(BigRational),
    Plus,
    Minus,
    LParen,
    RParen,
    RParenStar,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        match c {
            '+' => out.push((Tok::Plus, col)),
            '-' => out.push((Tok::Minus, col)),
            '(' => out.push((Tok::LParen, col)),
            ')' => {
                if chars.get(i + 1) == Some(&'*') {
                    out.push((Tok::RParenStar, col));
                    i += 1;
                } else {
                    out.push((Tok::RParen, col));
                }
            }
            '*' => return Err(Error::syntax(1, col, "ghost marker must follow an identifier directly")),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = chars[start..i].iter().collect::<String>().parse().expect("digits");
                let mut den = BigInt::from(1);
                if chars.get(i) == Some(&'/') {
                    i += 1;
                    let ds = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if ds == i {
                        return Err(Error::syntax(1, i + 1, "expected denominator"));
                    }
                    den = chars[ds..i].iter().collect::<String>().parse().expect("digits");
                    if den.is_zero() {
                        return Err(Error::syntax(1, ds + 1, "zero denominator"));
                    }
                }
                out.push((Tok::Number(BigRational::new(num, den)), col));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                while i < chars.len() && chars[i] == '\'' {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                if chars.get(i) == Some(&'*') {
                    out.push((Tok::Ghost(name), col));
                    i += 1;
                } else {
                    out.push((Tok::Ident(name), col));
                }
                continue;
            }
            other => return Err(Error::syntax(1, col, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    graph: &'a Arc<Graph>,
    field: &'a Field,
}

/// A factor of a term: either a single double-graph letter or a group.
struct Factor {
    value: LpaElement,
    span: Option<(VertexId, VertexId)>,
    label: String,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end)
    }

    fn element(&mut self) -> Result<LpaElement> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LpaElement> {
        let start = self.col();
        let mut sign = Scalar::one(self.field);
        loop {
            match self.peek() {
                Some(Tok::Minus) => sign = -&sign,
                Some(Tok::Plus) => {}
                _ => break,
            }
            self.pos += 1;
        }
        let mut coeff = sign;
        let mut has_scalar = false;
        if let Some(Tok::Number(q)) = self.peek() {
            let q = q.clone();
            self.pos += 1;
            coeff = &coeff * &Scalar::from_rational(self.field, &q)?;
            has_scalar = true;
        }
        let mut factors: Vec<Factor> = Vec::new();
        while let Some(f) = self.factor()? {
            if let Some(prev) = factors.last() {
                if let (Some((_, to)), Some((from, _))) = (prev.span, f.span) {
                    if to != from {
                        return Err(Error::NotComposable {
                            left: prev.label.clone(),
                            right: f.label.clone(),
                        });
                    }
                }
            }
            factors.push(f);
        }
        if factors.is_empty() && !has_scalar {
            return Err(Error::syntax(1, start, "expected a term"));
        }
        let mut value = match factors.first() {
            Some(f) => f.value.clone(),
            None => LpaElement::one(self.graph, self.field),
        };
        for f in factors.iter().skip(1) {
            value = value.multiply(&f.value)?;
        }
        value.scale(&coeff)
    }

    fn factor(&mut self) -> Result<Option<Factor>> {
        let g = self.graph;
        let col = self.col();
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Ok(None),
        };
        let out = match tok {
            Tok::Ident(name) => {
                self.pos += 1;
                match g.lookup(&name).ok_or_else(|| Error::UnknownId(name.clone()))? {
                    Atom::Vertex(v) => Factor {
                        value: LpaElement::vertex(g, self.field, v),
                        span: Some((v, v)),
                        label: name,
                    },
                    Atom::Edge(e) => Factor {
                        value: LpaElement::path(g, self.field, &Path::edge(g, e)),
                        span: Some((g.source(e), g.range(e))),
                        label: name,
                    },
                }
            }
            Tok::Ghost(name) => {
                self.pos += 1;
                match g.lookup(&name).ok_or_else(|| Error::UnknownId(name.clone()))? {
                    Atom::Vertex(v) => Factor {
                        // v* = v
                        value: LpaElement::vertex(g, self.field, v),
                        span: Some((v, v)),
                        label: format!("{name}*"),
                    },
                    Atom::Edge(e) => Factor {
                        value: LpaElement::ghost(g, self.field, &Path::edge(g, e)),
                        span: Some((g.range(e), g.source(e))),
                        label: format!("{name}*"),
                    },
                }
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.element()?;
                let value = match self.peek() {
                    Some(Tok::RParen) => inner,
                    Some(Tok::RParenStar) => inner.adjoint(),
                    _ => return Err(Error::syntax(1, self.col(), "expected `)`")),
                };
                self.pos += 1;
                Factor {
                    value,
                    span: None,
                    label: "(...)".into(),
                }
            }
            Tok::Number(_) => return Err(Error::syntax(1, col, "scalar must lead the term")),
            _ => return Ok(None),
        };
        Ok(Some(out))
    }
}

/// Parses an expression over `graph` with coefficients in `field`.
pub fn parse_element(text: &str, graph: &Arc<Graph>, field: &Field) -> Result<LpaElement> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::syntax(1, 1, "empty expression"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count() + 1,
        graph,
        field,
    };
    let x = p.element()?;
    if p.pos < p.toks.len() {
        return Err(Error::syntax(1, p.col(), "unexpected token"));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    #[test]
    fn linear_combination() {
        let g = fixture::example();
        let x = parse_element("1/2 s1 + -1 s1", &g, &Field::RATIONAL).unwrap();
        assert_eq!(x.render(), "-1/2 s1");
    }

    #[test]
    fn composability_in_the_double_graph() {
        let g = fixture::example();
        let err = |s: &str| parse_element(s, &g, &Field::RATIONAL).unwrap_err();
        assert!(matches!(err("d1 m"), Error::NotComposable { .. }));
        assert!(matches!(err("d1 d3"), Error::NotComposable { .. }));
        // r(d1) = s2 but d2* starts at r(d2) = s3
        assert!(matches!(err("d1 d2*"), Error::NotComposable { .. }));
        let ok = parse_element("d1 d1*", &g, &Field::RATIONAL).unwrap();
        assert_eq!(ok.render(), "d1 d1*");
        assert_eq!(parse_element("d1* d1", &g, &Field::RATIONAL).unwrap().render(), "s2");
        assert_eq!(parse_element("d2 d2* d1*", &g, &Field::RATIONAL).unwrap().render(), "d2 d2* d1*");
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let g = fixture::example();
        let e = parse_element("d1 + * d2", &g, &Field::RATIONAL).unwrap_err();
        assert!(matches!(e, Error::Syntax { column: 6, .. }), "{e:?}");
        let e = parse_element("d1 +", &g, &Field::RATIONAL).unwrap_err();
        assert!(matches!(e, Error::Syntax { .. }));
        let e = parse_element("(d1", &g, &Field::RATIONAL).unwrap_err();
        assert!(matches!(e, Error::Syntax { .. }));
        assert_eq!(parse_element("zz", &g, &Field::RATIONAL).unwrap_err(), Error::UnknownId("zz".into()));
    }

    #[test]
    fn groups_and_adjoints() {
        let g = fixture::example();
        let x = parse_element("(d1 d2)* d1 d2", &g, &Field::RATIONAL).unwrap();
        assert_eq!(x.render(), "s3");
        let y = parse_element("2 (s1 - d1 d1*) d1", &g, &Field::RATIONAL).unwrap();
        assert!(y.normal_form().is_zero());
    }

    #[test]
    fn prime_field_denominators() {
        let g = fixture::example();
        let f3 = Field::Base(crate::scalar::BaseField::Prime(3));
        assert_eq!(parse_element("1/2 s1", &g, &f3).unwrap().render(), "2 s1");
        assert!(matches!(
            parse_element("1/3 s1", &g, &f3),
            Err(Error::NonInvertibleDenominator(_))
        ));
    }
}
