//! Text form of elements.
//!
//! ```text
//! expr    := '0' | [sign] term (sign term)*
//! term    := [coef '*'] factor ('.' factor)* ['@' laurent]
//! factor  := '[' vertex ']' | path ['^*' | '*']
//! path    := id ('/' id)*
//! coef    := int ['/' int]
//! laurent := '1' | 'u' ['^' ['-'] int]
//! ```
//!
//! A starred path `a/b^*` is the ghost of the whole path, `(ab)* = b*a*`.
//! A bare id resolves to a vertex or an edge, whichever exists. The `@`
//! suffix is only accepted for tensor elements. Printing produces exactly
//! this grammar, so printed elements parse back to themselves.

use std::sync::Arc;

use thiserror::Error;

use super::{Element, Generator, Lpa, LpaError, TensorElement};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected `{found}` at token {pos}, expected {expected}")]
    Unexpected {
        found: String,
        pos: usize,
        expected: &'static str,
    },
    #[error("unexpected end of expression, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("bad coefficient `{0}`")]
    BadCoefficient(String),
    #[error("`@` factors are only allowed in tensor expressions")]
    TensorInPlainExpression,
    #[error(transparent)]
    Lpa(#[from] LpaError),
}

pub(crate) fn render_terms<'a, K, I>(terms: I) -> String
where
    K: Scalar,
    I: IntoIterator<Item = (String, &'a K)>,
{
    let mut out = String::new();
    for (body, c) in terms {
        let negative = c.is_negative_literal();
        let magnitude = if negative { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if !magnitude.is_one() {
            out.push_str(&format!("{magnitude} * "));
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBracket,
    RBracket,
    Dot,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    At,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::LBracket => "[".into(),
            Tok::RBracket => "]".into(),
            Tok::Dot => ".".into(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::At => "@".into(),
        }
    }
}

fn tokenize(s: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    let mut ident = String::new();
    let flush = |ident: &mut String, out: &mut Vec<Tok>| {
        if !ident.is_empty() {
            out.push(Tok::Ident(std::mem::take(ident)));
        }
    };
    for ch in s.chars() {
        let tok = match ch {
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '.' => Some(Tok::Dot),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '@' => Some(Tok::At),
            c if c.is_whitespace() => {
                flush(&mut ident, &mut out);
                continue;
            }
            c => {
                ident.push(c);
                None
            }
        };
        if let Some(t) = tok {
            flush(&mut ident, &mut out);
            out.push(t);
        }
    }
    flush(&mut ident, &mut out);
    out
}

fn is_number(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())
}

/// One parsed term: coefficient, word, Laurent exponent (if any).
type RawTerm<K> = (K, Vec<Generator>, Option<i64>);

struct Parser<'a> {
    lpa: &'a Lpa,
    toks: Vec<Tok>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k)
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::Unexpected {
                found: t.text(),
                pos: self.pos,
                expected,
            },
            None => ParseError::UnexpectedEnd(expected),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn ident(&mut self, expected: &'static str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn expression<K: Scalar>(&mut self, tensor: bool) -> Result<Vec<RawTerm<K>>, ParseError> {
        if self.toks == [Tok::Ident("0".into())] && self.lpa.generator_by_name("0").is_err() {
            return Ok(Vec::new());
        }
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (c, word, exp) = self.term::<K>(tensor)?;
            terms.push((if negative { -c } else { c }, word, exp));
            match self.peek() {
                None => break,
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                Some(_) => return Err(self.unexpected("`+`, `-` or end of expression")),
            }
            self.pos += 1;
            while let Some(t @ (Tok::Plus | Tok::Minus)) = self.peek() {
                if *t == Tok::Minus {
                    negative = !negative;
                }
                self.pos += 1;
            }
        }
        Ok(terms)
    }

    /// `coef *` prefix, recognised only when a factor follows the star.
    fn coefficient<K: Scalar>(&mut self) -> Result<K, ParseError> {
        let Some(Tok::Ident(p)) = self.peek() else {
            return Ok(K::one());
        };
        if !is_number(p) {
            return Ok(K::one());
        }
        let (literal, star_at) = match (self.peek_at(1), self.peek_at(2)) {
            (Some(Tok::Slash), Some(Tok::Ident(q))) if is_number(q) => (format!("{p}/{q}"), 3),
            _ => (p.clone(), 1),
        };
        let factor_follows = matches!(self.peek_at(star_at + 1), Some(Tok::Ident(_) | Tok::LBracket));
        if self.peek_at(star_at) != Some(&Tok::Star) || !factor_follows {
            return Ok(K::one());
        }
        let c = K::parse_literal(&literal).ok_or(ParseError::BadCoefficient(literal))?;
        self.pos += star_at + 1;
        Ok(c)
    }

    fn term<K: Scalar>(&mut self, tensor: bool) -> Result<RawTerm<K>, ParseError> {
        let c = self.coefficient::<K>()?;
        let mut word = self.factor()?;
        while self.peek() == Some(&Tok::Dot) {
            self.pos += 1;
            word.extend(self.factor()?);
        }
        let mut exp = None;
        if self.peek() == Some(&Tok::At) {
            if !tensor {
                return Err(ParseError::TensorInPlainExpression);
            }
            self.pos += 1;
            exp = Some(self.laurent()?);
        }
        Ok((c, word, exp))
    }

    fn laurent(&mut self) -> Result<i64, ParseError> {
        let base = self.ident("`1` or `u`")?;
        match base.as_str() {
            "1" => Ok(0),
            "u" => {
                if self.peek() != Some(&Tok::Caret) {
                    return Ok(1);
                }
                self.pos += 1;
                let negative = self.peek() == Some(&Tok::Minus);
                if negative {
                    self.pos += 1;
                }
                let n = self.ident("an exponent")?;
                let n: i64 = n.parse().map_err(|_| ParseError::BadCoefficient(n.clone()))?;
                Ok(if negative { -n } else { n })
            }
            _ => Err(ParseError::Unexpected {
                found: base,
                pos: self.pos - 1,
                expected: "`1` or `u`",
            }),
        }
    }

    fn factor(&mut self) -> Result<Vec<Generator>, ParseError> {
        if self.peek() == Some(&Tok::LBracket) {
            self.pos += 1;
            let name = self.ident("a vertex id")?;
            self.expect(Tok::RBracket, "`]`")?;
            return Ok(vec![self.lpa.generator_by_name(&format!("[{name}]"))?]);
        }
        let mut ids = vec![self.ident("a generator")?];
        while self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            ids.push(self.ident("an edge id")?);
        }
        let ghost = match (self.peek(), self.peek_at(1)) {
            (Some(Tok::Caret), Some(Tok::Star)) => {
                self.pos += 2;
                true
            }
            (Some(Tok::Star), next) if !matches!(next, Some(Tok::Ident(_) | Tok::LBracket)) => {
                self.pos += 1;
                true
            }
            (Some(Tok::Caret), _) => {
                self.pos += 1;
                return Err(self.unexpected("`*`"));
            }
            _ => false,
        };
        let g = self.lpa.graph();
        if ids.len() == 1 && !ghost {
            return Ok(vec![self.lpa.generator_by_name(&ids[0])?]);
        }
        let edges = ids
            .iter()
            .map(|id| {
                g.find_edge(id)
                    .ok_or_else(|| LpaError::UnknownGenerator(id.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(if ghost {
            edges.into_iter().rev().map(Generator::Ghost).collect()
        } else {
            edges.into_iter().map(Generator::Edge).collect()
        })
    }
}

fn parse_raw<K: Scalar>(lpa: &Lpa, text: &str, tensor: bool) -> Result<Vec<RawTerm<K>>, ParseError> {
    let mut p = Parser {
        lpa,
        toks: tokenize(text),
        pos: 0,
    };
    if p.toks.is_empty() {
        return Err(ParseError::UnexpectedEnd("an expression"));
    }
    p.expression(tensor)
}

/// Parses a single product of generators, e.g. `x0* . x0`.
pub fn parse_word(lpa: &Lpa, text: &str) -> Result<Vec<Generator>, ParseError> {
    let mut p = Parser {
        lpa,
        toks: tokenize(text),
        pos: 0,
    };
    let mut word = p.factor()?;
    while p.peek() == Some(&Tok::Dot) {
        p.pos += 1;
        word.extend(p.factor()?);
    }
    if p.peek().is_some() {
        return Err(p.unexpected("`.` or end of word"));
    }
    Ok(word)
}

/// Parses and normalizes an element of `L_k(Q)`.
pub fn parse_element<K: Scalar>(lpa: &Arc<Lpa>, text: &str) -> Result<Element<K>, ParseError> {
    let mut out = Element::zero(lpa);
    for (c, word, _) in parse_raw::<K>(lpa, text, false)? {
        let nf = Element::normal_form(lpa, &word)?;
        out = out.try_add(&nf.scale(&c))?;
    }
    Ok(out)
}

/// Parses and normalizes an element of `L_k(Q) ⊗ k[u, u⁻¹]`. Terms without
/// an `@` factor get `u⁰`.
pub fn parse_tensor<K: Scalar>(lpa: &Arc<Lpa>, text: &str) -> Result<TensorElement<K>, ParseError> {
    let mut out = TensorElement::zero(lpa);
    for (c, word, exp) in parse_raw::<K>(lpa, text, true)? {
        let nf: Element<K> = Element::normal_form(lpa, &word)?;
        let n = exp.unwrap_or(0);
        for (m, d) in nf.terms() {
            let coef = d.clone() * c.clone();
            if !coef.is_zero() {
                out.add_term(m.clone(), n, coef);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::scalar::Rational;

    fn el(lpa: &Arc<Lpa>, s: &str) -> Element<Rational> {
        parse_element(lpa, s).unwrap()
    }

    #[test]
    fn normalizes_words() {
        let lpa = lpa7();
        assert_eq!(el(&lpa, "x0* . x0").to_string(), "[v0]");
        assert_eq!(el(&lpa, "x0*.x0").to_string(), "[v0]");
        assert_eq!(el(&lpa, "x0^* . x0").to_string(), "[v0]");
        assert_eq!(el(&lpa, "e1 . e1^*").to_string(), "[v1] - e2 . e2^*");
        assert_eq!(el(&lpa, "e1* . e2").to_string(), "0");
        assert_eq!(el(&lpa, "0").to_string(), "0");
    }

    #[test]
    fn paths_and_coefficients() {
        let lpa = lpa7();
        assert_eq!(el(&lpa, "e2/x0 . x0^*").to_string(), "e2");
        assert_eq!(el(&lpa, "e2/x0^*").to_string(), "e2/x0^*");
        assert_eq!(el(&lpa, "x0^* . e2^*").to_string(), "e2/x0^*");
        assert_eq!(el(&lpa, "3/2 * x0 + -1/2 * x0").to_string(), "x0");
        assert_eq!(el(&lpa, "2 * [v1] - 2 * e2 . e2^*").to_string(), "2 * [v1] - 2 * e2 . e2^*");
        assert_eq!(el(&lpa, "-x0").to_string(), "-x0");
    }

    #[test]
    fn errors() {
        let lpa = lpa7();
        assert!(matches!(
            parse_element::<Rational>(&lpa, "q1 . x0"),
            Err(ParseError::Lpa(LpaError::UnknownGenerator(_)))
        ));
        assert!(parse_element::<Rational>(&lpa, "x0 .").is_err());
        assert!(parse_element::<Rational>(&lpa, "").is_err());
        assert!(parse_element::<Rational>(&lpa, "x0 x0").is_err());
        assert_eq!(
            parse_element::<Rational>(&lpa, "x0 @ u").unwrap_err(),
            ParseError::TensorInPlainExpression
        );
        assert!(matches!(
            parse_element::<Rational>(&lpa, "1/0 * x0"),
            Err(ParseError::BadCoefficient(_))
        ));
    }

    #[test]
    fn tensors() {
        let lpa = lpa7();
        let t: TensorElement<Rational> = parse_tensor(&lpa, "x0 . x0^* @ u^-2 + e2 @ u").unwrap();
        assert_eq!(t.to_string(), "[v0] @ u^-2 + e2 @ u");
        let back: TensorElement<Rational> = parse_tensor(&lpa, &t.to_string()).unwrap();
        assert_eq!(back, t);
        let plain: TensorElement<Rational> = parse_tensor(&lpa, "[v1]").unwrap();
        assert_eq!(plain.to_string(), "[v1] @ 1");
    }

    #[test]
    fn words() {
        let lpa = lpa7();
        let w = parse_word(&lpa, "e2 . x0/x0^* . [v0]").unwrap();
        assert_eq!(w.len(), 4);
        assert!(parse_word(&lpa, "2 * e2").is_err());
    }
}
