//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary ("*" unary)*
//! unary  := ("+" | "-") unary | power
//! power  := atom ("^" uint)?
//! atom   := number | ident | "(" expr ")"
//! number := uint ("/" uint)?
//! ```

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{AmbientRing, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::groebner::Ideal;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = text[start..i].parse().unwrap();
                let mut value = Rational::from_integer(num);
                if i < bytes.len() && bytes[i] == b'/' {
                    let den_start = i + 1;
                    let mut j = den_start;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == den_start {
                        return Err(syntax(i, "expected a denominator after `/`"));
                    }
                    let den: BigInt = text[den_start..j].parse().unwrap();
                    if den.is_zero() {
                        return Err(syntax(den_start, "zero denominator"));
                    }
                    value /= Rational::from_integer(den);
                    i = j;
                }
                tokens.push((start, Token::Number(value)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push((start, Token::Ident(text[start..i].to_string())));
                continue;
            }
            other => return Err(syntax(start, format!("unexpected character `{other}`"))),
        };
        tokens.push((start, tok));
        i += 1;
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    ring: &'a Arc<AmbientRing>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            let negate = match tok {
                Token::Plus => false,
                Token::Minus => true,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            acc = if negate { &acc - &rhs } else { &acc + &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.offset();
        match self.tokens.get(self.pos).cloned() {
            Some((_, Token::Number(n))) if n.is_integer() => {
                self.pos += 1;
                let e = u32::try_from(n.to_integer())
                    .map_err(|_| syntax(at, "exponent too large"))?;
                if self.peek() == Some(&Token::Caret) {
                    return Err(syntax(self.offset(), "chained exponents need parentheses"));
                }
                Ok(base.pow(e))
            }
            Some((_, Token::Minus)) => Err(syntax(at, "negative exponent")),
            _ => Err(syntax(at, "expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let at = self.offset();
        match self.tokens.get(self.pos).cloned() {
            Some((_, Token::Number(n))) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.ring, n))
            }
            Some((_, Token::Ident(name))) => {
                self.pos += 1;
                match self.ring.index_of(&name) {
                    Some(i) => Ok(Polynomial::variable(self.ring, i)),
                    None => Err(Error::UnknownVariable { name, position: at }),
                }
            }
            Some((_, Token::LParen)) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(syntax(self.offset(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(syntax(at, "expected a number, variable or `(`")),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

/// Parses `text` as a polynomial in `ring`.
pub fn parse_polynomial(text: &str, ring: &Arc<AmbientRing>) -> Result<Polynomial> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, end: text.len(), ring };
    let p = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(syntax(parser.offset(), "unexpected trailing input"));
    }
    Ok(p)
}

/// Parses each generator and builds the ideal they generate.
pub fn parse_ideal<S: AsRef<str>>(ring: &Arc<AmbientRing>, generators: &[S]) -> Result<Ideal> {
    let gens = generators
        .iter()
        .map(|g| parse_polynomial(g.as_ref(), ring))
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(ring, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xy() -> Arc<AmbientRing> {
        AmbientRing::new(["x", "y"]).unwrap()
    }

    #[test]
    fn simple_expressions() {
        let r = xy();
        assert_eq!(parse_polynomial("x^2 + 2*x*y", &r).unwrap().to_string(), "x^2 + 2*x*y");
        assert_eq!(parse_polynomial("(x+y)^2 - x^2 - y^2", &r).unwrap().to_string(), "2*x*y");
        assert_eq!(parse_polynomial("  -  3/6 * y ", &r).unwrap().to_string(), "-1/2*y");
        assert_eq!(parse_polynomial("x - x", &r).unwrap().to_string(), "0");
    }

    #[test]
    fn negative_exponent_is_rejected_at_the_exponent() {
        let err = parse_polynomial("x^-1", &xy()).unwrap_err();
        assert_eq!(err, Error::Parse { position: 2, message: "negative exponent".into() });
    }

    #[test]
    fn error_paths() {
        let r = xy();
        assert!(matches!(
            parse_polynomial("x + z", &r),
            Err(Error::UnknownVariable { position: 4, .. })
        ));
        assert!(matches!(parse_polynomial("2x", &r), Err(Error::Parse { position: 1, .. })));
        assert!(matches!(parse_polynomial("(x+y", &r), Err(Error::Parse { position: 4, .. })));
        assert!(matches!(parse_polynomial("1/0", &r), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("", &r), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_polynomial("x^2^3", &r), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("x^(2)", &r), Err(Error::Parse { .. })));
    }

    fn arb_poly() -> impl Strategy<Value = Vec<(i64, i64, u32, u32)>> {
        prop::collection::vec((-20i64..20, 1i64..7, 0u32..4, 0u32..4), 0..6)
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(terms in arb_poly()) {
            let r = xy();
            let p = Polynomial::from_terms(&r, terms.into_iter().map(|(n, d, a, b)| {
                (crate::algebra::Monomial::from_exponents(vec![a, b]), crate::algebra::rational(n, d))
            }));
            let printed = p.to_string();
            let q = parse_polynomial(&printed, &r).unwrap();
            prop_assert_eq!(&q, &p);
            prop_assert_eq!(q.to_string(), printed);
        }
    }
}
