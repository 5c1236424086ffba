//! Recursive-descent parser for polynomial expressions.
//!
//! Accepts identifiers from a declared variable list, arbitrary-precision
//! integer literals, `+  -  *  /  ^`, and parentheses.  Division must be
//! exact (dividing by a constant always is); exponents are nonnegative
//! integers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::One;
use std::str::FromStr;
use std::sync::Arc;

use super::poly::MultiPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let n = BigInt::from_str(&lit)
                    .map_err(|e| Error::Parse(format!("bad integer literal {lit}: {e}")))?;
                tokens.push(Token::Int(n));
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                tokens.push(Token::Ident(chars[start..i].iter().collect()));
            }
            _ => return Err(Error::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a Arc<Vec<String>>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = match self.peek() {
            Some(Token::Minus) => {
                self.advance();
                -&self.term()?
            }
            Some(Token::Plus) => {
                self.advance();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.advance();
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.advance();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.advance();
                    acc = &acc * &self.unary()?;
                }
                Some(Token::Slash) => {
                    self.advance();
                    let div = self.unary()?;
                    if div.is_zero() {
                        return Err(Error::Parse("division by zero".into()));
                    }
                    if let Some(c) = div.as_constant() {
                        acc = acc.scale(&(BigRational::one() / c));
                    } else {
                        acc = acc.exact_div(&div).ok_or_else(|| {
                            Error::Parse(format!("inexact polynomial division by {div}"))
                        })?;
                    }
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.advance();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.advance();
            match self.advance() {
                Some(Token::Int(n)) => {
                    let e = u32::try_from(&n)
                        .map_err(|_| Error::Parse(format!("exponent {n} out of range")))?;
                    Ok(base.pow(e))
                }
                other => Err(Error::Parse(format!(
                    "expected integer exponent, found {other:?}"
                ))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.advance() {
            Some(Token::Int(n)) => Ok(MultiPoly::constant(
                self.vars,
                BigRational::from_integer(n),
            )),
            Some(Token::Ident(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(idx) => Ok(MultiPoly::var(self.vars, idx)),
                None => Err(Error::Parse(format!(
                    "unknown variable {name}; declared variables are [{}]",
                    self.vars.join(", ")
                ))),
            },
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.advance() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::Parse("unbalanced parenthesis".into())),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses an expression into a polynomial over the declared variables.
pub fn parse_polynomial(input: &str, vars: &Arc<Vec<String>>) -> Result<MultiPoly> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        vars,
    };
    let poly = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input at token {:?}",
            parser.tokens[parser.pos]
        )));
    }
    Ok(poly)
}

/// Parses an integer or `p/q` fraction.
pub fn parse_rational(input: &str) -> Result<BigRational> {
    let s = input.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            let n = BigInt::from_str(num.trim())
                .map_err(|e| Error::Parse(format!("bad numerator {num:?}: {e}")))?;
            let d = BigInt::from_str(den.trim())
                .map_err(|e| Error::Parse(format!("bad denominator {den:?}: {e}")))?;
            if d == BigInt::from(0) {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n = BigInt::from_str(s)
                .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
            Ok(BigRational::from_integer(n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Arc<Vec<String>> {
        Arc::new(vec!["x".into(), "y".into(), "t".into()])
    }

    #[test]
    fn round_trips_canonical_strings() {
        let v = vars();
        for s in [
            "t^4 + x*t^3 - 8*y*t^2 - 36*x*y*t - 27*x^2*y + 16*y^2",
            "27*x^2 + 256*y",
            "4*x - 1",
            "x - y",
            "0",
            "-x + 1",
        ] {
            let p = parse_polynomial(s, &v).unwrap();
            assert_eq!(p.to_string(), s, "round trip failed for {s}");
        }
    }

    #[test]
    fn parses_structured_input() {
        let v = vars();
        let p = parse_polynomial("(x + y)^2 - (x - y)^2", &v).unwrap();
        assert_eq!(p, parse_polynomial("4*x*y", &v).unwrap());
        let p = parse_polynomial("-3*t*(t - 1)", &v).unwrap();
        assert_eq!(p, parse_polynomial("-3*t^2 + 3*t", &v).unwrap());
        let p = parse_polynomial("t/2 + 1/4", &v).unwrap();
        assert_eq!(p.to_string(), "1/2*t + 1/4");
    }

    #[test]
    fn rejects_bad_input() {
        let v = vars();
        assert!(parse_polynomial("", &v).is_err());
        assert!(parse_polynomial("z + 1", &v).is_err());
        assert!(parse_polynomial("x +", &v).is_err());
        assert!(parse_polynomial("(x + y", &v).is_err());
        assert!(parse_polynomial("x ^ y", &v).is_err());
        assert!(parse_polynomial("1/(x + y)", &v).is_err());
        assert!(parse_polynomial("x / 0", &v).is_err());
    }

    #[test]
    fn exact_poly_division_in_expressions() {
        let v = vars();
        let p = parse_polynomial("(x^2 - y^2)/(x - y)", &v).unwrap();
        assert_eq!(p.to_string(), "x + y");
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3").unwrap(), BigRational::from_integer(3.into()));
        assert_eq!(
            parse_rational("-1/4").unwrap(),
            BigRational::new((-1).into(), 4.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a").is_err());
    }
}
