//! Parser for polynomial expressions over a named basis.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr := term (('+'|'-') term)*
//! term := rat ('*' var)* | var ('*' var)*
//! var  := basisname ('^' posint)?
//! rat  := int | int '/' posint
//! ```

use num_traits::One;
use thiserror::Error;

use crate::lie::LieAlgebra;
use crate::poly::{Coords, Polynomial};
use crate::ratio::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("unknown identifier '{0}'")]
    UnknownIdentifier(String),
    #[error("malformed rational '{0}'")]
    MalformedRational(String),
    #[error("exponent must be a positive integer in '{0}'")]
    BadExponent(String),
    #[error("unexpected token '{0}'")]
    Unexpected(String),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Int(String),
    Name(String),
}

fn tokenize(s: &str) -> Result<Vec<Token>, ExprError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
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
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                tokens.push(Token::Int(chars[start..i].iter().collect()));
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(Token::Name(chars[start..i].iter().collect()));
            }
            other => return Err(ExprError::Unexpected(other.to_string())),
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    algebra: &'a LieAlgebra,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial, ExprError> {
        let d = self.algebra.dim();
        let mut acc = Polynomial::zero(d, Coords::X);
        // an optional leading sign is accepted
        let mut sign = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                -Rat::one()
            }
            Some(Token::Plus) => {
                self.pos += 1;
                Rat::one()
            }
            _ => Rat::one(),
        };
        loop {
            let term = self.term()?;
            acc = acc.add(&term.scale(&sign));
            match self.next() {
                None => return Ok(acc),
                Some(Token::Plus) => sign = Rat::one(),
                Some(Token::Minus) => sign = -Rat::one(),
                Some(other) => return Err(ExprError::Unexpected(format!("{other:?}"))),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ExprError> {
        let d = self.algebra.dim();
        let mut acc = match self.peek() {
            Some(Token::Int(_)) => {
                let r = self.rational()?;
                Polynomial::constant(d, Coords::X, r)
            }
            Some(Token::Name(_)) => self.variable()?,
            Some(other) => return Err(ExprError::Unexpected(format!("{other:?}"))),
            None => return Err(ExprError::UnexpectedEnd),
        };
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            let var = self.variable()?;
            acc = acc.mul(&var);
        }
        Ok(acc)
    }

    fn rational(&mut self) -> Result<Rat, ExprError> {
        let Some(Token::Int(numer)) = self.next() else {
            return Err(ExprError::UnexpectedEnd);
        };
        let n: i64 = numer
            .parse()
            .map_err(|_| ExprError::MalformedRational(numer.clone()))?;
        if self.peek() == Some(&Token::Slash) {
            self.pos += 1;
            let Some(Token::Int(denom)) = self.next() else {
                return Err(ExprError::MalformedRational(format!("{numer}/")));
            };
            let q: i64 = denom
                .parse()
                .map_err(|_| ExprError::MalformedRational(denom.clone()))?;
            if q == 0 {
                return Err(ExprError::MalformedRational(format!("{numer}/{denom}")));
            }
            return Ok(crate::ratio::ratio(n, q));
        }
        Ok(crate::ratio::rat(n))
    }

    fn variable(&mut self) -> Result<Polynomial, ExprError> {
        let d = self.algebra.dim();
        let Some(token) = self.next() else {
            return Err(ExprError::UnexpectedEnd);
        };
        let Token::Name(name) = token else {
            return Err(ExprError::Unexpected(format!("{token:?}")));
        };
        let Some(i) = self.algebra.basis_index(&name) else {
            return Err(ExprError::UnknownIdentifier(name));
        };
        let mut exp = 1u16;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Token::Int(k)) => {
                    exp = k.parse().map_err(|_| ExprError::BadExponent(k.clone()))?;
                    if exp == 0 {
                        return Err(ExprError::BadExponent(k));
                    }
                }
                Some(other) => return Err(ExprError::BadExponent(format!("{other:?}"))),
                None => return Err(ExprError::UnexpectedEnd),
            }
        }
        let mut exps = vec![0u16; d];
        exps[i] = exp;
        Ok(Polynomial::monomial(d, Coords::X, exps, Rat::one()))
    }
}

/// Parses an expression in the coordinates of the given algebra.
pub fn parse_poly_expr(s: &str, algebra: &LieAlgebra) -> Result<Polynomial, ExprError> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(ExprError::UnexpectedEnd);
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        algebra,
    };
    parser.expr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_the_casimir() {
        let a = fixtures::load_bundled("sl2").unwrap();
        let p = parse_poly_expr("4*e*f + h^2", &a).unwrap();
        assert_eq!(p, fixtures::sl2_casimir());
        assert!(crate::lie::is_invariant(&a, &p));
    }

    #[test]
    fn parses_constants_and_signs() {
        let a = fixtures::load_bundled("sl2").unwrap();
        let p = parse_poly_expr("1", &a).unwrap();
        assert_eq!(p, Polynomial::one(3, Coords::X));
        let p = parse_poly_expr("-2/3*e*e + h - 1", &a).unwrap();
        assert_eq!(p.coeff(&[2, 0, 0]), crate::ratio::ratio(-2, 3));
        assert_eq!(p.coeff(&[0, 1, 0]), crate::ratio::rat(1));
        assert_eq!(p.coeff(&[0, 0, 0]), crate::ratio::rat(-1));
    }

    #[test]
    fn rejects_bad_input() {
        let a = fixtures::load_bundled("sl2").unwrap();
        assert!(matches!(
            parse_poly_expr("e^-1", &a),
            Err(ExprError::BadExponent(_))
        ));
        assert_eq!(
            parse_poly_expr("q + 1", &a),
            Err(ExprError::UnknownIdentifier("q".into()))
        );
        assert!(parse_poly_expr("1/0", &a).is_err());
        assert!(parse_poly_expr("", &a).is_err());
    }
}
