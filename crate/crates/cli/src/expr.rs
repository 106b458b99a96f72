//! Integer polynomials in `x`, written as expressions.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' digits)?
//! base   := 'x' | digits | '(' expr ')'
//! ```
//!
//! Whitespace is ignored and U+2212 MINUS SIGN is read as '-'.

use num_bigint::BigInt;
use nsrank_core::IntegerPolynomial;
use thiserror::Error;

/// Exponents above this are rejected before expansion.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("non-integer literal at position {pos}")]
    NonIntegerLiteral { pos: usize },
    #[error("unknown identifier {name:?} at position {pos}, only x is allowed")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("exponent {value} at position {pos} exceeds {MAX_EXPONENT}")]
    ExponentTooLarge { pos: usize, value: String },
}

struct Parser {
    chars: Vec<(usize, char)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let chars: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i, if c == '\u{2212}' { '-' } else { c }))
            .collect();
        Self { chars, at: 0, end: text.len() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.end, |&(i, _)| i)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), message: message.into() })
    }

    fn expr(&mut self) -> Result<IntegerPolynomial, ParseError> {
        let negate = self.peek() == Some('-');
        if negate {
            self.at += 1;
        }
        let mut acc = self.term()?;
        if negate {
            acc = &IntegerPolynomial::zero() - &acc;
        }
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.at += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntegerPolynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.at += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<IntegerPolynomial, ParseError> {
        let base = self.base()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.at += 1;
        let pos = self.pos();
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return self.syntax("exponent must be a nonnegative integer literal");
        }
        let digits = self.digits();
        if self.peek() == Some('.') {
            return Err(ParseError::NonIntegerLiteral { pos });
        }
        let exp = digits
            .parse::<u32>()
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or(ParseError::ExponentTooLarge { pos, value: digits })?;
        Ok(base.pow(exp))
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.at += 1;
        }
        s
    }

    fn base(&mut self) -> Result<IntegerPolynomial, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some('x') if !self.identifier_continues(1) => {
                self.at += 1;
                Ok(IntegerPolynomial::x())
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                if self.peek() == Some('.') || self.peek().is_some_and(|c| c == 'e' || c == 'E') {
                    return Err(ParseError::NonIntegerLiteral { pos });
                }
                let value: BigInt = digits.parse().expect("digit string");
                Ok(IntegerPolynomial::new(vec![value]))
            }
            Some('(') => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return self.syntax("expected ')'");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(c) = self.peek().filter(|c| c.is_alphanumeric() || *c == '_') {
                    name.push(c);
                    self.at += 1;
                }
                Err(ParseError::UnknownIdentifier { pos, name })
            }
            Some('.') => Err(ParseError::NonIntegerLiteral { pos }),
            Some(c) => self.syntax(format!("unexpected {c:?}")),
            None => self.syntax("unexpected end of input"),
        }
    }

    fn identifier_continues(&self, offset: usize) -> bool {
        self.chars
            .get(self.at + offset)
            .is_some_and(|&(_, c)| c.is_alphanumeric() || c == '_')
    }
}

/// Parses and expands an expression; returns ascending coefficients,
/// trimmed (the zero polynomial is empty).
pub fn parse_polynomial(text: &str) -> Result<Vec<BigInt>, ParseError> {
    let mut parser = Parser::new(text);
    let poly = parser.expr()?;
    if parser.peek().is_some() {
        return parser.syntax(format!("unexpected {:?}", parser.peek().unwrap()));
    }
    Ok(poly.into_coeffs())
}

/// Canonical text for a coefficient list, parseable by [`parse_polynomial`].
pub fn render(coeffs: &[BigInt]) -> String {
    IntegerPolynomial::new(coeffs.to_vec()).to_string()
}
