//! Parser for polynomial text such as `1/2*xi*sigma*(1-xi^2)`.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' unary) | ('/' number))*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | identifier | '(' expr ')'
//! ```
//!
//! Identifiers must name one of the two variables of the requested pair.

use num::{BigInt, Zero};

use super::{AlgebraError, BiPoly, Rational, VarPair};

/// Parses `text` as a polynomial in the variable pair `vars`.
pub fn parse_poly(text: &str, vars: VarPair) -> Result<BiPoly, AlgebraError> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        vars,
        len: text.len(),
    };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    vars: VarPair,
    len: usize,
}

impl Parser {
    fn byte_pos(&self) -> usize {
        self.chars.get(self.pos).map(|c| c.0).unwrap_or(self.len)
    }

    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse {
            pos: self.byte_pos(),
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn expr(&mut self) -> Result<BiPoly, AlgebraError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BiPoly, AlgebraError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                '/' => {
                    self.pos += 1;
                    self.skip_ws();
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    acc = acc.scale(&Rational::new(BigInt::from(1), d));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<BiPoly, AlgebraError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BiPoly, AlgebraError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.error("exponent must be a small non-negative integer"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        digits.parse().map_err(|_| self.error("invalid integer"))
    }

    fn atom(&mut self) -> Result<BiPoly, AlgebraError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(BiPoly::constant(self.vars, Rational::from_integer(n)))
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].1.is_alphanumeric() {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                let index = self.vars.index_of(&name)?;
                Ok(BiPoly::var(self.vars, index))
            }
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rat;

    #[test]
    fn parses_rational_coefficients_and_powers() {
        let p = parse_poly("1/2*xi*sigma - 3*(sigma^2)/4", VarPair::XiSigma).unwrap();
        assert_eq!(p.coeff(1, 1), rat(1, 2));
        assert_eq!(p.coeff(0, 2), rat(-3, 4));
    }

    #[test]
    fn accepts_greek_aliases() {
        let a = parse_poly("ξ^2*σ", VarPair::XiSigma).unwrap();
        let b = parse_poly("xi^2*sigma", VarPair::XiSigma).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_foreign_variables_and_garbage() {
        assert!(parse_poly("u*v", VarPair::XiSigma).is_err());
        assert!(parse_poly("xi +", VarPair::XiSigma).is_err());
        assert!(parse_poly("xi/0", VarPair::XiSigma).is_err());
        assert!(parse_poly("(xi", VarPair::XiSigma).is_err());
    }
}
