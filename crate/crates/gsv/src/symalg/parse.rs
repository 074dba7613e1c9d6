use std::iter::Peekable;
use std::str::CharIndices;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::variable::Variable;
use super::{Rational, SymAlgError};

/// Parses the canonical polynomial text form: signed sums of terms, each a
/// rational coefficient and/or a `*`-separated product of powers of
/// variables written `x{row}_{col}` / `y{row}_{col}`.
///
/// `parse_poly(&format_poly(&p)) == p` for every polynomial `p`.
pub fn parse_poly(text: &str) -> Result<Polynomial, SymAlgError> {
    Parser::new(text).parse()
}

/// The canonical text form: terms in descending graded-lex order, no spaces
/// inside terms, ` + `/` - ` between them. Equal polynomials format equal.
pub fn format_poly(p: &Polynomial) -> String {
    p.to_string()
}

struct Parser<'a> {
    chars: Peekable<CharIndices<'a>>,
    len: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { chars: text.char_indices().peekable(), len: text.len() }
    }

    fn pos(&mut self) -> usize {
        self.chars.peek().map(|&(i, _)| i).unwrap_or(self.len)
    }

    fn err<T>(&mut self, message: &str) -> Result<T, SymAlgError> {
        Err(SymAlgError::Syntax { position: self.pos(), message: message.to_string() })
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(&(_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        self.chars.next().map(|(_, c)| c)
    }

    /// Accepts '+', '-' and the unicode minus sign.
    fn parse_sign(&mut self) -> Result<i32, SymAlgError> {
        match self.peek() {
            Some('+') => {
                self.bump();
                Ok(1)
            }
            Some('-') | Some('\u{2212}') => {
                self.bump();
                Ok(-1)
            }
            _ => self.err("expected '+' or '-'"),
        }
    }

    fn parse_uint(&mut self) -> Result<BigUint, SymAlgError> {
        let mut digits = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        if digits.is_empty() {
            return self.err("expected a number");
        }
        Ok(digits.parse().expect("digit run"))
    }

    fn parse_index(&mut self) -> Result<usize, SymAlgError> {
        let n = self.parse_uint()?;
        let idx: usize = n.try_into().map_err(|_| SymAlgError::Syntax {
            position: self.len,
            message: "index out of range".to_string(),
        })?;
        if idx == 0 {
            return self.err("variable indices are 1-based");
        }
        Ok(idx)
    }

    fn parse_variable(&mut self) -> Result<Variable, SymAlgError> {
        let kind = match self.peek() {
            Some('x') => true,
            Some('y') => false,
            _ => return self.err("expected a variable"),
        };
        self.bump();
        let row = self.parse_index()?;
        if self.peek() != Some('_') {
            return self.err("expected '_' between variable indices");
        }
        self.bump();
        let col = self.parse_index()?;
        Ok(if kind { Variable::x(row, col) } else { Variable::y(row, col) })
    }

    /// variable ['^' uint]
    fn parse_factor(&mut self) -> Result<(Variable, u32), SymAlgError> {
        let v = self.parse_variable()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let e = self.parse_uint()?;
            let e: u32 = e.try_into().map_err(|_| SymAlgError::Syntax {
                position: self.len,
                message: "exponent out of range".to_string(),
            })?;
            Ok((v, e))
        } else {
            Ok((v, 1))
        }
    }

    /// [coefficient] ['*' factor]* with at least one of the two present.
    fn parse_term(&mut self) -> Result<(Monomial, Rational), SymAlgError> {
        let mut coeff = Rational::one();
        let mut pairs: Vec<(Variable, u32)> = Vec::new();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.parse_uint()?;
                self.skip_ws();
                let den = if self.peek() == Some('/') {
                    self.bump();
                    self.skip_ws();
                    let d = self.parse_uint()?;
                    if d == BigUint::default() {
                        return self.err("zero denominator");
                    }
                    d
                } else {
                    BigUint::one()
                };
                coeff = Rational::new(BigInt::from(num), BigInt::from(den));
                self.skip_ws();
                if self.peek() == Some('*') {
                    self.bump();
                    self.skip_ws();
                    pairs.push(self.parse_factor()?);
                } else {
                    return Ok((Monomial::one(), coeff));
                }
            }
            Some('x') | Some('y') => {
                pairs.push(self.parse_factor()?);
            }
            _ => return self.err("expected a coefficient or a variable"),
        }
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.bump();
                self.skip_ws();
                pairs.push(self.parse_factor()?);
            } else {
                return Ok((Monomial::from_pairs(pairs), coeff));
            }
        }
    }

    fn parse(&mut self) -> Result<Polynomial, SymAlgError> {
        let mut terms: Vec<(Monomial, Rational)> = Vec::new();
        self.skip_ws();
        let mut sign = if matches!(self.peek(), Some('+') | Some('-') | Some('\u{2212}')) {
            self.parse_sign()?
        } else {
            1
        };
        loop {
            self.skip_ws();
            let (m, c) = self.parse_term()?;
            terms.push((m, if sign < 0 { -c } else { c }));
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(Polynomial::from_terms(terms));
            }
            sign = self.parse_sign()?;
        }
    }
}
