//! Parser for field-element literals such as `1/2`, `3 + 7l`, `(λ - 1)/2`
//! or `0.3333`. Decimals are read as the exact rational they spell out.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary | implicit)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'l' | 'λ' | 'lambda' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::cycfield::{Field, FieldElement};
use crate::error::{Error, Result};

pub fn parse_element(field: &Field, input: &str) -> Result<FieldElement> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::Parse("empty literal".into()));
    }
    let mut p = Parser { field, chars, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(Error::Parse(format!("unexpected {:?} at offset {}", p.chars[p.pos], p.pos)));
    }
    Ok(v)
}

/// Parses a decimal or fraction literal into an exact rational.
pub fn parse_decimal(input: &str) -> Result<BigRational> {
    let s = input.trim();
    let bad = || Error::Parse(format!("not a decimal: {s:?}"));
    if s.contains('/') {
        return crate::cycfield::parse_rational(s);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = BigRational::new(num, den);
    Ok(if neg { -q } else { q })
}

struct Parser<'a> {
    field: &'a Field,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<FieldElement> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add_ref(&self.term()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.sub_ref(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldElement> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = acc.mul_ref(&self.unary()?);
                }
                '/' => {
                    self.pos += 1;
                    acc = acc.checked_div(&self.unary()?)?;
                }
                '(' | 'l' | 'λ' => acc = acc.mul_ref(&self.power()?),
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FieldElement> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg_ref())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<FieldElement> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let e: u32 = self.chars[start..self.pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| Error::Parse("exponent must be a non-negative integer".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FieldElement> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('λ') => {
                self.pos += 1;
                Ok(FieldElement::lambda(self.field))
            }
            Some('l') => {
                let rest: String = self.chars[self.pos..].iter().take(6).collect();
                self.pos += if rest == "lambda" { 6 } else { 1 };
                Ok(FieldElement::lambda(self.field))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                let q = parse_decimal(&text)?;
                Ok(FieldElement::from_rational(self.field, &q))
            }
            Some(c) => Err(Error::Parse(format!("unexpected {c:?} at offset {}", self.pos))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}
