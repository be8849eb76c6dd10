//! Text forms: the canonical operator-polynomial serialization and a small symbol grammar.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::poly::OperatorPoly;
use super::scalar::{parse_rational, CRational, ExactScalar};
use super::symbol::PolySymbol;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError { line, column, message: message.into() }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn digits(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let d = self.digits()?;
        d.parse().map_err(|_| self.error("exponent out of range"))
    }

    /// Number token: optional sign, digits, optional `.digits` or `/digits`.
    fn number(&mut self) -> Result<BigRational, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-' | '+')) {
            self.bump();
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.' || c == '/') {
            self.bump();
        }
        let tok = &self.src[start..self.pos];
        parse_rational(tok).ok_or_else(|| {
            let mut e = self.error(format!("invalid number '{tok}'"));
            e.column = e.column.saturating_sub(tok.chars().count());
            e
        })
    }
}

fn parse_coeff(c: &mut Cursor) -> Result<CRational, ParseError> {
    c.skip_ws();
    if c.eat('(') {
        let re = c.number()?;
        let im = c.number()?;
        c.expect('i')?;
        c.expect(')')?;
        return Ok(CRational::new(re, im));
    }
    let r = c.number()?;
    if c.peek() == Some('i') {
        c.bump();
        return Ok(CRational::new(BigRational::zero(), r));
    }
    Ok(CRational::real(r))
}

/// Inverse of the `Display` form of [`OperatorPoly`].
pub fn parse_operator_poly(src: &str) -> Result<OperatorPoly, ParseError> {
    let mut c = Cursor::new(src);
    let mut out = OperatorPoly::zero();
    if c.rest().trim() == "0" {
        return Ok(out);
    }
    loop {
        let coeff = parse_coeff(&mut c)?;
        let (mut k, mut a, mut b) = (0u32, 0u32, 0u32);
        while c.eat('*') {
            c.skip_ws();
            if c.rest().starts_with("hbar") {
                c.pos += 4;
                c.expect('^')?;
                k += c.exponent()?;
            } else if c.eat('q') {
                c.expect('^')?;
                a += c.exponent()?;
            } else if c.eat('p') {
                c.expect('^')?;
                b += c.exponent()?;
            } else {
                return Err(c.error("expected hbar^k, q^a or p^b"));
            }
        }
        out.add_term(a, b, &ExactScalar::monomial(k, coeff));
        if c.at_end() {
            return Ok(out);
        }
        c.expect('+')?;
    }
}

/// Parses symbols such as `q^2p^2`, `q p`, `1/2*p^2 + q^4 - 3q`.
pub fn parse_symbol(src: &str) -> Result<PolySymbol, ParseError> {
    let mut c = Cursor::new(src);
    let mut out = PolySymbol::zero();
    if c.at_end() {
        return Err(c.error("empty symbol"));
    }
    let mut sign = if c.eat('-') {
        -1
    } else {
        c.eat('+');
        1
    };
    loop {
        c.skip_ws();
        let mut coeff = BigRational::from_integer(BigInt::from(sign));
        let mut saw_any = false;
        if c.peek().is_some_and(|ch| ch.is_ascii_digit() || ch == '.') {
            coeff *= c.number()?;
            saw_any = true;
            c.eat('*');
        }
        let (mut s, mut r) = (0u32, 0u32);
        loop {
            c.skip_ws();
            let var = match c.peek() {
                Some('q') => 'q',
                Some('p') => 'p',
                _ => break,
            };
            c.bump();
            let e = if c.eat('^') { c.exponent()? } else { 1 };
            if var == 'q' {
                s += e;
            } else {
                r += e;
            }
            saw_any = true;
            c.eat('*');
        }
        if !saw_any {
            return Err(c.error("expected a coefficient or a factor q^s / p^r"));
        }
        out.add(s, r, &CRational::real(coeff));
        if c.at_end() {
            return Ok(out);
        }
        sign = if c.eat('+') {
            1
        } else if c.eat('-') {
            -1
        } else {
            return Err(c.error("expected '+' or '-'"));
        };
    }
}
