use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::polynomial::Poly;
use super::var::{Symbols, VarId};
use super::{PolyError, Rational};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn ident(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        (start, std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }
}

impl Poly {
    /// Parses the polynomial text grammar: signed terms `q*v1^e1*...*vk^ek`
    /// joined by `+`/`-`, rationals written `num/den`, whitespace ignored.
    pub fn parse(text: &str, symbols: &Symbols) -> Result<Poly, PolyError> {
        let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
        let mut terms: Vec<(Monomial, Rational)> = Vec::new();
        let mut first = true;
        loop {
            let mut sign = Rational::one();
            match lx.peek() {
                None if first => return lx.err("empty polynomial"),
                None => break,
                Some(b'+') if !first => lx.pos += 1,
                Some(b'-') => {
                    lx.pos += 1;
                    sign = -sign;
                }
                Some(_) if first => {}
                Some(c) => return lx.err(format!("expected `+` or `-`, found `{}`", c as char)),
            }
            first = false;
            let (m, c) = parse_term(&mut lx, symbols)?;
            terms.push((m, c * sign));
        }
        Ok(Poly::from_terms(terms))
    }
}

fn parse_term(lx: &mut Lexer<'_>, symbols: &Symbols) -> Result<(Monomial, Rational), PolyError> {
    let mut coeff = Rational::one();
    let mut pairs: Vec<(VarId, u32)> = Vec::new();
    loop {
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = lx.integer()?;
                let mut value = Rational::from_integer(n);
                if lx.peek() == Some(b'/') {
                    lx.pos += 1;
                    let d = lx.integer()?;
                    if d.is_zero() {
                        return lx.err("zero denominator");
                    }
                    value /= Rational::from_integer(d);
                }
                coeff *= value;
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let (start, name) = lx.ident();
                let v = symbols
                    .lookup(name)
                    .ok_or_else(|| PolyError::UnknownSymbol { name: name.to_string(), pos: start })?;
                let mut e = 1u32;
                if lx.peek() == Some(b'^') {
                    lx.pos += 1;
                    let n = lx.integer()?;
                    e = u32::try_from(n).or_else(|_| lx.err("exponent too large"))?;
                }
                pairs.push((v, e));
            }
            Some(c) => return lx.err(format!("unexpected `{}`", c as char)),
            None => return lx.err("unexpected end of input"),
        }
        if lx.peek() == Some(b'*') {
            lx.pos += 1;
        } else {
            break;
        }
    }
    Ok((Monomial::from_pairs(pairs), coeff))
}
