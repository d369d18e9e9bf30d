//! Parser for the scalar expression syntax: integers, `q`, `+ - * / ^` and parentheses.
//!
//! Exponents are (optionally signed) integer literals, e.g. `q^-2` or `(q+1)^(-1)`.

use num_bigint::BigInt;

use super::RationalFunction;
use crate::error::{Error, Result};

pub(crate) struct Cursor<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    pub(crate) fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            input: self.src.to_string(),
            pos: self.pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    /// Identifier: letters, digits, `_`, optionally followed by a bracketed index like `[2]`.
    pub(crate) fn identifier(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.bytes.len() && (self.bytes[self.pos].is_ascii_alphabetic() || self.bytes[self.pos] == b'_') {
            self.pos += 1;
            while self.pos < self.bytes.len()
                && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
            {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'[' {
                let save = self.pos;
                self.pos += 1;
                let digits = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos > digits && self.pos < self.bytes.len() && self.bytes[self.pos] == b']' {
                    self.pos += 1;
                } else {
                    self.pos = save;
                }
            }
            Some(self.src[start..self.pos].to_string())
        } else {
            None
        }
    }

    /// Signed integer exponent after `^`: `-2`, `3`, or `(-2)`.
    pub(crate) fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        let n = self.integer()?;
        if paren {
            self.expect(b')')?;
        }
        let n: i64 = n.try_into().map_err(|_| self.error("exponent too large"))?;
        Ok(if neg { -n } else { n })
    }
}

pub fn parse_scalar(src: &str) -> Result<RationalFunction> {
    let mut c = Cursor::new(src);
    let v = expr(&mut c)?;
    if !c.at_end() {
        return Err(c.error("trailing input"));
    }
    Ok(v)
}

fn expr(c: &mut Cursor) -> Result<RationalFunction> {
    let mut acc = term(c)?;
    loop {
        if c.eat(b'+') {
            acc = &acc + &term(c)?;
        } else if c.eat(b'-') {
            acc = &acc - &term(c)?;
        } else {
            return Ok(acc);
        }
    }
}

fn term(c: &mut Cursor) -> Result<RationalFunction> {
    let mut acc = unary(c)?;
    loop {
        if c.eat(b'*') {
            acc = &acc * &unary(c)?;
        } else if c.eat(b'/') {
            let pos = c.pos;
            let d = unary(c)?;
            acc = acc.checked_div(&d).map_err(|_| {
                let mut e = c.error("division by zero");
                if let Error::Parse { pos: p, .. } = &mut e {
                    *p = pos;
                }
                e
            })?;
        } else {
            return Ok(acc);
        }
    }
}

fn unary(c: &mut Cursor) -> Result<RationalFunction> {
    if c.eat(b'-') {
        return Ok(-unary(c)?);
    }
    if c.eat(b'+') {
        return unary(c);
    }
    power(c)
}

fn power(c: &mut Cursor) -> Result<RationalFunction> {
    let base = atom(c)?;
    if c.eat(b'^') {
        let e = c.exponent()?;
        return base.pow(e).map_err(|_| c.error("zero raised to a negative power"));
    }
    Ok(base)
}

fn atom(c: &mut Cursor) -> Result<RationalFunction> {
    match c.peek() {
        Some(b'(') => {
            c.pos += 1;
            let v = expr(c)?;
            c.expect(b')')?;
            Ok(v)
        }
        Some(b'q') => {
            let save = c.pos;
            match c.identifier().as_deref() {
                Some("q") => Ok(RationalFunction::q()),
                _ => {
                    c.pos = save;
                    Err(c.error("unknown identifier"))
                }
            }
        }
        Some(d) if d.is_ascii_digit() => Ok(RationalFunction::from_bigint(c.integer()?)),
        Some(_) => Err(c.error("unexpected character")),
        None => Err(c.error("unexpected end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar_examples() {
        let a = parse_scalar("q - 1/q").unwrap();
        assert_eq!(a, RationalFunction::lambda());
        assert_eq!(parse_scalar("(q^2-1)/(q+1)").unwrap(), parse_scalar("q - 1").unwrap());
        assert_eq!(parse_scalar("q^-2").unwrap(), RationalFunction::q_pow(-2));
        assert_eq!(parse_scalar("(q+1)^(-1)*(q+1)").unwrap(), RationalFunction::one());
        assert_eq!(parse_scalar("-q^2").unwrap(), -RationalFunction::q_pow(2));
    }

    #[test]
    fn reports_positions() {
        match parse_scalar("q + * 2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_scalar("1/(q-q)").is_err());
        assert!(parse_scalar("qq").is_err());
        assert!(parse_scalar("2 3").is_err());
    }

    #[test]
    fn emitter_round_trips() {
        for s in ["q - q^-1", "(q^2 + 1)/(q^4 + q^2 + 1)", "-1/2", "(-q - 1)/2", "3*q^-2/(q - 5)"] {
            let v = parse_scalar(s).unwrap();
            assert_eq!(parse_scalar(&v.to_string()).unwrap(), v, "{s} -> {v}");
        }
    }
}
