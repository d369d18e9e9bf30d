//! Parser for noncommutative expressions such as `a*d - q^-1*b*c` or `(q+1)*(a*b - q*b*a)/2`.
//!
//! Identifiers are generators of the alphabet (`q` is the parameter); division is by scalars only.

use super::poly::{Alphabet, NCPolynomial};
use crate::error::Result;
use crate::scalars::{Cursor, RationalFunction as RF};

pub fn parse_nc(src: &str, alphabet: &Alphabet) -> Result<NCPolynomial> {
    let mut c = Cursor::new(src);
    let v = expr(&mut c, alphabet)?;
    if !c.at_end() {
        return Err(c.error("trailing input"));
    }
    Ok(v)
}

fn expr(c: &mut Cursor, al: &Alphabet) -> Result<NCPolynomial> {
    let mut acc = term(c, al)?;
    loop {
        if c.eat(b'+') {
            acc = acc.add(&term(c, al)?);
        } else if c.eat(b'-') {
            acc = acc.sub(&term(c, al)?);
        } else {
            return Ok(acc);
        }
    }
}

fn term(c: &mut Cursor, al: &Alphabet) -> Result<NCPolynomial> {
    let mut acc = unary(c, al)?;
    loop {
        if c.eat(b'*') {
            acc = acc.mul(&unary(c, al)?);
        } else if c.eat(b'/') {
            let pos = c.pos;
            let d = unary(c, al)?;
            let s = d.as_scalar().filter(|s| !s.is_zero()).ok_or_else(|| {
                c.pos = pos;
                c.error("division by a non-scalar or zero")
            })?;
            acc = acc.scale(&s.inv()?);
        } else {
            return Ok(acc);
        }
    }
}

fn unary(c: &mut Cursor, al: &Alphabet) -> Result<NCPolynomial> {
    if c.eat(b'-') {
        return Ok(unary(c, al)?.neg());
    }
    if c.eat(b'+') {
        return unary(c, al);
    }
    power(c, al)
}

fn power(c: &mut Cursor, al: &Alphabet) -> Result<NCPolynomial> {
    let base = atom(c, al)?;
    if c.eat(b'^') {
        let pos = c.pos;
        let e = c.exponent()?;
        if e >= 0 {
            return Ok(base.pow(e as usize));
        }
        let s = base.as_scalar().filter(|s| !s.is_zero()).ok_or_else(|| {
            c.pos = pos;
            c.error("negative power of a non-scalar or zero")
        })?;
        return Ok(NCPolynomial::scalar(s.pow(e)?));
    }
    Ok(base)
}

fn atom(c: &mut Cursor, al: &Alphabet) -> Result<NCPolynomial> {
    match c.peek() {
        Some(b'(') => {
            c.pos += 1;
            let v = expr(c, al)?;
            c.expect(b')')?;
            Ok(v)
        }
        Some(d) if d.is_ascii_digit() => Ok(NCPolynomial::scalar(RF::from_bigint(c.integer()?))),
        Some(_) => {
            let start = c.pos;
            match c.identifier() {
                Some(name) if name == "q" => Ok(NCPolynomial::scalar(RF::q())),
                Some(name) => match al.index(&name) {
                    Some(g) => Ok(NCPolynomial::generator(g)),
                    None => {
                        c.pos = start;
                        Err(c.error(format!("unknown generator {name:?}")))
                    }
                },
                None => Err(c.error("unexpected character")),
            }
        }
        None => Err(c.error("unexpected end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn parses_and_round_trips() {
        let al = Alphabet::matrix_entries(2);
        let p = parse_nc("a*d - q^-1*b*c", &al).unwrap();
        assert_eq!(p.coeff(&[1, 2]), -RF::q_pow(-1));
        for s in [
            "(q*a*d + q^-1*d*a)/(q + q^-1) - (b*c + c*b)/(q+q^-1)",
            "1/2 + a^2 - 3*b*c/(q - 5)",
            "-(q^2 - 1)*a*b*c*d",
        ] {
            let p = parse_nc(s, &al).unwrap();
            assert_eq!(parse_nc(&p.display(&al), &al).unwrap(), p, "{s}");
        }
    }

    #[test]
    fn errors() {
        let al = Alphabet::matrix_entries(2);
        assert!(matches!(parse_nc("a/b", &al), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_nc("a + x", &al), Err(Error::Parse { pos: 4, .. })));
        assert!(parse_nc("a^-1", &al).is_err());
        assert!(parse_nc("a*", &al).is_err());
    }

    #[test]
    fn bracketed_generator_names() {
        let al = Alphabet::new(vec!["l11[1]".into(), "l12[1]".into()]).unwrap();
        let p = parse_nc("l11[1]*l12[1] - l12[1]*l11[1]", &al).unwrap();
        assert_eq!(p.len(), 2);
    }
}
