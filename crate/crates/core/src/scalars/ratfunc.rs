use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use crate::error::{Error, Result};

/// An element `q^shift * num / den` of the field `Q(q)` in canonical form.
///
/// Canonical form: `gcd(num, den) = 1` over `Z[q]` (which also makes the integer contents
/// coprime), `den` has a positive leading coefficient, and neither `num` nor `den` is
/// divisible by `q`. Zero is `0 / 1` with shift 0. Structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
    shift: i64,
}

pub type Rational = BigRational;

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::one(),
            shift: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_parts(Poly::constant(n), Poly::one(), 0)
    }

    pub fn from_rational(r: &Rational) -> Self {
        Self::from_parts(
            Poly::constant(r.numer().clone()),
            Poly::constant(r.denom().clone()),
            0,
        )
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `q^e` for any integer `e`.
    pub fn q_pow(e: i64) -> Self {
        RationalFunction {
            num: Poly::one(),
            den: Poly::one(),
            shift: e,
        }
    }

    /// `q - q^{-1}`.
    pub fn lambda() -> Self {
        &Self::q() - &Self::q_pow(-1)
    }

    /// Laurent polynomial `sum_i coeffs[i] q^(low + i)`.
    pub fn laurent(low: i64, coeffs: &[i64]) -> Self {
        Self::from_parts(Poly::from_i64s(coeffs), Poly::one(), low)
    }

    /// Build `q^shift * num / den` and bring it to canonical form.
    pub fn from_parts(num: Poly, den: Poly, shift: i64) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let vn = num.valuation();
        let vd = den.valuation();
        let mut num = num.shr(vn);
        let mut den = den.shr(vd);
        let shift = shift + vn as i64 - vd as i64;
        if !den.is_one() {
            let g = if den.is_constant() {
                Poly::constant(num_integer::Integer::gcd(&num.content(), &den.coeffs()[0]))
            } else {
                Poly::gcd(&num, &den)
            };
            if !g.is_one() {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
            if den.lc().is_negative() {
                num = -&num;
                den = -&den;
            }
        }
        RationalFunction { num, den, shift }
    }

    /// Numerator polynomial (without the `q` shift).
    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the value lies in `Z[q, q^{-1}]`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// True when the value is a rational constant.
    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.shift == 0 && self.num.is_constant() && self.den.is_constant())
    }

    /// The rational constant, if `is_constant()`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if !self.is_constant() {
            return None;
        }
        Some(Rational::new(self.num.coeff(0), self.den.coeff(0)))
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.lc().is_negative() {
            num = -&num;
            den = -&den;
        }
        Ok(RationalFunction {
            num,
            den,
            shift: -self.shift,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Exact evaluation at `q = q0`.
    ///
    /// `q0` must be generic: `0` and `±1` are rejected. A vanishing denominator is a pole.
    pub fn specialize(&self, q0: &Rational) -> Result<Rational> {
        if q0.is_zero() || q0.abs().is_one() {
            return Err(Error::NonGeneric(format!("q0 = {q0} is not admissible")));
        }
        self.eval_at(q0)
    }

    /// Evaluation without the genericity guard (still rejects poles and `q0 = 0` with a
    /// negative total power).
    pub fn eval_at(&self, q0: &Rational) -> Result<Rational> {
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(Error::Pole(format!("{self} at q = {q0}")));
        }
        let n = self.num.eval(q0);
        if q0.is_zero() {
            return match self.shift.cmp(&0) {
                Ordering::Equal => Ok(n / d),
                Ordering::Greater => Ok(Rational::zero()),
                Ordering::Less => Err(Error::Pole(format!("{self} at q = 0"))),
            };
        }
        let mut qs = Rational::one();
        for _ in 0..self.shift.unsigned_abs() {
            qs *= q0;
        }
        if self.shift < 0 {
            qs = qs.recip();
        }
        Ok(n / d * qs)
    }

    /// Substitute `q -> x` for another element `x` of the field.
    pub fn compose(&self, x: &RationalFunction) -> Result<RationalFunction> {
        let horner = |p: &Poly| -> RationalFunction {
            let mut acc = RationalFunction::zero();
            for c in p.coeffs().iter().rev() {
                acc = &(&acc * x) + &RationalFunction::from_bigint(c.clone());
            }
            acc
        };
        let n = horner(&self.num);
        let d = horner(&self.den);
        let s = x.pow(self.shift)?;
        Ok(&n.checked_div(&d)? * &s)
    }

    /// Total degree in `q`, i.e. `shift + deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        Some(self.shift + dn - self.den.degree().unwrap_or(0) as i64)
    }

    /// Sign of the leading coefficient of the numerator (`0` for zero).
    pub fn leading_sign(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.num.lc().is_negative() {
            -1
        } else {
            1
        }
    }

    /// Square root in `Q(q)` if one exists.
    pub fn sqrt(&self) -> Option<RationalFunction> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.shift % 2 != 0 {
            return None;
        }
        let n = poly_sqrt(&self.num)?;
        let d = poly_sqrt(&self.den)?;
        Some(Self::from_parts(n, d, self.shift / 2))
    }

    /// Crude size measure used by pivot heuristics.
    pub fn weight(&self) -> u64 {
        self.num.weight() + self.den.weight()
    }
}

/// Integer-polynomial square root with positive leading coefficient, if exact.
fn poly_sqrt(p: &Poly) -> Option<Poly> {
    let d = p.degree()?;
    if d % 2 != 0 || p.lc().is_negative() {
        return None;
    }
    let lc = p.lc();
    let r = lc.sqrt();
    if &r * &r != lc {
        return None;
    }
    // Solve s^2 = p from the top coefficient down.
    let half = d / 2;
    let mut s = vec![BigInt::zero(); half + 1];
    s[half] = r.clone();
    let two_r = &r * 2;
    for k in (0..half).rev() {
        // coefficient of q^(half + k) in s^2 must match p
        let target = p.coeff(half + k);
        let mut acc = BigInt::zero();
        for i in (k + 1)..=half {
            let j = half + k - i;
            if j > k && j <= half {
                acc += &s[i] * &s[j];
            }
        }
        let rem: BigInt = target - acc;
        let (quo, r) = num_integer::Integer::div_rem(&rem, &two_r);
        if !r.is_zero() {
            return None;
        }
        s[k] = quo;
    }
    let s = Poly::from_coeffs(s);
    if &(&s * &s) == p {
        Some(s)
    } else {
        None
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for RationalFunction {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(rhs.shift);
        let a = self.num.shl((self.shift - s) as usize);
        let b = rhs.num.shl((rhs.shift - s) as usize);
        if self.den == rhs.den {
            RationalFunction::from_parts(&a + &b, self.den.clone(), s)
        } else {
            let num = &(&a * &rhs.den) + &(&b * &self.den);
            RationalFunction::from_parts(num, &self.den * &rhs.den, s)
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        let shift = self.shift + rhs.shift;
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction {
                num: &self.num * &rhs.num,
                den: Poly::one(),
                shift,
            };
        }
        // Cross-cancel so the product is already reduced.
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1);
        let d2 = rhs.den.div_exact(&g1);
        let n2 = rhs.num.div_exact(&g2);
        let d1 = self.den.div_exact(&g2);
        let mut num = &n1 * &n2;
        let mut den = &d1 * &d2;
        if den.lc().is_negative() {
            num = -&num;
            den = -&den;
        }
        RationalFunction { num, den, shift }
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; use [`RationalFunction::checked_div`] for a `Result`.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero in Q(q)")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
            shift: self.shift,
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&RationalFunction> for RationalFunction {
    fn add_assign(&mut self, rhs: &RationalFunction) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&RationalFunction> for RationalFunction {
    fn sub_assign(&mut self, rhs: &RationalFunction) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&RationalFunction> for RationalFunction {
    fn mul_assign(&mut self, rhs: &RationalFunction) {
        *self = &*self * rhs;
    }
}

/// Render a Laurent polynomial `q^shift * p` as a sum of terms, highest power first.
fn fmt_laurent(p: &Poly, shift: i64) -> (String, usize) {
    let mut out = String::new();
    let mut terms = 0;
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let e = i as i64 + shift;
        let neg = c.is_negative();
        let mag = c.abs();
        let body = match (e, mag.is_one()) {
            (0, _) => mag.to_string(),
            (1, true) => "q".to_string(),
            (1, false) => format!("{mag}*q"),
            (_, true) => format!("q^{e}"),
            (_, false) => format!("{mag}*q^{e}"),
        };
        if terms == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
        terms += 1;
    }
    if terms == 0 {
        out.push('0');
    }
    (out, terms)
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, nt) = fmt_laurent(&self.num, self.shift);
        if self.den.is_one() {
            return f.write_str(&n);
        }
        let (d, dt) = fmt_laurent(&self.den, 0);
        let n = if nt > 1 { format!("({n})") } else { n };
        let d = if dt > 1 || d.contains('*') || d.contains('^') {
            format!("({d})")
        } else {
            d
        };
        write!(f, "{n}/{d}")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RF({self})")
    }
}

impl std::str::FromStr for RationalFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_scalar(s)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn laurent_cancellation() {
        let a = &(&RationalFunction::q() - &RationalFunction::q_pow(-1)) + &RationalFunction::q_pow(-1);
        assert_eq!(a, RationalFunction::q());
    }

    #[test]
    fn polynomial_gcd_in_division() {
        assert_eq!(rf("(q^2 - 1)/(q - 1)"), rf("q + 1"));
    }

    #[test]
    fn inverse_roundtrip() {
        let x = rf("q + q^-1");
        assert!((&x.inv().unwrap() * &x).is_one());
        assert!(matches!(RationalFunction::zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn canonical_denominator_sign_and_content() {
        let x = RationalFunction::from_parts(Poly::from_i64s(&[2, 2]), Poly::from_i64s(&[-4]), 0);
        assert_eq!(x.to_string(), "(-q - 1)/2");
        assert_eq!(x.denom(), &Poly::from_i64s(&[2]));
    }

    #[test]
    fn specialize_guards() {
        let two = Rational::from_integer(2.into());
        assert_eq!(rf("q + q^-1").specialize(&two).unwrap(), Rational::new(5.into(), 2.into()));
        assert!(matches!(
            rf("q - q^-1").specialize(&Rational::one()),
            Err(Error::NonGeneric(_))
        ));
        assert!(matches!(rf("1/(q-2)").specialize(&two), Err(Error::Pole(_))));
    }

    #[test]
    fn sqrt_of_squares() {
        let x = rf("(q + 2*q^-1)/(3*q - 1)");
        let r = (&x * &x).sqrt().unwrap();
        assert!(r == x || r == -&x);
        assert!(rf("q").sqrt().is_none());
        assert!(rf("q^2 + 1").sqrt().is_none());
    }

    #[test]
    fn compose_substitutes() {
        let x = rf("q^2 + 1/q");
        assert_eq!(x.compose(&rf("q^2")).unwrap(), rf("q^4 + q^-2"));
    }
}
