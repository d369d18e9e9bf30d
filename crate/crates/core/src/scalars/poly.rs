//! Dense univariate polynomials in `q` with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial in `q` over the integers. Coefficients are stored low degree first and the
/// vector never ends in a zero, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: BigInt, degree: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Poly::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Largest `k` with `q^k` dividing the polynomial (0 for the zero polynomial).
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Multiply by `q^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Divide by `q^k`; the caller guarantees `k <= valuation()`.
    pub fn shr(&self, k: usize) -> Poly {
        debug_assert!(k <= self.valuation() || self.is_zero());
        if k == 0 {
            return self.clone();
        }
        Poly::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_scalar(&self, c: &BigInt) -> Poly {
        if c.is_one() {
            return self.clone();
        }
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .map(|x| {
                    debug_assert!((x % c).is_zero());
                    x / c
                })
                .collect(),
        }
    }

    /// Positive gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with a positive leading coefficient.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        self.div_scalar(&c)
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Poly) -> Poly {
        let db = b.degree().expect("pseudo_rem by zero polynomial");
        let Some(da) = self.degree() else {
            return Poly::zero();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.lc();
        let mut r = self.coeffs.clone();
        for i in (db..=da).rev() {
            let lead = r[i].clone();
            for x in r.iter_mut().take(i + 1) {
                *x *= &lb;
            }
            if !lead.is_zero() {
                let off = i - db;
                for (j, bc) in b.coeffs.iter().enumerate() {
                    r[off + j] -= &lead * bc;
                }
            }
            debug_assert!(r[i].is_zero());
            r.truncate(i);
        }
        Poly::from_coeffs(r)
    }

    /// Exact polynomial division; `b` must divide `self` over the integers.
    pub fn div_exact(&self, b: &Poly) -> Poly {
        let db = b.degree().expect("division by zero polynomial");
        if b.is_one() {
            return self.clone();
        }
        let Some(da) = self.degree() else {
            return Poly::zero();
        };
        if db == 0 {
            return self.div_scalar(&b.coeffs[0]);
        }
        assert!(da >= db, "inexact polynomial division");
        let lb = b.lc();
        let mut r = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); da - db + 1];
        for i in (db..=da).rev() {
            if r[i].is_zero() {
                continue;
            }
            let (qc, rem) = r[i].div_rem(&lb);
            assert!(rem.is_zero(), "inexact polynomial division");
            let off = i - db;
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[off + j] -= &qc * bc;
            }
            quot[off] = qc;
        }
        debug_assert!(r.iter().all(|c| c.is_zero()), "inexact polynomial division");
        Poly::from_coeffs(quot)
    }

    /// Gcd over `Z[q]` by the subresultant remainder sequence. The result has a positive
    /// leading coefficient; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.normalize_sign();
        }
        if b.is_zero() {
            return a.normalize_sign();
        }
        let cont = a.content().gcd(&b.content());
        if a.is_constant() || b.is_constant() {
            return Poly::constant(cont);
        }
        if a == b {
            return a.normalize_sign();
        }
        let (mut a, mut b) = (a.primitive_part(), b.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.degree().unwrap() - b.degree().unwrap();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                break;
            }
            if r.is_constant() {
                return Poly::constant(cont);
            }
            a = b;
            let divisor = &g * num_traits::pow(h.clone(), delta);
            b = r.div_scalar(&divisor);
            g = a.lc();
            if delta > 0 {
                let gd = num_traits::pow(g.clone(), delta);
                let hd = num_traits::pow(h.clone(), delta - 1);
                h = gd / hd;
            }
        }
        b.primitive_part().scale(&cont)
    }

    fn normalize_sign(&self) -> Poly {
        if self.lc().is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Evaluate at a rational point by Horner's rule.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Number of terms with nonzero coefficient.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Sum of absolute bit sizes, used as a cheap size measure for pivoting.
    pub fn weight(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits() + 1).sum()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (x, y) in coeffs.iter_mut().zip(&short.coeffs) {
            *x += y;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, BigInt::zero());
        for (x, y) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *x -= y;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_i64s(cs)
    }

    #[test]
    fn gcd_of_cyclotomic_products() {
        // (q^2 - 1) and (q - 1)(q + 2)
        let a = p(&[-1, 0, 1]);
        let b = &p(&[-1, 1]) * &p(&[2, 1]);
        assert_eq!(Poly::gcd(&a, &b), p(&[-1, 1]));
    }

    #[test]
    fn gcd_keeps_common_content() {
        let a = p(&[6, 6]);
        let b = p(&[4, 0, -4]);
        assert_eq!(Poly::gcd(&a, &b), p(&[2, 2]));
    }

    #[test]
    fn gcd_coprime_is_constant() {
        let a = p(&[1, 0, 1]);
        let b = p(&[1, 1]);
        assert_eq!(Poly::gcd(&a, &b), Poly::one());
    }

    #[test]
    fn gcd_high_degree_drop() {
        // exercises delta > 1 in the subresultant sequence
        let g = p(&[3, -1, 2]);
        let a = &g * &p(&[1, 0, 0, 0, 0, 1]);
        let b = &g * &p(&[5, 1]);
        assert_eq!(Poly::gcd(&a, &b), g);
    }

    #[test]
    fn exact_division_and_pseudo_remainder() {
        let a = &p(&[1, 2, 1]) * &p(&[-3, 0, 2]);
        assert_eq!(a.div_exact(&p(&[1, 1])), &p(&[1, 1]) * &p(&[-3, 0, 2]));
        assert!(a.pseudo_rem(&p(&[1, 1])).is_zero());
        assert!(!p(&[1, 0, 1]).pseudo_rem(&p(&[0, 2])).is_zero());
    }

    #[test]
    fn valuation_and_shifts() {
        let a = p(&[0, 0, 3, 1]);
        assert_eq!(a.valuation(), 2);
        assert_eq!(a.shr(2), p(&[3, 1]));
        assert_eq!(a.shr(2).shl(2), a);
    }
}
