//! Exact scalars: rationals and the rational-function field `Q(q)`, plus q-numbers.

mod parse;
mod poly;
mod ratfunc;

pub(crate) use parse::Cursor;
pub use parse::parse_scalar;
pub use poly::Poly;
pub use ratfunc::{Rational, RationalFunction};

use crate::error::{Error, Result};

/// The q-number `k_q = (q^k - q^-k) / (q - q^-1)`, a Laurent polynomial for every integer `k`.
pub fn q_number(k: i64) -> RationalFunction {
    if k == 0 {
        return RationalFunction::zero();
    }
    if k < 0 {
        return -q_number(-k);
    }
    // q^(k-1) + q^(k-3) + ... + q^(1-k)
    let mut coeffs = vec![0i64; (2 * k - 1) as usize];
    for j in 0..k {
        coeffs[(2 * j) as usize] = 1;
    }
    RationalFunction::laurent(1 - k, &coeffs)
}

/// `k_x` for an arbitrary parameter `x` in place of `q`.
pub fn q_number_at(k: i64, x: &RationalFunction) -> Result<RationalFunction> {
    if k == 0 {
        return Ok(RationalFunction::zero());
    }
    if k < 0 {
        return Ok(-q_number_at(-k, x)?);
    }
    let mut acc = RationalFunction::zero();
    for j in 0..k {
        acc += &x.pow(k - 1 - 2 * j)?;
    }
    Ok(acc)
}

/// `1_q 2_q ... k_q`; `q_factorial(0) = 1`.
pub fn q_factorial(k: i64) -> Result<RationalFunction> {
    q_factorial_at(k, &RationalFunction::q())
}

pub fn q_factorial_at(k: i64, x: &RationalFunction) -> Result<RationalFunction> {
    if k < 0 {
        return Err(Error::Domain(format!("q-factorial of negative integer {k}")));
    }
    let mut acc = RationalFunction::one();
    for j in 1..=k {
        acc *= &q_number_at(j, x)?;
    }
    Ok(acc)
}

/// Ordinary binomial coefficient as a scalar.
pub fn binomial(n: u64, k: u64) -> RationalFunction {
    if k > n {
        return RationalFunction::zero();
    }
    let mut acc = num_bigint::BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    RationalFunction::from_bigint(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    #[test]
    fn q_number_values() {
        assert!(q_number(1).is_one());
        assert!(q_number(0).is_zero());
        assert_eq!(q_number(2), parse_scalar("q + q^-1").unwrap());
        assert_eq!(q_number(-3), -q_number(3));
        // definition as a quotient
        let def = (&RationalFunction::q_pow(4) - &RationalFunction::q_pow(-4)) / RationalFunction::lambda();
        assert_eq!(q_number(4), def);
    }

    #[test]
    fn q_factorials() {
        assert!(q_factorial(0).unwrap().is_one());
        assert_eq!(q_factorial(2).unwrap(), q_number(2));
        // expanded independently: (q + q^-1)(q^2 + 1 + q^-2) = q^3 + 2q + 2q^-1 + q^-3
        assert_eq!(q_factorial(3).unwrap(), RationalFunction::laurent(-3, &[1, 0, 2, 0, 2, 0, 1]));
        assert!(matches!(q_factorial(-1), Err(Error::Domain(_))));
    }

    #[test]
    fn q_number_at_parameter() {
        let q2 = RationalFunction::q_pow(2);
        assert_eq!(q_number_at(2, &q2).unwrap(), parse_scalar("q^2 + q^-2").unwrap());
        assert_eq!(q_number_at(3, &RationalFunction::q()).unwrap(), q_number(3));
    }

    fn small_rf() -> impl Strategy<Value = RationalFunction> {
        (-3i64..=3, prop::collection::vec(-3i64..=3, 1..4), prop::collection::vec(-2i64..=2, 0..3))
            .prop_map(|(k, num, den)| {
                let n = RationalFunction::laurent(0, &num);
                let mut d = RationalFunction::one();
                for (i, c) in den.iter().enumerate() {
                    d = &d * &(&q_number(i as i64 + 2) + &RationalFunction::from_int(*c));
                }
                let base = &n * &q_number(k);
                if d.is_zero() {
                    base
                } else {
                    &base / &d
                }
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn field_axioms(a in small_rf(), b in small_rf(), c in small_rf()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
        }

        #[test]
        fn canonical_equality(a in small_rf(), b in small_rf()) {
            let d = &a - &b;
            prop_assert_eq!(d.is_zero(), a == b);
            let round: RationalFunction = a.to_string().parse().unwrap();
            prop_assert_eq!(round, a);
        }

        #[test]
        fn q_number_specializes(k in -6i64..=6, n in 2i64..=9, d in 1i64..=7) {
            let q0 = Rational::new(n.into(), d.into());
            prop_assume!(q0 != Rational::one());
            let lhs = q_number(k).specialize(&q0).unwrap();
            let mut qk = Rational::one();
            for _ in 0..k.abs() { qk *= &q0; }
            if k < 0 { qk = qk.recip(); }
            let rhs = (&qk - qk.recip()) / (&q0 - q0.recip());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
