//! Validation and classification of braidings: braid relation, involutive and Hecke
//! conditions, compatible pairs, skew-invertibility and R-traces, Baxterization.

mod baxter;
mod skew;

pub use baxter::{baxterize, BaxterReport, Baxterized, Flavor};
pub use skew::{check_trace_identities, r_trace, solve_skew_inverse, SkewInverse};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalars::RationalFunction as RF;
use crate::tensorspace::{place, Matrix, TensorOperator};

/// Outcome of a relation check between two operators on `V^{⊗3}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub holds: bool,
    /// First `(row, col)` where the two sides differ.
    pub witness: Option<(usize, usize)>,
}

impl RelationCheck {
    fn compare(lhs: &TensorOperator, rhs: &TensorOperator) -> Self {
        let witness = lhs.matrix().first_difference(rhs.matrix());
        RelationCheck {
            holds: witness.is_none(),
            witness,
        }
    }
}

fn require_two_site(op: &TensorOperator) -> Result<()> {
    if op.sites() != 2 {
        return Err(Error::Shape(format!("expected a two-site operator, got {} sites", op.sites())));
    }
    Ok(())
}

fn triple(a: &TensorOperator, b: &TensorOperator, c: &TensorOperator) -> Result<TensorOperator> {
    a.compose(b)?.compose(c)
}

/// `R12 R23 R12 = R23 R12 R23`, with the first differing entry on failure.
pub fn braid_relation(op: &TensorOperator) -> Result<RelationCheck> {
    require_two_site(op)?;
    let r12 = place(op, 1, 3)?;
    let r23 = place(op, 2, 3)?;
    Ok(RelationCheck::compare(
        &triple(&r12, &r23, &r12)?,
        &triple(&r23, &r12, &r23)?,
    ))
}

pub fn check_braid(op: &TensorOperator) -> bool {
    braid_relation(op).map(|c| c.holds).unwrap_or(false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryKind {
    Involutive,
    Hecke,
    BraidingOnly,
    NotABraiding,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryProfile {
    pub kind: SymmetryKind,
    pub hecke_parameter: Option<RF>,
    pub skew_invertible: bool,
    pub psi: Option<TensorOperator>,
    pub c_matrix: Option<TensorOperator>,
}

impl SymmetryProfile {
    /// Parameter `x` of the recursions: the Hecke parameter, or `1` for involutive symmetries.
    pub fn parameter(&self) -> Option<RF> {
        match self.kind {
            SymmetryKind::Involutive => Some(RF::one()),
            SymmetryKind::Hecke => self.hecke_parameter.clone(),
            _ => None,
        }
    }

    pub fn is_symmetry(&self) -> bool {
        matches!(self.kind, SymmetryKind::Involutive | SymmetryKind::Hecke)
    }
}

/// The `λ` with `R² − I = λR`, when `R` is not scalar and such a `λ` exists.
fn quadratic_coefficient(r: &TensorOperator) -> Option<RF> {
    let n = r.size();
    let sq = r.compose(r).ok()?;
    let lhs = sq.matrix().sub(&Matrix::identity(n)).ok()?;
    let (i, j, v) = r.matrix().entries().find(|(i, j, _)| i != j).or_else(|| {
        // diagonal R: use an entry not equal to the (0,0) entry
        let d0 = r.get(0, 0);
        r.matrix().entries().find(|(i, j, v)| i == j && **v != d0)
    })?;
    let lambda = lhs.get(i, j).checked_div(v).ok()?;
    if lhs == r.matrix().scale(&lambda) {
        Some(lambda)
    } else {
        None
    }
}

/// Root `x` of `t² − λt − 1` in `Q(q)`, normalised to positive leading coefficient and
/// nonnegative degree (so `λ = q − q⁻¹` gives `q`, not `−q⁻¹`).
fn hecke_root(lambda: &RF) -> Option<RF> {
    let disc = &(lambda * lambda) + &RF::from_int(4);
    let s = disc.sqrt()?;
    let half = RF::from_rational(&crate::scalars::Rational::new(1.into(), 2.into()));
    let a = &(lambda + &s) * &half;
    let b = &(lambda - &s) * &half;
    let good = |x: &RF| x.leading_sign() > 0 && x.degree().unwrap_or(-1) >= 0;
    let x = if good(&a) { a } else if good(&b) { b } else { a };
    if x.is_zero() || x.is_one() || (-&x).is_one() {
        None
    } else {
        Some(x)
    }
}

/// Classify a two-site operator. Skew-invertibility is attempted for every braiding.
pub fn classify(op: &TensorOperator) -> SymmetryProfile {
    let mut profile = SymmetryProfile {
        kind: SymmetryKind::NotABraiding,
        hecke_parameter: None,
        skew_invertible: false,
        psi: None,
        c_matrix: None,
    };
    if !check_braid(op) {
        return profile;
    }
    let sq = op.compose(op).expect("square");
    profile.kind = if sq == TensorOperator::identity(op.dim(), 2) {
        SymmetryKind::Involutive
    } else {
        match quadratic_coefficient(op).as_ref().and_then(hecke_root) {
            Some(x) => {
                profile.hecke_parameter = Some(x);
                SymmetryKind::Hecke
            }
            None => SymmetryKind::BraidingOnly,
        }
    };
    if let Ok(s) = solve_skew_inverse(op) {
        profile.skew_invertible = true;
        profile.psi = Some(s.psi);
        profile.c_matrix = Some(s.c);
    }
    profile
}

/// Both compatibility relations `R12 F23 F12 = F23 F12 R23` and `R23 F12 F23 = F12 F23 R12`.
pub fn compatibility(r: &TensorOperator, f: &TensorOperator) -> Result<[RelationCheck; 2]> {
    require_two_site(r)?;
    require_two_site(f)?;
    if r.dim() != f.dim() {
        return Err(Error::Shape(format!("dimensions {} and {}", r.dim(), f.dim())));
    }
    let (r12, r23) = (place(r, 1, 3)?, place(r, 2, 3)?);
    let (f12, f23) = (place(f, 1, 3)?, place(f, 2, 3)?);
    Ok([
        RelationCheck::compare(&triple(&r12, &f23, &f12)?, &triple(&f23, &f12, &r23)?),
        RelationCheck::compare(&triple(&r23, &f12, &f23)?, &triple(&f12, &f23, &r12)?),
    ])
}

pub fn check_compatible(r: &TensorOperator, f: &TensorOperator) -> Result<bool> {
    Ok(compatibility(r, f)?.iter().all(|c| c.holds))
}

/// Standard `N = 2` examples.
pub mod examples {
    use super::*;

    fn op(rows: Vec<Vec<RF>>) -> TensorOperator {
        TensorOperator::new(2, 2, Matrix::from_dense(rows).expect("square")).expect("4x4")
    }

    /// Involutive deformation of the flip.
    pub fn involutive() -> TensorOperator {
        let (o, z, q) = (RF::one(), RF::zero(), RF::q());
        op(vec![
            vec![o.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), q, z.clone()],
            vec![z.clone(), RF::q_pow(-1), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z, o],
        ])
    }

    /// Standard Hecke symmetry of `U_q(sl(2))` type.
    pub fn hecke() -> TensorOperator {
        let (o, z, q) = (RF::one(), RF::zero(), RF::q());
        op(vec![
            vec![q.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), RF::lambda(), o.clone(), z.clone()],
            vec![z.clone(), o, z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z, q],
        ])
    }

    pub fn flip(n: usize) -> TensorOperator {
        TensorOperator::flip(n)
    }

    /// Standard Hecke symmetry of `U_q(gl(N))` type:
    /// `R = Σ_{i} q E_ii⊗E_ii + Σ_{i≠j} E_ij⊗E_ji + λ Σ_{i<j} E_jj⊗E_ii` in the row
    /// convention `R[(i,j),(k,l)]`.
    pub fn hecke_gl(n: usize) -> TensorOperator {
        let mut m = Matrix::zeros(n * n, n * n);
        for i in 0..n {
            m.set(i * n + i, i * n + i, RF::q());
            for j in 0..n {
                if i != j {
                    m.set(i * n + j, j * n + i, RF::one());
                }
                if i < j {
                    m.set(i * n + j, i * n + j, RF::lambda());
                }
            }
        }
        TensorOperator::new(n, 2, m).expect("square")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn braid_relation_examples() {
        assert!(check_braid(&flip(2)));
        assert!(check_braid(&flip(3)));
        assert!(check_braid(&involutive()));
        assert!(check_braid(&hecke()));
        assert!(check_braid(&hecke_gl(3)));
    }

    #[test]
    fn perturbed_flip_fails_with_witness() {
        let mut m = flip(2).into_matrix();
        m.set(0, 1, RF::from_int(2));
        let p = TensorOperator::new(2, 2, m).unwrap();
        // independent oracle: compare the triple products entry by entry
        let r12 = place(&p, 1, 3).unwrap();
        let r23 = place(&p, 2, 3).unwrap();
        let l = r12.compose(&r23).unwrap().compose(&r12).unwrap();
        let r = r23.compose(&r12).unwrap().compose(&r23).unwrap();
        let mut first = None;
        'outer: for i in 0..8 {
            for j in 0..8 {
                if l.get(i, j) != r.get(i, j) {
                    first = Some((i, j));
                    break 'outer;
                }
            }
        }
        assert!(first.is_some());
        let check = braid_relation(&p).unwrap();
        assert!(!check.holds);
        assert_eq!(check.witness, first);
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&involutive()).kind, SymmetryKind::Involutive);
        assert_eq!(classify(&flip(2)).kind, SymmetryKind::Involutive);
        let h = classify(&hecke());
        assert_eq!(h.kind, SymmetryKind::Hecke);
        assert_eq!(h.hecke_parameter, Some(RF::q()));
        assert!(h.skew_invertible);
        let h3 = classify(&hecke_gl(3));
        assert_eq!(h3.kind, SymmetryKind::Hecke);
        assert_eq!(h3.hecke_parameter, Some(RF::q()));
    }

    #[test]
    fn rescaled_hecke_has_other_parameter() {
        // substitute q -> q^2: parameter q^2
        let m = hecke().into_matrix();
        let rows = m
            .to_dense()
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.compose(&RF::q_pow(2)).unwrap()).collect())
            .collect();
        let r = TensorOperator::new(2, 2, Matrix::from_dense(rows).unwrap()).unwrap();
        let p = classify(&r);
        assert_eq!(p.kind, SymmetryKind::Hecke);
        assert_eq!(p.hecke_parameter, Some(RF::q_pow(2)));
    }

    #[test]
    fn hecke_inverse_is_shift() {
        let r = hecke();
        let inv = r.inverse().unwrap();
        let shifted = r.sub(&TensorOperator::scalar_op(2, 2, &RF::lambda())).unwrap();
        assert_eq!(inv, shifted);
    }

    #[test]
    fn non_braiding_and_scalar() {
        let mut m = flip(2).into_matrix();
        m.set(1, 1, RF::one());
        let bad = TensorOperator::new(2, 2, m).unwrap();
        assert_eq!(classify(&bad).kind, SymmetryKind::NotABraiding);
        // a scalar q·I braids, is neither involutive nor Hecke
        let s = TensorOperator::scalar_op(2, 2, &RF::q());
        assert_eq!(classify(&s).kind, SymmetryKind::BraidingOnly);
    }

    #[test]
    fn compatible_pairs() {
        let (r1, r2, p) = (involutive(), hecke(), flip(2));
        assert!(check_compatible(&r2, &p).unwrap());
        assert!(check_compatible(&r2, &r2).unwrap());
        assert!(check_compatible(&r1, &r1).unwrap());
        assert!(check_compatible(&r1, &p).unwrap());
        assert!(check_compatible(&r2, &r1).unwrap());
        assert!(check_compatible(&r2, &flip(3)).is_err());
    }
}
