//! R-symmetrizer and R-skew-symmetrizer towers, Poincaré dimensions and evenness.

use rayon::prelude::*;
use serde::Serialize;

use crate::braidings::classify;
use crate::error::{Error, Result};
use crate::scalars::{q_number_at, Rational, RationalFunction as RF};
use crate::tensorspace::{place, ContravariantTensor, CovariantTensor, TensorOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TowerKind {
    Symmetric,
    Skew,
}

#[derive(Clone, Debug)]
pub struct ProjectorTower {
    pub r: TensorOperator,
    pub kind: TowerKind,
    /// Parameter of the recursion: the Hecke parameter, or `1` for involutive `R`.
    pub x: RF,
    /// `levels[k-1]` acts on `V^{⊗k}`.
    pub levels: Vec<TensorOperator>,
}

impl ProjectorTower {
    pub fn level(&self, k: usize) -> Option<&TensorOperator> {
        k.checked_sub(1).and_then(|i| self.levels.get(i))
    }
}

/// Reject a numerically specialised `q0` at which some `k_q` with `k ≤ bound` vanishes.
pub fn genericity_guard(q0: &Rational, bound: i64) -> Result<()> {
    for k in 1..=bound {
        let v = crate::scalars::q_number(k).specialize(q0)?;
        if v == Rational::from_integer(0.into()) {
            return Err(Error::NonGeneric(format!("{k}_q vanishes at q = {q0}")));
        }
    }
    Ok(())
}

/// Build `S^(k)` or `A^(k)` for `1 ≤ k ≤ k_max` by the recursion, verifying idempotency.
pub fn build_tower(r: &TensorOperator, kind: TowerKind, k_max: usize) -> Result<ProjectorTower> {
    if k_max == 0 {
        return Err(Error::Invalid("k_max must be at least 1".into()));
    }
    let profile = classify(r);
    let x = profile
        .parameter()
        .ok_or_else(|| Error::Invalid(format!("R must be involutive or Hecke, got {:?}", profile.kind)))?;
    build_tower_with(r, kind, k_max, &x)
}

/// The recursion with a given parameter `x` (no classification).
pub fn build_tower_with(r: &TensorOperator, kind: TowerKind, k_max: usize, x: &RF) -> Result<ProjectorTower> {
    let n = r.dim();
    let mut levels = vec![TensorOperator::identity(n, 1)];
    for k in 2..=k_max {
        let kx = q_number_at(k as i64, x)?;
        if kx.is_zero() {
            return Err(Error::NonGeneric(format!("{k}_x vanishes")));
        }
        let km1 = q_number_at(k as i64 - 1, x)?;
        let prev = levels[k - 2].tensor(&TensorOperator::identity(n, 1))?;
        let rk = place(r, k - 1, k)?;
        let id = TensorOperator::identity(n, k);
        let mid = match kind {
            TowerKind::Symmetric => id.scale(&x.pow(-(k as i64 - 1))?).add(&rk.scale(&km1))?,
            TowerKind::Skew => id.scale(&x.pow(k as i64 - 1)?).sub(&rk.scale(&km1))?,
        };
        let next = prev.compose(&mid)?.compose(&prev)?.scale(&kx.inv()?);
        if next.compose(&next)? != next {
            return Err(Error::NonGeneric(format!("level {k} of the tower is not idempotent")));
        }
        levels.push(next);
    }
    Ok(ProjectorTower {
        r: r.clone(),
        kind,
        x: x.clone(),
        levels,
    })
}

/// Ranks of the levels, i.e. dimensions of the homogeneous components.
pub fn poincare_dims(tower: &ProjectorTower) -> Vec<usize> {
    tower.levels.par_iter().map(|l| l.matrix().rank()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct EvennessCertificate {
    pub m: usize,
    pub u: CovariantTensor,
    pub v: ContravariantTensor,
    pub pairing: RF,
    /// Rank profile up to and including the first zero.
    pub dims: Vec<usize>,
}

/// Find `m` with `rank A^(m) = 1`, `rank A^(m+1) = 0`, and factor `A^(m) = u v`.
pub fn detect_even(tower: &ProjectorTower) -> Result<EvennessCertificate> {
    if tower.kind != TowerKind::Skew {
        return Err(Error::Invalid("evenness is read off the skew tower".into()));
    }
    let all = poincare_dims(tower);
    let cut = all.iter().position(|&d| d == 0).map(|i| i + 1).unwrap_or(all.len());
    let dims = all[..cut].to_vec();
    let m = match dims.iter().position(|&d| d == 0) {
        Some(z) if z >= 1 && dims[z - 1] == 1 => z,
        _ => return Err(Error::NotEven { profile: dims }),
    };
    let a = tower.level(m).expect("level m").matrix();
    let (_, row) = a
        .rows()
        .iter()
        .enumerate()
        .find(|(_, r)| !r.is_empty())
        .expect("rank one");
    let (j0, lead) = row[0].clone();
    let size = a.nrows();
    let mut v = vec![RF::zero(); size];
    for (j, val) in row {
        v[*j] = val.checked_div(&lead)?;
    }
    let u: Vec<RF> = (0..size).map(|i| a.get(i, j0)).collect();
    let dim = tower.r.dim();
    let mut cert = EvennessCertificate {
        m,
        u: CovariantTensor { dim, rank: m, entries: u },
        v: ContravariantTensor { dim, rank: m, entries: v },
        pairing: RF::one(),
        dims,
    };
    let p = cert.v.pair(&cert.u);
    if p.is_zero() {
        return Err(Error::Invalid("degenerate pairing of u and v".into()));
    }
    cert.u = cert.u.scale(&p.inv()?);
    cert.pairing = cert.v.pair(&cert.u);
    Ok(cert)
}

/// Default search depth for evenness.
pub fn default_k_max(n: usize) -> usize {
    n + 2
}

/// `(v ·_F u) = v^{j_1…j_m} C_{j_1}^{i_1} ⋯ C_{j_m}^{i_m} u_{i_1…i_m}`.
pub fn pairing_vfu(v: &ContravariantTensor, u: &CovariantTensor, c_f: &TensorOperator) -> Result<RF> {
    if v.rank != u.rank || v.dim != u.dim || c_f.sites() != 1 || c_f.dim() != v.dim {
        return Err(Error::Shape("pairing needs matching tensors and an N×N matrix".into()));
    }
    let mut cm = TensorOperator::identity(v.dim, 0);
    for _ in 0..v.rank {
        cm = cm.tensor(c_f)?;
    }
    let cu = cm.matrix().apply(&u.entries);
    let mut acc = RF::zero();
    for (a, b) in v.entries.iter().zip(&cu) {
        acc += &(a * b);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braidings::{examples::*, solve_skew_inverse};

    fn rf(s: &str) -> RF {
        s.parse().unwrap()
    }

    fn vec_of(s: &[&str]) -> Vec<RF> {
        s.iter().map(|x| rf(x)).collect()
    }

    #[test]
    fn second_level_closed_forms() {
        let h = hecke();
        let t = build_tower(&h, TowerKind::Skew, 2).unwrap();
        let expect = TensorOperator::scalar_op(2, 2, &RF::q())
            .sub(&h)
            .unwrap()
            .scale(&crate::scalars::q_number(2).inv().unwrap());
        assert_eq!(t.levels[1], expect);
        let r1 = involutive();
        let t1 = build_tower(&r1, TowerKind::Skew, 2).unwrap();
        let half = rf("1/2");
        assert_eq!(t1.levels[1], TensorOperator::identity(2, 2).sub(&r1).unwrap().scale(&half));
    }

    #[test]
    fn orthogonality_at_two() {
        for r in [involutive(), hecke(), flip(2)] {
            let a = build_tower(&r, TowerKind::Skew, 2).unwrap().levels[1].clone();
            let s = build_tower(&r, TowerKind::Symmetric, 2).unwrap().levels[1].clone();
            assert!(a.compose(&s).unwrap().is_zero());
            assert!(s.compose(&a).unwrap().is_zero());
            assert_eq!(a.add(&s).unwrap(), TensorOperator::identity(2, 2));
        }
    }

    #[test]
    fn dims() {
        let t = build_tower(&involutive(), TowerKind::Skew, 3).unwrap();
        assert_eq!(poincare_dims(&t), vec![2, 1, 0]);
        let t = build_tower(&flip(2), TowerKind::Skew, 3).unwrap();
        assert_eq!(poincare_dims(&t), vec![2, 1, 0]);
        let s = build_tower(&hecke(), TowerKind::Symmetric, 3).unwrap();
        assert_eq!(poincare_dims(&s), vec![2, 3, 4]);
        let g = build_tower(&hecke_gl(3), TowerKind::Skew, 4).unwrap();
        assert_eq!(poincare_dims(&g), vec![3, 3, 1, 0]);
    }

    #[test]
    fn image_of_a2_is_spanned_by_v() {
        let t = build_tower(&hecke(), TowerKind::Skew, 2).unwrap();
        let img = t.levels[1].matrix().image();
        assert_eq!(img.len(), 1);
        let w = &img[0];
        let v = vec_of(&["0", "1", "-q", "0"]);
        let s = w[1].clone();
        assert!(w.iter().zip(&v).all(|(a, b)| *a == b * &s));
    }

    #[test]
    fn evenness_certificates() {
        let c = detect_even(&build_tower(&involutive(), TowerKind::Skew, 4).unwrap()).unwrap();
        assert_eq!(c.m, 2);
        assert_eq!(c.v.entries, vec_of(&["0", "1", "-q", "0"]));
        assert_eq!(c.u.entries, vec_of(&["0", "1/2", "-1/(2*q)", "0"]));
        assert_eq!(c.dims, vec![2, 1, 0]);
        let c = detect_even(&build_tower(&hecke(), TowerKind::Skew, 4).unwrap()).unwrap();
        assert_eq!(c.v.entries, vec_of(&["0", "1", "-q", "0"]));
        assert_eq!(c.u.entries, vec_of(&["0", "1/(q^2+1)", "-q/(q^2+1)", "0"]));
        assert!(c.pairing.is_one());
        let c = detect_even(&build_tower(&flip(2), TowerKind::Skew, 4).unwrap()).unwrap();
        assert_eq!(c.v.entries, vec_of(&["0", "1", "-1", "0"]));
        assert_eq!(c.u.entries, vec_of(&["0", "1/2", "-1/2", "0"]));
    }

    #[test]
    fn outer_factorization_reproduces_top_level() {
        let t = build_tower(&hecke_gl(3), TowerKind::Skew, 5).unwrap();
        let c = detect_even(&t).unwrap();
        assert_eq!(c.m, 3);
        let a = t.level(3).unwrap().matrix();
        for i in 0..27 {
            for j in 0..27 {
                assert_eq!(a.get(i, j), &c.u.entries[i] * &c.v.entries[j]);
            }
        }
    }

    #[test]
    fn not_even_reports_profile() {
        // q·I braids but is neither involutive nor Hecke; force the recursion with x = 1
        let s = TensorOperator::identity(2, 2);
        let t = build_tower_with(&s, TowerKind::Skew, 3, &RF::one()).unwrap();
        match detect_even(&t) {
            Err(Error::NotEven { profile }) => assert_eq!(profile, vec![2, 0]),
            other => panic!("{other:?}"),
        }
        let t = build_tower(&flip(2), TowerKind::Skew, 2).unwrap();
        assert!(matches!(detect_even(&t), Err(Error::NotEven { .. })));
    }

    #[test]
    fn pairings() {
        let c = detect_even(&build_tower(&hecke(), TowerKind::Skew, 3).unwrap()).unwrap();
        let id = TensorOperator::identity(2, 1);
        assert!(pairing_vfu(&c.v, &c.u, &id).unwrap().is_one());
        let cr = solve_skew_inverse(&hecke()).unwrap().c;
        assert_eq!(pairing_vfu(&c.v, &c.u, &cr).unwrap(), RF::q_pow(-4));
        let zero = ContravariantTensor { dim: 2, rank: 2, entries: vec![RF::zero(); 4] };
        assert!(pairing_vfu(&zero, &c.u, &cr).unwrap().is_zero());
    }

    #[test]
    fn gauge_invariance() {
        let c = detect_even(&build_tower(&hecke(), TowerKind::Skew, 3).unwrap()).unwrap();
        let a = rf("q^2 + 3");
        let u2 = c.u.scale(&a);
        let v2 = c.v.scale(&a.inv().unwrap());
        let cr = solve_skew_inverse(&hecke()).unwrap().c;
        assert_eq!(pairing_vfu(&v2, &u2, &cr).unwrap(), pairing_vfu(&c.v, &c.u, &cr).unwrap());
    }

    #[test]
    fn guard_rejects_nongeneric() {
        assert!(genericity_guard(&Rational::new(7.into(), 5.into()), 6).is_ok());
        assert!(genericity_guard(&Rational::new((-1).into(), 1.into()), 6).is_err());
    }
}
