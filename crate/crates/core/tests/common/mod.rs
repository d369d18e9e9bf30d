//! Strategies and property checks shared by the standalone property suite and the acceptance run.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use qmalg_core::braidings::examples::{flip, hecke_gl, involutive};
use qmalg_core::qdet::det_from;
use qmalg_core::scalars::{q_number, RationalFunction as RF};
use qmalg_core::symmetrizers::{build_tower, detect_even, pairing_vfu, TowerKind};
use qmalg_core::tensorspace::{Matrix, TensorOperator};

/// Cases per property; the acceptance bar is 100.
pub const PROPERTY_CASES: u32 = 128;

/// Small elements of `Q(q)`: Laurent polynomials times q-numbers over shifted q-numbers.
pub fn small_rf() -> impl Strategy<Value = RF> {
    (-3i64..=3, prop::collection::vec(-3i64..=3, 1..4), prop::collection::vec(-2i64..=2, 0..3)).prop_map(
        |(k, num, den)| {
            let n = RF::laurent(-1, &num);
            let mut d = RF::one();
            for (i, c) in den.iter().enumerate() {
                d = &d * &(&q_number(i as i64 + 2) + &RF::from_int(*c));
            }
            let base = &n * &q_number(k);
            if d.is_zero() {
                base
            } else {
                &base / &d
            }
        },
    )
}

pub fn nonzero_rf() -> impl Strategy<Value = RF> {
    small_rf().prop_filter("nonzero", |x| !x.is_zero())
}

/// `g ⊗ g` for an upper unitriangular `g = [[1, t], [0, 1]]` times a diagonal `diag(1, s)`.
fn gauge(t: &RF, s: &RF) -> TensorOperator {
    let g = Matrix::from_dense(vec![vec![RF::one(), t.clone()], vec![RF::zero(), s.clone()]]).expect("2x2");
    let g = TensorOperator::new(2, 1, g).expect("one site");
    g.tensor(&g).expect("same dim")
}

/// A symmetry conjugated by `G ⊗ G`, which preserves the braid relation and the Hecke condition.
#[derive(Clone, Debug)]
pub struct Symmetry {
    pub base: &'static str,
    pub r: TensorOperator,
}

pub fn symmetry() -> impl Strategy<Value = Symmetry> {
    (0usize..3, -2i64..=2, 1i64..=3).prop_map(|(which, t, s)| {
        let (base, r) = match which {
            0 => ("involutive", involutive()),
            1 => ("hecke", hecke_gl(2)),
            _ => ("flip", flip(2)),
        };
        let g = gauge(&RF::from_int(t), &RF::q_pow(s - 2));
        let r = g.compose(&r).unwrap().compose(&g.inverse().unwrap()).unwrap();
        Symmetry { base, r }
    })
}

/// `A^(k)`, `S^(k)` idempotent for `k ≤ 3`; at `k = 2` orthogonal with `A + S = I`.
pub fn projectors_hold(s: &Symmetry) -> Result<(), TestCaseError> {
    let skew = build_tower(&s.r, TowerKind::Skew, 3).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let sym = build_tower(&s.r, TowerKind::Symmetric, 3).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for t in [&skew, &sym] {
        for l in &t.levels {
            prop_assert_eq!(&l.compose(l).unwrap(), l, "{} not idempotent", s.base);
        }
    }
    let (a, sy) = (skew.level(2).unwrap(), sym.level(2).unwrap());
    prop_assert!(a.compose(sy).unwrap().is_zero());
    prop_assert!(sy.compose(a).unwrap().is_zero());
    prop_assert_eq!(a.add(sy).unwrap(), TensorOperator::identity(2, 2));
    Ok(())
}

/// Rescaling `(u, v) → (c u, c⁻¹ v)` changes neither the determinant, the `F`-pairing, nor `A^(m)`.
pub fn gauge_invariance_holds(s: &Symmetry, c: &RF) -> Result<(), TestCaseError> {
    let tower = build_tower(&s.r, TowerKind::Skew, 3).unwrap();
    let cert = detect_even(&tower).unwrap();
    let ci = c.inv().unwrap();
    let (u2, v2) = (cert.u.scale(c), cert.v.scale(&ci));
    for f in [flip(2), s.r.clone()] {
        prop_assert_eq!(det_from(&cert.u, &cert.v, &f).unwrap(), det_from(&u2, &v2, &f).unwrap());
    }
    let cf = TensorOperator::new(2, 1, Matrix::diagonal(&[RF::q(), RF::q_pow(-3)])).unwrap();
    prop_assert_eq!(pairing_vfu(&cert.v, &cert.u, &cf).unwrap(), pairing_vfu(&v2, &u2, &cf).unwrap());
    let a = tower.level(cert.m).unwrap();
    for (i, ui) in u2.entries.iter().enumerate() {
        for (j, vj) in v2.entries.iter().enumerate() {
            prop_assert_eq!(&a.get(i, j), &(ui * vj));
        }
    }
    Ok(())
}

pub fn field_axioms_hold(a: &RF, b: &RF, c: &RF) -> Result<(), TestCaseError> {
    prop_assert_eq!(&(a + b) + c, a + &(b + c));
    prop_assert_eq!(&(a * b) * c, a * &(b * c));
    prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    prop_assert_eq!(a + b, b + a);
    prop_assert_eq!(a * b, b * a);
    prop_assert_eq!(a + &RF::zero(), a.clone());
    prop_assert_eq!(a * &RF::one(), a.clone());
    prop_assert!((a - a).is_zero());
    if !b.is_zero() {
        prop_assert_eq!(&(a / b) * b, a.clone());
        prop_assert!((b * &b.inv().unwrap()).is_one());
    }
    Ok(())
}

/// Matrices up to 4×5 with entries in `Q(q)`, some rows forced dependent.
pub fn matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| {
        (prop::collection::vec(prop::collection::vec(small_rf(), c), r), any::<bool>()).prop_map(|(mut rows, dup)| {
            if dup && rows.len() > 1 {
                // last row = first + q · second
                let extra: Vec<RF> = rows[0].iter().zip(&rows[1]).map(|(x, y)| x + &(&RF::q() * y)).collect();
                *rows.last_mut().unwrap() = extra;
            }
            Matrix::from_dense(rows).unwrap()
        })
    })
}

pub fn rank_nullity_holds(m: &Matrix) -> Result<(), TestCaseError> {
    let kernel = m.kernel();
    prop_assert_eq!(m.rank() + kernel.len(), m.ncols());
    prop_assert_eq!(m.rank(), m.transpose().rank());
    for k in &kernel {
        prop_assert!(m.apply(k).iter().all(|x| x.is_zero()));
    }
    let basis = Matrix::from_dense(kernel.clone());
    if let Ok(b) = basis {
        prop_assert_eq!(b.rank(), kernel.len());
    }
    Ok(())
}
