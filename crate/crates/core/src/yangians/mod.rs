//! Truncated generalized Yangians: the mode algebra of `L(u) = Σ_k L[k] u^{-k}`, current
//! determinants, elementary symmetric polynomials and power sums, and Bethe subalgebra checks.
//!
//! All series live modulo `u^{-(K+1)}`; every identity is claimed up to the stated order only.
//! Mode relations are the coefficients of the cleared current relation that involve modes up
//! to `K` alone. A zero residual modulo them is a proof in the full Yangian; a nonzero residual
//! may be an artifact of the truncation.

use rayon::prelude::*;
use serde::Serialize;

use crate::braidings::{baxterize, check_compatible, Flavor};
use crate::error::{Error, Result};
use crate::ncalg::{
    dedup_relations, f_copies, same_span, Alphabet, IdealOracle, NCMatrix, NCPolynomial, OracleConfig, Presentation,
    Source,
};
use crate::scalars::{binomial, RationalFunction as RF};
use crate::symmetrizers::{EvennessCertificate, ProjectorTower, TowerKind};
use crate::tensorspace::{place, TensorOperator};


/// Generators `l^i_j[k]`, `0 ≤ k ≤ K`; with `re_type` the zero modes are the scalars `δ^i_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeAlphabet {
    pub n: usize,
    pub modes: usize,
    pub re_type: bool,
    alphabet: Alphabet,
}

impl ModeAlphabet {
    pub fn new(n: usize, modes: usize, re_type: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        let base = Alphabet::matrix_entries(n);
        let first = re_type as usize;
        let names = (first..=modes)
            .flat_map(|k| base.names().iter().map(move |s| format!("{s}_{k}")))
            .collect();
        Ok(ModeAlphabet {
            n,
            modes,
            re_type,
            alphabet: Alphabet::new(names)?,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn first_mode(&self) -> usize {
        self.re_type as usize
    }

    /// Index of `l^i_j[k]`, or `None` for a scalar zero mode.
    pub fn generator(&self, i: usize, j: usize, k: usize) -> Option<u32> {
        if k < self.first_mode() || k > self.modes || i >= self.n || j >= self.n {
            return None;
        }
        Some(((k - self.first_mode()) * self.n * self.n + i * self.n + j) as u32)
    }

    /// Mode weight of each generator.
    pub fn weights(&self) -> Vec<u32> {
        (self.first_mode()..=self.modes)
            .flat_map(|k| std::iter::repeat_n(k as u32, self.n * self.n))
            .collect()
    }

    /// `L[k]`; the identity for `k = 0` in RE type.
    pub fn mode_matrix(&self, k: usize) -> Result<NCMatrix> {
        if k > self.modes {
            return Err(Error::Invalid(format!("mode {k} exceeds the truncation {}", self.modes)));
        }
        if k == 0 && self.re_type {
            return Ok(NCMatrix::identity(self.n, 1));
        }
        let offset = ((k - self.first_mode()) * self.n * self.n) as u32;
        Ok(NCMatrix::generating(self.n, offset))
    }

    /// `L(u)` truncated at `order ≤ K`.
    pub fn generating_series(&self, flavor: Flavor, order: usize) -> Result<TruncatedSeries> {
        if order > self.modes {
            return Err(Error::Invalid(format!("order {order} exceeds the truncation {}", self.modes)));
        }
        Ok(TruncatedSeries {
            flavor,
            coefficients: (0..=order).map(|k| self.mode_matrix(k)).collect::<Result<_>>()?,
        })
    }

    /// Oracle with the weighted box used for the inhomogeneous RE-type relations.
    pub fn oracle(&self, pres: Presentation) -> IdealOracle {
        let config = OracleConfig {
            box_weight: Some(2 * self.modes as u32),
            ..OracleConfig::default()
        };
        IdealOracle::new(pres, config)
    }
}

/// Series `Σ_{k ≤ order} X[k] u^{-k}` with NC-matrix coefficients. Zero-site coefficients are
/// scalar-valued series.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    pub flavor: Flavor,
    pub coefficients: Vec<NCMatrix>,
}

impl TruncatedSeries {
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn constant(m: NCMatrix, flavor: Flavor, order: usize) -> Self {
        let zero = NCMatrix::zeros(m.dim(), m.sites());
        let mut coefficients = vec![zero; order + 1];
        coefficients[0] = m;
        TruncatedSeries { flavor, coefficients }
    }

    pub fn coefficient(&self, k: usize) -> Option<&NCMatrix> {
        self.coefficients.get(k)
    }

    /// Coefficient of a scalar-valued series.
    pub fn element(&self, k: usize) -> Option<&NCPolynomial> {
        self.coefficients.get(k).and_then(|m| m.as_element())
    }

    fn check_same(&self, other: &TruncatedSeries) -> Result<()> {
        if self.flavor != other.flavor || self.order() != other.order() {
            return Err(Error::Invalid("series differ in flavor or truncation order".into()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_same(other)?;
        let coefficients = (0..=self.order())
            .into_par_iter()
            .map(|n| {
                let mut acc = NCMatrix::zeros(self.coefficients[0].dim(), self.coefficients[0].sites());
                for a in 0..=n {
                    acc = acc.add(&self.coefficients[a].mul(&other.coefficients[n - a])?)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeries {
            flavor: self.flavor,
            coefficients,
        })
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_same(other)?;
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        Ok(TruncatedSeries {
            flavor: self.flavor,
            coefficients,
        })
    }

    /// Apply a linear, `u`-independent map to every coefficient.
    pub fn map(&self, f: impl Fn(&NCMatrix) -> Result<NCMatrix> + Sync + Send) -> Result<TruncatedSeries> {
        Ok(TruncatedSeries {
            flavor: self.flavor,
            coefficients: self.coefficients.par_iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// `X(u - c)` (rational, geometric expansion in `u^{-1}`) or `X(x^{-2c} u)` (trigonometric).
    pub fn shift(&self, c: i64, x: &RF) -> Result<TruncatedSeries> {
        let mut coefficients = Vec::with_capacity(self.coefficients.len());
        match self.flavor {
            Flavor::Rational => {
                let cr = RF::from_int(c);
                for n in 0..=self.order() {
                    if n == 0 {
                        coefficients.push(self.coefficients[0].clone());
                        continue;
                    }
                    // (u - c)^{-k} = Σ_j C(k+j-1, j) c^j u^{-k-j}
                    let mut acc = NCMatrix::zeros(self.coefficients[0].dim(), self.coefficients[0].sites());
                    for k in 1..=n {
                        let coef = &binomial((n - 1) as u64, (k - 1) as u64) * &cr.pow((n - k) as i64)?;
                        if !coef.is_zero() {
                            acc = acc.add(&self.coefficients[k].scale(&coef))?;
                        }
                    }
                    coefficients.push(acc);
                }
            }
            Flavor::Trigonometric => {
                for (k, m) in self.coefficients.iter().enumerate() {
                    coefficients.push(m.scale(&x.pow(2 * c * k as i64)?));
                }
            }
        }
        Ok(TruncatedSeries {
            flavor: self.flavor,
            coefficients,
        })
    }
}

/// `L̄_k(u)` on `p` sites: the F-copy of every coefficient.
pub fn copy_series(l: &TruncatedSeries, f: &TensorOperator, k: usize, p: usize) -> Result<TruncatedSeries> {
    l.map(|m| Ok(f_copies(m, f, p)?.swap_remove(k - 1)))
}

/// `L̄_1(u - s_1) ⋯ L̄_p(u - s_p)` with additive (rational) or multiplicative shifts `s_k`.
pub fn shifted_product(
    l: &TruncatedSeries,
    f: &TensorOperator,
    p: usize,
    shifts: &[i64],
    x: &RF,
) -> Result<TruncatedSeries> {
    let mut acc: Option<TruncatedSeries> = None;
    for k in 1..=p {
        let c = copy_series(&l.shift(shifts[k - 1], x)?, f, k, p)?;
        acc = Some(match acc {
            None => c,
            Some(a) => a.mul(&c)?,
        });
    }
    acc.ok_or_else(|| Error::Invalid("empty product".into()))
}

/// Mode relations of `R(u,v) L̄_1(u) L̄_2(v) = L̄_1(v) L̄_2(u) R(u,v)` after clearing `u - v`.
pub fn yangian_relations(
    r: &TensorOperator,
    f: &TensorOperator,
    flavor: Flavor,
    modes: &ModeAlphabet,
) -> Result<Presentation> {
    if r.dim() != modes.n {
        return Err(Error::Shape("mode alphabet and R differ in dimension".into()));
    }
    if !check_compatible(r, f)? {
        return Err(Error::Incompatible("R and F fail the compatibility relations".into()));
    }
    let bax = baxterize(r, flavor)?;
    let (mu, mv, m1) = bax.cleared();
    let ops = [mu, mv, m1]
        .iter()
        .map(|m| TensorOperator::from_matrix(modes.n, (*m).clone()))
        .collect::<Result<Vec<_>>>()?;
    // Work over two extra modes and keep the relations in which they cancel.
    let ext = ModeAlphabet::new(modes.n, modes.modes + 2, modes.re_type)?;
    let limit = modes.alphabet().len() as u32;
    let k = modes.modes as i64;
    let l1: Vec<NCMatrix> = (0..=ext.modes)
        .map(|a| ext.mode_matrix(a)?.embed(1, 2))
        .collect::<Result<_>>()?;
    let l2: Vec<NCMatrix> = (0..=ext.modes)
        .map(|a| Ok(f_copies(&ext.mode_matrix(a)?, f, 2)?.swap_remove(1)))
        .collect::<Result<_>>()?;
    let pairs: Vec<(i64, i64)> = (-k - 1..=1).flat_map(|p| (-k - 1..=1).map(move |s| (p, s))).collect();
    let rels = pairs
        .par_iter()
        .map(|&(p, s)| {
            // coefficient of u^p v^s: (matrix slot, mode of L̄1, mode of L̄2, R on the left)
            let terms = [
                (0, 1 - p, -s, true),
                (1, -p, 1 - s, true),
                (2, -p, -s, true),
                (0, -s, 1 - p, false),
                (1, 1 - s, -p, false),
                (2, -s, -p, false),
            ];
            let mut acc = NCMatrix::zeros(modes.n, 2);
            for (m, a, b, left) in terms {
                if a < 0 || b < 0 || ops[m].is_zero() {
                    continue;
                }
                let prod = l1[a as usize].mul(&l2[b as usize])?;
                acc = if left {
                    acc.add(&prod.op_mul(&ops[m])?)?
                } else {
                    acc.sub(&prod.mul_op(&ops[m])?)?
                };
            }
            Ok(acc
                .entries()
                .map(|(_, _, e)| e.clone())
                .filter(|e| !e.is_zero() && e.max_generator().is_none_or(|g| g < limit))
                .collect())
        })
        .collect::<Result<Vec<Vec<NCPolynomial>>>>()?;
    Ok(Presentation {
        alphabet: modes.alphabet().clone(),
        relations: dedup_relations(rels.into_iter().flatten()),
        source: Source::Yangian,
        weights: Some(modes.weights()),
        matrix_dim: None,
    })
}

/// Shift of the `k`-th copy (1-based) for the determinant ordering `L̄_1(u) L̄_2(u-1) ⋯`.
fn det_shifts(p: usize) -> Vec<i64> {
    (0..p as i64).collect()
}

fn check_flavor(tower: &ProjectorTower, flavor: Flavor) -> Result<()> {
    if flavor == Flavor::Rational && !tower.x.is_one() {
        return Err(Error::Invalid("rational currents need an involutive symmetry".into()));
    }
    Ok(())
}

fn scalar_series(x: &TruncatedSeries, f: impl Fn(&NCMatrix) -> Result<NCPolynomial> + Sync + Send) -> Result<TruncatedSeries> {
    x.map(|m| {
        let e = f(m)?;
        let mut out = NCMatrix::zeros(m.dim(), 0);
        out.set(0, 0, e);
        Ok(out)
    })
}

/// `⟨v| L̄_1(u) L̄_2(u-1) ⋯ L̄_m(u-m+1) |u⟩` (rational) or with `L̄_k(x^{-2(k-1)} u)`.
pub fn yangian_det(
    cert: &EvennessCertificate,
    f: &TensorOperator,
    l: &TruncatedSeries,
    x: &RF,
) -> Result<TruncatedSeries> {
    let prod = shifted_product(l, f, cert.m, &det_shifts(cert.m), x)?;
    scalar_series(&prod, |m| crate::qdet::sandwich(&cert.v, m, &cert.u))
}

fn full_trace(m: &NCMatrix, c: &TensorOperator) -> Result<NCPolynomial> {
    let sites: Vec<usize> = (1..=m.sites()).collect();
    Ok(m.partial_trace(&sites, Some(c))?.as_element().cloned().unwrap_or_default())
}

/// `e_k(u) = Tr_{C(1..k)} A^(k) L̄_1(u) L̄_2(u-1) ⋯ L̄_k(u-k+1)`, `e_0(u) = 1`.
pub fn current_elementary(
    tower: &ProjectorTower,
    c: &TensorOperator,
    f: &TensorOperator,
    l: &TruncatedSeries,
    k: usize,
) -> Result<TruncatedSeries> {
    if tower.kind != TowerKind::Skew {
        return Err(Error::Invalid("elementary symmetric currents use the skew tower".into()));
    }
    check_flavor(tower, l.flavor)?;
    if k == 0 {
        let mut one = NCMatrix::zeros(f.dim(), 0);
        one.set(0, 0, NCPolynomial::one());
        return Ok(TruncatedSeries::constant(one, l.flavor, l.order()));
    }
    let a = tower
        .level(k)
        .ok_or_else(|| Error::Invalid(format!("tower has no level {k}")))?;
    let prod = shifted_product(l, f, k, &det_shifts(k), &tower.x)?;
    scalar_series(&prod, |m| full_trace(&m.op_mul(a)?, c))
}

/// `p_k(u) = Tr_{C(1..k)} L̄_1(u-k+1) ⋯ L̄_k(u) R_{k-1,k} ⋯ R_{12}`.
pub fn current_power_sum(
    r: &TensorOperator,
    c: &TensorOperator,
    f: &TensorOperator,
    l: &TruncatedSeries,
    k: usize,
    x: &RF,
) -> Result<TruncatedSeries> {
    if k == 0 {
        return Err(Error::Invalid("power sums start at k = 1".into()));
    }
    let shifts: Vec<i64> = (1..=k).map(|j| (k - j) as i64).collect();
    let prod = shifted_product(l, f, k, &shifts, x)?;
    let tail = (1..k).rev().map(|j| place(r, j, k)).collect::<Result<Vec<_>>>()?;
    scalar_series(&prod, |m| {
        let mut m = m.clone();
        for t in &tail {
            m = m.mul_op(t)?;
        }
        full_trace(&m, c)
    })
}

/// The RE-type simplification `p_k(u) = Tr_R L(u-k+1) ⋯ L(u)` with ordinary matrix products.
pub fn current_power_sum_re(c_r: &TensorOperator, l: &TruncatedSeries, k: usize, x: &RF) -> Result<TruncatedSeries> {
    if k == 0 {
        return Err(Error::Invalid("power sums start at k = 1".into()));
    }
    let mut acc = l.shift((k - 1) as i64, x)?;
    for j in 2..=k {
        acc = acc.mul(&l.shift((k - j) as i64, x)?)?;
    }
    scalar_series(&acc, |m| full_trace(m, c_r))
}

/// Order pairs `(r, s)` examined by a commutativity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairPolicy {
    /// `r + s ≤ K`.
    TotalOrder,
    /// `r ≤ K` and `s ≤ K`.
    EachOrder,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BetheVerdict {
    pub holds: bool,
    pub pairs_checked: usize,
    /// First failing pair of orders with the residual of the commutator.
    pub witness: Option<(usize, usize, NCPolynomial)>,
}

/// Residual of `[a_r, b_s]` modulo the mode relations for every pair of orders admitted by `policy`,
/// in lexicographic order of `(r, s)`.
pub fn bethe_pairs(
    oracle: &IdealOracle,
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    policy: PairPolicy,
) -> Result<Vec<(usize, usize, NCPolynomial)>> {
    a.check_same(b)?;
    let k = a.order();
    let pairs: Vec<(usize, usize)> = (0..=k)
        .flat_map(|r| (0..=k).map(move |s| (r, s)))
        .filter(|(r, s)| policy == PairPolicy::EachOrder || r + s <= k)
        .collect();
    pairs
        .par_iter()
        .map(|&(r, s)| {
            let (x, y) = match (a.element(r), b.element(s)) {
                (Some(x), Some(y)) => (x, y),
                _ => return Err(Error::Shape("Bethe checks need scalar-valued series".into())),
            };
            Ok((r, s, oracle.reduce(&x.commutator(y))?.residual))
        })
        .collect()
}

/// Commutators of the coefficients of two scalar-valued series, reduced modulo the mode relations.
pub fn bethe_commutativity(
    oracle: &IdealOracle,
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    policy: PairPolicy,
) -> Result<BetheVerdict> {
    let results = bethe_pairs(oracle, a, b, policy)?;
    let pairs_checked = results.len();
    let witness = results.into_iter().find(|(_, _, res)| !res.is_zero());
    Ok(BetheVerdict {
        holds: witness.is_none(),
        pairs_checked,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioVerdict {
    pub holds: bool,
    /// `(order, residual)` of entries that did not reduce.
    pub failures: Vec<(usize, NCPolynomial)>,
}

/// `A^(2) L̄_1(u) L̄_2(u-1) S^(2) = 0` (rational) or `A^(2) L̄_1(u) L̄_2(x^{-2} u) S^(2) = 0`
/// (trigonometric), order by order modulo the mode relations.
pub fn specialized_ratio_check(
    oracle: &IdealOracle,
    skew: &ProjectorTower,
    sym: &ProjectorTower,
    f: &TensorOperator,
    l: &TruncatedSeries,
) -> Result<RatioVerdict> {
    check_flavor(skew, l.flavor)?;
    let a = skew.level(2).ok_or_else(|| Error::Invalid("skew tower needs level 2".into()))?;
    let s = sym.level(2).ok_or_else(|| Error::Invalid("symmetric tower needs level 2".into()))?;
    let prod = shifted_product(l, f, 2, &[0, 1], &skew.x)?;
    let sandwiched = prod.map(|m| m.op_mul(a)?.mul_op(s))?;
    let mut items = Vec::new();
    for (n, m) in sandwiched.coefficients.iter().enumerate() {
        for (_, _, e) in m.entries() {
            if !e.is_zero() {
                items.push((n, e.clone()));
            }
        }
    }
    let residuals = items
        .par_iter()
        .map(|(n, e)| Ok((*n, oracle.reduce(e)?.residual)))
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<_> = residuals.into_iter().filter(|(_, r)| !r.is_zero()).collect();
    Ok(RatioVerdict {
        holds: failures.is_empty(),
        failures,
    })
}

/// Set every mode `k ≥ 1` to zero and `L[0] = L`; the surviving relations should span the
/// constant QMA relations.
pub fn constant_specialization(pres: &Presentation, modes: &ModeAlphabet) -> Result<Vec<NCPolynomial>> {
    if modes.re_type {
        return Err(Error::Unsupported("RE-type zero modes are scalars".into()));
    }
    let n2 = modes.n * modes.n;
    let images: Vec<NCPolynomial> = (0..modes.alphabet().len())
        .map(|g| {
            if g < n2 {
                NCPolynomial::generator(g as u32)
            } else {
                NCPolynomial::zero()
            }
        })
        .collect();
    Ok(dedup_relations(pres.relations.iter().map(|r| r.substitute(&images))))
}

/// Whether the constant specialization spans the given QMA relations.
pub fn specializes_to(pres: &Presentation, modes: &ModeAlphabet, qma: &[NCPolynomial]) -> Result<bool> {
    Ok(same_span(&constant_specialization(pres, modes)?, qma))
}
