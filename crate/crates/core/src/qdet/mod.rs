//! Quantum determinants, elementary symmetric polynomials and power sums, the M-matrix
//! centrality criterion, characteristic polynomials and Cayley–Hamilton identities.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ncalg::{
    copies_product, coproduct, f_copies, tensor_elements, tensor_square, Alphabet, CentralityCheck, IdealOracle,
    NCMatrix, NCPolynomial, Presentation, Source, Word,
};
use crate::scalars::{binomial, q_factorial_at, RationalFunction as RF};
use crate::symmetrizers::{pairing_vfu, EvennessCertificate, ProjectorTower, TowerKind};
use crate::tensorspace::{partial_trace, place, ContravariantTensor, CovariantTensor, Matrix, TensorOperator};

#[cfg(test)]
mod tests;

/// A candidate expression for the determinant and whether it was proven equal to the canonical one.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedForm {
    pub form: NCPolynomial,
    pub proven: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeterminantReport {
    pub canonical: NCPolynomial,
    pub reduced_forms: Vec<ReducedForm>,
    pub central: bool,
    pub witness: Option<(u32, NCPolynomial)>,
    pub m_matrix: TensorOperator,
    pub m_scalar: bool,
    /// `(v ·_C u)` for the trace weight supplied, if any.
    pub factor_vfu: Option<RF>,
}

impl DeterminantReport {
    pub fn to_json(&self, alphabet: &Alphabet) -> serde_json::Value {
        serde_json::json!({
            "canonical": self.canonical.display(alphabet),
            "reduced_forms": self.reduced_forms.iter().map(|r| serde_json::json!({
                "form": r.form.display(alphabet),
                "proven": r.proven,
            })).collect::<Vec<_>>(),
            "central": self.central,
            "witness": self.witness.as_ref().map(|(g, c)| serde_json::json!({
                "generator": alphabet.name(*g),
                "commutator_residual": c.display(alphabet),
            })),
            "m_matrix": operator_strings(&self.m_matrix),
            "m_scalar": self.m_scalar,
            "factor_vfu": self.factor_vfu.as_ref().map(|f| f.to_string()),
        })
    }
}

/// Rows of an operator as display strings.
pub fn operator_strings(op: &TensorOperator) -> Vec<Vec<String>> {
    op.matrix()
        .to_dense()
        .iter()
        .map(|row| row.iter().map(|x| x.to_string()).collect())
        .collect()
}

/// `⟨v| X |u⟩ = Σ v^I X_I^J u_J` for an `m`-site matrix `X`.
pub fn sandwich(v: &ContravariantTensor, x: &NCMatrix, u: &CovariantTensor) -> Result<NCPolynomial> {
    if x.size() != v.entries.len() || x.size() != u.entries.len() {
        return Err(Error::Shape("tensor ranks do not match the matrix".into()));
    }
    let mut acc = NCPolynomial::zero();
    for (i, j, e) in x.entries() {
        let c = &v.entries[i] * &u.entries[j];
        if !c.is_zero() && !e.is_zero() {
            acc.add_assign(&e.scale(&c));
        }
    }
    Ok(acc)
}

/// `⟨v| L̄_1 ⋯ L̄_m |u⟩` for arbitrary `u`, `v`.
pub fn det_from(u: &CovariantTensor, v: &ContravariantTensor, f: &TensorOperator) -> Result<NCPolynomial> {
    let l = NCMatrix::generating(f.dim(), 0);
    let prod = copies_product(&f_copies(&l, f, u.rank)?)?;
    sandwich(v, &prod, u)
}

/// The canonical quantum determinant of `L(R, F)`.
pub fn canonical_det(cert: &EvennessCertificate, f: &TensorOperator) -> Result<NCPolynomial> {
    det_from(&cert.u, &cert.v, f)
}

/// `M_i^j = u_{i K} v^{K j}`.
pub fn m_matrix(cert: &EvennessCertificate) -> TensorOperator {
    let n = cert.u.dim;
    let inner = n.pow(cert.m.saturating_sub(1) as u32);
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = RF::zero();
            for k in 0..inner {
                acc += &(&cert.u.entries[i * inner + k] * &cert.v.entries[k * n + j]);
            }
            m.set(i, j, acc);
        }
    }
    TensorOperator::from_matrix(n, m).expect("square")
}

/// Canonical determinant with centrality verdict, M-matrix, and verification of candidate forms.
pub fn quantum_det(
    oracle: &IdealOracle,
    cert: &EvennessCertificate,
    f: &TensorOperator,
    candidates: &[NCPolynomial],
    trace_weight: Option<&TensorOperator>,
) -> Result<DeterminantReport> {
    let canonical = canonical_det(cert, f)?;
    let reduced_forms = candidates
        .par_iter()
        .map(|c| {
            Ok(ReducedForm {
                form: c.clone(),
                proven: oracle.equal_mod(&canonical, c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let CentralityCheck { central, witness } = oracle.is_central(&canonical)?;
    let m = m_matrix(cert);
    let m_scalar = m.as_scalar().is_some();
    let factor_vfu = trace_weight.map(|c| pairing_vfu(&cert.v, &cert.u, c)).transpose()?;
    Ok(DeterminantReport {
        canonical,
        reduced_forms,
        central,
        witness,
        m_matrix: m,
        m_scalar,
        factor_vfu,
    })
}

/// `Tr_{C(1..p)} X` over every site, weighted by `C`.
fn full_trace(x: &NCMatrix, c: &TensorOperator) -> Result<NCPolynomial> {
    let sites: Vec<usize> = (1..=x.sites()).collect();
    Ok(x.partial_trace(&sites, Some(c))?.as_element().cloned().unwrap_or_default())
}

fn check_tower(tower: &ProjectorTower) -> Result<()> {
    if tower.kind != TowerKind::Skew {
        return Err(Error::Invalid("elementary symmetric polynomials use the skew tower".into()));
    }
    Ok(())
}

/// `e_k = Tr_{C(1..k)} A^(k) L̄_1 ⋯ L̄_k`, with `e_0 = 1`. Pass `C_F` for the default
/// convention or `C_R` for the R-trace variant.
pub fn elementary_symmetric(tower: &ProjectorTower, f: &TensorOperator, c: &TensorOperator, k: usize) -> Result<NCPolynomial> {
    check_tower(tower)?;
    if k == 0 {
        return Ok(NCPolynomial::one());
    }
    let a = tower
        .level(k)
        .ok_or_else(|| Error::Invalid(format!("tower has no level {k}")))?;
    let l = NCMatrix::generating(f.dim(), 0);
    let prod = copies_product(&f_copies(&l, f, k)?)?.op_mul(a)?;
    full_trace(&prod, c)
}

/// `p_k = Tr_{C(1..k)} L̄_1 ⋯ L̄_k R_{k-1,k} ⋯ R_{12}`.
pub fn power_sum(r: &TensorOperator, f: &TensorOperator, c: &TensorOperator, k: usize) -> Result<NCPolynomial> {
    if k == 0 {
        return Err(Error::Invalid("power sums start at k = 1".into()));
    }
    let l = NCMatrix::generating(f.dim(), 0);
    let mut prod = copies_product(&f_copies(&l, f, k)?)?;
    for j in (1..k).rev() {
        prod = prod.mul_op(&place(r, j, k)?)?;
    }
    full_trace(&prod, c)
}

/// Scalars `c_i` with `base + Σ c_i dirs_i ≡ 0`, if any exist. Reduction is linear, so this is
/// a linear system on the residuals.
pub fn solve_combination(oracle: &IdealOracle, base: &NCPolynomial, dirs: &[NCPolynomial]) -> Result<Option<Vec<RF>>> {
    let mut residuals = dirs
        .par_iter()
        .map(|d| Ok(oracle.reduce(d)?.residual))
        .collect::<Result<Vec<_>>>()?;
    residuals.push(oracle.reduce(base)?.residual);
    let words: std::collections::BTreeSet<Word> = residuals.iter().flat_map(|r| r.terms().map(|(w, _)| w.clone())).collect();
    let mut m = Matrix::zeros(words.len(), residuals.len());
    for (row, w) in words.iter().enumerate() {
        for (col, r) in residuals.iter().enumerate() {
            m.set(row, col, r.coeff(w));
        }
    }
    let last = dirs.len();
    for k in m.kernel() {
        if !k[last].is_zero() {
            let norm = k[last].inv()?;
            return Ok(Some(k[..last].iter().map(|x| x * &norm).collect()));
        }
    }
    Ok(None)
}

/// Newton-type coefficients `(a, c)` with `p_2 + a e_1 p_1 + c e_2 ≡ 0`.
pub fn newton_coefficients(
    oracle: &IdealOracle,
    e1: &NCPolynomial,
    e2: &NCPolynomial,
    p1: &NCPolynomial,
    p2: &NCPolynomial,
) -> Result<Option<(RF, RF)>> {
    let sol = solve_combination(oracle, p2, &[e1.mul(p1), e2.clone()])?;
    Ok(sol.map(|c| (c[0].clone(), c[1].clone())))
}

/// `Δ(x) - x ⊗ x` reduces to zero in the tensor square of an RTT algebra.
pub fn group_like_check(pres: &Presentation, f: &TensorOperator, x: &NCPolynomial, config: crate::ncalg::OracleConfig) -> Result<bool> {
    if pres.source != Source::Qma || *f != TensorOperator::flip(f.dim()) {
        return Err(Error::Unsupported("group-like check needs an RTT presentation".into()));
    }
    let n = pres.matrix_dim.ok_or_else(|| Error::Unsupported("no generating matrix".into()))?;
    let sq = IdealOracle::new(tensor_square(pres, true)?, config);
    let diff = coproduct(x, n).sub(&tensor_elements(x, x, pres.alphabet.len() as u32));
    sq.reduces_to_zero(&diff)
}

/// Coefficients `α_k = x^{mk} C(m,k) k_x!(m-k)_x!/m_x!` of the characteristic polynomial.
pub fn alpha(m: usize, k: usize, x: &RF) -> Result<RF> {
    let (m, k) = (m as i64, k as i64);
    let num = &q_factorial_at(k, x)? * &q_factorial_at(m - k, x)?;
    let frac = num.checked_div(&q_factorial_at(m, x)?)?;
    Ok(&(&x.pow(m * k)? * &binomial(m as u64, k as u64)) * &frac)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharPolyReport {
    pub m: usize,
    /// Coefficient of `t^j` in `det(L - tI)` at index `j`.
    pub coefficients: Vec<NCPolynomial>,
    pub alphas: Vec<RF>,
    /// `det(L - tI)` coefficient of `(-t)^{m-k}` equals `α_k e_k`, indexed by `k`.
    pub matches: Vec<bool>,
    /// `Tr_{R(k+1..m)} A^(m) = x^{-m(m-k)} k_x!(m-k)_x!/m_x! A^(k)`, indexed by `k`.
    pub trace_reduction: Vec<bool>,
}

impl CharPolyReport {
    pub fn holds(&self) -> bool {
        self.matches.iter().all(|&b| b) && self.trace_reduction.iter().all(|&b| b)
    }
}

/// Expand `⟨v|(L - tI)_ov1 ⋯ (L - tI)_ovm|u⟩` in the central indeterminate `t` and compare with
/// `Σ (-t)^{m-k} α_k e_k` in the RE algebra `L(R, R)`.
pub fn char_poly_expand(
    oracle: &IdealOracle,
    tower: &ProjectorTower,
    cert: &EvennessCertificate,
    c_r: &TensorOperator,
) -> Result<CharPolyReport> {
    check_tower(tower)?;
    if oracle.presentation().source != Source::Qma {
        return Err(Error::Unsupported("characteristic polynomial is built for RE algebras".into()));
    }
    let r = &tower.r;
    let m = cert.m;
    let l = NCMatrix::generating(r.dim(), 0);
    let copies = f_copies(&l, r, m)?;
    let id = NCMatrix::identity(r.dim(), m);
    // Subsets of positions carrying L̄; the rest carry -t I.
    let mut by_k = vec![NCPolynomial::zero(); m + 1];
    for mask in 0u32..(1 << m) {
        let mut prod = id.clone();
        for (s, c) in copies.iter().enumerate() {
            if mask & (1 << s) != 0 {
                prod = prod.mul(c)?;
            }
        }
        by_k[mask.count_ones() as usize].add_assign(&sandwich(&cert.v, &prod, &cert.u)?);
    }
    let mut coefficients = vec![NCPolynomial::zero(); m + 1];
    for (k, e) in by_k.iter().enumerate() {
        let j = m - k;
        let sign = if j % 2 == 0 { RF::one() } else { -RF::one() };
        coefficients[j] = e.scale(&sign);
    }
    let alphas = (0..=m).map(|k| alpha(m, k, &tower.x)).collect::<Result<Vec<_>>>()?;
    let matches = (0..=m)
        .into_par_iter()
        .map(|k| {
            let ek = elementary_symmetric(tower, r, c_r, k)?;
            oracle.equal_mod(&by_k[k], &ek.scale(&alphas[k]))
        })
        .collect::<Result<Vec<_>>>()?;
    let trace_reduction = (0..=m)
        .map(|k| trace_reduction_holds(tower, c_r, m, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(CharPolyReport {
        m,
        coefficients,
        alphas,
        matches,
        trace_reduction,
    })
}

/// `Tr_{C(k+1..m)} A^(m) = x^{-m(m-k)} k_x!(m-k)_x!/m_x! A^(k)`; `A^(0)` is the scalar `1`.
pub fn trace_reduction_holds(tower: &ProjectorTower, c: &TensorOperator, m: usize, k: usize) -> Result<bool> {
    let am = tower.level(m).ok_or_else(|| Error::Invalid(format!("tower has no level {m}")))?;
    let x = &tower.x;
    let (mi, ki) = (m as i64, k as i64);
    let coef = (&x.pow(-mi * (mi - ki))? * &(&q_factorial_at(ki, x)? * &q_factorial_at(mi - ki, x)?))
        .checked_div(&q_factorial_at(mi, x)?)?;
    if k == m {
        return Ok(coef.is_one());
    }
    let sites: Vec<usize> = (k + 1..=m).collect();
    let lhs = partial_trace(am, &sites, Some(c))?;
    let rhs = if k == 0 {
        TensorOperator::identity(am.dim(), 0).scale(&coef)
    } else {
        tower.level(k).expect("lower level").scale(&coef)
    };
    Ok(lhs == rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChKind {
    /// `L^m - x e_1 L^{m-1} + ⋯ + (-x)^m e_m I` in `L(R, R)`.
    Re,
    /// `L^[2] - x L e_1 + x² e_2 I` with `L^[2] = Tr_{R(2)} L_1 L̄_2 R_12`, for `m = 2`.
    GeneralQma,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChReport {
    pub holds: bool,
    /// The matrix whose entries should vanish.
    pub identity: NCMatrix,
    /// Residuals of the entries that did not reduce to zero, as `(row, col, residual)`.
    pub failures: Vec<(usize, usize, NCPolynomial)>,
}

/// Build the Cayley–Hamilton matrix and reduce every entry.
pub fn cayley_hamilton(
    oracle: &IdealOracle,
    tower: &ProjectorTower,
    f: &TensorOperator,
    c_r: &TensorOperator,
    m: usize,
    kind: ChKind,
) -> Result<ChReport> {
    let identity = ch_matrix(tower, f, c_r, m, kind)?;
    let entries: Vec<(usize, usize, NCPolynomial)> =
        identity.entries().map(|(i, j, e)| (i, j, e.clone())).collect();
    let residuals = entries
        .par_iter()
        .map(|(i, j, e)| Ok((*i, *j, oracle.reduce(e)?.residual)))
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<_> = residuals.into_iter().filter(|(_, _, r)| !r.is_zero()).collect();
    Ok(ChReport {
        holds: failures.is_empty(),
        identity,
        failures,
    })
}

/// The Cayley–Hamilton matrix before reduction. The coefficients `e_k` are R-traced; for
/// `F = R` this is the default convention, and for other `F` it is the one the identity needs.
pub fn ch_matrix(tower: &ProjectorTower, f: &TensorOperator, c_r: &TensorOperator, m: usize, kind: ChKind) -> Result<NCMatrix> {
    let n = f.dim();
    let x = &tower.x;
    let l = NCMatrix::generating(n, 0);
    let e = |k| elementary_symmetric(tower, f, c_r, k);
    match kind {
        ChKind::Re => {
            let mut powers = vec![NCMatrix::identity(n, 1)];
            for k in 1..=m {
                powers.push(powers[k - 1].mul(&l)?);
            }
            let mut acc = NCMatrix::zeros(n, 1);
            for k in 0..=m {
                let coef = (-x).pow(k as i64)?;
                acc = acc.add(&powers[m - k].right_mul_elem(&e(k)?).scale(&coef))?;
            }
            Ok(acc)
        }
        ChKind::GeneralQma => {
            if m != 2 {
                return Err(Error::Unsupported("the general QMA identity is implemented for m = 2".into()));
            }
            let l2 = l_bracket_two(tower, f, c_r)?;
            let le1 = l.right_mul_elem(&e(1)?).scale(x);
            let e2 = NCMatrix::identity(n, 1).right_mul_elem(&e(2)?).scale(&x.pow(2)?);
            l2.sub(&le1)?.add(&e2)
        }
    }
}

/// `L^[2] = Tr_{R(2)} L_1 L̄_2 R_12`.
pub fn l_bracket_two(tower: &ProjectorTower, f: &TensorOperator, c_r: &TensorOperator) -> Result<NCMatrix> {
    let l = NCMatrix::generating(f.dim(), 0);
    let prod = copies_product(&f_copies(&l, f, 2)?)?.mul_op(&tower.r)?;
    prod.partial_trace(&[2], Some(c_r))
}

#[derive(Clone, Debug, PartialEq)]
pub struct InverseReport {
    /// The RE presentation extended by a central generator `z` with `e_m z = 1`.
    pub presentation: Presentation,
    /// Candidate inverse `X`, linear in the powers `L^k`, `k < m`.
    pub inverse: NCMatrix,
    pub verified: bool,
}

/// Invert `L` in `L(R, R)` from the Cayley–Hamilton identity:
/// `X = -(-x)^{-m} z Σ_{k<m} (-x)^k e_k L^{m-1-k}` with `z = e_m^{-1}`.
pub fn inverse_expression(
    oracle: &IdealOracle,
    tower: &ProjectorTower,
    c_r: &TensorOperator,
    m: usize,
) -> Result<InverseReport> {
    let r = &tower.r;
    let em = elementary_symmetric(tower, r, c_r, m)?;
    if oracle.reduces_to_zero(&em)? {
        return Err(Error::Invalid("e_m vanishes in this algebra; no inverse to adjoin".into()));
    }
    if !oracle.is_central(&em)?.central {
        return Err(Error::Unsupported("e_m is not central; localization refused".into()));
    }
    let pres = oracle.presentation().with_central_inverse("z", &em)?;
    let n = r.dim();
    let z = NCPolynomial::generator(pres.alphabet.len() as u32 - 1);
    let x = &tower.x;
    let l = NCMatrix::generating(n, 0);
    let mut powers = vec![NCMatrix::identity(n, 1)];
    for k in 1..m {
        powers.push(powers[k - 1].mul(&l)?);
    }
    let mut sum = NCMatrix::zeros(n, 1);
    for k in 0..m {
        let ek = elementary_symmetric(tower, r, c_r, k)?;
        sum = sum.add(&powers[m - 1 - k].left_mul_elem(&ek).scale(&(-x).pow(k as i64)?))?;
    }
    let lead = -((-x).pow(-(m as i64))?);
    let inverse = sum.left_mul_elem(&z).scale(&lead);
    let ext = IdealOracle::new(pres.clone(), oracle.config());
    let check = l.mul(&inverse)?.sub(&NCMatrix::identity(n, 1))?;
    let entries: Vec<NCPolynomial> = check.entries().map(|(_, _, e)| e.clone()).collect();
    let verified = entries
        .par_iter()
        .map(|e| ext.reduces_to_zero(e))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    Ok(InverseReport {
        presentation: pres,
        inverse,
        verified,
    })
}
