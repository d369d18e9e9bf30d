use serde::Serialize;

use super::require_two_site;
use crate::error::{Error, Result};
use crate::scalars::RationalFunction as RF;
use crate::tensorspace::{partial_trace, Matrix, TensorOperator};

/// `Ψ` with `R_{ij}^{kl} Ψ_{lm}^{jn} = δ_m^k δ_i^n = Ψ_{ij}^{kl} R_{lm}^{jn}` and `C = Tr_(2) Ψ`.
#[derive(Clone, Debug, Serialize)]
pub struct SkewInverse {
    pub psi: TensorOperator,
    pub c: TensorOperator,
}

/// Solve for `Ψ` from the first contraction (requiring a unique solution), then verify both.
pub fn solve_skew_inverse(r: &TensorOperator) -> Result<SkewInverse> {
    require_two_site(r)?;
    let n = r.dim();
    let n2 = n * n;
    let pair = |a: usize, b: usize| a * n + b;
    // unknown Ψ[(l,m),(j,n)] at index pair(l,m)*n2 + pair(j,nn)
    let unknown = |l: usize, m: usize, j: usize, nn: usize| pair(l, m) * n2 + pair(j, nn);
    // equation (i, m, k, nn): Σ_{j,l} R[(i,j),(k,l)] Ψ[(l,m),(j,nn)] = δ(m,k) δ(i,nn)
    let neq = n2 * n2;
    let mut rows = vec![Vec::new(); neq];
    let mut rhs = vec![RF::zero(); neq];
    for i in 0..n {
        for m in 0..n {
            for k in 0..n {
                for nn in 0..n {
                    let eq = ((i * n + m) * n + k) * n + nn;
                    let mut row: Vec<(usize, RF)> = Vec::new();
                    for j in 0..n {
                        for l in 0..n {
                            let c = r.get(pair(i, j), pair(k, l));
                            if !c.is_zero() {
                                row.push((unknown(l, m, j, nn), c));
                            }
                        }
                    }
                    row.sort_by_key(|(c, _)| *c);
                    rows[eq] = row;
                    if m == k && i == nn {
                        rhs[eq] = RF::one();
                    }
                }
            }
        }
    }
    let system = Matrix::from_sparse_rows(neq, rows);
    let sol = system
        .solve_unique(&rhs)
        .map_err(|e| Error::NotSkewInvertible(e.to_string()))?;
    let mut psi = Matrix::zeros(n2, n2);
    for (idx, v) in sol.into_iter().enumerate() {
        if !v.is_zero() {
            psi.set(idx / n2, idx % n2, v);
        }
    }
    let psi = TensorOperator::new(n, 2, psi)?;
    if !contractions_hold(r, &psi) {
        return Err(Error::NotSkewInvertible("second contraction fails".into()));
    }
    let c = partial_trace(&psi, &[2], None)?;
    Ok(SkewInverse { psi, c })
}

/// Check both contractions `Tr_(2) R12 Ψ23 = P13 = Tr_(2) Ψ12 R23` entrywise.
pub fn contractions_hold(r: &TensorOperator, psi: &TensorOperator) -> bool {
    let n = r.dim();
    let pair = |a: usize, b: usize| a * n + b;
    for i in 0..n {
        for m in 0..n {
            for k in 0..n {
                for nn in 0..n {
                    let mut a = RF::zero();
                    let mut b = RF::zero();
                    for j in 0..n {
                        for l in 0..n {
                            a += &(&r.get(pair(i, j), pair(k, l)) * &psi.get(pair(l, m), pair(j, nn)));
                            b += &(&psi.get(pair(i, j), pair(k, l)) * &r.get(pair(l, m), pair(j, nn)));
                        }
                    }
                    let expect = if m == k && i == nn { RF::one() } else { RF::zero() };
                    if a != expect || b != expect {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `Tr_R X = Tr(C X)`.
pub fn r_trace(x: &TensorOperator, c: &TensorOperator) -> Result<RF> {
    if x.sites() != 1 || c.sites() != 1 || x.dim() != c.dim() {
        return Err(Error::Shape("R-trace expects two N×N operators".into()));
    }
    Ok(c.compose(x)?.trace())
}

/// `R12 C1 C2 = C1 C2 R12` and `Tr_{R(2)} R^{±1} X1 R^{∓1} = I Tr_R X` for all `X`.
///
/// Both sides of the second identity are linear in `X`, so it is checked on the matrix units
/// `E_ab`, which is equivalent to checking it for a matrix of independent indeterminates.
pub fn check_trace_identities(r: &TensorOperator, c: &TensorOperator) -> Result<bool> {
    require_two_site(r)?;
    if c.sites() != 1 || c.dim() != r.dim() {
        return Err(Error::Shape("C must be an N×N operator".into()));
    }
    let n = r.dim();
    let cc = c.tensor(c)?;
    if r.compose(&cc)? != cc.compose(r)? {
        return Ok(false);
    }
    let Ok(rinv) = r.inverse() else {
        return Ok(false);
    };
    let id1 = TensorOperator::identity(n, 1);
    for a in 0..n {
        for b in 0..n {
            let mut e = Matrix::zeros(n, n);
            e.set(a, b, RF::one());
            let x = TensorOperator::new(n, 1, e)?;
            let x1 = x.tensor(&id1)?;
            let expect = id1.scale(&r_trace(&x, c)?);
            for (left, right) in [(r, &rinv), (&rinv, r)] {
                let conj = left.compose(&x1)?.compose(right)?;
                if partial_trace(&conj, &[2], Some(c))? != expect {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
