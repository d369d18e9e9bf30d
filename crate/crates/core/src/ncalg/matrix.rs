use std::collections::BTreeMap;

use super::poly::NCPolynomial;
use crate::error::{Error, Result};
use crate::scalars::RationalFunction as RF;
use crate::tensorspace::{place, Matrix, TensorOperator};

/// `N^p × N^p` matrix with entries in the free algebra, dense row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCMatrix {
    dim: usize,
    sites: usize,
    entries: Vec<NCPolynomial>,
}

impl NCMatrix {
    pub fn zeros(dim: usize, sites: usize) -> Self {
        let n = dim.pow(sites as u32);
        NCMatrix {
            dim,
            sites,
            entries: vec![NCPolynomial::zero(); n * n],
        }
    }

    pub fn identity(dim: usize, sites: usize) -> Self {
        Self::from_operator(&TensorOperator::identity(dim, sites))
    }

    /// The `N × N` matrix whose `(i, j)` entry is `f(i, j)`.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> NCPolynomial) -> Self {
        let mut m = Self::zeros(dim, 1);
        for i in 0..dim {
            for j in 0..dim {
                m.entries[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Generating matrix: entry `(i, j)` is the generator `offset + i·N + j`.
    pub fn generating(dim: usize, offset: u32) -> Self {
        Self::from_fn(dim, |i, j| NCPolynomial::generator(offset + (i * dim + j) as u32))
    }

    pub fn from_operator(op: &TensorOperator) -> Self {
        let mut m = Self::zeros(op.dim(), op.sites());
        for (i, j, v) in op.matrix().entries() {
            m.entries[i * op.size() + j] = NCPolynomial::scalar(v.clone());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn size(&self) -> usize {
        self.dim.pow(self.sites as u32)
    }

    pub fn get(&self, i: usize, j: usize) -> &NCPolynomial {
        &self.entries[i * self.size() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: NCPolynomial) {
        let n = self.size();
        self.entries[i * n + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &NCPolynomial)> {
        let n = self.size();
        self.entries.iter().enumerate().map(move |(k, p)| (k / n, k % n, p))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    fn check(&self, other: &NCMatrix) -> Result<()> {
        if self.dim != other.dim || self.sites != other.sites {
            return Err(Error::Shape("NC matrix shapes differ".into()));
        }
        Ok(())
    }

    fn check_op(&self, op: &TensorOperator) -> Result<()> {
        if self.dim != op.dim() || self.sites != op.sites() {
            return Err(Error::Shape("operator and NC matrix shapes differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &NCMatrix) -> Result<NCMatrix> {
        self.check(other)?;
        Ok(NCMatrix {
            dim: self.dim,
            sites: self.sites,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &NCMatrix) -> Result<NCMatrix> {
        self.check(other)?;
        Ok(NCMatrix {
            dim: self.dim,
            sites: self.sites,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scale(&self, c: &RF) -> NCMatrix {
        self.map(|p| p.scale(c))
    }

    pub fn map(&self, f: impl Fn(&NCPolynomial) -> NCPolynomial) -> NCMatrix {
        NCMatrix {
            dim: self.dim,
            sites: self.sites,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Entrywise `x · m_ij`.
    pub fn left_mul_elem(&self, x: &NCPolynomial) -> NCMatrix {
        self.map(|p| x.mul(p))
    }

    /// Entrywise `m_ij · x`.
    pub fn right_mul_elem(&self, x: &NCPolynomial) -> NCMatrix {
        self.map(|p| p.mul(x))
    }

    /// Matrix product, entries multiplied in order.
    pub fn mul(&self, other: &NCMatrix) -> Result<NCMatrix> {
        self.check(other)?;
        let n = self.size();
        let mut out = NCMatrix::zeros(self.dim, self.sites);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j].add_assign(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `T · M` for a scalar operator `T`.
    pub fn op_mul(&self, op: &TensorOperator) -> Result<NCMatrix> {
        self.check_op(op)?;
        let n = self.size();
        let mut out = NCMatrix::zeros(self.dim, self.sites);
        for (i, k, t) in op.matrix().entries() {
            for j in 0..n {
                let b = &self.entries[k * n + j];
                if !b.is_zero() {
                    out.entries[i * n + j].add_assign(&b.scale(t));
                }
            }
        }
        Ok(out)
    }

    /// `M · T` for a scalar operator `T`.
    pub fn mul_op(&self, op: &TensorOperator) -> Result<NCMatrix> {
        self.check_op(op)?;
        let n = self.size();
        let mut out = NCMatrix::zeros(self.dim, self.sites);
        for (k, j, t) in op.matrix().entries() {
            for i in 0..n {
                let a = &self.entries[i * n + k];
                if !a.is_zero() {
                    out.entries[i * n + j].add_assign(&a.scale(t));
                }
            }
        }
        Ok(out)
    }

    /// `M ⊗ I` on `p` sites, with `M` at sites `first..` (1-based).
    pub fn embed(&self, first: usize, p: usize) -> Result<NCMatrix> {
        if first == 0 || first + self.sites > p + 1 {
            return Err(Error::Placement(format!("{} sites at {first} of {p}", self.sites)));
        }
        let left = self.dim.pow((first - 1) as u32);
        let right = self.dim.pow((p + 1 - first - self.sites) as u32);
        let inner = self.size();
        let mut out = NCMatrix::zeros(self.dim, p);
        let n = out.size();
        for a in 0..left {
            for (i, j, v) in self.entries() {
                if v.is_zero() {
                    continue;
                }
                for b in 0..right {
                    let r = (a * inner + i) * right + b;
                    let c = (a * inner + j) * right + b;
                    out.entries[r * n + c] = v.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> NCPolynomial {
        let n = self.size();
        let mut acc = NCPolynomial::zero();
        for i in 0..n {
            acc.add_assign(&self.entries[i * n + i]);
        }
        acc
    }

    /// Weighted partial trace `Tr_{sites}(C_{s_1} ⋯ C_{s_k} M)` over 1-based sites.
    pub fn partial_trace(&self, site_set: &[usize], weight: Option<&TensorOperator>) -> Result<NCMatrix> {
        let p = self.sites;
        let mut traced = vec![false; p];
        for &s in site_set {
            if s == 0 || s > p || traced[s - 1] {
                return Err(Error::Placement(format!("bad trace site {s} for {p} sites")));
            }
            traced[s - 1] = true;
        }
        let kept: Vec<usize> = (0..p).filter(|&s| !traced[s]).collect();
        let tr: Vec<usize> = (0..p).filter(|&s| traced[s]).collect();
        let digits = |mut x: usize| {
            let mut d = vec![0; p];
            for k in (0..p).rev() {
                d[k] = x % self.dim;
                x /= self.dim;
            }
            d
        };
        let mut out = NCMatrix::zeros(self.dim, kept.len());
        let on = out.size();
        let mut acc: BTreeMap<(usize, usize), NCPolynomial> = BTreeMap::new();
        for (row, col, v) in self.entries() {
            if v.is_zero() {
                continue;
            }
            let (rd, cd) = (digits(row), digits(col));
            let mut f = RF::one();
            for &s in &tr {
                let c = match weight {
                    None => {
                        if rd[s] == cd[s] {
                            RF::one()
                        } else {
                            RF::zero()
                        }
                    }
                    Some(w) => w.get(cd[s], rd[s]),
                };
                if c.is_zero() {
                    f = RF::zero();
                    break;
                }
                f = &f * &c;
            }
            if f.is_zero() {
                continue;
            }
            let r = kept.iter().fold(0, |a, &s| a * self.dim + rd[s]);
            let c = kept.iter().fold(0, |a, &s| a * self.dim + cd[s]);
            acc.entry((r, c)).or_default().add_assign(&v.scale(&f));
        }
        for ((r, c), v) in acc {
            out.entries[r * on + c] = v;
        }
        Ok(out)
    }

    /// Scalar of a zero-site matrix.
    pub fn as_element(&self) -> Option<&NCPolynomial> {
        (self.sites == 0).then(|| &self.entries[0])
    }
}

/// F-copies `L_ov1 = L_1`, `L_ov(k+1) = F_{k,k+1} L_ovk F_{k,k+1}^{-1}` on `V^{⊗p}`.
pub fn f_copies(l: &NCMatrix, f: &TensorOperator, p: usize) -> Result<Vec<NCMatrix>> {
    if l.sites() != 1 || f.sites() != 2 || l.dim() != f.dim() {
        return Err(Error::Shape("F-copies need an N×N generating matrix and a two-site F".into()));
    }
    if p == 0 {
        return Ok(Vec::new());
    }
    let finv = f.inverse()?;
    let mut out = vec![l.embed(1, p)?];
    for k in 1..p {
        let fk = place(f, k, p)?;
        let fki = place(&finv, k, p)?;
        let next = out[k - 1].op_mul(&fk)?.mul_op(&fki)?;
        out.push(next);
    }
    Ok(out)
}

/// Product `L_ov1 L_ov2 ⋯ L_ovp` of F-copies.
pub fn copies_product(copies: &[NCMatrix]) -> Result<NCMatrix> {
    let mut it = copies.iter();
    let first = it.next().ok_or_else(|| Error::Invalid("empty product".into()))?.clone();
    it.try_fold(first, |acc, m| acc.mul(m))
}

/// Scalar operator to an NC matrix, for mixed products.
pub fn scalar_matrix(m: &Matrix, dim: usize) -> Result<NCMatrix> {
    Ok(NCMatrix::from_operator(&TensorOperator::from_matrix(dim, m.clone())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braidings::examples::{flip, hecke};

    #[test]
    fn rtt_copies_are_plain_embeddings() {
        let l = NCMatrix::generating(2, 0);
        let c = f_copies(&l, &flip(2), 3).unwrap();
        assert_eq!(c[1], l.embed(2, 3).unwrap());
        assert_eq!(c[2], l.embed(3, 3).unwrap());
        assert_eq!(f_copies(&l, &flip(2), 1).unwrap(), vec![l.embed(1, 1).unwrap()]);
    }

    #[test]
    fn re_copy_is_conjugation() {
        let l = NCMatrix::generating(2, 0);
        let r = hecke();
        let c = f_copies(&l, &r, 2).unwrap();
        // oracle: R L1 R^-1 built from dense products
        let l1 = l.embed(1, 2).unwrap();
        let expect = l1.op_mul(&r).unwrap().mul_op(&r.inverse().unwrap()).unwrap();
        assert_eq!(c[1], expect);
        // and R L1 = L_ov2 R
        assert_eq!(l1.op_mul(&r).unwrap(), c[1].mul_op(&r).unwrap());
    }

    #[test]
    fn product_index_convention() {
        let l = NCMatrix::generating(2, 0);
        let c = f_copies(&l, &flip(2), 2).unwrap();
        let prod = copies_product(&c).unwrap();
        // (L1 L2)[(i1,i2),(j1,j2)] = l_{i1 j1} l_{i2 j2}
        for i1 in 0..2 {
            for i2 in 0..2 {
                for j1 in 0..2 {
                    for j2 in 0..2 {
                        let w = vec![(i1 * 2 + j1) as u32, (i2 * 2 + j2) as u32];
                        assert_eq!(*prod.get(i1 * 2 + i2, j1 * 2 + j2), NCPolynomial::term(w, RF::one()));
                    }
                }
            }
        }
    }

    #[test]
    fn partial_traces() {
        let l = NCMatrix::generating(2, 0);
        let t = l.partial_trace(&[1], None).unwrap();
        assert_eq!(t.as_element().unwrap().len(), 2);
        let l12 = l.embed(1, 2).unwrap();
        let tr2 = l12.partial_trace(&[2], None).unwrap();
        assert_eq!(tr2, l.scale(&RF::from_int(2)));
    }
}
