use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalars::RationalFunction as RF;

/// Linear operator on `V^{⊗p}` with `dim V = N`, as an `N^p × N^p` matrix over `Q(q)`.
///
/// The multi-index `(i_1, …, i_p)` (0-based digits) maps to `i_1 N^{p-1} + … + i_p`. An
/// operator with `sites = 0` is a scalar (a `1 × 1` matrix); partial traces over every site
/// produce one.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TensorOperator {
    dim: usize,
    sites: usize,
    mat: Matrix,
}

impl TensorOperator {
    pub fn new(dim: usize, sites: usize, mat: Matrix) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Shape(format!("dimension {dim} < 2")));
        }
        let n = dim.pow(sites as u32);
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::Shape(format!(
                "operator on {sites} site(s) of dim {dim} must be {n}x{n}, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(TensorOperator { dim, sites, mat })
    }

    pub fn identity(dim: usize, sites: usize) -> Self {
        TensorOperator {
            dim,
            sites,
            mat: Matrix::identity(dim.pow(sites as u32)),
        }
    }

    pub fn scalar_op(dim: usize, sites: usize, c: &RF) -> Self {
        TensorOperator {
            dim,
            sites,
            mat: Matrix::scalar(dim.pow(sites as u32), c),
        }
    }

    /// The flip `x_i ⊗ x_j -> x_j ⊗ x_i` on `V ⊗ V`.
    pub fn flip(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim * dim, dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i * dim + j, j * dim + i, RF::one());
            }
        }
        TensorOperator { dim, sites: 2, mat: m }
    }

    /// Build an operator from a square matrix, inferring the number of sites.
    pub fn from_matrix(dim: usize, mat: Matrix) -> Result<Self> {
        let n = mat.nrows();
        let mut sites = 0;
        let mut size = 1;
        while size < n {
            size *= dim;
            sites += 1;
        }
        if size != n {
            return Err(Error::Shape(format!("{n} is not a power of {dim}")));
        }
        Self::new(dim, sites, mat)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn size(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> RF {
        self.mat.get(i, j)
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    /// Scalar value of a zero-site operator.
    pub fn as_scalar(&self) -> Option<RF> {
        self.mat.as_scalar()
    }

    pub fn compose(&self, other: &TensorOperator) -> Result<TensorOperator> {
        self.check_compatible(other)?;
        Ok(TensorOperator {
            dim: self.dim,
            sites: self.sites,
            mat: self.mat.mul(&other.mat)?,
        })
    }

    pub fn add(&self, other: &TensorOperator) -> Result<TensorOperator> {
        self.check_compatible(other)?;
        Ok(TensorOperator {
            dim: self.dim,
            sites: self.sites,
            mat: self.mat.add(&other.mat)?,
        })
    }

    pub fn sub(&self, other: &TensorOperator) -> Result<TensorOperator> {
        self.check_compatible(other)?;
        Ok(TensorOperator {
            dim: self.dim,
            sites: self.sites,
            mat: self.mat.sub(&other.mat)?,
        })
    }

    pub fn scale(&self, c: &RF) -> TensorOperator {
        TensorOperator {
            dim: self.dim,
            sites: self.sites,
            mat: self.mat.scale(c),
        }
    }

    pub fn tensor(&self, other: &TensorOperator) -> Result<TensorOperator> {
        if self.dim != other.dim {
            return Err(Error::Shape("tensor product of different dimensions".into()));
        }
        Ok(TensorOperator {
            dim: self.dim,
            sites: self.sites + other.sites,
            mat: self.mat.kron(&other.mat),
        })
    }

    pub fn inverse(&self) -> Result<TensorOperator> {
        Ok(TensorOperator {
            dim: self.dim,
            sites: self.sites,
            mat: self.mat.inverse()?,
        })
    }

    pub fn trace(&self) -> RF {
        self.mat.trace()
    }

    /// Embed this operator so that it acts on sites `first..first + sites` of `V^{⊗p}`
    /// (1-based `first`).
    pub fn embed(&self, first: usize, p: usize) -> Result<TensorOperator> {
        if first == 0 || first + self.sites > p + 1 {
            return Err(Error::Placement(format!(
                "{}-site operator at position {first} of {p}",
                self.sites
            )));
        }
        let left = Matrix::identity(self.dim.pow((first - 1) as u32));
        let right = Matrix::identity(self.dim.pow((p + 1 - first - self.sites) as u32));
        Ok(TensorOperator {
            dim: self.dim,
            sites: p,
            mat: left.kron(&self.mat).kron(&right),
        })
    }

    /// Digits of a multi-index (big-endian).
    pub fn digits(&self, mut index: usize, sites: usize) -> Vec<usize> {
        let mut d = vec![0; sites];
        for k in (0..sites).rev() {
            d[k] = index % self.dim;
            index /= self.dim;
        }
        d
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, d| acc * self.dim + d)
    }

    fn check_compatible(&self, other: &TensorOperator) -> Result<()> {
        if self.dim != other.dim || self.sites != other.sites {
            return Err(Error::Shape(format!(
                "operators on ({}, {}) and ({}, {})",
                self.dim, self.sites, other.dim, other.sites
            )));
        }
        Ok(())
    }
}

/// `op2` acting at sites `k, k+1` of `V^{⊗p}` (1-based), identity elsewhere.
pub fn place(op2: &TensorOperator, k: usize, p: usize) -> Result<TensorOperator> {
    if op2.sites() != 2 {
        return Err(Error::Shape("place expects a two-site operator".into()));
    }
    if k == 0 || k + 1 > p {
        return Err(Error::Placement(format!("position {k} for {p} sites")));
    }
    op2.embed(k, p)
}

/// Partial trace over the given 1-based sites. With a weight `C` (an `N×N` operator) this is
/// the weighted trace `Tr_{sites}(C_{s_1} ⋯ C_{s_k} · op)`, i.e. the R-trace when `C = C^R`.
/// The result acts on the remaining sites in their original order.
pub fn partial_trace(
    op: &TensorOperator,
    site_set: &[usize],
    weight: Option<&TensorOperator>,
) -> Result<TensorOperator> {
    let p = op.sites();
    if site_set.is_empty() {
        return Err(Error::Invalid("empty site set".into()));
    }
    let mut traced = vec![false; p];
    for &s in site_set {
        if s == 0 || s > p {
            return Err(Error::Placement(format!("site {s} out of range 1..={p}")));
        }
        if traced[s - 1] {
            return Err(Error::Invalid(format!("duplicate site {s}")));
        }
        traced[s - 1] = true;
    }
    if let Some(w) = weight {
        if w.sites() != 1 || w.dim() != op.dim() {
            return Err(Error::Shape("trace weight must be an N×N operator".into()));
        }
    }
    let kept: Vec<usize> = (0..p).filter(|&s| !traced[s]).collect();
    let tr: Vec<usize> = (0..p).filter(|&s| traced[s]).collect();
    let out_size = op.dim().pow(kept.len() as u32);
    let mut acc: Vec<std::collections::BTreeMap<usize, RF>> = vec![Default::default(); out_size];
    for (row, col, v) in op.matrix().entries() {
        let rd = op.digits(row, p);
        let cd = op.digits(col, p);
        // weight factor Π C[c_s][r_s] over traced sites (unweighted: r_s == c_s)
        let mut f = RF::one();
        for &s in &tr {
            match weight {
                None => {
                    if rd[s] != cd[s] {
                        f = RF::zero();
                        break;
                    }
                }
                Some(w) => {
                    let c = w.get(cd[s], rd[s]);
                    if c.is_zero() {
                        f = RF::zero();
                        break;
                    }
                    f = &f * &c;
                }
            }
        }
        if f.is_zero() {
            continue;
        }
        let r = kept.iter().fold(0, |a, &s| a * op.dim() + rd[s]);
        let c = kept.iter().fold(0, |a, &s| a * op.dim() + cd[s]);
        let e = acc[r].entry(c).or_insert_with(RF::zero);
        *e += &(&f * v);
    }
    let rows = acc.into_iter().map(|m| m.into_iter().collect()).collect();
    Ok(TensorOperator {
        dim: op.dim(),
        sites: kept.len(),
        mat: Matrix::from_sparse_rows(out_size, rows),
    })
}

/// Rank, kernel basis and column-space basis of an operator.
#[derive(Clone, Debug)]
pub struct RankKernel {
    pub rank: usize,
    pub kernel_basis: Vec<Vec<RF>>,
    pub image_basis: Vec<Vec<RF>>,
}

pub fn rank_kernel(op: &TensorOperator) -> RankKernel {
    RankKernel {
        rank: op.matrix().rank(),
        kernel_basis: op.matrix().kernel(),
        image_basis: op.matrix().image(),
    }
}

/// Tensor with lower indices `u_{i_1…i_m}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CovariantTensor {
    pub dim: usize,
    pub rank: usize,
    pub entries: Vec<RF>,
}

/// Tensor with upper indices `v^{j_1…j_m}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ContravariantTensor {
    pub dim: usize,
    pub rank: usize,
    pub entries: Vec<RF>,
}

impl CovariantTensor {
    pub fn scale(&self, c: &RF) -> Self {
        CovariantTensor {
            dim: self.dim,
            rank: self.rank,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }
}

impl ContravariantTensor {
    pub fn scale(&self, c: &RF) -> Self {
        ContravariantTensor {
            dim: self.dim,
            rank: self.rank,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// `⟨v, u⟩ = v^{I} u_{I}`.
    pub fn pair(&self, u: &CovariantTensor) -> RF {
        let mut acc = RF::zero();
        for (a, b) in self.entries.iter().zip(&u.entries) {
            acc += &(a * b);
        }
        acc
    }
}

/// On-disk matrix format: `{"dim": N, "sites": p, "entries": [[...]]}`, row-major scalar strings.
#[derive(Serialize, Deserialize)]
struct MatrixFile {
    dim: usize,
    sites: usize,
    entries: Vec<Vec<RF>>,
}

impl Serialize for TensorOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixFile {
            dim: self.dim,
            sites: self.sites,
            entries: self.mat.to_dense(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TensorOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = MatrixFile::deserialize(d)?;
        let mat = Matrix::from_dense(f.entries).map_err(serde::de::Error::custom)?;
        TensorOperator::new(f.dim, f.sites, mat).map_err(serde::de::Error::custom)
    }
}

impl TensorOperator {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            input: "matrix JSON".into(),
            pos: e.column(),
            msg: format!("line {}: {e}", e.line()),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rf(s: &str) -> RF {
        s.parse().unwrap()
    }

    fn op2(entries: &[i64], extra: i64) -> TensorOperator {
        let rows: Vec<Vec<RF>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let v = entries[i * 4 + j];
                        if i == j {
                            &RF::from_int(v) + &RF::q_pow(extra)
                        } else {
                            RF::from_int(v)
                        }
                    })
                    .collect()
            })
            .collect();
        TensorOperator::new(2, 2, Matrix::from_dense(rows).unwrap()).unwrap()
    }

    #[test]
    fn flip_trace_and_partial_trace() {
        let p = TensorOperator::flip(2);
        assert_eq!(p.trace(), RF::from_int(2));
        // Tr_2 P = I
        let t = partial_trace(&p, &[2], None).unwrap();
        assert_eq!(t, TensorOperator::identity(2, 1));
        let s = partial_trace(&p, &[1, 2], None).unwrap();
        assert_eq!(s.sites(), 0);
        assert_eq!(s.as_scalar().unwrap(), RF::from_int(2));
    }

    #[test]
    fn weighted_trace_of_flip_is_weight() {
        let c = TensorOperator::new(2, 1, Matrix::diagonal(&[rf("q^-3"), rf("q^-1")])).unwrap();
        let t = partial_trace(&TensorOperator::flip(2), &[2], Some(&c)).unwrap();
        assert_eq!(t.into_matrix(), Matrix::diagonal(&[rf("q^-3"), rf("q^-1")]));
    }

    #[test]
    fn placement_errors() {
        let p = TensorOperator::flip(2);
        assert!(matches!(place(&p, 3, 3), Err(Error::Placement(_))));
        assert!(matches!(place(&p, 0, 3), Err(Error::Placement(_))));
        assert!(matches!(partial_trace(&p, &[1, 1], None), Err(Error::Invalid(_))));
        assert!(matches!(partial_trace(&p, &[3], None), Err(Error::Placement(_))));
    }

    #[test]
    fn flips_satisfy_braid_relation() {
        let p = TensorOperator::flip(3);
        let p12 = place(&p, 1, 3).unwrap();
        let p23 = place(&p, 2, 3).unwrap();
        let l = p12.compose(&p23).unwrap().compose(&p12).unwrap();
        let r = p23.compose(&p12).unwrap().compose(&p23).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn json_round_trip() {
        let m = op2(&[1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1], 1);
        let back = TensorOperator::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        assert!(TensorOperator::from_json(r#"{"dim":2,"sites":2,"entries":[["1"]]}"#).is_err());
    }

    fn arb_op() -> impl Strategy<Value = TensorOperator> {
        (prop::collection::vec(-2i64..=2, 16), -2i64..=2).prop_map(|(e, k)| op2(&e, k))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn placement_is_multiplicative(a in arb_op(), b in arb_op(), k in 1usize..=2) {
            let ab = a.compose(&b).unwrap();
            let lhs = place(&ab, k, 3).unwrap();
            let rhs = place(&a, k, 3).unwrap().compose(&place(&b, k, 3).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn partial_traces_commute(a in arb_op(), b in arb_op()) {
            let op = a.tensor(&TensorOperator::identity(2, 1)).unwrap()
                .compose(&place(&b, 2, 3).unwrap()).unwrap();
            let t13 = partial_trace(&partial_trace(&op, &[3], None).unwrap(), &[1], None).unwrap();
            let t31 = partial_trace(&partial_trace(&op, &[1], None).unwrap(), &[2], None).unwrap();
            let both = partial_trace(&op, &[1, 3], None).unwrap();
            prop_assert_eq!(&t13, &both);
            prop_assert_eq!(&t31, &both);
            prop_assert_eq!(partial_trace(&op, &[1, 2, 3], None).unwrap().as_scalar().unwrap(), op.trace());
        }

        #[test]
        fn rank_nullity(a in arb_op()) {
            let rk = rank_kernel(&a);
            prop_assert_eq!(rk.rank + rk.kernel_basis.len(), 4);
            prop_assert_eq!(rk.image_basis.len(), rk.rank);
            for v in &rk.kernel_basis {
                prop_assert!(a.matrix().apply(v).iter().all(|x| x.is_zero()));
            }
        }
    }
}
