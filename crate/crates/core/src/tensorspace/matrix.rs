use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::RationalFunction as RF;

/// Sparse matrix over `Q(q)` stored as sorted rows of `(column, value)` pairs. Zero entries are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ncols: usize,
    rows: Vec<Vec<(usize, RF)>>,
}

impl Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix {
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &RF::one())
    }

    pub fn scalar(n: usize, c: &RF) -> Self {
        let mut m = Self::zeros(n, n);
        if !c.is_zero() {
            for (i, row) in m.rows.iter_mut().enumerate() {
                row.push((i, c.clone()));
            }
        }
        m
    }

    pub fn diagonal(d: &[RF]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, c) in d.iter().enumerate() {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_dense(rows: Vec<Vec<RF>>) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), ncols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != ncols {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {ncols}", r.len())));
            }
            m.rows[i] = r.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_dense(rows.iter().map(|r| r.iter().map(|&x| RF::from_int(x)).collect()).collect())
            .expect("rectangular")
    }

    pub fn from_sparse_rows(ncols: usize, rows: Vec<Vec<(usize, RF)>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.retain(|(_, v)| !v.is_zero());
                r.sort_by_key(|(c, _)| *c);
                r
            })
            .collect();
        Matrix { ncols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    pub fn row(&self, i: usize) -> &[(usize, RF)] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<(usize, RF)>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> RF {
        match self.rows[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.rows[i][k].1.clone(),
            Err(_) => RF::zero(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: RF) {
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => {
                if v.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = v;
                }
            }
            Err(k) => {
                if !v.is_zero() {
                    row.insert(k, (j, v));
                }
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// Iterate over stored `(row, col, value)` triples in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RF)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<RF>> {
        (0..self.nrows())
            .map(|i| {
                let mut r = vec![RF::zero(); self.ncols];
                for (j, v) in &self.rows[i] {
                    r[*j] = v.clone();
                }
                r
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut rows = vec![Vec::new(); self.ncols];
        for (i, j, v) in self.entries() {
            rows[j].push((i, v.clone()));
        }
        Matrix {
            ncols: self.nrows(),
            rows,
        }
    }

    pub fn scale(&self, c: &RF) -> Matrix {
        if c.is_zero() {
            return Matrix::zeros(self.nrows(), self.ncols);
        }
        Matrix {
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|(j, v)| (*j, v * c)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| merge_rows(a, b, |x, y| x + y))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(&RF::from_int(-1)))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.ncols != other.nrows() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols,
                other.nrows(),
                other.ncols
            )));
        }
        let mut out = Vec::with_capacity(self.nrows());
        let mut acc: Vec<Option<RF>> = vec![None; other.ncols];
        let mut touched = Vec::new();
        for row in &self.rows {
            for (k, a) in row {
                for (j, b) in &other.rows[*k] {
                    let p = a * b;
                    match &mut acc[*j] {
                        Some(x) => *x += &p,
                        slot @ None => {
                            *slot = Some(p);
                            touched.push(*j);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let mut r = Vec::with_capacity(touched.len());
            for j in touched.drain(..) {
                let v = acc[j].take().unwrap();
                if !v.is_zero() {
                    r.push((j, v));
                }
            }
            out.push(r);
        }
        Ok(Matrix {
            ncols: other.ncols,
            rows: out,
        })
    }

    /// Kronecker product `self ⊗ other` with big-endian index order.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (n2, m2) = (other.nrows(), other.ncols);
        let mut rows = vec![Vec::new(); self.nrows() * n2];
        for (i1, r1) in self.rows.iter().enumerate() {
            for (i2, r2) in other.rows.iter().enumerate() {
                let row = &mut rows[i1 * n2 + i2];
                for (j1, a) in r1 {
                    for (j2, b) in r2 {
                        row.push((j1 * m2 + j2, a * b));
                    }
                }
            }
        }
        Matrix {
            ncols: self.ncols * m2,
            rows,
        }
    }

    pub fn trace(&self) -> RF {
        let mut acc = RF::zero();
        for i in 0..self.nrows().min(self.ncols) {
            acc += &self.get(i, i);
        }
        acc
    }

    /// True when the matrix is `c·I` for some scalar `c`, which is returned.
    pub fn as_scalar(&self) -> Option<RF> {
        if !self.is_square() {
            return None;
        }
        let c = self.get(0, 0);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                if *j != i || *v != c {
                    return None;
                }
            }
            if !c.is_zero() && r.len() != 1 {
                return None;
            }
        }
        Some(c)
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(i, j, _)| i == j)
    }

    /// Reduced row echelon form over `Q(q)` and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows: Vec<Vec<(usize, RF)>> = self.rows.clone();
        let mut pivots: Vec<(usize, Vec<(usize, RF)>)> = Vec::new();
        // Forward elimination with pivots normalized to 1.
        for mut r in rows.drain(..) {
            for (pc, prow) in &pivots {
                if let Ok(k) = r.binary_search_by_key(pc, |(c, _)| *c) {
                    let f = r[k].1.clone();
                    r = merge_rows(&r, prow, |x, y| x - &(&f * y));
                }
            }
            if let Some((lead, lv)) = r.first().cloned() {
                let inv = lv.inv().expect("nonzero pivot");
                for (_, v) in r.iter_mut() {
                    *v = &*v * &inv;
                }
                // Keep earlier pivot rows reduced with respect to the new pivot.
                for (_, prow) in pivots.iter_mut() {
                    if let Ok(k) = prow.binary_search_by_key(&lead, |(c, _)| *c) {
                        let f = prow[k].1.clone();
                        *prow = merge_rows(prow, &r, |x, y| x - &(&f * y));
                    }
                }
                pivots.push((lead, r));
            }
        }
        pivots.sort_by_key(|(c, _)| *c);
        let cols = pivots.iter().map(|(c, _)| *c).collect();
        let out = Matrix {
            ncols: self.ncols,
            rows: pivots.into_iter().map(|(_, r)| r).collect(),
        };
        (out, cols)
    }

    pub fn rank(&self) -> usize {
        super::echelon::rank_of(self)
    }

    /// Basis of the right kernel `{x : A x = 0}` in reduced form: one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<RF>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![None; self.ncols];
        for (k, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(k);
        }
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![RF::zero(); self.ncols];
            v[free] = RF::one();
            for (k, &pc) in pivots.iter().enumerate() {
                let x = r.get(k, free);
                if !x.is_zero() {
                    v[pc] = -x;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Echelon basis of the column space.
    pub fn image(&self) -> Vec<Vec<RF>> {
        let (r, _) = self.transpose().rref();
        r.to_dense()
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.nrows();
        let aug = Matrix {
            ncols: 2 * n,
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let mut row = r.clone();
                    row.push((n + i, RF::one()));
                    row
                })
                .collect(),
        };
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular(format!("{n}x{n} matrix has rank below {n}")));
        }
        Ok(Matrix {
            ncols: n,
            rows: r
                .rows
                .iter()
                .take(n)
                .map(|row| row.iter().filter(|(c, _)| *c >= n).map(|(c, v)| (c - n, v.clone())).collect())
                .collect(),
        })
    }

    /// Solve `A x = b` requiring a unique solution.
    pub fn solve_unique(&self, b: &[RF]) -> Result<Vec<RF>> {
        if b.len() != self.nrows() {
            return Err(Error::Shape("right-hand side length mismatch".into()));
        }
        let n = self.ncols;
        let aug = Matrix {
            ncols: n + 1,
            rows: self
                .rows
                .iter()
                .zip(b)
                .map(|(r, bi)| {
                    let mut row = r.clone();
                    if !bi.is_zero() {
                        row.push((n, bi.clone()));
                    }
                    row
                })
                .collect(),
        };
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&n) {
            return Err(Error::Singular("inconsistent linear system".into()));
        }
        if pivots.len() < n {
            return Err(Error::Singular(format!(
                "solution not unique: {} free unknowns",
                n - pivots.len()
            )));
        }
        Ok((0..n).map(|k| r.get(k, n)).collect())
    }

    pub fn apply(&self, x: &[RF]) -> Vec<RF> {
        self.rows
            .iter()
            .map(|r| {
                let mut acc = RF::zero();
                for (j, v) in r {
                    acc += &(v * &x[*j]);
                }
                acc
            })
            .collect()
    }

    /// First differing position against `other`, if any.
    pub fn first_difference(&self, other: &Matrix) -> Option<(usize, usize)> {
        if self.nrows() != other.nrows() || self.ncols != other.ncols {
            return Some((0, 0));
        }
        for i in 0..self.nrows() {
            if self.rows[i] != other.rows[i] {
                let mut cols: Vec<usize> =
                    self.rows[i].iter().chain(&other.rows[i]).map(|(c, _)| *c).collect();
                cols.sort_unstable();
                for j in cols {
                    if self.get(i, j) != other.get(i, j) {
                        return Some((i, j));
                    }
                }
            }
        }
        None
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.nrows() != other.nrows() || self.ncols != other.ncols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.nrows(),
                self.ncols,
                other.nrows(),
                other.ncols
            )));
        }
        Ok(())
    }
}

pub(crate) fn merge_rows(
    a: &[(usize, RF)],
    b: &[(usize, RF)],
    f: impl Fn(&RF, &RF) -> RF,
) -> Vec<(usize, RF)> {
    let zero = RF::zero();
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (c, v) = match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                i += 1;
                j += 1;
                (*ca, f(va, vb))
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                i += 1;
                (*ca, f(va, &zero))
            }
            (Some((ca, va)), None) => {
                i += 1;
                (*ca, f(va, &zero))
            }
            (_, Some((cb, vb))) => {
                j += 1;
                (*cb, f(&zero, vb))
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.nrows(), self.ncols)?;
        for r in self.to_dense() {
            let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_solve() {
        let a = Matrix::from_dense(vec![
            vec!["q".parse().unwrap(), RF::one()],
            vec![RF::one(), RF::zero()],
        ])
        .unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(2));
        let x = a.solve_unique(&[RF::one(), RF::from_int(2)]).unwrap();
        assert_eq!(a.apply(&x), vec![RF::one(), RF::from_int(2)]);
        let sing = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(matches!(sing.inverse(), Err(Error::Singular(_))));
        assert!(sing.solve_unique(&[RF::one(), RF::from_int(2)]).is_err());
    }

    #[test]
    fn kernel_and_image() {
        let a = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.apply(v).iter().all(RF::is_zero));
        }
        assert_eq!(a.image().len(), 1);
    }

    #[test]
    fn kron_is_big_endian() {
        let a = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let i = Matrix::identity(2);
        let k = a.kron(&i);
        // (0,x) -> (1,x): row index 0*2+x, column 1*2+x
        assert_eq!(k.get(0, 2), RF::one());
        assert_eq!(k.get(1, 3), RF::one());
        assert_eq!(k.nnz(), 2);
    }
}
