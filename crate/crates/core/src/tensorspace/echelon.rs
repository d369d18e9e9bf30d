//! Fraction-free row echelon forms over `Z[q]`.
//!
//! Rows over `Q(q)` are scaled to primitive rows over `Z[q]` (denominators and `q`-powers
//! cleared, polynomial content removed). Elimination combines two rows with the cofactors of
//! the gcd of their entries in the pivot column, then strips content again, so entries never
//! leave `Z[q]` and stay small. The leading column of a row is its smallest column index.

use std::collections::BTreeMap;

use num_traits::Signed;

use super::matrix::Matrix;
use crate::scalars::{Poly, RationalFunction as RF};

pub type PolyRow = Vec<(usize, Poly)>;

/// Convert a row over `Q(q)` into a primitive row over `Z[q]` spanning the same line.
pub fn to_poly_row(row: &[(usize, RF)]) -> PolyRow {
    if row.is_empty() {
        return Vec::new();
    }
    let min_shift = row.iter().map(|(_, v)| v.shift()).min().unwrap();
    let mut den = Poly::one();
    for (_, v) in row {
        if !v.denom().is_one() {
            let g = Poly::gcd(&den, v.denom());
            den = &den * &v.denom().div_exact(&g);
        }
    }
    let out: PolyRow = row
        .iter()
        .map(|(c, v)| {
            let cof = den.div_exact(v.denom());
            let p = (&cof * v.numer()).shl((v.shift() - min_shift) as usize);
            (*c, p)
        })
        .collect();
    make_primitive(out)
}

/// Clear denominators and `q`-powers without removing content: returns `(row, f)` with
/// `row = f · input` entrywise, all entries in `Z[q]`.
pub fn to_poly_row_exact(row: &[(usize, RF)]) -> (PolyRow, RF) {
    if row.is_empty() {
        return (Vec::new(), RF::one());
    }
    let min_shift = row.iter().map(|(_, v)| v.shift()).min().unwrap();
    let mut den = Poly::one();
    for (_, v) in row {
        if !v.denom().is_one() {
            let g = Poly::gcd(&den, v.denom());
            den = &den * &v.denom().div_exact(&g);
        }
    }
    let out = row
        .iter()
        .map(|(c, v)| {
            let cof = den.div_exact(v.denom());
            (*c, (&cof * v.numer()).shl((v.shift() - min_shift) as usize))
        })
        .collect();
    (out, RF::from_parts(den, Poly::one(), -min_shift))
}

/// Divide out the common polynomial factor and fix the sign of the leading entry.
pub fn make_primitive(mut row: PolyRow) -> PolyRow {
    if row.is_empty() {
        return row;
    }
    let v = row.iter().map(|(_, p)| p.valuation()).min().unwrap();
    let mut g = Poly::zero();
    for (_, p) in &row {
        g = Poly::gcd(&g, &p.shr(v));
        if g.is_one() {
            break;
        }
    }
    let neg = row[0].1.lc().is_negative();
    if v > 0 || !g.is_one() || neg {
        let g = if neg { -&g } else { g };
        for (_, p) in row.iter_mut() {
            *p = p.shr(v).div_exact(&g);
        }
    }
    row
}

fn cost(row: &PolyRow) -> (usize, u64) {
    (row.len(), row.iter().map(|(_, p)| p.weight()).sum())
}

/// `a*x - b*y` on sparse rows.
fn combine(a: &Poly, x: &PolyRow, b: &Poly, y: &PolyRow) -> PolyRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (c, v) = match (x.get(i), y.get(j)) {
            (Some((cx, vx)), Some((cy, vy))) if cx == cy => {
                i += 1;
                j += 1;
                (*cx, &(a * vx) - &(b * vy))
            }
            (Some((cx, vx)), Some((cy, _))) if cx < cy => {
                i += 1;
                (*cx, a * vx)
            }
            (Some((cx, vx)), None) => {
                i += 1;
                (*cx, a * vx)
            }
            (_, Some((cy, vy))) => {
                j += 1;
                (*cy, -&(b * vy))
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

/// Eliminate column `col` of `row` using `pivot` (whose leading column is `col`).
/// Returns the new row and the factor `a` with `new = a*row - b*pivot` before content removal.
fn eliminate(row: &PolyRow, pivot: &PolyRow, col: usize) -> (PolyRow, Poly) {
    let pc = &pivot[0].1;
    let rc = &row.iter().find(|(c, _)| *c == col).expect("column present").1;
    let g = Poly::gcd(pc, rc);
    let a = pc.div_exact(&g);
    let b = rc.div_exact(&g);
    (combine(&a, row, &b, pivot), a)
}

/// An echelon basis keyed by leading column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, PolyRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = &PolyRow> {
        self.pivots.values()
    }

    /// Add a row to the span. Returns true when the rank grew.
    ///
    /// When the incoming row is cheaper than the pivot it collides with, the two swap roles,
    /// which keeps pivot rows sparse (a Markowitz-style choice restricted to one column).
    pub fn insert(&mut self, row: PolyRow) -> bool {
        let mut row = make_primitive(row);
        loop {
            let Some(&(lead, _)) = row.first() else {
                return false;
            };
            match self.pivots.get_mut(&lead) {
                None => {
                    self.pivots.insert(lead, row);
                    return true;
                }
                Some(p) => {
                    if cost(&row) < cost(p) {
                        std::mem::swap(p, &mut row);
                    }
                    let (r, _) = eliminate(&row, p, lead);
                    row = make_primitive(r);
                }
            }
        }
    }

    /// Reduce `target` so that none of its entries sits in a pivot column.
    ///
    /// Returns `(residual, scale)` where `residual / scale` equals `target` minus a combination
    /// of basis rows. The residual is zero iff `target` lies in the span.
    pub fn reduce(&self, target: PolyRow) -> (PolyRow, RF) {
        let mut row = target;
        let mut scale = RF::one();
        let mut from = 0usize;
        loop {
            let next = row
                .iter()
                .map(|(c, _)| *c)
                .find(|c| *c >= from && self.pivots.contains_key(c));
            let Some(col) = next else {
                return (row, scale);
            };
            let (r, a) = eliminate(&row, &self.pivots[&col], col);
            scale = &scale * &RF::from_parts(a, Poly::one(), 0);
            let before = content_factor(&r);
            row = match before {
                Some(g) => {
                    scale = scale.checked_div(&g).expect("nonzero content");
                    divide_row(r, &g)
                }
                None => r,
            };
            from = col + 1;
        }
    }

    pub fn contains(&self, target: PolyRow) -> bool {
        self.reduce(target).0.is_empty()
    }
}

/// The content (gcd of entries, with `q`-power) of a row, if not 1.
fn content_factor(row: &PolyRow) -> Option<RF> {
    if row.is_empty() {
        return None;
    }
    let v = row.iter().map(|(_, p)| p.valuation()).min().unwrap();
    let mut g = Poly::zero();
    for (_, p) in row {
        g = Poly::gcd(&g, &p.shr(v));
        if g.is_one() {
            break;
        }
    }
    if v == 0 && g.is_one() {
        None
    } else {
        Some(RF::from_parts(g, Poly::one(), v as i64))
    }
}

fn divide_row(row: PolyRow, g: &RF) -> PolyRow {
    let v = g.shift() as usize;
    row.into_iter()
        .map(|(c, p)| (c, p.shr(v).div_exact(g.numer())))
        .collect()
}

/// Rank over `Q(q)` by fraction-free elimination.
pub fn rank_of(m: &Matrix) -> usize {
    let mut rows: Vec<PolyRow> = m.rows().iter().map(|r| to_poly_row(r)).collect();
    rows.sort_by_key(cost);
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Convert a residual back to `Q(q)` values.
pub fn residual_values(residual: &PolyRow, scale: &RF) -> Vec<(usize, RF)> {
    residual
        .iter()
        .map(|(c, p)| (*c, RF::from_parts(p.clone(), Poly::one(), 0).checked_div(scale).expect("nonzero scale")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RF {
        s.parse().unwrap()
    }

    #[test]
    fn residual_of_non_member() {
        // span{ab - q*ba} in coordinates (ab, ba); target ab - ba leaves (q - 1) ba
        let mut e = Echelon::new();
        e.insert(to_poly_row(&[(0, RF::one()), (1, -RF::q())]));
        let (res, scale) = e.reduce(to_poly_row(&[(0, RF::one()), (1, RF::from_int(-1))]));
        let vals = residual_values(&res, &scale);
        assert_eq!(vals, vec![(1, rf("q - 1"))]);
        assert!(e.contains(to_poly_row(&[(0, rf("2/q")), (1, RF::from_int(-2))])));
    }

    #[test]
    fn exact_conversion_tracks_factor() {
        let row = vec![(0, rf("1/(q+1)")), (3, rf("q^-2")), (4, rf("(q-1)/2"))];
        let (p, f) = to_poly_row_exact(&row);
        for ((c, v), (c2, pv)) in row.iter().zip(&p) {
            assert_eq!(c, c2);
            assert_eq!(&(v * &f), &RF::from_parts(pv.clone(), Poly::one(), 0));
        }
    }

    #[test]
    fn rank_with_rational_entries() {
        let m = Matrix::from_dense(vec![
            vec![rf("1/(q+1)"), rf("q"), RF::zero()],
            vec![RF::one(), rf("q^2 + q"), RF::zero()],
            vec![RF::zero(), RF::one(), rf("q^-3")],
        ])
        .unwrap();
        assert_eq!(rank_of(&m), 2);
    }
}
