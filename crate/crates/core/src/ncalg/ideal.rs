//! Membership in the two-sided ideal of a presentation.
//!
//! For presentations whose relations are homogeneous in word length, the degree-`d` part of
//! the ideal is spanned by `w1 · rel · w2` with `|w1| + deg rel + |w2| = d`. Eliminating that
//! spanning set decides membership exactly, degree by degree. For inhomogeneous presentations
//! a bounded box of words (length and weight caps) is used instead; a zero residual is then a
//! proof, a nonzero residual only means "not found inside the box".
//!
//! Each slice splits into connected components (rows sharing a word are connected), and only
//! the components met by a query are eliminated. Components are eliminated lazily and cached.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use super::poly::{NCPolynomial, Word};
use super::present::Presentation;
use crate::error::{Error, Result};
use crate::scalars::{Poly, RationalFunction as RF};
use crate::tensorspace::echelon::{to_poly_row, to_poly_row_exact, Echelon, PolyRow};

/// Size limits for slices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    /// Largest word length handled for graded presentations.
    pub degree_cap: usize,
    /// Word-length bound of the box used for inhomogeneous presentations.
    pub box_length: usize,
    /// Weight bound of the box (sum of generator weights); `None` means unbounded.
    pub box_weight: Option<u32>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            degree_cap: 8,
            box_length: 4,
            box_weight: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// Canonical remainder: zero iff the element lies in the ideal (graded case).
    pub residual: NCPolynomial,
}

impl Reduction {
    pub fn is_zero(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct CentralityCheck {
    pub central: bool,
    /// First generator (by index) failing to commute, with the residual of the commutator.
    pub witness: Option<(u32, NCPolynomial)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum SliceKey {
    Degree(usize),
    Box,
}

struct Slice {
    col_of: HashMap<Word, usize>,
    comp_of_col: Vec<usize>,
    comp_rows: Vec<Vec<PolyRow>>,
    echelons: Vec<OnceLock<Echelon>>,
    words: Vec<Word>,
}

/// Membership oracle with memoised slices. Safe to query from several threads.
pub struct IdealOracle {
    pres: Presentation,
    config: OracleConfig,
    graded: bool,
    /// Relations as (words, coefficients over Z[q]) rows, ready to be shifted by multipliers.
    rel_rows: Vec<Vec<(Word, Poly)>>,
    slices: Mutex<HashMap<SliceKey, Arc<OnceLock<Arc<Slice>>>>>,
}

fn word_order(a: &Word, b: &Word) -> std::cmp::Ordering {
    b.len().cmp(&a.len()).then_with(|| a.cmp(b))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl IdealOracle {
    pub fn new(pres: Presentation, config: OracleConfig) -> Self {
        let graded = pres.relations.iter().all(|r| r.is_homogeneous());
        let rel_rows = pres
            .relations
            .iter()
            .filter(|r| !r.is_zero())
            .map(|r| {
                let words: Vec<&Word> = r.terms().map(|(w, _)| w).collect();
                let vals: Vec<(usize, RF)> = r.terms().enumerate().map(|(i, (_, c))| (i, c.clone())).collect();
                to_poly_row(&vals).into_iter().map(|(i, p)| (words[i].clone(), p)).collect()
            })
            .collect();
        IdealOracle {
            pres,
            config,
            graded,
            rel_rows,
            slices: Mutex::new(HashMap::new()),
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn config(&self) -> OracleConfig {
        self.config
    }

    /// Whether every relation is homogeneous, so that verdicts are exact per degree.
    pub fn is_graded(&self) -> bool {
        self.graded
    }

    fn weight_of(&self, w: &[u32]) -> u32 {
        match &self.pres.weights {
            Some(ws) => w.iter().map(|g| ws[*g as usize]).sum(),
            None => w.len() as u32,
        }
    }

    fn in_box(&self, w: &[u32]) -> bool {
        w.len() <= self.config.box_length && self.config.box_weight.is_none_or(|b| self.weight_of(w) <= b)
    }

    /// All words of length `≤ max_len` (or exactly `exact`) and weight `≤ max_w`.
    fn words_up_to(&self, max_len: usize, max_w: Option<u32>, exact: Option<usize>) -> Vec<Word> {
        let n = self.pres.alphabet.len() as u32;
        let mut out = Vec::new();
        let mut stack: Vec<Word> = vec![Vec::new()];
        while let Some(w) = stack.pop() {
            if exact.is_none_or(|e| e == w.len()) {
                out.push(w.clone());
            }
            if w.len() < max_len && exact.is_none_or(|e| w.len() < e) {
                for g in 0..n {
                    let mut x = w.clone();
                    x.push(g);
                    if max_w.is_none_or(|b| self.weight_of(&x) <= b) {
                        stack.push(x);
                    }
                }
            }
        }
        out
    }

    fn spanning_rows(&self, key: SliceKey) -> Vec<Vec<(Word, Poly)>> {
        let mut rows = Vec::new();
        match key {
            SliceKey::Degree(d) => {
                let mut by_len: HashMap<usize, Vec<Word>> = HashMap::new();
                for rel in &self.rel_rows {
                    let e = rel[0].0.len();
                    if e > d {
                        continue;
                    }
                    for k in 0..=(d - e) {
                        for len in [k, d - e - k] {
                            by_len.entry(len).or_insert_with(|| self.words_up_to(len, None, Some(len)));
                        }
                        for w1 in &by_len[&k] {
                            for w2 in &by_len[&(d - e - k)] {
                                rows.push(rel.iter().map(|(w, p)| ([w1.as_slice(), w, w2].concat(), p.clone())).collect());
                            }
                        }
                    }
                }
            }
            SliceKey::Box => {
                let max_len = self.config.box_length;
                let max_w = self.config.box_weight;
                let all = self.words_up_to(max_len, max_w, None);
                for rel in &self.rel_rows {
                    let rl = rel.iter().map(|(w, _)| w.len()).max().unwrap_or(0);
                    let rw = rel.iter().map(|(w, _)| self.weight_of(w)).max().unwrap_or(0);
                    if rl > max_len {
                        continue;
                    }
                    for w1 in &all {
                        if w1.len() + rl > max_len || max_w.is_some_and(|b| self.weight_of(w1) + rw > b) {
                            continue;
                        }
                        for w2 in &all {
                            if w1.len() + w2.len() + rl > max_len
                                || max_w.is_some_and(|b| self.weight_of(w1) + self.weight_of(w2) + rw > b)
                            {
                                continue;
                            }
                            rows.push(rel.iter().map(|(w, p)| ([w1.as_slice(), w, w2].concat(), p.clone())).collect());
                        }
                    }
                }
            }
        }
        rows
    }

    fn build_slice(&self, key: SliceKey) -> Slice {
        let raw = self.spanning_rows(key);
        let mut words: Vec<Word> = raw.iter().flat_map(|r| r.iter().map(|(w, _)| w.clone())).collect();
        words.sort_by(word_order);
        words.dedup();
        let col_of: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut parent: Vec<usize> = (0..words.len()).collect();
        let rows: Vec<PolyRow> = raw
            .into_iter()
            .map(|r| {
                let mut row: PolyRow = r.into_iter().map(|(w, p)| (col_of[&w], p)).collect();
                row.sort_by_key(|(c, _)| *c);
                row
            })
            .collect();
        for row in &rows {
            let a = find(&mut parent, row[0].0);
            for (c, _) in &row[1..] {
                let b = find(&mut parent, *c);
                if a != b {
                    parent[b] = a;
                }
            }
        }
        let mut comp_index: HashMap<usize, usize> = HashMap::new();
        let mut comp_of_col = vec![0; words.len()];
        for (c, slot) in comp_of_col.iter_mut().enumerate() {
            let root = find(&mut parent, c);
            let next = comp_index.len();
            *slot = *comp_index.entry(root).or_insert(next);
        }
        let mut comp_rows: Vec<Vec<PolyRow>> = vec![Vec::new(); comp_index.len()];
        for row in rows {
            comp_rows[comp_of_col[row[0].0]].push(row);
        }
        let echelons = (0..comp_rows.len()).map(|_| OnceLock::new()).collect();
        Slice {
            col_of,
            comp_of_col,
            comp_rows,
            echelons,
            words,
        }
    }

    fn slice(&self, key: SliceKey) -> Arc<Slice> {
        let cell = {
            let mut map = self.slices.lock().expect("slice cache");
            map.entry(key).or_default().clone()
        };
        cell.get_or_init(|| Arc::new(self.build_slice(key))).clone()
    }

    fn echelon<'a>(slice: &'a Slice, comp: usize) -> &'a Echelon {
        slice.echelons[comp].get_or_init(|| {
            let mut rows = slice.comp_rows[comp].clone();
            rows.sort_by_cached_key(|r| (r.len(), r.iter().map(|(_, p)| p.weight()).sum::<u64>()));
            let mut e = Echelon::new();
            for r in rows {
                e.insert(r);
            }
            e
        })
    }

    fn reduce_in(&self, slice: &Slice, x: &NCPolynomial) -> NCPolynomial {
        let mut residual = NCPolynomial::zero();
        let mut by_comp: HashMap<usize, Vec<(usize, RF)>> = HashMap::new();
        for (w, c) in x.terms() {
            match slice.col_of.get(w) {
                Some(&col) => by_comp.entry(slice.comp_of_col[col]).or_default().push((col, c.clone())),
                None => residual.add_term(w.clone(), c.clone()),
            }
        }
        let mut comps: Vec<_> = by_comp.into_iter().collect();
        comps.sort_by_key(|(c, _)| *c);
        let parts: Vec<NCPolynomial> = comps
            .into_par_iter()
            .map(|(comp, mut vals)| {
                vals.sort_by_key(|(c, _)| *c);
                let (row, factor) = to_poly_row_exact(&vals);
                let (res, scale) = Self::echelon(slice, comp).reduce(row);
                let denom = &scale * &factor;
                NCPolynomial::from_terms(res.into_iter().map(|(col, p)| {
                    let v = RF::from_parts(p, Poly::one(), 0).checked_div(&denom).expect("nonzero scale");
                    (slice.words[col].clone(), v)
                }))
            })
            .collect();
        for p in parts {
            residual.add_assign(&p);
        }
        residual
    }

    /// Reduce `x` modulo the ideal, returning the canonical residual.
    pub fn reduce(&self, x: &NCPolynomial) -> Result<Reduction> {
        if self.graded {
            let mut residual = NCPolynomial::zero();
            for (d, part) in x.homogeneous_parts() {
                if d > self.config.degree_cap {
                    return Err(Error::Resource(format!(
                        "degree {d} exceeds the degree cap {}",
                        self.config.degree_cap
                    )));
                }
                let slice = self.slice(SliceKey::Degree(d));
                residual.add_assign(&self.reduce_in(&slice, &part));
            }
            Ok(Reduction { residual })
        } else {
            if let Some((w, _)) = x.terms().find(|(w, _)| !self.in_box(w)) {
                return Err(Error::Resource(format!(
                    "word {} lies outside the search box (length {}, weight {:?})",
                    self.pres.alphabet.word_string(w),
                    self.config.box_length,
                    self.config.box_weight
                )));
            }
            let slice = self.slice(SliceKey::Box);
            Ok(Reduction {
                residual: self.reduce_in(&slice, x),
            })
        }
    }

    pub fn reduces_to_zero(&self, x: &NCPolynomial) -> Result<bool> {
        Ok(self.reduce(x)?.is_zero())
    }

    pub fn equal_mod(&self, x: &NCPolynomial, y: &NCPolynomial) -> Result<bool> {
        self.reduces_to_zero(&x.sub(y))
    }

    /// Commutation with every generator, checked in parallel.
    pub fn is_central(&self, x: &NCPolynomial) -> Result<CentralityCheck> {
        let n = self.pres.alphabet.len() as u32;
        let results: Vec<Result<(u32, NCPolynomial)>> = (0..n)
            .into_par_iter()
            .map(|g| {
                let c = x.commutator(&NCPolynomial::generator(g));
                Ok((g, self.reduce(&c)?.residual))
            })
            .collect();
        let mut witness = None;
        for r in results {
            let (g, res) = r?;
            if !res.is_zero() && witness.is_none() {
                witness = Some((g, res));
            }
        }
        Ok(CentralityCheck {
            central: witness.is_none(),
            witness,
        })
    }

    /// Rank of the degree-`d` slice (graded presentations only).
    pub fn slice_rank(&self, d: usize) -> Result<usize> {
        if !self.graded {
            return Err(Error::Unsupported("slice ranks are defined for graded presentations".into()));
        }
        if d > self.config.degree_cap {
            return Err(Error::Resource(format!("degree {d} exceeds the degree cap")));
        }
        let slice = self.slice(SliceKey::Degree(d));
        Ok((0..slice.comp_rows.len())
            .into_par_iter()
            .map(|c| Self::echelon(&slice, c).rank())
            .sum())
    }
}
