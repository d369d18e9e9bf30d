use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::matrix::{copies_product, f_copies, NCMatrix};
use super::poly::{Alphabet, NCPolynomial};
use crate::braidings::check_compatible;
use crate::error::{Error, Result};
use crate::scalars::RationalFunction as RF;
use crate::symmetrizers::{build_tower, TowerKind};
use crate::tensorspace::echelon::{to_poly_row, Echelon};
use crate::tensorspace::TensorOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum System {
    /// `R12 L̄1 L̄2 = L̄1 L̄2 R12`.
    Qma,
    /// `S^(2) L̄1 L̄2 A^(2) = 0`.
    HqaSymSkew,
    /// `A^(2) L̄1 L̄2 S^(2) = 0`.
    HqaSkewSym,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Qma,
    HqaSymSkew,
    HqaSkewSym,
    TensorSquare,
    Yangian,
    Custom,
}

/// Generators and relations. `weights`, when present, assigns each generator a weight used to
/// bound searches in inhomogeneous presentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub alphabet: Alphabet,
    pub relations: Vec<NCPolynomial>,
    pub source: Source,
    pub weights: Option<Vec<u32>>,
    /// Size of the generating matrix for QMA-type presentations.
    pub matrix_dim: Option<usize>,
}

/// Keep relations that are nonzero and independent of the ones kept before.
pub fn dedup_relations(rels: impl IntoIterator<Item = NCPolynomial>) -> Vec<NCPolynomial> {
    let mut cols: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for r in rels {
        if r.is_zero() {
            continue;
        }
        let mut row: Vec<(usize, RF)> = r
            .terms()
            .map(|(w, c)| {
                let n = cols.len();
                (*cols.entry(w.clone()).or_insert(n), c.clone())
            })
            .collect();
        row.sort_by_key(|(c, _)| *c);
        if e.insert(to_poly_row(&row)) {
            out.push(r);
        }
    }
    out
}

/// Whether two families of elements span the same subspace.
pub fn same_span(a: &[NCPolynomial], b: &[NCPolynomial]) -> bool {
    let ra = dedup_relations(a.iter().cloned()).len();
    let rb = dedup_relations(b.iter().cloned()).len();
    let rab = dedup_relations(a.iter().chain(b).cloned()).len();
    ra == rab && rb == rab
}

/// Entries of a matrix identity `M = 0`.
fn entries_of(m: &NCMatrix) -> Vec<NCPolynomial> {
    m.entries().map(|(_, _, p)| p.clone()).collect()
}

/// Defining relations from the generating matrix `l` and the F-copies.
pub fn defining_relations(r: &TensorOperator, f: &TensorOperator, l: &NCMatrix, system: System) -> Result<Vec<NCPolynomial>> {
    let copies = f_copies(l, f, 2)?;
    let ll = copies_product(&copies)?;
    let m = match system {
        System::Qma => ll.op_mul(r)?.sub(&ll.mul_op(r)?)?,
        System::HqaSymSkew | System::HqaSkewSym => {
            let a = build_tower(r, TowerKind::Skew, 2)?.levels[1].clone();
            let s = build_tower(r, TowerKind::Symmetric, 2)?.levels[1].clone();
            let (left, right) = if system == System::HqaSymSkew { (s, a) } else { (a, s) };
            ll.op_mul(&left)?.mul_op(&right)?
        }
    };
    Ok(entries_of(&m))
}

/// The algebra `L(R, F)` (or its half-quantum versions) on generators `l_ij`.
pub fn present(r: &TensorOperator, f: &TensorOperator, system: System) -> Result<Presentation> {
    if !check_compatible(r, f)? {
        return Err(Error::Incompatible("R and F fail the compatibility relations".into()));
    }
    let n = r.dim();
    let l = NCMatrix::generating(n, 0);
    let rels = dedup_relations(defining_relations(r, f, &l, system)?);
    Ok(Presentation {
        alphabet: Alphabet::matrix_entries(n),
        relations: rels,
        source: match system {
            System::Qma => Source::Qma,
            System::HqaSymSkew => Source::HqaSymSkew,
            System::HqaSkewSym => Source::HqaSkewSym,
        },
        weights: None,
        matrix_dim: Some(n),
    })
}

impl Presentation {
    pub fn custom(alphabet: Alphabet, relations: Vec<NCPolynomial>) -> Self {
        Presentation {
            alphabet,
            relations,
            source: Source::Custom,
            weights: None,
            matrix_dim: None,
        }
    }

    /// Generating matrix `L` over this alphabet (first `N²` generators).
    pub fn generating_matrix(&self) -> Result<NCMatrix> {
        let n = self
            .matrix_dim
            .ok_or_else(|| Error::Unsupported("presentation has no generating matrix".into()))?;
        Ok(NCMatrix::generating(n, 0))
    }

    /// Adjoin a central generator `z` with `target · z = 1` (a formal inverse of a central
    /// element). The result is inhomogeneous; `z` has weight 0, other generators weight 1.
    pub fn with_central_inverse(&self, name: &str, target: &NCPolynomial) -> Result<Presentation> {
        let mut names = self.alphabet.names().to_vec();
        names.push(name.to_string());
        let alphabet = Alphabet::new(names)?;
        let z = self.alphabet.len() as u32;
        let zp = NCPolynomial::generator(z);
        let mut relations = self.relations.clone();
        for g in 0..z {
            relations.push(zp.commutator(&NCPolynomial::generator(g)));
        }
        relations.push(target.mul(&zp).sub(&NCPolynomial::one()));
        let mut weights = self.weights.clone().unwrap_or_else(|| vec![1; z as usize]);
        weights.push(0);
        Ok(Presentation {
            alphabet,
            relations,
            source: self.source,
            weights: Some(weights),
            matrix_dim: self.matrix_dim,
        })
    }

    pub fn to_json_value(&self) -> PresentationJson {
        PresentationJson {
            source: self.source,
            alphabet: self.alphabet.names().to_vec(),
            relations: self.relations.iter().map(|r| r.to_map(&self.alphabet)).collect(),
            weights: self.weights.clone(),
            matrix_dim: self.matrix_dim,
        }
    }

    pub fn from_json_value(v: &PresentationJson) -> Result<Self> {
        let alphabet = Alphabet::new(v.alphabet.clone())?;
        let relations = v
            .relations
            .iter()
            .map(|m| NCPolynomial::from_map(m, &alphabet))
            .collect::<Result<Vec<_>>>()?;
        Ok(Presentation {
            alphabet,
            relations,
            source: v.source,
            weights: v.weights.clone(),
            matrix_dim: v.matrix_dim,
        })
    }
}

/// Exchange format: alphabet names and relations as `{word: coefficient}` maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub source: Source,
    pub alphabet: Vec<String>,
    pub relations: Vec<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_dim: Option<usize>,
}

/// `A ⊗ A` for an RTT presentation: generators `x_1` (first copy) and `x_2` (second copy),
/// both relation sets, and commutation between the copies.
pub fn tensor_square(pres: &Presentation, f_is_flip: bool) -> Result<Presentation> {
    if pres.source != Source::Qma || !f_is_flip {
        return Err(Error::Unsupported("tensor square is built for RTT presentations only".into()));
    }
    let n = pres.alphabet.len() as u32;
    let mut names: Vec<String> = pres.alphabet.names().iter().map(|s| format!("{s}_1")).collect();
    names.extend(pres.alphabet.names().iter().map(|s| format!("{s}_2")));
    let alphabet = Alphabet::new(names)?;
    let mut relations: Vec<NCPolynomial> = pres.relations.clone();
    relations.extend(pres.relations.iter().map(|r| r.map_generators(|g| g + n)));
    for a in 0..n {
        for b in 0..n {
            relations.push(NCPolynomial::generator(a).commutator(&NCPolynomial::generator(n + b)));
        }
    }
    Ok(Presentation {
        alphabet,
        relations,
        source: Source::TensorSquare,
        weights: None,
        matrix_dim: pres.matrix_dim,
    })
}

/// `Δ(l_ij) = Σ_k l_ik ⊗ l_kj` applied to an element of the RTT algebra.
pub fn coproduct(x: &NCPolynomial, n: usize) -> NCPolynomial {
    let total = (n * n) as u32;
    let images: Vec<NCPolynomial> = (0..n * n)
        .map(|g| {
            let (i, j) = (g / n, g % n);
            let mut acc = NCPolynomial::zero();
            for k in 0..n {
                let left = NCPolynomial::generator((i * n + k) as u32);
                let right = NCPolynomial::generator(total + (k * n + j) as u32);
                acc.add_assign(&left.mul(&right));
            }
            acc
        })
        .collect();
    x.substitute(&images)
}

/// `x ⊗ y` in the tensor square.
pub fn tensor_elements(x: &NCPolynomial, y: &NCPolynomial, n_gens: u32) -> NCPolynomial {
    x.mul(&y.map_generators(|g| g + n_gens))
}
