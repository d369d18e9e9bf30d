use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::RationalFunction as RF;

/// A word in the generators, as generator indices.
pub type Word = Vec<u32>;

/// Generator names. Generators are ordered by index; this order is used only for storage.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if n == "q" || n.is_empty() {
                return Err(Error::Invalid(format!("reserved or empty generator name {n:?}")));
            }
            if !seen.insert(n) {
                return Err(Error::Invalid(format!("duplicate generator {n}")));
            }
        }
        Ok(Alphabet { names })
    }

    /// `a, b, c, d` for `N = 2`, otherwise `l11, l12, …` (row-major).
    pub fn matrix_entries(n: usize) -> Self {
        let names = if n == 2 {
            ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect()
        } else {
            (0..n * n).map(|g| format!("l{}{}", g / n + 1, g % n + 1)).collect()
        };
        Alphabet { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, g: u32) -> &str {
        &self.names[g as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn word_string(&self, w: &[u32]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|g| self.name(*g)).collect::<Vec<_>>().join("*")
    }

    /// Parse `"a*d"` (or `"1"`) into a word.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "1" {
            return Ok(Vec::new());
        }
        s.split('*')
            .map(|t| {
                self.index(t.trim()).ok_or_else(|| Error::Parse {
                    input: s.to_string(),
                    pos: 0,
                    msg: format!("unknown generator {t:?}"),
                })
            })
            .collect()
    }
}

/// Finite `Q(q)`-linear combination of words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NCPolynomial {
    terms: BTreeMap<Word, RF>,
}

impl NCPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(RF::one())
    }

    pub fn scalar(c: RF) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn generator(g: u32) -> Self {
        Self::term(vec![g], RF::one())
    }

    pub fn term(w: Word, c: RF) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, RF)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: RF) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &RF)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[u32]) -> RF {
        self.terms.get(w).cloned().unwrap_or_else(RF::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Maximum word length; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    /// The scalar value of a degree-0 element.
    pub fn as_scalar(&self) -> Option<RF> {
        match self.degree() {
            None => Some(RF::zero()),
            Some(0) => Some(self.coeff(&[])),
            _ => None,
        }
    }

    pub fn homogeneous_parts(&self) -> BTreeMap<usize, NCPolynomial> {
        let mut out: BTreeMap<usize, NCPolynomial> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.len()).or_default().terms.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &RF) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NCPolynomial {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&RF::from_int(-1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Replace every generator by an element (an algebra morphism from the free algebra).
    pub fn substitute(&self, images: &[NCPolynomial]) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut t = Self::scalar(c.clone());
            for g in w {
                t = t.mul(&images[*g as usize]);
            }
            out.add_assign(&t);
        }
        out
    }

    /// Relabel generators through a map.
    pub fn map_generators(&self, f: impl Fn(u32) -> u32) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.iter().map(|g| f(*g)).collect(), c.clone())))
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<u32> {
        self.terms.keys().flat_map(|w| w.iter().copied()).max()
    }

    /// Text form over an alphabet: terms `coef*word` in storage order.
    pub fn display(&self, alphabet: &Alphabet) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.leading_sign() < 0 && {
                let s = (-c).to_string();
                !s.contains(' ')
            };
            let mag = if neg { -c } else { c.clone() };
            let body = if w.is_empty() {
                scalar_factor(&mag, true)
            } else if mag.is_one() {
                alphabet.word_string(w)
            } else {
                format!("{}*{}", scalar_factor(&mag, false), alphabet.word_string(w))
            };
            match (i, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    let _ = write!(out, "-{body}");
                }
                (_, false) => {
                    let _ = write!(out, " + {body}");
                }
                (_, true) => {
                    let _ = write!(out, " - {body}");
                }
            }
        }
        out
    }

    /// JSON-friendly map `word -> coefficient string`.
    pub fn to_map(&self, alphabet: &Alphabet) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(w, c)| (alphabet.word_string(w), c.to_string()))
            .collect()
    }

    pub fn from_map(map: &BTreeMap<String, String>, alphabet: &Alphabet) -> Result<Self> {
        let mut p = Self::zero();
        for (w, c) in map {
            p.add_term(alphabet.parse_word(w)?, c.parse()?);
        }
        Ok(p)
    }
}

/// A scalar as a factor: bare when it is a single token, parenthesised otherwise.
fn scalar_factor(c: &RF, standalone: bool) -> String {
    let s = c.to_string();
    let simple = !s.contains(' ') && !s.contains('/') && !s.starts_with('-');
    if simple || (standalone && !s.contains(' ')) {
        s
    } else {
        format!("({s})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abcd() -> Alphabet {
        Alphabet::matrix_entries(2)
    }

    #[test]
    fn arithmetic() {
        let a = NCPolynomial::generator(0);
        let b = NCPolynomial::generator(1);
        let ab = a.mul(&b);
        let ba = b.mul(&a);
        assert_ne!(ab, ba);
        let c = ab.sub(&ba.scale(&RF::q()));
        assert_eq!(c.len(), 2);
        assert!(c.sub(&c).is_zero());
        assert_eq!(a.add(&b).pow(2).len(), 4);
        assert_eq!(a.commutator(&a), NCPolynomial::zero());
        assert_eq!(c.degree(), Some(2));
        assert!(NCPolynomial::zero().as_scalar().unwrap().is_zero());
    }

    #[test]
    fn display_and_map_round_trip() {
        let al = abcd();
        let p = NCPolynomial::from_terms([
            (vec![0, 3], RF::one()),
            (vec![1, 2], -RF::q_pow(-1)),
            (vec![], "1/2".parse().unwrap()),
            (vec![3, 0], "q + 1".parse().unwrap()),
        ]);
        assert_eq!(p.display(&al), "1/2 + a*d - q^-1*b*c + (q + 1)*d*a");
        let back = NCPolynomial::from_map(&p.to_map(&al), &al).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn substitution() {
        // a -> a + b, b -> q a
        let a = NCPolynomial::generator(0);
        let b = NCPolynomial::generator(1);
        let imgs = vec![a.add(&b), a.scale(&RF::q())];
        let x = a.mul(&b).substitute(&imgs);
        let expect = a.add(&b).mul(&a.scale(&RF::q()));
        assert_eq!(x, expect);
    }

    #[test]
    fn alphabet_rules() {
        assert!(Alphabet::new(vec!["q".into()]).is_err());
        assert!(Alphabet::new(vec!["a".into(), "a".into()]).is_err());
        let al = Alphabet::matrix_entries(3);
        assert_eq!(al.name(4), "l22");
        assert_eq!(al.parse_word("l11*l23").unwrap(), vec![0, 5]);
    }
}
