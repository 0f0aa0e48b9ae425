use num_complex::Complex64;

use super::{EpWord, FiniteWord, Relation, Similarity};
use crate::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The letters `c_1, .., c_n` of a complex tree; each generates the map
/// `f_j(z) = 1 + c_j z`.
///
/// Invariants: `n >= 2`, `0 < |c_j| < 1`, letters pairwise distinct.
#[derive(Clone, Debug, PartialEq)]
pub struct Alphabet {
    letters: Vec<Complex64>,
}

impl Alphabet {
    pub fn new(letters: Vec<Complex64>) -> Result<Self> {
        if letters.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least two letters, got {}",
                letters.len()
            )));
        }
        for (j, c) in letters.iter().enumerate() {
            let m = c.norm();
            if !m.is_finite() || m <= 0.0 || m >= 1.0 {
                return Err(Error::InvalidAlphabet(format!(
                    "|c_{}| = {m} is not in (0, 1)",
                    j + 1
                )));
            }
        }
        for j in 0..letters.len() {
            for k in j + 1..letters.len() {
                if letters[j] == letters[k] {
                    return Err(Error::InvalidAlphabet(format!(
                        "c_{} and c_{} coincide",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(Self { letters })
    }

    pub fn letters(&self) -> &[Complex64] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Zero-based letter access.
    pub fn letter(&self, symbol: u16) -> Result<Complex64> {
        self.letters
            .get(symbol as usize)
            .copied()
            .ok_or(Error::SymbolOutOfRange {
                symbol: symbol as usize + 1,
                n: self.letters.len(),
            })
    }

    /// `r = max |c_j|`.
    pub fn contraction(&self) -> f64 {
        self.letters.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Radius `r / (1 - r)` of the disk around the root `1` that contains
    /// the whole tree and its tipset.
    pub fn bounding_radius(&self) -> f64 {
        let r = self.contraction();
        r / (1.0 - r)
    }

    fn check_symbols(&self, symbols: &[u16]) -> Result<()> {
        match symbols.iter().copied().find(|&s| s as usize >= self.letters.len()) {
            Some(s) => Err(Error::SymbolOutOfRange {
                symbol: s as usize + 1,
                n: self.letters.len(),
            }),
            None => Ok(()),
        }
    }

    /// `(phi(v), prod(v))` in one pass.
    fn node_and_product(&self, symbols: &[u16]) -> Result<(Complex64, Complex64)> {
        self.check_symbols(symbols)?;
        let mut sum = ONE;
        let mut prod = ONE;
        for &s in symbols {
            prod *= self.letters[s as usize];
            sum += prod;
        }
        Ok((sum, prod))
    }

    /// The node `phi(v) = 1 + v_1 + v_1 v_2 + .. + v_1 .. v_m`; `phi(e_0) = 1`.
    pub fn phi(&self, word: &FiniteWord) -> Result<Complex64> {
        Ok(self.node_and_product(word.symbols())?.0)
    }

    /// The letter product `v_1 v_2 .. v_m`; `1` for the empty word.
    pub fn product(&self, word: &FiniteWord) -> Result<Complex64> {
        self.check_symbols(word.symbols())?;
        Ok(word
            .symbols()
            .iter()
            .fold(ONE, |p, &s| p * self.letters[s as usize]))
    }

    /// Tip point of `u v v v ..` in closed form:
    /// `phi(u) + prod(u) (phi(v) - 1) / (1 - prod(v))`.
    pub fn phi_ep(&self, word: &EpWord) -> Result<Complex64> {
        let (phi_u, prod_u) = self.node_and_product(word.preamble_symbols())?;
        let (phi_v, prod_v) = self.node_and_product(word.period_symbols())?;
        Ok(phi_u + prod_u * (phi_v - 1.0) / (1.0 - prod_v))
    }

    /// `f_v(z) = phi(v) + prod(v) (z - 1)`.
    pub fn similarity(&self, word: &FiniteWord) -> Result<Similarity> {
        let (node, scale) = self.node_and_product(word.symbols())?;
        Ok(Similarity::new(node, scale))
    }

    /// Neighbor map `h_{u,v} = f_u^{-1} ∘ f_v`, i.e.
    /// `z -> 1 + (z - 1) prod(v)/prod(u) + (phi(v) - phi(u))/prod(u)`.
    pub fn neighbor_map(&self, u: &FiniteWord, v: &FiniteWord) -> Result<Similarity> {
        if u.is_empty() || v.is_empty() {
            return Err(Error::InvalidArgument(
                "neighbor map needs nonempty words".into(),
            ));
        }
        let (phi_u, prod_u) = self.node_and_product(u.symbols())?;
        let (phi_v, prod_v) = self.node_and_product(v.symbols())?;
        Ok(Similarity::new(
            1.0 + (phi_v - phi_u) / prod_u,
            prod_v / prod_u,
        ))
    }

    /// `|phi(a) - phi(b)|` for a relation `a ~ b`.
    pub fn check_relation(&self, relation: &Relation) -> Result<f64> {
        Ok((self.phi_ep(relation.left())? - self.phi_ep(relation.right())?).norm())
    }

    /// Whether the pieces `F_u` and `F_v` coincide exactly, detected by
    /// equal nodes and equal letter products (so `f_u = f_v`).
    pub fn exact_piece_overlap(&self, u: &FiniteWord, v: &FiniteWord, tol: f64) -> Result<bool> {
        match (u.first(), v.first()) {
            (Some(a), Some(b)) if a != b => {}
            _ => {
                return Err(Error::InvalidArgument(
                    "piece overlap needs nonempty words with different first letters".into(),
                ))
            }
        }
        let (phi_u, prod_u) = self.node_and_product(u.symbols())?;
        let (phi_v, prod_v) = self.node_and_product(v.symbols())?;
        Ok((phi_u - phi_v).norm() <= tol && (prod_u - prod_v).norm() <= tol)
    }
}
