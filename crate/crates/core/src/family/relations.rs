//! Relations that hold at a single parameter, and the two stability
//! predicates built on them.

use std::collections::{BTreeSet, HashMap};

use num_complex::Complex64;

use super::ParametricFamily;
use crate::tree::{Alphabet, EpWord, FiniteWord, Relation};
use crate::{Error, Result};

/// Cap on the number of tip points compared by [`ParametricFamily::relations_at`].
pub const DEFAULT_TIP_BUDGET: usize = 1_000_000;

/// Samples used to decide whether a relation holds on the whole family.
const IDENTITY_SAMPLES: usize = 8;
const IDENTITY_TOL: f64 = 1e-9;

/// Tip words `u t~` with `|u| <= m` and `t` among `tails`, deduplicated.
fn tip_words(n: usize, m: usize, tails: &[FiniteWord], budget: usize) -> Result<Vec<EpWord>> {
    let needed: u128 = (0..=m as u32).map(|k| (n as u128).saturating_pow(k)).sum::<u128>() * tails.len() as u128;
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { what: "tip words", needed, limit: budget as u128 });
    }
    let mut words = BTreeSet::new();
    let mut level = vec![FiniteWord::empty()];
    for k in 0..=m {
        for u in &level {
            for t in tails {
                words.insert(EpWord::new(u.clone(), t.clone())?);
            }
        }
        if k < m {
            level = level.iter().flat_map(|u| (0..n as u16).map(move |j| u.pushed(j))).collect();
        }
    }
    Ok(words.into_iter().collect())
}

/// Pairs of words with different first letters whose tip points lie within
/// `tol` of each other.
fn coincidences(alphabet: &Alphabet, words: &[EpWord], tol: f64) -> Result<Vec<Relation>> {
    let points = words.iter().map(|w| alphabet.phi_ep(w)).collect::<Result<Vec<_>>>()?;
    let cell = tol.max(f64::MIN_POSITIVE);
    let key = |z: Complex64| ((z.re / cell).floor() as i64, (z.im / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &z) in points.iter().enumerate() {
        grid.entry(key(z)).or_default().push(i);
    }
    let mut out = BTreeSet::new();
    for (i, &z) in points.iter().enumerate() {
        let (kx, ky) = key(z);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &j in grid.get(&(kx + dx, ky + dy)).into_iter().flatten() {
                    if j > i && words[i].first() != words[j].first() && (points[j] - z).norm() <= tol {
                        out.insert(Relation::new(words[i].clone(), words[j].clone())?);
                    }
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

impl ParametricFamily {
    /// Relations `a ~ b` holding at `z` to within `tol`, over words with
    /// preambles of length at most `m` and the family's default tails.
    pub fn relations_at(&self, z: Complex64, m: usize, tol: f64) -> Result<Vec<Relation>> {
        let alphabet = self.eval(z)?;
        let words = tip_words(self.len(), m, &self.default_tails(), DEFAULT_TIP_BUDGET)?;
        coincidences(&alphabet, &words, tol)
    }

    /// Whether `relation` holds throughout the family, judged at sampled
    /// admissible parameters.
    pub fn holds_identically(&self, relation: &Relation) -> Result<bool> {
        for z in self.sample_admissible(IDENTITY_SAMPLES, 0)? {
            if self.eval(z)?.check_relation(relation)? > IDENTITY_TOL {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Q_A(z) = Q_A` up to level `m`: every relation found at `z` holds on
    /// the whole family, so `z` is a stable parameter.
    pub fn is_relation_stable(&self, z: Complex64, m: usize, tol: f64) -> Result<bool> {
        for r in self.relations_at(z, m, tol)? {
            if !self.holds_identically(&r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Q_A(z)` is empty up to level `m`: no two tip points with different
    /// first letters meet, as in the totally disconnected regime.
    pub fn is_relation_free(&self, z: Complex64, m: usize, tol: f64) -> Result<bool> {
        Ok(self.relations_at(z, m, tol)?.is_empty())
    }
}
