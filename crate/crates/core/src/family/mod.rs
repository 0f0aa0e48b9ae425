//! One-parameter families `T{c_1(z), .., c_n(z)}` of complex trees.

mod file;
mod presets;
mod relations;

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::RationalFunction;
use crate::tree::{Alphabet, EpWord, FiniteWord, Relation};
use crate::{Error, Result};

pub use file::{FamilyFile, LetterJson};
pub use presets::{preset, preset_names, PRESETS};
pub use relations::DEFAULT_TIP_BUDGET;

/// Rejection-sampling budget used when drawing admissible parameters.
pub const MAX_SAMPLE_ATTEMPTS: usize = 100_000;

/// A family of alphabets whose letters are rational functions of one
/// complex parameter, together with the tip-to-tip relations it was built
/// from.
///
/// A letter flagged `conjugate` evaluates to the complex conjugate of its
/// rational function; such families only support numeric evaluation.
#[derive(Clone, Debug)]
pub struct ParametricFamily {
    pub name: String,
    letters: Vec<RationalFunction>,
    conjugate: Vec<bool>,
    relations: Vec<Relation>,
    pub domain_label: String,
    /// Rectangle `(min, max)` that contains the admissible region; used for
    /// sampling.
    pub sample_box: (Complex64, Complex64),
}

impl ParametricFamily {
    pub fn new(
        name: impl Into<String>,
        letters: Vec<RationalFunction>,
        conjugate: Vec<bool>,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        if letters.len() < 2 {
            return Err(Error::InvalidArgument(
                "a family needs at least two letters".into(),
            ));
        }
        if conjugate.len() != letters.len() {
            return Err(Error::InvalidArgument(
                "one conjugate flag per letter is required".into(),
            ));
        }
        if let Some(r) = relations
            .iter()
            .find(|r| r.max_symbol() as usize >= letters.len())
        {
            return Err(Error::SymbolOutOfRange {
                symbol: r.max_symbol() as usize + 1,
                n: letters.len(),
            });
        }
        Ok(Self {
            name: name.into(),
            letters,
            conjugate,
            relations,
            domain_label: "0 < |c_j(z)| < 1".into(),
            sample_box: (Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0)),
        })
    }

    pub fn with_domain(mut self, label: impl Into<String>) -> Self {
        self.domain_label = label.into();
        self
    }

    pub fn with_sample_box(mut self, min: Complex64, max: Complex64) -> Self {
        self.sample_box = (min, max);
        self
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[RationalFunction] {
        &self.letters
    }

    pub fn conjugate_flags(&self) -> &[bool] {
        &self.conjugate
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn is_symbolic(&self) -> bool {
        !self.conjugate.iter().any(|&c| c)
    }

    /// Letter values at `z`, without the admissibility checks.
    pub fn letter_values(&self, z: Complex64) -> Result<Vec<Complex64>> {
        self.letters
            .iter()
            .zip(&self.conjugate)
            .enumerate()
            .map(|(j, (r, &conj))| {
                let v = r.eval(z).ok_or_else(|| {
                    Error::DomainViolation(format!("c_{}(z) has a pole at z = {z}", j + 1))
                })?;
                Ok(if conj { v.conj() } else { v })
            })
            .collect()
    }

    /// The alphabet `A(z)`; fails with `DomainViolation` outside the region
    /// where every `0 < |c_j(z)| < 1` and the letters are distinct.
    pub fn eval(&self, z: Complex64) -> Result<Alphabet> {
        let values = self.letter_values(z)?;
        Alphabet::new(values).map_err(|e| match e {
            Error::InvalidAlphabet(m) => Error::DomainViolation(format!("{m} at z = {z}")),
            other => other,
        })
    }

    pub fn is_admissible(&self, z: Complex64) -> bool {
        self.eval(z).is_ok()
    }

    fn require_symbolic(&self) -> Result<()> {
        if self.is_symbolic() {
            Ok(())
        } else {
            Err(Error::ConjugateFamilyUnsupported)
        }
    }

    fn letter(&self, s: u16) -> Result<&RationalFunction> {
        self.letters.get(s as usize).ok_or(Error::SymbolOutOfRange {
            symbol: s as usize + 1,
            n: self.letters.len(),
        })
    }

    /// `phi(v)` as a rational function of the parameter.
    pub fn phi_symbolic(&self, word: &FiniteWord) -> Result<RationalFunction> {
        self.require_symbolic()?;
        let one = RationalFunction::one();
        word.symbols().iter().rev().try_fold(one.clone(), |acc, &s| {
            Ok(&one + &(self.letter(s)? * &acc))
        })
    }

    /// Letter product `v_1 .. v_m` as a rational function.
    pub fn product_symbolic(&self, word: &FiniteWord) -> Result<RationalFunction> {
        self.require_symbolic()?;
        word.symbols()
            .iter()
            .try_fold(RationalFunction::one(), |acc, &s| Ok(&acc * self.letter(s)?))
    }

    /// `(phi(v) - 1) / (1 - prod(v))`: the tail contribution of the period
    /// `v`, to be scaled by the preamble product.
    pub fn period_tail_symbolic(&self, period: &FiniteWord) -> Result<RationalFunction> {
        let one = RationalFunction::one();
        let phi_v = self.phi_symbolic(period)?;
        let prod_v = self.product_symbolic(period)?;
        (&phi_v - &one).div(&(&one - &prod_v))
    }

    /// Tip point `phi(u vvv..)` as a rational function of the parameter.
    pub fn phi_ep_symbolic(&self, word: &EpWord) -> Result<RationalFunction> {
        let phi_u = self.phi_symbolic(&word.preamble())?;
        let prod_u = self.product_symbolic(&word.preamble())?;
        let tail = self.period_tail_symbolic(&word.period())?;
        Ok(&phi_u + &(&prod_u * &tail))
    }

    /// `phi(a) - phi(b)`; the admissible zeros of its numerator are the
    /// parameters where `a ~ b` holds.
    pub fn relation_defect(&self, relation: &Relation) -> Result<RationalFunction> {
        Ok(&self.phi_ep_symbolic(relation.left())? - &self.phi_ep_symbolic(relation.right())?)
    }

    /// Draws up to `count` admissible parameters uniformly from the sample
    /// box by rejection, with at most [`MAX_SAMPLE_ATTEMPTS`] draws.
    pub fn sample_admissible(&self, count: usize, seed: u64) -> Result<Vec<Complex64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = self.sample_box;
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0;
        while out.len() < count && attempts < MAX_SAMPLE_ATTEMPTS {
            attempts += 1;
            let z = Complex64::new(rng.gen_range(lo.re..hi.re), rng.gen_range(lo.im..hi.im));
            if self.is_admissible(z) {
                out.push(z);
            }
        }
        if out.is_empty() {
            return Err(Error::NoAdmissibleSamples(attempts));
        }
        Ok(out)
    }

    /// Largest `|phi(a) - phi(b)|` over the declared relations at sampled
    /// admissible parameters; near zero certifies that the letters solve the
    /// declared relation system.
    pub fn verify_identity(&self, sample_count: usize, seed: u64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for z in self.sample_admissible(sample_count, seed)? {
            let alphabet = self.eval(z)?;
            for r in &self.relations {
                worst = worst.max(alphabet.check_relation(r)?);
            }
        }
        Ok(worst)
    }

    /// Periods used as tails for relation searches: the periods of the
    /// declared relations, or every single-letter period when none are
    /// declared.
    pub fn default_tails(&self) -> Vec<FiniteWord> {
        let tails: BTreeSet<FiniteWord> = self
            .relations
            .iter()
            .flat_map(|r| [r.left().period(), r.right().period()])
            .collect();
        if tails.is_empty() {
            (0..self.letters.len() as u16)
                .map(|s| FiniteWord::new(vec![s]).expect("single symbol"))
                .collect()
        } else {
            tails.into_iter().collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ep(pre: &[usize], per: &[usize]) -> EpWord {
        EpWord::from_one_based(pre, per).unwrap()
    }

    #[test]
    fn eval_ternary_up() {
        let fam = preset("ternary-up").unwrap();
        let a = fam.eval(c(0.0, 0.5)).unwrap();
        let want = [c(0.0, 0.5), c(0.5, 0.0), c(0.0, -0.5)];
        for (x, y) in a.letters().iter().zip(want) {
            assert!((x - y).norm() < 1e-15);
        }
        assert!(matches!(fam.eval(c(0.2, 0.0)), Err(Error::DomainViolation(_))));
        assert!(matches!(fam.eval(c(0.0, 0.0)), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn eval_binary_b3() {
        let fam = preset("binary-b3").unwrap();
        let a = fam.eval(c(-0.5, 0.5)).unwrap();
        assert!((a.letters()[1] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn symbolic_tips_of_ternary_up() {
        let fam = preset("ternary-up").unwrap();
        let phi = fam.phi_ep_symbolic(&ep(&[1, 1], &[2])).unwrap();
        assert_eq!(phi.denominator().degree(), Some(0));
        let want = [1.0, 1.0, 2.0];
        assert_eq!(phi.numerator().degree(), Some(2));
        for (x, y) in phi.numerator().coeffs().iter().zip(want) {
            assert!((x - c(y, 0.0)).norm() < 1e-14);
        }
        let two = fam.phi_ep_symbolic(&ep(&[], &[2])).unwrap();
        assert_eq!(two.numerator().degree(), Some(0));
        assert!((two.eval(c(0.3, 0.4)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn declared_relations_have_zero_defect() {
        for name in ["ternary-up", "ternary-down", "binary-b1", "binary-b2", "binary-b3"] {
            let fam = preset(name).unwrap();
            for r in fam.relations() {
                let d = fam.relation_defect(r).unwrap();
                assert!(
                    d.numerator().coeffs().iter().all(|x| x.norm() <= 1e-12),
                    "{name}: {r} -> {d}"
                );
            }
        }
    }

    #[test]
    fn conjugate_family_is_numeric_only() {
        let fam = preset("conjugate").unwrap();
        let a = fam.eval(c(0.3, 0.4)).unwrap();
        assert_eq!(a.letters()[1], c(0.3, -0.4));
        assert_eq!(
            fam.phi_ep_symbolic(&ep(&[1], &[2])),
            Err(Error::ConjugateFamilyUnsupported)
        );
        // real parameters make both letters equal
        assert!(fam.eval(c(0.5, 0.0)).is_err());
    }

    #[test]
    fn sampling_fails_on_empty_region() {
        let fam = preset("ternary-up")
            .unwrap()
            .with_sample_box(c(-0.1, -0.1), c(0.1, 0.1));
        assert!(matches!(
            fam.sample_admissible(10, 0),
            Err(Error::NoAdmissibleSamples(_))
        ));
    }

    #[test]
    fn default_tails() {
        let up = preset("ternary-up").unwrap();
        assert_eq!(up.default_tails(), vec![FiniteWord::from_one_based(&[2]).unwrap()]);
        let pm = preset("plusminus").unwrap();
        assert_eq!(pm.default_tails().len(), 2);
        let down = preset("ternary-down").unwrap();
        assert_eq!(down.default_tails().len(), 2);
    }
}
