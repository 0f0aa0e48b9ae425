//! JSON definition files for user-supplied families.
//!
//! ```json
//! {"n": 2,
//!  "letters": [{"num": [[0,0],[1,0]], "den": [[1,0]], "conjugate": false},
//!              {"num": [[1,0],[0,0],[1,0]], "den": [[1,0]], "conjugate": false}],
//!  "relations": [{"left": {"pre": [1,1,1,1], "per": [2]},
//!                 "right": {"pre": [2,1,1], "per": [2]}}]}
//! ```
//!
//! Coefficients are `[re, im]` pairs in ascending order of degree.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ParametricFamily;
use crate::poly::{Polynomial, RationalFunction};
use crate::tree::{Relation, RelationJson};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LetterJson {
    pub num: Vec<[f64; 2]>,
    #[serde(default = "one_coeffs")]
    pub den: Vec<[f64; 2]>,
    #[serde(default)]
    pub conjugate: bool,
}

fn one_coeffs() -> Vec<[f64; 2]> {
    vec![[1.0, 0.0]]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    /// `[[min_re, min_im], [max_re, max_im]]` rectangle for sampling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_box: Option<[[f64; 2]; 2]>,
    pub letters: Vec<LetterJson>,
    #[serde(default)]
    pub relations: Vec<RelationJson>,
}

fn to_poly(coeffs: &[[f64; 2]]) -> Result<Polynomial> {
    if coeffs.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Parse("non-finite coefficient".into()));
    }
    Ok(Polynomial::new(
        coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
    ))
}

fn from_poly(p: &Polynomial) -> Vec<[f64; 2]> {
    if p.is_zero() {
        return vec![[0.0, 0.0]];
    }
    p.coeffs().iter().map(|c| [c.re, c.im]).collect()
}

impl FamilyFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("family files serialize")
    }

    pub fn into_family(self) -> Result<ParametricFamily> {
        if self.n != self.letters.len() {
            return Err(Error::Parse(format!(
                "n = {} but {} letters given",
                self.n,
                self.letters.len()
            )));
        }
        let mut letters = Vec::with_capacity(self.n);
        let mut conjugate = Vec::with_capacity(self.n);
        for l in &self.letters {
            letters.push(RationalFunction::new(to_poly(&l.num)?, to_poly(&l.den)?)?);
            conjugate.push(l.conjugate);
        }
        let relations = self
            .relations
            .iter()
            .map(Relation::try_from)
            .collect::<Result<Vec<_>>>()?;
        let mut fam = ParametricFamily::new(
            self.name.unwrap_or_else(|| "custom".into()),
            letters,
            conjugate,
            relations,
        )?
        // custom letters may reach beyond the unit square
        .with_sample_box(Complex64::new(-2.0, -2.0), Complex64::new(2.0, 2.0));
        if let Some(d) = self.domain {
            fam = fam.with_domain(d);
        }
        if let Some([lo, hi]) = self.sample_box {
            if !(lo[0] < hi[0] && lo[1] < hi[1]) || lo.iter().chain(&hi).any(|x| !x.is_finite()) {
                return Err(Error::Parse("sample_box must be a nonempty finite rectangle".into()));
            }
            fam = fam.with_sample_box(Complex64::new(lo[0], lo[1]), Complex64::new(hi[0], hi[1]));
        }
        Ok(fam)
    }
}

impl From<&ParametricFamily> for FamilyFile {
    fn from(fam: &ParametricFamily) -> Self {
        let (lo, hi) = fam.sample_box;
        FamilyFile {
            n: fam.len(),
            name: Some(fam.name.clone()),
            domain: Some(fam.domain_label.clone()),
            sample_box: Some([[lo.re, lo.im], [hi.re, hi.im]]),
            letters: fam
                .letters()
                .iter()
                .zip(fam.conjugate_flags())
                .map(|(r, &conjugate)| LetterJson {
                    num: from_poly(r.numerator()),
                    den: from_poly(r.denominator()),
                    conjugate,
                })
                .collect(),
            relations: fam.relations().iter().map(RelationJson::from).collect(),
        }
    }
}

impl ParametricFamily {
    pub fn from_json(text: &str) -> Result<Self> {
        FamilyFile::from_json(text)?.into_family()
    }

    pub fn to_json(&self) -> String {
        FamilyFile::from(self).to_json()
    }
}
