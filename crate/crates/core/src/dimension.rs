//! Similarity dimension, the set `M2` where `sum |c_j|^2 > 1`, and the
//! parameter moduli where a family reaches a given dimension.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::family::ParametricFamily;
use crate::tree::Alphabet;
use crate::{Error, Result};

pub const ALPHA_BRACKET: (f64, f64) = (1e-6, 64.0);
pub const MAX_BISECTIONS: usize = 200;

/// Samples along a ray used to locate sign changes.
pub const RAY_SAMPLES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub alpha: f64,
    /// `sum |c_j|^alpha - 1` at `alpha`.
    pub residual: f64,
    pub iterations: usize,
}

fn moran(moduli: &[f64], alpha: f64) -> f64 {
    moduli.iter().map(|r| r.powf(alpha)).sum::<f64>() - 1.0
}

/// The unique `alpha > 0` with `sum |c_j|^alpha = 1`, by bisection until
/// the residual is within `tol`.
pub fn similarity_dimension(alphabet: &Alphabet, tol: f64) -> Result<DimensionReport> {
    let moduli: Vec<f64> = alphabet.letters().iter().map(|c| c.norm()).collect();
    let (mut lo, mut hi) = ALPHA_BRACKET;
    if moran(&moduli, lo) <= 0.0 || moran(&moduli, hi) >= 0.0 {
        return Err(Error::BracketFailure);
    }
    let mut best = DimensionReport {
        alpha: 0.5 * (lo + hi),
        residual: f64::INFINITY,
        iterations: 0,
    };
    for it in 1..=MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let g = moran(&moduli, mid);
        best = DimensionReport { alpha: mid, residual: g, iterations: it };
        if g.abs() <= tol || mid == lo || mid == hi {
            break;
        }
        if g > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best)
}

/// `sum |c_j(z)|^2 > 1`: the similarity dimension exceeds 2, which forces
/// the tree at `z` to be unstable and not post-critically finite.
pub fn in_m2(fam: &ParametricFamily, z: Complex64) -> Result<bool> {
    let a = fam.eval(z)?;
    Ok(sum_of_squares(&a) > 1.0)
}

pub fn sum_of_squares(alphabet: &Alphabet) -> f64 {
    alphabet.letters().iter().map(|c| c.norm_sqr()).sum()
}

/// Moduli `t` on the ray `z = t e^{i angle}` where `sum |c_j(z)|^alpha = 1`,
/// in increasing order.
///
/// The ray is sampled on `t in (0, t_max]`, with `t_max` reaching the far
/// corner of the family's sample box; every sign change between admissible
/// samples is refined by bisection to width `tol`. Families such as
/// `ternary-up` have an inner and an outer branch.
pub fn alpha_locus_on_ray(fam: &ParametricFamily, angle: f64, alpha: f64, tol: f64) -> Result<Vec<f64>> {
    let (lo, hi) = fam.sample_box;
    let t_max = [lo, hi, Complex64::new(lo.re, hi.im), Complex64::new(hi.re, lo.im)]
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    alpha_locus_in_range(fam, angle, alpha, tol, (0.0, t_max))
}

pub fn alpha_locus_in_range(
    fam: &ParametricFamily,
    angle: f64,
    alpha: f64,
    tol: f64,
    range: (f64, f64),
) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && tol > 0.0 && range.0 < range.1) {
        return Err(Error::InvalidArgument("need alpha > 0, tol > 0 and a nonempty range".into()));
    }
    let dir = Complex64::from_polar(1.0, angle);
    let h = |t: f64| -> Option<f64> {
        let a = fam.eval(dir * t).ok()?;
        Some(moran(&a.letters().iter().map(|c| c.norm()).collect::<Vec<_>>(), alpha))
    };
    let step = (range.1 - range.0) / RAY_SAMPLES as f64;
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 1..=RAY_SAMPLES {
        let t = range.0 + step * k as f64;
        let cur = h(t).map(|v| (t, v));
        if let (Some((t0, v0)), Some((t1, v1))) = (prev, cur) {
            if v1 == 0.0 {
                out.push(t1);
            } else if v0 != 0.0 && (v0 < 0.0) != (v1 < 0.0) {
                out.push(bisect(&h, t0, t1, v0, tol)?);
            }
        }
        prev = cur;
    }
    if out.is_empty() {
        return Err(Error::NoSignChange);
    }
    Ok(out)
}

fn bisect(h: &impl Fn(f64) -> Option<f64>, mut a: f64, mut b: f64, va: f64, tol: f64) -> Result<f64> {
    let neg_at_a = va < 0.0;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (a + b);
        if b - a <= tol || mid == a || mid == b {
            break;
        }
        // the admissible region is open, but both ends of the bracket are
        // admissible and so is everything between them on these rays
        let v = h(mid).ok_or(Error::NoSignChange)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if (v < 0.0) == neg_at_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::preset;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn equal_halves_have_dimension_one() {
        let a = Alphabet::new(vec![c(0.5, 0.0), Complex64::from_polar(0.5, 1.0)]).unwrap();
        let d = similarity_dimension(&a, 1e-14).unwrap();
        assert!((d.alpha - 1.0).abs() < 1e-12);
        assert!(d.iterations <= MAX_BISECTIONS);
    }

    #[test]
    fn ternary_at_i_over_2() {
        let a = Alphabet::new(vec![c(0.0, 0.5), c(0.5, 0.0), c(0.0, -0.5)]).unwrap();
        let d = similarity_dimension(&a, 1e-15).unwrap();
        assert!((d.alpha - 3f64.ln() / 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn m2_examples() {
        let up = preset("ternary-up").unwrap();
        assert!(in_m2(&up, c(0.9, 0.0)).unwrap());
        assert!(!in_m2(&up, c(0.0, 0.5)).unwrap());
        assert!(in_m2(&up, c(0.2, 0.0)).is_err());
        let pm = preset("plusminus").unwrap();
        assert!(in_m2(&pm, Complex64::from_polar(0.8, 0.3)).unwrap());
    }

    #[test]
    fn loci() {
        let tau = (1.0 + 5f64.sqrt()) / 2.0;
        let up = preset("ternary-up").unwrap();
        let t = alpha_locus_on_ray(&up, 0.7, 2.0, 1e-13).unwrap();
        assert_eq!(t.len(), 2);
        assert!((t[0] - 1.0 / (2.0 * tau)).abs() < 1e-11);
        assert!((t[1] - tau / 2.0).abs() < 1e-11);
        let pm = preset("plusminus").unwrap();
        let t = alpha_locus_on_ray(&pm, 2.0, 2.0, 1e-13).unwrap();
        assert_eq!(t.len(), 1);
        assert!((t[0] - 0.5f64.sqrt()).abs() < 1e-11);
        // t + 1/2 + 1/(4t) >= 3/2 on the whole ray
        assert_eq!(alpha_locus_on_ray(&up, 0.3, 1.0, 1e-13), Err(Error::NoSignChange));
    }
}
