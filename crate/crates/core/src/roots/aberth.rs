//! Simultaneous polynomial root finding by Aberth–Ehrlich iteration.

use num_complex::Complex64;

use crate::poly::Polynomial;
use crate::{Error, Result};

/// Leading and trailing coefficients at most this fraction of the largest
/// coefficient are treated as zero.
pub const TRIM_REL: f64 = 1e-14;

pub const MAX_SWEEPS: usize = 200;

/// Root approximations closer than this are merged into one cluster.
pub const ROOT_CLUSTER_TOL: f64 = 1e-7;

/// Backward-error bound factor: a root `r` of `p` must satisfy
/// `|p(r)| <= RESIDUAL_REL * max|coeff| * (1 + |r|)^deg`.
pub const RESIDUAL_REL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub z: Complex64,
    pub multiplicity: usize,
    /// `|p(z)|` for the input polynomial.
    pub residual: f64,
}

/// All roots of the polynomial with ascending coefficients `coeffs`,
/// clustered with multiplicities summing to the trimmed degree.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Root>> {
    if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::InvalidArgument("non-finite coefficient".into()));
    }
    let p = Polynomial::new(coeffs.to_vec()).trimmed(TRIM_REL);
    roots_of(&p)
}

pub(crate) fn roots_of(p: &Polynomial) -> Result<Vec<Root>> {
    let p = p.trimmed(TRIM_REL);
    let zeros = p.low_order_zeros(TRIM_REL);
    let q = p.shift_down(zeros);
    let d = q.degree().unwrap_or(0);
    if d + zeros == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let mut approx = if d > 0 { aberth(&q)? } else { Vec::new() };
    approx.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(zeros));

    let scale = p.norm_inf();
    let degree = p.degree().unwrap_or(0) as i32;
    let mut roots = cluster(&approx, ROOT_CLUSTER_TOL);
    for r in &mut roots {
        r.residual = p.eval(r.z).norm();
    }
    // exact zeros are reported as 0 even though the trimmed coefficients
    // leave a tiny residual at the origin
    if let Some(bad) = roots.iter().find(|r| {
        r.z != Complex64::new(0.0, 0.0)
            && r.residual > RESIDUAL_REL * scale * (1.0 + r.z.norm()).powi(degree)
    }) {
        return Err(Error::NonConvergence {
            residual: bad.residual,
            sweeps: MAX_SWEEPS,
        });
    }
    Ok(roots)
}

/// Newton correction `p(z)/p'(z)`, evaluated through the reversed
/// polynomial outside the unit disk to avoid overflow.
fn newton_ratio(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let d = coeffs.len() - 1;
    if z.norm() <= 1.0 {
        let (mut p, mut dp) = (coeffs[d], Complex64::new(0.0, 0.0));
        for &c in coeffs[..d].iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        p / dp
    } else {
        // p(z) = z^d q(w), w = 1/z, q has the coefficients reversed
        let w = 1.0 / z;
        let (mut q, mut dq) = (coeffs[0], Complex64::new(0.0, 0.0));
        for &c in coeffs[1..].iter() {
            dq = dq * w + q;
            q = q * w + c;
        }
        z * q / (d as f64 * q - w * dq)
    }
}

/// Positive root of `|a_d| x^d = sum_{k<d} |a_k| x^k`, an upper bound for
/// the root moduli.
fn cauchy_radius(coeffs: &[Complex64]) -> f64 {
    let d = coeffs.len() - 1;
    let lead = coeffs[d].norm();
    let f = |x: f64| {
        let lower: f64 = coeffs[..d]
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * x.powi(k as i32))
            .sum();
        lead * x.powi(d as i32) - lower
    };
    let mut hi = 1.0 + coeffs[..d].iter().map(|c| c.norm() / lead).fold(0.0, f64::max);
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-6 * hi {
            break;
        }
    }
    hi.max(f64::MIN_POSITIVE)
}

fn aberth(p: &Polynomial) -> Result<Vec<Complex64>> {
    let coeffs = p.monic().coeffs().to_vec();
    let d = coeffs.len() - 1;
    if d == 1 {
        return Ok(vec![-coeffs[0]]);
    }
    let radius = cauchy_radius(&coeffs);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            Complex64::from_polar(radius, t)
        })
        .collect();
    let mut done = vec![false; d];
    for _ in 0..MAX_SWEEPS {
        let mut all_done = true;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let ratio = newton_ratio(&coeffs, z[k]);
            let sum: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| 1.0 / (z[k] - z[j]))
                .sum();
            let mut w = ratio / (1.0 - ratio * sum);
            if !(w.re.is_finite() && w.im.is_finite()) {
                w = ratio;
            }
            if !(w.re.is_finite() && w.im.is_finite()) {
                // landed exactly on a root
                done[k] = true;
                continue;
            }
            z[k] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(f64::MIN_POSITIVE) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    Ok(z)
}

/// Greedy clustering in input order; each cluster reports its mean.
fn cluster(points: &[Complex64], tol: f64) -> Vec<Root> {
    let mut groups: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    'next: for &z in points {
        for (anchor, members) in &mut groups {
            if (*anchor - z).norm() <= tol {
                members.push(z);
                continue 'next;
            }
        }
        groups.push((z, vec![z]));
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let n = members.len();
            let mean = members.iter().sum::<Complex64>() / n as f64;
            Root {
                z: if members.iter().all(|m| *m == members[0]) { members[0] } else { mean },
                multiplicity: n,
                residual: 0.0,
            }
        })
        .collect()
}
