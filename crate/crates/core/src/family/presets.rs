use std::f64::consts::PI;

use num_complex::Complex64;

use super::ParametricFamily;
use crate::poly::{Polynomial, RationalFunction};
use crate::tree::{EpWord, Relation};
use crate::{Error, Result};

/// Catalog names accepted by [`preset`]; `ngon` takes a letter count as
/// `ngon:<n>`.
pub const PRESETS: &[&str] = &[
    "ternary-up",
    "ternary-down",
    "binary-b1",
    "binary-b2",
    "binary-b3",
    "plusminus",
    "conjugate",
    "ngon:<n>",
];

pub fn preset_names() -> &'static [&'static str] {
    PRESETS
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn konst(re: f64) -> RationalFunction {
    RationalFunction::constant(c(re, 0.0))
}

fn poly(coeffs: &[f64]) -> RationalFunction {
    RationalFunction::polynomial(Polynomial::from_real(coeffs))
}

fn inv_4z() -> RationalFunction {
    RationalFunction::new(Polynomial::from_real(&[1.0]), Polynomial::from_real(&[0.0, 4.0]))
        .expect("nonzero denominator")
}

fn rel(a: (&[usize], &[usize]), b: (&[usize], &[usize])) -> Relation {
    Relation::new(
        EpWord::from_one_based(a.0, a.1).expect("preset word"),
        EpWord::from_one_based(b.0, b.1).expect("preset word"),
    )
    .expect("preset relation")
}

fn symbolic(name: &str, letters: Vec<RationalFunction>, relations: Vec<Relation>) -> ParametricFamily {
    let n = letters.len();
    ParametricFamily::new(name, letters, vec![false; n], relations).expect("preset family")
}

/// `c e^{2 pi i k / n}` with the quarter turns snapped to exact values.
fn root_of_unity(k: usize, n: usize) -> Complex64 {
    let t = 2.0 * PI * k as f64 / n as f64;
    let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    c(snap(t.cos()), snap(t.sin()))
}

/// The `n`-gon family `T{z e^{2 pi i/n}, .., z e^{2 pi i (n-1)/n}, z}`.
pub fn ngon(n: usize) -> Result<ParametricFamily> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("ngon needs n >= 2, got {n}")));
    }
    let letters = (1..=n)
        .map(|k| RationalFunction::polynomial(Polynomial::new(vec![c(0.0, 0.0), root_of_unity(k, n)])))
        .collect();
    Ok(symbolic(&format!("ngon:{n}"), letters, Vec::new()).with_domain("0 < |z| < 1"))
}

/// Looks up a family from the catalog.
pub fn preset(name: &str) -> Result<ParametricFamily> {
    let z = RationalFunction::z;
    let fam = match name {
        // T{z, 1/2, 1/(4z)} from 13~2 = 21~2 and 31~2 = 23~2
        "ternary-up" => symbolic(
            name,
            vec![z(), konst(0.5), inv_4z()],
            vec![
                rel((&[1, 3], &[2]), (&[2, 1], &[2])),
                rel((&[3, 1], &[2]), (&[2, 3], &[2])),
            ],
        )
        .with_domain("1/4 < |z| < 1"),
        // T{z, -1/2, 1/(4z)} from 12~31 = 22~13 and 32~13 = 22~31
        "ternary-down" => symbolic(
            name,
            vec![z(), konst(-0.5), inv_4z()],
            vec![
                rel((&[1, 2], &[3, 1]), (&[2, 2], &[1, 3])),
                rel((&[3, 2], &[1, 3]), (&[2, 2], &[3, 1])),
            ],
        )
        .with_domain("1/4 < |z| < 1"),
        "binary-b1" => symbolic(
            name,
            vec![z(), poly(&[1.0, 0.0, 1.0])],
            vec![rel((&[1, 1, 1, 1], &[2]), (&[2, 1, 1], &[2]))],
        )
        .with_domain("0 < |z|, |1 + z^2| < 1"),
        "binary-b2" => symbolic(
            name,
            vec![
                z(),
                RationalFunction::new(
                    Polynomial::from_real(&[1.0, 1.0, 1.0]),
                    Polynomial::from_real(&[1.0, 1.0]),
                )
                .expect("nonzero denominator"),
            ],
            vec![rel((&[1, 1, 1], &[2]), (&[2, 1, 1], &[2]))],
        )
        .with_domain("0 < |z|, |z + 1/(1 + z)| < 1"),
        "binary-b3" => symbolic(
            name,
            vec![z(), poly(&[1.0, 1.0, 1.0])],
            vec![rel((&[1, 1, 1], &[2]), (&[2, 1], &[2]))],
        )
        .with_domain("0 < |z|, |1 + z + z^2| < 1"),
        "plusminus" => symbolic(name, vec![z(), poly(&[0.0, -1.0])], Vec::new())
            .with_domain("0 < |z| < 1"),
        "conjugate" => ParametricFamily::new(name, vec![z(), z()], vec![false, true], Vec::new())
            .expect("preset family")
            .with_domain("0 < |z| < 1, z not real"),
        _ => {
            let n = name
                .strip_prefix("ngon")
                .map(|s| s.trim_start_matches([':', '-']))
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
            return ngon(n);
        }
    };
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letter_at(fam: &ParametricFamily, j: usize, z: Complex64) -> Complex64 {
        fam.letter_values(z).unwrap()[j]
    }

    #[test]
    fn catalog_letters() {
        let z = c(0.3, 0.6);
        let up = preset("ternary-up").unwrap();
        assert_eq!(letter_at(&up, 0, z), z);
        assert_eq!(letter_at(&up, 1, z), c(0.5, 0.0));
        assert!((letter_at(&up, 2, z) - 1.0 / (4.0 * z)).norm() < 1e-15);
        let pm = preset("plusminus").unwrap();
        assert_eq!(pm.letter_values(z).unwrap(), vec![z, -z]);
        let four = preset("ngon:4").unwrap();
        assert_eq!(
            four.letter_values(z).unwrap(),
            vec![c(0.0, 1.0) * z, -z, c(0.0, -1.0) * z, z]
        );
        assert_eq!(preset("ngon4").unwrap().len(), 4);
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(matches!(preset("quaternary"), Err(Error::UnknownPreset(_))));
        assert!(matches!(preset("ngon:x"), Err(Error::UnknownPreset(_))));
        assert!(preset("ngon:1").is_err());
    }
}
