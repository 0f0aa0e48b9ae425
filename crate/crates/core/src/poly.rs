//! Dense complex polynomials (ascending coefficients) and rational functions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative magnitude below which remainders count as zero in the
/// Euclidean gcd.
pub const GCD_TOL: f64 = 1e-12;
// a candidate gcd is only divided out when both quotients are exact to this
const GCD_VERIFY_TOL: f64 = 1e-9;
const CANCEL_TOL: f64 = 1e-14;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Exact trailing zeros are dropped; the zero polynomial has no
    /// coefficients.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Self::new(vec![ZERO, ONE])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    /// Largest coefficient modulus.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Drops leading coefficients whose modulus is at most `rel` times the
    /// largest one.
    pub fn trimmed(&self, rel: f64) -> Polynomial {
        let bound = rel * self.norm_inf();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= bound) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn monic(&self) -> Polynomial {
        match self.coeffs.last() {
            Some(&l) => self.scale(1.0 / l),
            None => Self::zero(),
        }
    }

    /// Number of low-order coefficients that vanish (multiplicity of the
    /// root at 0), using the relative threshold `rel`.
    pub fn low_order_zeros(&self, rel: f64) -> usize {
        let bound = rel * self.norm_inf();
        self.coeffs.iter().take_while(|c| c.norm() <= bound).count()
    }

    /// Divides by `z^k`, discarding the `k` lowest coefficients.
    pub fn shift_down(&self, k: usize) -> Polynomial {
        Self::new(self.coeffs.iter().skip(k).copied().collect())
    }

    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ZERO; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= q * d;
            }
            rem[k + dd] = ZERO;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor by Euclidean remainders; remainders
    /// within `tol` (relative) of zero terminate the sequence.
    pub fn gcd(&self, other: &Polynomial, tol: f64) -> Polynomial {
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.clone(), other.clone())
        } else {
            (other.clone(), self.clone())
        };
        if b.is_zero() {
            return a.monic();
        }
        loop {
            let bn = b.norm_inf();
            b = b.scale(Complex64::new(1.0 / bn, 0.0));
            let (_, r) = a.div_rem(&b);
            let r = r.trimmed(0.0);
            if r.norm_inf() <= tol * a.norm_inf().max(1.0) || r.is_zero() {
                return b.monic();
            }
            a = b;
            b = r;
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(ZERO)
                        + rhs.coeffs.get(k).copied().unwrap_or(ZERO)
                })
                .collect(),
        )
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            match k {
                0 => {}
                1 => f.write_str("z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

/// `num / den` with a monic denominator and common factors divided out.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.trimmed(0.0).is_zero() {
            return Err(Error::InvalidArgument(
                "rational function with zero denominator".into(),
            ));
        }
        Ok(Self { num, den }.normalized())
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self {
            num: p,
            den: Polynomial::constant(ONE),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(Polynomial::constant(c))
    }

    pub fn z() -> Self {
        Self::polynomial(Polynomial::z())
    }

    pub fn zero() -> Self {
        Self::polynomial(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Value at `z`, or `None` at a pole.
    pub fn eval(&self, z: Complex64) -> Option<Complex64> {
        let d = self.den.eval(z);
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let v = self.num.eval(z) / d;
        v.is_finite().then_some(v)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::InvalidArgument("reciprocal of zero".into()));
        }
        Ok(Self {
            num: self.den.clone(),
            den: self.num.clone(),
        }
        .normalized())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    /// Removes common powers of `z`, divides out the gcd (only when the
    /// division is verified exact), and makes the denominator monic.
    fn normalized(self) -> Self {
        let Self { num, den } = self;
        let den = den.trimmed(0.0);
        if num.is_zero() {
            return Self::zero();
        }
        let k = num.low_order_zeros(0.0).min(den.low_order_zeros(0.0));
        let (mut num, mut den) = (num.shift_down(k), den.shift_down(k));
        if den.degree().unwrap_or(0) > 0 && num.degree().unwrap_or(0) > 0 {
            let g = num.gcd(&den, GCD_TOL);
            if g.degree().unwrap_or(0) > 0 {
                let (qn, rn) = num.div_rem(&g);
                let (qd, rd) = den.div_rem(&g);
                if rn.norm_inf() <= GCD_VERIFY_TOL * num.norm_inf()
                    && rd.norm_inf() <= GCD_VERIFY_TOL * den.norm_inf()
                {
                    num = qn;
                    den = qd;
                }
            }
        }
        let lead = den.leading();
        Self {
            num: num.scale(1.0 / lead),
            den: den.scale(1.0 / lead),
        }
    }
}

/// Sum of two numerators with cancellation clean-up: coefficients that
/// are rounding residue relative to the summands are set to zero.
fn cancelling_sum(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let bound = CANCEL_TOL * a.norm_inf().max(b.norm_inf());
    let sum = a + b;
    Polynomial::new(
        sum.coeffs
            .iter()
            .map(|&c| if c.norm() <= bound { ZERO } else { c })
            .collect(),
    )
}

impl Add for &RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction {
                num: cancelling_sum(&self.num, &rhs.num),
                den: self.den.clone(),
            }
            .normalized();
        }
        RationalFunction {
            num: cancelling_sum(&(&self.num * &rhs.den), &(&rhs.num * &self.den)),
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}
