//! Truncated formal power series in `u` with only even powers.
//!
//! An [`EvenSeries`] of order `G` stores the coefficients of
//! `u^0, u^2, ..., u^{2G}`. Coefficients beyond `G` are unknown, not zero, so
//! every binary operation truncates to the smaller order of its operands and
//! comparisons only look at the common known range ([`EvenSeries::agrees_with`]).

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, sign, Rational};

/// Even power series `Σ_g c_g u^{2g}` truncated at genus order `G`.
///
/// Serialized as a JSON array of `"p/q"` strings indexed by `g`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct EvenSeries {
    coeffs: Vec<Rational>,
}

impl TryFrom<Vec<Rational>> for EvenSeries {
    type Error = Error;

    fn try_from(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidProblem(
                "a series needs at least the constant coefficient".into(),
            ));
        }
        Ok(EvenSeries { coeffs })
    }
}

impl From<EvenSeries> for Vec<Rational> {
    fn from(s: EvenSeries) -> Self {
        s.coeffs
    }
}

impl EvenSeries {
    /// Series from explicit coefficients; the order is `coeffs.len() - 1`.
    ///
    /// Panics on an empty vector.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "EvenSeries needs at least one coefficient");
        EvenSeries { coeffs }
    }

    /// Shorthand for small hand-written series: `from_fracs(&[(1, 1), (-1, 12)])`.
    pub fn from_fracs(fracs: &[(i64, i64)]) -> Self {
        EvenSeries::new(fracs.iter().map(|&(p, q)| Rational::new(p, q)).collect())
    }

    pub fn zero(order: usize) -> Self {
        EvenSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    /// The multiplicative unit `1 + 0·u² + ...`.
    pub fn unit(order: usize) -> Self {
        let mut s = EvenSeries::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = EvenSeries::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series coefficient by coefficient.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        EvenSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    /// Truncation genus `G`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `u^{2g}`, or `None` if `g` is beyond the known range.
    pub fn coeff(&self, g: usize) -> Option<&Rational> {
        self.coeffs.get(g)
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// Drops coefficients above `order`. Extending is not possible: unknown
    /// coefficients cannot be invented.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        EvenSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Equality over the common known range.
    pub fn agrees_with(&self, other: &EvenSeries) -> bool {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a == b)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        EvenSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies by `u^{2k}`: coefficients shift up by `k`, order is kept.
    pub fn shift(&self, k: usize) -> Self {
        EvenSeries::from_fn(self.order(), |g| {
            if g >= k {
                self.coeffs[g - k].clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &EvenSeries) -> Self {
        let order = self.order().min(other.order());
        EvenSeries::from_fn(order, |g| {
            (0..=g)
                .map(|i| &self.coeffs[i] * &other.coeffs[g - i])
                .sum()
        })
    }

    /// Multiplicative inverse by forward substitution.
    pub fn inverse(&self) -> Result<Self> {
        let a0_inv = self.coeffs[0]
            .checked_recip()
            .ok_or(Error::ZeroConstantTerm)?;
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(a0_inv.clone());
        for g in 1..self.coeffs.len() {
            let acc: Rational = (1..=g).map(|i| &self.coeffs[i] * &out[g - i]).sum();
            out.push(-(acc * &a0_inv));
        }
        Ok(EvenSeries { coeffs: out })
    }

    /// Integer power. `pow(0)` is the unit; negative exponents invert first.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut result = EvenSeries::unit(self.order());
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// Σ_g c_g u^{2g} ↦ Σ_g c_g d^{2g} u^{2g}, i.e. substitutes `u → d·u`.
    pub fn rescale_variable(&self, d: i64) -> Self {
        let d2 = Rational::from_integer(d * d);
        let mut factor = Rational::one();
        EvenSeries::from_fn(self.order(), |g| {
            let c = &self.coeffs[g] * &factor;
            factor *= &d2;
            c
        })
    }
}

impl Add for &EvenSeries {
    type Output = EvenSeries;
    fn add(self, rhs: &EvenSeries) -> EvenSeries {
        let order = self.order().min(rhs.order());
        EvenSeries::from_fn(order, |g| &self.coeffs[g] + &rhs.coeffs[g])
    }
}

impl Sub for &EvenSeries {
    type Output = EvenSeries;
    fn sub(self, rhs: &EvenSeries) -> EvenSeries {
        let order = self.order().min(rhs.order());
        EvenSeries::from_fn(order, |g| &self.coeffs[g] - &rhs.coeffs[g])
    }
}

impl Mul for &EvenSeries {
    type Output = EvenSeries;
    fn mul(self, rhs: &EvenSeries) -> EvenSeries {
        EvenSeries::mul(self, rhs)
    }
}

impl Neg for &EvenSeries {
    type Output = EvenSeries;
    fn neg(self) -> EvenSeries {
        self.scale(&-Rational::one())
    }
}

fn frac(num: Rational, den: BigInt) -> Rational {
    num / Rational::from_bigint(den)
}

/// `sin(u/2)/(u/2)`; coefficient of `u^{2g}` is `(-1)^g / ((2g+1)!·4^g)`.
pub fn sinc_half(order: usize) -> EvenSeries {
    EvenSeries::from_fn(order, |g| {
        let den = factorial(2 * g as u32 + 1) * BigInt::from(4).pow(g as u32);
        frac(sign(g), den)
    })
}

/// `sin(d·u/2)/(u/2)`; constant term `d`, and the `u^{2g}` coefficient is
/// `d^{2g+1}` times that of [`sinc_half`].
///
/// Panics if `d < 1`.
pub fn sinc_scaled(d: i64, order: usize) -> EvenSeries {
    assert!(d >= 1, "sinc_scaled needs d >= 1");
    sinc_half(order)
        .rescale_variable(d)
        .scale(&Rational::from_integer(d))
}

/// `sin(u)/u`; coefficient `(-1)^g/(2g+1)!`.
pub fn sin_u_over_u(order: usize) -> EvenSeries {
    EvenSeries::from_fn(order, |g| frac(sign(g), factorial(2 * g as u32 + 1)))
}

/// `cos(u/2)`; coefficient `(-1)^g/((2g)!·4^g)`.
pub fn cos_half(order: usize) -> EvenSeries {
    EvenSeries::from_fn(order, |g| {
        let den = factorial(2 * g as u32) * BigInt::from(4).pow(g as u32);
        frac(sign(g), den)
    })
}
