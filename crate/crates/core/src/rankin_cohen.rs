//! Rankin–Cohen brackets in rational normalization: derivatives are
//! `q d/dq`, so `(2πi)^{-n}` never appears and all coefficients stay exact.

use num::{BigInt, One, Signed};

use crate::error::{Error, Result};
use crate::qseries::FracSeries;
use crate::weilrep::{tensor, VectorSeries};
use crate::Rational;

/// A weight in `½ℤ`, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HalfIntWeight {
    pub twice: i64,
}

impl HalfIntWeight {
    pub fn from_twice(twice: i64) -> Self {
        HalfIntWeight { twice }
    }

    pub fn integral(k: i64) -> Self {
        HalfIntWeight { twice: 2 * k }
    }

    pub fn value(&self) -> Rational {
        Rational::new(BigInt::from(self.twice), BigInt::from(2))
    }
}

impl std::ops::Add for HalfIntWeight {
    type Output = HalfIntWeight;
    fn add(self, rhs: Self) -> Self {
        HalfIntWeight { twice: self.twice + rhs.twice }
    }
}

impl std::fmt::Display for HalfIntWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// `Γ(κ+n)/Γ(κ+n−s)` as the falling factorial `(κ+n−1)(κ+n−2)⋯(κ+n−s)`.
/// Rejects `κ+n ∈ {0, −1, −2, …}`, where the numerator is a pole.
pub fn gamma_ratio(kappa: HalfIntWeight, n: u32, s: u32) -> Result<Rational> {
    let top = kappa.value() + Rational::from_integer(BigInt::from(n));
    if top.is_integer() && !top.is_positive() {
        return Err(Error::GammaPole(top));
    }
    let mut p = Rational::one();
    for i in 1..=s {
        p *= &top - Rational::from_integer(BigInt::from(i));
    }
    Ok(p)
}

fn factorial(n: u32) -> Rational {
    Rational::from_integer((1..=n).map(BigInt::from).product())
}

/// The scalar coefficient of `D^r f · D^s g` in `[f,g]_n`, `r + s = n`.
pub fn bracket_coefficient(kf: HalfIntWeight, kg: HalfIntWeight, n: u32, r: u32) -> Result<Rational> {
    let s = n - r;
    let sign = if r.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    Ok(sign * gamma_ratio(kf, n, s)? / factorial(s) * gamma_ratio(kg, n, r)? / factorial(r))
}

/// `[f,g]_n` for scalar series, together with its weight `κ_f+κ_g+2n`.
pub fn rc_bracket(
    f: &FracSeries,
    kf: HalfIntWeight,
    g: &FracSeries,
    kg: HalfIntWeight,
    n: u32,
) -> Result<(FracSeries, HalfIntWeight)> {
    let mut out: Option<FracSeries> = None;
    for r in 0..=n {
        let c = bracket_coefficient(kf, kg, n, r)?;
        let term = f.theta_derivative(r).mul(&g.theta_derivative(n - r)).scale(&c);
        out = Some(match out {
            None => term,
            Some(acc) => acc.add(&term),
        });
    }
    Ok((out.expect("n + 1 terms"), kf + kg + HalfIntWeight::integral(2 * n as i64)))
}

/// `[f,g]_n` for vector-valued series: the same sum with `f ⊗ g` in place of
/// the product.
pub fn rc_bracket_vector(
    f: &VectorSeries,
    kf: HalfIntWeight,
    g: &VectorSeries,
    kg: HalfIntWeight,
    n: u32,
) -> Result<(VectorSeries, HalfIntWeight)> {
    let mut out: Option<VectorSeries> = None;
    for r in 0..=n {
        let c = bracket_coefficient(kf, kg, n, r)?;
        let term = tensor(&f.theta_derivative(r), &g.theta_derivative(n - r)).scale(&c);
        out = Some(match out {
            None => term,
            Some(acc) => acc.add(&term)?,
        });
    }
    Ok((out.expect("n + 1 terms"), kf + kg + HalfIntWeight::integral(2 * n as i64)))
}
