//! Truncated q-expansions with fractional exponents and exact rational
//! coefficients.
//!
//! A [`FracSeries`] stores terms `c * q^(e/D)` keyed by the integer numerator
//! `e` over a per-series denominator `D`, together with a truncation bound
//! `T`: every coefficient with exponent `< T` is known exactly. A series with
//! no truncation bound is an exact Laurent polynomial.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::integer::Integer;
use num::{BigInt, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Truncated q-series with exponents in `(1/D)·ℤ`.
#[derive(Clone, Debug)]
pub struct FracSeries {
    denom: i64,
    coeffs: BTreeMap<i64, Rational>,
    trunc: Option<Rational>,
}

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

fn min_trunc(a: &Option<Rational>, b: &Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => Some(if x < y { x.clone() } else { y.clone() }),
    }
}

impl FracSeries {
    /// The exact zero series.
    pub fn zero() -> Self {
        FracSeries { denom: 1, coeffs: BTreeMap::new(), trunc: None }
    }

    /// The exact constant `1`.
    pub fn one() -> Self {
        Self::monomial(Rational::one(), &Rational::zero())
    }

    /// Exact single term `c·q^e`.
    pub fn monomial(c: Rational, e: &Rational) -> Self {
        let mut s = FracSeries {
            denom: e.denom().to_i64().expect("exponent denominator overflow"),
            coeffs: BTreeMap::new(),
            trunc: None,
        };
        let num = e.numer().to_i64().expect("exponent numerator overflow");
        if !c.is_zero() {
            s.coeffs.insert(num, c);
        }
        s
    }

    /// Builds a series from `(numerator, coefficient)` pairs over denominator
    /// `denom`. Terms at or beyond the truncation are dropped and repeated
    /// numerators accumulate.
    pub fn from_terms<I>(denom: i64, terms: I, trunc: Option<Rational>) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        assert!(denom >= 1, "exponent denominator must be positive");
        let mut s = FracSeries { denom, coeffs: BTreeMap::new(), trunc };
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s.prune();
        s
    }

    /// Builds `Σ coeffs[n]·q^n` for `n < coeffs.len()`, truncated at `trunc`.
    pub fn from_dense(coeffs: &[Rational], trunc: Option<Rational>) -> Self {
        Self::from_terms(1, coeffs.iter().enumerate().map(|(n, c)| (n as i64, c.clone())), trunc)
    }

    /// Builds a series from `(exponent, coefficient)` pairs with arbitrary
    /// rational exponents; the denominator is the lcm of theirs.
    pub fn from_rational_terms<I>(terms: I, trunc: Option<Rational>) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let terms: Vec<(Rational, Rational)> = terms.into_iter().collect();
        let mut d: i64 = 1;
        for (e, _) in &terms {
            let ed = e.denom().to_i64().ok_or_else(|| Error::Overflow("exponent denominator".into()))?;
            d = lcm(d, ed);
        }
        let big_d = Rational::from_integer(BigInt::from(d));
        let mut nums = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            let n = (e * &big_d).to_integer().to_i64().ok_or_else(|| Error::Overflow("exponent".into()))?;
            nums.push((n, c));
        }
        Ok(Self::from_terms(d, nums, trunc))
    }

    fn add_term(&mut self, e: i64, c: Rational) {
        if c.is_zero() || !self.below_trunc_num(e) {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    fn below_trunc_num(&self, e: i64) -> bool {
        match &self.trunc {
            None => true,
            Some(t) => rat(e, self.denom) < *t,
        }
    }

    fn prune(&mut self) {
        if self.trunc.is_some() {
            let d = self.denom;
            let t = self.trunc.clone().unwrap();
            self.coeffs.retain(|e, c| !c.is_zero() && rat(*e, d) < t);
        } else {
            self.coeffs.retain(|_, c| !c.is_zero());
        }
    }

    /// Exponent denominator `D` as currently stored.
    pub fn denominator(&self) -> i64 {
        self.denom
    }

    /// Truncation bound, or `None` for an exact polynomial.
    pub fn truncation(&self) -> Option<&Rational> {
        self.trunc.as_ref()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &Rational)> + '_ {
        let d = self.denom;
        self.coeffs.iter().map(move |(e, c)| (rat(*e, d), c))
    }

    /// Raw `(numerator, coefficient)` pairs over [`Self::denominator`].
    pub fn raw_terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Least stored exponent.
    pub fn lowest_exponent(&self) -> Option<Rational> {
        self.coeffs.keys().next().map(|e| rat(*e, self.denom))
    }

    /// Lower bound for the valuation: the least stored exponent, or the
    /// truncation when nothing is stored, or `None` for the exact zero.
    fn valuation_bound(&self) -> Option<Rational> {
        self.lowest_exponent().or_else(|| self.trunc.clone())
    }

    /// Same series re-expressed over denominator `k·D`.
    pub fn with_denominator(&self, new_denom: i64) -> Self {
        assert!(
            new_denom > 0 && new_denom % self.denom == 0,
            "new denominator must be a positive multiple of the old one"
        );
        let k = new_denom / self.denom;
        FracSeries {
            denom: new_denom,
            coeffs: self.coeffs.iter().map(|(e, c)| (e * k, c.clone())).collect(),
            trunc: self.trunc.clone(),
        }
    }

    /// Smallest denominator representing the same exponents.
    pub fn normalized(&self) -> Self {
        let g = self.coeffs.keys().fold(self.denom, |g, e| g.gcd(e));
        if g <= 1 {
            return self.clone();
        }
        FracSeries {
            denom: self.denom / g,
            coeffs: self.coeffs.iter().map(|(e, c)| (e / g, c.clone())).collect(),
            trunc: self.trunc.clone(),
        }
    }

    /// Lowers the truncation bound to `t` (never raises it).
    pub fn truncate(&self, t: &Rational) -> Self {
        let trunc = min_trunc(&self.trunc, &Some(t.clone()));
        let mut s = FracSeries { denom: self.denom, coeffs: self.coeffs.clone(), trunc };
        s.prune();
        s
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return FracSeries { denom: self.denom, coeffs: BTreeMap::new(), trunc: self.trunc.clone() };
        }
        FracSeries {
            denom: self.denom,
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
            trunc: self.trunc.clone(),
        }
    }

    /// Coefficientwise sum over the common denominator; truncation is the
    /// smaller of the two.
    pub fn add(&self, other: &FracSeries) -> Self {
        let d = lcm(self.denom, other.denom);
        let mut out = self.with_denominator(d);
        out.trunc = min_trunc(&self.trunc, &other.trunc);
        let kb = d / other.denom;
        for (e, c) in &other.coeffs {
            out.add_term(e * kb, c.clone());
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &FracSeries) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Cauchy product. The result is exact below
    /// `min(T_a + lowest(b), T_b + lowest(a))`.
    pub fn mul(&self, other: &FracSeries) -> Self {
        let (va, vb) = (self.valuation_bound(), other.valuation_bound());
        // Exact zero times anything is exact zero.
        if (va.is_none() && self.trunc.is_none()) || (vb.is_none() && other.trunc.is_none()) {
            return FracSeries::zero();
        }
        let t1 = self.trunc.as_ref().map(|t| t + vb.clone().unwrap_or_else(Rational::zero));
        let t2 = other.trunc.as_ref().map(|t| t + va.clone().unwrap_or_else(Rational::zero));
        let trunc = min_trunc(&t1, &t2);

        let d = lcm(self.denom, other.denom);
        let (ka, kb) = (d / self.denom, d / other.denom);
        let limit = trunc.as_ref().map(|t| {
            // numerators strictly below t·d
            let td = t * Rational::from_integer(BigInt::from(d));
            let c = td.ceil().to_integer();
            c.to_i64().expect("truncation overflow")
        });
        let mut acc: BTreeMap<i64, Rational> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            let ea = ea * ka;
            for (eb, cb) in &other.coeffs {
                let e = ea + eb * kb;
                if let Some(l) = limit {
                    if e >= l {
                        // exponents of `other` are increasing
                        break;
                    }
                }
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        let mut out = FracSeries { denom: d, coeffs: acc, trunc };
        out.prune();
        out
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, n: u32) -> Self {
        let mut result = FracSeries::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Normalized derivative `(q d/dq)^r`: `c·q^m ↦ c·m^r·q^m`.
    pub fn theta_derivative(&self, r: u32) -> Self {
        if r == 0 {
            return self.clone();
        }
        let d = self.denom;
        let mut out = FracSeries {
            denom: d,
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| {
                    let m = rat(*e, d);
                    (*e, c * num::pow(m, r as usize))
                })
                .collect(),
            trunc: self.trunc.clone(),
        };
        out.prune();
        out
    }

    /// Substitutes `q ↦ q^c` for a positive rational `c` (i.e. `τ ↦ cτ`).
    pub fn rescale_variable(&self, c: &Rational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidArgument(format!("rescale factor must be positive, got {c}")));
        }
        let cn = c.numer().to_i64().ok_or_else(|| Error::Overflow("rescale factor".into()))?;
        let cd = c.denom().to_i64().ok_or_else(|| Error::Overflow("rescale factor".into()))?;
        Ok(FracSeries {
            denom: self.denom * cd,
            coeffs: self.coeffs.iter().map(|(e, v)| (e * cn, v.clone())).collect(),
            trunc: self.trunc.as_ref().map(|t| t * c),
        }
        .normalized())
    }

    /// Keeps the terms whose exponent is `≡ residue (mod modulus)`.
    pub fn parity_part(&self, residue: i64, modulus: i64) -> Result<Self> {
        if modulus <= 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let s = self.normalized();
        if s.denom != 1 {
            let bad = s.coeffs.keys().find(|e| **e % s.denom != 0).copied().unwrap_or(0);
            return Err(Error::NonIntegralExponent(rat(bad, s.denom)));
        }
        let mut out = s.clone();
        out.coeffs.retain(|e, _| (e - residue).rem_euclid(modulus) == 0);
        Ok(out)
    }

    /// Coefficient of `q^e`. Fails when `e` is at or beyond the truncation.
    pub fn coefficient(&self, e: &Rational) -> Result<Rational> {
        if let Some(t) = &self.trunc {
            if e >= t {
                return Err(Error::BeyondTruncation { exponent: e.clone(), truncation: t.clone() });
            }
        }
        let scaled = e * Rational::from_integer(BigInt::from(self.denom));
        if !scaled.is_integer() {
            return Ok(Rational::zero());
        }
        let k = match scaled.to_integer().to_i64() {
            Some(k) => k,
            None => return Ok(Rational::zero()),
        };
        Ok(self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero))
    }

    /// `true` when every stored exponent is an integer.
    pub fn has_integral_exponents(&self) -> bool {
        self.coeffs.keys().all(|e| e % self.denom == 0)
    }

    /// First stored exponent that is not an integer.
    pub fn first_non_integral(&self) -> Option<Rational> {
        self.coeffs.keys().find(|e| *e % self.denom != 0).map(|e| rat(*e, self.denom))
    }

    /// Dense coefficients at exponents `0..n`. Requires integral exponents;
    /// terms with negative exponent are ignored.
    pub fn to_dense(&self, n: usize) -> Result<Vec<Rational>> {
        if let Some(bad) = self.first_non_integral() {
            return Err(Error::NonIntegralExponent(bad));
        }
        let mut v = vec![Rational::zero(); n];
        for (e, c) in &self.coeffs {
            let k = e / self.denom;
            if k >= 0 && (k as usize) < n {
                v[k as usize] = c.clone();
            }
        }
        Ok(v)
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coeffs(&self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let d = self.denom;
        let mut out = FracSeries {
            denom: d,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, f(&rat(*e, d), c))).collect(),
            trunc: self.trunc.clone(),
        };
        out.prune();
        out
    }

    /// Keeps the terms whose exponent satisfies `pred`.
    pub fn filter(&self, pred: impl Fn(&Rational) -> bool) -> Self {
        let d = self.denom;
        let mut out = self.clone();
        out.coeffs.retain(|e, _| pred(&rat(*e, d)));
        out
    }
}

impl PartialEq for FracSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.trunc != other.trunc {
            return false;
        }
        let d = lcm(self.denom, other.denom);
        let a = self.with_denominator(d);
        let b = other.with_denominator(d);
        a.coeffs == b.coeffs
    }
}

impl Eq for FracSeries {}

impl fmt::Display for FracSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})q^({e})")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(t) = &self.trunc {
            write!(f, " + O(q^({t}))")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl<'a> $tr<&'a FracSeries> for &'a FracSeries {
            type Output = FracSeries;
            fn $method(self, rhs: &'a FracSeries) -> FracSeries {
                FracSeries::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &FracSeries {
    type Output = FracSeries;
    fn neg(self) -> FracSeries {
        FracSeries::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64], trunc: Option<i64>) -> FracSeries {
        let v: Vec<Rational> = coeffs.iter().map(|c| int(*c)).collect();
        FracSeries::from_dense(&v, trunc.map(int))
    }

    #[test]
    fn add_identity_and_lcm() {
        let a = poly(&[1, 1], None);
        assert_eq!(a.add(&FracSeries::zero()), a);

        let half = FracSeries::monomial(int(1), &rat(1, 2));
        let third = FracSeries::monomial(int(1), &rat(1, 3));
        let s = half.add(&third);
        assert_eq!(s.denominator(), 6);
        let raw: Vec<_> = s.raw_terms().map(|(e, c)| (e, c.clone())).collect();
        assert_eq!(raw, vec![(2, int(1)), (3, int(1))]);
    }

    #[test]
    fn add_takes_min_truncation() {
        let a = poly(&[1, 2], Some(3));
        let b = poly(&[-1, 0, 1], Some(2));
        let s = a.add(&b);
        assert_eq!(s, poly(&[0, 2], Some(2)));
        assert_eq!(s.truncation(), Some(&int(2)));
    }

    #[test]
    fn mul_examples() {
        let a = poly(&[1, 1], None);
        let b = poly(&[1, -1], None);
        assert_eq!(a.mul(&b), poly(&[1, 0, -1], None));

        let lo = FracSeries::monomial(int(1), &rat(-1, 24));
        let hi = FracSeries::monomial(int(1), &rat(1, 24));
        assert_eq!(lo.mul(&hi), FracSeries::one());
    }

    #[test]
    fn mul_truncation_uses_valuations() {
        // (q + O(q^5)) * (q^-1 + 1 + O(q^3)) is exact below min(5-1, 3+1) = 4
        let a = FracSeries::from_terms(1, [(1, int(1))], Some(int(5)));
        let b = FracSeries::from_terms(1, [(-1, int(1)), (0, int(1))], Some(int(3)));
        let p = a.mul(&b);
        assert_eq!(p.truncation(), Some(&int(4)));
        assert_eq!(p.coefficient(&int(0)).unwrap(), int(1));
        assert_eq!(p.coefficient(&int(1)).unwrap(), int(1));
    }

    #[test]
    fn theta_derivative_examples() {
        let a = poly(&[0, 1, 1], None);
        assert_eq!(a.theta_derivative(0), a);
        assert_eq!(a.theta_derivative(1), poly(&[0, 1, 2], None));
        let quarter = FracSeries::monomial(int(1), &rat(1, 4));
        assert_eq!(quarter.theta_derivative(2), FracSeries::monomial(rat(1, 16), &rat(1, 4)));
    }

    #[test]
    fn rescale_examples() {
        let a = FracSeries::monomial(int(1), &rat(1, 4)).add(&FracSeries::monomial(int(1), &int(1)));
        assert_eq!(a.rescale_variable(&int(1)).unwrap(), a);
        let b = a.rescale_variable(&int(4)).unwrap();
        assert_eq!(b, FracSeries::monomial(int(1), &int(1)).add(&FracSeries::monomial(int(1), &int(4))));
        assert!(a.rescale_variable(&int(0)).is_err());
    }

    #[test]
    fn parity_examples() {
        let a = poly(&[1, 1, 1], None);
        assert_eq!(a.parity_part(1, 2).unwrap(), poly(&[0, 1], None));
        assert_eq!(a.parity_part(0, 2).unwrap(), poly(&[1, 0, 1], None));
        let frac = FracSeries::monomial(int(1), &rat(1, 2));
        assert!(matches!(frac.parity_part(0, 2), Err(Error::NonIntegralExponent(_))));
    }

    #[test]
    fn coefficient_examples() {
        let a = poly(&[1, 2], Some(2));
        assert_eq!(a.coefficient(&int(1)).unwrap(), int(2));
        assert_eq!(a.coefficient(&rat(1, 2)).unwrap(), int(0));
        assert!(matches!(a.coefficient(&int(3)), Err(Error::BeyondTruncation { .. })));
    }

    #[test]
    fn equality_ignores_denominator() {
        let a = FracSeries::from_terms(2, [(1, int(3)), (4, int(-1))], Some(int(5)));
        assert_eq!(a.with_denominator(6), a);
        assert_eq!(a.normalized().denominator(), 2);
    }
}
