//! The named scalar generating series: theta, Hurwitz class numbers, eta,
//! the smallest-parts series `g`, the weight-`k` series `G_k`, and the
//! Eisenstein series used as basis generators.

use num::{BigInt, Signed, ToPrimitive, Zero};

use crate::arith::{self, HurwitzTable};
use crate::error::{Error, Result};
use crate::qseries::{int, rat, FracSeries};
use crate::Rational;

/// Number of non-negative numerators `e` with `e/d < t`, i.e. `⌈t·d⌉`
/// clamped at zero.
pub(crate) fn numerators_below(t: &Rational, d: i64) -> i64 {
    let td = t * Rational::from_integer(BigInt::from(d));
    let c = td.ceil().to_integer();
    if c.is_negative() {
        0
    } else {
        c.to_i64().expect("truncation too large")
    }
}

/// Largest `n ≥ 0` with `n < t` plus one: the count of integer exponents
/// `0..count` below `t`.
pub(crate) fn integers_below(t: &Rational) -> usize {
    numerators_below(t, 1) as usize
}

/// `θ(τ) = Σ_{n∈ℤ} q^{n²}` through `t`.
pub fn jacobi_theta(t: &Rational) -> FracSeries {
    let n_max = integers_below(t) as i64;
    let mut terms = vec![(0, int(1))];
    let mut n = 1;
    while n * n < n_max {
        terms.push((n * n, int(2)));
        n += 1;
    }
    FracSeries::from_terms(1, terms, Some(t.clone()))
}

/// `ℋ(τ) = Σ_{n≥0} H(n) q^n` through `t`.
pub fn hurwitz_gen(t: &Rational) -> FracSeries {
    let n = integers_below(t);
    let table = HurwitzTable::build(n.saturating_sub(1));
    hurwitz_gen_from(&table, t).expect("table sized to fit")
}

/// As [`hurwitz_gen`], reading values from a prebuilt table.
pub fn hurwitz_gen_from(table: &HurwitzTable, t: &Rational) -> Result<FracSeries> {
    let n = integers_below(t);
    if n > table.max_n() + 1 {
        return Err(Error::InsufficientPrecision { needed: int(n as i64), available: int(table.max_n() as i64 + 1) });
    }
    Ok(FracSeries::from_dense(&table.values()[..n], Some(t.clone())))
}

/// The two components `Σ_{n≡0 (4)} H(n) q^{n/4}` and `Σ_{n≡3 (4)} H(n) q^{n/4}`
/// of the level-4 class-number form, with the transcendental prefactor
/// dropped. Exponents have denominator 4; `t` is in units of `q`.
pub fn curly_g_components(t: &Rational) -> (FracSeries, FracSeries) {
    let n = numerators_below(t, 4) as usize;
    let table = HurwitzTable::build(n.saturating_sub(1));
    curly_g_components_from(&table, t).expect("table sized to fit")
}

/// As [`curly_g_components`], reading from a prebuilt table.
pub fn curly_g_components_from(table: &HurwitzTable, t: &Rational) -> Result<(FracSeries, FracSeries)> {
    let n = numerators_below(t, 4) as usize;
    if n > table.max_n() + 1 {
        return Err(Error::InsufficientPrecision { needed: int(n as i64), available: int(table.max_n() as i64 + 1) });
    }
    let pick = |res: usize| {
        FracSeries::from_terms(
            4,
            (0..n).filter(|k| k % 4 == res).map(|k| (k as i64, table.value(k).clone())),
            Some(t.clone()),
        )
    };
    Ok((pick(0), pick(3)))
}

/// Which construction of `η` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EtaVariant {
    /// `Σ_{n≥1} χ₁₂(n) q^{n²/24}`.
    Sum,
    /// `q^{1/24} ∏_{n≥1} (1 − q^n)`.
    Product,
}

/// Dedekind eta through `t`, exponents over 24.
pub fn dedekind_eta(t: &Rational, variant: EtaVariant) -> FracSeries {
    let limit = numerators_below(t, 24);
    match variant {
        EtaVariant::Sum => {
            let mut terms = Vec::new();
            let mut n: i64 = 1;
            while n * n < limit {
                let chi = arith::kronecker12(n);
                if chi != 0 {
                    terms.push((n * n, int(chi as i64)));
                }
                n += 1;
            }
            FracSeries::from_terms(24, terms, Some(t.clone()))
        }
        EtaVariant::Product => {
            // integer k with 1 + 24k < limit
            let len = if limit > 1 { ((limit - 2) / 24 + 1) as usize } else { 0 };
            let mut c = vec![BigInt::zero(); len];
            if len > 0 {
                c[0] = BigInt::from(1);
            }
            for m in 1..len {
                for k in (m..len).rev() {
                    let prev = c[k - m].clone();
                    c[k] -= prev;
                }
            }
            FracSeries::from_terms(
                24,
                c.into_iter().enumerate().map(|(k, v)| (1 + 24 * k as i64, Rational::from_integer(v))),
                Some(t.clone()),
            )
        }
    }
}

/// `g(τ) = q^{-1/24} Σ_{n≥0} (spt(n) + (24n−1)p(n)/12) q^n` through `t`,
/// taking `spt(0) = 0`.
pub fn spt_gen_g(t: &Rational) -> FracSeries {
    // exponents n − 1/24 < t  ⇔  24n − 1 < 24t
    let limit = numerators_below(t, 24);
    let count = ((limit + 1 + 23) / 24) as usize;
    if count == 0 {
        return FracSeries::from_terms(24, Vec::new(), Some(t.clone()));
    }
    let p = arith::partition_table(count - 1);
    let s = arith::spt_table(count - 1);
    let terms = (0..count).map(|n| {
        let e = 24 * n as i64 - 1;
        let c = Rational::from_integer(s[n].clone()) + rat(e, 12) * Rational::from_integer(p[n].clone());
        (e, c)
    });
    FracSeries::from_terms(24, terms, Some(t.clone()))
}

/// `G_k(τ) = −Σ_{r>s>0} χ₁₂(r²−s²) s^{k−1} q^{rs/6}` through `t`. Every
/// surviving exponent must be an integer; anything else is reported.
pub fn g_series(k: u32, t: &Rational) -> Result<FracSeries> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("G_k needs even k >= 2, got {k}")));
    }
    let limit = numerators_below(t, 6); // need rs < limit
    let mut terms = Vec::new();
    let mut s: i64 = 1;
    while s * (s + 1) < limit {
        let mut r = s + 1;
        while r * s < limit {
            let chi = arith::kronecker12(r * r - s * s);
            if chi != 0 {
                if (r * s) % 6 != 0 {
                    return Err(Error::NonIntegralExponent(rat(r * s, 6)));
                }
                let w = Rational::from_integer(num::pow(BigInt::from(s), (k - 1) as usize));
                terms.push((r * s / 6, -w * int(chi as i64)));
            }
            r += 1;
        }
        s += 1;
    }
    Ok(FracSeries::from_terms(1, terms, Some(t.clone())))
}

/// `E₄ = 1 + 240 Σ σ₃(n) qⁿ` or `E₆ = 1 − 504 Σ σ₅(n) qⁿ` through `t`.
pub fn eisenstein(k: u32, t: &Rational) -> Result<FracSeries> {
    let (scale, power) = match k {
        4 => (240, 3),
        6 => (-504, 5),
        _ => return Err(Error::InvalidArgument(format!("eisenstein supports k = 4, 6; got {k}"))),
    };
    let n = integers_below(t) as i64;
    let mut terms = vec![(0, int(1))];
    for m in 1..n {
        let s = arith::sigma(m, power)?;
        terms.push((m, Rational::from_integer(s * BigInt::from(scale))));
    }
    Ok(FracSeries::from_terms(1, terms, Some(t.clone())))
}

/// `F = Σ_{n odd} σ₁(n) qⁿ`, weight 2 on `Γ₀(4)`.
pub fn f_weight2(t: &Rational) -> FracSeries {
    let n = integers_below(t) as i64;
    let terms = (1..n).step_by(2).map(|m| (m, Rational::from_integer(arith::sigma(m, 1).expect("m >= 1"))));
    FracSeries::from_terms(1, terms, Some(t.clone()))
}
