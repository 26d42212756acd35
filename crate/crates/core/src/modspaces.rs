//! Explicit bases of `M_k(Γ₀(4))` and `M_k(SL₂(ℤ))`, Sturm bounds, and exact
//! membership: a q-series is certified modular by matching a basis
//! combination on every known coefficient.

use num::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{self, integers_below};
use crate::qseries::{int, FracSeries};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Level {
    /// `Γ₀(4)`, index 6 in `SL₂(ℤ)`.
    Gamma0Of4,
    /// The full modular group.
    Sl2Z,
}

impl Level {
    pub fn index(&self) -> u32 {
        match self {
            Level::Gamma0Of4 => 6,
            Level::Sl2Z => 1,
        }
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Level::Gamma0Of4 => write!(f, "Gamma0(4)"),
            Level::Sl2Z => write!(f, "SL2(Z)"),
        }
    }
}

/// `⌈k·[SL₂(ℤ):Γ]/12⌉`.
pub fn sturm_bound(k: u32, level: Level) -> u32 {
    (k * level.index()).div_ceil(12)
}

/// Default number of extra coefficients checked beyond the Sturm bound.
pub fn default_margin(sturm: u32) -> u32 {
    50.max(3 * sturm)
}

/// Echelonized basis together with the generator monomials it came from.
#[derive(Clone, Debug)]
pub struct SpaceBasis {
    pub level: Level,
    pub weight: u32,
    trunc: Rational,
    /// Monomial exponents: `(a, b)` for `θ^{2a}F^b` or `E₄^a E₆^b`.
    pub monomials: Vec<(u32, u32)>,
    /// Monomial series in the order of [`Self::monomials`].
    pub monomial_series: Vec<FracSeries>,
    /// Row-reduced basis; row `i` has leading exponent `pivots[i]`.
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    /// `rows[i] = Σ_m transform[i][m] · monomial_series[m]`.
    transform: Vec<Vec<Rational>>,
}

impl SpaceBasis {
    fn from_monomials(
        level: Level,
        weight: u32,
        t: &Rational,
        monomials: Vec<(u32, u32)>,
        series: Vec<FracSeries>,
    ) -> Result<Self> {
        let n = integers_below(t);
        let dense: Vec<Vec<Rational>> = series.iter().map(|s| s.to_dense(n)).collect::<Result<_>>()?;
        let (rows, pivots, transform) = rref(dense);
        if rows.len() != monomials.len() {
            return Err(Error::InsufficientPrecision {
                needed: int(monomials.len() as i64),
                available: int(rows.len() as i64),
            });
        }
        Ok(SpaceBasis { level, weight, trunc: t.clone(), monomials, monomial_series: series, rows, pivots, transform })
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn truncation(&self) -> &Rational {
        &self.trunc
    }

    /// Leading exponents of the echelon rows, strictly increasing.
    pub fn leading_exponents(&self) -> &[usize] {
        &self.pivots
    }

    /// Echelon rows as series.
    pub fn echelon_series(&self) -> Vec<FracSeries> {
        self.rows.iter().map(|r| FracSeries::from_dense(r, Some(self.trunc.clone()))).collect()
    }
}

/// Reduced row echelon form; returns rows, pivot columns and the row
/// operations applied (as a matrix acting on the input rows).
fn rref(mut rows: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>, Vec<Vec<Rational>>) {
    let m = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut tr: Vec<Vec<Rational>> =
        (0..m).map(|i| (0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        tr.swap(r, p);
        let inv = Rational::one() / &rows[r][col];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for x in tr[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in 0..ncols {
                    let v = &f * &rows[r][c];
                    rows[i][c] -= v;
                }
                for c in 0..m {
                    let v = &f * &tr[r][c];
                    tr[i][c] -= v;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    tr.truncate(r);
    (rows, pivots, tr)
}

/// Basis of `M_k(Γ₀(4))` from `θ^{2a}F^b`, `a + 2b = k`.
pub fn basis_gamma0_4(k: u32, t: &Rational) -> Result<SpaceBasis> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("Gamma0(4) basis needs even k >= 2, got {k}")));
    }
    let th2 = forms::jacobi_theta(t).pow(2);
    let f = forms::f_weight2(t);
    let mut monomials = Vec::new();
    let mut series = Vec::new();
    for b in 0..=k / 2 {
        let a = k - 2 * b;
        monomials.push((a, b));
        series.push(th2.pow(a).mul(&f.pow(b)).truncate(t));
    }
    SpaceBasis::from_monomials(Level::Gamma0Of4, k, t, monomials, series)
}

/// Basis of `M_k(SL₂(ℤ))` from `E₄^a E₆^b`, `4a + 6b = k`.
pub fn basis_sl2(k: u32, t: &Rational) -> Result<SpaceBasis> {
    if k < 4 || !k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("SL2(Z) basis needs even k >= 4, got {k}")));
    }
    let e4 = forms::eisenstein(4, t)?;
    let e6 = forms::eisenstein(6, t)?;
    let mut monomials = Vec::new();
    let mut series = Vec::new();
    for a in 0..=k / 4 {
        let rest = k - 4 * a;
        if rest.is_multiple_of(6) {
            let b = rest / 6;
            monomials.push((a, b));
            series.push(e4.pow(a).mul(&e6.pow(b)).truncate(t));
        }
    }
    SpaceBasis::from_monomials(Level::Sl2Z, k, t, monomials, series)
}

pub fn basis(level: Level, k: u32, t: &Rational) -> Result<SpaceBasis> {
    match level {
        Level::Gamma0Of4 => basis_gamma0_4(k, t),
        Level::Sl2Z => basis_sl2(k, t),
    }
}

/// Outcome of a membership test.
#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    /// Coefficients in the monomial basis, and in the echelon basis.
    Member { combination: Vec<Rational>, echelon: Vec<Rational> },
    /// First exponent at which no basis combination matches.
    NotMember { first_failure: Rational },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Tests whether `series` lies in the span of `basis` on every coefficient
/// below the smaller of the two truncations. Needs at least
/// `sturm_bound + margin` known coefficients.
pub fn membership(series: &FracSeries, basis: &SpaceBasis, margin: u32) -> Result<Membership> {
    let sturm = sturm_bound(basis.weight, basis.level);
    let needed = int((sturm + margin) as i64);
    let avail = match series.truncation() {
        Some(t) if t < &basis.trunc => t.clone(),
        _ => basis.trunc.clone(),
    };
    if avail < needed {
        return Err(Error::InsufficientPrecision { needed, available: avail });
    }
    if let Some(bad) = series.first_non_integral() {
        return Err(Error::NonIntegralExponent(bad));
    }
    if let Some(low) = series.lowest_exponent() {
        if low < Rational::zero() {
            return Ok(Membership::NotMember { first_failure: low });
        }
    }
    let n = integers_below(&avail);
    let v = series.to_dense(n)?;
    let echelon: Vec<Rational> = basis.pivots.iter().map(|&p| v[p].clone()).collect();
    for e in 0..n {
        let fit: Rational = basis.rows.iter().zip(&echelon).map(|(row, c)| &row[e] * c).sum();
        if fit != v[e] {
            return Ok(Membership::NotMember { first_failure: int(e as i64) });
        }
    }
    let m = basis.monomials.len();
    let combination = (0..m).map(|j| basis.transform.iter().zip(&echelon).map(|(tr, c)| &tr[j] * c).sum()).collect();
    Ok(Membership::Member { combination, echelon })
}

/// Membership plus vanishing at `∞`: the combination has no component on
/// the echelon row with leading exponent 0. Cusps other than `∞` are not
/// examined.
pub fn cusp_at_infinity(result: &Membership, basis: &SpaceBasis) -> bool {
    match result {
        Membership::Member { echelon, .. } => basis.pivots.iter().zip(echelon).all(|(p, c)| *p >= 1 || c.is_zero()),
        Membership::NotMember { .. } => false,
    }
}
