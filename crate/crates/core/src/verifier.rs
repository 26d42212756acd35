//! Assembles the series of each identity and certifies it through exact
//! basis membership, producing machine-readable reports.
//!
//! Every transcendental prefactor is cancelled before any series is built:
//! `c_j = j!√π/Γ(j+½) = 4^j/binom(2j,j)`, `C_j/π = 4·binom(2j,j)/4^j`, and the
//! `−8π` in front of the level-4 class-number form is absorbed into the
//! lattice-sum constant `c_j·C_j/(8π) = ½`. Each report records its
//! normalization in `normalization_notes`.

use std::time::Instant;

use num::{BigInt, One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::arith::{self, HurwitzTable, TableCache};
use crate::error::{Error, Result};
use crate::forms::{self, EtaVariant};
use crate::lattice11::{min_weight_series, Lattice11, SpecialPoint};
use crate::modspaces::{self, default_margin, membership, sturm_bound, Level, Membership};
use crate::qseries::{int, rat, FracSeries};
use crate::rankin_cohen::{gamma_ratio, rc_bracket, rc_bracket_vector, HalfIntWeight};
use crate::weilrep::{unary_theta, VectorSeries};
use crate::Rational;

/// Which reading of an identity to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Exactly as the identity is printed.
    Literal,
    /// With the corrections recorded in the report notes (sign of the
    /// Ahlgren–Kim constant, even-pair lattice sum, lattice form of the
    /// vector-valued components).
    Adjusted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Verified,
    Failed,
    InsufficientPrecision,
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub identity: String,
    pub params: Map<String, Value>,
    pub status: Status,
    pub combination: Vec<Rational>,
    pub first_failure: Option<Rational>,
    pub truncation: Rational,
    pub elapsed_ms: u64,
    pub normalization_notes: String,
}

fn rational_json(x: &Rational) -> Value {
    if x.is_integer() {
        big_json(&x.to_integer())
    } else {
        Value::String(x.to_string())
    }
}

fn big_json(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse().expect("integer literal"))
}

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }

    pub fn to_json(&self) -> Value {
        json!({
            "identity": self.identity,
            "params": Value::Object(self.params.clone()),
            "status": self.status,
            "combination": self
                .combination
                .iter()
                .map(|c| json!([big_json(c.numer()), big_json(c.denom())]))
                .collect::<Vec<_>>(),
            "first_failure": self.first_failure.as_ref().map(rational_json).unwrap_or(Value::Null),
            "truncation": rational_json(&self.truncation),
            "elapsed_ms": self.elapsed_ms,
            "normalization_notes": self.normalization_notes,
        })
    }

    pub fn to_text(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let comb: Vec<String> = self.combination.iter().map(|c| c.to_string()).collect();
        let mut s = format!("{} [{}]: {:?}", self.identity, params.join(", "), self.status);
        if let Some(f) = &self.first_failure {
            s.push_str(&format!(" (first failure at q^{f})"));
        }
        s.push_str(&format!("\n  truncation: {}\n  combination: [{}]\n", self.truncation, comb.join(", ")));
        if !self.normalization_notes.is_empty() {
            s.push_str(&format!("  notes: {}\n", self.normalization_notes));
        }
        s
    }
}

/// `4^j / binom(2j, j)`, the value of `j!√π/Γ(j+½)`.
pub fn c_j(j: u32) -> Rational {
    Rational::new(num::pow(BigInt::from(4), j as usize), binom(2 * j, j))
}

/// `j!√π/Γ(j+½)` with `Γ(j+½)/√π` as the falling factorial `(j−½)⋯(½)`.
pub fn c_j_from_gamma(j: u32) -> Rational {
    let fact = Rational::from_integer((1..=j).map(BigInt::from).product());
    fact / half_gamma_over_sqrt_pi(j)
}

/// `Γ(j+½)/√π`.
fn half_gamma_over_sqrt_pi(j: u32) -> Rational {
    gamma_ratio(HalfIntWeight::from_twice(1), j, j).expect("no pole at 1/2 + j")
}

/// `C_j/π` in the reduced form `4·binom(2j,j)/4^j`.
pub fn big_c_j_over_pi(j: u32) -> Rational {
    Rational::new(BigInt::from(4) * binom(2 * j, j), num::pow(BigInt::from(4), j as usize))
}

/// `C_j/π = 2^{2j+3}Γ(½+j)Γ(3/2+j)/(πΓ(2+2j))` through falling factorials.
pub fn big_c_j_over_pi_from_gamma(j: u32) -> Rational {
    let g1 = half_gamma_over_sqrt_pi(j);
    let g2 = half_gamma_over_sqrt_pi(j + 1);
    let fact = Rational::from_integer((1..=2 * j + 1).map(BigInt::from).product());
    Rational::from_integer(num::pow(BigInt::from(2), (2 * j + 3) as usize)) * g1 * g2 / fact
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Default truncation `max(60, 4·sturm)`.
pub fn default_truncation(k: u32, level: Level) -> u32 {
    60.max(4 * sturm_bound(k, level))
}

struct Check {
    status: Status,
    combination: Vec<Rational>,
    first_failure: Option<Rational>,
}

fn certify(series: &FracSeries, level: Level, k: u32, t: &Rational, require_cusp: bool) -> Result<Check> {
    let sturm = sturm_bound(k, level);
    let margin = default_margin(sturm);
    let avail = series.truncation().cloned().unwrap_or_else(|| t.clone());
    if avail < int((sturm + margin) as i64) {
        return Ok(Check { status: Status::InsufficientPrecision, combination: vec![], first_failure: None });
    }
    let basis = modspaces::basis(level, k, t)?;
    let m = membership(series, &basis, margin)?;
    Ok(match &m {
        Membership::Member { combination, .. } => {
            let cusp_ok = !require_cusp || modspaces::cusp_at_infinity(&m, &basis);
            Check {
                status: if cusp_ok { Status::Verified } else { Status::Failed },
                combination: combination.clone(),
                first_failure: if cusp_ok { None } else { Some(int(0)) },
            }
        }
        Membership::NotMember { first_failure } => {
            Check { status: Status::Failed, combination: vec![], first_failure: Some(first_failure.clone()) }
        }
    })
}

fn insufficient(
    identity: &str,
    params: Map<String, Value>,
    t: &Rational,
    start: Instant,
    notes: String,
) -> VerificationReport {
    VerificationReport {
        identity: identity.into(),
        params,
        status: Status::InsufficientPrecision,
        combination: vec![],
        first_failure: None,
        truncation: t.clone(),
        elapsed_ms: start.elapsed().as_millis() as u64,
        normalization_notes: notes,
    }
}

fn needs(k: u32, level: Level) -> u32 {
    let s = sturm_bound(k, level);
    s + default_margin(s)
}

/// `Σ_{n∈ℤ, n²≤4t} (t−n²) H(4t−n²)` and `Σ_{ab=t} min(a,b)³`.
pub fn classical_sides(t: u64, table: &HurwitzTable) -> (Rational, Rational) {
    let t_i = t as i64;
    let mut lhs = Rational::zero();
    let mut n: i64 = 0;
    while n * n <= 4 * t_i {
        let term = int(t_i - n * n) * table.value((4 * t_i - n * n) as usize);
        lhs += if n == 0 { term } else { term * int(2) };
        n += 1;
    }
    let rhs = Rational::from_integer(arith::min_divisor_power_sum(t, 3));
    (lhs, rhs)
}

/// The class-number relation for `1 ≤ t ≤ t_max`.
pub fn verify_classical(t_max: u64, cache: Option<&TableCache>) -> VerificationReport {
    let start = Instant::now();
    let table = HurwitzTable::load_or_build(4 * t_max as usize, cache);
    let mut first = None;
    for t in 1..=t_max {
        let (l, r) = classical_sides(t, &table);
        if l != r {
            first = Some(int(t as i64));
            break;
        }
    }
    let mut params = Map::new();
    params.insert("t_max".into(), json!(t_max));
    VerificationReport {
        identity: "classical".into(),
        params,
        status: if first.is_none() { Status::Verified } else { Status::Failed },
        combination: vec![],
        first_failure: first,
        truncation: int(t_max as i64),
        elapsed_ms: start.elapsed().as_millis() as u64,
        normalization_notes: "exact equality of both sides for every t; boundary terms n^2 = 4t use H(0) = -1/12"
            .into(),
    }
}

/// `[ℋ, θ]_j` with weights `(3/2, 1/2)` through `t`.
pub fn hurwitz_theta_bracket(j: u32, t: &Rational, table: Option<&HurwitzTable>) -> Result<FracSeries> {
    let h = match table {
        Some(tb) => forms::hurwitz_gen_from(tb, t)?,
        None => forms::hurwitz_gen(t),
    };
    let th = forms::jacobi_theta(t);
    Ok(rc_bracket(&h, HalfIntWeight::from_twice(3), &th, HalfIntWeight::from_twice(1), j)?.0)
}

/// `Σ_{n odd} λ_{2j+1}(n) qⁿ` through `t`.
pub fn lambda_series(j: u32, t: &Rational) -> FracSeries {
    let n = forms::integers_below(t) as i64;
    let terms = (1..n).step_by(2).map(|m| (m, arith::lambda_ell(m, 2 * j + 1).expect("m >= 1")));
    FracSeries::from_terms(1, terms, Some(t.clone()))
}

/// `Σ_{m≥1} w·Σ_{ab=4m} min(a,b)^{2j+1} q^{4m}`, over all ordered divisor
/// pairs, or only pairs with `a, b` both even.
pub fn even_min_series(j: u32, t: &Rational, weight: &Rational, even_pairs_only: bool) -> FracSeries {
    let n = forms::integers_below(t) as u64;
    let terms = (1..).map(|m| 4 * m).take_while(|m| *m < n).map(|m| {
        let s: BigInt = arith::divisors(m)
            .into_iter()
            .filter(|a| !even_pairs_only || (a % 2 == 0 && (m / a) % 2 == 0))
            .map(|a| num::pow(BigInt::from(a.min(m / a)), (2 * j + 1) as usize))
            .sum();
        (m as i64, Rational::from_integer(s) * weight)
    });
    FracSeries::from_terms(1, terms, Some(t.clone()))
}

/// The scalar level-4 series for one parity.
pub fn mertens_series(
    j: u32,
    t: &Rational,
    parity: Parity,
    convention: Convention,
    table: Option<&HurwitzTable>,
) -> Result<FracSeries> {
    let br = hurwitz_theta_bracket(j, t, table)?.scale(&c_j(j));
    Ok(match parity {
        Parity::Odd => br.parity_part(1, 2)?.add(&lambda_series(j, t)),
        Parity::Even => {
            let part = br.parity_part(0, 2)?;
            match convention {
                Convention::Literal => part.add(&even_min_series(j, t, &int(1), false)),
                Convention::Adjusted => part.add(&even_min_series(j, t, &rat(1, 2), true)),
            }
        }
    })
}

/// The level-4 identity for the odd part (cusp form) or the even part.
pub fn verify_mertens(
    j: u32,
    terms: Option<u32>,
    parity: Parity,
    convention: Convention,
    cache: Option<&TableCache>,
) -> Result<VerificationReport> {
    if j == 0 {
        return Err(Error::InvalidArgument("j must be at least 1".into()));
    }
    let start = Instant::now();
    let k = 2 * j + 2;
    let level = Level::Gamma0Of4;
    let t_u = terms.unwrap_or_else(|| default_truncation(k, level));
    let t = int(t_u as i64);
    let identity = match parity {
        Parity::Odd => "mertens",
        Parity::Even => "mertens-even",
    };
    let mut params = Map::new();
    params.insert("j".into(), json!(j));
    params.insert("weight".into(), json!(k));
    params.insert("level".into(), json!(level.to_string()));
    params.insert("convention".into(), json!(convention));
    params.insert("c_j".into(), rational_json(&c_j(j)));
    let mut notes = format!("c_j = j! sqrt(pi)/Gamma(j+1/2) = 4^j/binom(2j,j) = {}; brackets use q d/dq", c_j(j));
    match (parity, convention) {
        (Parity::Odd, _) => {
            notes.push_str("; odd part plus sum lambda_{2j+1}(n) q^n, n odd; cusp condition at infinity checked")
        }
        (Parity::Even, Convention::Literal) => {
            notes.push_str("; even part plus sum_{ab=4m} min(a,b)^{2j+1} q^{4m} over all divisor pairs")
        }
        (Parity::Even, Convention::Adjusted) => notes.push_str(
            "; even part plus 1/2 sum_{ab=4m, a,b even} min(a,b)^{2j+1} q^{4m} (lattice vectors with X1X2 = -m)",
        ),
    }
    if t_u < needs(k, level) {
        return Ok(insufficient(identity, params, &t, start, notes));
    }
    let table = HurwitzTable::load_or_build(t_u as usize, cache);
    let series = mertens_series(j, &t, parity, convention, Some(&table))?;
    let check = certify(&series, level, k, &t, parity == Parity::Odd)?;
    if parity == Parity::Odd && j == 1 {
        params.insert("identically_zero".into(), json!(series.is_empty()));
    }
    Ok(VerificationReport {
        identity: identity.into(),
        params,
        status: check.status,
        combination: check.combination,
        first_failure: check.first_failure,
        truncation: t,
        elapsed_ms: start.elapsed().as_millis() as u64,
        normalization_notes: notes,
    })
}

/// `g(τ/24)` in the normalization where `g` carries exponents `24n − 1`:
/// built as `spt_gen_g(24τ)` and then rescaled by `1/24`, which lands on
/// exponents `n − 1/24`.
pub fn spt_g_for_bracket(t: &Rational) -> Result<FracSeries> {
    let g24 = forms::spt_gen_g(t).rescale_variable(&int(24))?;
    g24.rescale_variable(&rat(1, 24))
}

/// `G_{2j+2} ± 24^j binom(2j,j)^{-1} [g(τ/24), η]_j` through `t`.
pub fn ahlgren_kim_series(j: u32, t: &Rational, convention: Convention) -> Result<FracSeries> {
    let g = spt_g_for_bracket(t)?;
    let eta = forms::dedekind_eta(t, EtaVariant::Sum);
    let (br, w) = rc_bracket(&g, HalfIntWeight::from_twice(3), &eta, HalfIntWeight::from_twice(1), j)?;
    debug_assert_eq!(w, HalfIntWeight::integral(2 * j as i64 + 2));
    if let Some(bad) = br.first_non_integral() {
        return Err(Error::NonIntegralExponent(bad));
    }
    let mut c = Rational::new(num::pow(BigInt::from(24), j as usize), binom(2 * j, j));
    if convention == Convention::Adjusted {
        c = -c;
    }
    let g_k = forms::g_series(2 * j + 2, t)?;
    Ok(g_k.add(&br.scale(&c)))
}

/// The level-one identity for the smallest-parts series.
pub fn verify_ahlgren_kim(j: u32, terms: Option<u32>, convention: Convention) -> Result<VerificationReport> {
    if j == 0 {
        return Err(Error::InvalidArgument("j must be at least 1".into()));
    }
    let start = Instant::now();
    let k = 2 * j + 2;
    let level = Level::Sl2Z;
    let t_u = terms.unwrap_or_else(|| default_truncation(k, level));
    let t = int(t_u as i64);
    let sign = if convention == Convention::Literal { "+" } else { "-" };
    let mut params = Map::new();
    params.insert("j".into(), json!(j));
    params.insert("weight".into(), json!(k));
    params.insert("level".into(), json!(level.to_string()));
    params.insert("convention".into(), json!(convention));
    let mut c = Rational::new(num::pow(BigInt::from(24), j as usize), binom(2 * j, j));
    if convention == Convention::Adjusted {
        c = -c;
    }
    params.insert("bracket_constant".into(), rational_json(&c));
    let notes = format!(
        "G_{k} {sign} 24^j/binom(2j,j) [g(tau/24), eta]_j with g(tau/24) = q^(-1/24) sum (spt(n) + (24n-1)p(n)/12) q^n, spt(0) = 0, \
         eta = sum chi12(n) q^(n^2/24); bracket weights (3/2, 1/2); all bracket exponents checked integral"
    );
    if t_u < needs(k, level) {
        return Ok(insufficient("ahlgren-kim", params, &t, start, notes));
    }
    let series = ahlgren_kim_series(j, &t, convention)?;
    let check = certify(&series, level, k, &t, false)?;
    Ok(VerificationReport {
        identity: "ahlgren-kim".into(),
        params,
        status: check.status,
        combination: check.combination,
        first_failure: check.first_failure,
        truncation: series.truncation().cloned().unwrap_or(t),
        elapsed_ms: start.elapsed().as_millis() as u64,
        normalization_notes: notes,
    })
}

/// The two components `Σ_{n≡0 (4)} H(n) q^{n/4}` and `Σ_{n≡3 (4)} H(n) q^{n/4}`
/// as a series over `ℤ(1)`, indexed by `t` with `n ≡ −t² (mod 4)`.
pub fn curly_g_vector(t: &Rational, table: Option<&HurwitzTable>) -> Result<VectorSeries> {
    let (a0, a3) = match table {
        Some(tb) => forms::curly_g_components_from(tb, t)?,
        None => forms::curly_g_components(t),
    };
    VectorSeries::new(crate::weilrep::DiscriminantGroup::cyclic(1)?, vec![a0, a3])
}

/// The vector-valued weight `2j+2` form over `L = ℤ(1) ⊕ ℤ(−1)` through `t`
/// (in units of `q`, exponents over 4).
///
/// Adjusted: `c_j[A_t, θ_r]_j + ½ Σ_{X∈L′+(t,r), X₁X₂<0} min(|X₁|,|X₂|)^{2j+1} q^{−X₁X₂}`.
/// Literal: `c_j[A_t, θ_r]_j + ½ Σ_{m} Σ_{ab=m, a≡b≡t+r (2)} min(a,b)^{2j+1} q^{m/4}`.
pub fn vector_form(j: u32, t: &Rational, convention: Convention, table: Option<&HurwitzTable>) -> Result<VectorSeries> {
    let lattice = Lattice11::standard();
    let group = lattice.discriminant_group();
    let a = curly_g_vector(t, table)?;
    let th = unary_theta(1, t)?;
    let (br, _) = rc_bracket_vector(&a, HalfIntWeight::from_twice(3), &th, HalfIntWeight::from_twice(1), j)?;
    let br = br.with_group(group.clone())?.scale(&c_j(j));
    let extra = match convention {
        Convention::Adjusted => {
            let w = SpecialPoint::new(&lattice, 1, 1)?;
            min_weight_series(&lattice, &w, j, t)?.scale(&rat(1, 2))
        }
        Convention::Literal => {
            let n_max = forms::numerators_below(t, 4);
            let mut comps = Vec::new();
            for x in group.elements() {
                let par = (x[0] + x[1]) % 2;
                let terms = (1..n_max).map(|m| {
                    let s: BigInt = arith::divisors(m as u64)
                        .into_iter()
                        .map(|d| (d as i64, m / d as i64))
                        .filter(|(p, q)| p % 2 == par && q % 2 == par)
                        .map(|(p, q)| num::pow(BigInt::from(p.min(q)), (2 * j + 1) as usize))
                        .sum();
                    (m, Rational::from_integer(s) * rat(1, 2))
                });
                comps.push(FracSeries::from_terms(4, terms, Some(t.clone())));
            }
            VectorSeries::new(group.clone(), comps)?
        }
    };
    br.add(&extra)
}

/// Odd and even scalar reductions `F_(1,0) + F_(0,1)` and `F_(0,0) + F_(1,1)`,
/// rescaled by `τ ↦ 4τ`.
pub fn vector_reductions(f: &VectorSeries) -> Result<(FracSeries, FracSeries)> {
    let odd = f.component_at(&[1, 0]).add(f.component_at(&[0, 1]));
    let even = f.component_at(&[0, 0]).add(f.component_at(&[1, 1]));
    Ok((odd.rescale_variable(&int(4))?, even.rescale_variable(&int(4))?))
}

/// The vector-valued identity at the special point `y = (1,1)`, certified
/// through both scalar reductions in `M_{2j+2}(Γ₀(4))`.
pub fn verify_vector(
    j: u32,
    terms: Option<u32>,
    convention: Convention,
    cache: Option<&TableCache>,
) -> Result<VerificationReport> {
    if j == 0 {
        return Err(Error::InvalidArgument("j must be at least 1".into()));
    }
    let start = Instant::now();
    let k = 2 * j + 2;
    let level = Level::Gamma0Of4;
    let t_u = terms.unwrap_or_else(|| default_truncation(k, level));
    let t = int(t_u as i64);
    let half = c_j(j) * big_c_j_over_pi(j) / int(8);
    let mut params = Map::new();
    params.insert("j".into(), json!(j));
    params.insert("weight".into(), json!(k));
    params.insert("lattice".into(), json!("Z(1)+Z(-1)"));
    params.insert("special_point".into(), json!([1, 1]));
    params.insert("convention".into(), json!(convention));
    params.insert("c_j".into(), rational_json(&c_j(j)));
    params.insert("C_j_over_pi".into(), rational_json(&big_c_j_over_pi(j)));
    params.insert("C_j_over_pi_matches_gamma".into(), json!(big_c_j_over_pi(j) == big_c_j_over_pi_from_gamma(j)));
    params.insert("lattice_constant".into(), rational_json(&half));
    let mut notes = format!(
        "C_j/pi = 2^(2j+3) Gamma(1/2+j) Gamma(3/2+j)/(pi Gamma(2+2j)) = 4 binom(2j,j)/4^j; \
         the -8pi prefactor of the class-number form cancels against C_j: c_j C_j/(8 pi) = {half}; \
         components over (Z/2)^2 indexed by ((X,b1), -(X,b2)) mod 2; reductions rescaled by tau -> 4 tau"
    );
    match convention {
        Convention::Adjusted => notes.push_str(
            "; lattice term 1/2 sum over X in L'+(t,r) with X1X2 < 0 of min(|X1|,|X2|)^(2j+1) q^(-X1X2), derivatives in tau",
        ),
        Convention::Literal => notes.push_str("; lattice term 1/2 sum_{ab=m, a,b = t+r mod 2} min(a,b)^(2j+1) at q^(m/4), derivatives in tau"),
    }
    if t_u < needs(k, level) {
        return Ok(insufficient("vector", params, &t, start, notes));
    }
    let t4 = &t / int(4);
    let table = HurwitzTable::load_or_build(t_u as usize, cache);
    let f = vector_form(j, &t4, convention, Some(&table))?;
    let (odd, even) = vector_reductions(&f)?;
    let odd_check = certify(&odd, level, k, &t, true)?;
    let even_check = certify(&even, level, k, &t, false)?;
    let mertens = mertens_series(j, &t, Parity::Odd, convention, Some(&table))?;
    let scale = Rational::from_integer(num::pow(BigInt::from(4), j as usize));
    params.insert("odd_times_4^j_equals_mertens_series".into(), json!(odd.scale(&scale) == mertens));
    params.insert("odd_status".into(), json!(odd_check.status));
    params.insert("even_status".into(), json!(even_check.status));
    params.insert("odd_combination_len".into(), json!(odd_check.combination.len()));
    let status = match (&odd_check.status, &even_check.status) {
        (Status::Verified, Status::Verified) => Status::Verified,
        (Status::InsufficientPrecision, _) | (_, Status::InsufficientPrecision) => Status::InsufficientPrecision,
        _ => Status::Failed,
    };
    let first_failure = odd_check.first_failure.clone().or(even_check.first_failure.clone());
    let mut combination = odd_check.combination;
    combination.extend(even_check.combination);
    notes.push_str("; combination lists the odd reduction's coefficients, then the even reduction's");
    Ok(VerificationReport {
        identity: "vector".into(),
        params,
        status,
        combination,
        first_failure,
        truncation: t,
        elapsed_ms: start.elapsed().as_millis() as u64,
        normalization_notes: notes,
    })
}

/// Classical relation through `t_max` plus every identity for `1 ≤ j ≤ j_max`,
/// run concurrently; reports come back in a fixed order.
pub fn verify_all(
    j_max: u32,
    t_max: u64,
    convention: Convention,
    cache: Option<&TableCache>,
) -> Result<Vec<VerificationReport>> {
    // warm the shared table once so concurrent runs only read it
    if let Some(c) = cache {
        let _ = HurwitzTable::load_or_build(4 * t_max as usize, Some(c));
    }
    let jobs: Vec<Box<dyn Fn() -> Result<VerificationReport> + Send + Sync + '_>> = {
        let mut v: Vec<Box<dyn Fn() -> Result<VerificationReport> + Send + Sync + '_>> =
            vec![Box::new(move || Ok(verify_classical(t_max, cache)))];
        for j in 1..=j_max {
            v.push(Box::new(move || verify_mertens(j, None, Parity::Odd, convention, cache)));
            v.push(Box::new(move || verify_mertens(j, None, Parity::Even, convention, cache)));
            v.push(Box::new(move || verify_vector(j, None, convention, cache)));
            v.push(Box::new(move || verify_ahlgren_kim(j, None, convention)));
        }
        v
    };
    let results: Vec<Result<VerificationReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs.iter().map(|job| s.spawn(job)).collect();
        handles.into_iter().map(|h| h.join().expect("verifier thread panicked")).collect()
    });
    results.into_iter().collect()
}

/// Whether a coefficient combination is identically zero.
pub fn is_zero_combination(c: &[Rational]) -> bool {
    c.iter().all(|x| x.is_zero())
}

/// Sign of a rational as `-1, 0, 1`; used in report summaries.
pub fn sign(x: &Rational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert_eq!(c_j(1), int(2));
        assert_eq!(big_c_j_over_pi(1), int(2));
        for j in 1..=10 {
            assert_eq!(c_j(j), c_j_from_gamma(j), "j={j}");
            assert_eq!(big_c_j_over_pi(j), big_c_j_over_pi_from_gamma(j), "j={j}");
            assert_eq!(c_j(j) * big_c_j_over_pi(j) / int(8), rat(1, 2));
        }
    }

    #[test]
    fn classical_small_t() {
        let table = HurwitzTable::build(40);
        assert_eq!(classical_sides(1, &table), (int(1), int(1)));
        let (l, r) = classical_sides(2, &table);
        assert_eq!(l, r);
        assert_eq!(r, int(2));
        assert!(verify_classical(0, None).is_verified());
        assert!(verify_classical(10, None).is_verified());
    }

    #[test]
    fn spt_rescaling_round_trip() {
        let t = int(5);
        assert_eq!(spt_g_for_bracket(&t).unwrap(), forms::spt_gen_g(&t));
    }

    #[test]
    fn insufficient_precision_report() {
        let r = verify_mertens(1, Some(1), Parity::Odd, Convention::Literal, None).unwrap();
        assert_eq!(r.status, Status::InsufficientPrecision);
    }

    #[test]
    fn identity_examples() {
        let r = verify_mertens(2, None, Parity::Odd, Convention::Literal, None).unwrap();
        assert!(r.is_verified());
        for j in 1..=2 {
            let r = verify_ahlgren_kim(j, None, Convention::Adjusted).unwrap();
            assert!(r.is_verified());
            assert_eq!(r.combination.len(), 1);
        }
        // every bracket term differentiates something, so no constant term survives
        let f = vector_form(1, &int(3), Convention::Adjusted, None).unwrap();
        assert_eq!(f.component_at(&[0, 0]).coefficient(&int(0)).unwrap(), int(0));
        let (odd, _) = vector_reductions(&f).unwrap();
        assert!(odd.is_empty());
    }

    #[test]
    fn cold_caches_reproduce_reports() {
        let strip = |r: VerificationReport| {
            let mut v = r.to_json();
            v.as_object_mut().unwrap().remove("elapsed_ms");
            serde_json::to_string(&v).unwrap()
        };
        let runs: Vec<String> = (0..2)
            .map(|_| {
                let dir = tempfile::tempdir().unwrap();
                let cache = TableCache::new(dir.path());
                strip(verify_vector(2, None, Convention::Adjusted, Some(&cache)).unwrap())
            })
            .collect();
        assert_eq!(runs[0], runs[1]);
    }

    #[test]
    fn report_json_shape() {
        let r = verify_classical(3, None);
        let v = r.to_json();
        for key in [
            "identity",
            "params",
            "status",
            "combination",
            "first_failure",
            "truncation",
            "elapsed_ms",
            "normalization_notes",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["status"], json!("Verified"));
        assert_eq!(v["first_failure"], Value::Null);
    }
}
