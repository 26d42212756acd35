//! Even lattices of signature (1,1) in `ℚ²` with `Q(a,b) = ab`, special
//! points, projections onto a positive line and its complement, and the
//! finite lattice sums weighted by `min(|X₁y₂|, |X₂y₁|)`.

use std::collections::BTreeMap;

use num::integer::Integer;
use num::{One, Signed, ToPrimitive, Zero};

use crate::arith::divisors;
use crate::error::{Error, Result};
use crate::qseries::{int, FracSeries};
use crate::weilrep::{tensor, unary_theta, CosetData, DiscriminantGroup, VectorSeries};
use crate::Rational;

/// A vector of `ℚ²`.
pub type Vec2 = [Rational; 2];

pub fn vec2(a: i64, b: i64) -> Vec2 {
    [int(a), int(b)]
}

/// `(X, Y) = X₁Y₂ + X₂Y₁`.
pub fn bilinear(x: &Vec2, y: &Vec2) -> Rational {
    &x[0] * &y[1] + &x[1] * &y[0]
}

/// `Q(X) = X₁X₂`.
pub fn quad(x: &Vec2) -> Rational {
    &x[0] * &x[1]
}

fn scale(c: &Rational, x: &Vec2) -> Vec2 {
    [c * &x[0], c * &x[1]]
}

fn add(x: &Vec2, y: &Vec2) -> Vec2 {
    [&x[0] + &y[0], &x[1] + &y[1]]
}

fn rat_to_i64(x: &Rational) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Lattice `ℤb₁ ⊕ ℤb₂` with `Q(b₁) = d₁ > 0`, `Q(b₂) = −d₂ < 0` and
/// `(b₁, b₂) = 0`; its discriminant group is `ℤ(d₁) ⊕ ℤ(−d₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice11 {
    b1: Vec2,
    b2: Vec2,
    d1: i64,
    d2: i64,
}

impl Lattice11 {
    pub fn new(b1: Vec2, b2: Vec2) -> Result<Self> {
        let q1 = quad(&b1);
        let q2 = quad(&b2);
        if !bilinear(&b1, &b2).is_zero() {
            return Err(Error::InvalidArgument("basis vectors must be orthogonal".into()));
        }
        let d1 = rat_to_i64(&q1).filter(|d| *d > 0);
        let d2 = rat_to_i64(&-q2).filter(|d| *d > 0);
        match (d1, d2) {
            (Some(d1), Some(d2)) => Ok(Lattice11 { b1, b2, d1, d2 }),
            _ => Err(Error::InvalidArgument("need Q(b1) a positive and Q(b2) a negative integer".into())),
        }
    }

    /// `ℤ(1) ⊕ ℤ(−1)` spanned by `(1,1)` and `(1,−1)`.
    pub fn standard() -> Self {
        Self::scaled(1)
    }

    /// `ℤ(d) ⊕ ℤ(−d)` spanned by `(1,d)` and `(1,−d)`.
    pub fn scaled(d: i64) -> Self {
        Self::new(vec2(1, d), vec2(1, -d)).expect("valid for d >= 1")
    }

    pub fn basis(&self) -> (&Vec2, &Vec2) {
        (&self.b1, &self.b2)
    }

    pub fn discriminant_group(&self) -> DiscriminantGroup {
        DiscriminantGroup::from_factors(&[self.d1, -self.d2]).expect("nonzero")
    }

    /// Dual coordinates `(α, β) = ((X,b₁), −(X,b₂))`, so that
    /// `X = α b₁/2d₁ + β b₂/2d₂`.
    pub fn dual_coordinates(&self, x: &Vec2) -> (Rational, Rational) {
        (bilinear(x, &self.b1), -bilinear(x, &self.b2))
    }

    pub fn from_dual_coordinates(&self, alpha: i64, beta: i64) -> Vec2 {
        add(&scale(&crate::rat(alpha, 2 * self.d1), &self.b1), &scale(&crate::rat(beta, 2 * self.d2), &self.b2))
    }

    pub fn in_dual(&self, x: &Vec2) -> bool {
        let (a, b) = self.dual_coordinates(x);
        a.is_integer() && b.is_integer()
    }

    pub fn contains(&self, x: &Vec2) -> bool {
        let (a, b) = self.dual_coordinates(x);
        let u = a / int(2 * self.d1);
        let v = b / int(2 * self.d2);
        u.is_integer() && v.is_integer()
    }

    /// Class of `X ∈ L′` in `L′/L` as residues `(α mod 2d₁, β mod 2d₂)`.
    pub fn coset(&self, x: &Vec2) -> Result<Vec<i64>> {
        let (a, b) = self.dual_coordinates(x);
        match (rat_to_i64(&a), rat_to_i64(&b)) {
            (Some(a), Some(b)) => Ok(vec![a.rem_euclid(2 * self.d1), b.rem_euclid(2 * self.d2)]),
            _ => Err(Error::InvalidArgument(format!("({}, {}) is not in the dual lattice", x[0], x[1]))),
        }
    }

    /// Least common denominator of the coordinates of `L′`.
    pub fn dual_denominator(&self) -> i64 {
        let mut den = 1i64;
        for x in [self.from_dual_coordinates(1, 0), self.from_dual_coordinates(0, 1)] {
            for c in &x {
                den = den.lcm(&c.denom().to_i64().expect("small denominators"));
            }
        }
        den
    }

    /// All `X ∈ L′` with `X₁X₂ = m`, for `m ≠ 0`. Finite: writing
    /// `X = (u, v)/den` gives `uv = m·den²`, a divisor enumeration.
    pub fn dual_vectors_with_norm(&self, m: &Rational) -> Result<Vec<Vec2>> {
        if m.is_zero() {
            return Err(Error::InvalidArgument("norm 0 has infinitely many vectors".into()));
        }
        let den = self.dual_denominator();
        let n = m * int(den * den);
        if !n.is_integer() {
            return Ok(Vec::new());
        }
        let n = n.to_integer().to_i64().ok_or_else(|| Error::Overflow("norm".into()))?;
        let mut out = Vec::new();
        for u in divisors(n.unsigned_abs()) {
            let u = u as i64;
            let v = n / u;
            for s in [1, -1] {
                let x = [crate::rat(s * u, den), crate::rat(s * v, den)];
                if self.in_dual(&x) {
                    out.push(x);
                }
            }
        }
        Ok(out)
    }

    /// Smallest positive multiple of the direction `v` lying in `L`.
    pub fn primitive_on_line(&self, v: &Vec2) -> Result<Vec2> {
        if v[0].is_zero() && v[1].is_zero() {
            return Err(Error::InvalidArgument("zero direction".into()));
        }
        let (a, b) = self.dual_coordinates(v);
        let u = a / int(2 * self.d1);
        let w = b / int(2 * self.d2);
        // smallest t > 0 with t·u, t·w ∈ ℤ
        let l = u.denom().lcm(w.denom());
        let un = u.numer() * (&l / u.denom());
        let wn = w.numer() * (&l / w.denom());
        let g = un.gcd(&wn);
        let t = Rational::new(l, g.abs());
        Ok(scale(&t, v))
    }
}

/// A rational positive line `w = ℚy` with `y₁, y₂ > 0`, and the generators of
/// `P = L ∩ w` and `N = L ∩ w^⊥`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialPoint {
    pub y: Vec2,
    pub yperp: Vec2,
    pub d_p: i64,
    pub d_n: i64,
}

impl SpecialPoint {
    /// The special point on the line through `(y1, y2)`, `y1, y2 > 0`.
    pub fn new(lattice: &Lattice11, y1: i64, y2: i64) -> Result<Self> {
        if y1 <= 0 || y2 <= 0 {
            return Err(Error::InvalidArgument("special points need y1, y2 > 0".into()));
        }
        let y = lattice.primitive_on_line(&vec2(y1, y2))?;
        let yperp = lattice.primitive_on_line(&vec2(-y1, y2))?;
        let d_p = rat_to_i64(&quad(&y)).ok_or_else(|| Error::Overflow("d_P".into()))?;
        let d_n = rat_to_i64(&-quad(&yperp)).ok_or_else(|| Error::Overflow("d_N".into()))?;
        Ok(SpecialPoint { y, yperp, d_p, d_n })
    }

    /// `(y, y) = 2y₁y₂`.
    pub fn norm2(&self) -> Rational {
        bilinear(&self.y, &self.y)
    }

    /// The sublattice `P ⊕ N` as the vector `a·y/2d_P + b·y^⊥/2d_N` for the
    /// residue pair `(a, b)`.
    pub fn split_vector(&self, a: i64, b: i64) -> Vec2 {
        add(&scale(&crate::rat(a, 2 * self.d_p), &self.y), &scale(&crate::rat(b, 2 * self.d_n), &self.yperp))
    }

    /// `ℤ(d_P) ⊕ ℤ(−d_N)`.
    pub fn split_group(&self) -> DiscriminantGroup {
        DiscriminantGroup::from_factors(&[self.d_p, -self.d_n]).expect("nonzero")
    }
}

/// `(q(X_w), |q(X_{w^⊥})|)` with `q(X_w) = (X,y)²/2(y,y)` and
/// `|q(X_{w^⊥})| = q(X_w) − X₁X₂`.
pub fn project(x: &Vec2, w: &SpecialPoint) -> (Rational, Rational) {
    let xy = bilinear(x, &w.y);
    let qw = &xy * &xy / (int(2) * w.norm2());
    let qperp = &qw - quad(x);
    (qw, qperp)
}

/// `min(|X₁y₂|, |X₂y₁|)` (unnormalized).
pub fn min_term(x: &Vec2, w: &SpecialPoint) -> Rational {
    let a = (&x[0] * &w.y[1]).abs();
    let b = (&x[1] * &w.y[0]).abs();
    if a < b {
        a
    } else {
        b
    }
}

/// `−1` when `X₁X₂ > 0`, otherwise `+1`: the sign of
/// `√|q(X_{w^⊥})| − √|q(X_w)|`.
fn min_sign(x: &Vec2) -> i64 {
    if quad(x).is_positive() {
        -1
    } else {
        1
    }
}

/// `(√|q(X_{w^⊥})| − √|q(X_w)|)^{1+2j}` via
/// `±min(|X₁y₂|, |X₂y₁|)/√(y₁y₂)`.
pub fn min_weight(x: &Vec2, w: &SpecialPoint, j: u32) -> f64 {
    let m = min_term(x, w).to_f64().unwrap() / quad(&w.y).to_f64().unwrap().sqrt();
    (min_sign(x) as f64 * m).powi(1 + 2 * j as i32)
}

/// Same quantity from the two square roots directly.
pub fn min_weight_direct(x: &Vec2, w: &SpecialPoint, j: u32) -> f64 {
    let (qw, qp) = project(x, w);
    let v = qp.to_f64().unwrap().abs().sqrt() - qw.to_f64().unwrap().abs().sqrt();
    v.powi(1 + 2 * j as i32)
}

/// Exact rational square root, if any.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

/// Exact [`min_weight`] when `y₁y₂` is a rational square.
pub fn min_weight_exact(x: &Vec2, w: &SpecialPoint, j: u32) -> Result<Rational> {
    let root = rational_sqrt(&quad(&w.y)).ok_or_else(|| Error::Irrational(format!("sqrt({})", quad(&w.y))))?;
    let m = int(min_sign(x)) * min_term(x, w) / root;
    Ok(num::pow(m, 1 + 2 * j as usize))
}

/// Checks `√A − √B = σ·√M` exactly, where `A = |q(X_{w^⊥})|`,
/// `B = q(X_w)`, `M = min(|X₁y₂|,|X₂y₁|)²/(y₁y₂)` and `σ` the sign above,
/// by squaring twice and comparing the sign conditions.
pub fn min_identity_holds(x: &Vec2, w: &SpecialPoint) -> bool {
    let (b, a) = project(x, w);
    let mt = min_term(x, w);
    let m = &mt * &mt / quad(&w.y);
    let s = &a + &b - &m;
    let squared = !s.is_negative() && int(4) * &a * &b == &s * &s;
    let sign_ok = m.is_zero() || ((a >= b) == (min_sign(x) > 0));
    squared && sign_ok && !a.is_negative()
}

/// One input coefficient of a lift: coefficient `c` at coset `coset` and
/// norm `m < 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftCoeff {
    pub coset: Vec<i64>,
    pub m: Rational,
    pub c: Rational,
}

/// `raw / (d_P)^{j+½}`, the value of a lattice sum at a special point.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftSum {
    pub raw: Rational,
    pub d_p: i64,
    pub j: u32,
}

impl LiftSum {
    pub fn to_f64(&self) -> f64 {
        self.raw.to_f64().unwrap() / (self.d_p as f64).powf(self.j as f64 + 0.5)
    }

    /// Exact value when `d_P` is a perfect square.
    pub fn exact(&self) -> Result<Rational> {
        let root = rational_sqrt(&int(self.d_p)).ok_or_else(|| Error::Irrational(format!("sqrt({})", self.d_p)))?;
        Ok(&self.raw / num::pow(root, 1 + 2 * self.j as usize))
    }
}

/// `Σ c · (√|q(X_{w^⊥})| − √|q(X_w)|)^{1+2j}` over the support: for each
/// `(coset, m, c)` every `X ∈ L′` in the coset with `X₁X₂ = m`.
pub fn lift_sum(lattice: &Lattice11, w: &SpecialPoint, coeffs: &[LiftCoeff], j: u32) -> Result<LiftSum> {
    let group = lattice.discriminant_group();
    let mut raw = Rational::zero();
    for lc in coeffs {
        if !lc.m.is_negative() {
            return Err(Error::InvalidArgument(format!("lift coefficients need m < 0, got {}", lc.m)));
        }
        let want = group.index_of(&lc.coset);
        for x in lattice.dual_vectors_with_norm(&lc.m)? {
            if group.index_of(&lattice.coset(&x)?) == want {
                raw += &lc.c * num::pow(min_term(&x, w), 1 + 2 * j as usize);
            }
        }
    }
    Ok(LiftSum { raw, d_p: quad(&w.y).to_integer().to_i64().unwrap_or(0), j })
}

/// `Σ_{X ∈ L′+γ, X₁X₂<0} min(|X₁y₂|,|X₂y₁|)^{1+2j} q^{−X₁X₂}` per coset,
/// through `t`, unnormalized by `(y₁y₂)^{j+½}`.
pub fn min_weight_series(lattice: &Lattice11, w: &SpecialPoint, j: u32, t: &Rational) -> Result<VectorSeries> {
    let group = lattice.discriminant_group();
    let den = lattice.dual_denominator();
    let mut terms: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); group.order()];
    // −X₁X₂ = n/den² for 1 ≤ n < t·den²
    let n_max = crate::forms::numerators_below(t, den * den);
    for n in 1..n_max {
        let m = crate::rat(-n, den * den);
        for x in lattice.dual_vectors_with_norm(&m)? {
            let idx = group.index_of(&lattice.coset(&x)?);
            terms[idx].push((-m.clone(), num::pow(min_term(&x, w), 1 + 2 * j as usize)));
        }
    }
    let comps =
        terms.into_iter().map(|ts| FracSeries::from_rational_terms(ts, Some(t.clone()))).collect::<Result<Vec<_>>>()?;
    VectorSeries::new(group, comps)
}

/// The majorant theta series `Σ_{X∈L′+γ} q^{q(X_w)+|q(X_{w^⊥})|}` per coset,
/// through `t`, with exponent `(X₁²y₂² + X₂²y₁²)/(2y₁y₂)`.
pub fn majorant_theta(lattice: &Lattice11, w: &SpecialPoint, t: &Rational) -> Result<VectorSeries> {
    let group = lattice.discriminant_group();
    let tf = t.to_f64().unwrap();
    let (y1, y2) = (w.y[0].to_f64().unwrap(), w.y[1].to_f64().unwrap());
    let bx1 = (2.0 * tf * y1 / y2).sqrt();
    let bx2 = (2.0 * tf * y2 / y1).sqrt();
    let bound = |b: &Vec2| (b[1].to_f64().unwrap().abs() * bx1 + b[0].to_f64().unwrap().abs() * bx2).ceil() as i64 + 1;
    let (ab, bb) = (bound(&lattice.b1), bound(&lattice.b2));
    let mut acc: Vec<BTreeMap<Rational, Rational>> = vec![BTreeMap::new(); group.order()];
    for alpha in -ab..=ab {
        for beta in -bb..=bb {
            let x = lattice.from_dual_coordinates(alpha, beta);
            let (qw, qp) = project(&x, w);
            let e = qw + qp;
            if &e < t {
                let idx = group.index_of(&lattice.coset(&x)?);
                *acc[idx].entry(e).or_insert_with(Rational::zero) += Rational::one();
            }
        }
    }
    let comps =
        acc.into_iter().map(|m| FracSeries::from_rational_terms(m, Some(t.clone()))).collect::<Result<Vec<_>>>()?;
    VectorSeries::new(group, comps)
}

/// Coset data for `P ⊕ N ⊆ L` at a special point.
pub fn split_coset_data(lattice: &Lattice11, w: &SpecialPoint) -> Result<CosetData> {
    let k = w.split_group();
    let l = lattice.discriminant_group();
    let proj = k
        .elements()
        .map(|x| {
            let v = w.split_vector(x[0], x[1]);
            if lattice.in_dual(&v) {
                lattice.coset(&v).map(|c| Some(l.index_of(&c)))
            } else {
                Ok(None)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    CosetData::new(k, l, proj)
}

/// `θ_{d_P} ⊗ θ_{d_N}` over `ℤ(d_P) ⊕ ℤ(−d_N)`: the split majorant theta of
/// `P ⊕ N`, with the negative-definite factor taken positive.
pub fn split_theta(w: &SpecialPoint, t: &Rational) -> Result<VectorSeries> {
    tensor(&unary_theta(w.d_p, t)?, &unary_theta(w.d_n, t)?).with_group(w.split_group())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use crate::weilrep::trace;

    fn std_point(y1: i64, y2: i64) -> (Lattice11, SpecialPoint) {
        let l = Lattice11::standard();
        let w = SpecialPoint::new(&l, y1, y2).unwrap();
        (l, w)
    }

    #[test]
    fn special_point_data() {
        let (l, w) = std_point(1, 1);
        assert_eq!(w.y, vec2(1, 1));
        assert_eq!(w.yperp, vec2(-1, 1));
        assert_eq!((w.d_p, w.d_n), (1, 1));
        assert!(bilinear(&w.y, &w.yperp).is_zero());
        let w2 = SpecialPoint::new(&l, 1, 2).unwrap();
        assert_eq!(w2.y, vec2(2, 4));
        assert_eq!((w2.d_p, w2.d_n), (8, 8));
        let w3 = SpecialPoint::new(&l, 1, 3).unwrap();
        assert_eq!((w3.d_p, w3.d_n), (3, 3));
    }

    #[test]
    fn projection_examples() {
        let (_, w) = std_point(1, 1);
        assert_eq!(project(&w.y, &w), (int(1), int(0)));
        assert_eq!(project(&vec2(3, -2), &w), (rat(1, 4), rat(25, 4)));
        assert_eq!(project(&w.yperp, &w).0, int(0));
    }

    #[test]
    fn min_weight_examples() {
        let (_, w) = std_point(1, 1);
        assert_eq!(min_weight_exact(&vec2(3, -2), &w, 1).unwrap(), int(8));
        assert_eq!(min_weight(&vec2(3, -2), &w, 1), 8.0);
        // X = y: √0 − √1 = −1, and the min formula carries the same sign
        assert_eq!(min_weight_exact(&w.y, &w, 1).unwrap(), int(-1));
        assert!((min_weight_direct(&w.y, &w, 1) + 1.0).abs() < 1e-15);
        assert!((min_weight_direct(&vec2(3, -2), &w, 1) - 8.0).abs() < 1e-12);
        let (_, w3) = std_point(1, 3);
        assert!(matches!(min_weight_exact(&vec2(3, -2), &w3, 1), Err(Error::Irrational(_))));
    }

    #[test]
    fn lift_sum_examples() {
        let (l, w) = std_point(1, 1);
        let one = |coset: Vec<i64>, m: i64| LiftCoeff { coset, m: int(m), c: int(1) };
        assert_eq!(lift_sum(&l, &w, &[], 1).unwrap().exact().unwrap(), int(0));
        assert_eq!(lift_sum(&l, &w, &[one(vec![0, 0], -1)], 1).unwrap().exact().unwrap(), int(2));
        assert_eq!(lift_sum(&l, &w, &[one(vec![1, 1], -2)], 1).unwrap().exact().unwrap(), int(4));
        assert_eq!(lift_sum(&l, &w, &[one(vec![0, 0], -2)], 1).unwrap().exact().unwrap(), int(0));
        assert!(lift_sum(&l, &w, &[one(vec![0, 0], 1)], 1).is_err());
    }

    #[test]
    fn dual_vectors() {
        let l = Lattice11::standard();
        let xs = l.dual_vectors_with_norm(&rat(-3, 4)).unwrap();
        // (±1/2, ∓3/2), (±3/2, ∓1/2)
        assert_eq!(xs.len(), 4);
        for x in &xs {
            assert_eq!(quad(x), rat(-3, 4));
            assert_eq!(l.coset(x).unwrap(), vec![1, 0]);
        }
        assert!(l.dual_vectors_with_norm(&int(0)).is_err());
    }

    #[test]
    fn split_theta_traces_to_majorant() {
        let t = int(12);
        for (y1, y2) in [(1, 1), (1, 3), (1, 2)] {
            let (l, w) = std_point(y1, y2);
            let data = split_coset_data(&l, &w).unwrap();
            let lhs = majorant_theta(&l, &w, &t).unwrap();
            let rhs = trace(&split_theta(&w, &t).unwrap(), &data).unwrap();
            assert_eq!(lhs, rhs, "y=({y1},{y2})");
        }
    }
}
