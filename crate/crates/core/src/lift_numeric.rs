//! Floating-point evaluation of the `n = 1` theta lift: the hypergeometric
//! series form, its closed form, and the simplified `min`-weighted sum at
//! special points.

use std::f64::consts::PI;

use num::{Signed, ToPrimitive};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::lattice11::{self, project, Lattice11, LiftCoeff, SpecialPoint, Vec2};
use crate::Rational;

const TERM_CAP: usize = 1_000_000;
const REL_EPS: f64 = 1e-16;

/// `₂F₁(a, b; c; z)` by direct summation for `|z| < 1`, stopping once the
/// geometric tail bound falls below `1e-16` relative to the partial sum.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(z.abs() < 1.0) {
        return Err(Error::Domain(format!("2F1 series needs |z| < 1, got {z}")));
    }
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(Error::Domain(format!("2F1 needs c not a non-positive integer, got {c}")));
    }
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..TERM_CAP {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        term *= ratio;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        let next = (a + kf + 1.0) * (b + kf + 1.0) / ((c + kf + 1.0) * (kf + 2.0)) * z;
        let rho = next.abs().max(z.abs());
        if rho < 1.0 && term.abs() * rho / (1.0 - rho) <= REL_EPS * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence(TERM_CAP))
}

/// `₂F₁(½+j, 1+j; 2+2j; z) = (½ + ½√(1−z))^{−1−2j}` for `z < 1`.
pub fn closed_form_n1(j: u32, z: f64) -> Result<f64> {
    if !(z < 1.0) {
        return Err(Error::Domain(format!("closed form needs z < 1, got {z}")));
    }
    Ok((0.5 + 0.5 * (1.0 - z).sqrt()).powi(-1 - 2 * j as i32))
}

/// Where the lift is evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum LiftPoint {
    /// The rational line through `(y₁, y₂)`.
    Special(i64, i64),
    /// An arbitrary positive vector.
    Real(f64, f64),
}

/// One input coefficient: `c⁺` at coset `coset` and norm `m < 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftTerm {
    pub coset: Vec<i64>,
    pub m: Rational,
    pub c: f64,
}

#[derive(Clone, Debug)]
pub struct LiftInput {
    pub lattice: Lattice11,
    pub terms: Vec<LiftTerm>,
    pub j: u32,
    pub point: LiftPoint,
}

/// `4^{1+2j} π^{½+j} Γ(1+j)Γ(½+j)/Γ(2+2j)`.
pub fn simplified_constant(j: u32) -> f64 {
    let jf = j as f64;
    4f64.powi(1 + 2 * j as i32) * PI.powf(0.5 + jf) * gamma(1.0 + jf) * gamma(0.5 + jf) / gamma(2.0 + 2.0 * jf)
}

/// `(4π)^{½+j} Γ(1+j)Γ(½+j)/Γ(2+2j)`, the `n = 1` prefactor of the series.
pub fn series_constant(j: u32) -> f64 {
    let jf = j as f64;
    (4.0 * PI).powf(0.5 + jf) * gamma(1.0 + jf) * gamma(0.5 + jf) / gamma(2.0 + 2.0 * jf)
}

fn check_terms(terms: &[LiftTerm]) -> Result<()> {
    for t in terms {
        if !t.m.is_negative() {
            return Err(Error::InvalidArgument(format!("lift coefficients need m < 0, got {}", t.m)));
        }
    }
    Ok(())
}

fn fmt_vec(x: &Vec2) -> String {
    format!("({}, {})", x[0], x[1])
}

/// `(q(X_z), |q(X_{z^⊥})|)` in floating point; exact for special points.
fn projections(x: &Vec2, point: &LiftPoint, lattice: &Lattice11) -> Result<(f64, f64, bool)> {
    match point {
        LiftPoint::Special(y1, y2) => {
            let w = SpecialPoint::new(lattice, *y1, *y2)?;
            let (qw, qp) = project(x, &w);
            let zero = num::Zero::is_zero(&qw);
            Ok((qw.to_f64().unwrap(), qp.to_f64().unwrap(), zero))
        }
        LiftPoint::Real(z1, z2) => {
            if !(*z1 > 0.0 && *z2 > 0.0) {
                return Err(Error::InvalidArgument("lift point must be a positive vector".into()));
            }
            let (x1, x2) = (x[0].to_f64().unwrap(), x[1].to_f64().unwrap());
            let xz = x1 * z2 + x2 * z1;
            let qw = xz * xz / (4.0 * z1 * z2);
            let qp = qw - x1 * x2;
            let scale = (x1 * x1 + x2 * x2).sqrt() * (z1 * z1 + z2 * z2).sqrt();
            Ok((qw, qp, xz.abs() <= 1e-13 * scale))
        }
    }
}

/// The `n = 1` hypergeometric series
/// `(4π)^{½+j} Γ(1+j)Γ(½+j)/Γ(2+2j) Σ c⁺ |q(X)|^{1+2j} |q(X_{z^⊥})|^{−½−j}
///  ₂F₁(½+j, 1+j; 2+2j; q(X)/q(X_{z^⊥}))`,
/// with `q(X)^{1+2j}` read as `|q(X)|^{1+2j}`.
pub fn lift_hypergeometric(input: &LiftInput) -> Result<f64> {
    check_terms(&input.terms)?;
    let j = input.j;
    let jf = j as f64;
    let group = input.lattice.discriminant_group();
    let mut total = 0.0;
    for t in &input.terms {
        let want = group.index_of(&t.coset);
        let qx = t.m.to_f64().unwrap();
        for x in input.lattice.dual_vectors_with_norm(&t.m)? {
            if group.index_of(&input.lattice.coset(&x)?) != want {
                continue;
            }
            let (_qw, qp, degenerate) = projections(&x, &input.point, &input.lattice)?;
            if degenerate {
                return Err(Error::DegeneratePoint(fmt_vec(&x)));
            }
            // q(X)/q(X_{z⊥}) with both negative
            let ratio = qx / -qp;
            let f = gauss_2f1(0.5 + jf, 1.0 + jf, 2.0 + 2.0 * jf, ratio)?;
            total += t.c * qx.abs().powi(1 + 2 * j as i32) * qp.powf(-0.5 - jf) * f;
        }
    }
    Ok(series_constant(j) * total)
}

/// `4^{1+2j} π^{½+j} Γ(1+j)Γ(½+j)/Γ(2+2j) Σ c⁺ (√|q(X_{w^⊥})| − √|q(X_w)|)^{1+2j}`
/// at a special point, through the exact lattice sum.
pub fn lift_simplified(input: &LiftInput) -> Result<f64> {
    check_terms(&input.terms)?;
    let LiftPoint::Special(y1, y2) = input.point else {
        return Err(Error::InvalidArgument("the simplified lift needs a special point".into()));
    };
    let w = SpecialPoint::new(&input.lattice, y1, y2)?;
    let coeffs = input
        .terms
        .iter()
        .map(|t| {
            let c = Rational::from_float(t.c).ok_or_else(|| Error::InvalidArgument(format!("coefficient {}", t.c)))?;
            Ok(LiftCoeff { coset: t.coset.clone(), m: t.m.clone(), c })
        })
        .collect::<Result<Vec<_>>>()?;
    let s = lattice11::lift_sum(&input.lattice, &w, &coeffs, input.j)?;
    Ok(simplified_constant(input.j) * s.to_f64())
}

/// `true` when some vector in the support is orthogonal to the point.
pub fn has_degenerate_vector(input: &LiftInput) -> Result<bool> {
    let group = input.lattice.discriminant_group();
    for t in &input.terms {
        let want = group.index_of(&t.coset);
        for x in input.lattice.dual_vectors_with_norm(&t.m)? {
            if group.index_of(&input.lattice.coset(&x)?) == want && projections(&x, &input.point, &input.lattice)?.2 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::int;

    fn input(terms: Vec<LiftTerm>, j: u32, point: LiftPoint) -> LiftInput {
        LiftInput { lattice: Lattice11::standard(), terms, j, point }
    }

    #[test]
    fn gauss_examples() {
        assert_eq!(gauss_2f1(1.5, 2.0, 3.0, 0.0).unwrap(), 1.0);
        assert_eq!(gauss_2f1(0.0, 2.0, 3.0, 0.7).unwrap(), 1.0);
        assert_eq!(gauss_2f1(2.0, 0.0, 3.0, -0.7).unwrap(), 1.0);
        // −ln(1 − z)/z at z = 1/2
        let want = 2.0 * 2f64.ln();
        assert!((gauss_2f1(1.0, 1.0, 2.0, 0.5).unwrap() - want).abs() < 1e-12);
        assert!(matches!(gauss_2f1(1.0, 1.0, 2.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(gauss_2f1(1.0, 1.0, -2.0, 0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_n1(1, 0.0).unwrap(), 1.0);
        assert!((closed_form_n1(1, 0.75).unwrap() - 64.0 / 27.0).abs() < 1e-14);
        assert!(closed_form_n1(1, 1.0).is_err());
    }

    #[test]
    fn simplified_example() {
        let t = vec![LiftTerm { coset: vec![0, 0], m: int(-1), c: 1.0 }];
        let v = lift_simplified(&input(t.clone(), 1, LiftPoint::Special(1, 1))).unwrap();
        let want = 64.0 * PI.powf(1.5) * (PI.sqrt() / 2.0 / 6.0) * 2.0;
        assert!((v - want).abs() < 1e-9 * want);
        let t2 = vec![LiftTerm { c: 2.0, ..t[0].clone() }];
        let v2 = lift_simplified(&input(t2, 1, LiftPoint::Special(1, 1))).unwrap();
        assert!((v2 - 2.0 * v).abs() < 1e-9 * v);
        assert_eq!(lift_simplified(&input(vec![], 2, LiftPoint::Special(1, 3))).unwrap(), 0.0);
        assert!(lift_simplified(&input(vec![], 2, LiftPoint::Real(1.0, 3.0))).is_err());
    }

    #[test]
    fn series_examples() {
        assert_eq!(lift_hypergeometric(&input(vec![], 1, LiftPoint::Real(1.0, 2.0))).unwrap(), 0.0);
        // (±1, ∓1) lies on the orthogonal complement of (1,1)
        let t = vec![LiftTerm { coset: vec![0, 0], m: int(-1), c: 1.0 }];
        assert!(matches!(
            lift_hypergeometric(&input(t.clone(), 1, LiftPoint::Special(1, 1))),
            Err(Error::DegeneratePoint(_))
        ));
        let a = lift_hypergeometric(&input(t.clone(), 1, LiftPoint::Special(1, 2))).unwrap();
        let b = lift_simplified(&input(t, 1, LiftPoint::Special(1, 2))).unwrap();
        assert!((a - b).abs() <= 1e-9 * b.abs());
    }

    #[test]
    fn special_and_real_points_agree() {
        let t = vec![LiftTerm { coset: vec![1, 1], m: int(-2), c: 1.5 }];
        let a = lift_hypergeometric(&input(t.clone(), 2, LiftPoint::Special(2, 3))).unwrap();
        let b = lift_hypergeometric(&input(t, 2, LiftPoint::Real(2.0, 3.0))).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.abs());
    }
}
