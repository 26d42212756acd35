//! Algebraic and structural invariants checked on random inputs.

use proptest::prelude::*;

use crate::arith::kronecker12;
use crate::lattice11::{split_coset_data, Lattice11, SpecialPoint};
use crate::lift_numeric::{lift_simplified, LiftInput, LiftPoint, LiftTerm};
use crate::modspaces::{basis, membership, Level, Membership};
use crate::rankin_cohen::{rc_bracket, HalfIntWeight};
use crate::weilrep::{pairing, restrict, trace, VectorSeries};
use crate::{forms, int, rat, FracSeries};

fn series(denom: i64, trunc: Option<i64>) -> impl Strategy<Value = FracSeries> {
    let t = trunc.unwrap_or(12);
    prop::collection::vec((0..t * denom, -9i64..=9, 1i64..=4), 0..8).prop_map(move |terms| {
        FracSeries::from_terms(denom, terms.into_iter().map(|(e, n, d)| (e, rat(n, d))), trunc.map(int))
    })
}

fn any_exact() -> impl Strategy<Value = FracSeries> {
    prop_oneof![series(1, None), series(2, None), series(4, None), series(24, None)]
}

fn weight() -> impl Strategy<Value = HalfIntWeight> {
    (1i64..=12).prop_map(HalfIntWeight::from_twice)
}

fn common(a: &FracSeries, b: &FracSeries) -> (FracSeries, FracSeries) {
    match (a.truncation(), b.truncation()) {
        (Some(x), Some(y)) => {
            let t = x.min(y).clone();
            (a.truncate(&t), b.truncate(&t))
        }
        _ => (a.clone(), b.clone()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in any_exact(), b in any_exact(), c in any_exact()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&FracSeries::one()), a.clone());
        prop_assert!(a.sub(&a).is_empty());
    }

    #[test]
    fn truncated_products_distribute(a in series(2, Some(10)), b in series(4, Some(8)), c in series(4, Some(9))) {
        let (l, r) = common(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(l, r);
    }

    #[test]
    fn theta_derivative_is_a_derivation(f in any_exact(), g in any_exact(), r in 0u32..4) {
        let lhs = f.mul(&g).theta_derivative(1);
        let rhs = f.theta_derivative(1).mul(&g).add(&f.mul(&g.theta_derivative(1)));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.theta_derivative(r).theta_derivative(1), f.theta_derivative(r + 1));
    }

    #[test]
    fn rescale_composes(f in series(4, Some(10)), a in 1i64..=6, b in 1i64..=6, c in 1i64..=3) {
        let ab = rat(a, c) * rat(b, 1);
        let two = f.rescale_variable(&rat(a, c)).unwrap().rescale_variable(&int(b)).unwrap();
        prop_assert_eq!(two, f.rescale_variable(&ab).unwrap());
    }

    #[test]
    fn denominator_is_bookkeeping(f in any_exact(), g in any_exact(), k in 1i64..=6) {
        let fk = f.with_denominator(f.denominator() * k);
        prop_assert_eq!(&fk, &f);
        prop_assert_eq!(fk.mul(&g), f.mul(&g));
        prop_assert_eq!(f.normalized(), f);
    }

    #[test]
    fn kronecker12_is_multiplicative(m in -500i64..500, n in -500i64..500) {
        prop_assert_eq!(kronecker12(m * n), kronecker12(m) * kronecker12(n));
    }

    #[test]
    fn bracket_antisymmetry_and_bilinearity(
        f in series(4, None), g in series(24, None), h in series(24, None),
        kf in weight(), kg in weight(), n in 0u32..4, s in -3i64..=3,
    ) {
        let (fg, w1) = rc_bracket(&f, kf, &g, kg, n).unwrap();
        let (gf, w2) = rc_bracket(&g, kg, &f, kf, n).unwrap();
        prop_assert_eq!(w1, w2);
        let sign = if n % 2 == 0 { int(1) } else { int(-1) };
        prop_assert_eq!(fg.clone(), gf.scale(&sign));
        let gh = g.add(&h.scale(&int(s)));
        let (lhs, _) = rc_bracket(&f, kf, &gh, kg, n).unwrap();
        let (fh, _) = rc_bracket(&f, kf, &h, kg, n).unwrap();
        prop_assert_eq!(lhs, fg.add(&fh.scale(&int(s))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn membership_is_stable_in_margin(a in -5i64..=5, b in -5i64..=5, extra in 1u32..20) {
        let t = int(80);
        let e4 = forms::eisenstein(4, &t).unwrap();
        let e6 = forms::eisenstein(6, &t).unwrap();
        let f = e4.pow(3).scale(&int(a)).add(&e6.pow(2).scale(&int(b)));
        let space = basis(Level::Sl2Z, 12, &t).unwrap();
        let m1 = membership(&f, &space, 50).unwrap();
        let m2 = membership(&f, &space, 50 + extra).unwrap();
        prop_assert!(matches!(m1, Membership::Member { .. }), "expected membership");
        prop_assert_eq!(m1, m2);
        // a non-modular perturbation at q^60 stays rejected for every margin
        let g = f.add(&FracSeries::monomial(int(1), &int(60)).truncate(&t));
        let n1 = membership(&g, &space, 50).unwrap();
        let n2 = membership(&g, &space, 50 + extra).unwrap();
        prop_assert!(matches!(n1, Membership::NotMember { .. }), "expected rejection");
        prop_assert_eq!(n1, n2);
    }

    #[test]
    fn simplified_lift_is_linear(c1 in -4.0f64..4.0, c2 in -4.0f64..4.0, j in 1u32..4, m in 1i64..8) {
        let term = |c: f64, coset: Vec<i64>| LiftTerm { coset, m: rat(-m, 4), c };
        let input = |terms: Vec<LiftTerm>| LiftInput { lattice: Lattice11::standard(), terms, j, point: LiftPoint::Special(1, 2) };
        // q(t, r) = (t² − r²)/4 mod 1 must match −m/4
        let coset = match m % 4 {
            0 => vec![0, 0],
            1 => vec![0, 1],
            3 => vec![1, 0],
            _ => return Ok(()),
        };
        let a = lift_simplified(&input(vec![term(c1, coset.clone())])).unwrap();
        let b = lift_simplified(&input(vec![term(c2, coset.clone())])).unwrap();
        let ab = lift_simplified(&input(vec![term(c1, coset.clone()), term(c2, coset)])).unwrap();
        prop_assert!((ab - a - b).abs() <= 1e-9 * (a.abs() + b.abs()).max(1e-300));
    }

    #[test]
    fn restriction_and_trace_are_adjoint(
        coeffs in prop::collection::vec(prop::collection::vec(-5i64..=5, 4), 16),
        y in prop_oneof![Just((1i64, 1i64)), Just((1, 2)), Just((1, 3))],
    ) {
        let l = Lattice11::standard();
        let w = SpecialPoint::new(&l, y.0, y.1).unwrap();
        let data = split_coset_data(&l, &w).unwrap();
        let t = int(4);
        let mk = |n: usize, off: usize| -> Vec<FracSeries> {
            (0..n).map(|i| FracSeries::from_terms(1, coeffs[(i + off) % coeffs.len()].iter().enumerate()
                .map(|(e, c)| (e as i64, int(*c))), Some(t.clone()))).collect()
        };
        let f = VectorSeries::new(data.l_group().clone(), mk(data.l_group().order(), 0)).unwrap();
        let g = VectorSeries::new(data.k_group().clone(), mk(data.k_group().order(), 5)).unwrap();
        let lhs = pairing(&restrict(&f, &data).unwrap(), &g).unwrap();
        let rhs = pairing(&f, &trace(&g, &data).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn kronecker12_basics() {
    let v: Vec<i8> = (0..12).map(kronecker12).collect();
    assert_eq!(v, vec![0, 1, 0, 0, 0, -1, 0, -1, 0, 0, 0, 1]);
}
