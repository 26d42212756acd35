//! Library-versus-oracle consistency checks, runnable from the command line.

use num::complex::Complex64;
use num::{BigInt, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{self, HurwitzTable};
use crate::forms::{self, EtaVariant};
use crate::lattice11::{majorant_theta, min_identity_holds, split_coset_data, split_theta, Lattice11, SpecialPoint};
use crate::oracles;
use crate::qseries::int;
use crate::weilrep::{rho_s, rho_t_matrix, trace, DiscriminantGroup};
use crate::Rational;

#[derive(Clone, Debug, Serialize)]
pub struct SelfCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, failure: Option<String>, ok_detail: String) -> SelfCheck {
    SelfCheck { name: name.into(), passed: failure.is_none(), detail: failure.unwrap_or(ok_detail) }
}

/// `H(n)` against Dirichlet's class number formula and against
/// `r₃(n) = 12(H(4n) − 2H(n))`.
pub fn hurwitz_oracles(n_max: usize) -> SelfCheck {
    let table = HurwitzTable::build(4 * n_max);
    let mut bad = None;
    for n in 0..=n_max {
        if *table.value(n) != oracles::hurwitz_from_class_numbers(n as i64) {
            bad = Some(format!("H({n}) = {} disagrees with the class number formula", table.value(n)));
            break;
        }
        if n >= 1 {
            let rel = int(12) * (table.value(4 * n) - int(2) * table.value(n));
            if rel != int(oracles::r3(n as i64)) {
                bad = Some(format!("r3({n}) != 12(H(4n) - 2H(n))"));
                break;
            }
        }
    }
    check("hurwitz", bad, format!("n <= {n_max}"))
}

pub fn partition_oracle(n_max: usize) -> SelfCheck {
    let lib = arith::partition_table(n_max);
    let dp = oracles::partitions_dp(n_max);
    let bad = (0..=n_max).find(|&n| lib[n] != dp[n]).map(|n| format!("p({n}) = {} vs {}", lib[n], dp[n]));
    check("partitions", bad, format!("n <= {n_max}"))
}

pub fn spt_oracle(n_max: usize) -> SelfCheck {
    let lib = arith::spt_table(n_max);
    let bad = (1..=n_max)
        .find(|&n| lib[n] != BigInt::from(oracles::spt_by_enumeration(n as u32)))
        .map(|n| format!("spt({n}) = {}", lib[n]));
    check("spt", bad, format!("n <= {n_max}"))
}

pub fn eta_oracle(through: i64) -> SelfCheck {
    let t = int(through + 1);
    let a = forms::dedekind_eta(&t, EtaVariant::Sum);
    let b = forms::dedekind_eta(&t, EtaVariant::Product);
    check("eta", (a != b).then(|| "sum and product forms differ".into()), format!("through q^{through}"))
}

pub fn g_series_oracle(k_max: u32, through: i64) -> SelfCheck {
    let mut bad = None;
    'outer: for k in (2..=k_max).step_by(2) {
        let g = forms::g_series(k, &int(through + 1)).expect("even weight");
        for n in 1..=through {
            let want = Rational::from_integer(oracles::g_coefficient(k, n));
            if g.coefficient(&int(n)).expect("in range") != want {
                bad = Some(format!("G_{k} at q^{n}"));
                break 'outer;
            }
        }
    }
    check("g_series", bad, format!("k <= {k_max}, through q^{through}"))
}

/// Exact `√|q(X_{w⊥})| − √|q(X_w)| = ±min(|X₁y₂|,|X₂y₁|)/√(y₁y₂)` on random
/// dual vectors and special points.
pub fn min_identity_random(count: usize, seed: u64) -> SelfCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lattices = [Lattice11::standard(), Lattice11::scaled(2), Lattice11::scaled(3)];
    let mut bad = None;
    for _ in 0..count {
        let l = &lattices[rng.gen_range(0..lattices.len())];
        let (y1, y2) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
        let w = SpecialPoint::new(l, y1, y2).expect("positive point");
        let x = l.from_dual_coordinates(rng.gen_range(-40..=40), rng.gen_range(-40..=40));
        if !min_identity_holds(&x, &w) {
            bad = Some(format!("X = ({}, {}), y = ({y1}, {y2})", x[0], x[1]));
            break;
        }
    }
    check("min_identity", bad, format!("{count} random pairs"))
}

/// `Θ_{L,w} = Tr(θ_{d_P} ⊗ θ_{d_N})` for several special points.
pub fn theta_trace(through: i64) -> SelfCheck {
    let t = int(through + 1);
    let l = Lattice11::standard();
    let mut bad = None;
    for (y1, y2) in [(1, 1), (1, 2), (1, 3), (2, 3)] {
        let w = SpecialPoint::new(&l, y1, y2).expect("positive point");
        let ok = (|| -> crate::Result<bool> {
            let data = split_coset_data(&l, &w)?;
            Ok(majorant_theta(&l, &w, &t)? == trace(&split_theta(&w, &t)?, &data)?)
        })();
        if !matches!(ok, Ok(true)) {
            bad = Some(format!("y = ({y1}, {y2}): {ok:?}"));
            break;
        }
    }
    check("theta_trace", bad, format!("through q^{through}"))
}

type Mat = Vec<Vec<Complex64>>;

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut c = vec![vec![Complex64::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

fn max_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter().zip(b).flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm())).fold(0.0, f64::max)
}

/// Every signed factor list `[d₁, …]` (nondecreasing) with `Π 2|dᵢ| ≤ max_order`.
pub fn groups_up_to(max_order: usize) -> Vec<Vec<i64>> {
    fn extend(prefix: &mut Vec<i64>, order: usize, max_order: usize, out: &mut Vec<Vec<i64>>) {
        let last = prefix.last().copied().unwrap_or(i64::MIN);
        for d in -(max_order as i64 / 2)..=(max_order as i64 / 2) {
            if d == 0 || d < last || order * 2 * d.unsigned_abs() as usize > max_order {
                continue;
            }
            prefix.push(d);
            out.push(prefix.clone());
            extend(prefix, order * 2 * d.unsigned_abs() as usize, max_order, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max_order, &mut out);
    out
}

/// Unitarity of `ρ(S)`, `ρ(T)` and `(ST)³ = S²` on discriminant groups.
pub fn weil_relations(max_order: usize, tol: f64) -> SelfCheck {
    let mut bad = None;
    let groups = groups_up_to(max_order);
    for ds in &groups {
        let g = DiscriminantGroup::from_factors(ds).expect("nonzero factors");
        let s = rho_s(&g);
        let t = rho_t_matrix(&g);
        let n = s.len();
        let id: Mat = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() }).collect())
            .collect();
        let adj = |m: &Mat| -> Mat { (0..n).map(|i| (0..n).map(|j| m[j][i].conj()).collect()).collect() };
        let s2 = matmul(&s, &s);
        let st = matmul(&s, &t);
        let st3 = matmul(&matmul(&st, &st), &st);
        let errs = [max_diff(&matmul(&s, &adj(&s)), &id), max_diff(&matmul(&t, &adj(&t)), &id), max_diff(&st3, &s2)];
        if errs.iter().any(|e| *e > tol) {
            bad = Some(format!("factors {ds:?}: errors {errs:?}"));
            break;
        }
    }
    check("weil_relations", bad, format!("{} groups of order <= {max_order}, tolerance {tol:e}", groups.len()))
}

/// The full suite with its standard sizes.
pub fn run_all() -> Vec<SelfCheck> {
    vec![
        hurwitz_oracles(2000),
        partition_oracle(500),
        spt_oracle(60),
        eta_oracle(50),
        g_series_oracle(12, 40),
        min_identity_random(1000, 0x5eed),
        theta_trace(20),
        weil_relations(48, 1e-12),
    ]
}
