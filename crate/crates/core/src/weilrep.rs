//! Discriminant groups built from rank-one lattices `ℤ(±d)`, series valued in
//! their group rings, and the maps between them: Weil representation
//! generators, unary thetas, Atkin–Lehner involutions, tensor products,
//! restriction/trace and the constant-term pairings.

use num::complex::Complex64;
use num::integer::Integer;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::forms::numerators_below;
use crate::qseries::{int, rat, FracSeries};
use crate::Rational;

/// One cyclic factor `ℤ/2dℤ` with quadratic form `sign·x²/4d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub d: i64,
    pub positive: bool,
}

/// Direct sum of the discriminant groups of `ℤ(±d_i)`. Elements are residue
/// tuples, indexed lexicographically with the first factor most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscriminantGroup {
    factors: Vec<Factor>,
}

impl DiscriminantGroup {
    /// The trivial group (no factors, one element).
    pub fn trivial() -> Self {
        DiscriminantGroup { factors: Vec::new() }
    }

    /// `ℤ(d)` for `d > 0`, `ℤ(−|d|)` for `d < 0`.
    pub fn cyclic(d: i64) -> Result<Self> {
        Self::from_factors(&[d])
    }

    /// Direct sum of `ℤ(d_i)`, signs taken from the `d_i`.
    pub fn from_factors(ds: &[i64]) -> Result<Self> {
        if ds.contains(&0) {
            return Err(Error::InvalidArgument("factor d must be nonzero".into()));
        }
        Ok(DiscriminantGroup { factors: ds.iter().map(|&d| Factor { d: d.abs(), positive: d > 0 }).collect() })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn direct_sum(&self, other: &DiscriminantGroup) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        DiscriminantGroup { factors }
    }

    /// `|L′/L| = ∏ 2d_i`.
    pub fn order(&self) -> usize {
        self.factors.iter().map(|f| 2 * f.d as usize).product()
    }

    /// `(b⁺, b⁻)`: numbers of positive and negative factors.
    pub fn signature(&self) -> (i64, i64) {
        let r = self.factors.iter().filter(|f| f.positive).count() as i64;
        (r, self.factors.len() as i64 - r)
    }

    /// Residue tuple of the element with the given index.
    pub fn element(&self, mut idx: usize) -> Vec<i64> {
        let mut out = vec![0; self.factors.len()];
        for (k, f) in self.factors.iter().enumerate().rev() {
            let m = 2 * f.d as usize;
            out[k] = (idx % m) as i64;
            idx /= m;
        }
        out
    }

    /// Index of a residue tuple (entries reduced modulo `2d_i`).
    pub fn index_of(&self, x: &[i64]) -> usize {
        assert_eq!(x.len(), self.factors.len(), "element rank mismatch");
        let mut idx = 0usize;
        for (xi, f) in x.iter().zip(&self.factors) {
            let m = 2 * f.d;
            idx = idx * m as usize + xi.rem_euclid(m) as usize;
        }
        idx
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    /// `q(x) = Σ ±x_i²/4d_i` reduced to `[0, 1)`.
    pub fn q(&self, idx: usize) -> Rational {
        let x = self.element(idx);
        let mut s = Rational::zero();
        for (xi, f) in x.iter().zip(&self.factors) {
            let v = rat(xi * xi, 4 * f.d);
            if f.positive {
                s += v;
            } else {
                s -= v;
            }
        }
        frac(&s)
    }

    /// `(x, y) = q(x+y) − q(x) − q(y)` reduced to `[0, 1)`.
    pub fn bilinear(&self, a: usize, b: usize) -> Rational {
        let x = self.element(a);
        let y = self.element(b);
        let mut s = Rational::zero();
        for ((xi, yi), f) in x.iter().zip(&y).zip(&self.factors) {
            let v = rat(xi * yi, 2 * f.d);
            if f.positive {
                s += v;
            } else {
                s -= v;
            }
        }
        frac(&s)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let x = self.element(a);
        let y = self.element(b);
        let z: Vec<i64> = x.iter().zip(&y).map(|(u, v)| u + v).collect();
        self.index_of(&z)
    }

    pub fn neg(&self, a: usize) -> usize {
        let x: Vec<i64> = self.element(a).iter().map(|u| -u).collect();
        self.index_of(&x)
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// A `ℂ[L′/L]`-valued q-series: one [`FracSeries`] per group element, all
/// over a common exponent denominator and truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorSeries {
    group: DiscriminantGroup,
    components: Vec<FracSeries>,
}

impl VectorSeries {
    /// Harmonizes denominators and truncations of the components.
    pub fn new(group: DiscriminantGroup, components: Vec<FracSeries>) -> Result<Self> {
        if components.len() != group.order() {
            return Err(Error::GroupMismatch(format!(
                "{} components for a group of order {}",
                components.len(),
                group.order()
            )));
        }
        let d = components.iter().fold(1i64, |acc, c| acc.lcm(&c.denominator()));
        let trunc = components.iter().filter_map(|c| c.truncation().cloned()).min();
        let components = components
            .into_iter()
            .map(|c| {
                let c = c.with_denominator(d);
                match &trunc {
                    Some(t) => c.truncate(t),
                    None => c,
                }
            })
            .collect();
        Ok(VectorSeries { group, components })
    }

    /// The scalar series `1` over the trivial group.
    pub fn unit() -> Self {
        VectorSeries { group: DiscriminantGroup::trivial(), components: vec![FracSeries::one()] }
    }

    pub fn zero(group: DiscriminantGroup, trunc: Option<Rational>) -> Self {
        let z = match &trunc {
            Some(t) => FracSeries::zero().truncate(t),
            None => FracSeries::zero(),
        };
        let n = group.order();
        VectorSeries { group, components: vec![z; n] }
    }

    pub fn group(&self) -> &DiscriminantGroup {
        &self.group
    }

    pub fn components(&self) -> &[FracSeries] {
        &self.components
    }

    pub fn component(&self, idx: usize) -> &FracSeries {
        &self.components[idx]
    }

    pub fn component_at(&self, x: &[i64]) -> &FracSeries {
        &self.components[self.group.index_of(x)]
    }

    pub fn truncation(&self) -> Option<&Rational> {
        self.components.first().and_then(|c| c.truncation())
    }

    /// Same components viewed over another group of the same order (the
    /// element indexing is kept).
    pub fn with_group(&self, group: DiscriminantGroup) -> Result<Self> {
        if group.order() != self.group.order() {
            return Err(Error::GroupMismatch("relabelling needs equal orders".into()));
        }
        Ok(VectorSeries { group, components: self.components.clone() })
    }

    pub fn add(&self, other: &VectorSeries) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch("add over different groups".into()));
        }
        let comps = self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect();
        VectorSeries::new(self.group.clone(), comps)
    }

    pub fn sub(&self, other: &VectorSeries) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VectorSeries { group: self.group.clone(), components: self.components.iter().map(|s| s.scale(c)).collect() }
    }

    pub fn theta_derivative(&self, r: u32) -> Self {
        VectorSeries {
            group: self.group.clone(),
            components: self.components.iter().map(|s| s.theta_derivative(r)).collect(),
        }
    }

    pub fn truncate(&self, t: &Rational) -> Self {
        VectorSeries { group: self.group.clone(), components: self.components.iter().map(|s| s.truncate(t)).collect() }
    }

    /// Output component `i` is input component `perm(i)`.
    pub fn permute(&self, perm: impl Fn(usize) -> usize) -> Self {
        let comps = (0..self.components.len()).map(|i| self.components[perm(i)].clone()).collect();
        VectorSeries { group: self.group.clone(), components: comps }
    }

    /// Pushes components forward along `map`, accumulating collisions.
    pub fn pushforward(&self, target: &DiscriminantGroup, map: impl Fn(&[i64]) -> Vec<i64>) -> Result<Self> {
        let mut acc: Vec<Option<FracSeries>> = vec![None; target.order()];
        for (i, c) in self.components.iter().enumerate() {
            let img = target.index_of(&map(&self.group.element(i)));
            acc[img] = Some(match acc[img].take() {
                None => c.clone(),
                Some(a) => a.add(c),
            });
        }
        let fill = self.truncation().map(|t| FracSeries::zero().truncate(t)).unwrap_or_else(FracSeries::zero);
        VectorSeries::new(target.clone(), acc.into_iter().map(|c| c.unwrap_or_else(|| fill.clone())).collect())
    }

    /// `Σ_μ v_μ` as a scalar series.
    pub fn sum_components(&self) -> FracSeries {
        self.components.iter().fold(FracSeries::zero(), |a, c| a.add(c))
    }

    /// `Σ_μ w(μ) v_μ` with rational weights.
    pub fn weighted_sum(&self, w: impl Fn(&[i64]) -> Rational) -> FracSeries {
        self.components
            .iter()
            .enumerate()
            .fold(FracSeries::zero(), |a, (i, c)| a.add(&c.scale(&w(&self.group.element(i)))))
    }
}

/// `ρ_L(T)` as exact phases: entry `μ` is `e(q(μ))`, returned as `q(μ) ∈ [0,1)`.
pub fn rho_t(group: &DiscriminantGroup) -> Vec<Rational> {
    (0..group.order()).map(|i| group.q(i)).collect()
}

fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x)
}

fn to_f64(x: &Rational) -> f64 {
    use num::ToPrimitive;
    x.to_f64().expect("finite")
}

/// `ρ_L(S)` as a matrix with entry `[ν][μ] = e((b⁻−b⁺)/8 − (ν,μ)) / √|L′/L|`.
pub fn rho_s(group: &DiscriminantGroup) -> Vec<Vec<Complex64>> {
    let n = group.order();
    let (r, s) = group.signature();
    let pre = e((s - r) as f64 / 8.0) / (n as f64).sqrt();
    (0..n).map(|nu| (0..n).map(|mu| pre * e(-to_f64(&group.bilinear(nu, mu)))).collect()).collect()
}

/// Dense matrix of `ρ_L(T)`.
pub fn rho_t_matrix(group: &DiscriminantGroup) -> Vec<Vec<Complex64>> {
    let n = group.order();
    let phases = rho_t(group);
    (0..n).map(|i| (0..n).map(|j| if i == j { e(to_f64(&phases[i])) } else { Complex64::zero() }).collect()).collect()
}

/// `θ_{½,d} = Σ_r Σ_{n≡r (2d)} q^{n²/4d} 𝔢_r` through `t`.
pub fn unary_theta(d: i64, t: &Rational) -> Result<VectorSeries> {
    if d < 1 {
        return Err(Error::InvalidArgument(format!("unary theta needs d >= 1, got {d}")));
    }
    let group = DiscriminantGroup::cyclic(d)?;
    let limit = numerators_below(t, 4 * d);
    let mut comps: Vec<Vec<(i64, Rational)>> = vec![Vec::new(); 2 * d as usize];
    let mut n: i64 = 0;
    while n * n < limit {
        comps[n.rem_euclid(2 * d) as usize].push((n * n, int(1)));
        if n > 0 {
            comps[(-n).rem_euclid(2 * d) as usize].push((n * n, int(1)));
        }
        n += 1;
    }
    VectorSeries::new(group, comps.into_iter().map(|c| FracSeries::from_terms(4 * d, c, Some(t.clone()))).collect())
}

/// `σ_c(x)`: the residue mod `2d` with `σ_c(x) ≡ −x (mod 2c)` and
/// `σ_c(x) ≡ x (mod 2d/c)`. `c` must be an exact divisor of `d`.
pub fn sigma_c(d: i64, c: i64, x: i64) -> Result<i64> {
    if d < 1 || c < 1 || d % c != 0 || c.gcd(&(d / c)) != 1 {
        return Err(Error::InvalidArgument(format!("{c} is not an exact divisor of {d}")));
    }
    let m1 = 2 * c;
    let m2 = 2 * d / c;
    (0..2 * d)
        .find(|y| (y + x).rem_euclid(m1) == 0 && (y - x).rem_euclid(m2) == 0)
        .ok_or_else(|| Error::InvalidArgument(format!("no solution for sigma_{c}({x}) mod {}", 2 * d)))
}

/// Atkin–Lehner involution: output component `r` is input component `σ_c(r)`.
pub fn atkin_lehner(v: &VectorSeries, c: i64) -> Result<VectorSeries> {
    let fs = v.group().factors();
    if fs.len() != 1 {
        return Err(Error::GroupMismatch("Atkin-Lehner needs a single factor Z(±d)".into()));
    }
    let d = fs[0].d;
    let perm: Vec<usize> = (0..2 * d).map(|r| sigma_c(d, c, r).map(|s| s as usize)).collect::<Result<_>>()?;
    Ok(v.permute(|i| perm[i]))
}

/// `f ⊗ g` over the direct sum of the groups: component `(μ,ν)` is `f_μ g_ν`.
pub fn tensor(f: &VectorSeries, g: &VectorSeries) -> VectorSeries {
    let group = f.group().direct_sum(g.group());
    let mut comps = Vec::with_capacity(group.order());
    for a in f.components() {
        for b in g.components() {
            comps.push(a.mul(b));
        }
    }
    VectorSeries::new(group, comps).expect("orders multiply")
}

/// Embedding data for lattices `K ⊆ L`: the subgroup `L′/K ⊆ K′/K` and its
/// projection onto `L′/L`, whose kernel is `L/K`.
#[derive(Clone, Debug)]
pub struct CosetData {
    k_group: DiscriminantGroup,
    l_group: DiscriminantGroup,
    proj: Vec<Option<usize>>,
}

impl CosetData {
    /// Validates that `proj` is defined on a subgroup, is a surjective
    /// homomorphism preserving `q`, and that the index relation
    /// `|K′/K| = |L′/L|·|L/K|²` holds.
    pub fn new(k_group: DiscriminantGroup, l_group: DiscriminantGroup, proj: Vec<Option<usize>>) -> Result<Self> {
        let bad = |m: String| Err(Error::InconsistentCosets(m));
        if proj.len() != k_group.order() {
            return bad(format!("projection has {} entries, K'/K has {}", proj.len(), k_group.order()));
        }
        if proj[0] != Some(0) {
            return bad("zero must map to zero".into());
        }
        let dom: Vec<usize> = (0..proj.len()).filter(|&i| proj[i].is_some()).collect();
        let mut hit = vec![false; l_group.order()];
        let mut kernel = 0usize;
        for &a in &dom {
            let pa = proj[a].unwrap();
            if pa >= l_group.order() {
                return bad(format!("image {pa} out of range"));
            }
            hit[pa] = true;
            if pa == 0 {
                kernel += 1;
            }
            if k_group.q(a) != l_group.q(pa) {
                return bad(format!("q not preserved at {:?}", k_group.element(a)));
            }
            for &b in &dom {
                let s = k_group.add(a, b);
                match proj[s] {
                    Some(ps) if ps == l_group.add(pa, proj[b].unwrap()) => {}
                    Some(_) => return bad("projection is not a homomorphism".into()),
                    None => return bad("domain is not closed under addition".into()),
                }
            }
        }
        if hit.iter().any(|h| !h) {
            return bad("projection is not surjective".into());
        }
        if k_group.order() != l_group.order() * kernel * kernel {
            return bad(format!(
                "index mismatch: |K'/K| = {}, |L'/L| = {}, |L/K| = {kernel}",
                k_group.order(),
                l_group.order()
            ));
        }
        Ok(CosetData { k_group, l_group, proj })
    }

    /// `K = L`: identity projection.
    pub fn identity(group: DiscriminantGroup) -> Self {
        let n = group.order();
        CosetData { k_group: group.clone(), l_group: group, proj: (0..n).map(Some).collect() }
    }

    pub fn k_group(&self) -> &DiscriminantGroup {
        &self.k_group
    }

    pub fn l_group(&self) -> &DiscriminantGroup {
        &self.l_group
    }

    pub fn projection(&self, idx: usize) -> Option<usize> {
        self.proj[idx]
    }

    /// `L/K` as indices into `K′/K`.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.proj.len()).filter(|&i| self.proj[i] == Some(0)).collect()
    }

    /// Lexicographically smallest preimage of each `L′/L` element.
    pub fn representatives(&self) -> Vec<usize> {
        (0..self.l_group.order())
            .map(|m| (0..self.proj.len()).find(|&i| self.proj[i] == Some(m)).expect("surjective"))
            .collect()
    }
}

/// `f ↦ f_K`: component `μ ∈ K′/K` is `f_{μ̄}` on `L′/K`, zero elsewhere.
pub fn restrict(f: &VectorSeries, data: &CosetData) -> Result<VectorSeries> {
    if f.group() != &data.l_group {
        return Err(Error::GroupMismatch("restrict: series is not over L'/L".into()));
    }
    let zero = f.truncation().map(|t| FracSeries::zero().truncate(t)).unwrap_or_else(FracSeries::zero);
    let comps = data
        .proj
        .iter()
        .map(|p| match p {
            Some(m) => f.component(*m).clone(),
            None => zero.clone(),
        })
        .collect();
    VectorSeries::new(data.k_group.clone(), comps)
}

/// `g ↦ g^L`: component `μ̄ ∈ L′/L` is `Σ_{α∈L/K} g_{α+μ}` for the chosen
/// representative `μ`.
pub fn trace(g: &VectorSeries, data: &CosetData) -> Result<VectorSeries> {
    if g.group() != &data.k_group {
        return Err(Error::GroupMismatch("trace: series is not over K'/K".into()));
    }
    let kernel = data.kernel();
    let comps = data
        .representatives()
        .into_iter()
        .map(|mu| {
            kernel.iter().fold(FracSeries::zero(), |acc, &alpha| acc.add(g.component(data.k_group.add(alpha, mu))))
        })
        .collect();
    VectorSeries::new(data.l_group.clone(), comps)
}

/// `⟨f, g⟩ = Σ_μ f_μ g_μ` as a q-series.
pub fn pairing(f: &VectorSeries, g: &VectorSeries) -> Result<FracSeries> {
    if f.group() != g.group() {
        return Err(Error::GroupMismatch("pairing over different groups".into()));
    }
    Ok(f.components().iter().zip(g.components()).fold(FracSeries::zero(), |acc, (a, b)| acc.add(&a.mul(b))))
}

/// Constant term of `⟨f, g⟩`.
pub fn pairing_ct(f: &VectorSeries, g: &VectorSeries) -> Result<Rational> {
    pairing(f, g)?.coefficient(&Rational::zero())
}

/// `{g, f} = Σ_μ Σ_n c_g(μ, n) c_f(μ, −n)` for `f` with finitely many
/// nonzero coefficients, all of which must be known exactly.
pub fn serre_pairing(g: &VectorSeries, f: &VectorSeries) -> Result<Rational> {
    if f.group() != g.group() {
        return Err(Error::GroupMismatch("pairing over different groups".into()));
    }
    let mut acc = Rational::zero();
    for (gc, fc) in g.components().iter().zip(f.components()) {
        for (e, c) in fc.terms() {
            let v = gc.coefficient(&-e.clone())?;
            acc += v * c;
        }
    }
    Ok(acc)
}
