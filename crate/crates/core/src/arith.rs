//! Arithmetic functions behind the generating series: divisor sums, the
//! min-divisor sums `λ_ℓ`, the character `χ₁₂`, Hurwitz class numbers,
//! partitions and the smallest-parts function, plus an on-disk table cache.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qseries::rat;
use crate::Rational;

/// Environment variable naming the table cache directory.
pub const CACHE_ENV: &str = "SLK_CACHE_DIR";
/// Cache directory used when [`CACHE_ENV`] is unset.
pub const DEFAULT_CACHE_DIR: &str = "./.slk-cache";
const TABLE_MAGIC: &str = "selberg-lift-kit-table v1";

/// Divisors of `n ≥ 1` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `σ_k(n) = Σ_{d|n} d^k`.
pub fn sigma(n: i64, k: u32) -> Result<BigInt> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!("sigma needs n >= 1, got {n}")));
    }
    Ok(divisors(n as u64).into_iter().map(|d| num::pow(BigInt::from(d), k as usize)).sum())
}

/// `Σ_{ab=n} min(a,b)^ℓ` over ordered pairs of positive integers.
pub fn min_divisor_power_sum(n: u64, ell: u32) -> BigInt {
    divisors(n).into_iter().map(|d| num::pow(BigInt::from(d.min(n / d)), ell as usize)).sum()
}

/// `λ_ℓ(n) = ½ Σ_{d|n} min(d, n/d)^ℓ`.
pub fn lambda_ell(n: i64, ell: u32) -> Result<Rational> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!("lambda needs n >= 1, got {n}")));
    }
    if ell == 0 {
        return Err(Error::InvalidArgument("lambda needs ell >= 1".into()));
    }
    Ok(Rational::new(min_divisor_power_sum(n as u64, ell), BigInt::from(2)))
}

/// Kronecker symbol `(12 | n)`.
pub fn kronecker12(n: i64) -> i8 {
    match n.rem_euclid(12) {
        1 | 11 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

/// Hurwitz class number `H(n)` by enumerating reduced forms of
/// discriminant `-n`, with `H(0) = -1/12`.
pub fn hurwitz(n: i64) -> Result<Rational> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("hurwitz needs n >= 0, got {n}")));
    }
    if n == 0 {
        return Ok(rat(-1, 12));
    }
    if matches!(n % 4, 1 | 2) {
        return Ok(Rational::zero());
    }
    // count in units of 1/6 so the result is a single integer division
    let mut sixths: i64 = 0;
    let mut a: i64 = 1;
    while 3 * a * a <= n {
        // b ≡ n (mod 2), |b| ≤ a
        let mut b = -a + 1;
        if (b - n).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b + n;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c >= a && !(a == c && b < 0) {
                    sixths += if a == b && b == c {
                        2
                    } else if b == 0 && a == c {
                        3
                    } else {
                        6
                    };
                }
            }
            b += 2;
        }
        a += 1;
    }
    Ok(rat(sixths, 6))
}

/// Number of partitions of `n` via Euler's pentagonal recurrence.
pub fn partition_p(n: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("partition_p needs n >= 0, got {n}")));
    }
    Ok(partition_table(n as usize).pop().unwrap())
}

/// `p(0), …, p(max)` via the pentagonal recurrence.
pub fn partition_table(max: usize) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = Vec::with_capacity(max + 1);
    p.push(BigInt::one());
    for n in 1..=max {
        let mut acc = BigInt::zero();
        let mut k: usize = 1;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let sign_plus = k % 2 == 1;
            let mut term = p[n - g1].clone();
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= n {
                term += &p[n - g2];
            }
            if sign_plus {
                acc += term;
            } else {
                acc -= term;
            }
            k += 1;
        }
        p.push(acc);
    }
    p
}

/// `spt(n)` for `n ≥ 1`.
pub fn spt(n: i64) -> Result<BigInt> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!("spt needs n >= 1, got {n}")));
    }
    Ok(spt_table(n as usize).pop().unwrap())
}

/// `spt(0), …, spt(max)` from `Σ_{k≥1} q^k/(1-q^k)² ∏_{m>k} 1/(1-q^m)`,
/// with `spt(0) = 0`.
pub fn spt_table(max: usize) -> Vec<BigInt> {
    let len = max + 1;
    let mut out = vec![BigInt::zero(); len];
    // tail[n] = coefficients of ∏_{m>k} 1/(1-q^m), updated as k decreases
    let mut tail = vec![BigInt::zero(); len];
    tail[0] = BigInt::one();
    for k in (1..=max).rev() {
        // q^k/(1-q^k)^2 = Σ_{i≥1} i q^{ik}
        for n in k..len {
            let mut acc = BigInt::zero();
            let mut i = 1;
            while i * k <= n {
                acc += &tail[n - i * k] * BigInt::from(i);
                i += 1;
            }
            out[n] += acc;
        }
        // fold in 1/(1-q^k) for the next (smaller) k
        for n in k..len {
            let prev = tail[n - k].clone();
            tail[n] += prev;
        }
    }
    out
}

/// Dense table of rational values `values[n]` for `0 ≤ n ≤ max_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalTable {
    pub name: String,
    pub values: Vec<Rational>,
}

impl RationalTable {
    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    /// Serializes in the cache format: a header line followed by
    /// `n,numerator,denominator` lines.
    pub fn to_text(&self) -> String {
        let mut s = format!("{TABLE_MAGIC} {} {}\n", self.name, self.max_n());
        for (n, v) in self.values.iter().enumerate() {
            s.push_str(&format!("{n},{},{}\n", v.numer(), v.denom()));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.split('\n');
        let header = lines.next().ok_or_else(|| Error::MalformedTable("empty file".into()))?;
        let rest = header
            .strip_prefix(TABLE_MAGIC)
            .and_then(|r| r.strip_prefix(' '))
            .ok_or_else(|| Error::MalformedTable(format!("bad header {header:?}")))?;
        let mut parts = rest.split(' ');
        let name = parts.next().unwrap_or_default().to_string();
        let max_n: usize = parts
            .next()
            .and_then(|m| m.parse().ok())
            .ok_or_else(|| Error::MalformedTable(format!("bad header {header:?}")))?;
        if parts.next().is_some() || name.is_empty() {
            return Err(Error::MalformedTable(format!("bad header {header:?}")));
        }
        let mut values = Vec::with_capacity(max_n + 1);
        for (expected, line) in lines.by_ref().take(max_n + 1).enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            let parsed = (|| {
                if fields.len() != 3 {
                    return None;
                }
                let n: usize = fields[0].parse().ok()?;
                let num: BigInt = fields[1].parse().ok()?;
                let den: BigInt = fields[2].parse().ok()?;
                if n != expected || !den.is_positive() {
                    return None;
                }
                Some(Rational::new(num, den))
            })();
            values.push(parsed.ok_or_else(|| Error::MalformedTable(format!("bad line {line:?}")))?);
        }
        if values.len() != max_n + 1 || lines.next() != Some("") || lines.next().is_some() {
            return Err(Error::MalformedTable("wrong number of lines".into()));
        }
        Ok(RationalTable { name, values })
    }
}

/// Directory-backed cache of [`RationalTable`]s. Cached files are advisory:
/// unreadable or malformed files are rebuilt.
#[derive(Clone, Debug)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TableCache { dir: dir.into() }
    }

    /// Cache rooted at `$SLK_CACHE_DIR`, or `./.slk-cache`.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| DEFAULT_CACHE_DIR.into());
        TableCache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, name: &str, max_n: usize) -> PathBuf {
        self.dir.join(format!("{name}-{max_n}.txt"))
    }

    pub fn load(&self, name: &str, max_n: usize) -> Option<RationalTable> {
        let text = fs::read_to_string(self.path_for(name, max_n)).ok()?;
        let table = RationalTable::from_text(&text).ok()?;
        (table.name == name && table.max_n() == max_n).then_some(table)
    }

    /// Writes the table through a temporary file and an atomic rename.
    pub fn store(&self, table: &RationalTable) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(&table.name, table.max_n());
        let tmp = self.dir.join(format!(".{}-{}.{}.tmp", table.name, table.max_n(), std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(table.to_text().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Returns the cached table or builds and stores it. A failed store is
    /// not an error: the freshly built table is returned either way.
    pub fn load_or_build(&self, name: &str, max_n: usize, build: impl FnOnce() -> RationalTable) -> RationalTable {
        if let Some(t) = self.load(name, max_n) {
            return t;
        }
        let table = build();
        let _ = self.store(&table);
        table
    }
}

/// `H(0), …, H(max_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HurwitzTable {
    table: RationalTable,
}

impl HurwitzTable {
    pub const NAME: &'static str = "hurwitz";

    pub fn build(max_n: usize) -> Self {
        let values = (0..=max_n as i64).map(|n| hurwitz(n).expect("n >= 0")).collect();
        HurwitzTable { table: RationalTable { name: Self::NAME.into(), values } }
    }

    /// Loads from `cache` when present, otherwise builds (and stores).
    pub fn load_or_build(max_n: usize, cache: Option<&TableCache>) -> Self {
        match cache {
            None => Self::build(max_n),
            Some(c) => {
                let table = c.load_or_build(Self::NAME, max_n, || Self::build(max_n).table);
                HurwitzTable { table }
            }
        }
    }

    pub fn max_n(&self) -> usize {
        self.table.max_n()
    }

    /// `H(n)`; panics when `n` exceeds the table.
    pub fn value(&self, n: usize) -> &Rational {
        &self.table.values[n]
    }

    pub fn values(&self) -> &[Rational] {
        &self.table.values
    }

    pub fn as_table(&self) -> &RationalTable {
        &self.table
    }
}

/// Converts an integer table to a [`RationalTable`].
pub fn integer_table(name: &str, values: &[BigInt]) -> RationalTable {
    RationalTable { name: name.into(), values: values.iter().map(|v| Rational::from_integer(v.clone())).collect() }
}
