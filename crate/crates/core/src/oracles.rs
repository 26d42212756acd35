//! Slow reference implementations that share no code path with the main
//! library. Used by the self-test suite and by the test targets.

use num::{BigInt, Zero};

use crate::qseries::{int, rat};
use crate::Rational;

/// The Kronecker symbol `(a/n)` for any integers.
pub fn kronecker(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -1;
        }
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a/n), n odd positive
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

fn units(d: i64) -> i64 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// Class number of the fundamental discriminant `d < 0` from Dirichlet's
/// formula `h = −w/(2|d|) Σ_{a<|d|} (d/a)·a`.
pub fn class_number_fundamental(d: i64) -> Rational {
    let n = -d;
    let s: i64 = (1..n).map(|a| kronecker(d, a) * a).sum();
    Rational::new(BigInt::from(-units(d) * s), BigInt::from(2 * n))
}

/// Class number of primitive forms of discriminant `d < 0` through the
/// conductor formula.
pub fn class_number(d: i64) -> Rational {
    let mut c = 1;
    let mut f = 1;
    while f * f <= -d {
        if d % (f * f) == 0 && matches!((d / (f * f)).rem_euclid(4), 0 | 1) {
            c = f;
        }
        f += 1;
    }
    let d0 = d / (c * c);
    let mut h = class_number_fundamental(d0) * int(c) * rat(units(d), units(d0));
    let mut m = c;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            h *= int(1) - rat(kronecker(d0, p), p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    h
}

/// `H(n) = Σ_{f²|n} 2h(−n/f²)/w(−n/f²)`, with `H(0) = −1/12`.
pub fn hurwitz_from_class_numbers(n: i64) -> Rational {
    if n == 0 {
        return rat(-1, 12);
    }
    let mut total = Rational::zero();
    let mut f = 1;
    while f * f <= n {
        if n % (f * f) == 0 {
            let d = -(n / (f * f));
            if matches!(d.rem_euclid(4), 0 | 1) {
                total += class_number(d) * rat(2, units(d));
            }
        }
        f += 1;
    }
    total
}

/// Number of `(x, y, z) ∈ ℤ³` with `x² + y² + z² = n`.
pub fn r3(n: i64) -> i64 {
    let b = (n as f64).sqrt() as i64 + 1;
    let mut count = 0;
    for x in -b..=b {
        for y in -b..=b {
            let rest = n - x * x - y * y;
            if rest < 0 {
                continue;
            }
            let z = (rest as f64).sqrt().round() as i64;
            if z * z == rest {
                count += if z == 0 { 1 } else { 2 };
            }
        }
    }
    count
}

/// `p(0..=max)` by the coin-change recurrence.
pub fn partitions_dp(max: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); max + 1];
    p[0] = BigInt::from(1);
    for part in 1..=max {
        for n in part..=max {
            let add = p[n - part].clone();
            p[n] += add;
        }
    }
    p
}

/// Total number of smallest parts over all partitions of `n`, by listing
/// every partition.
pub fn spt_by_enumeration(n: u32) -> u64 {
    fn walk(remaining: u32, max_part: u32, smallest: u32, count: u32, acc: &mut u64) {
        if remaining == 0 {
            *acc += count as u64;
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            let c = if part == smallest { count + 1 } else { 1 };
            walk(remaining - part, part, part, c, acc);
        }
    }
    let mut acc = 0;
    if n > 0 {
        walk(n, n, 0, 0, &mut acc);
    }
    acc
}

/// `−Σ_{r>s>0, rs=6n} χ₁₂(r²−s²) s^{k−1}` with χ₁₂ from the Kronecker symbol.
pub fn g_coefficient(k: u32, n: i64) -> BigInt {
    let m = 6 * n;
    let mut total = BigInt::zero();
    let mut s = 1;
    while s * s < m {
        if m % s == 0 {
            let r = m / s;
            let chi = kronecker(12, r * r - s * s);
            total -= BigInt::from(chi) * num::pow(BigInt::from(s), (k - 1) as usize);
        }
        s += 1;
    }
    total
}
