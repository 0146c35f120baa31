//! Word-size modular arithmetic, primality and factorization of 64-bit integers.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let (s, carry) = a.overflowing_add(b);
    if carry || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// `base^exp mod m` for an arbitrary-precision exponent.
pub fn pow_mod_big(base: u64, exp: &BigUint, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let b = base % m;
    for i in (0..exp.bits()).rev() {
        result = mul_mod(result, result, m);
        if exp.bit(i) {
            result = mul_mod(result, b, m);
        }
    }
    result
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Integer power that fails instead of overflowing.
pub fn checked_pow(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

/// Deterministic Miller-Rabin for all 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Bounds on the work spent factoring a single integer.
#[derive(Clone, Copy, Debug)]
pub struct FactorEffort {
    /// Trial division runs over divisors up to this bound (and `sqrt(n)`).
    pub trial_limit: u64,
    /// Total Pollard-rho iterations before giving up.
    pub rho_iterations: u64,
}

impl Default for FactorEffort {
    fn default() -> Self {
        FactorEffort {
            trial_limit: 1 << 16,
            rho_iterations: 1 << 26,
        }
    }
}

type FactorCache = Mutex<HashMap<u64, Vec<(u64, u32)>>>;

fn factor_cache() -> &'static FactorCache {
    static CACHE: OnceLock<FactorCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Factor `n` into ascending `(prime, exponent)` pairs using the default effort.
///
/// Results are memoized; the order computations for a modulus chain factor the
/// same `p - 1` many times.
pub fn factor_u64(n: u64) -> Result<Vec<(u64, u32)>> {
    if let Some(f) = factor_cache().lock().expect("factor cache").get(&n) {
        return Ok(f.clone());
    }
    let f = factor_u64_with(n, &FactorEffort::default())?;
    factor_cache()
        .lock()
        .expect("factor cache")
        .insert(n, f.clone());
    Ok(f)
}

pub fn factor_u64_with(mut n: u64, effort: &FactorEffort) -> Result<Vec<(u64, u32)>> {
    let original = n;
    let mut primes: Vec<u64> = Vec::new();
    if n <= 1 {
        return Ok(Vec::new());
    }
    while n.is_multiple_of(2) {
        primes.push(2);
        n /= 2;
    }
    let mut d = 3u64;
    while d <= effort.trial_limit && d.saturating_mul(d) <= n {
        while n.is_multiple_of(d) {
            primes.push(d);
            n /= d;
        }
        d += 2;
    }
    if n > 1 {
        let mut budget = effort.rho_iterations;
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime_u64(m) {
                primes.push(m);
                continue;
            }
            if let Some(r) = perfect_square_root(m) {
                stack.push(r);
                stack.push(r);
                continue;
            }
            match pollard_rho(m, &mut budget) {
                Some(f) => {
                    stack.push(f);
                    stack.push(m / f);
                }
                None => return Err(Error::FactorizationNeeded { n: original }),
            }
        }
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

fn perfect_square_root(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&c| c.checked_mul(c) == Some(n))
}

/// Brent's variant of Pollard rho; returns a nontrivial factor of composite `n`.
fn pollard_rho(n: u64, budget: &mut u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    for c in 1..u64::MAX {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const BLOCK: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = BLOCK.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += steps;
                if *budget < steps {
                    return None;
                }
                *budget -= steps;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}
