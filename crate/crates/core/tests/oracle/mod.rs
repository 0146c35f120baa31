//! Brute-force reference implementations used by the test suites. Nothing here
//! calls into the library; everything is direct iteration over small rings.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc = 1u128 % m;
    let mut b = b as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least `k >= 1` with `b^k ≡ 1 (mod m)` by trial multiplication.
pub fn order(b: u64, m: u64) -> Option<u64> {
    if gcd(b % m, m) != 1 && m != 1 {
        return None;
    }
    let mut v = b % m;
    let mut k = 1;
    while v != 1 % m {
        v = (v as u128 * b as u128 % m as u128) as u64;
        k += 1;
    }
    Some(k)
}

/// `(tail, loop)` of `b^0, b^1, ...` modulo `m`, found by waiting for the first repeat.
pub fn tail_loop(b: u64, m: u64) -> (u64, u64) {
    let mut seen = HashMap::new();
    let mut v = 1 % m;
    for i in 0.. {
        if let Some(&j) = seen.get(&v) {
            return (j, i - j);
        }
        seen.insert(v, i);
        v = (v as u128 * b as u128 % m as u128) as u64;
    }
    unreachable!()
}

pub fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Every `(x, a_1 <= ... <= a_n)` with `P^x ≡ sum S^a_j (mod m)`, `a_1 = 0`,
/// `x` and all `a_j` in their canonical ranges, and no determinate exponent repeated.
pub fn solutions_mod(p_base: u64, s_base: u64, n: usize, m: u64) -> Vec<(u64, Vec<u64>)> {
    solutions_mod_with(p_base, s_base, n, m, true)
}

/// As [`solutions_mod`] but allowing repeated determinate exponents.
pub fn solutions_mod_relaxed(p_base: u64, s_base: u64, n: usize, m: u64) -> Vec<(u64, Vec<u64>)> {
    solutions_mod_with(p_base, s_base, n, m, false)
}

fn solutions_mod_with(
    p_base: u64,
    s_base: u64,
    n: usize,
    m: u64,
    distinct: bool,
) -> Vec<(u64, Vec<u64>)> {
    let (tp, lp) = tail_loop(p_base, m);
    let (ts, ls) = tail_loop(s_base, m);
    let s_pow: Vec<u64> = (0..ts + ls).map(|a| pow_mod(s_base, a, m)).collect();
    let mut out = Vec::new();
    let mut tuple = vec![0u64];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        tuple: &mut Vec<u64>,
        n: usize,
        ts: u64,
        distinct: bool,
        s_pow: &[u64],
        p_pows: &[(u64, u64)],
        m: u64,
        out: &mut Vec<(u64, Vec<u64>)>,
    ) {
        if tuple.len() == n {
            let sum = tuple
                .iter()
                .fold(0u64, |acc, &a| (acc + s_pow[a as usize]) % m);
            for &(x, v) in p_pows {
                if v == sum {
                    out.push((x, tuple.clone()));
                }
            }
            return;
        }
        let last = *tuple.last().unwrap();
        let from = if distinct && last < ts {
            last + 1
        } else {
            last
        };
        for a in from..s_pow.len() as u64 {
            tuple.push(a);
            rec(tuple, n, ts, distinct, s_pow, p_pows, m, out);
            tuple.pop();
        }
    }
    let p_pows: Vec<(u64, u64)> = (0..tp + lp).map(|x| (x, pow_mod(p_base, x, m))).collect();
    rec(&mut tuple, n, ts, distinct, &s_pow, &p_pows, m, &mut out);
    out.sort();
    out
}

/// Exponents of the binary digits of `3^x`, ascending.
pub fn binary_exponents(x: u32) -> Vec<u64> {
    let v = BigUint::from(3u32).pow(x);
    (0..v.bits()).filter(|&i| v.bit(i)).collect()
}

/// `(x, exponents)` for every `x <= x_max` with `3^x` having exactly `n` ones.
pub fn three_power_solutions(n: usize, x_max: u32) -> Vec<(u64, Vec<u64>)> {
    (0..=x_max)
        .map(|x| (x as u64, binary_exponents(x)))
        .filter(|(_, e)| e.len() == n)
        .collect()
}

/// Exponents of the ternary digits of `2^x` when they are all 0 or 1.
pub fn ternary_exponents(x: u32) -> Option<Vec<u64>> {
    let mut v = BigUint::one() << x;
    let three = BigUint::from(3u32);
    let mut out = Vec::new();
    let mut i = 0;
    while !v.is_zero() {
        let d = &v % &three;
        if d == BigUint::from(2u32) {
            return None;
        }
        if d.is_one() {
            out.push(i);
        }
        v /= &three;
        i += 1;
    }
    Some(out)
}
