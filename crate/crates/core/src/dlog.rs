//! Discrete logarithms: Pohlig-Hellman with baby-step giant-step modulo 64-bit
//! primes, and the bit-by-bit logarithms base 3 modulo `2^u` and base 2 modulo `3^v`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::modcore::arith::{factor_u64, inv_mod, is_prime_u64, mul_mod, pow_mod};

/// Baby-step tables above this many entries are refused.
pub const MAX_BABY_STEPS: u64 = 1 << 26;

/// The exponents `e` solving `base^e ≡ target` are exactly
/// `e ≡ residue_class (mod class_modulus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DlogResult {
    pub base_order: u64,
    pub residue_class: u64,
    pub class_modulus: u64,
}

/// Baby-step giant-step inside the subgroup of prime order `q` generated by `gamma`.
#[derive(Debug)]
struct PrimeSubgroup {
    q: u64,
    exp: u32,
    gamma: u64,
    steps: u64,
    baby: HashMap<u64, u64>,
    giant: u64,
}

impl PrimeSubgroup {
    fn new(p: u64, g: u64, q: u64, exp: u32) -> Result<Self> {
        let gamma = pow_mod(g, (p - 1) / q, p);
        let steps = (q as f64).sqrt().ceil() as u64;
        let steps = steps.max(1);
        if steps > MAX_BABY_STEPS {
            return Err(Error::SubgroupTooLarge(q));
        }
        let mut baby = HashMap::with_capacity(steps as usize);
        let mut cur = 1u64;
        for j in 0..steps {
            baby.entry(cur).or_insert(j);
            cur = mul_mod(cur, gamma, p);
        }
        // cur == gamma^steps
        let giant = inv_mod(cur, p).expect("unit modulo a prime");
        Ok(PrimeSubgroup {
            q,
            exp,
            gamma,
            steps,
            baby,
            giant,
        })
    }

    /// Log of `h` (an element of order dividing q) base gamma, in `[0, q)`.
    fn log(&self, h: u64, p: u64) -> u64 {
        if self.q == 1 {
            return 0;
        }
        let mut cur = h;
        for i in 0..self.steps {
            if let Some(&j) = self.baby.get(&cur) {
                return (i * self.steps + j) % self.q;
            }
            cur = mul_mod(cur, self.giant, p);
        }
        unreachable!("element outside the subgroup of order {}", self.q)
    }
}

/// Precomputed discrete-log context for a fixed prime and primitive root.
#[derive(Debug)]
pub struct PrimeDlog {
    p: u64,
    generator: u64,
    group_factors: Vec<(u64, u32)>,
    subgroups: Vec<PrimeSubgroup>,
}

impl PrimeDlog {
    /// Context for the least primitive root of `p`.
    pub fn new(p: u64) -> Result<Self> {
        let g = find_generator(p)?;
        Self::with_primitive_root(p, g)
    }

    fn with_primitive_root(p: u64, generator: u64) -> Result<Self> {
        let group_factors = factor_u64(p - 1)?;
        let subgroups = group_factors
            .iter()
            .map(|&(q, e)| PrimeSubgroup::new(p, generator, q, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(PrimeDlog {
            p,
            generator,
            group_factors,
            subgroups,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Factorization of `p - 1`.
    pub fn group_factors(&self) -> &[(u64, u32)] {
        &self.group_factors
    }

    /// Multiplicative order of `b` modulo `p`.
    pub fn order_of(&self, b: u64) -> Result<u64> {
        let b = self.unit(b)?;
        let mut order = self.p - 1;
        for &(q, e) in &self.group_factors {
            for _ in 0..e {
                if pow_mod(b, order / q, self.p) == 1 {
                    order /= q;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    fn unit(&self, s: u64) -> Result<u64> {
        let s = s % self.p;
        if s == 0 {
            return Err(Error::NotCoprime {
                a: s.to_string(),
                b: self.p.to_string(),
            });
        }
        Ok(s)
    }

    /// Least `z >= 0` with `g^z ≡ s (mod p)` for the stored primitive root `g`.
    pub fn log(&self, s: u64) -> Result<u64> {
        let s = self.unit(s)?;
        let p = self.p;
        let n = p - 1;
        let mut acc: u64 = 0;
        let mut acc_mod: u64 = 1;
        for sub in &self.subgroups {
            let qe = sub.q.pow(sub.exp);
            let cofactor = n / qe;
            let h = pow_mod(s, cofactor, p);
            let base = pow_mod(self.generator, cofactor, p);
            let base_inv = inv_mod(base, p).expect("unit");
            // digits of the log of h base `base` (order q^e), least significant first
            let mut x: u64 = 0;
            let mut q_pow: u64 = 1;
            for i in 0..sub.exp {
                let strip = pow_mod(base_inv, x, p);
                let hi = pow_mod(mul_mod(h, strip, p), sub.q.pow(sub.exp - 1 - i), p);
                debug_assert_eq!(pow_mod(sub.gamma, sub.q, p), 1);
                let d = sub.log(hi, p);
                x += d * q_pow;
                q_pow = q_pow.saturating_mul(sub.q);
            }
            // merge x mod qe into acc mod acc_mod (coprime moduli)
            let inv = inv_mod(acc_mod % qe, qe).expect("coprime prime powers");
            let t = mul_mod((x + qe - acc % qe) % qe, inv, qe);
            acc += acc_mod * t;
            acc_mod *= qe;
        }
        debug_assert_eq!(pow_mod(self.generator, acc, p), s);
        Ok(acc)
    }

    /// The class of exponents `e` with `b^e ≡ s (mod p)`, or `None` if `s ∉ <b>`.
    pub fn membership(&self, b: u64, s: u64) -> Result<Option<DlogResult>> {
        let b = self.unit(b)?;
        let s = self.unit(s)?;
        let order = self.order_of(b)?;
        if pow_mod(s, order, self.p) != 1 {
            return Ok(None);
        }
        let n = self.p - 1;
        let y = self.log(b)?;
        let z = self.log(s)?;
        // y e ≡ z (mod n); gcd(y, n) = n / order
        let d = crate::modcore::arith::gcd(y, n);
        debug_assert_eq!(n / d, order);
        debug_assert_eq!(z % d, 0);
        let e0 = if order == 1 {
            0
        } else {
            let inv = inv_mod((y / d) % order, order).expect("y/d is a unit mod n/d");
            mul_mod((z / d) % order, inv, order)
        };
        Ok(Some(DlogResult {
            base_order: order,
            residue_class: e0,
            class_modulus: order,
        }))
    }
}

/// Least `g >= 2` generating `(Z/pZ)^*`; 1 for `p = 2`.
pub fn find_generator(p: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    let factors = factor_u64(p - 1)?;
    (2..p)
        .find(|&g| {
            factors
                .iter()
                .all(|&(q, _)| pow_mod(g, (p - 1) / q, p) != 1)
        })
        .ok_or_else(|| Error::InvalidInput(format!("no primitive root found modulo {p}")))
}

/// Least `z >= 0` with `g^z ≡ s (mod p)`, or `None` when `s` is not a power of `g`.
pub fn dlog_prime(g: u64, s: u64, p: u64) -> Result<Option<u64>> {
    let ctx = PrimeDlog::new(p)?;
    Ok(ctx.membership(g, s)?.map(|r| r.residue_class))
}

/// Class of exponents `e` with `b^e ≡ s (mod p)`, if any.
pub fn power_membership(b: u64, s: u64, p: u64) -> Result<Option<DlogResult>> {
    PrimeDlog::new(p)?.membership(b, s)
}

/// Logarithm base 3 modulo `2^u` (`u <= 64`).
///
/// Powers of 3 are exactly the units congruent to 1 or 3 modulo 8; anything
/// congruent to 5 or 7 yields `None`.
pub fn log3_mod_2u(z: u64, u: u32) -> Result<Option<DlogResult>> {
    if u > 64 {
        return Err(Error::InvalidInput(format!("2^{u} exceeds 64 bits")));
    }
    let mask = if u == 64 { u64::MAX } else { (1u64 << u) - 1 };
    let z = z & mask;
    if u == 0 {
        return Ok(Some(DlogResult {
            base_order: 1,
            residue_class: 0,
            class_modulus: 1,
        }));
    }
    if z.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("{z} is even")));
    }
    let order = match u {
        1 => 1,
        2 => 2,
        _ => 1u64 << (u - 2),
    };
    if u <= 2 {
        let e = u64::from(z & 3 == 3 && u == 2);
        return Ok(Some(DlogResult {
            base_order: order,
            residue_class: e,
            class_modulus: order,
        }));
    }
    if matches!(z & 7, 5 | 7) {
        return Ok(None);
    }
    const INV3: u64 = 0xAAAA_AAAA_AAAA_AAAB;
    let mut t = z;
    let mut e = 0u64;
    if t & 7 == 3 {
        t = t.wrapping_mul(INV3) & mask;
        e = 1;
    }
    // inv3^(2^(k-2)) for the current k
    let mut step = INV3.wrapping_mul(INV3);
    for k in 3..u {
        if (t >> k) & 1 == 1 {
            t = t.wrapping_mul(step) & mask;
            e += 1u64 << (k - 2);
        }
        step = step.wrapping_mul(step);
    }
    debug_assert_eq!(t, 1);
    Ok(Some(DlogResult {
        base_order: order,
        residue_class: e,
        class_modulus: order,
    }))
}

/// Logarithm base 2 modulo `3^v` (`v <= 40`). 2 is a primitive root modulo
/// every power of 3, so every unit has a logarithm.
pub fn log2_mod_3v(z: u64, v: u32) -> Result<DlogResult> {
    if v > 40 {
        return Err(Error::InvalidInput(format!("3^{v} exceeds 64 bits")));
    }
    if v == 0 {
        return Ok(DlogResult {
            base_order: 1,
            residue_class: 0,
            class_modulus: 1,
        });
    }
    let m = 3u64.pow(v);
    let z = z % m;
    if z.is_multiple_of(3) {
        return Err(Error::InvalidInput(format!("{z} is divisible by 3")));
    }
    let order = 2 * 3u64.pow(v - 1);
    let mut t = z;
    let mut e = 0u64;
    if t % 3 == 2 {
        t = mul_mod(t, inv_mod(2, m).expect("2 is a unit"), m);
        e = 1;
    }
    // inv4^(3^(k-1)) for the current k
    let mut step = inv_mod(4 % m, m).expect("4 is a unit");
    let mut pk = 3u64; // 3^k
    for k in 1..v {
        let digit = ((t - 1) / pk) % 3;
        for _ in 0..digit {
            t = mul_mod(t, step, m);
        }
        e += 2 * digit * 3u64.pow(k - 1);
        step = mul_mod(mul_mod(step, step, m), step, m);
        pk *= 3;
    }
    debug_assert_eq!(t, 1 % m);
    Ok(DlogResult {
        base_order: order,
        residue_class: e,
        class_modulus: order,
    })
}
