use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use super::arith::{self, factor_u64};
use super::modulus::{FactoredModulus, Residue};
use crate::error::{Error, Result};

/// Euler's totient, read off the stored factorization.
pub fn euler_phi(m: &FactoredModulus) -> BigUint {
    m.prime_powers()
        .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(e - 1) * (p - 1))
}

/// Factorization of `phi(p^e) = p^(e-1) (p - 1)`.
pub fn phi_prime_power_factors(p: u64, e: u32) -> Result<Vec<(u64, u32)>> {
    let mut f = factor_u64(p - 1)?;
    if e > 1 {
        match f.iter_mut().find(|(q, _)| *q == p) {
            Some((_, k)) => *k += e - 1,
            None => f.push((p, e - 1)),
        }
        f.sort_unstable();
    }
    Ok(f)
}

/// Order of `b` modulo `p^e`, together with its factorization.
pub fn order_mod_prime_power_factored(b: u64, p: u64, e: u32) -> Result<(u64, Vec<(u64, u32)>)> {
    if e == 0 {
        return Ok((1, Vec::new()));
    }
    let pe = p
        .checked_pow(e)
        .ok_or(Error::PrimePowerTooLarge { prime: p, exp: e })?;
    let b = b % pe;
    if b.is_multiple_of(p) {
        return Err(Error::NotCoprime {
            a: b.to_string(),
            b: format!("{p}^{e}"),
        });
    }
    let mut factors = phi_prime_power_factors(p, e)?;
    let mut order: u64 = factors.iter().map(|&(q, k)| q.pow(k)).product();
    for (q, k) in factors.iter_mut() {
        while *k > 0 && arith::pow_mod(b, order / *q, pe) == 1 {
            order /= *q;
            *k -= 1;
        }
    }
    factors.retain(|&(_, k)| k > 0);
    debug_assert!(is_minimal_order(b, order, &factors, pe));
    Ok((order, factors))
}

pub fn order_mod_prime_power(b: u64, p: u64, e: u32) -> Result<u64> {
    order_mod_prime_power_factored(b, p, e).map(|(o, _)| o)
}

fn is_minimal_order(b: u64, order: u64, factors: &[(u64, u32)], m: u64) -> bool {
    arith::pow_mod(b, order, m) == 1 % m
        && factors
            .iter()
            .all(|&(q, _)| arith::pow_mod(b, order / q, m) != 1)
}

/// Least `e > 0` with `b^e ≡ 1` in `Z/mZ`; the order modulo 1 is 1.
pub fn multiplicative_order(b: u64, m: &FactoredModulus) -> Result<BigUint> {
    let mut order = BigUint::one();
    for (p, e) in m.prime_powers() {
        let o = order_mod_prime_power(b, p, e)?;
        order = order.lcm(&BigUint::from(o));
    }
    Ok(order)
}

/// `(O_b(M), O_b'(M))`: the order of `b` modulo `M` with the `b`-part removed,
/// and modulo the part of `M` coprime to 6.
pub fn modified_orders(b: u64, m: &FactoredModulus) -> Result<(BigUint, BigUint)> {
    check_base(b)?;
    let full = multiplicative_order(b, &m.without_prime(b))?;
    let coprime = multiplicative_order(b, &m.coprime_part())?;
    Ok((full, coprime))
}

fn check_base(b: u64) -> Result<()> {
    if b == 2 || b == 3 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("base must be 2 or 3, got {b}")))
    }
}

/// Tail-and-loop structure of the powers of `base` in `Z/MZ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleShape {
    pub base: u64,
    pub tail_len: u32,
    pub loop_len: BigUint,
}

impl CycleShape {
    /// Number of distinct powers of the base in the ring.
    pub fn distinct_powers(&self) -> BigUint {
        &self.loop_len + self.tail_len
    }

    /// Whether `base^i` lies on the tail.
    pub fn is_determinate(&self, i: &BigUint) -> bool {
        *i < BigUint::from(self.tail_len)
    }

    /// The exponent in `[0, tail + loop)` giving the same power as `e`.
    pub fn canonical(&self, e: &BigUint) -> BigUint {
        let t = BigUint::from(self.tail_len);
        if *e < t {
            e.clone()
        } else {
            t.clone() + (e - &t) % &self.loop_len
        }
    }
}

pub fn cycle_shape(b: u64, m: &FactoredModulus) -> Result<CycleShape> {
    check_base(b)?;
    let loop_len = multiplicative_order(b, &m.without_prime(b))?;
    Ok(CycleShape {
        base: b,
        tail_len: m.exponent_of(b),
        loop_len,
    })
}

/// `b^i` is determinate in `Z/MZ` iff `b^(i+1)` divides `M`.
pub fn is_determinate(b: u64, i: u64, m: &FactoredModulus) -> bool {
    i < u64::from(m.exponent_of(b))
}

/// `b^e` in `Z/MZ` by square-and-multiply.
pub fn pow_mod(b: &BigUint, e: &BigUint, m: &FactoredModulus) -> Residue {
    Residue::new(b.modpow(e, m.value()), m)
}
