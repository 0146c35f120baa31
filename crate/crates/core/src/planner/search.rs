use crate::error::{Error, Result};
use crate::modcore::arith::{checked_pow, is_prime_u64};
use crate::modcore::order_mod_prime_power_factored;

/// A prime candidate for a chain factor with the orders of 2 and 3 modulo it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorCandidate {
    pub p: u64,
    pub ord2: u64,
    pub ord2_factors: Vec<(u64, u32)>,
    pub ord3: u64,
    pub ord3_factors: Vec<(u64, u32)>,
}

impl FactorCandidate {
    pub fn for_prime(p: u64) -> Result<Self> {
        if p <= 3 || !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let (ord2, ord2_factors) = order_mod_prime_power_factored(2, p, 1)?;
        let (ord3, ord3_factors) = order_mod_prime_power_factored(3, p, 1)?;
        Ok(FactorCandidate {
            p,
            ord2,
            ord2_factors,
            ord3,
            ord3_factors,
        })
    }
}

/// Renders `[(2, 4), (3, 1)]` as `2^4 * 3`.
pub fn format_factors(f: &[(u64, u32)]) -> String {
    if f.is_empty() {
        return "1".into();
    }
    f.iter()
        .map(|&(p, e)| {
            if e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn step_for(two_val: u32, three_val: u32) -> Result<u64> {
    checked_pow(2, two_val)
        .zip(checked_pow(3, three_val))
        .and_then(|(a, b)| a.checked_mul(b))
        .ok_or_else(|| Error::InvalidInput(format!("2^{two_val} * 3^{three_val} exceeds 64 bits")))
}

/// Segment length, in multiples of the step, for the sieve.
const SEGMENT: u64 = 1 << 16;
const SIEVE_PRIMES_UP_TO: u64 = 1 << 12;

/// Primes `p ≡ 1 (mod 2^two_val 3^three_val)`, `p <= p_max`, with their orders.
pub fn search_factors(two_val: u32, three_val: u32, p_max: u64) -> Result<Vec<FactorCandidate>> {
    let step = step_for(two_val, three_val)?;
    let small: Vec<u64> = (5..SIEVE_PRIMES_UP_TO)
        .filter(|&q| is_prime_u64(q))
        .collect();
    let k_max = p_max.saturating_sub(1) / step;
    let mut out = Vec::new();
    let mut lo = 1u64;
    while lo <= k_max {
        let hi = (lo + SEGMENT - 1).min(k_max);
        let mut alive = vec![true; (hi - lo + 1) as usize];
        for &q in &small {
            let sq = step % q;
            if sq == 0 {
                continue;
            }
            // 1 + k step ≡ 0 (mod q)  <=>  k ≡ -step^{-1} (mod q)
            let inv = crate::modcore::arith::inv_mod(sq, q).expect("q prime");
            let k0 = (q - inv) % q;
            let mut k = lo + (k0 + q - lo % q) % q;
            while k <= hi {
                if 1 + k * step != q {
                    alive[(k - lo) as usize] = false;
                }
                k += q;
            }
        }
        for (off, &ok) in alive.iter().enumerate() {
            let p = 1 + (lo + off as u64) * step;
            if ok && p > 3 && is_prime_u64(p) {
                out.push(FactorCandidate::for_prime(p)?);
            }
        }
        lo = hi + 1;
    }
    Ok(out)
}

/// Like [`search_factors`] over an explicit candidate list, for ranges too far out to sieve.
pub fn search_factors_in(
    two_val: u32,
    three_val: u32,
    candidates: &[u64],
) -> Result<Vec<FactorCandidate>> {
    let step = step_for(two_val, three_val)?;
    let mut ps: Vec<u64> = candidates
        .iter()
        .copied()
        .filter(|&p| p > 3 && p % step == 1 % step && is_prime_u64(p))
        .collect();
    ps.sort_unstable();
    ps.dedup();
    ps.into_iter().map(FactorCandidate::for_prime).collect()
}
