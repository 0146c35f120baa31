//! Chains of moduli: metadata, the extraneous-solution obstruction, a validator
//! built on it, and helpers for choosing new factors.

mod chain;
mod extraneous;
mod search;
mod validate;

use num_bigint::BigUint;

pub use chain::{valuation, Chain, StepMeta};
pub use extraneous::{construct_extraneous, ExtraneousWitness};
pub use search::{format_factors, search_factors, search_factors_in, FactorCandidate};
pub use validate::{top_decomposition, validate_chain, Decomposition, Hazard, ValidationReport};

use crate::error::{Error, Result};
use crate::modcore::{multiplicative_order, FactoredModulus};

/// How much step `i` grows the loops, from `M_{i-1}` to `M_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepDiagnostics {
    pub index: usize,
    /// `O_2(M_i) / O_2(M_{i-1})`
    pub two_loop_ratio: BigUint,
    /// `O_3(M_i) / O_3(M_{i-1})`
    pub three_loop_ratio: BigUint,
    /// `v_2(O_3'(M))` before and after.
    pub three_coprime_two_adic: (u32, u32),
    /// `v_3(O_2'(M))` before and after.
    pub two_coprime_three_adic: (u32, u32),
    /// `m_i` is a prime coprime to `6 M_{i-1}`.
    pub unbalanced_eligible: bool,
}

fn loop_len(b: u64, m: &FactoredModulus) -> Result<BigUint> {
    multiplicative_order(b, &m.without_prime(b))
}

pub fn step_diagnostics(chain: &Chain, i: usize) -> Result<StepDiagnostics> {
    if i < 2 || i > chain.len() {
        return Err(Error::InvalidInput(format!(
            "step index {i} outside 2..={}",
            chain.len()
        )));
    }
    let (prev, next) = (chain.modulus(i - 1), chain.modulus(i));
    let ratio = |b| -> Result<BigUint> { Ok(loop_len(b, next)? / loop_len(b, prev)?) };
    let coprime = |b, p, m: &FactoredModulus| -> Result<u32> {
        Ok(valuation(&multiplicative_order(b, &m.coprime_part())?, p))
    };
    let factor = chain.factor(i);
    Ok(StepDiagnostics {
        index: i,
        two_loop_ratio: ratio(2)?,
        three_loop_ratio: ratio(3)?,
        three_coprime_two_adic: (coprime(3, 2, prev)?, coprime(3, 2, next)?),
        two_coprime_three_adic: (coprime(2, 3, prev)?, coprime(2, 3, next)?),
        unbalanced_eligible: factor
            .as_prime()
            .is_some_and(|p| p > 3 && prev.exponent_of(p) == 0),
    })
}
