use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::modcore::{multiplicative_order, FactoredModulus};
use crate::solver::Direction;

/// The order columns tabulated next to each factor.
///
/// For `3 = sum of 2s` these are `O_2(m_i)`, `O_2(M_i)`, `O_3'(m_i)` and
/// `v_2(O_3'(M_i))`; the mirror direction swaps 2 and 3. An order over a
/// trivial sub-modulus is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepMeta {
    pub factor_loop: Option<BigUint>,
    pub cumulative_loop: BigUint,
    pub factor_coprime_order: Option<BigUint>,
    pub cumulative_coprime_valuation: u32,
}

impl StepMeta {
    pub fn compute(
        direction: Direction,
        factor: &FactoredModulus,
        cumulative: &FactoredModulus,
    ) -> Result<Self> {
        let s = direction.summand_base();
        let p = direction.power_base();
        let nontrivial = |m: FactoredModulus| (!m.is_one()).then_some(m);
        let factor_loop = nontrivial(factor.without_prime(s))
            .map(|m| multiplicative_order(s, &m))
            .transpose()?;
        let cumulative_loop = multiplicative_order(s, &cumulative.without_prime(s))?;
        let factor_coprime_order = nontrivial(factor.coprime_part())
            .map(|m| multiplicative_order(p, &m))
            .transpose()?;
        let o = multiplicative_order(p, &cumulative.coprime_part())?;
        Ok(StepMeta {
            factor_loop,
            cumulative_loop,
            factor_coprime_order,
            cumulative_coprime_valuation: valuation(&o, s),
        })
    }
}

/// Exponent of the prime `p` in `n > 0`.
pub fn valuation(n: &BigUint, p: u64) -> u32 {
    let mut n = n.clone();
    let mut k = 0;
    let p = BigUint::from(p);
    while n > BigUint::one() && (&n % &p) == BigUint::default() {
        n /= &p;
        k += 1;
    }
    k
}

/// Factors `m_1, m_2, ...` with cumulative products `M_i`, indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    direction: Direction,
    factors: Vec<FactoredModulus>,
    cumulative: Vec<FactoredModulus>,
    meta: Vec<StepMeta>,
}

impl Chain {
    pub fn new(direction: Direction, factors: Vec<FactoredModulus>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput(
                "a chain needs at least one factor".into(),
            ));
        }
        let mut cumulative: Vec<FactoredModulus> = Vec::with_capacity(factors.len());
        let mut meta = Vec::with_capacity(factors.len());
        for f in &factors {
            let m = match cumulative.last() {
                Some(prev) => prev.mul(f),
                None => f.clone(),
            };
            meta.push(StepMeta::compute(direction, f, &m)?);
            cumulative.push(m);
        }
        Ok(Chain {
            direction,
            factors,
            cumulative,
            meta,
        })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[FactoredModulus] {
        &self.factors
    }

    pub fn cumulative(&self) -> &[FactoredModulus] {
        &self.cumulative
    }

    pub fn meta(&self) -> &[StepMeta] {
        &self.meta
    }

    /// `m_i`, 1-based.
    pub fn factor(&self, i: usize) -> &FactoredModulus {
        &self.factors[i - 1]
    }

    /// `M_i`, 1-based.
    pub fn modulus(&self, i: usize) -> &FactoredModulus {
        &self.cumulative[i - 1]
    }

    pub fn final_modulus(&self) -> &FactoredModulus {
        self.cumulative.last().expect("nonempty")
    }

    /// The first `len` factors as a chain of their own.
    pub fn prefix(&self, len: usize) -> Chain {
        Chain {
            direction: self.direction,
            factors: self.factors[..len].to_vec(),
            cumulative: self.cumulative[..len].to_vec(),
            meta: self.meta[..len].to_vec(),
        }
    }
}
