use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::types::{ProblemSpec, RingShapes, SolutionModM};
use crate::error::{Error, Result};
use crate::modcore::arith::{add_mod, mul_mod, pow_mod};
use crate::modcore::FactoredModulus;

/// Default bound on `tail + loop` of the summand base modulo `M_1`.
pub const DEFAULT_RANGE_BOUND: usize = 64;

/// Powers of the left-hand base tabulated for the residue lookup are capped here.
const MAX_POWER_TABLE: u64 = 1 << 24;

#[derive(Clone, Copy, Debug)]
pub struct BaseOptions {
    /// Largest allowed number of canonical summand exponents.
    pub range_bound: usize,
    /// Require distinct determinate exponents. Turning this off returns every
    /// congruence solution with `a_1 = 0`, including `2^0 + 2^0 + 2^0`-style ones.
    pub distinct_determinate: bool,
}

impl Default for BaseOptions {
    fn default() -> Self {
        BaseOptions {
            range_bound: DEFAULT_RANGE_BOUND,
            distinct_determinate: true,
        }
    }
}

/// All solutions modulo `m1` with `a_1 = 0`, sorted canonically.
pub fn enumerate_base_solutions(
    spec: &ProblemSpec,
    m1: &FactoredModulus,
) -> Result<Vec<SolutionModM>> {
    enumerate_base_solutions_with(spec, m1, &BaseOptions::default())
}

pub fn enumerate_base_solutions_with(
    spec: &ProblemSpec,
    m1: &FactoredModulus,
    opts: &BaseOptions,
) -> Result<Vec<SolutionModM>> {
    let ring = RingShapes::new(spec.direction, m1)?;
    let range = ring.summand_range();
    if range > opts.range_bound as u64 {
        return Err(Error::BaseModulusTooLarge {
            range: range.to_string(),
            bound: opts.range_bound,
        });
    }
    let m = m1.to_u64().ok_or_else(|| Error::BaseModulusTooLarge {
        range: format!("modulus {m1}"),
        bound: opts.range_bound,
    })?;
    let powers = ring
        .power
        .distinct_powers()
        .to_u64()
        .filter(|&c| c <= MAX_POWER_TABLE)
        .ok_or_else(|| Error::BaseModulusTooLarge {
            range: format!(
                "{} powers of {}",
                ring.power.distinct_powers(),
                spec.power_base()
            ),
            bound: MAX_POWER_TABLE as usize,
        })?;

    // Residue -> every canonical x with P^x equal to it.
    let mut table: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut v = 1 % m;
    for x in 0..powers {
        table.entry(v).or_default().push(x);
        v = mul_mod(v, spec.power_base(), m);
    }

    let summands: Vec<u64> = (0..range)
        .map(|j| pow_mod(spec.summand_base(), j, m))
        .collect();
    let mut search = Search {
        spec,
        ring: &ring,
        opts,
        m,
        summands: &summands,
        table: &table,
        counts: vec![0; range as usize],
        out: Vec::new(),
    };
    // b_0 >= 1 always; exactly 1 when 0 is determinate and distinctness is enforced.
    let max_b0 = if opts.distinct_determinate && ring.summand_determinate(0) {
        1
    } else {
        spec.n
    };
    for b0 in 1..=max_b0 {
        search.counts[0] = b0;
        let sum = mul_mod(b0 as u64 % m, summands[0], m);
        search.go(1, spec.n - b0, sum);
    }
    let mut out = search.out;
    out.sort_unstable();
    Ok(out)
}

struct Search<'a> {
    spec: &'a ProblemSpec,
    ring: &'a RingShapes,
    opts: &'a BaseOptions,
    m: u64,
    summands: &'a [u64],
    table: &'a HashMap<u64, Vec<u64>>,
    counts: Vec<usize>,
    out: Vec<SolutionModM>,
}

impl Search<'_> {
    fn go(&mut self, j: usize, remaining: usize, sum: u64) {
        if remaining == 0 {
            self.emit(sum);
            return;
        }
        if j == self.summands.len() {
            return;
        }
        let cap = if self.opts.distinct_determinate && self.ring.summand_determinate(j as u64) {
            remaining.min(1)
        } else {
            remaining
        };
        let mut s = sum;
        for b in 0..=cap {
            self.counts[j] = b;
            self.go(j + 1, remaining - b, s);
            s = add_mod(s, self.summands[j], self.m);
        }
        self.counts[j] = 0;
    }

    fn emit(&mut self, sum: u64) {
        let Some(xs) = self.table.get(&sum) else {
            return;
        };
        let exponents: Vec<u64> = self
            .counts
            .iter()
            .enumerate()
            .flat_map(|(j, &b)| std::iter::repeat_n(j as u64, b))
            .collect();
        debug_assert_eq!(exponents.len(), self.spec.n);
        for &x in xs {
            self.out.push(SolutionModM {
                x: BigUint::from(x),
                exponents: exponents.clone(),
                modulus_index: 1,
            });
        }
    }
}
