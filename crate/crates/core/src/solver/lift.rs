use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::types::{ExpProgression, PowerProgression, ProblemSpec, RingShapes, SolutionModM};
use crate::dlog::PrimeDlog;
use crate::error::{Error, Result};
use crate::modcore::arith::{add_mod, inv_mod, mul_mod, pow_mod, pow_mod_big};
use crate::modcore::FactoredModulus;

/// Default per-side cap on meet-in-the-middle list entries.
pub const DEFAULT_MEMORY_CAP: usize = 1 << 26;

/// Lift sets for one solution moving from `M_{i-1}` to `M_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftPlan {
    pub lift_sets: Vec<ExpProgression>,
    pub left_lifts: PowerProgression,
    pub chi: BigUint,
    pub split_index: usize,
}

impl LiftPlan {
    /// `∏ #A_j`, the number of summand tuples.
    pub fn tuple_count(&self) -> BigUint {
        self.lift_sets
            .iter()
            .fold(BigUint::one(), |acc, a| acc * a.count)
    }

    /// Sizes of the left and right meet-in-the-middle lists.
    pub fn half_sizes(&self) -> (BigUint, BigUint) {
        let k = self.split_index;
        let left = self.lift_sets[..k]
            .iter()
            .fold(self.chi.clone(), |acc, a| acc * a.count);
        let right = self.lift_sets[k..]
            .iter()
            .fold(BigUint::one(), |acc, a| acc * a.count);
        (left, right)
    }
}

/// Which lifting technique handled a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftCase {
    Balanced,
    Unbalanced,
}

/// Exponent lift from one cycle shape to a finer one: `e` itself when it is on the
/// old tail, otherwise `e, e + L, e + 2L, ...` below the new `tail + loop`.
fn lift_count(e: u64, old_tail: u64, old_loop: u64, new_range: u64) -> u64 {
    if e < old_tail {
        1
    } else {
        (new_range - e).div_ceil(old_loop)
    }
}

/// Everything about a chain step `M_{i-1} -> M_i` that does not depend on the solution.
///
/// A lifted tuple already satisfies the congruence modulo `M_{i-1}`, so it is only
/// re-checked modulo the components of `M_i` whose primes divide `m_i`.
pub struct LiftStep {
    spec: ProblemSpec,
    index: usize,
    prev: RingShapes,
    next: RingShapes,
    check: u64,
    summand_hop: u64,
    power_hop: u64,
    new_prime: Option<u64>,
    dlog: OnceLock<PrimeDlog>,
    pin_zero: bool,
    memory_cap: usize,
}

impl LiftStep {
    /// `index` is the chain index of `next`.
    pub fn new(
        spec: ProblemSpec,
        index: usize,
        prev: &FactoredModulus,
        next: &FactoredModulus,
    ) -> Result<Self> {
        let prev_rings = RingShapes::new(spec.direction, prev)?;
        let next_rings = RingShapes::new(spec.direction, next)?;
        Self::from_rings(spec, index, prev_rings, next_rings)
    }

    pub fn from_rings(
        spec: ProblemSpec,
        index: usize,
        prev: RingShapes,
        next: RingShapes,
    ) -> Result<Self> {
        let m = prev
            .modulus
            .quotient_of(&next.modulus)
            .ok_or_else(|| Error::NotDivisible {
                prev: prev.modulus.to_string(),
                next: next.modulus.to_string(),
            })?;
        let mut check: u64 = 1;
        for (p, _) in m.prime_powers() {
            let e = next.modulus.exponent_of(p);
            check = p
                .checked_pow(e)
                .and_then(|pe| check.checked_mul(pe))
                .ok_or_else(|| Error::StepModulusTooLarge(m.to_string()))?;
        }
        let summand_hop = pow_mod(spec.summand_base(), prev.summand_loop(), check);
        let power_hop = pow_mod_big(spec.power_base(), &prev.power.loop_len, check);
        let new_prime = m
            .as_prime()
            .filter(|&p| p > 3 && prev.modulus.exponent_of(p) == 0);
        Ok(LiftStep {
            spec,
            index,
            prev,
            next,
            check,
            summand_hop,
            power_hop,
            new_prime,
            dlog: OnceLock::new(),
            pin_zero: false,
            memory_cap: DEFAULT_MEMORY_CAP,
        })
    }

    /// Keep a leading exponent 0 fixed at 0 instead of lifting it.
    ///
    /// Sound for the integer problem, where one summand is always the zeroth power.
    pub fn pin_zero(mut self, yes: bool) -> Self {
        self.pin_zero = yes;
        self
    }

    pub fn memory_cap(mut self, cap: usize) -> Self {
        self.memory_cap = cap;
        self
    }

    pub fn prev(&self) -> &RingShapes {
        &self.prev
    }

    pub fn next(&self) -> &RingShapes {
        &self.next
    }

    /// The part of `M_i` that lifted tuples are checked against.
    pub fn check_modulus(&self) -> u64 {
        self.check
    }

    /// `m_i` when it is a prime not dividing `6 M_{i-1}`.
    pub fn unbalanced_prime(&self) -> Option<u64> {
        self.new_prime
    }

    pub fn plan(&self, sol: &SolutionModM) -> Result<LiftPlan> {
        if sol.exponents.len() != self.spec.n {
            return Err(Error::InvalidInput(format!(
                "solution has {} exponents, expected {}",
                sol.exponents.len(),
                self.spec.n
            )));
        }
        let (tail, lp, range) = (
            self.prev.summand_tail(),
            self.prev.summand_loop(),
            self.next.summand_range(),
        );
        let lift_sets: Vec<ExpProgression> = sol
            .exponents
            .iter()
            .enumerate()
            .map(|(j, &a)| {
                if j == 0 && a == 0 && self.pin_zero {
                    return ExpProgression::singleton(0);
                }
                let count = lift_count(a, tail, lp, range);
                ExpProgression {
                    start: a,
                    step: if count == 1 { 0 } else { lp },
                    count,
                }
            })
            .collect();
        let left_lifts = self.power_lifts(&sol.x);
        let chi = left_lifts.count.clone();
        let split_index = balanced_split(&chi, &lift_sets);
        Ok(LiftPlan {
            lift_sets,
            left_lifts,
            chi,
            split_index,
        })
    }

    fn power_lifts(&self, x: &BigUint) -> PowerProgression {
        let tail = BigUint::from(self.prev.power.tail_len);
        let step = self.prev.power.loop_len.clone();
        if *x < tail {
            return PowerProgression {
                start: x.clone(),
                step: BigUint::zero(),
                count: BigUint::one(),
            };
        }
        let range = self.next.power.distinct_powers();
        let count = (range - x).div_ceil(&step);
        PowerProgression {
            start: x.clone(),
            step,
            count,
        }
    }

    /// Whether the discrete-log technique both applies and is the cheaper one.
    pub fn prefers_unbalanced(&self, plan: &LiftPlan) -> bool {
        self.new_prime.is_some() && plan.chi > plan.tuple_count()
    }

    /// Lifts with whichever technique the step and plan call for.
    pub fn lift(&self, sol: &SolutionModM) -> Result<(LiftCase, Vec<SolutionModM>)> {
        let plan = self.plan(sol)?;
        if self.prefers_unbalanced(&plan) {
            Ok((LiftCase::Unbalanced, self.lift_unbalanced(sol, &plan)?))
        } else {
            Ok((LiftCase::Balanced, self.lift_balanced(sol, &plan)?))
        }
    }

    fn summand_values(&self, set: &ExpProgression) -> Vec<u64> {
        let q = self.check;
        let mut v = pow_mod(self.spec.summand_base(), set.start, q);
        (0..set.count)
            .map(|_| {
                let out = v;
                v = mul_mod(v, self.summand_hop, q);
                out
            })
            .collect()
    }

    /// Positions whose original exponent equals the previous one get a
    /// non-decreasing index constraint; the lift sets then coincide.
    fn grouping(sol: &SolutionModM, plan: &LiftPlan) -> Vec<bool> {
        (0..sol.exponents.len())
            .map(|j| {
                j > 0
                    && sol.exponents[j] == sol.exponents[j - 1]
                    && plan.lift_sets[j] == plan.lift_sets[j - 1]
            })
            .collect()
    }

    fn emit(&self, x: BigUint, mut exponents: Vec<u64>, out: &mut Vec<SolutionModM>) {
        exponents.sort_unstable();
        let sol = SolutionModM {
            x,
            exponents,
            modulus_index: self.index,
        };
        if sol.determinate_distinct(&self.next) {
            out.push(sol);
        }
    }

    /// Meet in the middle: `P^x' - S^a'_1 - ... - S^a'_k` against `S^a'_(k+1) + ... + S^a'_n`.
    pub fn lift_balanced(&self, sol: &SolutionModM, plan: &LiftPlan) -> Result<Vec<SolutionModM>> {
        let q = self.check;
        let k = plan.split_index;
        let (left_size, right_size) = plan.half_sizes();
        for size in [&left_size, &right_size] {
            if *size > BigUint::from(self.memory_cap) {
                return Err(Error::MemoryBudgetExceeded {
                    requested: size.to_u128().unwrap_or(u128::MAX),
                    cap: self.memory_cap,
                });
            }
        }
        let chi = plan.chi.to_u64().expect("bounded by the memory cap");
        let mut xs = Vec::with_capacity(chi as usize);
        let mut v = pow_mod_big(self.spec.power_base(), &sol.x, q);
        for _ in 0..chi {
            xs.push(v);
            v = mul_mod(v, self.power_hop, q);
        }
        let values: Vec<Vec<u64>> = plan
            .lift_sets
            .iter()
            .map(|s| self.summand_values(s))
            .collect();
        let mut grouped = Self::grouping(sol, plan);
        if k < grouped.len() {
            grouped[k] = false;
        }

        let mut left_factors = vec![xs];
        left_factors.extend(
            values[..k]
                .iter()
                .map(|vs| vs.iter().map(|&v| (q - v) % q).collect::<Vec<_>>()),
        );
        let mut left_grouped = vec![false];
        left_grouped.extend_from_slice(&grouped[..k]);
        let right_factors = values[k..].to_vec();
        let right_grouped = grouped[k..].to_vec();

        let mut left = Vec::new();
        enumerate_sums(&left_factors, &left_grouped, q, &mut left);
        let mut right = Vec::new();
        enumerate_sums(&right_factors, &right_grouped, q, &mut right);
        left.sort_unstable();
        right.sort_unstable();

        let radices_left: Vec<u64> = left_factors.iter().map(|f| f.len() as u64).collect();
        let radices_right: Vec<u64> = right_factors.iter().map(|f| f.len() as u64).collect();
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < left.len() && j < right.len() {
            let (lv, rv) = (left[i].0, right[j].0);
            if lv < rv {
                i += 1;
            } else if lv > rv {
                j += 1;
            } else {
                let i_end = i + left[i..].iter().take_while(|e| e.0 == lv).count();
                let j_end = j + right[j..].iter().take_while(|e| e.0 == lv).count();
                for l in &left[i..i_end] {
                    let li = decode(l.1, &radices_left);
                    let x = plan.left_lifts.get(&BigUint::from(li[0]));
                    for r in &right[j..j_end] {
                        let ri = decode(r.1, &radices_right);
                        let exps = li[1..]
                            .iter()
                            .zip(&plan.lift_sets[..k])
                            .chain(ri.iter().zip(&plan.lift_sets[k..]))
                            .map(|(&idx, set)| set.get(idx))
                            .collect();
                        self.emit(x.clone(), exps, &mut out);
                    }
                }
                i = i_end;
                j = j_end;
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn prime_dlog(&self, p: u64) -> Result<&PrimeDlog> {
        if let Some(d) = self.dlog.get() {
            return Ok(d);
        }
        let built = PrimeDlog::new(p)?;
        Ok(self.dlog.get_or_init(|| built))
    }

    /// Discrete-log lifting: one pass over the summand tuples, each solved for `x'`.
    ///
    /// With `h = P^(O_P(M_{i-1}))`, the admissible `x'` are `x + k O_P(M_{i-1})`
    /// and the tuple lifts iff `s P^(-x)` lies in `<h>`; then `k` is unique.
    pub fn lift_unbalanced(
        &self,
        sol: &SolutionModM,
        plan: &LiftPlan,
    ) -> Result<Vec<SolutionModM>> {
        let p = self.new_prime.ok_or_else(|| {
            Error::UnbalancedInapplicable(format!(
                "new factor {} is not a prime coprime to 6 M_(i-1)",
                self.prev
                    .modulus
                    .quotient_of(&self.next.modulus)
                    .expect("checked in new")
            ))
        })?;
        if plan.chi <= plan.tuple_count() {
            return Err(Error::UnbalancedInapplicable(format!(
                "chi = {} does not exceed the tuple count {}",
                plan.chi,
                plan.tuple_count()
            )));
        }
        debug_assert_eq!(p, self.check);
        let ctx = self.prime_dlog(p)?;
        let h = self.power_hop;
        let h_order = ctx.order_of(h)?;
        let px_inv = inv_mod(pow_mod_big(self.spec.power_base(), &sol.x, p), p).expect("unit");
        let values: Vec<Vec<u64>> = plan
            .lift_sets
            .iter()
            .map(|s| self.summand_values(s))
            .collect();
        let grouped = Self::grouping(sol, plan);
        let mut sums = Vec::new();
        enumerate_sums(&values, &grouped, p, &mut sums);
        let radices: Vec<u64> = values.iter().map(|f| f.len() as u64).collect();

        let mut out = Vec::new();
        for (s, code) in sums {
            if s == 0 {
                continue;
            }
            let t = mul_mod(s, px_inv, p);
            if pow_mod(t, h_order, p) != 1 {
                continue;
            }
            let class = ctx
                .membership(h, t)?
                .expect("order test guarantees membership");
            let x = &plan.left_lifts.start + &plan.left_lifts.step * class.residue_class;
            debug_assert!(x < &plan.left_lifts.start + &plan.left_lifts.step * &plan.chi);
            let idx = decode(code, &radices);
            let exps = idx
                .iter()
                .zip(&plan.lift_sets)
                .map(|(&i, set)| set.get(i))
                .collect();
            self.emit(x, exps, &mut out);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

/// First `k` minimizing the ratio between `χ ∏_{j<k} #A_j` and `∏_{j>=k} #A_j`.
pub fn balanced_split(chi: &BigUint, sets: &[ExpProgression]) -> usize {
    if let Some(k) = balanced_split_small(chi, sets) {
        return k;
    }
    let n = sets.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(chi.clone());
    for s in sets {
        let last = prefix.last().unwrap().clone();
        prefix.push(last * s.count);
    }
    let mut suffix = vec![BigUint::one(); n + 1];
    for j in (0..n).rev() {
        suffix[j] = &suffix[j + 1] * sets[j].count;
    }
    let mut best = 0;
    for k in 1..=n {
        let (bl, br) = (&prefix[best], &suffix[best]);
        let (kl, kr) = (&prefix[k], &suffix[k]);
        let (bmax, bmin) = if bl >= br { (bl, br) } else { (br, bl) };
        let (kmax, kmin) = if kl >= kr { (kl, kr) } else { (kr, kl) };
        // kmax / kmin < bmax / bmin
        if kmax * bmin < bmax * kmin {
            best = k;
        }
    }
    best
}

fn balanced_split_small(chi: &BigUint, sets: &[ExpProgression]) -> Option<usize> {
    let n = sets.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(chi.to_u64()? as u128);
    for s in sets {
        let last = *prefix.last().unwrap();
        prefix.push(last.checked_mul(s.count as u128)?);
    }
    let mut suffix = vec![1u128; n + 1];
    for j in (0..n).rev() {
        suffix[j] = suffix[j + 1].checked_mul(sets[j].count as u128)?;
    }
    let mut best = 0;
    for k in 1..=n {
        let (bmax, bmin) = (
            prefix[best].max(suffix[best]),
            prefix[best].min(suffix[best]),
        );
        let (kmax, kmin) = (prefix[k].max(suffix[k]), prefix[k].min(suffix[k]));
        if kmax.checked_mul(bmin)? < bmax.checked_mul(kmin)? {
            best = k;
        }
    }
    Some(best)
}

/// All sums (one value per factor, mod `q`) with their mixed-radix index codes.
/// A grouped factor may not take a smaller index than the factor before it.
fn enumerate_sums(factors: &[Vec<u64>], grouped: &[bool], q: u64, out: &mut Vec<(u64, u64)>) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        factors: &[Vec<u64>],
        grouped: &[bool],
        q: u64,
        depth: usize,
        prev_idx: usize,
        sum: u64,
        code: u64,
        out: &mut Vec<(u64, u64)>,
    ) {
        if depth == factors.len() {
            out.push((sum, code));
            return;
        }
        let vals = &factors[depth];
        let start = if grouped[depth] { prev_idx } else { 0 };
        let radix = vals.len() as u64;
        for (idx, &v) in vals.iter().enumerate().skip(start) {
            go(
                factors,
                grouped,
                q,
                depth + 1,
                idx,
                add_mod(sum, v, q),
                code * radix + idx as u64,
                out,
            );
        }
    }
    go(factors, grouped, q, 0, 0, 0 % q.max(1), 0, out);
}

fn decode(mut code: u64, radices: &[u64]) -> Vec<u64> {
    let mut idx = vec![0; radices.len()];
    for (slot, &r) in idx.iter_mut().zip(radices).rev() {
        *slot = code % r;
        code /= r;
    }
    idx
}

/// Lift plan for a single solution, without building a reusable step.
pub fn compute_lift_plan(
    sol: &SolutionModM,
    prev: &FactoredModulus,
    next: &FactoredModulus,
    spec: &ProblemSpec,
) -> Result<LiftPlan> {
    LiftStep::new(*spec, sol.modulus_index + 1, prev, next)?.plan(sol)
}

pub fn lift_balanced(
    sol: &SolutionModM,
    plan: &LiftPlan,
    prev: &FactoredModulus,
    next: &FactoredModulus,
    spec: &ProblemSpec,
) -> Result<Vec<SolutionModM>> {
    LiftStep::new(*spec, sol.modulus_index + 1, prev, next)?.lift_balanced(sol, plan)
}

pub fn lift_unbalanced(
    sol: &SolutionModM,
    plan: &LiftPlan,
    prev: &FactoredModulus,
    next: &FactoredModulus,
    spec: &ProblemSpec,
) -> Result<Vec<SolutionModM>> {
    LiftStep::new(*spec, sol.modulus_index + 1, prev, next)?.lift_unbalanced(sol, plan)
}
