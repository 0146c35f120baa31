use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modcore::arith::{add_mod, pow_mod, pow_mod_big};
use crate::modcore::{cycle_shape, CycleShape, FactoredModulus};

/// Which of the two equations is being solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `3^x = 2^a1 + ... + 2^an`
    ThreeAsSumOfTwos,
    /// `2^x = 3^a1 + ... + 3^an`
    TwoAsSumOfThrees,
}

impl Direction {
    pub fn power_base(self) -> u64 {
        match self {
            Direction::ThreeAsSumOfTwos => 3,
            Direction::TwoAsSumOfThrees => 2,
        }
    }

    pub fn summand_base(self) -> u64 {
        match self {
            Direction::ThreeAsSumOfTwos => 2,
            Direction::TwoAsSumOfThrees => 3,
        }
    }

    pub fn from_bases(power_base: u64, summand_base: u64) -> Result<Self> {
        match (power_base, summand_base) {
            (3, 2) => Ok(Direction::ThreeAsSumOfTwos),
            (2, 3) => Ok(Direction::TwoAsSumOfThrees),
            _ => Err(Error::InvalidInput(format!(
                "bases must be {{2, 3}}, got {power_base} and {summand_base}"
            ))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::ThreeAsSumOfTwos => f.write_str("3=sum2"),
            Direction::TwoAsSumOfThrees => f.write_str("2=sum3"),
        }
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "3=sum2" => Ok(Direction::ThreeAsSumOfTwos),
            "2=sum3" => Ok(Direction::TwoAsSumOfThrees),
            other => Err(Error::InvalidInput(format!(
                "unknown direction {other:?}, expected 3=sum2 or 2=sum3"
            ))),
        }
    }
}

/// One instance: `power_base^x` as a sum of `n` powers of `summand_base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProblemSpec {
    pub direction: Direction,
    pub n: usize,
}

impl ProblemSpec {
    pub fn new(direction: Direction, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        Ok(ProblemSpec { direction, n })
    }

    pub fn power_base(&self) -> u64 {
        self.direction.power_base()
    }

    pub fn summand_base(&self) -> u64 {
        self.direction.summand_base()
    }
}

/// Power and summand cycle shapes of one modulus, for one direction.
#[derive(Clone, Debug)]
pub struct RingShapes {
    pub modulus: FactoredModulus,
    pub power: CycleShape,
    pub summand: CycleShape,
    summand_tail: u64,
    summand_loop: u64,
}

impl RingShapes {
    pub fn new(direction: Direction, modulus: &FactoredModulus) -> Result<Self> {
        let power = cycle_shape(direction.power_base(), modulus)?;
        let summand = cycle_shape(direction.summand_base(), modulus)?;
        let summand_loop = summand
            .loop_len
            .to_u64()
            .filter(|l| l.checked_add(u64::from(summand.tail_len)).is_some())
            .ok_or_else(|| Error::ExponentOverflow(summand.loop_len.to_string()))?;
        Ok(RingShapes {
            modulus: modulus.clone(),
            summand_tail: u64::from(summand.tail_len),
            summand_loop,
            power,
            summand,
        })
    }

    pub fn summand_tail(&self) -> u64 {
        self.summand_tail
    }

    pub fn summand_loop(&self) -> u64 {
        self.summand_loop
    }

    /// Number of canonical summand exponents, `tail + loop`.
    pub fn summand_range(&self) -> u64 {
        self.summand_tail + self.summand_loop
    }

    pub fn summand_determinate(&self, a: u64) -> bool {
        a < self.summand_tail
    }

    pub fn canonical_summand(&self, a: u64) -> u64 {
        if a < self.summand_tail {
            a
        } else {
            self.summand_tail + (a - self.summand_tail) % self.summand_loop
        }
    }
}

/// A solution `(x; a_1, ..., a_n)` of the congruence modulo the chain modulus `M_i`,
/// with canonical exponents and non-decreasing `a_j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SolutionModM {
    pub x: BigUint,
    pub exponents: Vec<u64>,
    pub modulus_index: usize,
}

impl SolutionModM {
    /// Checked constructor: sorts the exponents and verifies canonical ranges,
    /// determinate distinctness and the congruence itself.
    pub fn new(
        x: BigUint,
        mut exponents: Vec<u64>,
        modulus_index: usize,
        spec: &ProblemSpec,
        ring: &RingShapes,
    ) -> Result<Self> {
        exponents.sort_unstable();
        let sol = SolutionModM {
            x,
            exponents,
            modulus_index,
        };
        if sol.exponents.len() != spec.n {
            return Err(Error::InvalidInput(format!(
                "expected {} exponents, got {}",
                spec.n,
                sol.exponents.len()
            )));
        }
        if sol.x >= ring.power.distinct_powers()
            || sol.exponents.iter().any(|&a| a >= ring.summand_range())
        {
            return Err(Error::InvalidInput(
                "exponent outside canonical range".into(),
            ));
        }
        if !sol.determinate_distinct(ring) {
            return Err(Error::InvalidInput(
                "repeated determinate summand exponent".into(),
            ));
        }
        if !sol.satisfies(spec, &ring.modulus) {
            return Err(Error::InvalidInput(format!(
                "congruence fails modulo {}",
                ring.modulus
            )));
        }
        Ok(sol)
    }

    /// No two equal exponents lie on the tail (exponents must be sorted).
    pub fn determinate_distinct(&self, ring: &RingShapes) -> bool {
        self.exponents
            .windows(2)
            .all(|w| w[0] != w[1] || !ring.summand_determinate(w[0]))
    }

    /// Whether every summand exponent is determinate.
    pub fn all_determinate(&self, ring: &RingShapes) -> bool {
        self.exponents.iter().all(|&a| ring.summand_determinate(a))
    }

    /// Evaluates the congruence component by component.
    pub fn satisfies(&self, spec: &ProblemSpec, modulus: &FactoredModulus) -> bool {
        modulus.prime_powers().all(|(p, e)| {
            let q = p.pow(e);
            let lhs = pow_mod_big(spec.power_base(), &self.x, q);
            let rhs = self.exponents.iter().fold(0u64, |acc, &a| {
                add_mod(acc, pow_mod(spec.summand_base(), a, q), q)
            });
            lhs == rhs
        })
    }
}

/// An integer solution with strictly increasing exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactSolution {
    pub x: u64,
    pub exponents: Vec<u64>,
    pub verified: bool,
}

impl ExactSolution {
    /// Builds the record and sets `verified` by exact evaluation.
    pub fn checked(x: u64, exponents: Vec<u64>, direction: Direction) -> Self {
        let mut s = ExactSolution {
            x,
            exponents,
            verified: false,
        };
        s.verified = s.holds(direction);
        s
    }

    /// Exact big-integer check of `P^x = sum S^a_j` with strictly increasing exponents.
    pub fn holds(&self, direction: Direction) -> bool {
        if !self.exponents.windows(2).all(|w| w[0] < w[1]) {
            return false;
        }
        let lhs = BigUint::from(direction.power_base()).pow(self.x as u32);
        let s = BigUint::from(direction.summand_base());
        let rhs = self
            .exponents
            .iter()
            .fold(BigUint::zero(), |acc, &a| acc + s.pow(a as u32));
        self.x <= u64::from(u32::MAX) && lhs == rhs
    }
}

/// Renders `3^4 = 2^0 + 2^4 + 2^6`.
pub fn format_solution(direction: Direction, sol: &ExactSolution) -> String {
    let terms: Vec<String> = sol
        .exponents
        .iter()
        .map(|a| format!("{}^{}", direction.summand_base(), a))
        .collect();
    format!(
        "{}^{} = {}",
        direction.power_base(),
        sol.x,
        terms.join(" + ")
    )
}

/// Arithmetic progression `start + k * step`, `k < count`, of summand exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpProgression {
    pub start: u64,
    pub step: u64,
    pub count: u64,
}

impl ExpProgression {
    pub fn singleton(a: u64) -> Self {
        ExpProgression {
            start: a,
            step: 0,
            count: 1,
        }
    }

    pub fn get(&self, k: u64) -> u64 {
        self.start + k * self.step
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.count).map(move |k| self.get(k))
    }
}

/// Arithmetic progression of left-side exponents; `count` is the lift count `χ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerProgression {
    pub start: BigUint,
    pub step: BigUint,
    pub count: BigUint,
}

impl PowerProgression {
    pub fn get(&self, k: &BigUint) -> BigUint {
        &self.start + &self.step * k
    }

    pub fn to_vec(&self) -> Vec<BigUint> {
        let mut out = Vec::new();
        let mut k = BigUint::zero();
        while k < self.count {
            out.push(self.get(&k));
            k += BigUint::one();
        }
        out
    }
}
