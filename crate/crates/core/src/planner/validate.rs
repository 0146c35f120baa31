use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::chain::Chain;
use super::extraneous::{construct_extraneous, ExtraneousWitness};
use crate::error::{Error, Hypothesis};
use crate::modcore::FactoredModulus;
use crate::solver::{format_solution, Direction, ExactSolution};

/// One known solution written as `3^y ≡ c + 2^x` by isolating its top summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub c: BigInt,
    pub x: u64,
    pub y: u64,
}

/// A predicted source of extraneous solutions, with the constructed witness.
#[derive(Clone, Debug)]
pub struct Hazard {
    pub solution: ExactSolution,
    pub decomposition: Decomposition,
    pub witness: ExtraneousWitness,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub direction: Direction,
    pub modulus: FactoredModulus,
    pub hazards: Vec<Hazard>,
    /// Solutions whose decomposition is outside the construction's hypotheses, and which one failed.
    pub not_applicable: Vec<(ExactSolution, Hypothesis)>,
    /// Solutions for which the final modulus meets the order condition.
    pub clear: Vec<ExactSolution>,
    /// Solutions the check could not be carried out for.
    pub failures: Vec<(ExactSolution, String)>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.hazards.is_empty()
    }
}

/// `3^y ≡ c + 2^x` with the largest summand split off; the mirror equation
/// `2^x = c' + 3^y` is rewritten as `3^y = -c' + 2^x`.
pub fn top_decomposition(direction: Direction, sol: &ExactSolution) -> Option<Decomposition> {
    let (&top, rest) = sol.exponents.split_last()?;
    let s = BigUint::from(direction.summand_base());
    let rest_sum: BigUint = rest
        .iter()
        .fold(BigUint::zero(), |acc, &a| acc + s.pow(a as u32));
    Some(match direction {
        Direction::ThreeAsSumOfTwos => Decomposition {
            c: BigInt::from(rest_sum),
            x: top,
            y: sol.x,
        },
        Direction::TwoAsSumOfThrees => Decomposition {
            c: -BigInt::from(rest_sum),
            x: sol.x,
            y: top,
        },
    })
}

/// Checks each known solution against the order obstruction at the chain's final modulus.
pub fn validate_chain(chain: &Chain, known: &[ExactSolution]) -> ValidationReport {
    let m = chain.final_modulus();
    let mut report = ValidationReport {
        direction: chain.direction(),
        modulus: m.clone(),
        hazards: Vec::new(),
        not_applicable: Vec::new(),
        clear: Vec::new(),
        failures: Vec::new(),
    };
    for sol in known {
        let Some(dec) = top_decomposition(chain.direction(), sol) else {
            continue;
        };
        match construct_extraneous(m, &dec.c, dec.x, dec.y) {
            Ok(witness) => report.hazards.push(Hazard {
                solution: sol.clone(),
                decomposition: dec,
                witness,
            }),
            Err(Error::PreconditionViolated(
                Hypothesis::TwoPowerDividesOrderOfThree | Hypothesis::ThreePowerDividesOrderOfTwo,
            )) => report.clear.push(sol.clone()),
            Err(Error::PreconditionViolated(h)) => report.not_applicable.push((sol.clone(), h)),
            Err(e) => report.failures.push((sol.clone(), e.to_string())),
        }
    }
    report
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "modulus: {}", self.modulus)?;
        writeln!(f, "hazards: {}", self.hazards.len())?;
        for h in &self.hazards {
            let d = &h.decomposition;
            writeln!(
                f,
                "  hazard: {} (c = {}, x = {}, y = {}); witness 3^{} ≡ c + 2^{}",
                format_solution(self.direction, &h.solution),
                d.c,
                d.x,
                d.y,
                h.witness.y_prime,
                h.witness.x_prime
            )?;
        }
        for s in &self.clear {
            writeln!(f, "  clear: {}", format_solution(self.direction, s))?;
        }
        for (s, err) in &self.failures {
            writeln!(
                f,
                "  not checked: {} ({err})",
                format_solution(self.direction, s)
            )?;
        }
        for (s, why) in &self.not_applicable {
            writeln!(
                f,
                "  not applicable: {} ({why})",
                format_solution(self.direction, s)
            )?;
        }
        writeln!(
            f,
            "note: only the decomposition isolating the largest summand is checked; \
             multi-term decompositions are unchecked."
        )?;
        write!(
            f,
            "note: these are necessary conditions only; a clean report does not \
             certify that the chain terminates."
        )
    }
}
