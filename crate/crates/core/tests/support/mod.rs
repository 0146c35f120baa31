//! Library-against-oracle checks shared by the property and acceptance suites.
#![allow(dead_code)]

use num_bigint::BigUint;
use powsums::modcore::FactoredModulus;
use powsums::solver::{
    enumerate_base_solutions_with, BaseOptions, Direction, LiftStep, ProblemSpec, SolutionModM,
};
use rand::seq::SliceRandom;
use rand::Rng;

use super::oracle;

/// Small factors whose products keep the power rings tiny.
pub const FACTOR_POOL: [u64; 18] = [
    2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 25, 27, 31, 37, 41, 73,
];

fn fm(m: u64) -> FactoredModulus {
    FactoredModulus::from_u64(m).unwrap()
}

fn tuples(sols: &[SolutionModM]) -> Vec<(u64, Vec<u64>)> {
    let mut v: Vec<_> = sols
        .iter()
        .map(|s| (u64::try_from(&s.x).unwrap(), s.exponents.clone()))
        .collect();
    v.sort();
    v
}

fn canonical(e: u64, tail: u64, lp: u64) -> u64 {
    if e < tail {
        e
    } else {
        tail + (e - tail) % lp
    }
}

/// Brute-force work for one modulus is about `range^(n-1) * powers`; keep it small.
pub fn tiny_enough(d: Direction, n: usize, m: u64) -> bool {
    let (ts, ls) = oracle::tail_loop(d.summand_base(), m);
    let (tp, lp) = oracle::tail_loop(d.power_base(), m);
    let range = (ts + ls) as f64;
    range <= 64.0 && (tp + lp) <= 4096 && range.powi(n as i32 - 1) * ((tp + lp) as f64) < 2e7
}

#[derive(Clone, Debug)]
pub struct TinyChain {
    pub direction: Direction,
    pub n: usize,
    pub factors: Vec<u64>,
}

pub fn random_tiny_chain<R: Rng>(rng: &mut R, m_max: u64, n_max: usize) -> TinyChain {
    loop {
        let direction = if rng.gen_bool(0.5) {
            Direction::ThreeAsSumOfTwos
        } else {
            Direction::TwoAsSumOfThrees
        };
        let n = rng.gen_range(1..=n_max);
        let len = rng.gen_range(2..=4);
        let mut factors = Vec::new();
        let mut m = 1u64;
        let mut ok = true;
        for _ in 0..len {
            let f = *FACTOR_POOL.choose(rng).unwrap();
            m *= f;
            if m > m_max || !tiny_enough(direction, n, m) {
                ok = false;
                break;
            }
            factors.push(f);
        }
        if ok {
            return TinyChain {
                direction,
                n,
                factors,
            };
        }
    }
}

/// Lifts every brute-force solution through each step and compares the union with
/// brute force at the next modulus. Returns the number of solutions compared.
pub fn check_chain_completeness(c: &TinyChain) -> Result<usize, String> {
    let spec = ProblemSpec::new(c.direction, c.n).unwrap();
    let (p, s) = (c.direction.power_base(), c.direction.summand_base());
    let mut ms = Vec::new();
    let mut m = 1;
    for &f in &c.factors {
        m *= f;
        ms.push(m);
    }
    let opts = BaseOptions {
        range_bound: 1 << 12,
        ..BaseOptions::default()
    };
    let base =
        enumerate_base_solutions_with(&spec, &fm(ms[0]), &opts).map_err(|e| e.to_string())?;
    let mut expect = oracle::solutions_mod(p, s, c.n, ms[0]);
    if tuples(&base) != expect {
        return Err(format!(
            "base mod {}: {:?} vs {:?}",
            ms[0],
            tuples(&base),
            expect
        ));
    }
    let mut checked = expect.len();
    for i in 1..ms.len() {
        let (prev, next) = (ms[i - 1], ms[i]);
        let step = LiftStep::new(spec, i + 1, &fm(prev), &fm(next))
            .map_err(|e| e.to_string())?
            .pin_zero(true);
        let (tp, lp) = oracle::tail_loop(p, prev);
        let (ts, ls) = oracle::tail_loop(s, prev);
        let mut got = Vec::new();
        for (x, exps) in &expect {
            let sol = SolutionModM {
                x: BigUint::from(*x),
                exponents: exps.clone(),
                modulus_index: i,
            };
            let (_, out) = step.lift(&sol).map_err(|e| e.to_string())?;
            for o in &out {
                // each lift reduces back to the solution it came from
                let ox = u64::try_from(&o.x).unwrap();
                let mut red: Vec<u64> = o.exponents.iter().map(|&a| canonical(a, ts, ls)).collect();
                red.sort_unstable();
                if canonical(ox, tp, lp) != *x || red != *exps {
                    return Err(format!("lift {o:?} does not reduce to ({x}, {exps:?})"));
                }
            }
            got.extend(tuples(&out));
        }
        got.sort();
        expect = oracle::solutions_mod(p, s, c.n, next);
        if got != expect {
            return Err(format!(
                "{c:?}: lifting {prev} -> {next} gave {got:?}, brute force {expect:?}"
            ));
        }
        checked += expect.len();
    }
    Ok(checked)
}

#[derive(Clone, Debug)]
pub struct AgreementCase {
    pub spec: ProblemSpec,
    pub prev: u64,
    pub next: u64,
    pub solution: SolutionModM,
}

/// Random `(solution mod M, M -> M p)` instances where both lifting methods apply.
pub fn agreement_cases<R: Rng>(rng: &mut R, count: usize) -> Vec<AgreementCase> {
    let primes: Vec<u64> = (5..3000).filter(|&q| oracle::is_prime(q)).collect();
    let mut out = Vec::new();
    while out.len() < count {
        let chain = random_tiny_chain(rng, 20_000, 4);
        let prev: u64 = chain.factors.iter().product();
        let q = *primes.choose(rng).unwrap();
        if prev.is_multiple_of(q) {
            continue;
        }
        let spec = ProblemSpec::new(chain.direction, chain.n).unwrap();
        let Ok(step) = LiftStep::new(spec, 2, &fm(prev), &fm(prev * q)) else {
            continue;
        };
        let step = step.pin_zero(true);
        let sols = oracle::solutions_mod(spec.power_base(), spec.summand_base(), spec.n, prev);
        for (x, exps) in sols {
            let sol = SolutionModM {
                x: BigUint::from(x),
                exponents: exps,
                modulus_index: 1,
            };
            let plan = step.plan(&sol).unwrap();
            if plan.chi > plan.tuple_count() && out.len() < count {
                out.push(AgreementCase {
                    spec,
                    prev,
                    next: prev * q,
                    solution: sol,
                });
            }
        }
    }
    out
}

/// Runs both lifting methods on one case and compares the sorted outputs.
pub fn check_agreement(c: &AgreementCase) -> Result<usize, String> {
    let step = LiftStep::new(c.spec, 2, &fm(c.prev), &fm(c.next))
        .map_err(|e| e.to_string())?
        .pin_zero(true);
    let plan = step.plan(&c.solution).map_err(|e| e.to_string())?;
    let mut a = step
        .lift_balanced(&c.solution, &plan)
        .map_err(|e| e.to_string())?;
    let mut b = step
        .lift_unbalanced(&c.solution, &plan)
        .map_err(|e| e.to_string())?;
    a.sort();
    b.sort();
    if a != b {
        return Err(format!("{c:?}: balanced {a:?} vs unbalanced {b:?}"));
    }
    Ok(a.len())
}
