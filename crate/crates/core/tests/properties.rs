mod oracle;
mod support;

use num_bigint::BigUint;
use powsums::dlog::{log2_mod_3v, log3_mod_2u, PrimeDlog};
use powsums::modcore::{cycle_shape, multiplicative_order, FactoredModulus};
use powsums::planner::Chain;
use powsums::solver::{
    balanced_split, parse_checkpoint, parse_solution_line, solve_chain, write_checkpoint,
    Checkpoint, Direction, ExactSolution, ExpProgression, LiftStep, ProblemSpec, SolutionModM,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fm(m: u64) -> FactoredModulus {
    FactoredModulus::from_u64(m).unwrap()
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn prime_at_least(n: u64) -> u64 {
    (n.max(2)..).find(|&q| oracle::is_prime(q)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn order_is_minimal(b in 2u64..1_000_000, m in 2u64..1_000_000_000_000) {
        prop_assume!(oracle::gcd(b, m) == 1);
        let ord = u64::try_from(multiplicative_order(b, &fm(m)).unwrap()).unwrap();
        prop_assert_eq!(oracle::pow_mod(b, ord, m), 1);
        for (q, _) in oracle::trial_factor(ord) {
            prop_assert_ne!(oracle::pow_mod(b, ord / q, m), 1);
        }
    }

    #[test]
    fn order_matches_trial_multiplication(b in 2u64..1000, m in 2u64..100_000) {
        prop_assume!(oracle::gcd(b, m) == 1);
        prop_assert_eq!(multiplicative_order(b, &fm(m)).unwrap(), big(oracle::order(b, m).unwrap()));
    }

    #[test]
    fn cycle_shape_matches_iteration(m in 1u64..20_000, three in any::<bool>()) {
        let b = if three { 3 } else { 2 };
        let shape = cycle_shape(b, &fm(m)).unwrap();
        let (t, l) = oracle::tail_loop(b, m);
        prop_assert_eq!(u64::from(shape.tail_len), t);
        prop_assert_eq!(shape.loop_len, big(l));
    }

    #[test]
    fn prime_dlog_round_trip(start in 5u64..1_000_000_000, s in 1u64..u64::MAX, k in 0u64..1_000_000) {
        let p = prime_at_least(start);
        let ctx = PrimeDlog::new(p).unwrap();
        let s = 1 + s % (p - 1);
        let z = ctx.log(s).unwrap();
        prop_assert_eq!(oracle::pow_mod(ctx.generator(), z, p), s);
        // membership of a known power of another base
        let b = 2 + s % (p - 3);
        let t = oracle::pow_mod(b, k, p);
        let class = ctx.membership(b, t).unwrap().unwrap();
        prop_assert_eq!(class.class_modulus, ctx.order_of(b).unwrap());
        prop_assert_eq!(k % class.class_modulus, class.residue_class);
    }

    #[test]
    fn log3_mod_2u_round_trip(u in 1u32..=64, k in any::<u64>()) {
        let m = if u == 64 { u64::MAX } else { (1u64 << u) - 1 };
        let z = (0..k % 1024).fold(1u64, |acc, _| acc.wrapping_mul(3)) & m;
        let r = log3_mod_2u(z, u).unwrap().unwrap();
        let back = (0..r.residue_class).fold(1u64, |acc, _| acc.wrapping_mul(3)) & m;
        prop_assert_eq!(back, z);
        prop_assert_eq!((k % 1024) % r.class_modulus, r.residue_class);
    }

    #[test]
    fn log3_mod_2u_rejects_non_powers(u in 3u32..=64, w in any::<u64>()) {
        let m = if u == 64 { u64::MAX } else { (1u64 << u) - 1 };
        let z = ((w << 3) | 5 | (w & 2)) & m; // 5 or 7 mod 8
        prop_assert!(log3_mod_2u(z, u).unwrap().is_none());
    }

    #[test]
    fn log2_mod_3v_round_trip(v in 1u32..=40, k in 0u64..1_000_000_000_000) {
        let m = 3u64.pow(v);
        let z = oracle::pow_mod(2, k, m);
        let r = log2_mod_3v(z, v).unwrap();
        prop_assert_eq!(oracle::pow_mod(2, r.residue_class, m), z);
        prop_assert_eq!(r.class_modulus, 2 * 3u64.pow(v - 1));
        prop_assert_eq!(k % r.class_modulus, r.residue_class);
    }

    #[test]
    fn balanced_split_minimises_imbalance(
        chi in 1u64..10_000,
        counts in proptest::collection::vec(1u64..50, 1..8),
    ) {
        let sets: Vec<ExpProgression> =
            counts.iter().map(|&c| ExpProgression { start: 0, step: 1, count: c }).collect();
        let k = balanced_split(&big(chi), &sets);
        let ratio = |k: usize| {
            let l = chi as f64 * counts[..k].iter().product::<u64>() as f64;
            let r = counts[k..].iter().product::<u64>() as f64;
            l.max(r) / l.min(r)
        };
        let best = (0..=counts.len()).map(ratio).fold(f64::INFINITY, f64::min);
        prop_assert!((ratio(k) - best).abs() <= 1e-9 * best);
        prop_assert!((0..k).all(|j| ratio(j) > best * (1.0 + 1e-9)));
    }

    #[test]
    fn solution_line_round_trip(x in any::<u64>(), exps in proptest::collection::vec(any::<u64>(), 1..10)) {
        let line = powsums::solver::format_solution_line(Direction::TwoAsSumOfThrees, &x, &exps);
        prop_assert!(!line.ends_with(' '));
        let (d, bx, e) = parse_solution_line(&line, 1).unwrap();
        prop_assert_eq!(d, Direction::TwoAsSumOfThrees);
        prop_assert_eq!(bx, big(x));
        prop_assert_eq!(e, exps);
    }
}

#[test]
fn lift_sets_match_reduction_preimages() {
    // X and A_j are exactly the canonical exponents mod M_i reducing to x and a_j mod M_{i-1}
    let steps = [
        (5440u64, 10880 * 257),
        (439, 439 * 1753),
        (7, 7 * 16),
        (9 * 5, 9 * 5 * 27),
        (2, 2 * 3 * 7),
    ];
    for (d, &(prev, next)) in [Direction::ThreeAsSumOfTwos, Direction::TwoAsSumOfThrees]
        .iter()
        .flat_map(|d| steps.iter().map(move |s| (*d, s)))
    {
        let spec = ProblemSpec::new(d, 3).unwrap();
        let step = LiftStep::new(spec, 2, &fm(prev), &fm(next)).unwrap();
        let (tp0, lp0) = oracle::tail_loop(d.power_base(), prev);
        let (ts0, ls0) = oracle::tail_loop(d.summand_base(), prev);
        let (tp1, lp1) = oracle::tail_loop(d.power_base(), next);
        let (ts1, ls1) = oracle::tail_loop(d.summand_base(), next);
        let red = |e: u64, t: u64, l: u64| if e < t { e } else { t + (e - t) % l };
        for x in 0..(tp0 + lp0).min(60) {
            for a in 0..(ts0 + ls0).min(20) {
                let sol = SolutionModM {
                    x: big(x),
                    exponents: vec![a, a, a],
                    modulus_index: 1,
                };
                let plan = step.plan(&sol).unwrap();
                let xs: Vec<u64> = (0..tp1 + lp1).filter(|&y| red(y, tp0, lp0) == x).collect();
                let got: Vec<u64> = plan
                    .left_lifts
                    .to_vec()
                    .iter()
                    .map(|v| u64::try_from(v).unwrap())
                    .collect();
                assert_eq!(got, xs, "{d} X for x={x}, {prev} -> {next}");
                assert_eq!(plan.chi, big(xs.len() as u64));
                let as_: Vec<u64> = (0..ts1 + ls1).filter(|&y| red(y, ts0, ls0) == a).collect();
                for set in &plan.lift_sets {
                    assert_eq!(
                        set.iter().collect::<Vec<_>>(),
                        as_,
                        "{d} A for a={a}, {prev} -> {next}"
                    );
                }
            }
        }
    }
}

#[test]
fn lifting_is_complete_on_random_tiny_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut total = 0;
    for _ in 0..25 {
        let c = support::random_tiny_chain(&mut rng, 100_000, 4);
        total += support::check_chain_completeness(&c).unwrap();
    }
    eprintln!("compared {total} modular solutions");
    assert!(total > 100);
}

#[test]
fn balanced_and_unbalanced_lifts_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let lifted: usize = support::agreement_cases(&mut rng, 15)
        .iter()
        .map(|c| support::check_agreement(c).unwrap())
        .sum();
    eprintln!("{lifted} lifted solutions");
    assert!(lifted > 0);
}

#[test]
fn odd_mirror_sums_short_circuit() {
    let chain = Chain::new(Direction::TwoAsSumOfThrees, vec![fm(5), fm(7)]).unwrap();
    for n in [3, 5, 7, 21] {
        let run = solve_chain(
            &ProblemSpec::new(Direction::TwoAsSumOfThrees, n).unwrap(),
            &chain,
        )
        .unwrap();
        assert!(run.solutions.is_empty());
        assert!(run.report.parity_shortcut);
        assert!(run.complete);
    }
}

#[test]
fn checkpoint_round_trip() {
    let spec = ProblemSpec::new(Direction::ThreeAsSumOfTwos, 3).unwrap();
    let cp = Checkpoint {
        index: 4,
        found: vec![ExactSolution::checked(4, vec![0, 4, 6], spec.direction)],
        solutions: vec![
            SolutionModM {
                x: big(20),
                exponents: vec![0, 4, 14],
                modulus_index: 4,
            },
            SolutionModM {
                x: BigUint::from(u128::MAX),
                exponents: vec![0, 1, 1],
                modulus_index: 4,
            },
        ],
    };
    let text = write_checkpoint(spec.direction, &cp);
    assert_eq!(parse_checkpoint(&text, &spec).unwrap(), cp);
    // wrong n is rejected with the line
    let other = ProblemSpec::new(Direction::ThreeAsSumOfTwos, 4).unwrap();
    assert!(parse_checkpoint(&text, &other).is_err());
}

#[test]
fn exact_solutions_check_themselves() {
    assert!(ExactSolution::checked(8, vec![0, 1, 2, 5], Direction::TwoAsSumOfThrees).verified);
    assert!(ExactSolution::checked(4, vec![0, 4, 6], Direction::ThreeAsSumOfTwos).verified);
    assert!(!ExactSolution::checked(4, vec![0, 6, 4], Direction::ThreeAsSumOfTwos).verified);
    assert!(!ExactSolution::checked(5, vec![0, 4, 6], Direction::ThreeAsSumOfTwos).verified);
}
