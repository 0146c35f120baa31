use num_bigint::BigUint;
use powsums::modcore::FactoredModulus;
use powsums::planner::Chain;
use powsums::solver::{
    bit_count_table, compute_lift_plan, enumerate_base_solutions, enumerate_base_solutions_with,
    lift_balanced, lift_unbalanced, solve_chain, BaseOptions, Direction, ExactSolution, LiftStep,
    ProblemSpec, SolutionModM,
};

fn fm(n: u64) -> FactoredModulus {
    FactoredModulus::from_u64(n).unwrap()
}

fn spec(n: usize) -> ProblemSpec {
    ProblemSpec::new(Direction::ThreeAsSumOfTwos, n).unwrap()
}

fn relaxed() -> BaseOptions {
    BaseOptions {
        distinct_determinate: false,
        ..BaseOptions::default()
    }
}

fn tuples(sols: &[SolutionModM]) -> Vec<(u64, Vec<u64>)> {
    sols.iter()
        .map(|s| (u64::try_from(&s.x).unwrap(), s.exponents.clone()))
        .collect()
}

#[test]
fn three_term_solutions_mod_5440() {
    let sols = enumerate_base_solutions_with(&spec(3), &fm(5440), &relaxed()).unwrap();
    assert_eq!(
        tuples(&sols),
        vec![(1, vec![0, 0, 0]), (2, vec![0, 2, 2]), (4, vec![0, 4, 6])]
    );
    // only the last has distinct determinate summands
    let strict = enumerate_base_solutions(&spec(3), &fm(5440)).unwrap();
    assert_eq!(tuples(&strict), vec![(4, vec![0, 4, 6])]);
}

#[test]
fn three_term_solutions_mod_10880() {
    let sols = enumerate_base_solutions_with(&spec(3), &fm(10880), &relaxed()).unwrap();
    assert_eq!(
        tuples(&sols),
        vec![
            (1, vec![0, 0, 0]),
            (2, vec![0, 2, 2]),
            (4, vec![0, 4, 6]),
            (20, vec![0, 4, 14])
        ]
    );
}

#[test]
fn extra_solutions_persist_with_41_and_193() {
    let m3 = fm(10880 * 41);
    let sols = enumerate_base_solutions_with(
        &spec(3),
        &m3,
        &BaseOptions {
            range_bound: 512,
            ..relaxed()
        },
    )
    .unwrap();
    assert!(tuples(&sols).contains(&(20, vec![0, 4, 46])));
    assert_eq!(sols.len(), 4);
    let m4 = fm(10880 * 41 * 193);
    let sols = enumerate_base_solutions_with(
        &spec(3),
        &m4,
        &BaseOptions {
            range_bound: 512,
            ..relaxed()
        },
    )
    .unwrap();
    // O_3 stays 16 here while O_2 grows to 480, so the extra moves to the summand
    assert!(
        tuples(&sols).contains(&(20, vec![0, 4, 486])),
        "{:?}",
        tuples(&sols)
    );
    assert_eq!(sols.len(), 4);
}

#[test]
fn lift_plan_into_257() {
    let prev = fm(5440);
    let next = fm(10880 * 257);
    let sol = SolutionModM {
        x: 4u32.into(),
        exponents: vec![0, 4, 6],
        modulus_index: 1,
    };
    let plan = compute_lift_plan(&sol, &prev, &next, &spec(3)).unwrap();
    assert_eq!(
        plan.lift_sets[2].iter().collect::<Vec<_>>(),
        vec![6, 14, 22]
    );
    assert_eq!(plan.lift_sets[0].iter().collect::<Vec<_>>(), vec![0]);
    assert_eq!(plan.lift_sets[1].iter().collect::<Vec<_>>(), vec![4]);
    let xs: Vec<BigUint> = plan.left_lifts.to_vec();
    let expect: Vec<BigUint> = (0..16u32).map(|k| BigUint::from(4 + 16 * k)).collect();
    assert_eq!(xs, expect);
    assert_eq!(plan.chi, BigUint::from(16u32));

    let out = lift_balanced(&sol, &plan, &prev, &next, &spec(3)).unwrap();
    assert_eq!(tuples(&out), vec![(4, vec![0, 4, 6])]);
}

fn example_439() -> SolutionModM {
    SolutionModM {
        x: 57u32.into(),
        exponents: vec![0, 1, 11, 12, 15, 16, 26, 27, 37, 57, 65, 68],
        modulus_index: 1,
    }
}

#[test]
fn discrete_log_lift_rejects_439_example() {
    let prev = fm(439);
    let next = FactoredModulus::from_prime_powers([(439, 1), (9361973132609, 1)]).unwrap();
    let sol = example_439();
    assert!(sol.satisfies(&spec(12), &prev));
    let plan = compute_lift_plan(&sol, &prev, &next, &spec(12)).unwrap();
    assert!(plan.lift_sets.iter().all(|a| a.count == 1));
    assert_eq!(plan.chi, BigUint::from(9361973132608u64 / 146));
    let out = lift_unbalanced(&sol, &plan, &prev, &next, &spec(12)).unwrap();
    assert!(out.is_empty());
}

#[test]
fn meet_in_the_middle_lift_of_439_example() {
    let prev = fm(439);
    let next = fm(439 * 1753);
    let sol = example_439();
    let plan = compute_lift_plan(&sol, &prev, &next, &spec(12)).unwrap();
    assert!(plan.lift_sets.iter().all(|a| a.count == 2 && a.step == 73));
    let xs: Vec<BigUint> = plan.left_lifts.to_vec();
    assert_eq!(
        xs,
        [57u32, 203, 349, 495, 641, 787].map(BigUint::from).to_vec()
    );
    assert_eq!(plan.split_index, 5);
    assert_eq!(
        plan.half_sizes(),
        (BigUint::from(192u32), BigUint::from(128u32))
    );

    let out = lift_balanced(&sol, &plan, &prev, &next, &spec(12)).unwrap();
    assert_eq!(out.len(), 8);
    let mut shown = vec![73, 1, 11, 85, 88, 89, 99, 100, 110, 57, 138, 141];
    shown.sort_unstable();
    assert!(out
        .iter()
        .any(|s| s.x == BigUint::from(203u32) && s.exponents == shown));
    for s in &out {
        assert!(s.satisfies(&spec(12), &next));
    }
}

#[test]
fn pinned_zero_keeps_first_summand() {
    let step = LiftStep::new(spec(12), 2, &fm(439), &fm(439 * 1753))
        .unwrap()
        .pin_zero(true);
    let plan = step.plan(&example_439()).unwrap();
    assert_eq!(plan.lift_sets[0].count, 1);
    let out = step.lift_balanced(&example_439(), &plan).unwrap();
    assert!(out.iter().all(|s| s.exponents[0] == 0));
}

fn chain(factors: &[u64]) -> Chain {
    Chain::new(
        Direction::ThreeAsSumOfTwos,
        factors.iter().map(|&m| fm(m)).collect(),
    )
    .unwrap()
}

#[test]
fn three_terms_through_257() {
    let run = solve_chain(&spec(3), &chain(&[5440, 2 * 257])).unwrap();
    assert_eq!(
        run.solutions,
        vec![ExactSolution {
            x: 4,
            exponents: vec![0, 4, 6],
            verified: true
        }]
    );
    assert!(run.complete);
}

#[test]
fn bit_counts() {
    let t = bit_count_table(25);
    assert_eq!(t.len(), 26);
    assert_eq!((t[0].bits, t[0].ones), (1, 1));
    assert_eq!((t[16].bits, t[16].ones), (26, 11));
    assert_eq!((t[25].bits, t[25].ones), (40, 18));
}
