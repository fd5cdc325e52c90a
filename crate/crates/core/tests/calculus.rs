mod common;

use common::{random_space, random_unit_combination, term_masses};
use lipfree::calculus::{
    cycle_inequality, f_mu, jrz_kernel, lambda_max, mu_set, pair_distance, pair_sum_norm,
    rerepresent, support_function, MuScope,
};
use lipfree::classify::Slice;
use lipfree::free_space::{
    combine, lipschitz_constant, molecule, norm_value, pairing, MoleculeTerm,
};
use lipfree::rational::{one, rat, two, zero, Rational};
use lipfree::spaces::{at, example46_balanced, example46_corners, gen_example32, gen_example46};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn vertical_pair_against_xy() {
    for depth in 1..=3 {
        let s = gen_example32(depth).unwrap();
        let (x, y) = (s.index_of("x").unwrap(), s.index_of("y").unwrap());
        let l = at(&s, zero(), rat(1, 2)).unwrap();
        for (u, v) in [(l, x), (x, l)] {
            assert_eq!(pair_distance(&s, x, y, u, v).unwrap(), two());
            let diff = molecule(&s, x, y)
                .unwrap()
                .minus(&molecule(&s, u, v).unwrap());
            assert_eq!(norm_value(&s, &diff).unwrap(), two());
        }
    }
}

#[test]
fn example46_cycle_and_rerepresentation() {
    let s = gen_example46(2).unwrap();
    let [x1, y1, x2, y2] = example46_corners(&s).unwrap();
    let terms = [
        MoleculeTerm::new(x1, y1, rat(1, 2)),
        MoleculeTerm::new(x2, y2, rat(1, 2)),
    ];
    let rep = cycle_inequality(&s, &terms, &[0, 1, 0]).unwrap();
    assert_eq!(rep.slack, zero());
    let out = rerepresent(&s, &terms, &[0, 1, 0]).unwrap();
    assert_eq!(
        out,
        vec![
            MoleculeTerm::new(x1, y2, rat(1, 2)),
            MoleculeTerm::new(x2, y1, rat(1, 2))
        ]
    );
}

#[test]
fn example46_mu_set_members_and_exclusion() {
    let s = gen_example46(2).unwrap();
    let [x1, y1, x2, y2] = example46_corners(&s).unwrap();
    let mu = example46_balanced(&s).unwrap();
    let set = mu_set(&s, &mu, MuScope::Presentation).unwrap();
    for (u, v) in [(x1, y1), (x2, y2), (x1, y2), (x2, y1)] {
        assert!(set.member(u, v).unwrap().lambda >= rat(1, 2));
    }
    // f = 1 on the x corners and 0 on the y corners norms μ but flattens m_{x1x2}
    let f = lipfree::free_space::mcshane_extend(
        &s,
        &[(x1, one()), (x2, one()), (y1, zero()), (y2, zero())],
        &one(),
    )
    .unwrap();
    assert_eq!(lipschitz_constant(&s, &f), one());
    assert_eq!(pairing(&f, &mu), one());
    assert_eq!(f.on_molecule(&s, x1, x2), zero());
    assert!(!set.contains(x1, x2));
}

#[test]
fn support_function_on_example46() {
    let s = gen_example46(2).unwrap();
    let [x1, y1, x2, y2] = example46_corners(&s).unwrap();
    let mu = example46_balanced(&s).unwrap();
    let f = support_function(&s, &mu).unwrap();
    for (u, v) in [(x1, y1), (x2, y2), (x1, y2), (x2, y1)] {
        assert_eq!(f.on_molecule(&s, u, v), one());
    }
}

#[test]
fn support_function_breaks_non_member_ties() {
    // on a path a - b - c - d, ½ m_ab + ½ m_cd has a single cross pair
    // (c, b) inside M(μ) and (a, d) outside it
    let d = |r: [i64; 4]| {
        r.iter()
            .map(|&v| lipfree::rational::int(v))
            .collect::<Vec<_>>()
    };
    let s = lipfree::FiniteMetricSpace::new(
        ["a", "b", "c", "d"]
            .iter()
            .map(|id| lipfree::Point::new(*id))
            .collect(),
        vec![
            d([0, 1, 2, 3]),
            d([1, 0, 1, 2]),
            d([2, 1, 0, 1]),
            d([3, 2, 1, 0]),
        ],
        "a",
    )
    .unwrap();
    let mu = combine(
        &s,
        &[
            MoleculeTerm::new(0, 1, rat(1, 2)),
            MoleculeTerm::new(2, 3, rat(1, 2)),
        ],
    )
    .unwrap();
    assert_eq!(norm_value(&s, &mu).unwrap(), one());
    let set = mu_set(&s, &mu, MuScope::AllPairs).unwrap();
    let f = support_function(&s, &mu).unwrap();
    for (i, j) in [(0usize, 1usize), (1, 0)] {
        let (x, y) = ([0, 2][i], [1, 3][j]);
        if x == y {
            continue;
        }
        assert_eq!(
            f.on_molecule(&s, x, y).is_one(),
            set.contains(x, y),
            "pair {x}->{y}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pair_norm_equals_flow_norm(seed in any::<u64>()) {
        let s = random_space(seed, 3, 6);
        let pairs = s.ordered_pairs();
        for &(x, y) in &pairs {
            for &(u, v) in &pairs {
                let report = pair_sum_norm(&s, x, y, u, v).unwrap();
                let masses = term_masses(&s, &[(x, y, one()), (u, v, one())]);
                let sum = lipfree::free_space::FreeElement::from_masses(&s, masses).unwrap();
                prop_assert_eq!(&report.value, &norm_value(&s, &sum).unwrap());
                prop_assert_eq!(report.attained_by_cap, report.epsilon_star.is_negative());
            }
        }
    }

    #[test]
    fn pair_norm_threshold_equivalence(seed in any::<u64>(), e in 0i64..=8) {
        let s = random_space(seed, 3, 6);
        let eps = rat(e, 4);
        let pairs = s.ordered_pairs();
        for &(x, y) in &pairs {
            for &(u, v) in &pairs {
                let value = pair_sum_norm(&s, x, y, u, v).unwrap().value;
                let scale = std::cmp::max(s.d(x, y), s.d(u, v)).clone();
                let lhs = s.d(x, v) + s.d(u, y);
                let rhs = s.d(x, y) + s.d(u, v) - &eps * scale;
                prop_assert_eq!(value >= two() - &eps, lhs >= rhs);
            }
        }
    }

    #[test]
    fn unit_combinations_obey_the_cycle_inequality(seed in any::<u64>()) {
        let s = random_space(seed, 3, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some((mu, _)) = random_unit_combination(&s, &mut rng, 4) else { return Ok(()) };
        prop_assert_eq!(norm_value(&s, &mu).unwrap(), one());
        let terms = mu.presentation().unwrap().to_vec();
        let n = terms.len();
        for _ in 0..8 {
            let len = rng.random_range(1..=n);
            let mut cycle: Vec<usize> = Vec::new();
            while cycle.len() < len {
                let k = rng.random_range(0..n);
                if !cycle.contains(&k) {
                    cycle.push(k);
                }
            }
            cycle.push(cycle[0]);
            let rep = cycle_inequality(&s, &terms, &cycle).unwrap();
            prop_assert!(!rep.slack.is_negative());
            if rep.slack.is_zero() {
                let out = rerepresent(&s, &terms, &cycle).unwrap();
                let rebuilt = combine(&s, &out).unwrap();
                prop_assert_eq!(rebuilt.masses(), mu.masses());
                let total: Rational = out.iter().map(|t| &t.weight).sum();
                prop_assert_eq!(total, one());
                // every cross molecule of a tight cycle is in M(μ)
                let set = mu_set(&s, &mu, MuScope::Presentation).unwrap();
                for w in cycle.windows(2) {
                    let (x, y) = (terms[w[0]].x, terms[w[1]].y);
                    if x != y {
                        prop_assert!(set.contains(x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn mu_set_witnesses_and_orientation(seed in any::<u64>()) {
        let s = random_space(seed, 3, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some((mu, g)) = random_unit_combination(&s, &mut rng, 3) else { return Ok(()) };
        let set = mu_set(&s, &mu, MuScope::AllPairs).unwrap();
        for m in &set.members {
            prop_assert!(m.lambda.is_positive() && m.lambda <= one());
            prop_assert_eq!(norm_value(&s, &m.residual).unwrap(), one());
            let rebuilt = molecule(&s, m.u, m.v).unwrap().scaled(&m.lambda)
                .plus(&m.residual.scaled(&(one() - &m.lambda)));
            prop_assert_eq!(rebuilt.masses(), mu.masses());
            prop_assert_eq!(g.on_molecule(&s, m.u, m.v), one());
            // nothing beyond λ_max works
            if m.lambda < one() {
                let more = (&m.lambda + one()) / two();
                let rest = mu.minus(&molecule(&s, m.u, m.v).unwrap().scaled(&more));
                prop_assert!(norm_value(&s, &rest).unwrap() > one() - more);
            }
            prop_assert!(!set.contains(m.v, m.u));
        }
        for &(u, v) in &set.candidates {
            if !set.contains(u, v) {
                prop_assert!(lambda_max(&s, &mu, u, v).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn kernel_identity_holds(seed in any::<u64>()) {
        let s = random_space(seed, 3, 8);
        let pairs = s.ordered_pairs();
        for &(x, y) in &pairs {
            for p in 0..s.len() {
                let d = s.d(x, y);
                let lhs = d / two() - jrz_kernel(&s, x, y, p).unwrap();
                let rhs = d * s.d(x, p) / (s.d(x, p) + s.d(y, p));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn support_and_f_mu_contracts(seed in any::<u64>()) {
        let s = random_space(seed, 3, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some((mu, _)) = random_unit_combination(&s, &mut rng, 4) else { return Ok(()) };
        let terms = mu.presentation().unwrap().to_vec();
        let set = mu_set(&s, &mu, MuScope::Presentation).unwrap();
        let f = support_function(&s, &mu).unwrap();
        prop_assert!(lipschitz_constant(&s, &f) <= one());
        prop_assert_eq!(pairing(&f, &mu), one());
        for a in &terms {
            for b in &terms {
                if a.x != b.y {
                    prop_assert_eq!(f.on_molecule(&s, a.x, b.y).is_one(), set.contains(a.x, b.y));
                }
            }
        }

        let fm = f_mu(&s, &mu).unwrap();
        prop_assert_eq!(pairing(&fm.f, &mu), one());
        prop_assert_eq!(lipschitz_constant(&s, &fm.f), one());
        let alpha = &fm.delta / two();
        let slice = Slice::new(&s, fm.f.clone(), alpha.clone()).unwrap();
        for (u, v) in slice.molecules(&s) {
            let found = terms.iter().any(|a| terms.iter().any(|b| {
                a.x != b.y
                    && set.contains(a.x, b.y)
                    && (one() - &alpha) * std::cmp::max(s.d(a.x, v) + s.d(b.y, v), s.d(a.x, u) + s.d(b.y, u))
                        < *s.d(a.x, b.y)
            }));
            prop_assert!(found, "no localising pair for ({}, {})", s.id(u), s.id(v));
        }
    }
}
