mod common;

use common::{
    brute_denting, by_index, example32_predicted_denting, random_cone_function, random_space,
    random_unit_combination,
};
use lipfree::classify::{
    condition_iii_check, daugavet_witness_search, delta_scan, denting_descent, denting_molecules,
    denting_set, is_daugavet, is_denting, make_slices, DaugavetStatus, Slice, SliceConfig,
    WitnessOutcome,
};
use lipfree::free_space::{lipschitz_constant, molecule, norm, norm_value, FreeElement};
use lipfree::metric::{FiniteMetricSpace, SegmentQuery};
use lipfree::rational::{int, one, rat, two, Rational};
use lipfree::spaces::{
    at, example46_balanced, example46_balanced_function, example46_corners,
    example46_half_slope_function, gen_example32, gen_example46,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Daugavet verdict and the segment-radius condition must agree, and any reported
/// offender must be confirmed by a fresh flow solve.
fn triangle_holds(space: &FiniteMetricSpace, el: &FreeElement) -> Result<(), TestCaseError> {
    let verdict = is_daugavet(space, el, &[]).unwrap();
    let report = condition_iii_check(space, el).unwrap();
    prop_assert_eq!(verdict.is_daugavet, report.violations.is_empty());
    match &verdict.offending {
        None => prop_assert!(verdict.is_daugavet),
        Some(off) => {
            let diff = el.minus(&molecule(space, off.u, off.v).unwrap());
            let d = norm_value(space, &diff).unwrap();
            prop_assert_eq!(&d, &off.distance);
            prop_assert!(d < two());
            prop_assert!(report
                .violations
                .iter()
                .any(|r| (r.u, r.v) == (off.u, off.v)));
        }
    }
    Ok(())
}

#[test]
fn example32_denting_classification() {
    for depth in 1..=3 {
        let s = gen_example32(depth).unwrap();
        let predicted = example32_predicted_denting(&s);
        assert_eq!(by_index(&denting_set(&s)), predicted, "depth {depth}");
        assert_eq!(brute_denting(&s), predicted, "depth {depth}");
    }
    let s = gen_example32(2).unwrap();
    let q = |a, b| at(&s, a, b).unwrap();
    assert!(is_denting(&s, q(rat(0, 1), rat(1, 2)), q(rat(1, 2), rat(1, 2))).unwrap());
    assert!(!is_denting(&s, q(rat(1, 4), rat(1, 4)), q(rat(3, 4), rat(1, 4))).unwrap());
}

#[test]
fn example32_xy_is_daugavet_off_itself() {
    for depth in 1..=3 {
        let s = gen_example32(depth).unwrap();
        let (x, y) = (s.index_of("x").unwrap(), s.index_of("y").unwrap());
        let m = molecule(&s, x, y).unwrap();
        let verdict = is_daugavet(&s, &m, &[(x, y), (y, x)]).unwrap();
        assert_eq!(verdict.status, DaugavetStatus::FailsOnlyByExcluded);
        assert_eq!(verdict.min_unexcluded(), Some(&two()));
        for row in verdict.distances.iter().filter(|r| !r.excluded) {
            let diff = m.minus(&molecule(&s, row.u, row.v).unwrap());
            assert_eq!(norm_value(&s, &diff).unwrap(), two());
        }
    }
}

#[test]
fn example46_scan_profiles() {
    for k in 2..=3 {
        let s = gen_example46(k).unwrap();
        let [x1, y1, ..] = example46_corners(&s).unwrap();
        let mu = example46_balanced(&s).unwrap();
        let slice = Slice::new(&s, example46_balanced_function(&s).unwrap(), rat(1, 10)).unwrap();
        let rows = delta_scan(&s, &mu, &[slice]).unwrap();
        assert_eq!(rows[0].min_length, lipfree::rational::pow(&rat(1, 2), k));

        let m = molecule(&s, x1, y1).unwrap();
        let half = Slice::new(&s, example46_half_slope_function(&s).unwrap(), rat(1, 4)).unwrap();
        assert_eq!(delta_scan(&s, &m, &[half]).unwrap()[0].min_length, one());
    }
}

#[test]
fn wide_slice_reaches_the_resolution() {
    let s = gen_example46(2).unwrap();
    let mu = example46_balanced(&s).unwrap();
    let slice = Slice::new(&s, example46_balanced_function(&s).unwrap(), rat(99, 100)).unwrap();
    let rows = delta_scan(&s, &mu, &[slice]).unwrap();
    assert_eq!(rows[0].min_length, s.min_positive_distance().unwrap());
}

#[test]
fn witness_on_example32_depth5() {
    let s = gen_example32(5).unwrap();
    let (x, y) = (s.index_of("x").unwrap(), s.index_of("y").unwrap());
    let m = molecule(&s, x, y).unwrap();
    let slice = Slice::new(&s, norm(&s, &m).unwrap().potential, rat(1, 4)).unwrap();
    let report = daugavet_witness_search(&s, &m, &slice, &rat(1, 4)).unwrap();
    let hit = report.found().expect("witness");
    assert!(slice.contains_molecule(&s, hit.u, hit.v));
    assert!(hit.distance >= rat(7, 4));
}

#[test]
fn tiny_eps_hits_the_resolution_floor() {
    let s = gen_example46(2).unwrap();
    let [x1, _, _, y2] = example46_corners(&s).unwrap();
    let m = molecule(&s, x1, y2).unwrap();
    let slice = Slice::new(&s, norm(&s, &m).unwrap().potential, rat(1, 2)).unwrap();
    let report = daugavet_witness_search(&s, &m, &slice, &rat(1, 1000)).unwrap();
    match report.outcome {
        WitnessOutcome::Terminal { last, .. } => assert!(last.length >= report.gamma),
        WitnessOutcome::Found(step) => assert!(step.distance >= two() - rat(1, 1000)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn denting_matches_brute_force(seed in any::<u64>()) {
        let s = random_space(seed, 2, 9);
        prop_assert_eq!(by_index(&denting_set(&s)), brute_denting(&s));
        for (u, v) in s.ordered_pairs() {
            prop_assert_eq!(is_denting(&s, u, v).unwrap(), is_denting(&s, v, u).unwrap());
        }
        let molecules = denting_molecules(&s);
        prop_assert_eq!(molecules.len(), 2 * denting_set(&s).len());
    }

    #[test]
    fn daugavet_and_condition_iii_agree(seed in any::<u64>()) {
        let s = random_space(seed, 3, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs = s.ordered_pairs();
        let (x, y) = pairs[rng.random_range(0..pairs.len())];
        triangle_holds(&s, &molecule(&s, x, y).unwrap())?;
        if let Some((mu, _)) = random_unit_combination(&s, &mut rng, 3) {
            triangle_holds(&s, &mu)?;
        }
    }

    #[test]
    fn slices_containing_a_combination_contain_a_term(seed in any::<u64>(), a in 1i64..10) {
        let s = random_space(seed, 3, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some((mu, _)) = random_unit_combination(&s, &mut rng, 4) else { return Ok(()) };
        let config = SliceConfig { alphas: vec![rat(a, 10)], seed, random: 4 };
        let mut slices: Vec<Slice> = make_slices(&s, &mu, &config).unwrap().into_iter().map(|n| n.slice).collect();
        for _ in 0..4 {
            let f = random_cone_function(&s, &mut rng);
            if lipschitz_constant(&s, &f).is_positive() {
                slices.push(Slice::normalized(&s, f, rat(a, 10)).unwrap());
            }
        }
        let terms = mu.presentation().unwrap();
        for slice in slices.iter().filter(|sl| sl.contains(&mu)) {
            prop_assert!(terms.iter().any(|t| slice.contains_molecule(&s, t.x, t.y)));
        }
    }

    #[test]
    fn generated_slices_contain_the_element(seed in any::<u64>()) {
        let s = random_space(seed, 3, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some((mu, _)) = random_unit_combination(&s, &mut rng, 3) else { return Ok(()) };
        let config = SliceConfig { alphas: vec![rat(1, 100), rat(1, 2)], seed, random: 3 };
        let named = make_slices(&s, &mu, &config).unwrap();
        prop_assert_eq!(&named, &make_slices(&s, &mu, &config).unwrap());
        for name in ["potential", "f_mu", "support"] {
            prop_assert_eq!(named.iter().filter(|n| n.name == name).count(), 2);
        }
        for n in &named {
            prop_assert!(n.slice.contains(&mu));
            prop_assert_eq!(lipschitz_constant(&s, n.slice.f()), one());
        }
    }

    #[test]
    fn witness_stays_in_the_slice(seed in any::<u64>(), e in 1i64..8) {
        let s = random_space(seed, 3, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some((mu, _)) = random_unit_combination(&s, &mut rng, 3) else { return Ok(()) };
        let eps = rat(e, 4);
        let config = SliceConfig { alphas: vec![rat(1, 4), rat(3, 4)], seed, random: 2 };
        for named in make_slices(&s, &mu, &config).unwrap() {
            let slice = &named.slice;
            let report = daugavet_witness_search(&s, &mu, slice, &eps).unwrap();
            for step in &report.path {
                prop_assert!(slice.contains_molecule(&s, step.u, step.v));
                let diff = mu.minus(&molecule(&s, step.u, step.v).unwrap());
                prop_assert_eq!(&norm_value(&s, &diff).unwrap(), &step.distance);
            }
            match &report.outcome {
                WitnessOutcome::Found(step) => {
                    prop_assert!(slice.contains_molecule(&s, step.u, step.v));
                    prop_assert!(step.distance >= two() - &eps);
                }
                WitnessOutcome::Terminal { last, .. } => {
                    prop_assert!(slice.contains_molecule(&s, last.u, last.v));
                    prop_assert!(last.length >= report.gamma);
                }
            }
        }
    }

    #[test]
    fn descent_reaches_a_denting_pair(seed in any::<u64>()) {
        let s = random_space(seed, 3, 9);
        for (u, v) in s.ordered_pairs() {
            let radii = s.min_enclosing_radii(u, v).unwrap();
            let d = s.d(u, v).clone();
            if radii.r_plus_s >= one() {
                continue;
            }
            let eta = (one() - &radii.r_plus_s) * &d / int(4);
            let r = &radii.r * &d + &eta;
            let t = &radii.s * &d + &eta;
            let delta = s.stabilization_gap(u, v).unwrap().unwrap_or_else(one);
            let seg = s.delta_segment(&SegmentQuery { u, v, delta: delta.clone() }).unwrap();
            prop_assert_eq!(seg, s.segment(u, v).unwrap());
            let out = denting_descent(&s, u, v, &r, &t, &delta).unwrap();
            prop_assert!(is_denting(&s, out.x, out.y).unwrap());
            prop_assert!(s.in_ball(u, out.x, &r) && s.in_ball(v, out.y, &t));
            prop_assert_eq!(out.path.first(), Some(&(u, v)));
            prop_assert_eq!(out.path.last(), Some(&(out.x, out.y)));
            if is_denting(&s, u, v).unwrap() {
                prop_assert_eq!((out.x, out.y), (u, v));
            }
        }
    }

    #[test]
    fn daugavet_elements_reach_two_in_every_slice(seed in any::<u64>()) {
        let s = random_space(seed, 3, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some((mu, _)) = random_unit_combination(&s, &mut rng, 3) else { return Ok(()) };
        if !is_daugavet(&s, &mu, &[]).unwrap().is_daugavet {
            return Ok(());
        }
        let config = SliceConfig { alphas: vec![rat(1, 10), rat(1, 2)], seed, random: 3 };
        for named in make_slices(&s, &mu, &config).unwrap() {
            let best = named
                .slice
                .molecules(&s)
                .into_iter()
                .map(|(u, v)| norm_value(&s, &mu.minus(&molecule(&s, u, v).unwrap())).unwrap())
                .max()
                .unwrap_or_else(Rational::zero);
            prop_assert_eq!(best, two());
        }
    }
}
