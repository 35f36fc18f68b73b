use proptest::prelude::*;
use quadrange::convexity::{
    alternative_check, at_most_two_directions, augmented_convexity, candidate_directions, in_augmented, joint_range_convexity,
    nonconvex_canonical_form,
};
use quadrange::random::{random_pair, random_vec, PairKind};
use quadrange::range::{classify_hom_range, nd_check, property_battery};
use quadrange::scalar::{ri, rq};
use quadrange::{eval_pair, eval_pair_f64, hom_part, is_zero_pt, pt_f64, PlaneDirection, QuadraticPair, QrError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pair_from(seed: u64, n: usize, kind: PairKind) -> QuadraticPair {
    random_pair(&mut ChaCha8Rng::seed_from_u64(seed), n, kind)
}

fn kind_of(k: u8) -> PairKind {
    [PairKind::General, PairKind::Proportional, PairKind::LowRank][k as usize % 3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn hom_range_closure_contains_samples(seed in any::<u64>(), n in 1usize..5, k in 0u8..3) {
        let p = pair_from(seed, n, kind_of(k));
        let class = classify_hom_range(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        for _ in 0..20 {
            let u = random_vec(&mut rng, n, 4);
            let h = pt_f64(&hom_part(&p, &u).unwrap());
            let slack = 1e-9 * (1.0 + h[0].abs() + h[1].abs());
            prop_assert!(class.closure_contains(h, slack), "{:?} misses {:?}", class, h);
        }
    }

    #[test]
    fn nd_witness_is_isotropic(seed in any::<u64>(), n in 1usize..5, k in 0u8..3) {
        let p = pair_from(seed, n, kind_of(k));
        let nd = nd_check(&p);
        if let Some(v) = &nd.witness {
            prop_assert!(!nd.holds);
            prop_assert!(v.iter().any(|x| *x != ri(0)));
            prop_assert!(is_zero_pt(&hom_part(&p, v).unwrap()));
        }
    }

    #[test]
    fn battery_lattice_holds(seed in any::<u64>(), n in 1usize..5, k in 0u8..3) {
        prop_assert!(property_battery(&pair_from(seed, n, kind_of(k))).is_ok());
    }

    #[test]
    fn alternative_never_violated(seed in any::<u64>(), n in 1usize..5, k in 0u8..3, d1 in -3i64..=3, d2 in -3i64..=3) {
        prop_assume!((d1, d2) != (0, 0));
        let p = pair_from(seed, n, kind_of(k));
        let r = alternative_check(&p, &PlaneDirection::from_ints(d1, d2).unwrap());
        prop_assert!(!matches!(r, Err(QrError::AlternativeViolated(_))));
    }

    #[test]
    fn witnesses_are_exact(seed in any::<u64>(), n in 1usize..5) {
        let p = pair_from(seed, n, PairKind::Proportional);
        for d in candidate_directions(&p) {
            let v = augmented_convexity(&p, &d).unwrap();
            if let Some(w) = &v.witness {
                prop_assert_eq!(&eval_pair(&p, &w.xp).unwrap(), &w.p);
                prop_assert_eq!(&eval_pair(&p, &w.xq).unwrap(), &w.q);
                let half = rq(1, 2);
                prop_assert_eq!(&w.m, &[(&w.p[0] + &w.q[0]) * &half, (&w.p[1] + &w.q[1]) * &half]);
                prop_assert!(!in_augmented(&p, &d, &w.m).unwrap());
            } else {
                prop_assert!(v.convex);
            }
        }
    }

    // a convex augmented range contains every midpoint of two range points
    #[test]
    fn convex_verdicts_contain_midpoints(seed in any::<u64>(), n in 1usize..5) {
        let p = pair_from(seed, n, PairKind::Proportional);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.rotate_left(7));
        for d in candidate_directions(&p) {
            if !augmented_convexity(&p, &d).unwrap().convex {
                continue;
            }
            for _ in 0..10 {
                let x = random_vec(&mut rng, n, 3);
                let y = random_vec(&mut rng, n, 3);
                let (a, b) = (eval_pair(&p, &x).unwrap(), eval_pair(&p, &y).unwrap());
                let half = rq(1, 2);
                let m = [(&a[0] + &b[0]) * &half, (&a[1] + &b[1]) * &half];
                prop_assert!(in_augmented(&p, &d, &m).unwrap());
            }
        }
    }

    #[test]
    fn at_most_two_nonconvex_directions(seed in any::<u64>(), n in 1usize..5, k in 0u8..3) {
        let p = pair_from(seed, n, kind_of(k));
        let ds = at_most_two_directions(&p).unwrap();
        prop_assert!(ds.len() <= 2);
        let j = joint_range_convexity(&p).unwrap();
        prop_assert_eq!(j.convex, ds.is_empty());
    }

    // F(C y − x̄) matches the canonical model
    #[test]
    fn canonical_form_reproduces_the_map(seed in any::<u64>(), n in 1usize..5) {
        let p = pair_from(seed, n, PairKind::Proportional);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
        for d in at_most_two_directions(&p).unwrap() {
            let cf = nonconvex_canonical_form(&p, &d).unwrap();
            for _ in 0..10 {
                let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let got = eval_pair_f64(&p, &cf.to_x(&y));
                let want = cf.model(&y);
                let tol = 1e-7 * (1.0 + got[0].abs() + got[1].abs());
                prop_assert!((got[0] - want[0]).abs() <= tol && (got[1] - want[1]).abs() <= tol, "{:?} vs {:?}", got, want);
            }
        }
    }
}

// boundary members of the dual arc at 262.9° and 270°: a coarse rounding of the first
// used to land on the second and collapse the sector to a half-plane
#[test]
fn sector_edges_from_distinct_arc_ends() {
    use quadrange::range::ConeKind;
    let a = quadrange::SymMatrix::from_ints(&[&[0, -4, 4], &[-4, -4, 0], &[4, 0, 4]]);
    let b = quadrange::SymMatrix::from_ints(&[&[-5, 6, 1], &[6, -8, -2], &[1, -2, -1]]);
    let p = QuadraticPair::homogeneous(a, b).unwrap();
    let class = classify_hom_range(&p);
    match &class.kind {
        ConeKind::PointedSector { from, to } => {
            assert_eq!(from.exact(), Some(&PlaneDirection::from_ints(-1, 0).unwrap()));
            assert_eq!(to.exact(), Some(&PlaneDirection::from_ints(8, -1).unwrap()));
        }
        k => panic!("{k:?}"),
    }
    assert!(class.closure_contains([-32.0, -85.0], 1e-9));
    assert!(!class.closure_contains([1.0, 0.0], 1e-9));
}
