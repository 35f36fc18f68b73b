use proptest::prelude::*;
use quadrange::convexity::joint_range_convexity;
use quadrange::corpus::load_example;
use quadrange::optimize::{
    dual_value, existence_report, finiteness_preconditions, g_range, kkt_check, slater_check, solve_dual, Cone, Ext,
    KktVerdict,
};
use quadrange::oracle::{convexity_probe, dual_value_eig, range_cloud, validate_certificate, ProbeVerdict};
use quadrange::random::{random_kind, random_pair, random_sym, random_vec};
use quadrange::scalar::{ri, rq, to_f64};
use quadrange::{eval_pair_f64, Scalar, QuadraticFunction, QuadraticPair, SymMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn example(name: &str) -> QuadraticPair {
    load_example(name).unwrap().pair
}

// random pair shifted so that a known rational x is feasible
fn feasible_instance(seed: u64, n: usize, cone: Cone) -> (QuadraticPair, Vec<quadrange::Rat>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = random_kind(&mut rng);
    let p = random_pair(&mut rng, n, kind);
    let x = random_vec(&mut rng, n, 3);
    let slack = if cone == Cone::Zero { ri(0) } else { ri(rng.gen_range(0..=2)) };
    let gx = p.g.eval(&x).unwrap();
    let g = QuadraticFunction::new(p.b().clone(), p.g.lin.clone(), &p.g.k - gx - slack).unwrap();
    (QuadraticPair::new(p.f.clone(), g).unwrap(), x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn weak_duality(seed in any::<u64>(), n in 1usize..5, nonneg in any::<bool>(), num in -12i64..=12, den in 1i64..5) {
        let cone = if nonneg { Cone::NonNeg } else { Cone::Zero };
        let (p, x) = feasible_instance(seed, n, cone);
        let fx = p.f.eval(&x).unwrap();
        let lam = if nonneg { rq(num.abs(), den) } else { rq(num, den) };
        if let Ext::Finite(q) = dual_value(&p, &lam, cone).unwrap() {
            prop_assert!(q <= fx);
        }
        let r = solve_dual(&p, cone).unwrap();
        prop_assert!(r.nu <= to_f64(&fx) + 1e-8 * p.scale().max(r.nu.abs()));
        prop_assert!(r.mu_lower() <= r.mu_upper());
    }

    // LDLᵀ route and eigen route of q(λ) agree
    #[test]
    fn dual_value_routes_agree(seed in any::<u64>(), n in 1usize..5, num in -12i64..=12, den in 1i64..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = random_kind(&mut rng);
        let p = random_pair(&mut rng, n, kind);
        let lam = rq(num, den);
        let exact = dual_value(&p, &lam, Cone::Zero).unwrap();
        let fl = dual_value_eig(&p, to_f64(&lam));
        match exact {
            Ext::Finite(q) => {
                let q = to_f64(&q);
                prop_assert!((q - fl).abs() <= 1e-6 * p.scale().max(q.abs()).max(1.0), "{} vs {}", q, fl);
            }
            Ext::NegInf => prop_assert!(fl == f64::NEG_INFINITY || fl < -1e6),
            Ext::PosInf => prop_assert!(false),
        }
    }

    // f + λg = ⟨C(y−x), y−x⟩ + const with C ≻ 0, so x is a global minimiser on g = 0
    #[test]
    fn kkt_recovers_planted_optimum(seed in any::<u64>(), n in 1usize..4, num in -6i64..=6, den in 1i64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_sym(&mut rng, n, 5);
        let bl = random_vec(&mut rng, n, 5);
        let cols: Vec<_> = (0..n).map(|_| random_vec(&mut rng, n, 3)).collect();
        let c = SymMatrix::identity(n).congruence(&cols).add(&SymMatrix::identity(n));
        let x = random_vec(&mut rng, n, 3);
        let lam = rq(num, den);
        let a = c.comb(&ri(1), &b, &-lam.clone());
        let cx = c.mul_vec(&x);
        let al: Vec<_> = cx.iter().zip(&bl).map(|(u, v)| -(ri(2) * u) - &lam * v).collect();
        let g0 = QuadraticFunction::new(b, bl, ri(0)).unwrap();
        let k2 = -g0.eval(&x).unwrap();
        let g = QuadraticFunction::new(g0.a_mat.clone(), g0.lin.clone(), k2).unwrap();
        let p = QuadraticPair::new(QuadraticFunction::new(a, al, ri(0)).unwrap(), g).unwrap();
        let k = kkt_check(&p, &x, Cone::Zero).unwrap();
        prop_assert!(k.stationarity_ok && k.psd_ok);
        if !quadrange::is_zero_vec(&p.g.gradient(&x).unwrap()) {
            prop_assert_eq!(k.lambda_star.clone(), Some(Scalar::Exact(lam.clone())));
        }
        prop_assert_eq!(dual_value(&p, &lam, Cone::Zero).unwrap(), Ext::Finite(p.f.eval(&x).unwrap()));
        if k.verdict == KktVerdict::Optimal {
            let r = solve_dual(&p, Cone::Zero).unwrap();
            let fx = to_f64(&p.f.eval(&x).unwrap());
            prop_assert!((r.nu - fx).abs() <= 1e-6 * p.scale().max(fx.abs()));
        }
    }

    #[test]
    fn cloud_points_match_the_map(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = random_kind(&mut rng);
        let p = random_pair(&mut rng, n, kind);
        for c in range_cloud(&p, 64, seed).points.iter().step_by(17) {
            let e = eval_pair_f64(&p, &c.x);
            let tol = 1e-12 * (1.0 + e[0].abs() + e[1].abs());
            prop_assert!((e[0] - c.p[0]).abs() <= tol && (e[1] - c.p[1]).abs() <= tol);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    // a confirmed float witness never contradicts an exact convex verdict
    #[test]
    fn probe_respects_exact_convexity(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = random_kind(&mut rng);
        let p = random_pair(&mut rng, n, kind);
        if joint_range_convexity(&p).unwrap().convex {
            prop_assert!(!convexity_probe(&p, 128, seed).nonconvex());
        }
    }
}

#[test]
fn probe_is_deterministic() {
    let p = example("ex0");
    let a = serde_json::to_string(&convexity_probe(&p, 300, 42)).unwrap();
    let b = serde_json::to_string(&convexity_probe(&p, 300, 42)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn probe_finds_ex0_witness() {
    let p = example("ex0");
    let r = convexity_probe(&p, 2000, 42);
    match r.verdict {
        ProbeVerdict::NonconvexWitness { p: a, q: b, m } => {
            assert_eq!(quadrange::convexity::in_range_exact(&p, &m), Some(false));
            assert_ne!(a, b);
        }
        ProbeVerdict::ProbablyConvex => panic!("no witness for ex0"),
    }
}

#[test]
fn probe_convex_cases() {
    let id = SymMatrix::identity(2);
    let definite = QuadraticPair::homogeneous(id.clone(), SymMatrix::from_ints(&[&[0, 1], &[1, 0]])).unwrap();
    assert!(!convexity_probe(&definite, 500, 1).nonconvex());
    let z = SymMatrix::zeros(2);
    let affine = QuadraticPair::new(
        QuadraticFunction::new(z.clone(), vec![ri(1), ri(2)], ri(0)).unwrap(),
        QuadraticFunction::new(z, vec![ri(-1), ri(1)], ri(3)).unwrap(),
    )
    .unwrap();
    assert!(!convexity_probe(&affine, 500, 1).nonconvex());
}

#[test]
fn certificate_validation() {
    let s = example("ej_s_lema");
    assert!(validate_certificate(&s, 0.0, Cone::Zero, 0.0));
    let t = example("ej_sinsd1");
    assert!(!validate_certificate(&t, 1.0, Cone::Zero, 0.0));
    assert!(validate_certificate(&t, 1.0, Cone::Zero, -0.25));
    assert!(!validate_certificate(&t, -1.0, Cone::NonNeg, 0.0));
    assert_eq!(dual_value(&t, &ri(1), Cone::Zero).unwrap(), Ext::Finite(rq(-1, 4)));
}

#[test]
fn g_range_and_slater() {
    let s = example("ej_s_lema");
    let r = g_range(&s.g);
    assert_eq!((r.inf.clone(), r.sup.clone()), (Ext::NegInf, Ext::PosInf));
    let sl = slater_check(&s, Cone::Zero);
    assert!(sl.ok);
    for x in [sl.x_neg.unwrap(), sl.x_pos.unwrap()] {
        assert_ne!(s.g.eval(&x).unwrap(), ri(0));
    }
    let t = example("ej_sinsd1");
    let r = g_range(&t.g);
    assert_eq!((r.inf, r.sup), (Ext::Finite(ri(0)), Ext::PosInf));
    assert!(!slater_check(&t, Cone::Zero).ok);
}

#[test]
fn finiteness_mechanism_for_x1x2() {
    let p = example("x1x2_x1plus1");
    let f = finiteness_preconditions(&p, Cone::Zero).unwrap();
    assert!(f.mu_minus_infinity);
    let d = f.descent.expect("descent certificate");
    let x0 = d.x0.clone();
    assert_eq!(p.g.eval(&x0).unwrap(), ri(0));
    let far: Vec<_> = x0.iter().zip(&d.v).map(|(a, b)| a + b * ri(1000)).collect();
    assert_eq!(p.g.eval(&far).unwrap(), ri(0));
    assert!(p.f.eval(&far).unwrap() < p.f.eval(&x0).unwrap());
}

#[test]
fn existence_outside_the_disk() {
    // min x1² subject to 1 − x1² − x2² ≤ 0
    let p = QuadraticPair::new(
        QuadraticFunction::new(SymMatrix::from_ints(&[&[1, 0], &[0, 0]]), vec![ri(0), ri(0)], ri(0)).unwrap(),
        QuadraticFunction::new(SymMatrix::from_ints(&[&[-1, 0], &[0, -1]]), vec![ri(0), ri(0)], ri(1)).unwrap(),
    )
    .unwrap();
    let e = existence_report(&p, Cone::NonNeg).unwrap();
    let x = e.constructed_solution.expect("solution");
    assert_eq!(p.f.eval(&x).unwrap(), ri(0));
    assert!(p.g.eval(&x).unwrap() <= ri(0));
}

#[test]
fn kkt_examples() {
    let p = example("x1sq_minus_x2sq");
    let k = kkt_check(&p, &[ri(0), ri(0)], Cone::Zero).unwrap();
    assert!(k.stationarity_ok && !k.psd_ok);
    assert_ne!(k.verdict, KktVerdict::Optimal);
    let q = example("x1sq");
    let k = kkt_check(&q, &[ri(0), ri(0)], Cone::Zero).unwrap();
    assert_eq!(k.verdict, KktVerdict::Optimal);
}
