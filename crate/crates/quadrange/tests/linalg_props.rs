use proptest::prelude::*;
use quadrange::linalg::{inertia, kernel_basis, ldl, quad_inf, solve_linear, QuadInf};
use quadrange::pencil::eig_sym;
use quadrange::random::{random_sym, random_vec};
use quadrange::scalar::{ri, rq, to_f64};
use quadrange::{dot, SymMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sym(seed: u64, n: usize) -> SymMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = random_sym(&mut rng, n, 6);
    if rng.gen_bool(0.3) {
        // force a kernel
        let v = random_vec(&mut rng, n, 2);
        let sign = ri(if rng.gen_bool(0.5) { 1 } else { -1 });
        SymMatrix::from_upper(n, |i, j| &v[i] * &v[j] * &sign)
    } else {
        m
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inertia_counts_sum_to_n(seed in any::<u64>(), n in 1usize..6) {
        let s = sym(seed, n);
        let i = inertia(&s);
        prop_assert_eq!(i.n_plus + i.n_minus + i.n_zero, n);
    }

    #[test]
    fn sylvester_invariance(seed in any::<u64>(), n in 1usize..5) {
        let s = sym(seed, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
        // unit lower-triangular congruence is invertible
        let cols: Vec<Vec<_>> = (0..n)
            .map(|j| (0..n).map(|i| if i == j { ri(1) } else if i > j { ri(rng.gen_range(-3..=3)) } else { ri(0) }).collect())
            .collect();
        prop_assert_eq!(inertia(&s.congruence(&cols)), inertia(&s));
    }

    #[test]
    fn kernel_vectors_are_annihilated(seed in any::<u64>(), n in 1usize..6) {
        let s = sym(seed, n);
        let k = kernel_basis(&s);
        prop_assert_eq!(k.len(), inertia(&s).n_zero);
        for v in &k {
            prop_assert!(s.mul_vec(v).iter().all(|x| *x == ri(0)));
        }
    }

    #[test]
    fn exact_and_float_inertia_agree(seed in any::<u64>(), n in 1usize..6, den in 1i64..9) {
        let s = sym(seed, n).scale(&rq(1, den));
        let e = eig_sym(&s).unwrap();
        let tol = 1e-9 * s.max_abs().max(1.0);
        let i = inertia(&s);
        prop_assert_eq!(e.values.iter().filter(|&&x| x > tol).count(), i.n_plus);
        prop_assert_eq!(e.values.iter().filter(|&&x| x < -tol).count(), i.n_minus);
    }

    #[test]
    fn quadratic_infimum_is_a_lower_bound(seed in any::<u64>(), n in 1usize..5) {
        let s = sym(seed, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let l = random_vec(&mut rng, n, 4);
        let c = ri(rng.gen_range(-4..=4));
        let q = |x: &[_]| s.form(x, x) + dot(&l, x) + &c;
        match quad_inf(&s, &l, &c) {
            QuadInf::Finite { value, argmin } => {
                prop_assert_eq!(q(&argmin), value.clone());
                for _ in 0..10 {
                    let x = random_vec(&mut rng, n, 5);
                    prop_assert!(q(&x) >= value);
                }
            }
            QuadInf::MinusInfinity => {
                let i = inertia(&s);
                prop_assert!(i.n_minus > 0 || solve_linear(&s, &l).is_none());
            }
        }
    }

    #[test]
    fn ldl_pivots_match_inertia(seed in any::<u64>(), n in 1usize..6) {
        let s = sym(seed, n);
        let f = ldl(&s);
        let i = inertia(&s);
        prop_assert_eq!(f.negative_dirs().len(), i.n_minus);
        for u in f.negative_dirs() {
            prop_assert!(to_f64(&s.form(&u, &u)) < 0.0);
        }
    }
}
