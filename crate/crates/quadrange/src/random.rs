//! Seeded generators of small integer quadratic pairs for property testing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::core::{QuadraticFunction, QuadraticPair, SymMatrix, Vector};
use crate::scalar::{ri, rq, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// Independent entries in [−5, 5].
    General,
    /// B = ρA (or A = 0), the only case where the range can be nonconvex.
    Proportional,
    /// A and B sums of one or two rank-one terms.
    LowRank,
}

pub fn random_sym<R: Rng>(rng: &mut R, n: usize, lim: i64) -> SymMatrix {
    let mut rows = vec![vec![ri(0); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = ri(rng.gen_range(-lim..=lim));
            rows[i][j] = v.clone();
            rows[j][i] = v;
        }
    }
    SymMatrix::from_rows("S", rows).expect("symmetric")
}

fn low_rank<R: Rng>(rng: &mut R, n: usize) -> SymMatrix {
    let mut m = SymMatrix::zeros(n);
    for _ in 0..rng.gen_range(1..=2) {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let s = if rng.gen_bool(0.5) { 1 } else { -1 };
        let outer = SymMatrix::from_upper(n, |i, j| ri(s * v[i] * v[j]));
        m = m.add(&outer);
    }
    m
}

pub fn random_vec<R: Rng>(rng: &mut R, n: usize, lim: i64) -> Vector {
    (0..n).map(|_| ri(rng.gen_range(-lim..=lim))).collect()
}

fn maybe_vec<R: Rng>(rng: &mut R, n: usize) -> Vector {
    if rng.gen_bool(0.25) {
        vec![ri(0); n]
    } else {
        random_vec(rng, n, 5)
    }
}

pub fn random_pair<R: Rng>(rng: &mut R, n: usize, kind: PairKind) -> QuadraticPair {
    let (a, b) = match kind {
        PairKind::General => (random_sym(rng, n, 5), random_sym(rng, n, 5)),
        PairKind::LowRank => (low_rank(rng, n), low_rank(rng, n)),
        PairKind::Proportional => {
            let a = if rng.gen_bool(0.5) { low_rank(rng, n) } else { random_sym(rng, n, 5) };
            let rhos: [Rat; 6] = [ri(-2), ri(-1), rq(-1, 2), rq(1, 2), ri(1), ri(2)];
            match rng.gen_range(0..5) {
                0 => (SymMatrix::zeros(n), a),
                1 => (a, SymMatrix::zeros(n)),
                _ => {
                    let rho = rhos.choose(rng).unwrap().clone();
                    let b = a.scale(&rho);
                    (a, b)
                }
            }
        }
    };
    let fa = maybe_vec(rng, n);
    let gb = maybe_vec(rng, n);
    let k1 = ri(rng.gen_range(-5..=5));
    let k2 = ri(rng.gen_range(-5..=5));
    QuadraticPair::new(QuadraticFunction::new(a, fa, k1).unwrap(), QuadraticFunction::new(b, gb, k2).unwrap()).unwrap()
}

pub fn random_kind<R: Rng>(rng: &mut R) -> PairKind {
    *[PairKind::General, PairKind::Proportional, PairKind::LowRank].choose(rng).unwrap()
}
