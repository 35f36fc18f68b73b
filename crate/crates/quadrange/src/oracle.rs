//! Floating-point sampling oracle used to cross-check the exact decisions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::convexity::in_range_exact;
use crate::core::{eval_pair, PlanePoint, QuadraticPair};
use crate::optimize::Cone;
use crate::pencil::{eig_sym_f64, fmax_abs, FMat};
use crate::scalar::{from_f64_exact, to_f64, Rat};

pub const DEFAULT_SEED: u64 = 0xD1ED5;

/// Seed from QUADRANGE_SEED when set, else the default.
pub fn default_seed() -> u64 {
    std::env::var("QUADRANGE_SEED")
        .ok()
        .and_then(|s| {
            let s = s.trim();
            match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
                Some(h) => u64::from_str_radix(h, 16).ok(),
                None => s.parse().ok(),
            }
        })
        .unwrap_or(DEFAULT_SEED)
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Plain f64 image of a pair.
#[derive(Clone, Debug)]
pub struct FloatPair {
    pub n: usize,
    pub a: FMat,
    pub b: FMat,
    pub la: Vec<f64>,
    pub lb: Vec<f64>,
    pub k: [f64; 2],
}

impl FloatPair {
    pub fn new(p: &QuadraticPair) -> Self {
        FloatPair {
            n: p.n(),
            a: p.a().to_f64(),
            b: p.b().to_f64(),
            la: p.f.lin.iter().map(to_f64).collect(),
            lb: p.g.lin.iter().map(to_f64).collect(),
            k: [to_f64(&p.f.k), to_f64(&p.g.k)],
        }
    }

    pub fn eval(&self, x: &[f64]) -> [f64; 2] {
        let mut out = self.k;
        for i in 0..self.n {
            let (mut ra, mut rb) = (0.0, 0.0);
            for j in 0..self.n {
                ra += self.a[i][j] * x[j];
                rb += self.b[i][j] * x[j];
            }
            out[0] += x[i] * ra + self.la[i] * x[i];
            out[1] += x[i] * rb + self.lb[i] * x[i];
        }
        out
    }

    fn jacobian(&self, x: &[f64]) -> [Vec<f64>; 2] {
        let mut ga = self.la.clone();
        let mut gb = self.lb.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                ga[i] += 2.0 * self.a[i][j] * x[j];
                gb[i] += 2.0 * self.b[i][j] * x[j];
            }
        }
        [ga, gb]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CloudPoint {
    pub x: Vec<f64>,
    pub p: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct RangeCloud {
    pub points: Vec<CloudPoint>,
}

/// Radial grid (radii 2^-8..2^8, 64 angles per coordinate 2-plane) plus
/// `uniform` samples with log-uniform radius.
pub fn range_cloud(pair: &QuadraticPair, uniform: usize, seed: u64) -> RangeCloud {
    let fp = FloatPair::new(pair);
    let n = fp.n;
    let mut xs: Vec<Vec<f64>> = vec![vec![0.0; n]];
    for e in -8..=8 {
        let r = 2f64.powi(e);
        if n == 1 {
            xs.push(vec![r]);
            xs.push(vec![-r]);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..64 {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
                    let mut x = vec![0.0; n];
                    x[i] = r * th.cos();
                    x[j] = r * th.sin();
                    xs.push(x);
                }
            }
        }
    }
    let mut rng = trial_rng(seed, u64::MAX);
    for _ in 0..uniform {
        xs.push(random_point(&mut rng, n));
    }
    RangeCloud { points: xs.into_iter().map(|x| CloudPoint { p: fp.eval(&x), x }).collect() }
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut d: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let nrm = d.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
    let r = 2f64.powf(rng.gen_range(-8.0..8.0));
    for v in &mut d {
        *v *= r / nrm;
    }
    d
}

/// Levenberg–Marquardt on x ↦ ‖F(x) − m‖; returns the best residual norm.
pub fn gauss_newton(fp: &FloatPair, m: [f64; 2], x0: &[f64], iters: usize) -> (f64, Vec<f64>) {
    let mut x = x0.to_vec();
    let resid = |x: &[f64]| {
        let p = fp.eval(x);
        [p[0] - m[0], p[1] - m[1]]
    };
    let mut r = resid(&x);
    let mut nr = r[0].hypot(r[1]);
    let mut mu = 1e-3;
    for _ in 0..iters {
        let [ga, gb] = fp.jacobian(&x);
        // δ = −Jᵀ(JJᵀ + μI)⁻¹ r
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        let (aa, ab, bb) = (dot(&ga, &ga), dot(&ga, &gb), dot(&gb, &gb));
        let (m11, m12, m22) = (aa + mu, ab, bb + mu);
        let det = m11 * m22 - m12 * m12;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let w1 = (m22 * r[0] - m12 * r[1]) / det;
        let w2 = (m11 * r[1] - m12 * r[0]) / det;
        let cand: Vec<f64> = (0..fp.n).map(|i| x[i] - ga[i] * w1 - gb[i] * w2).collect();
        let rc = resid(&cand);
        let nc = rc[0].hypot(rc[1]);
        if nc < nr {
            x = cand;
            r = rc;
            nr = nc;
            mu = (mu * 0.3).max(1e-15);
        } else {
            mu *= 10.0;
            if mu > 1e12 {
                break;
            }
        }
        if nr < 1e-13 * (1.0 + m[0].abs() + m[1].abs()) {
            break;
        }
    }
    (nr, x)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeStats {
    pub trials: usize,
    pub cloud_size: usize,
    pub candidates: usize,
    pub confirmed: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ProbeVerdict {
    ProbablyConvex,
    NonconvexWitness {
        #[serde(serialize_with = "crate::report::ser_pt")]
        p: PlanePoint,
        #[serde(serialize_with = "crate::report::ser_pt")]
        q: PlanePoint,
        #[serde(serialize_with = "crate::report::ser_pt")]
        m: PlanePoint,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeResult {
    #[serde(flatten)]
    pub verdict: ProbeVerdict,
    pub stats: ProbeStats,
}

impl ProbeResult {
    pub fn nonconvex(&self) -> bool {
        matches!(self.verdict, ProbeVerdict::NonconvexWitness { .. })
    }
}

const STARTS: usize = 16;

// One trial: a random pair of cloud points; Some((xp, xq)) when the midpoint resists all starts.
fn run_trial(fp: &FloatPair, cloud: &RangeCloud, seed: u64, t: u64) -> Option<(Vec<f64>, Vec<f64>)> {
    let mut rng = trial_rng(seed, t);
    let np = cloud.points.len();
    let (i, j) = (rng.gen_range(0..np), rng.gen_range(0..np));
    let (p, q) = (&cloud.points[i], &cloud.points[j]);
    let m = [0.5 * (p.p[0] + q.p[0]), 0.5 * (p.p[1] + q.p[1])];
    let scale = 1.0 + m[0].abs() + m[1].abs();
    let thresh = 1e-4 * scale;
    // nearest cloud points first, then random starts
    let mut near: Vec<(f64, usize)> = cloud
        .points
        .iter()
        .enumerate()
        .map(|(k, c)| ((c.p[0] - m[0]).hypot(c.p[1] - m[1]), k))
        .collect();
    near.select_nth_unstable_by(STARTS / 2, |a, b| a.0.total_cmp(&b.0));
    let mut starts: Vec<Vec<f64>> = near[..STARTS / 2].iter().map(|&(_, k)| cloud.points[k].x.clone()).collect();
    let mid_x: Vec<f64> = p.x.iter().zip(&q.x).map(|(a, b)| 0.5 * (a + b)).collect();
    starts.push(mid_x);
    while starts.len() < STARTS {
        starts.push(random_point(&mut rng, fp.n));
    }
    for s in &starts {
        let (res, _) = gauss_newton(fp, m, s, 60);
        if res <= thresh {
            return None;
        }
    }
    Some((p.x.clone(), q.x.clone()))
}

fn exact_point(x: &[f64]) -> Vec<Rat> {
    x.iter().map(|v| from_f64_exact(*v).expect("finite sample")).collect()
}

/// Midpoint probe of the convexity of F(R^n). Float candidates are only
/// reported after the exact non-membership predicate confirms them.
pub fn convexity_probe(pair: &QuadraticPair, trials: usize, seed: u64) -> ProbeResult {
    let fp = FloatPair::new(pair);
    let cloud = range_cloud(pair, 256, seed);
    let chunk = 256usize;
    let mut candidates = 0;
    let mut done = 0;
    while done < trials {
        let hi = (done + chunk).min(trials);
        let found: Vec<(u64, (Vec<f64>, Vec<f64>))> = (done as u64..hi as u64)
            .into_par_iter()
            .filter_map(|t| run_trial(&fp, &cloud, seed, t).map(|c| (t, c)))
            .collect();
        candidates += found.len();
        let mut found = found;
        found.sort_by_key(|(t, _)| *t);
        for (_, (xp, xq)) in found {
            let (ep, eq) = (exact_point(&xp), exact_point(&xq));
            let (p, q) = (eval_pair(pair, &ep).expect("dimension"), eval_pair(pair, &eq).expect("dimension"));
            let half = Rat::new(1.into(), 2.into());
            let m = [(&p[0] + &q[0]) * &half, (&p[1] + &q[1]) * &half];
            if in_range_exact(pair, &m) == Some(false) {
                return ProbeResult {
                    verdict: ProbeVerdict::NonconvexWitness { p, q, m },
                    stats: ProbeStats { trials: hi, cloud_size: cloud.points.len(), candidates, confirmed: 1 },
                };
            }
        }
        done = hi;
    }
    ProbeResult {
        verdict: ProbeVerdict::ProbablyConvex,
        stats: ProbeStats { trials, cloud_size: cloud.points.len(), candidates, confirmed: 0 },
    }
}

/// q(λ) through the eigendecomposition of A + λB (independent of the LDLᵀ route).
pub fn dual_value_eig(pair: &QuadraticPair, lambda: f64) -> f64 {
    let fp = FloatPair::new(pair);
    let n = fp.n;
    let m: FMat = (0..n).map(|i| (0..n).map(|j| fp.a[i][j] + lambda * fp.b[i][j]).collect()).collect();
    let ell: Vec<f64> = (0..n).map(|i| fp.la[i] + lambda * fp.lb[i]).collect();
    let c0 = fp.k[0] + lambda * fp.k[1];
    let Ok(e) = eig_sym_f64(&m) else {
        return f64::NAN;
    };
    let tol = 1e-9 * (1.0 + fmax_abs(&m));
    let lnorm = ell.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut q = c0;
    for j in 0..n {
        let ev = e.values[j];
        if ev < -tol {
            return f64::NEG_INFINITY;
        }
        let col = e.column(j);
        let c: f64 = col.iter().zip(&ell).map(|(a, b)| a * b).sum();
        if ev.abs() <= tol {
            if c.abs() > 1e-7 * (1.0 + lnorm) {
                return f64::NEG_INFINITY;
            }
        } else {
            q -= c * c / (4.0 * ev);
        }
    }
    q
}

pub fn validate_certificate(pair: &QuadraticPair, lambda: f64, cone: Cone, claimed_nu: f64) -> bool {
    if !lambda.is_finite() || (cone == Cone::NonNeg && lambda < 0.0) {
        return false;
    }
    let q = dual_value_eig(pair, lambda);
    if !q.is_finite() || !claimed_nu.is_finite() {
        return q == claimed_nu;
    }
    (q - claimed_nu).abs() <= 1e-6 * pair.scale().max(1.0)
}
