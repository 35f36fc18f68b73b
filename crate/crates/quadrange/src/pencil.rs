//! Floating-point pencil machinery: Jacobi eigensolver, angular sweeps over
//! t1·A + t2·B, PSD intervals of A + λB, definite members and simultaneous
//! diagonalization.

use std::f64::consts::PI;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::core::{primitive_vec, SymMatrix, Vector};
use crate::error::{QrError, Result};
use crate::linalg::{inertia, intersect_kernels, is_pd, is_psd, kernel_basis, ldl, orth_complement, restrict_form};
use crate::scalar::{from_f64_exact, rat_sqrt, rationalize, ri, to_f64, Rat};

pub type FMat = Vec<Vec<f64>>;

pub const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct EigenDecomp {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column j is the eigenvector of `values[j]`.
    pub vectors: FMat,
}

impl EigenDecomp {
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.vectors.iter().map(|r| r[j]).collect()
    }
}

pub fn fmax_abs(m: &FMat) -> f64 {
    m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Cyclic Jacobi, row order.
pub fn eig_sym_f64(s: &FMat) -> Result<EigenDecomp> {
    let n = s.len();
    let mut a = s.clone();
    let mut v: FMat = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let frob2: f64 = a.iter().flatten().map(|x| x * x).sum();
    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off == 0.0 || off <= 1e-30 * frob2 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - sn * vkq;
                    row[q] = sn * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        let off: f64 = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if !(off == 0.0 || off <= 1e-30 * frob2) {
            return Err(QrError::NoConvergence(MAX_SWEEPS));
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = idx.iter().map(|&i| a[i][i]).collect();
    let vectors = (0..n).map(|r| idx.iter().map(|&i| v[r][i]).collect()).collect();
    Ok(EigenDecomp { values, vectors })
}

pub fn eig_sym(s: &SymMatrix) -> Result<EigenDecomp> {
    eig_sym_f64(&s.to_f64())
}

pub fn lambda_min_f64(s: &FMat) -> f64 {
    if s.is_empty() {
        return 0.0;
    }
    eig_sym_f64(s).map(|e| e.values[0]).unwrap_or(f64::NAN)
}

pub fn fcomb(a: &FMat, s: f64, b: &FMat, t: f64) -> FMat {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| s * x + t * y).collect()).collect()
}

/// Relative semidefiniteness threshold.
pub fn tol_for(m: &FMat) -> f64 {
    1e-9 * (1.0 + fmax_abs(m))
}

pub fn pair_tol(a: &FMat, b: &FMat) -> f64 {
    1e-9 * (1.0 + fmax_abs(a).max(fmax_abs(b)))
}

/// Inertia read off eigenvalue signs.
pub fn float_inertia(s: &FMat) -> Result<crate::linalg::Inertia> {
    let tol = tol_for(s);
    let e = eig_sym_f64(s)?;
    let mut i = crate::linalg::Inertia { n_plus: 0, n_minus: 0, n_zero: 0 };
    for &x in &e.values {
        if x > tol {
            i.n_plus += 1;
        } else if x < -tol {
            i.n_minus += 1;
        } else {
            i.n_zero += 1;
        }
    }
    Ok(i)
}

pub fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut it = 0;
    while hi - lo > tol && it < 200 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
        it += 1;
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AngularSweep {
    pub theta_star: f64,
    pub m_star: f64,
    pub tol: f64,
    /// Arcs [θa, θb] (θb may exceed 2π when wrapping) where λmin ≥ −tol.
    pub arcs: Vec<(f64, f64)>,
}

impl AngularSweep {
    pub fn definite(&self) -> bool {
        self.m_star > self.tol
    }

    pub fn member(&self) -> (f64, f64) {
        (self.theta_star.cos(), self.theta_star.sin())
    }
}

pub const SWEEP_GRID: usize = 720;

pub fn angular_sweep_f64(a: &FMat, b: &FMat) -> AngularSweep {
    let tol = pair_tol(a, b);
    let h = |th: f64| lambda_min_f64(&fcomb(a, th.cos(), b, th.sin()));
    let step = 2.0 * PI / SWEEP_GRID as f64;
    let vals: Vec<f64> = (0..SWEEP_GRID).map(|i| h(i as f64 * step)).collect();
    let (ib, _) = vals.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let c = ib as f64 * step;
    let (mut th, mut m) = golden_max(&h, c - step, c + step, 1e-10);
    if vals[ib] > m {
        th = c;
        m = vals[ib];
    }
    th = th.rem_euclid(2.0 * PI);
    let feas: Vec<bool> = vals.iter().map(|&v| v >= -tol).collect();
    let mut arcs = Vec::new();
    if feas.iter().all(|&f| f) {
        arcs.push((0.0, 2.0 * PI));
    } else if feas.iter().any(|&f| f) {
        // start scanning just after an infeasible grid point so runs do not wrap
        let start = feas.iter().position(|&f| !f).unwrap();
        let mut i = 0;
        while i < SWEEP_GRID {
            let k = (start + i) % SWEEP_GRID;
            if feas[k] {
                let first = start + i;
                let mut j = i;
                while j + 1 < SWEEP_GRID && feas[(start + j + 1) % SWEEP_GRID] {
                    j += 1;
                }
                let last = start + j;
                let lo = bisect_boundary(&h, (first as f64 - 1.0) * step, first as f64 * step, tol);
                let hi = bisect_boundary(&h, (last as f64 + 1.0) * step, last as f64 * step, tol);
                let lo = lo.rem_euclid(2.0 * PI);
                let hi = lo + (hi - lo).rem_euclid(2.0 * PI);
                arcs.push((lo, hi));
                i = j + 1;
            } else {
                i += 1;
            }
        }
    }
    if arcs.is_empty() && m >= -tol {
        arcs.push((th, th));
    }
    AngularSweep { theta_star: th, m_star: m, tol, arcs }
}

// bad: infeasible end, good: feasible end
fn bisect_boundary(h: &dyn Fn(f64) -> f64, mut bad: f64, mut good: f64, tol: f64) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (bad + good);
        if h(mid) >= -tol {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

pub fn angular_sweep(a: &SymMatrix, b: &SymMatrix) -> AngularSweep {
    angular_sweep_f64(&a.to_f64(), &b.to_f64())
}

/// Exactly confirmed coefficients (t1, t2) with t1·A + t2·B ≻ 0.
pub fn definite_member(a: &SymMatrix, b: &SymMatrix) -> Option<(Rat, Rat)> {
    if a.n() == 0 {
        return None;
    }
    let sw = angular_sweep(a, b);
    let mut cands: Vec<(Rat, Rat)> = vec![(ri(1), ri(0)), (ri(0), ri(1)), (ri(-1), ri(0)), (ri(0), ri(-1))];
    if sw.m_star > -sw.tol {
        let (c, s) = sw.member();
        for den in [10u64, 1000, 1_000_000] {
            cands.push((rationalize(c, den), rationalize(s, den)));
        }
        if let (Some(c), Some(s)) = (from_f64_exact(c), from_f64_exact(s)) {
            cands.push((c, s));
        }
    }
    cands.into_iter().find(|(t1, t2)| !(t1.is_zero() && t2.is_zero()) && is_pd(&a.comb(t1, b, t2)))
}

#[derive(Clone, Debug, Serialize)]
pub struct PsdInterval {
    pub lo: f64,
    pub hi: f64,
    pub empty: bool,
    /// Exact endpoints when the interval was confirmed over the rationals.
    #[serde(skip)]
    pub exact_lo: Option<Rat>,
    #[serde(skip)]
    pub exact_hi: Option<Rat>,
    /// An exactly PSD rational member, if one was found.
    #[serde(skip)]
    pub exact_member: Option<Rat>,
}

impl PsdInterval {
    pub fn contains(&self, x: f64) -> bool {
        !self.empty && x >= self.lo && x <= self.hi
    }

    pub fn empty() -> Self {
        PsdInterval { lo: f64::NAN, hi: f64::NAN, empty: true, exact_lo: None, exact_hi: None, exact_member: None }
    }
}

fn lam_tol(a: &FMat, b: &FMat, l: f64) -> f64 {
    tol_for(&fcomb(a, 1.0, b, l))
}

const LAMBDA_BOUND: f64 = 1e9;

/// {λ : A + λB ⪰ 0}.
pub fn psd_interval(a: &SymMatrix, b: &SymMatrix) -> PsdInterval {
    let (af, bf) = (a.to_f64(), b.to_f64());
    let h = |l: f64| lambda_min_f64(&fcomb(&af, 1.0, &bf, l));
    let feasible = |l: f64| h(l) >= -lam_tol(&af, &bf, l);
    // maximize over θ ∈ (−π/2, π/2) where λ = tan θ
    let hn = |th: f64| lambda_min_f64(&fcomb(&af, th.cos(), &bf, th.sin()));
    let grid = 360;
    let mut best = (0.0, hn(0.0));
    for i in 1..grid {
        let th = -PI / 2.0 + PI * i as f64 / grid as f64;
        let v = hn(th);
        if v > best.1 {
            best = (th, v);
        }
    }
    let st = PI / grid as f64;
    let (gth, gv) = golden_max(&hn, (best.0 - st).max(-PI / 2.0 + 1e-12), (best.0 + st).min(PI / 2.0 - 1e-12), 1e-12);
    if gv > best.1 {
        best = (gth, gv);
    }
    let lam0 = best.0.tan();

    // exact assistance for rational data
    let mut cands = vec![ri(0), rationalize(lam0, 1_000_000), rationalize(lam0, 1000)];
    if let Some(r) = from_f64_exact(lam0) {
        cands.push(r);
    }
    let mut exact_member = cands.into_iter().find(|r| is_psd(&a.comb(&ri(1), b, r)));
    if exact_member.is_none() {
        // the float search is unreliable near λ = ±∞, where the tolerance grows with |λ|
        for sign in [1i64, -1] {
            if psd_at_infinity(a, b, sign) {
                let mut t = ri(sign);
                for _ in 0..64 {
                    if is_psd(&a.comb(&ri(1), b, &t)) {
                        exact_member = Some(t);
                        break;
                    }
                    t = t * ri(16);
                }
            }
            if exact_member.is_some() {
                break;
            }
        }
        if exact_member.is_none() && lam0.abs() > 1e6 {
            return PsdInterval::empty();
        }
    }
    if let Some(r) = exact_member {
        let b_psd = is_psd(b);
        let b_nsd = is_psd(&b.scale(&ri(-1)));
        let psd_at = |x: &Rat| is_psd(&a.comb(&ri(1), b, x));
        let hi = if b_psd { None } else { Some(exact_edge(&psd_at, &r, 1.0)) };
        let lo = if b_nsd { None } else { Some(exact_edge(&psd_at, &r, -1.0)) };
        let (lo_f, exact_lo) = match lo {
            None => (f64::NEG_INFINITY, None),
            Some((x, ex)) => (x, ex),
        };
        let (hi_f, exact_hi) = match hi {
            None => (f64::INFINITY, None),
            Some((x, ex)) => (x, ex),
        };
        return PsdInterval { lo: lo_f, hi: hi_f, empty: false, exact_lo, exact_hi, exact_member: Some(r) };
    }

    if !feasible(lam0) {
        return PsdInterval::empty();
    }
    let edge = |dir: f64| -> f64 {
        let mut step = 1.0f64.max(lam0.abs());
        let mut good = lam0;
        loop {
            let x = lam0 + dir * step;
            if x.abs() > LAMBDA_BOUND {
                return dir * f64::INFINITY;
            }
            if !feasible(x) {
                let mut bad = x;
                for _ in 0..200 {
                    let mid = 0.5 * (good + bad);
                    if feasible(mid) {
                        good = mid;
                    } else {
                        bad = mid;
                    }
                    if (bad - good).abs() <= 1e-10 * (1.0 + good.abs()) {
                        break;
                    }
                }
                return good;
            }
            good = x;
            step *= 2.0;
        }
    };
    PsdInterval { lo: edge(-1.0), hi: edge(1.0), empty: false, exact_lo: None, exact_hi: None, exact_member: None }
}

/// A + λB ⪰ 0 for every large enough sign·λ: sign·B ⪰ 0, A ⪰ 0 on W = ker B,
/// and every z ∈ W isotropic for A lies in ker A.
pub fn psd_at_infinity(a: &SymMatrix, b: &SymMatrix, sign: i64) -> bool {
    if !is_psd(&b.scale(&ri(sign))) {
        return false;
    }
    let w = kernel_basis(b);
    if w.is_empty() {
        return true;
    }
    let aw = restrict_form(a, &w);
    if !is_psd(&aw) {
        return false;
    }
    kernel_basis(&aw).iter().all(|c| {
        let z = (0..a.n()).map(|i| w.iter().zip(c).map(|(wj, cj)| &wj[i] * cj).fold(ri(0), |x, y| x + y)).collect::<Vec<_>>();
        a.mul_vec(&z).iter().all(|v| v.is_zero())
    })
}

// Exact bisection for the edge of the PSD set starting from an exactly PSD point.
fn exact_edge(psd_at: &dyn Fn(&Rat) -> bool, start: &Rat, dir: f64) -> (f64, Option<Rat>) {
    let s = to_f64(start);
    let mut step = 1.0f64;
    let mut good = s;
    let mut bad;
    loop {
        let x = s + dir * step;
        if !psd_at(&from_f64_exact(x).unwrap()) {
            bad = x;
            break;
        }
        good = x;
        step *= 2.0;
        if step > 1e300 {
            return (dir * f64::INFINITY, None);
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (good + bad);
        if mid == good || mid == bad {
            break;
        }
        if psd_at(&from_f64_exact(mid).unwrap()) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    if good == s {
        return (s, Some(start.clone()));
    }
    for den in [1u64, 10, 100, 1000, 10_000, 100_000, 1_000_000] {
        let r = rationalize(good, den);
        let rf = to_f64(&r);
        let inside = if dir > 0.0 { rf >= good && rf < bad } else { rf <= good && rf > bad };
        if (inside || rf == good) && psd_at(&r) {
            return (rf, Some(r));
        }
    }
    (good, None)
}

/// Columns of a simultaneously diagonalizing congruence.
#[derive(Clone, Debug)]
pub enum SdMatrix {
    Exact(Vec<Vector>),
    Float(Vec<Vec<f64>>),
}

impl SdMatrix {
    pub fn columns_f64(&self) -> Vec<Vec<f64>> {
        match self {
            SdMatrix::Exact(c) => c.iter().map(|v| crate::core::vec_f64(v)).collect(),
            SdMatrix::Float(c) => c.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum SdVerdict {
    Found(SdMatrix),
    NotSd,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct SimDiag {
    pub verdict: SdVerdict,
    pub route: &'static str,
    /// True when the yes/no answer was reached by exact arithmetic.
    pub exact_decision: bool,
}

pub enum Proportional {
    BothZero,
    /// B = ρA.
    BOverA(Rat),
    /// A = 0, B ≠ 0.
    AZero,
    No,
}

pub fn proportionality(a: &SymMatrix, b: &SymMatrix) -> Proportional {
    let n = a.n();
    let first = |m: &SymMatrix| (0..n * n).map(|k| (k / n, k % n)).find(|&(i, j)| !m.get(i, j).is_zero());
    match (first(a), first(b)) {
        (None, None) => Proportional::BothZero,
        (Some((i, j)), _) => {
            let rho = b.get(i, j) / a.get(i, j);
            if a.scale(&rho) == *b {
                Proportional::BOverA(rho)
            } else {
                Proportional::No
            }
        }
        (None, Some(_)) => Proportional::AZero,
    }
}

fn is_diagonal(m: &SymMatrix) -> bool {
    let n = m.n();
    (0..n).all(|i| (0..n).all(|j| i == j || m.get(i, j).is_zero()))
}

pub fn simdiag(a: &SymMatrix, b: &SymMatrix) -> SimDiag {
    let n = a.n();
    if is_diagonal(a) && is_diagonal(b) {
        return SimDiag {
            verdict: SdVerdict::Found(SdMatrix::Exact((0..n).map(|i| crate::core::unit(n, i)).collect())),
            route: "diagonal",
            exact_decision: true,
        };
    }
    match proportionality(a, b) {
        Proportional::BOverA(_) => {
            return SimDiag { verdict: SdVerdict::Found(SdMatrix::Exact(ldl(a).t)), route: "proportional", exact_decision: true }
        }
        Proportional::AZero | Proportional::BothZero => {
            return SimDiag { verdict: SdVerdict::Found(SdMatrix::Exact(ldl(b).t)), route: "proportional", exact_decision: true }
        }
        Proportional::No => {}
    }
    let kern = intersect_kernels(a, b);
    if !kern.is_empty() {
        let w = orth_complement(&kern, n);
        let (ra, rb) = (a.congruence(&w), b.congruence(&w));
        let inner = simdiag(&ra, &rb);
        let verdict = match inner.verdict {
            SdVerdict::Found(SdMatrix::Exact(cols)) => {
                let mut out: Vec<Vector> = cols.iter().map(|c| lift(&w, c)).collect();
                out.extend(kern);
                SdVerdict::Found(SdMatrix::Exact(out))
            }
            SdVerdict::Found(SdMatrix::Float(cols)) => {
                let wf: Vec<Vec<f64>> = w.iter().map(|v| crate::core::vec_f64(v)).collect();
                let mut out: Vec<Vec<f64>> = cols
                    .iter()
                    .map(|c| (0..n).map(|r| c.iter().zip(&wf).map(|(ci, wi)| ci * wi[r]).sum()).collect())
                    .collect();
                out.extend(kern.iter().map(|v| crate::core::vec_f64(v)));
                SdVerdict::Found(SdMatrix::Float(out))
            }
            other => other,
        };
        return SimDiag { verdict, route: "kernel-reduction", exact_decision: inner.exact_decision };
    }
    if n == 2 {
        return simdiag_2x2(a, b);
    }
    if let Some((t1, t2)) = definite_member(a, b) {
        let m = a.comb(&t1, b, &t2);
        let other = if !t2.is_zero() { a } else { b };
        if let Some(c) = definite_route(&m.to_f64(), &other.to_f64()) {
            return SimDiag { verdict: SdVerdict::Found(SdMatrix::Float(c)), route: "definite-member", exact_decision: true };
        }
    }
    SimDiag { verdict: SdVerdict::Unknown, route: "undecided", exact_decision: false }
}

fn lift(w: &[Vector], c: &[Rat]) -> Vector {
    let n = w[0].len();
    (0..n).map(|r| c.iter().zip(w).fold(Rat::zero(), |acc, (ci, wi)| acc + ci * &wi[r])).collect()
}

fn cholesky(m: &FMat) -> Option<FMat> {
    let n = m.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = m[i][i] - s;
                if d <= 0.0 {
                    return None;
                }
                l[i][j] = d.sqrt();
            } else {
                l[i][j] = (m[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

// M = LLᵀ ≻ 0: eigenvectors Q of L⁻¹NL⁻ᵀ give C = L⁻ᵀQ.
fn definite_route(m: &FMat, nmat: &FMat) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let l = cholesky(m)?;
    // X = L⁻¹ N L⁻ᵀ by forward substitution on columns
    let solve_l = |rhs: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; n];
        for i in 0..n {
            let s: f64 = (0..i).map(|k| l[i][k] * x[k]).sum();
            x[i] = (rhs[i] - s) / l[i][i];
        }
        x
    };
    let solve_lt = |rhs: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|k| l[k][i] * x[k]).sum();
            x[i] = (rhs[i] - s) / l[i][i];
        }
        x
    };
    let y: Vec<Vec<f64>> = (0..n).map(|j| solve_l(&(0..n).map(|i| nmat[i][j]).collect::<Vec<_>>())).collect();
    // y[j] = column j of L⁻¹N; X = (L⁻¹ (L⁻¹N)ᵀ)ᵀ, symmetric
    let x_cols: Vec<Vec<f64>> = (0..n).map(|i| solve_l(&(0..n).map(|j| y[j][i]).collect::<Vec<_>>())).collect();
    let x: FMat = (0..n).map(|i| (0..n).map(|j| 0.5 * (x_cols[j][i] + x_cols[i][j])).collect()).collect();
    let e = eig_sym_f64(&x).ok()?;
    Some((0..n).map(|j| solve_lt(&e.column(j))).collect())
}

// n = 2: columns of C must be roots of q(v) = det[Av Bv].
fn simdiag_2x2(a: &SymMatrix, b: &SymMatrix) -> SimDiag {
    let (a11, a12, a22) = (a.get(0, 0), a.get(0, 1), a.get(1, 1));
    let (b11, b12, b22) = (b.get(0, 0), b.get(0, 1), b.get(1, 1));
    // Av = (a11 v1 + a12 v2, a12 v1 + a22 v2), likewise Bv
    let al = a11 * b12 - a12 * b11;
    let be2 = a11 * b22 - a22 * b11;
    let ga = a12 * b22 - a22 * b12;
    // q = al v1² + be2 v1 v2 + ga v2²
    let found = |cols: Vec<Vector>, route| SimDiag { verdict: SdVerdict::Found(SdMatrix::Exact(cols)), route, exact_decision: true };
    let not_sd = |route| SimDiag { verdict: SdVerdict::NotSd, route, exact_decision: true };
    if al.is_zero() && be2.is_zero() && ga.is_zero() {
        // q ≡ 0 only for proportional pencils or a common kernel; both handled earlier
        return SimDiag { verdict: SdVerdict::Unknown, route: "2x2-degenerate", exact_decision: false };
    }
    let four = ri(4);
    let disc = &be2 * &be2 - &four * &al * &ga;
    if disc.is_negative() {
        return not_sd("2x2-no-real-root");
    }
    if disc.is_zero() {
        return not_sd("2x2-double-root");
    }
    let z_ok = |u: &Vector, v: &Vector| a.form(u, v).is_zero() && b.form(u, v).is_zero();
    if al.is_zero() {
        // q = v2 (be2 v1 + ga v2)
        let v1 = vec![ri(1), ri(0)];
        let v2 = primitive_vec(&[ga.clone(), -be2.clone()]);
        return if z_ok(&v1, &v2) { found(vec![v1, v2], "2x2-rational-roots") } else { not_sd("2x2-roots-not-conjugate") };
    }
    if let Some(sq) = rat_sqrt(&disc) {
        let two_al = &al + &al;
        let r1 = (-&be2 + &sq) / &two_al;
        let r2 = (-&be2 - &sq) / &two_al;
        let v1 = primitive_vec(&[r1, ri(1)]);
        let v2 = primitive_vec(&[r2, ri(1)]);
        return if z_ok(&v1, &v2) { found(vec![v1, v2], "2x2-rational-roots") } else { not_sd("2x2-roots-not-conjugate") };
    }
    // roots (r_i, 1) irrational; z-orthogonality through symmetric functions
    let s = -&be2 / &al;
    let p = &ga / &al;
    let za = a11 * &p + a12 * &s + a22;
    let zb = b11 * &p + b12 * &s + b22;
    if !(za.is_zero() && zb.is_zero()) {
        return not_sd("2x2-roots-not-conjugate");
    }
    let (sf, df, alf) = (to_f64(&be2), to_f64(&disc).sqrt(), to_f64(&al));
    let r1 = (-sf + df) / (2.0 * alf);
    let r2 = (-sf - df) / (2.0 * alf);
    SimDiag {
        verdict: SdVerdict::Found(SdMatrix::Float(vec![vec![r1, 1.0], vec![r2, 1.0]])),
        route: "2x2-irrational-roots",
        exact_decision: true,
    }
}

/// Largest off-diagonal magnitude of CᵀSC relative to the diagonal scale.
pub fn offdiag_residual(s: &FMat, cols: &[Vec<f64>]) -> f64 {
    let n = cols.len();
    let sc: Vec<Vec<f64>> = cols.iter().map(|c| (0..s.len()).map(|i| s[i].iter().zip(c).map(|(x, y)| x * y).sum()).collect()).collect();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v: f64 = cols[i].iter().zip(&sc[j]).map(|(x, y)| x * y).sum();
                worst = worst.max(v.abs());
            }
        }
    }
    worst
}

/// Some rational t with A + tB ≻ 0.
pub fn exists_pd_in_line(a: &SymMatrix, b: &SymMatrix) -> Option<Rat> {
    let iv = psd_interval(a, b);
    if iv.empty {
        return None;
    }
    let mut cands = Vec::new();
    if let Some(r) = &iv.exact_member {
        cands.push(r.clone());
    }
    let mid = match (iv.lo.is_finite(), iv.hi.is_finite()) {
        (true, true) => 0.5 * (iv.lo + iv.hi),
        (true, false) => iv.lo + 1.0,
        (false, true) => iv.hi - 1.0,
        (false, false) => 0.0,
    };
    for den in [1u64, 100, 1_000_000] {
        cands.push(rationalize(mid, den));
    }
    if let Some(r) = from_f64_exact(mid) {
        cands.push(r);
    }
    cands.into_iter().find(|t| is_pd(&a.comb(&ri(1), b, t)))
}

pub fn exact_inertia_matches_float(s: &SymMatrix) -> bool {
    float_inertia(&s.to_f64()).map(|fi| fi == inertia(s)).unwrap_or(false)
}

pub fn dot_f(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}
