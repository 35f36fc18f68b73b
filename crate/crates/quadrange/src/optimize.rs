//! min f(x) s.t. g(x) ∈ −P with P ∈ {{0}, R₊}: duality, S-lemma, KKT and existence.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::convexity::{augmented_convexity, Condition};
use crate::core::{add_vec, dot, is_zero_vec, scale_vec, sub_vec, unit, zeros, PlaneDirection, QuadraticFunction, QuadraticPair, SymMatrix, Vector};
use crate::error::{QrError, Result};
use crate::linalg::{inertia, is_psd, kernel_basis, kernel_of_rows, ldl, quad_inf, restrict_form, solve_rows, QuadInf};
use crate::pencil::{eig_sym_f64, golden_max, psd_interval};
use crate::range::{isotropic_in, nd_check};
use crate::scalar::{fmt_rat, from_f64_exact, rat_sqrt, rationalize, ri, to_f64, Rat, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cone {
    Zero,
    NonNeg,
}

impl Cone {
    /// λ ∈ P*.
    pub fn dual_contains(self, l: &Rat) -> bool {
        self == Cone::Zero || !l.is_negative()
    }

    pub fn feasible(self, gv: &Rat) -> bool {
        match self {
            Cone::Zero => gv.is_zero(),
            Cone::NonNeg => !gv.is_positive(),
        }
    }

    fn feasible_f64(self, gv: f64, tol: f64) -> bool {
        match self {
            Cone::Zero => gv.abs() <= tol,
            Cone::NonNeg => gv <= tol,
        }
    }
}

/// An extended rational: −∞, a finite value, or +∞.
#[derive(Clone, Debug, PartialEq)]
pub enum Ext {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl Ext {
    pub fn to_f64(&self) -> f64 {
        match self {
            Ext::NegInf => f64::NEG_INFINITY,
            Ext::Finite(r) => to_f64(r),
            Ext::PosInf => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Ext::Finite(r) => Some(r),
            _ => None,
        }
    }
}

impl Serialize for Ext {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ext::NegInf => s.serialize_str("-inf"),
            Ext::Finite(r) => s.serialize_str(&fmt_rat(r)),
            Ext::PosInf => s.serialize_str("inf"),
        }
    }
}

// ---------------------------------------------------------------- helpers

/// q(x0 + τv) = c0 + c1·τ + c2·τ².
pub fn line_coeffs(q: &QuadraticFunction, x0: &[Rat], v: &[Rat]) -> [Rat; 3] {
    let c0 = q.eval(x0).expect("dimension");
    let c1 = dot(&q.gradient(x0).expect("dimension"), v);
    let c2 = q.a_mat.form(v, v);
    [c0, c1, c2]
}

/// Rational roots of c0 + c1·τ + c2·τ²; None when the polynomial vanishes identically.
fn rational_roots(c: &[Rat; 3]) -> Option<Vec<Rat>> {
    let [c0, c1, c2] = c;
    if c2.is_zero() {
        if c1.is_zero() {
            return if c0.is_zero() { None } else { Some(Vec::new()) };
        }
        return Some(vec![-c0 / c1]);
    }
    let disc = c1 * c1 - ri(4) * c2 * c0;
    if disc.is_negative() {
        return Some(Vec::new());
    }
    Some(match rat_sqrt(&disc) {
        Some(r) => {
            let two_a = ri(2) * c2;
            vec![(-c1 + &r) / &two_a, (-c1 - r) / two_a]
        }
        None => Vec::new(),
    })
}

fn float_roots(c: [f64; 3]) -> Vec<f64> {
    let [c0, c1, c2] = c;
    if c2 == 0.0 {
        return if c1 != 0.0 { vec![-c0 / c1] } else { Vec::new() };
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return Vec::new();
    }
    // stable form
    let sg = if c1 >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (c1 + sg * disc.sqrt());
    let mut out = Vec::new();
    if q != 0.0 {
        out.push(q / c2);
        out.push(c0 / q);
    } else {
        out.push(0.0);
    }
    out
}

/// q restricted to x0 + span(w): y ↦ q(x0 + Wy).
pub fn restrict_fn(q: &QuadraticFunction, x0: &[Rat], w: &[Vector]) -> QuadraticFunction {
    let grad = q.gradient(x0).expect("dimension");
    QuadraticFunction {
        a_mat: restrict_form(&q.a_mat, w),
        lin: w.iter().map(|wi| dot(&grad, wi)).collect(),
        k: q.eval(x0).expect("dimension"),
    }
}

fn lift(x0: &[Rat], w: &[Vector], y: &[Rat]) -> Vector {
    let mut x = x0.to_vec();
    for (yi, wi) in y.iter().zip(w) {
        x = add_vec(&x, &scale_vec(yi, wi));
    }
    x
}

fn lagrangian(pair: &QuadraticPair, l: &Rat) -> QuadraticFunction {
    pair.f.comb(&Rat::one(), &pair.g, l)
}

fn eval_f64(q: &QuadraticFunction, x: &[f64]) -> f64 {
    q.eval_f64(x)
}

fn vf64(x: &[Rat]) -> Vec<f64> {
    x.iter().map(to_f64).collect()
}

// ---------------------------------------------------------------- g_range

#[derive(Clone, Debug, Serialize)]
pub struct GRange {
    pub inf: Ext,
    pub sup: Ext,
    /// Finite bounds of a quadratic are always attained.
    #[serde(serialize_with = "crate::report::ser_opt_vec")]
    pub argmin: Option<Vector>,
    #[serde(serialize_with = "crate::report::ser_opt_vec")]
    pub argmax: Option<Vector>,
}

impl GRange {
    pub fn contains_zero(&self) -> bool {
        let lo_ok = match &self.inf {
            Ext::Finite(r) => !r.is_positive(),
            _ => true,
        };
        let hi_ok = match &self.sup {
            Ext::Finite(r) => !r.is_negative(),
            _ => true,
        };
        lo_ok && hi_ok
    }
}

pub fn g_range(g: &QuadraticFunction) -> GRange {
    let (inf, argmin) = match quad_inf(&g.a_mat, &g.lin, &g.k) {
        QuadInf::Finite { value, argmin } => (Ext::Finite(value), Some(argmin)),
        QuadInf::MinusInfinity => (Ext::NegInf, None),
    };
    let ng = g.neg();
    let (sup, argmax) = match quad_inf(&ng.a_mat, &ng.lin, &ng.k) {
        QuadInf::Finite { value, argmin } => (Ext::Finite(-value), Some(argmin)),
        QuadInf::MinusInfinity => (Ext::PosInf, None),
    };
    GRange { inf, sup, argmin, argmax }
}

/// A rational point with sign(q(x)) == sign (strict), if q takes such values.
pub fn find_sign_point(q: &QuadraticFunction, sign: i32) -> Option<Vector> {
    let n = q.n();
    let ok = |x: &Vector| {
        let v = q.eval(x).expect("dimension");
        if sign < 0 { v.is_negative() } else { v.is_positive() }
    };
    let r = g_range(q);
    let mut bases = vec![zeros(n)];
    bases.extend(if sign < 0 { r.argmin.clone() } else { r.argmax.clone() });
    for b in &bases {
        if ok(b) {
            return Some(b.clone());
        }
    }
    let f = ldl(&q.a_mat);
    let mut dirs = if sign < 0 { f.negative_dirs() } else { f.positive_dirs() };
    dirs.extend(f.kernel().into_iter().filter(|k| !dot(&q.lin, k).is_zero()));
    dirs.extend((0..n).map(|i| unit(n, i)));
    for b in &bases {
        for d in &dirs {
            let mut t = ri(1);
            for _ in 0..64 {
                for s in [t.clone(), -t.clone()] {
                    let x = add_vec(b, &scale_vec(&s, d));
                    if ok(&x) {
                        return Some(x);
                    }
                }
                t = t * ri(2);
            }
        }
    }
    None
}

// ---------------------------------------------------------------- slater

#[derive(Clone, Debug, Serialize)]
pub struct SlaterReport {
    pub ok: bool,
    pub g_identically_zero: bool,
    #[serde(serialize_with = "crate::report::ser_opt_vec")]
    pub x_neg: Option<Vector>,
    #[serde(serialize_with = "crate::report::ser_opt_vec")]
    pub x_pos: Option<Vector>,
}

pub fn slater_check(pair: &QuadraticPair, cone: Cone) -> SlaterReport {
    let g = &pair.g;
    let r = g_range(g);
    let neg = matches!(&r.inf, Ext::NegInf) || r.inf.finite().is_some_and(|v| v.is_negative());
    let pos = matches!(&r.sup, Ext::PosInf) || r.sup.finite().is_some_and(|v| v.is_positive());
    let x_neg = if neg { find_sign_point(g, -1) } else { None };
    let x_pos = if pos { find_sign_point(g, 1) } else { None };
    let ok = match cone {
        Cone::Zero => neg && pos,
        Cone::NonNeg => neg,
    };
    SlaterReport { ok, g_identically_zero: g.is_identically_zero(), x_neg, x_pos }
}

// ---------------------------------------------------------------- dual value

/// q(λ) = inf_x f(x) + λ g(x), exact.
pub fn dual_value(pair: &QuadraticPair, lambda: &Rat, cone: Cone) -> Result<Ext> {
    if !cone.dual_contains(lambda) {
        return Err(QrError::Precondition(format!("lambda = {} is outside the dual cone", fmt_rat(lambda))));
    }
    Ok(dual_value_unchecked(pair, lambda))
}

fn dual_value_unchecked(pair: &QuadraticPair, lambda: &Rat) -> Ext {
    let l = lagrangian(pair, lambda);
    match quad_inf(&l.a_mat, &l.lin, &l.k) {
        QuadInf::Finite { value, .. } => Ext::Finite(value),
        QuadInf::MinusInfinity => Ext::NegInf,
    }
}

// ---------------------------------------------------------------- dual solve

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MuStatus {
    /// μ is finite with lower ≤ μ ≤ upper.
    Finite {
        #[serde(serialize_with = "crate::report::ser_ext")]
        lower: f64,
        #[serde(serialize_with = "crate::report::ser_ext")]
        upper: f64,
    },
    MinusInfinity { reason: String },
    /// Finiteness not decided; bounds only.
    Unresolved {
        #[serde(serialize_with = "crate::report::ser_ext")]
        lower: f64,
        #[serde(serialize_with = "crate::report::ser_ext")]
        upper: f64,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct DualReport {
    pub cone: Cone,
    pub slater: bool,
    #[serde(serialize_with = "crate::report::ser_ext")]
    pub lambda_lo: f64,
    #[serde(serialize_with = "crate::report::ser_ext")]
    pub lambda_hi: f64,
    pub lambda_empty: bool,
    #[serde(serialize_with = "crate::report::ser_ext")]
    pub nu: f64,
    #[serde(serialize_with = "crate::report::ser_opt_rat")]
    pub nu_exact: Option<Rat>,
    pub lambda_star: Option<Scalar>,
    pub dual_attained: bool,
    pub primal_attained: bool,
    pub x_star: Option<Vec<f64>>,
    #[serde(serialize_with = "crate::report::ser_opt_vec")]
    pub x_star_exact: Option<Vector>,
    pub mu_status: MuStatus,
    pub strong_duality: bool,
    pub diagnostics: Vec<String>,
}

impl DualReport {
    pub fn mu_lower(&self) -> f64 {
        match &self.mu_status {
            MuStatus::Finite { lower, .. } | MuStatus::Unresolved { lower, .. } => *lower,
            MuStatus::MinusInfinity { .. } => f64::NEG_INFINITY,
        }
    }

    pub fn mu_upper(&self) -> f64 {
        match &self.mu_status {
            MuStatus::Finite { upper, .. } | MuStatus::Unresolved { upper, .. } => *upper,
            MuStatus::MinusInfinity { .. } => f64::NEG_INFINITY,
        }
    }
}

pub fn feasible_set_nonempty(pair: &QuadraticPair, cone: Cone) -> bool {
    let r = g_range(&pair.g);
    match cone {
        Cone::Zero => r.contains_zero(),
        Cone::NonNeg => !r.inf.finite().is_some_and(|v| v.is_positive()),
    }
}

// Interior behaviour of dom q: on the open interior of Λ the kernel of A + λB is
// ker A ∩ ker B, so a + λb must be orthogonal to it.
enum InteriorDom {
    All,
    Single(Rat),
    Empty,
}

fn interior_dom(pair: &QuadraticPair) -> InteriorDom {
    let k = crate::linalg::intersect_kernels(pair.a(), pair.b());
    let mut pinned: Option<Rat> = None;
    for v in &k {
        let al = dot(&pair.f.lin, v);
        let be = dot(&pair.g.lin, v);
        if be.is_zero() {
            if !al.is_zero() {
                return InteriorDom::Empty;
            }
            continue;
        }
        let l0 = -al / be;
        match &pinned {
            Some(p) if *p != l0 => return InteriorDom::Empty,
            _ => pinned = Some(l0),
        }
    }
    match pinned {
        Some(p) => InteriorDom::Single(p),
        None => InteriorDom::All,
    }
}

struct Domain {
    lo: f64,
    hi: f64,
    empty: bool,
    exact_pts: Vec<Rat>,
}

fn dual_domain(pair: &QuadraticPair, cone: Cone) -> Domain {
    let pi = psd_interval(pair.a(), pair.b());
    if pi.empty {
        return Domain { lo: f64::NAN, hi: f64::NAN, empty: true, exact_pts: Vec::new() };
    }
    let mut pts: Vec<Rat> = [pi.exact_lo.clone(), pi.exact_hi.clone(), pi.exact_member.clone()].into_iter().flatten().collect();
    let (mut lo, hi) = (pi.lo, pi.hi);
    if cone == Cone::NonNeg {
        if hi < 0.0 && !pts.iter().any(|p| !p.is_negative()) {
            return Domain { lo: f64::NAN, hi: f64::NAN, empty: true, exact_pts: Vec::new() };
        }
        if lo <= 0.0 {
            lo = 0.0;
            if is_psd(pair.a()) {
                pts.push(ri(0));
            }
        }
        pts.retain(|p| !p.is_negative());
        if hi < lo && pts.is_empty() {
            return Domain { lo: f64::NAN, hi: f64::NAN, empty: true, exact_pts: Vec::new() };
        }
    }
    pts.sort();
    pts.dedup();
    Domain { lo, hi: hi.max(lo), empty: false, exact_pts: pts }
}

fn q_at_f64(pair: &QuadraticPair, l: f64) -> f64 {
    match from_f64_exact(l) {
        Some(r) => dual_value_unchecked(pair, &r).to_f64(),
        None => f64::NEG_INFINITY,
    }
}

struct DualSolution {
    nu: f64,
    nu_exact: Option<Rat>,
    lambda: Option<Scalar>,
    attained: bool,
    diags: Vec<String>,
}

fn maximize_dual(pair: &QuadraticPair, dom: &Domain) -> DualSolution {
    let mut diags = Vec::new();
    let mut best: Option<(f64, Option<Rat>, Scalar)> = None;
    let consider = |v: f64, ex: Option<Rat>, l: Scalar, best: &mut Option<(f64, Option<Rat>, Scalar)>| {
        if v == f64::NEG_INFINITY {
            return;
        }
        let better = match best.as_ref() {
            None => true,
            Some((bv, bex, _)) => match (&ex, bex) {
                (Some(a), Some(b)) => a > b,
                _ => {
                    let slack = 1e-14 * (1.0 + bv.abs());
                    v > *bv + slack || (v >= *bv - slack && ex.is_some() && bex.is_none())
                }
            },
        };
        if better {
            *best = Some((v, ex, l));
        }
    };
    let mut pts = dom.exact_pts.clone();
    let idom = interior_dom(pair);
    if let InteriorDom::Single(l0) = &idom {
        let lf = to_f64(l0);
        if lf >= dom.lo - 1e-12 && lf <= dom.hi + 1e-12 {
            pts.push(l0.clone());
        }
    }
    for p in &pts {
        if let Ext::Finite(v) = dual_value_unchecked(pair, p) {
            consider(to_f64(&v), Some(v), Scalar::Exact(p.clone()), &mut best);
        }
    }
    // finite endpoints without an exact representative
    for e in [dom.lo, dom.hi] {
        if e.is_finite() && !pts.iter().any(|p| to_f64(p) == e) {
            let v = crate::oracle::dual_value_eig(pair, e);
            if v.is_finite() {
                consider(v, None, Scalar::Float(e), &mut best);
            }
        }
    }
    let mut at_infinity = false;
    if matches!(idom, InteriorDom::All) && dom.hi > dom.lo {
        let (lo, hi) = (dom.lo, dom.hi);
        let map = move |s: f64| -> f64 {
            match (lo.is_finite(), hi.is_finite()) {
                (true, true) => lo + (hi - lo) * s,
                (true, false) => lo + s / (1.0 - s),
                (false, true) => hi - (1.0 - s) / s,
                (false, false) => (std::f64::consts::PI * (s - 0.5)).tan(),
            }
        };
        let phi = |s: f64| q_at_f64(pair, map(s));
        let (s_star, v_star) = golden_max(&phi, 0.0, 1.0, 1e-15);
        let l_hat = map(s_star);
        let toward_inf = (s_star > 1.0 - 1e-7 && !hi.is_finite()) || (s_star < 1e-7 && !lo.is_finite());
        if toward_inf {
            // sup approached at infinity: refine the limit along the ray
            let sgn = if s_star > 0.5 { 1.0 } else { -1.0 };
            let mut lim = v_star;
            for e in [1e6, 1e9, 1e12, 1e15] {
                lim = lim.max(q_at_f64(pair, sgn * e));
            }
            let beats = best.as_ref().map_or(true, |(bv, _, _)| lim > *bv + 1e-9 * (1.0 + bv.abs()));
            if beats {
                at_infinity = true;
                diags.push(format!("dual supremum approached as lambda -> {}", if sgn > 0.0 { "+inf" } else { "-inf" }));
                best = Some((lim, None, Scalar::Float(sgn * f64::INFINITY)));
            }
        } else if v_star.is_finite() {
            let mut found = None;
            for den in [1u64, 2, 4, 10, 100, 1000, 10_000, 1_000_000, 1_000_000_000] {
                let r = rationalize(l_hat, den);
                let rf = to_f64(&r);
                if rf < lo || rf > hi {
                    continue;
                }
                if let Ext::Finite(v) = dual_value_unchecked(pair, &r) {
                    if to_f64(&v) >= v_star - 1e-12 * (1.0 + v_star.abs()) {
                        found = Some((r, v));
                        break;
                    }
                }
            }
            match found {
                Some((r, v)) => consider(to_f64(&v), Some(v), Scalar::Exact(r), &mut best),
                None => consider(v_star, from_f64_exact(l_hat).map(|r| dual_value_unchecked(pair, &r)).and_then(|e| e.finite().cloned()), Scalar::Float(l_hat), &mut best),
            }
        }
    }
    match best {
        None => DualSolution { nu: f64::NEG_INFINITY, nu_exact: None, lambda: None, attained: false, diags },
        Some((v, ex, l)) => {
            if at_infinity {
                DualSolution { nu: v, nu_exact: None, lambda: None, attained: false, diags }
            } else {
                let ex = match &l {
                    Scalar::Float(_) => None,
                    Scalar::Exact(_) => ex,
                };
                DualSolution { nu: v, nu_exact: ex, lambda: Some(l), attained: true, diags }
            }
        }
    }
}

/// Point of `h` (on R^k) with h(y) = 0, or with h(y) ≤ 0 when `le` is set.
fn zero_of(h: &QuadraticFunction, le: bool) -> (Option<Vector>, Option<Vec<f64>>) {
    let k = h.n();
    let origin = zeros(k);
    let h0 = h.eval(&origin).expect("dimension");
    if h0.is_zero() || (le && h0.is_negative()) {
        return (Some(origin), None);
    }
    let neg = find_sign_point(h, -1);
    if le {
        return (neg, None);
    }
    let pos = find_sign_point(h, 1);
    let (Some(p), Some(q)) = (neg, pos) else {
        return (None, None);
    };
    let d = sub_vec(&q, &p);
    let c = line_coeffs(h, &p, &d);
    if let Some(rs) = rational_roots(&c) {
        if let Some(t) = rs.into_iter().find(|t| !t.is_negative() && *t <= ri(1)) {
            return (Some(add_vec(&p, &scale_vec(&t, &d))), None);
        }
    }
    let cf = [to_f64(&c[0]), to_f64(&c[1]), to_f64(&c[2])];
    let t = float_roots(cf).into_iter().find(|t| (-1e-12..=1.0 + 1e-12).contains(t));
    match t {
        Some(t) => {
            let pf = vf64(&p);
            let df = vf64(&d);
            (None, Some(pf.iter().zip(&df).map(|(a, b)| a + t * b).collect()))
        }
        None => (None, None),
    }
}

struct Recovery {
    exact: Option<Vector>,
    approx: Option<Vec<f64>>,
}

fn recover_exact(pair: &QuadraticPair, cone: Cone, l: &Rat) -> Recovery {
    let lag = lagrangian(pair, l);
    let QuadInf::Finite { argmin: x0, .. } = quad_inf(&lag.a_mat, &lag.lin, &lag.k) else {
        return Recovery { exact: None, approx: None };
    };
    let need_equality = cone == Cone::Zero || l.is_positive();
    let null = kernel_basis(&lag.a_mat);
    let h = restrict_fn(&pair.g, &x0, &null);
    let (ex, ap) = zero_of(&h, !need_equality);
    if let Some(y) = ex {
        return Recovery { exact: Some(lift(&x0, &null, &y)), approx: None };
    }
    if let Some(y) = ap {
        let x0f = vf64(&x0);
        let x: Vec<f64> = (0..x0f.len()).map(|r| x0f[r] + null.iter().zip(&y).map(|(w, yi)| to_f64(&w[r]) * yi).sum::<f64>()).collect();
        return Recovery { exact: None, approx: Some(x) };
    }
    Recovery { exact: None, approx: None }
}

// Bisection on λ ↦ g(x(λ)) = q'(λ) near l0, inside the interior of Λ where x(λ) is unique.
fn polish_lambda(pair: &QuadraticPair, l0: f64, dom: &Domain) -> Option<f64> {
    let n = pair.n();
    let (af, bf) = (pair.a().to_f64(), pair.b().to_f64());
    let phi = |l: f64| -> Option<f64> {
        let m = crate::pencil::fcomb(&af, 1.0, &bf, l);
        let e = eig_sym_f64(&m).ok()?;
        if e.values[0] <= 1e-9 * (1.0 + crate::pencil::fmax_abs(&m)) {
            return None;
        }
        let ell: Vec<f64> = (0..n).map(|i| to_f64(&pair.f.lin[i]) + l * to_f64(&pair.g.lin[i])).collect();
        let mut x = vec![0.0; n];
        for j in 0..n {
            let q = e.column(j);
            let c: f64 = q.iter().zip(&ell).map(|(a, b)| a * b).sum();
            for r in 0..n {
                x[r] -= c / (2.0 * e.values[j]) * q[r];
            }
        }
        Some(pair.g.eval_f64(&x))
    };
    let p0 = phi(l0)?;
    if p0 == 0.0 {
        return Some(l0);
    }
    // q is concave, so q' = φ decreases: the root lies toward larger λ when φ > 0
    let dir = if p0 > 0.0 { 1.0 } else { -1.0 };
    let mut step = 1e-9 * (1.0 + l0.abs());
    let (mut good, mut bad) = (l0, None);
    for _ in 0..80 {
        let x = l0 + dir * step;
        if !(x >= dom.lo && x <= dom.hi) {
            break;
        }
        match phi(x) {
            Some(v) if v.signum() == p0.signum() => good = x,
            Some(_) => {
                bad = Some(x);
                break;
            }
            None => break,
        }
        step *= 2.0;
    }
    let mut bad = bad?;
    for _ in 0..200 {
        let mid = 0.5 * (good + bad);
        if mid == good || mid == bad {
            break;
        }
        match phi(mid) {
            Some(v) if v.signum() == p0.signum() => good = mid,
            Some(_) => bad = mid,
            None => return None,
        }
    }
    Some(0.5 * (good + bad))
}

fn recover_float(pair: &QuadraticPair, cone: Cone, l: f64) -> Recovery {
    let n = pair.n();
    let (af, bf) = (pair.a().to_f64(), pair.b().to_f64());
    let m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| af[i][j] + l * bf[i][j]).collect()).collect();
    let ell: Vec<f64> = (0..n).map(|i| to_f64(&pair.f.lin[i]) + l * to_f64(&pair.g.lin[i])).collect();
    let Ok(e) = eig_sym_f64(&m) else {
        return Recovery { exact: None, approx: None };
    };
    let tol = 1e-9 * (1.0 + crate::pencil::fmax_abs(&m));
    let mut x = vec![0.0; n];
    let mut null = Vec::new();
    for j in 0..n {
        let q = e.column(j);
        let c: f64 = q.iter().zip(&ell).map(|(a, b)| a * b).sum();
        if e.values[j].abs() <= tol {
            null.push(q);
        } else {
            for r in 0..n {
                x[r] -= c / (2.0 * e.values[j]) * q[r];
            }
        }
    }
    let gtol = 1e-8 * pair.scale();
    let need_equality = cone == Cone::Zero || l > 0.0;
    let ok = |x: &[f64]| {
        let gv = pair.g.eval_f64(x);
        if need_equality { gv.abs() <= gtol } else { gv <= gtol }
    };
    if ok(&x) {
        return Recovery { exact: None, approx: Some(x) };
    }
    for v in &null {
        let gq = |t: f64| pair.g.eval_f64(&x.iter().zip(v).map(|(a, b)| a + t * b).collect::<Vec<_>>());
        let c0 = gq(0.0);
        let c2 = 0.5 * (gq(1.0) + gq(-1.0)) - c0;
        let c1 = 0.5 * (gq(1.0) - gq(-1.0));
        for t in float_roots([c0, c1, c2]) {
            let y: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + t * b).collect();
            if ok(&y) {
                return Recovery { exact: None, approx: Some(y) };
            }
        }
    }
    Recovery { exact: None, approx: None }
}

/// Exact certificate that μ = −∞: a feasible x0 and a direction v with
/// x0 + τv feasible and f(x0 + τv) → −∞ as τ → +∞.
#[derive(Clone, Debug, Serialize)]
pub struct Descent {
    #[serde(serialize_with = "crate::report::ser_vec")]
    pub x0: Vector,
    #[serde(serialize_with = "crate::report::ser_vec")]
    pub v: Vector,
}

fn ray_feasible(cone: Cone, h: &[Rat; 3]) -> bool {
    match cone {
        Cone::Zero => h.iter().all(|c| c.is_zero()),
        Cone::NonNeg => {
            h[2].is_negative() || (h[2].is_zero() && (h[1].is_negative() || (h[1].is_zero() && !h[0].is_positive())))
        }
    }
}

fn ray_descends(f: &[Rat; 3]) -> bool {
    f[2].is_negative() || (f[2].is_zero() && f[1].is_negative())
}

struct PrimalSearch {
    upper: f64,
    descent: Option<Descent>,
}

fn exact_feasible_points(pair: &QuadraticPair, cone: Cone, extra: &[Vector]) -> Vec<Vector> {
    let n = pair.n();
    let g = &pair.g;
    let mut pts: Vec<Vector> = Vec::new();
    let push = |x: Vector, pts: &mut Vec<Vector>| {
        if cone.feasible(&g.eval(&x).expect("dimension")) && !pts.contains(&x) {
            pts.push(x);
        }
    };
    let sl = slater_check(pair, cone);
    let r = g_range(g);
    let mut bases = vec![zeros(n)];
    bases.extend(sl.x_neg.clone());
    bases.extend(sl.x_pos.clone());
    bases.extend(r.argmin.clone());
    bases.extend(r.argmax.clone());
    bases.extend(extra.iter().cloned());
    for b in &bases {
        push(b.clone(), &mut pts);
    }
    let mut dirs: Vec<Vector> = (0..n).map(|i| unit(n, i)).collect();
    let f = ldl(&g.a_mat);
    dirs.extend(f.t.iter().cloned());
    if let (Some(p), Some(q)) = (&sl.x_neg, &sl.x_pos) {
        let d = sub_vec(q, p);
        if let Some(rs) = rational_roots(&line_coeffs(g, p, &d)) {
            for t in rs {
                push(add_vec(p, &scale_vec(&t, &d)), &mut pts);
            }
        }
    }
    for b in &bases {
        for d in &dirs {
            if let Some(rs) = rational_roots(&line_coeffs(g, b, d)) {
                for t in rs {
                    push(add_vec(b, &scale_vec(&t, d)), &mut pts);
                }
            }
        }
    }
    pts
}

fn descent_directions(pair: &QuadraticPair) -> Vec<Vector> {
    let n = pair.n();
    let mut dirs: Vec<Vector> = (0..n).map(|i| unit(n, i)).collect();
    // g is constant along ker B ∩ b⊥
    let mut rows = pair.b().rows();
    rows.push(pair.g.lin.clone());
    let nb = kernel_of_rows(&rows, n);
    if !nb.is_empty() {
        let fa = ldl(&restrict_form(pair.a(), &nb));
        for col in fa.negative_dirs().into_iter().chain(fa.kernel()) {
            dirs.push(lift(&zeros(n), &nb, &col));
        }
    }
    dirs.extend(nb);
    dirs.extend(ldl(pair.a()).negative_dirs());
    if let Some(v) = isotropic_in(pair.b(), &(0..n).map(|i| unit(n, i)).collect::<Vec<_>>()) {
        dirs.push(v);
    }
    dirs
}

fn primal_search(pair: &QuadraticPair, cone: Cone, anchors: &[Vec<f64>], nulls: &[Vec<f64>], extra_exact: &[Vector]) -> PrimalSearch {
    let n = pair.n();
    let mut upper = f64::INFINITY;
    let mut descent = None;
    let pts = exact_feasible_points(pair, cone, extra_exact);
    let dirs = descent_directions(pair);
    'outer: for x0 in &pts {
        upper = upper.min(to_f64(&pair.f.eval(x0).expect("dimension")));
        for v in &dirs {
            for s in [1, -1] {
                let vs = scale_vec(&ri(s), v);
                let h = line_coeffs(&pair.g, x0, &vs);
                if ray_feasible(cone, &h) && ray_descends(&line_coeffs(&pair.f, x0, &vs)) {
                    descent = Some(Descent { x0: x0.clone(), v: vs });
                    break 'outer;
                }
            }
        }
    }
    if descent.is_some() {
        return PrimalSearch { upper: f64::NEG_INFINITY, descent };
    }
    // float refinement around anchors (near-optimal points of the Lagrangian)
    let tol = 1e-10 * pair.scale();
    let mut dirs_f: Vec<Vec<f64>> = nulls.to_vec();
    dirs_f.extend((0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()));
    if let Ok(e) = eig_sym_f64(&pair.b().to_f64()) {
        dirs_f.extend((0..n).map(|j| e.column(j)));
    }
    let mut anchors = anchors.to_vec();
    anchors.push(vec![0.0; n]);
    let anchors = &anchors;
    let feasible_tight = |y: &[f64]| cone.feasible_f64(pair.g.eval_f64(y), tol * (1.0 + y.iter().map(|v| v * v).sum::<f64>()));
    let gq = |x: &[f64]| pair.g.eval_f64(x);
    for a in anchors {
        for eps in [0.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
            for i in 0..n {
                for s in [1.0, -1.0] {
                    if eps == 0.0 && (i > 0 || s < 0.0) {
                        continue;
                    }
                    let mut b = a.clone();
                    b[i] += s * eps;
                    if cone.feasible_f64(gq(&b), tol) {
                        upper = upper.min(pair.f.eval_f64(&b));
                    }
                    for v in &dirs_f {
                        let at = |t: f64| b.iter().zip(v).map(|(x, y)| x + t * y).collect::<Vec<f64>>();
                        let c0 = gq(&b);
                        let c2 = 0.5 * (gq(&at(1.0)) + gq(&at(-1.0))) - c0;
                        let c1 = 0.5 * (gq(&at(1.0)) - gq(&at(-1.0)));
                        for t in float_roots([c0, c1, c2]) {
                            let y = at(t);
                            if feasible_tight(&y) {
                                upper = upper.min(eval_f64(&pair.f, &y));
                            }
                        }
                    }
                }
            }
        }
    }
    PrimalSearch { upper, descent: None }
}

/// μ over K = {g = 0} when g ≥ 0 (or ≤ 0) everywhere: K = {2Bx + b = 0} is affine.
fn mu_on_affine_k(pair: &QuadraticPair) -> Option<(Ext, Option<Vector>)> {
    let r = g_range(&pair.g);
    let g = if r.inf.finite().is_some_and(|v| v.is_zero()) {
        pair.g.clone()
    } else if r.sup.finite().is_some_and(|v| v.is_zero()) {
        pair.g.neg()
    } else {
        return None;
    };
    let rows: Vec<Vector> = g.a_mat.rows().into_iter().map(|row| scale_vec(&ri(2), &row)).collect();
    let rhs: Vector = g.lin.iter().map(|x| -x).collect();
    let xp = solve_rows(&rows, g.n(), &rhs)?;
    Some(inf_on_affine(&pair.f, &xp, &kernel_basis(&g.a_mat)))
}

// K = {x : g(x) = 0} for g affine.
fn mu_on_affine_g(pair: &QuadraticPair) -> Option<(Ext, Option<Vector>)> {
    let g = &pair.g;
    if !g.a_mat.is_zero() {
        return None;
    }
    let n = g.n();
    let xp = solve_rows(&[g.lin.clone()], n, &[-g.k.clone()])?;
    let w = kernel_of_rows(&[g.lin.clone()], n);
    Some(inf_on_affine(&pair.f, &xp, &w))
}

fn inf_on_affine(f: &QuadraticFunction, xp: &[Rat], w: &[Vector]) -> (Ext, Option<Vector>) {
    let fr = restrict_fn(f, xp, w);
    match quad_inf(&fr.a_mat, &fr.lin, &fr.k) {
        QuadInf::Finite { value, argmin } => (Ext::Finite(value), Some(lift(xp, w, &argmin))),
        QuadInf::MinusInfinity => (Ext::NegInf, None),
    }
}

pub fn solve_dual(pair: &QuadraticPair, cone: Cone) -> Result<DualReport> {
    if !feasible_set_nonempty(pair, cone) {
        return Err(QrError::Infeasible("g(x) never lies in -P".into()));
    }
    let slater = slater_check(pair, cone).ok;
    let dom = dual_domain(pair, cone);
    let mut diagnostics = Vec::new();
    let sol = if dom.empty {
        diagnostics.push("no lambda in P* with A + lambda B PSD: q = -inf on P*".into());
        DualSolution { nu: f64::NEG_INFINITY, nu_exact: None, lambda: None, attained: false, diags: Vec::new() }
    } else {
        maximize_dual(pair, &dom)
    };
    diagnostics.extend(sol.diags.iter().cloned());

    // primal recovery
    let (mut x_exact, mut x_approx) = (None, None);
    let mut anchors: Vec<Vec<f64>> = Vec::new();
    let mut nulls: Vec<Vec<f64>> = Vec::new();
    let mut extra: Vec<Vector> = Vec::new();
    match &sol.lambda {
        Some(Scalar::Exact(l)) => {
            let rec = recover_exact(pair, cone, l);
            x_exact = rec.exact;
            x_approx = rec.approx;
            if x_exact.is_none() && x_approx.is_none() {
                // λ* is a rational approximation; the true maximizer may be irrational
                if let Some(lp) = polish_lambda(pair, to_f64(l), &dom) {
                    x_approx = recover_float(pair, cone, lp).approx;
                }
                // hard case at an irrational endpoint of Λ
                let lf = to_f64(l);
                for e in [lf, dom.lo, dom.hi] {
                    if x_approx.is_some() || !e.is_finite() || (e - lf).abs() > 1e-6 * (1.0 + lf.abs()) {
                        continue;
                    }
                    let rec = recover_float(pair, cone, e);
                    if let Some(x) = &rec.approx {
                        anchors.push(x.clone());
                    }
                    x_approx = rec.approx;
                }
            }
            let lag = lagrangian(pair, l);
            if let QuadInf::Finite { argmin, .. } = quad_inf(&lag.a_mat, &lag.lin, &lag.k) {
                anchors.push(vf64(&argmin));
                extra.push(argmin);
            }
            nulls = kernel_basis(&lag.a_mat).iter().map(|v| vf64(v)).collect();
        }
        Some(Scalar::Float(l)) if l.is_finite() => {
            let rec = recover_float(pair, cone, *l);
            x_approx = rec.approx.clone();
            anchors.extend(rec.approx);
        }
        _ => {}
    }
    if let Some(x) = &x_exact {
        x_approx = Some(vf64(x));
    }
    let primal_attained_dual = x_approx.is_some();
    if sol.lambda.is_some() && !primal_attained_dual {
        diagnostics.push("hard-case completion found no feasible minimizer of the Lagrangian: infimum likely not attained".into());
    }

    let search = primal_search(pair, cone, &anchors, &nulls, &extra);
    let mut upper = search.upper;
    if let Some(x) = &x_approx {
        upper = upper.min(pair.f.eval_f64(x));
    }

    let mut primal_attained = primal_attained_dual;
    let mut x_star = x_approx.clone();
    let mut x_star_exact = x_exact.clone();
    let nu = sol.nu;
    let mut lower = nu;
    let mut minus_inf: Option<String> = None;
    if let Some(d) = &search.descent {
        minus_inf = Some(format!(
            "feasible ray x0 + t v with f -> -inf (x0 = [{}], v = [{}])",
            d.x0.iter().map(fmt_rat).collect::<Vec<_>>().join(", "),
            d.v.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")
        ));
    }
    let mut exact_mu = None;
    let affine = match cone {
        Cone::Zero if !slater => mu_on_affine_k(pair)
            .map(|r| (r, "Slater fails: g is sign-definite and K = argmin |g| is affine; mu computed exactly")),
        Cone::Zero => mu_on_affine_g(pair).map(|r| (r, "g is affine: mu computed exactly on K = {g = 0}")),
        Cone::NonNeg => None,
    };
    if let Some(((mu, arg), note)) = affine {
        {
            diagnostics.push(note.into());
            match mu {
                Ext::Finite(v) => {
                    lower = lower.max(to_f64(&v));
                    upper = to_f64(&v);
                    if let Some(a) = arg {
                        primal_attained = true;
                        x_star = Some(vf64(&a));
                        x_star_exact = Some(a);
                    }
                    exact_mu = Some(v);
                }
                _ => minus_inf = minus_inf.or(Some("f unbounded below on the affine set K".into())),
            }
        }
    }
    if minus_inf.is_none() && slater && nu == f64::NEG_INFINITY {
        let convex_epi = match cone {
            Cone::NonNeg => true,
            Cone::Zero => augmented_convexity(pair, &PlaneDirection::from_ints(1, 0)?)?.convex,
        };
        if convex_epi {
            minus_inf = Some("Slater holds, F + R+(1,0) convex (or P = R+) and nu = -inf".into());
        }
    }

    let scale = pair.scale();
    if upper.is_finite() && upper < lower {
        // weak duality: a float upper bound below ν is rounding in the feasibility test
        diagnostics.push(format!("float primal bound {upper:e} below nu; clamped"));
        upper = lower;
    }
    let mu_status = if let Some(reason) = minus_inf {
        MuStatus::MinusInfinity { reason }
    } else if lower.is_finite() && upper.is_finite() {
        MuStatus::Finite { lower, upper }
    } else {
        MuStatus::Unresolved { lower, upper }
    };
    let strong_duality = match &mu_status {
        MuStatus::MinusInfinity { .. } => true,
        MuStatus::Finite { upper, .. } => sol.attained && nu.is_finite() && (upper - nu).abs() <= 1e-8 * scale.max(nu.abs()),
        MuStatus::Unresolved { .. } => false,
    };
    if let (Some(v), Some(nx)) = (&exact_mu, &sol.nu_exact) {
        if v != nx && sol.attained {
            diagnostics.push(format!("duality gap: mu = {}, nu = {}", fmt_rat(v), fmt_rat(nx)));
        }
    }
    Ok(DualReport {
        cone,
        slater,
        lambda_lo: dom.lo,
        lambda_hi: dom.hi,
        lambda_empty: dom.empty,
        nu,
        nu_exact: sol.nu_exact,
        lambda_star: sol.lambda,
        dual_attained: sol.attained,
        primal_attained,
        x_star,
        x_star_exact,
        mu_status,
        strong_duality,
        diagnostics,
    })
}

// ---------------------------------------------------------------- S-lemma

#[derive(Clone, Debug, Serialize)]
pub struct SLemmaReport {
    /// (a): g(x) ∈ −P ⟹ f(x) ≥ 0. None when undecided.
    pub premise: Option<bool>,
    /// (b): a multiplier λ ∈ P* with f + λg ≥ 0 was found and validated.
    pub holds: bool,
    pub lambda: Option<Scalar>,
    pub certificate_valid: bool,
    pub hypotheses_ok: bool,
    pub warnings: Vec<String>,
}

/// Conditions among C1–C4 that hold for d = (1,0).
pub fn epigraph_conditions(pair: &QuadraticPair) -> Result<Vec<Condition>> {
    Ok(augmented_convexity(pair, &PlaneDirection::from_ints(1, 0)?)?.fired)
}

fn hypotheses(pair: &QuadraticPair, cone: Cone, warnings: &mut Vec<String>) -> Result<bool> {
    let mut ok = true;
    if !feasible_set_nonempty(pair, cone) {
        warnings.push("K_P is empty".into());
        ok = false;
    }
    if !slater_check(pair, cone).ok {
        warnings.push("Slater-type condition 0 in ri(g(R^n)+P) fails".into());
        ok = false;
    }
    if cone == Cone::Zero {
        if pair.g.is_identically_zero() {
            warnings.push("g is identically zero".into());
            ok = false;
        }
        let fired = epigraph_conditions(pair)?;
        let c123 = fired.iter().any(|c| matches!(c, Condition::C1 | Condition::C2 | Condition::C3));
        if !c123 {
            ok = false;
            if fired.contains(&Condition::C4) {
                warnings.push("only C4 holds at d = (1,0); no certificate is claimed from it".into());
            } else {
                warnings.push("none of C1-C4 holds at d = (1,0)".into());
            }
        }
    }
    Ok(ok)
}

pub fn slemma_certify(pair: &QuadraticPair, cone: Cone) -> Result<SLemmaReport> {
    let mut warnings = Vec::new();
    let hyp = hypotheses(pair, cone, &mut warnings)?;
    let tol = 1e-9 * pair.scale().max(1.0);
    let (premise, dual) = match solve_dual(pair, cone) {
        Err(QrError::Infeasible(_)) => (Some(true), None),
        Err(e) => return Err(e),
        Ok(r) => {
            let p = if r.mu_lower() >= -tol {
                Some(true)
            } else if r.mu_upper() < -tol {
                Some(false)
            } else {
                None
            };
            (p, Some(r))
        }
    };
    let mut lambda = None;
    let mut valid = false;
    if premise == Some(true) {
        let mut cands: Vec<Rat> = Vec::new();
        if let Some(r) = &dual {
            if let Some(l) = &r.lambda_star {
                match l {
                    Scalar::Exact(x) => cands.push(x.clone()),
                    Scalar::Float(x) if x.is_finite() => {
                        for den in [1u64, 10, 1000, 1_000_000, 1_000_000_000] {
                            cands.push(rationalize(*x, den));
                        }
                    }
                    _ => {}
                }
            }
        }
        let dom = dual_domain(pair, cone);
        cands.extend(dom.exact_pts);
        for c in cands {
            if !cone.dual_contains(&c) {
                continue;
            }
            if let Ext::Finite(v) = dual_value_unchecked(pair, &c) {
                if !v.is_negative() {
                    lambda = Some(Scalar::Exact(c));
                    valid = true;
                    break;
                }
                if lambda.is_none() && to_f64(&v) >= -1e-7 {
                    lambda = Some(Scalar::Exact(c));
                }
            }
        }
        if !valid && lambda.is_none() {
            warnings.push("no multiplier certificate found".into());
        }
    }
    if let Some(Scalar::Exact(l)) = &lambda {
        let m = pair.a().comb(&Rat::one(), pair.b(), l);
        valid = valid && inertia(&m).n_minus == 0;
    }
    Ok(SLemmaReport { premise, holds: valid, lambda, certificate_valid: valid, hypotheses_ok: hyp, warnings })
}

// ---------------------------------------------------------------- KKT

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KktVerdict {
    /// Stationarity, sign and A + λB ⪰ 0 hold: x̄ is a global minimizer.
    Optimal,
    /// Hypotheses hold and the conditions fail: x̄ is not a minimizer.
    NotOptimal,
    /// Conditions fail but the hypotheses do not hold either.
    NotCertified,
}

#[derive(Clone, Debug, Serialize)]
pub struct KktReport {
    pub stationarity_ok: bool,
    pub psd_ok: bool,
    pub sign_ok: bool,
    pub lambda_star: Option<Scalar>,
    pub hypotheses_ok: bool,
    pub verdict: KktVerdict,
    pub warnings: Vec<String>,
}

pub fn kkt_check(pair: &QuadraticPair, x: &[Rat], cone: Cone) -> Result<KktReport> {
    let gx = pair.g.eval(x)?;
    if !cone.feasible(&gx) {
        return Err(QrError::Infeasible(format!("g(x) = {} is not in -P", fmt_rat(&gx))));
    }
    let df = pair.f.gradient(x)?;
    let dg = pair.g.gradient(x)?;
    let psd_at = |l: &Rat| is_psd(&pair.a().comb(&Rat::one(), pair.b(), l));
    let complementary = |l: &Rat| cone == Cone::Zero || l.is_zero() || gx.is_zero();
    let (stationarity_ok, lambda) = if !is_zero_vec(&dg) {
        let l = -dot(&df, &dg) / dot(&dg, &dg);
        let res = add_vec(&df, &scale_vec(&l, &dg));
        (is_zero_vec(&res), Some(l))
    } else if is_zero_vec(&df) {
        // any λ ∈ P* works for stationarity; pick one making A + λB ⪰ 0
        let dom = dual_domain(pair, cone);
        let mut pick = dom.exact_pts.into_iter().find(|l| complementary(l) && psd_at(l));
        if pick.is_none() && cone.dual_contains(&ri(0)) {
            pick = Some(ri(0));
        }
        (true, pick)
    } else {
        (false, None)
    };
    let sign_ok = lambda.as_ref().is_some_and(|l| cone.dual_contains(l) && complementary(l));
    let psd_ok = lambda.as_ref().is_some_and(|l| psd_at(l));
    let mut warnings = Vec::new();
    let hyp = hypotheses(pair, cone, &mut warnings)?;
    let verdict = if stationarity_ok && sign_ok && psd_ok {
        KktVerdict::Optimal
    } else if hyp {
        KktVerdict::NotOptimal
    } else {
        KktVerdict::NotCertified
    };
    Ok(KktReport { stationarity_ok, psd_ok, sign_ok, lambda_star: lambda.map(Scalar::Exact), hypotheses_ok: hyp, verdict, warnings })
}

// ---------------------------------------------------------------- no Slater

#[derive(Clone, Debug, Serialize)]
pub struct NoSlaterReport {
    pub solvable: bool,
    pub b_psd: bool,
    pub a_psd_on_ker_b: bool,
    #[serde(serialize_with = "crate::report::ser_opt_vec")]
    pub x_bar: Option<Vector>,
    #[serde(serialize_with = "crate::report::ser_opt_vec")]
    pub v: Option<Vector>,
    pub reason: Option<String>,
}

/// P = {0} with g ≥ 0 (or g ≤ 0) everywhere.
pub fn solve_no_slater(pair: &QuadraticPair) -> Result<NoSlaterReport> {
    let r = g_range(&pair.g);
    let g = if !r.inf.finite().is_some_and(|v| v.is_negative()) && !matches!(r.inf, Ext::NegInf) {
        pair.g.clone()
    } else if !r.sup.finite().is_some_and(|v| v.is_positive()) && !matches!(r.sup, Ext::PosInf) {
        pair.g.neg()
    } else {
        return Err(QrError::Precondition("g takes both signs".into()));
    };
    let n = pair.n();
    let b_psd = is_psd(&g.a_mat);
    let kb = kernel_basis(&g.a_mat);
    let a_psd_on_ker_b = kb.is_empty() || is_psd(&restrict_form(pair.a(), &kb));
    let mut out = NoSlaterReport { solvable: false, b_psd, a_psd_on_ker_b, x_bar: None, v: None, reason: None };
    if !g_range(&g).inf.finite().is_some_and(|v| v.is_zero()) {
        out.reason = Some("inf g > 0: K_P is empty".into());
        return Ok(out);
    }
    if !b_psd || !a_psd_on_ker_b {
        out.reason = Some(if !b_psd { "B is not PSD" } else { "A is not PSD on ker B" }.into());
        return Ok(out);
    }
    // 2Ax + a + 2Bv = 0, 2Bx + b = 0
    let mut rows = Vec::with_capacity(2 * n);
    let mut rhs = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut row = zeros(2 * n);
        for j in 0..n {
            row[j] = ri(2) * pair.a().get(i, j);
            row[n + j] = ri(2) * g.a_mat.get(i, j);
        }
        rows.push(row);
        rhs.push(-&pair.f.lin[i]);
    }
    for i in 0..n {
        let mut row = zeros(2 * n);
        for j in 0..n {
            row[j] = ri(2) * g.a_mat.get(i, j);
        }
        rows.push(row);
        rhs.push(-&g.lin[i]);
    }
    match solve_rows(&rows, 2 * n, &rhs) {
        Some(sol) => {
            out.solvable = true;
            out.x_bar = Some(sol[..n].to_vec());
            out.v = Some(sol[n..].to_vec());
        }
        None => out.reason = Some("no (x, v) solves the optimality system: f has no minimizer on K".into()),
    }
    Ok(out)
}

// ---------------------------------------------------------------- finiteness

#[derive(Clone, Debug, Serialize)]
pub struct FinitenessReport {
    pub cone: Cone,
    /// P = R₊: ⟨Bv,v⟩ ≤ 0 ⟹ ⟨Av,v⟩ ≥ 0.
    pub cond_gene: Option<bool>,
    pub cond_gene_lambda: Option<Scalar>,
    /// Direction with ⟨Bv,v⟩ ≤ 0 (= 0 for P = {0}) and ⟨Av,v⟩ < 0.
    #[serde(serialize_with = "crate::report::ser_opt_vec")]
    pub v: Option<Vector>,
    pub bv_zero: Option<bool>,
    pub b_dot_v_sign: Option<i32>,
    pub mu_minus_infinity: bool,
    pub descent: Option<Descent>,
    pub mechanism: Vec<String>,
}

fn neg_dir_on(a: &SymMatrix, basis: &[Vector], n: usize) -> Option<Vector> {
    if basis.is_empty() {
        return None;
    }
    let f = ldl(&restrict_form(a, basis));
    f.negative_dirs().first().map(|c| lift(&zeros(n), basis, c))
}

pub fn finiteness_preconditions(pair: &QuadraticPair, cone: Cone) -> Result<FinitenessReport> {
    let n = pair.n();
    let (a, b) = (pair.a(), pair.b());
    let feasible = feasible_set_nonempty(pair, cone);
    let mut rep = FinitenessReport {
        cone,
        cond_gene: None,
        cond_gene_lambda: None,
        v: None,
        bv_zero: None,
        b_dot_v_sign: None,
        mu_minus_infinity: false,
        descent: None,
        mechanism: Vec::new(),
    };
    let ib = inertia(b);
    match cone {
        Cone::NonNeg => {
            if ib.n_minus > 0 {
                let dom = dual_domain(pair, cone);
                let l = dom.exact_pts.first().cloned();
                rep.cond_gene = Some(!dom.empty);
                rep.cond_gene_lambda = l.map(Scalar::Exact).or(if dom.empty { None } else { Some(Scalar::Float(dom.lo)) });
                if dom.empty {
                    // some v with ⟨Bv,v⟩ ≤ 0 and ⟨Av,v⟩ < 0
                    let fa = ldl(a);
                    rep.v = fa.negative_dirs().into_iter().find(|v| !b.form(v, v).is_positive());
                }
            } else {
                let kb = kernel_basis(b);
                let v = neg_dir_on(a, &kb, n);
                rep.cond_gene = Some(v.is_none());
                rep.v = v;
            }
            if rep.cond_gene == Some(false) && feasible {
                rep.mu_minus_infinity = true;
                rep.mechanism.push("necessary condition for finite mu fails: mu = -inf".into());
            }
        }
        Cone::Zero => {
            let v = if ib.is_semidefinite() {
                neg_dir_on(a, &kernel_basis(b), n)
            } else {
                let full: Vec<Vector> = (0..n).map(|i| unit(n, i)).collect();
                let mut found = None;
                let fb = ldl(b);
                'search: for (dp, p) in fb.d.iter().zip(&fb.t).filter(|(d, _)| d.is_positive()) {
                    for (dq, q) in fb.d.iter().zip(&fb.t).filter(|(d, _)| d.is_negative()) {
                        if let Some(r) = rat_sqrt(&(-dq / dp)) {
                            for s in [1, -1] {
                                let w: Vector = p.iter().zip(q).map(|(pi, qi)| &r * pi + ri(s) * qi).collect();
                                if a.form(&w, &w).is_negative() {
                                    found = Some(w);
                                    break 'search;
                                }
                            }
                        }
                    }
                }
                found.or_else(|| isotropic_in(b, &full).filter(|w| a.form(w, w).is_negative()))
            };
            if let Some(v) = &v {
                let bv = b.mul_vec(v);
                let bz = is_zero_vec(&bv);
                let s = crate::scalar::sign(&dot(&pair.g.lin, v));
                rep.bv_zero = Some(bz);
                rep.b_dot_v_sign = Some(s);
                if !bz && feasible {
                    rep.mu_minus_infinity = true;
                    rep.mechanism.push("<Bv,v> = 0, <Av,v> < 0 and Bv != 0: mu = -inf".into());
                } else if bz && s == 0 && feasible {
                    rep.mu_minus_infinity = true;
                    rep.mechanism.push("g is constant along v and f -> -inf along it: mu = -inf".into());
                } else if bz {
                    rep.mechanism.push(format!(
                        "Bv = 0, <b,v> {} 0: f(x+tv) -> -inf as |t| -> inf for every x, while g(x+tv) is affine in t",
                        if s > 0 { ">" } else { "<" }
                    ));
                }
            }
            rep.v = v;
        }
    }
    if feasible {
        let search = primal_search(pair, cone, &[], &[], &[]);
        if let Some(d) = search.descent {
            rep.mu_minus_infinity = true;
            rep.mechanism.push(format!(
                "feasible ray: g(x0 + t v) in -P for t >= 0 and f(x0 + t v) -> -inf, x0 = [{}], v = [{}]",
                d.x0.iter().map(fmt_rat).collect::<Vec<_>>().join(", "),
                d.v.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")
            ));
            rep.descent = Some(d);
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------- existence

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArgminStatus {
    NonemptyCompact,
    Nonempty,
    Attained,
    /// Dual recovery found no feasible minimizer and ND fails.
    EmptyDiagnosed,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExistenceReport {
    pub nd_holds: bool,
    pub argmin_status: ArgminStatus,
    #[serde(serialize_with = "crate::report::ser_opt_vec")]
    pub constructed_solution: Option<Vector>,
    pub notes: Vec<String>,
}

pub fn existence_report(pair: &QuadraticPair, cone: Cone) -> Result<ExistenceReport> {
    let nd = nd_check(pair);
    let dual = solve_dual(pair, cone)?;
    let mu_finite = matches!(dual.mu_status, MuStatus::Finite { .. });
    let mut notes = Vec::new();
    let mut constructed = None;
    let status = if nd.holds && mu_finite {
        match cone {
            Cone::Zero => ArgminStatus::NonemptyCompact,
            Cone::NonNeg => {
                constructed = recession_solution(pair);
                if constructed.is_some() {
                    notes.push("x0 = argmin f (min-norm) moved along v with Av = 0, <a,v> = 0, <Bv,v> < 0".into());
                }
                ArgminStatus::Nonempty
            }
        }
    } else if dual.primal_attained {
        ArgminStatus::Attained
    } else if !nd.holds && mu_finite && !dual.primal_attained {
        notes.push("ND fails and no feasible minimizer of the Lagrangian exists at lambda*".into());
        ArgminStatus::EmptyDiagnosed
    } else {
        ArgminStatus::Unknown
    };
    if constructed.is_none() && status == ArgminStatus::Attained {
        constructed = dual.x_star_exact.clone();
    }
    Ok(ExistenceReport { nd_holds: nd.holds, argmin_status: status, constructed_solution: constructed, notes })
}

fn recession_solution(pair: &QuadraticPair) -> Option<Vector> {
    let n = pair.n();
    let a = pair.a();
    let QuadInf::Finite { argmin: x0, .. } = quad_inf(a, &pair.f.lin, &pair.f.k) else {
        return None;
    };
    let mut rows = a.rows();
    rows.push(pair.f.lin.clone());
    let w = kernel_of_rows(&rows, n);
    let v = neg_dir_on(pair.b(), &w, n)?;
    let mut t = ri(1);
    for _ in 0..64 {
        for s in [t.clone(), -t.clone()] {
            let x = add_vec(&x0, &scale_vec(&s, &v));
            if !pair.g.eval(&x).ok()?.is_positive() {
                return Some(x);
            }
        }
        t = t * ri(2);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rq;

    fn qf(a: Vec<Vec<Rat>>, lin: &[i64], k: Rat) -> QuadraticFunction {
        QuadraticFunction::new(SymMatrix::from_rows("M", a).unwrap(), lin.iter().map(|&x| ri(x)).collect(), k).unwrap()
    }

    fn s_lema() -> QuadraticPair {
        QuadraticPair::new(
            qf(vec![vec![ri(1), ri(0)], vec![ri(0), ri(0)]], &[0, 0], ri(0)),
            qf(vec![vec![ri(0), ri(1)], vec![ri(1), ri(0)]], &[0, 0], ri(1)),
        )
        .unwrap()
    }

    #[test]
    fn s_lema_dual() {
        let r = solve_dual(&s_lema(), Cone::Zero).unwrap();
        assert_eq!(r.nu_exact, Some(ri(0)));
        assert_eq!(r.lambda_star, Some(Scalar::Exact(ri(0))));
        assert!(!r.primal_attained);
        assert!(r.mu_upper() <= 1e-8);
    }

    #[test]
    fn roots() {
        assert_eq!(rational_roots(&[ri(-1), ri(0), ri(1)]).unwrap().len(), 2);
        assert_eq!(rational_roots(&[ri(0), ri(0), ri(0)]), None);
        assert_eq!(rational_roots(&[ri(1), ri(2), ri(0)]).unwrap(), vec![rq(-1, 2)]);
        let f = float_roots([-2.0, 0.0, 1.0]);
        assert!(f.iter().any(|t| (t - 2f64.sqrt()).abs() < 1e-12));
    }
}
