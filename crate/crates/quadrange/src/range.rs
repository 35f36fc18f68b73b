//! The homogeneous joint range F_H(R^n) = {(⟨Au,u⟩, ⟨Bu,u⟩)}: cone
//! classification, non-degeneracy, boundary lines and the property battery.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::core::{
    cross2, cross_term, dot2, hom_part, is_zero_pt, is_zero_vec, perp_pt, primitive_vec, unit, PlaneDirection, PlanePoint,
    QuadraticPair, SymMatrix, Vector,
};
use crate::error::{QrError, Result};
use crate::linalg::{inertia, intersect_kernels, kernel_basis, ldl, restrict_form};
use crate::pencil::{
    angular_sweep, definite_member, exists_pd_in_line, fcomb, lambda_min_f64, pair_tol, proportionality, psd_interval, simdiag,
    Proportional, SdVerdict,
};
use crate::scalar::{rat_sqrt, rationalize, ri, sign, to_f64, Rat};

/// A cone generator: exact primitive direction or a unit float vector.
#[derive(Clone, Debug, PartialEq)]
pub enum Gen {
    Exact(PlaneDirection),
    Approx([f64; 2]),
}

impl Gen {
    pub fn from_point(p: &PlanePoint) -> Gen {
        Gen::Exact(PlaneDirection::from_point(p).expect("nonzero generator"))
    }

    pub fn approx(x: [f64; 2]) -> Gen {
        let r = x[0].hypot(x[1]);
        Gen::Approx([x[0] / r, x[1] / r])
    }

    pub fn f64(&self) -> [f64; 2] {
        match self {
            Gen::Exact(d) => {
                let p = d.as_f64();
                let r = p[0].hypot(p[1]);
                [p[0] / r, p[1] / r]
            }
            Gen::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&PlaneDirection> {
        match self {
            Gen::Exact(d) => Some(d),
            Gen::Approx(_) => None,
        }
    }

    pub fn neg(&self) -> Gen {
        match self {
            Gen::Exact(d) => Gen::Exact(d.neg()),
            Gen::Approx(x) => Gen::Approx([-x[0], -x[1]]),
        }
    }
}

impl Serialize for Gen {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Gen::Exact(d) => [d.d1().to_string(), d.d2().to_string()].serialize(s),
            Gen::Approx(x) => x.serialize(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeKind {
    Zero,
    Ray { dir: Gen },
    Line { dir: Gen },
    /// Counterclockwise from `from` to `to`.
    PointedSector { from: Gen, to: Gen },
    /// {x : ⟨normal, x⟩ ≥ 0}.
    Halfplane { normal: Gen },
    Plane,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Closed {
    Yes,
    No,
    Unknown,
}

/// `kind` describes the closure of F_H(R^n); `closed` qualifies the set itself.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeClass {
    #[serde(flatten)]
    pub kind: ConeKind,
    pub closed: Closed,
}

impl ConeClass {
    fn new(kind: ConeKind, closed: Closed) -> Self {
        ConeClass { kind, closed }
    }

    /// Membership of x in the closure, with an absolute slack.
    pub fn closure_contains(&self, x: [f64; 2], slack: f64) -> bool {
        let cr = |u: [f64; 2], v: [f64; 2]| u[0] * v[1] - u[1] * v[0];
        let dt = |u: [f64; 2], v: [f64; 2]| u[0] * v[0] + u[1] * v[1];
        match &self.kind {
            ConeKind::Zero => x[0].abs() <= slack && x[1].abs() <= slack,
            ConeKind::Ray { dir } => {
                let g = dir.f64();
                cr(g, x).abs() <= slack && dt(g, x) >= -slack
            }
            ConeKind::Line { dir } => cr(dir.f64(), x).abs() <= slack,
            ConeKind::PointedSector { from, to } => cr(from.f64(), x) >= -slack && cr(x, to.f64()) >= -slack,
            ConeKind::Halfplane { normal } => dt(normal.f64(), x) >= -slack,
            ConeKind::Plane => true,
        }
    }

    /// Exact membership in the closure, when all generators are exact.
    pub fn closure_contains_exact(&self, x: &PlanePoint) -> Option<bool> {
        let e = |g: &Gen| g.exact().map(|d| d.as_point());
        Some(match &self.kind {
            ConeKind::Zero => is_zero_pt(x),
            ConeKind::Ray { dir } => {
                let g = e(dir)?;
                cross2(&g, x).is_zero() && !dot2(&g, x).is_negative()
            }
            ConeKind::Line { dir } => cross2(&e(dir)?, x).is_zero(),
            ConeKind::PointedSector { from, to } => {
                !cross2(&e(from)?, x).is_negative() && !cross2(x, &e(to)?).is_negative()
            }
            ConeKind::Halfplane { normal } => !dot2(&e(normal)?, x).is_negative(),
            ConeKind::Plane => true,
        })
    }

    pub fn is_plane(&self) -> bool {
        matches!(self.kind, ConeKind::Plane)
    }
}

fn sector(u: Gen, v: Gen) -> ConeKind {
    let (a, b) = (u.f64(), v.f64());
    if a[0] * b[1] - a[1] * b[0] >= 0.0 {
        ConeKind::PointedSector { from: u, to: v }
    } else {
        ConeKind::PointedSector { from: v, to: u }
    }
}

fn mat2_apply(m: &[[Rat; 2]; 2], v: &PlanePoint) -> PlanePoint {
    [&m[0][0] * &v[0] + &m[0][1] * &v[1], &m[1][0] * &v[0] + &m[1][1] * &v[1]]
}

// F_H(cos φ, sin φ) = c + M (cos 2φ, sin 2φ): the image of the unit circle is an ellipse.
fn classify_2(a: &SymMatrix, b: &SymMatrix) -> ConeClass {
    let half = Rat::new(1.into(), 2.into());
    let (a11, a12, a22) = (a.get(0, 0), a.get(0, 1), a.get(1, 1));
    let (b11, b12, b22) = (b.get(0, 0), b.get(0, 1), b.get(1, 1));
    let c: PlanePoint = [(a11 + a22) * &half, (b11 + b22) * &half];
    let m = [[(a11 - a22) * &half, a12.clone()], [(b11 - b22) * &half, b12.clone()]];
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    if !det.is_zero() {
        let minv = [[&m[1][1] / &det, -&m[0][1] / &det], [-&m[1][0] / &det, &m[0][0] / &det]];
        let mc = mat2_apply(&minv, &c);
        let p: PlanePoint = [-&mc[0], -&mc[1]];
        let r2 = dot2(&p, &p);
        let one = Rat::one();
        if r2 < one {
            return ConeClass::new(ConeKind::Plane, Closed::Yes);
        }
        if r2 == one {
            let t = mat2_apply(&m, &perp_pt(&p));
            let mut nrm = perp_pt(&t);
            if dot2(&nrm, &c).is_negative() {
                nrm = [-&nrm[0], -&nrm[1]];
            }
            return ConeClass::new(ConeKind::Halfplane { normal: Gen::from_point(&nrm) }, Closed::No);
        }
        let s2 = &r2 - &one;
        let pp = perp_pt(&p);
        let kind = match rat_sqrt(&s2) {
            Some(s) => {
                let g1 = mat2_apply(&m, &[-&s * &p[0] + &pp[0], -&s * &p[1] + &pp[1]]);
                let g2 = mat2_apply(&m, &[-&s * &p[0] - &pp[0], -&s * &p[1] - &pp[1]]);
                sector(Gen::from_point(&g1), Gen::from_point(&g2))
            }
            None => {
                let s = to_f64(&s2).sqrt();
                let mf = [[to_f64(&m[0][0]), to_f64(&m[0][1])], [to_f64(&m[1][0]), to_f64(&m[1][1])]];
                let (pf, ppf) = ([to_f64(&p[0]), to_f64(&p[1])], [to_f64(&pp[0]), to_f64(&pp[1])]);
                let ap = |v: [f64; 2]| [mf[0][0] * v[0] + mf[0][1] * v[1], mf[1][0] * v[0] + mf[1][1] * v[1]];
                let g1 = ap([-s * pf[0] + ppf[0], -s * pf[1] + ppf[1]]);
                let g2 = ap([-s * pf[0] - ppf[0], -s * pf[1] - ppf[1]]);
                sector(Gen::approx(g1), Gen::approx(g2))
            }
        };
        return ConeClass::new(kind, Closed::Yes);
    }
    let mzero = m.iter().flatten().all(|x| x.is_zero());
    if mzero {
        let kind = if is_zero_pt(&c) { ConeKind::Zero } else { ConeKind::Ray { dir: Gen::from_point(&c) } };
        return ConeClass::new(kind, Closed::Yes);
    }
    // rank one: M = e kᵀ
    let j = if !m[0][0].is_zero() || !m[1][0].is_zero() { 0 } else { 1 };
    let e: PlanePoint = [m[0][j].clone(), m[1][j].clone()];
    let i = if !e[0].is_zero() { 0 } else { 1 };
    let k: PlanePoint = [&m[i][0] / &e[i], &m[i][1] / &e[i]];
    let k2 = dot2(&k, &k);
    if cross2(&c, &e).is_zero() {
        let alpha = dot2(&c, &e) / dot2(&e, &e);
        let a2 = &alpha * &alpha;
        let kind = if a2 < k2 {
            ConeKind::Line { dir: Gen::from_point(&e) }
        } else if alpha.is_positive() {
            ConeKind::Ray { dir: Gen::from_point(&e) }
        } else {
            ConeKind::Ray { dir: Gen::from_point(&[-&e[0], -&e[1]]) }
        };
        return ConeClass::new(kind, Closed::Yes);
    }
    let kind = match rat_sqrt(&k2) {
        Some(kn) => {
            let g1 = [&c[0] + &kn * &e[0], &c[1] + &kn * &e[1]];
            let g2 = [&c[0] - &kn * &e[0], &c[1] - &kn * &e[1]];
            sector(Gen::from_point(&g1), Gen::from_point(&g2))
        }
        None => {
            let kn = to_f64(&k2).sqrt();
            let (cf, ef) = ([to_f64(&c[0]), to_f64(&c[1])], [to_f64(&e[0]), to_f64(&e[1])]);
            sector(
                Gen::approx([cf[0] + kn * ef[0], cf[1] + kn * ef[1]]),
                Gen::approx([cf[0] - kn * ef[0], cf[1] - kn * ef[1]]),
            )
        }
    };
    ConeClass::new(kind, Closed::Yes)
}

fn classify_proportional(a: &SymMatrix, b: &SymMatrix) -> Option<ConeClass> {
    let (m, d): (&SymMatrix, PlanePoint) = match proportionality(a, b) {
        Proportional::BothZero => return Some(ConeClass::new(ConeKind::Zero, Closed::Yes)),
        Proportional::BOverA(rho) => (a, [ri(1), rho]),
        Proportional::AZero => (b, [ri(0), ri(1)]),
        Proportional::No => return None,
    };
    let i = inertia(m);
    let g = Gen::from_point(&d);
    let kind = if i.n_plus > 0 && i.n_minus > 0 {
        ConeKind::Line { dir: g }
    } else if i.n_plus > 0 {
        ConeKind::Ray { dir: g }
    } else {
        ConeKind::Ray { dir: g.neg() }
    };
    Some(ConeClass::new(kind, Closed::Yes))
}

/// Rational unit-ish normal (t1,t2) near the angle with t1·A + t2·B ⪰ 0 and singular.
fn exact_boundary_member(a: &SymMatrix, b: &SymMatrix, theta: f64) -> Option<PlanePoint> {
    let (c, s) = (theta.cos(), theta.sin());
    for den in [1u64, 10, 100, 1000, 10_000, 100_000, 1_000_000] {
        // scale so the larger coordinate is rationalized relative to 1
        let (t1, t2) = if c.abs() >= s.abs() {
            (ri(c.signum() as i64), rationalize(s / c.abs(), den))
        } else {
            (rationalize(c / s.abs(), den), ri(s.signum() as i64))
        };
        // a coarse rounding can land on the other end of the arc
        let off = (to_f64(&t2).atan2(to_f64(&t1)) - theta).rem_euclid(2.0 * std::f64::consts::PI);
        if off.min(2.0 * std::f64::consts::PI - off) > 1e-6 {
            continue;
        }
        let i = inertia(&a.comb(&t1, b, &t2));
        if i.n_minus == 0 && i.n_zero > 0 {
            return Some([t1, t2]);
        }
    }
    None
}

fn classify_general(a: &SymMatrix, b: &SymMatrix) -> ConeClass {
    if let Some(c) = classify_proportional(a, b) {
        return c;
    }
    let sw = angular_sweep(a, b);
    if sw.m_star < -sw.tol {
        return ConeClass::new(ConeKind::Plane, Closed::Yes);
    }
    if sw.m_star <= sw.tol {
        return match exact_boundary_member(a, b, sw.theta_star) {
            Some(p) => {
                let closed = halfplane_closed(a, b, &p);
                ConeClass::new(ConeKind::Halfplane { normal: Gen::from_point(&p) }, closed)
            }
            None => ConeClass::new(ConeKind::Halfplane { normal: Gen::approx([sw.theta_star.cos(), sw.theta_star.sin()]) }, Closed::Unknown),
        };
    }
    let arc = sw
        .arcs
        .iter()
        .find(|(lo, hi)| {
            let t = if sw.theta_star < *lo { sw.theta_star + 2.0 * std::f64::consts::PI } else { sw.theta_star };
            t >= *lo && t <= *hi
        })
        .or(sw.arcs.first())
        .copied()
        .unwrap_or((sw.theta_star, sw.theta_star));
    let g_from = match exact_boundary_member(a, b, arc.0) {
        Some(y) => Gen::from_point(&perp_pt(&y)),
        None => Gen::approx([-(arc.0.sin()), arc.0.cos()]),
    };
    let g_to = match exact_boundary_member(a, b, arc.1) {
        Some(y) => Gen::from_point(&[y[1].clone(), -&y[0]]),
        None => Gen::approx([arc.1.sin(), -(arc.1.cos())]),
    };
    let closed = if definite_member(a, b).is_some() { Closed::Yes } else { Closed::Unknown };
    ConeClass::new(sector(g_from, g_to), closed)
}

// Closure is {⟨p,x⟩ ≥ 0} with p1·A + p2·B ⪰ 0 singular. On its kernel F_H lies on the
// boundary line; the set is closed iff both boundary rays are attained.
fn halfplane_closed(a: &SymMatrix, b: &SymMatrix, p: &PlanePoint) -> Closed {
    let kern = kernel_basis(&a.comb(&p[0], b, &p[1]));
    // t = p⊥ spans the boundary; φ(u) = ⟨t, F_H(u)⟩ / |t|² on the kernel
    let t = perp_pt(p);
    let phi = a.comb(&t[0], b, &t[1]);
    let i = inertia(&restrict_form(&phi, &kern));
    if i.n_plus > 0 && i.n_minus > 0 {
        Closed::Yes
    } else {
        Closed::No
    }
}

pub fn classify_hom_range(pair: &QuadraticPair) -> ConeClass {
    let (a, b) = (pair.a(), pair.b());
    match pair.n() {
        0 => ConeClass::new(ConeKind::Zero, Closed::Yes),
        1 => {
            let d = [a.get(0, 0).clone(), b.get(0, 0).clone()];
            if is_zero_pt(&d) {
                ConeClass::new(ConeKind::Zero, Closed::Yes)
            } else {
                ConeClass::new(ConeKind::Ray { dir: Gen::from_point(&d) }, Closed::Yes)
            }
        }
        2 => classify_2(a, b),
        _ => classify_general(a, b),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NdReport {
    pub holds: bool,
    /// Exact rational v ≠ 0 with F_H(v) = 0.
    #[serde(serialize_with = "crate::report::ser_opt_vec")]
    pub witness: Option<Vector>,
    /// Float isotropic vector when no rational one was found.
    pub witness_approx: Option<Vec<f64>>,
    /// False when the verdict rests on floating-point evidence only.
    pub exact: bool,
}

/// Rational y ≠ 0 in span(w) with ⟨Sy, y⟩ = 0.
pub fn isotropic_in(s: &SymMatrix, w: &[Vector]) -> Option<Vector> {
    if w.is_empty() {
        return None;
    }
    let r = restrict_form(s, w);
    let f = ldl(&r);
    let combine = |y: &Vector| -> Vector {
        let n = w[0].len();
        (0..n).map(|k| y.iter().zip(w).fold(Rat::zero(), |acc, (yi, wi)| acc + yi * &wi[k])).collect()
    };
    if let Some(k) = f.kernel().first() {
        return Some(primitive_vec(&combine(k)));
    }
    for (dp, p) in f.d.iter().zip(&f.t).filter(|(d, _)| d.is_positive()) {
        for (dq, q) in f.d.iter().zip(&f.t).filter(|(d, _)| d.is_negative()) {
            // α²·dp + β²·dq = 0
            if let Some(ratio) = rat_sqrt(&(-dq / dp)) {
                let y: Vector = p.iter().zip(q).map(|(pi, qi)| &ratio * pi + qi).collect();
                return Some(primitive_vec(&combine(&y)));
            }
        }
    }
    None
}

fn is_isotropic(pair: &QuadraticPair, v: &[Rat]) -> bool {
    !is_zero_vec(v) && hom_part(pair, v).map(|p| is_zero_pt(&p)).unwrap_or(false)
}

fn small_integer_search(pair: &QuadraticPair) -> Option<Vector> {
    let n = pair.n();
    if n > 6 {
        return None;
    }
    let digits = [ri(0), ri(1), ri(-1)];
    let total = 3usize.pow(n as u32);
    for code in 1..total {
        let mut c = code;
        let mut v = vec![Rat::zero(); n];
        for i in (0..n).rev() {
            v[i] = digits[c % 3].clone();
            c /= 3;
        }
        if is_isotropic(pair, &v) {
            return Some(v);
        }
    }
    None
}

/// Gauss–Newton on the unit sphere for ‖F_H(v)‖².
fn float_isotropic(pair: &QuadraticPair) -> Option<Vec<f64>> {
    let n = pair.n();
    let (a, b) = (pair.a().to_f64(), pair.b().to_f64());
    let scale = pair.scale();
    let mv = |m: &Vec<Vec<f64>>, v: &[f64]| -> Vec<f64> { m.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect() };
    let dotf = |u: &[f64], v: &[f64]| -> f64 { u.iter().zip(v).map(|(x, y)| x * y).sum() };
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut state = 0x9E3779B97F4A7C15u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for _ in 0..24 {
        let mut v: Vec<f64> = (0..n).map(|_| next()).collect();
        for _ in 0..200 {
            let nv = dotf(&v, &v).sqrt();
            if nv == 0.0 {
                break;
            }
            v.iter_mut().for_each(|x| *x /= nv);
            let (av, bv) = (mv(&a, &v), mv(&b, &v));
            let r = [dotf(&av, &v), dotf(&bv, &v)];
            // Jacobian rows 2Av, 2Bv; minimum-norm step J⁺r
            let j = [av.iter().map(|x| 2.0 * x).collect::<Vec<_>>(), bv.iter().map(|x| 2.0 * x).collect::<Vec<_>>()];
            let g = [[dotf(&j[0], &j[0]), dotf(&j[0], &j[1])], [dotf(&j[1], &j[0]), dotf(&j[1], &j[1])]];
            let reg = 1e-14 * (g[0][0] + g[1][1]) + 1e-300;
            let det = (g[0][0] + reg) * (g[1][1] + reg) - g[0][1] * g[1][0];
            if det.abs() < 1e-300 {
                break;
            }
            let y = [((g[1][1] + reg) * r[0] - g[0][1] * r[1]) / det, (-g[1][0] * r[0] + (g[0][0] + reg) * r[1]) / det];
            for k in 0..n {
                v[k] -= j[0][k] * y[0] + j[1][k] * y[1];
            }
            if r[0].abs() + r[1].abs() < 1e-15 * scale {
                break;
            }
        }
        let nv = dotf(&v, &v).sqrt();
        if nv == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        let res = dotf(&mv(&a, &v), &v).abs() + dotf(&mv(&b, &v), &v).abs();
        if best.as_ref().map_or(true, |(r, _)| res < *r) {
            best = Some((res, v));
        }
    }
    best.filter(|(r, _)| *r < 1e-10 * scale).map(|(_, v)| v)
}

fn rationalize_direction(pair: &QuadraticPair, v: &[f64]) -> Option<Vector> {
    let m = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if m == 0.0 {
        return None;
    }
    for den in [10u64, 1000, 1_000_000] {
        let r: Vector = v.iter().map(|x| rationalize(x / m, den)).collect();
        if is_isotropic(pair, &r) {
            return Some(primitive_vec(&r));
        }
    }
    None
}

/// Search for v ≠ 0 with F_H(v) = 0.
pub fn find_isotropic(pair: &QuadraticPair) -> (Option<Vector>, Option<Vec<f64>>) {
    let (a, b) = (pair.a(), pair.b());
    let common = intersect_kernels(a, b);
    if let Some(v) = common.first() {
        return (Some(primitive_vec(v)), None);
    }
    let mut members: Vec<(Rat, Rat)> = vec![(ri(1), ri(0)), (ri(0), ri(1)), (ri(1), ri(1)), (ri(1), ri(-1))];
    let sw = angular_sweep(a, b);
    if sw.m_star.abs() <= 1e-6 * pair.scale() {
        if let Some(p) = exact_boundary_member(a, b, sw.theta_star) {
            members.push((p[0].clone(), p[1].clone()));
        }
    }
    for (t1, t2) in &members {
        let m = a.comb(t1, b, t2);
        let kern = kernel_basis(&m);
        if kern.is_empty() {
            continue;
        }
        // on ker M, t1⟨Av,v⟩ + t2⟨Bv,v⟩ = 0; one more form must vanish
        let other = if !t2.is_zero() { a } else { b };
        if let Some(v) = isotropic_in(other, &kern) {
            if is_isotropic(pair, &v) {
                return (Some(v), None);
            }
        }
    }
    if let Some(v) = small_integer_search(pair) {
        return (Some(v), None);
    }
    match float_isotropic(pair) {
        Some(v) => match rationalize_direction(pair, &v) {
            Some(r) => (Some(r), None),
            None => (None, Some(v)),
        },
        None => (None, None),
    }
}

pub fn nd_check(pair: &QuadraticPair) -> NdReport {
    let n = pair.n();
    let (a, b) = (pair.a(), pair.b());
    if n == 0 {
        return NdReport { holds: true, witness: None, witness_approx: None, exact: true };
    }
    if n == 1 {
        let holds = !(a.get(0, 0).is_zero() && b.get(0, 0).is_zero());
        let witness = if holds { None } else { Some(vec![ri(1)]) };
        return NdReport { holds, witness, witness_approx: None, exact: true };
    }
    if n == 2 {
        let kern = intersect_kernels(a, b);
        let class = classify_2(a, b);
        let holds = kern.is_empty() && class.closed == Closed::Yes && !matches!(class.kind, ConeKind::Line { .. });
        if holds {
            return NdReport { holds, witness: None, witness_approx: None, exact: true };
        }
        let (w, wa) = find_isotropic(pair);
        return NdReport { holds: false, witness: w, witness_approx: wa, exact: true };
    }
    if definite_member(a, b).is_some() {
        return NdReport { holds: true, witness: None, witness_approx: None, exact: true };
    }
    let (w, wa) = find_isotropic(pair);
    let exact = w.is_some();
    NdReport { holds: false, witness: w, witness_approx: wa, exact }
}

/// Direction of the line bd F_H(R^n), lexicographically positive.
pub fn boundary_line(pair: &QuadraticPair) -> Result<PlaneDirection> {
    let nd = nd_check(pair);
    if nd.holds {
        return Err(QrError::Precondition("non-degeneracy holds; F_H has no boundary line".into()));
    }
    let class = classify_hom_range(pair);
    if class.is_plane() {
        return Err(QrError::Precondition("F_H(R^n) is the whole plane".into()));
    }
    let n = pair.n();
    if let Some(v) = &nd.witness {
        for i in 0..n {
            let z = cross_term(pair, &unit(n, i), v)?;
            if !is_zero_pt(&z) {
                return Ok(PlaneDirection::from_point(&z)?.line_canonical());
            }
        }
    }
    let g = match &class.kind {
        ConeKind::Ray { dir } | ConeKind::Line { dir } => dir.exact().cloned(),
        ConeKind::Halfplane { normal } => normal.exact().map(|p| p.perp()),
        ConeKind::Zero => None,
        _ => None,
    };
    g.map(|d| d.line_canonical())
        .ok_or_else(|| QrError::Precondition("boundary of F_H(R^n) is not a line through an exact direction".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn of(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn known(self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Unknown => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryItem {
    pub verdict: Verdict,
    pub witness: Option<String>,
}

fn item(verdict: Verdict, witness: Option<String>) -> BatteryItem {
    BatteryItem { verdict, witness }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyBattery {
    /// Simultaneous diagonalizability.
    pub a: BatteryItem,
    /// ∃ t1, t2: t1A + t2B ≻ 0.
    pub b: BatteryItem,
    /// ∃ t: A + tB ≻ 0.
    pub c: BatteryItem,
    /// ⟨Bu,u⟩ = 0, u ≠ 0 ⟹ ⟨Au,u⟩ > 0.
    pub d: BatteryItem,
    /// Non-degeneracy.
    pub e: BatteryItem,
    /// ⟨Bu,u⟩ = 0 ⟹ ⟨Au,u⟩ ≥ 0.
    pub f: BatteryItem,
    /// ∃ t: A + tB ⪰ 0.
    pub g: BatteryItem,
    /// F_H(R^n) = R².
    pub h: BatteryItem,
}

fn fmt_vec(v: &[Rat]) -> String {
    format!("({})", v.iter().map(crate::scalar::fmt_rat).collect::<Vec<_>>().join(","))
}

// sign of R + S√Δ, Δ > 0
fn sign_quad_irr(r: &Rat, s: &Rat, delta: &Rat) -> i32 {
    let (sr, ss) = (sign(r), sign(s));
    if ss == 0 {
        return sr;
    }
    if sr == 0 || sr == ss {
        return ss;
    }
    let lhs = r * r;
    let rhs = s * s * delta;
    if lhs > rhs {
        sr
    } else if lhs < rhs {
        ss
    } else {
        0
    }
}

/// Signs of ⟨Au,u⟩ on the isotropic directions of an indefinite 2×2 B.
fn signs_on_isotropic_2(a: &SymMatrix, b: &SymMatrix) -> Vec<i32> {
    let (a11, a12, a22) = (a.get(0, 0), a.get(0, 1), a.get(1, 1));
    let (b11, b12, b22) = (b.get(0, 0), b.get(0, 1), b.get(1, 1));
    let aval = |x: &Rat, y: &Rat| a11 * x * x + ri(2) * a12 * x * y + a22 * y * y;
    if b11.is_zero() {
        // directions (1,0) and (x,1) with 2 b12 x + b22 = 0
        let x = -b22 / (ri(2) * b12);
        return vec![sign(&aval(&ri(1), &ri(0))), sign(&aval(&x, &ri(1)))];
    }
    let delta = b12 * b12 - b11 * b22;
    let p = -b12 / b11;
    let mut out = Vec::new();
    for q in [ri(1) / b11, -ri(1) / b11] {
        if let Some(sq) = rat_sqrt(&delta) {
            let x = &p + &q * &sq;
            out.push(sign(&aval(&x, &ri(1))));
        } else {
            let r = a11 * (&p * &p + &q * &q * &delta) + ri(2) * a12 * &p + a22;
            let s = ri(2) * a11 * &p * &q + ri(2) * a12 * &q;
            out.push(sign_quad_irr(&r, &s, &delta));
        }
    }
    out
}

/// sup_t λmin(A + tB) for indefinite B (finite).
fn sup_lambda_min(a: &SymMatrix, b: &SymMatrix) -> f64 {
    let (af, bf) = (a.to_f64(), b.to_f64());
    let h = |t: f64| lambda_min_f64(&fcomb(&af, 1.0, &bf, t));
    // concave, → −∞ at both ends: bracket then golden search
    let mut lo = -1.0;
    let mut hi = 1.0;
    while h(lo) > h(lo * 0.5) && lo > -1e12 {
        lo *= 2.0;
    }
    while h(hi) > h(hi * 0.5) && hi < 1e12 {
        hi *= 2.0;
    }
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (hi - r * (hi - lo), lo + r * (hi - lo));
    let (mut f1, mut f2) = (h(x1), h(x2));
    for _ in 0..200 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = h(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = h(x1);
        }
    }
    f1.max(f2)
}

/// Finsler-type items: strict=true for (d), false for (f).
fn finsler(a: &SymMatrix, b: &SymMatrix, strict: bool) -> BatteryItem {
    let n = a.n();
    let ib = inertia(b);
    if ib.is_pd() || ib.is_nd() {
        return item(Verdict::True, Some("B definite: only u = 0 is B-isotropic".into()));
    }
    if ib.n_plus == 0 || ib.n_minus == 0 {
        let kern = kernel_basis(b);
        let ia = inertia(&restrict_form(a, &kern));
        let ok = if strict { ia.is_pd() } else { ia.is_psd() };
        return item(Verdict::of(ok), Some("A restricted to ker B".into()));
    }
    if n == 2 {
        let signs = signs_on_isotropic_2(a, b);
        let ok = if strict { signs.iter().all(|&s| s > 0) } else { signs.iter().all(|&s| s >= 0) };
        return item(Verdict::of(ok), Some(format!("signs of <Au,u> on B-isotropic lines: {signs:?}")));
    }
    let m = sup_lambda_min(a, b);
    let tol = pair_tol(&a.to_f64(), &b.to_f64());
    let v = if strict {
        if m > tol {
            Verdict::True
        } else if m < -tol {
            Verdict::False
        } else {
            Verdict::Unknown
        }
    } else if m > tol {
        Verdict::True
    } else if m < -tol {
        Verdict::False
    } else {
        // boundary band: an exactly PSD member proves the nonstrict statement
        match psd_interval(a, b).exact_member {
            Some(_) => Verdict::True,
            None => Verdict::Unknown,
        }
    };
    item(v, Some(format!("sup_t lambda_min(A+tB) = {m:.3e}")))
}

pub fn property_battery(pair: &QuadraticPair) -> Result<PropertyBattery> {
    let n = pair.n();
    let (a, b) = (pair.a(), pair.b());
    let sd = simdiag(a, b);
    let item_a = match &sd.verdict {
        SdVerdict::Found(_) => item(Verdict::True, Some(format!("route {}", sd.route))),
        SdVerdict::NotSd => item(Verdict::False, Some(format!("route {}", sd.route))),
        SdVerdict::Unknown => item(Verdict::Unknown, None),
    };
    let item_b = match definite_member(a, b) {
        Some((t1, t2)) => item(Verdict::True, Some(format!("t = {}", fmt_vec(&[t1, t2])))),
        None => {
            let sw = angular_sweep(a, b);
            if sw.m_star <= sw.tol {
                item(Verdict::False, Some(format!("max_theta lambda_min = {:.3e}", sw.m_star)))
            } else {
                item(Verdict::Unknown, None)
            }
        }
    };
    let iv = psd_interval(a, b);
    let item_c = match exists_pd_in_line(a, b) {
        Some(t) => item(Verdict::True, Some(format!("t = {}", crate::scalar::fmt_rat(&t)))),
        None if iv.empty => item(Verdict::False, Some("no PSD member".into())),
        None => match (&iv.exact_lo, &iv.exact_hi, &iv.exact_member) {
            (Some(l), Some(h), _) if l == h => {
                item(Verdict::of(crate::linalg::is_pd(&a.comb(&ri(1), b, l))), Some("PSD set is a single point".into()))
            }
            (_, _, Some(_)) => {
                let ker = intersect_kernels(a, b);
                item(Verdict::of(ker.is_empty()), Some("PSD interval with interior".into()))
            }
            _ => item(Verdict::Unknown, None),
        },
    };
    let item_d = finsler(a, b, true);
    let nd = nd_check(pair);
    let item_e = item(
        if nd.holds || nd.exact || nd.witness_approx.is_some() { Verdict::of(nd.holds) } else { Verdict::Unknown },
        nd.witness.as_ref().map(|w| format!("isotropic v = {}", fmt_vec(w))),
    );
    let item_f = finsler(a, b, false);
    let item_g = match (&iv.exact_member, iv.empty) {
        (Some(t), _) => item(Verdict::True, Some(format!("t = {}", crate::scalar::fmt_rat(t)))),
        (None, true) => item(Verdict::False, Some("no PSD member".into())),
        (None, false) => item(Verdict::Unknown, Some(format!("float interval [{}, {}]", iv.lo, iv.hi))),
    };
    let class = classify_hom_range(pair);
    let item_h = item(Verdict::of(class.is_plane()), None);
    let bat = PropertyBattery { a: item_a, b: item_b, c: item_c, d: item_d, e: item_e, f: item_f, g: item_g, h: item_h };
    check_lattice(&bat, n, inertia(b).is_indefinite())?;
    Ok(bat)
}

pub fn check_lattice(bat: &PropertyBattery, n: usize, b_indefinite: bool) -> Result<()> {
    let k = |i: &BatteryItem| i.verdict.known();
    let fail = |msg: &str| Err(QrError::ImplicationViolated(msg.to_string()));
    if let (Some(true), Some(false)) = (k(&bat.b), k(&bat.a)) {
        return fail("(b) => (a)");
    }
    if let (Some(c), Some(d)) = (k(&bat.c), k(&bat.d)) {
        if c != d {
            return fail("(c) <=> (d)");
        }
    }
    if n >= 3 {
        if let (Some(true), Some(false)) = (k(&bat.e), k(&bat.a)) {
            return fail("(e) => (a) for n >= 3");
        }
        if let (Some(e), Some(b)) = (k(&bat.e), k(&bat.b)) {
            if e != b {
                return fail("(e) <=> (b) for n >= 3");
            }
        }
    }
    if let (Some(h), Some(e), Some(b)) = (k(&bat.h), k(&bat.e), k(&bat.b)) {
        if (!h && e) != b {
            return fail("[not (h) and (e)] <=> (b)");
        }
    }
    if b_indefinite {
        if let (Some(f), Some(g)) = (k(&bat.f), k(&bat.g)) {
            if f != g {
                return fail("(f) <=> (g) for indefinite B");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: &[&[i64]], b: &[&[i64]]) -> QuadraticPair {
        QuadraticPair::homogeneous(SymMatrix::from_ints(a), SymMatrix::from_ints(b)).unwrap()
    }

    #[test]
    fn ellipse_classification() {
        let p = pair(&[&[-1, -1], &[-1, -1]], &[&[1, 1], &[1, 1]]);
        let c = classify_hom_range(&p);
        assert_eq!(c.kind, ConeKind::Ray { dir: Gen::Exact(PlaneDirection::from_ints(-1, 1).unwrap()) });
        let p = pair(&[&[1, 1], &[1, 1]], &[&[1, 0], &[0, -1]]);
        let c = classify_hom_range(&p);
        assert_eq!(c.kind, ConeKind::Halfplane { normal: Gen::Exact(PlaneDirection::from_ints(1, 0).unwrap()) });
        assert_eq!(c.closed, Closed::No);
        let p = pair(&[&[0, 1], &[1, 0]], &[&[0, 0], &[0, 0]]);
        assert_eq!(classify_hom_range(&p).kind, ConeKind::Line { dir: Gen::Exact(PlaneDirection::from_ints(1, 0).unwrap()) });
        let p = pair(&[&[1, 0], &[0, -1]], &[&[0, 1], &[1, 0]]);
        assert!(classify_hom_range(&p).is_plane());
        // identity and diag(1,2): sector between (1,1) and (1,2)
        let p = pair(&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 2]]);
        let c = classify_hom_range(&p);
        assert!(c.closure_contains_exact(&[ri(2), ri(3)]).unwrap());
        assert!(!c.closure_contains_exact(&[ri(1), ri(3)]).unwrap());
    }

    #[test]
    fn plane_in_three_dimensions() {
        let p = pair(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, -1]], &[&[0, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        assert!(classify_hom_range(&p).is_plane());
        let nd = nd_check(&p);
        assert!(!nd.holds);
        assert_eq!(nd.witness, Some(vec![ri(1), ri(1), ri(1)]));
    }

    #[test]
    fn boundary_lines() {
        let p = pair(&[&[0, 1], &[1, 0]], &[&[0, 0], &[0, 0]]);
        assert_eq!(boundary_line(&p).unwrap(), PlaneDirection::from_ints(1, 0).unwrap());
        let p = pair(&[&[1, 0], &[0, 0]], &[&[2, 0], &[0, 0]]);
        assert_eq!(boundary_line(&p).unwrap(), PlaneDirection::from_ints(1, 2).unwrap());
        let p = pair(&[&[1, 1], &[1, 1]], &[&[1, 0], &[0, -1]]);
        assert_eq!(boundary_line(&p).unwrap(), PlaneDirection::from_ints(0, 1).unwrap());
        assert!(boundary_line(&pair(&[&[1, 0], &[0, 1]], &[&[0, 0], &[0, 0]])).is_err());
    }

    #[test]
    fn battery_identity() {
        let p = pair(&[&[1, 0], &[0, 1]], &[&[0, 0], &[0, 0]]);
        let b = property_battery(&p).unwrap();
        let v: Vec<Verdict> = [&b.a, &b.b, &b.c, &b.d, &b.e, &b.f, &b.g, &b.h].iter().map(|i| i.verdict).collect();
        use Verdict::*;
        assert_eq!(v, vec![True, True, True, True, True, True, True, False]);
    }

    #[test]
    fn three_dim_halfplane_closedness() {
        // A = diag(1,0,0), B = diag(0,1,-1): closure {x ≥ 0}, both boundary rays attained
        let p = pair(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]], &[&[0, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        let c = classify_hom_range(&p);
        assert_eq!(c.kind, ConeKind::Halfplane { normal: Gen::Exact(PlaneDirection::from_ints(1, 0).unwrap()) });
        assert_eq!(c.closed, Closed::Yes);
    }
}
