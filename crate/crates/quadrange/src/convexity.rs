//! Exact convexity decisions for F(R^n) and F(R^n) + R₊d.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::core::{
    add_vec, cross2, dot, dot2, eval_pair, hom_part, is_zero_pt, is_zero_vec, scale_vec, unit, vec_f64, zeros, PlaneDirection,
    PlanePoint, QuadraticPair, SymMatrix, Vector,
};
use crate::error::{QrError, Result};
use crate::linalg::{inertia, intersect_kernels, kernel_basis, ldl, orth_complement, quad_inf, restrict_form, solve_linear, QuadInf};
use crate::pencil::{eig_sym, proportionality, Proportional};
use crate::range::{classify_hom_range, ConeKind};
use crate::scalar::{fmt_rat, ri, to_f64, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LineTag {
    /// {F_H(u), L(x,u)} linearly dependent: point, ray or line.
    LdConvex,
    /// LI and no direction supplied: a nondegenerate parabola.
    LiParabola,
    /// LI and d a positive multiple of F_H(u).
    LiB1,
    /// LI and −d a positive multiple of F_H(u).
    LiB2,
    /// LI and {d, F_H(u)} LI.
    LiB3,
}

#[derive(Clone, Debug, Serialize)]
pub struct LineShape {
    pub tag: LineTag,
    pub convex: bool,
    #[serde(serialize_with = "crate::report::ser_vec")]
    pub x: Vector,
    #[serde(serialize_with = "crate::report::ser_vec")]
    pub u: Vector,
    pub d: Option<String>,
}

/// Convexity of F(x + Ru), optionally augmented by R₊d.
pub fn line_restriction(pair: &QuadraticPair, x: &[Rat], u: &[Rat], d: Option<&PlaneDirection>) -> Result<LineShape> {
    if is_zero_vec(u) {
        return Err(QrError::ZeroVector);
    }
    let h = hom_part(pair, u)?;
    let ga = pair.f.gradient(x)?;
    let gb = pair.g.gradient(x)?;
    let l = [dot(&ga, u), dot(&gb, u)];
    let tag = if !crate::core::li2(&h, &l) {
        LineTag::LdConvex
    } else {
        match d {
            None => LineTag::LiParabola,
            Some(d) => {
                let dp = d.as_point();
                if cross2(&dp, &h).is_zero() {
                    if dot2(&dp, &h).is_positive() {
                        LineTag::LiB1
                    } else {
                        LineTag::LiB2
                    }
                } else {
                    LineTag::LiB3
                }
            }
        }
    };
    let convex = !matches!(tag, LineTag::LiParabola | LineTag::LiB2);
    Ok(LineShape { tag, convex, x: x.to_vec(), u: u.to_vec(), d: d.map(|d| d.to_string()) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// F_L(ker A ∩ ker B) ≠ {0}.
    C1,
    /// d1·B ≠ d2·A.
    C2,
    /// F_H⁻¹(−d) = ∅.
    C3,
    /// {d, F_L(u)} LD for some u ∈ F_H⁻¹(−d).
    C4,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "crate::report::ser_pt")]
    pub p: PlanePoint,
    #[serde(serialize_with = "crate::report::ser_pt")]
    pub q: PlanePoint,
    #[serde(serialize_with = "crate::report::ser_pt")]
    pub m: PlanePoint,
    #[serde(serialize_with = "crate::report::ser_vec")]
    pub xp: Vector,
    #[serde(serialize_with = "crate::report::ser_vec")]
    pub xq: Vector,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityVerdict {
    pub convex: bool,
    pub direction: Option<PlaneDirection>,
    /// Conditions among C1–C4 that hold at `direction` (convex case).
    pub fired: Vec<Condition>,
    /// (b1, b2, b3) when evaluated.
    pub triple: Option<(bool, bool, bool)>,
    pub witness: Option<Witness>,
}

/// The scalar form φ with F_H(u) = φ(u)·d, defined when d2·A = d1·B.
fn scalar_form(pair: &QuadraticPair, d: &PlaneDirection) -> Option<SymMatrix> {
    let dp = d.as_point();
    let (a, b) = (pair.a(), pair.b());
    if a.scale(&dp[1]) != b.scale(&dp[0]) {
        return None;
    }
    Some(if !dp[0].is_zero() { a.scale(&(ri(1) / &dp[0])) } else { b.scale(&(ri(1) / &dp[1])) })
}

fn b1_holds(pair: &QuadraticPair) -> bool {
    intersect_kernels(pair.a(), pair.b())
        .iter()
        .all(|k| dot(&pair.f.lin, k).is_zero() && dot(&pair.g.lin, k).is_zero())
}

// c = d1·b − d2·a and e = d1·a + d2·b
fn c_and_e(pair: &QuadraticPair, d: &PlaneDirection) -> (Vector, Vector) {
    let dp = d.as_point();
    let c = pair.g.lin.iter().zip(&pair.f.lin).map(|(b, a)| &dp[0] * b - &dp[1] * a).collect();
    let e = pair.f.lin.iter().zip(&pair.g.lin).map(|(a, b)| &dp[0] * a + &dp[1] * b).collect();
    (c, e)
}

fn hyperplane_basis(c: &[Rat]) -> Vec<Vector> {
    if is_zero_vec(c) {
        (0..c.len()).map(|i| unit(c.len(), i)).collect()
    } else {
        orth_complement(&[c.to_vec()], c.len())
    }
}

/// Range of q(x) = xᵀMx + ⟨l,x⟩ + c0 over {x : ⟨h,x⟩ = β} as (inf, sup), None for ∓∞;
/// returns Err when the affine set is empty.
fn affine_range(m: &SymMatrix, l: &[Rat], c0: &Rat, h: &[Rat], beta: &Rat) -> std::result::Result<(Option<Rat>, Option<Rat>), ()> {
    let n = m.n();
    let (xp, w) = if is_zero_vec(h) {
        if !beta.is_zero() {
            return Err(());
        }
        (zeros(n), (0..n).map(|i| unit(n, i)).collect::<Vec<_>>())
    } else {
        (scale_vec(&(beta / dot(h, h)), h), orth_complement(&[h.to_vec()], n))
    };
    let mr = restrict_form(m, &w);
    let mxp = m.mul_vec(&xp);
    let lr: Vector = w.iter().map(|wi| ri(2) * dot(wi, &mxp) + dot(l, wi)).collect();
    let cr = m.form(&xp, &xp) + dot(l, &xp) + c0;
    let lo = match quad_inf(&mr, &lr, &cr) {
        QuadInf::Finite { value, .. } => Some(value),
        QuadInf::MinusInfinity => None,
    };
    let neg_l: Vector = lr.iter().map(|x| -x).collect();
    let hi = match quad_inf(&mr.scale(&ri(-1)), &neg_l, &-cr) {
        QuadInf::Finite { value, .. } => Some(-value),
        QuadInf::MinusInfinity => None,
    };
    Ok((lo, hi))
}

/// Exact membership of m in F(R^n) + R₊d; requires d2·A = d1·B.
pub fn in_augmented(pair: &QuadraticPair, d: &PlaneDirection, m: &PlanePoint) -> Result<bool> {
    let s = scalar_form(pair, d).ok_or_else(|| QrError::Precondition("d2 A != d1 B".into()))?;
    let dp = d.as_point();
    let d2 = dot2(&dp, &dp);
    let (c, e) = c_and_e(pair, d);
    let mk = [&m[0] - &pair.f.k, &m[1] - &pair.g.k];
    let beta = cross2(&dp, &mk);
    let alpha = dot2(&dp, &mk);
    // need x with ⟨c,x⟩ = β and |d|²φ(x) + ⟨e,x⟩ ≤ α
    match affine_range(&s.scale(&d2), &e, &Rat::zero(), &c, &beta) {
        Err(()) => Ok(false),
        Ok((None, _)) => Ok(true),
        Ok((Some(lo), _)) => Ok(lo <= alpha),
    }
}

/// Exact membership of m in F(R^n) when A and B are proportional (or zero);
/// None for non-proportional pairs, whose range is convex and not handled here.
pub fn in_range_exact(pair: &QuadraticPair, m: &PlanePoint) -> Option<bool> {
    let d = match proportionality(pair.a(), pair.b()) {
        Proportional::BOverA(rho) => PlaneDirection::new(ri(1), rho).ok()?,
        Proportional::AZero => PlaneDirection::from_ints(0, 1).ok()?,
        Proportional::BothZero => {
            // affine map: m − k ∈ span of columns (a_i, b_i)
            let rows = vec![pair.f.lin.clone(), pair.g.lin.clone()];
            let rhs = [&m[0] - &pair.f.k, &m[1] - &pair.g.k];
            return Some(crate::linalg::solve_rows(&rows, pair.n(), &rhs).is_some());
        }
        Proportional::No => return None,
    };
    let s = scalar_form(pair, &d)?;
    let dp = d.as_point();
    let d2 = dot2(&dp, &dp);
    let (c, e) = c_and_e(pair, &d);
    let mk = [&m[0] - &pair.f.k, &m[1] - &pair.g.k];
    let beta = cross2(&dp, &mk);
    let alpha = dot2(&dp, &mk);
    Some(match affine_range(&s.scale(&d2), &e, &Rat::zero(), &c, &beta) {
        Err(()) => false,
        Ok((lo, hi)) => lo.map_or(true, |l| l <= alpha) && hi.map_or(true, |h| alpha <= h),
    })
}

fn make_witness(pair: &QuadraticPair, s: &SymMatrix, d: &PlaneDirection) -> Option<Witness> {
    let dp = d.as_point();
    let d2 = dot2(&dp, &dp);
    let (_, e) = c_and_e(pair, d);
    let n = pair.n();
    let mut starts = vec![zeros(n)];
    if let Some(x0) = solve_linear(s, &scale_vec(&(ri(-1) / (ri(2) * &d2)), &e)) {
        starts.push(x0);
    }
    let negs = ldl(s).negative_dirs();
    for x0 in &starts {
        for u in &negs {
            let mut gamma = ri(1);
            for _ in 0..48 {
                let xp = add_vec(x0, &scale_vec(&gamma, u));
                let xq = add_vec(x0, &scale_vec(&-gamma.clone(), u));
                let p = eval_pair(pair, &xp).ok()?;
                let q = eval_pair(pair, &xq).ok()?;
                let half = Rat::new(1.into(), 2.into());
                let m = [(&p[0] + &q[0]) * &half, (&p[1] + &q[1]) * &half];
                if !in_augmented(pair, d, &m).ok()? {
                    return Some(Witness { p, q, m, xp, xq });
                }
                gamma = gamma * ri(2);
            }
        }
    }
    None
}

// −d ∈ F_H(R^n) iff some u has ⟨Tu,u⟩ = 0 and ⟨Uu,u⟩ < 0, with T = d2·A − d1·B and
// U = d1·A + d2·B. Decided only when T is semidefinite (isotropic set = ker T).
fn c3_when_not_proportional(pair: &QuadraticPair, d: &PlaneDirection) -> Option<bool> {
    let dp = d.as_point();
    let t = pair.a().comb(&dp[1], pair.b(), &-dp[0].clone());
    let it = inertia(&t);
    if it.n_plus > 0 && it.n_minus > 0 {
        return None;
    }
    let w = kernel_basis(&t);
    if w.is_empty() {
        return Some(true);
    }
    let u = pair.a().comb(&dp[0], pair.b(), &dp[1]);
    Some(inertia(&restrict_form(&u, &w)).n_minus == 0)
}

pub fn augmented_convexity(pair: &QuadraticPair, d: &PlaneDirection) -> Result<ConvexityVerdict> {
    let mut fired = Vec::new();
    let b1 = b1_holds(pair);
    if !b1 {
        fired.push(Condition::C1);
    }
    let s = scalar_form(pair, d);
    let b2 = s.is_some();
    if !b2 {
        fired.push(Condition::C2);
        if c3_when_not_proportional(pair, d) == Some(true) {
            fired.push(Condition::C3);
        }
    }
    let mut b3 = false;
    if let Some(s) = &s {
        let (c, _) = c_and_e(pair, d);
        let attains = inertia(s).n_minus > 0;
        if !attains {
            fired.push(Condition::C3);
        } else {
            // c = 0 makes every F_L(u) parallel to d
            let ld_somewhere = is_zero_vec(&c) || inertia(&restrict_form(s, &hyperplane_basis(&c))).n_minus > 0;
            if ld_somewhere {
                fired.push(Condition::C4);
            } else {
                b3 = true;
            }
        }
    }
    let nonconvex = b1 && b2 && b3;
    let witness = if nonconvex { make_witness(pair, s.as_ref().unwrap(), d) } else { None };
    if nonconvex && witness.is_none() {
        return Err(QrError::Precondition("nonconvex direction without an exact witness".into()));
    }
    Ok(ConvexityVerdict { convex: !nonconvex, direction: Some(d.clone()), fired, triple: Some((b1, b2, b3)), witness })
}

/// The only directions that can make F(R^n) + R₊d nonconvex.
pub fn candidate_directions(pair: &QuadraticPair) -> Vec<PlaneDirection> {
    match proportionality(pair.a(), pair.b()) {
        Proportional::BOverA(rho) => {
            let d = PlaneDirection::new(ri(1), rho).expect("nonzero");
            vec![d.clone(), d.neg()]
        }
        Proportional::AZero => vec![PlaneDirection::from_ints(0, 1).unwrap(), PlaneDirection::from_ints(0, -1).unwrap()],
        _ => Vec::new(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct JointConvexity {
    pub convex: bool,
    pub reason: String,
    pub checks: Vec<ConvexityVerdict>,
    pub witness: Option<Witness>,
}

pub fn joint_range_convexity(pair: &QuadraticPair) -> Result<JointConvexity> {
    let cands = candidate_directions(pair);
    if cands.is_empty() {
        let reason = match proportionality(pair.a(), pair.b()) {
            Proportional::BothZero => "A = B = 0: affine image",
            _ => "A, B not proportional: C2 holds for every d",
        };
        return Ok(JointConvexity { convex: true, reason: reason.into(), checks: Vec::new(), witness: None });
    }
    let mut checks = Vec::new();
    for d in &cands {
        checks.push(augmented_convexity(pair, d)?);
    }
    let bad = checks.iter().find(|v| !v.convex);
    Ok(match bad {
        Some(v) => JointConvexity {
            convex: false,
            reason: format!("F + R+d nonconvex for d = {}", v.direction.as_ref().unwrap()),
            witness: v.witness.clone(),
            checks: checks.clone(),
        },
        None => JointConvexity { convex: true, reason: "every candidate direction satisfies one of C1-C4".into(), checks, witness: None },
    })
}

pub fn at_most_two_directions(pair: &QuadraticPair) -> Result<Vec<PlaneDirection>> {
    let mut out = Vec::new();
    for d in candidate_directions(pair) {
        if !augmented_convexity(pair, &d)?.convex {
            out.push(d);
        }
    }
    assert!(out.len() <= 2);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Alternative {
    pub not_in_neg_boundary: bool,
    pub pencil_semidefinite: bool,
}

/// Is x on the topological boundary of F_H(R^n)? Exact when generators are exact.
fn on_boundary(pair: &QuadraticPair, x: &PlanePoint) -> bool {
    let class = classify_hom_range(pair);
    let xf = crate::core::pt_f64(x);
    let nx = xf[0].hypot(xf[1]);
    let slack = 1e-9 * nx.max(1.0);
    let on_ray = |g: &crate::range::Gen| match g.exact() {
        Some(d) => {
            let dp = d.as_point();
            cross2(&dp, x).is_zero() && !dot2(&dp, x).is_negative()
        }
        None => {
            let gf = g.f64();
            (gf[0] * xf[1] - gf[1] * xf[0]).abs() <= slack && gf[0] * xf[0] + gf[1] * xf[1] >= 0.0
        }
    };
    match &class.kind {
        ConeKind::Plane => false,
        ConeKind::Zero => is_zero_pt(x),
        ConeKind::Ray { dir } => on_ray(dir),
        ConeKind::Line { dir } => on_ray(dir) || on_ray(&dir.neg()),
        ConeKind::PointedSector { from, to } => on_ray(from) || on_ray(to),
        ConeKind::Halfplane { normal } => match normal.exact() {
            Some(p) => dot2(&p.as_point(), x).is_zero(),
            None => {
                let pf = normal.f64();
                (pf[0] * xf[0] + pf[1] * xf[1]).abs() <= slack
            }
        },
    }
}

pub fn alternative_check(pair: &QuadraticPair, d: &PlaneDirection) -> Result<Alternative> {
    let dp = d.as_point();
    let neg_d = [-&dp[0], -&dp[1]];
    let not_in_neg_boundary = !on_boundary(pair, &neg_d);
    let m = pair.a().comb(&dp[1], pair.b(), &-dp[0].clone());
    let pencil_semidefinite = inertia(&m).is_semidefinite();
    if !not_in_neg_boundary && !pencil_semidefinite {
        return Err(QrError::AlternativeViolated(format!("d = {d}")));
    }
    Ok(Alternative { not_in_neg_boundary, pencil_semidefinite })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    /// t1² = t2², n − l = 2: plane minus a line, plus one point of it.
    Fig1,
    /// t1² = t2², n − l ≥ 3: plane minus an open half-line.
    Fig2,
    /// t1² < t2², n − l = 1: a parabola.
    Fig3,
    /// t1² < t2², n − l ≥ 2: closed region outside an open parabola.
    Fig4,
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalForm {
    pub m: usize,
    pub l: usize,
    pub t1: f64,
    pub t2: f64,
    pub k: [f64; 2],
    pub shape: Shape,
    /// Columns of C.
    pub c: Vec<Vec<f64>>,
    pub xbar: Vec<f64>,
    pub d: PlaneDirection,
}

impl CanonicalForm {
    /// (Σ_{i≤m} y_i² − y_{m+1}²)·d + (t1·y1 + t2·y_{m+1})·d⊥ − k.
    pub fn model(&self, y: &[f64]) -> [f64; 2] {
        let df = self.d.as_f64();
        let dperp = [-df[1], df[0]];
        let m = self.m;
        let quad: f64 = y[..m].iter().map(|v| v * v).sum::<f64>() - y[m] * y[m];
        let lin = if m > 0 { self.t1 * y[0] } else { 0.0 } + self.t2 * y[m];
        [quad * df[0] + lin * dperp[0] - self.k[0], quad * df[1] + lin * dperp[1] - self.k[1]]
    }

    /// x = C·y − x̄.
    pub fn to_x(&self, y: &[f64]) -> Vec<f64> {
        let n = self.xbar.len();
        (0..n).map(|r| self.c.iter().zip(y).map(|(col, yi)| col[r] * yi).sum::<f64>() - self.xbar[r]).collect()
    }
}

pub fn nonconvex_canonical_form(pair: &QuadraticPair, d: &PlaneDirection) -> Result<CanonicalForm> {
    let v = augmented_convexity(pair, d)?;
    if v.convex {
        return Err(QrError::Precondition(format!("F + R+d is convex for d = {d}")));
    }
    let s = scalar_form(pair, d).unwrap();
    let n = pair.n();
    let dp = d.as_point();
    let dd = to_f64(&dot2(&dp, &dp));
    let df = d.as_f64();
    let dperp = [-df[1], df[0]];
    let inert = inertia(&s);
    let (m, l) = (inert.n_plus, inert.n_zero);
    let (c_vec, _) = c_and_e(pair, d);
    let restricted = restrict_form(&s, &hyperplane_basis(&c_vec));
    let equal = inertia(&restricted).n_zero == l + 1;
    let shape = match (equal, m + 1) {
        (true, 2) => Shape::Fig1,
        (true, _) => Shape::Fig2,
        (false, 1) => Shape::Fig3,
        (false, _) => Shape::Fig4,
    };

    let eig = eig_sym(&s)?;
    let tol = 1e-9 * (1.0 + s.max_abs());
    let af = vec_f64(&pair.f.lin);
    let bf = vec_f64(&pair.g.lin);
    // (a_i, b_i) = α_i d + β_i d⊥
    let alpha: Vec<f64> = (0..n).map(|i| (df[0] * af[i] + df[1] * bf[i]) / dd).collect();
    let beta: Vec<f64> = (0..n).map(|i| (dperp[0] * af[i] + dperp[1] * bf[i]) / dd).collect();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut ker = Vec::new();
    for j in 0..n {
        let sv = eig.values[j];
        let q = eig.column(j);
        if sv > tol {
            pos.push((sv, q));
        } else if sv < -tol {
            neg.push((sv, q));
        } else {
            ker.push(q);
        }
    }
    if neg.len() != 1 || pos.len() != m {
        return Err(QrError::Precondition("float spectrum disagrees with exact inertia".into()));
    }
    let dotf = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
    let mut xbar = vec![0.0; n];
    let mut kconst_d = 0.0;
    let mut kconst_p = 0.0;
    let mut cols_p: Vec<Vec<f64>> = Vec::new();
    let mut gam_p: Vec<f64> = Vec::new();
    let mut col_n = vec![0.0; n];
    let mut gam_n = 0.0;
    for (idx, (sv, q)) in pos.iter().chain(neg.iter()).enumerate() {
        let ah = dotf(&alpha, q);
        let bh = dotf(&beta, q);
        let shift = ah / (2.0 * sv);
        for r in 0..n {
            xbar[r] += shift * q[r];
        }
        kconst_d += ah * ah / (4.0 * sv);
        kconst_p += bh * ah / (2.0 * sv);
        let root = sv.abs().sqrt();
        let col: Vec<f64> = q.iter().map(|x| x / root).collect();
        if idx < m {
            cols_p.push(col);
            gam_p.push(bh / root);
        } else {
            col_n = col;
            gam_n = bh / root;
        }
    }
    // rotate the positive block so its linear coefficient lies along e1
    let t1 = gam_p.iter().map(|g| g * g).sum::<f64>().sqrt();
    let rot = householder_to_e1(&gam_p);
    let mut c_cols: Vec<Vec<f64>> = (0..m)
        .map(|j| (0..n).map(|r| (0..m).map(|i| cols_p[i][r] * rot[i][j]).sum()).collect())
        .collect();
    c_cols.push(col_n);
    c_cols.extend(ker);
    let k = [
        kconst_d * df[0] + kconst_p * dperp[0] - to_f64(&pair.f.k),
        kconst_d * df[1] + kconst_p * dperp[1] - to_f64(&pair.g.k),
    ];
    Ok(CanonicalForm { m, l, t1, t2: gam_n, k, shape, c: c_cols, xbar, d: d.clone() })
}

// Orthogonal R (m×m) with Rᵀg = |g|·e1, i.e. the first column of R is g/|g|.
fn householder_to_e1(g: &[f64]) -> Vec<Vec<f64>> {
    let m = g.len();
    let mut r: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    if m == 0 || norm == 0.0 {
        return r;
    }
    let mut v: Vec<f64> = g.iter().map(|x| x / norm).collect();
    v[0] -= 1.0;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    if vv < 1e-30 {
        return r;
    }
    for i in 0..m {
        for j in 0..m {
            r[i][j] -= 2.0 * v[i] * v[j] / vv;
        }
    }
    r
}

pub fn fmt_pt(p: &PlanePoint) -> String {
    format!("({},{})", fmt_rat(&p[0]), fmt_rat(&p[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{QuadraticFunction, SymMatrix};
    use crate::scalar::rq;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| ri(x)).collect()
    }

    fn x1x2_x1plus1() -> QuadraticPair {
        let a = SymMatrix::from_rows("A", vec![vec![ri(0), rq(1, 2)], vec![rq(1, 2), ri(0)]]).unwrap();
        QuadraticPair::new(
            QuadraticFunction::new(a, v(&[0, 0]), ri(0)).unwrap(),
            QuadraticFunction::new(SymMatrix::zeros(2), v(&[1, 0]), ri(1)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn x1x2_witness_triple() {
        let p = x1x2_x1plus1();
        let d = PlaneDirection::from_ints(1, 0).unwrap();
        let verdict = augmented_convexity(&p, &d).unwrap();
        assert!(!verdict.convex);
        let w = verdict.witness.unwrap();
        assert_eq!(w.p, [ri(-1), ri(2)]);
        assert_eq!(w.q, [ri(-1), ri(0)]);
        assert_eq!(w.m, [ri(-1), ri(1)]);
        let cf = nonconvex_canonical_form(&p, &d).unwrap();
        assert_eq!(cf.shape, Shape::Fig1);
        assert!((cf.t1.abs() - cf.t2.abs()).abs() < 1e-12);
    }

    #[test]
    fn affine_pair_is_convex() {
        let p = QuadraticPair::new(
            QuadraticFunction::new(SymMatrix::zeros(2), v(&[1, 2]), ri(0)).unwrap(),
            QuadraticFunction::new(SymMatrix::zeros(2), v(&[2, 4]), ri(0)).unwrap(),
        )
        .unwrap();
        assert!(joint_range_convexity(&p).unwrap().convex);
        assert_eq!(in_range_exact(&p, &[ri(1), ri(2)]), Some(true));
        assert_eq!(in_range_exact(&p, &[ri(1), ri(3)]), Some(false));
    }
}
