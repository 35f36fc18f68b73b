//! Built-in worked examples with their expected facts.

use serde::Serialize;

use crate::convexity::{augmented_convexity, at_most_two_directions, joint_range_convexity, line_restriction, Condition};
use crate::core::{hom_part, is_zero_pt, PlaneDirection, PlanePoint, SymMatrix, Vector};
use crate::error::Result;
use crate::optimize::{
    epigraph_conditions, existence_report, finiteness_preconditions, kkt_check, slater_check, slemma_certify, solve_dual,
    Cone, KktVerdict,
};
use crate::oracle::validate_certificate;
use crate::pencil::{simdiag, SdMatrix, SdVerdict};
use crate::problem::{parse_problem, NumberPolicy, Problem};
use crate::range::{classify_hom_range, nd_check, property_battery, Closed, ConeKind, Gen};
use crate::scalar::{ri, Scalar};

pub const EXAMPLES: [(&str, &str); 10] = [
    ("ex0", include_str!("../../../problems/ex0.json")),
    ("ej_op00", include_str!("../../../problems/ej_op00.json")),
    ("ej_op1", include_str!("../../../problems/ej_op1.json")),
    ("ej_reff", include_str!("../../../problems/ej_reff.json")),
    ("ej_op0", include_str!("../../../problems/ej_op0.json")),
    ("ej_s_lema", include_str!("../../../problems/ej_s_lema.json")),
    ("ej_sinsd1", include_str!("../../../problems/ej_sinsd1.json")),
    ("x1sq_minus_x2sq", include_str!("../../../problems/x1sq_minus_x2sq.json")),
    ("x1sq", include_str!("../../../problems/x1sq.json")),
    ("x1x2_x1plus1", include_str!("../../../problems/x1x2_x1plus1.json")),
];

pub fn names() -> Vec<&'static str> {
    EXAMPLES.iter().map(|(n, _)| *n).collect()
}

pub fn load_example(name: &str) -> Option<Problem> {
    EXAMPLES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| parse_problem(src, NumberPolicy::Auto).expect("built-in example parses"))
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleOutcome {
    pub name: String,
    pub checks: Vec<Check>,
}

impl ExampleOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, label: &str, pass: bool, detail: impl Into<String>) {
        self.0.push(Check { label: label.into(), pass, detail: detail.into() });
    }
}

fn pt(a: i64, b: i64) -> PlanePoint {
    [ri(a), ri(b)]
}

fn vi(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| ri(x)).collect()
}

fn dir(a: i64, b: i64) -> PlaneDirection {
    PlaneDirection::from_ints(a, b).expect("nonzero")
}

fn gen_is(g: &Gen, d: &PlaneDirection) -> bool {
    matches!(g, Gen::Exact(e) if e == d)
}

fn is_exact_zero(s: &Option<Scalar>) -> bool {
    matches!(s, Some(Scalar::Exact(r)) if r == &ri(0))
}

fn offdiag_zero(m: &SymMatrix) -> bool {
    let n = m.n();
    (0..n).all(|i| (0..n).all(|j| i == j || m.get(i, j) == &ri(0)))
}

pub fn run_example(name: &str) -> Result<Option<ExampleOutcome>> {
    let Some(prob) = load_example(name) else { return Ok(None) };
    let pair = &prob.pair;
    let cone = prob.cone.unwrap_or(Cone::Zero);
    let mut c = Checks(Vec::new());
    match name {
        "ex0" => {
            let j = joint_range_convexity(pair)?;
            c.add("joint range nonconvex", !j.convex, j.reason.clone());
            let ok = j.witness.as_ref().is_some_and(|w| {
                w.m == pt(-1, 0) && ((w.p == pt(0, 0) && w.q == pt(-2, 0)) || (w.p == pt(-2, 0) && w.q == pt(0, 0)))
            });
            c.add("midpoint (-1,0) of (0,0) and (-2,0) is outside", ok, format!("{:?}", j.witness.as_ref().map(|w| (&w.p, &w.q, &w.m))));
            let h = classify_hom_range(pair);
            let ok = matches!(&h.kind, ConeKind::Ray { dir: g } if gen_is(g, &dir(-1, 1))) && h.closed == Closed::Yes;
            c.add("F_H(R^2) is the closed ray R+(-1,1)", ok, format!("{:?}", h));
        }
        "ej_op00" => {
            let h = classify_hom_range(pair);
            c.add("F_H(R^3) is the plane", matches!(h.kind, ConeKind::Plane), format!("{:?}", h.kind));
            let nd = nd_check(pair);
            let w = vi(&[1, 1, 1]);
            c.add("ND fails", !nd.holds && nd.exact, format!("holds={} exact={}", nd.holds, nd.exact));
            c.add("F_H(1,1,1) = 0", is_zero_pt(&hom_part(pair, &w)?), "");
            let nd_w_ok = nd.witness.as_ref().is_some_and(|v| is_zero_pt(&hom_part(pair, v).unwrap()));
            c.add("ND witness is isotropic", nd_w_ok, format!("{:?}", nd.witness));
            let bat = property_battery(pair)?;
            c.add("battery (a) SD holds", bat.a.verdict.known() == Some(true), format!("{:?}", bat.a.verdict));
            c.add("battery (h) F_H onto", bat.h.verdict.known() == Some(true), format!("{:?}", bat.h.verdict));
            c.add("battery (e) ND fails", bat.e.verdict.known() == Some(false), format!("{:?}", bat.e.verdict));
        }
        "ej_op1" => {
            let sd = simdiag(pair.a(), pair.b());
            let ok = match &sd.verdict {
                SdVerdict::Found(SdMatrix::Exact(cols)) => {
                    offdiag_zero(&pair.a().congruence(cols)) && offdiag_zero(&pair.b().congruence(cols))
                }
                _ => false,
            };
            c.add("exact simultaneous diagonalization", ok && sd.exact_decision, sd.route);
            let h = classify_hom_range(pair);
            let ok = matches!(&h.kind, ConeKind::Line { dir: g } if gen_is(g, &dir(1, 0)) || gen_is(g, &dir(-1, 0)));
            c.add("F_H(R^2) is the line R(1,0)", ok && h.closed == Closed::Yes, format!("{:?}", h));
        }
        "ej_reff" => {
            let sd = simdiag(pair.a(), pair.b());
            c.add("not simultaneously diagonalizable", matches!(sd.verdict, SdVerdict::NotSd) && sd.exact_decision, sd.route);
            let h = classify_hom_range(pair);
            c.add("F_H(R^2) not closed", h.closed == Closed::No, format!("{:?}", h.closed));
            let ok = matches!(&h.kind, ConeKind::Halfplane { normal } if gen_is(normal, &dir(1, 0)));
            c.add("closure is the halfplane first coordinate >= 0", ok, format!("{:?}", h.kind));
        }
        "ej_op0" => {
            let zero = vi(&[0, 0]);
            let u = vi(&[1, 1]);
            let bad = line_restriction(pair, &zero, &u, Some(&dir(-2, 0)))?;
            c.add("F(Ru) + R+(-2,0) nonconvex", !bad.convex, format!("{:?}", bad.tag));
            let good = line_restriction(pair, &zero, &u, Some(&dir(1, 0)))?;
            c.add("F(Ru) + R+(1,0) convex", good.convex, format!("{:?}", good.tag));
            let j = joint_range_convexity(pair)?;
            c.add("joint range nonconvex", !j.convex, j.reason.clone());
            let ds = at_most_two_directions(pair)?;
            let ok = ds.len() <= 2 && ds.iter().all(|d| *d == dir(1, 0) || *d == dir(-1, 0));
            c.add("nonconvex directions within {(1,0),(-1,0)}", ok, ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" "));
        }
        "ej_s_lema" => {
            let r = solve_dual(pair, cone)?;
            c.add("nu = 0", r.nu.abs() <= 1e-8, format!("{}", r.nu));
            c.add("lambda* = 0", is_exact_zero(&r.lambda_star), format!("{:?}", r.lambda_star));
            c.add("mu in [0, 1e-8]", r.mu_lower() >= -1e-8 && r.mu_upper() <= 1e-8, format!("[{}, {}]", r.mu_lower(), r.mu_upper()));
            c.add("primal not attained", !r.primal_attained, "");
            let e = existence_report(pair, cone)?;
            c.add("ND fails", !e.nd_holds, "");
            let s = slemma_certify(pair, cone)?;
            c.add("S-lemma multiplier 0 certified", s.holds && is_exact_zero(&s.lambda), format!("{:?}", s.lambda));
            c.add("float certificate at lambda = 0", validate_certificate(pair, 0.0, cone, 0.0), "");
        }
        "ej_sinsd1" => {
            let s = slater_check(pair, cone);
            c.add("Slater fails", !s.ok, "");
            let r = solve_dual(pair, cone)?;
            c.add("no strong duality", !r.strong_duality, "");
            c.add("sup of dual is 0", r.nu.abs() <= 1e-8, format!("{}", r.nu));
            c.add("dual not attained", !r.dual_attained, "");
            let f = epigraph_conditions(pair)?;
            c.add("C3 fires at d = (1,0)", f.contains(&Condition::C3), format!("{:?}", f));
            c.add("F + R+(1,0) convex", augmented_convexity(pair, &dir(1, 0))?.convex, "");
            // F(R^2) is the parabola {(s, s^2)}; only pushing it downward breaks convexity
            let ds = at_most_two_directions(pair)?;
            c.add("nonconvex directions are exactly {(0,-1)}", ds == vec![dir(0, -1)], ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" "));
            c.add("q(1) = -1/4 rejects the claim nu = 0", !validate_certificate(pair, 1.0, cone, 0.0), "");
        }
        "x1sq_minus_x2sq" => {
            let v = augmented_convexity(pair, &dir(1, 0))?;
            c.add("(b1), (b2), (b3) hold at d = (1,0)", v.triple == Some((true, true, true)), format!("{:?}", v.triple));
            c.add("F + R+(1,0) nonconvex", !v.convex, "");
            let k = kkt_check(pair, &vi(&[0, 0]), cone)?;
            c.add("KKT at (0,0): A + lambda B not psd", !k.psd_ok, "");
            c.add("KKT at (0,0) does not certify optimality", k.verdict != KktVerdict::Optimal, format!("{:?}", k.verdict));
        }
        "x1sq" => {
            let f = epigraph_conditions(pair)?;
            c.add("C3 fires at d = (1,0)", f.contains(&Condition::C3), format!("{:?}", f));
            let r = solve_dual(pair, cone)?;
            c.add("lambda* = 0", is_exact_zero(&r.lambda_star), format!("{:?}", r.lambda_star));
            c.add("x* = (0,0)", r.x_star_exact.as_ref() == Some(&vi(&[0, 0])), format!("{:?}", r.x_star_exact));
            c.add("strong duality", r.strong_duality, "");
            let k = kkt_check(pair, &vi(&[0, 0]), cone)?;
            c.add("KKT certifies (0,0)", k.verdict == KktVerdict::Optimal, format!("{:?}", k.verdict));
        }
        "x1x2_x1plus1" => {
            let v = augmented_convexity(pair, &dir(1, 0))?;
            c.add("F + R+(1,0) nonconvex", !v.convex, "");
            let ok = v.witness.as_ref().is_some_and(|w| w.p == pt(-1, 2) && w.q == pt(-1, 0) && w.m == pt(-1, 1));
            c.add("witness (-1,2), (-1,0), midpoint (-1,1)", ok, format!("{:?}", v.witness.as_ref().map(|w| (&w.p, &w.q, &w.m))));
            let f = finiteness_preconditions(pair, cone)?;
            c.add("mu = -inf mechanism reported", f.mu_minus_infinity && !f.mechanism.is_empty(), f.mechanism.join("; "));
        }
        _ => unreachable!(),
    }
    Ok(Some(ExampleOutcome { name: name.into(), checks: c.0 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_pass() {
        for n in names() {
            let out = run_example(n).unwrap().unwrap();
            assert!(out.passed(), "{n}: {:?}", out.failures());
        }
    }
}
