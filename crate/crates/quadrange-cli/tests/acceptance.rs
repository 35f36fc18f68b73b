//! One PASS/FAIL line per acceptance criterion.

use std::process::Command;
use std::time::Instant;

use quadrange::convexity::{
    alternative_check, at_most_two_directions, augmented_convexity, joint_range_convexity, line_restriction, Condition,
};
use quadrange::corpus::load_example;
use quadrange::linalg::inertia;
use quadrange::optimize::{
    dual_value, epigraph_conditions, existence_report, finiteness_preconditions, kkt_check, slater_check, solve_dual, Cone,
    Ext, MuStatus,
};
use quadrange::oracle::{convexity_probe, dual_value_eig};
use quadrange::pencil::{eig_sym, simdiag, SdMatrix, SdVerdict};
use quadrange::random::{random_kind, random_pair, random_sym, random_vec, PairKind};
use quadrange::range::{classify_hom_range, nd_check, property_battery, Closed, ConeKind, Gen};
use quadrange::scalar::{ri, rq, to_f64, Rat, Scalar};
use quadrange::{hom_part, is_zero_pt, PlaneDirection, QuadraticFunction, QuadraticPair, QrError, SymMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pair(name: &str) -> QuadraticPair {
    load_example(name).expect("example").pair
}

fn dir(a: i64, b: i64) -> PlaneDirection {
    PlaneDirection::from_ints(a, b).unwrap()
}

fn pt(a: i64, b: i64) -> [Rat; 2] {
    [ri(a), ri(b)]
}

fn v(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| ri(x)).collect()
}

fn is_dir(g: &Gen, d: &PlaneDirection) -> bool {
    matches!(g, Gen::Exact(e) if e == d)
}

fn exact_zero(s: &Option<Scalar>) -> bool {
    matches!(s, Some(Scalar::Exact(r)) if r == &ri(0))
}

fn offdiag_zero(m: &SymMatrix) -> bool {
    (0..m.n()).all(|i| (0..m.n()).all(|j| i == j || m.get(i, j) == &ri(0)))
}

struct Report {
    lines: Vec<(usize, bool, String)>,
}

impl Report {
    fn record(&mut self, id: usize, pass: bool, what: String) {
        println!("{} criterion {id}: {what}", if pass { "PASS" } else { "FAIL" });
        self.lines.push((id, pass, what));
    }
}

fn c1() -> (bool, String) {
    let p = pair("ex0");
    let j = joint_range_convexity(&p).unwrap();
    let w_ok = j.witness.as_ref().is_some_and(|w| {
        w.m == pt(-1, 0) && ((w.p == pt(0, 0) && w.q == pt(-2, 0)) || (w.p == pt(-2, 0) && w.q == pt(0, 0)))
    });
    let h = classify_hom_range(&p);
    let ray = matches!(&h.kind, ConeKind::Ray { dir: g } if is_dir(g, &dir(-1, 1)));
    (!j.convex && w_ok && ray, format!("ex0 nonconvex={} witness={} ray(-1,1)={}", !j.convex, w_ok, ray))
}

fn c2() -> (bool, String) {
    let p = pair("ej_op1");
    let sd = simdiag(p.a(), p.b());
    let diag = match &sd.verdict {
        SdVerdict::Found(SdMatrix::Exact(c)) => offdiag_zero(&p.a().congruence(c)) && offdiag_zero(&p.b().congruence(c)),
        _ => false,
    };
    let line = matches!(classify_hom_range(&p).kind, ConeKind::Line { .. });
    (diag && line, format!("ej_op1 exact zero off-diagonals={diag} line={line}"))
}

fn c3() -> (bool, String) {
    let p = pair("ej_reff");
    let sd = matches!(simdiag(p.a(), p.b()).verdict, SdVerdict::NotSd);
    let h = classify_hom_range(&p);
    let closed_no = h.closed == Closed::No;
    let half = matches!(&h.kind, ConeKind::Halfplane { normal } if is_dir(normal, &dir(1, 0)));
    (sd && closed_no && half, format!("ej_reff not SD={sd} closed=No:{closed_no} closure x1>=0:{half}"))
}

fn c4() -> (bool, String) {
    let p = pair("ej_op00");
    let plane = matches!(classify_hom_range(&p).kind, ConeKind::Plane);
    let nd = nd_check(&p);
    let w = is_zero_pt(&hom_part(&p, &v(&[1, 1, 1])).unwrap()) && !nd.holds && nd.exact;
    let a = property_battery(&p).unwrap().a.verdict.known() == Some(true);
    (plane && w && a, format!("ej_op00 plane={plane} ND fails with (1,1,1)={w} SD={a}"))
}

fn c5() -> (bool, String) {
    let p = pair("ej_op0");
    let (z, u) = (v(&[0, 0]), v(&[1, 1]));
    let mut exact_only = true;
    for (d1, d2) in [(-1, 0), (-2, 0), (-7, 0), (1, 0), (0, 1), (0, -1), (1, 1), (-1, 1), (3, -2)] {
        let ls = line_restriction(&p, &z, &u, Some(&dir(d1, d2))).unwrap();
        exact_only &= ls.convex != (d2 == 0 && d1 < 0);
    }
    let j = joint_range_convexity(&p).unwrap();
    let ds = at_most_two_directions(&p).unwrap();
    let sub = ds.len() <= 2 && ds.iter().all(|d| *d == dir(1, 0) || *d == dir(-1, 0));
    (exact_only && !j.convex && sub, format!("ej_op0 line nonconvex iff d~(-1,0):{exact_only} joint nonconvex={} dirs={:?}", !j.convex, ds.iter().map(|d| d.to_string()).collect::<Vec<_>>()))
}

fn c6() -> (bool, String) {
    let p = pair("x1sq_minus_x2sq");
    let t = augmented_convexity(&p, &dir(1, 0)).unwrap().triple == Some((true, true, true));
    let k = !kkt_check(&p, &v(&[0, 0]), Cone::Zero).unwrap().psd_ok;
    let q = pair("x1sq");
    let c3 = epigraph_conditions(&q).unwrap().contains(&Condition::C3);
    let r = solve_dual(&q, Cone::Zero).unwrap();
    let ok2 = exact_zero(&r.lambda_star) && r.x_star_exact == Some(v(&[0, 0])) && r.strong_duality;
    (t && k && c3 && ok2, format!("triple={t} kkt psd fails={k} C3={c3} lambda*=0,x*=0,strong={ok2}"))
}

fn c7() -> (bool, String) {
    let p = pair("ej_s_lema");
    let r = solve_dual(&p, Cone::Zero).unwrap();
    let nd = existence_report(&p, Cone::Zero).unwrap().nd_holds;
    let ok = r.nu.abs() <= 1e-8
        && exact_zero(&r.lambda_star)
        && r.mu_lower() >= -1e-8
        && r.mu_upper() <= 1e-8
        && !r.primal_attained
        && !nd;
    (ok, format!("ej_s_lema nu={} lambda*={:?} mu in [{}, {}] attained={} nd={nd}", r.nu, r.lambda_star, r.mu_lower(), r.mu_upper(), r.primal_attained))
}

fn c8() -> (bool, String) {
    let p = pair("ej_sinsd1");
    let s = slater_check(&p, Cone::Zero).ok;
    let r = solve_dual(&p, Cone::Zero).unwrap();
    let ok = !s && !r.strong_duality && r.nu.abs() <= 1e-8 && !r.dual_attained;
    (ok, format!("ej_sinsd1 slater={s} strong={} nu={} dual attained={}", r.strong_duality, r.nu, r.dual_attained))
}

fn c9() -> (bool, String) {
    let p = pair("x1x2_x1plus1");
    let a = augmented_convexity(&p, &dir(1, 0)).unwrap();
    let w = a.witness.as_ref().is_some_and(|w| w.p == pt(-1, 2) && w.q == pt(-1, 0) && w.m == pt(-1, 1));
    let f = finiteness_preconditions(&p, Cone::Zero).unwrap();
    let ok = !a.convex && w && f.mu_minus_infinity && f.descent.is_some();
    (ok, format!("x1x2 nonconvex={} witness={w} mu=-inf mechanism={}", !a.convex, f.mechanism.join("; ")))
}

fn homogeneous_part(p: &QuadraticPair) -> QuadraticPair {
    p.hom_only()
}

// (i) the probe never finds a nonconvex homogeneous range
fn suite_dines(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut bad = 0;
    for i in 0..500 {
        let n = rng.gen_range(1..=4);
        let kind = random_kind(rng);
        let p = homogeneous_part(&random_pair(rng, n, kind));
        if convexity_probe(&p, 128, 1000 + i).nonconvex() {
            bad += 1;
        }
    }
    (bad == 0, format!("Dines probe convex on {}/500", 500 - bad))
}

// (ii) float oracle never contradicts an exact "convex", and finds most nonconvex ones
fn suite_oracle(rng: &mut ChaCha8Rng) -> (bool, String) {
    let (mut contradictions, mut nonconvex, mut found) = (0, 0, 0);
    for i in 0..500 {
        let n = rng.gen_range(1..=4);
        let kind = if i % 2 == 0 { PairKind::Proportional } else { random_kind(rng) };
        let p = random_pair(rng, n, kind);
        let exact = joint_range_convexity(&p).unwrap();
        let seed = 2000 + i as u64;
        if exact.convex {
            if convexity_probe(&p, 256, seed).nonconvex() {
                contradictions += 1;
            }
        } else {
            nonconvex += 1;
            if convexity_probe(&p, 10_000, seed).nonconvex() {
                found += 1;
            }
        }
    }
    let cov = if nonconvex == 0 { 1.0 } else { found as f64 / nonconvex as f64 };
    (
        contradictions == 0,
        format!("oracle/exact contradictions={contradictions}; probe found {found}/{nonconvex} exact-nonconvex ({:.1}%)", 100.0 * cov),
    )
}

// (iii) d ∉ −bd F_H or d2A − d1B semidefinite
fn suite_alternative(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut bad = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let kind = random_kind(rng);
        let p = random_pair(rng, n, kind);
        let d = loop {
            let (a, b) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            if (a, b) != (0, 0) {
                break dir(a, b);
            }
        };
        if let Err(QrError::AlternativeViolated(_)) = alternative_check(&p, &d) {
            bad += 1;
        }
    }
    (bad == 0, format!("alternative violated on {bad}/1000"))
}

// (iv) the battery's implication lattice
fn suite_lattice(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut bad = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=4);
        let kind = random_kind(rng);
        let p = random_pair(rng, n, kind);
        if property_battery(&p).is_err() {
            bad += 1;
        }
    }
    (bad == 0, format!("lattice violated on {bad}/500"))
}

// (v) q(λ) ≤ f(x) for λ ∈ P* and feasible x, checked exactly and through the eigen route
fn suite_weak_duality(rng: &mut ChaCha8Rng) -> (bool, String) {
    let (mut checks, mut bad) = (0, 0);
    for i in 0..200 {
        let n = rng.gen_range(1..=4);
        let kind = random_kind(rng);
        let p = random_pair(rng, n, kind);
        let cone = if i % 2 == 0 { Cone::Zero } else { Cone::NonNeg };
        let x = random_vec(rng, n, 3);
        let slack = if cone == Cone::Zero { ri(0) } else { ri(rng.gen_range(0..=3)) };
        // shift k2 so that g(x) = −slack
        let gx = p.g.eval(&x).unwrap();
        let g = QuadraticFunction::new(p.b().clone(), p.g.lin.clone(), &p.g.k - gx - slack).unwrap();
        let p = QuadraticPair::new(p.f.clone(), g).unwrap();
        let fx = p.f.eval(&x).unwrap();
        let scale = p.scale();
        for _ in 0..5 {
            let lo = if cone == Cone::NonNeg { 0 } else { -8 };
            let lam = rq(rng.gen_range(lo..=8), rng.gen_range(1..=4));
            checks += 1;
            match dual_value(&p, &lam, cone).unwrap() {
                Ext::Finite(q) if q > fx => bad += 1,
                _ => {}
            }
            let qf = dual_value_eig(&p, to_f64(&lam));
            if qf > to_f64(&fx) + 1e-8 * scale {
                bad += 1;
            }
        }
        let r = solve_dual(&p, cone).unwrap();
        checks += 1;
        if r.nu > to_f64(&fx) + 1e-8 * scale {
            bad += 1;
        }
    }
    (bad == 0, format!("weak duality violated on {bad}/{checks} (lambda, x) checks"))
}

// (vi) under Slater: [μ finite ∧ strong duality] ⟺ [ν finite ∧ F + R₊(1,0) convex]
fn suite_moregg(rng: &mut ChaCha8Rng) -> (bool, String) {
    let (mut done, mut bad, mut undecided) = (0, 0, 0);
    while done < 200 {
        let n = rng.gen_range(1..=4);
        let kind = random_kind(rng);
        let p = random_pair(rng, n, kind);
        if !slater_check(&p, Cone::Zero).ok {
            continue;
        }
        done += 1;
        let r = solve_dual(&p, Cone::Zero).unwrap();
        let lhs = match r.mu_status {
            MuStatus::Finite { .. } => Some(r.strong_duality),
            MuStatus::MinusInfinity { .. } => Some(false),
            MuStatus::Unresolved { .. } => None,
        };
        let rhs = r.nu.is_finite() && augmented_convexity(&p, &dir(1, 0)).unwrap().convex;
        match lhs {
            None => {
                undecided += 1;
                eprintln!("UNDECIDED {:?}\n{}", p, serde_json::to_string(&r).unwrap());
            }
            Some(l) if l != rhs => {
                bad += 1;
                eprintln!("BAD lhs={l} rhs={rhs} {:?}\n{}", p, serde_json::to_string(&r).unwrap());
            }
            _ => {}
        }
    }
    (bad == 0 && undecided == 0, format!("biconditional violated on {bad}/200, undecided {undecided}"))
}

fn c10() -> (bool, String) {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    let parts = [
        suite_dines(&mut rng),
        suite_oracle(&mut rng),
        suite_alternative(&mut rng),
        suite_lattice(&mut rng),
        suite_weak_duality(&mut rng),
        suite_moregg(&mut rng),
    ];
    let secs = t0.elapsed().as_secs_f64();
    for (i, (ok, what)) in parts.iter().enumerate() {
        println!("    ({}) {} {what}", ["i", "ii", "iii", "iv", "v", "vi"][i], if *ok { "ok" } else { "FAILED" });
    }
    (parts.iter().all(|p| p.0) && secs <= 60.0, format!("property suites in {secs:.1}s"))
}

fn c11() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    let mut mismatches = 0;
    for i in 0..1000 {
        let n = rng.gen_range(1..=6);
        let s = if i % 3 == 0 {
            // low rank gives zero eigenvalues
            let r = rng.gen_range(1..=n);
            let cols: Vec<Vec<Rat>> = (0..r).map(|_| random_vec(&mut rng, n, 3)).collect();
            let signs: Vec<i64> = (0..r).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
            SymMatrix::from_upper(n, |a, b| {
                cols.iter().zip(&signs).map(|(c, s)| ri(*s) * &c[a] * &c[b]).fold(ri(0), |x, y| x + y)
            })
        } else {
            let den = rng.gen_range(1..=7);
            random_sym(&mut rng, n, 9).scale(&rq(1, den))
        };
        let e = eig_sym(&s).unwrap();
        let tol = 1e-9 * s.max_abs().max(1.0);
        let np = e.values.iter().filter(|&&x| x > tol).count();
        let nm = e.values.iter().filter(|&&x| x < -tol).count();
        let ex = inertia(&s);
        if (np, nm, n - np - nm) != (ex.n_plus, ex.n_minus, ex.n_zero) {
            mismatches += 1;
        }
    }
    (mismatches == 0, format!("inertia exact vs eigen mismatches {mismatches}/1000"))
}

fn c12() -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_quadrange")).args(["examples", "run", "--all"]).output().unwrap();
    let ok = out.status.success();
    let text = String::from_utf8_lossy(&out.stdout);
    (ok, format!("examples run --all exit={:?} ({} PASS lines)", out.status.code(), text.lines().filter(|l| l.starts_with("PASS")).count()))
}

#[test]
fn acceptance() {
    let mut rep = Report { lines: Vec::new() };
    let crits: [fn() -> (bool, String); 12] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12];
    for (i, c) in crits.iter().enumerate() {
        let (ok, what) = c();
        rep.record(i + 1, ok, what);
    }
    let failed: Vec<usize> = rep.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
