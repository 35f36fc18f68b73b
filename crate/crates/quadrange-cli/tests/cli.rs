use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn problem(name: &str) -> String {
    root().join("problems").join(format!("{name}.json")).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadrange")).args(args).output().expect("spawn quadrange")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn temp_file(tag: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("quadrange-cli-{}-{tag}.json", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

fn code_for(body: &str, tag: &str, cmd: &str) -> i32 {
    let p = temp_file(tag, body);
    let out = run(&[cmd, p.to_str().unwrap()]);
    std::fs::remove_file(&p).ok();
    out.status.code().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code_for("{\"n\":2,", "bad", "analyze"), 2);
    assert_eq!(code_for(r#"{"n":2,"A":[[1,0]],"B":[[0,0],[0,0]]}"#, "dim", "analyze"), 2);
    assert_eq!(code_for(r#"{"n":2,"A":[[0,1],[2,0]],"B":[[0,0],[0,0]]}"#, "asym", "analyze"), 3);
    assert_eq!(code_for(r#"{"n":1,"A":[[0]],"B":[[1]],"k2":1,"cone":"zero"}"#, "infeasible", "solve"), 4);
    // no cone in the file and none on the command line
    assert_eq!(code_for(r#"{"n":1,"A":[[1]],"B":[[1]]}"#, "nocone", "solve"), 2);
    let out = run(&["solve", &problem("x1x2_x1plus1")]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(json(&out)["mu_status"]["status"], "minus_infinity");
}

#[test]
fn analyze_ex0() {
    let out = run(&["analyze", &problem("ex0")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["convex"], false);
    assert_eq!(v["hom_range"]["kind"], "ray");
    assert_eq!(v["hom_range"]["dir"], serde_json::json!(["-1", "1"]));
}

#[test]
fn battery_for_nd_fail_example() {
    let v = json(&run(&["analyze", &problem("ej_op00")]));
    assert_eq!(v["battery"]["h"]["verdict"], "true");
    assert_eq!(v["battery"]["e"]["verdict"], "false");
}

#[test]
fn solve_and_certify() {
    let v = json(&run(&["solve", &problem("ej_s_lema")]));
    assert_eq!(v["nu_exact"], "0");
    assert_eq!(v["lambda_star"], "0");
    assert_eq!(v["primal_attained"], false);
    let v = json(&run(&["solve", &problem("kkt_pos")]));
    assert_eq!(v["x_star_exact"], serde_json::json!(["0", "0"]));
    let v = json(&run(&["certify", &problem("kkt_pos")]));
    assert_eq!(v["kkt"]["verdict"], "optimal");
    let v = json(&run(&["solve", &problem("ex0"), "--cone", "nonneg"]));
    assert_eq!(v["nu_exact"], "-2");
    assert_eq!(v["lambda_star"], "3/2");
}

#[test]
fn output_is_canonical_json() {
    for args in [vec!["analyze", "ej_reff"], vec!["solve", "ej_sinsd1"], vec!["solve", "ex0", "--cone", "nonneg"], vec!["certify", "ej_s_lema"]] {
        let path = problem(args[1]);
        let mut full = vec![args[0], path.as_str()];
        full.extend(&args[2..]);
        let out = run(&full);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap(), text.trim_end());
    }
}

#[test]
fn plot_is_deterministic_and_shows_the_puncture() {
    let dir = std::env::temp_dir().join(format!("quadrange-plot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut csvs = Vec::new();
    for tag in ["a", "b"] {
        let base = dir.join(tag);
        let out = run(&["plot", &problem("ej_op0"), "--out", base.to_str().unwrap(), "--seed", "7", "--samples", "3000"]);
        assert!(out.status.success());
        csvs.push(std::fs::read_to_string(base.with_extension("csv")).unwrap());
        assert!(std::fs::read_to_string(base.with_extension("svg")).unwrap().contains("<svg"));
    }
    assert_eq!(csvs[0], csvs[1]);
    let mut lines = csvs[0].lines();
    let header: Vec<_> = lines.next().unwrap().split(',').collect();
    let (fi, gi) = (header.len() - 2, header.len() - 1);
    assert_eq!((header[fi], header[gi]), ("f", "g"));
    // points on g ≈ 0 have f ≈ 0: the line g = 0 is hit only at the origin
    let mut near = 0;
    for l in lines {
        let r: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
        if r[gi].abs() < 1e-3 {
            near += 1;
            assert!(r[fi].abs() < 0.1, "f = {} at g = {}", r[fi], r[gi]);
        }
    }
    assert!(near > 0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn examples_commands() {
    let out = run(&["examples", "list"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 10);
    let out = run(&["examples", "run", "ej_sinsd1"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("PASS ej_sinsd1"));
    assert_eq!(run(&["examples", "run", "nope"]).status.code(), Some(2));
}
