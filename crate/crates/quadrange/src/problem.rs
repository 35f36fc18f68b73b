//! JSON problem files.

use serde::Deserialize;
use serde_json::Value;

use crate::core::{QuadraticFunction, QuadraticPair, SymMatrix, Vector};
use crate::error::{QrError, Result};
use crate::optimize::Cone;
use crate::scalar::{from_f64_exact, parse_rat, ri, Mode, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// q(x) = ⟨Ax,x⟩ + ⟨a,x⟩ + k.
    #[default]
    Plain,
    /// q(x) = ½⟨Ax,x⟩ + ⟨a,x⟩ + k.
    Half,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    description: Option<String>,
    n: usize,
    #[serde(rename = "A")]
    a_mat: Vec<Vec<Value>>,
    #[serde(rename = "B")]
    b_mat: Vec<Vec<Value>>,
    #[serde(default)]
    a: Option<Vec<Value>>,
    #[serde(default)]
    b: Option<Vec<Value>>,
    #[serde(default)]
    k1: Option<Value>,
    #[serde(default)]
    k2: Option<Value>,
    #[serde(default)]
    convention: Convention,
    #[serde(default)]
    cone: Option<Cone>,
}

/// How numbers in the file are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NumberPolicy {
    /// Integers and "p/q" strings are exact; any other JSON number switches to float mode.
    #[default]
    Auto,
    /// Decimal literals are read as exact decimal fractions.
    Exact,
    /// Everything is rounded to binary64 first.
    Float,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub name: Option<String>,
    pub description: Option<String>,
    pub pair: QuadraticPair,
    pub cone: Option<Cone>,
    pub mode: Mode,
    pub warnings: Vec<String>,
}

struct Reader {
    policy: NumberPolicy,
    saw_float: bool,
}

impl Reader {
    fn num(&mut self, v: &Value, what: &str) -> Result<Rat> {
        let exact = match v {
            Value::String(s) => parse_rat(s).map_err(|_| QrError::Parse(format!("{what}: bad number {s:?}")))?,
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    ri(i)
                } else {
                    match self.policy {
                        NumberPolicy::Exact => parse_rat(&n.to_string()).map_err(|e| QrError::Parse(format!("{what}: {e}")))?,
                        _ => {
                            self.saw_float = true;
                            let x = n.as_f64().ok_or_else(|| QrError::Parse(format!("{what}: bad number")))?;
                            from_f64_exact(x).ok_or_else(|| QrError::Parse(format!("{what}: non-finite")))?
                        }
                    }
                }
            }
            _ => return Err(QrError::Parse(format!("{what}: expected a number or \"p/q\" string"))),
        };
        if self.policy == NumberPolicy::Float {
            self.saw_float = true;
            let x = crate::scalar::to_f64(&exact);
            return from_f64_exact(x).ok_or_else(|| QrError::Parse(format!("{what}: out of range")));
        }
        Ok(exact)
    }

    fn vector(&mut self, v: &Option<Vec<Value>>, n: usize, what: &str) -> Result<Vector> {
        match v {
            None => Ok(vec![ri(0); n]),
            Some(xs) => {
                if xs.len() != n {
                    return Err(QrError::DimensionMismatch { expected: n, got: xs.len() });
                }
                xs.iter().enumerate().map(|(i, x)| self.num(x, &format!("{what}[{i}]"))).collect()
            }
        }
    }

    fn matrix(&mut self, rows: &[Vec<Value>], n: usize, what: &str) -> Result<SymMatrix> {
        if rows.len() != n {
            return Err(QrError::DimensionMismatch { expected: n, got: rows.len() });
        }
        let mut out = Vec::with_capacity(n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(QrError::DimensionMismatch { expected: n, got: r.len() });
            }
            out.push(r.iter().enumerate().map(|(j, x)| self.num(x, &format!("{what}[{i}][{j}]"))).collect::<Result<Vec<_>>>()?);
        }
        SymMatrix::from_rows(what, out)
    }
}

pub fn parse_problem(text: &str, policy: NumberPolicy) -> Result<Problem> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| QrError::Parse(e.to_string()))?;
    let n = raw.n;
    if n == 0 {
        return Err(QrError::Parse("n must be positive".into()));
    }
    let mut rd = Reader { policy, saw_float: false };
    let mut am = rd.matrix(&raw.a_mat, n, "A")?;
    let mut bm = rd.matrix(&raw.b_mat, n, "B")?;
    let a = rd.vector(&raw.a, n, "a")?;
    let b = rd.vector(&raw.b, n, "b")?;
    let k1 = raw.k1.as_ref().map(|v| rd.num(v, "k1")).transpose()?.unwrap_or_else(|| ri(0));
    let k2 = raw.k2.as_ref().map(|v| rd.num(v, "k2")).transpose()?.unwrap_or_else(|| ri(0));
    if raw.convention == Convention::Half {
        let half = Rat::new(1.into(), 2.into());
        am = am.scale(&half);
        bm = bm.scale(&half);
    }
    let pair = QuadraticPair::new(QuadraticFunction::new(am, a, k1)?, QuadraticFunction::new(bm, b, k2)?)?;
    let mut warnings = Vec::new();
    let mode = if rd.saw_float {
        warnings.push("float values in the problem: converted to exact binary fractions, results inherit rounding".into());
        Mode::Float
    } else {
        Mode::Exact
    };
    Ok(Problem { name: raw.name, description: raw.description, pair, cone: raw.cone, mode, warnings })
}

pub fn load_problem(path: &std::path::Path, policy: NumberPolicy) -> Result<Problem> {
    let text = std::fs::read_to_string(path).map_err(|e| QrError::Parse(format!("{}: {e}", path.display())))?;
    parse_problem(&text, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rq;

    #[test]
    fn half_convention_and_strings() {
        let p = parse_problem(
            r#"{"n":2,"A":[[2,0],[0,0]],"B":[[0,"2"],[2,0]],"k2":1,"convention":"half","cone":"zero"}"#,
            NumberPolicy::Auto,
        )
        .unwrap();
        assert_eq!(p.pair.a().get(0, 0), &ri(1));
        assert_eq!(p.pair.b().get(0, 1), &ri(1));
        assert_eq!(p.cone, Some(Cone::Zero));
        assert_eq!(p.mode, Mode::Exact);
    }

    #[test]
    fn float_policy() {
        let t = r#"{"n":1,"A":[[0.1]],"B":[[0]]}"#;
        let auto = parse_problem(t, NumberPolicy::Auto).unwrap();
        assert_eq!(auto.mode, Mode::Float);
        assert_ne!(auto.pair.a().get(0, 0), &rq(1, 10));
        let exact = parse_problem(t, NumberPolicy::Exact).unwrap();
        assert_eq!(exact.pair.a().get(0, 0), &rq(1, 10));
        assert_eq!(exact.mode, Mode::Exact);
    }

    #[test]
    fn asymmetric_rejected() {
        let e = parse_problem(r#"{"n":2,"A":[[0,1],[2,0]],"B":[[0,0],[0,0]]}"#, NumberPolicy::Auto).unwrap_err();
        assert!(matches!(e, QrError::Asymmetric { .. }));
    }
}
