//! Aggregated reports behind the command-line tool.

use serde::Serialize;

use crate::convexity::{at_most_two_directions, joint_range_convexity, nonconvex_canonical_form, CanonicalForm, Witness};
use crate::core::{PlaneDirection, QuadraticPair};
use crate::error::Result;
use crate::optimize::{
    existence_report, finiteness_preconditions, kkt_check, slater_check, slemma_certify, solve_dual, Cone, DualReport,
    ExistenceReport, FinitenessReport, KktReport, MuStatus, SLemmaReport, SlaterReport,
};
use crate::pencil::{simdiag, SdMatrix, SdVerdict};
use crate::range::{boundary_line, classify_hom_range, nd_check, property_battery, ConeClass, NdReport, PropertyBattery};
use crate::scalar::{fmt_rat, Mode};

#[derive(Clone, Debug, Serialize)]
pub struct SdSummary {
    /// "found", "not_sd" or "unknown".
    pub verdict: &'static str,
    pub route: &'static str,
    pub exact_decision: bool,
    /// Columns of C with CᵀAC and CᵀBC diagonal; rationals as strings.
    pub columns: Option<Vec<Vec<String>>>,
}

fn sd_summary(pair: &QuadraticPair) -> SdSummary {
    let sd = simdiag(pair.a(), pair.b());
    let (verdict, columns) = match &sd.verdict {
        SdVerdict::Found(SdMatrix::Exact(c)) => ("found", Some(c.iter().map(|v| v.iter().map(fmt_rat).collect()).collect())),
        SdVerdict::Found(SdMatrix::Float(c)) => ("found", Some(c.iter().map(|v| v.iter().map(|x| format!("{x:e}")).collect()).collect())),
        SdVerdict::NotSd => ("not_sd", None),
        SdVerdict::Unknown => ("unknown", None),
    };
    SdSummary { verdict, route: sd.route, exact_decision: sd.exact_decision, columns }
}

#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub mode: Mode,
    pub nd: NdReport,
    pub sd: SdSummary,
    pub hom_range: ConeClass,
    /// Direction of the boundary line of F_H(R^n) when ND fails and one exists.
    pub boundary: Option<PlaneDirection>,
    pub convex: bool,
    pub convexity_reason: String,
    pub witness: Option<Witness>,
    pub nonconvex_directions: Vec<PlaneDirection>,
    pub battery: PropertyBattery,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_form: Option<CanonicalForm>,
    pub warnings: Vec<String>,
}

/// `dir` restricts the convexity question to F(R^n) + R₊dir.
pub fn analyze(pair: &QuadraticPair, mode: Mode, dir: Option<&PlaneDirection>) -> Result<Analysis> {
    let mut warnings = Vec::new();
    let (convex, convexity_reason, witness, nonconvex_directions) = match dir {
        None => {
            let j = joint_range_convexity(pair)?;
            (j.convex, j.reason, j.witness, at_most_two_directions(pair)?)
        }
        Some(d) => {
            let v = crate::convexity::augmented_convexity(pair, d)?;
            let reason = if v.convex { format!("fired: {:?}", v.fired) } else { format!("(b1),(b2),(b3) hold for d = {d}") };
            let dirs = if v.convex { Vec::new() } else { vec![d.clone()] };
            (v.convex, reason, v.witness, dirs)
        }
    };
    let canonical_form = match nonconvex_directions.first() {
        Some(d) => match nonconvex_canonical_form(pair, d) {
            Ok(c) => Some(c),
            Err(e) => {
                warnings.push(format!("canonical form: {e}"));
                None
            }
        },
        None => None,
    };
    let nd = nd_check(pair);
    let boundary = if nd.holds { None } else { boundary_line(pair).ok() };
    if mode == Mode::Float {
        warnings.push("input contained floats; decisions are exact for the binary values actually stored".into());
    }
    Ok(Analysis {
        mode,
        nd,
        sd: sd_summary(pair),
        hom_range: classify_hom_range(pair),
        boundary,
        convex,
        convexity_reason,
        witness,
        nonconvex_directions,
        battery: property_battery(pair)?,
        canonical_form,
        warnings,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    #[serde(flatten)]
    pub dual: DualReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finiteness: Option<FinitenessReport>,
}

impl SolveReport {
    pub fn mu_minus_infinity(&self) -> bool {
        matches!(self.dual.mu_status, MuStatus::MinusInfinity { .. })
    }
}

pub fn solve(pair: &QuadraticPair, cone: Cone) -> Result<SolveReport> {
    let dual = solve_dual(pair, cone)?;
    let finiteness = if matches!(dual.mu_status, MuStatus::MinusInfinity { .. }) {
        Some(finiteness_preconditions(pair, cone)?)
    } else {
        None
    };
    Ok(SolveReport { dual, finiteness })
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    pub cone: Cone,
    pub slater: SlaterReport,
    pub slemma: SLemmaReport,
    /// KKT test at the recovered exact minimizer, when there is one.
    pub kkt: Option<KktReport>,
    pub existence: ExistenceReport,
}

pub fn certify(pair: &QuadraticPair, cone: Cone) -> Result<CertifyReport> {
    let dual = solve_dual(pair, cone)?;
    let kkt = match &dual.x_star_exact {
        Some(x) => Some(kkt_check(pair, x, cone)?),
        None => None,
    };
    Ok(CertifyReport {
        cone,
        slater: slater_check(pair, cone),
        slemma: slemma_certify(pair, cone)?,
        kkt,
        existence: existence_report(pair, cone)?,
    })
}
