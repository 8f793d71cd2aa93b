//! Cross-validation harness: closed forms against the RK4 oracle and
//! simulation, extinction limits against the fixed point, and the
//! long-time rates against the exact curve.

use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;

use twotype_core::asymptotics::{extinction_curve, extinction_fixed_point, extinction_limit, CurveMethod};
use twotype_core::oracle::{estimate_pgf, EstimateWithCI};
use twotype_core::pgf::{pgf_a_real, Method};
use twotype_core::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    /// `F_A(x, y, t)`: closed form against RK4, optionally against simulation.
    Pgf,
    /// Long-time limit against the fixed point of the offspring PGFs.
    ExtinctionLimit,
    /// Limit against the exact curve at a finite time.
    ExtinctionConvergence,
    /// Relative error of the predicted correction `limit - E(t)`.
    ExtinctionRate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationCase {
    pub kind: CaseKind,
    pub params: ModelParams,
    pub t: Option<f64>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    /// Closed-form (or asymptotic) value; `None` when undefined.
    pub closed_value: Option<f64>,
    /// Reference value: RK4, fixed point or exact curve depending on `kind`.
    pub ode_value: Option<f64>,
    pub mc_estimate: Option<EstimateWithCI>,
    pub abs_discrepancy: Option<f64>,
    pub tolerance: f64,
    pub status: CaseStatus,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub cases: Vec<ValidationCase>,
    pub summary: Summary,
    pub runtime_s: f64,
}

impl ValidationReport {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|v| format!("{v:?}")).unwrap_or_default();
        let mut s = String::from(
            "kind,alpha,p,lambda_a,lambda_b,t,x,y,closed_value,ode_value,mc_value,mc_half_width_99,abs_discrepancy,tolerance,status\n",
        );
        for c in &self.cases {
            let m = &c.params;
            s += &format!(
                "{},{:?},{:?},{:?},{:?},{},{},{},{},{},{},{},{},{:?},{:?}\n",
                serde_json::to_value(c.kind)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
                m.alpha(),
                m.p(),
                m.lambda_a(),
                m.lambda_b(),
                opt(c.t),
                opt(c.x),
                opt(c.y),
                opt(c.closed_value),
                opt(c.ode_value),
                opt(c.mc_estimate.map(|e| e.value)),
                opt(c.mc_estimate.map(|e| e.half_width_99)),
                opt(c.abs_discrepancy),
                c.tolerance,
                c.status
            );
        }
        s
    }
}

const PGF_TOL: f64 = 1e-6;
const MIN_EXPECTED_EVENTS: f64 = 10.0;

fn params(alpha: f64, p: f64, la: f64, lb: f64) -> ModelParams {
    ModelParams::new(alpha, p, la, lb).expect("suite parameters are valid")
}

fn blank(kind: CaseKind, m: ModelParams, t: Option<f64>, tolerance: f64) -> ValidationCase {
    ValidationCase {
        kind,
        params: m,
        t,
        x: None,
        y: None,
        closed_value: None,
        ode_value: None,
        mc_estimate: None,
        abs_discrepancy: None,
        tolerance,
        status: CaseStatus::Fail,
        note: None,
    }
}

fn pgf_case(m: ModelParams, x: f64, y: f64, t: f64, mc: Option<(usize, u64)>) -> ValidationCase {
    let mut c = blank(CaseKind::Pgf, m, Some(t), PGF_TOL);
    c.x = Some(x);
    c.y = Some(y);
    let ode = match pgf_a_real(x, y, t, &m, Method::Oracle) {
        Ok(v) => v,
        Err(e) => {
            c.note = Some(e.to_string());
            return c;
        }
    };
    c.ode_value = Some(ode);
    let mut ok = true;
    if let Some((replicates, seed)) = mc {
        match estimate_pgf(&m, x, y, t, replicates, seed) {
            Ok(est) => {
                // the normal-theory interval needs enough events on both sides
                let n = est.replicates as f64;
                if n * ode.min(1.0 - ode) >= MIN_EXPECTED_EVENTS {
                    ok &= est.covers(ode);
                } else {
                    c.note = Some(format!("too few expected events for the MC interval ({})", n * ode));
                }
                c.mc_estimate = Some(est);
            }
            Err(e) => {
                ok = false;
                c.note = Some(e.to_string());
            }
        }
    }
    match pgf_a_real(x, y, t, &m, Method::ClosedForm) {
        Ok(closed) => {
            let d = (closed - ode).abs();
            c.closed_value = Some(closed);
            c.abs_discrepancy = Some(d);
            ok &= d <= PGF_TOL;
            c.status = if ok { CaseStatus::Pass } else { CaseStatus::Fail };
        }
        Err(e) => {
            c.note = Some(c.note.take().map_or(e.to_string(), |n| format!("{n}; {e}")));
            c.status = if ok { CaseStatus::Skipped } else { CaseStatus::Fail };
        }
    }
    c
}

fn limit_case(m: ModelParams) -> ValidationCase {
    let mut c = blank(CaseKind::ExtinctionLimit, m, None, 1e-10);
    let fixed = extinction_fixed_point(&m);
    c.ode_value = Some(fixed);
    match extinction_limit(&m) {
        Ok(res) => {
            let d = (res.limit - fixed).abs();
            c.closed_value = Some(res.limit);
            c.abs_discrepancy = Some(d);
            c.status = if d <= c.tolerance {
                CaseStatus::Pass
            } else {
                CaseStatus::Fail
            };
        }
        Err(e) => {
            c.note = Some(e.to_string());
            c.status = CaseStatus::Skipped;
        }
    }
    c
}

fn exact(m: &ModelParams, t: f64) -> twotype_core::Result<f64> {
    Ok(extinction_curve(m, &[t], CurveMethod::Exact)?[0].1)
}

fn convergence_case(m: ModelParams, t: f64, tolerance: f64) -> ValidationCase {
    let mut c = blank(CaseKind::ExtinctionConvergence, m, Some(t), tolerance);
    match (extinction_limit(&m), exact(&m, t)) {
        (Ok(res), Ok(e)) => {
            let d = (res.limit - e).abs();
            c.closed_value = Some(res.limit);
            c.ode_value = Some(e);
            c.abs_discrepancy = Some(d);
            c.status = if d <= tolerance {
                CaseStatus::Pass
            } else {
                CaseStatus::Fail
            };
        }
        (Err(e), _) | (_, Err(e)) => c.note = Some(e.to_string()),
    }
    c
}

fn rate_case(m: ModelParams, t: f64, tolerance: f64) -> ValidationCase {
    let mut c = blank(CaseKind::ExtinctionRate, m, Some(t), tolerance);
    match (extinction_limit(&m), exact(&m, t)) {
        (Ok(res), Ok(e)) => {
            let predicted = res.limit - res.approximate(t);
            let d = ((res.limit - e) / predicted - 1.0).abs();
            c.closed_value = Some(res.approximate(t));
            c.ode_value = Some(e);
            c.abs_discrepancy = Some(d);
            c.status = if d <= tolerance {
                CaseStatus::Pass
            } else {
                CaseStatus::Fail
            };
        }
        (Err(e), _) | (_, Err(e)) => c.note = Some(e.to_string()),
    }
    c
}

fn quick_cases() -> Vec<ValidationCase> {
    let regimes = [
        params(0.5, 0.5, 1.0, 1.0),
        params(0.25, 0.5, 1.0, 1.0),
        params(0.5, 0.3, 1.0, 1.0),
    ];
    let points = [(0.0, 0.0, 1.0), (0.3, 0.7, 0.1), (0.7, 0.3, 5.0), (0.5, 0.5, 2.0)];
    let mut cases = Vec::new();
    for (i, m) in regimes.iter().enumerate() {
        for (j, &(x, y, t)) in points.iter().enumerate() {
            cases.push(pgf_case(*m, x, y, t, Some((2_000, (10 * i + j) as u64))));
        }
        cases.push(limit_case(*m));
    }
    cases
}

fn full_cases() -> Vec<ValidationCase> {
    let branches = [
        params(0.5, 0.5, 0.2, 1.0),
        params(0.5, 0.5, 1.0, 1.0),
        params(0.7, 0.5, 1.0, 1.0),
        params(0.25, 0.5, 1.0, 1.0),
        params(0.5, 0.3, 1.0, 1.0),
    ];
    let grid = [0.0, 0.3, 0.7, 1.0];
    let mut cases = Vec::new();
    for m in &branches {
        for x in grid {
            for y in grid {
                for t in [0.1, 1.0, 5.0, 20.0] {
                    cases.push(pgf_case(*m, x, y, t, None));
                }
            }
        }
        cases.push(limit_case(*m));
    }
    let mc = [
        (params(0.5, 0.5, 1.0, 1.0), 0.0, 0.0, 25.0),
        (params(0.25, 0.5, 1.0, 1.0), 0.0, 0.0, 10.0),
        (params(0.5, 0.3, 1.0, 1.0), 0.0, 0.0, 10.0),
        (params(0.5, 0.5, 1.0, 1.0), 0.5, 0.5, 2.0),
    ];
    for (k, &(m, x, y, t)) in mc.iter().enumerate() {
        cases.push(pgf_case(m, x, y, t, Some((100_000, 100 + k as u64))));
    }
    cases.push(rate_case(params(0.5, 0.5, 1.0, 1.0), 1e4, 0.05));
    cases.push(convergence_case(params(0.25, 0.5, 1.0, 1.0), 1e3, 1e-3));
    cases.push(rate_case(params(0.25, 0.5, 1.0, 1.0), 1e3, 0.10));
    cases.push(convergence_case(params(0.5, 0.3, 1.0, 1.0), 20.0, 1e-5));
    cases
}

/// Runs a suite. Failures are report content, never errors.
pub fn cross_validate(suite: Suite) -> ValidationReport {
    let start = Instant::now();
    let cases = match suite {
        Suite::Quick => quick_cases(),
        Suite::Full => full_cases(),
    };
    let mut summary = Summary::default();
    for c in &cases {
        match c.status {
            CaseStatus::Pass => summary.pass += 1,
            CaseStatus::Fail => summary.fail += 1,
            CaseStatus::Skipped => summary.skipped += 1,
        }
    }
    ValidationReport {
        cases,
        summary,
        runtime_s: start.elapsed().as_secs_f64(),
    }
}
