//! Model parameters, criticality classification and progeny PGFs.
//!
//! Convention: each progeny of a B-cell division remains a B-cell with
//! probability `q` and is lost with probability `p`, so a B-division yields
//! two B-cells with probability `q^2`, one with `2pq` and none with `p^2`.
//! The progeny PGF is `h_B(y) = (p + q y)^2` and the mean number of surviving
//! B offspring is `2q`. Read `p` as the per-progeny differentiation (exit)
//! probability; B-cells are sub-critical exactly when `p > q`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{ComplexValue, Error, Result};

/// Parameters closer than this to the `alpha in {0, 1}` or `q = 0` corners are
/// handled by the numerical oracle only.
pub const CORNER_DELTA: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    alpha: f64,
    p: f64,
    q: f64,
    lambda_a: f64,
    lambda_b: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, p: f64, lambda_a: f64, lambda_b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} not in [0, 1]")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p = {p} not in [0, 1]")));
        }
        if !(lambda_a > 0.0 && lambda_a.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda_a = {lambda_a} must be > 0")));
        }
        if !(lambda_b > 0.0 && lambda_b.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda_b = {lambda_b} must be > 0")));
        }
        Ok(Self {
            alpha,
            p,
            q: 1.0 - p,
            lambda_a,
            lambda_b,
        })
    }

    /// Parses `key = value` lines (keys `alpha`, `p`, `lambda_a`, `lambda_b`).
    ///
    /// Blank lines and `#` comments are ignored. `lambda_a` and `lambda_b`
    /// default to 1. `q` is derived and rejected as a key.
    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut alpha = None;
        let mut p = None;
        let mut lambda_a = 1.0;
        let mut lambda_b = 1.0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("line {}: expected key=value", lineno + 1)))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("line {}: bad number {:?}", lineno + 1, value.trim())))?;
            match key.trim() {
                "alpha" => alpha = Some(value),
                "p" => p = Some(value),
                "lambda_a" => lambda_a = value,
                "lambda_b" => lambda_b = value,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        let alpha = alpha.ok_or_else(|| Error::InvalidParameter("missing key alpha".into()))?;
        let p = p.ok_or_else(|| Error::InvalidParameter("missing key p".into()))?;
        Self::new(alpha, p, lambda_a, lambda_b)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `1 - p`.
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn lambda_a(&self) -> f64 {
        self.lambda_a
    }

    pub fn lambda_b(&self) -> f64 {
        self.lambda_b
    }

    /// Same probabilities, both rates multiplied by `c`.
    pub fn with_time_scale(&self, c: f64) -> Result<Self> {
        Self::new(self.alpha, self.p, self.lambda_a * c, self.lambda_b * c)
    }

    /// Mean-growth exponent of the A population, `lambda_a (1 - 2 alpha)`.
    pub fn growth_a(&self) -> f64 {
        self.lambda_a * (1.0 - 2.0 * self.alpha)
    }

    /// Mean-growth exponent of the B population, `lambda_b (q^2 - p^2)`.
    pub fn growth_b(&self) -> f64 {
        self.lambda_b * (self.q * self.q - self.p * self.p)
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} p={} lambda_a={} lambda_b={}",
            self.alpha, self.p, self.lambda_a, self.lambda_b
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criticality {
    SubCritical,
    Critical,
    SuperCritical,
}

/// Which closed form for `F_A` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremBranch {
    /// Both types critical; Bessel-function solution.
    #[serde(rename = "BiCritical_1a")]
    BiCritical,
    /// Non-critical A, critical B; Whittaker-function solution.
    #[serde(rename = "NonCritA_CritB_1b")]
    NonCritACritB,
    /// Non-critical B; Gauss hypergeometric solution.
    #[serde(rename = "NonCritB_1c")]
    NonCritB,
    /// Parameter corner without a usable closed form.
    OracleOnly,
}

impl TheoremBranch {
    pub fn label(&self) -> &'static str {
        match self {
            TheoremBranch::BiCritical => "BiCritical_1a",
            TheoremBranch::NonCritACritB => "NonCritA_CritB_1b",
            TheoremBranch::NonCritB => "NonCritB_1c",
            TheoremBranch::OracleOnly => "OracleOnly",
        }
    }
}

impl fmt::Display for TheoremBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalityRegime {
    pub a_class: Criticality,
    pub b_class: Criticality,
    pub theorem_branch: TheoremBranch,
}

/// Classifies by mean offspring: `2(1 - alpha)` for A, `2q` for B.
///
/// Equality tests are exact; parameters are inputs, not computed values.
pub fn classify(params: &ModelParams) -> CriticalityRegime {
    let a_class = if params.alpha == 0.5 {
        Criticality::Critical
    } else if params.alpha < 0.5 {
        Criticality::SuperCritical
    } else {
        Criticality::SubCritical
    };
    let b_class = if params.p == 0.5 {
        Criticality::Critical
    } else if params.q > params.p {
        Criticality::SuperCritical
    } else {
        Criticality::SubCritical
    };
    let corner = params.alpha < CORNER_DELTA || params.alpha > 1.0 - CORNER_DELTA || params.q < CORNER_DELTA;
    let theorem_branch = if corner {
        TheoremBranch::OracleOnly
    } else {
        match (a_class, b_class) {
            (Criticality::Critical, Criticality::Critical) => TheoremBranch::BiCritical,
            (_, Criticality::Critical) => TheoremBranch::NonCritACritB,
            _ => TheoremBranch::NonCritB,
        }
    };
    CriticalityRegime {
        a_class,
        b_class,
        theorem_branch,
    }
}

/// `h_A(x, y) = ((1 - alpha) x + alpha y)^2`.
pub fn progeny_pgf_a(x: ComplexValue, y: ComplexValue, params: &ModelParams) -> ComplexValue {
    let s = x * (1.0 - params.alpha) + y * params.alpha;
    s * s
}

/// `h_B(y) = (p + q y)^2`.
pub fn progeny_pgf_b(y: ComplexValue, params: &ModelParams) -> ComplexValue {
    let s = y * params.q + params.p;
    s * s
}
