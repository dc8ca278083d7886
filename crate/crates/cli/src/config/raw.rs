//! Serde mirror of the config file. Field names here are the config keys.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScenario {
    /// Default wealth floor for gambles when the utility needs a shift.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wealth: Option<f64>,
    pub utility: RawUtility,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discount: Option<RawDiscount>,
    #[serde(default, rename = "schedule", skip_serializing_if = "Vec::is_empty")]
    pub schedules: Vec<RawSchedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<RawScan>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assessments: Option<RawAssessments>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RawUtility {
    // empty braces so serde rejects stray keys next to the tag
    Linear {},
    LogShift {},
    Sqrt {},
    PowerDiscounted { alpha: f64 },
    Composed { base: Box<RawUtility>, phi: RawPhi },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum RawPhi {
    Affine {
        slope: f64,
        #[serde(default)]
        intercept: f64,
    },
    OddPower {
        p: f64,
    },
    Sinh {
        scale: f64,
    },
    Polynomial {
        coeffs: Vec<f64>,
    },
    Tabulated {
        xs: Vec<f64>,
        ys: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RawDiscount {
    Exponential {
        rate: f64,
    },
    Hyperbolic {
        k: f64,
    },
    QuasiHyperbolic {
        beta: f64,
        delta: f64,
    },
    GeneralizedHyperbolic {
        k: f64,
        p: f64,
    },
    ScaleDependent {
        base: Box<RawDiscount>,
        eta: RawEta,
    },
    StateDependent {
        rates: BTreeMap<String, f64>,
    },
    Hybrid {
        lambda: f64,
        d1: Box<RawDiscount>,
        d2: Box<RawDiscount>,
    },
}

fn ten() -> f64 {
    10.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum RawEta {
    InverseLog {
        #[serde(default = "ten")]
        log_base: f64,
    },
    Tabulated {
        xs: Vec<f64>,
        etas: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSchedule {
    pub label: String,
    pub payments: Vec<RawPayment>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPayment {
    pub amount: f64,
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScan {
    pub a: String,
    pub b: String,
    pub shifts: RawShifts,
}

/// Either explicit shifts or a `start:stop:step` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawShifts {
    List(Vec<f64>),
    Range(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAssessments {
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wealth: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub accept: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reject: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, rename = "query", skip_serializing_if = "Vec::is_empty")]
    pub queries: Vec<RawQuery>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawQuery {
    pub label: String,
    pub rewards: Vec<f64>,
}
