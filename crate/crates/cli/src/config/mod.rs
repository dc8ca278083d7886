//! Scenario files: TOML documents validated into core types.

pub mod raw;

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use fcg_core::{
    audit_admissibility, AssessmentSet, DatedPayment, DiscountSpec, EtaSpec, Gamble,
    PaymentSchedule, Phi, StateSpace, UtilityKind, UtilitySpec,
};

use crate::error::{CliError, CliResult};
use crate::range::parse_values;
use raw::{RawAssessments, RawDiscount, RawEta, RawPhi, RawScenario, RawShifts, RawUtility};

/// Default strict margin for rejected gambles when fitting a functional.
pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct ScanSpec {
    pub a: String,
    pub b: String,
    pub shifts: Vec<f64>,
}

/// Assessments as written, before sure-loss generators are screened out.
#[derive(Debug, Clone)]
pub struct Assessments {
    pub space: StateSpace,
    pub accepted: Vec<Gamble>,
    pub rejected: Vec<Gamble>,
    pub epsilon: f64,
    pub queries: Vec<(String, Gamble)>,
}

impl Assessments {
    pub fn to_set(&self, utility: &UtilitySpec) -> fcg_core::Result<AssessmentSet> {
        AssessmentSet::new(
            self.space.clone(),
            utility.clone(),
            self.accepted.clone(),
            self.rejected.clone(),
        )
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub utility: UtilitySpec,
    pub discount: Option<DiscountSpec>,
    pub schedules: Vec<PaymentSchedule>,
    pub scan: Option<ScanSpec>,
    pub assessments: Option<Assessments>,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        Self::from_raw(parse_raw(text, origin)?)
    }

    pub fn from_raw(raw: RawScenario) -> CliResult<Self> {
        let utility = build_utility(&raw.utility)?;
        if matches!(utility.kind(), UtilityKind::Composed { .. }) {
            let report = audit_admissibility(&utility, 201);
            if !report.strictly_increasing {
                return Err(config(format!(
                    "composed utility is not strictly increasing{}",
                    report
                        .first_violation
                        .map_or(String::new(), |(a, b)| format!(
                            " between x = {a} and x = {b}"
                        ))
                )));
            }
        }
        let discount = raw.discount.as_ref().map(build_discount).transpose()?;
        let mut seen = HashSet::new();
        let mut schedules = Vec::with_capacity(raw.schedules.len());
        for s in &raw.schedules {
            if !seen.insert(s.label.as_str()) {
                return Err(config(format!("duplicate schedule label `{}`", s.label)));
            }
            let mut payments = Vec::with_capacity(s.payments.len());
            for (i, p) in s.payments.iter().enumerate() {
                let dp = DatedPayment::new(p.amount, p.t)
                    .map_err(|e| config(format!("schedule `{}` payment {i}: {e}", s.label)))?;
                payments.push(match &p.state {
                    Some(st) => dp.in_state(st.clone()),
                    None => dp,
                });
            }
            let sched = PaymentSchedule::new(s.label.clone(), payments)
                .map_err(|e| config(format!("schedule `{}`: {e}", s.label)))?;
            schedules.push(sched);
        }
        let scan = match &raw.scan {
            None => None,
            Some(sc) => {
                for name in [&sc.a, &sc.b] {
                    if !seen.contains(name.as_str()) {
                        return Err(config(format!("scan refers to unknown schedule `{name}`")));
                    }
                }
                let shifts = match &sc.shifts {
                    RawShifts::List(v) => v.clone(),
                    RawShifts::Range(text) => parse_values("shifts", text)
                        .map_err(|e| config(format!("scan shifts: {e}")))?,
                };
                if shifts.is_empty() {
                    return Err(config("scan needs at least one shift".into()));
                }
                if let Some(d) = shifts.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
                    return Err(config(format!("scan shift {d} must be finite and >= 0")));
                }
                Some(ScanSpec {
                    a: sc.a.clone(),
                    b: sc.b.clone(),
                    shifts,
                })
            }
        };
        let assessments = raw
            .assessments
            .as_ref()
            .map(|a| build_assessments(a, raw.wealth, &utility))
            .transpose()?;
        Ok(Self {
            utility,
            discount,
            schedules,
            scan,
            assessments,
        })
    }
}

/// Parses the document into its serde mirror; errors carry line and column.
pub fn parse_raw(text: &str, origin: &str) -> CliResult<RawScenario> {
    toml::from_str(text).map_err(|e| CliError::Parse {
        path: origin.to_string(),
        message: e.to_string().trim_end().to_string(),
    })
}

/// Canonical TOML for a parsed scenario.
pub fn to_toml(raw: &RawScenario) -> String {
    toml::to_string(raw).expect("scenario values are always representable")
}

fn config(msg: String) -> CliError {
    CliError::Config(msg)
}

fn core(ctx: &str) -> impl Fn(fcg_core::Error) -> CliError + '_ {
    move |e| config(format!("{ctx}: {e}"))
}

fn build_phi(raw: &RawPhi) -> CliResult<Phi> {
    let phi = match raw {
        RawPhi::Affine { slope, intercept } => Phi::Affine {
            slope: *slope,
            intercept: *intercept,
        },
        RawPhi::OddPower { p } => Phi::OddPower { p: *p },
        RawPhi::Sinh { scale } => Phi::Sinh { scale: *scale },
        RawPhi::Polynomial { coeffs } => Phi::Polynomial {
            coeffs: coeffs.clone(),
        },
        RawPhi::Tabulated { xs, ys } => Phi::Tabulated {
            xs: xs.clone(),
            ys: ys.clone(),
        },
    };
    phi.validate().map_err(core("utility phi"))?;
    Ok(phi)
}

pub fn build_utility(raw: &RawUtility) -> CliResult<UtilitySpec> {
    Ok(match raw {
        RawUtility::Linear {} => UtilitySpec::linear(),
        RawUtility::LogShift {} => UtilitySpec::log_shift(),
        RawUtility::Sqrt {} => UtilitySpec::sqrt(),
        RawUtility::PowerDiscounted { alpha } => {
            UtilitySpec::power_discounted(*alpha).map_err(core("utility"))?
        }
        RawUtility::Composed { base, phi } => {
            UtilitySpec::composed(build_utility(base)?, build_phi(phi)?).map_err(core("utility"))?
        }
    })
}

pub fn build_discount(raw: &RawDiscount) -> CliResult<DiscountSpec> {
    let ctx = core("discount");
    Ok(match raw {
        RawDiscount::Exponential { rate } => DiscountSpec::exponential(*rate).map_err(ctx)?,
        RawDiscount::Hyperbolic { k } => DiscountSpec::hyperbolic(*k).map_err(ctx)?,
        RawDiscount::QuasiHyperbolic { beta, delta } => {
            DiscountSpec::quasi_hyperbolic(*beta, *delta).map_err(ctx)?
        }
        RawDiscount::GeneralizedHyperbolic { k, p } => {
            DiscountSpec::generalized_hyperbolic(*k, *p).map_err(ctx)?
        }
        RawDiscount::ScaleDependent { base, eta } => {
            let eta = match eta {
                RawEta::InverseLog { log_base } => EtaSpec::inverse_log(*log_base),
                RawEta::Tabulated { xs, etas } => EtaSpec::tabulated(xs.clone(), etas.clone()),
            }
            .map_err(core("discount eta"))?;
            DiscountSpec::scale_dependent(build_discount(base)?, eta).map_err(ctx)?
        }
        RawDiscount::StateDependent { rates } => {
            DiscountSpec::state_dependent(rates.iter().map(|(k, v)| (k.clone(), *v)))
                .map_err(ctx)?
        }
        RawDiscount::Hybrid { lambda, d1, d2 } => {
            DiscountSpec::hybrid(*lambda, build_discount(d1)?, build_discount(d2)?).map_err(ctx)?
        }
    })
}

fn build_assessments(
    raw: &RawAssessments,
    global_wealth: Option<f64>,
    utility: &UtilitySpec,
) -> CliResult<Assessments> {
    let space = StateSpace::new(raw.states.iter().cloned()).map_err(core("assessments states"))?;
    let wealth = raw.wealth.or(global_wealth);
    if wealth.is_none() && utility.needs_wealth_shift() {
        return Err(config(format!(
            "the {} utility is undefined at 0, so assessments need a `wealth`",
            utility.name()
        )));
    }
    let gamble = |what: String, rewards: &[f64]| -> CliResult<Gamble> {
        if rewards.len() != space.len() {
            return Err(config(format!(
                "{what} has {} rewards for {} states",
                rewards.len(),
                space.len()
            )));
        }
        // without a wealth shift the floor only has to cover the worst reward
        let w = wealth.unwrap_or_else(|| rewards.iter().fold(1.0, |m, r| m.max(-r)));
        Gamble::new(space.clone(), rewards.to_vec(), w).map_err(|e| config(format!("{what}: {e}")))
    };
    let accepted = raw
        .accept
        .iter()
        .enumerate()
        .map(|(i, r)| gamble(format!("accept[{i}]"), r))
        .collect::<CliResult<Vec<_>>>()?;
    let rejected = raw
        .reject
        .iter()
        .enumerate()
        .map(|(j, r)| gamble(format!("reject[{j}]"), r))
        .collect::<CliResult<Vec<_>>>()?;
    let queries = raw
        .queries
        .iter()
        .map(|q| {
            Ok((
                q.label.clone(),
                gamble(format!("query `{}`", q.label), &q.rewards)?,
            ))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let epsilon = raw.epsilon.unwrap_or(DEFAULT_EPSILON);
    if !(epsilon > 0.0 && epsilon <= 1e-2) {
        return Err(config(format!(
            "assessments epsilon must lie in (0, 0.01], got {epsilon}"
        )));
    }
    Ok(Assessments {
        space,
        accepted,
        rejected,
        epsilon,
        queries,
    })
}
