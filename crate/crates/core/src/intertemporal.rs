//! Effective utility `v(x, t[, s]) = u(D(t[, x][, s]) x)`, schedule sums,
//! option comparison and preference-reversal scans.

use std::fmt;

use crate::discount::{DiscountSpec, FactorMode};
use crate::error::{Error, Result};
use crate::utility::UtilitySpec;

/// Default absolute indifference tolerance for [`compare`].
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DatedPayment {
    pub amount: f64,
    pub time: f64,
    pub state: Option<String>,
}

impl DatedPayment {
    pub fn new(amount: f64, time: f64) -> Result<Self> {
        if !amount.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "payment amount {amount} is not finite"
            )));
        }
        if !(time.is_finite() && time >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "payment time must be finite and >= 0, got {time}"
            )));
        }
        Ok(Self {
            amount,
            time,
            state: None,
        })
    }

    pub fn in_state(mut self, state: impl Into<String>) -> Self {
        self.state = Some(state.into());
        self
    }
}

/// A non-empty, labelled list of dated payments. Order is irrelevant.
#[derive(Debug, Clone, PartialEq)]
pub struct PaymentSchedule {
    label: String,
    payments: Vec<DatedPayment>,
}

impl PaymentSchedule {
    pub fn new(label: impl Into<String>, payments: Vec<DatedPayment>) -> Result<Self> {
        let label = label.into();
        if payments.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "schedule `{label}` has no payments"
            )));
        }
        Ok(Self { label, payments })
    }

    /// Convenience constructor from `(amount, time)` pairs.
    pub fn from_pairs(label: impl Into<String>, pairs: &[(f64, f64)]) -> Result<Self> {
        let payments = pairs
            .iter()
            .map(|&(x, t)| DatedPayment::new(x, t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(label, payments)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn payments(&self) -> &[DatedPayment] {
        &self.payments
    }

    /// Every payment delayed by `delta`.
    pub fn shifted(&self, delta: f64) -> Result<Self> {
        let payments = self
            .payments
            .iter()
            .map(|p| {
                let mut q = DatedPayment::new(p.amount, p.time + delta)?;
                q.state = p.state.clone();
                Ok(q)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.label.clone(), payments)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preference {
    A,
    B,
    Indifferent,
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preference::A => "A",
            Preference::B => "B",
            Preference::Indifferent => "indifferent",
        })
    }
}

/// A utility/discount pair plus the factor mode used when valuing payments.
#[derive(Debug, Clone, PartialEq)]
pub struct Valuation {
    pub utility: UtilitySpec,
    pub discount: DiscountSpec,
    pub mode: FactorMode,
}

impl Valuation {
    pub fn new(utility: UtilitySpec, discount: DiscountSpec) -> Self {
        Self {
            utility,
            discount,
            mode: FactorMode::Exact,
        }
    }

    pub fn with_mode(mut self, mode: FactorMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn effective_utility(&self, x: f64, t: f64, s: Option<&str>) -> Result<f64> {
        let d = self.discount.factor_with(t, Some(x), s, self.mode)?;
        self.utility.eval(d * x)
    }

    pub fn schedule_value(&self, schedule: &PaymentSchedule) -> Result<f64> {
        if !self.discount.uses_state() && schedule.payments.iter().any(|p| p.state.is_some()) {
            log::warn!(
                "schedule `{}` carries state labels but the {} discount ignores them",
                schedule.label,
                self.discount.name()
            );
        }
        let mut total = 0.0;
        for (i, p) in schedule.payments.iter().enumerate() {
            let state = if self.discount.uses_state() {
                p.state.as_deref()
            } else {
                None
            };
            total += self
                .effective_utility(p.amount, p.time, state)
                .map_err(|e| {
                    annotate(
                        e,
                        &format!(
                            "schedule `{}` payment {i} ({}@{})",
                            schedule.label, p.amount, p.time
                        ),
                    )
                })?;
        }
        Ok(total)
    }

    pub fn compare(
        &self,
        a: &PaymentSchedule,
        b: &PaymentSchedule,
        tol: f64,
    ) -> Result<Preference> {
        let (va, vb) = (self.schedule_value(a)?, self.schedule_value(b)?);
        Ok(prefer(va, vb, tol))
    }

    pub fn reversal_scan(
        &self,
        a0: &PaymentSchedule,
        b0: &PaymentSchedule,
        shifts: &[f64],
        tol: f64,
    ) -> Result<ReversalScan> {
        if let Some(d) = shifts.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(Error::Precondition(format!(
                "shift {d} must be finite and >= 0"
            )));
        }
        let baseline = self.compare(a0, b0, tol)?;
        let mut sorted = shifts.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut rows = Vec::with_capacity(sorted.len());
        for delta in sorted {
            let (a, b) = (a0.shifted(delta)?, b0.shifted(delta)?);
            let (value_a, value_b) = (self.schedule_value(&a)?, self.schedule_value(&b)?);
            rows.push(ScanRow {
                delta,
                value_a,
                value_b,
                preference: prefer(value_a, value_b, tol),
            });
        }
        let first_flip = rows
            .iter()
            .find(|r| reverses(baseline, r.preference))
            .map(|r| r.delta);
        Ok(ReversalScan {
            baseline,
            rows,
            first_flip,
        })
    }
}

fn annotate(e: Error, ctx: &str) -> Error {
    match e {
        Error::Domain(m) => Error::Domain(format!("{ctx}: {m}")),
        Error::MissingArgument(m) => Error::Domain(format!("{ctx}: missing {m}")),
        Error::UnknownState(s) => Error::UnknownState(format!("{s} (in {ctx})")),
        other => other,
    }
}

/// A strict preference opposite to (or emerging from) the baseline.
/// Passing through indifference is not a flip.
fn reverses(baseline: Preference, p: Preference) -> bool {
    match baseline {
        Preference::A => p == Preference::B,
        Preference::B => p == Preference::A,
        Preference::Indifferent => p != Preference::Indifferent,
    }
}

fn prefer(va: f64, vb: f64, tol: f64) -> Preference {
    if va > vb + tol {
        Preference::A
    } else if vb > va + tol {
        Preference::B
    } else {
        Preference::Indifferent
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub delta: f64,
    pub value_a: f64,
    pub value_b: f64,
    pub preference: Preference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReversalScan {
    /// Preference with no shift applied.
    pub baseline: Preference,
    /// One row per shift, ascending in delta.
    pub rows: Vec<ScanRow>,
    /// Smallest shift whose strict preference reverses the baseline.
    pub first_flip: Option<f64>,
}

pub fn effective_utility(
    u: &UtilitySpec,
    d: &DiscountSpec,
    x: f64,
    t: f64,
    s: Option<&str>,
) -> Result<f64> {
    let d = d.factor(t, Some(x), s)?;
    u.eval(d * x)
}

pub fn schedule_value(u: &UtilitySpec, d: &DiscountSpec, sch: &PaymentSchedule) -> Result<f64> {
    Valuation::new(u.clone(), d.clone()).schedule_value(sch)
}

pub fn compare(
    u: &UtilitySpec,
    d: &DiscountSpec,
    a: &PaymentSchedule,
    b: &PaymentSchedule,
) -> Result<Preference> {
    Valuation::new(u.clone(), d.clone()).compare(a, b, DEFAULT_TOL)
}

pub fn reversal_scan(
    u: &UtilitySpec,
    d: &DiscountSpec,
    a0: &PaymentSchedule,
    b0: &PaymentSchedule,
    shifts: &[f64],
) -> Result<ReversalScan> {
    Valuation::new(u.clone(), d.clone()).reversal_scan(a0, b0, shifts, DEFAULT_TOL)
}
