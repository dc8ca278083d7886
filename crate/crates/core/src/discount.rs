//! Discount regimes evaluated to a factor `D(t[, x][, s])` in `(0, 1]`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::utility::piecewise_linear;

/// Maximum nesting of `ScaleDependent` / `Hybrid` composites.
pub const MAX_NESTING: usize = 8;

/// How leaf factors are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FactorMode {
    #[default]
    Exact,
    /// Every leaf regime's factor is rounded to two decimals before it is
    /// mixed or applied, replaying hand arithmetic done with rounded
    /// intermediates.
    TwoDecimalLeaves,
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

/// Reward-dependent exponent `eta(x)` of a scale-dependent regime.
#[derive(Debug, Clone, PartialEq)]
pub enum EtaSpec {
    /// `eta(x) = 1 / log_b(x)`, defined for `x > 1`.
    InverseLog { log_base: f64 },
    /// Piecewise linear through `(xs, etas)`, held constant past either end.
    Tabulated { xs: Vec<f64>, etas: Vec<f64> },
}

impl EtaSpec {
    pub fn inverse_log(log_base: f64) -> Result<Self> {
        let eta = EtaSpec::InverseLog { log_base };
        eta.validate()?;
        Ok(eta)
    }

    pub fn tabulated(xs: Vec<f64>, etas: Vec<f64>) -> Result<Self> {
        let eta = EtaSpec::Tabulated { xs, etas };
        eta.validate()?;
        Ok(eta)
    }

    fn validate(&self) -> Result<()> {
        match self {
            EtaSpec::InverseLog { log_base } => {
                if !(log_base.is_finite() && *log_base > 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "eta log_base must exceed 1, got {log_base}"
                    )));
                }
            }
            EtaSpec::Tabulated { xs, etas } => {
                if xs.is_empty() || xs.len() != etas.len() {
                    return Err(Error::InvalidParameter(
                        "tabulated eta needs equal-length, non-empty x/eta lists".into(),
                    ));
                }
                if xs.windows(2).any(|w| !(w[1] > w[0])) || xs.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidParameter(
                        "tabulated eta x values must be finite and strictly increasing".into(),
                    ));
                }
                if etas.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
                    return Err(Error::InvalidParameter(
                        "tabulated eta values must be positive".into(),
                    ));
                }
                let up = etas.windows(2).all(|w| w[1] >= w[0]);
                let down = etas.windows(2).all(|w| w[1] <= w[0]);
                if !(up || down) {
                    return Err(Error::InvalidParameter(
                        "tabulated eta must be monotone".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let ok = match self {
            EtaSpec::InverseLog { .. } => x > 1.0,
            EtaSpec::Tabulated { .. } => x > 0.0,
        };
        if ok && x.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "scale-dependent discount undefined at reward x = {x}"
            )))
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match self {
            EtaSpec::InverseLog { log_base } => log_base.ln() / x.ln(),
            EtaSpec::Tabulated { xs, etas } => tabulated_eta(xs, etas, x),
        })
    }

    /// Analytic for `InverseLog`; central difference with step `1e-5 x`
    /// for tables.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match self {
            EtaSpec::InverseLog { log_base } => {
                let lb = x.ln() / log_base.ln();
                -1.0 / (x * log_base.ln() * lb * lb)
            }
            EtaSpec::Tabulated { xs, etas } => {
                let h = 1e-5 * x;
                (tabulated_eta(xs, etas, x + h) - tabulated_eta(xs, etas, x - h)) / (2.0 * h)
            }
        })
    }
}

fn tabulated_eta(xs: &[f64], etas: &[f64], x: f64) -> f64 {
    if xs.len() == 1 || x <= xs[0] {
        etas[0]
    } else if x >= xs[xs.len() - 1] {
        etas[etas.len() - 1]
    } else {
        piecewise_linear(xs, etas, x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiscountKind {
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
        base: Box<DiscountSpec>,
        eta: EtaSpec,
    },
    StateDependent {
        rates: BTreeMap<String, f64>,
    },
    Hybrid {
        lambda: f64,
        d1: Box<DiscountSpec>,
        d2: Box<DiscountSpec>,
    },
}

/// A validated discount regime. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscountSpec {
    kind: DiscountKind,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

impl DiscountSpec {
    pub fn exponential(rate: f64) -> Result<Self> {
        positive("exponential rate r", rate)?;
        Ok(Self {
            kind: DiscountKind::Exponential { rate },
        })
    }

    pub fn hyperbolic(k: f64) -> Result<Self> {
        positive("hyperbolic k", k)?;
        Ok(Self {
            kind: DiscountKind::Hyperbolic { k },
        })
    }

    pub fn quasi_hyperbolic(beta: f64, delta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quasi-hyperbolic beta must lie in (0, 1], got {beta}"
            )));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quasi-hyperbolic delta must lie in (0, 1), got {delta}"
            )));
        }
        Ok(Self {
            kind: DiscountKind::QuasiHyperbolic { beta, delta },
        })
    }

    pub fn generalized_hyperbolic(k: f64, p: f64) -> Result<Self> {
        positive("generalized hyperbolic k", k)?;
        positive("generalized hyperbolic p", p)?;
        Ok(Self {
            kind: DiscountKind::GeneralizedHyperbolic { k, p },
        })
    }

    pub fn scale_dependent(base: DiscountSpec, eta: EtaSpec) -> Result<Self> {
        eta.validate()?;
        Self::nested(DiscountKind::ScaleDependent {
            base: Box::new(base),
            eta,
        })
    }

    pub fn state_dependent<I, S>(rates: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (label, r) in rates {
            let label = label.into();
            positive(&format!("rate for state `{label}`"), r)?;
            if map.insert(label.clone(), r).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate state label `{label}`"
                )));
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidParameter(
                "state-dependent discount needs at least one state rate".into(),
            ));
        }
        Ok(Self {
            kind: DiscountKind::StateDependent { rates: map },
        })
    }

    pub fn hybrid(lambda: f64, d1: DiscountSpec, d2: DiscountSpec) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!(
                "hybrid lambda must lie in [0, 1], got {lambda}"
            )));
        }
        Self::nested(DiscountKind::Hybrid {
            lambda,
            d1: Box::new(d1),
            d2: Box::new(d2),
        })
    }

    fn nested(kind: DiscountKind) -> Result<Self> {
        let spec = Self { kind };
        if spec.nesting_depth() > MAX_NESTING {
            return Err(Error::InvalidParameter(format!(
                "discount composition nested deeper than {MAX_NESTING}"
            )));
        }
        Ok(spec)
    }

    pub fn kind(&self) -> &DiscountKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            DiscountKind::Exponential { .. } => "exponential",
            DiscountKind::Hyperbolic { .. } => "hyperbolic",
            DiscountKind::QuasiHyperbolic { .. } => "quasi_hyperbolic",
            DiscountKind::GeneralizedHyperbolic { .. } => "generalized_hyperbolic",
            DiscountKind::ScaleDependent { .. } => "scale_dependent",
            DiscountKind::StateDependent { .. } => "state_dependent",
            DiscountKind::Hybrid { .. } => "hybrid",
        }
    }

    /// Number of composite (`ScaleDependent`/`Hybrid`) levels; leaves are 0.
    pub fn nesting_depth(&self) -> usize {
        match &self.kind {
            DiscountKind::ScaleDependent { base, .. } => 1 + base.nesting_depth(),
            DiscountKind::Hybrid { d1, d2, .. } => 1 + d1.nesting_depth().max(d2.nesting_depth()),
            _ => 0,
        }
    }

    pub fn uses_state(&self) -> bool {
        match &self.kind {
            DiscountKind::StateDependent { .. } => true,
            DiscountKind::ScaleDependent { base, .. } => base.uses_state(),
            DiscountKind::Hybrid { d1, d2, .. } => d1.uses_state() || d2.uses_state(),
            _ => false,
        }
    }

    pub fn uses_reward(&self) -> bool {
        match &self.kind {
            DiscountKind::ScaleDependent { .. } => true,
            DiscountKind::Hybrid { d1, d2, .. } => d1.uses_reward() || d2.uses_reward(),
            _ => false,
        }
    }

    pub fn factor(&self, t: f64, x: Option<f64>, s: Option<&str>) -> Result<f64> {
        self.factor_with(t, x, s, FactorMode::Exact)
    }

    pub fn factor_with(
        &self,
        t: f64,
        x: Option<f64>,
        s: Option<&str>,
        mode: FactorMode,
    ) -> Result<f64> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain(format!(
                "discount time must be >= 0, got {t}"
            )));
        }
        let leaf = |v: f64| match mode {
            FactorMode::Exact => v,
            FactorMode::TwoDecimalLeaves => round2(v),
        };
        Ok(match &self.kind {
            DiscountKind::Exponential { rate } => leaf((-rate * t).exp()),
            DiscountKind::Hyperbolic { k } => leaf(1.0 / (1.0 + k * t)),
            DiscountKind::QuasiHyperbolic { beta, delta } => {
                if t == 0.0 {
                    1.0
                } else {
                    leaf(beta * delta.powf(t))
                }
            }
            DiscountKind::GeneralizedHyperbolic { k, p } => leaf((1.0 + k * t).powf(-p)),
            DiscountKind::ScaleDependent { base, eta } => {
                let x = x.ok_or(Error::MissingArgument(
                    "reward x for scale-dependent discount",
                ))?;
                let e = eta.eval(x)?;
                leaf(base.factor_with(t, Some(x), s, FactorMode::Exact)?.powf(e))
            }
            DiscountKind::StateDependent { rates } => {
                let s = s.ok_or(Error::MissingArgument("state for state-dependent discount"))?;
                let r = rates
                    .get(s)
                    .ok_or_else(|| Error::UnknownState(s.to_string()))?;
                leaf((-r * t).exp())
            }
            DiscountKind::Hybrid { lambda, d1, d2 } => {
                lambda * d1.factor_with(t, x, s, mode)?
                    + (1.0 - lambda) * d2.factor_with(t, x, s, mode)?
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleCheckPoint {
    pub t: f64,
    pub x: f64,
    /// `1 + eta'(x) x ln D(t)`; the map `x -> D(t)^eta(x) x` increases where positive.
    pub expression: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub points: Vec<ScaleCheckPoint>,
    pub violations: Vec<ScaleCheckPoint>,
    pub pass: bool,
}

/// Evaluates the strict-monotonicity condition of a scale-dependent regime
/// on every `(t, x)` grid point.
pub fn check_scale_monotonicity(
    d: &DiscountSpec,
    t_grid: &[f64],
    x_grid: &[f64],
) -> Result<ConstraintReport> {
    let DiscountKind::ScaleDependent { base, eta } = d.kind() else {
        return Err(Error::Precondition(format!(
            "scale monotonicity check needs a scale_dependent discount, got {}",
            d.name()
        )));
    };
    if t_grid.is_empty() || x_grid.is_empty() {
        return Err(Error::Precondition(
            "time and reward grids must be non-empty".into(),
        ));
    }
    for &x in x_grid {
        eta.check_domain(x)?;
    }
    let mut points = Vec::with_capacity(t_grid.len() * x_grid.len());
    for &t in t_grid {
        for &x in x_grid {
            let ln_d = base.factor(t, Some(x), None)?.ln();
            let expression = 1.0 + eta.derivative(x)? * x * ln_d;
            points.push(ScaleCheckPoint { t, x, expression });
        }
    }
    let violations: Vec<_> = points
        .iter()
        .copied()
        .filter(|p| p.expression <= 0.0)
        .collect();
    Ok(ConstraintReport {
        pass: violations.is_empty(),
        points,
        violations,
    })
}
