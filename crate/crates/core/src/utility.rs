//! Admissible utility functions.
//!
//! Every shipped kind is strictly increasing and continuous on its domain.
//! Closed-form inverses are used wherever they exist; `Composed` utilities
//! fall back to bracketed bisection.

use crate::error::{Error, Result};

/// Absolute tolerance on the utility value for the bisection inverse.
pub const BISECTION_TOL: f64 = 1e-12;
/// Iteration cap for the bisection inverse and its bracket expansion.
pub const BISECTION_MAX_ITER: usize = 200;

/// Lower end of a utility's domain. `lo = -inf` means unbounded below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub inclusive: bool,
}

impl Domain {
    pub const REAL_LINE: Domain = Domain {
        lo: f64::NEG_INFINITY,
        inclusive: false,
    };

    pub fn contains(&self, x: f64) -> bool {
        if !x.is_finite() {
            return false;
        }
        if self.inclusive {
            x >= self.lo
        } else {
            x > self.lo
        }
    }
}

/// A strictly increasing outer map used by [`UtilityKind::Composed`].
///
/// Only named analytic forms and monotone tables are representable.
#[derive(Debug, Clone, PartialEq)]
pub enum Phi {
    /// `slope * x + intercept`
    Affine { slope: f64, intercept: f64 },
    /// `sign(x) |x|^p`
    OddPower { p: f64 },
    /// `sinh(scale * x)`
    Sinh { scale: f64 },
    /// `sum_i coeffs[i] x^i`; not necessarily monotone, which is what the
    /// admissibility audit is for.
    Polynomial { coeffs: Vec<f64> },
    /// Piecewise linear through `(xs[i], ys[i])`, extended linearly past the
    /// end points.
    Tabulated { xs: Vec<f64>, ys: Vec<f64> },
}

impl Phi {
    pub fn cube() -> Phi {
        Phi::OddPower { p: 3.0 }
    }

    pub fn scale(c: f64) -> Phi {
        Phi::Affine {
            slope: c,
            intercept: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        match self {
            Phi::Affine { slope, intercept } => {
                if !slope.is_finite() || !intercept.is_finite() {
                    return bad("affine phi needs finite slope and intercept");
                }
            }
            Phi::OddPower { p } => {
                if !(p.is_finite() && *p > 0.0) {
                    return bad("odd_power phi needs p > 0");
                }
            }
            Phi::Sinh { scale } => {
                if !(scale.is_finite() && *scale > 0.0) {
                    return bad("sinh phi needs scale > 0");
                }
            }
            Phi::Polynomial { coeffs } => {
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return bad("polynomial phi needs finite coefficients");
                }
            }
            Phi::Tabulated { xs, ys } => {
                if xs.len() < 2 || xs.len() != ys.len() {
                    return bad("tabulated phi needs >= 2 points and equal-length x/y");
                }
                if xs.iter().chain(ys).any(|v| !v.is_finite()) {
                    return bad("tabulated phi needs finite points");
                }
                if xs.windows(2).any(|w| w[1] <= w[0]) {
                    return bad("tabulated phi x values must be strictly increasing");
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Phi::Affine { slope, intercept } => slope * x + intercept,
            Phi::OddPower { p } => x.signum() * x.abs().powf(*p),
            Phi::Sinh { scale } => (scale * x).sinh(),
            Phi::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Phi::Tabulated { xs, ys } => piecewise_linear(xs, ys, x),
        }
    }
}

pub(crate) fn piecewise_linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    let seg = match xs.iter().position(|&xi| xi > x) {
        Some(0) => 0,
        Some(i) => i - 1,
        None => n - 2,
    };
    let (x0, x1, y0, y1) = (xs[seg], xs[seg + 1], ys[seg], ys[seg + 1]);
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

#[derive(Debug, Clone, PartialEq)]
pub enum UtilityKind {
    Linear,
    /// `log(1 + x)`, defined for `x > -1`.
    LogShift,
    /// `sqrt(x)`, defined for `x >= 0`.
    Sqrt,
    /// `(x^(1-alpha) - alpha) / (1 - alpha)` for `x > 0`, `alpha in [0, 1)`.
    PowerDiscounted {
        alpha: f64,
    },
    /// `phi(base(x))`.
    Composed {
        base: Box<UtilitySpec>,
        phi: Phi,
    },
}

/// A validated utility function. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilitySpec {
    kind: UtilityKind,
}

impl UtilitySpec {
    pub fn linear() -> Self {
        Self {
            kind: UtilityKind::Linear,
        }
    }

    pub fn log_shift() -> Self {
        Self {
            kind: UtilityKind::LogShift,
        }
    }

    pub fn sqrt() -> Self {
        Self {
            kind: UtilityKind::Sqrt,
        }
    }

    pub fn power_discounted(alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!(
                "power_discounted alpha must lie in [0, 1), got {alpha}"
            )));
        }
        Ok(Self {
            kind: UtilityKind::PowerDiscounted { alpha },
        })
    }

    /// `phi ∘ base`. Only `phi(0) = 0` is enforced here; monotonicity is
    /// left to [`audit_admissibility`].
    pub fn composed(base: UtilitySpec, phi: Phi) -> Result<Self> {
        phi.validate()?;
        let at_zero = phi.eval(0.0);
        if at_zero.abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "composed phi must satisfy phi(0) = 0, got {at_zero}"
            )));
        }
        Ok(Self {
            kind: UtilityKind::Composed {
                base: Box::new(base),
                phi,
            },
        })
    }

    pub fn kind(&self) -> &UtilityKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            UtilityKind::Linear => "linear",
            UtilityKind::LogShift => "log_shift",
            UtilityKind::Sqrt => "sqrt",
            UtilityKind::PowerDiscounted { .. } => "power_discounted",
            UtilityKind::Composed { .. } => "composed",
        }
    }

    pub fn domain(&self) -> Domain {
        match &self.kind {
            UtilityKind::Linear => Domain::REAL_LINE,
            UtilityKind::LogShift => Domain {
                lo: -1.0,
                inclusive: false,
            },
            UtilityKind::Sqrt => Domain {
                lo: 0.0,
                inclusive: true,
            },
            UtilityKind::PowerDiscounted { .. } => Domain {
                lo: 0.0,
                inclusive: false,
            },
            UtilityKind::Composed { base, .. } => base.domain(),
        }
    }

    pub fn domain_lo(&self) -> f64 {
        self.domain().lo
    }

    /// Whether gambles must be evaluated on the wealth-shifted argument
    /// `w + f(s)`: true exactly when 0 lies outside the domain.
    pub fn needs_wealth_shift(&self) -> bool {
        !self.domain().contains(0.0)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.domain().contains(x) {
            return Err(Error::Domain(format!(
                "{} utility is undefined at x = {x} (domain lower bound {})",
                self.name(),
                self.domain_lo()
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: f64) -> f64 {
        match &self.kind {
            UtilityKind::Linear => x,
            UtilityKind::LogShift => x.ln_1p(),
            UtilityKind::Sqrt => x.sqrt(),
            UtilityKind::PowerDiscounted { alpha } => (x.powf(1.0 - alpha) - alpha) / (1.0 - alpha),
            UtilityKind::Composed { base, phi } => phi.eval(base.eval_unchecked(x)),
        }
    }

    pub fn inverse(&self, v: f64) -> Result<f64> {
        let outside = || {
            Error::Image(format!(
                "utility value {v} lies outside the image of the {} utility",
                self.name()
            ))
        };
        if !v.is_finite() {
            return Err(outside());
        }
        match &self.kind {
            UtilityKind::Linear => Ok(v),
            UtilityKind::LogShift => Ok(v.exp_m1()),
            UtilityKind::Sqrt => {
                if v < 0.0 {
                    Err(outside())
                } else {
                    Ok(v * v)
                }
            }
            UtilityKind::PowerDiscounted { alpha } => {
                let base = v * (1.0 - alpha) + alpha;
                if base <= 0.0 {
                    return Err(outside());
                }
                let x = base.powf(1.0 / (1.0 - alpha));
                if x > 0.0 && x.is_finite() {
                    Ok(x)
                } else {
                    Err(outside())
                }
            }
            UtilityKind::Composed { .. } => self.bisect_inverse(v).ok_or_else(outside),
        }
    }

    fn bisect_inverse(&self, v: f64) -> Option<f64> {
        let dom = self.domain();
        let f = |x: f64| self.eval_unchecked(x);

        // Upper end of the bracket.
        let mut hi = if dom.lo.is_finite() {
            dom.lo + 1.0
        } else {
            1.0
        };
        let mut step = 1.0;
        let mut expanded = 0;
        while !(f(hi) >= v) {
            step *= 2.0;
            hi += step;
            expanded += 1;
            if expanded > BISECTION_MAX_ITER || !hi.is_finite() {
                return None;
            }
        }

        // Lower end: walk toward the domain boundary (or -inf).
        let mut lo;
        if dom.lo.is_finite() {
            if dom.inclusive && f(dom.lo) > v {
                return None;
            }
            lo = if dom.inclusive {
                dom.lo
            } else {
                dom.lo + (hi - dom.lo) * 0.5
            };
            let mut shrink = 0;
            while !(f(lo) <= v) {
                lo = dom.lo + (lo - dom.lo) * 0.5;
                shrink += 1;
                if shrink > BISECTION_MAX_ITER || lo <= dom.lo {
                    return None;
                }
            }
        } else {
            lo = hi - 1.0;
            let mut step = 1.0;
            let mut expanded = 0;
            while !(f(lo) <= v) {
                step *= 2.0;
                lo -= step;
                expanded += 1;
                if expanded > BISECTION_MAX_ITER || !lo.is_finite() {
                    return None;
                }
            }
        }

        for _ in 0..BISECTION_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid) < v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (flo, fhi) = (f(lo), f(hi));
        let x = if (fhi - v).abs() <= (flo - v).abs() {
            hi
        } else {
            lo
        };
        let tol = BISECTION_TOL.max(BISECTION_TOL * v.abs());
        ((f(x) - v).abs() <= tol).then_some(x)
    }
}

impl Default for UtilitySpec {
    fn default() -> Self {
        Self::linear()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub grid: Vec<f64>,
    pub strictly_increasing: bool,
    /// `None` when 0 lies outside the domain (not applicable).
    pub zero_normalized: Option<bool>,
    /// Derived from monotonicity: a continuous monotone map has an interval image.
    pub image_interval: bool,
    /// First adjacent grid pair where the utility failed to increase.
    pub first_violation: Option<(f64, f64)>,
}

/// Audit grid: log-spaced above a finite domain bound, asinh-spaced (dense
/// near zero) on the whole line. Spans up to 100.
pub fn audit_grid(u: &UtilitySpec, grid_n: usize) -> Vec<f64> {
    let dom = u.domain();
    let n = grid_n.max(3);
    let upper = 100.0_f64;
    let frac = |i: usize| i as f64 / (n - 1) as f64;
    if dom.lo.is_finite() {
        let (a, b) = (0.01_f64.ln(), (upper - dom.lo).ln());
        let mut g: Vec<f64> = (0..n)
            .map(|i| dom.lo + (a + (b - a) * frac(i)).exp())
            .collect();
        if dom.inclusive {
            g[0] = dom.lo;
        }
        g
    } else {
        let (a, b) = ((-upper).asinh(), upper.asinh());
        (0..n).map(|i| (a + (b - a) * frac(i)).sinh()).collect()
    }
}

/// Numerical admissibility audit. Never fails; findings are reported.
pub fn audit_admissibility(u: &UtilitySpec, grid_n: usize) -> AdmissibilityReport {
    let grid = audit_grid(u, grid_n);
    let values: Vec<f64> = grid.iter().map(|&x| u.eval_unchecked(x)).collect();
    let first_violation = grid
        .windows(2)
        .zip(values.windows(2))
        .find(|(_, v)| !(v[1] > v[0]) || !v[0].is_finite() || !v[1].is_finite())
        .map(|(x, _)| (x[0], x[1]));
    let strictly_increasing = first_violation.is_none();
    let zero_normalized = u
        .domain()
        .contains(0.0)
        .then(|| u.eval_unchecked(0.0).abs() <= 1e-12);
    AdmissibilityReport {
        grid,
        strictly_increasing,
        zero_normalized,
        image_interval: strictly_increasing,
        first_violation,
    }
}
