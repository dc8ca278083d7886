//! Acceptance sets over the utility-transformed cone.
//!
//! Two acceptance semantics live side by side:
//!
//! * generator-based natural extension ([`accepts`]): `g` is accepted when
//!   `u(g)` dominates some conic combination of the transformed generators;
//! * representation by a linear functional ([`rho`]): `g` is accepted when
//!   `l(u(g)) >= 0`.
//!
//! [`representation_conflicts`] cross-checks the two.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::gamble::{dominates, transform, Gamble, StateSpace};
use crate::lp::{solve, Constraint, LpOutcome, LpProblem, Relation, VarBound};
use crate::utility::{Phi, UtilitySpec};

/// Absolute tolerance on LP margins.
pub const LP_TOL: f64 = 1e-9;
/// Default strict-rejection margin.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Generators assessed as acceptable (and optionally gambles assessed as
/// unacceptable), together with the utility they are judged under.
#[derive(Debug, Clone, PartialEq)]
pub struct AssessmentSet {
    space: StateSpace,
    utility: UtilitySpec,
    accepted: Vec<Gamble>,
    rejected: Vec<Gamble>,
    accepted_u: Vec<Vec<f64>>,
    rejected_u: Vec<Vec<f64>>,
}

impl AssessmentSet {
    pub fn new(
        space: StateSpace,
        utility: UtilitySpec,
        accepted: Vec<Gamble>,
        rejected: Vec<Gamble>,
    ) -> Result<Self> {
        for (role, list) in [("accepted", &accepted), ("rejected", &rejected)] {
            for (i, g) in list.iter().enumerate() {
                if g.space() != &space {
                    return Err(Error::SpaceMismatch(format!(
                        "{role} gamble {i} is over {:?}, expected {:?}",
                        g.space().labels(),
                        space.labels()
                    )));
                }
            }
        }
        if let Some(i) = accepted.iter().position(Gamble::is_sure_loss) {
            return Err(Error::InvalidParameter(format!(
                "accepted generator {i} {} is everywhere strictly negative",
                accepted[i]
            )));
        }
        let accepted_u = accepted
            .iter()
            .map(|g| transform(&utility, g))
            .collect::<Result<Vec<_>>>()?;
        let rejected_u = rejected
            .iter()
            .map(|g| transform(&utility, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            space,
            utility,
            accepted,
            rejected,
            accepted_u,
            rejected_u,
        })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn utility(&self) -> &UtilitySpec {
        &self.utility
    }

    pub fn accepted(&self) -> &[Gamble] {
        &self.accepted
    }

    pub fn rejected(&self) -> &[Gamble] {
        &self.rejected
    }

    /// `u(f_i)` for every accepted generator.
    pub fn accepted_transformed(&self) -> &[Vec<f64>] {
        &self.accepted_u
    }

    pub fn rejected_transformed(&self) -> &[Vec<f64>] {
        &self.rejected_u
    }

    fn transform_query(&self, g: &Gamble) -> Result<Vec<f64>> {
        if g.space() != &self.space {
            return Err(Error::SpaceMismatch(format!(
                "query is over {:?}, assessments over {:?}",
                g.space().labels(),
                self.space.labels()
            )));
        }
        transform(&self.utility, g)
    }
}

/// Non-negative state weights normalized to unit sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    weights: Vec<f64>,
}

impl Functional {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter(
                "functional weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParameter(
                "functional weights must not all be zero".into(),
            ));
        }
        Ok(Self {
            weights: weights.iter().map(|w| w / total).collect(),
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn apply(&self, v: &[f64]) -> f64 {
        dot(&self.weights, v)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Outcome of a natural-extension acceptance query.
#[derive(Debug, Clone, PartialEq)]
pub enum Acceptance {
    /// `u(g) >= sum_i lambda_i u(f_i)`; `lambda` is empty when `u(g) >= 0`.
    Accepted { lambda: Vec<f64>, margin: f64 },
    /// Farkas certificate: `y >= 0`, `sum y = 1`, `y . u(f_i) >= 0` for all
    /// generators and `y . u(g) < 0`.
    Rejected { certificate: Vec<f64>, margin: f64 },
}

impl Acceptance {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Acceptance::Accepted { .. })
    }
}

/// Maximal `t <= 1` with `sum_i lambda_i gens_i + t 1 <= target`, `lambda >= 0`.
fn cone_margin(gens: &[Vec<f64>], target: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = gens.len();
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    let mut p = LpProblem::new(objective).with_bound(n, VarBound::Free);
    for (s, &ts) in target.iter().enumerate() {
        let mut row: Vec<f64> = gens.iter().map(|g| g[s]).collect();
        row.push(1.0);
        p.push(row, Relation::Le, ts);
    }
    let mut cap = vec![0.0; n + 1];
    cap[n] = 1.0;
    p.push(cap, Relation::Le, 1.0);
    match solve(&p)? {
        LpOutcome::Optimal { mut x, value } => {
            x.truncate(n);
            Ok((x, value))
        }
        other => Err(Error::NumericalInstability {
            reason: format!("cone margin LP returned {other:?}"),
            dump: p.dump(),
        }),
    }
}

/// Minimizes `y . target` over `y >= 0`, `sum y = 1`, `y . gens_i >= 0`.
fn separating_weights(gens: &[Vec<f64>], target: &[f64]) -> Result<Option<(Vec<f64>, f64)>> {
    let m = target.len();
    let mut p = LpProblem::new(target.iter().map(|v| -v).collect());
    p.push(vec![1.0; m], Relation::Eq, 1.0);
    for g in gens {
        p.push(g.clone(), Relation::Ge, 0.0);
    }
    Ok(match solve(&p)? {
        LpOutcome::Optimal { x, value } => Some((x, -value)),
        _ => None,
    })
}

/// Natural-extension acceptance with witness or separating certificate.
pub fn acceptance(a: &AssessmentSet, g: &Gamble) -> Result<Acceptance> {
    let ug = a.transform_query(g)?;
    if ug.iter().all(|&v| v >= 0.0) {
        let margin = ug.iter().cloned().fold(f64::INFINITY, f64::min).min(1.0);
        return Ok(Acceptance::Accepted {
            lambda: Vec::new(),
            margin,
        });
    }
    if a.accepted_u.is_empty() {
        let (j, _) = ug
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .expect("non-empty state space");
        let mut certificate = vec![0.0; ug.len()];
        certificate[j] = 1.0;
        return Ok(Acceptance::Rejected {
            certificate,
            margin: ug[j],
        });
    }
    let (lambda, margin) = cone_margin(&a.accepted_u, &ug)?;
    if margin >= -LP_TOL {
        return Ok(Acceptance::Accepted { lambda, margin });
    }
    match separating_weights(&a.accepted_u, &ug)? {
        Some((certificate, value)) => Ok(Acceptance::Rejected {
            certificate,
            margin: value,
        }),
        None => Err(Error::NumericalInstability {
            reason: "negative acceptance margin without a separating functional".into(),
            dump: String::new(),
        }),
    }
}

/// Whether `g` lies in the natural extension of the assessments.
pub fn accepts(a: &AssessmentSet, g: &Gamble) -> Result<bool> {
    Ok(acceptance(a, g)?.is_accepted())
}

/// A conic combination of generators that is everywhere strictly negative.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialLossWitness {
    /// Scaled so the largest coefficient is 1.
    pub lambda: Vec<f64>,
    /// `sum_i lambda_i u(f_i)` for the scaled `lambda`.
    pub combination: Vec<f64>,
    /// Largest uniform margin below zero, at `sum lambda = 1`.
    pub margin: f64,
}

/// Searches the transformed cone for a strictly negative vector.
pub fn partial_loss_witness(a: &AssessmentSet) -> Result<Option<PartialLossWitness>> {
    let gens = &a.accepted_u;
    let n = gens.len();
    if n == 0 {
        return Ok(None);
    }
    let m = a.space.len();
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    let mut p = LpProblem::new(objective).with_bound(n, VarBound::Free);
    for s in 0..m {
        let mut row: Vec<f64> = gens.iter().map(|g| g[s]).collect();
        row.push(1.0);
        p.push(row, Relation::Le, 0.0);
    }
    let mut simplex = vec![1.0; n];
    simplex.push(0.0);
    p.push(simplex, Relation::Eq, 1.0);
    let mut cap = vec![0.0; n + 1];
    cap[n] = 1.0;
    p.push(cap, Relation::Le, 1.0);
    let LpOutcome::Optimal { x, value } = solve(&p)? else {
        return Err(Error::NumericalInstability {
            reason: "partial-loss LP is always feasible and bounded".into(),
            dump: p.dump(),
        });
    };
    if value <= LP_TOL {
        return Ok(None);
    }
    let top = x[..n].iter().cloned().fold(0.0, f64::max);
    let lambda: Vec<f64> = x[..n].iter().map(|l| l / top).collect();
    let combination = (0..m)
        .map(|s| lambda.iter().zip(gens).map(|(l, g)| l * g[s]).sum())
        .collect();
    Ok(Some(PartialLossWitness {
        lambda,
        combination,
        margin: value,
    }))
}

/// True iff no everywhere-strictly-negative gamble is in the natural extension.
pub fn avoids_partial_loss(a: &AssessmentSet) -> bool {
    // The LP is tiny and always feasible; a solver failure is reported as a loss.
    matches!(partial_loss_witness(a), Ok(None))
}

/// Which assessment a fitting constraint comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssessmentRef {
    Accepted(usize),
    Rejected(usize),
}

impl fmt::Display for AssessmentRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssessmentRef::Accepted(i) => write!(f, "accepted[{i}]"),
            AssessmentRef::Rejected(j) => write!(f, "rejected[{j}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitOutcome {
    Feasible {
        functional: Functional,
        /// Smallest `l(u(f_i))` over accepted generators (capped at 1).
        min_margin: f64,
        /// The polytope of compatible weights: `sum w = 1`, one row per
        /// assessment, `w >= 0` implicit.
        constraints: Vec<(Option<AssessmentRef>, Constraint)>,
    },
    /// First irreducible conflicting subset found by deletion in input order.
    Infeasible { conflict: Vec<AssessmentRef> },
}

fn fit_lp(
    a: &AssessmentSet,
    subset: &[AssessmentRef],
    epsilon: f64,
) -> Result<Option<(Vec<f64>, f64)>> {
    let m = a.space.len();
    let mut objective = vec![0.0; m + 1];
    objective[m] = 1.0;
    let mut p = LpProblem::new(objective).with_bound(m, VarBound::Free);
    let mut simplex = vec![1.0; m];
    simplex.push(0.0);
    p.push(simplex, Relation::Eq, 1.0);
    for r in subset {
        match *r {
            AssessmentRef::Accepted(i) => {
                let mut row = a.accepted_u[i].clone();
                row.push(-1.0);
                p.push(row, Relation::Ge, 0.0);
            }
            AssessmentRef::Rejected(j) => {
                let mut row = a.rejected_u[j].clone();
                row.push(0.0);
                p.push(row, Relation::Le, -epsilon);
            }
        }
    }
    let mut cap = vec![0.0; m + 1];
    cap[m] = 1.0;
    p.push(cap, Relation::Le, 1.0);
    Ok(match solve(&p)? {
        LpOutcome::Optimal { mut x, value } if value >= -LP_TOL => {
            x.truncate(m);
            Some((x, value))
        }
        _ => None,
    })
}

/// Fits a representing functional: maximizes the smallest accepted margin
/// subject to every rejected gamble scoring at most `-epsilon`.
pub fn fit_functional(a: &AssessmentSet, epsilon: f64) -> Result<FitOutcome> {
    if !(epsilon > 0.0 && epsilon <= 1e-2) {
        return Err(Error::Precondition(format!(
            "strict margin epsilon must lie in (0, 1e-2], got {epsilon}"
        )));
    }
    let all: Vec<AssessmentRef> = (0..a.accepted.len())
        .map(AssessmentRef::Accepted)
        .chain((0..a.rejected.len()).map(AssessmentRef::Rejected))
        .collect();
    if let Some((w, min_margin)) = fit_lp(a, &all, epsilon)? {
        let m = a.space.len();
        let mut constraints = vec![(None, Constraint::new(vec![1.0; m], Relation::Eq, 1.0))];
        for r in &all {
            let c = match *r {
                AssessmentRef::Accepted(i) => {
                    Constraint::new(a.accepted_u[i].clone(), Relation::Ge, 0.0)
                }
                AssessmentRef::Rejected(j) => {
                    Constraint::new(a.rejected_u[j].clone(), Relation::Le, -epsilon)
                }
            };
            constraints.push((Some(*r), c));
        }
        let w = w.into_iter().map(|v| v.max(0.0)).collect();
        return Ok(FitOutcome::Feasible {
            functional: Functional::new(w)?,
            min_margin,
            constraints,
        });
    }
    let mut conflict = all.clone();
    for r in &all {
        let trial: Vec<AssessmentRef> = conflict.iter().copied().filter(|c| c != r).collect();
        if fit_lp(a, &trial, epsilon)?.is_none() {
            conflict = trial;
        }
    }
    Ok(FitOutcome::Infeasible { conflict })
}

/// `rho(f) = l(u(f))`.
pub fn rho(ell: &Functional, u: &UtilitySpec, f: &Gamble) -> Result<f64> {
    if ell.weights.len() != f.len() {
        return Err(Error::SpaceMismatch(format!(
            "functional has {} weights, gamble has {} states",
            ell.weights.len(),
            f.len()
        )));
    }
    Ok(ell.apply(&transform(u, f)?))
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Checks that acceptance signs and the pairwise ranking of `fs` by `rho`
/// agree under `weights` and `c * weights`.
pub fn check_ordering_invariance(
    ell: &Functional,
    c: f64,
    u: &UtilitySpec,
    fs: &[Gamble],
) -> Result<bool> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Precondition(format!(
            "scale c must be positive, got {c}"
        )));
    }
    if fs.is_empty() {
        return Err(Error::Precondition("gamble list must be non-empty".into()));
    }
    let scaled: Vec<f64> = ell.weights.iter().map(|w| c * w).collect();
    let mut base = Vec::with_capacity(fs.len());
    let mut other = Vec::with_capacity(fs.len());
    for f in fs {
        let uf = transform(u, f)?;
        if uf.len() != scaled.len() {
            return Err(Error::SpaceMismatch(
                "functional and gamble dimensions differ".into(),
            ));
        }
        base.push(dot(&ell.weights, &uf));
        other.push(dot(&scaled, &uf));
    }
    let signs_agree = base.iter().zip(&other).all(|(a, b)| sign(*a) == sign(*b));
    let order = |v: &[f64], i: usize, j: usize| v[i].partial_cmp(&v[j]).unwrap_or(Ordering::Equal);
    let ranks_agree =
        (0..fs.len()).all(|i| (0..fs.len()).all(|j| order(&base, i, j) == order(&other, i, j)));
    Ok(signs_agree && ranks_agree)
}

/// Checks that pointwise-threshold acceptance (`u(f) >= 0` in every state)
/// is unchanged when `u` is replaced by `phi ∘ u`.
pub fn check_transform_invariance(u: &UtilitySpec, phi: &Phi, fs: &[Gamble]) -> Result<bool> {
    phi.validate()?;
    let at_zero = phi.eval(0.0);
    if at_zero != 0.0 {
        return Err(Error::Precondition(format!(
            "phi(0) must be 0, got {at_zero}"
        )));
    }
    let transformed = fs
        .iter()
        .map(|f| transform(u, f))
        .collect::<Result<Vec<_>>>()?;
    let mut points: Vec<f64> = transformed.iter().flatten().copied().chain([0.0]).collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    if let Some(w) = points
        .windows(2)
        .find(|w| !(phi.eval(w[1]) > phi.eval(w[0])))
    {
        return Err(Error::Precondition(format!(
            "phi is not strictly increasing between {} and {}",
            w[0], w[1]
        )));
    }
    Ok(transformed.iter().all(|uf| {
        let plain = uf.iter().all(|&v| v >= 0.0);
        let composed = uf.iter().all(|&v| phi.eval(v) >= 0.0);
        plain == composed
    }))
}

/// Indices of gambles accepted by natural extension whose `rho` under `ell`
/// is below `-tol`. Empty when the two semantics agree on `gs`.
pub fn representation_conflicts(
    a: &AssessmentSet,
    ell: &Functional,
    gs: &[Gamble],
    tol: f64,
) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, g) in gs.iter().enumerate() {
        if accepts(a, g)? && rho(ell, &a.utility, g)? < -tol {
            out.push(i);
        }
    }
    Ok(out)
}

/// One incoherence found by [`audit`].
#[derive(Debug, Clone, PartialEq)]
pub enum Finding {
    /// A conic combination of generators is a sure loss.
    PartialLoss(PartialLossWitness),
    /// A rejected gamble dominates an accepted generator.
    DominatesAccepted { rejected: usize, accepted: usize },
    /// A rejected gamble lies in the natural extension.
    RejectedInCone {
        rejected: usize,
        lambda: Vec<f64>,
        combination: Vec<f64>,
    },
}

pub(crate) fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v
        .iter()
        .map(|x| {
            let s = format!("{:.6}", if x.abs() < 5e-7 { 0.0 } else { *x });
            let s = s.trim_end_matches('0').trim_end_matches('.');
            s.to_string()
        })
        .collect();
    format!("[{}]", items.join(", "))
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::PartialLoss(w) => write!(
                f,
                "F1 VIOLATION: witness lambda={} combination={}",
                fmt_list(&w.lambda),
                fmt_list(&w.combination)
            ),
            Finding::DominatesAccepted { rejected, accepted } => write!(
                f,
                "F2 VIOLATION: rejected[{rejected}] dominates accepted[{accepted}]"
            ),
            Finding::RejectedInCone {
                rejected,
                lambda,
                combination,
            } => write!(
                f,
                "F3 VIOLATION: rejected[{rejected}] is in the u-cone: witness lambda={} combination={}",
                fmt_list(lambda),
                fmt_list(combination)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceAudit {
    pub findings: Vec<Finding>,
    pub avoids_partial_loss: bool,
}

impl CoherenceAudit {
    pub fn is_coherent(&self) -> bool {
        self.findings.is_empty()
    }
}

/// F1/F2/F3 audit of an assessment set: sure-loss combinations, rejected
/// gambles above accepted generators, and rejected gambles in the u-cone.
pub fn audit(a: &AssessmentSet) -> Result<CoherenceAudit> {
    let mut findings = Vec::new();
    let witness = partial_loss_witness(a)?;
    let avoids = witness.is_none();
    if let Some(w) = witness {
        findings.push(Finding::PartialLoss(w));
    }
    for (j, r) in a.rejected.iter().enumerate() {
        if let Some(i) = a
            .accepted
            .iter()
            .map(|f| dominates(r, f))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .position(|&d| d)
        {
            findings.push(Finding::DominatesAccepted {
                rejected: j,
                accepted: i,
            });
            continue;
        }
        if let Acceptance::Accepted { lambda, .. } = acceptance(a, r)? {
            let combination = (0..a.space.len())
                .map(|s| {
                    lambda
                        .iter()
                        .zip(&a.accepted_u)
                        .map(|(l, g)| l * g[s])
                        .sum()
                })
                .collect();
            findings.push(Finding::RejectedInCone {
                rejected: j,
                lambda,
                combination,
            });
        }
    }
    Ok(CoherenceAudit {
        findings,
        avoids_partial_loss: avoids,
    })
}
