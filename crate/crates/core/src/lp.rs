//! Dense two-phase simplex for the small problems coherence checks produce.
//!
//! Bland's rule is used for both the entering and the leaving variable, so
//! the pivot sequence (and the returned vertex on degenerate optima) is a
//! deterministic function of the input.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_VARIABLES: usize = 64;
pub const MAX_CONSTRAINTS: usize = 256;

/// Reduced-cost and ratio-test threshold.
const EPS: f64 = 1e-9;
/// Pivots smaller than this abort the solve.
const MIN_PIVOT: f64 = 1e-12;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarBound {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn lhs(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Amount by which `x` violates the constraint (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// `maximize objective . x` subject to `constraints` and `bounds`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBound>,
}

impl LpProblem {
    /// All variables non-negative.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            constraints: Vec::new(),
            bounds: vec![VarBound::NonNegative; n],
        }
    }

    pub fn with_bound(mut self, var: usize, bound: VarBound) -> Self {
        self.bounds[var] = bound;
        self
    }

    pub fn constrain(mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        self.push(coeffs, relation, rhs);
        self
    }

    pub fn push(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints
            .push(Constraint::new(coeffs, relation, rhs));
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if n == 0 || n > MAX_VARIABLES {
            return Err(Error::Dimension(format!(
                "{n} variables (supported: 1..={MAX_VARIABLES})"
            )));
        }
        if self.constraints.len() > MAX_CONSTRAINTS {
            return Err(Error::Dimension(format!(
                "{} constraints (supported: <= {MAX_CONSTRAINTS})",
                self.constraints.len()
            )));
        }
        if self.bounds.len() != n {
            return Err(Error::Dimension(format!(
                "{} bounds for {n} variables",
                self.bounds.len()
            )));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::Dimension("non-finite objective coefficient".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::Dimension(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
            if c.coeffs.iter().any(|a| !a.is_finite()) || !c.rhs.is_finite() {
                return Err(Error::Dimension(format!(
                    "constraint {i} has a non-finite coefficient"
                )));
            }
        }
        Ok(())
    }

    /// Plain-text dump used in bug reports and debug logging.
    pub fn dump(&self) -> String {
        let row = |v: &[f64]| {
            v.iter()
                .map(|a| format!("{a:e}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = format!("maximize: {}\n", row(&self.objective));
        for (i, c) in self.constraints.iter().enumerate() {
            out.push_str(&format!(
                "c{i}: {} {} {:e}\n",
                row(&c.coeffs),
                c.relation,
                c.rhs
            ));
        }
        let bounds: Vec<&str> = self
            .bounds
            .iter()
            .map(|b| match b {
                VarBound::NonNegative => ">=0",
                VarBound::Free => "free",
            })
            .collect();
        out.push_str(&format!("bounds: {}\n", bounds.join(" ")));
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }
}

struct Tableau {
    /// `rows x (cols + 1)`; the last column is the right-hand side.
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
    /// Columns allowed to enter the basis.
    eligible: Vec<bool>,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.a[i][self.cols]
    }

    fn reduced_costs(&self, c: &[f64]) -> Vec<f64> {
        let mut d = c.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = c[b];
            if cb != 0.0 {
                for (j, dj) in d.iter_mut().enumerate() {
                    *dj -= cb * self.a[i][j];
                }
            }
        }
        d
    }

    fn pivot(&mut self, row: usize, col: usize, problem: &LpProblem) -> Result<()> {
        let p = self.a[row][col];
        if p.abs() < MIN_PIVOT {
            return Err(Error::NumericalInstability {
                reason: format!("pivot magnitude {p:e} below {MIN_PIVOT:e}"),
                dump: problem.dump(),
            });
        }
        for v in self.a[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.a[row].clone();
        for (i, r) in self.a.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for (v, pv) in r.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                r[col] = 0.0;
            }
        }
        self.basis[row] = col;
        Ok(())
    }

    /// Primal simplex with Bland's rule, maximizing `c . x`.
    fn run(&mut self, c: &[f64], problem: &LpProblem, pivots: &mut usize) -> Result<Phase> {
        loop {
            let d = self.reduced_costs(c);
            let Some(enter) = (0..self.cols).find(|&j| self.eligible[j] && d[j] > EPS) else {
                return Ok(Phase::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.a.len() {
                let aij = self.a[i][enter];
                if aij > EPS {
                    let ratio = self.rhs(i) / aij;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-12
                                || ((ratio - lr).abs() <= 1e-12 && self.basis[i] < self.basis[li])
                            {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leave else {
                return Ok(Phase::Unbounded);
            };
            self.pivot(row, enter, problem)?;
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(Error::NumericalInstability {
                    reason: format!("pivot limit {MAX_PIVOTS} exceeded"),
                    dump: problem.dump(),
                });
            }
        }
    }
}

/// Solves `problem`. Deterministic: identical inputs give bit-identical output.
pub fn solve(problem: &LpProblem) -> Result<LpOutcome> {
    problem.validate()?;
    log::debug!("lp solve\n{}", problem.dump());

    // Structural columns: free variables split into positive and negative parts.
    let mut col_of = Vec::with_capacity(problem.num_vars());
    let mut n_struct = 0;
    for b in &problem.bounds {
        col_of.push(n_struct);
        n_struct += match b {
            VarBound::NonNegative => 1,
            VarBound::Free => 2,
        };
    }
    let expand = |coeffs: &[f64]| {
        let mut row = vec![0.0; n_struct];
        for (j, &a) in coeffs.iter().enumerate() {
            row[col_of[j]] = a;
            if problem.bounds[j] == VarBound::Free {
                row[col_of[j] + 1] = -a;
            }
        }
        row
    };

    // Normalize to non-negative right-hand sides.
    let rows: Vec<(Vec<f64>, Relation, f64)> = problem
        .constraints
        .iter()
        .map(|c| {
            let row = expand(&c.coeffs);
            if c.rhs < 0.0 {
                let flipped = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (row.iter().map(|v| -v).collect(), flipped, -c.rhs)
            } else {
                (row, c.relation, c.rhs)
            }
        })
        .collect();

    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let cols = n_struct + n_slack + n_art;
    let mut a = Vec::with_capacity(rows.len());
    let mut basis = Vec::with_capacity(rows.len());
    let (mut next_slack, mut next_art) = (n_struct, n_struct + n_slack);
    for (coeffs, rel, rhs) in &rows {
        let mut r = vec![0.0; cols + 1];
        r[..n_struct].copy_from_slice(coeffs);
        r[cols] = *rhs;
        match rel {
            Relation::Le => {
                r[next_slack] = 1.0;
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                r[next_slack] = -1.0;
                next_slack += 1;
                r[next_art] = 1.0;
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                r[next_art] = 1.0;
                basis.push(next_art);
                next_art += 1;
            }
        }
        a.push(r);
    }
    let art_start = n_struct + n_slack;
    let mut t = Tableau {
        a,
        basis,
        cols,
        eligible: vec![true; cols],
    };
    let mut pivots = 0;

    // Phase 1: maximize -(sum of artificials).
    if n_art > 0 {
        let mut c1 = vec![0.0; cols];
        for c in c1.iter_mut().skip(art_start) {
            *c = -1.0;
        }
        t.run(&c1, problem, &mut pivots)?;
        let infeasibility: f64 = t
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= art_start)
            .map(|(i, _)| t.rhs(i))
            .sum();
        let scale = rows.iter().map(|r| r.2).fold(1.0, f64::max);
        if infeasibility > EPS * scale {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.a.len() {
            if t.basis[i] >= art_start {
                match (0..art_start).find(|&j| t.a[i][j].abs() > EPS) {
                    Some(j) => {
                        t.pivot(i, j, problem)?;
                        i += 1;
                    }
                    None => {
                        t.a.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        for e in t.eligible.iter_mut().skip(art_start) {
            *e = false;
        }
    }

    // Phase 2.
    let mut c2 = vec![0.0; cols];
    for (j, &cj) in problem.objective.iter().enumerate() {
        c2[col_of[j]] = cj;
        if problem.bounds[j] == VarBound::Free {
            c2[col_of[j] + 1] = -cj;
        }
    }
    if let Phase::Unbounded = t.run(&c2, problem, &mut pivots)? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut values = vec![0.0; cols];
    for (i, &b) in t.basis.iter().enumerate() {
        values[b] = t.rhs(i);
    }
    let x: Vec<f64> = (0..problem.num_vars())
        .map(|j| match problem.bounds[j] {
            VarBound::NonNegative => values[col_of[j]],
            VarBound::Free => values[col_of[j]] - values[col_of[j] + 1],
        })
        .collect();
    let value = problem.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpOutcome::Optimal { x, value })
}
