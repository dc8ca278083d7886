//! Independent oracles shared by the property and acceptance suites. Nothing
//! here calls the simplex solver.
#![allow(dead_code)]

use fcg_core::{Gamble, Phi, StateSpace, UtilitySpec};
use rand::Rng;

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. `None` when (numerically) singular.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            let (top, rest) = a.split_at_mut(r);
            for (x, p) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= f * p;
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Vertex-enumeration oracle for `{lambda >= 0 : sum_i lambda_i gens_i <= target}`.
///
/// The region lies in the non-negative orthant, so it is non-empty iff it
/// has a vertex: some choice of `n` active constraints whose solution is
/// feasible. Returns the vertex found, if any.
pub fn cone_vertex_oracle(gens: &[Vec<f64>], target: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = gens.len();
    let m = target.len();
    if n == 0 {
        return target.iter().all(|&t| t >= -tol).then(Vec::new);
    }
    // rows 0..m: sum_i gens_i[s] lambda_i <= target[s]; rows m..m+n: -lambda_i <= 0
    let row = |r: usize| -> (Vec<f64>, f64) {
        if r < m {
            (gens.iter().map(|g| g[r]).collect(), target[r])
        } else {
            let mut e = vec![0.0; n];
            e[r - m] = -1.0;
            (e, 0.0)
        }
    };
    let feasible = |x: &[f64]| {
        (0..m + n).all(|r| {
            let (a, b) = row(r);
            let lhs: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
            lhs <= b + tol * (1.0 + b.abs())
        })
    };
    for active in combinations(m + n, n) {
        let (a, b): (Vec<_>, Vec<_>) = active.iter().map(|&r| row(r)).unzip();
        if let Some(x) = gauss_solve(a, b) {
            if feasible(&x) {
                return Some(x);
            }
        }
    }
    None
}

/// All points of the probability simplex in `m` dimensions whose
/// coordinates are multiples of `1 / steps`.
pub fn simplex_grid(m: usize, steps: usize) -> Vec<Vec<f64>> {
    fn rec(m: usize, left: usize, steps: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == m - 1 {
            let mut p: Vec<f64> = cur.iter().map(|&c| c as f64 / steps as f64).collect();
            p.push(left as f64 / steps as f64);
            out.push(p);
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(m, left - c, steps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, steps, steps, &mut Vec::new(), &mut out);
    out
}

/// A utility drawn from the shipped zoo, with a reward range that keeps
/// gambles inside its domain and the wealth floor to use.
#[derive(Debug, Clone)]
pub struct ZooPick {
    pub utility: UtilitySpec,
    pub lo: f64,
    pub hi: f64,
    pub wealth: f64,
}

pub fn zoo(rng: &mut impl Rng) -> ZooPick {
    match rng.random_range(0..6) {
        0 => ZooPick {
            utility: UtilitySpec::linear(),
            lo: -3.0,
            hi: 3.0,
            wealth: 5.0,
        },
        1 => ZooPick {
            utility: UtilitySpec::log_shift(),
            lo: -0.95,
            hi: 3.0,
            wealth: 1.0,
        },
        2 => ZooPick {
            utility: UtilitySpec::sqrt(),
            lo: 0.0,
            hi: 4.0,
            wealth: 1.0,
        },
        3 => ZooPick {
            utility: UtilitySpec::power_discounted(rng.random_range(0.0..0.95)).unwrap(),
            lo: -1.9,
            hi: 3.0,
            wealth: 2.0,
        },
        4 => ZooPick {
            utility: UtilitySpec::composed(UtilitySpec::log_shift(), Phi::cube()).unwrap(),
            lo: -0.9,
            hi: 2.0,
            wealth: 1.0,
        },
        _ => ZooPick {
            utility: UtilitySpec::composed(UtilitySpec::linear(), Phi::Sinh { scale: 0.5 })
                .unwrap(),
            lo: -3.0,
            hi: 3.0,
            wealth: 5.0,
        },
    }
}

pub fn random_gamble(rng: &mut impl Rng, space: &StateSpace, z: &ZooPick) -> Gamble {
    let rewards = (0..space.len())
        .map(|_| rng.random_range(z.lo..z.hi))
        .collect();
    Gamble::new(space.clone(), rewards, z.wealth).unwrap()
}

/// A random gamble that is not everywhere strictly negative.
pub fn random_generator(rng: &mut impl Rng, space: &StateSpace, z: &ZooPick) -> Gamble {
    loop {
        let g = random_gamble(rng, space, z);
        if !g.is_sure_loss() {
            return g;
        }
    }
}

/// A random strictly increasing map with `phi(0) = 0`.
pub fn random_phi(rng: &mut impl Rng) -> Phi {
    match rng.random_range(0..4) {
        0 => Phi::scale(rng.random_range(0.01..100.0)),
        1 => Phi::OddPower {
            p: rng.random_range(0.2..5.0),
        },
        2 => Phi::Sinh {
            scale: rng.random_range(0.1..3.0),
        },
        _ => Phi::Polynomial {
            coeffs: vec![
                0.0,
                rng.random_range(0.1..2.0),
                0.0,
                rng.random_range(0.0..2.0),
                0.0,
                rng.random_range(0.0..1.0),
            ],
        },
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
