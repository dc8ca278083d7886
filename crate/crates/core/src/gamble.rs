//! Finite-state gambles and their image under a utility.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::utility::UtilitySpec;

/// Ordered, non-empty list of distinct state labels. Cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    labels: Arc<[String]>,
}

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidParameter(
                "state space needs at least one state".into(),
            ));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate state label `{l}`"
                )));
            }
        }
        Ok(Self {
            labels: labels.into(),
        })
    }

    /// States named `s1, ..., sm`.
    pub fn numbered(m: usize) -> Result<Self> {
        Self::new((1..=m).map(|i| format!("s{i}")))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// State-contingent rewards bounded below by `-wealth_floor`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gamble {
    space: StateSpace,
    rewards: Vec<f64>,
    wealth_floor: f64,
}

impl Gamble {
    pub fn new(space: StateSpace, rewards: Vec<f64>, wealth_floor: f64) -> Result<Self> {
        if rewards.len() != space.len() {
            return Err(Error::InvalidParameter(format!(
                "gamble has {} rewards for {} states",
                rewards.len(),
                space.len()
            )));
        }
        if !(wealth_floor.is_finite() && wealth_floor > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "wealth floor must be positive, got {wealth_floor}"
            )));
        }
        if let Some((i, r)) = rewards.iter().enumerate().find(|(_, r)| !r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "reward {r} in state `{}` is not finite",
                space.labels()[i]
            )));
        }
        if let Some((i, r)) = rewards
            .iter()
            .enumerate()
            .find(|(_, r)| **r < -wealth_floor)
        {
            return Err(Error::InvalidParameter(format!(
                "reward {r} in state `{}` breaches the wealth floor -{wealth_floor}",
                space.labels()[i]
            )));
        }
        Ok(Self {
            space,
            rewards,
            wealth_floor,
        })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn rewards(&self) -> &[f64] {
        &self.rewards
    }

    pub fn wealth_floor(&self) -> f64 {
        self.wealth_floor
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    /// Every state strictly negative.
    pub fn is_sure_loss(&self) -> bool {
        self.rewards.iter().all(|&r| r < 0.0)
    }

    fn same_space(&self, other: &Gamble) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!(
                "{:?} vs {:?}",
                self.space.labels(),
                other.space.labels()
            )))
        }
    }
}

impl fmt::Display for Gamble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rewards.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// Weak componentwise dominance `f >= g`.
pub fn dominates(f: &Gamble, g: &Gamble) -> Result<bool> {
    f.same_space(g)?;
    Ok(f.rewards.iter().zip(&g.rewards).all(|(a, b)| a >= b))
}

/// Strict dominance: `f >= g` everywhere and `f > g` somewhere.
pub fn strictly_dominates(f: &Gamble, g: &Gamble) -> Result<bool> {
    Ok(dominates(f, g)? && f.rewards.iter().zip(&g.rewards).any(|(a, b)| a > b))
}

/// The utility a gamble is valued under: `u` itself when 0 is in its domain,
/// otherwise `u(w + x) - u(w)` so that the zero gamble maps to 0.
#[derive(Debug, Clone, Copy)]
pub struct GambleUtility<'a> {
    u: &'a UtilitySpec,
    wealth: f64,
    offset: f64,
}

impl<'a> GambleUtility<'a> {
    pub fn new(u: &'a UtilitySpec, wealth: f64) -> Result<Self> {
        let (wealth, offset) = if u.needs_wealth_shift() {
            (wealth, u.eval(wealth)?)
        } else {
            (0.0, 0.0)
        };
        Ok(Self { u, wealth, offset })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.u.eval(self.wealth + x)? - self.offset)
    }

    pub fn inverse(&self, v: f64) -> Result<f64> {
        Ok(self.u.inverse(v + self.offset)? - self.wealth)
    }
}

/// Pointwise utility `u(f)`, the element of the transformed cone.
pub fn transform(u: &UtilitySpec, f: &Gamble) -> Result<Vec<f64>> {
    let gu = GambleUtility::new(u, f.wealth_floor)?;
    f.rewards
        .iter()
        .zip(f.space.labels())
        .map(|(&x, label)| {
            gu.eval(x).map_err(|e| match e {
                Error::Domain(msg) => Error::Domain(format!("state `{label}`: {msg}")),
                other => other,
            })
        })
        .collect()
}

/// `h = u^{-1}(lambda u(f) + mu u(g))`, computed state by state.
pub fn u_convex_combine(
    u: &UtilitySpec,
    f: &Gamble,
    g: &Gamble,
    lambda: f64,
    mu: f64,
) -> Result<Gamble> {
    f.same_space(g)?;
    if !(lambda >= 0.0 && mu >= 0.0 && lambda.is_finite() && mu.is_finite()) {
        return Err(Error::Precondition(format!(
            "combination weights must be finite and non-negative, got {lambda}, {mu}"
        )));
    }
    if u.needs_wealth_shift() && f.wealth_floor != g.wealth_floor {
        return Err(Error::Precondition(format!(
            "wealth-shifted utility needs a common wealth, got {} and {}",
            f.wealth_floor, g.wealth_floor
        )));
    }
    let uf = transform(u, f)?;
    let ug = transform(u, g)?;
    let gu = GambleUtility::new(u, f.wealth_floor)?;
    let mut rewards = Vec::with_capacity(f.len());
    for (i, label) in f.space.labels().iter().enumerate() {
        let v = lambda * uf[i] + mu * ug[i];
        let h = gu.inverse(v).map_err(|_| {
            Error::Image(format!(
                "state `{label}`: combined utility {v} leaves the image of the {} utility",
                u.name()
            ))
        })?;
        rewards.push(h);
    }
    let mut wealth = f.wealth_floor.max(g.wealth_floor);
    if !u.needs_wealth_shift() {
        let min = rewards.iter().cloned().fold(f64::INFINITY, f64::min);
        wealth = wealth.max(-min);
    }
    Gamble::new(f.space.clone(), rewards, wealth)
}
