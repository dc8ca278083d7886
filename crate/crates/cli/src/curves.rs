use std::io::Write;

use clap::{Args, ValueEnum};
use fcg_core::{DiscountSpec, EtaSpec, FactorMode};

use crate::commands::csv_writer;
use crate::error::{CliError, CliResult, EXIT_OK};
use crate::format::sig;
use crate::range::parse_values;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Regime {
    Exponential,
    Hyperbolic,
    Quasi,
    Generalized,
    Hybrid,
    State,
    Scale,
}

impl Regime {
    fn name(self) -> &'static str {
        match self {
            Regime::Exponential => "exponential",
            Regime::Hyperbolic => "hyperbolic",
            Regime::Quasi => "quasi",
            Regime::Generalized => "generalized",
            Regime::Hybrid => "hybrid",
            Regime::State => "state",
            Regime::Scale => "scale",
        }
    }

    /// Parameter flags in the order they vary (outermost first).
    fn params(self) -> &'static [&'static str] {
        match self {
            Regime::Exponential | Regime::State => &["r"],
            Regime::Hyperbolic => &["k"],
            Regime::Quasi => &["beta", "delta"],
            Regime::Generalized => &["k", "p"],
            Regime::Hybrid => &["lambda", "r", "k"],
            Regime::Scale => &["r", "x", "log-base"],
        }
    }
}

/// Discount-factor curves as long-format CSV. Each parameter flag takes a
/// number, a comma list, or `start:stop:step`.
#[derive(Debug, Clone, Args)]
pub struct CurvesArgs {
    #[arg(long, value_enum)]
    pub regime: Regime,
    /// Times to evaluate.
    #[arg(long)]
    pub t: String,
    /// Exponential rate (exponential, state, the exponential leg of hybrid,
    /// and the base of scale).
    #[arg(long)]
    pub r: Option<String>,
    /// Hyperbolic rate (hyperbolic, generalized, the hyperbolic leg of hybrid).
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    /// Weight on the exponential leg of hybrid.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Reward sizes for the scale regime.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long = "log-base")]
    pub log_base: Option<String>,
}

impl CurvesArgs {
    fn raw(&self, flag: &str) -> Option<&str> {
        match flag {
            "r" => self.r.as_deref(),
            "k" => self.k.as_deref(),
            "p" => self.p.as_deref(),
            "beta" => self.beta.as_deref(),
            "delta" => self.delta.as_deref(),
            "lambda" => self.lambda.as_deref(),
            "x" => self.x.as_deref(),
            "log-base" => self.log_base.as_deref(),
            _ => None,
        }
    }

    fn values(&self, flag: &str) -> CliResult<Vec<f64>> {
        match self.raw(flag) {
            Some(text) => parse_values(flag, text),
            None if flag == "log-base" => Ok(vec![10.0]),
            None => Err(CliError::Usage(format!(
                "--regime {} needs --{flag}",
                self.regime.name()
            ))),
        }
    }
}

fn build(regime: Regime, v: &[f64]) -> fcg_core::Result<DiscountSpec> {
    match regime {
        Regime::Exponential | Regime::State => DiscountSpec::exponential(v[0]),
        Regime::Hyperbolic => DiscountSpec::hyperbolic(v[0]),
        Regime::Quasi => DiscountSpec::quasi_hyperbolic(v[0], v[1]),
        Regime::Generalized => DiscountSpec::generalized_hyperbolic(v[0], v[1]),
        Regime::Hybrid => DiscountSpec::hybrid(
            v[0],
            DiscountSpec::exponential(v[1])?,
            DiscountSpec::hyperbolic(v[2])?,
        ),
        Regime::Scale => DiscountSpec::scale_dependent(
            DiscountSpec::exponential(v[0])?,
            EtaSpec::inverse_log(v[2])?,
        ),
    }
}

fn cartesian(lists: &[Vec<f64>]) -> Vec<Vec<f64>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect()
    })
}

pub fn curves(args: &CurvesArgs, mode: FactorMode, out: &mut dyn Write) -> CliResult<u8> {
    let ts = parse_values("t", &args.t)?;
    if let Some(t) = ts.iter().find(|t| **t < 0.0) {
        return Err(CliError::Usage(format!("--t values must be >= 0, got {t}")));
    }
    let names = args.regime.params();
    for flag in ["r", "k", "p", "beta", "delta", "lambda", "x", "log-base"] {
        if args.raw(flag).is_some() && !names.contains(&flag) {
            return Err(CliError::Usage(format!(
                "--{flag} does not apply to --regime {}",
                args.regime.name()
            )));
        }
    }
    let lists = names
        .iter()
        .map(|f| args.values(f))
        .collect::<CliResult<Vec<_>>>()?;
    let mut w = csv_writer(out);
    w.write_record(["regime", "param_set", "t", "factor"])?;
    for combo in cartesian(&lists) {
        let d = build(args.regime, &combo).map_err(|e| CliError::Usage(e.to_string()))?;
        let label: Vec<String> = names
            .iter()
            .zip(&combo)
            .map(|(n, v)| format!("{n}={}", sig(*v, 6)))
            .collect();
        let label = label.join(";");
        let x = (args.regime == Regime::Scale).then(|| combo[1]);
        for &t in &ts {
            let f = d
                .factor_with(t, x, None, mode)
                .map_err(|e| CliError::Usage(format!("{label}: {e}")))?;
            w.write_record([args.regime.name(), &label, &sig(t, 6), &sig(f, 6)])?;
        }
    }
    w.flush()?;
    Ok(EXIT_OK)
}
