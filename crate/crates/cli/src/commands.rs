use std::io::Write;

use fcg_core::{
    acceptance, audit, fit_functional, Acceptance, AssessmentSet, DiscountSpec, FactorMode,
    FitOutcome, Preference, Valuation,
};

use crate::config::{Assessments, ScenarioConfig};
use crate::error::{CliError, CliResult, EXIT_INCOHERENT, EXIT_OK};
use crate::format::sig;

/// Options shared by every config-driven command.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub tol: f64,
    pub mode: FactorMode,
}

pub(crate) fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn valuation(cfg: &ScenarioConfig, opts: Options) -> CliResult<Valuation> {
    let discount: &DiscountSpec = cfg
        .discount
        .as_ref()
        .ok_or_else(|| CliError::Config("no [discount] block".into()))?;
    Ok(Valuation::new(cfg.utility.clone(), discount.clone()).with_mode(opts.mode))
}

pub fn eval(cfg: &ScenarioConfig, opts: Options, out: &mut dyn Write) -> CliResult<u8> {
    if cfg.schedules.is_empty() {
        return Err(CliError::Config("no schedules".into()));
    }
    let val = valuation(cfg, opts)?;
    let values = cfg
        .schedules
        .iter()
        .map(|s| val.schedule_value(s))
        .collect::<fcg_core::Result<Vec<_>>>()?;
    let mut w = csv_writer(out);
    w.write_record(["schedule", "value"])?;
    for (s, v) in cfg.schedules.iter().zip(values) {
        w.write_record([s.label(), &sig(v, 6)])?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

pub fn scan(cfg: &ScenarioConfig, opts: Options, out: &mut dyn Write) -> CliResult<u8> {
    let spec = cfg
        .scan
        .as_ref()
        .ok_or_else(|| CliError::Config("no [scan] block".into()))?;
    let val = valuation(cfg, opts)?;
    let find = |label: &str| {
        cfg.schedules
            .iter()
            .find(|s| s.label() == label)
            .expect("scan labels are validated at load")
    };
    let result = val.reversal_scan(find(&spec.a), find(&spec.b), &spec.shifts, opts.tol)?;
    {
        let mut w = csv_writer(&mut *out);
        w.write_record(["delta", "value_a", "value_b", "preference"])?;
        for row in &result.rows {
            w.write_record([
                sig(row.delta, 6),
                sig(row.value_a, 6),
                sig(row.value_b, 6),
                row.preference.to_string(),
            ])?;
        }
        w.flush()?;
    }
    match result.first_flip {
        Some(d) => {
            let to = result
                .rows
                .iter()
                .find(|r| r.delta == d)
                .map(|r| r.preference)
                .unwrap_or(Preference::Indifferent);
            writeln!(
                out,
                "# first flip: delta={} ({} -> {})",
                sig(d, 6),
                result.baseline,
                to
            )?
        }
        None => writeln!(out, "# no reversal (baseline {})", result.baseline)?,
    }
    Ok(EXIT_OK)
}

fn assessments(cfg: &ScenarioConfig) -> CliResult<&Assessments> {
    cfg.assessments
        .as_ref()
        .ok_or_else(|| CliError::Config("no [assessments] block".into()))
}

fn fmt_vec(v: &[f64]) -> String {
    let items: Vec<String> = v
        .iter()
        .map(|x| sig(if x.abs() < 5e-13 { 0.0 } else { *x }, 6))
        .collect();
    format!("[{}]", items.join(", "))
}

fn report_queries(set: &AssessmentSet, a: &Assessments, out: &mut dyn Write) -> CliResult<()> {
    for (label, g) in &a.queries {
        match acceptance(set, g)? {
            Acceptance::Accepted { lambda, margin } => writeln!(
                out,
                "query {label}: accepted (lambda={}, margin={})",
                fmt_vec(&lambda),
                sig(margin, 6)
            )?,
            Acceptance::Rejected {
                certificate,
                margin,
            } => writeln!(
                out,
                "query {label}: rejected (separating weights={}, score={})",
                fmt_vec(&certificate),
                sig(margin, 6)
            )?,
        }
    }
    Ok(())
}

pub fn check(cfg: &ScenarioConfig, out: &mut dyn Write) -> CliResult<u8> {
    let a = assessments(cfg)?;
    // A generator that is a sure loss on its own is already an F1 violation,
    // and the remaining ones are still audited.
    let mut screened = a.clone();
    let mut sure_losses = Vec::new();
    let mut kept = Vec::new();
    for (i, g) in a.accepted.iter().enumerate() {
        if g.is_sure_loss() {
            sure_losses.push(i);
        } else {
            kept.push(g.clone());
        }
    }
    screened.accepted = kept;
    let set = screened.to_set(&cfg.utility)?;
    let report = audit(&set)?;
    let mut findings: Vec<String> = sure_losses
        .iter()
        .map(|i| {
            format!(
                "F1 VIOLATION: accepted[{i}] {} is everywhere strictly negative",
                fmt_vec(a.accepted[*i].rewards())
            )
        })
        .collect();
    findings.extend(report.findings.iter().map(|f| f.to_string()));
    let avoids = report.avoids_partial_loss && sure_losses.is_empty();
    for f in &findings {
        writeln!(out, "{f}")?;
    }
    writeln!(
        out,
        "avoids partial loss: {}",
        if avoids { "yes" } else { "no" }
    )?;
    if sure_losses.is_empty() {
        report_queries(&set, a, out)?;
    }
    if findings.is_empty() {
        writeln!(out, "coherent: no findings")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "incoherent: {} finding(s)", findings.len())?;
        Ok(EXIT_INCOHERENT)
    }
}

pub fn fit(cfg: &ScenarioConfig, out: &mut dyn Write) -> CliResult<u8> {
    let a = assessments(cfg)?;
    let set = a.to_set(&cfg.utility)?;
    match fit_functional(&set, a.epsilon)? {
        FitOutcome::Feasible {
            functional,
            min_margin,
            ..
        } => {
            let mut w = csv_writer(&mut *out);
            w.write_record(["state", "weight"])?;
            for (s, x) in a.space.labels().iter().zip(functional.weights()) {
                w.write_record([s.as_str(), &sig(*x, 6)])?;
            }
            w.flush()?;
            drop(w);
            writeln!(out, "# min accepted margin: {}", sig(min_margin, 6))?;
            for (i, uf) in set.accepted_transformed().iter().enumerate() {
                writeln!(out, "# accepted[{i}] rho={}", sig(functional.apply(uf), 6))?;
            }
            for (j, ug) in set.rejected_transformed().iter().enumerate() {
                writeln!(out, "# rejected[{j}] rho={}", sig(functional.apply(ug), 6))?;
            }
            for (label, g) in &a.queries {
                let r = fcg_core::rho(&functional, &cfg.utility, g)?;
                writeln!(out, "# query {label} rho={}", sig(r, 6))?;
            }
            Ok(EXIT_OK)
        }
        FitOutcome::Infeasible { conflict } => {
            let names: Vec<String> = conflict.iter().map(|r| r.to_string()).collect();
            writeln!(
                out,
                "no representing functional; conflicting assessments: {}",
                names.join(", ")
            )?;
            Ok(EXIT_INCOHERENT)
        }
    }
}
