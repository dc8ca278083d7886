//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::process::ExitCode;

use common::{
    cone_vertex_oracle, dot, random_gamble, random_generator, random_phi, simplex_grid, zoo,
    ZooPick,
};
use fcg_core::gamble::GambleUtility;
use fcg_core::lp::Constraint;
use fcg_core::{
    acceptance, accepts, check_ordering_invariance, check_transform_invariance, fit_functional,
    rho, solve, u_convex_combine, Acceptance, AssessmentSet, DiscountSpec, Error, EtaSpec,
    FactorMode, FitOutcome, Functional, Gamble, LpOutcome, LpProblem, PaymentSchedule, Preference,
    Relation, StateSpace, UtilitySpec, Valuation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type FlipFixture = (&'static str, Valuation, (f64, f64), (f64, f64), f64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn near(label: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || {
        format!("{label}: got {got}, want {want} +/- {tol}")
    })
}

fn err(e: Error) -> String {
    e.to_string()
}

fn single(label: &str, x: f64, t: f64) -> PaymentSchedule {
    PaymentSchedule::from_pairs(label, &[(x, t)]).unwrap()
}

fn criterion_1() -> Outcome {
    let val = Valuation::new(
        UtilitySpec::log_shift(),
        DiscountSpec::hyperbolic(0.5).map_err(err)?,
    );
    let v = |x, t| val.effective_utility(x, t, None).map_err(err);
    near("v(1000,0)", v(1000.0, 0.0)?, 6.9088, 0.005)?;
    near("v(1200,1)", v(1200.0, 1.0)?, 6.6859, 0.005)?;
    near("v(1000,5)", v(1000.0, 5.0)?, 5.6614, 0.005)?;
    near("v(1200,6)", v(1200.0, 6.0)?, 5.7071, 0.005)?;
    let scan = val
        .reversal_scan(
            &single("A", 1000.0, 0.0),
            &single("B", 1200.0, 1.0),
            &[0.0, 5.0],
            1e-9,
        )
        .map_err(err)?;
    ensure(scan.rows[0].preference == Preference::A, || {
        "Δ=0 should prefer A".into()
    })?;
    ensure(scan.rows[1].preference == Preference::B, || {
        "Δ=5 should prefer B".into()
    })?;
    Ok("values within 0.005, A at Δ=0, B at Δ=5".into())
}

fn criterion_2() -> Outcome {
    let val = Valuation::new(
        UtilitySpec::sqrt(),
        DiscountSpec::quasi_hyperbolic(0.7, 0.95).map_err(err)?,
    );
    let v = |x, t| val.effective_utility(x, t, None).map_err(err);
    ensure(v(100.0, 0.0)? == 10.0, || {
        "v(100,0) must be exactly 10".into()
    })?;
    near("v(120,1)", v(120.0, 1.0)?, 8.933, 0.01)?;
    near("v(100,12)", v(100.0, 12.0)?, 6.151, 0.01)?;
    near("v(120,13)", v(120.0, 13.0)?, 6.567, 0.01)?;
    let scan = val
        .reversal_scan(
            &single("A", 100.0, 0.0),
            &single("B", 120.0, 1.0),
            &[0.0, 12.0],
            1e-9,
        )
        .map_err(err)?;
    ensure(
        scan.baseline == Preference::A
            && scan.first_flip == Some(12.0)
            && scan.rows[1].preference == Preference::B,
        || format!("expected A then B at Δ=12, got {scan:?}"),
    )?;
    Ok("10 exactly, others within 0.01, reversal at Δ=12".into())
}

fn criterion_3() -> Outcome {
    let option_a = PaymentSchedule::from_pairs("A", &[(100.0, 0.0), (120.0, 5.0)]).map_err(err)?;
    let option_b = PaymentSchedule::from_pairs("B", &[(110.0, 2.0), (150.0, 4.0)]).map_err(err)?;
    let impatient = DiscountSpec::generalized_hyperbolic(0.2, 2.0).map_err(err)?;
    for (t, want) in [(2.0, 0.5102), (4.0, 0.3086), (5.0, 0.25)] {
        near(
            &format!("D_G({t}) p=2"),
            impatient.factor(t, None, None).map_err(err)?,
            want,
            1e-4,
        )?;
    }
    let exact = Valuation::new(UtilitySpec::linear(), impatient.clone());
    let rounded = exact.clone().with_mode(FactorMode::TwoDecimalLeaves);
    near(
        "V_A p=2",
        exact.schedule_value(&option_a).map_err(err)?,
        130.0,
        1e-9,
    )?;
    near(
        "V_B p=2 rounded",
        rounded.schedule_value(&option_b).map_err(err)?,
        102.6,
        0.1,
    )?;
    near(
        "V_B p=2 exact",
        exact.schedule_value(&option_b).map_err(err)?,
        102.42,
        0.1,
    )?;

    let patient = DiscountSpec::generalized_hyperbolic(0.2, 0.5).map_err(err)?;
    let exact = Valuation::new(UtilitySpec::linear(), patient);
    let rounded = exact.clone().with_mode(FactorMode::TwoDecimalLeaves);
    near(
        "V_A p=0.5 rounded",
        rounded.schedule_value(&option_a).map_err(err)?,
        185.2,
        0.1,
    )?;
    near(
        "V_B p=0.5 exact",
        exact.schedule_value(&option_b).map_err(err)?,
        204.8,
        0.5,
    )?;
    Ok("factors within 1e-4, V_A=130, V_B(p=2)=102.6 rounded / 102.42 exact, V_A(p=0.5)=185.2 rounded, V_B(p=0.5)=204.8 exact".into())
}

fn criterion_4() -> Outcome {
    let d = DiscountSpec::state_dependent([("s1", 0.05), ("s2", 0.15)]).map_err(err)?;
    let val = Valuation::new(UtilitySpec::linear(), d);
    for (s, wants) in [("s1", [951.0, 861.0, 779.0]), ("s2", [861.0, 638.0, 472.0])] {
        for (t, want) in [1.0, 3.0, 5.0].into_iter().zip(wants) {
            let got = val.effective_utility(1000.0, t, Some(s)).map_err(err)?;
            near(&format!("v(1000,{t},{s})"), got, want, 1.0)?;
        }
    }
    Ok("six present values within 1".into())
}

fn criterion_5() -> Outcome {
    let d = DiscountSpec::hybrid(
        0.5,
        DiscountSpec::exponential(0.5).map_err(err)?,
        DiscountSpec::hyperbolic(1.0).map_err(err)?,
    )
    .map_err(err)?;
    let exact = Valuation::new(UtilitySpec::linear(), d);
    let rounded = exact.clone().with_mode(FactorMode::TwoDecimalLeaves);
    let v = |val: &Valuation, x, t| val.effective_utility(x, t, None).map_err(err);
    let v1 = v(&exact, 1500.0, 1.0)?;
    near("v(1500,1) exact", v1, 832.0, 3.0)?;
    let v1r = v(&rounded, 1500.0, 1.0)?;
    near("v(1500,1) rounded", v1r, 832.0, 0.5)?;
    near("v(1000,10)", v(&exact, 1000.0, 10.0)?, 48.5, 0.5)?;
    near("v(1500,11)", v(&exact, 1500.0, 11.0)?, 66.0, 0.7)?;
    let scan = exact
        .reversal_scan(
            &single("A", 1000.0, 0.0),
            &single("B", 1500.0, 1.0),
            &[0.0, 10.0],
            1e-9,
        )
        .map_err(err)?;
    ensure(
        scan.baseline == Preference::A && scan.first_flip == Some(10.0),
        || format!("expected reversal at Δ=10, got {scan:?}"),
    )?;
    Ok(format!(
        "v(1500,1)={v1:.1} exact / {v1r:.4} rounded, reversal at Δ=10"
    ))
}

fn criterion_6() -> Outcome {
    let d = DiscountSpec::scale_dependent(
        DiscountSpec::exponential(1.0).map_err(err)?,
        EtaSpec::inverse_log(10.0).map_err(err)?,
    )
    .map_err(err)?;
    let val = Valuation::new(UtilitySpec::linear(), d);
    let small = val
        .compare(&single("A", 10.0, 0.0), &single("B", 15.0, 1.0), 1e-9)
        .map_err(err)?;
    let large = val
        .compare(&single("A", 1000.0, 0.0), &single("B", 1500.0, 1.0), 1e-9)
        .map_err(err)?;
    ensure(small == Preference::A, || {
        format!("$10/$15 scale: expected A, got {small}")
    })?;
    ensure(large == Preference::B, || {
        format!("$1000/$1500 scale: expected B, got {large}")
    })?;
    Ok("immediate at $10/$15, delayed at $1000/$1500".into())
}

struct RandomSet {
    pick: ZooPick,
    set: AssessmentSet,
}

fn random_set(rng: &mut ChaCha8Rng, max_rejected: usize) -> RandomSet {
    let m = rng.random_range(1..=4);
    let space = StateSpace::numbered(m).unwrap();
    let pick = zoo(rng);
    let n = rng.random_range(0..=4);
    let accepted = (0..n)
        .map(|_| random_generator(rng, &space, &pick))
        .collect();
    let r = rng.random_range(0..=max_rejected);
    let rejected = (0..r).map(|_| random_gamble(rng, &space, &pick)).collect();
    let set = AssessmentSet::new(space, pick.utility.clone(), accepted, rejected).unwrap();
    RandomSet { pick, set }
}

/// Either a uniform random gamble or a perturbed member of the u-cone, so
/// both verdicts occur often.
fn random_query(rng: &mut ChaCha8Rng, rs: &RandomSet) -> Gamble {
    let space = rs.set.space();
    let gens = rs.set.accepted_transformed();
    if gens.is_empty() || rng.random_bool(0.4) {
        return random_gamble(rng, space, &rs.pick);
    }
    let gu = GambleUtility::new(&rs.pick.utility, rs.pick.wealth).unwrap();
    loop {
        let lambda: Vec<f64> = gens.iter().map(|_| rng.random_range(0.0..1.5)).collect();
        let rewards: Option<Vec<f64>> = (0..space.len())
            .map(|s| {
                let v = dot(&lambda, &gens.iter().map(|g| g[s]).collect::<Vec<_>>())
                    + rng.random_range(-0.3..0.3);
                gu.inverse(v).ok()
            })
            .collect();
        if let Some(rewards) = rewards {
            if let Ok(g) = Gamble::new(space.clone(), rewards, rs.pick.wealth) {
                return g;
            }
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut positives, mut negatives) = (0, 0);
    for inst in 0..500 {
        let rs = random_set(&mut rng, 0);
        for q in 0..4 {
            let g = random_query(&mut rng, &rs);
            let ug = rs.set.utility();
            let target = fcg_core::transform(ug, &g).map_err(err)?;
            let gens = rs.set.accepted_transformed();
            let oracle = cone_vertex_oracle(gens, &target, 1e-9).is_some();
            let verdict = acceptance(&rs.set, &g).map_err(err)?;
            let ctx = || {
                format!(
                    "instance {inst} query {q} ({}): {g}",
                    rs.pick.utility.name()
                )
            };
            ensure(verdict.is_accepted() == oracle, || {
                format!(
                    "{}: accepts={} oracle={oracle}",
                    ctx(),
                    verdict.is_accepted()
                )
            })?;
            match verdict {
                Acceptance::Accepted { lambda, .. } => {
                    positives += 1;
                    ensure(lambda.iter().all(|&l| l >= 0.0), || {
                        format!("{}: negative lambda", ctx())
                    })?;
                    for (s, &ts) in target.iter().enumerate() {
                        let lhs: f64 = lambda.iter().zip(gens).map(|(l, f)| l * f[s]).sum();
                        ensure(lhs <= ts + 1e-8, || {
                            format!(
                                "{}: witness exceeds u(g) in state {s} by {}",
                                ctx(),
                                lhs - ts
                            )
                        })?;
                    }
                }
                Acceptance::Rejected { certificate, .. } => {
                    negatives += 1;
                    let total: f64 = certificate.iter().sum();
                    ensure(
                        certificate.iter().all(|&y| y >= -1e-12) && (total - 1.0).abs() <= 1e-9,
                        || {
                            format!(
                                "{}: certificate {certificate:?} is not a distribution",
                                ctx()
                            )
                        },
                    )?;
                    for f in gens {
                        ensure(dot(&certificate, f) >= -1e-9, || {
                            format!("{}: certificate scores a generator negative", ctx())
                        })?;
                    }
                    ensure(dot(&certificate, &target) < 0.0, || {
                        format!("{}: certificate does not separate the query", ctx())
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "500 sets, {} queries agree with the vertex oracle ({positives} accepted, {negatives} rejected)",
        positives + negatives
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut nonneg, mut upward, mut combos) = (0, 0, 0);
    for inst in 0..200 {
        let rs = random_set(&mut rng, 0);
        let space = rs.set.space().clone();
        for _ in 0..3 {
            let rewards = (0..space.len())
                .map(|_| rng.random_range(0.0..rs.pick.hi))
                .collect();
            let g = Gamble::new(space.clone(), rewards, rs.pick.wealth).map_err(err)?;
            ensure(accepts(&rs.set, &g).map_err(err)?, || {
                format!("instance {inst}: non-negative gamble {g} rejected")
            })?;
            nonneg += 1;
        }
        let mut pool: Vec<Gamble> = rs.set.accepted().to_vec();
        for _ in 0..4 {
            let g = random_query(&mut rng, &rs);
            if !accepts(&rs.set, &g).map_err(err)? {
                continue;
            }
            let bumped: Vec<f64> = g
                .rewards()
                .iter()
                .map(|r| r + rng.random_range(0.0..1.0))
                .collect();
            let h = Gamble::new(space.clone(), bumped, rs.pick.wealth).map_err(err)?;
            ensure(accepts(&rs.set, &h).map_err(err)?, || {
                format!("instance {inst}: {h} dominates accepted {g} but is rejected")
            })?;
            upward += 1;
            pool.push(g);
        }
        for _ in 0..4 {
            if pool.is_empty() {
                break;
            }
            let f = &pool[rng.random_range(0..pool.len())];
            let g = &pool[rng.random_range(0..pool.len())];
            let (l, m) = (rng.random_range(0.0..2.0), rng.random_range(0.0..2.0));
            let h = match u_convex_combine(&rs.pick.utility, f, g, l, m) {
                Ok(h) => h,
                Err(Error::Image(_)) => continue,
                Err(e) => return Err(err(e)),
            };
            ensure(accepts(&rs.set, &h).map_err(err)?, || {
                format!("instance {inst}: u-combination {h} of accepted {f}, {g} rejected")
            })?;
            combos += 1;
        }
    }
    for k in 0..20 {
        let phi = random_phi(&mut rng);
        let pick = zoo(&mut rng);
        let space = StateSpace::numbered(rng.random_range(1..=4)).unwrap();
        let fs: Vec<Gamble> = (0..20)
            .map(|_| random_gamble(&mut rng, &space, &pick))
            .collect();
        ensure(
            check_transform_invariance(&pick.utility, &phi, &fs).map_err(err)?,
            || format!("phi #{k} {phi:?} changes acceptance signs"),
        )?;
    }
    Ok(format!(
        "{nonneg} non-negative, {upward} dominating, {combos} u-combinations accepted; 20 phi maps preserve signs"
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let eps = 1e-6;
    let (mut feasible, mut infeasible) = (0, 0);
    for inst in 0..300 {
        let rs = random_set(&mut rng, 2);
        match fit_functional(&rs.set, eps).map_err(err)? {
            FitOutcome::Feasible { functional, .. } => {
                feasible += 1;
                let w = functional.weights();
                ensure(
                    w.iter().all(|&x| x >= 0.0) && (w.iter().sum::<f64>() - 1.0).abs() <= 1e-12,
                    || format!("instance {inst}: weights {w:?} not a distribution"),
                )?;
                for (i, uf) in rs.set.accepted_transformed().iter().enumerate() {
                    let m = dot(w, uf);
                    ensure(m >= -1e-9, || {
                        format!("instance {inst}: accepted[{i}] margin {m}")
                    })?;
                }
                for (j, ug) in rs.set.rejected_transformed().iter().enumerate() {
                    let m = dot(w, ug);
                    ensure(m <= -eps + 1e-9, || {
                        format!("instance {inst}: rejected[{j}] margin {m}")
                    })?;
                }
            }
            FitOutcome::Infeasible { conflict } => {
                infeasible += 1;
                ensure(!conflict.is_empty(), || {
                    format!("instance {inst}: empty conflict set")
                })?;
            }
        }
    }
    for k in 0..100 {
        let pick = zoo(&mut rng);
        let m = rng.random_range(1..=4);
        let space = StateSpace::numbered(m).unwrap();
        let fs: Vec<Gamble> = (0..rng.random_range(1..=8))
            .map(|_| random_gamble(&mut rng, &space, &pick))
            .collect();
        let ell = Functional::new((0..m).map(|_| rng.random_range(0.0..1.0) + 1e-3).collect())
            .map_err(err)?;
        for c in [1e-3, 1.0, 1e3] {
            ensure(
                check_ordering_invariance(&ell, c, &pick.utility, &fs).map_err(err)?,
                || format!("list {k}: ordering changes under c={c}"),
            )?;
        }
    }
    Ok(format!(
        "{feasible} fits re-checked ({infeasible} infeasible), 100 lists invariant under c in {{1e-3, 1, 1e3}}"
    ))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = f64::INFINITY;
    let mut built = 0;
    while built < 100 {
        let pick = zoo(&mut rng);
        let m = rng.random_range(2..=4);
        let space = StateSpace::numbered(m).unwrap();
        let w: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..1.0)).collect();
        let ell = Functional::new(w).map_err(err)?;
        let gu = GambleUtility::new(&pick.utility, pick.wealth).map_err(err)?;
        // u-values on the boundary l(u(f)) = 0, pulled back through u.
        let mut v: Vec<f64> = (0..m - 1)
            .map(|_| gu.eval(rng.random_range(pick.lo..pick.hi)).unwrap())
            .collect();
        let w = ell.weights();
        v.push(-dot(&w[..m - 1], &v) / w[m - 1]);
        let Ok(rewards) = v
            .iter()
            .map(|&x| gu.inverse(x))
            .collect::<fcg_core::Result<Vec<_>>>()
        else {
            continue;
        };
        let Ok(f) = Gamble::new(space.clone(), rewards.clone(), pick.wealth) else {
            continue;
        };
        built += 1;
        let mut n = 1u64;
        while n <= 1_000_000 {
            let shifted: Vec<f64> = rewards.iter().map(|r| r + 1.0 / n as f64).collect();
            let fnn = Gamble::new(space.clone(), shifted, pick.wealth).map_err(err)?;
            let r = rho(&ell, &pick.utility, &fnn).map_err(err)?;
            ensure(r >= 0.0, || format!("rho(f + 1/{n}) = {r} < 0 for {f}"))?;
            n *= 10;
        }
        let limit = rho(&ell, &pick.utility, &f).map_err(err)?;
        ensure(limit >= -1e-9, || format!("limit {f} has rho {limit}"))?;
        worst = worst.min(limit);
    }
    Ok(format!(
        "100 sequences up to n=1e6, smallest limit rho {worst:.3e}"
    ))
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let shifts: Vec<f64> = (0..=30).map(f64::from).collect();
    let random_schedule = |rng: &mut ChaCha8Rng, label: &str| {
        let pairs: Vec<(f64, f64)> = (0..rng.random_range(1..=3))
            .map(|_| (rng.random_range(1.0..1000.0), rng.random_range(0.0..20.0)))
            .collect();
        PaymentSchedule::from_pairs(label, &pairs).unwrap()
    };
    for k in 0..100 {
        let d = DiscountSpec::exponential(rng.random_range(0.01..0.3)).map_err(err)?;
        let val = Valuation::new(UtilitySpec::linear(), d);
        let (a, b) = (
            random_schedule(&mut rng, "A"),
            random_schedule(&mut rng, "B"),
        );
        let scan = val.reversal_scan(&a, &b, &shifts, 1e-9).map_err(err)?;
        ensure(scan.first_flip.is_none(), || {
            format!("pair {k} flips at {:?}", scan.first_flip)
        })?;
    }
    let fixtures: [FlipFixture; 3] = [
        (
            "hyperbolic",
            Valuation::new(
                UtilitySpec::log_shift(),
                DiscountSpec::hyperbolic(0.5).map_err(err)?,
            ),
            (1000.0, 0.0),
            (1200.0, 1.0),
            5.0,
        ),
        (
            "quasi_hyperbolic",
            Valuation::new(
                UtilitySpec::sqrt(),
                DiscountSpec::quasi_hyperbolic(0.7, 0.95).map_err(err)?,
            ),
            (100.0, 0.0),
            (120.0, 1.0),
            12.0,
        ),
        (
            "hybrid",
            Valuation::new(
                UtilitySpec::linear(),
                DiscountSpec::hybrid(
                    0.5,
                    DiscountSpec::exponential(0.5).map_err(err)?,
                    DiscountSpec::hyperbolic(1.0).map_err(err)?,
                )
                .map_err(err)?,
            ),
            (1000.0, 0.0),
            (1500.0, 1.0),
            10.0,
        ),
    ];
    for (name, val, a, b, delta) in fixtures {
        let scan = val
            .reversal_scan(
                &single("A", a.0, a.1),
                &single("B", b.0, b.1),
                &[0.0, delta],
                1e-9,
            )
            .map_err(err)?;
        ensure(scan.first_flip.is_some(), || {
            format!("{name} fixture shows no flip")
        })?;
    }
    Ok(
        "100 exponential pairs never flip; hyperbolic, quasi_hyperbolic and hybrid fixtures flip"
            .into(),
    )
}

enum GridVerdict {
    Feasible { best_objective: f64 },
    Infeasible,
    Ambiguous,
}

/// Brute-force verdict over the step-1e-3 simplex grid. Rows are normalised
/// so slack is 1-Lipschitz; a grid maximum below -0.01 rules out a feasible
/// point anywhere on the simplex.
fn grid_verdict(grid: &[Vec<f64>], objective: &[f64], rows: &[Constraint]) -> GridVerdict {
    let norms: Vec<f64> = rows
        .iter()
        .map(|c| {
            c.coeffs
                .iter()
                .map(|a| a * a)
                .sum::<f64>()
                .sqrt()
                .max(1e-300)
        })
        .collect();
    let mut best_slack = f64::NEG_INFINITY;
    let mut best_objective = f64::NEG_INFINITY;
    for p in grid {
        let mut slack = f64::INFINITY;
        for (c, n) in rows.iter().zip(&norms) {
            let s = match c.relation {
                Relation::Le => c.rhs - dot(&c.coeffs, p),
                Relation::Ge => dot(&c.coeffs, p) - c.rhs,
                Relation::Eq => -(dot(&c.coeffs, p) - c.rhs).abs(),
            };
            slack = slack.min(s / n);
        }
        best_slack = best_slack.max(slack);
        if slack >= 0.0 {
            best_objective = best_objective.max(dot(objective, p));
        }
    }
    if best_slack >= 0.0 {
        GridVerdict::Feasible { best_objective }
    } else if best_slack < -0.01 {
        GridVerdict::Infeasible
    } else {
        GridVerdict::Ambiguous
    }
}

fn corpus() -> Vec<LpProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut out = Vec::new();
    for k in 0..90 {
        let m = 1 + k % 3;
        let mut p = LpProblem::new((0..m).map(|_| rng.random_range(-1.0..1.0)).collect());
        p.push(vec![1.0; m], Relation::Eq, 1.0);
        if k % 2 == 0 {
            for _ in 0..rng.random_range(1..=3) {
                let rel = if rng.random_bool(0.5) {
                    Relation::Le
                } else {
                    Relation::Ge
                };
                p.push(
                    (0..m).map(|_| rng.random_range(-1.0..1.0)).collect(),
                    rel,
                    rng.random_range(-0.4..0.4),
                );
            }
        } else {
            // the weight polytope fit_functional searches: u-transformed
            // accepted rows >= 0 and rejected rows <= -eps
            let pick = zoo(&mut rng);
            let space = StateSpace::numbered(m).unwrap();
            for _ in 0..rng.random_range(1..=3) {
                let f = random_generator(&mut rng, &space, &pick);
                p.push(
                    fcg_core::transform(&pick.utility, &f).unwrap(),
                    Relation::Ge,
                    0.0,
                );
            }
            for _ in 0..rng.random_range(0..=2) {
                let g = random_gamble(&mut rng, &space, &pick);
                p.push(
                    fcg_core::transform(&pick.utility, &g).unwrap(),
                    Relation::Le,
                    -1e-3,
                );
            }
        }
        out.push(p);
    }
    out
}

fn outcome_bits(o: &LpOutcome) -> Vec<u64> {
    match o {
        LpOutcome::Optimal { x, value } => std::iter::once(*value)
            .chain(x.iter().copied())
            .map(f64::to_bits)
            .collect(),
        LpOutcome::Infeasible => vec![1],
        LpOutcome::Unbounded => vec![2],
    }
}

fn criterion_12() -> Outcome {
    let grids: Vec<Vec<Vec<f64>>> = (1..=3).map(|m| simplex_grid(m, 1000)).collect();
    let problems = corpus();
    let (mut matched, mut ambiguous) = (0, 0);
    let mut first_run = Vec::new();
    for (k, p) in problems.iter().enumerate() {
        let outcome = solve(p).map_err(err)?;
        first_run.push(outcome_bits(&outcome));
        let m = p.num_vars();
        let rows = &p.constraints[1..];
        match (grid_verdict(&grids[m - 1], &p.objective, rows), &outcome) {
            (GridVerdict::Ambiguous, _) => ambiguous += 1,
            (GridVerdict::Feasible { best_objective }, LpOutcome::Optimal { x, value }) => {
                for (i, c) in p.constraints.iter().enumerate() {
                    ensure(c.violation(x) <= 1e-9, || {
                        format!("problem {k}: row {i} violated")
                    })?;
                }
                ensure(x.iter().all(|&v| v >= -1e-9), || {
                    format!("problem {k}: negative x")
                })?;
                ensure(*value >= best_objective - 1e-9, || {
                    format!("problem {k}: optimum {value} below grid point {best_objective}")
                })?;
                matched += 1;
            }
            (GridVerdict::Infeasible, LpOutcome::Infeasible) => matched += 1,
            (_, got) => return Err(format!("problem {k}: grid and solver disagree ({got:?})")),
        }
    }
    for (k, p) in problems.iter().enumerate() {
        let again = outcome_bits(&solve(p).map_err(err)?);
        ensure(again == first_run[k], || {
            format!("problem {k}: second run differs")
        })?;
    }
    ensure(matched > 0, || "no unambiguous corpus problems".into())?;
    Ok(format!(
        "{matched} corpus problems match the grid ({ambiguous} within 0.01 of the boundary skipped), repeat runs bit-identical"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("hyperbolic example values and reversal", criterion_1),
        ("quasi-hyperbolic example values and reversal", criterion_2),
        ("generalized hyperbolic option values", criterion_3),
        ("state-dependent present values", criterion_4),
        ("hybrid example values and reversal", criterion_5),
        ("magnitude effect", criterion_6),
        ("acceptance agrees with the vertex oracle", criterion_7),
        ("propositions 1-4 as invariants", criterion_8),
        ("representation consistency", criterion_9),
        ("closure under limits", criterion_10),
        ("exponential control and flip fixtures", criterion_11),
        ("LP kernel against grid enumeration", criterion_12),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {title}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title}: {reason}", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
