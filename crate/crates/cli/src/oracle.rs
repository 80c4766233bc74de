//! Closed-form region against the split-rate LP on seeded term vectors.
//!
//! Vectors come from the models the region formula is meant for: Gaussian terms
//! of random scenarios and allocations of all three strategies, and the terms
//! of random finite joint distributions with the scheme's factorization.

use ccifc::dmc::scheme::random_scheme_joint;
use ccifc::dmc::{scheme_terms, SchemeAssignment};
use ccifc::rate_terms::{terms, RateTerms};
use ccifc::region::{compare_projection, corollary_region};
use ccifc::scenario::{max_relay_h, validate_allocation, DpcMode, GaussianScenario, PowerAllocation, Strategy};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::ConfigFile;
use crate::run::{CliResult, Failure, RunDir, EXIT_ORACLE};
use crate::OracleArgs;

const GRID: usize = 50;
/// Grid points this close to the closed-form boundary are not compared.
const BAND: f64 = 1e-9;

fn simplex(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n)
        .map(|_| {
            if r.gen::<f64>() < 0.25 {
                0.0
            } else {
                -(1.0 - r.gen::<f64>()).ln()
            }
        })
        .collect();
    let s: f64 = e.iter().sum();
    if s == 0.0 {
        return vec![1.0 / n as f64; n];
    }
    e.iter().map(|v| v / s).collect()
}

fn scenario(r: &mut ChaCha8Rng) -> GaussianScenario {
    GaussianScenario {
        p1: r.gen_range(0.5..10.0),
        p2: r.gen_range(0.5..10.0),
        h21: r.gen_range(0.2..4.0),
        h31: r.gen_range(0.3..1.5),
        h32: r.gen_range(-1.2..1.2),
        h41: r.gen_range(-1.2..1.2),
        h42: r.gen_range(0.3..1.5),
        n2: r.gen_range(0.0..3.0),
        n3: r.gen_range(0.3..3.0),
        n4: r.gen_range(0.3..3.0),
    }
}

fn allocation(r: &mut ChaCha8Rng, scen: &GaussianScenario, strategy: Strategy) -> PowerAllocation {
    loop {
        // One slack coordinate so the sums range over [0, 1].
        let b = simplex(r, 7);
        let g = simplex(r, 4);
        let mut betas = [b[0], b[1], b[2], b[3], b[4], b[5]];
        if strategy == Strategy::Lookahead {
            betas[2] = 0.0;
            betas[3] = 0.0;
        }
        let mut a = PowerAllocation::new(strategy, betas, [g[0], g[1], g[2]]);
        if strategy == Strategy::NoDelay {
            let beta = r.gen::<f64>();
            let hmax = max_relay_h(scen, &a.with_relay(beta, 1.0)).unwrap_or(1.0);
            a = a.with_relay(beta, hmax * r.gen_range(0.05..1.0));
        }
        if validate_allocation(&a, scen).is_valid() {
            return a;
        }
    }
}

fn draw(r: &mut ChaCha8Rng, trial: usize) -> RateTerms {
    loop {
        let t = if trial % 4 == 3 {
            let i = scheme_terms(&random_scheme_joint(r), &SchemeAssignment::identity()).expect("scheme axes");
            RateTerms::from_values(i, Strategy::Classical)
        } else {
            let strategy = Strategy::ALL[trial % 4];
            let s = scenario(r);
            let a = allocation(r, &s, strategy);
            match terms(&s, &a, DpcMode::PaperFormula) {
                Ok(t) => t,
                Err(_) => continue,
            }
        };
        if t.get(1) <= t.get(16) && t.get(2) <= t.get(17) {
            return t;
        }
    }
}

pub fn run(a: OracleArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(a.config.as_deref())?;
    let trials = a.trials.or(cfg.trials).unwrap_or(100);
    let seed = a.seed.or(cfg.seed).unwrap_or(0);
    if trials == 0 {
        return Err(Failure::config("--trials must be at least 1"));
    }
    if let Some(k) = a.corrupt_family {
        if !(1..=8).contains(&k) {
            return Err(Failure::config("--corrupt-family takes 1..8"));
        }
    }
    let key = json!({ "trials": trials, "seed": seed, "corrupt_family": a.corrupt_family });
    let mut dir = RunDir::create(a.out.or(cfg.out).as_deref(), "oracle", &key)?;

    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let (mut compared, mut worst) = (0usize, 0.0f64);
    let mut offending: Option<(usize, RateTerms, usize)> = None;
    for trial in 0..trials {
        let t = draw(&mut r, trial);
        let mut poly = corollary_region(&t);
        if let Some(k) = a.corrupt_family {
            let h = &mut poly.half_planes[k - 1];
            h.b = 0.5 * h.b - 0.01;
        }
        let check = compare_projection(&t, &poly, GRID, BAND);
        compared += check.compared;
        worst = worst.max(check.worst());
        if !check.mismatches.is_empty() && offending.is_none() {
            offending = Some((trial, t, check.mismatches.len()));
        }
    }
    let verdict = if offending.is_none() { "PASS" } else { "FAIL" };
    let summary = json!({
        "trials": trials,
        "grid": GRID,
        "points_compared": compared,
        "worst_disagreement": worst,
        "verdict": verdict,
        "first_offending": offending.as_ref().map(|(trial, t, n)| json!({ "trial": trial, "mismatches": n, "terms": t })),
    });
    dir.write(
        "oracle.json",
        &(serde_json::to_string_pretty(&summary).expect("serializes") + "\n"),
    )?;
    let manifest = dir.finish(
        "oracle",
        json!(null),
        Strategy::ALL.iter().map(|s| s.name().to_string()).collect(),
        format!("membership={GRID}x{GRID}"),
        DpcMode::PaperFormula.label(),
        Vec::new(),
        json!({ "trials": trials, "corrupt_family": a.corrupt_family, "boundary_band": BAND }),
        Some(seed),
    )?;
    println!("oracle: {trials} trials, {compared} grid points, worst disagreement {worst:e}: {verdict}");
    println!("{}", manifest.display());
    if let Some((trial, t, n)) = offending {
        println!("{}", serde_json::to_string(&t).expect("serializes"));
        return Err(Failure::new(
            EXIT_ORACLE,
            format!("trial {trial}: closed form and LP disagree at {n} grid points"),
        ));
    }
    Ok(())
}
