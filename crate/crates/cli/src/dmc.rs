use std::fs;

use ccifc::dmc::capacity::{DEFAULT_CONDITION_SAMPLES, DEFAULT_CONDITION_SEED};
use ccifc::dmc::{capacity_with_report, check_conditions, fixtures, DmcError, DmcGrid, FiniteChannel, Formula};
use serde_json::json;

use crate::config::ConfigFile;
use crate::run::{CliResult, Failure, RunDir, EXIT_REFUSED};
use crate::DmcArgs;

pub const FIXTURES: [&str; 6] = [
    "xor",
    "zero",
    "rx1_violation",
    "degraded_noisy",
    "degraded_cor",
    "semidet_noisy",
];

fn fixture(name: &str) -> CliResult<FiniteChannel> {
    Ok(match name {
        "xor" => fixtures::noiseless_xor(),
        "zero" => fixtures::zero_capacity(),
        "rx1_violation" => fixtures::strong_rx1_violation(),
        "degraded_noisy" => fixtures::degraded_noisy(),
        "degraded_cor" => fixtures::degraded_cor(),
        "semidet_noisy" => fixtures::semidet_noisy(),
        _ => {
            return Err(Failure::config(format!(
                "unknown fixture `{name}` ({})",
                FIXTURES.join(", ")
            )))
        }
    })
}

fn failure(e: DmcError) -> Failure {
    match e {
        DmcError::ConditionFailed(_) => Failure::new(EXIT_REFUSED, e.to_string()),
        other => Failure::config(other.to_string()),
    }
}

pub fn run(a: DmcArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(a.config.as_deref())?;
    let (ch, source) = match (a.channel.or(cfg.channel), a.fixture.or(cfg.fixture)) {
        (Some(path), _) => {
            let text = fs::read_to_string(&path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
            let ch =
                FiniteChannel::from_json(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
            (ch, path.display().to_string())
        }
        (None, Some(name)) => (fixture(&name)?, format!("fixture:{name}")),
        (None, None) => return Err(Failure::config("give --channel or --fixture")),
    };
    let capacity = a.capacity.or(cfg.capacity);
    if capacity.is_some() && (a.check_only || cfg.check_only == Some(true)) {
        return Err(Failure::config("--capacity and --check-only exclude each other"));
    }
    let formula =
        match &capacity {
            Some(name) => Some(Formula::parse(name).ok_or_else(|| {
                Failure::config(format!("unknown formula `{name}` (degraded, degraded_cor, semidet)"))
            })?),
            None => None,
        };
    let defaults = DmcGrid::default();
    let grid = DmcGrid {
        q: a.q.or(cfg.q).unwrap_or(defaults.q),
        t_max: a.t_max.or(cfg.t_max).unwrap_or(defaults.t_max),
    };
    let samples = a.samples.or(cfg.samples).unwrap_or(DEFAULT_CONDITION_SAMPLES);
    let seed = a.seed.or(cfg.seed).unwrap_or(DEFAULT_CONDITION_SEED);
    if samples == 0 {
        return Err(Failure::config("--samples must be at least 1"));
    }
    let digest = format!("{:016x}", ch.digest());
    let key = json!({ "channel": digest, "formula": capacity, "grid": grid.label(), "samples": samples, "seed": seed });
    let mut dir = RunDir::create(a.out.or(cfg.out).as_deref(), "dmc", &key)?;
    dir.write("channel.json", &(ch.to_json() + "\n"))?;

    let report = check_conditions(&ch, samples, seed).map_err(failure)?;
    let report_json = serde_json::to_string_pretty(&report).expect("serializes") + "\n";
    dir.write("conditions.json", &report_json)?;
    print!("{}", report_text(&report));

    let outcome = formula.map(|f| capacity_with_report(&ch, f, &grid, &report));
    if let Some(Ok(frontier)) = &outcome {
        let path = dir.write("frontier.csv", &frontier.to_csv())?;
        println!("{}", path.display());
    }
    let manifest = dir.finish(
        "dmc",
        json!({ "source": source, "digest": digest, "sizes": ch.sizes }),
        capacity.iter().cloned().collect(),
        grid.label(),
        "n/a".into(),
        Vec::new(),
        json!({ "condition_samples": samples }),
        Some(seed),
    )?;
    println!("{}", manifest.display());
    match outcome {
        Some(Err(e)) => Err(failure(e)),
        _ => Ok(()),
    }
}

fn report_text(r: &ccifc::dmc::ConditionReport) -> String {
    let yes = |b: bool| if b { "holds" } else { "fails" };
    let mut s = format!(
        "degraded: {}\nsemi-deterministic: {}\n",
        yes(r.degraded),
        yes(r.semidet)
    );
    for (name, c) in [
        ("strong_rx1", &r.strong_rx1),
        ("strong_rx2", &r.strong_rx2),
        ("sum_rate_rx2", &r.sum_rate_rx2),
        ("semidet_extra", &r.semidet_extra),
    ] {
        s.push_str(&format!("{name}: {}\n", c.verdict()));
    }
    s
}
