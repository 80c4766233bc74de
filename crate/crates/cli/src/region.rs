use ccifc::baselines::{hk_region, mimo_bc_outer, DEFAULT_POWER_STEPS};
use ccifc::region::{sweep, RegionError};
use ccifc::scenario::{DpcMode, Strategy};
use serde_json::json;

use crate::config::{grid_spec, parse_dpc, parse_masks, resolve_scenario, ConfigFile};
use crate::run::{CliResult, Failure, RunDir, EXIT_EMPTY_REGION};
use crate::RegionArgs;

fn parse_strategy(name: &str) -> CliResult<Option<Strategy>> {
    match name {
        "hk" | "outer" => Ok(None),
        _ => Strategy::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .map(Some)
            .ok_or_else(|| {
                Failure::config(format!(
                    "unknown strategy `{name}` (classical, nodelay, lookahead, hk, outer)"
                ))
            }),
    }
}

pub fn run(a: RegionArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(a.config.as_deref())?;
    let preset = a.preset.or(cfg.preset);
    let scen = resolve_scenario(
        preset.as_deref(),
        a.scenario.or(cfg.scenario).as_deref(),
        a.h21.or(cfg.h21),
        a.n2.or(cfg.n2),
    )?;
    let strategy_name = a.strategy.or(cfg.strategy).unwrap_or_else(|| "classical".into());
    let strategy = parse_strategy(&strategy_name)?;
    let points = a.grid.or(cfg.grid);
    let grid = grid_spec(points)?;
    let dpc_text = a.dpc.or(cfg.dpc);
    let dpc = match &dpc_text {
        Some(t) => parse_dpc(t)?,
        None => DpcMode::PaperFormula,
    };
    let mask_entries = if a.masks.is_empty() { cfg.masks } else { a.masks };
    let mask = parse_masks(&mask_entries)?;
    let cap_with_gain = a.cap_with_gain || cfg.cap_with_gain.unwrap_or(false);

    if strategy.is_none() && (!mask_entries.is_empty() || dpc_text.is_some()) {
        return Err(Failure::config(format!(
            "--mask and --dpc do not apply to `{strategy_name}`"
        )));
    }
    let key = json!({
        "scenario": scen, "strategy": strategy_name, "grid": grid.label(), "dpc": dpc.label(),
        "masks": mask.label(), "cap_with_gain": cap_with_gain,
    });
    let (frontier, stats, grid_label, dpc_label) = match (strategy, strategy_name.as_str()) {
        (Some(s), _) => {
            let sw = sweep(&scen, s, &grid, dpc, &mask).map_err(empty)?;
            (sw.frontier, Some(sw.stats), grid.label(), dpc.label())
        }
        (None, "hk") => {
            let f = hk_region(&scen, &grid).map_err(empty)?;
            (f, None, grid.label(), DpcMode::Zero.label())
        }
        _ => {
            let f = mimo_bc_outer(&scen, DEFAULT_POWER_STEPS, cap_with_gain);
            (f, None, format!("power_steps={DEFAULT_POWER_STEPS}"), "n/a".into())
        }
    };

    let mut dir = RunDir::create(a.out.or(cfg.out).as_deref(), "region", &key)?;
    let csv = dir.write("frontier.csv", &frontier.to_csv())?;
    let params = json!({
        "preset": preset,
        "h21": scen.h21,
        "n2": scen.n2,
        "cap_with_gain": cap_with_gain,
        "sweep_stats": stats.as_ref().map(|s| json!({
            "enumerated": s.enumerated, "valid": s.valid, "negative_theta": s.negative_theta,
            "infeasible_flag": s.infeasible_flag, "contributing": s.contributing,
        })),
    });
    let manifest = dir.finish(
        "region",
        json!({ "parameters": scen, "digest": format!("{:016x}", scen.digest()) }),
        vec![strategy_name],
        grid_label,
        dpc_label,
        mask_entries,
        params,
        None,
    )?;
    println!("{}", csv.display());
    println!("{}", manifest.display());
    Ok(())
}

fn empty(e: RegionError) -> Failure {
    match e {
        RegionError::EmptyRegion => Failure::new(EXIT_EMPTY_REGION, e.to_string()),
        other => Failure::config(other.to_string()),
    }
}
