//! Figure bundles. The dominance report is derived from the CSV files written
//! here, read back from disk, not from the frontiers in memory.

use std::collections::BTreeMap;

use ccifc::baselines::{hk_region, mimo_bc_outer, DEFAULT_POWER_STEPS};
use ccifc::region::{dominance_gap, sweep_frontier, Frontier, GridSpec, Mask, RegionError};
use ccifc::scenario::{figure_preset, DpcMode, PresetSpec, PresetSweep, Strategy};
use serde_json::json;

use crate::config::{grid_spec, parse_preset, ConfigFile};
use crate::run::{CliResult, Failure, RunDir, EXIT_DOMINANCE, EXIT_EMPTY_REGION};
use crate::FigureArgs;

/// Dominance slack for claims read back from CSV files (nine significant digits).
const REPORT_TOL: f64 = 1e-6;

/// One curve of the bundle: its file and the sweep value it belongs to.
struct Curve {
    file: String,
    kind: Kind,
    sweep: Option<f64>,
}

#[derive(Clone, PartialEq)]
enum Kind {
    Strategy(Strategy),
    /// `restricts` is true when the variant only pins allocation fields, so its
    /// region is a subset of the full strategy's by construction.
    Ablation {
        of: Strategy,
        label: String,
        restricts: bool,
    },
    Hk,
    Outer,
}

fn suffix(spec: &PresetSpec, v: Option<f64>) -> String {
    match (&spec.sweep, v) {
        (Some(PresetSweep::H21(_)), Some(v)) => format!("-h21-{v}"),
        (Some(PresetSweep::N2(_)), Some(v)) => format!("-n2-{v}"),
        _ => String::new(),
    }
}

fn empty(e: RegionError) -> Failure {
    Failure::new(EXIT_EMPTY_REGION, e.to_string())
}

fn compute(spec: &PresetSpec, grid: &GridSpec, cap_with_gain: bool, dir: &mut RunDir) -> CliResult<Vec<Curve>> {
    let mut curves = Vec::new();
    for (v, scen) in spec.scenarios() {
        let sfx = suffix(spec, v);
        let mut emit = |kind: Kind, name: String, f: Frontier| -> CliResult<()> {
            let file = format!("{name}{sfx}.csv");
            dir.write(&file, &f.to_csv())?;
            curves.push(Curve { file, kind, sweep: v });
            Ok(())
        };
        for &s in &spec.strategies {
            let f = sweep_frontier(&scen, s, grid, DpcMode::PaperFormula, &Mask::default()).map_err(empty)?;
            emit(Kind::Strategy(s), s.name().to_string(), f)?;
        }
        for ab in &spec.ablations {
            // The unrestricted variant is the strategy curve itself.
            if ab.pinned.is_empty() && ab.dpc == DpcMode::PaperFormula {
                continue;
            }
            let mask = ab.pinned.iter().fold(Mask::default(), |m, &(k, x)| m.pin(k, x));
            let mut f = sweep_frontier(&scen, ab.strategy, grid, ab.dpc, &mask).map_err(empty)?;
            f.meta.label = ab.label.clone();
            let kind = Kind::Ablation {
                of: ab.strategy,
                label: ab.label.clone(),
                restricts: ab.dpc == DpcMode::PaperFormula,
            };
            emit(kind, format!("ablation-{}", ab.label), f)?;
        }
        if spec.include_hk {
            emit(Kind::Hk, "hk".into(), hk_region(&scen, grid).map_err(empty)?)?;
        }
        if spec.include_outer {
            emit(
                Kind::Outer,
                "outer".into(),
                mimo_bc_outer(&scen, DEFAULT_POWER_STEPS, cap_with_gain),
            )?;
        }
    }
    Ok(curves)
}

struct Claims {
    lines: Vec<String>,
    failed: usize,
}

impl Claims {
    /// `outer` contains `inner`, checked on the frontiers as read from disk.
    fn contains(&mut self, files: &BTreeMap<String, Frontier>, outer: &str, inner: &str) {
        let gap = dominance_gap(&files[outer], &files[inner]);
        let ok = gap <= REPORT_TOL;
        self.failed += !ok as usize;
        self.lines.push(format!(
            "{} {outer} contains {inner} (gap {gap:.3e})",
            if ok { "PASS" } else { "FAIL" }
        ));
    }

    /// Other DPC coefficients are not nested with the default ones; only reported.
    fn info(&mut self, files: &BTreeMap<String, Frontier>, outer: &str, inner: &str) {
        let gap = dominance_gap(&files[outer], &files[inner]);
        self.lines
            .push(format!("INFO {inner} outside {outer} by at most {gap:.3e}"));
    }

    fn same(&mut self, files: &BTreeMap<String, Frontier>, a: &str, b: &str) {
        let ok = files[a].points == files[b].points;
        self.failed += !ok as usize;
        self.lines
            .push(format!("{} {a} identical to {b}", if ok { "PASS" } else { "FAIL" }));
    }
}

fn report(spec: &PresetSpec, curves: &[Curve], dir: &RunDir) -> CliResult<Claims> {
    let mut files = BTreeMap::new();
    for c in curves {
        let f = Frontier::from_csv(&dir.read(&c.file)?).map_err(|e| Failure::config(format!("{}: {e}", c.file)))?;
        files.insert(c.file.clone(), f);
    }
    let mut claims = Claims {
        lines: Vec::new(),
        failed: 0,
    };
    let mut sweeps: Vec<Option<f64>> = curves.iter().map(|c| c.sweep).collect();
    sweeps.dedup();
    for v in &sweeps {
        let group: Vec<&Curve> = curves.iter().filter(|c| c.sweep == *v).collect();
        let find = |k: &Kind| group.iter().find(|c| c.kind == *k).map(|c| c.file.as_str());
        let hk = find(&Kind::Hk);
        let outer = find(&Kind::Outer);
        for c in &group {
            match &c.kind {
                Kind::Strategy(_) => {
                    if let Some(hk) = hk {
                        claims.contains(&files, &c.file, hk);
                    }
                }
                Kind::Ablation { of, restricts, .. } => {
                    if let Some(full) = find(&Kind::Strategy(*of)) {
                        if *restricts {
                            claims.contains(&files, full, &c.file);
                        } else {
                            claims.info(&files, full, &c.file);
                        }
                    }
                }
                _ => {}
            }
            if let Some(outer) = outer {
                if c.kind != Kind::Outer {
                    claims.contains(&files, outer, &c.file);
                }
            }
        }
        if let (Some(cl), Some(nd)) = (
            find(&Kind::Strategy(Strategy::Classical)),
            find(&Kind::Strategy(Strategy::NoDelay)),
        ) {
            claims.contains(&files, nd, cl);
        }
    }
    // Less noise at the cognitive receiver never hurts look-ahead decoding, and
    // the rate-splitting baseline does not see that receiver at all.
    if let Some(PresetSweep::N2(_)) = &spec.sweep {
        let of = |k: Kind| -> Vec<&str> {
            sweeps
                .iter()
                .filter_map(|v| {
                    curves
                        .iter()
                        .find(|c| c.sweep == *v && c.kind == k)
                        .map(|c| c.file.as_str())
                })
                .collect()
        };
        for w in of(Kind::Strategy(Strategy::Lookahead)).windows(2) {
            claims.contains(&files, w[1], w[0]);
        }
        for w in of(Kind::Hk).windows(2) {
            claims.same(&files, w[0], w[1]);
        }
    }
    Ok(claims)
}

const PLOT_STUB: &str = r#"# Plots every frontier CSV in this directory. Needs matplotlib.
import csv, glob, os
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
for path in sorted(glob.glob(os.path.join(here, "*.csv"))):
    with open(path) as f:
        rows = list(csv.DictReader(f))
    r1 = [0.0] + [float(r["R1"]) for r in rows]
    r2 = [float(rows[0]["R2"])] + [float(r["R2"]) for r in rows]
    r1.append(r1[-1]); r2.append(0.0)
    plt.plot(r1, r2, label=os.path.basename(path)[:-4])
plt.xlabel("R1 (bits/use)")
plt.ylabel("R2 (bits/use)")
plt.legend(fontsize="small")
plt.savefig(os.path.join(here, "figure.png"), dpi=150)
"#;

pub fn run(a: FigureArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(a.config.as_deref())?;
    let name = a
        .name
        .or(cfg.figure)
        .ok_or_else(|| Failure::config("give a figure name"))?;
    let preset = parse_preset(&name)?;
    let grid = grid_spec(a.grid.or(cfg.grid))?;
    let cap_with_gain = a.cap_with_gain || cfg.cap_with_gain.unwrap_or(false);
    let spec = figure_preset(preset);
    let key = json!({ "figure": name, "grid": grid.label(), "cap_with_gain": cap_with_gain });
    let mut dir = RunDir::create(a.out.or(cfg.out).as_deref(), "figure", &key)?;

    let curves = compute(&spec, &grid, cap_with_gain, &mut dir)?;
    let claims = report(&spec, &curves, &dir)?;
    let verdict = if claims.failed == 0 { "PASS" } else { "FAIL" };
    let text = format!(
        "figure {name}: {} curves, {} claims, {} failed: {verdict}\n{}\n",
        curves.len(),
        claims.lines.len(),
        claims.failed,
        claims.lines.join("\n")
    );
    dir.write("report.txt", &text)?;
    dir.write("plot.py", PLOT_STUB)?;

    let mut strategies: Vec<String> = spec.strategies.iter().map(|s| s.name().to_string()).collect();
    for ab in &spec.ablations {
        if !strategies.contains(&ab.label) {
            strategies.push(ab.label.clone());
        }
    }
    if spec.include_hk {
        strategies.push("hk".into());
    }
    if spec.include_outer {
        strategies.push("outer".into());
    }
    let sweep = match &spec.sweep {
        Some(PresetSweep::H21(v)) => json!({ "h21": v }),
        Some(PresetSweep::N2(v)) => json!({ "N2": v }),
        None => json!(null),
    };
    let scen = spec.scenario;
    let manifest = dir.finish(
        "figure",
        json!({ "preset": name, "parameters": scen, "digest": format!("{:016x}", scen.digest()) }),
        strategies,
        grid.label(),
        DpcMode::PaperFormula.label(),
        Vec::new(),
        json!({ "sweep": sweep, "cap_with_gain": cap_with_gain, "report_tol": REPORT_TOL }),
        None,
    )?;
    print!("{text}");
    println!("{}", manifest.display());
    if claims.failed > 0 {
        return Err(Failure::new(
            EXIT_DOMINANCE,
            format!("{} dominance claims failed", claims.failed),
        ));
    }
    Ok(())
}
