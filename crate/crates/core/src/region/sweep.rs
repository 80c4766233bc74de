//! Grid enumeration of allocations and the frontier sweep.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::frontier::{pareto_hull, Frontier, FrontierMeta};
use super::polytope::corollary_region;
use super::RegionError;
use crate::rate_terms::{terms, RateError};
use crate::scenario::{
    max_relay_h, validate_allocation, AllocField, DpcMode, GaussianScenario, PowerAllocation, Strategy, Validity,
};

/// Resolution of the allocation grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Points per fraction, `k / (points - 1)` for `k = 0..points`.
    pub points: usize,
    /// Points for the relay fraction `β` of the one-symbol look-ahead scheme.
    pub relay_beta_points: usize,
    /// Normalizer levels `h_max · k / relay_h_points`, plus `h = 1` when feasible.
    pub relay_h_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            points: 7,
            relay_beta_points: 7,
            relay_h_points: 3,
        }
    }
}

impl GridSpec {
    pub fn uniform(points: usize) -> Self {
        GridSpec {
            points,
            relay_beta_points: points,
            relay_h_points: 3,
        }
    }

    pub fn label(&self) -> String {
        format!(
            "points={};beta_points={};h_points={}",
            self.points, self.relay_beta_points, self.relay_h_points
        )
    }
}

/// Allocation fields pinned to fixed values during a sweep.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Mask {
    pub pinned: BTreeMap<AllocField, f64>,
}

impl Mask {
    pub fn pin(mut self, field: AllocField, value: f64) -> Self {
        self.pinned.insert(field, value);
        self
    }

    /// The restriction that turns the zero look-ahead scheme into rate splitting only.
    pub fn han_kobayashi() -> Self {
        Mask::default()
            .pin(AllocField::Bp2, 0.0)
            .pin(AllocField::B2, 0.0)
            .pin(AllocField::B3, 0.0)
            .pin(AllocField::B4, 0.0)
            .pin(AllocField::G3, 0.0)
    }

    /// Parses `field=value`.
    pub fn parse_entry(text: &str) -> Option<(AllocField, f64)> {
        let (k, v) = text.split_once('=')?;
        let field = AllocField::parse(k.trim())?;
        let value: f64 = v.trim().parse().ok()?;
        (value.is_finite() && (0.0..=1.0).contains(&value)).then_some((field, value))
    }

    pub fn label(&self) -> String {
        self.pinned
            .iter()
            .map(|(k, v)| format!("{}={v}", k.name()))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Values taken by one fraction group: all grid points with sum within budget.
fn compositions(free: usize, steps: usize, budget: usize) -> Vec<Vec<usize>> {
    fn rec(free: usize, steps: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == free {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left.min(steps) {
            cur.push(k);
            rec(free, steps, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(free, steps, budget, &mut Vec::with_capacity(free), &mut out);
    out
}

/// Grid assignments of one simplex group (`fields` share a sum-to-one budget).
fn group_values(
    fields: &[AllocField],
    pinned: &BTreeMap<AllocField, f64>,
    points: usize,
) -> Vec<Vec<(AllocField, f64)>> {
    let steps = points.saturating_sub(1).max(1);
    let fixed_sum: f64 = fields.iter().filter_map(|f| pinned.get(f)).sum();
    let free: Vec<AllocField> = fields.iter().copied().filter(|f| !pinned.contains_key(f)).collect();
    let room = ((1.0 - fixed_sum) * steps as f64 + 1e-9).floor().max(0.0) as usize;
    compositions(free.len(), steps, room)
        .into_iter()
        .map(|ks| {
            let mut v: Vec<(AllocField, f64)> = fields.iter().filter_map(|f| pinned.get(f).map(|&x| (*f, x))).collect();
            v.extend(free.iter().zip(ks).map(|(&f, k)| (f, k as f64 / steps as f64)));
            v
        })
        .collect()
}

/// Candidate normalizers for one relay allocation.
fn relay_levels(scen: &GaussianScenario, alloc: &PowerAllocation, grid: &GridSpec) -> Vec<f64> {
    match max_relay_h(scen, alloc) {
        None => vec![1.0],
        Some(hmax) => {
            let n = grid.relay_h_points.max(1);
            let mut hs: Vec<f64> = (1..=n).map(|k| hmax * k as f64 / n as f64).collect();
            if hmax >= 1.0 && !hs.contains(&1.0) {
                hs.push(1.0);
            }
            hs
        }
    }
}

/// Strategy-implied pins merged with the user mask.
fn effective_mask(strategy: Strategy, mask: &Mask) -> BTreeMap<AllocField, f64> {
    let mut pinned = mask.pinned.clone();
    if strategy == Strategy::Lookahead {
        pinned.entry(AllocField::Bp2).or_insert(0.0);
        pinned.entry(AllocField::B2).or_insert(0.0);
    }
    pinned
}

/// All grid allocations for `strategy`, before validity filtering, grouped by the
/// primary-fraction assignment (the unit of parallel work).
fn primary_groups(strategy: Strategy, grid: &GridSpec, mask: &Mask) -> Vec<Vec<(AllocField, f64)>> {
    group_values(&AllocField::PRIMARY, &effective_mask(strategy, mask), grid.points)
}

fn expand_group(
    scen: &GaussianScenario,
    strategy: Strategy,
    grid: &GridSpec,
    mask: &Mask,
    primary: &[(AllocField, f64)],
    out: &mut Vec<PowerAllocation>,
) {
    let pinned = effective_mask(strategy, mask);
    let cognitive = group_values(&AllocField::COGNITIVE, &pinned, grid.points);
    let betas: Vec<f64> = if strategy == Strategy::NoDelay {
        match pinned.get(&AllocField::RelayBeta) {
            Some(&b) => vec![b],
            None => {
                let steps = grid.relay_beta_points.saturating_sub(1).max(1);
                (0..=steps).map(|k| k as f64 / steps as f64).collect()
            }
        }
    } else {
        vec![0.0]
    };
    for cog in &cognitive {
        let mut a = PowerAllocation::zero(strategy);
        for &(f, v) in primary.iter().chain(cog.iter()) {
            a.set(f, v);
        }
        if strategy != Strategy::NoDelay {
            out.push(a);
            continue;
        }
        for &beta in &betas {
            let with_beta = a.with_relay(beta, 1.0);
            for h in relay_levels(scen, &with_beta, grid) {
                out.push(with_beta.with_relay(beta, h));
            }
        }
    }
}

/// Every valid grid allocation, in a deterministic order.
pub fn allocations(scen: &GaussianScenario, strategy: Strategy, grid: &GridSpec, mask: &Mask) -> Vec<PowerAllocation> {
    let mut out = Vec::new();
    for g in primary_groups(strategy, grid, mask) {
        expand_group(scen, strategy, grid, mask, &g, &mut out);
    }
    out.retain(|a| validate_allocation(a, scen).is_valid());
    out
}

/// Bookkeeping of one sweep.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepStats {
    pub enumerated: usize,
    pub valid: usize,
    /// Allocations skipped because some θ argument was negative.
    pub negative_theta: usize,
    pub first_negative: Option<(PowerAllocation, String)>,
    /// Allocations skipped because `I1 > I16` or `I2 > I17`.
    pub infeasible_flag: usize,
    pub contributing: usize,
}

impl SweepStats {
    fn merge(mut self, o: SweepStats) -> SweepStats {
        self.enumerated += o.enumerated;
        self.valid += o.valid;
        self.negative_theta += o.negative_theta;
        if self.first_negative.is_none() {
            self.first_negative = o.first_negative;
        }
        self.infeasible_flag += o.infeasible_flag;
        self.contributing += o.contributing;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub frontier: Frontier,
    pub stats: SweepStats,
}

fn pool() -> Option<&'static rayon::ThreadPool> {
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let n: usize = std::env::var("CCIFC_THREADS").ok()?.parse().ok()?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok()
    })
    .as_ref()
}

/// Runs `f` on the pool capped by `CCIFC_THREADS`, or the global pool.
pub fn in_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    match pool() {
        Some(p) => p.install(f),
        None => f(),
    }
}

/// Sweeps all valid grid allocations of `strategy` and returns the convex closure
/// of the union of their regions.
pub fn sweep(
    scen: &GaussianScenario,
    strategy: Strategy,
    grid: &GridSpec,
    dpc: DpcMode,
    mask: &Mask,
) -> Result<Sweep, RegionError> {
    let groups = primary_groups(strategy, grid, mask);
    let partial: Vec<(Vec<(f64, f64)>, SweepStats)> = in_pool(|| {
        groups
            .par_iter()
            .map(|g| {
                let mut allocs = Vec::new();
                expand_group(scen, strategy, grid, mask, g, &mut allocs);
                let mut stats = SweepStats {
                    enumerated: allocs.len(),
                    ..Default::default()
                };
                let mut pts = Vec::new();
                for a in &allocs {
                    if validate_allocation(a, scen) != Validity::Valid {
                        continue;
                    }
                    stats.valid += 1;
                    let t = match terms(scen, a, dpc) {
                        Ok(t) => t,
                        Err(RateError::NegativeThetaArgument { term, value }) => {
                            stats.negative_theta += 1;
                            if stats.first_negative.is_none() {
                                stats.first_negative = Some((*a, format!("{term}: {value:e}")));
                            }
                            continue;
                        }
                    };
                    let region = corollary_region(&t);
                    if !region.feasible {
                        stats.infeasible_flag += 1;
                        continue;
                    }
                    match region.vertices() {
                        Some(v) if !v.is_empty() => {
                            stats.contributing += 1;
                            pts.extend(v);
                        }
                        _ => {}
                    }
                }
                (pareto_hull(&pts), stats)
            })
            .collect()
    });
    let mut stats = SweepStats::default();
    let mut pts = Vec::new();
    for (p, s) in partial {
        pts.extend(p);
        stats = stats.merge(s);
    }
    if stats.valid == 0 || pts.is_empty() {
        return Err(RegionError::EmptyRegion);
    }
    let frontier = Frontier {
        points: pareto_hull(&pts),
        meta: FrontierMeta {
            label: strategy.name().to_string(),
            scenario: format!("{:016x}", scen.digest()),
            grid: Some(grid.label()),
            bound_type: None,
        },
    };
    Ok(Sweep { frontier, stats })
}

pub fn sweep_frontier(
    scen: &GaussianScenario,
    strategy: Strategy,
    grid: &GridSpec,
    dpc: DpcMode,
    mask: &Mask,
) -> Result<Frontier, RegionError> {
    sweep(scen, strategy, grid, dpc, mask).map(|s| s.frontier)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{figure_preset, Preset};

    #[test]
    fn default_grid_sizes() {
        let scen = figure_preset(Preset::Fig6).scenario;
        let grid = GridSpec::default();
        assert_eq!(primary_groups(Strategy::Classical, &grid, &Mask::default()).len(), 924);
        assert_eq!(primary_groups(Strategy::Lookahead, &grid, &Mask::default()).len(), 210);
        let hk = allocations(&scen, Strategy::Classical, &grid, &Mask::han_kobayashi());
        assert_eq!(hk.len(), 28 * 28);
    }

    #[test]
    fn mask_parsing() {
        assert_eq!(Mask::parse_entry("gamma3=0"), Some((AllocField::G3, 0.0)));
        assert_eq!(Mask::parse_entry("beta=0.5"), Some((AllocField::RelayBeta, 0.5)));
        assert_eq!(Mask::parse_entry("g3=2"), None);
        assert_eq!(Mask::parse_entry("nope=0"), None);
    }

    #[test]
    fn pinned_fields_stay_fixed() {
        let scen = figure_preset(Preset::Fig6).scenario;
        let mask = Mask::default().pin(AllocField::G3, 0.0).pin(AllocField::B4, 0.5);
        let all = allocations(&scen, Strategy::Classical, &GridSpec::uniform(3), &mask);
        assert!(!all.is_empty());
        assert!(all.iter().all(|a| a.g3 == 0.0 && a.b4 == 0.5));
    }

    #[test]
    fn relay_grid_includes_identity_normalizer() {
        let scen = figure_preset(Preset::Fig6).scenario;
        let all = allocations(&scen, Strategy::NoDelay, &GridSpec::uniform(3), &Mask::default());
        assert!(all.iter().any(|a| a.relay_beta == 0.0 && a.relay_h == 1.0));
        assert!(all.iter().all(|a| validate_allocation(a, &scen).is_valid()));
    }

    #[test]
    fn zero_power_sweep_is_empty() {
        let scen = GaussianScenario {
            p1: 0.0,
            p2: 0.0,
            ..figure_preset(Preset::Fig6).scenario
        };
        let r = sweep_frontier(
            &scen,
            Strategy::Classical,
            &GridSpec::uniform(3),
            DpcMode::PaperFormula,
            &Mask::default(),
        );
        assert!(matches!(r, Err(RegionError::EmptyRegion)));
    }
}
