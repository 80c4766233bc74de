//! Capacity regions of the degraded and semi-deterministic zero-delay channels,
//! evaluated as unions over gridded input families `p(t) p(x1|t) p(x2|t)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channel::{FiniteChannel, InputFamily};
use super::conditions::{check_conditions, Condition, ConditionReport};
use super::grid::{binomial, compositions, positive_weights, subsets, DmcGrid};
use super::pmf::snap;
use super::DmcError;
use crate::region::frontier::{pareto_hull, Frontier, FrontierMeta};
use crate::region::sweep::in_pool;

/// Random inputs drawn by the convenience entry points before evaluating a region.
pub const DEFAULT_CONDITION_SAMPLES: usize = 1000;
pub const DEFAULT_CONDITION_SEED: u64 = 0;

/// Refuse grids with more input families than this.
pub const MAX_FAMILIES: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    /// `R1 <= I(X1;Y2|X2,T)`, `R2 <= I(X2;Y4|X1,T)`,
    /// `R1+R2 <= min(I(X1,X2;Y3), I(X1,X2;Y4))`.
    Degraded,
    /// As `Degraded` with the sum bound `I(X1,X2;Y3)` alone.
    DegradedCor,
    /// `R1 <= H(Y2|X2,T) + I(X1;Y3|Y2,X2,T)`, other bounds as `Degraded`.
    SemiDet,
}

impl Formula {
    pub const ALL: [Formula; 3] = [Formula::Degraded, Formula::DegradedCor, Formula::SemiDet];

    pub fn name(self) -> &'static str {
        match self {
            Formula::Degraded => "degraded",
            Formula::DegradedCor => "degraded_cor",
            Formula::SemiDet => "semidet",
        }
    }

    pub fn parse(s: &str) -> Option<Formula> {
        Formula::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Conditions under which the formula is the capacity region.
    pub fn requires(self) -> &'static [Condition] {
        match self {
            Formula::Degraded => &[Condition::Degraded, Condition::StrongRx1, Condition::StrongRx2],
            Formula::DegradedCor => &[Condition::Degraded, Condition::StrongRx1, Condition::SumRateRx2],
            Formula::SemiDet => &[
                Condition::SemiDeterministic,
                Condition::StrongRx1,
                Condition::StrongRx2,
                Condition::SemiDetExtra,
            ],
        }
    }
}

/// Per-family values of every bound appearing in the three formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyBounds {
    /// `I(X1;Y2|X2,T)`.
    pub r1_degraded: f64,
    /// `H(Y2|X2,T) + I(X1;Y3|Y2,X2,T)`.
    pub r1_semidet: f64,
    /// `I(X2;Y4|X1,T)`.
    pub r2: f64,
    /// `I(X1,X2;Y3)`.
    pub sum_y3: f64,
    /// `I(X1,X2;Y4)`.
    pub sum_y4: f64,
}

impl FamilyBounds {
    /// `(R1 cap, R2 cap, sum cap)` of a formula.
    pub fn constraints(&self, f: Formula) -> (f64, f64, f64) {
        let sum = self.sum_y3.min(self.sum_y4);
        match f {
            Formula::Degraded => (self.r1_degraded, self.r2, sum),
            Formula::DegradedCor => (self.r1_degraded, self.r2, self.sum_y3),
            Formula::SemiDet => (self.r1_semidet, self.r2, sum),
        }
    }
}

/// Bounds of one family, straight from its joint table.
pub fn family_bounds(ch: &FiniteChannel, fam: &InputFamily) -> Result<FamilyBounds, DmcError> {
    let j = ch.joint(fam)?;
    let [t, x1, x2, y2, y3, y4] = [0usize, 1, 2, 3, 4, 5];
    Ok(FamilyBounds {
        r1_degraded: j.mutual_information(&[x1], &[y2], &[x2, t]),
        r1_semidet: j.conditional_entropy(&[y2], &[x2, t]) + j.mutual_information(&[x1], &[y3], &[y2, x2, t]),
        r2: j.mutual_information(&[x2], &[y4], &[x1, t]),
        sum_y3: j.mutual_information(&[x1, x2], &[y3], &[]),
        sum_y4: j.mutual_information(&[x1, x2], &[y4], &[]),
    })
}

/// One value of `T`: a product input and what it contributes to the bounds.
#[derive(Debug, Clone)]
struct Component {
    r1_degraded: f64,
    r1_semidet: f64,
    r2: f64,
    out3: Vec<f64>,
    out4: Vec<f64>,
    /// `H(Y3|X1,X2)` and `H(Y4|X1,X2)` under this component.
    noise3: f64,
    noise4: f64,
}

fn component(ch: &FiniteChannel, px1: &[f64], px2: &[f64]) -> Result<Component, DmcError> {
    let pxx: Vec<f64> = px1.iter().flat_map(|a| px2.iter().map(move |b| a * b)).collect();
    let j = ch.joint_from_inputs(&pxx)?;
    let [x1, x2, y2, y3, y4] = [1usize, 2, 3, 4, 5];
    Ok(Component {
        r1_degraded: j.mutual_information(&[x1], &[y2], &[x2]),
        r1_semidet: j.conditional_entropy(&[y2], &[x2]) + j.mutual_information(&[x1], &[y3], &[y2, x2]),
        r2: j.mutual_information(&[x2], &[y4], &[x1]),
        out3: j.marginal(&[y3]),
        out4: j.marginal(&[y4]),
        noise3: j.conditional_entropy(&[y3], &[x1, x2]),
        noise4: j.conditional_entropy(&[y4], &[x1, x2]),
    })
}

fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.log2()).sum()
}

fn mix(comps: &[&Component], w: &[f64]) -> FamilyBounds {
    let n3 = comps[0].out3.len();
    let n4 = comps[0].out4.len();
    let mut out3 = vec![0.0; n3];
    let mut out4 = vec![0.0; n4];
    let mut b = FamilyBounds {
        r1_degraded: 0.0,
        r1_semidet: 0.0,
        r2: 0.0,
        sum_y3: 0.0,
        sum_y4: 0.0,
    };
    let (mut noise3, mut noise4) = (0.0, 0.0);
    for (c, &wt) in comps.iter().zip(w) {
        b.r1_degraded += wt * c.r1_degraded;
        b.r1_semidet += wt * c.r1_semidet;
        b.r2 += wt * c.r2;
        noise3 += wt * c.noise3;
        noise4 += wt * c.noise4;
        for (o, v) in out3.iter_mut().zip(&c.out3) {
            *o += wt * v;
        }
        for (o, v) in out4.iter_mut().zip(&c.out4) {
            *o += wt * v;
        }
    }
    b.sum_y3 = snap(entropy(&out3) - noise3);
    b.sum_y4 = snap(entropy(&out4) - noise4);
    b
}

/// Pareto corners of `{R1 <= a, R2 <= b, R1 + R2 <= c}`.
fn corners((a, b, c): (f64, f64, f64)) -> [(f64, f64); 2] {
    let r1 = a.min(c);
    let r2 = b.min(c);
    [(r1, (c - r1).min(b).max(0.0)), ((c - r2).min(a).max(0.0), r2)]
}

/// Gridded components: every pair of grid points of the two input simplices.
fn components(ch: &FiniteChannel, q: usize) -> Result<Vec<Component>, DmcError> {
    let g1 = compositions(q, ch.sizes[0]);
    let g2 = compositions(q, ch.sizes[1]);
    let mut out = Vec::with_capacity(g1.len() * g2.len());
    for a in &g1 {
        for b in &g2 {
            out.push(component(ch, a, b)?);
        }
    }
    Ok(out)
}

fn family_count(m: usize, grid: &DmcGrid) -> u128 {
    (1..=grid.t_max)
        .map(|k| binomial(m, k) * binomial(grid.q.saturating_sub(1), k - 1))
        .sum()
}

fn check_grid(ch: &FiniteChannel, grid: &DmcGrid) -> Result<(), DmcError> {
    if grid.q == 0 || grid.t_max == 0 {
        return Err(DmcError::Grid("q and t_max must be positive".into()));
    }
    let m = binomial(grid.q + ch.sizes[0] - 1, ch.sizes[0] - 1) * binomial(grid.q + ch.sizes[1] - 1, ch.sizes[1] - 1);
    let n = family_count(m as usize, grid);
    if n > MAX_FAMILIES {
        return Err(DmcError::Grid(format!(
            "{n} input families exceed the limit of {MAX_FAMILIES}"
        )));
    }
    Ok(())
}

/// Every grid family: `|T| = k <= t_max` distinct components with positive
/// weights on the `1/q` grid. Repeating a component adds nothing, since merging
/// its copies gives a smaller family with the same bounds.
pub fn grid_families(ch: &FiniteChannel, grid: &DmcGrid) -> Result<Vec<InputFamily>, DmcError> {
    check_grid(ch, grid)?;
    let g1 = compositions(grid.q, ch.sizes[0]);
    let g2 = compositions(grid.q, ch.sizes[1]);
    let pairs: Vec<(&Vec<f64>, &Vec<f64>)> = g1.iter().flat_map(|a| g2.iter().map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for k in 1..=grid.t_max {
        let weights = positive_weights(grid.q, k);
        for s in subsets(pairs.len(), k) {
            for w in &weights {
                out.push(InputFamily {
                    pt: w.clone(),
                    px1: s.iter().map(|&i| pairs[i].0.clone()).collect(),
                    px2: s.iter().map(|&i| pairs[i].1.clone()).collect(),
                });
            }
        }
    }
    Ok(out)
}

/// Union over grid families of the formula's polygon, then convex closure. No
/// condition is checked.
pub fn formula_region(ch: &FiniteChannel, formula: Formula, grid: &DmcGrid) -> Result<Frontier, DmcError> {
    ch.validate()?;
    check_grid(ch, grid)?;
    let comps = components(ch, grid.q)?;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for k in 1..=grid.t_max {
        let weights = positive_weights(grid.q, k);
        if weights.is_empty() {
            continue;
        }
        let sets = subsets(comps.len(), k);
        let hulls: Vec<Vec<(f64, f64)>> = in_pool(|| {
            sets.par_chunks(2048)
                .map(|chunk| {
                    let mut local = Vec::with_capacity(chunk.len() * weights.len() * 2);
                    for s in chunk {
                        let cs: Vec<&Component> = s.iter().map(|&i| &comps[i]).collect();
                        for w in &weights {
                            local.extend(corners(mix(&cs, w).constraints(formula)));
                        }
                    }
                    pareto_hull(&local)
                })
                .collect()
        });
        pts.extend(hulls.into_iter().flatten());
        pts = pareto_hull(&pts);
    }
    Ok(Frontier {
        points: pareto_hull(&pts),
        meta: FrontierMeta {
            label: formula.name().into(),
            scenario: format!("{:016x}", ch.digest()),
            grid: Some(grid.label()),
            bound_type: None,
        },
    })
}

/// Checks the formula's conditions against `report`, then evaluates it.
pub fn capacity_with_report(
    ch: &FiniteChannel,
    formula: Formula,
    grid: &DmcGrid,
    report: &ConditionReport,
) -> Result<Frontier, DmcError> {
    report.require(formula.requires())?;
    formula_region(ch, formula, grid)
}

fn checked(ch: &FiniteChannel, formula: Formula, grid: &DmcGrid) -> Result<Frontier, DmcError> {
    let report = check_conditions(ch, DEFAULT_CONDITION_SAMPLES, DEFAULT_CONDITION_SEED)?;
    capacity_with_report(ch, formula, grid, &report)
}

pub fn capacity_degraded(ch: &FiniteChannel, grid: &DmcGrid) -> Result<Frontier, DmcError> {
    checked(ch, Formula::Degraded, grid)
}

pub fn capacity_degraded_cor(ch: &FiniteChannel, grid: &DmcGrid) -> Result<Frontier, DmcError> {
    checked(ch, Formula::DegradedCor, grid)
}

pub fn capacity_semidet(ch: &FiniteChannel, grid: &DmcGrid) -> Result<Frontier, DmcError> {
    checked(ch, Formula::SemiDet, grid)
}

/// Bounds of one family through the per-component fast path used by the region
/// evaluation.
pub fn family_bounds_fast(ch: &FiniteChannel, fam: &InputFamily) -> Result<FamilyBounds, DmcError> {
    fam.validate(ch)?;
    let comps: Vec<Component> = fam
        .px1
        .iter()
        .zip(&fam.px2)
        .map(|(a, b)| component(ch, a, b))
        .collect::<Result<_, _>>()?;
    let refs: Vec<&Component> = comps.iter().collect();
    Ok(mix(&refs, &fam.pt))
}
