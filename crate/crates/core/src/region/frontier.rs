//! Convex closure of rate-pair clouds, dominance tests and CSV export.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::RegionError;

/// Points closer than this in both coordinates are merged.
const MERGE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FrontierMeta {
    /// Curve label, written to the `strategy` CSV column.
    pub label: String,
    /// Scenario tag, written to the `scenario` CSV column.
    pub scenario: String,
    pub grid: Option<String>,
    /// Extra `bound_type` column for outer bounds.
    pub bound_type: Option<String>,
}

/// Pareto boundary of a down-closed convex region in the nonnegative quadrant.
///
/// `points` are the hull vertices, sorted by strictly increasing `R1` and strictly
/// decreasing `R2`. The region is the set of pairs dominated by some convex
/// combination of the points; the axis anchors `(0, R2max)` and `(R1max, 0)` are
/// implied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frontier {
    pub points: Vec<(f64, f64)>,
    pub meta: FrontierMeta,
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Upper-right Pareto chain of the convex hull of `points` and their axis projections.
pub(crate) fn pareto_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    if points.is_empty() {
        return Vec::new();
    }
    let r1max = points.iter().map(|p| p.0).fold(0.0_f64, f64::max);
    let r2max = points.iter().map(|p| p.1).fold(0.0_f64, f64::max);
    let mut pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.max(0.0), y.max(0.0))).collect();
    pts.push((0.0, r2max));
    pts.push((r1max, 0.0));
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();

    // Upper hull, left to right (Andrew's monotone chain); collinear points dropped.
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) >= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    // The chain runs from (0, r2max) and descends; keep the strictly Pareto part.
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(upper.len());
    for p in upper {
        while let Some(&last) = out.last() {
            if p.1 >= last.1 - MERGE_EPS {
                out.pop();
            } else {
                break;
            }
        }
        if let Some(&last) = out.last() {
            if p.0 <= last.0 + MERGE_EPS {
                continue;
            }
        }
        out.push(p);
    }
    out
}

/// Convex closure of a point cloud.
pub fn convex_closure(points: &[(f64, f64)]) -> Result<Frontier, RegionError> {
    if points.is_empty() {
        return Err(RegionError::EmptyInput);
    }
    Ok(Frontier {
        points: pareto_hull(points),
        meta: FrontierMeta::default(),
    })
}

impl Frontier {
    pub fn with_meta(mut self, meta: FrontierMeta) -> Self {
        self.meta = meta;
        self
    }

    /// Largest `R1` (at `R2 = 0`) and largest `R2` (at `R1 = 0`).
    pub fn anchors(&self) -> ((f64, f64), (f64, f64)) {
        let r1 = self.points.last().map_or(0.0, |p| p.0);
        let r2 = self.points.first().map_or(0.0, |p| p.1);
        ((r1, 0.0), (0.0, r2))
    }

    pub fn max_r1(&self) -> f64 {
        self.anchors().0 .0
    }

    pub fn max_r2(&self) -> f64 {
        self.anchors().1 .1
    }

    /// Largest `R2` achievable together with `r1`, or `None` past the `R1` extent.
    pub fn upper_envelope(&self, r1: f64) -> Option<f64> {
        let pts = &self.points;
        let first = *pts.first()?;
        let last = *pts.last()?;
        if r1 > last.0 {
            return None;
        }
        if r1 <= first.0 {
            return Some(first.1);
        }
        let k = pts.partition_point(|p| p.0 <= r1);
        let (a, b) = (pts[k - 1], pts[k.min(pts.len() - 1)]);
        if a.0 == r1 || k == pts.len() {
            return Some(a.1);
        }
        Some(a.1 + (b.1 - a.1) * (r1 - a.0) / (b.0 - a.0))
    }

    /// Is `(r1, r2)` within `tol` (per coordinate) of the region?
    pub fn contains(&self, r1: f64, r2: f64, tol: f64) -> bool {
        let q1 = (r1 - tol).max(0.0);
        let q2 = (r2 - tol).max(0.0);
        match self.upper_envelope(q1) {
            Some(u) => q2 <= u,
            None => false,
        }
    }

    /// CSV with header `R1,R2,strategy,scenario` (plus `bound_type` for outer bounds).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("R1,R2,strategy,scenario");
        if self.meta.bound_type.is_some() {
            s.push_str(",bound_type");
        }
        s.push('\n');
        for &(x, y) in &self.points {
            let _ = write!(s, "{},{},{},{}", sig9(x), sig9(y), self.meta.label, self.meta.scenario);
            if let Some(b) = &self.meta.bound_type {
                let _ = write!(s, ",{b}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Frontier, RegionError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| RegionError::Csv("empty file".into()))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 4 || cols[..4] != ["R1", "R2", "strategy", "scenario"] {
            return Err(RegionError::Csv(format!("unexpected header `{header}`")));
        }
        let has_bound = cols.get(4) == Some(&"bound_type");
        let mut meta = FrontierMeta::default();
        let mut points = Vec::new();
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != cols.len() {
                return Err(RegionError::Csv(format!(
                    "line {}: expected {} fields",
                    n + 2,
                    cols.len()
                )));
            }
            let parse = |v: &str| {
                v.parse::<f64>()
                    .map_err(|e| RegionError::Csv(format!("line {}: {e}", n + 2)))
            };
            points.push((parse(f[0])?, parse(f[1])?));
            meta.label = f[2].to_string();
            meta.scenario = f[3].to_string();
            if has_bound {
                meta.bound_type = Some(f[4].to_string());
            }
        }
        Ok(Frontier { points, meta })
    }
}

/// Decimal rendering with nine significant digits.
pub fn sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // Rounding can carry into a new leading digit (9.9999999995 -> 10.00000000).
    let trimmed_digits = s
        .chars()
        .filter(|c| c.is_ascii_digit())
        .skip_while(|&c| c == '0')
        .count();
    if trimmed_digits > 9 && decimals > 0 {
        let d = decimals - 1;
        format!("{v:.d$}")
    } else {
        s
    }
}

/// Every vertex of `b` lies in the region of `a` up to `tol`.
pub fn region_dominates(a: &Frontier, b: &Frontier, tol: f64) -> bool {
    b.points.iter().all(|&(x, y)| a.contains(x, y, tol))
}

/// Largest amount by which a vertex of `b` sticks out of `a` (0 when dominated),
/// measured as the smallest uniform per-coordinate shift that brings it inside.
pub fn dominance_gap(a: &Frontier, b: &Frontier) -> f64 {
    let mut worst: f64 = 0.0;
    for &(x, y) in &b.points {
        if a.contains(x, y, 0.0) {
            continue;
        }
        let (mut lo, mut hi) = (0.0_f64, x.max(y));
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if a.contains(x, y, mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        worst = worst.max(hi);
    }
    worst
}
