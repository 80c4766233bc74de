//! Comparison curves: rate splitting without cooperation, and a broadcast outer bound.

use serde::{Deserialize, Serialize};

use crate::rate_terms::theta;
use crate::region::frontier::{pareto_hull, Frontier, FrontierMeta};
use crate::region::sweep::{sweep_frontier, GridSpec, Mask};
use crate::region::RegionError;
use crate::scenario::{DpcMode, GaussianScenario, Strategy};

pub const OUTER_BOUND_TYPE: &str = "outer_sum_power_relaxation";

/// Rate splitting only: the zero look-ahead sweep with cooperation, relaying
/// and binning switched off.
pub fn hk_region(scen: &GaussianScenario, grid: &GridSpec) -> Result<Frontier, RegionError> {
    let mut f = sweep_frontier(scen, Strategy::Classical, grid, DpcMode::Zero, &Mask::han_kobayashi())?;
    f.meta.label = "hk".into();
    Ok(f)
}

/// `θ(P2/N4)`, without the direct gain.
pub fn interference_free_cap(scen: &GaussianScenario) -> f64 {
    theta(scen.p2 / scen.n4).unwrap_or(0.0)
}

/// `θ(h42² P2/N4)`.
pub fn interference_free_cap_with_gain(scen: &GaussianScenario) -> f64 {
    theta(scen.h42 * scen.h42 * scen.p2 / scen.n4).unwrap_or(0.0)
}

/// Noise-normalized channel rows of the two virtual receivers.
fn rows(scen: &GaussianScenario) -> ([f64; 2], [f64; 2]) {
    let s3 = scen.n3.sqrt();
    let s4 = scen.n4.sqrt();
    ([scen.h31 / s3, scen.h32 / s3], [scen.h41 / s4, scen.h42 / s4])
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn half_log2(x: f64) -> f64 {
    0.5 * x.log2()
}

/// Which virtual receiver's codeword is encoded first (and so sees the other as noise).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EncodingOrder {
    User3First,
    User4First,
}

/// One pair of transmit covariances of the two-antenna broadcast channel.
/// User `u` gets `[[p1, ρ√(p1 p2)], [ρ√(p1 p2), p2]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BcCovariancePoint {
    /// `(p1, p2, ρ)` for the user decoded at receiver 3.
    pub user3: (f64, f64, f64),
    /// `(p1, p2, ρ)` for the user decoded at receiver 4.
    pub user4: (f64, f64, f64),
    pub order: EncodingOrder,
}

fn quad(h: [f64; 2], (p1, p2, rho): (f64, f64, f64)) -> f64 {
    p1 * h[0] * h[0] + p2 * h[1] * h[1] + 2.0 * rho * (p1 * p2).sqrt() * h[0] * h[1]
}

impl BcCovariancePoint {
    /// `(R1, R2)` achieved with dirty-paper coding in the given order.
    pub fn rates(&self, scen: &GaussianScenario) -> (f64, f64) {
        let (h3, h4) = rows(scen);
        let s33 = quad(h3, self.user3);
        let s34 = quad(h3, self.user4);
        let s43 = quad(h4, self.user3);
        let s44 = quad(h4, self.user4);
        match self.order {
            // User 3 is encoded first and sees user 4's signal as noise; user 4 is
            // precoded against it.
            EncodingOrder::User3First => (half_log2((1.0 + s33 + s34) / (1.0 + s34)), half_log2(1.0 + s44)),
            EncodingOrder::User4First => (half_log2(1.0 + s33), half_log2((1.0 + s44 + s43) / (1.0 + s43))),
        }
    }
}

/// Dirty-paper region by direct covariance enumeration: the four antenna powers on
/// a simplex grid with `steps` divisions of `P1 + P2`, and `ρ` in 21 steps per user.
pub fn bc_covariance_region(scen: &GaussianScenario, steps: usize) -> Vec<(f64, f64)> {
    let total = scen.p1 + scen.p2;
    let steps = steps.max(1);
    let rhos: Vec<f64> = (0..21).map(|k| -1.0 + k as f64 / 10.0).collect();
    let mut out = Vec::new();
    for a in 0..=steps {
        for b in 0..=steps - a {
            for c in 0..=steps - a - b {
                let d = steps - a - b - c;
                let unit = total / steps as f64;
                let (p31, p32, p41, p42) = (a as f64 * unit, b as f64 * unit, c as f64 * unit, d as f64 * unit);
                for &r3 in &rhos {
                    for &r4 in &rhos {
                        for order in [EncodingOrder::User3First, EncodingOrder::User4First] {
                            let pt = BcCovariancePoint {
                                user3: (p31, p32, r3),
                                user4: (p41, p42, r4),
                                order,
                            };
                            out.push(pt.rates(scen));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Sum-power dirty-paper region through the dual multiple-access channel: receiver
/// powers `q3 + q4 = P1 + P2`, `q3` on `steps` divisions, both successive-decoding
/// corners of every pentagon.
pub fn bc_dpc_region(scen: &GaussianScenario, steps: usize) -> Frontier {
    let total = scen.p1 + scen.p2;
    let (h3, h4) = rows(scen);
    let (g3, g4, g34) = (dot(h3, h3), dot(h4, h4), dot(h3, h4));
    let gram = (g3 * g4 - g34 * g34).max(0.0);
    let steps = steps.max(1);
    let mut pts = vec![(0.0, 0.0)];
    for k in 0..=steps {
        let q3 = total * k as f64 / steps as f64;
        let q4 = total - q3;
        let sum = half_log2(1.0 + q3 * g3 + q4 * g4 + q3 * q4 * gram);
        let r3 = half_log2(1.0 + q3 * g3);
        let r4 = half_log2(1.0 + q4 * g4);
        pts.push((r3, (sum - r3).max(0.0)));
        pts.push(((sum - r4).max(0.0), r4));
    }
    Frontier {
        points: pareto_hull(&pts),
        meta: FrontierMeta {
            label: "outer".into(),
            scenario: format!("{:016x}", scen.digest()),
            grid: Some(format!("power_steps={steps}")),
            bound_type: Some(OUTER_BOUND_TYPE.into()),
        },
    }
}

/// Clips a frontier to `R2 <= cap`.
pub fn cap_r2(f: &Frontier, cap: f64) -> Frontier {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    if f.max_r2() > cap {
        // Point where the envelope crosses the cap.
        let w = f.points.windows(2).find(|w| w[0].1 >= cap && w[1].1 < cap);
        let cross = match w {
            Some(w) => {
                let (a, b) = (w[0], w[1]);
                (a.0 + (b.0 - a.0) * (a.1 - cap) / (a.1 - b.1), cap)
            }
            None => (f.max_r1(), cap),
        };
        pts.push(cross);
    }
    pts.extend(f.points.iter().copied().filter(|p| p.1 < cap));
    if pts.is_empty() {
        pts.push((f.max_r1(), cap.max(0.0)));
    }
    Frontier {
        points: pareto_hull(&pts),
        meta: f.meta.clone(),
    }
}

/// Power divisions of the dual-channel sweep.
pub const DEFAULT_POWER_STEPS: usize = 4000;

/// The broadcast region under total power `P1 + P2`, intersected with the
/// interference-free cap on `R2`.
pub fn mimo_bc_outer(scen: &GaussianScenario, steps: usize, cap_with_gain: bool) -> Frontier {
    let cap = if cap_with_gain {
        interference_free_cap_with_gain(scen)
    } else {
        interference_free_cap(scen)
    };
    cap_r2(&bc_dpc_region(scen, steps), cap)
}
