//! Split-rate polytope of the block-Markov scheme and a small dense phase-1
//! simplex deciding whether a rate pair lies in its projection.

use serde::{Deserialize, Serialize};

use super::polytope::RegionPolytope;
use crate::rate_terms::RateTerms;
use crate::scenario::Strategy;

/// Feasibility threshold on the phase-1 objective (sum of artificial variables).
pub const LP_TOL: f64 = 1e-9;
const PIVOT_EPS: f64 = 1e-12;

/// Column order of the split-rate variables.
pub const VARIABLES: [&str; 8] = ["R1cd", "R1cn", "R1pd", "R1pn", "R2c", "R2p", "L2c", "L2p"];
const R1CD: usize = 0;
const R1CN: usize = 1;
const R1PD: usize = 2;
const R1PN: usize = 3;
const R2C: usize = 4;
const R2P: usize = 5;
const L2C: usize = 6;
const L2P: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Which decoding constraints at the cognitive transmitter close the system.
/// Both variants share one coefficient pattern; the look-ahead terms already carry
/// their own `I20`, `I21`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpVariant {
    Classical,
    Lookahead,
}

/// One row per term: `(term index, sense, variables with unit coefficient)`.
const SYSTEM: [(usize, Sense, &[usize]); 21] = [
    (1, Sense::Ge, &[L2C]),
    (2, Sense::Ge, &[L2P]),
    (3, Sense::Ge, &[L2C, L2P]),
    (4, Sense::Le, &[R1PN]),
    (5, Sense::Le, &[R1CD, R1CN, R1PD, R1PN, L2C, R2C]),
    (6, Sense::Le, &[R1CN, R1PD, R1PN]),
    (7, Sense::Le, &[R1PD, R1PN]),
    (8, Sense::Le, &[R1PD, R1PN, L2C, R2C]),
    (9, Sense::Le, &[R1CN, R1PN]),
    (10, Sense::Le, &[R1PN, L2C, R2C]),
    (11, Sense::Le, &[R1CN, R1PD, R1PN, L2C, R2C]),
    (12, Sense::Le, &[R1CN, R1PN, L2C, R2C]),
    (13, Sense::Le, &[L2C, R2C]),
    (14, Sense::Le, &[L2P, R2P]),
    (15, Sense::Le, &[R1CD, R1CN, L2C, R2C, L2P, R2P]),
    (16, Sense::Le, &[R1CN, L2C, R2C]),
    (17, Sense::Le, &[R1CN, L2P, R2P]),
    (18, Sense::Le, &[R1CN, L2C, R2C, L2P, R2P]),
    (19, Sense::Le, &[L2C, R2C, L2P, R2P]),
    (20, Sense::Le, &[R1PD]),
    (21, Sense::Le, &[R1CD, R1PD]),
];

/// The linear system in the eight split-rate variables for fixed `(R1, R2)`.
#[derive(Debug, Clone)]
pub struct SplitRatePolytope {
    pub rows: Vec<Row>,
}

impl SplitRatePolytope {
    pub fn new(t: &RateTerms, r1: f64, r2: f64) -> Self {
        let mut rows = Vec::with_capacity(23);
        for (k, sense, vars) in SYSTEM {
            let mut coeffs = vec![0.0; 8];
            for &v in vars {
                coeffs[v] = 1.0;
            }
            rows.push(Row {
                coeffs,
                sense,
                rhs: t.get(k),
            });
        }
        rows.push(Row {
            coeffs: vec![1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
            sense: Sense::Eq,
            rhs: r1,
        });
        rows.push(Row {
            coeffs: vec![0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0],
            sense: Sense::Eq,
            rhs: r2,
        });
        SplitRatePolytope { rows }
    }
}

/// Is `(r1, r2)` in the projection of the split-rate polytope?
pub fn lp_project(t: &RateTerms, _variant: LpVariant, r1: f64, r2: f64) -> bool {
    let poly = SplitRatePolytope::new(t, r1, r2);
    phase_one_infeasibility(&poly.rows, 8) <= LP_TOL
}

/// Outcome of comparing a closed-form region with the LP on a membership grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionCheck {
    pub compared: usize,
    /// Grid points where the two disagree, with the closed-form margin there.
    pub mismatches: Vec<(f64, f64, f64)>,
}

impl ProjectionCheck {
    /// Largest `|margin|` over the mismatches (how far from the closed-form boundary).
    pub fn worst(&self) -> f64 {
        self.mismatches.iter().map(|m| m.2.abs()).fold(0.0, f64::max)
    }
}

/// Membership of `poly` against `lp_project(t)` on an `n x n` grid over
/// `[0, 1.2 max]^2`. Points within `band` of the closed-form boundary are skipped.
pub fn compare_projection(t: &RateTerms, poly: &RegionPolytope, n: usize, band: f64) -> ProjectionCheck {
    let (e1, e2) = poly.extent();
    let span = |e: f64| 1.2 * if e.is_finite() { e.max(0.01) } else { 1.0 };
    let (m1, m2) = (span(e1), span(e2));
    let variant = match t.provenance {
        Strategy::Lookahead => LpVariant::Lookahead,
        _ => LpVariant::Classical,
    };
    let step = |m: f64, k: usize| if n > 1 { m * k as f64 / (n - 1) as f64 } else { 0.0 };
    let mut out = ProjectionCheck {
        compared: 0,
        mismatches: Vec::new(),
    };
    for a in 0..n {
        for b in 0..n {
            let (r1, r2) = (step(m1, a), step(m2, b));
            let margin = poly
                .half_planes
                .iter()
                .map(|h| h.slack(r1, r2))
                .fold(f64::INFINITY, f64::min);
            if poly.feasible && margin.abs() < band {
                continue;
            }
            out.compared += 1;
            let closed = poly.feasible && margin >= 0.0;
            if closed != lp_project(t, variant, r1, r2) {
                out.mismatches.push((r1, r2, margin));
            }
        }
    }
    out
}

/// Minimum total artificial mass needed to satisfy `rows` with `x >= 0`; zero
/// (up to rounding) iff the system is feasible. Rows whose right-hand side is
/// `+∞` (`Le`) or `-∞` (`Ge`) are vacuous and dropped.
pub fn phase_one_infeasibility(rows: &[Row], n: usize) -> f64 {
    // Normalize to nonnegative right-hand sides.
    let mut norm: Vec<(Vec<f64>, Sense, f64)> = Vec::with_capacity(rows.len());
    for r in rows {
        let vacuous = match r.sense {
            Sense::Le => r.rhs == f64::INFINITY,
            Sense::Ge => r.rhs == f64::NEG_INFINITY,
            Sense::Eq => false,
        };
        if vacuous {
            continue;
        }
        if !r.rhs.is_finite() {
            return f64::INFINITY;
        }
        if r.rhs < 0.0 {
            let sense = match r.sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
            norm.push((r.coeffs.iter().map(|c| -c).collect(), sense, -r.rhs));
        } else {
            norm.push((r.coeffs.clone(), r.sense, r.rhs));
        }
    }
    let m = norm.len();
    let n_slack = norm.iter().filter(|r| r.1 != Sense::Eq).count();
    let n_art = norm.iter().filter(|r| r.1 != Sense::Le).count();
    let cols = n + n_slack + n_art;
    let width = cols + 1;
    let mut tab = vec![0.0; (m + 1) * width];
    let mut basis = vec![0usize; m];
    let mut is_art = vec![false; cols];
    let (mut s_idx, mut a_idx) = (n, n + n_slack);
    for (i, (coeffs, sense, rhs)) in norm.iter().enumerate() {
        let row = &mut tab[i * width..(i + 1) * width];
        row[..n].copy_from_slice(coeffs);
        row[cols] = *rhs;
        match sense {
            Sense::Le => {
                row[s_idx] = 1.0;
                basis[i] = s_idx;
                s_idx += 1;
            }
            Sense::Ge => {
                row[s_idx] = -1.0;
                s_idx += 1;
                row[a_idx] = 1.0;
                is_art[a_idx] = true;
                basis[i] = a_idx;
                a_idx += 1;
            }
            Sense::Eq => {
                row[a_idx] = 1.0;
                is_art[a_idx] = true;
                basis[i] = a_idx;
                a_idx += 1;
            }
        }
    }
    // Objective row holds reduced costs of min Σ artificials: c_j - Σ_{art rows} a_ij.
    {
        let obj = m * width;
        for j in 0..width {
            let mut v = if j < cols && is_art[j] { 1.0 } else { 0.0 };
            for i in 0..m {
                if is_art[basis[i]] {
                    v -= tab[i * width + j];
                }
            }
            tab[obj + j] = v;
        }
    }
    // Bland's rule: smallest entering index with negative reduced cost, smallest
    // leaving basis index among ratio ties. Terminates without cycling.
    let max_iter = 50 * (m + cols);
    for _ in 0..max_iter {
        let obj = m * width;
        let entering = (0..cols).find(|&j| tab[obj + j] < -PIVOT_EPS);
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = tab[i * width + e];
            if a > PIVOT_EPS {
                let q = tab[i * width + cols] / a;
                match leave {
                    None => leave = Some((i, q)),
                    Some((li, lq)) => {
                        if q < lq - 1e-15 || (q <= lq + 1e-15 && basis[i] < basis[li]) {
                            leave = Some((i, q));
                        }
                    }
                }
            }
        }
        let Some((l, _)) = leave else {
            // Unbounded direction in phase one cannot occur (objective bounded below by 0).
            break;
        };
        pivot(&mut tab, width, m + 1, l, e);
        basis[l] = e;
    }
    -tab[m * width + cols]
}

fn pivot(tab: &mut [f64], width: usize, rows: usize, l: usize, e: usize) {
    let p = tab[l * width + e];
    for j in 0..width {
        tab[l * width + j] /= p;
    }
    tab[l * width + e] = 1.0;
    for i in 0..rows {
        if i == l {
            continue;
        }
        let f = tab[i * width + e];
        if f != 0.0 {
            for j in 0..width {
                tab[i * width + j] -= f * tab[l * width + j];
            }
            tab[i * width + e] = 0.0;
        }
    }
}
