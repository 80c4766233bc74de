//! Closed-form projection of the split-rate polytope onto `(R1, R2)`.

use serde::{Deserialize, Serialize};

use crate::rate_terms::RateTerms;

/// Coefficient pairs of the eight bound families, in order.
pub const FAMILIES: [(f64, f64); 8] = [
    (1.0, 0.0),
    (0.0, 1.0),
    (1.0, 1.0),
    (2.0, 1.0),
    (1.0, 2.0),
    (2.0, 2.0),
    (2.0, 3.0),
    (3.0, 2.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub a1: f64,
    pub a2: f64,
    /// `+∞` means the family imposes nothing.
    pub b: f64,
}

impl HalfPlane {
    pub fn slack(&self, r1: f64, r2: f64) -> f64 {
        self.b - (self.a1 * r1 + self.a2 * r2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionPolytope {
    pub half_planes: [HalfPlane; 8],
    /// `I1 <= I16` and `I2 <= I17`; when false the allocation contributes nothing.
    pub feasible: bool,
}

fn min(vals: &[f64]) -> f64 {
    vals.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn corollary_region(t: &RateTerms) -> RegionPolytope {
    let i = |k: usize| t.get(k);
    let ip1 = (i(1) + i(2)).max(i(3));
    let b = [
        min(&[
            min(&[i(21) + i(4) + i(16), i(5)]) - i(1),
            i(21) + min(&[i(4) + i(17) - i(2), i(9)]),
        ]),
        min(&[i(19), i(14) + min(&[i(10), i(13)])]) - ip1,
        min(&[
            i(14) + i(5),
            i(15) + min(&[i(7), i(8) - i(1)]),
            i(21) + i(17) + min(&[i(10), i(4) + i(13)]),
            i(4) + min(&[i(21) + i(18), i(20) + i(15)]),
            i(21) + i(14) + min(&[i(12), i(4) + i(16), i(10) + i(17) - i(2)]),
        ]) - ip1,
        min(&[
            i(4) + i(15) + min(&[i(6), i(11) - i(1)]),
            i(21) + 2.0 * i(4) + i(17) + i(16),
            i(4) + i(17) + min(&[i(21) + i(12), i(5)]),
        ]) + i(21)
            - ip1,
        min(&[
            i(21) + i(10) + i(14) + min(&[i(14) + i(16), i(18)]),
            i(14) + i(15) + min(&[i(20) + i(10), i(8)]),
        ]) - 2.0 * ip1,
        min(&[
            i(4) + min(&[i(14) + i(11), i(17) + i(8)]),
            i(10) + i(14) + min(&[i(6), i(11) - i(1)]),
        ]) + i(21)
            + i(15)
            - 2.0 * ip1,
        i(21) + i(10) + 2.0 * i(14) + i(11) + i(15) - 3.0 * ip1,
        2.0 * i(21) + 2.0 * i(4) + i(11) + i(17) + i(15) - 2.0 * ip1,
    ];
    let mut half_planes = [HalfPlane {
        a1: 0.0,
        a2: 0.0,
        b: 0.0,
    }; 8];
    for (k, (&(a1, a2), &bk)) in FAMILIES.iter().zip(b.iter()).enumerate() {
        half_planes[k] = HalfPlane { a1, a2, b: bk };
    }
    RegionPolytope {
        half_planes,
        feasible: i(1) <= i(16) && i(2) <= i(17),
    }
}

impl RegionPolytope {
    /// Membership with absolute slack `tol` on every half-plane.
    pub fn contains(&self, r1: f64, r2: f64, tol: f64) -> bool {
        self.feasible && r1 >= -tol && r2 >= -tol && self.half_planes.iter().all(|h| h.slack(r1, r2) >= -tol)
    }

    /// Smallest slack over the half-planes (negative outside).
    pub fn margin(&self, r1: f64, r2: f64) -> f64 {
        self.half_planes
            .iter()
            .map(|h| h.slack(r1, r2))
            .fold(f64::INFINITY, f64::min)
            .min(r1)
            .min(r2)
    }

    /// Largest `R1` and `R2` reachable, from the families alone (`R` nonnegative).
    pub fn extent(&self) -> (f64, f64) {
        let mut e = (f64::INFINITY, f64::INFINITY);
        for h in &self.half_planes {
            if h.a1 > 0.0 {
                e.0 = e.0.min(h.b / h.a1);
            }
            if h.a2 > 0.0 {
                e.1 = e.1.min(h.b / h.a2);
            }
        }
        e
    }

    /// Vertices of the region in the nonnegative quadrant, counter-clockwise from
    /// the origin. Empty when the region is empty; `None` when it is unbounded.
    pub fn vertices(&self) -> Option<Vec<(f64, f64)>> {
        if !self.feasible || self.half_planes.iter().any(|h| h.b < -1e-12) {
            return Some(Vec::new());
        }
        let mut clamped = self.clone();
        for h in clamped.half_planes.iter_mut() {
            h.b = h.b.max(0.0);
        }
        let (x, y) = clamped.extent();
        if !(x.is_finite() && y.is_finite()) {
            return None;
        }
        let mut poly = vec![(0.0, 0.0), (x, 0.0), (x, y), (0.0, y)];
        for h in &clamped.half_planes {
            if h.b.is_finite() && h.a1 > 0.0 && h.a2 > 0.0 {
                poly = clip(&poly, h);
                if poly.is_empty() {
                    break;
                }
            }
        }
        poly.dedup_by(|a, b| a == b);
        if poly.len() > 1 && poly.first() == poly.last() {
            poly.pop();
        }
        Some(poly)
    }
}

/// One Sutherland–Hodgman step against `a1 R1 + a2 R2 <= b`.
fn clip(poly: &[(f64, f64)], h: &HalfPlane) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let n = poly.len();
    for k in 0..n {
        let p = poly[k];
        let q = poly[(k + 1) % n];
        let sp = h.slack(p.0, p.1);
        let sq = h.slack(q.0, q.1);
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let t = sp / (sp - sq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Strategy;

    fn terms(i: [f64; 21]) -> RateTerms {
        RateTerms::from_values(i, Strategy::Classical)
    }

    #[test]
    fn all_zero_terms_give_origin() {
        let r = corollary_region(&terms([0.0; 21]));
        assert!(r.feasible);
        assert_eq!(r.vertices().unwrap(), vec![(0.0, 0.0)]);
    }

    #[test]
    fn symmetric_terms_hand_evaluated() {
        let m = 0.8;
        let mut i = [m; 21];
        i[0] = 0.0;
        i[1] = 0.0;
        i[2] = 0.0;
        let r = corollary_region(&terms(i));
        let b: Vec<f64> = r.half_planes.iter().map(|h| h.b).collect();
        // R1: min(min(3M, M) - 0, M + min(2M, M)) = M
        assert!((b[0] - m).abs() < 1e-15);
        // R2: min(M, M + M) = M
        assert!((b[1] - m).abs() < 1e-15);
        // R1+R2: min(2M, 2M, 3M, 3M, 3M) = 2M
        assert!((b[2] - 2.0 * m).abs() < 1e-15);
        // 2R1+R2: min(3M, 5M, 3M) + M = 4M
        assert!((b[3] - 4.0 * m).abs() < 1e-15);
        // R1+2R2: min(4M, 3M) = 3M ; 2R1+2R2: min(3M, 3M) + 2M = 5M
        assert!((b[4] - 3.0 * m).abs() < 1e-15);
        assert!((b[5] - 5.0 * m).abs() < 1e-15);
        // 2R1+3R2 = 6M, 3R1+2R2 = 7M
        assert!((b[6] - 6.0 * m).abs() < 1e-15);
        assert!((b[7] - 7.0 * m).abs() < 1e-15);
        let v = r.vertices().unwrap();
        assert_eq!(v.len(), 4);
        assert!(v.contains(&(m, m)));
    }

    #[test]
    fn infeasibility_flag() {
        let mut i = [1.0; 21];
        i[0] = 0.5;
        i[15] = 0.4;
        let r = corollary_region(&terms(i));
        assert!(!r.feasible);
        assert!(r.vertices().unwrap().is_empty());
        assert!(!r.contains(0.0, 0.0, 0.0));
    }

    #[test]
    fn infinite_terms_drop_constraints() {
        let mut i = [1.0; 21];
        i[0] = 0.0;
        i[1] = 0.0;
        i[2] = 0.0;
        i[19] = f64::INFINITY;
        i[20] = f64::INFINITY;
        let r = corollary_region(&terms(i));
        assert!(r.half_planes.iter().any(|h| h.b == f64::INFINITY));
        assert!(r.vertices().unwrap().len() >= 3);
    }

    #[test]
    fn vertices_lie_inside() {
        let i = [
            0.01, 0.02, 0.05, 0.3, 1.3, 1.2, 1.1, 0.8, 0.46, 0.49, 0.9, 0.64, 0.33, 0.32, 1.19, 0.42, 0.42, 0.78, 0.72,
            0.2, 0.36,
        ];
        let r = corollary_region(&terms(i));
        for (x, y) in r.vertices().unwrap() {
            assert!(r.contains(x, y, 1e-12), "({x}, {y})");
        }
    }
}
