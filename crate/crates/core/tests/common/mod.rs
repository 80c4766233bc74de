//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use ccifc::rate_terms::{dpc_coefficients, RateTerms};
use ccifc::scenario::{
    figure_preset, validate_allocation, DpcMode, GaussianScenario, PowerAllocation, Preset, Strategy,
};
use rand::Rng;

pub fn fig(p: Preset) -> GaussianScenario {
    figure_preset(p).scenario
}

/// Uniform point of the simplex with `n` coordinates, some forced to zero so
/// faces get exercised too.
pub fn sparse_simplex(rng: &mut impl Rng, n: usize, zero_prob: f64) -> Vec<f64> {
    let mut e: Vec<f64> = (0..n)
        .map(|_| {
            if rng.gen::<f64>() < zero_prob {
                0.0
            } else {
                -(1.0 - rng.gen::<f64>()).ln()
            }
        })
        .collect();
    if e.iter().all(|&v| v == 0.0) {
        e[rng.gen_range(0..n)] = 1.0;
    }
    let s: f64 = e.iter().sum();
    e.iter().map(|v| v / s).collect()
}

/// Random valid allocation. The last simplex coordinate is left unused, so the
/// fraction sums range over `[0, 1]`.
pub fn random_allocation(rng: &mut impl Rng, strategy: Strategy, zero_prob: f64) -> PowerAllocation {
    let b = sparse_simplex(rng, 7, zero_prob);
    let g = sparse_simplex(rng, 4, zero_prob);
    let mut betas = [b[0], b[1], b[2], b[3], b[4], b[5]];
    if strategy == Strategy::Lookahead {
        betas[2] = 0.0;
        betas[3] = 0.0;
    }
    PowerAllocation::new(strategy, betas, [g[0], g[1], g[2]])
}

/// Random valid allocation whose every fraction is at least `floor` of its share.
pub fn interior_allocation(rng: &mut impl Rng, floor: f64) -> PowerAllocation {
    let mut draw = |n: usize| -> Vec<f64> {
        let v = sparse_simplex(rng, n, 0.0);
        v.iter().map(|x| floor + (1.0 - floor * n as f64) * x).collect()
    };
    let b = draw(6);
    let g = draw(3);
    PowerAllocation::new(
        Strategy::Classical,
        [b[0], b[1], b[2], b[3], b[4], b[5]],
        [g[0], g[1], g[2]],
    )
}

/// Random valid one-symbol look-ahead allocation with `h` inside the power budget.
pub fn random_no_delay(rng: &mut impl Rng, scen: &GaussianScenario) -> PowerAllocation {
    loop {
        let base = random_allocation(rng, Strategy::NoDelay, 0.2);
        let beta = rng.gen::<f64>();
        let probe = base.with_relay(beta, 1.0);
        let hmax = ccifc::scenario::max_relay_h(scen, &probe).unwrap_or(2.0);
        let a = probe.with_relay(beta, hmax * rng.gen_range(0.05..1.0));
        if validate_allocation(&a, scen).is_valid() {
            return a;
        }
    }
}

/// Random scenario with `|h42| <= 1`.
pub fn random_scenario(rng: &mut impl Rng) -> GaussianScenario {
    GaussianScenario {
        p1: rng.gen_range(0.5..10.0),
        p2: rng.gen_range(0.5..10.0),
        h21: rng.gen_range(0.2..4.0),
        h31: rng.gen_range(0.3..1.5),
        h32: rng.gen_range(-1.2..1.2),
        h41: rng.gen_range(-1.2..1.2),
        h42: rng.gen_range(0.3..1.0),
        n2: rng.gen_range(0.2..2.0),
        n3: rng.gen_range(0.5..2.0),
        n4: rng.gen_range(0.5..2.0),
    }
}

// ---- log-det oracle of the Gaussian codebook -------------------------------

const N_SRC: usize = 11;
type Vector = [f64; N_SRC];

fn unit(k: usize) -> Vector {
    let mut v = [0.0; N_SRC];
    v[k] = 1.0;
    v
}

fn add(a: Vector, b: Vector) -> Vector {
    let mut v = a;
    for k in 0..N_SRC {
        v[k] += b[k];
    }
    v
}

fn scale(c: f64, a: Vector) -> Vector {
    a.map(|x| c * x)
}

/// `log2 det` by Gaussian elimination with partial pivoting.
fn log2_det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut acc = 0.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        m.swap(c, p);
        let piv = m[c][c];
        if piv.abs() < 1e-300 {
            return f64::NEG_INFINITY;
        }
        acc += piv.abs().log2();
        for r in c + 1..n {
            let f = m[r][c] / piv;
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    acc
}

pub struct Codebook {
    var: Vector,
    vars: Vec<(&'static str, Vector)>,
}

impl Codebook {
    /// Superposition layers as independent Gaussian increments, the cognitive
    /// codewords dirty-paper coded against the known interference, and the three
    /// received signals.
    pub fn new(s: &GaussianScenario, a: &PowerAllocation, alpha: (f64, f64)) -> Self {
        let var = [
            a.b4 * s.p1,
            a.b3 * s.p1,
            a.b2 * s.p1,
            a.bp2 * s.p1,
            a.b1 * s.p1,
            a.bp1 * s.p1,
            a.g1 * s.p2,
            a.g2 * s.p2,
            s.n2,
            s.n3,
            s.n4,
        ];
        let [tc, tp_, u1c_, u1p_, v1c_, v1p_, u2c_, u2p_, z2, z3, z4] = std::array::from_fn(unit);
        let s1 = scale(s.h41, tp_);
        let s2 = add(scale(s.h41, tp_), scale(s.h42, u2c_));
        let c = if a.b4 > 0.0 {
            (a.g3 * s.p2 / (a.b4 * s.p1)).sqrt()
        } else {
            0.0
        };
        let x1 = [v1p_, v1c_, u1p_, u1c_, tp_, tc].into_iter().fold([0.0; N_SRC], add);
        let x2 = add(add(u2p_, u2c_), scale(c, tc));
        let lin = |g1: f64, g2: f64, z: Vector| add(add(scale(g1, x1), scale(g2, x2)), z);
        let vars = vec![
            ("Tc", tc),
            ("Tp", add(tp_, tc)),
            ("U1c", add(u1c_, tc)),
            ("U1p", [u1p_, u1c_, tp_, tc].into_iter().fold([0.0; N_SRC], add)),
            ("V1c", add(v1c_, tc)),
            ("V1p", [v1p_, v1c_, tp_, tc].into_iter().fold([0.0; N_SRC], add)),
            ("U2c", add(u2c_, scale(alpha.0, s1))),
            ("U2p", add(u2p_, scale(alpha.1, s2))),
            ("Y2", lin(s.h21, 0.0, z2)),
            ("Y3", lin(s.h31, s.h32, z3)),
            ("Y4", lin(s.h41, s.h42, z4)),
        ];
        Codebook { var, vars }
    }

    fn row(&self, name: &str) -> Vector {
        self.vars.iter().find(|(n, _)| *n == name).expect("known variable").1
    }

    fn logdet(&self, names: &[&str]) -> f64 {
        if names.is_empty() {
            return 0.0;
        }
        let rows: Vec<Vector> = names.iter().map(|n| self.row(n)).collect();
        let m = rows
            .iter()
            .map(|a| {
                rows.iter()
                    .map(|b| (0..N_SRC).map(|k| a[k] * self.var[k] * b[k]).sum())
                    .collect()
            })
            .collect();
        log2_det(m)
    }

    pub fn mi<'a>(&self, a: &[&'a str], b: &[&'a str], c: &[&'a str]) -> f64 {
        fn cat<'a>(x: &[&'a str], y: &[&'a str]) -> Vec<&'a str> {
            x.iter().chain(y).copied().collect()
        }
        let ac = cat(a, c);
        let bc = cat(b, c);
        let abc = cat(&ac, b);
        0.5 * (self.logdet(&ac) + self.logdet(&bc) - self.logdet(&abc) - self.logdet(c))
    }

    /// `I1..I21` from their definitions.
    pub fn terms(&self) -> [f64; 21] {
        let i = |a: &[&str], b: &[&str], c: &[&str]| self.mi(a, b, c);
        let i1 = i(&["U2c"], &["Tp"], &["Tc"]);
        [
            i1,
            i(&["U2p"], &["Tp"], &["Tc"]),
            i(&["U2c"], &["U2p"], &["Tc"]) + i(&["U2c", "U2p"], &["Tp"], &["Tc"]),
            i(&["V1p"], &["Y3"], &["U2c", "V1c", "U1p", "U1c", "Tp", "Tc"]),
            i1 + i(&["U2c", "V1p", "V1c", "U1p", "U1c", "Tp", "Tc"], &["Y3"], &[]),
            i(&["V1p", "V1c", "U1p", "Tp"], &["Y3", "U2c"], &["U1c", "Tc"]),
            i(&["V1p", "U1p", "Tp"], &["Y3", "U2c"], &["V1c", "U1c", "Tc"]),
            i1 + i(&["U2c", "V1p", "U1p", "Tp"], &["Y3"], &["V1c", "U1c", "Tc"]),
            i(&["V1c", "V1p"], &["Y3"], &["U2c", "U1p", "U1c", "Tp", "Tc"]),
            i1 + i(&["V1p", "U2c"], &["Y3"], &["V1c", "U1p", "U1c", "Tp", "Tc"]),
            i1 + i(&["U2c", "V1p", "V1c", "U1p", "Tp"], &["Y3"], &["U1c", "Tc"]),
            i1 + i(&["U2c", "V1p", "V1c"], &["Y3"], &["U1p", "U1c", "Tp", "Tc"]),
            i(&["U2c"], &["Y4", "U2p"], &["V1c", "U1c", "Tc"]),
            i(&["U2p"], &["Y4", "U2c"], &["V1c", "U1c", "Tc"]),
            i(&["U2c", "U2p", "V1c", "U1c", "Tc"], &["Y4"], &[]),
            i(&["U2c", "V1c"], &["Y4", "U2p"], &["U1c", "Tc"]),
            i(&["U2p", "V1c"], &["Y4", "U2c"], &["U1c", "Tc"]),
            i(&["U2c", "U2p", "V1c"], &["Y4"], &["U1c", "Tc"]),
            i(&["U2c", "U2p"], &["Y4"], &["V1c", "U1c", "Tc"]),
            i(&["U1p"], &["Y2"], &["U2c", "U2p", "U1c", "Tp", "Tc"]),
            i(&["U1c", "U1p"], &["Y2"], &["U2c", "U2p", "Tp", "Tc"]),
        ]
    }
}

/// Oracle terms at an interior allocation with the given DPC mode.
pub fn oracle_terms(s: &GaussianScenario, a: &PowerAllocation, mode: DpcMode) -> [f64; 21] {
    let d = dpc_coefficients(s, a, mode);
    Codebook::new(s, a, (d.alpha1, d.alpha2)).terms()
}

pub fn max_abs_diff(a: &RateTerms, b: &[f64; 21]) -> f64 {
    a.i.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

// ---- closed-form projection against the split-rate LP ----------------------

/// Points of an `n x n` grid over `[0, 1.2 max]^2` on which the closed-form
/// region and the LP disagree, and the number of grid points compared. Points
/// within `1e-7` of the closed-form boundary are skipped.
pub fn fm_disagreements(t: &RateTerms, n: usize) -> (usize, usize) {
    use ccifc::region::{corollary_region, lp_project, LpVariant};
    let poly = corollary_region(t);
    let (e1, e2) = poly.extent();
    let span = |e: f64| 1.2 * if e.is_finite() { e.max(0.01) } else { 1.0 };
    let (m1, m2) = (span(e1), span(e2));
    let variant = if t.provenance == Strategy::Lookahead {
        LpVariant::Lookahead
    } else {
        LpVariant::Classical
    };
    let (mut compared, mut bad) = (0, 0);
    for a in 0..n {
        for b in 0..n {
            let r1 = m1 * a as f64 / (n - 1) as f64;
            let r2 = m2 * b as f64 / (n - 1) as f64;
            let margin = poly
                .half_planes
                .iter()
                .map(|h| h.slack(r1, r2))
                .fold(f64::INFINITY, f64::min);
            if poly.feasible && margin.abs() < 1e-7 {
                continue;
            }
            compared += 1;
            let closed = poly.feasible && margin >= 0.0;
            if closed != lp_project(t, variant, r1, r2) {
                bad += 1;
            }
        }
    }
    (compared, bad)
}

// ---- finite joints ----------------------------------------------------------

/// Random joint over three axes of the given sizes, with some exact zeros.
pub fn random_joint3(rng: &mut impl Rng, sizes: [usize; 3]) -> ccifc::dmc::JointPmf {
    let n = sizes.iter().product();
    let p = sparse_simplex(rng, n, 0.15);
    ccifc::dmc::JointPmf::new(&["A", "B", "C"], &sizes, p).unwrap()
}

/// `I(A;B|C)` of a three-axis joint by summing `p log p(abc)p(c) / (p(ac)p(bc))`
/// over the table.
pub fn direct_cmi(j: &ccifc::dmc::JointPmf) -> f64 {
    let s = j.sizes();
    let (na, nb, nc) = (s[0], s[1], s[2]);
    let p = |a: usize, b: usize, c: usize| j.probabilities()[(a * nb + b) * nc + c];
    let mut total = 0.0;
    for a in 0..na {
        for b in 0..nb {
            for c in 0..nc {
                let pabc = p(a, b, c);
                if pabc == 0.0 {
                    continue;
                }
                let pc: f64 = (0..na)
                    .flat_map(|x| (0..nb).map(move |y| (x, y)))
                    .map(|(x, y)| p(x, y, c))
                    .sum();
                let pac: f64 = (0..nb).map(|y| p(a, y, c)).sum();
                let pbc: f64 = (0..na).map(|x| p(x, b, c)).sum();
                total += pabc * (pabc * pc / (pac * pbc)).log2();
            }
        }
    }
    total
}
