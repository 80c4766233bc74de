//! Channel conditions behind the finite-alphabet capacity results.
//!
//! Degradedness and semi-determinism are properties of the transition tensor and
//! are checked exactly. The mutual-information inequalities must hold for every
//! input distribution; they are checked on a deterministic set (point masses, the
//! uniform input, a composition grid) plus random draws, so a pass only means no
//! counterexample was found.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::channel::FiniteChannel;
use super::grid::compositions;
use super::DmcError;

/// Tolerance of the structural tests and of every sampled margin.
pub const COND_TOL: f64 = 1e-10;

/// Cap on the deterministic composition grid over `p(x1, x2)`.
const MAX_GRID_INPUTS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `p(y3|x1,x2,y2) = p(y3|x2,y2)`.
    Degraded,
    /// `Y2` is a function of `X1`.
    SemiDeterministic,
    /// `I(X2;Y4|X1) <= I(X2;Y3|X1)`.
    StrongRx1,
    /// `I(X1;Y3) <= I(X1;Y4)`.
    StrongRx2,
    /// `I(X1,X2;Y3) <= I(X1,X2;Y4)`.
    SumRateRx2,
    /// `I(X1;Y3|Y2,X2) <= I(X1;Y4|Y2,X2)`.
    SemiDetExtra,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Degraded => "degraded",
            Condition::SemiDeterministic => "semidet",
            Condition::StrongRx1 => "strong_rx1",
            Condition::StrongRx2 => "strong_rx2",
            Condition::SumRateRx2 => "sum_rate_rx2",
            Condition::SemiDetExtra => "semidet_extra",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Condition::Degraded => "p(y3|x1,x2,y2) = p(y3|x2,y2)",
            Condition::SemiDeterministic => "Y2 = h(X1)",
            Condition::StrongRx1 => "I(X2;Y4|X1) <= I(X2;Y3|X1)",
            Condition::StrongRx2 => "I(X1;Y3) <= I(X1;Y4)",
            Condition::SumRateRx2 => "I(X1,X2;Y3) <= I(X1,X2;Y4)",
            Condition::SemiDetExtra => "I(X1;Y3|Y2,X2) <= I(X1;Y4|Y2,X2)",
        }
    }
}

/// Outcome of one sampled inequality. The margin is `rhs - lhs`, so a violation is
/// a margin below `-COND_TOL`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledCheck {
    pub holds: bool,
    pub samples: usize,
    pub worst_margin: f64,
    /// Row-major `p(x1, x2)` attaining the worst margin.
    pub witness: Vec<f64>,
}

impl SampledCheck {
    pub fn verdict(&self) -> String {
        if self.holds {
            format!("no counterexample found ({} samples)", self.samples)
        } else {
            format!(
                "violated: margin {:.3e} at p(x1,x2) = {:?}",
                self.worst_margin, self.witness
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub degraded: bool,
    pub semidet: bool,
    pub strong_rx1: SampledCheck,
    pub strong_rx2: SampledCheck,
    pub sum_rate_rx2: SampledCheck,
    pub semidet_extra: SampledCheck,
}

impl ConditionReport {
    pub fn holds(&self, c: Condition) -> bool {
        match c {
            Condition::Degraded => self.degraded,
            Condition::SemiDeterministic => self.semidet,
            Condition::StrongRx1 => self.strong_rx1.holds,
            Condition::StrongRx2 => self.strong_rx2.holds,
            Condition::SumRateRx2 => self.sum_rate_rx2.holds,
            Condition::SemiDetExtra => self.semidet_extra.holds,
        }
    }

    /// First condition in `needed` that fails.
    pub fn require(&self, needed: &[Condition]) -> Result<(), DmcError> {
        match needed.iter().find(|&&c| !self.holds(c)) {
            Some(&c) => Err(DmcError::ConditionFailed(c)),
            None => Ok(()),
        }
    }
}

pub fn is_degraded(ch: &FiniteChannel) -> bool {
    let [n1, n2, m2, m3, m4] = ch.sizes;
    // p(y2, y3 | x1, x2), summed over y4.
    let py23 = |x1, x2, y2, y3| (0..m4).map(|y4| ch.prob(x1, x2, y2, y3, y4)).sum::<f64>();
    for x2 in 0..n2 {
        for y2 in 0..m2 {
            let mut reference: Option<Vec<f64>> = None;
            for x1 in 0..n1 {
                let py2: f64 = (0..m3).map(|y3| py23(x1, x2, y2, y3)).sum();
                if py2 <= COND_TOL {
                    continue;
                }
                let cond: Vec<f64> = (0..m3).map(|y3| py23(x1, x2, y2, y3) / py2).collect();
                match &reference {
                    None => reference = Some(cond),
                    Some(r) => {
                        if r.iter().zip(&cond).any(|(a, b)| (a - b).abs() > COND_TOL) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// `h(x1)` when `Y2` is a deterministic function of `X1`.
pub fn semidet_map(ch: &FiniteChannel) -> Option<Vec<usize>> {
    let [n1, n2, m2, m3, m4] = ch.sizes;
    let py2 = |x1, x2, y2| -> f64 {
        let mut s = 0.0;
        for y3 in 0..m3 {
            for y4 in 0..m4 {
                s += ch.prob(x1, x2, y2, y3, y4);
            }
        }
        s
    };
    (0..n1)
        .map(|x1| (0..m2).find(|&y2| (0..n2).all(|x2| py2(x1, x2, y2) >= 1.0 - COND_TOL)))
        .collect()
}

pub fn is_semidet(ch: &FiniteChannel) -> bool {
    semidet_map(ch).is_some()
}

/// Deterministic part of the input set: point masses, product corners with a
/// uniform factor, the uniform input, and a composition grid when small enough.
fn deterministic_inputs(n1: usize, n2: usize) -> Vec<Vec<f64>> {
    let n = n1 * n2;
    let mut out: Vec<Vec<f64>> = Vec::new();
    for k in 0..n {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        out.push(v);
    }
    for x1 in 0..n1 {
        let mut v = vec![0.0; n];
        for x2 in 0..n2 {
            v[x1 * n2 + x2] = 1.0 / n2 as f64;
        }
        out.push(v);
    }
    for x2 in 0..n2 {
        let mut v = vec![0.0; n];
        for x1 in 0..n1 {
            v[x1 * n2 + x2] = 1.0 / n1 as f64;
        }
        out.push(v);
    }
    out.push(vec![1.0 / n as f64; n]);
    for q in [6usize, 4, 2] {
        let grid = compositions(q, n);
        if grid.len() <= MAX_GRID_INPUTS {
            out.extend(grid);
            break;
        }
    }
    out
}

/// Uniform draw from the simplex.
fn dirichlet_one(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|v| v / s).collect()
}

struct Margins([f64; 4]);

fn margins(ch: &FiniteChannel, pxx: &[f64]) -> Result<Margins, DmcError> {
    let j = ch.joint_from_inputs(pxx)?;
    let [x1, x2, y2, y3, y4] = [1usize, 2, 3, 4, 5];
    let mi = |a: &[usize], b: &[usize], c: &[usize]| j.mutual_information(a, b, c);
    Ok(Margins([
        mi(&[x2], &[y3], &[x1]) - mi(&[x2], &[y4], &[x1]),
        mi(&[x1], &[y4], &[]) - mi(&[x1], &[y3], &[]),
        mi(&[x1, x2], &[y4], &[]) - mi(&[x1, x2], &[y3], &[]),
        mi(&[x1], &[y4], &[y2, x2]) - mi(&[x1], &[y3], &[y2, x2]),
    ]))
}

/// Structural tests plus the four inequalities over the deterministic set and
/// `samples` random joint inputs `p(x1, x2)` drawn with `seed`.
pub fn check_conditions(ch: &FiniteChannel, samples: usize, seed: u64) -> Result<ConditionReport, DmcError> {
    ch.validate()?;
    let (n1, n2) = (ch.sizes[0], ch.sizes[1]);
    let mut inputs = deterministic_inputs(n1, n2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    inputs.extend((0..samples).map(|_| dirichlet_one(&mut rng, n1 * n2)));

    let mut worst = [f64::INFINITY; 4];
    let mut witness: [Vec<f64>; 4] = Default::default();
    for p in &inputs {
        let m = margins(ch, p)?;
        for k in 0..4 {
            if m.0[k] < worst[k] {
                worst[k] = m.0[k];
                witness[k] = p.clone();
            }
        }
    }
    let check = |k: usize| SampledCheck {
        holds: worst[k] >= -COND_TOL,
        samples: inputs.len(),
        worst_margin: worst[k],
        witness: witness[k].clone(),
    };
    Ok(ConditionReport {
        degraded: is_degraded(ch),
        semidet: is_semidet(ch),
        strong_rx1: check(0),
        strong_rx2: check(1),
        sum_rate_rx2: check(2),
        semidet_extra: check(3),
    })
}
