//! Dense joint distributions over named finite axes, entropies and mutual information.

use serde::{Deserialize, Serialize};

use super::DmcError;

/// Joint probability table in row-major order (last axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointPmf {
    names: Vec<String>,
    sizes: Vec<usize>,
    p: Vec<f64>,
}

/// Tolerance on total mass.
pub const MASS_TOL: f64 = 1e-10;

/// Information values below this are cancellation residue and read as 0.
pub const INFO_FLOOR: f64 = 1e-13;

pub(crate) fn snap(v: f64) -> f64 {
    if v < INFO_FLOOR {
        0.0
    } else {
        v
    }
}

fn entropy_of(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.log2()).sum()
}

impl JointPmf {
    pub fn new(names: &[&str], sizes: &[usize], p: Vec<f64>) -> Result<Self, DmcError> {
        if names.len() != sizes.len() {
            return Err(DmcError::Shape("one name per axis".into()));
        }
        let cells: usize = sizes.iter().product();
        if cells != p.len() {
            return Err(DmcError::Shape(format!("{} cells, {} probabilities", cells, p.len())));
        }
        if let Some(v) = p.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(DmcError::InvalidDistribution(format!("entry {v}")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(DmcError::InvalidDistribution(format!("total mass {total}")));
        }
        Ok(JointPmf {
            names: names.iter().map(|s| s.to_string()).collect(),
            sizes: sizes.to_vec(),
            p,
        })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn axis(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Axis indices for names; unknown names are an error.
    pub fn axes(&self, names: &[&str]) -> Result<Vec<usize>, DmcError> {
        names
            .iter()
            .map(|n| self.axis(n).ok_or_else(|| DmcError::Shape(format!("no axis `{n}`"))))
            .collect()
    }

    /// Marginal over `axes` (deduplicated, kept in table order), flattened row-major.
    pub fn marginal(&self, axes: &[usize]) -> Vec<f64> {
        let mut keep = vec![false; self.sizes.len()];
        for &a in axes {
            keep[a] = true;
        }
        let out_len: usize = (0..self.sizes.len())
            .filter(|&k| keep[k])
            .map(|k| self.sizes[k])
            .product();
        let mut out = vec![0.0; out_len];
        let n = self.sizes.len();
        let mut idx = vec![0usize; n];
        for &v in &self.p {
            let mut o = 0;
            for k in 0..n {
                if keep[k] {
                    o = o * self.sizes[k] + idx[k];
                }
            }
            out[o] += v;
            for k in (0..n).rev() {
                idx[k] += 1;
                if idx[k] < self.sizes[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        out
    }

    /// `H(axes)` in bits; the empty set has entropy 0.
    pub fn entropy(&self, axes: &[usize]) -> f64 {
        if axes.is_empty() {
            return 0.0;
        }
        entropy_of(&self.marginal(axes))
    }

    /// `H(A | C)`.
    pub fn conditional_entropy(&self, a: &[usize], c: &[usize]) -> f64 {
        let ac: Vec<usize> = a.iter().chain(c).copied().collect();
        snap(self.entropy(&ac) - self.entropy(c))
    }

    /// `I(A; B | C) = H(AC) + H(BC) - H(ABC) - H(C)`, with rounding residue snapped to 0.
    pub fn mutual_information(&self, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
        if a.is_empty() || b.is_empty() {
            return 0.0;
        }
        let join = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().chain(y).copied().collect() };
        let ac = join(a, c);
        let bc = join(b, c);
        let abc = join(&ac, b);
        snap(self.entropy(&ac) + self.entropy(&bc) - self.entropy(&abc) - self.entropy(c))
    }

    /// By axis names.
    pub fn mi(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64, DmcError> {
        Ok(self.mutual_information(&self.axes(a)?, &self.axes(b)?, &self.axes(c)?))
    }
}
