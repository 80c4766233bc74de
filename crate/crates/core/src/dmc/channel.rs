//! Finite channels `p(y2, y3, y4 | x1, x2)`, input families `p(t) p(x1|t) p(x2|t)`,
//! and the joint tables they induce.

use serde::{Deserialize, Serialize};

use super::pmf::JointPmf;
use super::DmcError;

/// Row-stochasticity tolerance.
pub const ROW_TOL: f64 = 1e-12;

/// Axis names of induced joints, in table order.
pub const AXES: [&str; 6] = ["T", "X1", "X2", "Y2", "Y3", "Y4"];

/// Transition tensor with alphabet sizes `[|X1|, |X2|, |Y2|, |Y3|, |Y4|]`, stored
/// row-major in `(x1, x2, y2, y3, y4)` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteChannel {
    pub sizes: [usize; 5],
    pub transition: Vec<f64>,
}

impl FiniteChannel {
    pub fn new(sizes: [usize; 5], transition: Vec<f64>) -> Result<Self, DmcError> {
        let ch = FiniteChannel { sizes, transition };
        ch.validate()?;
        Ok(ch)
    }

    pub fn from_json(text: &str) -> Result<Self, DmcError> {
        let ch: FiniteChannel = serde_json::from_str(text).map_err(|e| DmcError::Parse(e.to_string()))?;
        ch.validate()?;
        Ok(ch)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("channel serializes")
    }

    pub fn validate(&self) -> Result<(), DmcError> {
        if self.sizes.contains(&0) {
            return Err(DmcError::Shape("empty alphabet".into()));
        }
        let cells: usize = self.sizes.iter().product();
        if self.transition.len() != cells {
            return Err(DmcError::Shape(format!(
                "transition has {} entries, sizes need {cells}",
                self.transition.len()
            )));
        }
        if let Some(v) = self.transition.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(DmcError::InvalidDistribution(format!("transition entry {v}")));
        }
        let row = self.outputs();
        for (r, chunk) in self.transition.chunks(row).enumerate() {
            let s: f64 = chunk.iter().sum();
            if (s - 1.0).abs() > ROW_TOL {
                let (x1, x2) = (r / self.sizes[1], r % self.sizes[1]);
                return Err(DmcError::InvalidDistribution(format!(
                    "row (x1={x1}, x2={x2}) sums to {s}"
                )));
            }
        }
        Ok(())
    }

    /// FNV-1a over the sizes and transition bits, for output tags.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let words = self
            .sizes
            .iter()
            .map(|&s| s as u64)
            .chain(self.transition.iter().map(|v| v.to_bits()));
        for w in words {
            for b in w.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }

    /// Number of output triples per input pair.
    pub fn outputs(&self) -> usize {
        self.sizes[2] * self.sizes[3] * self.sizes[4]
    }

    pub fn prob(&self, x1: usize, x2: usize, y2: usize, y3: usize, y4: usize) -> f64 {
        let [_, n2, m2, m3, m4] = self.sizes;
        self.transition[(((x1 * n2 + x2) * m2 + y2) * m3 + y3) * m4 + y4]
    }

    /// Builds a channel from three factors, `p(y2|x1,x2) p(y3|x2,y2) p(y4|x1,x2)`,
    /// which is degraded by construction.
    pub fn degraded_from_factors(
        sizes: [usize; 5],
        y2: impl Fn(usize, usize, usize) -> f64,
        y3: impl Fn(usize, usize, usize) -> f64,
        y4: impl Fn(usize, usize, usize) -> f64,
    ) -> Result<Self, DmcError> {
        let [n1, n2, m2, m3, m4] = sizes;
        let mut t = Vec::with_capacity(sizes.iter().product());
        for x1 in 0..n1 {
            for x2 in 0..n2 {
                for b2 in 0..m2 {
                    for b3 in 0..m3 {
                        for b4 in 0..m4 {
                            t.push(y2(x1, x2, b2) * y3(x2, b2, b3) * y4(x1, x2, b4));
                        }
                    }
                }
            }
        }
        FiniteChannel::new(sizes, t)
    }

    /// Joint over `(T, X1, X2, Y2, Y3, Y4)` with `T` trivial and inputs drawn from
    /// `pxx`, a row-major `p(x1, x2)`.
    pub fn joint_from_inputs(&self, pxx: &[f64]) -> Result<JointPmf, DmcError> {
        let (n1, n2) = (self.sizes[0], self.sizes[1]);
        if pxx.len() != n1 * n2 {
            return Err(DmcError::Shape("input table size".into()));
        }
        let row = self.outputs();
        let mut p = Vec::with_capacity(n1 * n2 * row);
        for (r, &w) in pxx.iter().enumerate() {
            p.extend(self.transition[r * row..(r + 1) * row].iter().map(|&v| w * v));
        }
        let sizes = [1, n1, n2, self.sizes[2], self.sizes[3], self.sizes[4]];
        JointPmf::new(&AXES, &sizes, p)
    }

    /// Joint induced by an input family.
    pub fn joint(&self, fam: &InputFamily) -> Result<JointPmf, DmcError> {
        fam.validate(self)?;
        let (n1, n2) = (self.sizes[0], self.sizes[1]);
        let row = self.outputs();
        let mut p = Vec::with_capacity(fam.pt.len() * n1 * n2 * row);
        for (t, &pt) in fam.pt.iter().enumerate() {
            for x1 in 0..n1 {
                for x2 in 0..n2 {
                    let w = pt * fam.px1[t][x1] * fam.px2[t][x2];
                    let r = x1 * n2 + x2;
                    p.extend(self.transition[r * row..(r + 1) * row].iter().map(|&v| w * v));
                }
            }
        }
        let sizes = [fam.pt.len(), n1, n2, self.sizes[2], self.sizes[3], self.sizes[4]];
        JointPmf::new(&AXES, &sizes, p)
    }
}

/// `p(t) p(x1|t) p(x2|t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputFamily {
    pub pt: Vec<f64>,
    pub px1: Vec<Vec<f64>>,
    pub px2: Vec<Vec<f64>>,
}

fn check_simplex(v: &[f64], what: &str) -> Result<(), DmcError> {
    let s: f64 = v.iter().sum();
    if v.iter().any(|x| !x.is_finite() || *x < 0.0) || (s - 1.0).abs() > ROW_TOL {
        return Err(DmcError::InvalidDistribution(format!("{what} is not a distribution")));
    }
    Ok(())
}

impl InputFamily {
    pub fn validate(&self, ch: &FiniteChannel) -> Result<(), DmcError> {
        check_simplex(&self.pt, "p(t)")?;
        if self.px1.len() != self.pt.len() || self.px2.len() != self.pt.len() {
            return Err(DmcError::Shape("one conditional per value of T".into()));
        }
        for (a, b) in self.px1.iter().zip(&self.px2) {
            if a.len() != ch.sizes[0] || b.len() != ch.sizes[1] {
                return Err(DmcError::Shape("conditional input size".into()));
            }
            check_simplex(a, "p(x1|t)")?;
            check_simplex(b, "p(x2|t)")?;
        }
        Ok(())
    }
}
