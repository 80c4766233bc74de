//! Distribution grids: simplices enumerated by compositions of a denominator.

use serde::{Deserialize, Serialize};

/// Denominator `q` of the simplex grids and the largest `|T|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DmcGrid {
    pub q: usize,
    pub t_max: usize,
}

impl Default for DmcGrid {
    fn default() -> Self {
        DmcGrid { q: 6, t_max: 4 }
    }
}

impl DmcGrid {
    pub fn label(&self) -> String {
        format!("q={},t_max={}", self.q, self.t_max)
    }
}

fn compositions_into(q: usize, parts: usize, positive: bool) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            if left >= min {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for v in min..=left {
            if left - v < min * (parts - 1) {
                break;
            }
            cur.push(v);
            rec(left - v, parts - 1, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(
            q,
            parts,
            usize::from(positive),
            &mut Vec::with_capacity(parts),
            &mut out,
        );
    }
    out
}

/// All points of the `n`-simplex with coordinates in `{0, 1/q, ..., 1}`.
pub fn compositions(q: usize, n: usize) -> Vec<Vec<f64>> {
    compositions_into(q, n, false)
        .into_iter()
        .map(|c| c.into_iter().map(|k| k as f64 / q as f64).collect())
        .collect()
}

/// Weights in `{1/q, ..., 1}` over `k` ordered slots, summing to 1.
pub fn positive_weights(q: usize, k: usize) -> Vec<Vec<f64>> {
    compositions_into(q, k, true)
        .into_iter()
        .map(|c| c.into_iter().map(|v| v as f64 / q as f64).collect())
        .collect()
}

/// `n choose k` without overflow for the small sizes used here.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Every `k`-subset of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
