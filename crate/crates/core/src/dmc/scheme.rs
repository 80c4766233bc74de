//! The 21 mutual-information terms of the zero-delay scheme, evaluated on an
//! arbitrary finite joint distribution, and the joint distributions that feed them.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::pmf::JointPmf;
use super::DmcError;

/// Which axes of a joint play each codeword and output. Empty lists stand for
/// constant (absent) codewords.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeAssignment {
    pub tc: Vec<String>,
    pub tp: Vec<String>,
    pub u1c: Vec<String>,
    pub u1p: Vec<String>,
    pub v1c: Vec<String>,
    pub v1p: Vec<String>,
    pub u2c: Vec<String>,
    pub u2p: Vec<String>,
    pub y2: Vec<String>,
    pub y3: Vec<String>,
    pub y4: Vec<String>,
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Axis names of [`random_scheme_joint`], in table order.
pub const SCHEME_AXES: [&str; 13] = [
    "Tc", "Tp", "U1c", "U1p", "V1c", "V1p", "X1", "U2c", "U2p", "X2", "Y2", "Y3", "Y4",
];

impl SchemeAssignment {
    /// Every codeword on the axis of the same name.
    pub fn identity() -> Self {
        SchemeAssignment {
            tc: names(&["Tc"]),
            tp: names(&["Tp"]),
            u1c: names(&["U1c"]),
            u1p: names(&["U1p"]),
            v1c: names(&["V1c"]),
            v1p: names(&["V1p"]),
            u2c: names(&["U2c"]),
            u2p: names(&["U2p"]),
            y2: names(&["Y2"]),
            y3: names(&["Y3"]),
            y4: names(&["Y4"]),
        }
    }

    /// The degraded-channel specialization on a `(T, X1, X2, Y2, Y3, Y4)` joint:
    /// `Tc = T`, `U1c = X1`, `U2c = X2`, every other codeword constant.
    pub fn degraded() -> Self {
        SchemeAssignment {
            tc: names(&["T"]),
            tp: vec![],
            u1c: names(&["X1"]),
            u1p: vec![],
            v1c: vec![],
            v1p: vec![],
            u2c: names(&["X2"]),
            u2p: vec![],
            y2: names(&["Y2"]),
            y3: names(&["Y3"]),
            y4: names(&["Y4"]),
        }
    }
}

/// `I1..I21` (index `k-1` holds `Ik`).
pub fn scheme_terms(j: &JointPmf, s: &SchemeAssignment) -> Result<[f64; 21], DmcError> {
    let ax = |v: &Vec<String>| -> Result<Vec<usize>, DmcError> {
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        j.axes(&refs)
    };
    let (tc, tp, u1c, u1p) = (ax(&s.tc)?, ax(&s.tp)?, ax(&s.u1c)?, ax(&s.u1p)?);
    let (v1c, v1p, u2c, u2p) = (ax(&s.v1c)?, ax(&s.v1p)?, ax(&s.u2c)?, ax(&s.u2p)?);
    let (y2, y3, y4) = (ax(&s.y2)?, ax(&s.y3)?, ax(&s.y4)?);

    let cat = |parts: &[&Vec<usize>]| -> Vec<usize> { parts.iter().flat_map(|p| p.iter().copied()).collect() };
    let mi = |a: Vec<usize>, b: Vec<usize>, c: Vec<usize>| j.mutual_information(&a, &b, &c);

    let i1 = mi(u2c.clone(), tp.clone(), tc.clone());
    let i2 = mi(u2p.clone(), tp.clone(), tc.clone());
    let i3 = mi(u2c.clone(), u2p.clone(), tc.clone()) + mi(cat(&[&u2c, &u2p]), tp.clone(), tc.clone());
    let i4 = mi(v1p.clone(), y3.clone(), cat(&[&u2c, &v1c, &u1p, &u1c, &tp, &tc]));
    let i5 = i1 + mi(cat(&[&u2c, &v1p, &v1c, &u1p, &u1c, &tp, &tc]), y3.clone(), vec![]);
    let i6 = mi(cat(&[&v1p, &v1c, &u1p, &tp]), cat(&[&y3, &u2c]), cat(&[&u1c, &tc]));
    let i7 = mi(cat(&[&v1p, &u1p, &tp]), cat(&[&y3, &u2c]), cat(&[&v1c, &u1c, &tc]));
    let i8 = i1 + mi(cat(&[&u2c, &v1p, &u1p, &tp]), y3.clone(), cat(&[&v1c, &u1c, &tc]));
    let i9 = mi(cat(&[&v1c, &v1p]), y3.clone(), cat(&[&u2c, &u1p, &u1c, &tp, &tc]));
    let i10 = i1 + mi(cat(&[&v1p, &u2c]), y3.clone(), cat(&[&v1c, &u1p, &u1c, &tp, &tc]));
    let i11 = i1 + mi(cat(&[&u2c, &v1p, &v1c, &u1p, &tp]), y3.clone(), cat(&[&u1c, &tc]));
    let i12 = i1 + mi(cat(&[&u2c, &v1p, &v1c]), y3.clone(), cat(&[&u1p, &u1c, &tp, &tc]));
    let i13 = mi(u2c.clone(), cat(&[&y4, &u2p]), cat(&[&v1c, &u1c, &tc]));
    let i14 = mi(u2p.clone(), cat(&[&y4, &u2c]), cat(&[&v1c, &u1c, &tc]));
    let i15 = mi(cat(&[&u2c, &u2p, &v1c, &u1c, &tc]), y4.clone(), vec![]);
    let i16 = mi(cat(&[&u2c, &v1c]), cat(&[&y4, &u2p]), cat(&[&u1c, &tc]));
    let i17 = mi(cat(&[&u2p, &v1c]), cat(&[&y4, &u2c]), cat(&[&u1c, &tc]));
    let i18 = mi(cat(&[&u2c, &u2p, &v1c]), y4.clone(), cat(&[&u1c, &tc]));
    let i19 = mi(cat(&[&u2c, &u2p]), y4.clone(), cat(&[&v1c, &u1c, &tc]));
    let i20 = mi(u1p.clone(), y2.clone(), cat(&[&u2c, &u2p, &u1c, &tp, &tc]));
    let i21 = mi(cat(&[&u1c, &u1p]), y2, cat(&[&u2c, &u2p, &tp, &tc]));
    Ok([
        i1, i2, i3, i4, i5, i6, i7, i8, i9, i10, i11, i12, i13, i14, i15, i16, i17, i18, i19, i20, i21,
    ])
}

/// The degraded-channel bounds read off the scheme terms under
/// [`SchemeAssignment::degraded`]: `(R1, R2, R1 + R2)` caps.
pub fn specialized_degraded(i: &[f64; 21]) -> (f64, f64, f64) {
    let t = |k: usize| i[k - 1];
    (t(21), t(13).min(t(16)).min(t(18)).min(t(19)), t(5).min(t(15)))
}

fn simplex(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|v| v / s).collect()
}

/// Random binary joint with the scheme's factorization:
/// `p(tc) p(tp|tc) p(u1c|tc) p(u1p|u1c,tp,tc) p(v1c|tc) p(v1p|v1c,tp,tc)
///  p(x1|v1p,v1c,u1p,u1c,tp,tc) p(u2c,u2p|tp,tc) p(x2|u2c,u2p,tp,tc) p(y2,y3,y4|x1,x2)`.
pub fn random_scheme_joint(rng: &mut impl Rng) -> JointPmf {
    let mut table =
        |parents: usize, k: usize| -> Vec<Vec<f64>> { (0..1 << parents).map(|_| simplex(rng, k)).collect() };
    let ptc = table(0, 2);
    let ptp = table(1, 2);
    let pu1c = table(1, 2);
    let pu1p = table(3, 2);
    let pv1c = table(1, 2);
    let pv1p = table(3, 2);
    let px1 = table(6, 2);
    let pu2 = table(2, 4);
    let px2 = table(4, 2);
    let pch = table(2, 8);
    let mut p = vec![0.0; 1 << 13];
    for (cell, slot) in p.iter_mut().enumerate() {
        // Axis k is bit 12-k of the cell index.
        let b = |k: usize| (cell >> (12 - k)) & 1;
        let (tc, tp, u1c, u1p, v1c, v1p, x1) = (b(0), b(1), b(2), b(3), b(4), b(5), b(6));
        let (u2c, u2p, x2, y2, y3, y4) = (b(7), b(8), b(9), b(10), b(11), b(12));
        *slot = ptc[0][tc]
            * ptp[tc][tp]
            * pu1c[tc][u1c]
            * pu1p[(u1c << 2) | (tp << 1) | tc][u1p]
            * pv1c[tc][v1c]
            * pv1p[(v1c << 2) | (tp << 1) | tc][v1p]
            * px1[(v1p << 5) | (v1c << 4) | (u1p << 3) | (u1c << 2) | (tp << 1) | tc][x1]
            * pu2[(tp << 1) | tc][(u2c << 1) | u2p]
            * px2[(u2c << 3) | (u2p << 2) | (tp << 1) | tc][x2]
            * pch[(x1 << 1) | x2][(y2 << 2) | (y3 << 1) | y4];
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    JointPmf::new(&SCHEME_AXES, &[2; 13], p).expect("valid by construction")
}
