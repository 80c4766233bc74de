//! Closed-form Gaussian rate terms for the three look-ahead regimes.
//!
//! Terms are the mutual informations of the superposition/binning scheme evaluated
//! on its Gaussian codebook: `X1` is a sum of independent layers with power shares
//! `β`, `X2` a sum of two binned codewords (`γ1`, `γ2`) and a coherent copy of the
//! cooperation layer (`γ3`).
//!
//! Most terms use the standard closed forms. Those divide by `γ1` and `γ2`, so
//! they are undefined on faces of the allocation simplex that the grid sweep
//! visits; the evaluator writes every DPC coefficient as `α_i = γ_i a_i`, cancels
//! the common factors and evaluates the reduced quotient. `I5`, `I6`, `I7`, `I13`,
//! `I14`, `I16` and `I17` are not taken from the closed-form block: those
//! forms disagree with the mutual informations they stand for (missing noise
//! terms, a full-power `P1`, a rate for a zero-power codeword). `I5`, `I6`, `I7`
//! have short corrected closed forms; the receiver-2 binning block is computed
//! from the covariance of the few Gaussians involved. [`transcribed`] keeps the
//! uncorrected block, term for term.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scenario::{DpcCoefficients, DpcMode, GaussianScenario, PowerAllocation, Strategy};

/// Arguments in `(-NEG_SLACK, 0)` are rounding noise around an exact zero.
const NEG_SLACK: f64 = 1e-12;

/// Which θ argument a domain error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermId {
    /// `I_k`, 1-based.
    I(u8),
    /// Middle θ of `I3`.
    I3Mid,
    /// Last θ of `I3`, shared with `I13` and `I14`.
    I3Prime,
}

impl std::fmt::Display for TermId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TermId::I(k) => write!(f, "I{k}"),
            TermId::I3Mid => write!(f, "I3 (middle term)"),
            TermId::I3Prime => write!(f, "I3'"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum RateError {
    #[error("negative θ argument {value} in {term}")]
    NegativeThetaArgument { term: TermId, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("θ is undefined for argument {0}")]
pub struct ThetaDomainError(pub f64);

/// `θ(x) = ½ log2(1 + x)`, with `θ(+∞) = +∞`.
pub fn theta(x: f64) -> Result<f64, ThetaDomainError> {
    if x.is_nan() || x < 0.0 {
        return Err(ThetaDomainError(x));
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok(0.5 * (1.0 + x).log2())
}

fn theta_term(term: TermId, x: f64) -> Result<f64, RateError> {
    let x = if x < 0.0 && x > -NEG_SLACK { 0.0 } else { x };
    theta(x).map_err(|e| RateError::NegativeThetaArgument { term, value: e.0 })
}

/// `num / den` with the limits used for degenerate allocations:
/// `0/0 = 0` and `positive/0 = +∞`.
fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else if num > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    } else {
        num / den
    }
}

/// The 21 rate terms plus the two inner pieces of `I3`, in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateTerms {
    pub i: [f64; 21],
    pub i3_mid: f64,
    pub i3_prime: f64,
    pub provenance: Strategy,
}

impl RateTerms {
    /// `I_k` with `k` in `1..=21`.
    pub fn get(&self, k: usize) -> f64 {
        self.i[k - 1]
    }

    /// A bare vector, for region math that does not care where the terms came from.
    pub fn from_values(i: [f64; 21], provenance: Strategy) -> Self {
        RateTerms {
            i,
            i3_mid: f64::NAN,
            i3_prime: f64::NAN,
            provenance,
        }
    }
}

/// Auxiliary power-like quantities of the closed-form term block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intermediates {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub f: f64,
}

/// Shared pieces of the DPC coefficients: `D` and the coherent-relay amplitude squared.
fn d_and_coherent(s: &GaussianScenario, a: &PowerAllocation) -> (f64, f64) {
    let d = s.n4 + s.h41 * s.h41 * (a.bp1 + a.b1 + a.bp2 + a.b2) * s.p1 + s.h42 * s.h42 * a.g2 * s.p2;
    let amp = s.h41 * (a.b4 * s.p1).sqrt() + s.h42 * (a.g3 * s.p2).sqrt();
    (d, amp * amp)
}

/// Per-unit coefficients `(a1, a2)` with `α_i = γ_i a_i`.
fn unit_coefficients(s: &GaussianScenario, a: &PowerAllocation, mode: DpcMode) -> (f64, f64) {
    match mode {
        DpcMode::PaperFormula => {
            let (d, gg) = d_and_coherent(s, a);
            let a1 = s.h42 * s.p2 / (s.h42 * s.h42 * a.g1 * s.p2 + d + gg);
            let a2 = s.h42 * s.p2 / (d + gg);
            (a1, a2)
        }
        DpcMode::Zero => (0.0, 0.0),
        DpcMode::Manual(x, y) => {
            let a1 = if a.g1 > 0.0 { x / a.g1 } else { 0.0 };
            let a2 = if a.g2 > 0.0 { y / a.g2 } else { 0.0 };
            (a1, a2)
        }
    }
}

pub fn dpc_coefficients(scen: &GaussianScenario, alloc: &PowerAllocation, mode: DpcMode) -> DpcCoefficients {
    let (alpha1, alpha2) = match mode {
        DpcMode::PaperFormula => {
            let (d, gg) = d_and_coherent(scen, alloc);
            let h42 = scen.h42;
            let p2 = scen.p2;
            (
                h42 * alloc.g1 * p2 / (h42 * h42 * alloc.g1 * p2 + d + gg),
                h42 * alloc.g2 * p2 / (d + gg),
            )
        }
        DpcMode::Zero => (0.0, 0.0),
        DpcMode::Manual(x, y) => (
            if alloc.g1 > 0.0 { x } else { 0.0 },
            if alloc.g2 > 0.0 { y } else { 0.0 },
        ),
    };
    DpcCoefficients { alpha1, alpha2, mode }
}

/// `A, B, C, D, F` as in the closed-form block, given the coefficients.
pub fn intermediates(scen: &GaussianScenario, alloc: &PowerAllocation, dpc: &DpcCoefficients) -> Intermediates {
    let (p1, p2) = (scen.p1, scen.p2);
    let (h41, h42) = (scen.h41, scen.h42);
    let (al1, al2) = (dpc.alpha1, dpc.alpha2);
    let (b3, g1, g2) = (alloc.b3, alloc.g1, alloc.g2);
    let a = g1 * p2 + al1 * al1 * h41 * h41 * b3 * p1;
    let b = al2 * al2 * h41 * h41 * b3 * p1 + (g2 + h42 * h42 * al2 * al2 * g1) * p2;
    let c = h41 * h41 * b3 * g1 * p1 * p2 * (1.0 - al1 * h42).powi(2);
    let (d, _) = d_and_coherent(scen, alloc);
    let f = (h41 * h41 * b3 * al1 * p1 + 2.0 * h42 * g1 * p2) * h41 * h41 * b3 * al1 * g2 * p1 * p2
        + c * al2 * (al2 * h42 * h42 * g1 * p2 + al2 * h41 * h41 * b3 * p1 + 2.0 * h42 * g2 * p2)
        + (a * g2 + g1 * g1 * p2) * h42 * h42 * g2 * p2 * p2;
    Intermediates { a, b, c, d, f }
}

/// θ arguments of all terms, after cancellation of the `γ1`, `γ2` factors.
struct Arguments {
    x: [f64; 21],
    x3_mid: f64,
    x3_prime: f64,
    /// `I13, I14, I16, I17` in bits.
    rx4: [f64; 4],
}

fn arguments(s: &GaussianScenario, al: &PowerAllocation, mode: DpcMode) -> Arguments {
    let (p1, p2) = (s.p1, s.p2);
    let (h31, h32, h41, h42) = (s.h31, s.h32, s.h41, s.h42);
    let (bp1, b1, bp2, b2, b3, b4) = (al.bp1, al.b1, al.bp2, al.b2, al.b3, al.b4);
    let (g1, g2, g3) = (al.g1, al.g2, al.g3);
    let h41s = h41 * h41;
    let h42s = h42 * h42;

    let (a1, a2) = unit_coefficients(s, al, mode);
    let al1 = g1 * a1;
    let al2 = g2 * a2;
    let one_m1 = 1.0 - al1 * h42;
    let one_m2 = 1.0 - al2 * h42;

    // A = γ1 Â, B = γ2 B̂, C = γ1 Ĉ, F = γ1 γ2 F̂; the common denominator
    // (N4 + h41²(β'1+β'2)P1)(Aγ2P2 + Cα2²) + C(1-α2h42)²γ2P2 equals γ1 γ2 (nq K̂ + Ĉ(1-α2h42)²P2).
    let a_hat = p2 + g1 * a1 * a1 * h41s * b3 * p1;
    let c_hat = h41s * b3 * p1 * p2 * one_m1 * one_m1;
    let nq = s.n4 + h41s * (bp1 + bp2) * p1;
    let k_hat = a_hat * p2 + c_hat * g2 * a2 * a2;
    let den = nq * k_hat + c_hat * one_m2 * one_m2 * p2;
    let f_hat = g1 * (h41s * b3 * a1 * p1 + 2.0 * h42 * p2) * h41s * b3 * a1 * p1 * p2
        + g2 * c_hat * a2 * (a2 * h42s * g1 * p2 + a2 * h41s * b3 * p1 + 2.0 * h42 * p2)
        + (a_hat * g2 + g1 * p2) * h42s * p2 * p2;

    let mut x = [0.0; 21];
    x[0] = g1 * a1 * a1 * h41s * b3 * p1 / p2;
    x[1] = g2 * a2 * a2 * h41s * b3 * p1 / ((1.0 + g2 * a2 * a2 * h42s * g1) * p2);
    let x3_mid = g2 * a2 * a2 * h41s * b3 * one_m1 * one_m1 * p1 / a_hat;
    let x3_prime = {
        let t = a1 * h41s * b3 * p1 + h42 * p2;
        g1 * g2 * a2 * a2 * t * t / k_hat
    };

    let n3t = h32 * h32 * g2 * p2 + s.n3;
    x[3] = h31 * h31 * bp1 * p1 / n3t;
    let used1 = bp1 + b1 + bp2 + b2 + b3 + b4;
    x[4] = (h31 * h31 * used1 * p1 + h32 * h32 * (g1 + g3) * p2 + 2.0 * h31 * h32 * (b4 * g3 * p1 * p2).sqrt()) / n3t;
    // Knowing U2c leaves T'p with variance β3 P1 γ1 P2 / A = β3 P1 P2 / Â.
    let tp_left = (h31 - al1 * h32 * h41).powi(2) * b3 * p1 * p2 / a_hat;
    x[5] = (h31 * h31 * (bp1 + b1 + bp2) * p1 + tp_left) / n3t;
    x[6] = (h31 * h31 * (bp1 + bp2) * p1 + tp_left) / n3t;
    x[7] = (h31 * h31 * (bp1 + bp2 + b3) * p1 + h32 * h32 * g1 * p2) / n3t;
    x[8] = h31 * h31 * (bp1 + b1) * p1 / n3t;
    x[9] = (h31 * h31 * bp1 * p1 + h32 * h32 * g1 * p2) / n3t;
    x[10] = (h31 * h31 * (bp1 + b1 + bp2 + b3) * p1 + h32 * h32 * g1 * p2) / n3t;
    x[11] = (h31 * h31 * (bp1 + b1) * p1 + h32 * h32 * g1 * p2) / n3t;

    let rx4 = binning_block(s, al, al1, al2, nq);

    let coherent4 = (b1 + b2 + b4) * h41s * p1 + h42s * g3 * p2 + 2.0 * h41 * h42 * (b4 * g3 * p1 * p2).sqrt();
    x[14] = (k_hat * coherent4 + f_hat) / den;
    x[17] = (h41s * b1 * p1 * k_hat + f_hat) / den;
    x[18] = f_hat / den;

    let h21s = s.h21 * s.h21;
    let den2 = h21s * (bp1 + b1) * p1 + s.n2;
    x[19] = ratio(h21s * bp2 * p1, den2);
    x[20] = ratio(h21s * (bp2 + b2) * p1, den2);

    Arguments {
        x,
        x3_mid,
        x3_prime,
        rx4,
    }
}

/// `I13, I14, I16, I17`: what receiver 2 learns about the binned codewords. Given
/// the layers it already knows, `Y4` depends on the private cooperation layer `t`,
/// the codewords `u` (common) and `v` (private), the relayed layer `w` and lumped
/// noise; `U2c = u + α1 h41 t` and `U2p = v + α2 (h41 t + h42 u)`.
fn binning_block(s: &GaussianScenario, al: &PowerAllocation, al1: f64, al2: f64, nq: f64) -> [f64; 4] {
    let (h41, h42) = (s.h41, s.h42);
    let var = [al.b3 * s.p1, al.g1 * s.p2, al.g2 * s.p2, al.b1 * s.p1, nq];
    let y = [h41, h42, h42, h41, 1.0];
    let u2c = [al1 * h41, 1.0, 0.0, 0.0, 0.0];
    let u2p = [al2 * h41, al2 * h42, 1.0, 0.0, 0.0];
    let w = [0.0, 0.0, 0.0, 1.0, 0.0];
    [
        gaussian_cmi(&var, &[u2c], &[y, u2p], &[w]),
        gaussian_cmi(&var, &[u2p], &[y, u2c], &[w]),
        gaussian_cmi(&var, &[u2c, w], &[y, u2p], &[]),
        gaussian_cmi(&var, &[u2p, w], &[y, u2c], &[]),
    ]
}

/// Relative squared residual below which a vector counts as already spanned.
const SPAN_EPS: f64 = 1e-12;

/// Residual of `x` after projecting out an orthogonal `basis`, in the inner
/// product weighted by the source variances.
fn residual<const N: usize>(var: &[f64; N], basis: &[[f64; N]], x: &[f64; N]) -> [f64; N] {
    let dot = |a: &[f64; N], b: &[f64; N]| (0..N).map(|k| a[k] * b[k] * var[k]).sum::<f64>();
    let mut r = *x;
    // Two passes keep the projection accurate when vectors are nearly dependent.
    for _ in 0..2 {
        for e in basis {
            let c = dot(&r, e) / dot(e, e);
            for k in 0..N {
                r[k] -= c * e[k];
            }
        }
    }
    r
}

fn span<const N: usize>(var: &[f64; N], rows: &[[f64; N]]) -> Vec<[f64; N]> {
    let mut basis = Vec::with_capacity(rows.len());
    for x in rows {
        let n0: f64 = (0..N).map(|k| x[k] * x[k] * var[k]).sum();
        let r = residual(var, &basis, x);
        let n1: f64 = (0..N).map(|k| r[k] * r[k] * var[k]).sum();
        if n1 > SPAN_EPS * n0 {
            basis.push(r);
        }
    }
    basis
}

/// `I(A; B | C)` in bits for jointly Gaussian vectors written as linear
/// combinations of independent sources with variances `var`. Rows with no
/// variance left are skipped; a row of `A` that `B` pins down exactly gives `+∞`.
pub(crate) fn gaussian_cmi<const N: usize>(var: &[f64; N], a: &[[f64; N]], b: &[[f64; N]], c: &[[f64; N]]) -> f64 {
    let mut given_c = span(var, c);
    let mut given_bc = given_c.clone();
    for x in b {
        let n0: f64 = (0..N).map(|k| x[k] * x[k] * var[k]).sum();
        let r = residual(var, &given_bc, x);
        let n1: f64 = (0..N).map(|k| r[k] * r[k] * var[k]).sum();
        if n1 > SPAN_EPS * n0 {
            given_bc.push(r);
        }
    }
    let mut total = 0.0;
    for x in a {
        let n0: f64 = (0..N).map(|k| x[k] * x[k] * var[k]).sum();
        let r1 = residual(var, &given_c, x);
        let v1: f64 = (0..N).map(|k| r1[k] * r1[k] * var[k]).sum();
        if v1 <= SPAN_EPS * n0 {
            continue;
        }
        let r2 = residual(var, &given_bc, x);
        let v2: f64 = (0..N).map(|k| r2[k] * r2[k] * var[k]).sum();
        if v2 <= SPAN_EPS * n0 {
            return f64::INFINITY;
        }
        total += 0.5 * (v1 / v2).log2().max(0.0);
        given_c.push(r1);
        given_bc.push(r2);
    }
    total
}

fn assemble(args: &Arguments, provenance: Strategy) -> Result<RateTerms, RateError> {
    let th = |k: usize| theta_term(TermId::I(k as u8), args.x[k - 1]);
    let i1 = th(1)?;
    let i3_mid = theta_term(TermId::I3Mid, args.x3_mid)?;
    let i3_prime = theta_term(TermId::I3Prime, args.x3_prime)?;
    let mut i = [0.0; 21];
    i[0] = i1;
    i[1] = th(2)?;
    i[2] = i1 + i3_mid + i3_prime;
    i[3] = th(4)?;
    for k in [5, 6, 7, 8, 10, 11, 12] {
        i[k - 1] = i1 + th(k)?;
    }
    i[8] = th(9)?;
    i[12] = args.rx4[0];
    i[13] = args.rx4[1];
    i[14] = th(15)?;
    i[15] = args.rx4[2];
    i[16] = args.rx4[3];
    for k in [18, 19, 20, 21] {
        i[k - 1] = th(k)?;
    }
    Ok(RateTerms {
        i,
        i3_mid,
        i3_prime,
        provenance,
    })
}

/// Terms of the zero look-ahead scheme.
pub fn terms_classical(scen: &GaussianScenario, alloc: &PowerAllocation, dpc: DpcMode) -> Result<RateTerms, RateError> {
    assemble(&arguments(scen, alloc, dpc), Strategy::Classical)
}

/// Receiver-side gains and noises seen when the cognitive transmitter forwards
/// `h·β·Y2` alongside `h(1-β)` times its own codewords.
pub fn no_delay_scenario(scen: &GaussianScenario, beta: f64, h: f64) -> GaussianScenario {
    let sub = |hu1: f64, hu2: f64, nu: f64| {
        (
            hu1 + h * beta * scen.h21 * hu2,
            h * (1.0 - beta) * hu2,
            nu + h * h * beta * beta * hu2 * hu2 * scen.n2,
        )
    };
    let (h31, h32, n3) = sub(scen.h31, scen.h32, scen.n3);
    let (h41, h42, n4) = sub(scen.h41, scen.h42, scen.n4);
    GaussianScenario {
        h31,
        h32,
        n3,
        h41,
        h42,
        n4,
        ..*scen
    }
}

/// Terms of the one-symbol look-ahead scheme: the classical terms on the
/// substituted receiver gains. `h21` and `N2` in `I20`, `I21` are unchanged.
pub fn terms_no_delay(scen: &GaussianScenario, alloc: &PowerAllocation, dpc: DpcMode) -> Result<RateTerms, RateError> {
    let sub = no_delay_scenario(scen, alloc.relay_beta, alloc.relay_h);
    assemble(&arguments(&sub, alloc, dpc), Strategy::NoDelay)
}

/// Terms of the unlimited look-ahead scheme: classical `I1..I19` with the
/// cognitive user decoding the fresh layers `β3`, `β4` in advance.
pub fn terms_lookahead(scen: &GaussianScenario, alloc: &PowerAllocation, dpc: DpcMode) -> Result<RateTerms, RateError> {
    let mut args = arguments(scen, alloc, dpc);
    let h21s = scen.h21 * scen.h21;
    let den = h21s * (alloc.bp1 + alloc.b1) * scen.p1 + scen.n2;
    args.x[19] = ratio(h21s * alloc.b3 * scen.p1, den);
    args.x[20] = ratio(h21s * (alloc.b3 + alloc.b4) * scen.p1, den);
    assemble(&args, Strategy::Lookahead)
}

/// Dispatches on `alloc.strategy`.
pub fn terms(scen: &GaussianScenario, alloc: &PowerAllocation, dpc: DpcMode) -> Result<RateTerms, RateError> {
    match alloc.strategy {
        Strategy::Classical => terms_classical(scen, alloc, dpc),
        Strategy::NoDelay => terms_no_delay(scen, alloc, dpc),
        Strategy::Lookahead => terms_lookahead(scen, alloc, dpc),
    }
}

/// Uncorrected classical term block, kept as an audit
/// trail for the reduced evaluator. Only meaningful where no denominator vanishes;
/// elsewhere entries come out NaN or infinite.
pub mod transcribed {
    use super::*;

    #[derive(Debug, Clone, Copy)]
    pub struct TranscribedTerms {
        pub i: [f64; 21],
        pub i3_mid: f64,
        pub i3_prime: f64,
    }

    fn th(x: f64) -> f64 {
        0.5 * (1.0 + x).log2()
    }

    pub fn transcribed_terms(s: &GaussianScenario, al: &PowerAllocation, dpc: &DpcCoefficients) -> TranscribedTerms {
        let (p1, p2) = (s.p1, s.p2);
        let (h21, h31, h32, h41, h42) = (s.h21, s.h31, s.h32, s.h41, s.h42);
        let (n2, n3, n4) = (s.n2, s.n3, s.n4);
        let (bp1, b1, bp2, b2, b3, b4) = (al.bp1, al.b1, al.bp2, al.b2, al.b3, al.b4);
        let (g1, g2, g3) = (al.g1, al.g2, al.g3);
        let (al1, al2) = (dpc.alpha1, dpc.alpha2);
        let Intermediates { a, b, c, f, .. } = intermediates(s, al, dpc);
        let sq = |v: f64| v * v;

        let mut i = [0.0; 21];
        i[0] = th(sq(al1) * sq(h41) * b3 * p1 / (g1 * p2));
        i[1] = th(sq(al2) * sq(h41) * b3 * p1 / ((g2 + sq(al2) * sq(h42) * g1) * p2));
        let i3_mid = th(sq(al2) * sq(h41) * b3 * sq(1.0 - al1 * h42) * g1 * p1 * p2 / (a * g2 * p2));
        let i3_prime = th(sq(al2) * sq(al1 * sq(h41) * b3 * p1 + h42 * g1 * p2) / (a * g2 * p2 + c * sq(al2)));
        i[2] = i[0] + i3_mid + i3_prime;
        let n3t = sq(h32) * g2 * p2 + n3;
        i[3] = th(sq(h31) * bp1 * p1 / n3t);
        i[4] =
            i[0] + th((sq(h31) * p1 + sq(h32) * (g1 + g3) * p2 + 2.0 * h31 * h32 * (b4 * g3 * p1 * p2).sqrt()) / n3t);
        let cross = sq(al1) * sq(h41) * b3 * (sq(h32) * g2 * p2 - sq(h31) * b3 * p1)
            - 2.0 * al1 * h31 * h32 * h41 * b3 * g1 * p2;
        i[5] = i[0] + th(p1 * (a * sq(h31) * (bp1 + b1 + bp2 + b2 + b3) + cross) / a);
        i[6] = i[0] + th(p1 * (a * sq(h31) * (bp1 + bp2 + b2 + b3) + cross) / a);
        i[7] = i[0] + th((sq(h31) * (bp1 + bp2 + b3) * p1 + sq(h32) * g1 * p2) / n3t);
        i[8] = th(sq(h31) * (bp1 + b1) * p1 / n3t);
        i[9] = i[0] + th((sq(h31) * bp1 * p1 + sq(h32) * g1 * p2) / n3t);
        i[10] = i[0] + th((sq(h31) * (bp1 + b1 + bp2 + b3) * p1 + sq(h32) * g1 * p2) / n3t);
        i[11] = i[0] + th((sq(h31) * (bp1 + b1) * p1 + sq(h32) * g1 * p2) / n3t);
        let nq = n4 + sq(h41) * (bp1 + bp2) * p1;
        let k = a * g2 * p2 + c * sq(al2);
        let den = nq * k + c * sq(1.0 - al2 * h42) * g2 * p2;
        let num13 = a * sq(h41) * b3 * g2 * (1.0 - 2.0 * al2 * h42) * p1
            + c * g2 * (2.0 * al1 * h42 - 1.0)
            + sq(h42) * g1 * (g1 * g2 * sq(1.0 - al2 * h42) * sq(p2) - sq(al2));
        i[12] = i3_prime + th(g2 * sq(p2) * num13 / (b * den));
        let num14 = c / (g1 * p2) * (sq(al2) * sq(h41) * b3 * p1 + 2.0 * al2 * h42 * g2 * (sq(al1) + g1 * p2) * p2)
            + sq(a) * sq(h42) * g2 * p2;
        let den14 = a * nq * k + c * sq(1.0 - al2 * h42) * g2 * p2;
        i[13] = i3_prime + th(num14 / den14);
        let coherent4 =
            (b1 + b2 + b4) * sq(h41) * p1 + sq(h42) * g3 * p2 + 2.0 * h41 * h42 * (b4 * g3 * p1 * p2).sqrt();
        i[14] = th((k * coherent4 + f) / den);
        i[15] = i[12]
            + th(b * sq(h41) * b1 * p1
                / (b * nq
                    + sq(h41) * b3 * g2 * (1.0 - 2.0 * al2 * h42) * p1 * p2
                    + sq(h42) * g1 * g2 * sq(1.0 - al2 * h42) * sq(p2)));
        i[16] = i[13] + th(a * sq(h41) * b1 * p1 / (a * (nq + sq(h41) * g2 * p2) + c));
        i[17] = th((sq(h41) * b1 * p1 * k + f) / den);
        i[18] = th(f / den);
        let den2 = sq(h21) * (bp1 + b1) * p1 + n2;
        i[19] = th(sq(h21) * bp2 * p1 / den2);
        i[20] = th(sq(h21) * (bp2 + b2) * p1 / den2);
        TranscribedTerms { i, i3_mid, i3_prime }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{figure_preset, Preset};

    fn fig6() -> GaussianScenario {
        figure_preset(Preset::Fig6).scenario
    }

    fn golden_alloc() -> PowerAllocation {
        PowerAllocation::new(Strategy::Classical, [0.15, 0.15, 0.15, 0.15, 0.2, 0.2], [0.3, 0.3, 0.3])
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn theta_pinned_values() {
        assert_eq!(theta(0.0).unwrap(), 0.0);
        assert_eq!(theta(3.0).unwrap(), 1.0);
        assert_eq!(theta(1.0).unwrap(), 0.5);
        assert!((theta(6.0).unwrap() - 1.403_677_461_028_802_5).abs() < 1e-15);
        assert_eq!(theta(f64::INFINITY).unwrap(), f64::INFINITY);
        assert!(theta(-0.1).is_err());
        assert!(theta(f64::NAN).is_err());
    }

    // Reference values from a 40-digit evaluation of the uncorrected expressions.
    const GOLDEN_ALPHA: [f64; 2] = [0.160_429_119_302_811_12, 0.191_084_663_595_751_46];
    const GOLDEN_ABCDF: [f64; 5] = [
        1.816_986_751_531_381_9,
        1.889_822_837_707_293_7,
        0.837_396_565_293_008_2,
        4.78,
        13.076_607_036_507_089,
    ];
    const GOLDEN_TRANSCRIBED: [f64; 21] = [
        0.006_775_496_858_110_886_2,
        0.009_257_695_962_256_090_6,
        0.041_902_540_925_238_485,
        0.269_150_530_978_514_99,
        1.311_828_038_893_429_6,
        1.247_973_788_578_729_9,
        1.121_300_260_277_392_7,
        0.800_464_023_685_338_98,
        0.464_714_708_813_721_43,
        0.488_419_607_679_850_31,
        0.901_595_563_937_335_44,
        0.638_896_590_576_660_75,
        0.326_575_136_682_212_8,
        0.323_747_486_911_896_24,
        1.187_938_072_069_244_2,
        0.421_989_684_873_602_88,
        0.420_702_051_347_606_8,
        0.779_621_398_876_979_5,
        0.724_640_272_177_570_42,
        0.201_049_221_785_672_84,
        0.358_103_516_999_704_38,
    ];
    const GOLDEN_I3_PRIME: f64 = 0.028_414_596_567_226_736;

    // Log-determinant evaluation of each mutual information on the Gaussian
    // codebook (independent of the closed forms).
    const GOLDEN_MAPPED: [f64; 21] = [
        0.006_775_496_858_110_769,
        0.009_257_695_962_256_368,
        0.041_902_540_925_238_54,
        0.269_150_530_978_513_6,
        1.311_828_038_893_429,
        0.763_114_475_682_615_4,
        0.638_632_462_134_352_8,
        0.800_464_023_685_339_2,
        0.464_714_708_813_718_9,
        0.488_419_607_679_851_6,
        0.901_595_563_937_333,
        0.638_896_590_576_660_4,
        0.339_565_513_770_395_9,
        0.475_006_019_134_653_7,
        1.187_938_072_069_244_3,
        0.434_397_561_541_641_83,
        0.554_463_222_430_326_9,
        0.779_621_398_876_979_7,
        0.724_640_272_177_571_5,
        0.201_049_221_785_673_2,
        0.358_103_516_999_704_44,
    ];

    #[test]
    fn golden_point_matches_reference() {
        let scen = fig6();
        let a = golden_alloc();
        let dpc = dpc_coefficients(&scen, &a, DpcMode::PaperFormula);
        assert!(close(dpc.alpha1, GOLDEN_ALPHA[0], 1e-14));
        assert!(close(dpc.alpha2, GOLDEN_ALPHA[1], 1e-14));
        let m = intermediates(&scen, &a, &dpc);
        for (got, want) in [m.a, m.b, m.c, m.d, m.f].into_iter().zip(GOLDEN_ABCDF) {
            assert!(close(got, want, 1e-13), "{got} vs {want}");
        }
        let t = terms_classical(&scen, &a, DpcMode::PaperFormula).unwrap();
        for k in 1..=21 {
            assert!(
                close(t.get(k), GOLDEN_MAPPED[k - 1], 1e-12),
                "I{k}: {} vs {}",
                t.get(k),
                GOLDEN_MAPPED[k - 1]
            );
        }
        assert!(close(t.i3_prime, GOLDEN_I3_PRIME, 1e-12));
        let p = transcribed::transcribed_terms(&scen, &a, &dpc);
        for k in 1..=21 {
            assert!(close(p.i[k - 1], GOLDEN_TRANSCRIBED[k - 1], 1e-12), "transcribed I{k}");
        }
        // The uncorrected block and the codebook agree except on these terms.
        for k in 1..=21 {
            let same = close(GOLDEN_TRANSCRIBED[k - 1], GOLDEN_MAPPED[k - 1], 1e-12);
            assert_eq!(same, ![6, 7, 13, 14, 16, 17].contains(&k), "I{k}");
        }
    }

    #[test]
    fn dpc_coefficients_vanish_with_their_codeword() {
        let scen = fig6();
        let mut a = golden_alloc();
        a.g1 = 0.0;
        assert_eq!(dpc_coefficients(&scen, &a, DpcMode::PaperFormula).alpha1, 0.0);
        let mut b = golden_alloc();
        b.g2 = 0.0;
        assert_eq!(dpc_coefficients(&scen, &b, DpcMode::PaperFormula).alpha2, 0.0);
        assert_eq!(dpc_coefficients(&scen, &b, DpcMode::Manual(0.3, 0.4)).alpha2, 0.0);
    }

    #[test]
    fn intermediates_trivial_faces() {
        let scen = fig6();
        let mut a = golden_alloc();
        a.b3 = 0.0;
        a.g1 = 0.0;
        let m = intermediates(&scen, &a, &dpc_coefficients(&scen, &a, DpcMode::PaperFormula));
        assert_eq!((m.a, m.c), (0.0, 0.0));
        let mut b = golden_alloc();
        b.b3 = 0.0;
        let zero = dpc_coefficients(&scen, &b, DpcMode::Zero);
        assert_eq!(intermediates(&scen, &b, &zero).b, b.g2 * scen.p2);
        assert!(intermediates(&scen, &b, &zero).d >= scen.n4);
    }

    #[test]
    fn no_binning_layer_means_no_binning_cost() {
        let scen = fig6();
        let mut a = golden_alloc();
        a.b3 = 0.0;
        let t = terms_classical(&scen, &a, DpcMode::PaperFormula).unwrap();
        assert_eq!((t.get(1), t.get(2)), (0.0, 0.0));
    }

    #[test]
    fn zero_allocation_terms() {
        let scen = fig6();
        let t = terms_classical(
            &scen,
            &PowerAllocation::zero(Strategy::Classical),
            DpcMode::PaperFormula,
        )
        .unwrap();
        assert_eq!(t.i, [0.0; 21]);
    }

    #[test]
    fn i3_is_sum_of_its_pieces() {
        let t = terms_classical(&fig6(), &golden_alloc(), DpcMode::PaperFormula).unwrap();
        assert!((t.get(3) - (t.get(1) + t.i3_mid + t.i3_prime)).abs() <= 1e-12);
        assert!(t.get(3) >= t.get(1) && t.get(3) >= t.i3_prime);
    }

    #[test]
    fn no_delay_identity_reduction() {
        let scen = fig6();
        let a = golden_alloc();
        let c = terms_classical(&scen, &a, DpcMode::PaperFormula).unwrap();
        let mut nd = a.with_relay(0.0, 1.0);
        nd.strategy = Strategy::NoDelay;
        let n = terms_no_delay(&scen, &nd, DpcMode::PaperFormula).unwrap();
        assert_eq!(c.i, n.i);
    }

    #[test]
    fn full_relaying_removes_cognitive_codewords() {
        let s = no_delay_scenario(&fig6(), 1.0, 0.5);
        assert_eq!((s.h32, s.h42), (0.0, 0.0));
        assert!((s.h31 - (1.0 + 0.5 * 0.55_f64.sqrt())).abs() < 1e-15);
        assert!((s.n4 - 1.25).abs() < 1e-15);
    }

    #[test]
    fn lookahead_decode_terms() {
        let scen = figure_preset(Preset::Fig10).scenario;
        let mut a = PowerAllocation::new(Strategy::Lookahead, [0.2, 0.2, 0.0, 0.0, 0.0, 0.0], [0.3, 0.3, 0.3]);
        let t = terms_lookahead(&scen, &a, DpcMode::PaperFormula).unwrap();
        assert_eq!((t.get(20), t.get(21)), (0.0, 0.0));

        a.bp1 = 0.0;
        a.b1 = 0.0;
        a.b3 = 0.3;
        let noiseless = GaussianScenario { n2: 0.0, ..scen };
        let t = terms_lookahead(&noiseless, &a, DpcMode::PaperFormula).unwrap();
        assert_eq!(t.get(20), f64::INFINITY);

        let mut b = PowerAllocation::new(Strategy::Lookahead, [0.1, 0.2, 0.0, 0.0, 0.3, 0.2], [0.3, 0.3, 0.3]);
        b.strategy = Strategy::Lookahead;
        let loud = terms_lookahead(&GaussianScenario { n2: 100.0, ..scen }, &b, DpcMode::PaperFormula).unwrap();
        let quiet = terms_lookahead(&GaussianScenario { n2: 0.01, ..scen }, &b, DpcMode::PaperFormula).unwrap();
        assert_eq!(loud.i[..19], quiet.i[..19]);
        assert!(quiet.get(20) > loud.get(20) && quiet.get(21) > loud.get(21));
    }

    #[test]
    fn manual_coefficients_keep_terms_nonnegative() {
        let scen = fig6();
        let a = golden_alloc();
        for a1 in [-1.0, -0.2, 0.0, 0.2, 1.0, 3.0] {
            for a2 in [-1.0, -0.2, 0.0, 0.2, 1.0, 3.0] {
                let t = terms_classical(&scen, &a, DpcMode::Manual(a1, a2)).unwrap();
                assert!(t.i.iter().all(|&v| v >= 0.0), "{a1} {a2}: {:?}", t.i);
            }
        }
    }

    #[test]
    fn negative_arguments_are_reported() {
        assert!(matches!(
            theta_term(TermId::I(13), -0.25),
            Err(RateError::NegativeThetaArgument {
                term: TermId::I(13),
                ..
            })
        ));
        assert_eq!(theta_term(TermId::I(13), -1e-13).unwrap(), 0.0);
    }
}
