//! Physical channel description, power-allocation vectors and their validity rules.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack allowed on the fraction-sum constraints so that grid points such as
/// six copies of 1/6 are not rejected by rounding.
const SUM_SLACK: f64 = 1e-9;
/// Relative slack on the relay power constraint `h^2 P' <= P2`.
const RELAY_SLACK: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("scenario field {field} is not finite ({value})")]
    NonFinite { field: &'static str, value: f64 },
    #[error("scenario field {field} = {value} is out of range ({rule})")]
    OutOfRange {
        field: &'static str,
        value: f64,
        rule: &'static str,
    },
    #[error("unknown preset `{0}` (expected one of fig6, fig7, fig8, fig9strong, fig9mixed, fig10)")]
    UnknownPreset(String),
    #[error("malformed scenario file: {0}")]
    Parse(String),
}

/// Real-valued Gaussian channel:
/// `Y2 = h21 X1 + Z2`, `Y3 = h31 X1 + h32 X2 + Z3`, `Y4 = h41 X1 + h42 X2 + Z4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianScenario {
    #[serde(rename = "P1")]
    pub p1: f64,
    #[serde(rename = "P2")]
    pub p2: f64,
    pub h21: f64,
    pub h31: f64,
    pub h32: f64,
    pub h41: f64,
    pub h42: f64,
    #[serde(rename = "N2")]
    pub n2: f64,
    #[serde(rename = "N3")]
    pub n3: f64,
    #[serde(rename = "N4")]
    pub n4: f64,
}

impl GaussianScenario {
    /// Powers may be zero here; a zero-power scenario is well formed but admits
    /// no valid allocation (see [`validate_allocation`]).
    pub fn validate(&self) -> Result<(), ScenarioError> {
        for (field, value) in self.fields() {
            if !value.is_finite() {
                return Err(ScenarioError::NonFinite { field, value });
            }
        }
        let nonneg = [("P1", self.p1), ("P2", self.p2), ("N2", self.n2)];
        for (field, value) in nonneg {
            if value < 0.0 {
                return Err(ScenarioError::OutOfRange {
                    field,
                    value,
                    rule: ">= 0",
                });
            }
        }
        for (field, value) in [("N3", self.n3), ("N4", self.n4)] {
            if value <= 0.0 {
                return Err(ScenarioError::OutOfRange {
                    field,
                    value,
                    rule: "> 0",
                });
            }
        }
        Ok(())
    }

    pub fn fields(&self) -> [(&'static str, f64); 10] {
        [
            ("P1", self.p1),
            ("P2", self.p2),
            ("h21", self.h21),
            ("h31", self.h31),
            ("h32", self.h32),
            ("h41", self.h41),
            ("h42", self.h42),
            ("N2", self.n2),
            ("N3", self.n3),
            ("N4", self.n4),
        ]
    }

    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let scen: GaussianScenario = serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        scen.validate()?;
        Ok(scen)
    }

    /// Stable 64-bit FNV-1a digest of the bit patterns of all fields, used to tag
    /// frontiers computed on this scenario.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for (_, v) in self.fields() {
            for b in v.to_bits().to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Zero look-ahead: block-Markov partial decode-and-forward with rate splitting and DPC.
    Classical,
    /// One symbol of look-ahead: adds instantaneous amplify-and-forward relaying.
    NoDelay,
    /// Unlimited look-ahead: the cognitive user pre-decodes before transmitting.
    Lookahead,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Classical, Strategy::NoDelay, Strategy::Lookahead];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Classical => "classical",
            Strategy::NoDelay => "nodelay",
            Strategy::Lookahead => "lookahead",
        }
    }
}

/// One point of the allocation union: fractions of `P1` (`bp1..b4`) and of `P2`
/// (`g1..g3`), plus the instantaneous-relaying pair used only by [`Strategy::NoDelay`].
///
/// Roles of the primary fractions: `bp1`/`b1` carry the private/common parts that
/// the cognitive user does not relay, `bp2`/`b2` the parts it decodes and relays,
/// `b3` the fresh cooperative layer that only Tx1 knows and `b4` the layer sent
/// coherently by both transmitters. On the cognitive side `g1`/`g2` are its
/// common/private codewords and `g3` the power spent on coherent relaying.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerAllocation {
    pub bp1: f64,
    pub b1: f64,
    pub bp2: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub relay_beta: f64,
    pub relay_h: f64,
    pub strategy: Strategy,
}

impl PowerAllocation {
    pub fn zero(strategy: Strategy) -> Self {
        PowerAllocation {
            bp1: 0.0,
            b1: 0.0,
            bp2: 0.0,
            b2: 0.0,
            b3: 0.0,
            b4: 0.0,
            g1: 0.0,
            g2: 0.0,
            g3: 0.0,
            relay_beta: 0.0,
            relay_h: 1.0,
            strategy,
        }
    }

    /// `betas = [bp1, b1, bp2, b2, b3, b4]`, `gammas = [g1, g2, g3]`.
    pub fn new(strategy: Strategy, betas: [f64; 6], gammas: [f64; 3]) -> Self {
        let [bp1, b1, bp2, b2, b3, b4] = betas;
        let [g1, g2, g3] = gammas;
        PowerAllocation {
            bp1,
            b1,
            bp2,
            b2,
            b3,
            b4,
            g1,
            g2,
            g3,
            relay_beta: 0.0,
            relay_h: 1.0,
            strategy,
        }
    }

    pub fn with_relay(mut self, beta: f64, h: f64) -> Self {
        self.relay_beta = beta;
        self.relay_h = h;
        self
    }

    pub fn betas(&self) -> [f64; 6] {
        [self.bp1, self.b1, self.bp2, self.b2, self.b3, self.b4]
    }

    pub fn gammas(&self) -> [f64; 3] {
        [self.g1, self.g2, self.g3]
    }

    pub fn get(&self, field: AllocField) -> f64 {
        match field {
            AllocField::Bp1 => self.bp1,
            AllocField::B1 => self.b1,
            AllocField::Bp2 => self.bp2,
            AllocField::B2 => self.b2,
            AllocField::B3 => self.b3,
            AllocField::B4 => self.b4,
            AllocField::G1 => self.g1,
            AllocField::G2 => self.g2,
            AllocField::G3 => self.g3,
            AllocField::RelayBeta => self.relay_beta,
        }
    }

    pub fn set(&mut self, field: AllocField, value: f64) {
        match field {
            AllocField::Bp1 => self.bp1 = value,
            AllocField::B1 => self.b1 = value,
            AllocField::Bp2 => self.bp2 = value,
            AllocField::B2 => self.b2 = value,
            AllocField::B3 => self.b3 = value,
            AllocField::B4 => self.b4 = value,
            AllocField::G1 => self.g1 = value,
            AllocField::G2 => self.g2 = value,
            AllocField::G3 => self.g3 = value,
            AllocField::RelayBeta => self.relay_beta = value,
        }
    }
}

/// Fraction-valued allocation fields that grids enumerate and masks can pin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllocField {
    Bp1,
    B1,
    Bp2,
    B2,
    B3,
    B4,
    G1,
    G2,
    G3,
    RelayBeta,
}

impl AllocField {
    pub const PRIMARY: [AllocField; 6] = [
        AllocField::Bp1,
        AllocField::B1,
        AllocField::Bp2,
        AllocField::B2,
        AllocField::B3,
        AllocField::B4,
    ];
    pub const COGNITIVE: [AllocField; 3] = [AllocField::G1, AllocField::G2, AllocField::G3];

    pub fn name(self) -> &'static str {
        match self {
            AllocField::Bp1 => "bp1",
            AllocField::B1 => "b1",
            AllocField::Bp2 => "bp2",
            AllocField::B2 => "b2",
            AllocField::B3 => "b3",
            AllocField::B4 => "b4",
            AllocField::G1 => "g1",
            AllocField::G2 => "g2",
            AllocField::G3 => "g3",
            AllocField::RelayBeta => "relay_beta",
        }
    }

    /// Accepts the short names plus spelled-out aliases (`gamma3`, `beta1p`, `beta`).
    pub fn parse(name: &str) -> Option<AllocField> {
        let f = match name.to_ascii_lowercase().as_str() {
            "bp1" | "beta1p" | "beta1'" => AllocField::Bp1,
            "b1" | "beta1" => AllocField::B1,
            "bp2" | "beta2p" | "beta2'" => AllocField::Bp2,
            "b2" | "beta2" => AllocField::B2,
            "b3" | "beta3" => AllocField::B3,
            "b4" | "beta4" => AllocField::B4,
            "g1" | "gamma1" => AllocField::G1,
            "g2" | "gamma2" => AllocField::G2,
            "g3" | "gamma3" => AllocField::G3,
            "relay_beta" | "beta" => AllocField::RelayBeta,
            _ => return None,
        };
        Some(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    NonFinite(AllocField),
    NonPositivePower,
    FractionOutOfRange { field: AllocField, value: f64 },
    PrimarySumExceeded(f64),
    CognitiveSumExceeded(f64),
    LookaheadRelaysCooperativeLayers,
    RelayNormalizerNotPositive(f64),
    RelayPowerExceeded { load: f64, budget: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NonFinite(field) => write!(f, "{} is not finite", field.name()),
            Violation::NonPositivePower => write!(f, "P1 and P2 must both be positive"),
            Violation::FractionOutOfRange { field, value } => {
                write!(f, "{} = {value} is outside [0, 1]", field.name())
            }
            Violation::PrimarySumExceeded(s) => write!(f, "primary fractions sum to {s} > 1"),
            Violation::CognitiveSumExceeded(s) => write!(f, "cognitive fractions sum to {s} > 1"),
            Violation::LookaheadRelaysCooperativeLayers => {
                write!(f, "look-ahead strategy requires bp2 = b2 = 0")
            }
            Violation::RelayNormalizerNotPositive(h) => write!(f, "relay normalizer h = {h} must be positive"),
            Violation::RelayPowerExceeded { load, budget } => {
                write!(f, "relay power h^2 P' = {load} exceeds P2 = {budget}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Validity {
    Valid,
    Invalid(Violation),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Checks one allocation against the union constraints of its strategy and
/// returns the first violation found. Never panics on finite or non-finite input.
pub fn validate_allocation(alloc: &PowerAllocation, scen: &GaussianScenario) -> Validity {
    let mut fields: Vec<AllocField> = AllocField::PRIMARY
        .iter()
        .chain(AllocField::COGNITIVE.iter())
        .copied()
        .collect();
    if alloc.strategy == Strategy::NoDelay {
        fields.push(AllocField::RelayBeta);
    }
    for &field in &fields {
        let v = alloc.get(field);
        if !v.is_finite() {
            return Validity::Invalid(Violation::NonFinite(field));
        }
    }
    if !(scen.p1 > 0.0 && scen.p2 > 0.0) {
        return Validity::Invalid(Violation::NonPositivePower);
    }
    for &field in &fields {
        let v = alloc.get(field);
        if !(0.0..=1.0).contains(&v) {
            return Validity::Invalid(Violation::FractionOutOfRange { field, value: v });
        }
    }
    let primary: f64 = alloc.betas().iter().sum();
    if primary > 1.0 + SUM_SLACK {
        return Validity::Invalid(Violation::PrimarySumExceeded(primary));
    }
    let cognitive: f64 = alloc.gammas().iter().sum();
    if cognitive > 1.0 + SUM_SLACK {
        return Validity::Invalid(Violation::CognitiveSumExceeded(cognitive));
    }
    match alloc.strategy {
        Strategy::Classical => Validity::Valid,
        Strategy::Lookahead => {
            if alloc.bp2 != 0.0 || alloc.b2 != 0.0 {
                Validity::Invalid(Violation::LookaheadRelaysCooperativeLayers)
            } else {
                Validity::Valid
            }
        }
        Strategy::NoDelay => {
            let h = alloc.relay_h;
            if !(h.is_finite() && h > 0.0) {
                return Validity::Invalid(Violation::RelayNormalizerNotPositive(h));
            }
            let load = h * h * relay_power_load(scen, alloc);
            if load > scen.p2 * (1.0 + RELAY_SLACK) {
                Validity::Invalid(Violation::RelayPowerExceeded { load, budget: scen.p2 })
            } else {
                Validity::Valid
            }
        }
    }
}

/// Unnormalized transmit power `P'` of the cognitive transmitter when it forwards
/// `beta` times its received symbol on top of its own codewords.
pub fn relay_power_load(scen: &GaussianScenario, alloc: &PowerAllocation) -> f64 {
    let beta = alloc.relay_beta;
    let s = alloc.bp1 + alloc.b1 + alloc.bp2 + alloc.b2 + alloc.b3;
    let coherent = scen.h21 * beta * (alloc.b4 * scen.p1).sqrt() + (1.0 - beta) * (alloc.g3 * scen.p2).sqrt();
    scen.h21 * scen.h21 * beta * beta * s * scen.p1
        + coherent * coherent
        + beta * beta * scen.n2
        + (1.0 - beta) * (1.0 - beta) * (alloc.g1 + alloc.g2) * scen.p2
}

/// Largest normalizer `h` with `h^2 P' <= P2`; `None` when `P' = 0` (any `h` works).
pub fn max_relay_h(scen: &GaussianScenario, alloc: &PowerAllocation) -> Option<f64> {
    let load = relay_power_load(scen, alloc);
    if load > 0.0 {
        Some((scen.p2 / load).sqrt())
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DpcMode {
    /// Costa-style coefficients computed from the allocation.
    PaperFormula,
    /// Fixed coefficients; a coefficient attached to a zero-power codeword is ignored.
    Manual(f64, f64),
    /// No dirty-paper precoding.
    Zero,
}

impl DpcMode {
    /// Parses `paper`, `zero` or `manual:a1,a2`.
    pub fn parse(text: &str) -> Option<DpcMode> {
        match text {
            "paper" => Some(DpcMode::PaperFormula),
            "zero" => Some(DpcMode::Zero),
            _ => {
                let rest = text.strip_prefix("manual:")?;
                let (a, b) = rest.split_once(',')?;
                let a1: f64 = a.trim().parse().ok()?;
                let a2: f64 = b.trim().parse().ok()?;
                (a1.is_finite() && a2.is_finite()).then_some(DpcMode::Manual(a1, a2))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            DpcMode::PaperFormula => "paper".to_string(),
            DpcMode::Zero => "zero".to_string(),
            DpcMode::Manual(a, b) => format!("manual:{a},{b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpcCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub mode: DpcMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig6,
    Fig7,
    Fig8,
    Fig9Strong,
    Fig9Mixed,
    Fig10,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig6,
        Preset::Fig7,
        Preset::Fig8,
        Preset::Fig9Strong,
        Preset::Fig9Mixed,
        Preset::Fig10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
            Preset::Fig9Strong => "fig9strong",
            Preset::Fig9Mixed => "fig9mixed",
            Preset::Fig10 => "fig10",
        }
    }

    pub fn parse(name: &str) -> Result<Preset, ScenarioError> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| ScenarioError::UnknownPreset(name.to_string()))
    }
}

/// Parameter swept across the curves of one figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PresetSweep {
    H21(Vec<f64>),
    N2(Vec<f64>),
}

/// A strategy with fields pinned, as used by the ablation figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ablation {
    pub label: String,
    pub strategy: Strategy,
    pub pinned: Vec<(AllocField, f64)>,
    pub dpc: DpcMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetSpec {
    pub preset: Preset,
    /// Base scenario; a sweep overrides one of its fields per curve.
    pub scenario: GaussianScenario,
    pub strategies: Vec<Strategy>,
    pub sweep: Option<PresetSweep>,
    pub include_hk: bool,
    pub include_outer: bool,
    pub ablations: Vec<Ablation>,
}

impl PresetSpec {
    /// One scenario per sweep value (or just the base scenario).
    pub fn scenarios(&self) -> Vec<(Option<f64>, GaussianScenario)> {
        match &self.sweep {
            None => vec![(None, self.scenario)],
            Some(PresetSweep::H21(vals)) => vals
                .iter()
                .map(|&v| {
                    (
                        Some(v),
                        GaussianScenario {
                            h21: v,
                            ..self.scenario
                        },
                    )
                })
                .collect(),
            Some(PresetSweep::N2(vals)) => vals
                .iter()
                .map(|&v| (Some(v), GaussianScenario { n2: v, ..self.scenario }))
                .collect(),
        }
    }
}

fn base_scenario(p1: f64, p2: f64, h32: f64, h41: f64) -> GaussianScenario {
    GaussianScenario {
        p1,
        p2,
        h21: 1.0,
        h31: 1.0,
        h32,
        h41,
        h42: 1.0,
        n2: 1.0,
        n3: 1.0,
        n4: 1.0,
    }
}

fn ablations() -> Vec<Ablation> {
    let mut out = Vec::new();
    for strategy in Strategy::ALL {
        let name = strategy.name();
        out.push(Ablation {
            label: name.to_string(),
            strategy,
            pinned: vec![],
            dpc: DpcMode::PaperFormula,
        });
        out.push(Ablation {
            label: format!("{name}-gamma3-0"),
            strategy,
            pinned: vec![(AllocField::G3, 0.0)],
            dpc: DpcMode::PaperFormula,
        });
        out.push(Ablation {
            label: format!("{name}-alpha-0"),
            strategy,
            pinned: vec![],
            dpc: DpcMode::Zero,
        });
        if strategy == Strategy::NoDelay {
            out.push(Ablation {
                label: format!("{name}-beta-0"),
                strategy,
                pinned: vec![(AllocField::RelayBeta, 0.0)],
                dpc: DpcMode::PaperFormula,
            });
        }
    }
    out
}

/// Parameter sets of the comparison figures.
pub fn figure_preset(preset: Preset) -> PresetSpec {
    let weak = 0.55_f64.sqrt();
    let strong = 1.5_f64.sqrt();
    let all = Strategy::ALL.to_vec();
    let h21_sweep = Some(PresetSweep::H21(vec![1.0, 4.0]));
    match preset {
        Preset::Fig6 => PresetSpec {
            preset,
            scenario: base_scenario(6.0, 6.0, weak, weak),
            strategies: all,
            sweep: h21_sweep,
            include_hk: true,
            include_outer: false,
            ablations: vec![],
        },
        Preset::Fig7 => PresetSpec {
            preset,
            scenario: base_scenario(6.0, 1.5, weak, weak),
            strategies: all,
            sweep: h21_sweep,
            include_hk: true,
            include_outer: true,
            ablations: vec![],
        },
        Preset::Fig8 => PresetSpec {
            preset,
            scenario: base_scenario(6.0, 6.0, weak, weak),
            strategies: all,
            sweep: None,
            include_hk: false,
            include_outer: false,
            ablations: ablations(),
        },
        Preset::Fig9Strong => PresetSpec {
            preset,
            scenario: base_scenario(6.0, 6.0, strong, strong),
            strategies: all,
            sweep: h21_sweep,
            include_hk: true,
            include_outer: false,
            ablations: vec![],
        },
        Preset::Fig9Mixed => PresetSpec {
            preset,
            scenario: base_scenario(6.0, 6.0, weak, strong),
            strategies: all,
            sweep: h21_sweep,
            include_hk: true,
            include_outer: false,
            ablations: vec![],
        },
        Preset::Fig10 => PresetSpec {
            preset,
            scenario: base_scenario(6.0, 6.0, 2.0_f64.sqrt(), 0.3_f64.sqrt()),
            strategies: vec![Strategy::Lookahead],
            sweep: Some(PresetSweep::N2(vec![100.0, 10.0, 1.0, 0.1, 0.0])),
            include_hk: true,
            include_outer: false,
            ablations: vec![],
        },
    }
}
