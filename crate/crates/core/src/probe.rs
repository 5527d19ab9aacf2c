//! The CNOT entangling probe, Eve's two read-out measurements, and the exact
//! joint statistics of Bob's and Eve's bits on error-free sifted rounds.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::info::{InfoError, JointDistribution};
use crate::quantum::{
    apply_cnot, contract_control, ket0, ket1, ket_minus, ket_plus, tensor, Polarization, PovmSet,
    QuantumError, StateVector, TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbeError {
    #[error("error probability {0} outside [0, 1/3]")]
    OutOfRange(f64),
    #[error("unknown probe kind {0:?} (expected helstrom or conclusive)")]
    UnknownKind(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Info(#[from] InfoError),
}

/// Error probability `P_E` the probe induces on sifted bits, restricted to
/// `[0, 1/3]`, the range where the unambiguous read-out exists.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ErrorProbability(f64);

impl ErrorProbability {
    pub const MAX: f64 = 1.0 / 3.0;

    /// Values within 1e-12 above 1/3 are snapped to 1/3 so that computed grid
    /// endpoints are accepted.
    pub fn new(value: f64) -> Result<Self, ProbeError> {
        if !(0.0..=Self::MAX + TOLERANCE).contains(&value) {
            return Err(ProbeError::OutOfRange(value));
        }
        Ok(Self(value.min(Self::MAX)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `c = √(1 − 2P_E)`.
    pub fn c(self) -> f64 {
        (1.0 - 2.0 * self.0).sqrt()
    }

    /// `s = √(2P_E)`.
    pub fn s(self) -> f64 {
        (2.0 * self.0).sqrt()
    }
}

impl fmt::Display for ErrorProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeKind {
    /// Minimum-error projective read-out.
    Helstrom,
    /// Unambiguous read-out with an inconclusive outcome.
    Conclusive,
}

impl ProbeKind {
    pub const ALL: [ProbeKind; 2] = [ProbeKind::Helstrom, ProbeKind::Conclusive];

    pub fn as_str(self) -> &'static str {
        match self {
            ProbeKind::Helstrom => "helstrom",
            ProbeKind::Conclusive => "conclusive",
        }
    }

    pub fn eve_outcomes(self) -> &'static [EveOutcome] {
        match self {
            ProbeKind::Helstrom => &[EveOutcome::Zero, EveOutcome::One],
            ProbeKind::Conclusive => &[EveOutcome::Zero, EveOutcome::One, EveOutcome::Inconclusive],
        }
    }
}

impl fmt::Display for ProbeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProbeKind {
    type Err = ProbeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "helstrom" => Ok(ProbeKind::Helstrom),
            "conclusive" | "usd" => Ok(ProbeKind::Conclusive),
            _ => Err(ProbeError::UnknownKind(s.to_owned())),
        }
    }
}

/// BB84 preparation/measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// `{|h⟩, |v⟩}`
    Rectilinear,
    /// `{|r⟩, |ℓ⟩}`
    Diagonal,
}

impl Basis {
    pub const ALL: [Basis; 2] = [Basis::Rectilinear, Basis::Diagonal];

    pub fn polarization(self, bit: Bit) -> Polarization {
        match (self, bit) {
            (Basis::Rectilinear, Bit::Zero) => Polarization::Horizontal,
            (Basis::Rectilinear, Bit::One) => Polarization::Vertical,
            (Basis::Diagonal, Bit::Zero) => Polarization::Right,
            (Basis::Diagonal, Bit::One) => Polarization::Left,
        }
    }

    pub fn ket(self, bit: Bit) -> StateVector {
        self.polarization(bit).ket()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub const ALL: [Bit; 2] = [Bit::Zero, Bit::One];

    pub fn index(self) -> usize {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }

    pub fn flip(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }
}

/// Eve's read-out result. The inconclusive outcome only occurs for
/// [`ProbeKind::Conclusive`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EveOutcome {
    Zero,
    One,
    Inconclusive,
}

impl EveOutcome {
    pub fn index(self) -> usize {
        match self {
            EveOutcome::Zero => 0,
            EveOutcome::One => 1,
            EveOutcome::Inconclusive => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EveOutcome::Zero => "0",
            EveOutcome::One => "1",
            EveOutcome::Inconclusive => "?",
        }
    }
}

pub const BOB_LABELS: [&str; 2] = ["0", "1"];

/// `|t_in⟩ = c|+⟩ + s|−⟩`.
pub fn probe_input(pe: ErrorProbability) -> StateVector {
    ket_plus()
        .lin_comb(pe.c(), &ket_minus(), pe.s())
        .and_then(|s| s.normalize())
        .expect("c² + s² = 1")
}

/// `|t₊⟩ = c|+⟩ + (s/√2)|−⟩`, sub-normalized.
pub fn t_plus(pe: ErrorProbability) -> StateVector {
    ket_plus()
        .lin_comb(pe.c(), &ket_minus(), pe.s() * FRAC_1_SQRT_2)
        .expect("norm² = 1 − P_E")
}

/// `|t₋⟩ = c|+⟩ − (s/√2)|−⟩`, sub-normalized.
pub fn t_minus(pe: ErrorProbability) -> StateVector {
    ket_plus()
        .lin_comb(pe.c(), &ket_minus(), -pe.s() * FRAC_1_SQRT_2)
        .expect("norm² = 1 − P_E")
}

/// `|t_E⟩ = (s/√2)|−⟩`, sub-normalized.
pub fn t_eve(pe: ErrorProbability) -> StateVector {
    ket_minus()
        .scaled(pe.s() * FRAC_1_SQRT_2)
        .expect("norm² = P_E")
}

/// `|τ±⟩ = (s/√2)|+⟩ ∓ c|−⟩`; `sign` is `+1.0` for τ₊ and `-1.0` for τ₋.
fn tau(pe: ErrorProbability, sign: f64) -> StateVector {
    ket_plus()
        .lin_comb(pe.s() * FRAC_1_SQRT_2, &ket_minus(), -sign * pe.c())
        .expect("norm² = 1 − P_E")
}

/// `|τ₊⟩`, orthogonal to `|t₊⟩`.
pub fn tau_plus(pe: ErrorProbability) -> StateVector {
    tau(pe, 1.0)
}

/// `|τ₋⟩`, orthogonal to `|t₋⟩`.
pub fn tau_minus(pe: ErrorProbability) -> StateVector {
    tau(pe, -1.0)
}

/// Target-qubit state paired with Bob's correct bit.
pub fn kept_target(pe: ErrorProbability, bit: Bit) -> StateVector {
    match bit {
        Bit::Zero => t_plus(pe),
        Bit::One => t_minus(pe),
    }
}

/// Target components of the CNOT output
/// `|a⟩ ⊗ |t_in⟩ ↦ |a⟩ ⊗ kept + |a'⟩ ⊗ flipped`, where `a'` is the other
/// ket of Alice's basis. `flipped` carries the basis-dependent sign
/// (`+t_E` rectilinear, `−t_E` diagonal).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOutput {
    pub basis: Basis,
    pub bit: Bit,
    pub kept: StateVector,
    pub flipped: StateVector,
}

impl ProbeOutput {
    /// `|a⟩ ⊗ kept + |a'⟩ ⊗ flipped`.
    pub fn reconstruct(&self) -> StateVector {
        let sent = tensor(&self.basis.ket(self.bit), &self.kept);
        let other = tensor(&self.basis.ket(self.bit.flip()), &self.flipped);
        sent.lin_comb(1.0, &other, 1.0).expect("unitary output")
    }
}

pub fn probe_outputs(pe: ErrorProbability, basis: Basis, bit: Bit) -> ProbeOutput {
    let sign = match basis {
        Basis::Rectilinear => 1.0,
        Basis::Diagonal => -1.0,
    };
    ProbeOutput {
        basis,
        bit,
        kept: kept_target(pe, bit),
        flipped: t_eve(pe).scaled(sign).expect("norm² = P_E"),
    }
}

/// Two-qubit state after Eve's CNOT acts on Alice's photon and `|t_in⟩`.
pub fn entangled_output(pe: ErrorProbability, basis: Basis, bit: Bit) -> StateVector {
    apply_cnot(&tensor(&basis.ket(bit), &probe_input(pe))).expect("two-qubit input")
}

/// `κ = √(4P_E(1 − 2P_E)) / (1 − P_E)`.
pub fn kappa(pe: ErrorProbability) -> f64 {
    let p = pe.value();
    (4.0 * p * (1.0 - 2.0 * p)).sqrt() / (1.0 - p)
}

/// Closed-form false-alarm probability of the Helstrom read-out, `(1 − κ)/2`.
pub fn helstrom_error(pe: ErrorProbability) -> f64 {
    0.5 * (1.0 - kappa(pe))
}

/// The same false-alarm probability as the Born weight of `|1⟩⟨1|` on the
/// normalized `|t₊⟩`.
pub fn helstrom_error_operational(pe: ErrorProbability) -> f64 {
    let target = t_plus(pe).normalize().expect("‖t₊‖² = 1 − P_E > 0");
    crate::quantum::born_probability(&target, &ket1().projector()).expect("qubit dims")
}

/// Helstrom read-out `{|0⟩⟨0|, |1⟩⟨1|}`, labeled by Eve's guessed bit.
pub fn helstrom_povm() -> PovmSet {
    PovmSet::new(
        vec!["0".into(), "1".into()],
        vec![ket0().projector(), ket1().projector()],
    )
    .expect("two qubit projectors")
}

/// Unambiguous read-out of `|t₊⟩` versus `|t₋⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct UsdMeasurement {
    /// Elements `M₊`, `M₋`, `M?` labeled `"0"`, `"1"`, `"?"`.
    pub povm: PovmSet,
    /// Set at `P_E = 0`, where `t₊ = t₋` and every outcome is inconclusive.
    pub degenerate: bool,
}

/// `M₊ = |τ₋⟩⟨τ₋|/(2c²)`, `M₋ = |τ₊⟩⟨τ₊|/(2c²)`, `M? = ((2c² − s²)/(2c²))|+⟩⟨+|`.
pub fn usd_povm(pe: ErrorProbability) -> UsdMeasurement {
    let c2 = pe.c() * pe.c();
    let s2 = pe.s() * pe.s();
    let norm = 1.0 / (2.0 * c2);
    let m_plus = tau_minus(pe).projector().scaled(norm);
    let m_minus = tau_plus(pe).projector().scaled(norm);
    let m_inconclusive = ket_plus()
        .projector()
        .scaled(((2.0 * c2 - s2) * norm).max(0.0));
    UsdMeasurement {
        povm: PovmSet::new(
            vec!["0".into(), "1".into(), "?".into()],
            vec![m_plus, m_minus, m_inconclusive],
        )
        .expect("three qubit operators"),
        degenerate: pe.value() == 0.0,
    }
}

/// Eve's read-out for the given probe variant, outcomes in [`EveOutcome`] index order.
pub fn eve_povm(pe: ErrorProbability, kind: ProbeKind) -> PovmSet {
    match kind {
        ProbeKind::Helstrom => helstrom_povm(),
        ProbeKind::Conclusive => usd_povm(pe).povm,
    }
}

/// Overlap of the normalized `|t±⟩`: `(1 − 3P_E)/(1 − P_E)`.
pub fn inconclusive_probability(pe: ErrorProbability) -> f64 {
    let p = pe.value();
    ((1.0 - 3.0 * p) / (1.0 - p)).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Analytic,
    Empirical,
}

/// Joint table of Bob's bit (rows) and Eve's outcome (columns) on
/// error-free sifted rounds, with provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeStatistics {
    pub joint: JointDistribution,
    pub pe: ErrorProbability,
    pub kind: ProbeKind,
    pub source: Source,
    /// Trials simulated, empirical tables only.
    pub trials: Option<u64>,
    /// Error-free sifted rounds behind the table, empirical tables only.
    pub retained: Option<u64>,
    pub seed: Option<u64>,
    /// Unambiguous read-out at `P_E = 0`.
    pub degenerate: bool,
}

impl ProbeStatistics {
    fn analytic(joint: JointDistribution, pe: ErrorProbability, kind: ProbeKind) -> Self {
        Self {
            joint,
            pe,
            kind,
            source: Source::Analytic,
            trials: None,
            retained: None,
            seed: None,
            degenerate: kind == ProbeKind::Conclusive && pe.value() == 0.0,
        }
    }
}

fn eve_labels(kind: ProbeKind) -> Vec<String> {
    kind.eve_outcomes()
        .iter()
        .map(|o| o.label().to_owned())
        .collect()
}

fn bob_labels() -> Vec<String> {
    BOB_LABELS.iter().map(|s| (*s).to_owned()).collect()
}

/// Diagonal `(1 + κ)/4`, off-diagonal `(1 − κ)/4`.
pub fn helstrom_joint_table(pe: ErrorProbability) -> ProbeStatistics {
    let k = kappa(pe);
    let diag = (1.0 + k) / 4.0;
    let off = ((1.0 - k) / 4.0).max(0.0);
    let joint = JointDistribution::new(
        bob_labels(),
        eve_labels(ProbeKind::Helstrom),
        vec![diag, off, off, diag],
    )
    .expect("valid 2x2 table");
    ProbeStatistics::analytic(joint, pe, ProbeKind::Helstrom)
}

/// `p(j, j) = P_E/(1 − P_E)`, `p(j, ?) = (1 − 3P_E)/(2(1 − P_E))`, never a
/// mis-identification.
pub fn conclusive_joint_table(pe: ErrorProbability) -> ProbeStatistics {
    let p = pe.value();
    let hit = p / (1.0 - p);
    let unsure = 0.5 * inconclusive_probability(pe);
    let joint = JointDistribution::new(
        bob_labels(),
        eve_labels(ProbeKind::Conclusive),
        vec![hit, 0.0, unsure, 0.0, hit, unsure],
    )
    .expect("valid 2x3 table");
    ProbeStatistics::analytic(joint, pe, ProbeKind::Conclusive)
}

pub fn joint_table(pe: ErrorProbability, kind: ProbeKind) -> ProbeStatistics {
    match kind {
        ProbeKind::Helstrom => helstrom_joint_table(pe),
        ProbeKind::Conclusive => conclusive_joint_table(pe),
    }
}

/// Joint table computed from the quantum mechanics directly: run the CNOT on
/// each of Alice's kets in `basis`, keep the target component attached to
/// Bob's matching outcome, and apply Eve's measurement by the Born rule.
pub fn operational_joint_table(
    pe: ErrorProbability,
    kind: ProbeKind,
    basis: Basis,
) -> Result<JointDistribution, ProbeError> {
    let povm = eve_povm(pe, kind);
    let mut cells = Vec::with_capacity(2 * povm.len());
    for bit in Bit::ALL {
        let output = entangled_output(pe, basis, bit);
        let target = contract_control(&output, &basis.ket(bit))?.normalize()?;
        cells.extend(povm.probabilities(&target)?.into_iter().map(|p| 0.5 * p));
    }
    Ok(JointDistribution::new(
        bob_labels(),
        eve_labels(kind),
        cells,
    )?)
}
