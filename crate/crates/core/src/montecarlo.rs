//! Seeded Monte Carlo replay of BB84 rounds under the entangling probe.
//!
//! Each trial draws from its own ChaCha8 stream, keyed by the run seed and
//! selected by the trial index, so any partition of the index range over
//! worker threads produces the same counts as a serial run.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::info::{renyi_mutual_information, Conditioning, EntropyOrder, JointDistribution};
use crate::probe::{
    entangled_output, eve_povm, Basis, Bit, ErrorProbability, EveOutcome, ProbeError, ProbeKind,
    ProbeStatistics, Source, BOB_LABELS,
};
use crate::quantum::{contract_control, PovmSet, StateVector};

const CHUNK: u64 = 8192;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulationError {
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error("no error-free sifted rounds were retained")]
    InsufficientData,
    #[error("tables are not comparable: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Probe(#[from] ProbeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub pe: ErrorProbability,
    pub kind: ProbeKind,
    pub trials: u64,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn new(pe: f64, kind: ProbeKind, trials: u64, seed: u64) -> Result<Self, SimulationError> {
        if trials == 0 {
            return Err(SimulationError::NoTrials);
        }
        Ok(Self {
            pe: ErrorProbability::new(pe)?,
            kind,
            trials,
            seed,
        })
    }
}

/// One protocol round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub alice_bit: Bit,
    pub alice_basis: Basis,
    pub bob_basis: Basis,
    pub bob_bit: Bit,
    pub eve_outcome: EveOutcome,
    pub sifted: bool,
    pub error_free: bool,
}

/// Additive tallies over a set of trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TrialCounts {
    pub trials: u64,
    pub sifted: u64,
    pub sifted_errors: u64,
    /// `[bob bit][eve outcome index]` over error-free sifted rounds.
    pub error_free: [[u64; 3]; 2],
}

impl TrialCounts {
    pub fn record(&mut self, t: &TrialRecord) {
        self.trials += 1;
        if t.sifted {
            self.sifted += 1;
            if !t.error_free {
                self.sifted_errors += 1;
            }
        }
        if t.error_free {
            self.error_free[t.bob_bit.index()][t.eve_outcome.index()] += 1;
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.sifted += other.sifted;
        self.sifted_errors += other.sifted_errors;
        for (row, other_row) in self.error_free.iter_mut().zip(other.error_free) {
            for (cell, add) in row.iter_mut().zip(other_row) {
                *cell += add;
            }
        }
        self
    }

    pub fn retained(&self) -> u64 {
        self.error_free.iter().flatten().sum()
    }
}

/// Deterministic per-trial generator: the seed keys the cipher, the trial
/// index selects the stream.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_basis<R: Rng>(rng: &mut R) -> Basis {
    if rng.random::<bool>() {
        Basis::Diagonal
    } else {
        Basis::Rectilinear
    }
}

fn random_bit<R: Rng>(rng: &mut R) -> Bit {
    if rng.random::<bool>() {
        Bit::One
    } else {
        Bit::Zero
    }
}

/// Inverse-CDF draw. Zero-weight outcomes are never returned.
fn sample_index(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .unwrap_or(weights.len() - 1)
}

/// Prepared simulation for one configuration.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: SimulationConfig,
    /// Post-CNOT two-qubit states, `[alice basis][alice bit]`.
    outputs: [[StateVector; 2]; 2],
    /// Bob's measurement kets, `[basis][bit]`.
    bob_kets: [[StateVector; 2]; 2],
    eve: PovmSet,
    eve_outcomes: &'static [EveOutcome],
}

fn basis_index(b: Basis) -> usize {
    match b {
        Basis::Rectilinear => 0,
        Basis::Diagonal => 1,
    }
}

impl Simulator {
    pub fn new(config: SimulationConfig) -> Self {
        let pe = config.pe;
        let per_basis = |basis: Basis| {
            [
                entangled_output(pe, basis, Bit::Zero),
                entangled_output(pe, basis, Bit::One),
            ]
        };
        let kets = |basis: Basis| [basis.ket(Bit::Zero), basis.ket(Bit::One)];
        Self {
            config,
            outputs: [per_basis(Basis::Rectilinear), per_basis(Basis::Diagonal)],
            bob_kets: [kets(Basis::Rectilinear), kets(Basis::Diagonal)],
            eve: eve_povm(pe, config.kind),
            eve_outcomes: config.kind.eve_outcomes(),
        }
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    /// One round: Alice prepares, Eve's CNOT entangles her probe, Bob
    /// measures the photon (collapsing the probe), Eve reads out her probe.
    pub fn run_trial<R: Rng>(&self, rng: &mut R) -> TrialRecord {
        let alice_bit = random_bit(rng);
        let alice_basis = random_basis(rng);
        let bob_basis = random_basis(rng);
        let joint = &self.outputs[basis_index(alice_basis)][alice_bit.index()];

        let kets = &self.bob_kets[basis_index(bob_basis)];
        let branches = [
            contract_control(joint, &kets[0]).expect("qubit control"),
            contract_control(joint, &kets[1]).expect("qubit control"),
        ];
        let weights = [branches[0].norm_sqr(), branches[1].norm_sqr()];
        let bob_bit = Bit::ALL[sample_index(&weights, rng.random::<f64>())];

        let target = branches[bob_bit.index()]
            .normalize()
            .expect("sampled branch has positive weight");
        let eve_probs = self.eve.probabilities(&target).expect("qubit POVM");
        let eve_outcome = self.eve_outcomes[sample_index(&eve_probs, rng.random::<f64>())];

        let sifted = alice_basis == bob_basis;
        TrialRecord {
            alice_bit,
            alice_basis,
            bob_basis,
            bob_bit,
            eve_outcome,
            sifted,
            error_free: sifted && bob_bit == alice_bit,
        }
    }

    /// Trial `index` of this run, on its own stream.
    pub fn trial(&self, index: u64) -> TrialRecord {
        self.run_trial(&mut trial_rng(self.config.seed, index))
    }

    /// Serial tally over a range of trial indices.
    pub fn run_range(&self, range: Range<u64>) -> TrialCounts {
        range.fold(TrialCounts::default(), |mut acc, i| {
            acc.record(&self.trial(i));
            acc
        })
    }

    /// Tally over all configured trials, split across the rayon pool.
    pub fn run(&self) -> TrialCounts {
        let n = self.config.trials;
        let chunks = n.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| self.run_range(c * CHUNK..((c + 1) * CHUNK).min(n)))
            .reduce(TrialCounts::default, TrialCounts::merge)
    }

    pub fn records(&self, range: Range<u64>) -> Vec<TrialRecord> {
        range.map(|i| self.trial(i)).collect()
    }
}

/// Result of a full run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationOutcome {
    pub statistics: ProbeStatistics,
    pub counts: TrialCounts,
}

impl SimulationOutcome {
    pub fn error_rate(&self) -> f64 {
        self.counts.sifted_errors as f64 / self.counts.sifted as f64
    }

    /// Standardized deviation of Bob's sifted error rate from `P_E`.
    pub fn error_rate_z(&self) -> f64 {
        let p = self.statistics.pe.value();
        z_score(self.error_rate(), p, Some(self.counts.sifted))
    }
}

fn statistics_from_counts(
    config: &SimulationConfig,
    counts: &TrialCounts,
) -> Result<ProbeStatistics, SimulationError> {
    let retained = counts.retained();
    if retained == 0 {
        return Err(SimulationError::InsufficientData);
    }
    let width = config.kind.eve_outcomes().len();
    let cells: Vec<u64> = counts
        .error_free
        .iter()
        .flat_map(|row| row[..width].iter().copied())
        .collect();
    let joint = JointDistribution::from_counts(
        BOB_LABELS.iter().map(|s| (*s).to_owned()).collect(),
        config
            .kind
            .eve_outcomes()
            .iter()
            .map(|o| o.label().to_owned())
            .collect(),
        &cells,
    )
    .map_err(ProbeError::from)?;
    Ok(ProbeStatistics {
        joint,
        pe: config.pe,
        kind: config.kind,
        source: Source::Empirical,
        trials: Some(counts.trials),
        retained: Some(retained),
        seed: Some(config.seed),
        degenerate: config.kind == ProbeKind::Conclusive && config.pe.value() == 0.0,
    })
}

pub fn run(config: SimulationConfig) -> Result<SimulationOutcome, SimulationError> {
    if config.trials == 0 {
        return Err(SimulationError::NoTrials);
    }
    let counts = Simulator::new(config).run();
    Ok(SimulationOutcome {
        statistics: statistics_from_counts(&config, &counts)?,
        counts,
    })
}

/// Relative-frequency table of (Bob's bit, Eve's outcome) over error-free
/// sifted rounds.
pub fn simulate(config: SimulationConfig) -> Result<ProbeStatistics, SimulationError> {
    Ok(run(config)?.statistics)
}

/// Fraction of sifted rounds where Bob's bit differs from Alice's.
pub fn empirical_error_rate(config: SimulationConfig) -> Result<f64, SimulationError> {
    if config.trials == 0 {
        return Err(SimulationError::NoTrials);
    }
    let counts = Simulator::new(config).run();
    if counts.sifted == 0 {
        return Err(SimulationError::InsufficientData);
    }
    Ok(counts.sifted_errors as f64 / counts.sifted as f64)
}

/// `(observed − expected)` in binomial standard errors. A zero standard
/// error yields 0 on exact agreement and infinity otherwise.
pub fn z_score(observed: f64, expected: f64, n: Option<u64>) -> f64 {
    let diff = observed - expected;
    let se = match n {
        Some(n) if n > 0 => (expected * (1.0 - expected) / n as f64).max(0.0).sqrt(),
        _ => 0.0,
    };
    if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareTolerance {
    pub max_abs_z: f64,
    pub max_measure_diff: f64,
}

impl Default for CompareTolerance {
    fn default() -> Self {
        Self {
            max_abs_z: 3.0,
            max_measure_diff: 5e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellComparison {
    pub bob: String,
    pub eve: String,
    pub empirical: f64,
    pub analytic: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureComparison {
    pub order: EntropyOrder,
    pub direction: Conditioning,
    pub empirical: f64,
    pub analytic: f64,
}

impl MeasureComparison {
    pub fn id(&self) -> String {
        let dir = match self.direction {
            Conditioning::XGivenY => "bob_given_eve",
            Conditioning::YGivenX => "eve_given_bob",
        };
        format!("mi_order_{}_{dir}", self.order)
    }

    pub fn diff(&self) -> f64 {
        (self.empirical - self.analytic).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub cells: Vec<CellComparison>,
    pub measures: Vec<MeasureComparison>,
    pub tolerance: CompareTolerance,
}

impl Comparison {
    pub fn max_abs_z(&self) -> f64 {
        self.cells.iter().map(|c| c.z.abs()).fold(0.0, f64::max)
    }

    pub fn max_measure_diff(&self) -> f64 {
        self.measures.iter().map(|m| m.diff()).fold(0.0, f64::max)
    }

    pub fn cells_pass(&self) -> bool {
        self.max_abs_z() <= self.tolerance.max_abs_z
    }

    pub fn measures_pass(&self) -> bool {
        self.max_measure_diff() <= self.tolerance.max_measure_diff
    }

    pub fn passed(&self) -> bool {
        self.cells_pass() && self.measures_pass()
    }
}

/// Orders and directions of the six information values checked by [`compare`].
pub const COMPARED_MEASURES: [(EntropyOrder, Conditioning); 6] = [
    (EntropyOrder::One, Conditioning::XGivenY),
    (EntropyOrder::One, Conditioning::YGivenX),
    (EntropyOrder::Finite(2.0), Conditioning::XGivenY),
    (EntropyOrder::Finite(2.0), Conditioning::YGivenX),
    (EntropyOrder::Infinity, Conditioning::XGivenY),
    (EntropyOrder::Infinity, Conditioning::YGivenX),
];

/// Per-cell binomial z-scores and information-value differences between an
/// empirical table and its analytic counterpart.
pub fn compare(
    empirical: &ProbeStatistics,
    analytic: &ProbeStatistics,
    tolerance: CompareTolerance,
) -> Result<Comparison, SimulationError> {
    let (e, a) = (&empirical.joint, &analytic.joint);
    if e.row_labels() != a.row_labels() || e.col_labels() != a.col_labels() {
        return Err(SimulationError::Mismatch("alphabets differ".into()));
    }
    if empirical.kind != analytic.kind {
        return Err(SimulationError::Mismatch("probe kinds differ".into()));
    }
    if (empirical.pe.value() - analytic.pe.value()).abs() > 1e-12 {
        return Err(SimulationError::Mismatch(
            "error probabilities differ".into(),
        ));
    }
    let n = empirical.retained.or(analytic.retained);
    let mut cells = Vec::with_capacity(e.cells().len());
    for r in 0..e.rows() {
        for c in 0..e.cols() {
            cells.push(CellComparison {
                bob: e.row_labels()[r].clone(),
                eve: e.col_labels()[c].clone(),
                empirical: e.get(r, c),
                analytic: a.get(r, c),
                z: z_score(e.get(r, c), a.get(r, c), n),
            });
        }
    }
    let measures = COMPARED_MEASURES
        .iter()
        .map(|&(order, direction)| MeasureComparison {
            order,
            direction,
            empirical: renyi_mutual_information(e, order, direction),
            analytic: renyi_mutual_information(a, order, direction),
        })
        .collect();
    Ok(Comparison {
        cells,
        measures,
        tolerance,
    })
}
