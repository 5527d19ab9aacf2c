//! Entangling-probe eavesdropping on BB84.
//!
//! A single CNOT gate entangles Eve's probe qubit with each photon Alice
//! sends. Eve reads her probe out either with the minimum-error (Helstrom)
//! measurement or with unambiguous discrimination, and the crate quantifies
//! what she learns about the error-free sifted bits with Shannon and Rényi
//! mutual information.
//!
//! - [`quantum`]: state vectors, tensor products, CNOT, Born rule, POVMs.
//! - [`probe`]: the probe states, Eve's measurements, exact joint tables.
//! - [`info`]: entropies and mutual informations on finite tables.
//! - [`curves`]: closed-form information curves and their comparisons.
//! - [`montecarlo`]: a seeded protocol replay used as an independent oracle.

pub mod curves;
pub mod info;
pub mod montecarlo;
pub mod probe;
pub mod quantum;

pub use curves::{curve, CurveId};
pub use info::{EntropyOrder, JointDistribution};
pub use montecarlo::{simulate, SimulationConfig};
pub use probe::{ErrorProbability, ProbeKind, ProbeStatistics};
