//! Small-dimension complex linear algebra for pure qubit states.
//!
//! Every ket is stored in the gate computational basis `{|0⟩, |1⟩}`. Two-qubit
//! states use control-major ordering: index `2 * control + target`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Absolute tolerance used for every algebraic identity in this crate.
pub const TOLERANCE: f64 = 1e-12;

pub type ComplexScalar = Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state vector must have at least one amplitude")]
    Empty,
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
    #[error("squared norm {0} exceeds 1")]
    NormExceeded(f64),
    #[error("state flagged as normalized has squared norm {0}")]
    NotNormalized(f64),
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("operator needs {expected} entries for dimension {dim}, found {found}")]
    BadOperatorShape {
        dim: usize,
        expected: usize,
        found: usize,
    },
    #[error("POVM needs one label per element ({labels} labels, {elements} elements)")]
    LabelCount { labels: usize, elements: usize },
}

/// Pure (possibly sub-normalized) state over an ordered product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    normalized: bool,
}

fn check_finite(values: &[Complex64]) -> Result<(), QuantumError> {
    match values
        .iter()
        .position(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        Some(idx) => Err(QuantumError::NonFinite(idx)),
        None => Ok(()),
    }
}

fn norm_sqr_of(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm_sqr()).sum()
}

impl StateVector {
    /// A unit-norm state. Fails unless `Σ|a|² = 1` within [`TOLERANCE`].
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self, QuantumError> {
        if amplitudes.is_empty() {
            return Err(QuantumError::Empty);
        }
        check_finite(&amplitudes)?;
        let n2 = norm_sqr_of(&amplitudes);
        if (n2 - 1.0).abs() > TOLERANCE {
            return Err(QuantumError::NotNormalized(n2));
        }
        Ok(Self {
            amplitudes,
            normalized: true,
        })
    }

    /// A sub-normalized component, `Σ|a|² ≤ 1` within [`TOLERANCE`].
    pub fn sub_normalized(amplitudes: Vec<Complex64>) -> Result<Self, QuantumError> {
        if amplitudes.is_empty() {
            return Err(QuantumError::Empty);
        }
        check_finite(&amplitudes)?;
        let n2 = norm_sqr_of(&amplitudes);
        if n2 > 1.0 + TOLERANCE {
            return Err(QuantumError::NormExceeded(n2));
        }
        Ok(Self {
            amplitudes,
            normalized: false,
        })
    }

    /// Real amplitudes, sub-normalized.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self, QuantumError> {
        Self::sub_normalized(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Basis ket `|index⟩` of the given dimension.
    pub fn basis(dim: usize, index: usize) -> Result<Self, QuantumError> {
        if index >= dim {
            return Err(QuantumError::DimensionMismatch {
                expected: dim,
                found: index + 1,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            normalized: true,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            amplitudes: vec![Complex64::new(0.0, 0.0); dim.max(1)],
            normalized: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr_of(&self.amplitudes)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn check_dim(&self, other: &Self) -> Result<(), QuantumError> {
        if self.dim() != other.dim() {
            return Err(QuantumError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64, QuantumError> {
        self.check_dim(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `a·self + b·other`; the result must stay within the unit ball.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self, QuantumError> {
        self.check_dim(other)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self::sub_normalized(amplitudes)
    }

    /// Real linear combination, the common case for the probe algebra.
    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Result<Self, QuantumError> {
        self.combine(Complex64::new(a, 0.0), other, Complex64::new(b, 0.0))
    }

    pub fn scaled(&self, factor: f64) -> Result<Self, QuantumError> {
        Self::sub_normalized(self.amplitudes.iter().map(|z| z * factor).collect())
    }

    pub fn normalize(&self) -> Result<Self, QuantumError> {
        let n = self.norm();
        if n == 0.0 {
            return Err(QuantumError::ZeroVector);
        }
        Ok(Self {
            amplitudes: self.amplitudes.iter().map(|z| z / n).collect(),
            normalized: true,
        })
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> Operator {
        let d = self.dim();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.amplitudes[i] * self.amplitudes[j].conj());
            }
        }
        Operator { dim: d, entries }
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, QuantumError> {
        self.check_dim(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, z) in self.amplitudes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
        }
        write!(f, "]")
    }
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl Operator {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, QuantumError> {
        if dim == 0 {
            return Err(QuantumError::Empty);
        }
        if entries.len() != dim * dim {
            return Err(QuantumError::BadOperatorShape {
                dim,
                expected: dim * dim,
                found: entries.len(),
            });
        }
        check_finite(&entries)?;
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, QuantumError> {
        if self.dim != other.dim {
            return Err(QuantumError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let d = self.dim * other.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.entry(i, j);
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        entries[(i * other.dim + k) * d + j * other.dim + l] =
                            a * other.entry(k, l);
                    }
                }
            }
        }
        Self { dim: d, entries }
    }

    /// `⟨s|self|s⟩` without clipping.
    pub fn expectation(&self, state: &StateVector) -> Result<Complex64, QuantumError> {
        if state.dim() != self.dim {
            return Err(QuantumError::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        let amps = state.amplitudes();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim {
            let row: Complex64 = (0..self.dim).map(|j| self.entry(i, j) * amps[j]).sum();
            acc += amps[i].conj() * row;
        }
        Ok(acc)
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermiticity_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.entry(i, j) - self.entry(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Magnitude by which the operator fails to be positive semi-definite
    /// (0 when it is). Exact smallest eigenvalue for `dim ≤ 2`; for larger
    /// operators, the most negative pivot of a Cholesky pass.
    pub fn positivity_violation(&self) -> f64 {
        match self.dim {
            1 => (-self.entries[0].re).max(0.0),
            2 => {
                let a = self.entry(0, 0).re;
                let d = self.entry(1, 1).re;
                let b = self.entry(0, 1);
                let half_trace = 0.5 * (a + d);
                let det = a * d - b.norm_sqr();
                let disc = (half_trace * half_trace - det).max(0.0);
                let min_eig = half_trace - disc.sqrt();
                (-min_eig).max(0.0)
            }
            _ => self.cholesky_violation(),
        }
    }

    fn cholesky_violation(&self) -> f64 {
        let n = self.dim;
        let mut l = vec![Complex64::new(0.0, 0.0); n * n];
        let mut worst: f64 = 0.0;
        for j in 0..n {
            let mut diag = self.entry(j, j).re;
            for k in 0..j {
                diag -= l[j * n + k].norm_sqr();
            }
            if diag < 0.0 {
                worst = worst.max(-diag);
            }
            let pivot = diag.max(0.0).sqrt();
            l[j * n + j] = Complex64::new(pivot, 0.0);
            for i in (j + 1)..n {
                let mut v = self.entry(i, j);
                for k in 0..j {
                    v -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = if pivot > TOLERANCE {
                    v / pivot
                } else {
                    if v.norm() > TOLERANCE {
                        worst = worst.max(v.norm());
                    }
                    Complex64::new(0.0, 0.0)
                };
            }
        }
        worst
    }
}

/// Labeled set of measurement operators.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmSet {
    labels: Vec<String>,
    elements: Vec<Operator>,
}

impl PovmSet {
    pub fn new(labels: Vec<String>, elements: Vec<Operator>) -> Result<Self, QuantumError> {
        if labels.len() != elements.len() {
            return Err(QuantumError::LabelCount {
                labels: labels.len(),
                elements: elements.len(),
            });
        }
        let Some(first) = elements.first() else {
            return Err(QuantumError::Empty);
        };
        let dim = first.dim();
        if let Some(bad) = elements.iter().find(|e| e.dim() != dim) {
            return Err(QuantumError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { labels, elements })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn elements(&self) -> &[Operator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn element(&self, label: &str) -> Option<&Operator> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.elements[i])
    }

    /// Born probabilities of every outcome, in element order.
    pub fn probabilities(&self, state: &StateVector) -> Result<Vec<f64>, QuantumError> {
        self.elements
            .iter()
            .map(|e| born_probability(state, e))
            .collect()
    }
}

/// Outcome of [`validate_povm`].
#[derive(Debug, Clone, PartialEq)]
pub struct PovmReport {
    pub elements: usize,
    /// Largest entrywise deviation of `Σ E_k` from the identity.
    pub completeness_violation: f64,
    /// Largest negative-eigenvalue magnitude over all elements.
    pub positivity_violation: f64,
    pub hermiticity_violation: f64,
}

impl PovmReport {
    pub fn complete(&self) -> bool {
        self.completeness_violation <= TOLERANCE
    }

    pub fn positive(&self) -> bool {
        self.positivity_violation <= TOLERANCE && self.hermiticity_violation <= TOLERANCE
    }

    pub fn passed(&self) -> bool {
        self.complete() && self.positive()
    }

    pub fn worst_violation(&self) -> f64 {
        self.completeness_violation
            .max(self.positivity_violation)
            .max(self.hermiticity_violation)
    }
}

pub fn validate_povm(povm: &PovmSet) -> PovmReport {
    let dim = povm.dim();
    let mut sum = Operator::zeros(dim);
    let mut positivity: f64 = 0.0;
    let mut hermiticity: f64 = 0.0;
    for e in povm.elements() {
        sum = sum.add(e).expect("PovmSet elements share a dimension");
        positivity = positivity.max(e.positivity_violation());
        hermiticity = hermiticity.max(e.hermiticity_violation());
    }
    let identity = Operator::identity(dim);
    let completeness = sum
        .entries
        .iter()
        .zip(&identity.entries)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    PovmReport {
        elements: povm.len(),
        completeness_violation: completeness,
        positivity_violation: positivity,
        hermiticity_violation: hermiticity,
    }
}

/// `⟨s|E|s⟩` clipped to `[0, ‖s‖²]`.
pub fn born_probability(state: &StateVector, element: &Operator) -> Result<f64, QuantumError> {
    let value = element.expectation(state)?.re;
    Ok(value.clamp(0.0, state.norm_sqr()))
}

/// Control-major tensor product `u ⊗ v`.
pub fn tensor(u: &StateVector, v: &StateVector) -> StateVector {
    let mut amplitudes = Vec::with_capacity(u.dim() * v.dim());
    for a in u.amplitudes() {
        for b in v.amplitudes() {
            amplitudes.push(a * b);
        }
    }
    StateVector {
        amplitudes,
        normalized: u.normalized && v.normalized,
    }
}

/// CNOT with the left factor as control: swaps the `|10⟩` and `|11⟩` amplitudes.
pub fn apply_cnot(state: &StateVector) -> Result<StateVector, QuantumError> {
    if state.dim() != 4 {
        return Err(QuantumError::DimensionMismatch {
            expected: 4,
            found: state.dim(),
        });
    }
    let mut out = state.clone();
    out.amplitudes.swap(2, 3);
    Ok(out)
}

/// `(⟨control| ⊗ I)|state⟩`: the target-qubit component attached to the
/// given control ket in a two-qubit state.
pub fn contract_control(
    state: &StateVector,
    control: &StateVector,
) -> Result<StateVector, QuantumError> {
    if control.dim() == 0 || !state.dim().is_multiple_of(control.dim()) {
        return Err(QuantumError::DimensionMismatch {
            expected: control.dim(),
            found: state.dim(),
        });
    }
    let target_dim = state.dim() / control.dim();
    let amplitudes = (0..target_dim)
        .map(|t| {
            control
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(c, a)| a.conj() * state.amplitudes[c * target_dim + t])
                .sum()
        })
        .collect();
    StateVector::sub_normalized(amplitudes)
}

pub fn ket0() -> StateVector {
    StateVector::basis(2, 0).expect("valid basis index")
}

pub fn ket1() -> StateVector {
    StateVector::basis(2, 1).expect("valid basis index")
}

pub fn ket_plus() -> StateVector {
    StateVector::normalized(vec![
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(FRAC_1_SQRT_2, 0.0),
    ])
    .expect("unit norm")
}

pub fn ket_minus() -> StateVector {
    StateVector::normalized(vec![
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(-FRAC_1_SQRT_2, 0.0),
    ])
    .expect("unit norm")
}

/// Photon polarization states of the two BB84 bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    Horizontal,
    Vertical,
    /// Diagonal at π/4.
    Right,
    /// Diagonal at 3π/4.
    Left,
}

impl Polarization {
    /// Polarization at `angle` from horizontal, written in the gate basis.
    ///
    /// The gate basis is the polarization frame rotated by π/8, so a
    /// polarization at angle θ sits at θ − π/8 in it.
    fn at_angle(angle: f64) -> StateVector {
        let theta = angle - PI / 8.0;
        StateVector::normalized(vec![
            Complex64::new(theta.cos(), 0.0),
            Complex64::new(theta.sin(), 0.0),
        ])
        .expect("rotation preserves norm")
    }

    pub fn ket(self) -> StateVector {
        match self {
            Polarization::Horizontal => Self::at_angle(0.0),
            Polarization::Vertical => Self::at_angle(PI / 2.0),
            Polarization::Right => Self::at_angle(PI / 4.0),
            Polarization::Left => Self::at_angle(3.0 * PI / 4.0),
        }
    }
}

/// `|0⟩ = cos(π/8)|h⟩ + sin(π/8)|v⟩`, `|1⟩ = −sin(π/8)|h⟩ + cos(π/8)|v⟩`,
/// evaluated from the stored polarization kets.
pub fn computational_basis_from_polarization() -> (StateVector, StateVector) {
    let h = Polarization::Horizontal.ket();
    let v = Polarization::Vertical.ket();
    let (sin, cos) = (PI / 8.0).sin_cos();
    let zero = h.lin_comb(cos, &v, sin).expect("unit rotation");
    let one = h.lin_comb(-sin, &v, cos).expect("unit rotation");
    (
        zero.normalize().expect("nonzero"),
        one.normalize().expect("nonzero"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn basis_from_polarization_is_orthonormal() {
        let (zero, one) = computational_basis_from_polarization();
        assert_abs_diff_eq!(zero.inner(&one).unwrap().norm(), 0.0, epsilon = TOLERANCE);
        assert_abs_diff_eq!(zero.inner(&zero).unwrap().re, 1.0, epsilon = TOLERANCE);
        assert!(zero.max_abs_diff(&ket0()).unwrap() < TOLERANCE);
        assert!(one.max_abs_diff(&ket1()).unwrap() < TOLERANCE);
    }

    #[test]
    fn horizontal_overlap_with_zero() {
        let (zero, _) = computational_basis_from_polarization();
        let h = Polarization::Horizontal.ket();
        // Inverting the rotation by hand: |h⟩ = cos(π/8)|0⟩ − sin(π/8)|1⟩.
        let expected = 0.923_879_532_511_286_7;
        assert_abs_diff_eq!(h.inner(&zero).unwrap().re, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(h.amplitude(0).re, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(h.amplitude(1).re, -(PI / 8.0).sin(), epsilon = 1e-12);
    }

    #[test]
    fn diagonal_kets_are_superpositions_of_rectilinear() {
        let h = Polarization::Horizontal.ket();
        let v = Polarization::Vertical.ket();
        let r = h.lin_comb(FRAC_1_SQRT_2, &v, FRAC_1_SQRT_2).unwrap();
        let l = h.lin_comb(-FRAC_1_SQRT_2, &v, FRAC_1_SQRT_2).unwrap();
        assert!(r.max_abs_diff(&Polarization::Right.ket()).unwrap() < 1e-15);
        assert!(l.max_abs_diff(&Polarization::Left.ket()).unwrap() < 1e-15);
    }

    #[test]
    fn tensor_of_basis_kets() {
        let s = tensor(&ket0(), &ket0());
        assert_eq!(s.dim(), 4);
        assert_eq!(s.amplitude(0), c(1.0));
        assert!(s.amplitudes()[1..].iter().all(|z| z.norm() == 0.0));
        assert!(s.is_normalized());
    }

    #[test]
    fn tensor_plus_minus_expanded() {
        let s = tensor(&ket_plus(), &ket_minus());
        let expected = [0.5, -0.5, 0.5, -0.5];
        for (z, e) in s.amplitudes().iter().zip(expected) {
            assert_abs_diff_eq!(z.re, e, epsilon = 1e-15);
            assert_abs_diff_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn tensor_norm_is_multiplicative() {
        let u = StateVector::from_real(&[0.3, 0.4]).unwrap();
        let v = StateVector::from_real(&[0.6, -0.1]).unwrap();
        assert_abs_diff_eq!(tensor(&u, &v).norm(), u.norm() * v.norm(), epsilon = 1e-15);
        assert!(!tensor(&u, &v).is_normalized());
    }

    #[test]
    fn cnot_basis_action() {
        let ten = tensor(&ket1(), &ket0());
        let out = apply_cnot(&ten).unwrap();
        assert_eq!(out, tensor(&ket1(), &ket1()));
        let zz = tensor(&ket0(), &ket0());
        assert_eq!(apply_cnot(&zz).unwrap(), zz);
        let zo = tensor(&ket0(), &ket1());
        assert_eq!(apply_cnot(&zo).unwrap(), zo);
        let oo = tensor(&ket1(), &ket1());
        assert_eq!(apply_cnot(&oo).unwrap(), ten);
    }

    #[test]
    fn cnot_rejects_wrong_dimension() {
        assert_eq!(
            apply_cnot(&ket0()),
            Err(QuantumError::DimensionMismatch {
                expected: 4,
                found: 2
            })
        );
    }

    #[test]
    fn born_rule_examples() {
        let p0 = ket0().projector();
        assert_abs_diff_eq!(born_probability(&ket0(), &p0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            born_probability(&ket_plus(), &p0).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert!(born_probability(&tensor(&ket0(), &ket0()), &p0).is_err());
    }

    #[test]
    fn computational_povm_validates() {
        let povm = PovmSet::new(
            vec!["0".into(), "1".into()],
            vec![ket0().projector(), ket1().projector()],
        )
        .unwrap();
        let report = validate_povm(&povm);
        assert!(report.passed(), "{report:?}");
        let probs = povm.probabilities(&ket_plus()).unwrap();
        assert_abs_diff_eq!(probs.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn incomplete_povm_fails() {
        let povm = PovmSet::new(vec!["0".into()], vec![ket0().projector()]).unwrap();
        let report = validate_povm(&povm);
        assert!(!report.complete());
        assert!(report.positive());
        assert!(!report.passed());
        assert_abs_diff_eq!(report.completeness_violation, 1.0);
    }

    #[test]
    fn negative_element_flagged() {
        let bad = ket0().projector().scaled(2.0);
        let neg = ket0().projector().scaled(-1.0);
        let povm = PovmSet::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![bad, neg, ket1().projector()],
        )
        .unwrap();
        let report = validate_povm(&povm);
        assert!(report.complete());
        assert!(!report.positive());
        assert_abs_diff_eq!(report.positivity_violation, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn positivity_for_four_dim_operators() {
        let p = ket0().projector().kron(&Operator::identity(2));
        assert_eq!(p.positivity_violation(), 0.0);
        let n = tensor(&ket_plus(), &ket_minus()).projector().scaled(-0.5);
        assert!(n.positivity_violation() > 0.1);
    }

    #[test]
    fn contract_control_extracts_target() {
        let s = tensor(&ket_plus(), &ket_minus());
        let t = contract_control(&s, &ket0()).unwrap();
        assert_abs_diff_eq!(t.amplitude(0).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(t.amplitude(1).re, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn state_constructors_enforce_norm() {
        assert!(matches!(
            StateVector::from_real(&[1.0, 1.0]),
            Err(QuantumError::NormExceeded(_))
        ));
        assert!(matches!(
            StateVector::normalized(vec![c(0.5), c(0.5)]),
            Err(QuantumError::NotNormalized(_))
        ));
        assert_eq!(
            StateVector::from_real(&[f64::NAN, 0.0]),
            Err(QuantumError::NonFinite(0))
        );
        assert_eq!(
            StateVector::zero(2).normalize(),
            Err(QuantumError::ZeroVector)
        );
    }
}
