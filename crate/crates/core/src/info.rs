//! Shannon and Rényi measures on finite distributions. All logarithms are
//! base 2, so every result is in bits.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::TOLERANCE;

/// Orders closer than this to 1 are evaluated as Shannon entropy.
pub const SHANNON_ROUTING_BAND: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfoError {
    #[error("distribution is empty")]
    Empty,
    #[error("probability at index {index} is invalid: {value}")]
    InvalidProbability { index: usize, value: f64 },
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("joint table needs {expected} cells, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("no observations to normalize")]
    NoCounts,
    #[error("invalid entropy order {0}")]
    InvalidOrder(f64),
}

/// Order parameter of a Rényi entropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EntropyOrder {
    /// Logarithm of the support size.
    Zero,
    /// Shannon entropy.
    One,
    /// Min-entropy.
    Infinity,
    Finite(f64),
}

impl EntropyOrder {
    /// Classifies `alpha`, routing values within 1e-9 of 1 to [`EntropyOrder::One`].
    pub fn new(alpha: f64) -> Result<Self, InfoError> {
        if alpha.is_nan() || alpha < 0.0 {
            return Err(InfoError::InvalidOrder(alpha));
        }
        Ok(if alpha == 0.0 {
            Self::Zero
        } else if alpha == f64::INFINITY {
            Self::Infinity
        } else if (alpha - 1.0).abs() < SHANNON_ROUTING_BAND {
            Self::One
        } else {
            Self::Finite(alpha)
        })
    }

    pub fn alpha(self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::One => 1.0,
            Self::Infinity => f64::INFINITY,
            Self::Finite(a) => a,
        }
    }
}

impl std::fmt::Display for EntropyOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Zero => write!(f, "0"),
            Self::One => write!(f, "1"),
            Self::Infinity => write!(f, "inf"),
            Self::Finite(a) => write!(f, "{a}"),
        }
    }
}

/// Which variable is conditioned on which.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Conditioning {
    /// Uncertainty of the row variable X given the column variable Y.
    XGivenY,
    /// Uncertainty of the column variable Y given the row variable X.
    YGivenX,
}

impl Conditioning {
    pub fn reversed(self) -> Self {
        match self {
            Self::XGivenY => Self::YGivenX,
            Self::YGivenX => Self::XGivenY,
        }
    }
}

/// Checks entries are finite, nonnegative and sum to 1 within [`TOLERANCE`].
pub fn validate_distribution(p: &[f64]) -> Result<(), InfoError> {
    if p.is_empty() {
        return Err(InfoError::Empty);
    }
    if let Some((index, &value)) = p
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < 0.0)
    {
        return Err(InfoError::InvalidProbability { index, value });
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > TOLERANCE {
        return Err(InfoError::NotNormalized(total));
    }
    Ok(())
}

/// Probability table `p(x, y)` over two labeled alphabets. Rows index X,
/// columns index Y.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        probs: Vec<f64>,
    ) -> Result<Self, InfoError> {
        let expected = row_labels.len() * col_labels.len();
        if expected == 0 {
            return Err(InfoError::Empty);
        }
        if probs.len() != expected {
            return Err(InfoError::Shape {
                expected,
                found: probs.len(),
            });
        }
        validate_distribution(&probs)?;
        Ok(Self {
            row_labels,
            col_labels,
            probs,
        })
    }

    /// Relative-frequency table from row-major counts.
    pub fn from_counts(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        counts: &[u64],
    ) -> Result<Self, InfoError> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(InfoError::NoCounts);
        }
        let probs = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Self::new(row_labels, col_labels, probs)
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.probs[row * self.cols() + col]
    }

    /// Row-major cells.
    pub fn cells(&self) -> &[f64] {
        &self.probs
    }

    /// Marginal of X.
    pub fn row_marginal(&self) -> Vec<f64> {
        (0..self.rows())
            .map(|r| (0..self.cols()).map(|c| self.get(r, c)).sum())
            .collect()
    }

    /// Marginal of Y.
    pub fn col_marginal(&self) -> Vec<f64> {
        (0..self.cols())
            .map(|c| (0..self.rows()).map(|r| self.get(r, c)).sum())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut probs = Vec::with_capacity(self.probs.len());
        for c in 0..self.cols() {
            for r in 0..self.rows() {
                probs.push(self.get(r, c));
            }
        }
        Self {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            probs,
        }
    }

    /// Oriented so that rows hold the variable whose uncertainty is measured.
    fn oriented(&self, conditioning: Conditioning) -> std::borrow::Cow<'_, Self> {
        match conditioning {
            Conditioning::XGivenY => std::borrow::Cow::Borrowed(self),
            Conditioning::YGivenX => std::borrow::Cow::Owned(self.transpose()),
        }
    }

    /// Pairs `(p(y), p(·|y))` for every column with `p(y) > 0`.
    fn column_conditionals(&self) -> Vec<(f64, Vec<f64>)> {
        (0..self.cols())
            .filter_map(|c| {
                let column: Vec<f64> = (0..self.rows()).map(|r| self.get(r, c)).collect();
                let weight: f64 = column.iter().sum();
                (weight > 0.0).then(|| (weight, column.iter().map(|p| p / weight).collect()))
            })
            .collect()
    }
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

fn shannon_unchecked(p: &[f64]) -> f64 {
    -p.iter().copied().map(plogp).sum::<f64>()
}

fn renyi_unchecked(p: &[f64], order: EntropyOrder) -> f64 {
    match order {
        EntropyOrder::One => shannon_unchecked(p),
        EntropyOrder::Zero => (p.iter().filter(|&&x| x > 0.0).count() as f64).log2(),
        EntropyOrder::Infinity => -p.iter().copied().fold(0.0, f64::max).log2(),
        EntropyOrder::Finite(alpha) => {
            // Σ p^α = m^α Σ (p/m)^α keeps large orders from underflowing.
            let max = p.iter().copied().fold(0.0, f64::max);
            let scaled: f64 = p
                .iter()
                .filter(|&&x| x > 0.0)
                .map(|&x| (x / max).powf(alpha))
                .sum();
            (alpha * max.log2() + scaled.log2()) / (1.0 - alpha)
        }
    }
}

pub fn shannon_entropy(p: &[f64]) -> Result<f64, InfoError> {
    validate_distribution(p)?;
    Ok(shannon_unchecked(p))
}

pub fn renyi_entropy(p: &[f64], order: EntropyOrder) -> Result<f64, InfoError> {
    validate_distribution(p)?;
    Ok(renyi_unchecked(p, order))
}

/// `H(X, Y)`.
pub fn joint_entropy(joint: &JointDistribution) -> f64 {
    shannon_unchecked(joint.cells())
}

/// `R_α(X, Y)`.
pub fn renyi_joint_entropy(joint: &JointDistribution, order: EntropyOrder) -> f64 {
    renyi_unchecked(joint.cells(), order)
}

/// `H(X|Y) = Σ_y p(y) H(X|y)`, skipping `p(y) = 0`.
pub fn conditional_entropy(joint: &JointDistribution, conditioning: Conditioning) -> f64 {
    conditional_renyi(joint, EntropyOrder::One, conditioning)
}

/// `R_α(X|Y) = Σ_y p(y) R_α(X|y)`, skipping `p(y) = 0`.
pub fn conditional_renyi(
    joint: &JointDistribution,
    order: EntropyOrder,
    conditioning: Conditioning,
) -> f64 {
    joint
        .oriented(conditioning)
        .column_conditionals()
        .iter()
        .map(|(weight, cond)| weight * renyi_unchecked(cond, order))
        .sum()
}

/// `I(X, Y) = H(X) + H(Y) − H(X, Y)`.
pub fn mutual_information(joint: &JointDistribution) -> f64 {
    shannon_unchecked(&joint.row_marginal()) + shannon_unchecked(&joint.col_marginal())
        - joint_entropy(joint)
}

/// Directed `R_α(X) − R_α(X|Y)` (for [`Conditioning::XGivenY`]); the reverse
/// direction measures Y instead. Not symmetric for `α ≠ 1`.
pub fn renyi_mutual_information(
    joint: &JointDistribution,
    order: EntropyOrder,
    conditioning: Conditioning,
) -> f64 {
    let measured = match conditioning {
        Conditioning::XGivenY => joint.row_marginal(),
        Conditioning::YGivenX => joint.col_marginal(),
    };
    renyi_unchecked(&measured, order) - conditional_renyi(joint, order, conditioning)
}
