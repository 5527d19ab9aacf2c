//! Closed-form information curves of both probe variants as functions of
//! `P_E`, and the comparisons built on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::info::{mutual_information, renyi_mutual_information, Conditioning, EntropyOrder};
use crate::probe::{self, ErrorProbability, ProbeError, ProbeKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error("unknown curve id {0:?}")]
    UnknownCurve(String),
    #[error("grid resolution {0} must lie in [1e-4, 1/3]")]
    Resolution(f64),
    #[error("ratio undefined at P_E = 0")]
    UndefinedRatio,
    #[error("transmissivity {0} outside [0, 1]")]
    Transmissivity(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveId {
    /// Standard mutual information, Helstrom read-out.
    HelstromShannon,
    /// Order-2 Rényi mutual information, Helstrom read-out.
    HelstromRenyi2,
    /// Order-∞ Rényi mutual information, Helstrom read-out.
    HelstromRenyiInf,
    /// Every measure of the unambiguous read-out in the Bob-given-Eve
    /// direction, which is order independent.
    Conclusive,
    /// Order-∞ Rényi information in the Eve-given-Bob direction.
    ConclusiveReverseInf,
    /// Order-2 Rényi information in the Eve-given-Bob direction.
    ConclusiveReverse2,
}

impl CurveId {
    pub const ALL: [CurveId; 6] = [
        CurveId::HelstromShannon,
        CurveId::HelstromRenyi2,
        CurveId::HelstromRenyiInf,
        CurveId::Conclusive,
        CurveId::ConclusiveReverseInf,
        CurveId::ConclusiveReverse2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CurveId::HelstromShannon => "helstrom_shannon",
            CurveId::HelstromRenyi2 => "helstrom_renyi2",
            CurveId::HelstromRenyiInf => "helstrom_renyi_inf",
            CurveId::Conclusive => "conclusive",
            CurveId::ConclusiveReverseInf => "conclusive_reverse_inf",
            CurveId::ConclusiveReverse2 => "conclusive_reverse2",
        }
    }

    pub fn kind(self) -> ProbeKind {
        match self {
            CurveId::HelstromShannon | CurveId::HelstromRenyi2 | CurveId::HelstromRenyiInf => {
                ProbeKind::Helstrom
            }
            _ => ProbeKind::Conclusive,
        }
    }

    /// Entropy order and direction used when the curve is recomputed from a
    /// joint table (rows Bob, columns Eve).
    pub fn measure(self) -> (EntropyOrder, Conditioning) {
        match self {
            CurveId::HelstromShannon | CurveId::Conclusive => {
                (EntropyOrder::One, Conditioning::XGivenY)
            }
            CurveId::HelstromRenyi2 => (EntropyOrder::Finite(2.0), Conditioning::XGivenY),
            CurveId::HelstromRenyiInf => (EntropyOrder::Infinity, Conditioning::XGivenY),
            CurveId::ConclusiveReverseInf => (EntropyOrder::Infinity, Conditioning::YGivenX),
            CurveId::ConclusiveReverse2 => (EntropyOrder::Finite(2.0), Conditioning::YGivenX),
        }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CurveId {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CurveId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| CurveError::UnknownCurve(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub pe: f64,
    pub value: f64,
}

fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

pub fn kappa(pe: f64) -> Result<f64, CurveError> {
    Ok(probe::kappa(ErrorProbability::new(pe)?))
}

/// Closed-form value of a curve at `pe`, in bits.
pub fn curve(id: CurveId, pe: f64) -> Result<f64, CurveError> {
    let p = ErrorProbability::new(pe)?.value();
    let k = probe::kappa(ErrorProbability::new(p)?);
    let conclusive = 2.0 * p / (1.0 - p);
    Ok(match id {
        CurveId::HelstromShannon => 0.5 * (xlog2x(1.0 + k) + xlog2x(1.0 - k)),
        CurveId::HelstromRenyi2 => (1.0 + k * k).log2(),
        CurveId::HelstromRenyiInf => (1.0 + k).log2(),
        CurveId::Conclusive => conclusive,
        CurveId::ConclusiveReverseInf => {
            if p <= 0.2 {
                0.0
            } else if p < 0.25 {
                (2.0 * p).log2() - (1.0 - 3.0 * p).log2()
            } else {
                1.0
            }
        }
        CurveId::ConclusiveReverse2 => {
            let u = (1.0 - 3.0 * p).powi(2);
            ((4.0 * p * p + u) / (2.0 * p * p + u)).log2()
        }
    })
}

/// The same curve recomputed by feeding the probe's joint table through the
/// generic information measures.
pub fn curve_from_table(id: CurveId, pe: f64) -> Result<f64, CurveError> {
    let stats = probe::joint_table(ErrorProbability::new(pe)?, id.kind());
    let (order, direction) = id.measure();
    Ok(match order {
        EntropyOrder::One => mutual_information(&stats.joint),
        _ => renyi_mutual_information(&stats.joint, order, direction),
    })
}

/// `steps` uniform samples on `[lo, hi]`, endpoints included exactly.
pub fn uniform_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

pub fn sample(id: CurveId, grid: &[f64]) -> Result<Vec<CurveSample>, CurveError> {
    grid.iter()
        .map(|&pe| {
            Ok(CurveSample {
                pe,
                value: curve(id, pe)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub pe: f64,
    pub gap: f64,
}

/// Argmax refinement tolerance in `P_E`.
pub const GAP_PE_TOLERANCE: f64 = 1e-8;

/// Maximizes `curve(a) − curve(b)` over `[0, 1/3]`: a uniform grid with the
/// given spacing, then golden-section refinement around the best grid point.
pub fn max_gap(a: CurveId, b: CurveId, resolution: f64) -> Result<Gap, CurveError> {
    let hi = ErrorProbability::MAX;
    if !(1e-4..=hi).contains(&resolution) {
        return Err(CurveError::Resolution(resolution));
    }
    let diff =
        |pe: f64| -> f64 { curve(a, pe).unwrap_or(f64::NAN) - curve(b, pe).unwrap_or(f64::NAN) };
    let steps = (hi / resolution).ceil() as usize + 1;
    let grid = uniform_grid(0.0, hi, steps);
    let mut best = Gap {
        pe: 0.0,
        gap: diff(0.0),
    };
    for &pe in &grid {
        let g = diff(pe);
        if g > best.gap {
            best = Gap { pe, gap: g };
        }
    }

    let spacing = hi / (steps - 1) as f64;
    let (mut lo_x, mut hi_x) = ((best.pe - spacing).max(0.0), (best.pe + spacing).min(hi));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi_x - inv_phi * (hi_x - lo_x);
    let mut x2 = lo_x + inv_phi * (hi_x - lo_x);
    let (mut f1, mut f2) = (diff(x1), diff(x2));
    while hi_x - lo_x > GAP_PE_TOLERANCE {
        if f1 >= f2 {
            hi_x = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi_x - inv_phi * (hi_x - lo_x);
            f1 = diff(x1);
        } else {
            lo_x = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo_x + inv_phi * (hi_x - lo_x);
            f2 = diff(x2);
        }
    }
    let mid = 0.5 * (lo_x + hi_x);
    let refined = diff(mid);
    if refined > best.gap {
        best = Gap {
            pe: mid,
            gap: refined,
        };
    }
    Ok(best)
}

/// `I₂ / I` for the Helstrom read-out; tends to 2 as `P_E → 0⁺`.
pub fn small_pe_ratio(pe: f64) -> Result<f64, CurveError> {
    let p = ErrorProbability::new(pe)?.value();
    if p == 0.0 {
        return Err(CurveError::UndefinedRatio);
    }
    Ok(curve(CurveId::HelstromRenyi2, p)? / curve(CurveId::HelstromShannon, p)?)
}

/// Whether the conclusive-outcome rate `2P_E/(1 − P_E)` strictly exceeds the
/// channel transmissivity.
pub fn opaque_feasible(pe: f64, transmissivity: f64) -> Result<bool, CurveError> {
    if !(0.0..=1.0).contains(&transmissivity) {
        return Err(CurveError::Transmissivity(transmissivity));
    }
    Ok(curve(CurveId::Conclusive, pe)? > transmissivity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(kappa(1.0 / 6.0).unwrap(), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(kappa(1.0 / 3.0).unwrap(), 1.0, epsilon = 1e-15);
        assert!(kappa(0.4).is_err());
    }

    #[test]
    fn kappa_is_increasing() {
        let grid = uniform_grid(0.0, 1.0 / 3.0, 1000);
        for w in grid.windows(2) {
            assert!(kappa(w[1]).unwrap() > kappa(w[0]).unwrap());
        }
    }

    #[test]
    fn curve_examples() {
        assert_abs_diff_eq!(
            curve(CurveId::Conclusive, 0.2).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_eq!(curve(CurveId::ConclusiveReverseInf, 0.15).unwrap(), 0.0);
        assert_eq!(curve(CurveId::ConclusiveReverseInf, 0.30).unwrap(), 1.0);
        for id in CurveId::ALL {
            assert_abs_diff_eq!(curve(id, 1.0 / 3.0).unwrap(), 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(curve(id, 0.0).unwrap(), 0.0, epsilon = 1e-12);
        }
        assert!(curve(CurveId::Conclusive, -0.1).is_err());
    }

    #[test]
    fn reverse_inf_is_continuous_at_branch_joins() {
        let id = CurveId::ConclusiveReverseInf;
        let eps = 1e-9;
        assert_abs_diff_eq!(curve(id, 0.2 + eps).unwrap(), 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!(curve(id, 0.25 - eps).unwrap(), 1.0, epsilon = 1e-7);
    }

    #[test]
    fn curve_ids_roundtrip() {
        for id in CurveId::ALL {
            assert_eq!(id.as_str().parse::<CurveId>().unwrap(), id);
        }
        assert!("renyi3".parse::<CurveId>().is_err());
    }

    #[test]
    fn closed_forms_match_tables() {
        for pe in uniform_grid(0.0, 1.0 / 3.0, 101) {
            for id in CurveId::ALL {
                assert_abs_diff_eq!(
                    curve(id, pe).unwrap(),
                    curve_from_table(id, pe).unwrap(),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn gaps_match_reported_maxima() {
        // Frozen from a 30-digit mpmath evaluation of the closed forms.
        let g2 = max_gap(CurveId::HelstromRenyi2, CurveId::Conclusive, 1e-3).unwrap();
        assert_abs_diff_eq!(g2.gap, 0.314_315_909_222_721_8, epsilon = 1e-12);
        assert_abs_diff_eq!(g2.pe, 0.174_391_339_368_422, epsilon = 1e-7);
        let ginf = max_gap(CurveId::HelstromRenyiInf, CurveId::Conclusive, 1e-3).unwrap();
        assert_abs_diff_eq!(ginf.gap, 0.482_464_293_603_943, epsilon = 1e-12);
        assert_abs_diff_eq!(ginf.pe, 0.109_473_265_612_82, epsilon = 1e-7);
    }

    #[test]
    fn self_gap_is_zero() {
        let g = max_gap(CurveId::Conclusive, CurveId::Conclusive, 1e-3).unwrap();
        assert_eq!(g.gap, 0.0);
    }

    #[test]
    fn gap_resolution_bounds() {
        assert_eq!(
            max_gap(CurveId::Conclusive, CurveId::Conclusive, 1e-5),
            Err(CurveError::Resolution(1e-5))
        );
    }

    #[test]
    fn ratio_examples() {
        let r = small_pe_ratio(1e-4).unwrap();
        assert!(r > 1.9 && r < 2.0, "{r}");
        assert_abs_diff_eq!(r, 1.999_466_787_521_957, epsilon = 1e-9);
        assert_abs_diff_eq!(small_pe_ratio(1.0 / 3.0).unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(
            small_pe_ratio(1.0 / 6.0).unwrap(),
            1.344_048_761_605_441,
            epsilon = 1e-12
        );
        assert_eq!(small_pe_ratio(0.0), Err(CurveError::UndefinedRatio));
    }

    #[test]
    fn opaque_examples() {
        assert!(opaque_feasible(1.0 / 3.0, 0.5).unwrap());
        assert!(!opaque_feasible(0.0, 0.1).unwrap());
        assert!(!opaque_feasible(0.2, 0.5).unwrap());
        assert!(opaque_feasible(0.2, 1.5).is_err());
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = uniform_grid(0.0, 1.0 / 3.0, 334);
        assert_eq!(g.len(), 334);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[333], 1.0 / 3.0);
        assert_eq!(uniform_grid(0.0, 1.0, 2), vec![0.0, 1.0]);
    }
}
