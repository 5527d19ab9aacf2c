use std::fs;
use std::path::Path;

use fpb_core::curves::{self, max_gap, small_pe_ratio, uniform_grid, CurveId};
use fpb_core::montecarlo::{self, compare, CompareTolerance, SimulationConfig};
use fpb_core::probe::{joint_table, ErrorProbability, ProbeKind, ProbeStatistics};
use thiserror::Error;

use crate::report::{format_sig, ReportRecord, SIGNIFICANT_DIGITS};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Curve(#[from] curves::CurveError),
    #[error(transparent)]
    Simulation(#[from] montecarlo::SimulationError),
}

pub const DEFAULT_STEPS: usize = 334;
pub const MAX_STEPS: usize = 10_000_000;

/// Grid and curve selection for a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub pe_min: f64,
    pub pe_max: f64,
    pub steps: usize,
    pub curves: Vec<CurveId>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            pe_min: 0.0,
            pe_max: ErrorProbability::MAX,
            steps: DEFAULT_STEPS,
            curves: CurveId::ALL.to_vec(),
        }
    }
}

impl SweepSpec {
    /// A single grid point.
    pub fn point(pe: f64, curves: Vec<CurveId>) -> Self {
        Self {
            pe_min: pe,
            pe_max: pe,
            steps: 1,
            curves,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let in_range = |v: f64| ErrorProbability::new(v).is_ok();
        if !in_range(self.pe_min) || !in_range(self.pe_max) {
            return Err(CliError::Usage(format!(
                "pe range [{}, {}] must lie within [0, 1/3]",
                self.pe_min, self.pe_max
            )));
        }
        if self.curves.is_empty() {
            return Err(CliError::Usage("no curves selected".into()));
        }
        if self.steps == 1 {
            if self.pe_min != self.pe_max {
                return Err(CliError::Usage(
                    "a single step needs pe_min == pe_max".into(),
                ));
            }
            return Ok(());
        }
        if self.pe_min >= self.pe_max {
            return Err(CliError::Usage("pe_min must be below pe_max".into()));
        }
        if !(2..=MAX_STEPS).contains(&self.steps) {
            return Err(CliError::Usage(format!(
                "steps must be in [2, {MAX_STEPS}]"
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.pe_min, self.pe_max, self.steps)
    }
}

/// CSV text for a sweep: header `pe,<curve ids>`, one LF-terminated row
/// per grid point, 12 significant digits.
pub fn sweep_csv(spec: &SweepSpec) -> Result<String, CliError> {
    spec.validate()?;
    let mut out = String::from("pe");
    for id in &spec.curves {
        out.push(',');
        out.push_str(id.as_str());
    }
    out.push('\n');
    for pe in spec.grid() {
        out.push_str(&format_sig(pe, SIGNIFICANT_DIGITS));
        for &id in &spec.curves {
            out.push(',');
            out.push_str(&format_sig(curves::curve(id, pe)?, SIGNIFICANT_DIGITS));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes the sweep to `out` (or returns it for stdout) and summarizes it.
pub fn cmd_sweep(spec: &SweepSpec, out: Option<&Path>) -> Result<(String, ReportRecord), CliError> {
    let csv = sweep_csv(spec)?;
    let mut report = ReportRecord::new(format!(
        "sweep --pe-min {} --pe-max {} --steps {} --curves {}",
        spec.pe_min,
        spec.pe_max,
        spec.steps,
        spec.curves
            .iter()
            .map(|c| c.as_str())
            .collect::<Vec<_>>()
            .join(",")
    ));
    if let Some(path) = out {
        fs::write(path, &csv).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        report.notes.push(format!("wrote {}", path.display()));
    }
    report.output_fixed("rows", spec.grid().len() as f64, 0);
    for pe in spec.grid() {
        for &id in &spec.curves {
            report.output(
                format!("{id}@{}", format_sig(pe, SIGNIFICANT_DIGITS)),
                curves::curve(id, pe)?,
            );
        }
    }
    Ok((csv, report))
}

pub const GAP_RENYI2_REFERENCE: f64 = 0.314;
pub const GAP_RENYI_INF_REFERENCE: f64 = 0.482;
pub const GAP_TOLERANCE: f64 = 0.005;
pub const RATIO_PE: f64 = 1e-4;
pub const GAP_RESOLUTION: f64 = 1e-3;

/// Largest gaps between the Helstrom Rényi curves and the conclusive curve,
/// plus the small-`P_E` ratio of the order-2 and Shannon curves.
pub fn cmd_gaps() -> Result<ReportRecord, CliError> {
    let mut report = ReportRecord::new("gaps");
    let pairs = [
        ("renyi2", CurveId::HelstromRenyi2, GAP_RENYI2_REFERENCE),
        (
            "renyi_inf",
            CurveId::HelstromRenyiInf,
            GAP_RENYI_INF_REFERENCE,
        ),
    ];
    for (name, id, reference) in pairs {
        let gap = max_gap(id, CurveId::Conclusive, GAP_RESOLUTION)?;
        report.output(format!("gap.{id}-conclusive"), gap.gap);
        report.output_fixed(format!("argmax_pe.{id}-conclusive"), gap.pe, 6);
        report.check(
            format!("gap_{name}"),
            (gap.gap - reference).abs() <= GAP_TOLERANCE,
            format!("{:.6} vs {reference} ± {GAP_TOLERANCE}", gap.gap),
        );
    }
    let ratio = small_pe_ratio(RATIO_PE)?;
    report.output("ratio.helstrom_renyi2/helstrom_shannon@0.0001", ratio);
    report.check(
        "ratio_small_pe",
        ratio > 1.9 && ratio < 2.0,
        format!("{ratio:.6} in (1.9, 2.0)"),
    );
    Ok(report)
}

fn cell_id(prefix: &str, stats: &ProbeStatistics, row: usize, col: usize) -> String {
    format!(
        "{prefix}.p(b={},e={})",
        stats.joint.row_labels()[row],
        stats.joint.col_labels()[col]
    )
}

/// Monte Carlo run compared cell by cell and measure by measure against the
/// analytic table.
pub fn cmd_simulate(
    pe: f64,
    kind: ProbeKind,
    trials: u64,
    seed: u64,
) -> Result<ReportRecord, CliError> {
    let config = SimulationConfig::new(pe, kind, trials, seed).map_err(|e| match e {
        montecarlo::SimulationError::Probe(p) => CliError::Usage(p.to_string()),
        montecarlo::SimulationError::NoTrials => CliError::Usage(e.to_string()),
        other => CliError::Simulation(other),
    })?;
    let outcome = montecarlo::run(config)?;
    let empirical = &outcome.statistics;
    let analytic = joint_table(config.pe, kind);
    let tolerance = CompareTolerance::default();
    let comparison = compare(empirical, &analytic, tolerance)?;

    let mut report = ReportRecord::new(format!(
        "simulate --pe {pe} --kind {kind} --trials {trials} --seed {seed}"
    ));
    report.seeds.push(seed);
    if empirical.degenerate {
        report
            .notes
            .push("degenerate: at P_E = 0 the unambiguous read-out is always inconclusive".into());
    }
    report.output_fixed("trials", outcome.counts.trials as f64, 0);
    report.output_fixed("sifted", outcome.counts.sifted as f64, 0);
    report.output_fixed("retained", outcome.counts.retained() as f64, 0);
    for (stats, prefix) in [(empirical, "empirical"), (&analytic, "analytic")] {
        for r in 0..stats.joint.rows() {
            for c in 0..stats.joint.cols() {
                report.output(cell_id(prefix, stats, r, c), stats.joint.get(r, c));
            }
        }
    }
    for cell in &comparison.cells {
        report.output(format!("z.p(b={},e={})", cell.bob, cell.eve), cell.z);
    }
    for m in &comparison.measures {
        report.output(format!("empirical.{}", m.id()), m.empirical);
        report.output(format!("analytic.{}", m.id()), m.analytic);
    }
    report.output("bob_error_rate", outcome.error_rate());
    report.output("z.bob_error_rate", outcome.error_rate_z());

    report.check(
        "cells_within_3_sigma",
        comparison.cells_pass(),
        format!("max |z| = {:.4}", comparison.max_abs_z()),
    );
    report.check(
        "measures_within_5e-3_bits",
        comparison.measures_pass(),
        format!("max diff = {:.3e}", comparison.max_measure_diff()),
    );
    report.check(
        "bob_error_rate_within_3_sigma",
        outcome.error_rate_z().abs() <= tolerance.max_abs_z,
        format!("z = {:.4}", outcome.error_rate_z()),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sweep_shape() {
        let csv = sweep_csv(&SweepSpec::default()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + DEFAULT_STEPS);
        assert_eq!(
            lines[0],
            "pe,helstrom_shannon,helstrom_renyi2,helstrom_renyi_inf,conclusive,conclusive_reverse_inf,conclusive_reverse2"
        );
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
    }

    #[test]
    fn two_step_sweep_hits_endpoints() {
        let spec = SweepSpec {
            steps: 2,
            ..SweepSpec::default()
        };
        let csv = sweep_csv(&spec).unwrap();
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].starts_with("0,"));
        assert!(rows[1].starts_with("0.333333333333,"));
    }

    #[test]
    fn single_point_at_third() {
        let csv = sweep_csv(&SweepSpec::point(1.0 / 3.0, CurveId::ALL.to_vec())).unwrap();
        let row = csv.lines().nth(1).unwrap();
        for v in row.split(',').skip(1) {
            let v: f64 = v.parse().unwrap();
            assert!((v - 1.0).abs() < 1e-10, "{row}");
        }
    }

    #[test]
    fn invalid_specs() {
        let bad = [
            SweepSpec {
                pe_min: 0.2,
                pe_max: 0.1,
                ..SweepSpec::default()
            },
            SweepSpec {
                pe_max: 0.5,
                ..SweepSpec::default()
            },
            SweepSpec {
                steps: 0,
                ..SweepSpec::default()
            },
            SweepSpec {
                steps: MAX_STEPS + 1,
                ..SweepSpec::default()
            },
            SweepSpec {
                curves: vec![],
                ..SweepSpec::default()
            },
        ];
        for spec in bad {
            assert!(
                matches!(sweep_csv(&spec), Err(CliError::Usage(_))),
                "{spec:?}"
            );
        }
    }

    #[test]
    fn gaps_pass() {
        let r = cmd_gaps().unwrap();
        assert!(r.passed(), "{}", r.render_text());
        assert!(r
            .render_text()
            .contains("argmax_pe.helstrom_renyi2-conclusive"));
    }

    #[test]
    fn degenerate_simulation_is_flagged() {
        let r = cmd_simulate(0.0, ProbeKind::Conclusive, 20_000, 1).unwrap();
        assert!(r.notes.iter().any(|n| n.starts_with("degenerate")));
        assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn simulate_rejects_bad_arguments() {
        assert!(matches!(
            cmd_simulate(0.5, ProbeKind::Helstrom, 10, 1),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            cmd_simulate(0.1, ProbeKind::Helstrom, 0, 1),
            Err(CliError::Usage(_))
        ));
    }
}
