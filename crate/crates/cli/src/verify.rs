//! The invariant suite behind `fpb verify`. Random inputs come from a fixed
//! seed, so the matrix is reproducible.

use fpb_core::curves::{curve, curve_from_table, uniform_grid, CurveId};
use fpb_core::info::{
    conditional_entropy, conditional_renyi, joint_entropy, mutual_information, renyi_entropy,
    renyi_joint_entropy, renyi_mutual_information, shannon_entropy, Conditioning, EntropyOrder,
    JointDistribution,
};
use fpb_core::montecarlo::{self, SimulationConfig, Simulator};
use fpb_core::probe::{
    conclusive_joint_table, entangled_output, eve_povm, helstrom_error, helstrom_error_operational,
    helstrom_joint_table, joint_table, operational_joint_table, probe_outputs, usd_povm, Basis,
    Bit, ErrorProbability, ProbeKind,
};
use fpb_core::quantum::ComplexScalar as Complex64;
use fpb_core::quantum::{apply_cnot, tensor, validate_povm, StateVector, TOLERANCE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::{sweep_csv, SweepSpec};
use crate::report::ReportRecord;

pub const VERIFY_SEED: u64 = 0x5eed_f00d;
const RANDOM_CASES: usize = 500;

/// Grid with 1e-3 spacing on `[0, 1/3]`, plus the right endpoint.
pub fn millesimal_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..=333).map(|i| i as f64 * 1e-3).collect();
    g.push(ErrorProbability::MAX);
    g
}

fn dense_grid() -> Vec<f64> {
    uniform_grid(0.0, ErrorProbability::MAX, 334)
}

fn pe(v: f64) -> ErrorProbability {
    ErrorProbability::new(v).expect("grid inside [0, 1/3]")
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> StateVector {
    loop {
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 {
            return StateVector::normalized(amps.into_iter().map(|z| z / n).collect())
                .expect("normalized by construction");
        }
    }
}

fn random_distribution(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn random_joint(rng: &mut ChaCha8Rng) -> JointDistribution {
    let (r, c) = (rng.random_range(2..=4), rng.random_range(2..=4));
    JointDistribution::new(labels(r), labels(c), random_distribution(rng, r * c))
        .expect("normalized by construction")
}

fn random_uniform_row_joint(rng: &mut ChaCha8Rng) -> JointDistribution {
    let (r, c) = (rng.random_range(2..=4), rng.random_range(2..=4));
    let mut cells = Vec::with_capacity(r * c);
    for _ in 0..r {
        cells.extend(
            random_distribution(rng, c)
                .into_iter()
                .map(|x| x / r as f64),
        );
    }
    JointDistribution::new(labels(r), labels(c), cells).expect("normalized by construction")
}

fn orders() -> [EntropyOrder; 6] {
    [
        EntropyOrder::Zero,
        EntropyOrder::Finite(0.5),
        EntropyOrder::One,
        EntropyOrder::Finite(2.0),
        EntropyOrder::Finite(5.0),
        EntropyOrder::Infinity,
    ]
}

fn worst<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Joint table whose Shannon chain rule holds but whose order-2 analogue
/// misses by about 0.03 bits.
pub fn renyi2_chain_rule_counterexample() -> JointDistribution {
    JointDistribution::new(labels(2), labels(2), vec![0.6, 0.1, 0.1, 0.2]).expect("valid table")
}

fn quantum_checks(report: &mut ReportRecord, rng: &mut ChaCha8Rng) {
    let norm_gap = worst((0..RANDOM_CASES).map(|_| {
        let s = random_state(rng, 4);
        (apply_cnot(&s).expect("4-dim").norm() - s.norm()).abs()
    }));
    report.check(
        "quantum.cnot_preserves_norm",
        norm_gap <= TOLERANCE,
        format!("worst {norm_gap:.2e} over {RANDOM_CASES} states"),
    );

    let assoc = worst((0..RANDOM_CASES).map(|_| {
        let (a, b, c) = (
            random_state(rng, 2),
            random_state(rng, 2),
            random_state(rng, 2),
        );
        tensor(&tensor(&a, &b), &c)
            .max_abs_diff(&tensor(&a, &tensor(&b, &c)))
            .expect("same dims")
    }));
    report.check(
        "quantum.tensor_associative",
        assoc <= TOLERANCE,
        format!("worst {assoc:.2e}"),
    );

    let grid = dense_grid();
    let mut completeness = 0.0f64;
    let mut validated = 0usize;
    let mut all_pass = true;
    let mut prob_sum_gap = 0.0f64;
    for &p in &grid {
        for kind in ProbeKind::ALL {
            let povm = eve_povm(pe(p), kind);
            let r = validate_povm(&povm);
            validated += 1;
            all_pass &= r.passed();
            completeness = completeness.max(r.completeness_violation);
            let s = random_state(rng, 2);
            let total: f64 = povm.probabilities(&s).expect("qubit").iter().sum();
            prob_sum_gap = prob_sum_gap.max((total - 1.0).abs());
        }
    }
    report.output_fixed("povm_completeness.count", validated as f64, 0);
    report.check(
        "quantum.povm_completeness",
        all_pass && completeness <= TOLERANCE && validated >= grid.len(),
        format!("{validated} POVMs, worst completeness {completeness:.2e}"),
    );
    report.check(
        "quantum.povm_probabilities_sum_to_one",
        prob_sum_gap <= 1e-10,
        format!("worst {prob_sum_gap:.2e}"),
    );
}

fn probe_checks(report: &mut ReportRecord) {
    let grid = dense_grid();
    let recon = worst(grid.iter().flat_map(|&p| {
        Basis::ALL.into_iter().flat_map(move |basis| {
            Bit::ALL.into_iter().map(move |bit| {
                probe_outputs(pe(p), basis, bit)
                    .reconstruct()
                    .max_abs_diff(&entangled_output(pe(p), basis, bit))
                    .expect("same dims")
            })
        })
    }));
    report.check(
        "probe.cnot_reconstruction",
        recon <= TOLERANCE,
        format!("worst {recon:.2e} over {} points x 4 states", grid.len()),
    );

    for kind in ProbeKind::ALL {
        let gap = worst(grid.iter().flat_map(|&p| {
            let analytic = joint_table(pe(p), kind);
            Basis::ALL.into_iter().map(move |basis| {
                let op = operational_joint_table(pe(p), kind, basis).expect("valid table");
                worst(
                    analytic
                        .joint
                        .cells()
                        .iter()
                        .zip(op.cells())
                        .map(|(a, b)| (a - b).abs()),
                )
            })
        }));
        report.check(
            format!("probe.{kind}_table_matches_born_rule"),
            gap <= TOLERANCE,
            format!("worst {gap:.2e}"),
        );
    }

    let helstrom_routes = worst(
        grid.iter()
            .map(|&p| (helstrom_error(pe(p)) - helstrom_error_operational(pe(p))).abs()),
    );
    report.check(
        "probe.helstrom_error_two_routes",
        helstrom_routes <= TOLERANCE,
        format!("worst {helstrom_routes:.2e}"),
    );

    let exact_zero = grid.iter().all(|&p| {
        let t = conclusive_joint_table(pe(p));
        t.joint.get(0, 1) == 0.0 && t.joint.get(1, 0) == 0.0
    });
    let mut mc_zero = true;
    for seed in 0..4 {
        for p in [0.02, 0.15, 0.3] {
            let cfg = SimulationConfig::new(p, ProbeKind::Conclusive, 20_000, seed).expect("valid");
            let stats = montecarlo::simulate(cfg).expect("rounds retained");
            mc_zero &= stats.joint.get(0, 1) == 0.0 && stats.joint.get(1, 0) == 0.0;
        }
    }
    report.check(
        "probe.usd_zero_misidentification",
        exact_zero && mc_zero,
        "analytic and simulated mis-identification cells exactly 0",
    );

    let degenerate = usd_povm(pe(0.0)).degenerate && !usd_povm(pe(0.1)).degenerate;
    report.check(
        "probe.usd_degeneracy_flag",
        degenerate,
        "flag set only at P_E = 0",
    );

    let symmetric = grid.iter().all(|&p| {
        let t = helstrom_joint_table(pe(p));
        t.joint.get(0, 0) == t.joint.get(1, 1) && t.joint.get(0, 1) == t.joint.get(1, 0)
    });
    report.check(
        "probe.helstrom_bit_flip_symmetry",
        symmetric,
        "p(b,e) = p(1-b,1-e)",
    );
}

fn info_checks(report: &mut ReportRecord, rng: &mut ChaCha8Rng) {
    let mut monotone_gap = 0.0f64;
    let mut shannon_gap = 0.0f64;
    for _ in 0..RANDOM_CASES {
        let len = rng.random_range(2..=6);
        let p = random_distribution(rng, len);
        let values: Vec<f64> = orders()
            .iter()
            .map(|&o| renyi_entropy(&p, o).expect("valid"))
            .collect();
        for w in values.windows(2) {
            monotone_gap = monotone_gap.max(w[1] - w[0]);
        }
        let h = shannon_entropy(&p).expect("valid");
        for a in [1.0 - 1e-6, 1.0 + 1e-6] {
            let r = renyi_entropy(&p, EntropyOrder::Finite(a)).expect("valid");
            shannon_gap = shannon_gap.max((r - h).abs());
        }
    }
    report.check(
        "info.renyi_order_monotonicity",
        monotone_gap <= 1e-10,
        format!("largest increase {monotone_gap:.2e}"),
    );
    report.check(
        "info.shannon_limit",
        shannon_gap <= 1e-4,
        format!("worst |R(1±1e-6) - H| = {shannon_gap:.2e}"),
    );

    let mut chain = 0.0f64;
    let mut symmetry = 0.0f64;
    let mut negativity = 0.0f64;
    let mut binary_conditioning = 0.0f64;
    for _ in 0..RANDOM_CASES {
        let j = random_joint(rng);
        let hy = shannon_entropy(&j.col_marginal()).expect("valid");
        let hx = shannon_entropy(&j.row_marginal()).expect("valid");
        chain = chain
            .max((joint_entropy(&j) - hy - conditional_entropy(&j, Conditioning::XGivenY)).abs())
            .max((joint_entropy(&j) - hx - conditional_entropy(&j, Conditioning::YGivenX)).abs());
        let i = mutual_information(&j);
        symmetry = symmetry.max((i - mutual_information(&j.transpose())).abs());
        negativity = negativity.max(-i);

        let cols = rng.random_range(2..=4);
        let binary =
            JointDistribution::new(labels(2), labels(cols), random_distribution(rng, 2 * cols))
                .expect("valid");
        for alpha in [0.25, 0.5, 1.0, 1.5, 2.0] {
            let order = EntropyOrder::new(alpha).expect("valid order");
            let cond = conditional_renyi(&binary, order, Conditioning::XGivenY);
            let uncond = renyi_entropy(&binary.row_marginal(), order).expect("valid");
            binary_conditioning = binary_conditioning.max(cond - uncond);
        }
    }
    report.check(
        "info.shannon_chain_rule",
        chain <= 1e-10,
        format!("worst {chain:.2e}"),
    );
    report.check(
        "info.mi_symmetry_nonnegativity",
        symmetry <= 1e-12 && negativity <= 1e-10,
        format!(
            "asymmetry {symmetry:.2e}, most negative {:.2e}",
            -negativity
        ),
    );
    report.check(
        "info.binary_conditioning_reduces_renyi",
        binary_conditioning <= 1e-10,
        format!("largest excess {binary_conditioning:.2e} for alpha <= 2"),
    );

    let j = renyi2_chain_rule_counterexample();
    let order = EntropyOrder::Finite(2.0);
    let split = conditional_renyi(&j, order, Conditioning::XGivenY)
        + renyi_entropy(&j.col_marginal(), order).expect("valid");
    let miss = (renyi_joint_entropy(&j, order) - split).abs();
    report.output("renyi2_chain_rule_miss", miss);
    report.check(
        "info.renyi2_chain_rule_counterexample",
        miss > 1e-3,
        format!("expected failure of the chain rule: |R2(X,Y) - R2(X|Y) - R2(Y)| = {miss:.4}"),
    );

    let mut bound = 0.0f64;
    let bound_orders = [
        EntropyOrder::Finite(0.5),
        EntropyOrder::One,
        EntropyOrder::Finite(2.0),
        EntropyOrder::Infinity,
    ];
    for _ in 0..RANDOM_CASES {
        let j = random_uniform_row_joint(rng);
        let values: Vec<f64> = bound_orders
            .iter()
            .map(|&o| renyi_mutual_information(&j, o, Conditioning::XGivenY))
            .collect();
        for w in values.windows(2) {
            bound = bound.max(w[0] - w[1]);
        }
    }
    report.check(
        "info.renyi_mi_order_bound",
        bound <= 1e-10,
        format!("largest decrease {bound:.2e} over alpha in {{0.5,1,2,inf}}"),
    );

    let grid = dense_grid();
    let helstrom_sym = worst(grid.iter().flat_map(|&p| {
        let t = helstrom_joint_table(pe(p));
        orders().into_iter().map(move |o| {
            (renyi_mutual_information(&t.joint, o, Conditioning::XGivenY)
                - renyi_mutual_information(&t.joint, o, Conditioning::YGivenX))
            .abs()
        })
    }));
    let t = conclusive_joint_table(pe(0.15));
    let conclusive_asym = [EntropyOrder::Finite(2.0), EntropyOrder::Infinity]
        .into_iter()
        .all(|o| {
            (renyi_mutual_information(&t.joint, o, Conditioning::XGivenY)
                - renyi_mutual_information(&t.joint, o, Conditioning::YGivenX))
            .abs()
                > 1e-3
        });
    report.check(
        "info.direction_symmetry",
        helstrom_sym <= 1e-12 && conclusive_asym,
        format!("helstrom asymmetry {helstrom_sym:.2e}; conclusive directions differ"),
    );
}

fn curve_checks(report: &mut ReportRecord) {
    let grid = millesimal_grid();
    let oracle = worst(grid.iter().flat_map(|&p| {
        CurveId::ALL.into_iter().map(move |id| {
            (curve(id, p).expect("in range") - curve_from_table(id, p).expect("in range")).abs()
        })
    }));
    report.check(
        "curves.oracle_equivalence",
        oracle <= 1e-10,
        format!("worst {oracle:.2e} over {} points x 6 curves", grid.len()),
    );

    let ordering = grid.iter().all(|&p| {
        let s = curve(CurveId::HelstromShannon, p).expect("in range");
        let r2 = curve(CurveId::HelstromRenyi2, p).expect("in range");
        let ri = curve(CurveId::HelstromRenyiInf, p).expect("in range");
        ri >= r2 - 1e-12 && r2 >= s - 1e-12
    });
    report.check("curves.helstrom_ordering", ordering, "inf >= 2 >= shannon");

    let endpoints = worst(CurveId::ALL.into_iter().flat_map(|id| {
        [
            curve(id, 0.0).expect("in range").abs(),
            (curve(id, ErrorProbability::MAX).expect("in range") - 1.0).abs(),
        ]
    }));
    report.check(
        "curves.endpoints",
        endpoints <= 1e-10,
        format!("worst {endpoints:.2e}"),
    );

    let conclusive_orders = worst(grid.iter().flat_map(|&p| {
        let t = conclusive_joint_table(pe(p));
        let closed = curve(CurveId::Conclusive, p).expect("in range");
        [
            EntropyOrder::Finite(0.5),
            EntropyOrder::One,
            EntropyOrder::Finite(2.0),
            EntropyOrder::Infinity,
        ]
        .into_iter()
        .map(move |o| (renyi_mutual_information(&t.joint, o, Conditioning::XGivenY) - closed).abs())
    }));
    report.check(
        "curves.conclusive_order_independent",
        conclusive_orders <= 1e-10,
        format!("worst {conclusive_orders:.2e}"),
    );

    let eps = 1e-9;
    let joins = [
        curve(CurveId::ConclusiveReverseInf, 0.2 + eps).expect("in range"),
        curve(CurveId::ConclusiveReverseInf, 0.25 - eps).expect("in range") - 1.0,
    ];
    let fine = uniform_grid(0.0, ErrorProbability::MAX, 100_001);
    let jump = fine
        .windows(2)
        .map(|w| {
            (curve(CurveId::ConclusiveReverse2, w[1]).expect("in range")
                - curve(CurveId::ConclusiveReverse2, w[0]).expect("in range"))
            .abs()
        })
        .fold(0.0, f64::max);
    report.check(
        "curves.continuity",
        joins.iter().all(|v| v.abs() < 1e-6) && jump < 1e-3,
        format!("branch joins within 1e-6, largest order-2 step {jump:.2e}"),
    );
}

fn monte_carlo_checks(report: &mut ReportRecord) {
    let cfg = SimulationConfig::new(0.2, ProbeKind::Conclusive, 40_000, 17).expect("valid");
    let sim = Simulator::new(cfg);
    let deterministic = sim.run() == sim.run_range(0..40_000)
        && montecarlo::simulate(cfg).ok() == montecarlo::simulate(cfg).ok();
    report.seeds.push(17);
    report.check(
        "mc.determinism",
        deterministic,
        "parallel == serial, repeated runs identical",
    );

    let mut rates_ok = true;
    let mut worst_z = 0.0f64;
    for (i, p) in [0.0, 0.05, 1.0 / 6.0, 0.25, ErrorProbability::MAX]
        .into_iter()
        .enumerate()
    {
        let cfg =
            SimulationConfig::new(p, ProbeKind::Helstrom, 100_000, 100 + i as u64).expect("valid");
        let out = montecarlo::run(cfg).expect("rounds retained");
        worst_z = worst_z.max(out.error_rate_z().abs());
        rates_ok &= out.error_rate_z().abs() <= 3.0;
    }
    report.check(
        "mc.bob_error_identity",
        rates_ok,
        format!("worst |z| = {worst_z:.3}"),
    );

    let target = joint_table(pe(0.2), ProbeKind::Helstrom);
    let rms = |trials: u64| -> f64 {
        let seeds = 12u64;
        let total: f64 = (0..seeds)
            .map(|s| {
                let cfg = SimulationConfig::new(0.2, ProbeKind::Helstrom, trials, 500 + s)
                    .expect("valid");
                let stats = montecarlo::simulate(cfg).expect("rounds retained");
                stats
                    .joint
                    .cells()
                    .iter()
                    .zip(target.joint.cells())
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    / 4.0
            })
            .sum();
        (total / seeds as f64).sqrt()
    };
    let ratio = rms(4_000) / rms(64_000);
    report.output("mc.rms_ratio_16x", ratio);
    report.check(
        "mc.convergence",
        (2.0..=8.0).contains(&ratio),
        format!("RMS deviation ratio for 16x trials = {ratio:.3} (expect ~4)"),
    );
}

fn harness_checks(report: &mut ReportRecord) {
    let spec = SweepSpec::default();
    match (sweep_csv(&spec), sweep_csv(&spec)) {
        (Ok(a), Ok(b)) => {
            let clean = a
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | ',' | '-' | '_' | '\n'));
            let parses = a
                .lines()
                .skip(1)
                .all(|row| row.split(',').all(|v| v.parse::<f64>().is_ok()));
            report.check(
                "cli.csv_locale_independent",
                clean && parses && !a.contains('\r'),
                "dot decimals, comma separated, LF rows",
            );
            report.check("cli.sweep_reproducible", a == b, "byte-identical reruns");
        }
        _ => report.check("cli.sweep", false, "default sweep failed"),
    }
}

/// Runs every invariant group and collects the pass/fail matrix.
pub fn cmd_verify() -> ReportRecord {
    let mut report = ReportRecord::new("verify");
    report.seeds.push(VERIFY_SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    quantum_checks(&mut report, &mut rng);
    probe_checks(&mut report);
    info_checks(&mut report, &mut rng);
    curve_checks(&mut report);
    monte_carlo_checks(&mut report);
    harness_checks(&mut report);
    report
}
