use fpb_core::curves::{curve, CurveId};
use fpb_core::info::{
    conditional_entropy, conditional_renyi, joint_entropy, mutual_information, renyi_entropy,
    renyi_mutual_information, shannon_entropy, Conditioning, EntropyOrder, JointDistribution,
};
use fpb_core::probe::{
    entangled_output, eve_povm, helstrom_joint_table, probe_outputs, Basis, Bit, ErrorProbability,
    ProbeKind,
};
use fpb_core::quantum::{apply_cnot, tensor, validate_povm, StateVector};
use num_complex::Complex64;
use proptest::prelude::*;

fn state(dim: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim)
        .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
        .prop_map(|v| {
            let amps = v
                .chunks(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect::<Vec<_>>();
            let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            StateVector::normalized(amps.into_iter().map(|z| z / n).collect()).unwrap()
        })
}

fn distribution(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 2..=max_len)
        .prop_filter("nonzero", |v| v.iter().sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let total: f64 = v.iter().sum();
            v.into_iter().map(|x| x / total).collect()
        })
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn joint(max_rows: usize, max_cols: usize) -> impl Strategy<Value = JointDistribution> {
    (2..=max_rows, 2..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(0.0f64..1.0, r * c)
            .prop_filter("nonzero", |v| v.iter().sum::<f64>() > 1e-3)
            .prop_map(move |v| {
                let total: f64 = v.iter().sum();
                JointDistribution::new(
                    labels(r),
                    labels(c),
                    v.into_iter().map(|x| x / total).collect(),
                )
                .unwrap()
            })
    })
}

/// Joint tables whose row marginal is uniform.
fn uniform_row_joint() -> impl Strategy<Value = JointDistribution> {
    (2usize..=4, 2usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(0.01f64..1.0, c), r).prop_map(move |rows| {
            let mut cells = Vec::with_capacity(r * c);
            for row in rows {
                let total: f64 = row.iter().sum();
                cells.extend(row.into_iter().map(|x| x / total / r as f64));
            }
            JointDistribution::new(labels(r), labels(c), cells).unwrap()
        })
    })
}

fn order() -> impl Strategy<Value = EntropyOrder> {
    prop_oneof![
        Just(EntropyOrder::Zero),
        Just(EntropyOrder::One),
        Just(EntropyOrder::Infinity),
        (0.05f64..8.0)
            .prop_filter("away from 1", |a| (a - 1.0).abs() > 1e-3)
            .prop_map(EntropyOrder::Finite),
    ]
}

fn pe() -> impl Strategy<Value = f64> {
    0.0f64..=(1.0 / 3.0)
}

proptest! {
    #[test]
    fn cnot_preserves_norm(s in state(4)) {
        let out = apply_cnot(&s).unwrap();
        prop_assert!((out.norm() - s.norm()).abs() < 1e-12);
        prop_assert!(apply_cnot(&out).unwrap().max_abs_diff(&s).unwrap() == 0.0);
    }

    #[test]
    fn tensor_is_associative(a in state(2), b in state(2), c in state(2)) {
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        prop_assert!(left.max_abs_diff(&right).unwrap() < 1e-15);
    }

    #[test]
    fn povm_probabilities_sum_to_one(p in pe(), s in state(2)) {
        for kind in ProbeKind::ALL {
            let povm = eve_povm(ErrorProbability::new(p).unwrap(), kind);
            prop_assert!(validate_povm(&povm).passed());
            let probs = povm.probabilities(&s).unwrap();
            prop_assert!(probs.iter().all(|&x| x >= 0.0));
            prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn probe_decomposition_matches_cnot(p in pe()) {
        let pe = ErrorProbability::new(p).unwrap();
        for basis in Basis::ALL {
            for bit in Bit::ALL {
                let out = probe_outputs(pe, basis, bit);
                let direct = entangled_output(pe, basis, bit);
                prop_assert!(out.reconstruct().max_abs_diff(&direct).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn renyi_non_increasing_in_order(p in distribution(6), a in order(), b in order()) {
        let (lo, hi) = if a.alpha() <= b.alpha() { (a, b) } else { (b, a) };
        let r_hi = renyi_entropy(&p, hi).unwrap();
        let r_lo = renyi_entropy(&p, lo).unwrap();
        prop_assert!(r_hi <= r_lo + 1e-10, "{lo}: {r_lo}, {hi}: {r_hi}");
        prop_assert!(r_hi >= -1e-12 && r_lo <= (p.len() as f64).log2() + 1e-12);
    }

    #[test]
    fn shannon_limit(p in distribution(6)) {
        let h = shannon_entropy(&p).unwrap();
        for alpha in [1.0 - 1e-6, 1.0 + 1e-6] {
            let r = renyi_entropy(&p, EntropyOrder::Finite(alpha)).unwrap();
            prop_assert!((r - h).abs() <= 1e-4);
        }
    }

    #[test]
    fn shannon_chain_rule(j in joint(4, 4)) {
        let hx = shannon_entropy(&j.row_marginal()).unwrap();
        let hy = shannon_entropy(&j.col_marginal()).unwrap();
        let hxy = joint_entropy(&j);
        prop_assert!((hxy - hy - conditional_entropy(&j, Conditioning::XGivenY)).abs() < 1e-10);
        prop_assert!((hxy - hx - conditional_entropy(&j, Conditioning::YGivenX)).abs() < 1e-10);
    }

    #[test]
    fn mutual_information_identities(j in joint(4, 4)) {
        let i = mutual_information(&j);
        prop_assert!(i >= -1e-10);
        prop_assert!((i - mutual_information(&j.transpose())).abs() < 1e-12);
        let hx = shannon_entropy(&j.row_marginal()).unwrap();
        let hy = shannon_entropy(&j.col_marginal()).unwrap();
        prop_assert!((i - (hx - conditional_entropy(&j, Conditioning::XGivenY))).abs() < 1e-10);
        prop_assert!((i - (hy - conditional_entropy(&j, Conditioning::YGivenX))).abs() < 1e-10);
    }

    #[test]
    fn conditional_renyi_non_increasing_in_order(j in joint(4, 4), a in order(), b in order()) {
        let (lo, hi) = if a.alpha() <= b.alpha() { (a, b) } else { (b, a) };
        for dir in [Conditioning::XGivenY, Conditioning::YGivenX] {
            prop_assert!(conditional_renyi(&j, hi, dir) <= conditional_renyi(&j, lo, dir) + 1e-10);
        }
    }

    #[test]
    fn conditioning_reduces_binary_renyi(j in joint(2, 4), alpha in 0.05f64..=2.0) {
        let order = EntropyOrder::new(alpha).unwrap();
        let cond = conditional_renyi(&j, order, Conditioning::XGivenY);
        let uncond = renyi_entropy(&j.row_marginal(), order).unwrap();
        prop_assert!(cond <= uncond + 1e-10, "alpha={alpha}: {cond} > {uncond}");
    }

    #[test]
    fn renyi_information_grows_with_order_for_uniform_x(j in uniform_row_joint()) {
        let orders = [
            EntropyOrder::Finite(0.5),
            EntropyOrder::One,
            EntropyOrder::Finite(2.0),
            EntropyOrder::Infinity,
        ];
        let values: Vec<f64> = orders
            .iter()
            .map(|&o| renyi_mutual_information(&j, o, Conditioning::XGivenY))
            .collect();
        for w in values.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-10, "{values:?}");
        }
    }

    #[test]
    fn helstrom_information_is_direction_symmetric(p in pe(), a in order()) {
        let t = helstrom_joint_table(ErrorProbability::new(p).unwrap());
        let fwd = renyi_mutual_information(&t.joint, a, Conditioning::XGivenY);
        let rev = renyi_mutual_information(&t.joint, a, Conditioning::YGivenX);
        prop_assert!((fwd - rev).abs() < 1e-12);
    }

    #[test]
    fn helstrom_curves_ordered(p in pe()) {
        let s = curve(CurveId::HelstromShannon, p).unwrap();
        let r2 = curve(CurveId::HelstromRenyi2, p).unwrap();
        let rinf = curve(CurveId::HelstromRenyiInf, p).unwrap();
        prop_assert!(rinf >= r2 - 1e-12 && r2 >= s - 1e-12);
        for id in CurveId::ALL {
            let v = curve(id, p).unwrap();
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v), "{id} at {p}: {v}");
        }
    }
}

#[test]
fn renyi_chain_rule_fails_at_order_two() {
    // Shannon chain rule holds here, the order-2 analogue misses by ~0.03 bits.
    let j = JointDistribution::new(labels(2), labels(2), vec![0.6, 0.1, 0.1, 0.2]).unwrap();
    let order = EntropyOrder::Finite(2.0);
    let joint2 = fpb_core::info::renyi_joint_entropy(&j, order);
    let split = conditional_renyi(&j, order, Conditioning::XGivenY)
        + renyi_entropy(&j.col_marginal(), order).unwrap();
    assert!((joint2 - split).abs() > 1e-3, "{joint2} vs {split}");
    let shannon_split = conditional_entropy(&j, Conditioning::XGivenY)
        + shannon_entropy(&j.col_marginal()).unwrap();
    assert!((joint_entropy(&j) - shannon_split).abs() < 1e-12);
}

#[test]
fn conclusive_information_is_asymmetric() {
    let t = fpb_core::probe::conclusive_joint_table(ErrorProbability::new(0.15).unwrap());
    for order in [
        EntropyOrder::Finite(2.0),
        EntropyOrder::Infinity,
        EntropyOrder::Finite(0.5),
    ] {
        let fwd = renyi_mutual_information(&t.joint, order, Conditioning::XGivenY);
        let rev = renyi_mutual_information(&t.joint, order, Conditioning::YGivenX);
        assert!((fwd - rev).abs() > 1e-3, "order {order}: {fwd} vs {rev}");
    }
    let fwd = renyi_mutual_information(&t.joint, EntropyOrder::One, Conditioning::XGivenY);
    let rev = renyi_mutual_information(&t.joint, EntropyOrder::One, Conditioning::YGivenX);
    assert!((fwd - rev).abs() < 1e-12);
}

#[test]
fn conclusive_conditional_entropy_is_inconclusive_rate() {
    for p in [0.0, 0.05, 0.2, 0.3, 1.0 / 3.0] {
        let t = fpb_core::probe::conclusive_joint_table(ErrorProbability::new(p).unwrap());
        for order in [
            EntropyOrder::Zero,
            EntropyOrder::Finite(0.5),
            EntropyOrder::One,
            EntropyOrder::Finite(2.0),
            EntropyOrder::Infinity,
        ] {
            let r = conditional_renyi(&t.joint, order, Conditioning::XGivenY);
            assert!((r - (1.0 - 3.0 * p) / (1.0 - p)).abs() < 1e-12);
            let i = renyi_mutual_information(&t.joint, order, Conditioning::XGivenY);
            assert!((i - 2.0 * p / (1.0 - p)).abs() < 1e-12);
        }
    }
}
