mod common;

use magic_switch::channel::KrausChannel;
use magic_switch::gates;
use magic_switch::models::{self, QutritKrausVariant};
use magic_switch::operator::Operator;
use magic_switch::pauli::PauliBasis;
use magic_switch::qswitch::{
    build_switch, conditional_outputs, depolarizing_switch_closed_form, EffectiveDepolarizingSwitch,
};
use magic_switch::robustness::{channel_problem, channel_robustness, negative_weight, rom_state};
use magic_switch::stabilizer::{cspo_choi_atoms, StabilizerDictionary};
use magic_switch::state::DensityOperator;
use magic_switch::tolerance::FREE_ROBUSTNESS_TOL;

use common::*;

#[test]
fn rom_matches_basis_enumeration() {
    let dict = StabilizerDictionary::enumerate(1).unwrap();
    let basis = PauliBasis::new(1);
    let atoms: Vec<Vec<f64>> = dict
        .projectors()
        .iter()
        .map(|p| basis.vectorize(p).unwrap())
        .collect();
    let mut r = rng(7);
    for _ in 0..40 {
        let rho = random_state(2, &mut r);
        let lp = rom_state(&rho, &dict).unwrap();
        let brute = brute_force_l1(&atoms, &basis.vectorize(rho.op()).unwrap());
        assert!(
            (lp.value - brute).abs() < 1e-9,
            "lp {} brute {}",
            lp.value,
            brute
        );
        assert!(lp.duality_gap < 1e-8);
        assert!(lp.residual < 1e-7);
    }
    let t_plus =
        DensityOperator::new(gates::t_gate().conjugate(DensityOperator::plus(2).op())).unwrap();
    let brute = brute_force_l1(&atoms, &basis.vectorize(t_plus.op()).unwrap());
    assert!((brute - std::f64::consts::SQRT_2).abs() < 1e-12);
}

/// Depolarizing Kraus set over all `d²` unitaries: `√(1−p) I` plus
/// `√p U_i / d` for every `U_i` including the identity.
fn depolarizing_full(d: usize, p: f64) -> KrausChannel {
    let mut kraus = vec![Operator::identity(d).scale_real((1.0 - p).sqrt())];
    kraus.extend(
        gates::unitary_basis(d)
            .iter()
            .map(|u| u.scale_real(p.sqrt() / d as f64)),
    );
    KrausChannel::new_complete(kraus).unwrap()
}

#[test]
fn closed_form_matches_switch_of_explicit_kraus_sets() {
    for d in [2, 3] {
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let eff = EffectiveDepolarizingSwitch::new(d, p).unwrap();
            assert!((eff.weight_plus + eff.weight_minus - 1.0).abs() < 1e-15);
            let compact = KrausChannel::depolarizing(d, p).unwrap();
            let full = depolarizing_full(d, p);
            let sw_compact = build_switch(&compact, &compact).unwrap();
            let sw_full = build_switch(&full, &full).unwrap();
            let mut r = rng(1000 * d as u64 + k);
            for _ in 0..20 {
                let rho = random_state(d, &mut r);
                let (plus, minus) = depolarizing_switch_closed_form(d, p, &rho).unwrap();
                for sw in [&sw_compact, &sw_full] {
                    let out = conditional_outputs(sw, &rho, &DensityOperator::plus(2)).unwrap();
                    assert!(out.plus.op().max_abs_diff(plus.op()) < 1e-10, "d={d} p={p}");
                    assert!(
                        out.minus.op().max_abs_diff(minus.op()) < 1e-10,
                        "d={d} p={p}"
                    );
                }
            }
        }
    }
}

#[test]
fn plus_branch_matches_expanded_form() {
    // (4p − 3p²)/(2d) I + (1 − 2p + p² + p²/(2d²)) ρ
    let mut r = rng(3);
    for d in [2, 3, 5] {
        for p in [0.1, 0.5, 0.9] {
            let rho = random_state(d, &mut r);
            let (plus, _) = depolarizing_switch_closed_form(d, p, &rho).unwrap();
            let dd = d as f64;
            let expected = &Operator::identity(d).scale_real((4.0 * p - 3.0 * p * p) / (2.0 * dd))
                + &rho
                    .op()
                    .scale_real(1.0 - 2.0 * p + p * p + p * p / (2.0 * dd * dd));
            assert!(plus.op().max_abs_diff(&expected) < 1e-12);
        }
    }
}

#[test]
fn cross_term_of_switched_depolarizers() {
    // off-diagonal control block: ½[((1−p)² + p²/d²) ρ + 2p(1−p) I/d]
    for d in [2, 3] {
        let p = 0.4;
        let dp = KrausChannel::depolarizing(d, p).unwrap();
        let sw = build_switch(&dp, &dp).unwrap();
        let rho = random_state(d, &mut rng(11));
        let out = sw.apply(&DensityOperator::plus(2), &rho).unwrap();
        let block = Operator::from_fn(d, d, |r, c| out.op().get(r, d + c));
        let dd = d as f64;
        let expected = &rho
            .op()
            .scale_real(0.5 * ((1.0 - p) * (1.0 - p) + p * p / (dd * dd)))
            + &Operator::identity(d).scale_real(p * (1.0 - p) / dd);
        assert!(block.max_abs_diff(&expected) < 1e-12);
    }
}

#[test]
fn example_switch_matches_alpha_expansion() {
    let psi = [magic_switch::operator::C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0); 2];
    for p in [0.0, 0.2, 0.45, 0.8, 1.0] {
        let ch = models::qubit_example_channel(p).unwrap();
        let sw = build_switch(&ch, &ch).unwrap();
        let out = conditional_outputs(&sw, &DensityOperator::pure(&psi), &DensityOperator::plus(2))
            .unwrap();
        let (plus, minus) = alpha_expansion(ch.kraus(), &psi);
        assert!(out.plus.op().approx_eq(&plus, 1e-12));
        assert!(out.minus.op().approx_eq(&minus, 1e-12));
    }
}

#[test]
fn channel_decomposition_is_consistent() {
    let atoms = cspo_choi_atoms(&StabilizerDictionary::enumerate(2).unwrap()).unwrap();
    for ch in [
        KrausChannel::unitary(gates::t_gate()).unwrap(),
        models::qubit_example_channel(0.1).unwrap(),
        models::two_depolarized_t(0.2).unwrap(),
    ] {
        let sol = channel_robustness(&ch, &atoms).unwrap();
        let n = atoms.len();
        let (a, b) = sol.coefficients.split_at(n);
        assert!(a.iter().chain(b).all(|&x| x >= 0.0));
        let pos = atoms
            .iter()
            .zip(a)
            .fold(Operator::zeros(4, 4), |acc, (s, w)| {
                &acc + &s.projector.scale_real(*w)
            });
        let neg = atoms
            .iter()
            .zip(b)
            .fold(Operator::zeros(4, 4), |acc, (s, w)| {
                &acc + &s.projector.scale_real(*w)
            });
        let choi = ch.choi().unwrap();
        assert!((&pos - &neg).approx_eq(choi.op(), 1e-9));
        let p = negative_weight(&sol);
        let half = Operator::identity(2).scale_real(0.5);
        assert!(pos
            .partial_trace(&[2, 2], &[0])
            .unwrap()
            .approx_eq(&half.scale_real(1.0 + p), 1e-9));
        assert!(neg
            .partial_trace(&[2, 2], &[0])
            .unwrap()
            .approx_eq(&half.scale_real(p), 1e-9));
        assert!((sol.value - (1.0 + 2.0 * p)).abs() < 1e-9);
        assert!(sol.duality_gap < 1e-8);
        assert!(!channel_problem(&ch, &atoms)
            .unwrap()
            .to_lp_format()
            .is_empty());
    }
}

#[test]
fn free_channels_map_every_stabilizer_input_to_a_stabilizer_output() {
    let dict2 = StabilizerDictionary::enumerate(2).unwrap();
    let atoms = cspo_choi_atoms(&dict2).unwrap();
    for ch in [
        models::qubit_example_channel(0.5).unwrap(),
        models::two_depolarized_t(0.3).unwrap(),
        KrausChannel::unitary(gates::hadamard()).unwrap(),
    ] {
        assert!(channel_robustness(&ch, &atoms).unwrap().value < 1.0 + FREE_ROBUSTNESS_TOL);
        let extended = extend_with_identity(&ch);
        for s in dict2.projectors() {
            let out = DensityOperator::new(extended.apply_operator(s).unwrap()).unwrap();
            let r = rom_state(&out, &dict2).unwrap();
            assert!((r.value - 1.0).abs() < 1e-7, "R = {}", r.value);
        }
    }
}

#[test]
fn magic_channel_has_a_magic_output_on_some_stabilizer_input() {
    let dict2 = StabilizerDictionary::enumerate(2).unwrap();
    let extended = extend_with_identity(&KrausChannel::unitary(gates::t_gate()).unwrap());
    let best = dict2
        .projectors()
        .iter()
        .map(|s| {
            let out = DensityOperator::new(extended.apply_operator(s).unwrap()).unwrap();
            rom_state(&out, &dict2).unwrap().value
        })
        .fold(0.0, f64::max);
    assert!(best > 1.0 + 1e-3);
}

#[test]
fn qutrit_kraus_sets() {
    let printed = models::qutrit_example_channel(0.5, QutritKrausVariant::Printed).unwrap();
    let corrected = models::qutrit_example_channel(0.5, QutritKrausVariant::Corrected).unwrap();
    assert!(printed.completeness_deviation() > 0.1);
    assert!(corrected.completeness_deviation() < 1e-12);
    // the defect of the printed set scales with p
    let printed_small = models::qutrit_example_channel(0.1, QutritKrausVariant::Printed).unwrap();
    let ratio = printed.completeness_deviation() / printed_small.completeness_deviation();
    assert!((ratio - 5.0).abs() < 1e-9);
}

#[test]
fn switched_noise_identity_and_inequality() {
    for d in [2usize, 3, 5, 10] {
        for k in 1..=10_000 {
            let e = EffectiveDepolarizingSwitch::new(d, k as f64 * 1e-4).unwrap();
            assert!(e.gap_to_sequential() < 0.0);
            assert!(e.identity_residual().abs() < 1e-12);
            assert!((e.p_minus - (d * d) as f64 / (d * d - 1) as f64).abs() < 1e-15);
        }
    }
    let e = EffectiveDepolarizingSwitch::new(1000, 1.0).unwrap();
    assert!(e.gap_to_sequential() < 0.0);
}
