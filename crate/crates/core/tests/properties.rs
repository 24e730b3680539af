use proptest::prelude::*;
use sqc::openquantum::{lindblad_step, post_select_system, NoiseSpec};
use sqc::qcore::{hermitian_propagator, kron, DensityMatrix, Operator, StateVector, TrapSpec, C64};
use sqc::search::{grover_reference, sqc_search_run, SearchConfig};
use sqc::selection::{cat_coefficients, expected_shift, readout_limits, weak_value, SelectionKind, SelectionPair};
use sqc::transport::{sqc_transport_closed, sqc_transport_grid, TransportConfig};
use sqc::wavepacket::{gaussian_ground_state, translate, GridSpec};

const KINDS: [SelectionKind; 3] = [
    SelectionKind::SigmaXOptimal,
    SelectionKind::SigmaYPhased,
    SelectionKind::EigenAnchored,
];

#[allow(clippy::needless_range_loop)]
fn hermitian(entries: &[f64]) -> Operator {
    let n = 4;
    let mut rows = vec![vec![C64::new(0.0, 0.0); n]; n];
    let mut k = 0;
    for i in 0..n {
        rows[i][i] = C64::new(entries[k], 0.0);
        k += 1;
        for j in i + 1..n {
            let z = C64::new(entries[k], entries[k + 1]);
            k += 2;
            rows[i][j] = z;
            rows[j][i] = z.conj();
        }
    }
    let refs: Vec<&[C64]> = rows.iter().map(|r| r.as_slice()).collect();
    Operator::from_rows(&refs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_overlap_is_p(p in 0.01f64..=1.0, k in 0usize..3) {
        let pair = SelectionPair::design(KINDS[k], p).unwrap();
        prop_assert!((pair.overlap().norm_sqr() - p).abs() < 1e-12);
        prop_assert!((pair.initial().norm() - 1.0).abs() < 1e-12);
        prop_assert!((pair.final_state().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_x_weak_value(p in 0.01f64..=1.0) {
        let pair = SelectionPair::design(SelectionKind::SigmaXOptimal, p).unwrap();
        let w = weak_value(&pair, &Operator::pauli_x()).unwrap();
        prop_assert!((w - C64::new(1.0 / p.sqrt(), 0.0)).norm() < 1e-10);
    }

    #[test]
    fn readout_between_limits(p in 0.02f64..=1.0, gamma in 0.0f64..20.0, b in any::<bool>()) {
        let kind = if b { SelectionKind::EigenAnchored } else { SelectionKind::SigmaXOptimal };
        let pair = SelectionPair::design(kind, p).unwrap();
        let shift = expected_shift(&cat_coefficients(&pair).with_strength(gamma, 1.0)).unwrap();
        let (weak, strong) = readout_limits(kind, p).unwrap();
        let (lo, hi) = (weak.min(strong), weak.max(strong));
        prop_assert!(shift >= lo - 1e-9 && shift <= hi + 1e-9, "{shift} not in [{lo}, {hi}]");
    }

    #[test]
    fn propagator_is_unitary(entries in proptest::collection::vec(-2.0f64..2.0, 16), t in -3.0f64..3.0) {
        let u = hermitian_propagator(&hermitian(&entries), t).unwrap();
        let prod = u.adjoint().compose(&u).unwrap();
        let err = prod.sub(&Operator::identity(4)).unwrap().frobenius_norm();
        prop_assert!(err < 1e-10);
    }

    #[test]
    fn penalty_identity(p_error in 0.0f64..0.5, a in 0usize..20, b in 0usize..20) {
        let noise = NoiseSpec::new(0.0, p_error).unwrap();
        prop_assert!((noise.penalty(a) - (1.0 - p_error).powi(a as i32)).abs() < 1e-14);
        prop_assert!((noise.penalty(a + b) - noise.penalty(a) * noise.penalty(b)).abs() < 1e-14);
    }

    #[test]
    fn lindblad_step_keeps_a_state(
        entries in proptest::collection::vec(-1.0f64..1.0, 16),
        gamma in 0.0f64..0.5,
        dt in 1e-4f64..1e-2,
    ) {
        let h = hermitian(&entries);
        let channels = [kron(&Operator::pauli_z(), &Operator::identity(2)).scale_real(gamma.sqrt())];
        let psi = StateVector::from_real(&[0.5, 0.5, 0.5, 0.5]).unwrap();
        let mut rho = DensityMatrix::pure(&psi);
        for _ in 0..20 {
            rho = lindblad_step(&rho, &h, &channels, dt).unwrap();
        }
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
        prop_assert!(rho.hermiticity_deviation() < 1e-12);
        prop_assert!(rho.min_eigenvalue() > -1e-10);
        prop_assert!(rho.purity() <= 1.0 + 1e-10);
    }

    #[test]
    fn post_selection_probability(p in 0.05f64..=1.0, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let pair = SelectionPair::design(SelectionKind::SigmaXOptimal, p).unwrap();
        let app = StateVector::from_real(&[1.0, a, b]).unwrap().normalized().unwrap();
        let joint = sqc::qcore::kron_states(pair.initial(), &app);
        let (out, prob) = post_select_system(&DensityMatrix::pure(&joint), pair.final_state(), 2, 3).unwrap();
        prop_assert!((prob - p).abs() < 1e-12);
        prop_assert!((out.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grover_reference_is_normalized(rounds in 0usize..40, theta in -1.5f64..1.5) {
        prop_assert!((grover_reference(rounds, theta).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn search_fidelity_in_range(g in 0.2f64..3.0, n in 1usize..12, prob in 0.2f64..=1.0) {
        let out = sqc_search_run(&SearchConfig::two_entry(g, n, prob).unwrap()).unwrap();
        prop_assert!((0.0..=1.0 + 1e-10).contains(&out.fidelity));
        prop_assert!(out.actual_probability > 0.0 && out.actual_probability <= 1.0 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn translations_compose(a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let trap = TrapSpec::default();
        let grid = GridSpec::new(-12.0, 12.0, 1024).unwrap();
        let psi = gaussian_ground_state(&grid, &trap, 0.0).unwrap();
        let two = translate(&translate(&psi, a).unwrap(), b).unwrap();
        let one = translate(&psi, a + b).unwrap();
        prop_assert!(two.fidelity(&one).unwrap() > 1.0 - 1e-12);
        prop_assert!((two.mean_x() - (a + b)).abs() < 1e-8);
    }

    #[test]
    fn closed_form_matches_grid(
        g in 0.5f64..1.5,
        d_over_x0 in 2.0f64..12.0,
        prob in 0.2f64..=1.0,
        n in 1usize..8,
    ) {
        let cfg = TransportConfig::with_distance_in_x0(g, d_over_x0, n, prob, TrapSpec::default()).unwrap();
        let closed = sqc_transport_closed(&cfg).unwrap();
        let grid = sqc_transport_grid(&cfg).unwrap();
        prop_assert!((closed.fidelity - grid.fidelity).abs() < 1e-6);
        prop_assert!((closed.actual_probability - grid.actual_probability).abs() < 1e-6);
        let expected_t = cfg.distance() / g * prob.powf(0.5 / n as f64);
        prop_assert!((cfg.duration() - expected_t).abs() < 1e-12);
    }
}
