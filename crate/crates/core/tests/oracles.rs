use sqc::openquantum::{open_search_run, NoiseSpec};
use sqc::qcore::{Operator, TrapSpec, C64};
use sqc::record::{write_records, RecordSchema};
use sqc::search::{
    ms_displacement, ms_effective_propagator, ms_spin_phase, multiqubit_sqc_search, sqc_search_run, MSSpec,
    SearchConfig,
};
use sqc::transport::{
    aqc_transport, sqc_transport_closed, sqc_transport_grid, transport_sweep, TransportMethod, TransportSetting,
};

#[test]
fn grid_matches_closed_form_over_full_sweep() {
    let trap = TrapSpec::default();
    let mut worst: f64 = 0.0;
    for setting in TransportSetting::ALL {
        for n in 1..=16 {
            let cfg = setting.config(n, 0.9, trap).unwrap();
            let closed = sqc_transport_closed(&cfg).unwrap();
            let grid = sqc_transport_grid(&cfg).unwrap();
            worst = worst.max((closed.fidelity - grid.fidelity).abs());
        }
    }
    assert!(worst < 1e-6, "worst gap {worst:e}");
}

#[test]
fn aqc_step_halving() {
    let trap = TrapSpec::default();
    let d = 10.0 * trap.x0();
    let coarse = aqc_transport(d, 8.0, &trap, None, 1e-3).unwrap();
    let fine = aqc_transport(d, 8.0, &trap, None, 5e-4).unwrap();
    assert!((coarse - fine).abs() < 1e-6, "{coarse} vs {fine}");
}

#[test]
fn ms_without_coupling_is_trivial() {
    let spec = MSSpec::new(0.0, 0.02, 1.0, 0.99, 6).unwrap();
    for t in [0.0, 1.0, 100.0, spec.gate_time()] {
        assert_eq!(ms_displacement(&spec, t), C64::new(0.0, 0.0));
        assert_eq!(ms_spin_phase(&spec, t), 0.0);
    }
    let u = ms_effective_propagator(&spec, spec.gate_time()).unwrap();
    let err = u.sub(&Operator::identity(u.dim())).unwrap().frobenius_norm();
    assert!(err < 1e-12);
}

#[test]
fn sweep_tables_are_byte_stable() {
    let table = || {
        let recs = transport_sweep(
            TransportSetting::II,
            0.9,
            &[1, 4, 9],
            TransportMethod::SqcClosed,
            TrapSpec::default(),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_records(&mut buf, RecordSchema::Transport, &["run".into()], &recs).unwrap();
        buf
    };
    assert_eq!(table(), table());
}

#[test]
fn larger_databases_reach_the_target() {
    for dim in [4, 8] {
        let cfg = SearchConfig::uniform(1.0, 16, 0.9, 1, dim).unwrap();
        let out = multiqubit_sqc_search(&cfg).unwrap();
        assert!(out.fidelity > 0.99, "N_G = {dim}: {}", out.fidelity);
    }
}

#[test]
fn noiseless_open_search_matches_closed() {
    for n in [1, 5] {
        let cfg = SearchConfig::two_entry(1.0, n, 0.9).unwrap();
        let closed = sqc_search_run(&cfg).unwrap();
        let open = open_search_run(&cfg, &NoiseSpec::noiseless(), None).unwrap();
        assert!((open.raw_fidelity - closed.fidelity).abs() < 1e-8);
        assert!((open.actual_probability - closed.actual_probability).abs() < 1e-8);
        for s in &open.samples {
            assert!((s.trace - 1.0).abs() < 1e-9);
            assert!(s.min_eigenvalue > -1e-9);
        }
    }
}
