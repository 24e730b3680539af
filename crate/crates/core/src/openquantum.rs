//! Lindblad evolution with mid-protocol post-selection.
//!
//! `dρ/dt = −i[H,ρ] + Σ_k (C_k ρ C_k† − ½{C_k†C_k, ρ})`, integrated with
//! fixed-step RK4. Each SQC round resets the controller to `|i⟩`, evolves
//! the joint state for `δT`, and keeps the `|f⟩` block. Failed selections
//! are not sampled; the kept branch is renormalized and its probability
//! tracked. A per-selection loss `p_error` enters only as the factor
//! `(1 − p_error)^N` on the final fidelity.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qcore::{
    coherent_state, fidelity_mixed, fock_operators, kron, required_fock_cutoff, DensityMatrix, Operator, StateVector,
    C64, ONE, ZERO,
};
use crate::record::ExperimentRecord;
use crate::search::SearchConfig;
use crate::selection::{design_sigma_x_pair, design_sigma_y_pair, SelectionPair};
use crate::sparse::{axpy, CsrOperator};
use crate::transport::{TransportConfig, TransportSetting};

const MIN_SELECTION_PROBABILITY: f64 = 1e-12;

/// Default RK4 step cap.
pub const MAX_DT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    gamma: f64,
    p_error: f64,
}

impl NoiseSpec {
    pub fn new(gamma: f64, p_error: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::invalid("gamma", "must be non-negative"));
        }
        if !(0.0..1.0).contains(&p_error) {
            return Err(Error::invalid("p_error", "must be in [0,1)"));
        }
        Ok(NoiseSpec { gamma, p_error })
    }

    pub fn noiseless() -> Self {
        NoiseSpec {
            gamma: 0.0,
            p_error: 0.0,
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn p_error(&self) -> f64 {
        self.p_error
    }

    /// `(1 − p_error)^N`.
    pub fn penalty(&self, rounds: usize) -> f64 {
        (1.0 - self.p_error).powi(rounds as i32)
    }

    /// `√γ σz ⊗ I`, `√γ I ⊗ â`, `√γ I ⊗ â†` on qubit ⊗ oscillator.
    pub fn transport_channels(&self, n_max: usize) -> Result<Vec<Operator>> {
        if self.gamma == 0.0 {
            return Ok(Vec::new());
        }
        let f = fock_operators(n_max, &Default::default())?;
        let s = self.gamma.sqrt();
        Ok(vec![
            kron(&Operator::pauli_z(), &Operator::identity(n_max + 1)).scale_real(s),
            kron(&Operator::identity(2), &f.a).scale_real(s),
            kron(&Operator::identity(2), &f.a_dag).scale_real(s),
        ])
    }

    /// `√γ σz` on the controller and on the target qubit.
    pub fn search_channels(&self, register_dim: usize) -> Vec<Operator> {
        if self.gamma == 0.0 {
            return Vec::new();
        }
        let s = self.gamma.sqrt();
        let mut out = vec![kron(&Operator::pauli_z(), &Operator::identity(register_dim)).scale_real(s)];
        if register_dim == 2 {
            out.push(kron(&Operator::identity(2), &Operator::pauli_z()).scale_real(s));
        }
        out
    }
}

/// Invariants of `ρ` at one sampled time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantSample {
    pub time: f64,
    pub trace: f64,
    pub hermiticity: f64,
    pub min_eigenvalue: f64,
    pub purity: f64,
}

impl InvariantSample {
    pub fn of(rho: &DensityMatrix, time: f64) -> Self {
        InvariantSample {
            time,
            trace: rho.trace(),
            hermiticity: rho.hermiticity_deviation(),
            min_eigenvalue: rho.min_eigenvalue(),
            purity: rho.purity(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpenRunResult {
    pub raw_fidelity: f64,
    pub penalized_fidelity: f64,
    pub actual_probability: f64,
    pub round_probabilities: Vec<f64>,
    /// `tr ρ_A²` of the kept apparatus state after each selection.
    pub purity_trace: Vec<f64>,
    /// Joint state just before each selection.
    pub samples: Vec<InvariantSample>,
    pub n_max: Option<usize>,
}

/// Sparse generator `L(ρ) = Aρ + ρA† + Σ C ρ C†`, `A = −iH − ½ΣC†C`.
#[derive(Debug, Clone)]
pub struct Lindbladian {
    dim: usize,
    a: CsrOperator,
    channels: Vec<CsrOperator>,
}

impl Lindbladian {
    pub fn new(h: &Operator, channels: &[Operator]) -> Result<Self> {
        if !h.is_hermitian() {
            return Err(Error::NotHermitian {
                deviation: h.hermiticity_deviation(),
            });
        }
        let dim = h.dim();
        let mut a = h.matrix() * C64::new(0.0, -1.0);
        for c in channels {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.dim(),
                });
            }
            a -= (c.matrix().adjoint() * c.matrix()) * C64::new(0.5, 0.0);
        }
        Ok(Lindbladian {
            dim,
            a: CsrOperator::from_dense(&a),
            channels: channels.iter().map(CsrOperator::from_operator).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn rhs(&self, rho: &DMatrix<C64>, out: &mut DMatrix<C64>, scratch: &mut DMatrix<C64>) {
        self.a.mul_into(rho, scratch);
        out.copy_from(scratch);
        *out += scratch.adjoint();
        for c in &self.channels {
            c.mul_into(rho, scratch);
            let adj = scratch.adjoint();
            c.mul_add_into(ONE, &adj, out);
        }
    }

    /// One classical RK4 step.
    pub fn step(&self, rho: &mut DensityMatrix, dt: f64, work: &mut RkWork) {
        let w = work;
        let h = C64::new(dt, 0.0);
        let half = C64::new(dt / 2.0, 0.0);
        let r = rho.matrix_mut();
        self.rhs(r, &mut w.k1, &mut w.scratch);
        w.tmp.copy_from(r);
        axpy(&mut w.tmp, half, &w.k1);
        self.rhs(&w.tmp, &mut w.k2, &mut w.scratch);
        w.tmp.copy_from(r);
        axpy(&mut w.tmp, half, &w.k2);
        self.rhs(&w.tmp, &mut w.k3, &mut w.scratch);
        w.tmp.copy_from(r);
        axpy(&mut w.tmp, h, &w.k3);
        self.rhs(&w.tmp, &mut w.k4, &mut w.scratch);
        w.k2 += &w.k3;
        w.k1 += &w.k4;
        axpy(&mut w.k1, C64::new(2.0, 0.0), &w.k2);
        axpy(r, C64::new(dt / 6.0, 0.0), &w.k1);
        rho.symmetrize();
    }

    /// Evolves for `duration` with the largest step `≤ dt` that divides it.
    pub fn evolve(&self, rho: &mut DensityMatrix, duration: f64, dt: f64) -> Result<()> {
        if !(dt > 0.0 && duration >= 0.0) {
            return Err(Error::invalid("dt", "must be positive"));
        }
        if duration == 0.0 {
            return Ok(());
        }
        let steps = (duration / dt).ceil() as usize;
        let h = duration / steps as f64;
        let mut work = RkWork::new(self.dim);
        for n in 0..steps {
            self.step(rho, h, &mut work);
            if n % 64 == 63 && !rho.trace().is_finite() {
                return Err(Error::Diverged {
                    time: (n + 1) as f64 * h,
                });
            }
        }
        if !rho.trace().is_finite() {
            return Err(Error::Diverged { time: duration });
        }
        Ok(())
    }
}

/// Scratch buffers for [`Lindbladian::step`].
#[derive(Debug, Clone)]
pub struct RkWork {
    k1: DMatrix<C64>,
    k2: DMatrix<C64>,
    k3: DMatrix<C64>,
    k4: DMatrix<C64>,
    tmp: DMatrix<C64>,
    scratch: DMatrix<C64>,
}

impl RkWork {
    pub fn new(dim: usize) -> Self {
        let z = DMatrix::from_element(dim, dim, ZERO);
        RkWork {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z.clone(),
            scratch: z,
        }
    }
}

pub fn lindblad_step(rho: &DensityMatrix, h: &Operator, channels: &[Operator], dt: f64) -> Result<DensityMatrix> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: rho.dim(),
        });
    }
    let l = Lindbladian::new(h, channels)?;
    let mut out = rho.clone();
    l.step(&mut out, dt, &mut RkWork::new(h.dim()));
    if !out.trace().is_finite() {
        return Err(Error::Diverged { time: dt });
    }
    Ok(out)
}

/// Keeps the `|f⟩` block of the system factor, renormalized.
pub fn post_select_system(
    rho: &DensityMatrix,
    f: &StateVector,
    sys_dim: usize,
    app_dim: usize,
) -> Result<(DensityMatrix, f64)> {
    let (block, probability) = selected_block(rho, f, sys_dim, app_dim)?;
    let fsel = DensityMatrix::pure(f);
    let mut out = fsel.kron(&block);
    out.normalize_trace()?;
    Ok((out, probability))
}

/// `⟨f|ρ|f⟩` on the apparatus, normalized, with its probability.
fn selected_block(
    rho: &DensityMatrix,
    f: &StateVector,
    sys_dim: usize,
    app_dim: usize,
) -> Result<(DensityMatrix, f64)> {
    if rho.dim() != sys_dim * app_dim {
        return Err(Error::DimensionMismatch {
            expected: sys_dim * app_dim,
            got: rho.dim(),
        });
    }
    if f.dim() != sys_dim {
        return Err(Error::DimensionMismatch {
            expected: sys_dim,
            got: f.dim(),
        });
    }
    let m = rho.matrix();
    let fa = f.amplitudes();
    let block = DMatrix::from_fn(app_dim, app_dim, |k, l| {
        let mut acc = ZERO;
        for s in 0..sys_dim {
            for s2 in 0..sys_dim {
                acc += fa[s].conj() * m[(s * app_dim + k, s2 * app_dim + l)] * fa[s2];
            }
        }
        acc
    });
    let probability = block.trace().re;
    if !(probability > MIN_SELECTION_PROBABILITY) {
        return Err(Error::SelectionFailed { round: 0, probability });
    }
    let mut block = DensityMatrix::new(block)?;
    block.normalize_trace()?;
    Ok((block, probability))
}

struct Protocol<'a> {
    lindbladian: Lindbladian,
    pair: &'a SelectionPair,
    app_dim: usize,
    round_duration: f64,
    rounds: usize,
    dt: f64,
}

struct ProtocolOutput {
    apparatus: DensityMatrix,
    round_probabilities: Vec<f64>,
    purity_trace: Vec<f64>,
    samples: Vec<InvariantSample>,
}

impl Protocol<'_> {
    fn run(&self, start: DensityMatrix) -> Result<ProtocolOutput> {
        let init = DensityMatrix::pure(self.pair.initial());
        let mut app = start;
        let mut round_probabilities = Vec::with_capacity(self.rounds);
        let mut purity_trace = Vec::with_capacity(self.rounds);
        let mut samples = Vec::with_capacity(self.rounds);
        for round in 1..=self.rounds {
            let mut joint = init.kron(&app);
            self.lindbladian.evolve(&mut joint, self.round_duration, self.dt)?;
            samples.push(InvariantSample::of(&joint, round as f64 * self.round_duration));
            let (block, probability) =
                selected_block(&joint, self.pair.final_state(), 2, self.app_dim).map_err(|e| match e {
                    Error::SelectionFailed { probability, .. } => Error::SelectionFailed { round, probability },
                    other => other,
                })?;
            purity_trace.push(block.purity());
            round_probabilities.push(probability);
            app = block;
        }
        Ok(ProtocolOutput {
            apparatus: app,
            round_probabilities,
            purity_trace,
            samples,
        })
    }
}

/// Step used when none is given: `min(1e-3, δT/100)`.
pub fn default_dt(round_duration: f64) -> f64 {
    MAX_DT.min(round_duration / 100.0)
}

/// Transport in truncated Fock space with `H = g σx ⊗ p̂`, scored against
/// the coherent state `α = d/(2x0)`.
pub fn open_transport_run(
    cfg: &TransportConfig,
    noise: &NoiseSpec,
    n_max: usize,
    dt: Option<f64>,
) -> Result<OpenRunResult> {
    let trap = *cfg.trap();
    let alpha = C64::new(cfg.distance() / (2.0 * trap.x0()), 0.0);
    let required = required_fock_cutoff(alpha);
    if n_max < required {
        return Err(Error::TruncationTooSmall { n_max, required });
    }
    let fock = fock_operators(n_max, &trap)?;
    let h = kron(&Operator::pauli_x(), &fock.p).scale_real(cfg.coupling());
    let channels = noise.transport_channels(n_max)?;
    let pair = design_sigma_x_pair(cfg.round_probability())?;
    let round_duration = if cfg.coupling() == 0.0 {
        0.0
    } else {
        cfg.round_duration()
    };
    let protocol = Protocol {
        lindbladian: Lindbladian::new(&h, &channels)?,
        pair: &pair,
        app_dim: n_max + 1,
        round_duration,
        rounds: cfg.rounds(),
        dt: dt.unwrap_or_else(|| default_dt(round_duration.max(f64::MIN_POSITIVE))),
    };
    let vacuum = DensityMatrix::pure(&StateVector::basis(n_max + 1, 0));
    let out = protocol.run(vacuum)?;
    let target = coherent_state(alpha, n_max)?;
    let raw = fidelity_mixed(&out.apparatus, &target)?;
    Ok(finish(out, raw, noise, cfg.rounds(), Some(n_max)))
}

/// Two-entry search with `√γ σz` dephasing on both qubits.
pub fn open_search_run(cfg: &SearchConfig, noise: &NoiseSpec, dt: Option<f64>) -> Result<OpenRunResult> {
    let rot = cfg.rotation()?;
    let dim = cfg.dim();
    let h = kron(&Operator::pauli_y(), &rot.sigma_tilde_y).scale_real(-cfg.coupling());
    let channels = noise.search_channels(dim);
    let pair = design_sigma_y_pair(cfg.round_probability())?;
    let protocol = Protocol {
        lindbladian: Lindbladian::new(&h, &channels)?,
        pair: &pair,
        app_dim: dim,
        round_duration: cfg.round_duration(),
        rounds: cfg.rounds(),
        dt: dt.unwrap_or_else(|| default_dt(cfg.round_duration())),
    };
    let out = protocol.run(DensityMatrix::pure(&rot.database))?;
    let raw = out.apparatus.matrix()[(cfg.target(), cfg.target())].re;
    Ok(finish(out, raw, noise, cfg.rounds(), None))
}

fn finish(out: ProtocolOutput, raw: f64, noise: &NoiseSpec, rounds: usize, n_max: Option<usize>) -> OpenRunResult {
    OpenRunResult {
        raw_fidelity: raw,
        penalized_fidelity: raw * noise.penalty(rounds),
        actual_probability: out.round_probabilities.iter().product(),
        round_probabilities: out.round_probabilities,
        purity_trace: out.purity_trace,
        samples: out.samples,
        n_max,
    }
}

/// `N` of the penalized-fidelity maximum if it is not an endpoint.
pub fn tradeoff_peak(records: &[ExperimentRecord]) -> Option<usize> {
    if records.len() < 3 {
        return None;
    }
    let mut best = 0;
    for (i, r) in records.iter().enumerate() {
        if r.scored_fidelity() > records[best].scored_fidelity() {
            best = i;
        }
    }
    if best == 0 || best == records.len() - 1 {
        None
    } else {
        records[best].rounds
    }
}

pub fn open_transport_record(
    setting: TransportSetting,
    total_probability: f64,
    rounds: usize,
    noise: &NoiseSpec,
    n_max: usize,
    dt: Option<f64>,
) -> Result<ExperimentRecord> {
    let cfg = setting.config(rounds, total_probability, Default::default())?;
    let mut rec = open_transport_record_for(&cfg, Some(setting.label()), noise, n_max, dt)?;
    rec.distance_over_x0 = Some(setting.distance_over_x0());
    Ok(rec)
}

pub fn open_transport_record_for(
    cfg: &TransportConfig,
    setting: Option<&str>,
    noise: &NoiseSpec,
    n_max: usize,
    dt: Option<f64>,
) -> Result<ExperimentRecord> {
    let r = open_transport_run(cfg, noise, n_max, dt)?;
    Ok(ExperimentRecord {
        protocol: "open-transport".into(),
        setting: setting.map(Into::into),
        rounds: Some(cfg.rounds()),
        duration: Some(cfg.duration()),
        round_duration: Some(cfg.round_duration()),
        coupling: cfg.coupling(),
        distance_over_x0: Some(cfg.distance() / cfg.trap().x0()),
        p_nominal: cfg.total_probability(),
        p_actual: r.actual_probability,
        fidelity: r.raw_fidelity,
        fidelity_penalized: Some(r.penalized_fidelity),
        gamma: Some(noise.gamma()),
        p_error: Some(noise.p_error()),
        n_max: Some(n_max),
        ..Default::default()
    })
}

pub fn open_search_record(cfg: &SearchConfig, noise: &NoiseSpec, dt: Option<f64>) -> Result<ExperimentRecord> {
    let r = open_search_run(cfg, noise, dt)?;
    Ok(ExperimentRecord {
        protocol: "open-search".into(),
        rounds: Some(cfg.rounds()),
        duration: Some(cfg.duration()),
        round_duration: Some(cfg.round_duration()),
        coupling: cfg.coupling(),
        p_nominal: cfg.total_probability(),
        p_actual: r.actual_probability,
        fidelity: r.raw_fidelity,
        fidelity_penalized: Some(r.penalized_fidelity),
        gamma: Some(noise.gamma()),
        p_error: Some(noise.p_error()),
        ..Default::default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{fidelity_pure, hermitian_propagator};
    use crate::search::sqc_search_run;

    fn plus() -> StateVector {
        StateVector::from_real(&[1.0, 1.0]).unwrap().normalized().unwrap()
    }

    #[test]
    fn closed_system_step_is_conjugation() {
        let h = Operator::pauli_x().add(&Operator::pauli_z().scale_real(0.3)).unwrap();
        let rho = DensityMatrix::pure(&StateVector::basis(2, 0));
        let dt = 0.01;
        let out = lindblad_step(&rho, &h, &[], dt).unwrap();
        let u = hermitian_propagator(&h, dt).unwrap();
        let want = u.matrix() * rho.matrix() * u.matrix().adjoint();
        assert!((out.matrix() - want).norm() < 1e-10);
        assert!((out.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dephasing_and_damping_closed_forms() {
        let gamma: f64 = 0.3;
        let l = Lindbladian::new(&Operator::zeros(2), &[Operator::pauli_z().scale_real(gamma.sqrt())]).unwrap();
        let mut rho = DensityMatrix::pure(&plus());
        l.evolve(&mut rho, 2.0, 1e-3).unwrap();
        assert!((rho.matrix()[(0, 1)].re - 0.5 * (-2.0 * gamma * 2.0f64).exp()).abs() < 1e-10);

        let f = fock_operators(4, &Default::default()).unwrap();
        let l = Lindbladian::new(&Operator::zeros(5), &[f.a.scale_real(gamma.sqrt())]).unwrap();
        let mut rho = DensityMatrix::pure(&StateVector::basis(5, 1));
        l.evolve(&mut rho, 1.5, 1e-3).unwrap();
        assert!((rho.matrix()[(1, 1)].re - (-gamma * 1.5f64).exp()).abs() < 1e-10);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn post_selection_examples() {
        let app = DensityMatrix::maximally_mixed(3);
        let rho = DensityMatrix::pure(&StateVector::basis(2, 0)).kron(&app);
        let (out, p) = post_select_system(&rho, &StateVector::basis(2, 0), 2, 3).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        assert!((out.matrix() - rho.matrix()).norm() < 1e-15);

        let rho = DensityMatrix::maximally_mixed(2).kron(&app);
        let (_, p) = post_select_system(&rho, &StateVector::basis(2, 0), 2, 3).unwrap();
        assert!((p - 0.5).abs() < 1e-15);

        let rho = DensityMatrix::pure(&StateVector::basis(2, 1)).kron(&app);
        assert!(matches!(
            post_select_system(&rho, &StateVector::basis(2, 0), 2, 3),
            Err(Error::SelectionFailed { .. })
        ));
    }

    #[test]
    fn noiseless_search_matches_pure_run() {
        for n in [1usize, 4, 9] {
            let cfg = SearchConfig::two_entry(1.0, n, 0.9).unwrap();
            let open = open_search_run(&cfg, &NoiseSpec::noiseless(), None).unwrap();
            let pure = sqc_search_run(&cfg).unwrap();
            assert!((open.raw_fidelity - pure.fidelity).abs() < 1e-8);
            for (a, b) in open.round_probabilities.iter().zip(&pure.round_probabilities) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn dephasing_lowers_search_fidelity() {
        let cfg = SearchConfig::two_entry(1.0, 4, 0.9).unwrap();
        let noisy = open_search_run(&cfg, &NoiseSpec::new(0.01, 5e-3).unwrap(), None).unwrap();
        let pure = sqc_search_run(&cfg).unwrap();
        assert!(noisy.raw_fidelity < pure.fidelity);
        assert!((noisy.penalized_fidelity / noisy.raw_fidelity - 0.995f64.powi(4)).abs() < 1e-15);
        for s in &noisy.samples {
            assert!((s.trace - 1.0).abs() < 1e-8 && s.hermiticity < 1e-10 && s.min_eigenvalue > -1e-10);
        }
    }

    #[test]
    fn noiseless_transport_round_probabilities() {
        let cfg = TransportConfig::new(1.0, 1.2, 3, 0.6, Default::default()).unwrap();
        let open = open_transport_run(&cfg, &NoiseSpec::noiseless(), 30, Some(1e-3)).unwrap();
        let pure = crate::transport::sqc_transport_closed(&cfg).unwrap();
        for (a, b) in open.round_probabilities.iter().zip(&pure.round_probabilities) {
            assert!((a - b).abs() < 1e-8);
        }
        assert!((open.raw_fidelity - pure.fidelity).abs() < 1e-6);
    }

    #[test]
    fn truncation_gate() {
        let cfg = TransportSetting::II.config(2, 0.9, Default::default()).unwrap();
        assert!(matches!(
            open_transport_run(&cfg, &NoiseSpec::noiseless(), 10, None),
            Err(Error::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn purity_falls_under_commuting_dephasing() {
        let h = kron(&Operator::pauli_z(), &Operator::pauli_x());
        let c = kron(&Operator::pauli_z(), &Operator::identity(2)).scale_real(0.1);
        let l = Lindbladian::new(&h, &[c]).unwrap();
        let start = crate::qcore::kron_states(&plus(), &StateVector::basis(2, 0));
        let mut rho = DensityMatrix::pure(&start);
        let mut last = rho.purity();
        for _ in 0..20 {
            l.evolve(&mut rho, 0.1, 1e-3).unwrap();
            assert!(rho.purity() <= last + 1e-14);
            last = rho.purity();
        }
        assert!(fidelity_pure(&start, &start).unwrap() > last);
    }

    #[test]
    fn tradeoff_peak_examples() {
        let rec = |n: usize, f: f64| ExperimentRecord {
            rounds: Some(n),
            fidelity: f,
            ..Default::default()
        };
        assert_eq!(tradeoff_peak(&[rec(1, 0.8), rec(2, 0.9), rec(3, 0.85)]), Some(2));
        assert_eq!(tradeoff_peak(&[rec(1, 0.8), rec(2, 0.9), rec(3, 0.95)]), None);
        assert_eq!(tradeoff_peak(&[rec(1, 0.99), rec(2, 0.9), rec(3, 0.85)]), None);
    }

    #[test]
    fn noise_validation() {
        assert!(NoiseSpec::new(-0.1, 0.0).is_err());
        assert!(NoiseSpec::new(0.1, 1.0).is_err());
        assert!(NoiseSpec::new(0.0, 0.0).is_ok());
    }
}
