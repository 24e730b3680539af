//! Analog Grover search by sequential selections.
//!
//! A controller qubit in `|i⟩` couples to the target register through
//! `H = −g σy ⊗ σ̃y` for `δT` and is post-selected on `|f⟩`. With the
//! `σy`-phased pair every successful round multiplies the register by
//! `K = √p cos(gδT) I + i sin(gδT) σ̃y`, a small rotation toward the target
//! whose accumulated angle is `N gδT σw`. Also here: the digital Grover
//! reference, the type-I/type-II adiabatic baselines with their energy
//! costs, and the two-ion Mølmer–Sørensen propagator with a numerical check
//! against the full bichromatic drive.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::qcore::{
    coherent_state, fock_operators, hermitian_propagator, kron, kron_states, required_fock_cutoff, Operator,
    StateVector, TrapSpec, C64, I, ONE, ZERO,
};
use crate::quadrature::adaptive_simpson;
use crate::record::ExperimentRecord;
use crate::selection::{design_sigma_y_pair, SelectionPair};
use crate::sparse::{axpy, CsrOperator};

const MIN_SELECTION_PROBABILITY: f64 = 1e-12;
const COST_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    coupling: f64,
    rounds: usize,
    total_probability: f64,
    target: usize,
    database: Vec<f64>,
}

impl SearchConfig {
    /// Two entries, target `|0⟩`, database `|+⟩` (`θ0 = π/4`).
    pub fn two_entry(coupling: f64, rounds: usize, total_probability: f64) -> Result<Self> {
        Self::with_database(
            coupling,
            rounds,
            total_probability,
            0,
            &[FRAC_PI_4.sin(), FRAC_PI_4.cos()],
        )
    }

    /// Uniform database over `dim` entries.
    pub fn uniform(coupling: f64, rounds: usize, total_probability: f64, target: usize, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid("N_G", "must be at least 2"));
        }
        let amp = 1.0 / (dim as f64).sqrt();
        Self::with_database(coupling, rounds, total_probability, target, &vec![amp; dim])
    }

    pub fn with_database(
        coupling: f64,
        rounds: usize,
        total_probability: f64,
        target: usize,
        database: &[f64],
    ) -> Result<Self> {
        if !(coupling > 0.0 && coupling.is_finite()) {
            return Err(Error::invalid("g", "must be positive"));
        }
        if rounds == 0 {
            return Err(Error::invalid("N", "must be at least 1"));
        }
        if !(total_probability > 0.0 && total_probability <= 1.0) {
            return Err(Error::invalid("P", "must be in (0,1]"));
        }
        let cfg = SearchConfig {
            coupling,
            rounds,
            total_probability,
            target,
            database: database.to_vec(),
        };
        cfg.rotation()?;
        Ok(cfg)
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn total_probability(&self) -> f64 {
        self.total_probability
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn dim(&self) -> usize {
        self.database.len()
    }

    pub fn database(&self) -> &[f64] {
        &self.database
    }

    pub fn rotation(&self) -> Result<GeneralRotation> {
        build_general_rotation(self.target, &self.database, self.database.len())
    }

    /// `θ0 = arcsin⟨t|Ψ⟩`.
    pub fn theta0(&self) -> f64 {
        self.database[self.target].clamp(-1.0, 1.0).asin()
    }

    pub fn round_probability(&self) -> f64 {
        self.total_probability.powf(1.0 / self.rounds as f64)
    }

    pub fn weak_value(&self) -> f64 {
        1.0 / self.round_probability().sqrt()
    }

    /// `g δT σw = (π/2 − θ0)/N`.
    pub fn round_duration(&self) -> f64 {
        (FRAC_PI_2 - self.theta0()) * self.round_probability().sqrt() / (self.rounds as f64 * self.coupling)
    }

    pub fn duration(&self) -> f64 {
        self.round_duration() * self.rounds as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub fidelity: f64,
    pub actual_probability: f64,
    pub round_probabilities: Vec<f64>,
    pub final_state: StateVector,
}

/// `sin((2N+1)θ/2)|t⟩ + cos((2N+1)θ/2)|t̃⟩` in the `(|t⟩, |t̃⟩)` basis.
pub fn grover_reference(rounds: usize, theta: f64) -> StateVector {
    let angle = (2 * rounds + 1) as f64 * theta / 2.0;
    StateVector::from_real(&[angle.sin(), angle.cos()]).expect("two amplitudes")
}

/// `Ĝ = (2|Ψ⟩⟨Ψ| − I)(I − 2|t⟩⟨t|)`.
pub fn grover_operator(rot: &GeneralRotation) -> Operator {
    let id = Operator::identity(rot.dim);
    let t = StateVector::basis(rot.dim, rot.target);
    let u_psi = Operator::projector(&rot.database)
        .scale_real(2.0)
        .sub(&id)
        .expect("same dim");
    let u_t = id.sub(&Operator::projector(&t).scale_real(2.0)).expect("same dim");
    u_psi.compose(&u_t).expect("same dim")
}

/// Register-side operator of one successful round,
/// `⟨f| exp(−i H δT) |i⟩` with `H = −g σy ⊗ generator`.
pub fn round_operator(pair: &SelectionPair, generator: &Operator, g_dt: f64) -> Result<Operator> {
    let h = kron(&Operator::pauli_y(), generator).scale_real(-1.0);
    let u = hermitian_propagator(&h, g_dt)?;
    Ok(reduce_round(pair, &u, generator.dim()))
}

fn reduce_round(pair: &SelectionPair, u: &Operator, dim: usize) -> Operator {
    let (i, f) = (pair.initial().amplitudes(), pair.final_state().amplitudes());
    let m = u.matrix();
    let k = DMatrix::from_fn(dim, dim, |r, c| {
        let mut acc = ZERO;
        for s in 0..2 {
            for s2 in 0..2 {
                acc += f[s].conj() * m[(s * dim + r, s2 * dim + c)] * i[s2];
            }
        }
        acc
    });
    Operator::new(k).expect("square")
}

/// `K = √p cos(gδT) I + i sin(gδT) σy`.
pub fn round_oracle(p: f64, g_dt: f64) -> Operator {
    Operator::identity(2)
        .scale_real(p.sqrt() * g_dt.cos())
        .add(&Operator::pauli_y().scale(I * g_dt.sin()))
        .expect("2x2")
}

/// Reset, couple, post-select on the joint controller ⊗ register vector.
fn run_rounds(
    pair: &SelectionPair,
    u: &Operator,
    start: StateVector,
    rounds: usize,
) -> Result<(StateVector, Vec<f64>)> {
    let dim = start.dim();
    let f = pair.final_state().amplitudes();
    let mut psi = start;
    let mut probs = Vec::with_capacity(rounds);
    for round in 1..=rounds {
        let joint = u.apply(&kron_states(pair.initial(), &psi))?;
        let a = joint.amplitudes();
        let projected: Vec<C64> = (0..dim)
            .map(|k| f[0].conj() * a[k] + f[1].conj() * a[dim + k])
            .collect();
        let mut next = StateVector::from_slice(&projected)?;
        let norm = next.norm();
        let probability = norm * norm;
        if !(probability > MIN_SELECTION_PROBABILITY) {
            return Err(Error::SelectionFailed { round, probability });
        }
        next.normalize()?;
        psi = next;
        probs.push(probability);
    }
    Ok((psi, probs))
}

fn outcome(psi: StateVector, probs: Vec<f64>, target: usize) -> SearchOutcome {
    SearchOutcome {
        fidelity: psi.amplitudes()[target].norm_sqr(),
        actual_probability: probs.iter().product(),
        round_probabilities: probs,
        final_state: psi,
    }
}

/// Two-entry search with `H_SQC = −g σy ⊗ σy` on the 4-dimensional joint space.
pub fn sqc_search_run(cfg: &SearchConfig) -> Result<SearchOutcome> {
    if cfg.dim() != 2 || cfg.target != 0 {
        return Err(Error::invalid(
            "database",
            "two-entry search needs N_G = 2 and target 0; use multiqubit_sqc_search",
        ));
    }
    let pair = design_sigma_y_pair(cfg.round_probability())?;
    let h = kron(&Operator::pauli_y(), &Operator::pauli_y()).scale_real(-cfg.coupling);
    let u = hermitian_propagator(&h, cfg.round_duration())?;
    let start = StateVector::from_real(&cfg.database)?;
    let (psi, probs) = run_rounds(&pair, &u, start, cfg.rounds)?;
    Ok(outcome(psi, probs, 0))
}

/// `K^N` applied to the database, normalized.
pub fn oracle_search(cfg: &SearchConfig) -> Result<StateVector> {
    let k = round_oracle(cfg.round_probability(), cfg.coupling * cfg.round_duration());
    let mut psi = StateVector::from_real(&cfg.database)?;
    for _ in 0..cfg.rounds {
        psi = k.apply(&psi)?;
    }
    psi.normalized()
}

/// Search over `N_G` entries with `H = −g σy ⊗ σ̃y`.
pub fn multiqubit_sqc_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    let rot = cfg.rotation()?;
    let pair = design_sigma_y_pair(cfg.round_probability())?;
    let h = kron(&Operator::pauli_y(), &rot.sigma_tilde_y).scale_real(-cfg.coupling);
    let u = hermitian_propagator(&h, cfg.round_duration())?;
    let (psi, probs) = run_rounds(&pair, &u, rot.database.clone(), cfg.rounds)?;
    Ok(outcome(psi, probs, cfg.target))
}

/// Target, database complement and the rotation generator of a search
/// register.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralRotation {
    pub dim: usize,
    pub target: usize,
    pub database: StateVector,
    /// `|t̃⟩`, the normalized part of the database orthogonal to `|t⟩`.
    pub complement: StateVector,
    pub jy: Operator,
    /// `σ̃y = 2 Ĵy`.
    pub sigma_tilde_y: Operator,
    /// Signed `arcsin⟨t|Ψ⟩`.
    pub theta0: f64,
}

impl GeneralRotation {
    /// `|Ψ(x)⟩ = sin x |t⟩ + cos x |t̃⟩`.
    pub fn psi(&self, x: f64) -> StateVector {
        self.embed(&[x.sin(), x.cos()])
    }

    /// `c_t |t⟩ + c_t̃ |t̃⟩`.
    pub fn embed(&self, coeffs: &[f64; 2]) -> StateVector {
        let mut amps = self.complement.amplitudes() * C64::new(coeffs[1], 0.0);
        amps[self.target] += coeffs[0];
        StateVector::new(amps).expect("nonempty")
    }

    /// `exp(i φ σ̃y)`.
    pub fn rotation(&self, phi: f64) -> Result<Operator> {
        hermitian_propagator(&self.sigma_tilde_y, -phi)
    }
}

pub fn build_general_rotation(target: usize, database_amplitudes: &[f64], dim: usize) -> Result<GeneralRotation> {
    if database_amplitudes.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: database_amplitudes.len(),
        });
    }
    if dim < 2 {
        return Err(Error::invalid("N_G", "must be at least 2"));
    }
    if target >= dim {
        return Err(Error::invalid(
            "target",
            format!("index {target} outside a database of {dim} entries"),
        ));
    }
    if database_amplitudes.iter().any(|a| !a.is_finite()) {
        return Err(Error::invalid("database", "amplitudes must be finite"));
    }
    let norm: f64 = database_amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::invalid("database", format!("must be normalized (norm {norm})")));
    }
    let overlap = database_amplitudes[target];
    if overlap.abs() < 1e-12 {
        return Err(Error::invalid("database", "has no overlap with the target"));
    }
    let mut rest = database_amplitudes.to_vec();
    rest[target] = 0.0;
    let rest_norm = rest.iter().map(|a| a * a).sum::<f64>().sqrt();
    if rest_norm < 1e-12 {
        return Err(Error::invalid(
            "database",
            "equals the target; its complement is undefined",
        ));
    }
    rest.iter_mut().for_each(|a| *a /= rest_norm);
    let complement = StateVector::from_real(&rest)?;
    let database = StateVector::from_real(database_amplitudes)?;
    let t = StateVector::basis(dim, target);

    let h = FRAC_1_SQRT_2_C;
    let plus = StateVector::new((t.amplitudes() + complement.amplitudes()) * h)?;
    let minus = StateVector::new((t.amplitudes() - complement.amplitudes()) * h)?;
    let jy = Operator::outer(&minus, &plus)
        .sub(&Operator::outer(&plus, &minus))?
        .scale(C64::new(0.0, -0.5));
    let sigma_tilde_y = jy.scale_real(2.0);
    Ok(GeneralRotation {
        dim,
        target,
        database,
        complement,
        jy,
        sigma_tilde_y,
        theta0: overlap.clamp(-1.0, 1.0).asin(),
    })
}

const FRAC_1_SQRT_2_C: C64 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdiabaticFamily {
    /// `(1−s) Ω σx + s Ω σz`.
    TypeI,
    /// `K [(1−s)(I − |Ψ⟩⟨Ψ|) + s (I − |t⟩⟨t|)]`.
    TypeII,
}

impl AdiabaticFamily {
    pub fn label(self) -> &'static str {
        match self {
            AdiabaticFamily::TypeI => "aqc-type-I",
            AdiabaticFamily::TypeII => "aqc-type-II",
        }
    }

    /// Energy cost per unit amplitude.
    pub fn cost_factor(self) -> f64 {
        match self {
            AdiabaticFamily::TypeI => (2.0 * SQRT_2 - (SQRT_2 - 1.0).ln() + (1.0 + SQRT_2).ln()) / 4.0,
            AdiabaticFamily::TypeII => (4.0 + 3.0 * 3f64.ln()) / 8.0,
        }
    }
}

/// Linear schedule `s = t/T` from `|+⟩` toward `|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticSpec {
    family: AdiabaticFamily,
    amplitude: f64,
    duration: f64,
}

impl AdiabaticSpec {
    pub fn new(family: AdiabaticFamily, amplitude: f64, duration: f64) -> Result<Self> {
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::invalid("amplitude", "must be positive"));
        }
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::invalid("T", "must be positive"));
        }
        Ok(AdiabaticSpec {
            family,
            amplitude,
            duration,
        })
    }

    pub fn family(&self) -> AdiabaticFamily {
        self.family
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn hamiltonian(&self, t: f64) -> Operator {
        let s = (t / self.duration).clamp(0.0, 1.0);
        let a = self.amplitude;
        match self.family {
            AdiabaticFamily::TypeI => Operator::pauli_x()
                .scale_real((1.0 - s) * a)
                .add(&Operator::pauli_z().scale_real(s * a))
                .expect("2x2"),
            AdiabaticFamily::TypeII => {
                let plus = StateVector::from_real(&[std::f64::consts::FRAC_1_SQRT_2; 2]).expect("2");
                let id = Operator::identity(2);
                let away_db = id.sub(&Operator::projector(&plus)).expect("2x2");
                let away_t = id.sub(&Operator::projector(&StateVector::basis(2, 0))).expect("2x2");
                away_db
                    .scale_real((1.0 - s) * a)
                    .add(&away_t.scale_real(s * a))
                    .expect("2x2")
            }
        }
    }

    pub fn cost(&self) -> f64 {
        self.family.cost_factor() * self.amplitude
    }

    /// `min(1e-3, T/1e4)`.
    pub fn default_dt(&self) -> f64 {
        1e-3f64.min(self.duration / 1e4)
    }
}

/// `exp(−i H dt)` for a 2×2 Hermitian `H = h0 I + h·σ`.
fn su2_propagator(h: &DMatrix<C64>, dt: f64) -> DMatrix<C64> {
    let h0 = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let hz = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    let hx = h[(1, 0)].re;
    let hy = h[(1, 0)].im;
    let r = (hx * hx + hy * hy + hz * hz).sqrt();
    let (c, s) = ((r * dt).cos(), (r * dt).sin());
    let (nx, ny, nz) = if r > 0.0 {
        (hx / r, hy / r, hz / r)
    } else {
        (0.0, 0.0, 0.0)
    };
    let global = C64::from_polar(1.0, -h0 * dt);
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(c, -s * nz),
            C64::new(-s * ny, -s * nx),
            C64::new(s * ny, -s * nx),
            C64::new(c, s * nz),
        ],
    );
    m * global
}

/// Midpoint-exponential evolution from `|+⟩`, scored as `|⟨0|Ψ(T)⟩|²`.
pub fn aqc_search_run(spec: &AdiabaticSpec) -> Result<f64> {
    aqc_search_run_with_dt(spec, spec.default_dt())
}

pub fn aqc_search_run_with_dt(spec: &AdiabaticSpec, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let steps = (spec.duration / dt).ceil().max(1.0) as usize;
    let h_dt = spec.duration / steps as f64;
    let mut psi = nalgebra::DVector::from_element(2, C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    for n in 0..steps {
        let t_mid = (n as f64 + 0.5) * h_dt;
        let u = su2_propagator(spec.hamiltonian(t_mid).matrix(), h_dt);
        psi = u * psi;
    }
    Ok(psi[0].norm_sqr() / psi.norm_squared())
}

/// `(1/T) ∫₀ᵀ ‖H(t)‖_F dt`.
pub fn energy_cost(hamiltonian: impl Fn(f64) -> Operator, duration: f64) -> Result<f64> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::invalid("T", "must be positive"));
    }
    Ok(adaptive_simpson(|t| hamiltonian(t).frobenius_norm(), 0.0, duration, COST_TOLERANCE) / duration)
}

/// `−g σy ⊗ σy`.
pub fn sqc_hamiltonian(g: f64) -> Operator {
    kron(&Operator::pauli_y(), &Operator::pauli_y()).scale_real(-g)
}

/// Type-I amplitude `Ω` and type-II scale `K` whose costs equal `2g`.
pub fn equalize_cost(g: f64) -> Result<(f64, f64)> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::invalid("g", "must be positive"));
    }
    Ok((
        2.0 * g / AdiabaticFamily::TypeI.cost_factor(),
        2.0 * g / AdiabaticFamily::TypeII.cost_factor(),
    ))
}

pub fn search_sqc_record(cfg: &SearchConfig) -> Result<ExperimentRecord> {
    let out = if cfg.dim() == 2 && cfg.target == 0 {
        sqc_search_run(cfg)?
    } else {
        multiqubit_sqc_search(cfg)?
    };
    Ok(ExperimentRecord {
        protocol: "sqc".into(),
        rounds: Some(cfg.rounds),
        duration: Some(cfg.duration()),
        round_duration: Some(cfg.round_duration()),
        coupling: cfg.coupling,
        p_nominal: cfg.total_probability,
        p_actual: out.actual_probability,
        fidelity: out.fidelity,
        cost: Some(2.0 * cfg.coupling),
        ..Default::default()
    })
}

/// Adiabatic baseline at equalized cost `2g` and duration `T`.
pub fn search_aqc_record(family: AdiabaticFamily, g: f64, duration: f64, dt: Option<f64>) -> Result<ExperimentRecord> {
    let (omega, k) = equalize_cost(g)?;
    let amplitude = match family {
        AdiabaticFamily::TypeI => omega,
        AdiabaticFamily::TypeII => k,
    };
    let spec = AdiabaticSpec::new(family, amplitude, duration)?;
    Ok(ExperimentRecord {
        protocol: family.label().into(),
        duration: Some(duration),
        coupling: g,
        p_nominal: 1.0,
        p_actual: 1.0,
        fidelity: aqc_search_run_with_dt(&spec, dt.unwrap_or_else(|| spec.default_dt()))?,
        cost: Some(spec.cost()),
        omega: (family == AdiabaticFamily::TypeI).then_some(omega),
        k: (family == AdiabaticFamily::TypeII).then_some(k),
        ..Default::default()
    })
}

/// Bichromatic two-ion drive. Order of the tensor factors: ion 1, ion 2,
/// shared motional mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MSSpec {
    pub eta: f64,
    pub omega: f64,
    pub nu: f64,
    pub delta: f64,
    pub n_max: usize,
}

/// Lamb-Dicke factor above which the effective propagator is not trusted.
pub const LAMB_DICKE_WARNING: f64 = 0.3;

impl MSSpec {
    pub fn new(eta: f64, omega: f64, nu: f64, delta: f64, n_max: usize) -> Result<Self> {
        for (name, v) in [("eta", eta), ("Omega", omega), ("nu", nu), ("delta", delta)] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if eta < 0.0 || omega < 0.0 || nu <= 0.0 {
            return Err(Error::invalid("eta", "η, Ω must be non-negative and ν positive"));
        }
        if nu - delta == 0.0 {
            return Err(Error::invalid("delta", "must differ from nu"));
        }
        if n_max < 2 {
            return Err(Error::invalid("n_max", "must be at least 2"));
        }
        Ok(MSSpec {
            eta,
            omega,
            nu,
            delta,
            n_max,
        })
    }

    /// `η = 0.05`, `Ω = 0.02`, `ν = 1`, `ε = 2ηΩ` so that the spin phase at
    /// `t_MS` is `π/2`, `n_max = 20`.
    pub fn gate_regime() -> Self {
        let (eta, omega) = (0.05, 0.02);
        MSSpec::new(eta, omega, 1.0, 1.0 - 2.0 * eta * omega, 20).expect("valid")
    }

    pub fn epsilon(&self) -> f64 {
        self.nu - self.delta
    }

    pub fn gate_time(&self) -> f64 {
        2.0 * PI / self.epsilon().abs()
    }

    fn motion_dim(&self) -> usize {
        self.n_max + 1
    }
}

/// Collective spin operators `Jx`, `Jy` on two spin-½ (`s = σ/2`).
fn collective_spin() -> (Operator, Operator) {
    let id = Operator::identity(2);
    let sx = Operator::pauli_x().scale_real(0.5);
    let sy = Operator::pauli_y().scale_real(0.5);
    let jx = kron(&sx, &id).add(&kron(&id, &sx)).expect("4x4");
    let jy = kron(&sy, &id).add(&kron(&id, &sy)).expect("4x4");
    (jx, jy)
}

/// `(ηΩ/ε)(e^{iεt} − 1)`, exactly zero at whole multiples of `t_MS`.
pub fn ms_displacement(spec: &MSSpec, t: f64) -> C64 {
    let eps = spec.epsilon();
    let turns = eps * t / (2.0 * PI);
    let frac = turns - turns.round();
    if frac.abs() < 1e-12 * turns.abs().max(1.0) {
        return ZERO;
    }
    (C64::from_polar(1.0, 2.0 * PI * frac) - ONE) * (spec.eta * spec.omega / eps)
}

/// `η²Ω² t/ε − η²Ω² sin(εt)/ε²`.
pub fn ms_spin_phase(spec: &MSSpec, t: f64) -> f64 {
    let eps = spec.epsilon();
    let k = (spec.eta * spec.omega).powi(2);
    k * t / eps - k * (eps * t).sin() / (eps * eps)
}

fn displacement_operator(alpha: C64, dim: usize) -> Result<Operator> {
    if alpha == ZERO {
        return Ok(Operator::identity(dim));
    }
    let mut gen = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        let s = (n as f64).sqrt();
        // i(α a† − α* a), so exp(−i·gen) = D(α)
        gen[(n, n - 1)] += I * alpha * s;
        gen[(n - 1, n)] += -I * alpha.conj() * s;
    }
    hermitian_propagator(&Operator::new(gen)?, 1.0)
}

/// `D(β Ĵy) · exp(i φ Ĵy²)` on spins ⊗ motion.
pub fn ms_effective_propagator(spec: &MSSpec, t: f64) -> Result<Operator> {
    let beta = ms_displacement(spec, t);
    let phase = ms_spin_phase(spec, t);
    let (_, jy) = collective_spin();
    let eig = SymmetricEigen::new(jy.matrix().clone());
    let max_m = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let required = required_fock_cutoff(beta * max_m);
    if spec.n_max < required {
        return Err(Error::TruncationTooSmall {
            n_max: spec.n_max,
            required,
        });
    }
    let dm = spec.motion_dim();
    let mut u = DMatrix::zeros(4 * dm, 4 * dm);
    for (k, &m) in eig.eigenvalues.iter().enumerate() {
        let m = m.round();
        let v = eig.eigenvectors.column(k);
        let proj = Operator::new(v * v.adjoint())?;
        let motion = displacement_operator(beta * m, dm)?.scale(C64::from_polar(1.0, phase * m * m));
        u += kron(&proj, &motion).into_matrix();
    }
    Operator::new(u)
}

/// Spin-only factor `exp(i φ Ĵy²)`.
pub fn ms_spin_gate(phase: f64) -> Result<Operator> {
    let (_, jy) = collective_spin();
    let jy2 = jy.compose(&jy)?;
    hermitian_propagator(&jy2, -phase)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MSReport {
    pub mean_fidelity: f64,
    pub min_fidelity: f64,
    pub fidelities: Vec<f64>,
    /// `η · max √⟨(a + a†)²⟩` over the test states.
    pub lamb_dicke_factor: f64,
    pub lamb_dicke_warning: bool,
    pub steps: usize,
}

fn ms_test_states(n_max: usize) -> Result<Vec<StateVector>> {
    let dm = n_max + 1;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let spin = |amps: [C64; 4]| StateVector::from_slice(&amps);
    let c = |x: f64| C64::new(x, 0.0);
    let vac = StateVector::basis(dm, 0);
    let one = StateVector::basis(dm, 1);
    let coh = coherent_state(C64::new(0.3, 0.2), n_max)?;
    let up_up = spin([c(1.0), ZERO, ZERO, ZERO])?;
    let up_down = spin([ZERO, c(1.0), ZERO, ZERO])?;
    let plus_plus = spin([c(0.5); 4])?;
    let bell = spin([c(s), ZERO, ZERO, C64::new(0.0, s)])?;
    let mixed = spin([c(0.6), C64::new(0.0, 0.48), c(0.0), C64::new(0.64, 0.0)])?.normalized()?;
    Ok(vec![
        kron_states(&up_up, &vac),
        kron_states(&up_down, &vac),
        kron_states(&plus_plus, &vac),
        kron_states(&bell, &vac),
        kron_states(&up_up, &one),
        kron_states(&mixed, &coh),
    ])
}

/// Integrates
/// `H(t) = 2Ω cos(δt) Jx − 2ηΩ cos(δt) Jy (a e^{−iνt} + a† e^{iνt})`
/// (interaction picture of the mode) with RK4 up to `t_MS` and compares the
/// result on a battery of test states with [`ms_effective_propagator`].
pub fn ms_numeric_check(spec: &MSSpec, dt: f64) -> Result<MSReport> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let dm = spec.motion_dim();
    let dim = 4 * dm;
    let (jx, jy) = collective_spin();
    let fock = fock_operators(spec.n_max, &TrapSpec::default())?;
    let carrier = CsrOperator::from_operator(&kron(&jx, &Operator::identity(dm)).scale_real(2.0 * spec.omega));
    let lower_op = kron(&jy, &fock.a).scale_real(-2.0 * spec.eta * spec.omega);
    let lower = CsrOperator::from_operator(&lower_op);
    let raise = CsrOperator::from_operator(&lower_op.adjoint());

    let states = ms_test_states(spec.n_max)?;
    let x_sq = fock.a.add(&fock.a_dag)?;
    let x_sq = x_sq.compose(&x_sq)?;
    let lamb_dicke_factor = states
        .iter()
        .map(|s| {
            let big = kron(&Operator::identity(4), &x_sq);
            spec.eta
                * crate::qcore::expectation(&big, s)
                    .map(|v| v.re.max(0.0).sqrt())
                    .unwrap_or(0.0)
        })
        .fold(0.0, f64::max);

    let mut psi = DMatrix::from_fn(dim, states.len(), |r, c| states[c].amplitudes()[r]);
    let t_end = spec.gate_time();
    let steps = (t_end / dt).ceil() as usize;
    let h = t_end / steps as f64;
    let deriv = |t: f64, y: &DMatrix<C64>, out: &mut DMatrix<C64>| {
        out.fill(ZERO);
        let c = (spec.delta * t).cos();
        let mi = C64::new(0.0, -c);
        carrier.mul_add_into(mi, y, out);
        lower.mul_add_into(mi * C64::from_polar(1.0, -spec.nu * t), y, out);
        raise.mul_add_into(mi * C64::from_polar(1.0, spec.nu * t), y, out);
    };
    let mut k1 = DMatrix::zeros(dim, states.len());
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    for n in 0..steps {
        let t = n as f64 * h;
        deriv(t, &psi, &mut k1);
        tmp.copy_from(&psi);
        axpy(&mut tmp, C64::new(h / 2.0, 0.0), &k1);
        deriv(t + h / 2.0, &tmp, &mut k2);
        tmp.copy_from(&psi);
        axpy(&mut tmp, C64::new(h / 2.0, 0.0), &k2);
        deriv(t + h / 2.0, &tmp, &mut k3);
        tmp.copy_from(&psi);
        axpy(&mut tmp, C64::new(h, 0.0), &k3);
        deriv(t + h, &tmp, &mut k4);
        k2 += &k3;
        k1 += &k4;
        axpy(&mut k1, C64::new(2.0, 0.0), &k2);
        axpy(&mut psi, C64::new(h / 6.0, 0.0), &k1);
        if !psi[(0, 0)].re.is_finite() {
            return Err(Error::Diverged { time: t + h });
        }
    }
    let drift = psi.column_iter().map(|c| (c.norm() - 1.0).abs()).fold(0.0, f64::max);
    if drift > 1e-6 {
        return Err(Error::NotConverged {
            change: drift,
            tolerance: 1e-6,
        });
    }

    let u = ms_effective_propagator(spec, t_end)?;
    let fidelities: Vec<f64> = states
        .iter()
        .enumerate()
        .map(|(c, s)| {
            let want = u.matrix() * s.amplitudes();
            want.dotc(&psi.column(c)).norm_sqr()
        })
        .collect();
    let mean_fidelity = fidelities.iter().sum::<f64>() / fidelities.len() as f64;
    let min_fidelity = fidelities.iter().copied().fold(1.0, f64::min);
    Ok(MSReport {
        mean_fidelity,
        min_fidelity,
        fidelities,
        lamb_dicke_factor,
        lamb_dicke_warning: lamb_dicke_factor > LAMB_DICKE_WARNING,
        steps,
    })
}
