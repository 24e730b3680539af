//! Fast transport of a trapped ion by sequential selections, and the
//! moving-trap adiabatic baseline.
//!
//! Each SQC round prepares the internal state in `|i⟩`, couples it to the
//! motion through `g σx ⊗ p̂` for `δT`, and post-selects `|f⟩`. With the
//! `σx`-optimal pair of selection probability `p = P^{1/N}` a round maps
//! `ψ(x) → √p [ (1+σw)/2 ψ(x − gδT) + (1−σw)/2 ψ(x + gδT) ]`, `σw = 1/√p`,
//! and `N` rounds move the packet by `d = gT/√p` on average. The free trap
//! evolution during the rounds is not included.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::qcore::{TrapSpec, C64};
use crate::record::ExperimentRecord;
use crate::selection::design_sigma_x_pair;
use crate::wavepacket::{
    conditional_translate_with, evolve_split_operator, gaussian_ground_state, gaussian_overlap, GaussianSuperposition,
    GridSpec, GridWavePacket, Spectral, SpinGridWavePacket,
};

/// Default split-operator step for the moving-trap baseline.
pub const AQC_DT: f64 = 1e-3;

const MIN_SELECTION_PROBABILITY: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TransportConfig {
    coupling: f64,
    distance: f64,
    rounds: usize,
    total_probability: f64,
    trap: TrapSpec,
    grid: Option<GridSpec>,
}

impl TransportConfig {
    pub fn new(coupling: f64, distance: f64, rounds: usize, total_probability: f64, trap: TrapSpec) -> Result<Self> {
        if !(coupling >= 0.0 && coupling.is_finite()) {
            return Err(Error::invalid("g", "must be non-negative"));
        }
        if !distance.is_finite() {
            return Err(Error::invalid("d", "must be finite"));
        }
        if rounds == 0 {
            return Err(Error::invalid("N", "must be at least 1"));
        }
        if !(total_probability > 0.0 && total_probability <= 1.0) {
            return Err(Error::invalid("P", "must be in (0,1]"));
        }
        Ok(TransportConfig {
            coupling,
            distance,
            rounds,
            total_probability,
            trap,
            grid: None,
        })
    }

    /// Distances given in units of `x0`.
    pub fn with_distance_in_x0(
        coupling: f64,
        d_over_x0: f64,
        rounds: usize,
        total_probability: f64,
        trap: TrapSpec,
    ) -> Result<Self> {
        Self::new(coupling, d_over_x0 * trap.x0(), rounds, total_probability, trap)
    }

    pub fn with_grid(mut self, grid: GridSpec) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn total_probability(&self) -> f64 {
        self.total_probability
    }

    pub fn trap(&self) -> &TrapSpec {
        &self.trap
    }

    /// `p = P^{1/N}`.
    pub fn round_probability(&self) -> f64 {
        self.total_probability.powf(1.0 / self.rounds as f64)
    }

    /// `σw = 1/√p`.
    pub fn weak_value(&self) -> f64 {
        1.0 / self.round_probability().sqrt()
    }

    /// `T = (d/g)·√p`; infinite without coupling.
    pub fn duration(&self) -> f64 {
        if self.coupling == 0.0 {
            f64::INFINITY
        } else {
            self.distance / self.coupling * self.round_probability().sqrt()
        }
    }

    pub fn round_duration(&self) -> f64 {
        self.duration() / self.rounds as f64
    }

    /// Per-round conditional displacement `g·δT`.
    pub fn kick(&self) -> f64 {
        if self.coupling == 0.0 {
            0.0
        } else {
            self.distance * self.round_probability().sqrt() / self.rounds as f64
        }
    }

    /// Grid used by the grid protocol: the explicit one, or one covering
    /// every intermediate branch centre in `[−gT, d]`.
    pub fn grid(&self) -> Result<GridSpec> {
        match self.grid {
            Some(g) => Ok(g),
            None => {
                let reach = self.kick() * self.rounds as f64;
                GridSpec::covering(
                    (-reach).min(0.0).min(self.distance),
                    self.distance.max(reach),
                    &self.trap,
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TransportState {
    Analytic(GaussianSuperposition),
    Grid(GridWavePacket),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportResult {
    pub fidelity: f64,
    pub nominal_probability: f64,
    pub actual_probability: f64,
    pub round_probabilities: Vec<f64>,
    pub duration: f64,
    pub final_state: TransportState,
}

/// Binomial displaced-Gaussian expansion of the `N`-round protocol.
pub fn sqc_transport_closed(cfg: &TransportConfig) -> Result<TransportResult> {
    let p = cfg.round_probability();
    let sw = cfg.weak_value();
    let x0 = cfg.trap.x0();
    let (c0, c1) = ((1.0 + sw) / 2.0, (1.0 - sw) / 2.0);
    let a = cfg.kick();

    // coefficient k sits at (2k − r)·a after r rounds
    let mut coeffs = vec![1.0f64];
    let mut prev_norm = 1.0;
    let mut round_probabilities = Vec::with_capacity(cfg.rounds);
    let mut sup = GaussianSuperposition::single(0.0, x0)?;
    for r in 1..=cfg.rounds {
        let mut next = vec![0.0; r + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k] += c1 * c;
            next[k + 1] += c0 * c;
        }
        coeffs = next;
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| (C64::new(c, 0.0), (2.0 * k as f64 - r as f64) * a))
            .collect();
        sup = GaussianSuperposition::new(terms, x0)?;
        let norm = sup.norm_sqr();
        round_probabilities.push(p * norm / prev_norm);
        prev_norm = norm;
    }
    let target = GaussianSuperposition::single(cfg.distance, x0)?;
    let fidelity = gaussian_overlap(&sup, &target)?.norm_sqr() / prev_norm;
    Ok(TransportResult {
        fidelity,
        nominal_probability: cfg.total_probability,
        actual_probability: p.powi(cfg.rounds as i32) * prev_norm,
        round_probabilities,
        duration: cfg.duration(),
        final_state: TransportState::Analytic(sup),
    })
}

/// Reset / couple / post-select on the position grid.
pub fn sqc_transport_grid(cfg: &TransportConfig) -> Result<TransportResult> {
    let grid = cfg.grid()?;
    let pair = design_sigma_x_pair(cfg.round_probability())?;
    let mut spectral = Spectral::new(&grid);
    let mut psi = gaussian_ground_state(&grid, &cfg.trap, 0.0)?;
    let mut round_probabilities = Vec::with_capacity(cfg.rounds);
    for round in 1..=cfg.rounds {
        let joint = SpinGridWavePacket::product(pair.initial(), &psi)?;
        let kicked = conditional_translate_with(&mut spectral, &joint, cfg.kick())?;
        let mut projected = kicked.project(pair.final_state())?;
        let probability = projected.norm_sqr();
        if !(probability > MIN_SELECTION_PROBABILITY) {
            return Err(Error::SelectionFailed { round, probability });
        }
        projected.normalize()?;
        psi = projected;
        round_probabilities.push(probability);
    }
    let target = gaussian_ground_state(&grid, &cfg.trap, cfg.distance)?;
    let fidelity = psi.fidelity(&target)?;
    Ok(TransportResult {
        fidelity,
        nominal_probability: cfg.total_probability,
        actual_probability: round_probabilities.iter().product(),
        round_probabilities,
        duration: cfg.duration(),
        final_state: TransportState::Grid(psi),
    })
}

/// `x_trap(t) = 3d t²/T² − 2d t³/T³`.
pub fn cubic_trap_trajectory(distance: f64, duration: f64) -> impl Fn(f64) -> f64 {
    move |t| {
        let s = (t / duration).clamp(0.0, 1.0);
        distance * s * s * (3.0 - 2.0 * s)
    }
}

/// Grid wide enough for the moving-trap run: a sudden move can swing the
/// packet as far as `2d`.
pub fn aqc_grid(distance: f64, trap: &TrapSpec) -> Result<GridSpec> {
    GridSpec::covering(-distance.abs().min(0.5 * distance.abs()), 2.0 * distance, trap)
}

/// Moves the trap centre along the cubic ramp and scores the final packet
/// against the ground state at `d`.
pub fn aqc_transport(distance: f64, duration: f64, trap: &TrapSpec, grid: Option<GridSpec>, dt: f64) -> Result<f64> {
    if !(duration > 0.0) {
        return Err(Error::invalid("T", "must be positive"));
    }
    let grid = match grid {
        Some(g) => g,
        None => aqc_grid(distance, trap)?,
    };
    let start = gaussian_ground_state(&grid, trap, 0.0)?;
    let end = evolve_split_operator(&start, cubic_trap_trajectory(distance, duration), dt, duration)?;
    let target = gaussian_ground_state(&grid, trap, distance)?;
    end.fidelity(&target)
}

/// The three coupling/distance pairs of the transport sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransportSetting {
    /// `g = 0.75`, `d = 7.5 x0`.
    I,
    /// `g = 1`, `d = 10 x0`.
    II,
    /// `g = 1.5`, `d = 15 x0`.
    III,
}

impl TransportSetting {
    pub const ALL: [TransportSetting; 3] = [TransportSetting::I, TransportSetting::II, TransportSetting::III];

    pub fn coupling(self) -> f64 {
        match self {
            TransportSetting::I => 0.75,
            TransportSetting::II => 1.0,
            TransportSetting::III => 1.5,
        }
    }

    pub fn distance_over_x0(self) -> f64 {
        10.0 * self.coupling()
    }

    pub fn label(self) -> &'static str {
        match self {
            TransportSetting::I => "i",
            TransportSetting::II => "ii",
            TransportSetting::III => "iii",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "i" | "I" | "1" => Some(TransportSetting::I),
            "ii" | "II" | "2" => Some(TransportSetting::II),
            "iii" | "III" | "3" => Some(TransportSetting::III),
            _ => None,
        }
    }

    pub fn config(self, rounds: usize, total_probability: f64, trap: TrapSpec) -> Result<TransportConfig> {
        TransportConfig::with_distance_in_x0(
            self.coupling(),
            self.distance_over_x0(),
            rounds,
            total_probability,
            trap,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransportMethod {
    SqcClosed,
    SqcGrid,
    /// Moving trap over the SQC duration of the same `N`.
    Aqc,
}

impl TransportMethod {
    pub fn label(self) -> &'static str {
        match self {
            TransportMethod::SqcClosed => "closed",
            TransportMethod::SqcGrid => "grid",
            TransportMethod::Aqc => "aqc",
        }
    }
}

/// One sweep point; `dt` is only used by the moving-trap baseline.
pub fn transport_point(
    setting: TransportSetting,
    total_probability: f64,
    rounds: usize,
    method: TransportMethod,
    trap: TrapSpec,
    dt: f64,
) -> Result<ExperimentRecord> {
    let cfg = setting.config(rounds, total_probability, trap)?;
    let mut rec = transport_record(&cfg, Some(setting.label()), method, dt)?;
    rec.distance_over_x0 = Some(setting.distance_over_x0());
    Ok(rec)
}

/// Record for an arbitrary configuration.
pub fn transport_record(
    cfg: &TransportConfig,
    setting: Option<&str>,
    method: TransportMethod,
    dt: f64,
) -> Result<ExperimentRecord> {
    let total_probability = cfg.total_probability();
    let (protocol, fidelity, p_nominal, p_actual) = match method {
        TransportMethod::SqcClosed => {
            let r = sqc_transport_closed(cfg)?;
            ("transport-sqc", r.fidelity, total_probability, r.actual_probability)
        }
        TransportMethod::SqcGrid => {
            let r = sqc_transport_grid(cfg)?;
            ("transport-sqc", r.fidelity, total_probability, r.actual_probability)
        }
        TransportMethod::Aqc => {
            let f = aqc_transport(cfg.distance(), cfg.duration(), cfg.trap(), cfg.grid, dt)?;
            ("transport-aqc", f, 1.0, 1.0)
        }
    };
    Ok(ExperimentRecord {
        protocol: protocol.into(),
        setting: setting.map(Into::into),
        rounds: Some(cfg.rounds()),
        duration: Some(cfg.duration()),
        round_duration: Some(cfg.round_duration()),
        coupling: cfg.coupling(),
        distance_over_x0: Some(cfg.distance() / cfg.trap().x0()),
        p_nominal,
        p_actual,
        fidelity,
        method: Some(method.label().into()),
        ..Default::default()
    })
}

/// Fidelity versus `N` for one setting, `T = (d/g)·P^{1/2N}` per point.
pub fn transport_sweep(
    setting: TransportSetting,
    total_probability: f64,
    rounds: &[usize],
    method: TransportMethod,
    trap: TrapSpec,
) -> Result<Vec<ExperimentRecord>> {
    if rounds.is_empty() {
        return Err(Error::invalid("N", "sweep needs at least one value"));
    }
    rounds
        .iter()
        .map(|&n| transport_point(setting, total_probability, n, method, trap, AQC_DT))
        .collect()
}

/// Interference factor of a single strong kick of area `gT`.
pub fn single_kick_gamma(cfg: &TransportConfig) -> f64 {
    cfg.kick() * cfg.rounds as f64 / (SQRT_2 * cfg.trap.x0())
}
