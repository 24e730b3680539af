//! Turning a manifest into a validated plan, and executing it.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use sqc::openquantum::{open_search_record, open_transport_record_for, NoiseSpec};
use sqc::qcore::default_fock_cutoff;
use sqc::record::{fmt, write_readout_curve, write_records, write_wavefunction, RecordSchema};
use sqc::search::{ms_numeric_check, search_aqc_record, search_sqc_record, AdiabaticFamily, MSSpec, SearchConfig};
use sqc::selection::{readout_curve, SelectionKind};
use sqc::transport::{
    aqc_transport, sqc_transport_grid, transport_record, TransportConfig, TransportMethod, TransportSetting,
    TransportState, AQC_DT,
};
use sqc::wavepacket::{gaussian_ground_state, GridSpec};
use sqc::{ExperimentRecord, TrapSpec, C64};

use crate::manifest::{Command, RunManifest};
use crate::{presets, CliError};

type Result<T> = std::result::Result<T, CliError>;

/// One output table. Reproduce presets may produce several; the first is
/// the primary one.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub name: String,
    pub comments: Vec<String>,
    pub body: Body,
}

#[derive(Debug, Clone)]
pub enum Body {
    Records {
        schema: RecordSchema,
        jobs: Vec<Job>,
    },
    Readout {
        kinds: Vec<SelectionKind>,
        gammas: Vec<f64>,
        ps: Vec<f64>,
    },
    Ms {
        spec: MSSpec,
        dt: f64,
    },
    Ground {
        grid: GridSpec,
        center: f64,
    },
    GridState(TransportConfig),
}

/// A single sweep point, fully validated.
#[derive(Debug, Clone)]
pub enum Job {
    Transport {
        cfg: TransportConfig,
        setting: Option<&'static str>,
        d_over_x0: f64,
        method: TransportMethod,
        dt: f64,
    },
    AqcAtDuration {
        setting: Option<&'static str>,
        d_over_x0: f64,
        coupling: f64,
        duration: f64,
        grid: Option<GridSpec>,
        dt: f64,
    },
    SearchSqc(SearchConfig),
    SearchAqc {
        family: AdiabaticFamily,
        coupling: f64,
        duration: f64,
        rounds: Option<usize>,
        dt: Option<f64>,
    },
    OpenTransport {
        cfg: TransportConfig,
        setting: Option<&'static str>,
        d_over_x0: f64,
        noise: NoiseSpec,
        n_max: usize,
        dt: Option<f64>,
    },
    OpenSearch {
        cfg: SearchConfig,
        noise: NoiseSpec,
        dt: Option<f64>,
    },
}

impl Job {
    pub fn run(&self) -> sqc::Result<ExperimentRecord> {
        let rec = match self {
            Job::Transport {
                cfg,
                setting,
                d_over_x0,
                method,
                dt,
            } => {
                let mut r = transport_record(cfg, *setting, *method, *dt)?;
                r.distance_over_x0 = Some(*d_over_x0);
                r
            }
            Job::AqcAtDuration {
                setting,
                d_over_x0,
                coupling,
                duration,
                grid,
                dt,
            } => {
                let trap = TrapSpec::default();
                let fidelity = aqc_transport(d_over_x0 * trap.x0(), *duration, &trap, *grid, *dt)?;
                ExperimentRecord {
                    protocol: "transport-aqc".into(),
                    setting: setting.map(Into::into),
                    duration: Some(*duration),
                    coupling: *coupling,
                    distance_over_x0: Some(*d_over_x0),
                    p_nominal: 1.0,
                    p_actual: 1.0,
                    fidelity,
                    method: Some(TransportMethod::Aqc.label().into()),
                    ..Default::default()
                }
            }
            Job::SearchSqc(cfg) => search_sqc_record(cfg)?,
            Job::SearchAqc {
                family,
                coupling,
                duration,
                rounds,
                dt,
            } => {
                let mut r = search_aqc_record(*family, *coupling, *duration, *dt)?;
                r.rounds = *rounds;
                r
            }
            Job::OpenTransport {
                cfg,
                setting,
                d_over_x0,
                noise,
                n_max,
                dt,
            } => {
                let mut r = open_transport_record_for(cfg, *setting, noise, *n_max, *dt)?;
                r.distance_over_x0 = Some(*d_over_x0);
                r
            }
            Job::OpenSearch { cfg, noise, dt } => open_search_record(cfg, noise, *dt)?,
        };
        rec.validate()?;
        Ok(rec)
    }
}

/// Typed access to manifest values with key-naming error messages.
pub(crate) struct Params<'a> {
    m: &'a RunManifest,
}

impl<'a> Params<'a> {
    pub(crate) fn new(m: &'a RunManifest) -> Self {
        Params { m }
    }

    pub(crate) fn has(&self, key: &str) -> bool {
        self.m.get(key).is_some()
    }

    pub(crate) fn str(&self, key: &str) -> Option<&'a str> {
        self.m.get(key)
    }

    pub(crate) fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.m.get(key).map(|v| parse_f64(key, v)).transpose()
    }

    pub(crate) fn req_f64(&self, key: &str) -> Result<f64> {
        self.f64(key)?.ok_or_else(|| missing(key))
    }

    pub(crate) fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.m.get(key).map(|v| parse_usize(key, v)).transpose()
    }

    pub(crate) fn usize_list(&self, key: &str) -> Result<Option<Vec<usize>>> {
        let Some(v) = self.m.get(key) else { return Ok(None) };
        let mut out = Vec::new();
        for item in v.split(',').map(str::trim) {
            if let Some((a, b)) = item.split_once("..") {
                let (a, b) = (parse_usize(key, a.trim())?, parse_usize(key, b.trim())?);
                if b < a {
                    return Err(CliError::usage(format!("{key}: empty range {item}")));
                }
                out.extend(a..=b);
            } else {
                out.push(parse_usize(key, item)?);
            }
        }
        Ok(Some(out))
    }

    pub(crate) fn req_usize_list(&self, key: &str) -> Result<Vec<usize>> {
        self.usize_list(key)?.ok_or_else(|| missing(key))
    }

    pub(crate) fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        let Some(v) = self.m.get(key) else { return Ok(None) };
        v.split(',')
            .map(|s| parse_f64(key, s.trim()))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    pub(crate) fn settings(&self) -> Result<Option<Vec<TransportSetting>>> {
        let Some(v) = self.m.get("setting") else {
            return Ok(None);
        };
        if v == "all" {
            return Ok(Some(TransportSetting::ALL.to_vec()));
        }
        v.split(',')
            .map(|s| {
                TransportSetting::parse(s.trim())
                    .ok_or_else(|| CliError::usage(format!("setting must be i, ii, iii or all, got '{s}'")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    pub(crate) fn dt(&self) -> Result<Option<f64>> {
        let dt = self.f64("dt")?;
        if let Some(dt) = dt {
            if dt <= 0.0 {
                return Err(CliError::usage("dt must be positive"));
            }
        }
        Ok(dt)
    }

    pub(crate) fn parameter_line(&self) -> String {
        let parts: Vec<String> = self
            .m
            .params
            .iter()
            .filter(|(k, _)| k.as_str() != "jobs" && k.as_str() != "figure")
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!(
            "parameters: {}",
            if parts.is_empty() {
                "defaults".into()
            } else {
                parts.join(" ")
            }
        )
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(CliError::usage(format!("malformed number for key {key}: '{v}'"))),
    }
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| CliError::usage(format!("malformed number for key {key}: '{v}'")))
}

fn missing(key: &str) -> CliError {
    CliError::usage(format!("missing required key {key}"))
}

/// `1..16` for consecutive runs, a comma list otherwise.
pub(crate) fn compact_list(ns: &[usize]) -> String {
    let consecutive = ns.windows(2).all(|w| w[1] == w[0] + 1);
    if consecutive && ns.len() > 2 {
        format!("{}..{}", ns[0], ns[ns.len() - 1])
    } else {
        ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
    }
}

pub(crate) fn schema_comments(schema: RecordSchema) -> Vec<String> {
    let cols: &[(&str, &str)] = match schema {
        RecordSchema::Transport => &[
            ("setting", "preset label i, ii, iii (empty for custom g, d)"),
            ("N", "selection rounds"),
            ("g", "coupling strength"),
            ("d_over_x0", "target distance in units of x0"),
            ("P_nominal", "requested total success probability"),
            ("P_actual", "product of per-round success probabilities"),
            ("T", "total duration"),
            ("dT", "round duration"),
            ("fidelity", "|<psi(T)|ground state at d>|^2"),
            (
                "method",
                "closed (displaced-Gaussian sum), grid (position grid), aqc (moving trap)",
            ),
        ],
        RecordSchema::Search => &[
            ("protocol", "sqc, aqc-type-I or aqc-type-II"),
            ("N", "selection rounds (for baselines: the N whose duration is matched)"),
            ("T", "total duration"),
            ("g", "SQC coupling strength"),
            ("P_nominal", "requested total success probability"),
            ("P_actual", "product of per-round success probabilities"),
            ("fidelity", "final population of the target entry"),
            ("cost", "time-averaged Frobenius norm of the Hamiltonian"),
            ("Omega", "type-I amplitude at equalized cost"),
            ("K", "type-II amplitude at equalized cost"),
        ],
        RecordSchema::Open => &[
            ("protocol", "open-transport or open-search"),
            ("setting", "preset label i, ii, iii (transport)"),
            ("N", "selection rounds"),
            ("gamma", "dephasing and damping rate"),
            ("p_error", "extra loss per selection"),
            ("P_actual", "product of per-round success probabilities"),
            ("fidelity_raw", "<psi|rho|psi> against the ideal target"),
            ("fidelity_penalized", "fidelity_raw * (1 - p_error)^N"),
            ("n_max", "Fock truncation (transport)"),
        ],
    };
    columns(cols)
}

pub(crate) fn columns(cols: &[(&str, &str)]) -> Vec<String> {
    let mut out = vec!["columns:".to_string()];
    out.extend(cols.iter().map(|(c, m)| format!("  {c}: {m}")));
    out
}

pub(crate) fn readout_comments() -> Vec<String> {
    columns(&[
        ("kind", "sigma-x (|i>,|f> symmetric about |+>), sigma-y (phased pair) or eigen (|i> = |0>)"),
        ("p", "single-selection probability |<f|i>|^2"),
        ("gamma", "interference factor gT/(sqrt(2) x0)"),
        ("shift_over_gT", "mean apparatus shift over gT"),
        ("weak_limit", "gamma -> 0 value"),
        ("strong_limit", "gamma -> infinity value"),
    ])
}

pub(crate) fn wave_comments() -> Vec<String> {
    columns(&[
        ("x", "position"),
        ("re", "Re psi(x)"),
        ("im", "Im psi(x)"),
        ("abs2", "|psi(x)|^2"),
    ])
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// A sweep target: a preset setting, or explicit `g` and `d/x0`.
pub(crate) struct TransportTarget {
    pub setting: Option<TransportSetting>,
    pub coupling: f64,
    pub d_over_x0: f64,
}

impl TransportTarget {
    pub(crate) fn config(&self, rounds: usize, p: f64) -> Result<TransportConfig> {
        Ok(TransportConfig::with_distance_in_x0(
            self.coupling,
            self.d_over_x0,
            rounds,
            p,
            TrapSpec::default(),
        )?)
    }

    pub(crate) fn label(&self) -> Option<&'static str> {
        self.setting.map(TransportSetting::label)
    }
}

pub(crate) fn preset_targets(settings: &[TransportSetting]) -> Vec<TransportTarget> {
    settings
        .iter()
        .map(|&s| TransportTarget {
            setting: Some(s),
            coupling: s.coupling(),
            d_over_x0: s.distance_over_x0(),
        })
        .collect()
}

fn transport_targets(p: &Params, coupling_required: bool) -> Result<Vec<TransportTarget>> {
    if let Some(settings) = p.settings()? {
        if p.has("g") || p.has("d-over-x0") {
            return Err(CliError::usage("setting cannot be combined with g or d-over-x0"));
        }
        return Ok(preset_targets(&settings));
    }
    let coupling = if coupling_required {
        p.req_f64("g")?
    } else {
        p.f64("g")?.unwrap_or(0.0)
    };
    Ok(vec![TransportTarget {
        setting: None,
        coupling,
        d_over_x0: p.req_f64("d-over-x0")?,
    }])
}

fn grid_override(p: &Params) -> Result<Option<GridSpec>> {
    let keys = ["grid-min", "grid-max", "grid-points"];
    if !keys.iter().any(|k| p.has(k)) {
        return Ok(None);
    }
    let x0 = TrapSpec::default().x0();
    let lo = p.req_f64("grid-min")?;
    let hi = p.req_f64("grid-max")?;
    let n = p.usize("grid-points")?.ok_or_else(|| missing("grid-points"))?;
    Ok(Some(GridSpec::new(lo * x0, hi * x0, n)?))
}

fn header(m: &RunManifest) -> String {
    match m.get("figure") {
        Some(f) => format!("sqc {} {f}", m.command),
        None => format!("sqc {}", m.command),
    }
}

fn records(m: &RunManifest, p: &Params, schema: RecordSchema, jobs: Vec<Job>) -> Vec<Artifact> {
    let mut comments = vec![header(m), p.parameter_line()];
    comments.extend(schema_comments(schema));
    vec![Artifact {
        name: m.command.name().into(),
        comments,
        body: Body::Records { schema, jobs },
    }]
}

/// Validates every parameter and expands sweeps; nothing is simulated.
pub fn plan(m: &RunManifest) -> Result<Vec<Artifact>> {
    let p = Params::new(m);
    if let Some(0) = p.usize("jobs")? {
        return Err(CliError::usage("jobs must be at least 1"));
    }
    let dt = p.dt()?;
    match m.command {
        Command::TransportSqc => {
            let targets = transport_targets(&p, true)?;
            let prob = p.req_f64("P")?;
            let rounds = p.req_usize_list("N")?;
            let method = match p.str("method").unwrap_or("closed") {
                "closed" => TransportMethod::SqcClosed,
                "grid" => TransportMethod::SqcGrid,
                other => return Err(CliError::usage(format!("method must be closed or grid, got '{other}'"))),
            };
            let grid = grid_override(&p)?;
            let mut jobs = Vec::new();
            for t in &targets {
                for &n in &rounds {
                    let mut cfg = t.config(n, prob)?;
                    if let Some(g) = grid {
                        cfg = cfg.with_grid(g);
                    }
                    jobs.push(Job::Transport {
                        cfg,
                        setting: t.label(),
                        d_over_x0: t.d_over_x0,
                        method,
                        dt: AQC_DT,
                    });
                }
            }
            Ok(records(m, &p, RecordSchema::Transport, jobs))
        }
        Command::TransportAqc => {
            let dt = dt.unwrap_or(AQC_DT);
            let grid = grid_override(&p)?;
            let mut jobs = Vec::new();
            if let Some(durations) = p.f64_list("T")? {
                if p.has("N") || p.has("P") {
                    return Err(CliError::usage("T cannot be combined with N or P"));
                }
                for t in transport_targets(&p, false)? {
                    for &duration in &durations {
                        if duration <= 0.0 {
                            return Err(CliError::usage("T must be positive"));
                        }
                        jobs.push(Job::AqcAtDuration {
                            setting: t.label(),
                            d_over_x0: t.d_over_x0,
                            coupling: t.coupling,
                            duration,
                            grid,
                            dt,
                        });
                    }
                }
            } else {
                let prob = p.req_f64("P")?;
                let rounds = p.req_usize_list("N")?;
                for t in transport_targets(&p, true)? {
                    if t.coupling == 0.0 {
                        return Err(CliError::usage("g must be positive to match a duration"));
                    }
                    for &n in &rounds {
                        let mut cfg = t.config(n, prob)?;
                        if let Some(g) = grid {
                            cfg = cfg.with_grid(g);
                        }
                        jobs.push(Job::Transport {
                            cfg,
                            setting: t.label(),
                            d_over_x0: t.d_over_x0,
                            method: TransportMethod::Aqc,
                            dt,
                        });
                    }
                }
            }
            Ok(records(m, &p, RecordSchema::Transport, jobs))
        }
        Command::SearchSqc => {
            let g = p.req_f64("g")?;
            let prob = p.req_f64("P")?;
            let rounds = p.req_usize_list("N")?;
            let entries = p.usize("entries")?.unwrap_or(2);
            let target = p.usize("target")?.unwrap_or(0);
            let jobs = rounds
                .iter()
                .map(|&n| search_config(g, n, prob, target, entries).map(Job::SearchSqc))
                .collect::<Result<Vec<_>>>()?;
            Ok(records(m, &p, RecordSchema::Search, jobs))
        }
        Command::SearchAqc => {
            let g = p.req_f64("g")?;
            let families = match p.str("family").unwrap_or("both") {
                "I" | "i" => vec![AdiabaticFamily::TypeI],
                "II" | "ii" => vec![AdiabaticFamily::TypeII],
                "both" => vec![AdiabaticFamily::TypeI, AdiabaticFamily::TypeII],
                other => return Err(CliError::usage(format!("family must be I, II or both, got '{other}'"))),
            };
            let points: Vec<(Option<usize>, f64)> = if let Some(ts) = p.f64_list("T")? {
                if p.has("N") || p.has("P") {
                    return Err(CliError::usage("T cannot be combined with N or P"));
                }
                ts.into_iter().map(|t| (None, t)).collect()
            } else {
                let prob = p.req_f64("P")?;
                p.req_usize_list("N")?
                    .into_iter()
                    .map(|n| Ok((Some(n), SearchConfig::two_entry(g, n, prob)?.duration())))
                    .collect::<Result<Vec<_>>>()?
            };
            let mut jobs = Vec::new();
            for &family in &families {
                for &(rounds, duration) in &points {
                    sqc::search::AdiabaticSpec::new(family, 1.0, duration)?;
                    jobs.push(Job::SearchAqc {
                        family,
                        coupling: g,
                        duration,
                        rounds,
                        dt,
                    });
                }
            }
            sqc::search::equalize_cost(g)?;
            Ok(records(m, &p, RecordSchema::Search, jobs))
        }
        Command::ReadoutCurve => {
            let kinds = p
                .str("kind")
                .ok_or_else(|| missing("kind"))?
                .split(',')
                .map(|s| {
                    SelectionKind::parse(s.trim()).ok_or_else(|| {
                        CliError::usage(format!("kind must be A, B, sigma-x, sigma-y or eigen, got '{s}'"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let gammas = p.f64_list("gamma")?.unwrap_or_else(presets::readout_gammas);
            if gammas.iter().any(|&g| g < 0.0) {
                return Err(CliError::usage("gamma must be non-negative"));
            }
            let p_min = p.f64("p-min")?.unwrap_or(presets::READOUT_P_MIN);
            if !(p_min > 0.0 && p_min <= 1.0) {
                return Err(CliError::usage("p-min must be in (0,1]"));
            }
            let points = p.usize("p-points")?.unwrap_or(presets::READOUT_P_POINTS);
            if points < 2 {
                return Err(CliError::usage("p-points must be at least 2"));
            }
            let mut comments = vec![header(m), p.parameter_line()];
            comments.extend(readout_comments());
            Ok(vec![Artifact {
                name: m.command.name().into(),
                comments,
                body: Body::Readout {
                    kinds,
                    gammas,
                    ps: linspace(p_min, 1.0, points),
                },
            }])
        }
        Command::MsCheck => {
            let base = MSSpec::gate_regime();
            let eta = p.f64("eta")?.unwrap_or(base.eta);
            let omega = p.f64("Omega")?.unwrap_or(base.omega);
            let nu = p.f64("nu")?.unwrap_or(base.nu);
            let delta = p.f64("delta")?.unwrap_or(nu - 2.0 * eta * omega);
            let n_max = p.usize("nmax")?.unwrap_or(base.n_max);
            let spec = MSSpec::new(eta, omega, nu, delta, n_max)?;
            let mut comments = vec![header(m), p.parameter_line()];
            comments.extend(ms_comments());
            Ok(vec![Artifact {
                name: m.command.name().into(),
                comments,
                body: Body::Ms {
                    spec,
                    dt: dt.unwrap_or(presets::MS_DT),
                },
            }])
        }
        Command::OpenTransport => {
            let targets = transport_targets(&p, true)?;
            let prob = p.req_f64("P")?;
            let rounds = p.req_usize_list("N")?;
            let noise = NoiseSpec::new(p.req_f64("gamma")?, p.f64("p-error")?.unwrap_or(0.0))?;
            let n_max = p.usize("nmax")?;
            let jobs = open_transport_jobs(&targets, prob, &rounds, noise, n_max, dt)?;
            Ok(records(m, &p, RecordSchema::Open, jobs))
        }
        Command::OpenSearch => {
            let g = p.req_f64("g")?;
            let prob = p.req_f64("P")?;
            let rounds = p.req_usize_list("N")?;
            let noise = NoiseSpec::new(p.req_f64("gamma")?, p.f64("p-error")?.unwrap_or(0.0))?;
            let jobs = rounds
                .iter()
                .map(|&n| {
                    Ok(Job::OpenSearch {
                        cfg: SearchConfig::two_entry(g, n, prob)?,
                        noise,
                        dt,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(records(m, &p, RecordSchema::Open, jobs))
        }
        Command::Reproduce => presets::plan(&p, header(m)),
    }
}

pub(crate) fn search_config(g: f64, n: usize, prob: f64, target: usize, entries: usize) -> Result<SearchConfig> {
    Ok(if entries == 2 && target == 0 {
        SearchConfig::two_entry(g, n, prob)?
    } else {
        SearchConfig::uniform(g, n, prob, target, entries)?
    })
}

pub(crate) fn open_transport_jobs(
    targets: &[TransportTarget],
    prob: f64,
    rounds: &[usize],
    noise: NoiseSpec,
    n_max: Option<usize>,
    dt: Option<f64>,
) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    for t in targets {
        let n_max = n_max.unwrap_or_else(|| default_fock_cutoff(C64::new(t.d_over_x0 / 2.0, 0.0)));
        for &n in rounds {
            jobs.push(Job::OpenTransport {
                cfg: t.config(n, prob)?,
                setting: t.label(),
                d_over_x0: t.d_over_x0,
                noise,
                n_max,
                dt,
            });
        }
    }
    Ok(jobs)
}

fn ms_comments() -> Vec<String> {
    columns(&[
        ("eta", "Lamb-Dicke parameter"),
        ("Omega", "carrier Rabi frequency"),
        ("nu", "mode frequency"),
        ("delta", "bichromatic detuning"),
        ("n_max", "Fock truncation"),
        ("dt", "RK4 step"),
        ("t_gate", "2 pi / |nu - delta|"),
        (
            "mean_fidelity",
            "mean test-state fidelity, numeric vs effective propagator",
        ),
        ("min_fidelity", "worst test-state fidelity"),
        ("lamb_dicke_factor", "eta * max sqrt(<(a + a^dag)^2>) over test states"),
    ])
}

fn render(artifact: &Artifact) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let comments = &artifact.comments;
    match &artifact.body {
        Body::Records { schema, jobs } => {
            let results: Vec<sqc::Result<ExperimentRecord>> = jobs.par_iter().map(Job::run).collect();
            let recs = results.into_iter().collect::<sqc::Result<Vec<_>>>()?;
            write_records(&mut buf, *schema, comments, &recs)?;
        }
        Body::Readout { kinds, gammas, ps } => {
            let mut rows = Vec::new();
            for &kind in kinds {
                rows.extend(readout_curve(kind, gammas, ps)?);
            }
            write_readout_curve(&mut buf, comments, &rows)?;
        }
        Body::Ms { spec, dt } => {
            let report = ms_numeric_check(spec, *dt)?;
            if report.lamb_dicke_warning {
                eprintln!(
                    "sqc: warning: Lamb-Dicke factor {} is outside the effective-propagator regime",
                    report.lamb_dicke_factor
                );
            }
            for c in comments {
                writeln!(buf, "# {c}")?;
            }
            writeln!(
                buf,
                "eta,Omega,nu,delta,n_max,dt,t_gate,mean_fidelity,min_fidelity,lamb_dicke_factor"
            )?;
            let row = [
                fmt(spec.eta),
                fmt(spec.omega),
                fmt(spec.nu),
                fmt(spec.delta),
                spec.n_max.to_string(),
                fmt(*dt),
                fmt(spec.gate_time()),
                fmt(report.mean_fidelity),
                fmt(report.min_fidelity),
                fmt(report.lamb_dicke_factor),
            ];
            writeln!(buf, "{}", row.join(","))?;
        }
        Body::Ground { grid, center } => {
            let packet = gaussian_ground_state(grid, &TrapSpec::default(), *center)?;
            write_wavefunction(&mut buf, comments, &packet)?;
        }
        Body::GridState(cfg) => {
            let result = sqc_transport_grid(cfg)?;
            let TransportState::Grid(packet) = result.final_state else {
                unreachable!("grid protocol returns a grid state")
            };
            write_wavefunction(&mut buf, comments, &packet)?;
        }
    }
    Ok(buf)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

/// Validates, computes, and writes every artifact of the manifest.
pub fn run(m: &RunManifest) -> Result<()> {
    let artifacts = plan(m)?;
    let p = Params::new(m);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = p.usize("jobs")? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::usage(format!("jobs: {e}")))?;

    if m.command == Command::Reproduce {
        if let Some(dir) = &m.output_path {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    for (i, artifact) in artifacts.iter().enumerate() {
        if m.command == Command::Reproduce && m.output_path.is_none() && i > 0 {
            eprintln!("sqc: skipping {}.csv (pass --out DIR to write it)", artifact.name);
            continue;
        }
        let bytes = pool.install(|| render(artifact))?;
        match (&m.output_path, m.command) {
            (Some(dir), Command::Reproduce) => write_file(&dir.join(format!("{}.csv", artifact.name)), &bytes)?,
            (Some(path), _) => write_file(path, &bytes)?,
            (None, _) => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(&bytes)?;
                lock.flush()?;
            }
        }
    }
    Ok(())
}
