//! Figure presets for `reproduce`.

use sqc::openquantum::NoiseSpec;
use sqc::record::RecordSchema;
use sqc::search::AdiabaticFamily;
use sqc::selection::SelectionKind;
use sqc::transport::{TransportMethod, TransportSetting, AQC_DT};

use crate::run::{
    compact_list, linspace, open_transport_jobs, preset_targets, readout_comments, schema_comments, search_config,
    wave_comments, Artifact, Body, Job, Params,
};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub(crate) const READOUT_P_MIN: f64 = 0.01;
pub(crate) const READOUT_P_POINTS: usize = 100;
pub(crate) const MS_DT: f64 = 0.05;

const SWEEP_P: f64 = 0.9;
const SEARCH_G: f64 = 1.0;
const NOISE_GAMMA: f64 = 0.01;
const NOISE_P_ERROR: f64 = 5e-3;
const SHOWCASE_P: f64 = 0.25;
const SHOWCASE_N: usize = 20;

pub(crate) fn readout_gammas() -> Vec<f64> {
    vec![0.01, 0.1, 0.3, 1.0, 3.0, 10.0]
}

fn default_rounds() -> Vec<usize> {
    (1..=16).collect()
}

fn table(name: &str, head: &str, params: String, schema: RecordSchema, jobs: Vec<Job>) -> Artifact {
    let mut comments = vec![head.to_string(), format!("parameters: {params}")];
    comments.extend(schema_comments(schema));
    Artifact {
        name: name.into(),
        comments,
        body: Body::Records { schema, jobs },
    }
}

pub(crate) fn plan(p: &Params, head: String) -> Result<Vec<Artifact>> {
    let figure = p
        .str("figure")
        .ok_or_else(|| CliError::usage("missing required key figure"))?;
    let takes_rounds = matches!(figure, "fig1c" | "fig1d" | "fig2b" | "fig2c" | "fig3a" | "fig3b");
    let takes_setting = matches!(figure, "fig1c" | "fig1d" | "fig3a");
    for (key, ok) in [("N", takes_rounds), ("setting", takes_setting)] {
        if p.has(key) && !ok {
            return Err(CliError::usage(format!("{figure} does not take key {key}")));
        }
    }
    let rounds = p.usize_list("N")?.unwrap_or_else(default_rounds);
    if rounds.is_empty() || rounds.contains(&0) {
        return Err(CliError::usage("N must be at least 1"));
    }
    let settings = p.settings()?.unwrap_or_else(|| TransportSetting::ALL.to_vec());
    let setting_list = settings.iter().map(|s| s.label()).collect::<Vec<_>>().join(",");
    let n_list = compact_list(&rounds);
    let dt = p.dt()?;
    let n_max = p.usize("nmax")?;
    let targets = preset_targets(&settings);

    let transport = |method: TransportMethod, dt: f64| -> Result<Vec<Job>> {
        let mut jobs = Vec::new();
        for t in &targets {
            for &n in &rounds {
                jobs.push(Job::Transport {
                    cfg: t.config(n, SWEEP_P)?,
                    setting: t.label(),
                    d_over_x0: t.d_over_x0,
                    method,
                    dt,
                });
            }
        }
        Ok(jobs)
    };

    let artifacts = match figure {
        "fig1b" => {
            let setting = TransportSetting::II;
            let sqc = setting.config(SHOWCASE_N, SHOWCASE_P, Default::default())?;
            let single = setting.config(1, SHOWCASE_P, Default::default())?;
            let grid = single.grid()?;
            let (sqc, single) = (sqc.with_grid(grid), single.with_grid(grid));
            let params = format!(
                "setting=ii P={SHOWCASE_P} N={SHOWCASE_N} method=grid, dumps share one grid of {} points on [{}, {}]",
                grid.n_points(),
                grid.x_min(),
                grid.x_max()
            );
            let dump = |name: &str, what: &str, body: Body| {
                let mut comments = vec![head.clone(), format!("{what}; {params}")];
                comments.extend(wave_comments());
                Artifact {
                    name: name.into(),
                    comments,
                    body,
                }
            };
            vec![
                table(
                    "fig1b",
                    &head,
                    params.clone(),
                    RecordSchema::Transport,
                    vec![Job::Transport {
                        cfg: sqc.clone(),
                        setting: Some(setting.label()),
                        d_over_x0: setting.distance_over_x0(),
                        method: TransportMethod::SqcGrid,
                        dt: AQC_DT,
                    }],
                ),
                dump(
                    "fig1b_initial",
                    "initial ground state",
                    Body::Ground { grid, center: 0.0 },
                ),
                dump("fig1b_single_shot", "single selection, N=1", Body::GridState(single)),
                dump("fig1b_sqc", "sequential selections, N=20", Body::GridState(sqc)),
            ]
        }
        "fig1c" => vec![table(
            "fig1c",
            &head,
            format!("P={SWEEP_P} N={n_list} setting={setting_list} method=closed"),
            RecordSchema::Transport,
            transport(TransportMethod::SqcClosed, AQC_DT)?,
        )],
        "fig1d" => {
            let dt = dt.unwrap_or(AQC_DT);
            vec![table(
                "fig1d",
                &head,
                format!("moving trap over the SQC duration at P={SWEEP_P} N={n_list} setting={setting_list} dt={dt}"),
                RecordSchema::Transport,
                transport(TransportMethod::Aqc, dt)?,
            )]
        }
        "fig2b" => {
            let jobs = rounds
                .iter()
                .map(|&n| search_config(SEARCH_G, n, SWEEP_P, 0, 2).map(Job::SearchSqc))
                .collect::<Result<Vec<_>>>()?;
            vec![table(
                "fig2b",
                &head,
                format!("g={SEARCH_G} P={SWEEP_P} N={n_list} entries=2"),
                RecordSchema::Search,
                jobs,
            )]
        }
        "fig2c" => {
            let mut jobs = Vec::new();
            let configs = rounds
                .iter()
                .map(|&n| search_config(SEARCH_G, n, SWEEP_P, 0, 2))
                .collect::<Result<Vec<_>>>()?;
            jobs.extend(configs.iter().cloned().map(Job::SearchSqc));
            for family in [AdiabaticFamily::TypeI, AdiabaticFamily::TypeII] {
                for cfg in &configs {
                    jobs.push(Job::SearchAqc {
                        family,
                        coupling: SEARCH_G,
                        duration: cfg.duration(),
                        rounds: Some(cfg.rounds()),
                        dt,
                    });
                }
            }
            vec![table(
                "fig2c",
                &head,
                format!("g={SEARCH_G} P={SWEEP_P} N={n_list}; baselines at cost 2g over the SQC duration"),
                RecordSchema::Search,
                jobs,
            )]
        }
        "fig3a" => {
            let noise = NoiseSpec::new(NOISE_GAMMA, NOISE_P_ERROR)?;
            vec![table(
                "fig3a",
                &head,
                format!("P={SWEEP_P} N={n_list} setting={setting_list} gamma={NOISE_GAMMA} p_error={NOISE_P_ERROR}"),
                RecordSchema::Open,
                open_transport_jobs(&targets, SWEEP_P, &rounds, noise, n_max, dt)?,
            )]
        }
        "fig3b" => {
            let noise = NoiseSpec::new(NOISE_GAMMA, NOISE_P_ERROR)?;
            let jobs = rounds
                .iter()
                .map(|&n| {
                    Ok(Job::OpenSearch {
                        cfg: search_config(SEARCH_G, n, SWEEP_P, 0, 2)?,
                        noise,
                        dt,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            vec![table(
                "fig3b",
                &head,
                format!("g={SEARCH_G} P={SWEEP_P} N={n_list} gamma={NOISE_GAMMA} p_error={NOISE_P_ERROR}"),
                RecordSchema::Open,
                jobs,
            )]
        }
        "figS1" => {
            let mut comments =
                vec![
                    head.clone(),
                    format!(
                    "parameters: kinds sigma-x and eigen, p={READOUT_P_MIN}..1 ({READOUT_P_POINTS} points), gamma={}",
                    readout_gammas().iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",")
                ),
                ];
            comments.extend(readout_comments());
            vec![Artifact {
                name: "figS1".into(),
                comments,
                body: Body::Readout {
                    kinds: vec![SelectionKind::SigmaXOptimal, SelectionKind::EigenAnchored],
                    gammas: readout_gammas(),
                    ps: linspace(READOUT_P_MIN, 1.0, READOUT_P_POINTS),
                },
            }]
        }
        other => return Err(CliError::usage(format!("unknown figure '{other}'"))),
    };
    Ok(artifacts)
}
