//! Browser bindings: readout curves, transported wave packets and the
//! search fidelity sweep. The plain functions are usable natively; the
//! `#[wasm_bindgen]` wrappers only convert errors.

use sqc::search::{search_aqc_record, AdiabaticFamily, SearchConfig};
use sqc::selection::{readout_curve, SelectionKind};
use sqc::transport::{sqc_transport_closed, TransportConfig, TransportState};
use sqc::wavepacket::{gaussian_ground_state, render, GridSpec};
use sqc::TrapSpec;
use wasm_bindgen::prelude::*;

const PLOT_POINTS: usize = 1024;

/// `[p, shift, weak, strong]` per row, flattened.
pub fn readout_rows(kind: &str, gamma: f64, points: usize) -> sqc::Result<Vec<f64>> {
    let kind = SelectionKind::parse(kind).unwrap_or(SelectionKind::SigmaXOptimal);
    let points = points.max(2);
    let p_min = 0.01;
    let ps: Vec<f64> = (0..points)
        .map(|k| p_min + (1.0 - p_min) * k as f64 / (points - 1) as f64)
        .collect();
    Ok(readout_curve(kind, &[gamma], &ps)?
        .into_iter()
        .flat_map(|r| [r.p, r.shift_over_gt, r.weak_limit, r.strong_limit])
        .collect())
}

#[wasm_bindgen]
pub struct Profile {
    x: Vec<f64>,
    density: Vec<f64>,
    target: Vec<f64>,
    fidelity: f64,
    duration: f64,
    probability: f64,
}

#[wasm_bindgen]
impl Profile {
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    pub fn density(&self) -> Vec<f64> {
        self.density.clone()
    }

    pub fn target(&self) -> Vec<f64> {
        self.target.clone()
    }

    pub fn fidelity(&self) -> f64 {
        self.fidelity
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }
}

/// Final `|ψ|²` of the `N`-round protocol next to the target ground state,
/// sampled on a window covering every branch.
pub fn transport_profile(g: f64, d_over_x0: f64, total_probability: f64, rounds: usize) -> sqc::Result<Profile> {
    let trap = TrapSpec::default();
    let cfg = TransportConfig::with_distance_in_x0(g, d_over_x0, rounds, total_probability, trap)?;
    let result = sqc_transport_closed(&cfg)?;
    let TransportState::Analytic(sup) = &result.final_state else {
        unreachable!("closed form returns an analytic state")
    };
    let full = cfg.grid()?;
    let grid = GridSpec::new(full.x_min(), full.x_max(), PLOT_POINTS)?;
    let psi = render(sup, &grid, &trap)?;
    let target = gaussian_ground_state(&grid, &trap, cfg.distance())?;
    let x0 = trap.x0();
    Ok(Profile {
        x: grid.points().map(|x| x / x0).collect(),
        density: psi.amplitudes().iter().map(|z| z.norm_sqr()).collect(),
        target: target.amplitudes().iter().map(|z| z.norm_sqr()).collect(),
        fidelity: result.fidelity,
        duration: result.duration,
        probability: result.actual_probability,
    })
}

/// `[N, F_sqc, F_typeI, F_typeII]` for `N = 1..=max_rounds`, flattened.
/// Baselines run at equalized cost `2g` over the SQC duration.
pub fn search_rows(g: f64, total_probability: f64, max_rounds: usize) -> sqc::Result<Vec<f64>> {
    let mut out = Vec::with_capacity(4 * max_rounds);
    for n in 1..=max_rounds.max(1) {
        let cfg = SearchConfig::two_entry(g, n, total_probability)?;
        let sqc = sqc::search::sqc_search_run(&cfg)?;
        let t = cfg.duration();
        let one = search_aqc_record(AdiabaticFamily::TypeI, g, t, None)?;
        let two = search_aqc_record(AdiabaticFamily::TypeII, g, t, None)?;
        out.extend([n as f64, sqc.fidelity, one.fidelity, two.fidelity]);
    }
    Ok(out)
}

fn js(e: sqc::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = readoutCurve)]
pub fn readout_curve_js(kind: &str, gamma: f64, points: usize) -> Result<Vec<f64>, JsError> {
    readout_rows(kind, gamma, points).map_err(js)
}

#[wasm_bindgen(js_name = transportProfile)]
pub fn transport_profile_js(g: f64, d_over_x0: f64, total_probability: f64, rounds: usize) -> Result<Profile, JsError> {
    transport_profile(g, d_over_x0, total_probability, rounds).map_err(js)
}

#[wasm_bindgen(js_name = searchCurve)]
pub fn search_curve_js(g: f64, total_probability: f64, max_rounds: usize) -> Result<Vec<f64>, JsError> {
    search_rows(g, total_probability, max_rounds).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn readout_layout() {
        let rows = readout_rows("A", 0.01, 5).unwrap();
        assert_eq!(rows.len(), 20);
        let last = &rows[16..];
        assert!((last[0] - 1.0).abs() < 1e-12);
        assert!((last[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn profile_is_normalized_and_on_target() {
        let prof = transport_profile(1.0, 10.0, 0.25, 20).unwrap();
        let x0 = TrapSpec::default().x0();
        let dx = (prof.x[1] - prof.x[0]) * x0;
        let norm: f64 = prof.density.iter().sum::<f64>() * dx;
        assert!((norm - 1.0).abs() < 1e-6);
        assert!((prof.fidelity - 0.995).abs() < 0.005);
        let peak = prof
            .density
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!((prof.x[peak] - 10.0).abs() < 0.5);
    }

    #[test]
    fn search_rows_beat_baselines() {
        let rows = search_rows(1.0, 0.9, 3).unwrap();
        assert_eq!(rows.len(), 12);
        for r in rows.chunks(4) {
            assert!(r[1] > r[2] && r[1] > r[3]);
        }
    }
}
