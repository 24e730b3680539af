//! Sweep records and their CSV tables.
//!
//! Every table may start with `#`-prefixed comment lines describing the run,
//! followed by a header row. Numbers use the shortest round-trip decimal
//! form, so identical inputs give identical bytes.

use std::io::Write;

use crate::error::{Error, Result};
use crate::selection::ReadoutPoint;
use crate::wavepacket::GridWavePacket;

/// One sweep point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentRecord {
    pub protocol: String,
    pub setting: Option<String>,
    pub rounds: Option<usize>,
    pub duration: Option<f64>,
    pub round_duration: Option<f64>,
    pub coupling: f64,
    pub distance_over_x0: Option<f64>,
    pub p_nominal: f64,
    pub p_actual: f64,
    pub fidelity: f64,
    pub fidelity_penalized: Option<f64>,
    pub cost: Option<f64>,
    pub omega: Option<f64>,
    pub k: Option<f64>,
    pub gamma: Option<f64>,
    pub p_error: Option<f64>,
    pub n_max: Option<usize>,
    pub method: Option<String>,
}

impl ExperimentRecord {
    pub fn validate(&self) -> Result<()> {
        let numbers = [
            Some(self.coupling),
            Some(self.p_nominal),
            Some(self.p_actual),
            Some(self.fidelity),
            self.duration,
            self.round_duration,
            self.distance_over_x0,
            self.fidelity_penalized,
            self.cost,
            self.omega,
            self.k,
            self.gamma,
            self.p_error,
        ];
        if numbers.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("record", "contains a non-finite value"));
        }
        for f in [Some(self.fidelity), self.fidelity_penalized].into_iter().flatten() {
            if !(-1e-12..=1.0 + 1e-10).contains(&f) {
                return Err(Error::invalid("fidelity", format!("{f} outside [0,1]")));
            }
        }
        Ok(())
    }

    /// Penalized fidelity where present, raw otherwise.
    pub fn scored_fidelity(&self) -> f64 {
        self.fidelity_penalized.unwrap_or(self.fidelity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordSchema {
    Transport,
    Search,
    Open,
}

impl RecordSchema {
    pub fn header(self) -> &'static [&'static str] {
        match self {
            RecordSchema::Transport => &[
                "setting",
                "N",
                "g",
                "d_over_x0",
                "P_nominal",
                "P_actual",
                "T",
                "dT",
                "fidelity",
                "method",
            ],
            RecordSchema::Search => &[
                "protocol",
                "N",
                "T",
                "g",
                "P_nominal",
                "P_actual",
                "fidelity",
                "cost",
                "Omega",
                "K",
            ],
            RecordSchema::Open => &[
                "protocol",
                "setting",
                "N",
                "gamma",
                "p_error",
                "P_actual",
                "fidelity_raw",
                "fidelity_penalized",
                "n_max",
            ],
        }
    }

    fn row(self, r: &ExperimentRecord) -> Vec<String> {
        let f = |v: Option<f64>| v.map(fmt).unwrap_or_default();
        let u = |v: Option<usize>| v.map(|n| n.to_string()).unwrap_or_default();
        let s = |v: &Option<String>| v.clone().unwrap_or_default();
        match self {
            RecordSchema::Transport => vec![
                s(&r.setting),
                u(r.rounds),
                fmt(r.coupling),
                f(r.distance_over_x0),
                fmt(r.p_nominal),
                fmt(r.p_actual),
                f(r.duration),
                f(r.round_duration),
                fmt(r.fidelity),
                s(&r.method),
            ],
            RecordSchema::Search => vec![
                r.protocol.clone(),
                u(r.rounds),
                f(r.duration),
                fmt(r.coupling),
                fmt(r.p_nominal),
                fmt(r.p_actual),
                fmt(r.fidelity),
                f(r.cost),
                f(r.omega),
                f(r.k),
            ],
            RecordSchema::Open => vec![
                r.protocol.clone(),
                s(&r.setting),
                u(r.rounds),
                f(r.gamma),
                f(r.p_error),
                fmt(r.p_actual),
                fmt(r.fidelity),
                f(r.fidelity_penalized),
                u(r.n_max),
            ],
        }
    }
}

pub fn fmt(v: f64) -> String {
    format!("{v}")
}

fn write_comments<W: Write>(out: &mut W, comments: &[String]) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}").map_err(io_error)?;
    }
    Ok(())
}

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::invalid("output", e.to_string())
}

fn write_table<W: Write>(
    mut out: W,
    comments: &[String],
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    write_comments(&mut out, comments)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header).map_err(io_error)?;
    for row in rows {
        w.write_record(&row).map_err(io_error)?;
    }
    w.flush().map_err(io_error)?;
    Ok(())
}

pub fn write_records<W: Write>(
    out: W,
    schema: RecordSchema,
    comments: &[String],
    records: &[ExperimentRecord],
) -> Result<()> {
    write_table(out, comments, schema.header(), records.iter().map(|r| schema.row(r)))
}

pub const READOUT_HEADER: [&str; 6] = ["kind", "p", "gamma", "shift_over_gT", "weak_limit", "strong_limit"];

pub fn write_readout_curve<W: Write>(out: W, comments: &[String], rows: &[ReadoutPoint]) -> Result<()> {
    write_table(
        out,
        comments,
        &READOUT_HEADER,
        rows.iter().map(|r| {
            vec![
                r.kind.label().to_string(),
                fmt(r.p),
                fmt(r.gamma),
                fmt(r.shift_over_gt),
                fmt(r.weak_limit),
                fmt(r.strong_limit),
            ]
        }),
    )
}

pub const WAVEFUNCTION_HEADER: [&str; 4] = ["x", "re", "im", "abs2"];

pub fn write_wavefunction<W: Write>(out: W, comments: &[String], packet: &GridWavePacket) -> Result<()> {
    let grid = *packet.grid();
    write_table(
        out,
        comments,
        &WAVEFUNCTION_HEADER,
        packet
            .amplitudes()
            .iter()
            .enumerate()
            .map(move |(j, z)| vec![fmt(grid.x(j)), fmt(z.re), fmt(z.im), fmt(z.norm_sqr())]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentRecord {
        ExperimentRecord {
            protocol: "sqc".into(),
            setting: Some("ii".into()),
            rounds: Some(8),
            duration: Some(7.0),
            round_duration: Some(0.875),
            coupling: 1.0,
            distance_over_x0: Some(10.0),
            p_nominal: 0.9,
            p_actual: 0.91,
            fidelity: 0.999,
            method: Some("closed".into()),
            ..Default::default()
        }
    }

    #[test]
    fn transport_table_layout() {
        let mut buf = Vec::new();
        write_records(&mut buf, RecordSchema::Transport, &["demo".into()], &[sample()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# demo\nsetting,N,g,d_over_x0,P_nominal,P_actual,T,dT,fidelity,method\nii,8,1,10,0.9,0.91,7,0.875,0.999,closed\n"
        );
    }

    #[test]
    fn validation() {
        assert!(sample().validate().is_ok());
        let mut bad = sample();
        bad.fidelity = 1.1;
        assert!(bad.validate().is_err());
        let mut bad = sample();
        bad.cost = Some(f64::NAN);
        assert!(bad.validate().is_err());
    }
}
