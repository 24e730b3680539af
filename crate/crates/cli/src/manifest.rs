//! Run manifests: one subcommand plus a flat `key → value` map, merged from
//! an optional `key = value` file and command-line flags (flags win).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Arg, ArgAction};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    TransportSqc,
    TransportAqc,
    SearchSqc,
    SearchAqc,
    ReadoutCurve,
    MsCheck,
    OpenTransport,
    OpenSearch,
    Reproduce,
}

/// Accepted by every subcommand.
pub const GLOBAL_KEYS: [&str; 3] = ["jobs", "dt", "nmax"];

const GRID_KEYS: [&str; 3] = ["grid-min", "grid-max", "grid-points"];

impl Command {
    pub const ALL: [Command; 9] = [
        Command::TransportSqc,
        Command::TransportAqc,
        Command::SearchSqc,
        Command::SearchAqc,
        Command::ReadoutCurve,
        Command::MsCheck,
        Command::OpenTransport,
        Command::OpenSearch,
        Command::Reproduce,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::TransportSqc => "transport-sqc",
            Command::TransportAqc => "transport-aqc",
            Command::SearchSqc => "search-sqc",
            Command::SearchAqc => "search-aqc",
            Command::ReadoutCurve => "readout-curve",
            Command::MsCheck => "ms-check",
            Command::OpenTransport => "open-transport",
            Command::OpenSearch => "open-search",
            Command::Reproduce => "reproduce",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }

    fn about(self) -> &'static str {
        match self {
            Command::TransportSqc => "SQC transport fidelity versus N",
            Command::TransportAqc => "moving-trap transport at matched or given T",
            Command::SearchSqc => "SQC search fidelity versus N",
            Command::SearchAqc => "adiabatic search baselines at equalized cost 2g",
            Command::ReadoutCurve => "weak-to-strong readout curves over a (Gamma, p) grid",
            Command::MsCheck => "bichromatic two-ion drive against the effective propagator",
            Command::OpenTransport => "SQC transport under dephasing and damping",
            Command::OpenSearch => "SQC search under local dephasing",
            Command::Reproduce => "figure presets",
        }
    }

    /// Command-specific keys; see [`GLOBAL_KEYS`] for the rest.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Command::TransportSqc => &[
                "setting",
                "g",
                "d-over-x0",
                "P",
                "N",
                "method",
                "grid-min",
                "grid-max",
                "grid-points",
            ],
            Command::TransportAqc => &[
                "setting",
                "g",
                "d-over-x0",
                "P",
                "N",
                "T",
                "grid-min",
                "grid-max",
                "grid-points",
            ],
            Command::SearchSqc => &["g", "P", "N", "entries", "target"],
            Command::SearchAqc => &["g", "P", "N", "T", "family"],
            Command::ReadoutCurve => &["kind", "gamma", "p-min", "p-points"],
            Command::MsCheck => &["eta", "Omega", "nu", "delta"],
            Command::OpenTransport => &["setting", "g", "d-over-x0", "P", "N", "gamma", "p-error"],
            Command::OpenSearch => &["g", "P", "N", "gamma", "p-error"],
            Command::Reproduce => &["figure", "setting", "N"],
        }
    }

    pub fn accepts(self, key: &str) -> bool {
        self.keys().contains(&key) || GLOBAL_KEYS.contains(&key)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub command: Command,
    pub params: BTreeMap<String, String>,
    pub output_path: Option<PathBuf>,
}

impl RunManifest {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    /// Argument vector that parses back to this manifest.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec![self.command.name().to_string()];
        if let Some(fig) = self.get("figure") {
            args.push(fig.to_string());
        }
        for (k, v) in &self.params {
            if k == "figure" {
                continue;
            }
            args.push(format!("--{k}"));
            args.push(v.clone());
        }
        if let Some(out) = &self.output_path {
            args.push("--out".into());
            args.push(out.display().to_string());
        }
        args
    }

    /// `key = value` lines for a config file; the command stays on the
    /// command line.
    pub fn to_config_text(&self) -> String {
        let mut text = String::new();
        for (k, v) in &self.params {
            text.push_str(&format!("{k} = {v}\n"));
        }
        if let Some(out) = &self.output_path {
            text.push_str(&format!("out = {}\n", out.display()));
        }
        text
    }
}

fn key_help(cmd: Command, key: &str) -> &'static str {
    match key {
        "setting" => "i, ii, iii or all (list allowed)",
        "g" => "coupling strength",
        "d-over-x0" => "transport distance in units of x0",
        "P" => "overall post-selection probability",
        "N" => "selection rounds: 8, 1,2,4 or 1..16",
        "method" => "closed (default) or grid",
        "grid-min" | "grid-max" => "grid edge in units of x0",
        "grid-points" => "grid size",
        "T" => "total duration list; default matches the SQC duration at each N",
        "entries" => "database size (default 2)",
        "target" => "marked entry index (default 0)",
        "family" => "I, II or both (default)",
        "kind" => "sigma-x, sigma-y, eigen (list allowed)",
        "gamma" if cmd == Command::ReadoutCurve => "interference factor list",
        "gamma" => "dephasing rate",
        "p-error" => "per-selection error probability (default 0)",
        "p-min" => "lowest post-selection probability",
        "p-points" => "points on the p axis",
        "eta" => "Lamb-Dicke parameter",
        "Omega" => "drive strength",
        "nu" => "mode frequency",
        "delta" => "bichromatic detuning (default nu - 2 eta Omega)",
        "jobs" => "worker threads",
        "dt" => "integration step",
        "nmax" => "Fock cutoff",
        _ => "",
    }
}

fn cli() -> clap::Command {
    let mut root = clap::Command::new("sqc")
        .about("Superoscillating quantum control: sweeps, baselines and figure presets")
        .no_binary_name(true)
        .subcommand_required(true)
        .arg_required_else_help(true);
    for cmd in Command::ALL {
        let mut sub = clap::Command::new(cmd.name()).about(cmd.about());
        if cmd == Command::Reproduce {
            sub = sub.arg(
                Arg::new("figure")
                    .value_parser(["fig1b", "fig1c", "fig1d", "fig2b", "fig2c", "fig3a", "fig3b", "figS1"]),
            );
        }
        for key in cmd.keys().iter().chain(GLOBAL_KEYS.iter()) {
            if *key == "figure" {
                continue;
            }
            let mut arg = Arg::new(*key)
                .long(*key)
                .value_name("VALUE")
                .action(ArgAction::Set)
                .allow_negative_numbers(true)
                .help(key_help(cmd, key));
            if GRID_KEYS.contains(key) {
                arg = arg.hide_short_help(true);
            }
            sub = sub.arg(arg);
        }
        sub = sub
            .arg(
                Arg::new("out")
                    .long("out")
                    .value_name("PATH")
                    .help("output file (directory for reproduce)"),
            )
            .arg(
                Arg::new("config")
                    .long("config")
                    .value_name("FILE")
                    .help("key = value file; flags override it"),
            );
        root = root.subcommand(sub);
    }
    root
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::usage(format!(
                "config line {}: expected key = value",
                lineno + 1
            )));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(CliError::usage(format!(
                "config line {}: expected key = value",
                lineno + 1
            )));
        }
        pairs.push((k.to_string(), v.to_string()));
    }
    Ok(pairs)
}

/// Builds a manifest from arguments (without the program name) and an
/// optional config text. With no text given, `--config FILE` is read.
pub fn parse_config<I, T>(args: I, file: Option<&str>) -> Result<RunManifest, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => return Err(CliError::Clap(e)),
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let command = Command::parse(name).expect("registered subcommand");

    let loaded;
    let text = match (file, sub.get_one::<String>("config")) {
        (Some(t), _) => Some(t),
        (None, Some(path)) => {
            loaded = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read config {path}: {e}")))?;
            Some(loaded.as_str())
        }
        (None, None) => None,
    };

    let mut params = BTreeMap::new();
    let mut output_path = None;
    if let Some(text) = text {
        for (k, v) in parse_config_text(text)? {
            if k == "out" {
                output_path = Some(PathBuf::from(v));
            } else if command.accepts(&k) {
                params.insert(k, v);
            } else {
                return Err(CliError::usage(format!("unknown key '{k}' for {command}")));
            }
        }
    }
    for key in command.keys().iter().chain(GLOBAL_KEYS.iter()) {
        if let Some(v) = sub.get_one::<String>(key) {
            params.insert(key.to_string(), v.clone());
        }
    }
    if let Some(out) = sub.get_one::<String>("out") {
        output_path = Some(PathBuf::from(out));
    }
    Ok(RunManifest {
        command,
        params,
        output_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_only() {
        let m = parse_config(
            [
                "transport-sqc",
                "--g",
                "1",
                "--d-over-x0",
                "10",
                "--P",
                "0.9",
                "--N",
                "8",
            ],
            None,
        )
        .unwrap();
        assert_eq!(m.command, Command::TransportSqc);
        assert_eq!(m.get("N"), Some("8"));
        assert_eq!(m.get("d-over-x0"), Some("10"));
        assert_eq!(m.output_path, None);
    }

    #[test]
    fn flag_beats_file() {
        let m = parse_config(["transport-sqc", "--N", "8"], Some("N = 4  # rounds\nP=0.9\n")).unwrap();
        assert_eq!(m.get("N"), Some("8"));
        assert_eq!(m.get("P"), Some("0.9"));
    }

    #[test]
    fn unknown_file_key() {
        let err = parse_config(["search-sqc"], Some("d-over-x0 = 3\n")).unwrap_err();
        assert_eq!(err.to_string(), "unknown key 'd-over-x0' for search-sqc");
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let err = parse_config(["search-sqc", "--bogus", "1"], None).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn malformed_line() {
        assert!(parse_config_text("N 4").is_err());
        assert!(parse_config_text("N =").is_err());
        assert_eq!(parse_config_text("# only\n\n").unwrap(), vec![]);
    }

    #[test]
    fn round_trip() {
        let m = parse_config(
            ["reproduce", "fig1c", "--N", "1..4", "--jobs", "2", "--out", "/tmp/x"],
            Some("setting = i,ii\n"),
        )
        .unwrap();
        assert_eq!(m.get("figure"), Some("fig1c"));
        assert_eq!(parse_config(m.to_args(), None).unwrap(), m);
        let again = parse_config([m.command.name()], Some(&m.to_config_text())).unwrap();
        assert_eq!(again, m);
    }
}
