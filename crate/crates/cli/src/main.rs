//! Command-line driver for two-boson lattice walks.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical
//! error. Failures print a machine-readable JSON object to stderr.

mod commands;
mod config;
mod output;

use clap::{Arg, ArgAction, ArgMatches};
use config::{apply_config_file, figure_preset, CommandKind, RunConfig};

/// Error carrying its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<pairwalk_core::Error> for CliError {
    fn from(e: pairwalk_core::Error) -> Self {
        let code = match e {
            pairwalk_core::Error::Config(_) | pairwalk_core::Error::Usage(_) => 2,
            pairwalk_core::Error::Dimension(_) | pairwalk_core::Error::Numerical(_) => 4,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { code: 3, message: format!("i/o error: {e}") }
    }
}

/// Keys settable from the command line, in canonical application order.
const KEYS: &[(&str, &str)] = &[
    ("sites", "lattice size M"),
    ("hopping", "tunneling amplitude J"),
    ("U", "on-site interaction energy"),
    ("T", "evolution time in units of 1/J"),
    ("initial", "doublon@M | adjacent@M | pair@A,B | center"),
    ("method", "full | krylov"),
    ("tolerance", "norm-drift and truncation budget"),
    ("time-steps", "emit a density evolution with this many rows"),
    ("window", "corner-block width for the bunching ratio (0 = M/6)"),
    ("threshold", "double-occupancy weight separating bound states"),
    ("gamma", "nonlinear coefficient of the classical field"),
    ("dt", "RK4 step for the classical integrator"),
    ("realizations", "thermal ensemble size"),
    ("seed", "ensemble seed"),
    ("statistics", "gaussian | random-phase"),
    ("U-sweep", "comma-separated interaction values for compare"),
    ("input-power", "mean classical input power per site"),
    ("model", "reference model: boson | fermion | hardcore | single"),
    ("output", "output directory (default $PAIRWALK_OUTPUT or pairwalk-out)"),
    ("formats", "comma-separated subset of csv,json,pgm"),
    ("threads", "worker threads (0 = automatic)"),
];

fn subcommand(name: &'static str, about: &'static str) -> clap::Command {
    let mut cmd = clap::Command::new(name).about(about);
    for (key, help) in KEYS {
        cmd = cmd.arg(
            Arg::new(*key)
                .long(*key)
                .help(*help)
                .num_args(1)
                .action(ArgAction::Append)
                .allow_negative_numbers(true)
                // sweeps like "-1,0,1" are comma lists, not plain numbers
                .allow_hyphen_values(*key == "U-sweep"),
        );
    }
    cmd.arg(
        Arg::new("config")
            .long("config")
            .help("key = value file applied before flags")
            .num_args(1)
            .action(ArgAction::Append),
    )
    .arg(
        Arg::new("figure")
            .long("figure")
            .help("named parameter preset (fig1b..fig5)")
            .num_args(1)
            .action(ArgAction::Append),
    )
}

fn build_cli() -> clap::Command {
    clap::Command::new("pairwalk")
        .about("Quantum walks of two interacting bosons on an open chain")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(subcommand("walk", "evolve a two-boson state and emit density and correlations"))
        .subcommand(subcommand("spectrum", "two-particle eigensystem, band counts, and gap"))
        .subcommand(subcommand("classical", "thermal-ensemble mean-field intensity correlations"))
        .subcommand(subcommand("compare", "quantum vs classical fluctuation correlators over a U sweep"))
        .subcommand(subcommand("reference", "closed-form boson/fermion/hard-core/single walkers"))
}

/// Last occurrence wins; repeated flags warn.
fn take_last<'a>(matches: &'a ArgMatches, key: &str) -> Option<&'a String> {
    let values: Vec<&String> = matches.get_many::<String>(key)?.collect();
    if values.len() > 1 {
        eprintln!(
            "warning: --{key} given {} times; using the last value '{}'",
            values.len(),
            values.last().unwrap()
        );
    }
    values.last().copied()
}

fn merge(command: CommandKind, matches: &ArgMatches) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::defaults(command);
    let bad = |message: String| CliError { code: 2, message };

    if let Some(name) = take_last(matches, "figure") {
        figure_preset(&mut cfg, name).map_err(bad)?;
        cfg.figure = Some(name.clone());
    }
    if let Some(paths) = matches.get_many::<String>("config") {
        for path in paths {
            apply_config_file(&mut cfg, std::path::Path::new(path)).map_err(bad)?;
        }
    }
    for (key, _) in KEYS {
        if let Some(value) = take_last(matches, key) {
            cfg.set(key, value).map_err(bad)?;
        }
    }
    cfg.validate().map_err(bad)?;
    Ok(cfg)
}

fn dispatch() -> Result<(), CliError> {
    let matches = build_cli().try_get_matches().map_err(|e| {
        use clap::error::ErrorKind;
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            let _ = e.print();
            std::process::exit(0);
        }
        CliError { code: 2, message: e.to_string() }
    })?;

    let (name, sub) = matches.subcommand().expect("subcommand required");
    let command = match name {
        "walk" => CommandKind::Walk,
        "spectrum" => CommandKind::Spectrum,
        "classical" => CommandKind::Classical,
        "compare" => CommandKind::Compare,
        "reference" => CommandKind::Reference,
        _ => unreachable!(),
    };
    let cfg = merge(command, sub)?;

    if cfg.threads > 0 {
        // may already be initialized when embedded in tests; that is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global();
    }
    commands::run(&cfg)
}

fn main() {
    if let Err(e) = dispatch() {
        let payload = serde_json::json!({
            "error": { "exit_code": e.code, "message": e.message }
        });
        eprintln!("{payload}");
        std::process::exit(e.code);
    }
}
