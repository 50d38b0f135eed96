//! Run configuration: defaults, figure presets, config-file and flag merging.
//!
//! Precedence, lowest to highest: built-in defaults, `--figure` preset,
//! config file (`key = value` lines), then command-line flags. A flag given
//! more than once keeps its last value and emits a warning. Every value is
//! routed through one setter so file keys and flag names share validation and
//! error messages name the offending key.

use std::path::PathBuf;

use pairwalk_core::{InitialState, InputStatistics, Method};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Walk,
    Spectrum,
    Classical,
    Compare,
    Reference,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Walk => "walk",
            CommandKind::Spectrum => "spectrum",
            CommandKind::Classical => "classical",
            CommandKind::Compare => "compare",
            CommandKind::Reference => "reference",
        }
    }
}

/// Fully merged, validated run configuration; serialized verbatim into the
/// output directory so a run can be reproduced bit for bit.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub sites: usize,
    pub hopping: f64,
    pub interaction: f64,
    pub time: f64,
    /// Initial configuration, canonical `doublon@M`, `adjacent@M`, `pair@A,B`
    /// or `center` (resolved to `adjacent@⌊M/2⌋`).
    pub initial: String,
    pub method: String,
    pub tolerance: f64,
    pub time_steps: usize,
    /// Corner-block half-width for the bunching diagnostic; 0 = ⌈M/6⌉.
    pub window: usize,
    pub threshold: f64,
    pub gamma: f64,
    pub dt: f64,
    pub realizations: usize,
    pub seed: u64,
    pub statistics: String,
    pub u_sweep: Vec<f64>,
    /// Mean input power per site for the interaction mapping U = 2γ·power.
    pub input_power: f64,
    pub model: String,
    pub output: PathBuf,
    pub formats: Vec<String>,
    pub threads: usize,
    pub figure: Option<String>,
}

impl RunConfig {
    pub fn defaults(command: CommandKind) -> Self {
        let output = std::env::var("PAIRWALK_OUTPUT")
            .map(PathBuf::from)
            .unwrap_or_else(|_| PathBuf::from("pairwalk-out"));
        Self {
            command,
            sites: 29,
            hopping: 1.0,
            interaction: 0.0,
            time: 4.0,
            initial: "center".into(),
            method: "full".into(),
            tolerance: 1e-10,
            time_steps: 1,
            window: 0,
            threshold: 0.5,
            gamma: 0.0,
            dt: 1e-3,
            realizations: 10_000,
            seed: 7,
            statistics: "gaussian".into(),
            u_sweep: vec![0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0],
            input_power: 1.0,
            model: "boson".into(),
            output,
            formats: vec!["csv".into(), "json".into(), "pgm".into()],
            threads: 0,
            figure: None,
        }
    }

    /// Route one `key = value` assignment into the config.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value
                .trim()
                .parse()
                .map_err(|_| format!("invalid value '{value}' for key '{key}'"))
        }
        match key {
            "sites" => self.sites = parse(key, value)?,
            "hopping" | "J" => self.hopping = parse(key, value)?,
            "U" | "interaction" => self.interaction = parse(key, value)?,
            "T" | "time" => self.time = parse(key, value)?,
            "initial" => self.initial = value.trim().to_string(),
            "method" => self.method = value.trim().to_string(),
            "tolerance" => self.tolerance = parse(key, value)?,
            "time-steps" => self.time_steps = parse(key, value)?,
            "window" => self.window = parse(key, value)?,
            "threshold" => self.threshold = parse(key, value)?,
            "gamma" => self.gamma = parse(key, value)?,
            "dt" => self.dt = parse(key, value)?,
            "realizations" => self.realizations = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "statistics" => self.statistics = value.trim().to_string(),
            "U-sweep" => {
                let mut sweep = Vec::new();
                for part in value.split(',') {
                    sweep.push(parse::<f64>(key, part)?);
                }
                if sweep.is_empty() {
                    return Err(format!("key '{key}' needs at least one value"));
                }
                self.u_sweep = sweep;
            }
            "input-power" => self.input_power = parse(key, value)?,
            "model" => self.model = value.trim().to_string(),
            "output" => self.output = PathBuf::from(value.trim()),
            "formats" => {
                self.formats = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
            }
            "threads" => self.threads = parse(key, value)?,
            "figure" => self.figure = Some(value.trim().to_string()),
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    /// Sanity-check the merged configuration; messages name the bad key.
    pub fn validate(&self) -> Result<(), String> {
        if self.sites < 2 {
            return Err(format!("sites: need at least 2 lattice sites, got {}", self.sites));
        }
        if !(self.hopping > 0.0) || !self.hopping.is_finite() {
            return Err(format!("hopping: must be positive and finite, got {}", self.hopping));
        }
        if !self.interaction.is_finite() {
            return Err("U: must be finite".into());
        }
        if !self.time.is_finite() || self.time < 0.0 {
            return Err(format!("T: must be finite and nonnegative, got {}", self.time));
        }
        if !(self.tolerance > 0.0) {
            return Err(format!("tolerance: must be positive, got {}", self.tolerance));
        }
        if self.time_steps == 0 {
            return Err("time-steps: must be at least 1".into());
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(format!("threshold: must lie in (0, 1), got {}", self.threshold));
        }
        if !self.gamma.is_finite() {
            return Err("gamma: must be finite".into());
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(format!("dt: must be positive, got {}", self.dt));
        }
        if self.realizations < 2 {
            return Err(format!("realizations: need at least 2, got {}", self.realizations));
        }
        if !(self.input_power > 0.0) || !self.input_power.is_finite() {
            return Err(format!("input-power: must be positive, got {}", self.input_power));
        }
        self.parse_method()?;
        self.parse_statistics()?;
        self.parse_initial()?;
        match self.model.as_str() {
            "boson" | "fermion" | "hardcore" | "single" => {}
            other => return Err(format!("model: expected boson|fermion|hardcore|single, got '{other}'")),
        }
        for f in &self.formats {
            match f.as_str() {
                "csv" | "json" | "pgm" => {}
                other => return Err(format!("formats: expected csv|json|pgm, got '{other}'")),
            }
        }
        if self.formats.is_empty() {
            return Err("formats: need at least one of csv,json,pgm".into());
        }
        Ok(())
    }

    pub fn parse_method(&self) -> Result<Method, String> {
        match self.method.as_str() {
            "full" | "full-diagonalization" => Ok(Method::FullDiagonalization),
            "krylov" => Ok(Method::Krylov),
            other => Err(format!("method: expected full|krylov, got '{other}'")),
        }
    }

    pub fn parse_statistics(&self) -> Result<InputStatistics, String> {
        match self.statistics.as_str() {
            "gaussian" | "circular-gaussian" => Ok(InputStatistics::CircularGaussian),
            "random-phase" => Ok(InputStatistics::RandomPhase),
            other => Err(format!("statistics: expected gaussian|random-phase, got '{other}'")),
        }
    }

    /// Resolve the initial descriptor against the configured lattice size.
    pub fn parse_initial(&self) -> Result<InitialState, String> {
        let text = self.initial.trim();
        if text == "center" {
            return Ok(InitialState::Adjacent { site: self.sites / 2 });
        }
        let (kind, rest) = text
            .split_once('@')
            .ok_or_else(|| format!("initial: expected kind@site, got '{text}'"))?;
        let bad = |_| format!("initial: bad site list in '{text}'");
        match kind {
            "doublon" => Ok(InitialState::Doublon { site: rest.parse().map_err(bad)? }),
            "adjacent" => Ok(InitialState::Adjacent { site: rest.parse().map_err(bad)? }),
            "pair" => {
                let (a, b) = rest
                    .split_once(',')
                    .ok_or_else(|| format!("initial: pair needs two sites in '{text}'"))?;
                Ok(InitialState::Pair {
                    a: a.trim().parse().map_err(bad)?,
                    b: b.trim().parse().map_err(bad)?,
                })
            }
            other => Err(format!("initial: unknown kind '{other}'")),
        }
    }

    /// Input site pair for the classical ensemble.
    pub fn input_sites(&self) -> Result<(usize, usize), String> {
        Ok(match self.parse_initial()? {
            InitialState::Doublon { site } => (site, site),
            InitialState::Adjacent { site } => (site, site + 1),
            InitialState::Pair { a, b } => (a.min(b), a.max(b)),
        })
    }

    /// Corner-block width, defaulting to ⌈M/6⌉.
    pub fn effective_window(&self) -> usize {
        if self.window == 0 {
            self.sites.div_ceil(6)
        } else {
            self.window
        }
    }

    pub fn wants(&self, format: &str) -> bool {
        self.formats.iter().any(|f| f == format)
    }
}

/// Field bundles reproducing the published panels; applied before config
/// file and flags so individual values can still be overridden.
pub fn figure_preset(cfg: &mut RunConfig, name: &str) -> Result<(), String> {
    let apply = |cfg: &mut RunConfig, pairs: &[(&str, &str)]| -> Result<(), String> {
        for (k, v) in pairs {
            cfg.set(k, v)?;
        }
        Ok(())
    };
    let base: &[(&str, &str)] = &[("sites", "29"), ("hopping", "1"), ("T", "4")];
    apply(cfg, base)?;
    let intended = match name {
        "fig1b" => {
            apply(cfg, &[("model", "single"), ("initial", "doublon@14"), ("time-steps", "81")])?;
            CommandKind::Reference
        }
        "fig1c" => {
            apply(cfg, &[("U", "0"), ("initial", "adjacent@14"), ("time-steps", "81")])?;
            CommandKind::Walk
        }
        "fig2a" | "fig2b" | "fig2c" | "fig2d" | "fig2e" | "fig2f" => {
            let u = match name {
                "fig2a" => "0",
                "fig2b" => "1",
                "fig2c" => "2",
                "fig2d" => "4",
                "fig2e" => "8",
                _ => "20",
            };
            apply(cfg, &[("U", u), ("initial", "doublon@14")])?;
            CommandKind::Walk
        }
        "fig2g" | "fig2h" | "fig2i" | "fig2j" | "fig2k" => {
            let u = match name {
                "fig2g" => "0",
                "fig2h" => "1",
                "fig2i" => "2",
                "fig2j" => "4",
                _ => "20",
            };
            apply(cfg, &[("U", u), ("initial", "adjacent@14")])?;
            CommandKind::Walk
        }
        "fig2l" => {
            apply(cfg, &[("model", "fermion"), ("initial", "adjacent@14")])?;
            CommandKind::Reference
        }
        "fig3" => {
            apply(cfg, &[("U", "8")])?;
            CommandKind::Spectrum
        }
        "fig4a" => {
            apply(cfg, &[("gamma", "0"), ("initial", "adjacent@14"), ("statistics", "gaussian")])?;
            CommandKind::Classical
        }
        "fig4b" => {
            apply(cfg, &[("U", "0"), ("initial", "adjacent@14")])?;
            CommandKind::Walk
        }
        "fig5" => {
            apply(
                cfg,
                &[("U-sweep", "0,0.5,1,1.5,2,3,5"), ("initial", "adjacent@14")],
            )?;
            CommandKind::Compare
        }
        other => return Err(format!("figure: unknown preset '{other}'")),
    };
    if intended != cfg.command {
        eprintln!(
            "warning: preset {name} is meant for the '{}' command, running '{}'",
            intended.name(),
            cfg.command.name()
        );
    }
    Ok(())
}

/// Parse a line-oriented `key = value` config file.
pub fn apply_config_file(cfg: &mut RunConfig, path: &std::path::Path) -> Result<(), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("config: cannot read {}: {e}", path.display()))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config: line {} is not 'key = value'", lineno + 1))?;
        cfg.set(key.trim(), value.trim())?;
    }
    Ok(())
}
