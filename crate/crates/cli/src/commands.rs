//! One entry point per subcommand; each writes its artifacts into the output
//! directory and a `results.json` summary next to the `config.json` echo.

use pairwalk_core as core;
use pairwalk_core::{CorrelationMatrix, EnsembleSpec, EvolutionSpec, LatticeSpec};
use serde_json::json;

use crate::config::{CommandKind, RunConfig};
use crate::output::{self, OutputRecord};
use crate::CliError;

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&cfg.output)?;
    output::write_json(&cfg.output, "config.json", cfg)?;
    match cfg.command {
        CommandKind::Walk => walk(cfg),
        CommandKind::Spectrum => spectrum(cfg),
        CommandKind::Classical => classical(cfg),
        CommandKind::Compare => compare(cfg),
        CommandKind::Reference => reference(cfg),
    }
}

fn bad_key(message: String) -> CliError {
    CliError { code: 2, message }
}

fn lattice_spec(cfg: &RunConfig, interaction: f64) -> Result<LatticeSpec, CliError> {
    Ok(LatticeSpec::new(cfg.sites, cfg.hopping, interaction)?)
}

/// Serializable stand-in for a possibly saturated (infinite) diagnostic.
fn finite_or_none(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn walk(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = lattice_spec(cfg, cfg.interaction)?;
    let basis = core::build_basis(&spec)?;
    let h = core::build_hamiltonian(&spec, &basis)?;
    let init = core::initial_state(cfg.parse_initial().map_err(bad_key)?, &basis)?;

    let evo = EvolutionSpec {
        time: cfg.time,
        method: cfg.parse_method().map_err(bad_key)?,
        tolerance: cfg.tolerance,
    };
    let final_state = core::evolve(&init, &h, &evo)?;

    let density = core::density(&final_state);
    let gamma = core::correlation(&final_state);
    let fluct = core::correlation_fluctuation(&gamma, &density)?;
    let bunching = core::bunching_ratio(&gamma, cfg.effective_window())?;
    let participation = core::participation_ratio(&density)?;

    let dir = cfg.output.as_path();
    let mut records: Vec<OutputRecord> = Vec::new();
    if cfg.wants("csv") {
        output::write_text(dir, "density.csv", &output::column_csv("density", density.values()))?;
        records.push(OutputRecord { file: "density.csv".into(), min: None, max: None });
    }
    records.extend(output::emit_matrix(
        dir,
        "correlation",
        &gamma,
        cfg.wants("csv"),
        cfg.wants("pgm"),
    )?);
    records.extend(output::emit_matrix(
        dir,
        "correlation_fluctuation",
        &fluct,
        cfg.wants("csv"),
        cfg.wants("pgm"),
    )?);

    if cfg.time_steps > 1 {
        let decomposition = core::full_spectrum(&h)?;
        let mut times = Vec::with_capacity(cfg.time_steps);
        let mut rows = Vec::with_capacity(cfg.time_steps);
        for k in 0..cfg.time_steps {
            let t = cfg.time * k as f64 / (cfg.time_steps - 1) as f64;
            let state = decomposition.evolve(&init, t)?;
            times.push(t);
            rows.push(core::density(&state).values().to_vec());
        }
        if cfg.wants("csv") {
            output::write_text(dir, "density_evolution.csv", &output::evolution_csv(&times, &rows))?;
            records.push(OutputRecord { file: "density_evolution.csv".into(), min: None, max: None });
        }
        if cfg.wants("pgm") {
            let mut data = nalgebra::DMatrix::zeros(rows.len(), cfg.sites);
            for (r, row) in rows.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    data[(r, c)] = *v;
                }
            }
            let max = data.iter().copied().fold(0.0_f64, f64::max);
            records.push(output::write_pgm(dir, "density_evolution.pgm", &data, 0.0, max)?);
        }
    }

    if cfg.wants("json") {
        output::write_json(
            dir,
            "results.json",
            &json!({
                "command": "walk",
                "config": cfg,
                "diagnostics": {
                    "density_sum": density.total(),
                    "density_sum_residual": (density.total() - 2.0).abs(),
                    "correlation_sum": gamma.total(),
                    "correlation_sum_residual": (gamma.total() - 2.0).abs(),
                    "diagonal_correlation_weight": gamma.diagonal_weight(),
                    "bunching_ratio": finite_or_none(bunching),
                    "bunching_window": cfg.effective_window(),
                    "participation_ratio": participation,
                    "norm_drift": (final_state.norm_sq() - 1.0).abs(),
                    "energy_expectation": h.expectation(&final_state),
                },
                "outputs": records,
            }),
        )?;
    }
    Ok(())
}

fn spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = lattice_spec(cfg, cfg.interaction)?;
    let basis = core::build_basis(&spec)?;
    let h = core::build_hamiltonian(&spec, &basis)?;
    let states = core::classify_bound(core::full_spectrum(&h)?, cfg.threshold)?;

    let dir = cfg.output.as_path();
    let mut records: Vec<OutputRecord> = Vec::new();
    if cfg.wants("csv") {
        let mut body = String::from("index,energy,momentum,doublon_weight,bound\n");
        for k in 0..states.len() {
            use std::fmt::Write;
            let _ = writeln!(
                body,
                "{k},{},{},{},{}",
                states.energies()[k],
                states.momentum()[k],
                states.doublon_weights()[k],
                u8::from(states.bound_flags()[k]),
            );
        }
        output::write_text(dir, "spectrum.csv", &body)?;
        records.push(OutputRecord { file: "spectrum.csv".into(), min: None, max: None });
    }

    let (gap, gap_note) = match core::band_gap(&states) {
        Ok(g) => (Some(g), None),
        Err(e) => (None, Some(e.to_string())),
    };

    if cfg.wants("json") {
        output::write_json(
            dir,
            "results.json",
            &json!({
                "command": "spectrum",
                "config": cfg,
                "diagnostics": {
                    "dimension": states.len(),
                    "bound_count": states.bound_count(),
                    "scattering_count": states.scattering_count(),
                    "bound_threshold": states.threshold(),
                    "gap": gap,
                    "gap_note": gap_note,
                    "energy_min": states.energies().first(),
                    "energy_max": states.energies().last(),
                },
                "outputs": records,
            }),
        )?;
    }
    Ok(())
}

fn ensemble_spec(cfg: &RunConfig, gamma: f64) -> Result<EnsembleSpec, CliError> {
    Ok(EnsembleSpec {
        sites: cfg.sites,
        inputs: cfg.input_sites().map_err(bad_key)?,
        realizations: cfg.realizations,
        seed: cfg.seed,
        statistics: cfg.parse_statistics().map_err(bad_key)?,
        hopping: cfg.hopping,
        nonlinearity: gamma,
        time: cfg.time,
        dt: cfg.dt,
    })
}

fn classical(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = ensemble_spec(cfg, cfg.gamma)?;
    let result = core::thermal_ensemble_correlation(&spec)?;

    let dir = cfg.output.as_path();
    let mut records: Vec<OutputRecord> = Vec::new();
    if cfg.wants("csv") {
        output::write_text(
            dir,
            "mean_intensity.csv",
            &output::column_csv("mean_intensity", &result.mean_intensity),
        )?;
        records.push(OutputRecord { file: "mean_intensity.csv".into(), min: None, max: None });
        output::write_text(
            dir,
            "correlation_std_err.csv",
            &output::matrix_csv("site", &result.correlation_std_err),
        )?;
        records.push(OutputRecord { file: "correlation_std_err.csv".into(), min: None, max: None });
    }
    records.extend(output::emit_matrix(
        dir,
        "correlation",
        &result.correlation,
        cfg.wants("csv"),
        cfg.wants("pgm"),
    )?);
    records.extend(output::emit_matrix(
        dir,
        "correlation_fluctuation",
        &result.fluctuation,
        cfg.wants("csv"),
        cfg.wants("pgm"),
    )?);

    if cfg.wants("json") {
        output::write_json(
            dir,
            "results.json",
            &json!({
                "command": "classical",
                "config": cfg,
                "diagnostics": {
                    "realizations": result.realizations,
                    "total_mean_power": result.mean_intensity.iter().sum::<f64>(),
                    "correlation_sum": result.correlation.total(),
                    "mapped_interaction": 2.0 * cfg.gamma * cfg.input_power,
                },
                "outputs": records,
            }),
        )?;
    }
    Ok(())
}

fn quantum_fluctuation(cfg: &RunConfig, interaction: f64) -> Result<CorrelationMatrix, CliError> {
    let spec = lattice_spec(cfg, interaction)?;
    let basis = core::build_basis(&spec)?;
    let h = core::build_hamiltonian(&spec, &basis)?;
    let init = core::initial_state(cfg.parse_initial().map_err(bad_key)?, &basis)?;
    let out = core::evolve(&init, &h, &EvolutionSpec::new(cfg.time))?;
    let density = core::density(&out);
    let gamma = core::correlation(&out);
    Ok(core::correlation_fluctuation(&gamma, &density)?)
}

fn compare(cfg: &RunConfig) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for &u_map in &cfg.u_sweep {
        let quantum = quantum_fluctuation(cfg, u_map)?;
        let gamma = u_map / (2.0 * cfg.input_power);
        let ensemble = core::thermal_ensemble_correlation(&ensemble_spec(cfg, gamma)?)?;
        let distance = core::quantum_classical_distance(&ensemble.fluctuation, &quantum)?;
        rows.push((u_map, gamma, distance));
    }
    let non_decreasing = rows.windows(2).all(|w| w[1].2 >= w[0].2);

    let dir = cfg.output.as_path();
    let mut records: Vec<OutputRecord> = Vec::new();
    if cfg.wants("csv") {
        let mut body = String::from("u_map,gamma,distance\n");
        for (u, g, d) in &rows {
            use std::fmt::Write;
            let _ = writeln!(body, "{u},{g},{d}");
        }
        output::write_text(dir, "distances.csv", &body)?;
        records.push(OutputRecord { file: "distances.csv".into(), min: None, max: None });
    }
    if cfg.wants("json") {
        output::write_json(
            dir,
            "results.json",
            &json!({
                "command": "compare",
                "config": cfg,
                "diagnostics": {
                    "distances": rows.iter().map(|(u, g, d)| json!({
                        "u_map": u, "gamma": g, "distance": d
                    })).collect::<Vec<_>>(),
                    "non_decreasing": non_decreasing,
                },
                "outputs": records,
            }),
        )?;
    }
    Ok(())
}

fn reference(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = lattice_spec(cfg, 0.0)?;
    let inputs = cfg.input_sites().map_err(bad_key)?;
    let dir = cfg.output.as_path();
    let mut records: Vec<OutputRecord> = Vec::new();

    if cfg.model == "single" {
        let site = inputs.0;
        let g = core::single_particle_propagator(&spec, cfg.time)?;
        let profile: Vec<f64> = (0..cfg.sites).map(|q| g.intensity(q, site)).collect();
        if cfg.wants("csv") {
            output::write_text(dir, "density.csv", &output::column_csv("density", &profile))?;
            records.push(OutputRecord { file: "density.csv".into(), min: None, max: None });
        }
        if cfg.time_steps > 1 {
            let mut times = Vec::new();
            let mut rows = Vec::new();
            for k in 0..cfg.time_steps {
                let t = cfg.time * k as f64 / (cfg.time_steps - 1) as f64;
                let gt = core::single_particle_propagator(&spec, t)?;
                times.push(t);
                rows.push((0..cfg.sites).map(|q| gt.intensity(q, site)).collect::<Vec<_>>());
            }
            if cfg.wants("csv") {
                output::write_text(
                    dir,
                    "density_evolution.csv",
                    &output::evolution_csv(&times, &rows),
                )?;
                records.push(OutputRecord { file: "density_evolution.csv".into(), min: None, max: None });
            }
            if cfg.wants("pgm") {
                let mut data = nalgebra::DMatrix::zeros(rows.len(), cfg.sites);
                for (r, row) in rows.iter().enumerate() {
                    for (c, v) in row.iter().enumerate() {
                        data[(r, c)] = *v;
                    }
                }
                let max = data.iter().copied().fold(0.0_f64, f64::max);
                records.push(output::write_pgm(dir, "density_evolution.pgm", &data, 0.0, max)?);
            }
        }
        if cfg.wants("json") {
            output::write_json(
                dir,
                "results.json",
                &json!({
                    "command": "reference",
                    "config": cfg,
                    "diagnostics": {
                        "model": "single",
                        "input_site": site,
                        "density_sum": profile.iter().sum::<f64>(),
                        "unitarity_defect": g.unitarity_defect(),
                    },
                    "outputs": records,
                }),
            )?;
        }
        return Ok(());
    }

    let matrix = match cfg.model.as_str() {
        "boson" => core::boson_correlation_u0(&spec, inputs, cfg.time)?,
        "fermion" => core::fermion_correlation(&spec, inputs, cfg.time)?,
        "hardcore" => core::hardcore_evolve(&spec, inputs, cfg.time)?,
        other => return Err(bad_key(format!("model: unknown reference model '{other}'"))),
    };
    let bunching = core::bunching_ratio(&matrix, cfg.effective_window())?;
    records.extend(output::emit_matrix(
        dir,
        "correlation",
        &matrix,
        cfg.wants("csv"),
        cfg.wants("pgm"),
    )?);
    if cfg.wants("json") {
        output::write_json(
            dir,
            "results.json",
            &json!({
                "command": "reference",
                "config": cfg,
                "diagnostics": {
                    "model": cfg.model,
                    "inputs": [inputs.0, inputs.1],
                    "correlation_sum": matrix.total(),
                    "correlation_sum_residual": (matrix.total() - 2.0).abs(),
                    "diagonal_correlation_weight": matrix.diagonal_weight(),
                    "bunching_ratio": finite_or_none(bunching),
                    "bunching_window": cfg.effective_window(),
                },
                "outputs": records,
            }),
        )?;
    }
    Ok(())
}
