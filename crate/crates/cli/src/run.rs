use std::fs;
use std::path::{Path, PathBuf};

use ncqosc_core::energy::{energy_general, reality_window, RealityWindow};
use ncqosc_core::ep::EpCurve;
use ncqosc_core::nc::NcPair;
use ncqosc_core::phase::phase_series;
use ncqosc_core::{catalog, CaseId, Error, Scenario};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::LoadedConfig;
use crate::csvout::{cell, write_csv, Provenance};
use crate::CliError;

const UNITS: &str = "hbar = 1; t shares the time unit of 1/Gamma; energies in the unit of omega0";

/// Evenly spaced times on `[0, t_max]`; a single node when `t_max = 0`.
pub fn time_grid(t_max: f64, samples: usize) -> Result<Vec<f64>, CliError> {
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(CliError::Config(format!("--t-max must be a finite non-negative number, got {t_max}")));
    }
    if t_max == 0.0 {
        return Ok(vec![0.0]);
    }
    if samples < 2 {
        return Err(CliError::Config(format!("--samples must be at least 2, got {samples}")));
    }
    Ok((0..samples).map(|i| t_max * i as f64 / (samples - 1) as f64).collect())
}

#[derive(Serialize)]
struct Diagnostics<'a> {
    case: &'a str,
    t: f64,
    message: String,
    window: &'a RealityWindow,
    window_text: String,
}

fn window_violation(out: &Path, case: CaseId, t: f64, window: &RealityWindow) -> CliError {
    let message = format!("{case}: t = {t} lies outside the reality window {window}");
    let diag = Diagnostics {
        case: case.as_str(),
        t,
        message: message.clone(),
        window,
        window_text: window.to_string(),
    };
    let path = out.join("diagnostics.json");
    let written = fs::create_dir_all(out)
        .and_then(|_| fs::write(&path, serde_json::to_string_pretty(&diag).expect("diagnostics serialise") + "\n"));
    match written {
        Ok(()) => CliError::Window(format!("{message} (details in {})", path.display())),
        Err(e) => CliError::Window(format!("{message} (could not write {}: {e})", path.display())),
    }
}

fn core(case: CaseId, t: f64) -> impl Fn(Error) -> CliError {
    move |e| match e {
        Error::Config(_) | Error::UnknownCase(_) | Error::InvalidParameter { .. } | Error::ConstraintViolated { .. } => {
            CliError::Config(format!("{case}: {e}"))
        }
        other => CliError::Numeric(format!("{case} at t = {t}: {other}")),
    }
}

/// Scenario for a case, with constraint and parameter errors reported as
/// config errors.
pub fn scenario(cfg: &LoadedConfig, case: CaseId) -> Result<Scenario, CliError> {
    catalog(case, &cfg.params).map_err(core(case, 0.0))
}

/// Writes `energy.csv`, `phase.csv`, `ncparams.csv` and `rho.csv` into `out`.
pub fn run_case(cfg: &LoadedConfig, case: CaseId, grid: &[f64], out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let s = scenario(cfg, case)?;
    let window = reality_window(&s);
    if let Some(&t) = grid.iter().find(|&&t| !window.contains(t)) {
        return Err(window_violation(out, case, t, &window));
    }
    let (n, m) = (s.params.n, s.params.m);
    let l = i64::from(m) - i64::from(n);
    let gamma = s.params.gamma;
    let w0 = s.params.omega0;

    let mut energy = Vec::with_capacity(grid.len());
    let mut nc = Vec::with_capacity(grid.len());
    let mut rho = Vec::with_capacity(grid.len());
    let pair = NcPair::new(&s);
    for &t in grid {
        let e = energy_general(&s, n, m, t).map_err(core(case, t))?;
        energy.push(vec![cell(Some(t)), cell(Some(gamma * t)), cell(Some(e)), cell(Some(e / w0))]);
        let p = pair.at(t).map_err(core(case, t))?;
        nc.push(
            [t, p.theta, p.omega_nc, p.c, p.c_literal, p.theta_radicand, p.omega_radicand]
                .map(|v| cell(Some(v)))
                .to_vec(),
        );
        let ep = &s.ep;
        rho.push([t, ep.rho(t), ep.rho_dot(t), ep.a(t), ep.a_dot(t), ep.b(t)].map(|v| cell(Some(v))).to_vec());
    }
    let ph = phase_series(&s, n, l, grid).map_err(core(case, grid.last().copied().unwrap_or(0.0)))?;
    let phase: Vec<Vec<String>> = (0..grid.len())
        .map(|i| {
            let closed = ph.theta_closed.as_ref().map(|c| c[i]);
            vec![
                cell(Some(grid[i])),
                cell(Some(gamma * grid[i])),
                cell(Some(ph.theta_quad[i])),
                cell(Some(ph.error[i])),
                cell(closed),
            ]
        })
        .collect();

    fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let prov = Provenance {
        config_hash: &cfg.hash,
        case: case.as_str(),
        units: UNITS,
    };
    type Table<'a> = (&'a str, &'a [&'a str], &'a [Vec<String>]);
    let files: [Table<'_>; 4] = [
        ("energy.csv", &["t", "gamma_t", "energy", "energy_over_omega0"], &energy),
        ("phase.csv", &["t", "gamma_t", "phase_quadrature", "quadrature_error", "phase_closed_form"], &phase),
        (
            "ncparams.csv",
            &["t", "theta", "omega_nc", "cross_term", "cross_term_literal", "theta_radicand", "omega_radicand"],
            &nc,
        ),
        ("rho.csv", &["t", "rho", "rho_dot", "a", "a_dot", "b"], &rho),
    ];
    let mut written = Vec::new();
    for (name, header, rows) in files {
        let path = out.join(name);
        write_csv(&path, &prov, header, rows)?;
        written.push(path);
    }
    Ok(written)
}

/// Every catalog case in parallel, each into `out/<case-id>/`. Reports the
/// first failure in catalog order after all cases finish.
pub fn sweep(cfg: &LoadedConfig, grid: &[f64], out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let results: Vec<Result<Vec<PathBuf>, CliError>> = CaseId::ALL
        .par_iter()
        .map(|&case| run_case(cfg, case, grid, &out.join(case.as_str())))
        .collect();
    let mut written = Vec::new();
    let mut first_err = None;
    for r in results {
        match r {
            Ok(files) => written.extend(files),
            Err(e) => {
                eprintln!("{e}");
                first_err.get_or_insert(e);
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok(written),
    }
}
