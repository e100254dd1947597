use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use ncqosc_core::energy::{energy_general, reality_window};
use ncqosc_core::{CaseId, Scenario, ScenarioParams};
use rayon::prelude::*;

use crate::config::LoadedConfig;
use crate::csvout::{cell, write_csv, Provenance};
use crate::run::scenario;
use crate::svg::{line_plot, Series};
use crate::CliError;

const SAMPLES: usize = 201;
const GAMMA_T_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
}

struct Curve {
    name: String,
    case: CaseId,
    zero_field: bool,
}

impl Figure {
    fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
        }
    }

    fn params(self) -> ScenarioParams {
        match self {
            Figure::Fig1 => ScenarioParams::fig1(),
            Figure::Fig2 => ScenarioParams::fig2(),
        }
    }

    fn curves(self) -> Vec<Curve> {
        let with = |case: CaseId| Curve {
            name: case.as_str().to_string(),
            case,
            zero_field: false,
        };
        let without = |case: CaseId, name: &str| Curve {
            name: name.to_string(),
            case,
            zero_field: true,
        };
        match self {
            // with B = 0 cases I–III coincide, so one reference curve serves all three
            Figure::Fig1 => vec![
                with(CaseId::Set1Case1),
                with(CaseId::Set1Case2),
                with(CaseId::Set1Case3),
                with(CaseId::Set1Case4),
                without(CaseId::Set1Case1, "set1-case1..3 B=0"),
                without(CaseId::Set1Case4, "set1-case4 B=0"),
            ],
            Figure::Fig2 => vec![
                with(CaseId::Set2Case1),
                with(CaseId::Set2Case2),
                without(CaseId::Set2Case1, "set2-case1 B=0"),
                without(CaseId::Set2Case2, "set2-case2 B=0"),
            ],
        }
    }
}

/// `E/ω₀` on the `Γt` grid; `None` outside the reality window.
fn scaled_energy(s: &Scenario, gamma_t: &[f64]) -> Result<Vec<Option<f64>>, CliError> {
    let window = reality_window(s);
    let p = &s.params;
    gamma_t
        .iter()
        .map(|&gt| {
            let t = gt / p.gamma;
            if !window.contains(t) {
                return Ok(None);
            }
            energy_general(s, p.n, p.m, t)
                .map(|e| Some(e / p.omega0))
                .map_err(|e| CliError::Numeric(format!("{} at t = {t}: {e}", s.label())))
        })
        .collect()
}

/// Writes `<fig>.csv` (authoritative) and `<fig>.svg` into `out`.
pub fn figure(which: Figure, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let cfg = LoadedConfig::from_params(which.params(), None);
    let gamma_t: Vec<f64> = (0..SAMPLES).map(|i| GAMMA_T_MAX * i as f64 / (SAMPLES - 1) as f64).collect();
    let curves = which.curves();
    let values: Vec<Vec<Option<f64>>> = curves
        .par_iter()
        .map(|c| {
            let mut s = scenario(&cfg, c.case)?;
            if c.zero_field {
                s = s.with_b0(0.0).map_err(|e| CliError::Numeric(format!("{}: {e}", c.name)))?;
            }
            scaled_energy(&s, &gamma_t)
        })
        .collect::<Result<_, _>>()?;

    fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let mut header = vec!["gamma_t".to_string()];
    header.extend(curves.iter().map(|c| format!("{} E/omega0", c.name)));
    let rows: Vec<Vec<String>> = gamma_t
        .iter()
        .enumerate()
        .map(|(i, &gt)| std::iter::once(cell(Some(gt))).chain(values.iter().map(|v| cell(v[i]))).collect())
        .collect();
    let case_list = CaseId::ALL
        .iter()
        .filter(|id| curves.iter().any(|c| c.case == **id))
        .map(|id| id.as_str())
        .collect::<Vec<_>>()
        .join(",");
    let csv_path = out.join(format!("{}.csv", which.name()));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(
        &csv_path,
        &Provenance {
            config_hash: &cfg.hash,
            case: &case_list,
            units: "hbar = 1; scaled energy E/omega0 against Gamma t",
        },
        &header_refs,
        &rows,
    )?;

    let series: Vec<Series> = curves
        .iter()
        .zip(&values)
        .map(|(c, v)| Series {
            name: c.name.clone(),
            dashed: c.zero_field,
            points: gamma_t.iter().copied().zip(v.iter().copied()).collect(),
        })
        .collect();
    let title = match which {
        Figure::Fig1 => "Exponential family: scaled energy, B0 = 1e2",
        Figure::Fig2 => "Rational family: scaled energy, B0 = 1e20",
    };
    let svg_path = out.join(format!("{}.svg", which.name()));
    fs::write(&svg_path, line_plot(title, "Gamma t", "E / omega0", &series))
        .map_err(|e| CliError::Io(format!("{}: {e}", svg_path.display())))?;
    Ok(vec![csv_path, svg_path])
}
