//! Observed prevalence as the number of genes grows.
//!
//! Under the risk-first procedure the realized fraction diseased falls below
//! the configured prevalence as genes are added; the status-first procedure
//! holds it at `round(N p) / N` by construction.

use rayon::prelude::*;

use super::{fmt_num, join, join_num, mean_sd, procedures, Command, CsvReport, Output, Settings};
use crate::error::{Error, Result};
use crate::population_sim::{simulate, Procedure, SimParams, DEFAULT_SUBJECTS};
use crate::rng::derive_replicate_seed;

pub const KEYS: &[&str] = &[
    "prevalence",
    "allele_freq",
    "or",
    "m_grid",
    "subjects",
    "replicates",
    "procedure",
    "seed",
    "sweep",
    "f_grid",
    "or_grid",
    "reference",
    "tolerance",
];

pub const DEFAULT_M_GRID: [usize; 3] = [100, 200, 400];
/// Reported prevalence at M = 100, 200, 400 for a configured 0.3.
pub const REFERENCE: [f64; 3] = [0.26, 0.22, 0.17];
pub const DEFAULT_SWEEP_F: [f64; 6] = [0.05, 0.1, 0.15, 0.2, 0.3, 0.4];
pub const DEFAULT_SWEEP_OR: [f64; 4] = [1.25, 1.5, 2.0, 3.0];

/// Model and study size shared by every cell of a drift run.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftSetup {
    pub subjects: usize,
    pub prevalence: f64,
    pub m_grid: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
}

/// Observed prevalence per replicate for each M (outer index), using the
/// same replicate seeds for every M.
pub fn observed(setup: &DriftSetup, procedure: Procedure, f: f64, or: f64) -> Result<Vec<Vec<f64>>> {
    let tasks: Vec<(usize, u64)> = setup
        .m_grid
        .iter()
        .flat_map(|&m| (0..setup.replicates as u64).map(move |k| (m, k)))
        .collect();
    let flat: Vec<f64> = tasks
        .par_iter()
        .map(|&(m, k)| {
            let seed = derive_replicate_seed(setup.seed, k);
            let params = SimParams::uniform(setup.subjects, setup.prevalence, f, or, m, seed)?;
            Ok(simulate(&params, procedure)?.observed_prevalence())
        })
        .collect::<Result<_>>()?;
    Ok(flat.chunks(setup.replicates).map(<[f64]>::to_vec).collect())
}

pub fn mean_observed(setup: &DriftSetup, procedure: Procedure, f: f64, or: f64) -> Result<Vec<f64>> {
    Ok(observed(setup, procedure, f, or)?
        .iter()
        .map(|reps| mean_sd(reps).0)
        .collect())
}

fn setup_from(settings: &Settings) -> Result<DriftSetup> {
    let setup = DriftSetup {
        subjects: settings.get_or("subjects", DEFAULT_SUBJECTS)?,
        prevalence: settings.get_or("prevalence", 0.3)?,
        m_grid: settings.list_or("m_grid", &DEFAULT_M_GRID)?,
        replicates: settings.get_or("replicates", 20)?,
        seed: settings.seed()?,
    };
    if setup.replicates == 0 {
        return Err(Error::Usage("replicates must be at least 1".into()));
    }
    Ok(setup)
}

fn setup_config(setup: &DriftSetup) -> Vec<(&'static str, String)> {
    vec![
        ("prevalence", fmt_num(setup.prevalence)),
        ("m_grid", join(&setup.m_grid)),
        ("subjects", setup.subjects.to_string()),
        ("replicates", setup.replicates.to_string()),
        ("seed", setup.seed.to_string()),
    ]
}

pub fn run(settings: &Settings) -> Result<Output> {
    if settings.flag("sweep")? {
        return run_sweep(settings);
    }
    let setup = setup_from(settings)?;
    let f = settings.get_or("allele_freq", 0.2)?;
    let or = settings.get_or("or", 1.5)?;
    let procs = procedures(settings, "both")?;

    let mut config = setup_config(&setup);
    config.extend([
        ("allele_freq", fmt_num(f)),
        ("or", fmt_num(or)),
        ("procedure", join(&procs)),
    ]);
    let columns = ["procedure", "m", "replicate", "p_target", "p_observed"];
    let mut report = CsvReport::new(Command::Drift, &config, &columns);
    let p_target = fmt_num(setup.prevalence);
    for &procedure in &procs {
        let per_m = observed(&setup, procedure, f, or)?;
        for (&m, reps) in setup.m_grid.iter().zip(&per_m) {
            let lead = [procedure.to_string(), m.to_string()];
            for (k, &p) in reps.iter().enumerate() {
                report.row(&[&lead[..], &[k.to_string(), p_target.clone(), fmt_num(p)]].concat());
            }
            let (mean, sd) = mean_sd(reps);
            report.row(&[&lead[..], &["mean".into(), p_target.clone(), fmt_num(mean)]].concat());
            report.row(&[&lead[..], &["sd".into(), p_target.clone(), fmt_num(sd)]].concat());
        }
    }
    Ok(Output {
        csv: report.finish(),
        svg: None,
        failures: Vec::new(),
    })
}

/// Risk-first procedure over an `(f, OR)` grid, comparing mean observed
/// prevalence per M against a reference curve.
fn run_sweep(settings: &Settings) -> Result<Output> {
    let setup = setup_from(settings)?;
    let fs = settings.list_or("f_grid", &DEFAULT_SWEEP_F)?;
    let ors = settings.list_or("or_grid", &DEFAULT_SWEEP_OR)?;
    let reference = settings.list_or("reference", &REFERENCE)?;
    let tolerance = settings.get_or("tolerance", 0.02)?;
    if reference.len() != setup.m_grid.len() {
        return Err(Error::Usage(format!(
            "reference has {} values but m_grid has {}",
            reference.len(),
            setup.m_grid.len()
        )));
    }

    let mut config = setup_config(&setup);
    config.extend([
        ("procedure", Procedure::Janssens.to_string()),
        ("f_grid", join_num(&fs)),
        ("or_grid", join_num(&ors)),
        ("reference", join_num(&reference)),
        ("tolerance", fmt_num(tolerance)),
    ]);
    let mut columns = vec!["f".to_string(), "or".to_string()];
    columns.extend(setup.m_grid.iter().map(|m| format!("p_m{m}")));
    columns.extend(["max_abs_dev".to_string(), "matches".to_string()]);
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut report = CsvReport::new(Command::Drift, &config, &column_refs);

    let mut failures = Vec::new();
    let mut matches = Vec::new();
    for &f in &fs {
        for &or in &ors {
            match mean_observed(&setup, Procedure::Janssens, f, or) {
                Ok(means) => {
                    let dev = means
                        .iter()
                        .zip(&reference)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    let hit = dev <= tolerance;
                    if hit {
                        matches.push(format!("f={} or={}", fmt_num(f), fmt_num(or)));
                    }
                    let mut cells = vec![fmt_num(f), fmt_num(or)];
                    cells.extend(means.iter().map(|&m| fmt_num(m)));
                    cells.extend([fmt_num(dev), hit.to_string()]);
                    report.row(&cells);
                }
                Err(e) => failures.push(format!("f={} or={}: {e}", fmt_num(f), fmt_num(or))),
            }
        }
    }
    if matches.is_empty() {
        report.comment(&format!("no (f, OR) in the grid matches the reference within {}", fmt_num(tolerance)));
    } else {
        report.comment(&format!("matching (f, OR): {}", matches.join("; ")));
    }
    Ok(Output {
        csv: report.finish(),
        svg: None,
        failures,
    })
}
