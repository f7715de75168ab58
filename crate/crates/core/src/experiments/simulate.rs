//! Simulate one population and export it.

use std::path::Path;

use super::{fmt_num, Command, CsvReport, Output, Settings};
use crate::error::{Error, Result};
use crate::population_sim::{self, sidecar_path, Procedure, SimParams, DEFAULT_SUBJECTS};

pub const KEYS: &[&str] = &["procedure", "subjects", "prevalence", "allele_freq", "or", "m", "seed"];

/// Writes the population to `out` (plus its `.meta.json` sidecar) and
/// returns a one-row summary.
pub fn run(settings: &Settings) -> Result<Output> {
    let out = settings
        .raw("out")
        .ok_or_else(|| Error::Usage("simulate needs --out <population file>".into()))?;
    let procedure: Procedure = match settings.raw("procedure").unwrap_or("revised") {
        p @ ("janssens" | "revised") => p.parse()?,
        other => return Err(Error::Usage(format!("procedure must be janssens or revised, got '{other}'"))),
    };
    let params = SimParams::uniform(
        settings.get_or("subjects", DEFAULT_SUBJECTS)?,
        settings.get_or("prevalence", 0.1)?,
        settings.get_or("allele_freq", 0.1)?,
        settings.get_or("or", 1.5)?,
        settings.get_or("m", 10)?,
        settings.seed()?,
    )?;
    let pop = population_sim::simulate(&params, procedure)?;
    let path = Path::new(out);
    population_sim::write_population(&pop, path)?;

    let gene = &params.genes[0];
    let config = [
        ("procedure", procedure.to_string()),
        ("subjects", params.n_subjects.to_string()),
        ("prevalence", fmt_num(params.prevalence)),
        ("allele_freq", fmt_num(gene.allele_freq)),
        ("or", fmt_num(gene.or_het)),
        ("m", params.genes.len().to_string()),
        ("seed", params.seed.to_string()),
    ];
    let mut report = CsvReport::new(
        Command::Simulate,
        &config,
        &["population", "sidecar", "n_cases", "p_observed", "warnings"],
    );
    report.row(&[
        out.to_string(),
        sidecar_path(path).display().to_string(),
        pop.n_cases().to_string(),
        fmt_num(pop.observed_prevalence()),
        pop.meta.warnings.len().to_string(),
    ]);
    Ok(Output {
        csv: report.finish(),
        svg: None,
        failures: Vec::new(),
    })
}
