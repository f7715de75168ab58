//! AUC of multi-gene tests as the number of genes grows.

use rayon::prelude::*;

use super::{fmt_num, join, join_num, mean_sd, procedures, svg, Command, CsvReport, Output, Settings};
use crate::error::{Error, Result};
use crate::evaluation::roc_auc;
use crate::population_sim::{simulate, Procedure, SimParams, DEFAULT_SUBJECTS};
use crate::rng::derive_replicate_seed;

pub const KEYS: &[&str] = &[
    "prevalence",
    "allele_freq",
    "or_grid",
    "m_grid",
    "subjects",
    "replicates",
    "procedure",
    "seed",
    "svg",
];

pub const DEFAULT_OR_GRID: [f64; 5] = [1.0, 1.1, 1.25, 1.5, 2.0];
pub const DEFAULT_M_GRID: [usize; 9] = [1, 2, 5, 10, 20, 50, 100, 200, 400];

#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Config {
    pub prevalence: f64,
    pub allele_freq: f64,
    pub or_grid: Vec<f64>,
    pub m_grid: Vec<usize>,
    pub subjects: usize,
    pub replicates: usize,
    pub procedures: Vec<Procedure>,
    pub seed: u64,
}

impl Figure1Config {
    pub fn new(seed: u64) -> Self {
        Self {
            prevalence: 0.1,
            allele_freq: 0.1,
            or_grid: DEFAULT_OR_GRID.to_vec(),
            m_grid: DEFAULT_M_GRID.to_vec(),
            subjects: DEFAULT_SUBJECTS,
            replicates: 20,
            procedures: vec![Procedure::Revised],
            seed,
        }
    }

    pub fn from_settings(settings: &Settings) -> Result<Self> {
        let mut cfg = Self::new(settings.seed()?);
        cfg.prevalence = settings.get_or("prevalence", cfg.prevalence)?;
        cfg.allele_freq = settings.get_or("allele_freq", cfg.allele_freq)?;
        cfg.or_grid = settings.list_or("or_grid", &cfg.or_grid)?;
        cfg.m_grid = settings.list_or("m_grid", &cfg.m_grid)?;
        cfg.subjects = settings.get_or("subjects", cfg.subjects)?;
        cfg.replicates = settings.get_or("replicates", cfg.replicates)?;
        cfg.procedures = procedures(settings, "revised")?;
        if cfg.replicates == 0 {
            return Err(Error::Usage("replicates must be at least 1".into()));
        }
        Ok(cfg)
    }
}

/// One simulated population scored by its risk column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Replicate {
    pub seed: u64,
    pub auc: f64,
    pub p_observed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub procedure: Procedure,
    pub or: f64,
    pub m: usize,
    pub replicates: Vec<Result<Replicate>>,
}

impl Cell {
    fn ok(&self) -> Vec<Replicate> {
        self.replicates.iter().filter_map(|r| r.as_ref().ok().copied()).collect()
    }

    pub fn mean_auc(&self) -> f64 {
        mean_sd(&self.ok().iter().map(|r| r.auc).collect::<Vec<_>>()).0
    }

    pub fn mean_p_observed(&self) -> f64 {
        mean_sd(&self.ok().iter().map(|r| r.p_observed).collect::<Vec<_>>()).0
    }
}

pub fn replicate(procedure: Procedure, params: &SimParams) -> Result<Replicate> {
    let pop = simulate(params, procedure)?;
    let auc = roc_auc(pop.risk_or_err()?, &pop.status)?.auc;
    Ok(Replicate {
        seed: params.seed,
        auc,
        p_observed: pop.observed_prevalence(),
    })
}

/// Every `(procedure, OR, M)` cell. Replicate `k` uses the same derived seed
/// in every cell, so cells are compared under common random numbers.
pub fn compute(cfg: &Figure1Config) -> Vec<Cell> {
    let mut keys = Vec::new();
    for &procedure in &cfg.procedures {
        for &or in &cfg.or_grid {
            for &m in &cfg.m_grid {
                keys.push((procedure, or, m));
            }
        }
    }
    let tasks: Vec<(usize, u64)> = (0..keys.len())
        .flat_map(|c| (0..cfg.replicates as u64).map(move |k| (c, k)))
        .collect();
    let results: Vec<Result<Replicate>> = tasks
        .par_iter()
        .map(|&(c, k)| {
            let (procedure, or, m) = keys[c];
            let seed = derive_replicate_seed(cfg.seed, k);
            let params = SimParams::uniform(cfg.subjects, cfg.prevalence, cfg.allele_freq, or, m, seed)?;
            replicate(procedure, &params)
        })
        .collect();
    let mut results = results.into_iter();
    keys.into_iter()
        .map(|(procedure, or, m)| Cell {
            procedure,
            or,
            m,
            replicates: results.by_ref().take(cfg.replicates).collect(),
        })
        .collect()
}

pub fn run(settings: &Settings) -> Result<Output> {
    let cfg = Figure1Config::from_settings(settings)?;
    let cells = compute(&cfg);

    let config = [
        ("prevalence", fmt_num(cfg.prevalence)),
        ("allele_freq", fmt_num(cfg.allele_freq)),
        ("or_grid", join_num(&cfg.or_grid)),
        ("m_grid", join(&cfg.m_grid)),
        ("subjects", cfg.subjects.to_string()),
        ("replicates", cfg.replicates.to_string()),
        ("procedure", join(&cfg.procedures)),
        ("seed", cfg.seed.to_string()),
    ];
    let columns = ["procedure", "or", "m", "replicate", "seed", "auc", "p_observed"];
    let mut report = CsvReport::new(Command::Figure1, &config, &columns);
    report.comment("score = simulated risk; replicate k shares its seed across cells");
    let mut failures = Vec::new();
    for cell in &cells {
        let lead = [cell.procedure.to_string(), fmt_num(cell.or), cell.m.to_string()];
        for (k, rep) in cell.replicates.iter().enumerate() {
            match rep {
                Ok(r) => report.row(&[&lead[..], &[k.to_string(), r.seed.to_string(), fmt_num(r.auc), fmt_num(r.p_observed)]].concat()),
                Err(e) => failures.push(format!("{} or={} m={} replicate {k}: {e}", lead[0], lead[1], lead[2])),
            }
        }
        let ok = cell.ok();
        if ok.is_empty() {
            continue;
        }
        let (auc_mean, auc_sd) = mean_sd(&ok.iter().map(|r| r.auc).collect::<Vec<_>>());
        let (p_mean, p_sd) = mean_sd(&ok.iter().map(|r| r.p_observed).collect::<Vec<_>>());
        for (label, auc, p) in [("mean", auc_mean, p_mean), ("sd", auc_sd, p_sd)] {
            report.row(&[&lead[..], &[label.to_string(), String::new(), fmt_num(auc), fmt_num(p)]].concat());
        }
    }

    let svg = settings.raw("svg").map(|_| chart(&cells));
    Ok(Output {
        csv: report.finish(),
        svg,
        failures,
    })
}

fn chart(cells: &[Cell]) -> String {
    let mut series: Vec<svg::Series> = Vec::new();
    for cell in cells {
        let name = format!("{} OR={}", cell.procedure, fmt_num(cell.or));
        if series.last().map(|s| s.name != name).unwrap_or(true) {
            series.push(svg::Series {
                name,
                points: Vec::new(),
            });
        }
        if !cell.ok().is_empty() {
            series.last_mut().unwrap().points.push((cell.m as f64, cell.mean_auc()));
        }
    }
    svg::line_chart("Mean AUC by number of genes", "genes (M)", "AUC", &series, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> Figure1Config {
        Figure1Config {
            or_grid: vec![1.0, 2.0],
            m_grid: vec![1, 10],
            subjects: 5000,
            replicates: 3,
            ..Figure1Config::new(seed)
        }
    }

    #[test]
    fn neutral_genes_give_half() {
        for cell in compute(&small(4)).iter().filter(|c| c.or == 1.0) {
            assert_eq!(cell.mean_auc(), 0.5);
            assert!((cell.mean_p_observed() - 0.1).abs() < 1e-15);
        }
    }

    #[test]
    fn cells_share_replicate_seeds() {
        let cells = compute(&small(8));
        assert_eq!(cells.len(), 4);
        let seeds: Vec<u64> = cells[0].ok().iter().map(|r| r.seed).collect();
        for c in &cells {
            assert_eq!(c.ok().iter().map(|r| r.seed).collect::<Vec<_>>(), seeds);
        }
        assert!(cells[3].mean_auc() > cells[2].mean_auc());
    }

    #[test]
    fn csv_shape_and_svg() {
        let s = Settings::new()
            .with("seed", "3")
            .with("or_grid", "1.5")
            .with("m_grid", "2")
            .with("subjects", "2000")
            .with("replicates", "2")
            .with("svg", "fig.svg");
        let out = run(&s).unwrap();
        let rows: Vec<&str> = out.csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows[0], "procedure,or,m,replicate,seed,auc,p_observed");
        assert_eq!(rows.len(), 1 + 2 + 2);
        assert!(rows[3].starts_with("revised,1.5,2,mean,,"));
        assert!(out.svg.unwrap().contains("<polyline"));
    }

    #[test]
    fn seed_is_mandatory() {
        assert!(matches!(run(&Settings::new()), Err(Error::Usage(_))));
    }
}
