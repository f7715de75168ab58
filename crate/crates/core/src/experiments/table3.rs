//! Likelihood ratios and posteriors of multi-gene binary tests, with
//! optional case-control estimates.

use rayon::prelude::*;

use super::{fmt_num, median, Command, CsvReport, Output, Settings};
use crate::case_control::{self, LrEstimate};
use crate::error::{Error, Result};
use crate::risk_math::{self, BinaryGeneSpec};
use crate::rng::derive_replicate_seed;

pub const KEYS: &[&str] = &[
    "prevalence",
    "genes",
    "with_estimates",
    "cases",
    "controls",
    "population",
    "replicates",
    "seed",
];

/// The five reference genes as `(relative risk, carrier frequency)`.
pub const DEFAULT_GENES: [(f64, f64); 5] =
    [(1.5, 0.25), (2.0, 0.20), (2.5, 0.15), (3.0, 0.10), (3.5, 0.05)];
pub const DEFAULT_PREVALENCE: f64 = 0.05;

pub fn default_specs() -> Vec<BinaryGeneSpec> {
    DEFAULT_GENES
        .iter()
        .map(|&(r, f)| BinaryGeneSpec::new(f, r).expect("reference genes are valid"))
        .collect()
}

/// Parse `"R:f,R:f,..."`.
pub fn parse_genes(text: &str) -> Result<Vec<BinaryGeneSpec>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let bad = || Error::Usage(format!("gene '{item}' is not of the form R:f"));
            let (r, f) = item.split_once(':').ok_or_else(bad)?;
            let r: f64 = r.trim().parse().map_err(|_| bad())?;
            let f: f64 = f.trim().parse().map_err(|_| bad())?;
            BinaryGeneSpec::new(f, r)
        })
        .collect()
}

/// Gene panels reported: each gene alone, the pairs among the first three,
/// then the first `k` genes for `k = 3..=n`.
pub fn panels(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..n).map(|g| vec![g]).collect();
    let head = n.min(3);
    for i in 0..head {
        for j in i + 1..head {
            out.push(vec![i, j]);
        }
    }
    out.extend((3..=n).map(|k| (0..k).collect()));
    out
}

pub fn panel_label(panel: &[usize]) -> String {
    panel.iter().map(|g| format!("g{}", g + 1)).collect::<Vec<_>>().join("+")
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrueRow {
    pub panel: Vec<usize>,
    /// Product of the exact single-gene carrier likelihood ratios.
    pub true_lr: f64,
    pub posterior_pct: f64,
    /// Product of the single-gene ratios after rounding each to two decimals.
    pub rounded_chain_lr: f64,
}

pub fn true_rows(specs: &[BinaryGeneSpec], p: f64) -> Result<Vec<TrueRow>> {
    let lrs: Vec<f64> = specs
        .iter()
        .map(|s| risk_math::binary_gene_lrs(s, p).map(|(pos, _)| pos))
        .collect::<Result<_>>()?;
    panels(specs.len())
        .into_iter()
        .map(|panel| {
            let true_lr = risk_math::combine_lr(&panel.iter().map(|&g| lrs[g]).collect::<Vec<_>>())?;
            let rounded_chain_lr = panel
                .iter()
                .map(|&g| (lrs[g] * 100.0).round() / 100.0)
                .product();
            Ok(TrueRow {
                posterior_pct: 100.0 * risk_math::posterior_risk(true_lr, p)?,
                panel,
                true_lr,
                rounded_chain_lr,
            })
        })
        .collect()
}

/// Simulated study: a population of `population` subjects, from which
/// `cases` cases and `controls` controls are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StudyDesign {
    pub population: usize,
    pub cases: usize,
    pub controls: usize,
}

impl Default for StudyDesign {
    fn default() -> Self {
        Self {
            population: 1_000_000,
            cases: 1000,
            controls: 1000,
        }
    }
}

/// One replicate: a fresh population and sample, then a logistic fit per
/// panel evaluated at the all-carrier profile.
pub fn replicate_estimates(
    specs: &[BinaryGeneSpec],
    p: f64,
    panels: &[Vec<usize>],
    design: StudyDesign,
    seed: u64,
) -> Result<Vec<Result<LrEstimate>>> {
    let pop = case_control::simulate_binary_population(specs, p, design.population, seed)?;
    let sample =
        case_control::sample_case_control(&pop, design.cases, design.controls, derive_replicate_seed(seed, 0))?;
    Ok(panels
        .iter()
        .map(|panel| {
            let sub = sample.select_genes(panel)?;
            let fit = case_control::fit_logistic(&sub)?;
            case_control::estimate_lr(&fit, sub.n_cases, sub.n_controls, &vec![1; panel.len()])
        })
        .collect())
}

pub fn run(settings: &Settings) -> Result<Output> {
    let p = settings.get_or("prevalence", DEFAULT_PREVALENCE)?;
    let specs = match settings.raw("genes") {
        Some(text) => parse_genes(text)?,
        None => default_specs(),
    };
    if specs.is_empty() {
        return Err(Error::Usage("no genes given".into()));
    }
    let with_estimates = settings.flag("with_estimates")?;
    let defaults = StudyDesign::default();
    let design = StudyDesign {
        population: settings.get_or("population", defaults.population)?,
        cases: settings.get_or("cases", defaults.cases)?,
        controls: settings.get_or("controls", defaults.controls)?,
    };
    let replicates: usize = settings.get_or("replicates", 1)?;

    let rows = true_rows(&specs, p)?;
    let gene_text = specs
        .iter()
        .map(|s| format!("{}:{}", fmt_num(s.relative_risk), fmt_num(s.carrier_freq)))
        .collect::<Vec<_>>()
        .join(",");
    let mut config = vec![("prevalence", fmt_num(p)), ("genes", gene_text)];
    let mut columns = vec!["test_id", "genes", "true_lr", "posterior_pct", "rounded_chain_lr"];

    let mut failures = Vec::new();
    let mut estimates: Vec<Option<[f64; 3]>> = vec![None; rows.len()];
    if with_estimates {
        if replicates == 0 {
            return Err(Error::Usage("replicates must be at least 1".into()));
        }
        let seed = settings.seed()?;
        config.extend([
            ("with_estimates", "true".to_string()),
            ("population", design.population.to_string()),
            ("cases", design.cases.to_string()),
            ("controls", design.controls.to_string()),
            ("replicates", replicates.to_string()),
            ("seed", seed.to_string()),
            ("interval", "wald 95% on ln LR; median over replicates".to_string()),
        ]);
        columns.extend(["estimated_lr", "ci_low", "ci_high", "replicates"]);

        let all_panels: Vec<Vec<usize>> = rows.iter().map(|r| r.panel.clone()).collect();
        let per_replicate: Vec<Result<Vec<Result<LrEstimate>>>> = (0..replicates as u64)
            .into_par_iter()
            .map(|k| replicate_estimates(&specs, p, &all_panels, design, derive_replicate_seed(seed, k)))
            .collect();
        let mut collected: Vec<Vec<LrEstimate>> = vec![Vec::new(); rows.len()];
        for (k, rep) in per_replicate.into_iter().enumerate() {
            match rep {
                Err(e) => failures.push(format!("replicate {k}: {e}")),
                Ok(list) => {
                    for (i, est) in list.into_iter().enumerate() {
                        match est {
                            Ok(e) => collected[i].push(e),
                            Err(e) => failures.push(format!(
                                "{} replicate {k}: {e}",
                                panel_label(&rows[i].panel)
                            )),
                        }
                    }
                }
            }
        }
        for (slot, ests) in estimates.iter_mut().zip(&collected) {
            if !ests.is_empty() {
                let pick = |f: fn(&LrEstimate) -> f64| median(&mut ests.iter().map(f).collect::<Vec<_>>());
                *slot = Some([pick(|e| e.lr), pick(|e| e.ci_low), pick(|e| e.ci_high)]);
            }
        }
        let mut report = CsvReport::new(Command::Table3, &config, &columns);
        for (i, (row, est)) in rows.iter().zip(&estimates).enumerate() {
            let mut cells = base_cells(i, row);
            match est {
                Some(v) => cells.extend(v.iter().map(|&x| fmt_num(x))),
                None => cells.extend(std::iter::repeat_n(String::new(), 3)),
            }
            cells.push(collected[i].len().to_string());
            report.row(&cells);
        }
        return Ok(Output {
            csv: report.finish(),
            svg: None,
            failures,
        });
    }

    let mut report = CsvReport::new(Command::Table3, &config, &columns);
    for (i, row) in rows.iter().enumerate() {
        report.row(&base_cells(i, row));
    }
    Ok(Output {
        csv: report.finish(),
        svg: None,
        failures,
    })
}

fn base_cells(index: usize, row: &TrueRow) -> Vec<String> {
    vec![
        (index + 1).to_string(),
        panel_label(&row.panel),
        fmt_num(row.true_lr),
        fmt_num(row.posterior_pct),
        fmt_num(row.rounded_chain_lr),
    ]
}
