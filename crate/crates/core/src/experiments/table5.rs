//! Genes needed before a test's PPV reaches a multiple of background risk.

use super::{fmt_num, join_num, Command, CsvReport, Output, Settings};
use crate::error::Result;
use crate::evaluation::{genes_needed_for_ppv, GenesNeeded};
use crate::risk_math::TriGeneSpec;

pub const KEYS: &[&str] = &["prevalence", "multiplier", "allele_freq", "or_grid", "sweep_f", "f_grid"];

pub const DEFAULT_OR_GRID: [f64; 6] = [1.05, 1.10, 1.25, 1.5, 3.0, 5.0];
pub const DEFAULT_PREVALENCE: f64 = 0.10;
pub const DEFAULT_MULTIPLIER: f64 = 5.0;
pub const DEFAULT_ALLELE_FREQ: f64 = 0.10;

/// 0.05, 0.10, ..., 0.50.
pub fn default_f_grid() -> Vec<f64> {
    (1..=10).map(|k| k as f64 * 0.05).collect()
}

/// Search results for each `(f, OR)` pair, row-major in `f`.
pub fn grid(p: f64, multiplier: f64, fs: &[f64], ors: &[f64]) -> Vec<(f64, f64, Result<GenesNeeded>)> {
    fs.iter()
        .flat_map(|&f| {
            ors.iter().map(move |&or| {
                let res = TriGeneSpec::new(f, or).and_then(|s| genes_needed_for_ppv(&s, p, multiplier));
                (f, or, res)
            })
        })
        .collect()
}

pub fn run(settings: &Settings) -> Result<Output> {
    let p = settings.get_or("prevalence", DEFAULT_PREVALENCE)?;
    let multiplier = settings.get_or("multiplier", DEFAULT_MULTIPLIER)?;
    let ors = settings.list_or("or_grid", &DEFAULT_OR_GRID)?;
    let fs = if settings.flag("sweep_f")? {
        settings.list_or("f_grid", &default_f_grid())?
    } else {
        vec![settings.get_or("allele_freq", DEFAULT_ALLELE_FREQ)?]
    };

    let config = [
        ("prevalence", fmt_num(p)),
        ("multiplier", fmt_num(multiplier)),
        ("allele_freq", join_num(&fs)),
        ("or_grid", join_num(&ors)),
    ];
    let mut report = CsvReport::new(Command::Table5, &config, &["or", "f", "smallest", "largest", "note"]);
    let mut failures = Vec::new();
    for (f, or, res) in grid(p, multiplier, &fs, &ors) {
        let (a, b) = (fmt_num(or), fmt_num(f));
        match res {
            Ok(g) => report.row(&[a, b, g.smallest.to_string(), g.largest.to_string(), String::new()]),
            Err(e) => {
                // keep the CSV single-line and comma-free
                let note = e.to_string().replace([',', '\n'], ";");
                failures.push(format!("or={a} f={b}: {e}"));
                report.row(&[a, b, String::new(), String::new(), note]);
            }
        }
    }
    Ok(Output {
        csv: report.finish(),
        svg: None,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data_rows(csv: &str) -> Vec<&str> {
        csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
    }

    #[test]
    fn default_run() {
        let out = run(&Settings::new()).unwrap();
        assert!(out.succeeded());
        let rows = data_rows(&out.csv);
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[3], "1.5,0.1,4,8,");
    }

    #[test]
    fn near_trivial_multiplier() {
        let s = Settings::new().with("multiplier", "1.01").with("or_grid", "5");
        let out = run(&s).unwrap();
        assert_eq!(data_rows(&out.csv), vec!["5,0.1,1,1,"]);
    }

    #[test]
    fn sweep_blocks_and_error_rows() {
        let s = Settings::new()
            .with("sweep_f", "true")
            .with("f_grid", "0.1,0.45")
            .with("or_grid", "1.05,3");
        let out = run(&s).unwrap();
        let rows = data_rows(&out.csv);
        assert_eq!(rows.len(), 4);
        // f = 0.45, OR = 3: heterozygote ratio below 1
        assert!(rows[3].starts_with("3,0.45,,,"));
        assert_eq!(out.failures.len(), 1);
    }
}
