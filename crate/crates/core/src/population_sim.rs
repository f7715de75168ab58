//! Simulated populations with known disease status and genotype profiles.
//!
//! Two procedures are provided:
//!
//! * [`simulate_janssens`]: genotypes are drawn first from Hardy-Weinberg
//!   proportions, each subject's posterior risk is computed from the product
//!   of genotype likelihood ratios, and disease status is then drawn by
//!   comparing the risk with a uniform variate. The observed prevalence
//!   drifts below the configured one as the number of genes grows.
//! * [`simulate_revised`]: disease status is fixed first (exactly
//!   `round(N p)` cases), then each gene's genotypes are drawn without
//!   replacement from per-group pools whose composition is the solved
//!   genotype table. Risk is computed afterwards as a prediction.
//!
//! Both are single-threaded and fully determined by `SimParams::seed`.
//!
//! Random stream order (part of the reproducibility contract):
//! Janssens draws one Fisher-Yates shuffle per gene in gene order, then one
//! uniform per subject in subject order. Revised draws, per gene in gene
//! order, a shuffle of the case pool followed by a shuffle of the control
//! pool.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::risk_math::{self, BinaryGeneSpec, GenotypeTable, TriGeneSpec};
use crate::rng::SimRng;

pub const DEFAULT_SUBJECTS: usize = 100_000;
pub const MAX_GENES: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Procedure {
    Janssens,
    Revised,
    /// Binary carrier model with status fixed first (case-control source).
    BinaryStatusFirst,
}

impl Procedure {
    pub fn name(&self) -> &'static str {
        match self {
            Procedure::Janssens => "janssens",
            Procedure::Revised => "revised",
            Procedure::BinaryStatusFirst => "binary_status_first",
        }
    }
}

impl fmt::Display for Procedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Procedure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "janssens" => Ok(Procedure::Janssens),
            "revised" => Ok(Procedure::Revised),
            "binary_status_first" => Ok(Procedure::BinaryStatusFirst),
            other => Err(Error::Usage(format!(
                "unknown procedure '{other}' (expected janssens or revised)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub n_subjects: usize,
    pub prevalence: f64,
    pub genes: Vec<TriGeneSpec>,
    pub seed: u64,
}

impl SimParams {
    /// `m` identical genes.
    pub fn uniform(
        n_subjects: usize,
        prevalence: f64,
        allele_freq: f64,
        or_het: f64,
        m: usize,
        seed: u64,
    ) -> Result<Self> {
        let params = Self {
            n_subjects,
            prevalence,
            genes: vec![TriGeneSpec::new(allele_freq, or_het)?; m],
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_subjects == 0 {
            return Err(Error::Domain("population needs at least one subject".into()));
        }
        if self.genes.is_empty() || self.genes.len() > MAX_GENES {
            return Err(Error::Domain(format!(
                "gene count must be in 1..={MAX_GENES}, got {}",
                self.genes.len()
            )));
        }
        if !(self.prevalence > 0.0 && self.prevalence < 1.0) {
            return Err(Error::Domain(format!(
                "prevalence must lie in (0, 1), got {}",
                self.prevalence
            )));
        }
        let cases = self.n_cases();
        if cases < 1 || cases > self.n_subjects - 1 {
            return Err(Error::Domain(format!(
                "round(N p) = {cases} leaves an empty disease group (N = {})",
                self.n_subjects
            )));
        }
        for g in &self.genes {
            g.validate()?;
        }
        Ok(())
    }

    pub fn n_cases(&self) -> usize {
        expected_cases(self.n_subjects, self.prevalence)
    }
}

pub(crate) fn expected_cases(n: usize, p: f64) -> usize {
    (n as f64 * p).round() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum GeneParams {
    Genotype(TriGeneSpec),
    Binary(BinaryGeneSpec),
}

/// Everything needed to regenerate or describe a population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationMeta {
    pub procedure: Procedure,
    pub n_subjects: usize,
    pub prevalence: f64,
    pub seed: u64,
    pub genes: Vec<GeneParams>,
    /// Non-fatal notes, e.g. pool cells that rounded to zero.
    pub warnings: Vec<String>,
}

/// Genotype matrix, disease status and risk of a simulated population.
///
/// Genotype codes are 0 = ee, 1 = Ee, 2 = EE for the three-genotype model and
/// 0/1 (non-carrier/carrier) for the binary model. Storage is gene-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    n_subjects: usize,
    n_genes: usize,
    genotypes: Vec<u8>,
    pub status: Vec<u8>,
    pub risk: Option<Vec<f64>>,
    pub meta: PopulationMeta,
}

impl Population {
    pub fn new(
        n_subjects: usize,
        n_genes: usize,
        genotypes: Vec<u8>,
        status: Vec<u8>,
        risk: Option<Vec<f64>>,
        meta: PopulationMeta,
    ) -> Result<Self> {
        let pop = Self {
            n_subjects,
            n_genes,
            genotypes,
            status,
            risk,
            meta,
        };
        pop.validate()?;
        Ok(pop)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parse(msg));
        if self.genotypes.len() != self.n_subjects * self.n_genes {
            return bad(format!(
                "genotype matrix has {} entries, expected {} x {}",
                self.genotypes.len(),
                self.n_subjects,
                self.n_genes
            ));
        }
        if self.status.len() != self.n_subjects {
            return bad(format!("status has {} entries", self.status.len()));
        }
        if self.status.iter().any(|&s| s > 1) {
            return bad("status entries must be 0 or 1".into());
        }
        if self.genotypes.iter().any(|&g| g > 2) {
            return bad("genotype codes must be 0, 1 or 2".into());
        }
        if let Some(risk) = &self.risk {
            if risk.len() != self.n_subjects {
                return bad(format!("risk has {} entries", risk.len()));
            }
            if risk.iter().any(|r| !(0.0..=1.0).contains(r)) {
                return bad("risk entries must lie in [0, 1]".into());
            }
        }
        if self.meta.genes.len() != self.n_genes {
            return bad("metadata gene list does not match the matrix".into());
        }
        Ok(())
    }

    pub fn n_subjects(&self) -> usize {
        self.n_subjects
    }

    pub fn n_genes(&self) -> usize {
        self.n_genes
    }

    pub fn genotype(&self, subject: usize, gene: usize) -> u8 {
        self.genotypes[gene * self.n_subjects + subject]
    }

    pub fn gene_column(&self, gene: usize) -> &[u8] {
        &self.genotypes[gene * self.n_subjects..(gene + 1) * self.n_subjects]
    }

    pub fn profile(&self, subject: usize) -> Vec<u8> {
        (0..self.n_genes).map(|g| self.genotype(subject, g)).collect()
    }

    pub fn n_cases(&self) -> usize {
        self.status.iter().map(|&s| s as usize).sum()
    }

    pub fn observed_prevalence(&self) -> f64 {
        self.n_cases() as f64 / self.n_subjects as f64
    }

    pub fn risk_or_err(&self) -> Result<&[f64]> {
        self.risk
            .as_deref()
            .ok_or_else(|| Error::Usage("population carries no risk column".into()))
    }
}

/// Integer genotype counts for one gene, per disease group, indexed by code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenotypePool {
    pub diseased: [usize; 3],
    pub healthy: [usize; 3],
}

impl GenotypePool {
    /// Integerize the table's two columns to exact group totals.
    pub fn from_table(
        table: &GenotypeTable,
        n_cases: usize,
        n_controls: usize,
    ) -> (Self, Vec<String>) {
        let mut warnings = Vec::new();
        let diseased_exp = table.diseased_by_code();
        let healthy_exp = table.healthy_by_code();
        let diseased = largest_remainder(&diseased_exp, n_cases);
        let healthy = largest_remainder(&healthy_exp, n_controls);
        for (group, exp, got) in [
            ("diseased", diseased_exp, &diseased),
            ("non-diseased", healthy_exp, &healthy),
        ] {
            for code in 0..3 {
                if exp[code] > 0.0 && got[code] == 0 {
                    warnings.push(format!(
                        "{group} pool: genotype {} has expected share {:.3e} but rounds to 0",
                        GENOTYPE_NAMES[code],
                        exp[code] / table.n
                    ));
                }
            }
        }
        (
            Self {
                diseased: to_array(&diseased),
                healthy: to_array(&healthy),
            },
            warnings,
        )
    }
}

const GENOTYPE_NAMES: [&str; 3] = ["ee", "Ee", "EE"];

fn to_array(v: &[usize]) -> [usize; 3] {
    [v[0], v[1], v[2]]
}

/// Integer counts proportional to `weights` that sum exactly to `total`.
///
/// Each weight is scaled to `total`, floored, and the remaining units go to
/// the largest fractional parts (ties to the lower index).
pub fn largest_remainder(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if weights.is_empty() {
        return Vec::new();
    }
    if !(sum > 0.0) {
        let mut out = vec![0; weights.len()];
        out[0] = total;
        return out;
    }
    let scaled: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = scaled.iter().map(|s| s.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&i, &j| {
        let fi = scaled[i] - scaled[i].floor();
        let fj = scaled[j] - scaled[j].floor();
        fj.total_cmp(&fi).then(i.cmp(&j))
    });
    if assigned <= total {
        for &i in order.iter().cycle().take(total - assigned) {
            counts[i] += 1;
        }
    } else {
        // floating error pushed the floors over the total
        let mut excess = assigned - total;
        for &i in order.iter().rev() {
            while excess > 0 && counts[i] > 0 {
                counts[i] -= 1;
                excess -= 1;
            }
        }
    }
    counts
}

/// Log likelihood ratios by genotype code for each gene.
fn log_lr_tables(params: &SimParams) -> Result<Vec<[f64; 3]>> {
    params
        .genes
        .iter()
        .map(|g| {
            let lrs = risk_math::gene_lrs(g, params.prevalence)?;
            Ok(lrs.by_code().map(f64::ln))
        })
        .collect()
}

fn fill_pool(out: &mut Vec<u8>, counts: &[usize; 3]) {
    for (code, &k) in counts.iter().enumerate() {
        out.extend(std::iter::repeat_n(code as u8, k));
    }
}

fn risks_from_log_lr(log_lr: &[f64], prior: f64) -> Vec<f64> {
    log_lr
        .iter()
        .map(|&s| risk_math::posterior_from_log_lr(s, prior))
        .collect()
}

fn meta_for(params: &SimParams, procedure: Procedure, warnings: Vec<String>) -> PopulationMeta {
    PopulationMeta {
        procedure,
        n_subjects: params.n_subjects,
        prevalence: params.prevalence,
        seed: params.seed,
        genes: params.genes.iter().copied().map(GeneParams::Genotype).collect(),
        warnings,
    }
}

pub fn simulate_janssens(params: &SimParams) -> Result<Population> {
    params.validate()?;
    let n = params.n_subjects;
    let m = params.genes.len();
    let p = params.prevalence;
    let log_lrs = log_lr_tables(params)?;
    let mut rng = SimRng::new(params.seed);

    let mut genotypes = Vec::with_capacity(n * m);
    let mut score = vec![0.0f64; n];
    for (gene, table) in params.genes.iter().zip(&log_lrs) {
        let (ee_risk, het, nonrisk) = risk_math::hardy_weinberg(gene.allele_freq)?;
        let counts = to_array(&largest_remainder(&[nonrisk, het, ee_risk], n));
        let start = genotypes.len();
        fill_pool(&mut genotypes, &counts);
        let column = &mut genotypes[start..];
        rng.shuffle(column);
        for (s, &code) in score.iter_mut().zip(column.iter()) {
            *s += table[code as usize];
        }
    }

    let risk = risks_from_log_lr(&score, p);
    let status = risk
        .iter()
        .map(|&r| u8::from(r > rng.uniform_open()))
        .collect();

    Population::new(
        n,
        m,
        genotypes,
        status,
        Some(risk),
        meta_for(params, Procedure::Janssens, Vec::new()),
    )
}

pub fn simulate_revised(params: &SimParams) -> Result<Population> {
    params.validate()?;
    let n = params.n_subjects;
    let m = params.genes.len();
    let p = params.prevalence;
    let n_cases = params.n_cases();
    let n_controls = n - n_cases;
    let mut rng = SimRng::new(params.seed);

    let mut status = vec![0u8; n];
    status[..n_cases].fill(1);

    let mut genotypes = Vec::with_capacity(n * m);
    let mut score = vec![0.0f64; n];
    let mut warnings = Vec::new();
    for (index, gene) in params.genes.iter().enumerate() {
        let table = risk_math::solve_genotype_table(gene, p, n as f64)?;
        let lrs = risk_math::gene_lrs(gene, p)?.by_code().map(f64::ln);
        let (pool, notes) = GenotypePool::from_table(&table, n_cases, n_controls);
        warnings.extend(notes.into_iter().map(|w| format!("gene {}: {w}", index + 1)));

        let start = genotypes.len();
        fill_pool(&mut genotypes, &pool.diseased);
        rng.shuffle(&mut genotypes[start..]);
        let mid = genotypes.len();
        fill_pool(&mut genotypes, &pool.healthy);
        rng.shuffle(&mut genotypes[mid..]);

        for (s, &code) in score.iter_mut().zip(&genotypes[start..]) {
            *s += lrs[code as usize];
        }
    }

    let risk = risks_from_log_lr(&score, p);
    Population::new(
        n,
        m,
        genotypes,
        status,
        Some(risk),
        meta_for(params, Procedure::Revised, warnings),
    )
}

pub fn simulate(params: &SimParams, procedure: Procedure) -> Result<Population> {
    match procedure {
        Procedure::Janssens => simulate_janssens(params),
        Procedure::Revised => simulate_revised(params),
        Procedure::BinaryStatusFirst => Err(Error::Usage(
            "binary populations are built by case_control::simulate_binary_population".into(),
        )),
    }
}

/// Sidecar record written next to an exported population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationSidecar {
    pub tool: String,
    pub version: String,
    pub procedure: Procedure,
    pub n_subjects: usize,
    pub n_genes: usize,
    pub prevalence: f64,
    pub p_observed: f64,
    pub seed: u64,
    pub genes: Vec<GeneParams>,
    pub warnings: Vec<String>,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Write `subject_id,status,risk,g1..gM` (risk empty when absent) plus the
/// `<path>.meta.json` sidecar. Risk values use the shortest representation
/// that round-trips.
pub fn write_population(pop: &Population, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let mut header = String::from("subject_id,status,risk");
    for g in 1..=pop.n_genes {
        header.push_str(&format!(",g{g}"));
    }
    writeln!(out, "{header}")?;
    let mut line = String::new();
    for i in 0..pop.n_subjects {
        line.clear();
        line.push_str(&format!("{},{},", i + 1, pop.status[i]));
        if let Some(risk) = &pop.risk {
            line.push_str(&format!("{}", risk[i]));
        }
        for g in 0..pop.n_genes {
            line.push(',');
            line.push((b'0' + pop.genotype(i, g)) as char);
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()?;

    let sidecar = PopulationSidecar {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        procedure: pop.meta.procedure,
        n_subjects: pop.n_subjects,
        n_genes: pop.n_genes,
        prevalence: pop.meta.prevalence,
        p_observed: pop.observed_prevalence(),
        seed: pop.meta.seed,
        genes: pop.meta.genes.clone(),
        warnings: pop.meta.warnings.clone(),
    };
    let json = serde_json::to_string_pretty(&sidecar).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(sidecar_path(path), json + "\n")?;
    Ok(())
}

pub fn read_population(path: &Path) -> Result<Population> {
    let side_text = std::fs::read_to_string(sidecar_path(path))?;
    let side: PopulationSidecar =
        serde_json::from_str(&side_text).map_err(|e| Error::Parse(e.to_string()))?;

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Io(e.to_string()))?;
    let headers = reader.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let n_genes = headers.len().saturating_sub(3);
    if headers.get(0) != Some("subject_id") || n_genes != side.n_genes {
        return Err(Error::Parse(format!(
            "unexpected header in {}",
            path.display()
        )));
    }

    let n = side.n_subjects;
    let mut genotypes = vec![0u8; n * n_genes];
    let mut status = Vec::with_capacity(n);
    let mut risk = Vec::with_capacity(n);
    let mut has_risk = true;
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if i >= n {
            return Err(Error::Parse("more rows than the sidecar declares".into()));
        }
        let field = |k: usize| rec.get(k).unwrap_or("");
        status.push(parse_num::<u8>(field(1))?);
        let r = field(2);
        if r.is_empty() {
            has_risk = false;
        } else {
            risk.push(parse_num::<f64>(r)?);
        }
        for g in 0..n_genes {
            genotypes[g * n + i] = parse_num::<u8>(field(3 + g))?;
        }
    }
    if status.len() != n {
        return Err(Error::Parse(format!(
            "expected {n} rows, found {}",
            status.len()
        )));
    }
    let meta = PopulationMeta {
        procedure: side.procedure,
        n_subjects: n,
        prevalence: side.prevalence,
        seed: side.seed,
        genes: side.genes,
        warnings: side.warnings,
    };
    Population::new(n, n_genes, genotypes, status, has_risk.then_some(risk), meta)
}

fn parse_num<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad number '{s}'")))
}
