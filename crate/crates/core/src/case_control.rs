//! Case-control estimation of likelihood ratios.
//!
//! A binary-gene population is generated with disease status fixed first and
//! each carrier column drawn independently given status, using the exact
//! per-gene 2x2 tables. The true likelihood ratios are therefore known, while
//! the estimates below remain genuinely statistical.
//!
//! For a sample with `N_CA` cases and `N_CO` controls and a logistic fit with
//! intercept `alpha` and coefficients `beta`,
//! `ln LR(g) = ln(N_CO / N_CA) + alpha + beta . g`.
//! Intervals are Wald intervals on that linear predictor.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::population_sim::{GeneParams, Population, PopulationMeta, Procedure};
use crate::risk_math::{self, BinaryGeneSpec};
use crate::rng::SimRng;

/// IRLS stops once every gradient component is below this.
pub const GRADIENT_TOL: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 100;
/// A parameter beyond this magnitude is taken as perfect separation.
pub const SEPARATION_BOUND: f64 = 30.0;
/// Two-sided 95% normal quantile used for Wald intervals.
pub const WALD_Z: f64 = 1.96;

/// Population of `n` subjects with exactly `round(n p)` cases (listed first)
/// and one carrier column per spec.
///
/// Within each disease group, gene `i` is carried with probability
/// `a / (p n)` among cases and `b / ((1 - p) n)` among controls, taken from
/// its exact 2x2 table.
pub fn simulate_binary_population(
    specs: &[BinaryGeneSpec],
    p: f64,
    n: usize,
    seed: u64,
) -> Result<Population> {
    if specs.is_empty() {
        return Err(Error::Domain("at least one gene is required".into()));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("prevalence must lie in (0, 1), got {p}")));
    }
    let n_cases = (n as f64 * p).round() as usize;
    if n_cases == 0 || n_cases >= n {
        return Err(Error::Domain(format!(
            "round(N p) = {n_cases} leaves an empty disease group (N = {n})"
        )));
    }

    let mut rng = SimRng::new(seed);
    let mut status = vec![0u8; n];
    status[..n_cases].fill(1);

    let mut genotypes = Vec::with_capacity(n * specs.len());
    let mut score = vec![0.0f64; n];
    for spec in specs {
        let table = risk_math::solve_binary_table(spec, p, n as f64)?;
        let (lr_pos, lr_neg) = risk_math::binary_gene_lrs(spec, p)?;
        let (ln_pos, ln_neg) = (lr_pos.ln(), lr_neg.ln());
        let q_case = table.a / (p * n as f64);
        let q_control = table.b / ((1.0 - p) * n as f64);
        for (i, s) in score.iter_mut().enumerate() {
            let q = if i < n_cases { q_case } else { q_control };
            let carrier = rng.uniform_open() < q;
            genotypes.push(carrier as u8);
            *s += if carrier { ln_pos } else { ln_neg };
        }
    }

    let risk = score
        .iter()
        .map(|&s| risk_math::posterior_from_log_lr(s, p))
        .collect();
    let meta = PopulationMeta {
        procedure: Procedure::BinaryStatusFirst,
        n_subjects: n,
        prevalence: p,
        seed,
        genes: specs.iter().copied().map(GeneParams::Binary).collect(),
        warnings: Vec::new(),
    };
    Population::new(n, specs.len(), genotypes, status, Some(risk), meta)
}

/// Binary design matrix and case/control labels.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseControlSample {
    n_genes: usize,
    /// Row-major, `rows() x n_genes`.
    design: Vec<u8>,
    pub labels: Vec<u8>,
    pub n_cases: usize,
    pub n_controls: usize,
}

impl CaseControlSample {
    pub fn new(design: Vec<u8>, n_genes: usize, labels: Vec<u8>) -> Result<Self> {
        if n_genes == 0 || design.len() != labels.len() * n_genes {
            return Err(Error::Usage(format!(
                "design has {} entries; expected {} rows x {n_genes} genes",
                design.len(),
                labels.len()
            )));
        }
        if labels.iter().any(|&l| l > 1) || design.iter().any(|&g| g > 1) {
            return Err(Error::Usage("labels and design entries must be 0/1".into()));
        }
        let n_cases = labels.iter().filter(|&&l| l == 1).count();
        Ok(Self {
            n_genes,
            design,
            n_controls: labels.len() - n_cases,
            labels,
            n_cases,
        })
    }

    pub fn rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_genes(&self) -> usize {
        self.n_genes
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.design[i * self.n_genes..(i + 1) * self.n_genes]
    }

    /// The same subjects restricted to the listed gene columns.
    pub fn select_genes(&self, genes: &[usize]) -> Result<Self> {
        if let Some(&g) = genes.iter().find(|&&g| g >= self.n_genes) {
            return Err(Error::Usage(format!("gene index {g} out of range")));
        }
        let design = (0..self.rows())
            .flat_map(|i| genes.iter().map(move |&g| self.design[i * self.n_genes + g]))
            .collect();
        Self::new(design, genes.len(), self.labels.clone())
    }
}

/// Draw `n_cases` cases and `n_controls` controls uniformly without
/// replacement. Cases come first in the sample.
pub fn sample_case_control(
    pop: &Population,
    n_cases: usize,
    n_controls: usize,
    seed: u64,
) -> Result<CaseControlSample> {
    let (cases, controls): (Vec<usize>, Vec<usize>) =
        (0..pop.n_subjects()).partition(|&i| pop.status[i] == 1);
    if n_cases > cases.len() || n_controls > controls.len() {
        return Err(Error::Usage(format!(
            "requested {n_cases} cases and {n_controls} controls but the population has {} and {}",
            cases.len(),
            controls.len()
        )));
    }
    if pop.meta.genes.iter().any(|g| !matches!(g, GeneParams::Binary(_))) {
        return Err(Error::Usage("case-control sampling needs a binary-coded population".into()));
    }
    let mut rng = SimRng::new(seed);
    let chosen_cases = rng.sample_without_replacement(&cases, n_cases);
    let chosen_controls = rng.sample_without_replacement(&controls, n_controls);

    let m = pop.n_genes();
    let mut design = Vec::with_capacity((n_cases + n_controls) * m);
    for &i in chosen_cases.iter().chain(&chosen_controls) {
        design.extend((0..m).map(|g| pop.genotype(i, g)));
    }
    let mut labels = vec![1u8; n_cases];
    labels.resize(n_cases + n_controls, 0);
    CaseControlSample::new(design, m, labels)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFit {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    /// Inverse information over `(intercept, coefficients...)`.
    pub covariance: DMatrix<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl LogisticFit {
    /// `(intercept, coefficients...)` as one vector.
    pub fn parameters(&self) -> Vec<f64> {
        std::iter::once(self.intercept).chain(self.coefficients.iter().copied()).collect()
    }

    pub fn standard_errors(&self) -> Vec<f64> {
        self.covariance.diagonal().iter().map(|v| v.sqrt()).collect()
    }
}

pub fn fit_logistic(sample: &CaseControlSample) -> Result<LogisticFit> {
    let k = sample.n_genes();
    let x = DMatrix::from_fn(sample.rows(), k, |i, j| sample.row(i)[j] as f64);
    let y: Vec<f64> = sample.labels.iter().map(|&l| l as f64).collect();
    fit_logistic_matrix(&x, &y)
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Maximum-likelihood logistic regression of 0/1 `y` on the columns of `x`
/// plus an intercept, by Newton (IRLS) iterations.
pub fn fit_logistic_matrix(x: &DMatrix<f64>, y: &[f64]) -> Result<LogisticFit> {
    let (n, k) = x.shape();
    if y.len() != n {
        return Err(Error::Usage(format!("{} labels for {n} rows", y.len())));
    }
    if n == 0 {
        return Err(Error::Usage("empty sample".into()));
    }
    for j in 0..k {
        let col = x.column(j);
        if col.iter().all(|&v| v == col[0]) {
            return Err(Error::DegenerateTest(format!("covariate {} is constant", j + 1)));
        }
    }
    let ones = y.iter().filter(|&&v| v == 1.0).count();
    if ones == 0 || ones == n || y.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::DegenerateTest("labels must be 0/1 with both classes present".into()));
    }

    let design = DMatrix::from_fn(n, k + 1, |i, j| if j == 0 { 1.0 } else { x[(i, j - 1)] });
    let y = DVector::from_column_slice(y);
    let mean = ones as f64 / n as f64;
    let mut beta = DVector::zeros(k + 1);
    beta[0] = (mean / (1.0 - mean)).ln();

    let mut converged = false;
    let mut iterations = 0;
    let information = loop {
        let mu = (&design * &beta).map(sigmoid);
        let gradient = design.tr_mul(&(&y - &mu));
        let weights = mu.map(|m| m * (1.0 - m));
        let weighted = DMatrix::from_fn(n, k + 1, |i, j| design[(i, j)] * weights[i]);
        let information = design.tr_mul(&weighted);
        if gradient.amax() < GRADIENT_TOL {
            converged = true;
            break information;
        }
        if iterations == MAX_ITERATIONS {
            break information;
        }
        let step = information.clone().cholesky().ok_or(Error::Singular)?.solve(&gradient);
        beta += step;
        iterations += 1;
        if let Some((index, &value)) = beta.iter().enumerate().find(|(_, b)| b.abs() > SEPARATION_BOUND) {
            return Err(Error::Separation { index, value });
        }
    };

    let mut covariance = information.cholesky().ok_or(Error::Singular)?.inverse();
    // enforce exact symmetry
    covariance = (&covariance + covariance.transpose()) * 0.5;
    Ok(LogisticFit {
        intercept: beta[0],
        coefficients: beta.iter().skip(1).copied().collect(),
        covariance,
        converged,
        iterations,
    })
}

/// Estimated likelihood ratio of a profile with its Wald 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrEstimate {
    pub lr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub log_lr: f64,
    pub log_se: f64,
}

pub fn estimate_lr(
    fit: &LogisticFit,
    n_cases: usize,
    n_controls: usize,
    profile: &[u8],
) -> Result<LrEstimate> {
    if profile.len() != fit.coefficients.len() {
        return Err(Error::Usage(format!(
            "profile has {} genes but the fit has {}",
            profile.len(),
            fit.coefficients.len()
        )));
    }
    if n_cases == 0 || n_controls == 0 {
        return Err(Error::Usage("group sizes must be positive".into()));
    }
    let weights = DVector::from_iterator(
        profile.len() + 1,
        std::iter::once(1.0).chain(profile.iter().map(|&g| g as f64)),
    );
    let linear = fit.intercept
        + fit.coefficients.iter().zip(profile).map(|(b, &g)| b * g as f64).sum::<f64>();
    let log_lr = (n_controls as f64 / n_cases as f64).ln() + linear;
    let log_se = weights.dot(&(&fit.covariance * &weights)).max(0.0).sqrt();
    Ok(LrEstimate {
        lr: log_lr.exp(),
        ci_low: (log_lr - WALD_Z * log_se).exp(),
        ci_high: (log_lr + WALD_Z * log_se).exp(),
        log_lr,
        log_se,
    })
}
