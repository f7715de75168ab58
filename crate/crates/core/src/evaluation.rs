//! Discrimination measures for genetic risk tests.

use crate::error::{Error, Result};
use crate::population_sim::Population;
use crate::risk_math::{self, TriGeneSpec};

/// Upper bound on the number of genes tried by [`genes_needed_for_ppv`].
pub const MAX_GENES_SEARCHED: usize = 10_000;

/// Counts of a binarized test against true disease status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

// `None` marks a measure whose denominator is zero.
impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn sensitivity(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn specificity(&self) -> Option<f64> {
        ratio(self.tn, self.fp + self.tn)
    }

    pub fn ppv(&self) -> Option<f64> {
        ratio(self.tp, self.fp + self.tp)
    }

    pub fn npv(&self) -> Option<f64> {
        ratio(self.tn, self.fn_ + self.tn)
    }
}

fn check_binary(name: &str, xs: &[u8]) -> Result<()> {
    match xs.iter().find(|&&x| x > 1) {
        Some(x) => Err(Error::Usage(format!("{name} must be 0/1, found {x}"))),
        None => Ok(()),
    }
}

pub fn confusion(predicted: &[u8], truth: &[u8]) -> Result<ConfusionCounts> {
    if predicted.len() != truth.len() {
        return Err(Error::Usage(format!(
            "predicted has {} entries but truth has {}",
            predicted.len(),
            truth.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::Usage("confusion counts need at least one subject".into()));
    }
    check_binary("predicted", predicted)?;
    check_binary("truth", truth)?;
    let mut c = ConfusionCounts::default();
    for (&p, &t) in predicted.iter().zip(truth) {
        match (p, t) {
            (1, 1) => c.tp += 1,
            (1, _) => c.fp += 1,
            (_, 1) => c.fn_ += 1,
            _ => c.tn += 1,
        }
    }
    Ok(c)
}

/// ROC curve as `(fpr, tpr)` points from the threshold sweep over every
/// distinct score, with the Mann-Whitney AUC.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

impl RocCurve {
    pub fn trapezoid_area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
            .sum()
    }
}

/// ROC curve and AUC of `scores` (higher means more likely diseased).
///
/// AUC is the Mann-Whitney probability that a random diseased subject
/// outscores a random non-diseased one, with ties counted one half. It is
/// accumulated in integer arithmetic, so it is exact up to the final
/// division.
pub fn roc_auc(scores: &[f64], truth: &[u8]) -> Result<RocCurve> {
    if scores.len() != truth.len() {
        return Err(Error::Usage(format!(
            "scores has {} entries but truth has {}",
            scores.len(),
            truth.len()
        )));
    }
    check_binary("truth", truth)?;
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::Usage("scores contain NaN".into()));
    }
    let n_pos = truth.iter().filter(|&&t| t == 1).count() as u64;
    let n_neg = truth.len() as u64 - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedAuc(format!(
            "need both classes, got {n_pos} diseased and {n_neg} non-diseased"
        )));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&i, &j| scores[j].total_cmp(&scores[i]));

    // descending sweep: each tie group moves the curve once
    let mut points = Vec::with_capacity(order.len() + 1);
    points.push((0.0, 0.0));
    let (mut tp, mut fp) = (0u64, 0u64);
    // twice the Mann-Whitney U, counted from the top: each diseased subject
    // beats every non-diseased below it and ties half of its own group
    let mut twice_u: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        let (mut pos_g, mut neg_g) = (0u64, 0u64);
        while i < order.len() && scores[order[i]] == s {
            if truth[order[i]] == 1 {
                pos_g += 1;
            } else {
                neg_g += 1;
            }
            i += 1;
        }
        let neg_below = n_neg - fp - neg_g;
        twice_u += pos_g as u128 * (2 * neg_below as u128 + neg_g as u128);
        tp += pos_g;
        fp += neg_g;
        points.push((fp as f64 / n_neg as f64, tp as f64 / n_pos as f64));
    }
    let auc = twice_u as f64 / (2.0 * n_pos as f64 * n_neg as f64);
    Ok(RocCurve { points, auc })
}

/// `(configured prevalence, observed fraction diseased)`.
pub fn prevalence_drift(pop: &Population) -> (f64, f64) {
    (pop.meta.prevalence, pop.observed_prevalence())
}

/// Genes needed before a test's positive predictive value reaches
/// `multiplier` times the background risk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenesNeeded {
    /// Every tested genotype is EE.
    pub smallest: usize,
    /// Every tested genotype is Ee.
    pub largest: usize,
}

pub fn genes_needed_for_ppv(spec: &TriGeneSpec, p: f64, multiplier: f64) -> Result<GenesNeeded> {
    if !(multiplier > 1.0) || !multiplier.is_finite() {
        return Err(Error::Domain(format!("multiplier must exceed 1, got {multiplier}")));
    }
    let target = multiplier * p;
    if !(target < 1.0) {
        return Err(Error::Domain(format!(
            "target PPV {target} (= {multiplier} x {p}) is not below 1"
        )));
    }
    let lrs = risk_math::gene_lrs(spec, p)?;
    let search = |lr: f64, label: &str| -> Result<usize> {
        if !(lr > 1.0) {
            return Err(Error::Infeasible(format!(
                "{label} likelihood ratio {lr} <= 1 never raises the PPV (f={}, OR={})",
                spec.allele_freq, spec.or_het
            )));
        }
        let step = lr.ln();
        (1..=MAX_GENES_SEARCHED)
            .find(|&k| risk_math::posterior_from_log_lr(k as f64 * step, p) >= target)
            .ok_or_else(|| {
                Error::Infeasible(format!(
                    "{label}: target PPV {target} not reached within {MAX_GENES_SEARCHED} genes"
                ))
            })
    };
    Ok(GenesNeeded {
        smallest: search(lrs.lr_ee_risk, "EE")?,
        largest: search(lrs.lr_het, "Ee")?,
    })
}
