//! Exact likelihood-ratio algebra.
//!
//! Everything here is a pure function of population parameters. Table cells
//! are real-valued expected counts; integer rounding only happens when a
//! simulator turns a table into a genotype pool.

pub mod cubic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for algebraic residuals of solved tables.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// A binary (carrier / non-carrier) susceptibility test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryGeneSpec {
    /// Fraction of the population testing positive.
    pub carrier_freq: f64,
    /// Disease risk in positives divided by disease risk in negatives.
    pub relative_risk: f64,
}

impl BinaryGeneSpec {
    pub fn new(carrier_freq: f64, relative_risk: f64) -> Result<Self> {
        let spec = Self {
            carrier_freq,
            relative_risk,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        open_unit("carrier frequency", self.carrier_freq)?;
        positive("relative risk", self.relative_risk)
    }
}

/// A bi-allelic gene with three genotypes ee / Ee / EE.
///
/// `or_het` is the odds ratio of Ee against ee; EE carries `or_het^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriGeneSpec {
    pub allele_freq: f64,
    pub or_het: f64,
}

impl TriGeneSpec {
    pub fn new(allele_freq: f64, or_het: f64) -> Result<Self> {
        let spec = Self { allele_freq, or_het };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        open_unit("allele frequency", self.allele_freq)?;
        positive("odds ratio", self.or_het)
    }
}

/// Expected counts of a disease-by-carrier 2x2 table.
///
/// ```text
///            D      D0
///   pos      a      b      f n
///   neg      c      d      (1-f) n
///            p n    (1-p) n
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryTable {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub n: f64,
    pub p: f64,
}

impl BinaryTable {
    /// Relative residuals of the four defining equations, in order: row
    /// totals, diseased total, relative risk.
    pub fn residuals(&self, spec: &BinaryGeneSpec) -> [f64; 4] {
        let f = spec.carrier_freq;
        let risk_pos = self.a / (f * self.n);
        let risk_neg = self.c / ((1.0 - f) * self.n);
        [
            rel(self.a + self.b, f * self.n),
            rel(self.c + self.d, (1.0 - f) * self.n),
            rel(self.a + self.c, self.n * self.p),
            rel(risk_pos / risk_neg, spec.relative_risk),
        ]
    }
}

/// Expected counts of the genotype-by-disease table.
///
/// ```text
///            D      D0
///   EE       a      b      f^2 n
///   Ee       c      d      2f(1-f) n
///   ee       e      g      (1-f)^2 n
///            p n    (1-p) n
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenotypeTable {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub g: f64,
    pub n: f64,
    pub p: f64,
}

impl GenotypeTable {
    /// Diseased-column counts indexed by genotype code (0 = ee, 1 = Ee, 2 = EE).
    pub fn diseased_by_code(&self) -> [f64; 3] {
        [self.e, self.c, self.a]
    }

    /// Non-diseased-column counts indexed by genotype code.
    pub fn healthy_by_code(&self) -> [f64; 3] {
        [self.g, self.d, self.b]
    }

    /// Relative residuals of the six equations: three genotype totals, the
    /// diseased total, and the two odds-ratio constraints.
    pub fn residuals(&self, spec: &TriGeneSpec) -> [f64; 6] {
        let (t1, t2, t3) = genotype_totals(spec.allele_freq, self.n);
        let or = spec.or_het;
        [
            rel(self.a + self.b, t1),
            rel(self.c + self.d, t2),
            rel(self.e + self.g, t3),
            rel(self.a + self.c + self.e, self.n * self.p),
            rel((self.a * self.g) / (self.b * self.e), or * or),
            rel((self.c * self.g) / (self.d * self.e), or),
        ]
    }

    pub fn max_residual(&self, spec: &TriGeneSpec) -> f64 {
        self.residuals(spec).iter().fold(0.0, |m, r| m.max(*r))
    }
}

/// The substitutions `t1..t5` and the cubic in `D` they produce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicSystem {
    /// `[f^2 N, 2f(1-f) N, (1-f)^2 N, p N, OR]`
    pub t: [f64; 5],
    pub a3: f64,
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

impl CubicSystem {
    pub fn coefficients(&self) -> [f64; 4] {
        [self.a3, self.a2, self.a1, self.a0]
    }

    pub fn eval(&self, d: f64) -> f64 {
        cubic::eval(self.coefficients(), d)
    }
}

/// Likelihood ratios of the three genotypes of one gene.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenotypeLRs {
    pub lr_ee_risk: f64,
    pub lr_het: f64,
    pub lr_nonrisk: f64,
}

impl GenotypeLRs {
    /// Indexed by genotype code (0 = ee, 1 = Ee, 2 = EE).
    pub fn by_code(&self) -> [f64; 3] {
        [self.lr_nonrisk, self.lr_het, self.lr_ee_risk]
    }
}

fn rel(value: f64, target: f64) -> f64 {
    let denom = target.abs();
    if denom == 0.0 {
        value.abs()
    } else {
        (value - target).abs() / denom
    }
}

fn open_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must lie in (0, 1), got {x}")))
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {x}")))
    }
}

fn positive_count(n: f64) -> Result<()> {
    positive("subject count", n)
}

/// Posterior disease probability from a likelihood ratio and a prior.
pub fn posterior_risk(lr: f64, prior: f64) -> Result<f64> {
    open_unit("prior", prior)?;
    if !(lr >= 0.0) || lr.is_infinite() {
        return Err(Error::Domain(format!(
            "likelihood ratio must be finite and >= 0, got {lr}"
        )));
    }
    // p*lr / ((1-p) + p*lr), arranged so that lr = 1 returns the prior bit-for-bit
    Ok(prior * lr / (1.0 + prior * (lr - 1.0)))
}

/// Posterior probability from a summed log likelihood ratio. Does not
/// overflow for profiles of hundreds of genes.
pub fn posterior_from_log_lr(log_lr: f64, prior: f64) -> f64 {
    if log_lr == 0.0 {
        return prior;
    }
    let log_odds = log_lr + (prior / (1.0 - prior)).ln();
    if log_odds >= 0.0 {
        1.0 / (1.0 + (-log_odds).exp())
    } else {
        let z = log_odds.exp();
        z / (1.0 + z)
    }
}

/// Likelihood ratio of a panel of independent tests: the product of the
/// individual ratios. The empty panel has ratio 1.
pub fn combine_lr(lrs: &[f64]) -> Result<f64> {
    lrs.iter().try_fold(1.0, |acc, &lr| {
        if lr >= 0.0 {
            Ok(acc * lr)
        } else {
            Err(Error::Domain(format!("likelihood ratio must be >= 0, got {lr}")))
        }
    })
}

pub fn solve_binary_table(spec: &BinaryGeneSpec, p: f64, n: f64) -> Result<BinaryTable> {
    spec.validate()?;
    open_unit("prevalence", p)?;
    positive_count(n)?;
    let f = spec.carrier_freq;
    let r = spec.relative_risk;

    let risk_neg = p / (1.0 - f + f * r);
    let risk_pos = r * risk_neg;
    if risk_pos >= 1.0 {
        return Err(Error::Infeasible(format!(
            "cell b: disease risk among carriers is {risk_pos} >= 1 (f={f}, R={r}, p={p})"
        )));
    }
    if risk_neg >= 1.0 {
        return Err(Error::Infeasible(format!(
            "cell d: disease risk among non-carriers is {risk_neg} >= 1 (f={f}, R={r}, p={p})"
        )));
    }
    Ok(BinaryTable {
        a: f * n * risk_pos,
        b: f * n * (1.0 - risk_pos),
        c: (1.0 - f) * n * risk_neg,
        d: (1.0 - f) * n * (1.0 - risk_neg),
        n,
        p,
    })
}

/// `(LR(positive), LR(negative))` of a binary test.
pub fn binary_lr(table: &BinaryTable) -> Result<(f64, f64)> {
    if !(table.b > 0.0) || !(table.d > 0.0) {
        return Err(Error::DegenerateTest(format!(
            "non-diseased cells must be positive (b={}, d={})",
            table.b, table.d
        )));
    }
    let diseased = table.p * table.n;
    let healthy = (1.0 - table.p) * table.n;
    let lr_pos = (table.a / diseased) / (table.b / healthy);
    let lr_neg = (table.c / diseased) / (table.d / healthy);
    Ok((lr_pos, lr_neg))
}

/// Hardy-Weinberg genotype frequencies `(EE, Ee, ee)` for risk-allele
/// frequency `f`. The three components sum to exactly 1.
pub fn hardy_weinberg(f: f64) -> Result<(f64, f64, f64)> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::Domain(format!(
            "allele frequency must lie in [0, 1], got {f}"
        )));
    }
    let ee_risk = f * f;
    let het = 2.0 * f * (1.0 - f);
    let nonrisk = 1.0 - (ee_risk + het);
    Ok((ee_risk, het, nonrisk))
}

fn genotype_totals(f: f64, n: f64) -> (f64, f64, f64) {
    let (ee, het, non) = hardy_weinberg(f).expect("validated allele frequency");
    (ee * n, het * n, non * n)
}

pub fn cubic_coefficients(f: f64, p: f64, or_het: f64, n: f64) -> Result<CubicSystem> {
    TriGeneSpec::new(f, or_het)?;
    open_unit("prevalence", p)?;
    positive_count(n)?;
    let (t1, t2, t3) = genotype_totals(f, n);
    let t4 = p * n;
    let t5 = or_het;

    let a3 = 1.0 - 2.0 * t5 + t5 * t5;
    let a2 = -t1 * t5 * t5 - 2.0 * t5 * t4 + t4 + t5 * t1 + t3 * t5 - t3 + 4.0 * t5 * t2
        - 2.0 * t2
        + t4 * t5 * t5
        - 2.0 * t2 * t5 * t5;
    let a1 = t3 * t2 - 2.0 * t1 * t5 * t2 + 2.0 * t4 * t5 * t2 + t1 * t5 * t5 * t2
        - 2.0 * t5 * t3 * t2
        - t4 * t2
        + t2 * t2
        - t4 * t5 * t5 * t2
        - 3.0 * t5 * t2 * t2
        + t2 * t2 * t5 * t5;
    let a0 = -t5 * t4 * t2 * t2 + t5 * t1 * t2 * t2 + t5 * t3 * t2 * t2 + t5 * t2 * t2 * t2;

    Ok(CubicSystem {
        t: [t1, t2, t3, t4, t5],
        a3,
        a2,
        a1,
        a0,
    })
}

/// Fill the rest of the table from `D`, the non-diseased heterozygote count.
pub(crate) fn table_from_d(sys: &CubicSystem, d: f64, n: f64, p: f64) -> GenotypeTable {
    let [t1, t2, t3, _, t5] = sys.t;
    let c = t2 - d;
    let a = t1 * t5 * c / (t5 * c + d);
    let e = t3 * c / (c + t5 * d);
    GenotypeTable {
        a,
        b: t1 - a,
        c,
        d,
        e,
        g: t3 - e,
        n,
        p,
    }
}

/// Tables for every root that yields nonnegative cells.
pub(crate) fn admissible_tables(
    sys: &CubicSystem,
    roots: &[f64],
    n: f64,
    p: f64,
) -> Vec<(f64, GenotypeTable)> {
    let t2 = sys.t[1];
    roots
        .iter()
        .filter(|&&d| d > 0.0 && d < t2)
        .map(|&d| (d, table_from_d(sys, d, n, p)))
        .filter(|(_, t)| [t.a, t.b, t.c, t.d, t.e, t.g].iter().all(|&x| x >= 0.0))
        .collect()
}

pub(crate) fn select_root(
    sys: &CubicSystem,
    roots: &[f64],
    n: f64,
    p: f64,
) -> Result<GenotypeTable> {
    let mut found = admissible_tables(sys, roots, n, p);
    match found.len() {
        0 => Err(Error::NoAdmissibleRoot {
            roots: roots.to_vec(),
        }),
        1 => Ok(found.pop().unwrap().1),
        _ => Err(Error::AmbiguousRoot {
            roots: found.iter().map(|(d, _)| *d).collect(),
        }),
    }
}

/// Diseased-total residual as a function of `D`; strictly decreasing on (0, t2).
fn diseased_excess(sys: &CubicSystem, d: f64, n: f64, p: f64) -> f64 {
    let t = table_from_d(sys, d, n, p);
    t.a + t.c + t.e - sys.t[3]
}

fn bisect_d(sys: &CubicSystem, n: f64, p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, sys.t[1]);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if diseased_excess(sys, mid, n, p) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solve the genotype-by-disease table for one gene.
///
/// `D` is the unique real root of the cubic inside `(0, t2)`; the other cells
/// follow from it. When the cubic degenerates (`OR` near 1) or the closed-form
/// root fails the residual check, `D` is recovered by bisection on the
/// diseased-total residual, which is monotone in `D`.
pub fn solve_genotype_table(spec: &TriGeneSpec, p: f64, n: f64) -> Result<GenotypeTable> {
    let sys = cubic_coefficients(spec.allele_freq, p, spec.or_het, n)?;
    let scale = sys
        .coefficients()
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs()));
    let degenerate = sys.a3.abs() <= cubic::DEGENERATE_REL * scale;

    let roots = cubic::real_roots(sys.a3, sys.a2, sys.a1, sys.a0);
    let table = match select_root(&sys, &roots, n, p) {
        Ok(t) => t,
        Err(_) if degenerate => table_from_d(&sys, bisect_d(&sys, n, p), n, p),
        Err(e) => return Err(e),
    };
    if table.max_residual(spec) <= 0.01 * RESIDUAL_TOL {
        return Ok(table);
    }
    let refined = table_from_d(&sys, bisect_d(&sys, n, p), n, p);
    if refined.max_residual(spec) < table.max_residual(spec) {
        Ok(refined)
    } else {
        Ok(table)
    }
}

pub fn genotype_lrs(table: &GenotypeTable) -> Result<GenotypeLRs> {
    let cells = [table.a, table.b, table.c, table.d, table.e, table.g];
    if cells.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::DegenerateTest(format!(
            "all genotype cells must be positive, got {cells:?}"
        )));
    }
    let p = table.p;
    Ok(GenotypeLRs {
        lr_ee_risk: table.a * (1.0 - p) / (table.b * p),
        lr_het: table.c * (1.0 - p) / (table.d * p),
        lr_nonrisk: table.e * (1.0 - p) / (table.g * p),
    })
}

/// Per-genotype likelihood ratios straight from gene parameters. An odds
/// ratio of exactly 1 gives ratios of exactly 1.
pub fn gene_lrs(spec: &TriGeneSpec, p: f64) -> Result<GenotypeLRs> {
    if spec.or_het == 1.0 {
        spec.validate()?;
        open_unit("prevalence", p)?;
        return Ok(GenotypeLRs {
            lr_ee_risk: 1.0,
            lr_het: 1.0,
            lr_nonrisk: 1.0,
        });
    }
    genotype_lrs(&solve_genotype_table(spec, p, 1.0)?)
}

/// Likelihood ratio of a positive binary test straight from gene parameters.
pub fn binary_gene_lrs(spec: &BinaryGeneSpec, p: f64) -> Result<(f64, f64)> {
    binary_lr(&solve_binary_table(spec, p, 1.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn posterior_examples() {
        assert!(approx(posterior_risk(3.50, 0.05).unwrap(), 0.1556, 5e-4));
        assert_eq!(posterior_risk(1.0, 0.05).unwrap(), 0.05);
        assert!(approx(posterior_risk(47.9, 0.05).unwrap(), 0.716, 5e-4));
        assert_eq!(posterior_risk(0.0, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn posterior_domain_errors() {
        assert!(matches!(posterior_risk(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(posterior_risk(1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(posterior_risk(-0.1, 0.5), Err(Error::Domain(_))));
        assert!(matches!(posterior_risk(f64::NAN, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn log_posterior_matches_direct() {
        for &(lr, p) in &[(3.5, 0.05), (0.2, 0.3), (1e5, 0.1), (1e-5, 0.9)] {
            let direct = posterior_risk(lr, p).unwrap();
            let via_log = posterior_from_log_lr(f64::ln(lr), p);
            assert!((direct - via_log).abs() < 1e-14, "{lr} {p}");
        }
        assert_eq!(posterior_from_log_lr(2000.0, 0.1), 1.0);
        assert_eq!(posterior_from_log_lr(-2000.0, 0.1), 0.0);
    }

    #[test]
    fn combine_examples() {
        assert!(approx(combine_lr(&[1.36, 1.72]).unwrap(), 2.3392, 1e-12));
        assert_eq!(combine_lr(&[]).unwrap(), 1.0);
        let full = combine_lr(&[1.357143, 1.727273, 2.159091, 2.714286, 3.5]).unwrap();
        // plain multiplication: 48.08187...
        assert!(approx(full, 48.082, 5e-4), "{full}");
        assert!(matches!(combine_lr(&[1.0, -2.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn binary_table_examples() {
        let t = solve_binary_table(&BinaryGeneSpec::new(0.05, 3.5).unwrap(), 0.05, 1.0).unwrap();
        assert!(approx(t.a, 0.0077778, 1e-7));
        assert!(approx(t.b, 0.0422222, 1e-7));
        assert!(approx(t.c, 0.0422222, 1e-7));
        assert!(approx(t.d, 0.9077778, 1e-7));
        assert!(approx(t.a + t.c, 0.05, 1e-15));

        let t = solve_binary_table(&BinaryGeneSpec::new(0.25, 1.0).unwrap(), 0.05, 1.0).unwrap();
        assert!(approx(t.a, 0.0125, 1e-15) && approx(t.c, 0.0375, 1e-15));

        let t = solve_binary_table(&BinaryGeneSpec::new(0.10, 3.0).unwrap(), 0.05, 1e6).unwrap();
        let (pos, _) = binary_lr(&t).unwrap();
        assert!(approx(pos, 2.71, 0.01), "{pos}");
    }

    #[test]
    fn binary_table_infeasible() {
        let spec = BinaryGeneSpec::new(0.05, 50.0).unwrap();
        match solve_binary_table(&spec, 0.5, 1.0) {
            Err(Error::Infeasible(msg)) => assert!(msg.contains("cell b")),
            other => panic!("expected infeasible, got {other:?}"),
        }
        let spec = BinaryGeneSpec::new(0.9, 0.1).unwrap();
        match solve_binary_table(&spec, 0.5, 1.0) {
            Err(Error::Infeasible(msg)) => assert!(msg.contains("cell d")),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn binary_lr_examples() {
        let lr = |f, r| binary_gene_lrs(&BinaryGeneSpec::new(f, r).unwrap(), 0.05).unwrap();
        assert!(approx(lr(0.25, 1.5).0, 1.357, 1e-3));
        let (pos, neg) = lr(0.3, 1.0);
        assert!(approx(pos, 1.0, 1e-12) && approx(neg, 1.0, 1e-12));
        assert!(approx(lr(0.20, 2.0).0, 1.7273, 1e-4));
    }

    #[test]
    fn binary_lr_degenerate() {
        let t = BinaryTable {
            a: 0.1,
            b: 0.0,
            c: 0.1,
            d: 0.8,
            n: 1.0,
            p: 0.2,
        };
        assert!(matches!(binary_lr(&t), Err(Error::DegenerateTest(_))));
    }

    #[test]
    fn hardy_weinberg_examples() {
        let (a, b, c) = hardy_weinberg(0.1).unwrap();
        assert!(approx(a, 0.01, 1e-15) && approx(b, 0.18, 1e-15) && approx(c, 0.81, 1e-15));
        assert_eq!(hardy_weinberg(0.0).unwrap(), (0.0, 0.0, 1.0));
        assert_eq!(hardy_weinberg(0.5).unwrap(), (0.25, 0.5, 0.25));
        assert_eq!(hardy_weinberg(1.0).unwrap(), (1.0, 0.0, 0.0));
        assert!(hardy_weinberg(1.5).is_err());
        assert!(hardy_weinberg(-0.1).is_err());
    }

    #[test]
    fn cubic_coefficient_examples() {
        let s = cubic_coefficients(0.3, 0.2, 1.0, 1.0).unwrap();
        assert_eq!(s.a3, 0.0);
        let s = cubic_coefficients(0.1, 0.1, 2.0, 1.0).unwrap();
        let expect = [0.01, 0.18, 0.81, 0.1, 2.0];
        for (x, y) in s.t.iter().zip(expect) {
            assert!(approx(*x, y, 1e-15));
        }
        assert_eq!(s.a3, 1.0);
    }

    #[test]
    fn cubic_vanishes_at_solved_d() {
        for &(f, p, or, n) in &[(0.1, 0.1, 2.0, 1.0), (0.3, 0.05, 0.7, 1e5), (0.45, 0.4, 8.0, 1e7)] {
            let spec = TriGeneSpec::new(f, or).unwrap();
            let t = solve_genotype_table(&spec, p, n).unwrap();
            let s = cubic_coefficients(f, p, or, n).unwrap();
            assert!(s.eval(t.d).abs() < 1e-9 * n * n * n, "{f} {p} {or}");
        }
    }

    // Cells frozen from a bisection on the ee-odds of the diseased total,
    // independent of the cubic.
    #[test]
    fn genotype_table_reference_values() {
        let spec = TriGeneSpec::new(0.1, 2.0).unwrap();
        let t = solve_genotype_table(&spec, 0.1, 1.0).unwrap();
        assert!(approx(t.d, 0.151733447966911, 1e-12), "{t:?}");
        assert!(approx(t.c, 0.028266552033089, 1e-12));
        assert!(approx(t.a, 0.002714459115701, 1e-12));
        assert!(approx(t.e, 0.069018988851211, 1e-12));
        assert!(t.max_residual(&spec) < RESIDUAL_TOL);

        let lrs = genotype_lrs(&t).unwrap();
        assert!(approx(lrs.lr_ee_risk, 3.353235, 1e-5), "{lrs:?}");
        assert!(approx(lrs.lr_het, 1.676618, 1e-5));
        assert!(approx(lrs.lr_nonrisk, 0.838309, 1e-5));
    }

    #[test]
    fn genotype_table_independence_at_or_one() {
        let (f, p, n) = (0.2, 0.15, 1000.0);
        let spec = TriGeneSpec::new(f, 1.0).unwrap();
        let t = solve_genotype_table(&spec, p, n).unwrap();
        let (t1, t2, t3) = genotype_totals(f, n);
        let tol = 1e-9 * n;
        assert!(approx(t.a, t1 * p, tol) && approx(t.b, t1 * (1.0 - p), tol));
        assert!(approx(t.c, t2 * p, tol) && approx(t.d, t2 * (1.0 - p), tol));
        assert!(approx(t.e, t3 * p, tol) && approx(t.g, t3 * (1.0 - p), tol));
        let lrs = genotype_lrs(&t).unwrap();
        for lr in lrs.by_code() {
            assert!(approx(lr, 1.0, 1e-12));
        }
    }

    #[test]
    fn near_unit_odds_ratio_stays_accurate() {
        for &or in &[1.0 + 1e-9, 1.0 - 1e-7, 1.0 + 1e-5, 1.001] {
            let spec = TriGeneSpec::new(0.2, or).unwrap();
            let t = solve_genotype_table(&spec, 0.1, 1e5).unwrap();
            assert!(t.max_residual(&spec) < RESIDUAL_TOL, "{or}: {:?}", t.residuals(&spec));
        }
    }

    #[test]
    fn root_selection_errors() {
        let sys = cubic_coefficients(0.1, 0.1, 2.0, 1.0).unwrap();
        match select_root(&sys, &[-1.0, 5.0], 1.0, 0.1) {
            Err(Error::NoAdmissibleRoot { roots }) => assert_eq!(roots, vec![-1.0, 5.0]),
            other => panic!("{other:?}"),
        }
        match select_root(&sys, &[0.05, 0.1], 1.0, 0.1) {
            Err(Error::AmbiguousRoot { roots }) => assert_eq!(roots.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn heterozygote_lr_can_drop_below_one() {
        // common risk allele: most cases are EE, so Ee is under-represented
        let lrs = gene_lrs(&TriGeneSpec::new(0.4, 3.0).unwrap(), 0.1).unwrap();
        assert!(lrs.lr_het < 1.0 && lrs.lr_ee_risk > 1.0, "{lrs:?}");
        let lrs = gene_lrs(&TriGeneSpec::new(0.1, 3.0).unwrap(), 0.1).unwrap();
        assert!(lrs.lr_het > 1.0);
    }

    #[test]
    fn genotype_lrs_degenerate() {
        let mut t = solve_genotype_table(&TriGeneSpec::new(0.1, 2.0).unwrap(), 0.1, 1.0).unwrap();
        t.g = 0.0;
        assert!(matches!(genotype_lrs(&t), Err(Error::DegenerateTest(_))));
    }

    proptest! {
        #[test]
        fn posterior_fixed_point_and_monotone(p in 0.001f64..0.999, x in 0.0f64..50.0, y in 0.0f64..50.0) {
            prop_assert_eq!(posterior_risk(1.0, p).unwrap(), p);
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            prop_assume!(hi - lo > 1e-9);
            prop_assert!(posterior_risk(lo, p).unwrap() < posterior_risk(hi, p).unwrap());
        }

        #[test]
        fn binary_table_satisfies_system(f in 0.01f64..0.5, r in 0.5f64..10.0, p in 0.001f64..0.5) {
            let spec = BinaryGeneSpec::new(f, r).unwrap();
            if let Ok(t) = solve_binary_table(&spec, p, 1000.0) {
                for res in t.residuals(&spec) {
                    prop_assert!(res < RESIDUAL_TOL);
                }
                prop_assert!([t.a, t.b, t.c, t.d].iter().all(|&x| x >= 0.0));
                let (pos, neg) = binary_lr(&t).unwrap();
                let healthy = (1.0 - p) * t.n;
                prop_assert!((pos * t.b / healthy + neg * t.d / healthy - 1.0).abs() < 1e-9);
            }
        }

        #[test]
        fn genotype_table_satisfies_system(f in 0.01f64..0.5, or in 0.5f64..10.0, p in 0.01f64..0.5) {
            let spec = TriGeneSpec::new(f, or).unwrap();
            let t = solve_genotype_table(&spec, p, 1e4).unwrap();
            for res in t.residuals(&spec) {
                prop_assert!(res < RESIDUAL_TOL, "{:?}", t.residuals(&spec));
            }
            let lrs = genotype_lrs(&t).unwrap();
            let dn = p * t.n;
            let hn = (1.0 - p) * t.n;
            let sum_d = t.a / dn + t.c / dn + t.e / dn;
            let sum_h = lrs.lr_ee_risk * t.b / hn + lrs.lr_het * t.d / hn + lrs.lr_nonrisk * t.g / hn;
            prop_assert!((sum_d - 1.0).abs() < 1e-9);
            prop_assert!((sum_h - 1.0).abs() < 1e-9);
            if or > 1.0 {
                prop_assert!(lrs.lr_ee_risk > lrs.lr_het && lrs.lr_het > lrs.lr_nonrisk);
                prop_assert!(lrs.lr_ee_risk > 1.0 && lrs.lr_nonrisk < 1.0);
            }
        }

        #[test]
        fn scaling_in_n(f in 0.01f64..0.5, or in 0.5f64..10.0, p in 0.01f64..0.5, k in 2.0f64..1000.0) {
            let spec = TriGeneSpec::new(f, or).unwrap();
            let t1 = solve_genotype_table(&spec, p, 1.0).unwrap();
            let tk = solve_genotype_table(&spec, p, k).unwrap();
            for (x, y) in [(t1.a, tk.a), (t1.b, tk.b), (t1.c, tk.c), (t1.d, tk.d), (t1.e, tk.e), (t1.g, tk.g)] {
                prop_assert!((x * k - y).abs() <= 1e-9 * y.abs().max(1e-300));
            }
            let l1 = genotype_lrs(&t1).unwrap();
            let lk = genotype_lrs(&tk).unwrap();
            for (x, y) in l1.by_code().iter().zip(lk.by_code()) {
                prop_assert!((x - y).abs() <= 1e-9 * y);
            }
        }
    }
}
