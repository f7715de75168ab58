//! Estimate likelihood ratios from a simulated case-control study by
//! logistic regression.
//!
//!     cargo run --release --example case_control_estimation

use riskgene::case_control;
use riskgene::risk_math::{self, BinaryGeneSpec};

fn main() -> riskgene::Result<()> {
    let p = 0.05;
    let specs = vec![BinaryGeneSpec::new(0.25, 1.5)?, BinaryGeneSpec::new(0.10, 3.0)?];
    let pop = case_control::simulate_binary_population(&specs, p, 1_000_000, 11)?;
    let sample = case_control::sample_case_control(&pop, 5000, 5000, 12)?;

    let fit = case_control::fit_logistic(&sample)?;
    println!(
        "IRLS converged={} after {} iterations: alpha {:.4}, beta {:?}",
        fit.converged, fit.iterations, fit.intercept, fit.coefficients
    );

    for profile in [[1, 0], [0, 1], [1, 1]] {
        let est = case_control::estimate_lr(&fit, sample.n_cases, sample.n_controls, &profile)?;
        // true LR of this exact profile under conditional independence
        let truth: f64 = specs
            .iter()
            .zip(profile)
            .map(|(s, g)| risk_math::binary_gene_lrs(s, p).map(|(pos, neg)| if g == 1 { pos } else { neg }))
            .product::<riskgene::Result<f64>>()?;
        println!(
            "profile {profile:?}: LR {:.3} (95% {:.3}-{:.3}), true {truth:.3}",
            est.lr, est.ci_low, est.ci_high
        );
    }
    Ok(())
}
