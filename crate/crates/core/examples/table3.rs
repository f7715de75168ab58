//! True likelihood ratios of multi-gene binary tests next to case-control
//! estimates from one simulated study.
//!
//!     cargo run --release --example table3

use riskgene::experiments::table3::{self, StudyDesign};

fn main() -> riskgene::Result<()> {
    let p = 0.05;
    let specs = table3::default_specs();
    let rows = table3::true_rows(&specs, p)?;

    let panels: Vec<Vec<usize>> = rows.iter().map(|r| r.panel.clone()).collect();
    let estimates = table3::replicate_estimates(&specs, p, &panels, StudyDesign::default(), 42)?;

    println!("{:<16} {:>9} {:>10} {:>24}", "genes", "true LR", "posterior", "estimate (95% Wald)");
    for (row, est) in rows.iter().zip(estimates) {
        let est = match est {
            Ok(e) => format!("{:.2} ({:.2}-{:.2})", e.lr, e.ci_low, e.ci_high),
            Err(e) => e.to_string(),
        };
        println!(
            "{:<16} {:>9.3} {:>9.1}% {:>24}",
            table3::panel_label(&row.panel),
            row.true_lr,
            row.posterior_pct,
            est
        );
    }
    Ok(())
}
