//! Discriminative accuracy of a simulated multi-gene test: AUC of the risk
//! score, and the confusion counts at one risk threshold.
//!
//!     cargo run --release --example roc_auc

use riskgene::evaluation;
use riskgene::population_sim::{simulate_revised, SimParams};

fn main() -> riskgene::Result<()> {
    let params = SimParams::uniform(100_000, 0.1, 0.1, 1.5, 50, 3)?;
    let pop = simulate_revised(&params)?;
    let risk = pop.risk_or_err()?;

    let roc = evaluation::roc_auc(risk, &pop.status)?;
    println!("AUC over {} thresholds: {:.4}", roc.points.len() - 1, roc.auc);

    let threshold = 0.2;
    let predicted: Vec<u8> = risk.iter().map(|&r| u8::from(r >= threshold)).collect();
    let c = evaluation::confusion(&predicted, &pop.status)?;
    let show = |x: Option<f64>| x.map_or("undefined".to_string(), |v| format!("{v:.3}"));
    println!("risk >= {threshold}: TP {} FP {} FN {} TN {}", c.tp, c.fp, c.fn_, c.tn);
    println!(
        "sensitivity {}  specificity {}  PPV {}  NPV {}",
        show(c.sensitivity()),
        show(c.specificity()),
        show(c.ppv()),
        show(c.npv())
    );
    Ok(())
}
