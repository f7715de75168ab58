//! Posterior risk from likelihood ratios, and the exact 2x2 table behind a
//! binary (carrier / non-carrier) gene.
//!
//!     cargo run --example posterior_basics

use riskgene::risk_math::{self, BinaryGeneSpec};

fn main() -> riskgene::Result<()> {
    let p = 0.05;

    // a single test with LR 3 moves a 5% background risk to ~13.6%
    println!("posterior(LR=3, p=5%) = {:.4}", risk_math::posterior_risk(3.0, p)?);

    // independent tests combine by multiplying their ratios
    let panel = risk_math::combine_lr(&[1.36, 1.72, 2.16])?;
    println!("combined LR = {panel:.4} -> posterior {:.4}", risk_math::posterior_risk(panel, p)?);

    // a gene with relative risk 2 carried by 20% of the population
    let spec = BinaryGeneSpec::new(0.20, 2.0)?;
    let t = risk_math::solve_binary_table(&spec, p, 1e6)?;
    println!("\n            diseased   healthy");
    println!("carrier   {:>10.1} {:>9.1}", t.a, t.b);
    println!("non-carr. {:>10.1} {:>9.1}", t.c, t.d);
    let (lr_pos, lr_neg) = risk_math::binary_lr(&t)?;
    println!("LR(carrier) = {lr_pos:.4}, LR(non-carrier) = {lr_neg:.4}");
    Ok(())
}
