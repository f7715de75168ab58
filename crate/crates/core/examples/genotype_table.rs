//! Three-genotype gene: Hardy-Weinberg frequencies, the cubic that fixes the
//! disease-by-genotype table, and the per-genotype likelihood ratios.
//!
//!     cargo run --example genotype_table

use riskgene::risk_math::{self, TriGeneSpec};

fn main() -> riskgene::Result<()> {
    let (f, p, or) = (0.1, 0.1, 2.0);
    let n = 1e6;

    let (ee_risk, het, nonrisk) = risk_math::hardy_weinberg(f)?;
    println!("genotype frequencies EE {ee_risk:.4}  Ee {het:.4}  ee {nonrisk:.4}");

    let cubic = risk_math::cubic_coefficients(f, p, or, n)?;
    let [a3, a2, a1, a0] = cubic.coefficients();
    println!("cubic in D: {a3:.4e} D^3 + {a2:.4e} D^2 + {a1:.4e} D + {a0:.4e}");

    let spec = TriGeneSpec::new(f, or)?;
    let t = risk_math::solve_genotype_table(&spec, p, n)?;
    println!("\n       diseased      healthy");
    println!("EE  {:>11.2} {:>12.2}", t.a, t.b);
    println!("Ee  {:>11.2} {:>12.2}", t.c, t.d);
    println!("ee  {:>11.2} {:>12.2}", t.e, t.g);
    println!("largest relative residual {:.1e}", t.max_residual(&spec));

    let lrs = risk_math::genotype_lrs(&t)?;
    println!(
        "\nLR(EE) = {:.4}  LR(Ee) = {:.4}  LR(ee) = {:.4}",
        lrs.lr_ee_risk, lrs.lr_het, lrs.lr_nonrisk
    );
    Ok(())
}
