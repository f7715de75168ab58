//! How many risk genotypes a test needs before its positive predictive value
//! is five times the background risk.
//!
//!     cargo run --example ppv_genes_needed

use riskgene::evaluation::genes_needed_for_ppv;
use riskgene::risk_math::TriGeneSpec;

fn main() -> riskgene::Result<()> {
    let p = 0.1;
    for f in [0.1, 0.2] {
        println!("allele frequency {f}");
        println!("{:>6} {:>9} {:>8}", "OR", "all EE", "all Ee");
        for or in [1.05, 1.10, 1.25, 1.5, 3.0, 5.0] {
            match genes_needed_for_ppv(&TriGeneSpec::new(f, or)?, p, 5.0) {
                Ok(g) => println!("{or:>6} {:>9} {:>8}", g.smallest, g.largest),
                Err(e) => println!("{or:>6} {e}"),
            }
        }
    }
    Ok(())
}
