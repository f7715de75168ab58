//! Write a simulated population to CSV with its JSON sidecar and read it back.
//!
//!     cargo run --example population_export [path]

use std::path::PathBuf;

use riskgene::population_sim::{self, sidecar_path, SimParams};

fn main() -> riskgene::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("riskgene_population.csv"));

    let params = SimParams::uniform(10_000, 0.1, 0.15, 1.8, 8, 2024)?;
    let pop = population_sim::simulate_revised(&params)?;
    population_sim::write_population(&pop, &path)?;
    println!("wrote {} and {}", path.display(), sidecar_path(&path).display());

    let back = population_sim::read_population(&path)?;
    assert_eq!(back.status, pop.status);
    println!(
        "read back {} subjects x {} genes, {} cases, procedure {}",
        back.n_subjects(),
        back.n_genes(),
        back.n_cases(),
        back.meta.procedure
    );
    println!("first subject: status {}, genotypes {:?}", back.status[0], back.profile(0));
    Ok(())
}
