//! Drive the reproduction commands from code instead of the CLI. Settings
//! take the same keys as the config file and flags.
//!
//!     cargo run --release --example run_experiment

use riskgene::experiments::{self, Command, Settings};

fn main() -> riskgene::Result<()> {
    let settings = Settings::parse(
        "# small AUC grid\n\
         seed = 9\n\
         or_grid = 1.25, 2\n\
         m_grid = 5, 50\n\
         subjects = 20000\n\
         replicates = 3\n",
    )?;
    let out = experiments::run(Command::Figure1, &settings)?;
    for line in out.csv.lines().filter(|l| l.contains(",mean,") || l.starts_with('#')) {
        println!("{line}");
    }
    if !out.succeeded() {
        eprintln!("failed cells: {:?}", out.failures);
    }
    Ok(())
}
