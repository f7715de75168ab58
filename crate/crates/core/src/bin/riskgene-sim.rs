use std::path::Path;
use std::process::ExitCode;

use clap::parser::ValueSource;
use clap::{Arg, ArgAction, ArgMatches};
use riskgene::experiments::{self, Command, Settings};

const GLOBAL: &[(&str, &str)] = &[
    ("seed", "master seed (required by stochastic commands)"),
    ("out", "output path (stdout when omitted; population file for `simulate`)"),
    ("config", "flat `key = value` config file; flags override it"),
    ("replicates", "replicates per cell"),
    ("procedure", "janssens | revised (figure1/drift also accept both)"),
    ("threads", "worker threads, 0 = all cores (default: $RISKGENE_THREADS)"),
];

const SWITCHES: &[&str] = &["with_estimates", "sweep_f", "sweep"];

fn about(command: Command) -> &'static str {
    match command {
        Command::Table3 => "likelihood ratios and posteriors of binary-gene tests",
        Command::Table5 => "genes needed for a PPV multiple of background risk",
        Command::Figure1 => "AUC against number of genes",
        Command::Drift => "observed prevalence against number of genes",
        Command::Simulate => "simulate and export one population",
    }
}

fn cli() -> clap::Command {
    let mut root = clap::Command::new(experiments::TOOL)
        .version(experiments::VERSION)
        .about("Reproducible simulations for multi-gene genetic risk tests")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for (name, help) in GLOBAL {
        root = root.arg(Arg::new(*name).long(*name).global(true).value_name("VALUE").help(*help));
    }
    for command in Command::ALL {
        let mut sub = clap::Command::new(command.name()).about(about(command));
        for key in command.keys() {
            if GLOBAL.iter().any(|(g, _)| g == key) {
                continue;
            }
            let arg = Arg::new(*key).long(key.replace('_', "-"));
            sub = sub.arg(if SWITCHES.contains(key) {
                arg.action(ArgAction::SetTrue)
            } else {
                arg.value_name("VALUE")
            });
        }
        if command == Command::Figure1 {
            sub = sub.after_help("--svg <path> also writes a line chart of mean AUC");
        }
        root = root.subcommand(sub);
    }
    root
}

fn settings(matches: &ArgMatches) -> riskgene::Result<Settings> {
    let mut settings = match matches.get_one::<String>("config") {
        Some(path) => Settings::from_file(Path::new(path))?,
        None => Settings::new(),
    };
    for id in matches.ids() {
        let key = id.as_str();
        if key == "config" || matches.value_source(key) != Some(ValueSource::CommandLine) {
            continue;
        }
        if SWITCHES.contains(&key) {
            settings.set(key, matches.get_flag(key).to_string());
        } else if let Some(value) = matches.get_one::<String>(key) {
            settings.set(key, value.clone());
        }
    }
    Ok(settings)
}

fn execute(name: &str, matches: &ArgMatches) -> riskgene::Result<bool> {
    let command: Command = name.parse()?;
    let settings = settings(matches)?;
    let output = experiments::run(command, &settings)?;

    match (command, settings.raw("out")) {
        (Command::Simulate, _) | (_, None) => print!("{}", output.csv),
        (_, Some(path)) => std::fs::write(path, &output.csv)?,
    }
    if let (Some(svg), Some(path)) = (&output.svg, settings.raw("svg")) {
        std::fs::write(path, svg)?;
    }
    for failure in &output.failures {
        eprintln!("failed: {failure}");
    }
    Ok(output.succeeded())
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let Some((name, sub)) = matches.subcommand() else {
        return ExitCode::from(2);
    };
    match execute(name, sub) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
