use std::process::ExitCode;

use clap::Parser;
use dp_hlog::{render, run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("cannot configure {n} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = run(&RunConfig::from(&cli));
    let text = render(&outcome.artifact);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
            let status = if outcome.exit_code == 0 { "pass" } else { "fail" };
            println!("{}: {status} ({})", cli.command.name(), path.display());
        }
        None => print!("{text}"),
    }
    if let Some(err) = outcome.artifact.get("error") {
        eprintln!("{}: {}", err["family"].as_str().unwrap_or("error"), err["message"].as_str().unwrap_or(""));
    }
    ExitCode::from(outcome.exit_code as u8)
}
