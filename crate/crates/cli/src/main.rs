use std::process::ExitCode;

use clap::Parser;

use qmonogamy_cli::{run, thread_cap, Cli, RunConfig, EXIT_USAGE, THREADS_ENV};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, qmonogamy_cli::CliError> {
    let cap = thread_cap(std::env::var(THREADS_ENV).ok().as_deref())?;
    if let Some(n) = cap {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let cfg = RunConfig::from_cli(cli)?;
    let outcome = run(&cfg)?;
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    if cfg.output.is_none() {
        print!("{}", outcome.document);
    }
    Ok(outcome.exit_code)
}
