#![no_main]

use clap::Parser;
use libfuzzer_sys::fuzz_target;
use qmonogamy_cli::{Cli, RunConfig};

// Whitespace-separated argument vectors; only parsing and validation run.
fuzz_target!(|input: &str| {
    let args = std::iter::once("qmonogamy").chain(input.split_whitespace());
    let Ok(cli) = Cli::try_parse_from(args) else {
        return;
    };
    if let Ok(cfg) = RunConfig::from_cli(&cli) {
        assert!(cfg.samples > 0);
        assert!(!cfg.grid.grid().is_empty());
    }
});
