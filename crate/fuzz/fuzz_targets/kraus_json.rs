#![no_main]

use libfuzzer_sys::fuzz_target;
use qmonogamy_cli::parse_kraus_json;

fuzz_target!(|input: &str| {
    // Errors are fine; a channel that parses must be trace preserving.
    if let Ok(ch) = parse_kraus_json(input) {
        assert!(ch.as_map().tp_deviation() <= 1e-10);
    }
});
