#![no_main]

use ctree_cli::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let _ = RunConfig::from_json(text);
});
