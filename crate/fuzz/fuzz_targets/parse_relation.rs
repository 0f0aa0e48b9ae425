#![no_main]

use complex_trees::parse::{parse_relation, parse_relations};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(r) = parse_relation(text) {
        assert_eq!(parse_relation(&r.to_string()).unwrap(), r);
    }
    let _ = parse_relations(text);
});
