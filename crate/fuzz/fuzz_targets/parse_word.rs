#![no_main]

use complex_trees::parse::{parse_ep_word, parse_finite_word};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(w) = parse_ep_word(text) {
        assert_eq!(parse_ep_word(&w.to_string()).unwrap(), w);
    }
    if let Ok(w) = parse_finite_word(text) {
        if !w.is_empty() {
            assert_eq!(parse_finite_word(&w.to_string()).unwrap(), w);
        }
    }
});
