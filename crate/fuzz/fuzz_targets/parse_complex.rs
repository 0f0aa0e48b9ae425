#![no_main]

use complex_trees::parse::{format_complex, parse_alphabet, parse_complex};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(z) = parse_complex(text) {
        assert!(z.re.is_finite() && z.im.is_finite());
        assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }
    let _ = parse_alphabet(text);
});
