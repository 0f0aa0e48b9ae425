#![no_main]

use complex_trees::connectivity::Certificate;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(cert) = Certificate::from_json(text) {
        assert_eq!(Certificate::from_json(&cert.to_json()).unwrap(), cert);
    }
});
