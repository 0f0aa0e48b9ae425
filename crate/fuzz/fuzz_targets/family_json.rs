#![no_main]

use complex_trees::family::ParametricFamily;
use complex_trees::Complex64;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(fam) = ParametricFamily::from_json(text) {
        let _ = fam.eval(Complex64::new(0.3, 0.2));
        if fam.is_symbolic() {
            let back = ParametricFamily::from_json(&fam.to_json()).unwrap();
            assert_eq!(back.relations(), fam.relations());
        }
    }
});
