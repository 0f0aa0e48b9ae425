#![no_main]

use complex_trees::roots::RootCloud;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(cloud) = RootCloud::from_json(text) {
        let _ = cloud.to_csv();
    }
});
