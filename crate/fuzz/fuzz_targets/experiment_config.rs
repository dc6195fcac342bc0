#![no_main]

use libfuzzer_sys::fuzz_target;
use ramgape::harness::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(config) = ExperimentConfig::from_toml_str(text) {
        // Validation must report problems, never panic.
        let _ = config.validate();
        if let Ok(again) = config.to_toml_string() {
            let _ = ExperimentConfig::from_toml_str(&again);
        }
    }
});
