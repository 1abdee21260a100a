#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(config) = chaos_lab::config::ExperimentConfig::from_json(s) {
            // validated configs must instantiate
            let systems = config.build_systems().expect("validated config builds");
            for check in &config.checks {
                assert!(systems.contains_key(check.system()));
            }
        }
    }
});
