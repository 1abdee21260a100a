#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(sys) = chaos_lab::textform::parse_system_spec(s) {
            // spec strings are stable under reparse
            let spec = sys.spec_string();
            let echoed =
                chaos_lab::textform::parse_system_spec(&spec).expect("spec string must reparse");
            assert_eq!(echoed.spec_string(), spec);
            // base point is always valid and at distance 0 from itself
            let base = sys.base_point();
            sys.validate_point(&base).unwrap();
            let d = sys
                .dist(&base, &base, &chaos_lab::Rat::new(1, 1024))
                .unwrap();
            assert!(d.hi().is_zero());
        }
    }
});
