#![no_main]

use libfuzzer_sys::fuzz_target;

use chaos_lab::textform::{parse_ball, parse_system_spec};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let contexts = [
        "shift(2)",
        "anosov(3,3)",
        "disk(3,3)",
        "product(shift(2),anosov(3,3))",
    ];
    for spec in contexts {
        let sys = parse_system_spec(spec).unwrap();
        if let Ok((center, radius)) = parse_ball(&sys, s) {
            assert!(radius.is_positive());
            sys.validate_point(&center).unwrap();
        }
    }
});
