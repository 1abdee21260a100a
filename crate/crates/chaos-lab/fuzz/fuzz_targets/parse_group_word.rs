#![no_main]

use libfuzzer_sys::fuzz_target;

use chaos_lab::textform::{parse_group_word, parse_system_spec};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let contexts = [
        "shift(2)",
        "affine(2,2)",
        "product(shift(2),shift(3))",
        "product(affine(2,2),product(shift(2),discrete(2)))",
    ];
    for spec in contexts {
        let sys = parse_system_spec(spec).unwrap();
        if let Ok(w) = parse_group_word(&sys, s) {
            // reduction invariants survive inversion and composition
            let inv = w.inverse();
            let id = chaos_lab::group_action::compose(&w, &inv).unwrap();
            assert!(id.is_identity());
            let _ = w.len();
            let _ = w.to_string();
        }
    }
});
