#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = s.parse::<chaos_lab::Rat>() {
            // canonical display re-parses to the same value
            let echoed: chaos_lab::Rat = r.to_string().parse().unwrap();
            assert_eq!(r, echoed);
            let _ = r.to_f64();
            let _ = (&r + &r).abs();
        }
    }
});
