#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(seq) = chaos_lab::textform::parse_biseq(s) {
            // canonical form is a fixed point of display/parse
            let echoed = chaos_lab::textform::parse_biseq(&seq.to_string())
                .expect("canonical form must reparse");
            assert_eq!(seq, echoed);
            // total, deterministic coordinates; shift composition
            let _ = seq.symbol_at(-97);
            let _ = seq.symbol_at(1 << 40);
            assert_eq!(seq.shift(5).shift(-5), seq);
        }
    }
});
