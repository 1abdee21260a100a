#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = chaos_lab::textform::parse_torus_point(s) {
            let echoed = chaos_lab::textform::parse_torus_point(&p.to_string()).unwrap();
            assert_eq!(p, echoed);
            // canonicalization is idempotent and negation is an involution
            assert_eq!(p.neg().neg(), p);
            let q = chaos_lab::torus_dynamics::pillow_project(&p);
            assert_eq!(q, chaos_lab::torus_dynamics::pillow_project(&p.neg()));
        }
    }
});
