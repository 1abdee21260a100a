//! Cross-layer stress: near-valid text forms, randomly corrupted, pushed
//! through the deeper operations behind the parsers (distances, orbit
//! hints, actions on sampled points). Complements the fuzz targets on
//! toolchains without libFuzzer. Exits nonzero on any panic.
//!
//! Usage: `cargo run --example stress -- <seed>`

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHABET: &[u8] = b"0123456789|@,:/(){}[];^*+- deins";

fn mutate(rng: &mut ChaCha8Rng, base: &str) -> String {
    let mut s: Vec<u8> = base.bytes().collect();
    for _ in 0..rng.gen_range(0..6) {
        match rng.gen_range(0..3) {
            0 if !s.is_empty() => {
                let i = rng.gen_range(0..s.len());
                s[i] = ALPHABET[rng.gen_range(0..ALPHABET.len())];
            }
            1 => {
                let i = rng.gen_range(0..=s.len());
                s.insert(i, ALPHABET[rng.gen_range(0..ALPHABET.len())]);
            }
            _ if !s.is_empty() => {
                let i = rng.gen_range(0..s.len());
                s.remove(i);
            }
            _ => {}
        }
    }
    String::from_utf8_lossy(&s).into_owned()
}

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq_bases = [
        "2 | 1 | 2 @ 0 | 1",
        "3 | 1,2 | 3,3,1 @ -2 | 2,1,1",
        "2 | dense @ 5",
        "2 | 1,2,1,2 |  @ 281474976710655 | 2,1",
        "2 | 1 | 2 @ -281474976710655 | 1",
    ];
    let spec_bases = [
        "shift(2)",
        "product(shift(2),anosov(3,3))",
        "product_cyclic(shift(2),discrete(2))",
        "affine(2,1000000000000/999999999999)",
        "linked_twist(3,2147483647)",
    ];
    let tol = chaos_lab::Rat::new(1, 1 << 20);
    let eps = chaos_lab::Rat::new(1, 64);
    let rounds = 40_000u64;
    let start = std::time::Instant::now();
    for i in 0..rounds {
        let pick_a = rng.gen_range(0..seq_bases.len());
        let pick_b = rng.gen_range(0..seq_bases.len());
        let a = mutate(&mut rng, seq_bases[pick_a]);
        let b = mutate(&mut rng, seq_bases[pick_b]);
        if let (Ok(x), Ok(y)) = (
            chaos_lab::textform::parse_biseq(&a),
            chaos_lab::textform::parse_biseq(&b),
        ) {
            let _ = chaos_lab::symbolic_shift::rho(&x, &y, &tol);
            let _ = chaos_lab::symbolic_shift::first_differing_index(&x, &y);
            let _ = chaos_lab::symbolic_shift::periodic_point_near(&x, &eps);
            let _ = x.shift(rng.gen_range(-1000..1000));
        }
        let pick_s = rng.gen_range(0..spec_bases.len());
        let s = mutate(&mut rng, spec_bases[pick_s]);
        if let Ok(sys) = chaos_lab::textform::parse_system_spec(&s) {
            let mut point_rng = ChaCha8Rng::seed_from_u64(i);
            let p = sys.sample_point(&mut point_rng);
            let q = sys.sample_point(&mut point_rng);
            let _ = sys.dist(&p, &q, &tol);
            if let Ok(letters) = sys.letters_for(&p) {
                if let Some(letter) = letters.first() {
                    let _ = sys.act(letter, &p);
                }
            }
        }
        if i % 10_000 == 0 {
            eprintln!("{i}/{rounds} at {:.1?}", start.elapsed());
        }
    }
    println!("stress: {rounds} rounds clean in {:.1?}", start.elapsed());
}
