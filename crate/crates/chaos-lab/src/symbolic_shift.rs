//! The space `Σ^N` of bi-infinite sequences over `{1..N}`, its metric, and
//! the full N-shift.
//!
//! Points are stored in a canonical eventually-periodic form: a primitive
//! word repeated toward −∞, a finite center, and a primitive word repeated
//! toward +∞. Canonicalization absorbs everything absorbable into the
//! periodic tails and pins the representation of globally periodic
//! sequences, so structural equality decides sequence equality and facts
//! like "this point has period 7 under the shift" are exact assertions,
//! not numeric ones.
//!
//! A second representation holds the one classical non-periodic point we
//! need: the dense-orbit seed whose right tail concatenates every finite
//! word over the alphabet in length-lexicographic order. Distances
//! involving it are certified intervals instead of closed forms.

use std::fmt;

use rand::Rng;

use crate::dist::ExactDist;
use crate::error::{Error, Result};
use crate::rat::Rat;

/// Hard cap on stored word/center lengths; keeps untrusted input from
/// turning canonicalization or lcm-based distance sums into a DoS.
pub const MAX_WORD_LEN: usize = 4096;
const DIFF_SCAN_BUDGET: i128 = 100_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiSeq {
    repr: Repr,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    Periodic(EpSeq),
    /// `symbol_at(i) = seed_rule(i + shift)`: constant 1 toward −∞, the
    /// length-lex concatenation of all finite words toward +∞.
    DenseSeed {
        alphabet: u32,
        shift: i128,
    },
}

/// Canonical eventually-periodic sequence. `left` is aligned so its last
/// symbol sits at `offset - 1`; `right` starts at `offset + center.len()`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct EpSeq {
    alphabet: u32,
    left: Vec<u32>,
    center: Vec<u32>,
    right: Vec<u32>,
    offset: i128,
}

impl EpSeq {
    fn right_start(&self) -> i128 {
        self.offset + self.center.len() as i128
    }

    fn symbol_at(&self, i: i128) -> u32 {
        let b = self.right_start();
        if i >= b {
            let j = ((i - b) % self.right.len() as i128) as usize;
            self.right[j]
        } else if i >= self.offset {
            self.center[(i - self.offset) as usize]
        } else {
            let d = self.offset - i; // >= 1
            let j = ((d - 1) % self.left.len() as i128) as usize;
            self.left[self.left.len() - 1 - j]
        }
    }
}

/// Largest prefix `w[..p]` with `w = (w[..p])^(n/p)`.
fn primitive_root(w: &[u32]) -> Vec<u32> {
    let n = w.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| w[i] == w[i - p]) {
            return w[..p].to_vec();
        }
    }
    unreachable!("every nonempty word has a primitive root")
}

/// Canonicalize a raw (already validated) representation.
fn canonicalize(
    alphabet: u32,
    left: Vec<u32>,
    center: Vec<u32>,
    right: Vec<u32>,
    offset: i128,
) -> EpSeq {
    let raw = EpSeq {
        alphabet,
        left: primitive_root(&left),
        center,
        right: primitive_root(&right),
        offset,
    };
    let pl = raw.left.len() as i128;
    let pr = raw.right.len() as i128;
    let b0 = raw.right_start();

    // Globally periodic sequences have equal primitive tail periods; pin
    // them to offset 0 with matching words.
    if pl == pr {
        let global = (raw.offset - pr..b0).all(|i| raw.symbol_at(i + pr) == raw.symbol_at(i));
        if global {
            let word: Vec<u32> = (0..pr).map(|i| raw.symbol_at(i)).collect();
            let word = primitive_root(&word);
            return EpSeq {
                alphabet,
                left: word.clone(),
                center: Vec::new(),
                right: word,
                offset: 0,
            };
        }
    }

    // beta: minimal b with s(i + pr) = s(i) for all i >= b. The scan
    // terminates for non-global sequences: sustained matching inside the
    // left tail would force a common period (Fine–Wilf) and hence global
    // periodicity.
    let cap = raw.center.len() as i128 + 2 * (pl + pr) + 8;
    let mut beta = b0;
    let mut steps = 0i128;
    while raw.symbol_at(beta - 1 + pr) == raw.symbol_at(beta - 1) {
        beta -= 1;
        steps += 1;
        assert!(steps <= cap, "beta scan exceeded its termination bound");
    }

    // lambda: maximal l <= beta with s(i - pl) = s(i) for all i < l.
    let mut lambda = raw.offset.min(beta);
    while lambda < beta && raw.symbol_at(lambda) == raw.symbol_at(lambda - pl) {
        lambda += 1;
    }

    EpSeq {
        alphabet,
        left: (0..pl).map(|j| raw.symbol_at(lambda - pl + j)).collect(),
        center: (lambda..beta).map(|i| raw.symbol_at(i)).collect(),
        right: (0..pr).map(|j| raw.symbol_at(beta + j)).collect(),
        offset: lambda,
    }
}

fn check_word(alphabet: u32, w: &[u32], what: &str, nonempty: bool) -> Result<()> {
    if nonempty && w.is_empty() {
        return Err(Error::ConstructorPrecondition(format!(
            "{what} word must be nonempty"
        )));
    }
    if w.len() > MAX_WORD_LEN {
        return Err(Error::ConstructorPrecondition(format!(
            "{what} word longer than {MAX_WORD_LEN}"
        )));
    }
    if let Some(&s) = w.iter().find(|&&s| s < 1 || s > alphabet) {
        return Err(Error::ConstructorPrecondition(format!(
            "symbol {s} outside 1..={alphabet} in {what} word"
        )));
    }
    Ok(())
}

impl BiSeq {
    /// Eventually periodic sequence from raw parts; canonicalized on entry.
    pub fn eventually_periodic(
        alphabet: u32,
        left: Vec<u32>,
        center: Vec<u32>,
        right: Vec<u32>,
        offset: i64,
    ) -> Result<BiSeq> {
        if alphabet < 2 {
            return Err(Error::ConstructorPrecondition(format!(
                "alphabet size must be >= 2, got {alphabet}"
            )));
        }
        check_word(alphabet, &left, "left", true)?;
        check_word(alphabet, &center, "center", false)?;
        check_word(alphabet, &right, "right", true)?;
        Ok(BiSeq {
            repr: Repr::Periodic(canonicalize(alphabet, left, center, right, offset as i128)),
        })
    }

    /// The constant sequence `...sss...`.
    pub fn constant(alphabet: u32, symbol: u32) -> Result<BiSeq> {
        BiSeq::eventually_periodic(alphabet, vec![symbol], vec![], vec![symbol], 0)
    }

    /// Globally periodic sequence with `word[j]` at index `j`.
    pub fn from_cycle(alphabet: u32, word: Vec<u32>) -> Result<BiSeq> {
        BiSeq::eventually_periodic(alphabet, word.clone(), vec![], word, 0)
    }

    pub fn alphabet_size(&self) -> u32 {
        match &self.repr {
            Repr::Periodic(e) => e.alphabet,
            Repr::DenseSeed { alphabet, .. } => *alphabet,
        }
    }

    pub fn is_eventually_periodic(&self) -> bool {
        matches!(self.repr, Repr::Periodic(_))
    }

    /// Exact period when the sequence is globally periodic.
    pub fn global_period(&self) -> Option<u64> {
        match &self.repr {
            Repr::Periodic(e) if e.center.is_empty() && e.left == e.right => {
                Some(e.right.len() as u64)
            }
            _ => None,
        }
    }

    pub fn symbol_at(&self, i: i64) -> u32 {
        self.symbol_at_wide(i as i128)
    }

    fn symbol_at_wide(&self, i: i128) -> u32 {
        match &self.repr {
            Repr::Periodic(e) => e.symbol_at(i),
            Repr::DenseSeed { alphabet, shift } => dense_seed_rule(*alphabet, i + shift),
        }
    }

    /// `shift(s, k)` with `result.symbol_at(i) = s.symbol_at(i + k)`.
    pub fn shift(&self, k: i64) -> BiSeq {
        let repr = match &self.repr {
            Repr::Periodic(e) => {
                // Translation keeps tails canonical, but globally periodic
                // sequences re-pin to offset 0.
                Repr::Periodic(canonicalize(
                    e.alphabet,
                    e.left.clone(),
                    e.center.clone(),
                    e.right.clone(),
                    e.offset - k as i128,
                ))
            }
            Repr::DenseSeed { alphabet, shift } => Repr::DenseSeed {
                alphabet: *alphabet,
                shift: shift + k as i128,
            },
        };
        BiSeq { repr }
    }

    /// Symbols on the inclusive window `[lo, hi]`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<u32> {
        (lo..=hi).map(|i| self.symbol_at(i)).collect()
    }

    pub(crate) fn parts(&self) -> SeqParts<'_> {
        match &self.repr {
            Repr::Periodic(e) => SeqParts::Periodic {
                left: &e.left,
                center: &e.center,
                right: &e.right,
                offset: e.offset,
            },
            Repr::DenseSeed { shift, .. } => SeqParts::DenseSeed { shift: *shift },
        }
    }

    /// Copy with index `i` replaced by `symbol`; only supported for
    /// eventually periodic sequences.
    pub fn with_symbol(&self, i: i64, symbol: u32) -> Result<BiSeq> {
        let e = match &self.repr {
            Repr::Periodic(e) => e,
            Repr::DenseSeed { .. } => {
                return Err(Error::ConstructorPrecondition(
                    "cannot edit a symbol of the dense-orbit seed".into(),
                ))
            }
        };
        if symbol < 1 || symbol > e.alphabet {
            return Err(Error::ConstructorPrecondition(format!(
                "symbol {symbol} outside 1..={}",
                e.alphabet
            )));
        }
        let i = i as i128;
        let lo = e.offset.min(i);
        let hi = e.right_start().max(i + 1);
        if hi - lo > MAX_WORD_LEN as i128 {
            return Err(Error::ConstructorPrecondition(format!(
                "index {i} is too far from the canonical window to edit"
            )));
        }
        let mut center: Vec<u32> = (lo..hi).map(|j| e.symbol_at(j)).collect();
        center[(i - lo) as usize] = symbol;
        // tails re-read at the new boundaries to keep their alignment
        let pl = e.left.len() as i128;
        let pr = e.right.len() as i128;
        let left: Vec<u32> = (lo - pl..lo).map(|j| e.symbol_at(j)).collect();
        let right: Vec<u32> = (hi..hi + pr).map(|j| e.symbol_at(j)).collect();
        Ok(BiSeq {
            repr: Repr::Periodic(canonicalize(e.alphabet, left, center, right, lo)),
        })
    }
}

pub(crate) enum SeqParts<'a> {
    Periodic {
        left: &'a [u32],
        center: &'a [u32],
        right: &'a [u32],
        offset: i128,
    },
    DenseSeed {
        shift: i128,
    },
}

/// `N | left | center @ offset | right`, words as comma-separated symbols;
/// the dense seed prints as `N | dense @ shift`.
impl fmt::Display for BiSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn word(w: &[u32]) -> String {
            w.iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
        match self.parts() {
            SeqParts::Periodic {
                left,
                center,
                right,
                offset,
            } => write!(
                f,
                "{} | {} | {} @ {} | {}",
                self.alphabet_size(),
                word(left),
                word(center),
                offset,
                word(right)
            ),
            SeqParts::DenseSeed { shift } => {
                write!(f, "{} | dense @ {}", self.alphabet_size(), shift)
            }
        }
    }
}

impl fmt::Debug for BiSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiSeq({self})")
    }
}

// --- the dense-orbit seed -------------------------------------------------

/// Symbol of the unshifted seed at index `i`: 1 for `i < 0`, else the
/// `i`-th symbol of the concatenation of all finite words over `{1..N}` in
/// length-lexicographic order.
fn dense_seed_rule(n: u32, i: i128) -> u32 {
    if i < 0 {
        return 1;
    }
    let (word_len, word_index, pos) = dense_seed_locate_index(n, i as u128);
    // Digit `pos` (most significant first) of word_index in base n.
    match pow_u128(n as u128, (word_len - 1 - pos) as u32) {
        Some(p) => ((word_index / p) % n as u128) as u32 + 1,
        None => 1, // unreachable within i128 positions
    }
}

/// For position `i` in the concatenation: (word length, word index within
/// its length class, position inside the word).
fn dense_seed_locate_index(n: u32, i: u128) -> (u64, u128, u64) {
    let n = n as u128;
    let mut cum: u128 = 0;
    let mut len: u64 = 1;
    loop {
        let count = match pow_u128(n, len as u32) {
            Some(c) => c,
            None => u128::MAX,
        };
        let block = count.saturating_mul(len as u128);
        let next = cum.saturating_add(block);
        if i < next {
            let r = i - cum;
            return (len, r / len as u128, (r % len as u128) as u64);
        }
        cum = next;
        len += 1;
    }
}

fn pow_u128(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// A point with dense shift orbit: all-1 left tail, every finite word over
/// `{1..N}` concatenated in length-lex order on the right.
pub fn dense_orbit_seed(n: u32) -> Result<BiSeq> {
    if n < 2 {
        return Err(Error::ConstructorPrecondition(format!(
            "alphabet size must be >= 2, got {n}"
        )));
    }
    Ok(BiSeq {
        repr: Repr::DenseSeed {
            alphabet: n,
            shift: 0,
        },
    })
}

/// Exact shift that makes the (unshifted) dense seed carry `pattern` on
/// positions `[at, at + len)`: locates the pattern as a full word of the
/// length-lex concatenation. Returns `None` on overflow (very long
/// patterns over large alphabets).
pub fn dense_seed_shift_matching(n: u32, pattern: &[u32], at: i64) -> Option<i128> {
    if pattern.is_empty() {
        return Some(-(at as i128));
    }
    let nn = n as u128;
    let len = pattern.len() as u64;
    let mut cum: u128 = 0;
    for l in 1..len {
        let count = pow_u128(nn, l as u32)?;
        cum = cum.checked_add(count.checked_mul(l as u128)?)?;
    }
    let mut index: u128 = 0;
    for &s in pattern {
        debug_assert!((1..=n).contains(&s));
        index = index.checked_mul(nn)?.checked_add((s - 1) as u128)?;
    }
    let pos = cum.checked_add(index.checked_mul(len as u128)?)?;
    if pos > i128::MAX as u128 {
        return None;
    }
    Some(pos as i128 - at as i128)
}

/// For a (possibly shifted) dense seed: the exact `k` with
/// `shift(seed, k)` carrying `pattern` on `[at, at + len)`. `None` for
/// eventually periodic sequences or on overflow.
pub fn dense_seed_hint(seed: &BiSeq, pattern: &[u32], at: i64) -> Option<i64> {
    let internal = match seed.parts() {
        SeqParts::DenseSeed { shift } => shift,
        SeqParts::Periodic { .. } => return None,
    };
    let k0 = dense_seed_shift_matching(seed.alphabet_size(), pattern, at)?;
    let k = k0.checked_sub(internal)?;
    i64::try_from(k).ok()
}

/// Budgeted search of the smallest `k` in `[0, k_max]` with
/// `shift(s, k)` matching `pattern` on `[at, at + len)`.
pub fn search_window_match(s: &BiSeq, pattern: &[u32], at: i64, k_max: i64) -> Option<i64> {
    (0..=k_max).find(|&k| {
        pattern
            .iter()
            .enumerate()
            .all(|(j, &p)| s.symbol_at_wide(at as i128 + j as i128 + k as i128) == p)
    })
}

// --- the metric ------------------------------------------------------------

/// Sequences whose canonical windows stray this far from the origin get
/// interval distances: the exact closed form would need denominators with
/// on the order of `|offset|` bits.
const EXACT_RHO_HORIZON: i128 = 1 << 16;

/// `ρ(σ, τ) = Σ_{i∈ℤ} 2^{-|i|} d(σ_i, τ_i) / (1 + d(σ_i, τ_i))` with the
/// discrete metric on symbols, so every differing index `i` contributes
/// `2^{-|i|}/2`. Exact for eventually periodic pairs (geometric sums over
/// the common eventual periods), a certified interval of width `<= tol`
/// otherwise. The diameter is `3/2`.
pub fn rho(s: &BiSeq, t: &BiSeq, tol: &Rat) -> Result<ExactDist> {
    if s.alphabet_size() != t.alphabet_size() {
        return Err(Error::AlphabetMismatch(
            s.alphabet_size(),
            t.alphabet_size(),
        ));
    }
    if !tol.is_positive() {
        return Err(Error::NegativeTolerance(tol.to_string()));
    }
    if s == t {
        return Ok(ExactDist::zero());
    }
    let half = Rat::new(1, 2);
    match (&s.repr, &t.repr) {
        (Repr::Periodic(a), Repr::Periodic(b))
            if a.offset.abs().max(b.offset.abs()) <= EXACT_RHO_HORIZON
                && a.right_start().max(b.right_start()) <= EXACT_RHO_HORIZON =>
        {
            let pl = lcm(a.left.len(), b.left.len()) as i128;
            let pr = lcm(a.right.len(), b.right.len()) as i128;
            let low = a.offset.min(b.offset).min(0);
            let high = a.right_start().max(b.right_start()).max(0);
            let mut total = Rat::zero();
            // center zone, term by term
            for i in low..high {
                if a.symbol_at(i) != b.symbol_at(i) {
                    total = total + Rat::pow2(-(i.unsigned_abs() as i64)) * &half;
                }
            }
            // right tail: period pr from `high` (high >= 0)
            let right_ratio = Rat::one() / (Rat::one() - Rat::pow2(-(pr as i64)));
            let mut right_sum = Rat::zero();
            for j in 0..pr {
                let i = high + j;
                if a.symbol_at(i) != b.symbol_at(i) {
                    right_sum = right_sum + Rat::pow2(-(i as i64)) * &half;
                }
            }
            total = total + right_sum * right_ratio;
            // left tail: period pl below `low` (low <= 0)
            let left_ratio = Rat::one() / (Rat::one() - Rat::pow2(-(pl as i64)));
            let mut left_sum = Rat::zero();
            for j in 0..pl {
                let i = low - 1 - j;
                if a.symbol_at(i) != b.symbol_at(i) {
                    left_sum = left_sum + Rat::pow2(i as i64) * &half;
                }
            }
            total = total + left_sum * left_ratio;
            Ok(ExactDist::exact(total))
        }
        _ => {
            // No common eventual period: truncate at radius m with
            // 2^{-m} <= tol; the discarded tail is at most
            // Σ_{|i|>m} 2^{-|i|}/2 = 2^{-m}.
            let m = smallest_pow2_le(tol) as i128;
            let mut partial = Rat::zero();
            for i in -m..=m {
                if s.symbol_at_wide(i) != t.symbol_at_wide(i) {
                    partial = partial + Rat::pow2(-(i.unsigned_abs() as i64)) * &half;
                }
            }
            let hi = &partial + Rat::pow2(-(m as i64));
            Ok(ExactDist::interval(partial, hi))
        }
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Smallest `m >= 0` with `2^{-m} < eps`.
pub(crate) fn smallest_pow2_lt(eps: &Rat) -> u32 {
    let mut m = pow2_estimate(eps);
    while Rat::pow2(-(m as i64)) >= *eps {
        m += 1;
    }
    while m > 0 && Rat::pow2(-(m as i64 - 1)) < *eps {
        m -= 1;
    }
    m
}

/// Smallest `m >= 0` with `2^{-m} <= eps`.
pub(crate) fn smallest_pow2_le(eps: &Rat) -> u32 {
    let mut m = pow2_estimate(eps);
    while Rat::pow2(-(m as i64)) > *eps {
        m += 1;
    }
    while m > 0 && Rat::pow2(-(m as i64 - 1)) <= *eps {
        m -= 1;
    }
    m
}

fn pow2_estimate(eps: &Rat) -> u32 {
    if !eps.is_positive() {
        panic!("positive tolerance required");
    }
    let (nb, db) = (eps.numer().bits(), eps.denom().bits());
    db.saturating_sub(nb).min(u32::MAX as u64) as u32
}

// --- periodic points and the Cantor coding ---------------------------------

/// Periodic point within `eps` of `s`: the smallest `m >= 0` with
/// `2^{-m} < eps` gives the `(2m+1)`-periodic repetition of the window
/// `s[-m..=m]`. The result satisfies `shift(τ, 2m+1) = τ` structurally and
/// `ρ(s, τ) <= 2^{-m} < eps`; its period divides `2m + 1`.
pub fn periodic_point_near(s: &BiSeq, eps: &Rat) -> Result<BiSeq> {
    if !eps.is_positive() {
        return Err(Error::NegativeTolerance(eps.to_string()));
    }
    let m = smallest_pow2_lt(eps) as i64;
    let p = 2 * m + 1;
    if p as usize > MAX_WORD_LEN {
        return Err(Error::ConstructorPrecondition(format!(
            "eps = {eps} needs period {p}, beyond the supported {MAX_WORD_LEN}"
        )));
    }
    let word: Vec<u32> = (0..p)
        .map(|i| {
            let j = if i <= m { i } else { i - p };
            s.symbol_at(j)
        })
        .collect();
    BiSeq::from_cycle(s.alphabet_size(), word)
}

/// Smallest-|i| index where the sequences differ, scanning outward from 0.
/// Exact and complete for eventually periodic pairs; budget-bounded when a
/// dense seed is involved.
pub fn first_differing_index(s: &BiSeq, t: &BiSeq) -> Option<i64> {
    if s.alphabet_size() != t.alphabet_size() {
        return None;
    }
    if s == t {
        return None;
    }
    let radius = match (&s.repr, &t.repr) {
        (Repr::Periodic(a), Repr::Periodic(b)) => {
            let pl = lcm(a.left.len(), b.left.len()) as i128;
            let pr = lcm(a.right.len(), b.right.len()) as i128;
            let low = a.offset.min(b.offset).min(0) - pl;
            let high = a.right_start().max(b.right_start()).max(0) + pr;
            low.abs().max(high).min(DIFF_SCAN_BUDGET)
        }
        _ => DIFF_SCAN_BUDGET,
    };
    for r in 0..=radius {
        for i in [r, -r] {
            if s.symbol_at_wide(i) != t.symbol_at_wide(i) {
                return Some(i as i64);
            }
        }
    }
    None
}

/// Fold ℤ into ℕ as 0, 1, −1, 2, −2, … (1-based position `n`).
fn fold_index(n: u32) -> i64 {
    if n % 2 == 0 {
        (n / 2) as i64
    } else {
        -((n / 2) as i64)
    }
}

/// Finite-precision coding of `Σ^N` into the `(2N−1)`-ary Cantor set:
/// symbol `σ` at folded position `n` becomes the even digit `2(σ−1)` of a
/// base-`M` expansion, `M = 2N − 1`. Adding digits moves the value by less
/// than `M^{-digits}`.
pub fn cantor_encode(s: &BiSeq, digits: u32) -> Rat {
    let m = 2 * s.alphabet_size() as i64 - 1;
    let mut value = Rat::zero();
    let mut scale = Rat::one();
    let base = Rat::new(1, m);
    for n in 1..=digits {
        scale = scale * &base;
        let sym = s.symbol_at(fold_index(n));
        let digit = 2 * (sym as i64 - 1);
        value = value + Rat::from_int(digit) * &scale;
    }
    value
}

/// Interval of the stage-`digits` Cantor construction containing the full
/// coding of `s`: `[v, v + M^{-digits}]` for `v = cantor_encode(s, digits)`.
pub fn cantor_window(s: &BiSeq, digits: u32) -> (Rat, Rat) {
    let m = 2 * s.alphabet_size() as i64 - 1;
    let v = cantor_encode(s, digits);
    let hi = &v + Rat::new(1, m).pow(digits as i32);
    (v, hi)
}

// --- samplers (deterministic given the rng) ---------------------------------

fn rand_word<R: Rng>(rng: &mut R, alphabet: u32, len: usize) -> Vec<u32> {
    (0..len).map(|_| rng.gen_range(1..=alphabet)).collect()
}

/// Random eventually periodic sequence with short words.
pub(crate) fn sample_seq<R: Rng>(alphabet: u32, rng: &mut R) -> BiSeq {
    let left_len = rng.gen_range(1..=4);
    let center_len = rng.gen_range(0..=6);
    let right_len = rng.gen_range(1..=4);
    let left = rand_word(rng, alphabet, left_len);
    let center = rand_word(rng, alphabet, center_len);
    let right = rand_word(rng, alphabet, right_len);
    let offset = rng.gen_range(-4..=4);
    BiSeq::eventually_periodic(alphabet, left, center, right, offset)
        .expect("sampled words are valid")
}

/// Point of the open ball `D_radius(center)`: keeps the center's symbols on
/// the window `[-w, w]` with `w = ⌈log2(1/radius)⌉ + 1` (so the distance is
/// at most `2^{-w} <= radius/2`), randomizes bounded bands outside.
pub(crate) fn sample_in_ball<R: Rng>(center: &BiSeq, radius: &Rat, rng: &mut R) -> BiSeq {
    let n = center.alphabet_size();
    let w = (smallest_pow2_le(radius) + 1) as i64;
    let pre_len = rng.gen_range(0..=3);
    let post_len = rng.gen_range(0..=3);
    let mut mid = rand_word(rng, n, pre_len);
    mid.extend(center.window(-w, w));
    let post = rand_word(rng, n, post_len);
    mid.extend(post);
    let left_len = rng.gen_range(1..=3);
    let right_len = rng.gen_range(1..=3);
    let left = rand_word(rng, n, left_len);
    let right = rand_word(rng, n, right_len);
    BiSeq::eventually_periodic(n, left, mid, right, -w - pre_len as i64)
        .expect("sampled words are valid")
}
