//! Text forms for points, words, balls and system specs.
//!
//! These are the grammars used by CLI flags, CSV dumps and JSON configs.
//! All parsers are total on arbitrary input (errors, never panics) and are
//! exercised by the fuzz targets.
//!
//! - rationals: `num/den` or `num`
//! - sequences: `N | left | center @ offset | right` (comma-separated
//!   symbols, center may be empty) or `N | dense @ shift`
//! - torus/pillow points: `x, y`
//! - affine points: `x, y, ...`
//! - group words: `id`, `shift^3*scale^-1`, `{1:+3, 2:-5}`, `{1:(shift^2)}`
//! - balls: `radius @ point`
//! - system specs: `shift(2)`, `anosov(3,3)`, `anosov(1,3,3,10)`,
//!   `linked_twist(3,4)`, `disk(3,3)`, `affine(2,3/2)`, `translation(2)`,
//!   `discrete(4)`, `product(shift(2),shift(3))`, `product_cyclic(...)`

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group_action::{GroupWord, Point, System, SystemKind};
use crate::rat::Rat;
use crate::symbolic_shift::{dense_orbit_seed, BiSeq, MAX_WORD_LEN};
use crate::torus_dynamics::{pillow_project, AnosovMatrix, PillowPoint, TorusPoint};

const MAX_OFFSET: i64 = 1 << 48;
const MAX_EXPONENT: i64 = 1 << 40;
const MAX_DIM: usize = 64;
const MAX_NEST: usize = 12;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_i64_bounded(s: &str, bound: i64, what: &str) -> Result<i64> {
    let v: i64 = s
        .trim()
        .parse()
        .map_err(|_| perr(format!("invalid {what} `{}`", s.trim())))?;
    if v.abs() > bound {
        return Err(perr(format!("{what} {v} out of range ±{bound}")));
    }
    Ok(v)
}

fn parse_symbol_word(s: &str, what: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let sym: u32 = part
            .trim()
            .parse()
            .map_err(|_| perr(format!("invalid symbol `{}` in {what}", part.trim())))?;
        out.push(sym);
        if out.len() > MAX_WORD_LEN {
            return Err(perr(format!("{what} longer than {MAX_WORD_LEN}")));
        }
    }
    Ok(out)
}

/// `N | left | center @ offset | right` or `N | dense @ shift`.
pub fn parse_biseq(s: &str) -> Result<BiSeq> {
    let parts: Vec<&str> = s.split('|').collect();
    match parts.as_slice() {
        [n, rule] => {
            let n: u32 = n
                .trim()
                .parse()
                .map_err(|_| perr("invalid alphabet size"))?;
            let (word, shift) = rule
                .rsplit_once('@')
                .ok_or_else(|| perr("expected `dense @ shift`"))?;
            if word.trim() != "dense" {
                return Err(perr("expected `dense @ shift`"));
            }
            let shift = parse_i64_bounded(shift, MAX_OFFSET, "shift")?;
            Ok(dense_orbit_seed(n)?.shift(shift))
        }
        [n, left, center_at, right] => {
            let n: u32 = n
                .trim()
                .parse()
                .map_err(|_| perr("invalid alphabet size"))?;
            let (center, offset) = center_at
                .rsplit_once('@')
                .ok_or_else(|| perr("expected `center @ offset`"))?;
            let offset = parse_i64_bounded(offset, MAX_OFFSET, "offset")?;
            BiSeq::eventually_periodic(
                n,
                parse_symbol_word(left, "left word")?,
                parse_symbol_word(center, "center word")?,
                parse_symbol_word(right, "right word")?,
                offset,
            )
        }
        _ => Err(perr("expected `N | left | center @ offset | right`")),
    }
}

/// `x, y` (canonicalized into `[-1/2, 1/2)²`).
pub fn parse_torus_point(s: &str) -> Result<TorusPoint> {
    let (x, y) = s.split_once(',').ok_or_else(|| perr("expected `x, y`"))?;
    Ok(TorusPoint::new(x.trim().parse()?, y.trim().parse()?))
}

/// `x, y`, projected onto the pillow.
pub fn parse_pillow_point(s: &str) -> Result<PillowPoint> {
    Ok(pillow_project(&parse_torus_point(s)?))
}

pub fn parse_affine_point(s: &str) -> Result<Vec<Rat>> {
    let coords: Result<Vec<Rat>> = s.split(',').map(|c| c.trim().parse()).collect();
    let coords = coords?;
    if coords.is_empty() || coords.len() > MAX_DIM {
        return Err(perr("expected 1..=64 coordinates"));
    }
    Ok(coords)
}

/// Point in the universe of `sys`; product points use
/// `[1: point; 3: point]`.
pub fn parse_point_for(sys: &System, s: &str) -> Result<Point> {
    let p = parse_point_inner(sys, s, 0)?;
    sys.canonicalize_point(&p)
}

fn parse_point_inner(sys: &System, s: &str, depth: usize) -> Result<Point> {
    if depth > MAX_NEST {
        return Err(perr("point nesting too deep"));
    }
    let s = s.trim();
    match sys.kind() {
        SystemKind::Shift { .. } => Ok(Point::Seq(parse_biseq(s)?)),
        SystemKind::Anosov { .. } | SystemKind::LinkedTwist { .. } => {
            Ok(Point::Torus(parse_torus_point(s)?))
        }
        SystemKind::Disk { .. } => Ok(Point::Pillow(parse_pillow_point(s)?)),
        SystemKind::Affine { .. } => Ok(Point::Affine(parse_affine_point(s)?)),
        SystemKind::Discrete { .. } => Ok(Point::Discrete(
            s.parse().map_err(|_| perr("invalid discrete symbol"))?,
        )),
        SystemKind::Product { factors } => {
            let body = s
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| perr("expected `[i: point; j: point]`"))?;
            let mut coords = Vec::new();
            for entry in split_top_level(body, ';')? {
                let entry = entry.trim();
                if entry.is_empty() {
                    continue;
                }
                let (idx, val) = entry
                    .split_once(':')
                    .ok_or_else(|| perr("expected `index: point`"))?;
                let i: usize = idx
                    .trim()
                    .parse()
                    .map_err(|_| perr("invalid factor index"))?;
                let factor = factors
                    .factor(i)
                    .ok_or_else(|| perr(format!("factor index {i} out of range")))?;
                coords.push((i, parse_point_inner(factor, val, depth + 1)?));
            }
            Ok(Point::Product(
                crate::metric_product::ProductPoint::from_support(coords.into_iter().collect()),
            ))
        }
    }
}

/// `radius @ point` (split at the first `@`, so sequence points keep
/// their own `@`).
pub fn parse_ball(sys: &System, s: &str) -> Result<(Point, Rat)> {
    let (radius, point) = s
        .split_once('@')
        .ok_or_else(|| perr("expected `radius @ point`"))?;
    let radius: Rat = radius.trim().parse()?;
    if !radius.is_positive() {
        return Err(perr("ball radius must be positive"));
    }
    Ok((parse_point_for(sys, point)?, radius))
}

/// Group word in the context of `sys`.
pub fn parse_group_word(sys: &System, s: &str) -> Result<GroupWord> {
    parse_word_inner(sys, s, 0)
}

fn parse_word_inner(sys: &System, s: &str, depth: usize) -> Result<GroupWord> {
    if depth > MAX_NEST {
        return Err(perr("word nesting too deep"));
    }
    let s = s.trim();
    if s == "id" || s.is_empty() {
        return Ok(GroupWord::identity());
    }
    if let Some(body) = s.strip_prefix('{') {
        let body = body.strip_suffix('}').ok_or_else(|| perr("unclosed `{`"))?;
        let factors = sys.product_factors().map_err(|_| {
            perr(format!(
                "`{}` is not a product system; word `{s}` has product form",
                sys.name()
            ))
        })?;
        let mut parts = Vec::new();
        for entry in split_top_level(body, ',')? {
            let entry = entry.trim();
            if entry.is_empty() {
                continue;
            }
            let (idx, val) = entry
                .split_once(':')
                .ok_or_else(|| perr("expected `factor:exponent` or `factor:(word)`"))?;
            let i: usize = idx
                .trim()
                .parse()
                .map_err(|_| perr("invalid factor index"))?;
            let factor = factors
                .factor(i)
                .ok_or_else(|| perr(format!("factor index {i} out of range")))?;
            let val = val.trim();
            let child = if let Some(nested) = val.strip_prefix('(') {
                let nested = nested
                    .strip_suffix(')')
                    .ok_or_else(|| perr("unclosed `(`"))?;
                parse_word_inner(factor, nested, depth + 1)?
            } else {
                let exp = parse_i64_bounded(val, MAX_EXPONENT, "exponent")?;
                let names = factor.generator_names();
                match names.as_slice() {
                    [name] => GroupWord::single(name, exp),
                    [] => return Err(perr(format!("factor {i} has no generators"))),
                    _ => {
                        return Err(perr(format!(
                            "factor {i} has several generators; use `{i}:(name^exp)`"
                        )))
                    }
                }
            };
            parts.push((i, child));
        }
        return Ok(GroupWord::product(parts));
    }
    // leaf form: name^exp*name^exp
    let names = sys.generator_names();
    let mut entries = Vec::new();
    for token in s.split('*') {
        let token = token.trim();
        let (name, exp) = match token.split_once('^') {
            Some((n, e)) => (n.trim(), parse_i64_bounded(e, MAX_EXPONENT, "exponent")?),
            None => (token, 1),
        };
        if !names.iter().any(|n| n == name) {
            return Err(perr(format!(
                "unknown generator `{name}` for `{}`",
                sys.name()
            )));
        }
        if entries.len() >= 256 {
            return Err(perr("word too long"));
        }
        entries.push(GroupWord::single(name, exp));
    }
    let mut out = GroupWord::identity();
    for e in entries {
        out = crate::group_action::compose(&out, &e)?;
    }
    Ok(out)
}

/// `kind(args)` system specs, recursive for products.
pub fn parse_system_spec(s: &str) -> Result<System> {
    parse_spec_inner(s, 0)
}

fn parse_spec_inner(s: &str, depth: usize) -> Result<System> {
    if depth > MAX_NEST {
        return Err(perr("system spec nesting too deep"));
    }
    let s = s.trim();
    let open = s.find('(').ok_or_else(|| perr("expected `kind(args)`"))?;
    let kind = s[..open].trim();
    let rest = &s[open + 1..];
    let body = rest
        .strip_suffix(')')
        .ok_or_else(|| perr("expected closing `)`"))?;
    match kind {
        "shift" => System::shift(body.trim().parse().map_err(|_| perr("invalid alphabet"))?),
        "anosov" => {
            let nums: Result<Vec<i64>> = body
                .split(',')
                .map(|t| parse_i64_bounded(t, 1 << 30, "matrix entry"))
                .collect();
            match nums?.as_slice() {
                [k, m] => System::anosov_family(*k, *m),
                [a, b, c, d] => Ok(System::anosov(AnosovMatrix::new(*a, *b, *c, *d)?)),
                _ => Err(perr("anosov takes (k,m) or (a,b,c,d)")),
            }
        }
        "linked_twist" | "disk" => {
            let nums: Result<Vec<i64>> = body
                .split(',')
                .map(|t| parse_i64_bounded(t, 1 << 30, "parameter"))
                .collect();
            match (kind, nums?.as_slice()) {
                ("linked_twist", [k, m]) => System::linked_twist(*k, *m),
                ("disk", [k, m]) => System::disk(*k, *m),
                _ => Err(perr(format!("{kind} takes (k,m)"))),
            }
        }
        "affine" => {
            let (dim, lambda) = body
                .split_once(',')
                .ok_or_else(|| perr("affine takes (dim, lambda)"))?;
            let dim: usize = dim.trim().parse().map_err(|_| perr("invalid dimension"))?;
            if dim > MAX_DIM {
                return Err(perr(format!("dimension above {MAX_DIM}")));
            }
            System::affine(dim, lambda.trim().parse()?)
        }
        "translation" => {
            let dim: usize = body.trim().parse().map_err(|_| perr("invalid dimension"))?;
            if dim > MAX_DIM {
                return Err(perr(format!("dimension above {MAX_DIM}")));
            }
            System::translations(dim)
        }
        "discrete" => System::discrete(body.trim().parse().map_err(|_| perr("invalid size"))?),
        "product" | "product_cyclic" => {
            let mut children = Vec::new();
            for part in split_top_level(body, ',')? {
                if part.trim().is_empty() {
                    continue;
                }
                children.push(parse_spec_inner(&part, depth + 1)?);
                if children.len() > 32 {
                    return Err(perr("too many product factors"));
                }
            }
            if kind == "product" {
                System::product(children)
            } else {
                System::product_cyclic(children)
            }
        }
        other => Err(perr(format!("unknown system kind `{other}`"))),
    }
}

/// Split on `sep` outside any `(`/`[`/`{` nesting.
fn split_top_level(s: &str, sep: char) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut depth: i32 = 0;
    let mut current = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(perr("unbalanced brackets"));
        }
        if ch == sep && depth == 0 {
            out.push(std::mem::take(&mut current));
        } else {
            current.push(ch);
        }
    }
    if depth != 0 {
        return Err(perr("unbalanced brackets"));
    }
    out.push(current);
    Ok(out)
}

// --- serde glue (string forms) --------------------------------------------------

impl Serialize for BiSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BiSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        parse_biseq(&raw).map_err(serde::de::Error::custom)
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TorusPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        parse_torus_point(&raw).map_err(serde::de::Error::custom)
    }
}

impl Serialize for PillowPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PillowPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        parse_pillow_point(&raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn biseq_round_trip() {
        for text in [
            "2 | 1 | 2 @ 0 | 1",
            "3 | 1,2 | 3 @ -2 | 2,1,1",
            "2 | 1 |  @ 4 | 1,2",
            "2 | dense @ 3",
        ] {
            let parsed = parse_biseq(text).unwrap();
            let echoed = parse_biseq(&parsed.to_string()).unwrap();
            assert_eq!(parsed, echoed, "round trip of `{text}`");
        }
    }

    #[test]
    fn biseq_rejects_garbage() {
        for text in [
            "",
            "1 | 1 | @ 0 | 1",   // alphabet < 2
            "2 | | @ 0 | 1",     // empty left
            "2 | 3 | @ 0 | 1",   // symbol out of range
            "2 | 1 | 2 | 1",     // missing offset
            "2 | 1 | 2 @ x | 1", // bad offset
            "2 | dense",         // missing shift
            "2 | 1 | 1 @ 99999999999999999999 | 1",
        ] {
            assert!(parse_biseq(text).is_err(), "accepted `{text}`");
        }
    }

    #[test]
    fn torus_point_round_trip() {
        let p = parse_torus_point("3/2, -1/3").unwrap();
        assert_eq!(p, parse_torus_point(&p.to_string()).unwrap());
        assert!(parse_torus_point("1/2").is_err());
        assert!(parse_torus_point("a, b").is_err());
    }

    #[test]
    fn system_specs() {
        for text in [
            "shift(2)",
            "anosov(3,3)",
            "anosov(2,1,1,1)",
            "linked_twist(3,4)",
            "disk(3,3)",
            "affine(2,3/2)",
            "translation(3)",
            "discrete(4)",
            "product(shift(2),shift(3))",
            "product(product(shift(2),discrete(2)),anosov(3,3))",
            "product_cyclic(shift(2))",
        ] {
            let sys = parse_system_spec(text).unwrap();
            // spec_string is a stable fixed point of re-parsing
            let echoed = parse_system_spec(&sys.spec_string()).unwrap();
            assert_eq!(echoed.spec_string(), sys.spec_string(), "`{text}`");
        }
        for text in [
            "shift(1)",
            "anosov(1,1,1,1)",
            "anosov(2,2)",
            "nope(3)",
            "product()",
            "affine(0,2)",
        ] {
            assert!(parse_system_spec(text).is_err(), "accepted `{text}`");
        }
    }

    #[test]
    fn group_words() {
        let shift = System::shift(2).unwrap();
        assert!(parse_group_word(&shift, "id").unwrap().is_identity());
        assert_eq!(
            parse_group_word(&shift, "shift^3").unwrap(),
            GroupWord::single("shift", 3)
        );
        assert!(parse_group_word(&shift, "warp^2").is_err());
        let prod = parse_system_spec("product(shift(2),shift(3))").unwrap();
        let w = parse_group_word(&prod, "{1:+3, 2:-5}").unwrap();
        assert_eq!(w.to_string(), "{1:+3, 2:-5}");
        let affine_prod = parse_system_spec("product(affine(2,2),shift(2))").unwrap();
        let w = parse_group_word(&affine_prod, "{1:(scale^-1*t2^4), 2:+1}").unwrap();
        assert_eq!(w.to_string(), "{1:(scale^-1*t2^4), 2:+1}");
        // bare exponents are rejected on multi-generator factors
        assert!(parse_group_word(&affine_prod, "{1:+2}").is_err());
    }

    #[test]
    fn balls_split_on_first_at() {
        let shift = System::shift(2).unwrap();
        let (center, radius) = parse_ball(&shift, "3/4 @ 2 | 1 | 2 @ 0 | 1").unwrap();
        assert_eq!(radius, Rat::new(3, 4));
        assert_eq!(
            center,
            Point::Seq(parse_biseq("2 | 1 | 2 @ 0 | 1").unwrap())
        );
    }

    proptest::proptest! {
        /// Parsers are total: arbitrary input errors out, never panics.
        #[test]
        fn parsers_never_panic(s in "[0-9a-z|@,:/(){}\\[\\];^*+ -]{0,64}") {
            let _ = parse_biseq(&s);
            let _ = parse_torus_point(&s);
            let _ = parse_pillow_point(&s);
            let _ = parse_affine_point(&s);
            let _ = s.parse::<Rat>();
            let _ = parse_system_spec(&s);
            let shift = System::shift(2).unwrap();
            let prod = parse_system_spec("product(affine(2,2),shift(2))").unwrap();
            let _ = parse_group_word(&shift, &s);
            let _ = parse_group_word(&prod, &s);
            let _ = parse_ball(&shift, &s);
            let _ = parse_point_for(&prod, &s);
            let _ = crate::config::ExperimentConfig::from_json(&s);
        }
    }

    #[test]
    fn product_points_parse() {
        let sys = parse_system_spec("product(shift(2),anosov(3,3))").unwrap();
        let p = parse_point_for(&sys, "[1: 2 | 1 | 2 @ 0 | 1; 2: 1/2, 1/3]").unwrap();
        match &p {
            Point::Product(pp) => {
                assert_eq!(pp.support().len(), 2);
            }
            _ => panic!("expected product point"),
        }
        // base-valued coordinates canonicalize away
        let q = parse_point_for(&sys, "[1: 2 | 1 |  @ 0 | 1; 2: 0, 0]").unwrap();
        assert_eq!(
            q,
            Point::Product(crate::metric_product::ProductPoint::base())
        );
    }
}
