//! Group words, dynamical systems, and the canonical product action.
//!
//! A [`GroupWord`] is a reduced word over a system's named generators, or a
//! finitely supported assignment of such words to the factors of a product
//! (1-based factor indices). A [`System`] bundles a point universe, the
//! action of words on points, an exact-or-certified metric, samplers, and
//! the per-system oracles the checkers build on. Product systems apply
//! words coordinatewise and measure with the weighted product metric.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dist::ExactDist;
use crate::error::{Error, Result};
use crate::metric_product::{product_dist, ProductPoint};
use crate::rat::Rat;
use crate::report::{BudgetUsed, Certificate, Status, WitnessReport};
use crate::symbolic_shift::{self, BiSeq};
use crate::torus_dynamics::{self, AnosovMatrix, PillowPoint, TorusPoint};

/// Cap on iterated generator powers inside a single `act`, so untrusted
/// words cannot stall the evaluator.
const MAX_GENERATOR_POWER: i64 = 10_000;

/// Default cap on enumerated words / orbit expansions; the environment
/// variable `CHAOSLAB_MAX_BUDGET` lowers or raises it globally.
pub const DEFAULT_MAX_BUDGET: u64 = 500_000;

pub fn global_budget_cap() -> u64 {
    std::env::var("CHAOSLAB_MAX_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_BUDGET)
}

// --- group words -------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupWord {
    /// Reduced word over named generators: no entry has exponent 0 and no
    /// two adjacent entries share a name. Rightmost entry acts first.
    Leaf(Vec<(String, i64)>),
    /// Finitely supported product word; children are non-identity.
    Product(BTreeMap<usize, GroupWord>),
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::Leaf(Vec::new())
    }

    pub fn single(name: &str, exp: i64) -> Self {
        if exp == 0 {
            GroupWord::identity()
        } else {
            GroupWord::Leaf(vec![(name.to_string(), exp)])
        }
    }

    /// Word acting on factor `i` (1-based) of a product.
    pub fn at_factor(i: usize, word: GroupWord) -> Self {
        assert!(i >= 1, "factor indices are 1-based");
        if word.is_identity() {
            GroupWord::Product(BTreeMap::new())
        } else {
            GroupWord::Product(BTreeMap::from([(i, word)]))
        }
    }

    pub fn product(parts: impl IntoIterator<Item = (usize, GroupWord)>) -> Self {
        let mut map = BTreeMap::new();
        for (i, w) in parts {
            assert!(i >= 1, "factor indices are 1-based");
            if !w.is_identity() {
                map.insert(i, w);
            }
        }
        GroupWord::Product(map)
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupWord::Leaf(entries) => entries.is_empty(),
            GroupWord::Product(parts) => parts.is_empty(),
        }
    }

    /// Total letter count: `Σ |exponent|` over all leaves.
    pub fn len(&self) -> u64 {
        match self {
            GroupWord::Leaf(entries) => entries
                .iter()
                .fold(0u64, |acc, (_, e)| acc.saturating_add(e.unsigned_abs())),
            GroupWord::Product(parts) => parts
                .values()
                .fold(0u64, |acc, w| acc.saturating_add(w.len())),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn inverse(&self) -> GroupWord {
        match self {
            GroupWord::Leaf(entries) => {
                GroupWord::Leaf(entries.iter().rev().map(|(n, e)| (n.clone(), -e)).collect())
            }
            GroupWord::Product(parts) => {
                GroupWord::Product(parts.iter().map(|(i, w)| (*i, w.inverse())).collect())
            }
        }
    }
}

/// Componentwise reduced product `u · v` (with `v` acting first under the
/// action convention `act(u·v, x) = act(u, act(v, x))`).
pub fn compose(u: &GroupWord, v: &GroupWord) -> Result<GroupWord> {
    if u.is_identity() {
        return Ok(v.clone());
    }
    if v.is_identity() {
        return Ok(u.clone());
    }
    match (u, v) {
        (GroupWord::Leaf(a), GroupWord::Leaf(b)) => {
            let mut out: Vec<(String, i64)> = a.clone();
            for (name, exp) in b {
                push_reduced(&mut out, name, *exp);
            }
            Ok(GroupWord::Leaf(out))
        }
        (GroupWord::Product(a), GroupWord::Product(b)) => {
            let mut out = a.clone();
            for (i, w) in b {
                let merged = match out.get(i) {
                    Some(existing) => compose(existing, w)?,
                    None => w.clone(),
                };
                if merged.is_identity() {
                    out.remove(i);
                } else {
                    out.insert(*i, merged);
                }
            }
            Ok(GroupWord::Product(out))
        }
        _ => Err(Error::SignatureMismatch(format!(
            "cannot compose `{u}` with `{v}`"
        ))),
    }
}

fn push_reduced(out: &mut Vec<(String, i64)>, name: &str, exp: i64) {
    if exp == 0 {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.0 == name {
            last.1 = last.1.saturating_add(exp);
            if last.1 == 0 {
                out.pop();
            }
            return;
        }
    }
    out.push((name.to_string(), exp));
}

/// The transitivity witness `g = g₂ g₁⁻¹` assembled from two dense-orbit
/// hits `g₁.x ∈ U`, `g₂.x ∈ V`.
pub fn birkhoff_witness(g1: &GroupWord, g2: &GroupWord) -> Result<GroupWord> {
    compose(g2, &g1.inverse())
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "id");
        }
        match self {
            GroupWord::Leaf(entries) => {
                let parts: Vec<String> = entries
                    .iter()
                    .map(|(n, e)| {
                        if *e == 1 {
                            n.clone()
                        } else {
                            format!("{n}^{e}")
                        }
                    })
                    .collect();
                write!(f, "{}", parts.join("*"))
            }
            GroupWord::Product(parts) => {
                let body: Vec<String> = parts
                    .iter()
                    .map(|(i, w)| match w {
                        GroupWord::Leaf(entries) if entries.len() == 1 => {
                            format!("{}:{:+}", i, entries[0].1)
                        }
                        _ => format!("{i}:({w})"),
                    })
                    .collect();
                write!(f, "{{{}}}", body.join(", "))
            }
        }
    }
}

// --- points -------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Point {
    Seq(BiSeq),
    Torus(TorusPoint),
    Pillow(PillowPoint),
    Affine(Vec<Rat>),
    Discrete(u32),
    Product(ProductPoint),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Seq(s) => write!(f, "{s}"),
            Point::Torus(p) => write!(f, "{p}"),
            Point::Pillow(p) => write!(f, "{p}"),
            Point::Affine(v) => {
                let parts: Vec<String> = v.iter().map(|r| r.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
            Point::Discrete(s) => write!(f, "{s}"),
            Point::Product(p) => {
                let parts: Vec<String> = p
                    .support()
                    .iter()
                    .map(|(i, q)| format!("{i}: {q}"))
                    .collect();
                write!(f, "[{}]", parts.join("; "))
            }
        }
    }
}

// --- systems -------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct System {
    name: String,
    kind: SystemKind,
}

#[derive(Clone, Debug)]
pub enum SystemKind {
    /// Full N-shift on `Σ^N`, generator `shift`.
    Shift { alphabet: u32 },
    /// Anosov torus automorphism, generator `anosov`.
    Anosov { matrix: AnosovMatrix },
    /// Toral linked twist map extended by the identity outside `R`,
    /// generator `twist`.
    LinkedTwist { k: i64, m: i64 },
    /// Induced homeomorphism of the disk `B² = p(R)` on the pillow,
    /// generator `disk`.
    Disk { k: i64, m: i64 },
    /// Translations `x ↦ x + e_i` (generators `t1..tn`) and, when `lambda`
    /// is present, the scaling `x ↦ λx` (generator `scale`) on ℚⁿ.
    Affine { dim: usize, lambda: Option<Rat> },
    /// Finite discrete space with the identity action (no generators).
    Discrete { size: u32 },
    /// Canonical action of a direct product on the product space.
    Product { factors: FactorList },
}

/// Factor list of a product: explicit and finite, or countably infinite by
/// cyclic repetition of a template block.
#[derive(Clone, Debug)]
pub enum FactorList {
    Finite(Vec<System>),
    Cyclic(Vec<System>),
}

impl FactorList {
    /// Factor at 1-based index `i`.
    pub fn factor(&self, i: usize) -> Option<&System> {
        if i == 0 {
            return None;
        }
        match self {
            FactorList::Finite(v) => v.get(i - 1),
            FactorList::Cyclic(v) => v.get((i - 1) % v.len()),
        }
    }

    /// `None` for infinite lists.
    pub fn count(&self) -> Option<usize> {
        match self {
            FactorList::Finite(v) => Some(v.len()),
            FactorList::Cyclic(_) => None,
        }
    }
}

impl System {
    pub fn shift(alphabet: u32) -> Result<System> {
        if alphabet < 2 {
            return Err(Error::ConstructorPrecondition(format!(
                "shift alphabet must be >= 2, got {alphabet}"
            )));
        }
        Ok(System {
            name: format!("shift({alphabet})"),
            kind: SystemKind::Shift { alphabet },
        })
    }

    pub fn anosov(matrix: AnosovMatrix) -> System {
        System {
            name: format!(
                "anosov({},{},{},{})",
                matrix.a, matrix.b, matrix.c, matrix.d
            ),
            kind: SystemKind::Anosov { matrix },
        }
    }

    pub fn anosov_family(k: i64, m: i64) -> Result<System> {
        let matrix = AnosovMatrix::family(k, m)?;
        Ok(System {
            name: format!("anosov({k},{m})"),
            kind: SystemKind::Anosov { matrix },
        })
    }

    pub fn linked_twist(k: i64, m: i64) -> Result<System> {
        check_km(k, m)?;
        Ok(System {
            name: format!("linked_twist({k},{m})"),
            kind: SystemKind::LinkedTwist { k, m },
        })
    }

    pub fn disk(k: i64, m: i64) -> Result<System> {
        check_km(k, m)?;
        Ok(System {
            name: format!("disk({k},{m})"),
            kind: SystemKind::Disk { k, m },
        })
    }

    /// Translations plus scaling by `lambda > 1` on ℚⁿ.
    pub fn affine(dim: usize, lambda: Rat) -> Result<System> {
        if dim == 0 {
            return Err(Error::ConstructorPrecondition(
                "affine dimension must be >= 1".into(),
            ));
        }
        if lambda <= Rat::one() {
            return Err(Error::ConstructorPrecondition(format!(
                "affine scaling must satisfy lambda > 1, got {lambda}"
            )));
        }
        Ok(System {
            name: format!("affine({dim},{lambda})"),
            kind: SystemKind::Affine {
                dim,
                lambda: Some(lambda),
            },
        })
    }

    /// Pure translation (isometry) system on ℚⁿ.
    pub fn translations(dim: usize) -> Result<System> {
        if dim == 0 {
            return Err(Error::ConstructorPrecondition(
                "dimension must be >= 1".into(),
            ));
        }
        Ok(System {
            name: format!("translation({dim})"),
            kind: SystemKind::Affine { dim, lambda: None },
        })
    }

    /// Finite discrete space with the identity action.
    pub fn discrete(size: u32) -> Result<System> {
        if size == 0 {
            return Err(Error::ConstructorPrecondition(
                "discrete size must be >= 1".into(),
            ));
        }
        Ok(System {
            name: format!("discrete({size})"),
            kind: SystemKind::Discrete { size },
        })
    }

    /// Canonical action of the direct product of the factors' groups.
    pub fn product(factors: Vec<System>) -> Result<System> {
        if factors.is_empty() {
            return Err(Error::ConstructorPrecondition(
                "product needs at least one factor".into(),
            ));
        }
        let name = format!(
            "product({})",
            factors
                .iter()
                .map(|f| f.name.clone())
                .collect::<Vec<_>>()
                .join(",")
        );
        Ok(System {
            name,
            kind: SystemKind::Product {
                factors: FactorList::Finite(factors),
            },
        })
    }

    /// Countable product repeating `template` cyclically: factor `i` is
    /// `template[(i-1) mod len]`.
    pub fn product_cyclic(template: Vec<System>) -> Result<System> {
        if template.is_empty() {
            return Err(Error::ConstructorPrecondition(
                "product needs at least one factor".into(),
            ));
        }
        let name = format!(
            "product_cyclic({})",
            template
                .iter()
                .map(|f| f.name.clone())
                .collect::<Vec<_>>()
                .join(",")
        );
        Ok(System {
            name,
            kind: SystemKind::Product {
                factors: FactorList::Cyclic(template),
            },
        })
    }

    pub fn with_name(mut self, name: &str) -> System {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    /// Compact constructor expression, parseable back by the text-form
    /// grammar; recorded in reports for recheck runs.
    pub fn spec_string(&self) -> String {
        match &self.kind {
            SystemKind::Shift { alphabet } => format!("shift({alphabet})"),
            SystemKind::Anosov { matrix } => {
                format!(
                    "anosov({},{},{},{})",
                    matrix.a, matrix.b, matrix.c, matrix.d
                )
            }
            SystemKind::LinkedTwist { k, m } => format!("linked_twist({k},{m})"),
            SystemKind::Disk { k, m } => format!("disk({k},{m})"),
            SystemKind::Affine {
                dim,
                lambda: Some(l),
            } => format!("affine({dim},{l})"),
            SystemKind::Affine { dim, lambda: None } => format!("translation({dim})"),
            SystemKind::Discrete { size } => format!("discrete({size})"),
            SystemKind::Product {
                factors: FactorList::Finite(v),
            } => format!(
                "product({})",
                v.iter()
                    .map(|f| f.spec_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            SystemKind::Product {
                factors: FactorList::Cyclic(v),
            } => format!(
                "product_cyclic({})",
                v.iter()
                    .map(|f| f.spec_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        }
    }

    pub fn product_factors(&self) -> Result<&FactorList> {
        match &self.kind {
            SystemKind::Product { factors } => Ok(factors),
            _ => Err(Error::FactorMismatch(format!(
                "`{}` is not a product system",
                self.name
            ))),
        }
    }

    /// Generator names, in the frozen enumeration order.
    pub fn generator_names(&self) -> Vec<String> {
        match &self.kind {
            SystemKind::Shift { .. } => vec!["shift".into()],
            SystemKind::Anosov { .. } => vec!["anosov".into()],
            SystemKind::LinkedTwist { .. } => vec!["twist".into()],
            SystemKind::Disk { .. } => vec!["disk".into()],
            SystemKind::Affine { dim, lambda } => {
                let mut names: Vec<String> = Vec::new();
                if lambda.is_some() {
                    names.push("scale".into());
                }
                names.extend((1..=*dim).map(|i| format!("t{i}")));
                names.sort();
                names
            }
            SystemKind::Discrete { .. } => vec![],
            SystemKind::Product { .. } => vec![],
        }
    }

    /// The designated base point (the default coordinate of products).
    pub fn base_point(&self) -> Point {
        match &self.kind {
            SystemKind::Shift { alphabet } => {
                Point::Seq(BiSeq::constant(*alphabet, 1).expect("alphabet >= 2"))
            }
            SystemKind::Anosov { .. } | SystemKind::LinkedTwist { .. } => {
                Point::Torus(TorusPoint::origin())
            }
            SystemKind::Disk { .. } => {
                Point::Pillow(torus_dynamics::pillow_project(&TorusPoint::origin()))
            }
            SystemKind::Affine { dim, .. } => Point::Affine(vec![Rat::zero(); *dim]),
            SystemKind::Discrete { .. } => Point::Discrete(1),
            SystemKind::Product { .. } => Point::Product(ProductPoint::base()),
        }
    }

    /// Whether the system's metric is already bounded by 1 (and therefore
    /// enters products untransformed).
    pub fn metric_bounded_by_one(&self) -> bool {
        match &self.kind {
            SystemKind::Shift { .. } => false,  // diameter 3/2
            SystemKind::Affine { .. } => false, // unbounded
            _ => true,
        }
    }

    /// Exact diameter bound of the metric, when finite.
    pub fn metric_diameter(&self) -> Option<Rat> {
        match &self.kind {
            SystemKind::Shift { .. } => Some(Rat::new(3, 2)),
            SystemKind::Anosov { .. }
            | SystemKind::LinkedTwist { .. }
            | SystemKind::Disk { .. } => Some(Rat::new(1, 2)),
            SystemKind::Affine { .. } => None,
            SystemKind::Discrete { .. } => Some(Rat::one()),
            SystemKind::Product { .. } => Some(Rat::one()),
        }
    }

    pub fn validate_point(&self, p: &Point) -> Result<()> {
        let bad = |detail: String| Error::InvalidPoint {
            system: self.name.clone(),
            detail,
        };
        match (&self.kind, p) {
            (SystemKind::Shift { alphabet }, Point::Seq(s)) => {
                if s.alphabet_size() != *alphabet {
                    return Err(bad(format!("alphabet {} != {alphabet}", s.alphabet_size())));
                }
            }
            (SystemKind::Anosov { .. }, Point::Torus(_)) => {}
            (SystemKind::LinkedTwist { .. }, Point::Torus(_)) => {}
            (SystemKind::Disk { k, m }, Point::Pillow(q)) => {
                if !torus_dynamics::in_disk(q, *k, *m) {
                    return Err(Error::OutsideDisk(format!("{q}")));
                }
            }
            (SystemKind::Affine { dim, .. }, Point::Affine(v)) => {
                if v.len() != *dim {
                    return Err(bad(format!("dimension {} != {dim}", v.len())));
                }
            }
            (SystemKind::Discrete { size }, Point::Discrete(v)) => {
                if *v < 1 || v > size {
                    return Err(bad(format!("symbol {v} outside 1..={size}")));
                }
            }
            (SystemKind::Product { factors }, Point::Product(pp)) => {
                for (i, coord) in pp.support() {
                    let factor = factors
                        .factor(*i)
                        .ok_or_else(|| bad(format!("factor index {i} out of range")))?;
                    factor.validate_point(coord)?;
                }
            }
            _ => return Err(bad("point kind does not match system".into())),
        }
        Ok(())
    }

    /// Drop redundant explicit coordinates of product points (recursively),
    /// so structural equality is sound on externally supplied points.
    pub fn canonicalize_point(&self, p: &Point) -> Result<Point> {
        self.validate_point(p)?;
        match (&self.kind, p) {
            (SystemKind::Product { factors }, Point::Product(pp)) => {
                let mut support = BTreeMap::new();
                for (i, coord) in pp.support() {
                    let factor = factors.factor(*i).expect("validated");
                    let coord = factor.canonicalize_point(coord)?;
                    if coord != factor.base_point() {
                        support.insert(*i, coord);
                    }
                }
                Ok(Point::Product(ProductPoint::from_support(support)))
            }
            _ => Ok(p.clone()),
        }
    }

    /// Product point from explicit coordinates (1-based factor indices).
    pub fn product_point(&self, coords: impl IntoIterator<Item = (usize, Point)>) -> Result<Point> {
        let raw = Point::Product(ProductPoint::from_support(coords.into_iter().collect()));
        self.canonicalize_point(&raw)
    }

    // --- the action -----------------------------------------------------------

    pub fn act(&self, word: &GroupWord, point: &Point) -> Result<Point> {
        self.validate_point(point)?;
        if word.is_identity() {
            return Ok(point.clone());
        }
        match (&self.kind, word, point) {
            (SystemKind::Shift { .. }, GroupWord::Leaf(entries), Point::Seq(s)) => {
                let k = leaf_exponent(entries, "shift")?;
                Ok(Point::Seq(s.shift(k)))
            }
            (SystemKind::Anosov { matrix }, GroupWord::Leaf(entries), Point::Torus(p)) => {
                let k = leaf_exponent(entries, "anosov")?;
                let (mat, reps) = if k >= 0 {
                    (*matrix, k)
                } else {
                    (matrix.inverse(), -k)
                };
                check_power(reps)?;
                let mut q = p.clone();
                for _ in 0..reps {
                    q = torus_dynamics::anosov_apply(&mat, &q);
                }
                Ok(Point::Torus(q))
            }
            (SystemKind::LinkedTwist { k, m }, GroupWord::Leaf(entries), Point::Torus(p)) => {
                let e = leaf_exponent(entries, "twist")?;
                check_power(e.abs())?;
                let mut q = p.clone();
                for _ in 0..e.abs() {
                    q = if e >= 0 {
                        torus_dynamics::linked_twist(&q, *k, *m)
                    } else {
                        torus_dynamics::linked_twist_inv(&q, *k, *m)
                    };
                }
                Ok(Point::Torus(q))
            }
            (SystemKind::Disk { k, m }, GroupWord::Leaf(entries), Point::Pillow(p)) => {
                let e = leaf_exponent(entries, "disk")?;
                check_power(e.abs())?;
                let mut q = p.clone();
                for _ in 0..e.abs() {
                    q = if e >= 0 {
                        torus_dynamics::disk_map(&q, *k, *m)?
                    } else {
                        torus_dynamics::disk_map_inv(&q, *k, *m)?
                    };
                }
                Ok(Point::Pillow(q))
            }
            (SystemKind::Affine { dim, lambda }, GroupWord::Leaf(entries), Point::Affine(v)) => {
                let mut coords = v.clone();
                for (name, exp) in entries.iter().rev() {
                    if name == "scale" {
                        let l = lambda.as_ref().ok_or_else(|| {
                            Error::UnknownGenerator(format!(
                                "{name} (no scaling in `{}`)",
                                self.name
                            ))
                        })?;
                        check_power(exp.abs())?;
                        let factor = l.pow(*exp as i32);
                        for c in coords.iter_mut() {
                            *c = &*c * &factor;
                        }
                    } else if let Some(i) =
                        name.strip_prefix('t').and_then(|t| t.parse::<usize>().ok())
                    {
                        if i < 1 || i > *dim {
                            return Err(Error::UnknownGenerator(name.clone()));
                        }
                        coords[i - 1] = &coords[i - 1] + Rat::from_int(*exp);
                    } else {
                        return Err(Error::UnknownGenerator(name.clone()));
                    }
                }
                Ok(Point::Affine(coords))
            }
            (SystemKind::Discrete { .. }, GroupWord::Leaf(entries), Point::Discrete(_)) => {
                Err(Error::UnknownGenerator(format!(
                    "`{}` (discrete systems carry the identity action)",
                    entries[0].0
                )))
            }
            (SystemKind::Product { factors }, GroupWord::Product(parts), Point::Product(pp)) => {
                let mut out = pp.clone();
                for (i, w) in parts {
                    let factor = factors.factor(*i).ok_or_else(|| {
                        Error::SignatureMismatch(format!(
                            "word touches factor {i}, outside `{}`",
                            self.name
                        ))
                    })?;
                    let base = factor.base_point();
                    let current = out.coordinate(*i).cloned().unwrap_or_else(|| base.clone());
                    let moved = factor.act(w, &current)?;
                    out = out.with_coordinate(*i, if moved == base { None } else { Some(moved) });
                }
                Ok(Point::Product(out))
            }
            _ => Err(Error::SignatureMismatch(format!(
                "word `{word}` does not fit system `{}`",
                self.name
            ))),
        }
    }

    // --- the metric -----------------------------------------------------------

    /// The system's declared metric, exact where possible, otherwise an
    /// enclosure of width `<= tol`.
    pub fn dist(&self, x: &Point, y: &Point, tol: &Rat) -> Result<ExactDist> {
        if !tol.is_positive() {
            return Err(Error::NegativeTolerance(tol.to_string()));
        }
        self.validate_point(x)?;
        self.validate_point(y)?;
        match (&self.kind, x, y) {
            (SystemKind::Shift { .. }, Point::Seq(a), Point::Seq(b)) => {
                symbolic_shift::rho(a, b, tol)
            }
            (
                SystemKind::Anosov { .. } | SystemKind::LinkedTwist { .. },
                Point::Torus(a),
                Point::Torus(b),
            ) => Ok(ExactDist::exact(torus_dynamics::torus_dist(a, b))),
            (SystemKind::Disk { .. }, Point::Pillow(a), Point::Pillow(b)) => {
                Ok(ExactDist::exact(torus_dynamics::pillow_dist(a, b)))
            }
            (SystemKind::Affine { .. }, Point::Affine(a), Point::Affine(b)) => {
                let sq = a.iter().zip(b.iter()).fold(Rat::zero(), |acc, (p, q)| {
                    let d = p - q;
                    acc + &d * &d
                });
                Ok(sqrt_enclosure(&sq, tol))
            }
            (SystemKind::Discrete { .. }, Point::Discrete(a), Point::Discrete(b)) => {
                Ok(ExactDist::exact(if a == b {
                    Rat::zero()
                } else {
                    Rat::one()
                }))
            }
            (SystemKind::Product { .. }, Point::Product(a), Point::Product(b)) => {
                product_dist(self, a, b, tol)
            }
            _ => unreachable!("validate_point filters mismatched kinds"),
        }
    }

    // --- samplers ---------------------------------------------------------------

    /// A random point of the space (probe sampler).
    pub fn sample_point<R: Rng>(&self, rng: &mut R) -> Point {
        match &self.kind {
            SystemKind::Shift { alphabet } => {
                Point::Seq(symbolic_shift::sample_seq(*alphabet, rng))
            }
            SystemKind::Anosov { .. } => Point::Torus(torus_dynamics::sample_torus(rng, 64)),
            // the twist dynamics lives on R; points outside are fixed
            SystemKind::LinkedTwist { k, m } => {
                Point::Torus(torus_dynamics::sample_in_r(rng, *k, *m, 64))
            }
            SystemKind::Disk { k, m } => Point::Pillow(torus_dynamics::pillow_project(
                &torus_dynamics::sample_in_r(rng, *k, *m, 64),
            )),
            SystemKind::Affine { dim, .. } => Point::Affine(
                (0..*dim)
                    .map(|_| Rat::new(rng.gen_range(-128..=128), 64))
                    .collect(),
            ),
            SystemKind::Discrete { size } => Point::Discrete(rng.gen_range(1..=*size)),
            SystemKind::Product { factors } => {
                let count = match factors.count() {
                    Some(c) => c,
                    None => 3,
                };
                let mut support = BTreeMap::new();
                for i in 1..=count {
                    let factor = factors.factor(i).expect("within count");
                    let p = factor.sample_point(rng);
                    if p != factor.base_point() {
                        support.insert(i, p);
                    }
                }
                Point::Product(ProductPoint::from_support(support))
            }
        }
    }

    /// A random point of the open ball `D_radius(center)`, certified inside
    /// by construction.
    pub fn sample_ball<R: Rng>(&self, center: &Point, radius: &Rat, rng: &mut R) -> Result<Point> {
        if !radius.is_positive() {
            return Err(Error::NegativeTolerance(radius.to_string()));
        }
        self.validate_point(center)?;
        Ok(match (&self.kind, center) {
            (SystemKind::Shift { .. }, Point::Seq(s)) => {
                Point::Seq(symbolic_shift::sample_in_ball(s, radius, rng))
            }
            (SystemKind::Anosov { .. } | SystemKind::LinkedTwist { .. }, Point::Torus(p)) => {
                Point::Torus(torus_dynamics::sample_ball_torus(p, radius, rng))
            }
            (SystemKind::Disk { k, m }, Point::Pillow(q)) => {
                // sample around the canonical lift; the quotient metric only
                // shrinks distances. Stay inside the disk, falling back to
                // the center (always in its own ball).
                let lift = q.lift().clone();
                let mut pick = q.clone();
                for _ in 0..32 {
                    let c = torus_dynamics::sample_ball_torus(&lift, radius, rng);
                    if torus_dynamics::in_r(&c, *k, *m) {
                        pick = torus_dynamics::pillow_project(&c);
                        break;
                    }
                }
                Point::Pillow(pick)
            }
            (SystemKind::Affine { dim, .. }, Point::Affine(v)) => {
                const M: i64 = 64;
                let n = *dim as i64;
                let mut out = v.clone();
                for c in out.iter_mut() {
                    let j = rng.gen_range(-(M - 1)..M);
                    *c = &*c + radius * Rat::new(j, 2 * n * M);
                }
                Point::Affine(out)
            }
            (SystemKind::Discrete { size }, Point::Discrete(_)) => {
                if *radius > Rat::one() {
                    Point::Discrete(rng.gen_range(1..=*size))
                } else {
                    center.clone()
                }
            }
            (SystemKind::Product { factors }, Point::Product(pp)) => {
                let indices: Vec<usize> = match factors.count() {
                    Some(c) => (1..=c).collect(),
                    None => {
                        let mut v: Vec<usize> = pp.support().keys().copied().collect();
                        for i in 1..=2 {
                            if !v.contains(&i) {
                                v.push(i);
                            }
                        }
                        v.sort_unstable();
                        v
                    }
                };
                let mut out = pp.clone();
                for i in indices {
                    let factor = factors.factor(i).expect("validated");
                    let base = factor.base_point();
                    let current = out.coordinate(i).cloned().unwrap_or_else(|| base.clone());
                    let moved = factor.sample_ball(&current, radius, rng)?;
                    out = out.with_coordinate(i, if moved == base { None } else { Some(moved) });
                }
                Point::Product(out)
            }
            _ => unreachable!("validate_point filters mismatched kinds"),
        })
    }

    // --- orbit letters -----------------------------------------------------------

    /// Positive generator letters relevant for orbit expansion from `point`
    /// (finite products use every factor; cyclic products restrict to the
    /// point's support, which is sound because their base points must be
    /// fixed by the factor generators).
    pub fn letters_for(&self, point: &Point) -> Result<Vec<GroupWord>> {
        match &self.kind {
            SystemKind::Product { factors } => {
                let indices: Vec<usize> = match (factors.count(), point) {
                    (Some(c), _) => (1..=c).collect(),
                    (None, Point::Product(pp)) => {
                        for sys in match factors {
                            FactorList::Cyclic(v) => v.iter(),
                            FactorList::Finite(v) => v.iter(),
                        } {
                            sys.require_fixed_base()?;
                        }
                        pp.support().keys().copied().collect()
                    }
                    (None, _) => {
                        return Err(Error::SignatureMismatch("product point expected".into()))
                    }
                };
                let mut letters = Vec::new();
                for i in indices {
                    let factor = factors.factor(i).expect("within range");
                    for name in factor.generator_names() {
                        letters.push(GroupWord::at_factor(i, GroupWord::single(&name, 1)));
                    }
                    if let SystemKind::Product { .. } = factor.kind {
                        let inner = factor.letters_for(&factor.base_point())?;
                        for l in inner {
                            letters.push(GroupWord::at_factor(i, l));
                        }
                    }
                }
                Ok(letters)
            }
            _ => Ok(self
                .generator_names()
                .iter()
                .map(|n| GroupWord::single(n, 1))
                .collect()),
        }
    }

    /// Errors unless every generator fixes the base point (coordinatewise
    /// for products).
    pub(crate) fn require_fixed_base(&self) -> Result<()> {
        let base = self.base_point();
        let letters = match &self.kind {
            SystemKind::Product { .. } => self.letters_for(&base)?,
            _ => self
                .generator_names()
                .iter()
                .map(|n| GroupWord::single(n, 1))
                .collect(),
        };
        for letter in letters {
            if self.act(&letter, &base)? != base {
                return Err(Error::FactorMismatch(format!(
                    "`{}` does not fix its base point",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

/// The product system carrying the canonical coordinatewise action of the
/// direct product of the factors' groups, measured by the weighted product
/// metric. Equivalent to [`System::product`].
pub fn product_system(factors: Vec<System>) -> Result<System> {
    System::product(factors)
}

fn check_km(k: i64, m: i64) -> Result<()> {
    if k < 3 || m < 3 {
        return Err(Error::ConstructorPrecondition(format!(
            "linked twist requires k, m >= 3, got k={k}, m={m}"
        )));
    }
    Ok(())
}

fn check_power(e: i64) -> Result<()> {
    if e.abs() > MAX_GENERATOR_POWER {
        return Err(Error::BudgetTooLarge(format!(
            "generator power {e} exceeds {MAX_GENERATOR_POWER}"
        )));
    }
    Ok(())
}

fn leaf_exponent(entries: &[(String, i64)], expected: &str) -> Result<i64> {
    let mut total: i64 = 0;
    for (name, exp) in entries {
        if name != expected {
            return Err(Error::UnknownGenerator(name.clone()));
        }
        total = total.saturating_add(*exp);
    }
    Ok(total)
}

/// Enclosure of `sqrt(sq)` with width `<= tol`; exact when the root is
/// rational.
pub(crate) fn sqrt_enclosure(sq: &Rat, tol: &Rat) -> ExactDist {
    debug_assert!(!sq.is_negative());
    if sq.is_zero() {
        return ExactDist::zero();
    }
    // exact if numerator and denominator are perfect squares
    let ns = sq.numer().sqrt();
    let ds = sq.denom().sqrt();
    if &(&ns * &ns) == sq.numer() && &(&ds * &ds) == sq.denom() {
        return ExactDist::exact(Rat::from_big(ns, ds).expect("nonzero denominator"));
    }
    // scale so the integer sqrt gives width 1/(den*s) <= tol
    let mut s = num_bigint::BigInt::from(1);
    let two = num_bigint::BigInt::from(2);
    let target = Rat::one() / tol; // need den * s >= 1/tol
    while Rat::from_big(sq.denom() * &s, 1.into()).unwrap() < target {
        s *= &two;
    }
    let scaled = sq.numer() * sq.denom() * &s * &s;
    let root = scaled.sqrt();
    let lo = Rat::from_big(root.clone(), sq.denom() * &s).expect("nonzero");
    let hi = Rat::from_big(root + 1, sq.denom() * &s).expect("nonzero");
    ExactDist::interval(lo, hi)
}

// --- orbits --------------------------------------------------------------------

/// All reduced words of length at most `max_len` over the system's letters,
/// in the frozen order: by total length, then by first-extension order
/// (letters in declared order, inverse directly after each letter).
pub fn enumerate_words(letters: &[GroupWord], max_len: u64, cap: u64) -> Result<Vec<GroupWord>> {
    let mut seen: BTreeSet<GroupWord> = BTreeSet::new();
    let mut out = vec![GroupWord::identity()];
    seen.insert(GroupWord::identity());
    let mut frontier = vec![GroupWord::identity()];
    let mut signed: Vec<GroupWord> = Vec::new();
    for l in letters {
        signed.push(l.clone());
        signed.push(l.inverse());
    }
    for len in 1..=max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &signed {
                let extended = compose(w, l)?;
                if extended.len() == len && !seen.contains(&extended) {
                    seen.insert(extended.clone());
                    out.push(extended.clone());
                    next.push(extended);
                    if out.len() as u64 > cap {
                        return Err(Error::BudgetTooLarge(format!(
                            "word enumeration exceeded cap {cap}"
                        )));
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(out)
}

/// Orbit points `act(w, x)` over all reduced words of length at most
/// `word_len_max`, deduplicated at resolution `tol` (structurally when
/// `tol = 0`), in deterministic enumeration order.
pub fn orbit_ball(sys: &System, x: &Point, word_len_max: u64, tol: &Rat) -> Result<Vec<Point>> {
    let cap = global_budget_cap();
    let letters = sys.letters_for(x)?;
    let words = enumerate_words(&letters, word_len_max, cap)?;
    let mut reps: Vec<Point> = Vec::new();
    let mut exact_seen: BTreeSet<Point> = BTreeSet::new();
    for w in &words {
        let p = sys.act(w, x)?;
        if tol.is_zero() {
            if exact_seen.insert(p.clone()) {
                reps.push(p);
            }
        } else {
            let mut merged = false;
            for r in &reps {
                if sys.dist(r, &p, tol)?.certified_lt(tol) {
                    merged = true;
                    break;
                }
            }
            if !merged {
                reps.push(p);
            }
        }
    }
    Ok(reps)
}

/// Closure of `x` under the system's letters and their inverses, if it
/// stabilizes within `budget` applications.
pub fn orbit_closure(sys: &System, x: &Point, budget: u64) -> Result<Option<Vec<Point>>> {
    Ok(orbit_closure_counted(sys, x, budget)?.0)
}

/// Like [`orbit_closure`], also reporting how many applications were spent.
pub fn orbit_closure_counted(
    sys: &System,
    x: &Point,
    budget: u64,
) -> Result<(Option<Vec<Point>>, u64)> {
    let letters = sys.letters_for(x)?;
    let mut signed: Vec<GroupWord> = Vec::new();
    for l in &letters {
        signed.push(l.clone());
        signed.push(l.inverse());
    }
    let mut seen: BTreeSet<Point> = BTreeSet::new();
    let mut order: Vec<Point> = Vec::new();
    let mut queue: VecDeque<Point> = VecDeque::new();
    seen.insert(x.clone());
    order.push(x.clone());
    queue.push_back(x.clone());
    let mut used: u64 = 0;
    while let Some(p) = queue.pop_front() {
        for l in &signed {
            if used >= budget {
                return Ok((None, used));
            }
            used += 1;
            let q = sys.act(l, &p)?;
            if seen.insert(q.clone()) {
                order.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    Ok((Some(order), used))
}

/// `FOUND` with the stabilized orbit when closure under all generators
/// stabilizes within `budget` applications; `EXHAUSTED` otherwise (never a
/// claim of infiniteness).
pub fn is_finite_orbit(sys: &System, x: &Point, budget: u64) -> Result<WitnessReport> {
    let mut counters = BudgetUsed::default();
    let (closure, used) = orbit_closure_counted(sys, x, budget)?;
    counters.act_evaluations = used;
    match closure {
        Some(orbit) => Ok(WitnessReport {
            status: Status::Found,
            witness: None,
            certificate: Some(Certificate::FiniteOrbit {
                orbit_len: orbit.len() as u64,
                orbit_sample: orbit.into_iter().take(8).collect(),
            }),
            coverage: None,
            budget_used: counters,
            seed: 0,
        }),
        None => Ok(WitnessReport::exhausted(0, counters)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(pairs: &[(usize, i64)]) -> GroupWord {
        GroupWord::product(
            pairs
                .iter()
                .map(|(i, e)| (*i, GroupWord::single("shift", *e))),
        )
    }

    #[test]
    fn compose_examples() {
        let v = w(&[(1, 2), (3, -1)]);
        assert_eq!(compose(&GroupWord::identity(), &v).unwrap(), v);
        assert_eq!(
            compose(&w(&[(1, 3)]), &w(&[(1, -1)])).unwrap(),
            w(&[(1, 2)])
        );
        assert_eq!(
            compose(&w(&[(1, 1), (2, 1)]), &w(&[(2, -1), (3, 4)])).unwrap(),
            w(&[(1, 1), (3, 4)])
        );
        let u = w(&[(1, 1)]);
        assert_eq!(
            compose(&u.inverse(), &u).unwrap(),
            GroupWord::Product(BTreeMap::new())
        );
    }

    #[test]
    fn leaf_reduction() {
        let a = GroupWord::Leaf(vec![("scale".into(), 1), ("t1".into(), 2)]);
        let b = GroupWord::Leaf(vec![("t1".into(), -2), ("scale".into(), -1)]);
        assert!(compose(&a, &b).unwrap().is_identity());
        let c = compose(&a, &GroupWord::single("t1", 3)).unwrap();
        assert_eq!(
            c,
            GroupWord::Leaf(vec![("scale".into(), 1), ("t1".into(), 5)])
        );
    }

    #[test]
    fn birkhoff_examples() {
        let u = w(&[(1, 3)]);
        assert!(birkhoff_witness(&u, &u).unwrap().is_identity());
        assert_eq!(
            birkhoff_witness(&w(&[(1, 3)]), &w(&[(1, 5)])).unwrap(),
            w(&[(1, 2)])
        );
        assert_eq!(
            birkhoff_witness(&w(&[(1, 1), (2, -2)]), &w(&[(2, 1)])).unwrap(),
            w(&[(1, -1), (2, 3)])
        );
    }

    #[test]
    fn signature_mismatch_detected() {
        let leaf = GroupWord::single("shift", 1);
        let prod = w(&[(1, 1)]);
        assert!(matches!(
            compose(&leaf, &prod),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn word_display() {
        assert_eq!(GroupWord::identity().to_string(), "id");
        assert_eq!(GroupWord::single("shift", 3).to_string(), "shift^3");
        assert_eq!(w(&[(1, 3), (2, -5)]).to_string(), "{1:+3, 2:-5}");
    }

    #[test]
    fn product_action_is_coordinatewise() {
        let sys =
            System::product(vec![System::shift(2).unwrap(), System::shift(2).unwrap()]).unwrap();
        let sigma = BiSeq::eventually_periodic(2, vec![1], vec![2], vec![1], 0).unwrap();
        let tau = BiSeq::eventually_periodic(2, vec![2], vec![1], vec![2], 0).unwrap();
        let x = sys
            .product_point([(1, Point::Seq(sigma.clone())), (2, Point::Seq(tau.clone()))])
            .unwrap();
        let moved = sys.act(&w(&[(1, 1)]), &x).unwrap();
        let expect = sys
            .product_point([
                (1, Point::Seq(sigma.shift(1))),
                (2, Point::Seq(tau.clone())),
            ])
            .unwrap();
        assert_eq!(moved, expect);
        // identity word
        assert_eq!(
            sys.act(&GroupWord::Product(BTreeMap::new()), &x).unwrap(),
            x
        );
    }

    #[test]
    fn unary_product_matches_factor() {
        let factor = System::shift(2).unwrap();
        let sys = System::product(vec![factor.clone()]).unwrap();
        let s = BiSeq::eventually_periodic(2, vec![1], vec![2, 2], vec![1], 0).unwrap();
        let x = sys.product_point([(1, Point::Seq(s.clone()))]).unwrap();
        let moved = sys.act(&w(&[(1, 5)]), &x).unwrap();
        let direct = factor
            .act(&GroupWord::single("shift", 5), &Point::Seq(s))
            .unwrap();
        match (moved, direct) {
            (Point::Product(pp), Point::Seq(t)) => {
                assert_eq!(pp.coordinate(1), Some(&Point::Seq(t)));
            }
            _ => panic!("unexpected kinds"),
        }
    }

    #[test]
    fn product_dist_examples() {
        // two 2-point discrete factors
        let sys = System::product(vec![
            System::discrete(2).unwrap(),
            System::discrete(2).unwrap(),
        ])
        .unwrap();
        let tol = Rat::new(1, 1024);
        let x = sys.product_point([]).unwrap();
        let y1 = sys.product_point([(1, Point::Discrete(2))]).unwrap();
        let y12 = sys
            .product_point([(1, Point::Discrete(2)), (2, Point::Discrete(2))])
            .unwrap();
        assert_eq!(sys.dist(&x, &x, &tol).unwrap(), ExactDist::zero());
        assert_eq!(
            sys.dist(&x, &y1, &tol).unwrap(),
            ExactDist::exact(Rat::new(1, 2))
        );
        assert_eq!(
            sys.dist(&x, &y12, &tol).unwrap(),
            ExactDist::exact(Rat::new(3, 4))
        );
    }

    #[test]
    fn affine_action_examples() {
        let sys = System::affine(2, Rat::from_int(2)).unwrap();
        let origin = sys.base_point();
        let moved = sys.act(&GroupWord::single("t1", 2), &origin).unwrap();
        assert_eq!(moved, Point::Affine(vec![Rat::from_int(2), Rat::zero()]));
        let one = Point::Affine(vec![Rat::one(), Rat::zero()]);
        let scaled = sys.act(&GroupWord::single("scale", 1), &one).unwrap();
        assert_eq!(scaled, Point::Affine(vec![Rat::from_int(2), Rat::zero()]));
        // scale then translate differs from translate then scale
        let w1 = compose(&GroupWord::single("scale", 1), &GroupWord::single("t1", 1)).unwrap();
        let w2 = compose(&GroupWord::single("t1", 1), &GroupWord::single("scale", 1)).unwrap();
        assert_eq!(
            sys.act(&w1, &origin).unwrap(),
            Point::Affine(vec![Rat::from_int(2), Rat::zero()])
        );
        assert_eq!(
            sys.act(&w2, &origin).unwrap(),
            Point::Affine(vec![Rat::one(), Rat::zero()])
        );
    }

    #[test]
    fn orbit_ball_examples() {
        let shift = System::shift(2).unwrap();
        let c1 = shift.base_point();
        let tol = Rat::zero();
        assert_eq!(orbit_ball(&shift, &c1, 0, &tol).unwrap(), vec![c1.clone()]);
        assert_eq!(orbit_ball(&shift, &c1, 5, &tol).unwrap(), vec![c1]);
        let anosov = System::anosov_family(3, 3).unwrap();
        let p = Point::Torus(TorusPoint::new(Rat::new(1, 2), Rat::new(1, 2)));
        let orbit = orbit_ball(&anosov, &p, 8, &tol).unwrap();
        assert_eq!(orbit.len(), 3);
        // closed under the map
        for q in &orbit {
            let img = anosov.act(&GroupWord::single("anosov", 1), q).unwrap();
            assert!(orbit.contains(&img));
        }
    }

    #[test]
    fn finite_orbit_reports() {
        let anosov = System::anosov_family(3, 3).unwrap();
        let fixed = anosov.base_point();
        let rep = is_finite_orbit(&anosov, &fixed, 100).unwrap();
        assert_eq!(rep.status, Status::Found);
        match rep.certificate {
            Some(Certificate::FiniteOrbit { orbit_len, .. }) => assert_eq!(orbit_len, 1),
            _ => panic!("expected finite orbit certificate"),
        }
        // dense seed under the shift: small budget exhausts
        let shift = System::shift(2).unwrap();
        let seed = Point::Seq(crate::symbolic_shift::dense_orbit_seed(2).unwrap());
        let rep = is_finite_orbit(&shift, &seed, 40).unwrap();
        assert_eq!(rep.status, Status::Exhausted);
    }

    #[test]
    fn action_axioms_on_random_words() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let shift2 = System::shift(2).unwrap();
        let shift3 = System::shift(3).unwrap();
        let sys = System::product(vec![shift2, shift3]).unwrap();
        let letters = sys.letters_for(&sys.base_point()).unwrap();
        let words = enumerate_words(&letters, 3, 10_000).unwrap();
        for _ in 0..40 {
            let x = sys.sample_point(&mut rng);
            let u = &words[rng.gen_range(0..words.len())];
            let v = &words[rng.gen_range(0..words.len())];
            let uv = compose(u, v).unwrap();
            let lhs = sys.act(&uv, &x).unwrap();
            let rhs = sys.act(u, &sys.act(v, &x).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "act(u·v) = act(u)∘act(v) for u={u}, v={v}");
            assert_eq!(
                sys.act(&GroupWord::Product(BTreeMap::new()), &x).unwrap(),
                x
            );
        }
    }

    #[test]
    fn enumeration_is_frozen_and_deduplicated() {
        let shift = System::shift(2).unwrap();
        let letters = shift.letters_for(&shift.base_point()).unwrap();
        let words = enumerate_words(&letters, 2, 1000).unwrap();
        let display: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(
            display,
            vec!["id", "shift", "shift^-1", "shift^2", "shift^-2"]
        );
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let affine = System::affine(3, Rat::from_int(2)).unwrap();
        let letters = affine.letters_for(&affine.base_point()).unwrap();
        assert!(matches!(
            enumerate_words(&letters, 20, 200),
            Err(Error::BudgetTooLarge(_))
        ));
    }

    #[test]
    fn ball_samples_stay_inside_their_ball() {
        use rand::SeedableRng;
        let systems = vec![
            System::shift(3).unwrap(),
            System::anosov_family(3, 3).unwrap(),
            System::linked_twist(3, 4).unwrap(),
            System::disk(3, 3).unwrap(),
            System::affine(2, Rat::from_int(2)).unwrap(),
            System::product(vec![
                System::shift(2).unwrap(),
                System::anosov_family(3, 3).unwrap(),
            ])
            .unwrap(),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let radius = Rat::new(1, 8);
        let tol = Rat::new(1, 1 << 16);
        for sys in &systems {
            for _ in 0..25 {
                let center = sys.sample_point(&mut rng);
                let p = sys.sample_ball(&center, &radius, &mut rng).unwrap();
                let d = sys.dist(&center, &p, &tol).unwrap();
                assert!(
                    d.certified_lt(&radius),
                    "sample at distance {} from center exceeds ball {radius} in `{}`",
                    d.value(),
                    sys.name()
                );
            }
        }
    }

    #[test]
    fn sqrt_enclosure_modes() {
        let tol = Rat::new(1, 1 << 30);
        assert_eq!(
            sqrt_enclosure(&Rat::new(9, 4), &tol),
            ExactDist::exact(Rat::new(3, 2))
        );
        let e = sqrt_enclosure(&Rat::from_int(2), &tol);
        assert!(!e.is_exact());
        assert!(e.width() <= tol);
        assert!(e.lo() * e.lo() <= Rat::from_int(2));
        assert!(e.hi() * e.hi() >= Rat::from_int(2));
    }
}
