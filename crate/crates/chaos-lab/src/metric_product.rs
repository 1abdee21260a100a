//! Bounded-metric transform and countable product metrics.
//!
//! A factor metric that is not already bounded by 1 enters the product
//! through `d̃ = d/(1 + d)`; the product metric is the weighted series
//! `d(x, y) = Σ_i 2^{-i} d̃_i(x_i, y_i)` over 1-based factor indices.
//! Points of a product carry explicit coordinates on a finite support and
//! sit at the factor's designated base point beyond it, so the series tail
//! vanishes exactly and distances stay exact whenever the factors are.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dist::ExactDist;
use crate::error::{Error, Result};
use crate::group_action::{Point, System};
use crate::rat::Rat;

/// `d̃ = d/(1 + d)`: strictly increasing, range `[0, 1)`.
pub fn tilde(d_value: &Rat) -> Result<Rat> {
    if d_value.is_negative() {
        return Err(Error::NegativeDistance(d_value.to_string()));
    }
    Ok(d_value / &(Rat::one() + d_value))
}

/// `tilde` applied to a certified distance (monotone, so enclosures map to
/// enclosures and widths only shrink).
pub fn tilde_dist(d: &ExactDist) -> ExactDist {
    d.map_monotone(|v| tilde(v).expect("distances are nonnegative"))
}

/// Upper bound `2^{-m}` on the discarded tail `Σ_{i>m} 2^{-i} d̃_i` when a
/// product evaluation is truncated after factor `m` (each `d̃_i <= 1`).
pub fn truncation_bound(m: u32) -> Rat {
    Rat::pow2(-(m as i64))
}

/// A factor metric evaluator normalized into `[0, 1]`.
pub struct BoundedMetric<'a> {
    base: &'a System,
    bounded: bool,
}

impl<'a> BoundedMetric<'a> {
    pub fn new(base: &'a System) -> Self {
        BoundedMetric {
            base,
            bounded: base.metric_bounded_by_one(),
        }
    }

    pub fn is_already_bounded(&self) -> bool {
        self.bounded
    }

    pub fn evaluate(&self, x: &Point, y: &Point, tol: &Rat) -> Result<ExactDist> {
        let raw = self.base.dist(x, y, tol)?;
        Ok(if self.bounded { raw } else { tilde_dist(&raw) })
    }
}

/// Point of a product system: explicit coordinates on a finite support
/// (1-based factor indices), the factor's base point elsewhere. Kept
/// canonical: stored coordinates differ from the base point.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ProductPoint {
    support: BTreeMap<usize, Point>,
}

impl ProductPoint {
    pub fn base() -> Self {
        ProductPoint {
            support: BTreeMap::new(),
        }
    }

    /// Raw constructor; prefer `System::product_point`, which canonicalizes
    /// against factor base points and validates coordinates.
    pub(crate) fn from_support(support: BTreeMap<usize, Point>) -> Self {
        ProductPoint { support }
    }

    pub fn support(&self) -> &BTreeMap<usize, Point> {
        &self.support
    }

    pub fn coordinate(&self, i: usize) -> Option<&Point> {
        self.support.get(&i)
    }

    pub fn max_support_index(&self) -> usize {
        self.support.keys().next_back().copied().unwrap_or(0)
    }

    pub(crate) fn with_coordinate(&self, i: usize, value: Option<Point>) -> Self {
        let mut support = self.support.clone();
        match value {
            Some(p) => {
                support.insert(i, p);
            }
            None => {
                support.remove(&i);
            }
        }
        ProductPoint { support }
    }
}

#[derive(Serialize, Deserialize)]
struct ProductPointJson(BTreeMap<String, Point>);

impl Serialize for ProductPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProductPointJson(
            self.support
                .iter()
                .map(|(i, p)| (i.to_string(), p.clone()))
                .collect(),
        )
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProductPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ProductPointJson::deserialize(d)?;
        let mut support = BTreeMap::new();
        for (k, v) in raw.0 {
            let i: usize = k.parse().map_err(serde::de::Error::custom)?;
            if i == 0 {
                return Err(serde::de::Error::custom("factor indices are 1-based"));
            }
            support.insert(i, v);
        }
        Ok(ProductPoint { support })
    }
}

/// The weighted product metric `Σ_i 2^{-i} d̃_i(x_i, y_i)`.
///
/// Coordinates outside both supports coincide (common base point), so the
/// tail contributes exactly 0; the result is exact unless some factor
/// metric is itself interval-valued, in which case factor `i` receives a
/// width budget of `tol / 2^{i-1}` and the total width stays `<= tol`.
/// The total never exceeds 1.
pub fn product_dist(
    product: &System,
    x: &ProductPoint,
    y: &ProductPoint,
    tol: &Rat,
) -> Result<ExactDist> {
    if !tol.is_positive() {
        return Err(Error::NegativeTolerance(tol.to_string()));
    }
    let factors = product.product_factors()?;
    let mut total = ExactDist::zero();
    let mut indices: Vec<usize> = x.support.keys().chain(y.support.keys()).copied().collect();
    indices.sort_unstable();
    indices.dedup();
    for i in indices {
        let factor = factors.factor(i).ok_or_else(|| {
            Error::FactorMismatch(format!("factor {i} out of range for `{}`", product.name()))
        })?;
        let base = factor.base_point();
        let xi = x.coordinate(i).unwrap_or(&base);
        let yi = y.coordinate(i).unwrap_or(&base);
        if xi == yi {
            continue;
        }
        let factor_tol = tol * Rat::pow2(-(i as i64 - 1));
        let d = BoundedMetric::new(factor).evaluate(xi, yi, &factor_tol)?;
        total = total.add(&d.scale(&Rat::pow2(-(i as i64))));
    }
    debug_assert!(total.hi() <= &Rat::one());
    debug_assert!(total.width() <= *tol);
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tilde_examples() {
        assert_eq!(tilde(&Rat::zero()).unwrap(), Rat::zero());
        assert_eq!(tilde(&Rat::one()).unwrap(), Rat::new(1, 2));
        assert_eq!(tilde(&Rat::from_int(3)).unwrap(), Rat::new(3, 4));
        assert!(matches!(
            tilde(&Rat::new(-1, 2)),
            Err(Error::NegativeDistance(_))
        ));
        // strictly increasing on a few sample pairs
        let pairs = [
            (Rat::new(1, 3), Rat::new(1, 2)),
            (Rat::new(2, 1), Rat::new(7, 2)),
        ];
        for (a, b) in pairs {
            assert!(tilde(&a).unwrap() < tilde(&b).unwrap());
        }
    }

    #[test]
    fn truncation_bounds() {
        assert_eq!(truncation_bound(1), Rat::new(1, 2));
        assert_eq!(truncation_bound(10), Rat::new(1, 1024));
        let mut prev = truncation_bound(1);
        for m in 2..40 {
            let next = truncation_bound(m);
            assert!(next < prev);
            prev = next;
        }
    }

    #[test]
    fn product_metric_axioms_on_sampled_triples() {
        use rand::SeedableRng;
        let sys = System::product(vec![
            System::shift(2).unwrap(),
            System::anosov_family(3, 3).unwrap(),
            System::translations(1).unwrap(),
        ])
        .unwrap();
        let tol = Rat::new(1, 1 << 20);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..60 {
            let a = sys.sample_point(&mut rng);
            let b = sys.sample_point(&mut rng);
            let c = sys.sample_point(&mut rng);
            let ab = sys.dist(&a, &b, &tol).unwrap();
            let ba = sys.dist(&b, &a, &tol).unwrap();
            assert_eq!(ab, ba, "symmetry is exact");
            assert!(ab.hi() <= &Rat::one(), "product metric bounded by 1");
            assert_eq!(sys.dist(&a, &a, &tol).unwrap(), ExactDist::zero());
            let ac = sys.dist(&a, &c, &tol).unwrap();
            let cb = sys.dist(&c, &b, &tol).unwrap();
            assert!(
                ab.lo() <= &(ac.hi() + cb.hi()),
                "triangle inequality within propagated widths"
            );
            assert!(ab.width() <= tol, "width respects the budget");
        }
    }

    #[test]
    fn two_factor_topology_agreement() {
        // coordinatewise convergence <=> product_dist -> 0, on an explicit
        // sequence of torus pairs approaching the base point
        let torus = System::anosov_family(3, 3).unwrap();
        let sys = System::product(vec![torus.clone(), torus]).unwrap();
        let tol = Rat::new(1, 1 << 30);
        let limit = sys.product_point([]).unwrap();
        let mut prev: Option<Rat> = None;
        for k in 1..=10i64 {
            let coord = crate::torus_dynamics::TorusPoint::new(Rat::pow2(-k), Rat::pow2(-k - 1));
            let xk = sys
                .product_point([
                    (1, Point::Torus(coord.clone())),
                    (2, Point::Torus(coord.clone())),
                ])
                .unwrap();
            let d = sys.dist(&xk, &limit, &tol).unwrap();
            let value = d.value();
            if let Some(p) = prev {
                assert!(value < p, "product distance decreases along the sequence");
            }
            // conversely, each coordinate distance is controlled by the
            // product distance: d_i <= 2^i * d / (1 - d̃ loss) — here both
            // factors are bounded metrics, so d_i = d̃_i <= 2^i d
            let di = crate::torus_dynamics::torus_dist(
                &coord,
                &crate::torus_dynamics::TorusPoint::origin(),
            );
            assert!(
                di <= Rat::from_int(4) * &value,
                "coordinate convergence follows"
            );
            prev = Some(value);
        }
        assert!(prev.unwrap() < Rat::new(1, 512), "distance heads to 0");
    }
}
