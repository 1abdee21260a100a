//! Distance values with certified error.
//!
//! A metric evaluation either produces the exact rational value or an
//! enclosing interval whose width respects the tolerance the caller asked
//! for. Strict inequalities used in witness certificates go through
//! [`ExactDist::certified_lt`] / [`ExactDist::certified_ge`] so an interval
//! result can never over-claim.

use serde::{Deserialize, Serialize};

use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExactDist {
    Exact { value: Rat },
    Interval { lo: Rat, hi: Rat },
}

impl ExactDist {
    pub fn exact(value: Rat) -> Self {
        ExactDist::Exact { value }
    }

    pub fn interval(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        ExactDist::Interval { lo, hi }
    }

    pub fn zero() -> Self {
        ExactDist::exact(Rat::zero())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ExactDist::Exact { .. })
    }

    pub fn lo(&self) -> &Rat {
        match self {
            ExactDist::Exact { value } => value,
            ExactDist::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rat {
        match self {
            ExactDist::Exact { value } => value,
            ExactDist::Interval { hi, .. } => hi,
        }
    }

    /// Midpoint for intervals, the value itself when exact.
    pub fn value(&self) -> Rat {
        match self {
            ExactDist::Exact { value } => value.clone(),
            ExactDist::Interval { lo, hi } => (lo + hi) * Rat::new(1, 2),
        }
    }

    pub fn width(&self) -> Rat {
        match self {
            ExactDist::Exact { .. } => Rat::zero(),
            ExactDist::Interval { lo, hi } => hi - lo,
        }
    }

    /// True distance is certainly `< bound`.
    pub fn certified_lt(&self, bound: &Rat) -> bool {
        self.hi() < bound
    }

    /// True distance is certainly `>= bound`.
    pub fn certified_ge(&self, bound: &Rat) -> bool {
        self.lo() >= bound
    }

    pub fn add(&self, other: &ExactDist) -> ExactDist {
        match (self, other) {
            (ExactDist::Exact { value: a }, ExactDist::Exact { value: b }) => {
                ExactDist::exact(a + b)
            }
            _ => ExactDist::interval(self.lo() + other.lo(), self.hi() + other.hi()),
        }
    }

    /// Scale by a nonnegative weight.
    pub fn scale(&self, w: &Rat) -> ExactDist {
        debug_assert!(!w.is_negative());
        match self {
            ExactDist::Exact { value } => ExactDist::exact(value * w),
            ExactDist::Interval { lo, hi } => ExactDist::interval(lo * w, hi * w),
        }
    }

    /// Apply a monotone nondecreasing map to the enclosure.
    pub fn map_monotone(&self, f: impl Fn(&Rat) -> Rat) -> ExactDist {
        match self {
            ExactDist::Exact { value } => ExactDist::exact(f(value)),
            ExactDist::Interval { lo, hi } => ExactDist::interval(f(lo), f(hi)),
        }
    }

    /// Enclosure of `max(self, other)`; sound for diameter estimates.
    pub fn join_max(&self, other: &ExactDist) -> ExactDist {
        if self.is_exact() && other.is_exact() {
            ExactDist::exact(self.lo().clone().max(other.lo().clone()))
        } else {
            ExactDist::interval(
                self.lo().clone().max(other.lo().clone()),
                self.hi().clone().max(other.hi().clone()),
            )
        }
    }
}
