//! Report and certificate types shared by the orbit machinery, the
//! property checkers and the CLI.
//!
//! Reports never over-claim: `FOUND` and `CERTIFIED_BOUND` always carry a
//! certificate whose strict inequalities can be re-evaluated from scratch,
//! and `EXHAUSTED` asserts nothing beyond "the budget ran out". All
//! counters are logical (evaluation counts), so serialized reports are
//! byte-identical across thread counts and machines.

use serde::{Deserialize, Serialize};

use crate::dist::ExactDist;
use crate::group_action::{GroupWord, Point};
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Found,
    CertifiedBound,
    Exhausted,
}

/// Logical effort counters; these double as the deterministic "timings"
/// recorded in reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetUsed {
    pub act_evaluations: u64,
    pub dist_evaluations: u64,
    pub words_enumerated: u64,
    pub probes: u64,
}

impl BudgetUsed {
    pub fn merge(&mut self, other: &BudgetUsed) {
        self.act_evaluations += other.act_evaluations;
        self.dist_evaluations += other.dist_evaluations;
        self.words_enumerated += other.words_enumerated;
        self.probes += other.probes;
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessReport {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<GroupWord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// Successful probes / total probes for coverage-style checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Coverage>,
    pub budget_used: BudgetUsed,
    pub seed: u64,
}

impl WitnessReport {
    pub fn exhausted(seed: u64, budget_used: BudgetUsed) -> Self {
        WitnessReport {
            status: Status::Exhausted,
            witness: None,
            certificate: None,
            coverage: None,
            budget_used,
            seed,
        }
    }

    pub fn found(&self) -> bool {
        self.status == Status::Found
    }

    pub fn certified(&self) -> bool {
        matches!(self.status, Status::Found | Status::CertifiedBound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub successes: u64,
    pub probes: u64,
}

impl Coverage {
    pub fn full(&self) -> bool {
        self.successes == self.probes
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// A point of `U` carried into `V` by the witness word.
    Transitivity {
        sample: Point,
        image: Point,
        target_center: Point,
        target_radius: Rat,
        distance: ExactDist,
    },
    /// Orbit closure stabilized within budget.
    FiniteOrbit {
        orbit_len: u64,
        /// At most a handful of orbit points, for inspection.
        orbit_sample: Vec<Point>,
    },
    /// Per-probe sensitivity instances `dist(g.u, g.v) >= delta`.
    Sensitivity {
        delta: Rat,
        instances: Vec<SensitivityInstance>,
    },
    /// Per-probe closed-orbit approximations `dist(x, y) < eps`.
    ClosedOrbitDensity {
        eps: Rat,
        instances: Vec<ClosedOrbitInstance>,
    },
    /// Orbit of the seed visiting sampled balls.
    DenseOrbit { instances: Vec<DenseOrbitInstance> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SensitivityInstance {
    pub center: Point,
    pub eps: Rat,
    pub word: GroupWord,
    pub u: Point,
    pub v: Point,
    pub image_distance: ExactDist,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosedOrbitInstance {
    pub probe: Point,
    pub closed_point: Point,
    pub distance: ExactDist,
    /// Orbit length when it was re-verified by closure search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_len: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DenseOrbitInstance {
    pub ball_center: Point,
    pub radius: Rat,
    pub word: GroupWord,
    pub image: Point,
    pub distance: ExactDist,
}

/// Aggregate chaos verdict for one system: dense orbit, closed-orbit
/// density and sensitivity, plus factor cross-checks for products.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChaosReport {
    pub system: String,
    pub eps: Rat,
    pub dense_orbit: ClauseReport,
    pub closed_orbits: ClauseReport,
    pub sensitivity: ClauseReport,
    /// For product systems: the same check on every factor.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<ChaosReport>,
    /// For product systems: whether the product verdict equals the
    /// conjunction of the factor verdicts at equal budgets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product_matches_factors: Option<bool>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClauseReport {
    pub status: Status,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub report: WitnessReport,
}
