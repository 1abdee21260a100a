//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "seed": 42,
//!   "output": "out",
//!   "systems": [
//!     {"name": "shift2", "kind": "shift(2)"},
//!     {"name": "pair", "kind": "product(shift(2),shift(3))"}
//!   ],
//!   "checks": [
//!     {"check": "chaos", "system": "shift2", "eps": "1/8"},
//!     {"check": "transitivity", "system": "shift2",
//!      "ball_u": "3/4 @ 2 | 1 |  @ 0 | 1", "ball_v": "3/4 @ 2 | 2 |  @ 0 | 2"},
//!     {"check": "sensitivity", "system": "shift2", "delta": "1/2",
//!      "eps_list": ["1/4", "1/16"]},
//!     {"check": "closed_orbit_density", "system": "shift2", "eps": "1/8", "probes": 50},
//!     {"check": "finite_orbit", "system": "cat", "point": "1/2, 1/2", "steps": 10000},
//!     {"check": "equicontinuity", "system": "shift2", "n": 3},
//!     {"check": "orbit_dump", "system": "cat", "point": "1/2, 1/2", "steps": 12}
//!   ]
//! }
//! ```
//!
//! System kinds use the compact spec grammar (`shift(2)`, `anosov(3,3)`,
//! `anosov(a,b,c,d)`, `linked_twist(k,m)`, `disk(k,m)`, `affine(n,λ)`,
//! `translation(n)`, `discrete(n)`, `product(...)`, `product_cyclic(...)`),
//! rationals are `"num/den"` strings, balls are `"radius @ point"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_action::System;
use crate::lab::SearchBudget;
use crate::rat::Rat;
use crate::textform::parse_system_spec;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    /// Output directory for report.json, orbits/*.csv and plotdata/*.csv.
    #[serde(default = "default_output")]
    pub output: String,
    pub systems: Vec<SystemDecl>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

fn default_output() -> String {
    "out".to_string()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDecl {
    pub name: String,
    /// Compact constructor expression, e.g. `product(shift(2),anosov(3,3))`.
    pub kind: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    /// Aggregate chaos check (dense orbit, closed orbits, sensitivity).
    Chaos {
        system: String,
        eps: Rat,
        #[serde(default)]
        budget: SearchBudget,
        #[serde(default)]
        expect: Expectation,
    },
    /// One transitivity search `g(U) ∩ V ≠ ∅`.
    Transitivity {
        system: String,
        ball_u: String,
        ball_v: String,
        #[serde(default)]
        budget: SearchBudget,
        #[serde(default)]
        expect: Expectation,
    },
    /// Sensitivity lower bound at constant `delta`.
    Sensitivity {
        system: String,
        delta: Rat,
        eps_list: Vec<Rat>,
        #[serde(default)]
        budget: SearchBudget,
        #[serde(default)]
        expect: Expectation,
    },
    /// Coverage of sampled probes by closed-orbit points within `eps`.
    ClosedOrbitDensity {
        system: String,
        eps: Rat,
        #[serde(default = "default_probes")]
        probes: u64,
        #[serde(default = "default_verify")]
        verify_budget: u64,
        #[serde(default)]
        expect: Expectation,
    },
    /// Orbit-closure stabilization for one point.
    FiniteOrbit {
        system: String,
        point: String,
        #[serde(default = "default_verify")]
        steps: u64,
        #[serde(default)]
        expect: Expectation,
    },
    /// Equicontinuity candidates for the `1/n` threshold.
    Equicontinuity {
        system: String,
        n: u64,
        #[serde(default)]
        budget: SearchBudget,
        #[serde(default)]
        expect: Expectation,
    },
    /// Orbit CSV dump (exact rows plus a float rendering for plotting).
    OrbitDump {
        system: String,
        point: String,
        steps: u64,
        #[serde(default)]
        word: Option<String>,
        #[serde(default)]
        expect: Expectation,
    },
}

fn default_probes() -> u64 {
    32
}

fn default_verify() -> u64 {
    20_000
}

/// Target status for a check; the run exits 0 only if every check reaches
/// its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    /// The check-specific success status (pass/found/certified).
    #[default]
    Default,
    Pass,
    Found,
    Certified,
    Exhausted,
    /// Informational: any outcome is acceptable.
    Report,
}

impl CheckSpec {
    pub fn system(&self) -> &str {
        match self {
            CheckSpec::Chaos { system, .. }
            | CheckSpec::Transitivity { system, .. }
            | CheckSpec::Sensitivity { system, .. }
            | CheckSpec::ClosedOrbitDensity { system, .. }
            | CheckSpec::FiniteOrbit { system, .. }
            | CheckSpec::Equicontinuity { system, .. }
            | CheckSpec::OrbitDump { system, .. } => system,
        }
    }

    pub fn property(&self) -> &'static str {
        match self {
            CheckSpec::Chaos { .. } => "chaos",
            CheckSpec::Transitivity { .. } => "transitivity",
            CheckSpec::Sensitivity { .. } => "sensitivity",
            CheckSpec::ClosedOrbitDensity { .. } => "closed_orbit_density",
            CheckSpec::FiniteOrbit { .. } => "finite_orbit",
            CheckSpec::Equicontinuity { .. } => "equicontinuity",
            CheckSpec::OrbitDump { .. } => "orbit_dump",
        }
    }

    pub fn expectation(&self) -> Expectation {
        match self {
            CheckSpec::Chaos { expect, .. }
            | CheckSpec::Transitivity { expect, .. }
            | CheckSpec::Sensitivity { expect, .. }
            | CheckSpec::ClosedOrbitDensity { expect, .. }
            | CheckSpec::FiniteOrbit { expect, .. }
            | CheckSpec::Equicontinuity { expect, .. }
            | CheckSpec::OrbitDump { expect, .. } => *expect,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = BTreeMap::new();
        for decl in &self.systems {
            if names.insert(decl.name.clone(), ()).is_some() {
                return Err(Error::ConfigParse(format!(
                    "duplicate system name `{}`",
                    decl.name
                )));
            }
            parse_system_spec(&decl.kind)
                .map_err(|e| Error::ConfigParse(format!("system `{}`: {e}", decl.name)))?;
        }
        for (i, check) in self.checks.iter().enumerate() {
            if !names.contains_key(check.system()) {
                return Err(Error::ConfigParse(format!(
                    "check #{i} references unknown system `{}`",
                    check.system()
                )));
            }
        }
        Ok(())
    }

    /// Instantiate all declared systems, named as declared.
    pub fn build_systems(&self) -> Result<BTreeMap<String, System>> {
        let mut out = BTreeMap::new();
        for decl in &self.systems {
            let sys = parse_system_spec(&decl.kind)
                .map_err(|e| Error::ConfigParse(format!("system `{}`: {e}", decl.name)))?
                .with_name(&decl.name);
            out.insert(decl.name.clone(), sys);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses() {
        let cfg = ExperimentConfig::from_json(
            r#"{
                "seed": 7,
                "systems": [{"name": "s", "kind": "shift(2)"}],
                "checks": [{"check": "chaos", "system": "s", "eps": "1/8"}]
            }"#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.checks.len(), 1);
        let systems = cfg.build_systems().unwrap();
        assert!(systems.contains_key("s"));
    }

    #[test]
    fn empty_checks_is_valid() {
        let cfg =
            ExperimentConfig::from_json(r#"{"systems": [{"name": "s", "kind": "shift(2)"}]}"#)
                .unwrap();
        assert!(cfg.checks.is_empty());
    }

    #[test]
    fn bad_matrix_named_in_error() {
        let err = ExperimentConfig::from_json(
            r#"{"systems": [{"name": "bad", "kind": "anosov(1,1,1,1)"}]}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad"), "{msg}");
        assert!(msg.contains("determinant"), "{msg}");
    }

    #[test]
    fn unknown_system_reference_rejected() {
        let err = ExperimentConfig::from_json(
            r#"{
                "systems": [{"name": "s", "kind": "shift(2)"}],
                "checks": [{"check": "chaos", "system": "t", "eps": "1/8"}]
            }"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("unknown system"));
    }
}
