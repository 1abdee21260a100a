//! Batch execution of configured checks, with deterministic reports.
//!
//! Checks run in parallel across a thread pool of the requested size, but
//! every probe stream is seeded from `(config seed, check index)` and the
//! results are merged in config order, so `report.json` is byte-identical
//! for any `--jobs` value. Timing fields are logical evaluation counters
//! for the same reason; wall-clock timing goes to stderr only.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{CheckSpec, Expectation, ExperimentConfig};
use crate::error::{Error, Result};
use crate::group_action::{is_finite_orbit, GroupWord, Point, System};
use crate::lab::{
    chaos_check, closed_orbit_density, equicontinuity_candidates, recheck_certificate,
    sensitivity_lower_bound, transitivity_witness, Ball,
};
use crate::report::{BudgetUsed, ChaosReport, Status, WitnessReport};
use crate::textform::{parse_ball, parse_group_word, parse_point_for, parse_system_spec};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FullReport {
    pub seed: u64,
    pub entries: Vec<CheckEntry>,
    pub all_ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckEntry {
    pub index: usize,
    pub property: String,
    pub system: String,
    /// Constructor expression; lets a recheck pass rebuild the system.
    pub system_spec: String,
    pub status: String,
    pub expect: String,
    pub ok: bool,
    pub budgets: serde_json::Value,
    pub seed: u64,
    /// Logical effort counters (deterministic).
    pub timings: BudgetUsed,
    pub detail: CheckDetail,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckDetail {
    Witness(WitnessReport),
    Chaos(ChaosReport),
    Candidates {
        count: u64,
        sample: Vec<Point>,
    },
    OrbitDump {
        csv: String,
        plot: Option<String>,
        rows: u64,
    },
    Error {
        message: String,
    },
}

pub struct RunOutcome {
    pub report: FullReport,
    pub report_path: PathBuf,
}

fn mix_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^ (z >> 31)
}

/// Execute every configured check and write `report.json` (plus any orbit
/// CSV files) under the config's output directory.
pub fn run(config: &ExperimentConfig, base_dir: &Path, jobs: usize) -> Result<RunOutcome> {
    let systems = config.build_systems()?;
    let out_dir = base_dir.join(&config.output);
    fs::create_dir_all(out_dir.join("orbits"))?;
    fs::create_dir_all(out_dir.join("plotdata"))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::ConfigParse(format!("thread pool: {e}")))?;

    let entries: Vec<CheckEntry> = pool.install(|| {
        config
            .checks
            .par_iter()
            .enumerate()
            .map(|(index, check)| run_check(index, check, &systems, config.seed, &out_dir))
            .collect()
    });

    let all_ok = entries.iter().all(|e| e.ok);
    let report = FullReport {
        seed: config.seed,
        entries,
        all_ok,
    };
    let report_path = out_dir.join("report.json");
    let mut bytes = serde_json::to_vec_pretty(&report)?;
    bytes.push(b'\n');
    fs::write(&report_path, bytes)?;
    Ok(RunOutcome {
        report,
        report_path,
    })
}

fn run_check(
    index: usize,
    check: &CheckSpec,
    systems: &BTreeMap<String, System>,
    config_seed: u64,
    out_dir: &Path,
) -> CheckEntry {
    let sys = systems.get(check.system()).expect("validated");
    let seed = mix_seed(config_seed, index);
    let budgets = budgets_json(check);
    let (status, ok, timings, detail) = match execute(check, sys, seed, index, out_dir) {
        Ok((status, ok, timings, detail)) => (status, ok, timings, detail),
        Err(e) => (
            "ERROR".to_string(),
            false,
            BudgetUsed::default(),
            CheckDetail::Error {
                message: e.to_string(),
            },
        ),
    };
    CheckEntry {
        index,
        property: check.property().to_string(),
        system: check.system().to_string(),
        system_spec: sys.spec_string(),
        status,
        expect: expect_label(check),
        ok,
        budgets,
        seed,
        timings,
        detail,
    }
}

fn budgets_json(check: &CheckSpec) -> serde_json::Value {
    match check {
        CheckSpec::Chaos { budget, .. }
        | CheckSpec::Transitivity { budget, .. }
        | CheckSpec::Sensitivity { budget, .. }
        | CheckSpec::Equicontinuity { budget, .. } => {
            serde_json::to_value(budget).unwrap_or_default()
        }
        CheckSpec::ClosedOrbitDensity {
            probes,
            verify_budget,
            ..
        } => serde_json::json!({
            "probes": probes, "verify_budget": verify_budget
        }),
        CheckSpec::FiniteOrbit { steps, .. } => serde_json::json!({ "steps": steps }),
        CheckSpec::OrbitDump { steps, .. } => serde_json::json!({ "steps": steps }),
    }
}

fn expect_label(check: &CheckSpec) -> String {
    let e = match check.expectation() {
        Expectation::Default => default_expectation(check),
        other => other,
    };
    format!("{e:?}").to_lowercase()
}

fn default_expectation(check: &CheckSpec) -> Expectation {
    match check {
        CheckSpec::Chaos { .. } => Expectation::Pass,
        CheckSpec::Transitivity { .. } | CheckSpec::FiniteOrbit { .. } => Expectation::Found,
        CheckSpec::Sensitivity { .. } | CheckSpec::ClosedOrbitDensity { .. } => {
            Expectation::Certified
        }
        CheckSpec::Equicontinuity { .. } | CheckSpec::OrbitDump { .. } => Expectation::Report,
    }
}

fn status_meets(status: &str, expect: Expectation, check: &CheckSpec) -> bool {
    let expect = match expect {
        Expectation::Default => default_expectation(check),
        e => e,
    };
    match expect {
        Expectation::Report => true,
        Expectation::Pass => status == "PASS",
        Expectation::Found => status == "FOUND",
        Expectation::Certified => status == "CERTIFIED_BOUND" || status == "FOUND",
        Expectation::Exhausted => status == "EXHAUSTED",
        Expectation::Default => unreachable!(),
    }
}

fn witness_status(rep: &WitnessReport) -> String {
    match rep.status {
        Status::Found => "FOUND",
        Status::CertifiedBound => "CERTIFIED_BOUND",
        Status::Exhausted => "EXHAUSTED",
    }
    .to_string()
}

type Executed = (String, bool, BudgetUsed, CheckDetail);

fn execute(
    check: &CheckSpec,
    sys: &System,
    seed: u64,
    index: usize,
    out_dir: &Path,
) -> Result<Executed> {
    match check {
        CheckSpec::Chaos {
            eps,
            budget,
            expect,
            ..
        } => {
            let rep = chaos_check(sys, eps, budget, seed)?;
            let status = if rep.pass { "PASS" } else { "FAIL" }.to_string();
            let mut timings = rep.dense_orbit.report.budget_used;
            timings.merge(&rep.closed_orbits.report.budget_used);
            timings.merge(&rep.sensitivity.report.budget_used);
            let ok = status_meets(&status, *expect, check);
            Ok((status, ok, timings, CheckDetail::Chaos(rep)))
        }
        CheckSpec::Transitivity {
            ball_u,
            ball_v,
            budget,
            expect,
            ..
        } => {
            let (cu, ru) = parse_ball(sys, ball_u)?;
            let (cv, rv) = parse_ball(sys, ball_v)?;
            let u = Ball::new(sys, cu, ru)?;
            let v = Ball::new(sys, cv, rv)?;
            let rep = transitivity_witness(sys, &u, &v, budget, seed)?;
            let status = witness_status(&rep);
            let ok = status_meets(&status, *expect, check);
            Ok((status, ok, rep.budget_used, CheckDetail::Witness(rep)))
        }
        CheckSpec::Sensitivity {
            delta,
            eps_list,
            budget,
            expect,
            ..
        } => {
            let rep = sensitivity_lower_bound(sys, delta, eps_list, budget, seed)?;
            let status = witness_status(&rep);
            let ok = status_meets(&status, *expect, check);
            Ok((status, ok, rep.budget_used, CheckDetail::Witness(rep)))
        }
        CheckSpec::ClosedOrbitDensity {
            eps,
            probes,
            verify_budget,
            expect,
            ..
        } => {
            let rep = closed_orbit_density(sys, eps, *probes, *verify_budget, seed)?;
            let status = witness_status(&rep);
            let ok = status_meets(&status, *expect, check);
            Ok((status, ok, rep.budget_used, CheckDetail::Witness(rep)))
        }
        CheckSpec::FiniteOrbit {
            point,
            steps,
            expect,
            ..
        } => {
            let p = parse_point_for(sys, point)?;
            let rep = is_finite_orbit(sys, &p, *steps)?;
            let status = witness_status(&rep);
            let ok = status_meets(&status, *expect, check);
            Ok((status, ok, rep.budget_used, CheckDetail::Witness(rep)))
        }
        CheckSpec::Equicontinuity {
            n, budget, expect, ..
        } => {
            let candidates = equicontinuity_candidates(sys, *n, budget, seed)?;
            let status = format!("CANDIDATES({})", candidates.len());
            let ok = status_meets(&status, *expect, check);
            Ok((
                status,
                ok,
                BudgetUsed {
                    probes: budget.probes,
                    ..Default::default()
                },
                CheckDetail::Candidates {
                    count: candidates.len() as u64,
                    sample: candidates.into_iter().take(4).collect(),
                },
            ))
        }
        CheckSpec::OrbitDump {
            point,
            steps,
            word,
            expect,
            ..
        } => {
            let p = parse_point_for(sys, point)?;
            let w = match word {
                Some(text) => parse_group_word(sys, text)?,
                None => first_generator(sys)?,
            };
            let (csv, plot, rows) = dump_orbit(sys, &p, &w, *steps, index, out_dir)?;
            let status = format!("ROWS({rows})");
            let ok = status_meets(&status, *expect, check);
            Ok((
                status,
                ok,
                BudgetUsed {
                    act_evaluations: rows,
                    ..Default::default()
                },
                CheckDetail::OrbitDump { csv, plot, rows },
            ))
        }
    }
}

fn first_generator(sys: &System) -> Result<GroupWord> {
    let letters = sys.letters_for(&sys.base_point())?;
    letters
        .into_iter()
        .next()
        .ok_or_else(|| Error::ConfigParse(format!("system `{}` has no generators", sys.name())))
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Exact CSV rows plus a float rendering for external plotting.
pub fn dump_orbit(
    sys: &System,
    start: &Point,
    word: &GroupWord,
    steps: u64,
    index: usize,
    out_dir: &Path,
) -> Result<(String, Option<String>, u64)> {
    let cap = crate::group_action::global_budget_cap();
    if steps > cap {
        return Err(Error::BudgetTooLarge(format!(
            "orbit dump of {steps} steps exceeds CHAOSLAB_MAX_BUDGET = {cap}"
        )));
    }
    let mut exact = String::new();
    let mut plot = String::new();
    let (header, plot_header): (&str, Option<&str>) = match start {
        Point::Torus(_) => ("step,x_num,x_den,y_num,y_den\n", Some("step,x,y\n")),
        Point::Pillow(_) => ("step,x_num,x_den,y_num,y_den\n", Some("step,x,y\n")),
        Point::Seq(_) => ("step,sequence\n", Some("step,cantor\n")),
        Point::Affine(_) => ("step,coords\n", Some("step,coords\n")),
        Point::Discrete(_) => ("step,value\n", None),
        Point::Product(_) => ("step,point\n", None),
    };
    exact.push_str(header);
    if let Some(h) = plot_header {
        plot.push_str(h);
    }
    let mut current = start.clone();
    let mut rows = 0u64;
    for step in 0..=steps {
        match &current {
            Point::Torus(p) => {
                exact.push_str(&format!(
                    "{step},{},{},{},{}\n",
                    p.x().numer(),
                    p.x().denom(),
                    p.y().numer(),
                    p.y().denom()
                ));
                plot.push_str(&format!("{step},{},{}\n", p.x().to_f64(), p.y().to_f64()));
            }
            Point::Pillow(q) => {
                let l = q.lift();
                exact.push_str(&format!(
                    "{step},{},{},{},{}\n",
                    l.x().numer(),
                    l.x().denom(),
                    l.y().numer(),
                    l.y().denom()
                ));
                plot.push_str(&format!("{step},{},{}\n", l.x().to_f64(), l.y().to_f64()));
            }
            Point::Seq(s) => {
                exact.push_str(&format!("{step},{}\n", csv_escape(&s.to_string())));
                let c = crate::symbolic_shift::cantor_encode(s, 24);
                plot.push_str(&format!("{step},{}\n", c.to_f64()));
            }
            Point::Affine(v) => {
                let coords: Vec<String> = v.iter().map(|r| r.to_string()).collect();
                exact.push_str(&format!("{step},{}\n", csv_escape(&coords.join(";"))));
                let floats: Vec<String> = v.iter().map(|r| r.to_f64().to_string()).collect();
                plot.push_str(&format!("{step},{}\n", csv_escape(&floats.join(";"))));
            }
            Point::Discrete(d) => exact.push_str(&format!("{step},{d}\n")),
            Point::Product(_) => {
                exact.push_str(&format!("{step},{}\n", csv_escape(&current.to_string())));
            }
        }
        rows += 1;
        if step < steps {
            current = sys.act(word, &current)?;
        }
    }
    let csv_name = format!("orbit_{index:03}.csv");
    fs::write(out_dir.join("orbits").join(&csv_name), exact)?;
    let plot_name = if plot_header.is_some() {
        let name = format!("orbit_{index:03}.csv");
        fs::write(out_dir.join("plotdata").join(&name), plot)?;
        Some(format!("plotdata/{name}"))
    } else {
        None
    };
    Ok((format!("orbits/{csv_name}"), plot_name, rows))
}

/// Re-evaluates every certificate of a written report; returns the indexes
/// that fail.
pub fn recheck_report(report: &FullReport) -> Result<Vec<usize>> {
    let mut failures = Vec::new();
    for entry in &report.entries {
        let sys = parse_system_spec(&entry.system_spec)?.with_name(&entry.system);
        let ok = match &entry.detail {
            CheckDetail::Witness(rep) => match &rep.certificate {
                Some(cert) => recheck_certificate(&sys, cert)?,
                None => true,
            },
            CheckDetail::Chaos(chaos) => {
                let mut ok = true;
                for clause in [&chaos.dense_orbit, &chaos.closed_orbits, &chaos.sensitivity] {
                    if let Some(cert) = &clause.report.certificate {
                        ok &= recheck_certificate(&sys, cert)?;
                    }
                }
                ok
            }
            CheckDetail::Candidates { sample, .. } => {
                sample.iter().all(|p| sys.validate_point(p).is_ok())
            }
            CheckDetail::OrbitDump { .. } => true,
            CheckDetail::Error { .. } => true,
        };
        if !ok {
            failures.push(entry.index);
        }
    }
    Ok(failures)
}

/// Convenience entry point: parse, run, and report from a config file.
pub fn run_config_file(path: &Path, seed_override: Option<u64>, jobs: usize) -> Result<RunOutcome> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::ConfigParse(format!("{}: {e}", path.display())))?;
    let mut config = ExperimentConfig::from_json(&text)
        .map_err(|e| Error::ConfigParse(format!("{}: {e}", path.display())))?;
    if let Some(seed) = seed_override {
        config.seed = seed;
    }
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    run(&config, base, jobs)
}
