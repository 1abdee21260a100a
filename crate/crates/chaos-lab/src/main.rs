use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chaos_lab::group_action::is_finite_orbit;
use chaos_lab::lab::{sensitivity_lower_bound, transitivity_witness, Ball, SearchBudget};
use chaos_lab::rat::Rat;
use chaos_lab::report::Status;
use chaos_lab::runner::{self, dump_orbit, CheckDetail, FullReport};
use chaos_lab::textform::{parse_ball, parse_group_word, parse_point_for, parse_system_spec};

/// Construct chaotic group actions (shifts, torus automorphisms, linked
/// twist maps, products) and verify their defining properties with exact
/// arithmetic and budgeted certified searches.
#[derive(Parser)]
#[command(name = "chaos-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// RNG seed (overrides the config seed where applicable).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; never changes results, only wall time.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Interval tolerance for auxiliary distance output.
    #[arg(long, global = true, default_value = "1/1048576")]
    tol: String,
}

#[derive(Subcommand)]
enum Command {
    /// Run all checks of a JSON experiment config; exit 0 iff every check
    /// reaches its target status.
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Dump the orbit of a point under repeated application of a word
    /// (default: the system's first generator) as CSV.
    Orbit {
        #[arg(long)]
        system: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        word: Option<String>,
        /// Output directory (orbits/ and plotdata/ are created inside).
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// One-shot transitivity search between two balls.
    Witness {
        #[arg(long)]
        system: String,
        #[arg(long = "ballU")]
        ball_u: String,
        #[arg(long = "ballV")]
        ball_v: String,
        /// Maximum word length enumerated.
        #[arg(long, default_value_t = 8)]
        budget: u64,
        #[arg(long, default_value_t = 12)]
        samples: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sensitivity lower-bound search at a given constant.
    Sensitivity {
        #[arg(long)]
        system: String,
        #[arg(long)]
        delta: String,
        /// Comma-separated list of ball radii to probe.
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 16)]
        probes: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Check that a point's orbit closure stabilizes within a budget.
    FiniteOrbit {
        #[arg(long)]
        system: String,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 20_000)]
        steps: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Summarize (and optionally re-verify) a written report.json.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        /// Re-evaluate every certificate in the report.
        #[arg(long)]
        recheck: bool,
    },
}

fn main() -> ExitCode {
    // die quietly when a pipe closes early (e.g. `orbit ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match dispatch() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_rat(s: &str) -> chaos_lab::Result<Rat> {
    s.parse()
}

fn dispatch() -> chaos_lab::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, common } => {
            let started = std::time::Instant::now();
            let outcome = runner::run_config_file(&config, common.seed, common.jobs)?;
            eprintln!(
                "ran {} checks in {:.2?} -> {}",
                outcome.report.entries.len(),
                started.elapsed(),
                outcome.report_path.display()
            );
            print_summary(&outcome.report);
            Ok(if outcome.report.all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Orbit {
            system,
            point,
            steps,
            word,
            out,
            common,
        } => {
            let sys = parse_system_spec(&system)?;
            let p = parse_point_for(&sys, &point)?;
            let w = match &word {
                Some(text) => parse_group_word(&sys, text)?,
                None => {
                    let letters = sys.letters_for(&p)?;
                    letters.into_iter().next().ok_or_else(|| {
                        chaos_lab::Error::ConfigParse(format!(
                            "system `{}` has no generators",
                            sys.name()
                        ))
                    })?
                }
            };
            std::fs::create_dir_all(out.join("orbits"))?;
            std::fs::create_dir_all(out.join("plotdata"))?;
            let (csv, plot, rows) = dump_orbit(&sys, &p, &w, steps, 0, &out)?;
            let _ = common; // orbit rows are exact; no tolerance involved
            println!("wrote {rows} rows to {}", out.join(csv).display());
            if let Some(p) = plot {
                println!("float rendering at {}", out.join(p).display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Witness {
            system,
            ball_u,
            ball_v,
            budget,
            samples,
            common,
        } => {
            let sys = parse_system_spec(&system)?;
            let (cu, ru) = parse_ball(&sys, &ball_u)?;
            let (cv, rv) = parse_ball(&sys, &ball_v)?;
            let u = Ball::new(&sys, cu, ru)?;
            let v = Ball::new(&sys, cv, rv)?;
            let b = SearchBudget {
                word_len_max: budget,
                samples_per_probe: samples,
                tol: Some(parse_rat(&common.tol)?),
                ..Default::default()
            };
            let rep = transitivity_witness(&sys, &u, &v, &b, common.seed.unwrap_or(0))?;
            println!("{}", serde_json::to_string_pretty(&rep)?);
            Ok(exit_for_status(rep.status))
        }
        Command::Sensitivity {
            system,
            delta,
            eps,
            probes,
            common,
        } => {
            let sys = parse_system_spec(&system)?;
            let delta = parse_rat(&delta)?;
            let eps_list: chaos_lab::Result<Vec<Rat>> =
                eps.split(',').map(|t| parse_rat(t.trim())).collect();
            let b = SearchBudget {
                probes,
                tol: Some(parse_rat(&common.tol)?),
                ..Default::default()
            };
            let rep =
                sensitivity_lower_bound(&sys, &delta, &eps_list?, &b, common.seed.unwrap_or(0))?;
            println!("{}", serde_json::to_string_pretty(&rep)?);
            Ok(exit_for_status(rep.status))
        }
        Command::FiniteOrbit {
            system,
            point,
            steps,
            common,
        } => {
            let sys = parse_system_spec(&system)?;
            let p = parse_point_for(&sys, &point)?;
            let rep = is_finite_orbit(&sys, &p, steps)?;
            println!("{}", serde_json::to_string_pretty(&rep)?);
            let _ = common;
            Ok(exit_for_status(rep.status))
        }
        Command::Report { input, recheck } => {
            let text = std::fs::read_to_string(&input)?;
            let report: FullReport = serde_json::from_str(&text)?;
            print_summary(&report);
            if recheck {
                let failures = runner::recheck_report(&report)?;
                if failures.is_empty() {
                    println!("recheck: all certificates re-verified");
                } else {
                    println!("recheck: FAILED entries {failures:?}");
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(if report.all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn exit_for_status(status: Status) -> ExitCode {
    match status {
        Status::Found | Status::CertifiedBound => ExitCode::SUCCESS,
        Status::Exhausted => ExitCode::from(1),
    }
}

fn print_summary(report: &FullReport) {
    for e in &report.entries {
        let mark = if e.ok { "ok " } else { "FAIL" };
        let extra = match &e.detail {
            CheckDetail::Chaos(c) => format!(
                " [dense: {:?}, closed: {:?}, sensitivity: {:?}]",
                c.dense_orbit.status, c.closed_orbits.status, c.sensitivity.status
            ),
            CheckDetail::Witness(w) => match &w.witness {
                Some(word) => format!(" [witness: {word}]"),
                None => String::new(),
            },
            CheckDetail::Candidates { count, .. } => format!(" [candidates: {count}]"),
            CheckDetail::OrbitDump { csv, .. } => format!(" [{csv}]"),
            CheckDetail::Error { message } => format!(" [{message}]"),
        };
        println!(
            "[{mark}] #{} {} {}: {} (expected {}){extra}",
            e.index, e.property, e.system, e.status, e.expect
        );
    }
    println!(
        "{}: {}/{} checks reached their target",
        if report.all_ok { "OK" } else { "FAILED" },
        report.entries.iter().filter(|e| e.ok).count(),
        report.entries.len()
    );
}
