use anyhow::{anyhow, Result};
use clap::Args;
use rosen_core::suites::{run_suites, Suite, SuiteConfig};
use serde_json::json;

use crate::output::{self, Format};
use crate::{Outcome, RunConfig};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated suite names, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    suite: Vec<String>,

    /// Word-length bound for the exhaustive group enumeration.
    #[arg(long, default_value_t = 12)]
    max_word_len: usize,

    /// Letters per random expansion.
    #[arg(long, default_value_t = 30)]
    letters: usize,
}

fn parse_suites(names: &[String]) -> Result<Vec<Suite>> {
    let mut out = Vec::new();
    for name in names {
        if name == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(name.parse().map_err(|e| anyhow!("{e}; valid suites: all, {}", all_names()))?);
        }
    }
    out.dedup();
    Ok(out)
}

fn all_names() -> String {
    Suite::ALL.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ")
}

pub fn run(cfg: &RunConfig, args: &VerifyArgs) -> Result<Outcome> {
    let suites = parse_suites(&args.suite)?;
    let mut sc = SuiteConfig::new(cfg.require_m()?);
    sc.cases = cfg.steps_or(sc.cases);
    sc.steps = args.letters.max(1);
    sc.seed = cfg.seed;
    sc.max_word_len = args.max_word_len;
    let reports = run_suites(&suites, &sc)?;
    let passed = reports.iter().all(|r| r.passed);

    match cfg.format {
        Format::Json => {
            let body = json!({ "suite_config": sc, "passed": passed, "reports": reports });
            output::print_json(&output::document("verify", cfg, body))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            w.write_record(["suite", "m", "cases", "checks", "failures", "passed"])?;
            for r in &reports {
                w.write_record([
                    r.suite.name().to_string(),
                    r.m.map_or_else(String::new, |m| m.to_string()),
                    r.cases.to_string(),
                    r.checks.to_string(),
                    r.failures.to_string(),
                    r.passed.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in &reports {
                let m = r.m.map_or_else(|| "-".into(), |m| m.to_string());
                println!(
                    "{} {} m={}: {} cases, {}/{} checks passed",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.suite,
                    m,
                    r.cases,
                    r.checks - r.failures,
                    r.checks
                );
                for (k, v) in &r.metrics {
                    println!("    {k}: {v}");
                }
                for n in &r.notes {
                    println!("    note: {n}");
                }
                for e in &r.examples {
                    println!("    failing case: {e}");
                }
            }
        }
    }
    Ok(if passed { Outcome::Pass } else { Outcome::Fail })
}
