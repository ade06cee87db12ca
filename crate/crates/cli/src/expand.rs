use anyhow::{bail, Context, Result};
use clap::Args;
use rosen_core::convergents::{convergents_of, growth_constants_for, growth_stats, DEFAULT_WINDOW_START};
use rosen_core::literal::{parse_decimal, parse_element};
use rosen_core::rosen::{expand, expand_certified, in_interval, reduce_into_interval, CertifiedStop};
use rosen_core::words::criteria::growth_table;
use rosen_core::{field_new, ExpansionResult, ExpansionStatus, FieldElement};
use serde_json::json;

use crate::output::{self, Format};
use crate::{Mode, Outcome, RunConfig};

#[derive(Args, Debug)]
pub struct ExpandArgs {
    /// Field element literal such as `1/2`, `l - 1` or `(3l - 2)/5`; a decimal
    /// in certified-real mode.
    #[arg(allow_hyphen_values = true)]
    x: Option<String>,

    /// Decimal input for certified-real mode, read as the exact rational it
    /// spells out.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "x")]
    real: Option<String>,

    /// Translate x by a multiple of lambda into [-lambda/2, lambda/2) first.
    #[arg(long)]
    reduce: bool,
}

const DEFAULT_STEPS: usize = 30;

pub fn run(cfg: &RunConfig, args: &ExpandArgs) -> Result<Outcome> {
    let m = cfg.require_m()?;
    let field = field_new(m)?;
    let steps = cfg.steps_or(DEFAULT_STEPS);
    let certified = cfg.mode == Mode::CertifiedReal || args.real.is_some();
    let input = match (&args.x, &args.real) {
        (Some(x), None) | (None, Some(x)) => x.clone(),
        _ => bail!("expand needs a value: a positional literal or --real <decimal>"),
    };
    let x = if certified {
        FieldElement::from_rational(&field, &parse_decimal(&input)?)
    } else {
        parse_element(&field, &input).with_context(|| format!("cannot parse {input:?}"))?
    };
    let (shift, y) = if in_interval(&x) {
        (None, x.clone())
    } else if args.reduce {
        let (k, y) = reduce_into_interval(&x);
        (Some(k), y)
    } else {
        bail!("x = {x} lies outside [-lambda/2, lambda/2); pass --reduce to translate it");
    };

    let (expansion, stop): (ExpansionResult, Option<CertifiedStop>) = if certified {
        let (e, why) = expand_certified(&field, &y.eval_embedding(0, cfg.precision), cfg.precision, steps);
        (e, Some(why))
    } else {
        (expand(&y, steps)?, None)
    };
    let word = expansion.prefix(steps);
    let states = convergents_of(&field, &word);
    let table = growth_table(&states);
    let stats = (states.len() > 1).then(|| growth_stats(&growth_constants_for(&field), &states, DEFAULT_WINDOW_START));

    match cfg.format {
        Format::Json => {
            let body = json!({
                "x": x.to_string(),
                "x_exact": x.to_json(),
                "shift": shift.as_ref().map(ToString::to_string),
                "expansion": expansion.to_json(m),
                "certified_stop": stop,
                "convergents": states.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
                "growth_table": table,
                "growth_stats": stats,
            });
            output::print_json(&output::document("expand", cfg, body))?;
        }
        Format::Csv => output::growth_csv(&table)?,
        Format::Text => {
            println!("m = {m}, x = {x}");
            if let Some(k) = &shift {
                println!("shifted by {k}*lambda to {y}");
            }
            println!("status: {}", expansion.status);
            if let ExpansionStatus::Periodic { mu, nu } = expansion.status {
                println!("preperiod {mu}, period {nu}; showing {steps} letters");
            }
            match stop {
                Some(CertifiedStop::MaxSteps) => println!("certified: all {} letters", word.len()),
                Some(why) => println!("truncated after {} certified letters: {why:?}", word.len()),
                None => {}
            }
            println!("quotients: {}", if word.is_empty() { "(empty)".to_string() } else { word.to_string() });
            if !word.is_empty() {
                println!("convergents:");
                for s in states.iter().skip(1) {
                    println!("  {:>4}  p = {}  q = {}", s.n, s.p, s.q);
                }
                print!("{}", output::growth_text(&table));
            }
            if let Some(st) = &stats {
                println!(
                    "q_n^(1/n) on [{}, {}]: min {} max {}",
                    st.window.0,
                    st.window.1,
                    output::interval_text(st.b_est),
                    output::interval_text(st.big_b_est)
                );
                println!(
                    "minimal growth {}, step growth {}, strictly increasing {}",
                    ok(st.min_growth_ok),
                    ok(st.step_ok),
                    ok(st.increasing_ok)
                );
            }
        }
    }
    Ok(Outcome::Pass)
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "no"
    }
}
