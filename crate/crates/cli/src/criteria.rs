use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use rosen_core::convergents::convergents_of;
use rosen_core::literal::parse_element;
use rosen_core::rosen::ExpansionJson;
use rosen_core::words::criteria::{
    growth_criterion, growth_table, growth_table_from_logs, log_convergents, reduced_condition_fires,
    stammer_criterion, GrowthCriterionReport, GrowthRow, StammerCriterionReport, FINITE_SCALE_NOTE,
};
use rosen_core::words::stammer_statistic;
use rosen_core::{field_new, ExpansionResult, ExpansionStatus, Word};
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{self, interval_text, Format};
use crate::{Outcome, RunConfig};

#[derive(Args, Debug)]
pub struct CriteriaArgs {
    /// Expansion file: JSON from `expand --format json`, a bare expansion
    /// object, `{"m": .., "q": [q_0, q_1, ..]}`, or a word in `+1:r,-1:r` text.
    file: PathBuf,
}

/// Letters taken from a periodic expansion when `-n` is not given.
const PERIODIC_LETTERS: usize = 120;

/// The `u = 0`, `b = B` case: the stammering inequality becomes `w > 3D/2`.
#[derive(Clone, Debug, Serialize)]
pub struct ReducedNote {
    pub w: String,
    pub fires: bool,
    pub note: String,
}

pub fn reduced_note(report: &StammerCriterionReport, d: u32) -> Option<ReducedNote> {
    let rep = report.witness.as_ref().filter(|r| r.u == 0)?;
    Some(ReducedNote {
        w: rep.w().to_string(),
        fires: reduced_condition_fires(&rep.w(), d),
        note: format!("witness has empty U; when b = B the condition reduces to w > {}/2", 3 * d),
    })
}

pub fn stammer_lines(r: &StammerCriterionReport, reduced: Option<&ReducedNote>) -> Vec<String> {
    let mut out = vec![
        format!("stammering statistic: {} (~{:.6})", r.lhs, r.lhs_f64),
        format!(
            "window [{}, {}]: b in {}, B in {}, threshold (3D/2) ln B / ln b in {}",
            r.window.start,
            r.window.end,
            interval_text(r.b_est),
            interval_text(r.big_b_est),
            interval_text(r.rhs)
        ),
    ];
    if let Some(w) = &r.witness {
        out.push(format!("witness: |U| = {}, |V| = {}, w = {}", w.u, w.v, w.w()));
    }
    if let Some(n) = reduced {
        out.push(format!("reduced: w = {}, fires {}; {}", n.w, n.fires, n.note));
    }
    out.push(format!("stammering criterion fires: {}", r.fires));
    out.push(format!("note: {}", r.note));
    out
}

fn growth_lines(r: &GrowthCriterionReport) -> Vec<String> {
    let mut out = vec![
        format!(
            "growth: max ln ln q_n / n on [{}, {}] in {} (at n = {}) vs ln(2D - 1) in {}",
            r.window.start,
            r.window.end,
            interval_text(r.statistic),
            r.argmax.map_or_else(|| "-".into(), |n| n.to_string()),
            interval_text(r.threshold)
        ),
        format!("growth criterion fires: {}", r.fires),
    ];
    if r.degenerate {
        out.push("note: D = 1 makes the threshold 0; the criterion needs D >= 2".into());
    }
    out
}

enum Input {
    Word { m: u32, word: Word, status: Option<ExpansionStatus> },
    Denominators { m: u32, q: Vec<String> },
}

fn pick_m(file_m: Option<u32>, cfg: &RunConfig) -> Result<u32> {
    match (file_m, cfg.m) {
        (Some(a), Some(b)) if a != b => bail!("file is for m = {a} but -m {b} was given"),
        (Some(a), _) => Ok(a),
        (None, _) => cfg.require_m(),
    }
}

fn read_input(cfg: &RunConfig, args: &CriteriaArgs) -> Result<Input> {
    let text = std::fs::read_to_string(&args.file).with_context(|| format!("cannot read {}", args.file.display()))?;
    let Ok(doc) = serde_json::from_str::<Value>(&text) else {
        let word: Word = text.trim().parse().context("input is neither JSON nor a word")?;
        return Ok(Input::Word { m: cfg.require_m()?, word, status: None });
    };
    let doc = doc.get("expansion").cloned().unwrap_or(doc);
    if let Some(q) = doc.get("q") {
        let q: Vec<String> = serde_json::from_value(q.clone()).context("\"q\" must be a list of literals")?;
        let m = pick_m(doc.get("m").and_then(Value::as_u64).map(|m| m as u32), cfg)?;
        return Ok(Input::Denominators { m, q });
    }
    let exp: ExpansionJson = serde_json::from_value(doc).context("malformed expansion JSON")?;
    let m = pick_m(Some(exp.m), cfg)?;
    let e = ExpansionResult::from_json(&field_new(m)?, &exp)?;
    let n = match e.status {
        ExpansionStatus::Periodic { .. } => cfg.steps_or(PERIODIC_LETTERS),
        _ => cfg.steps_or(e.quotients.len()),
    };
    Ok(Input::Word { m, word: e.prefix(n), status: Some(e.status) })
}

pub fn run(cfg: &RunConfig, args: &CriteriaArgs) -> Result<Outcome> {
    let input = read_input(cfg, args)?;
    let (m, word, status, logs, table): (u32, Option<Word>, _, _, Vec<GrowthRow>) = match input {
        Input::Word { m, word, status } => {
            let states = convergents_of(&field_new(m)?, &word);
            (m, Some(word), status, log_convergents(&states), growth_table(&states))
        }
        Input::Denominators { m, q } => {
            let field = field_new(m)?;
            let mut logs = Vec::with_capacity(q.len());
            for s in &q {
                let v = parse_element(&field, s)?;
                let l = v.eval_embedding(0, 128).ln_bounds().ok_or_else(|| anyhow!("q = {s} is not positive"))?;
                logs.push(l);
            }
            let table = growth_table_from_logs(&q, &logs);
            (m, None, None, logs, table)
        }
    };
    let d = field_new(m)?.degree() as u32;
    let growth = growth_criterion(&logs, d, None);
    let stammer = word.as_ref().map(|w| stammer_criterion(w, &logs, d, None));
    let reduced = stammer.as_ref().and_then(|s| reduced_note(s, d));
    let periodic_note = match status {
        Some(ExpansionStatus::Periodic { mu, nu }) => Some(format!(
            "ultimately periodic (preperiod {mu}, period {nu}): with U the preperiod and V the period, w grows \
             linearly with the prefix, so the statistic is unbounded and the condition reduces to w exceeding a \
             fixed bound"
        )),
        _ => None,
    };
    // The statistic along growing prefixes; for a periodic word it climbs without bound.
    let trend: Vec<(usize, String)> = word.as_ref().map_or_else(Vec::new, |w| {
        (1..=4)
            .map(|k| w.len() * k / 4)
            .filter(|&l| l > 0)
            .map(|l| (l, stammer_statistic(&w[..l]).value.to_string()))
            .collect()
    });

    match cfg.format {
        Format::Json => {
            let body = json!({
                "m": m,
                "d": d,
                "input_status": status,
                "letters": word.as_ref().map(|w| w.len()),
                "growth_criterion": growth,
                "stammer_criterion": stammer,
                "stammer_trend": trend.iter().map(|(l, v)| json!({"prefix": l, "statistic": v})).collect::<Vec<_>>(),
                "reduced_condition": reduced,
                "periodic_note": periodic_note,
                "note": FINITE_SCALE_NOTE,
            });
            output::print_json(&output::document("criteria", cfg, body))?;
        }
        Format::Csv => output::growth_csv(&table)?,
        Format::Text => {
            println!("m = {m}, D = {d}");
            if let Some(w) = &word {
                println!("{} letters{}", w.len(), status.map_or_else(String::new, |s| format!(", source {s}")));
            } else {
                println!("{} denominators, no word: stammering criterion not evaluated", logs.len());
            }
            for line in growth_lines(&growth) {
                println!("{line}");
            }
            if let Some(s) = &stammer {
                for line in stammer_lines(s, reduced.as_ref()) {
                    println!("{line}");
                }
                let t: Vec<String> = trend.iter().map(|(l, v)| format!("{l}: {v}")).collect();
                println!("statistic along prefixes: {}", t.join(", "));
            }
            if let Some(n) = &periodic_note {
                println!("note: {n}");
            }
            println!("note: {FINITE_SCALE_NOTE}");
        }
    }
    Ok(Outcome::Pass)
}
