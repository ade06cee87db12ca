use anyhow::{bail, Result};
use clap::Args;
use rosen_core::convergents::convergents_of;
use rosen_core::literal::parse_decimal;
use rosen_core::rosen::max_minus_one_run;
use rosen_core::words::criteria::{growth_criterion, growth_table, log_convergents, stammer_criterion};
use rosen_core::words::sturmian::sturmian_word;
use rosen_core::words::{factor_complexity, prefix_repetition_search};
use rosen_core::{field_new, Word};
use serde_json::json;

use crate::criteria::{reduced_note, stammer_lines};
use crate::output::{self, Format};
use crate::{Outcome, RunConfig};

#[derive(Args, Debug)]
pub struct SturmianArgs {
    /// Regular continued fraction quotients of the slope, `a1,a2,...`.
    #[arg(long, value_delimiter = ',', required = true)]
    rcf: Vec<u64>,

    /// Word length.
    #[arg(long, default_value_t = 500)]
    len: usize,

    /// The two Rosen letters standing for `a` and `b`.
    #[arg(long, default_value = "+1:1,+1:2", allow_hyphen_values = true)]
    letters: String,

    /// Intercept rho in [0, 1), as a decimal or fraction.
    #[arg(long, default_value = "0")]
    intercept: String,
}

const COMPLEXITY_UP_TO: usize = 20;
const PREFIX_POWERS: usize = 5;

pub fn run(cfg: &RunConfig, args: &SturmianArgs) -> Result<Outcome> {
    let m = cfg.require_m()?;
    let field = field_new(m)?;
    let letters: Word = args.letters.parse()?;
    if letters.len() != 2 || letters[0] == letters[1] {
        bail!("--letters needs two distinct letters, got {letters}");
    }
    let rho = parse_decimal(&args.intercept)?;
    let word = Word(sturmian_word(&args.rcf, &rho, args.len, letters[0], letters[1])?);
    let h = max_minus_one_run(m);
    if word.longest_minus_one_run() > h {
        bail!("letters {letters} give a run of (-1,1) longer than {h}, which no expansion for m = {m} contains");
    }

    let complexity: Vec<(usize, usize)> =
        (1..=COMPLEXITY_UP_TO.min(args.len)).map(|n| (n, factor_complexity(&word, n))).collect();
    let prefixes: Vec<_> = (1..=PREFIX_POWERS).map(|n| (n, prefix_repetition_search(&word, n))).collect();
    let states = convergents_of(&field, &word);
    let logs = log_convergents(&states);
    let d = field.degree() as u32;
    let stammer = stammer_criterion(&word, &logs, d, None);
    let growth = growth_criterion(&logs, d, None);
    let reduced = reduced_note(&stammer, d);

    match cfg.format {
        Format::Json => {
            let body = json!({
                "rcf": args.rcf,
                "intercept": rho.to_string(),
                "letters": letters,
                "word": word,
                "complexity": complexity.iter().map(|&(n, c)| json!({"n": n, "count": c})).collect::<Vec<_>>(),
                "prefix_repetitions": prefixes.iter().map(|(n, p)| json!({"n": n, "found": p})).collect::<Vec<_>>(),
                "stammer_criterion": stammer,
                "growth_criterion": growth,
                "reduced_condition": reduced,
                "fires": stammer.fires,
            });
            output::print_json(&output::document("sturmian", cfg, body))?;
        }
        Format::Csv => output::growth_csv(&growth_table(&states))?,
        Format::Text => {
            println!("m = {m}, slope quotients {:?}, intercept {rho}, length {}", args.rcf, args.len);
            println!("word: {word}");
            println!("factor complexity (expected n+1):");
            for (n, c) in &complexity {
                println!("  {n:>3}  {c}{}", if *c == n + 1 { "" } else { "  (!)" });
            }
            println!("prefixes U V^s with |U V^s| >= n|U V|:");
            for (n, p) in &prefixes {
                match p {
                    Some(p) => println!("  n = {n}: |U| = {}, |V| = {}, s = {}, length {}", p.u, p.v, p.s, p.prefix_len),
                    None => println!("  n = {n}: none within this prefix"),
                }
            }
            for line in stammer_lines(&stammer, reduced.as_ref()) {
                println!("{line}");
            }
            println!("fires: {}", stammer.fires);
        }
    }
    Ok(Outcome::Pass)
}
