//! Acceptance run at full scale. Prints one PASS/FAIL line per criterion and
//! exits nonzero on any unexpected outcome.
//!
//! Criterion 9 cannot hold for odd `m` (see `columns_suite`): it is split into
//! an even-`m` line, which must pass, and an odd-`m` line that is expected to
//! fail. If the odd line ever passed, that would be reported as unexpected too.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rosen_core::cycfield::field_new;
use rosen_core::suites::{
    bounds_suite, columns_suite, criteria_suite, det_suite, domination_suite, growth_suite, heights_suite,
    mirror_suite, periodic_suite, random_corpus, trace_suite, words_suite, Corpus, SuiteReport,
};

const MS: [u32; 5] = [4, 5, 6, 7, 12];
const SEED: u64 = 20_240_101;

struct Line {
    id: &'static str,
    pass: bool,
    expected_fail: bool,
    detail: String,
}

fn summarize(reports: &[SuiteReport]) -> (bool, String) {
    let pass = reports.iter().all(|r| r.passed);
    let checks: usize = reports.iter().map(|r| r.checks).sum();
    let failures: usize = reports.iter().map(|r| r.failures).sum();
    let mut detail = format!("{checks} checks, {failures} failures");
    if let Some(ex) = reports.iter().flat_map(|r| r.examples.first()).next() {
        detail.push_str(&format!("; first: {ex}"));
    }
    (pass, detail)
}

fn metric(reports: &[SuiteReport], key: &str) -> String {
    reports
        .iter()
        .map(|r| format!("m={}: {}", r.m.unwrap_or(0), r.metrics.get(key).map_or("-".into(), |v| v.to_string())))
        .collect::<Vec<_>>()
        .join(", ")
}

fn main() -> ExitCode {
    let mut lines = Vec::new();

    // 1: corpus construction is part of the timed work.
    let t = Instant::now();
    let corpora: Vec<Corpus> = MS
        .iter()
        .map(|&m| random_corpus(&field_new(m).unwrap(), 1000, 30, SEED).expect("corpus"))
        .collect();
    let det: Vec<_> = corpora.iter().map(det_suite).collect();
    let elapsed = t.elapsed();
    let (pass, detail) = summarize(&det);
    lines.push(Line {
        id: "1 determinant and reconstruction",
        pass: pass && elapsed < Duration::from_secs(60),
        expected_fail: false,
        detail: format!("{detail}; {:.1}s (target < 60s)", elapsed.as_secs_f64()),
    });

    let mirror: Vec<_> = MS.iter().map(|&m| mirror_suite(&field_new(m).unwrap(), 1000, 30, SEED)).collect();
    let (pass, detail) = summarize(&mirror);
    lines.push(Line { id: "2 mirror formula", pass, expected_fail: false, detail });

    let bounds: Vec<_> = corpora.iter().map(bounds_suite).collect();
    let (pass, detail) = summarize(&bounds);
    lines.push(Line { id: "3 approximation bounds", pass, expected_fail: false, detail });

    let growth: Vec<_> = corpora.iter().map(growth_suite).collect();
    let (pass, detail) = summarize(&growth);
    lines.push(Line {
        id: "4 minimal growth of q_n",
        pass,
        expected_fail: false,
        detail: format!("{detail}; b_est_min {}", metric(&growth, "b_est_min")),
    });

    let dom: Vec<_> = corpora.iter().map(domination_suite).collect();
    let (pass, detail) = summarize(&dom);
    lines.push(Line {
        id: "5 conjugate domination",
        pass,
        expected_fail: false,
        detail: format!("{detail}; c3 = 1 variant violations {}", metric(&dom, "c3_equals_1_violations")),
    });

    let heights: Vec<_> = corpora.iter().map(heights_suite).collect();
    let (pass, detail) = summarize(&heights);
    lines.push(Line {
        id: "6 convergent heights bounded",
        pass,
        expected_fail: false,
        detail: format!("{detail}; growth ratio {}", metric(&heights, "growth_ratio")),
    });

    let periodic: Vec<_> = MS.iter().map(|&m| periodic_suite(&field_new(m).unwrap(), 100, SEED)).collect();
    let (pass, detail) = summarize(&periodic);
    lines.push(Line {
        id: "7 ultimately periodic values",
        pass,
        expected_fail: false,
        detail: format!("{detail}; c5_emp {}", metric(&periodic, "c5_emp")),
    });

    let t = Instant::now();
    let mut trace = Vec::new();
    for m in 4..=8u32 {
        let field = field_new(m).unwrap();
        let corpus = match corpora.iter().find(|c| c.field.m() == m) {
            Some(c) => c.clone(),
            None => random_corpus(&field, 100, 30, SEED).expect("corpus"),
        };
        trace.push(trace_suite(&field, Some(&corpus), 12, 100, 50));
    }
    let elapsed = t.elapsed();
    let (pass, detail) = summarize(&trace);
    lines.push(Line {
        id: "8 trace domination",
        pass: pass && elapsed < Duration::from_secs(300),
        expected_fail: false,
        detail: format!("{detail}; elements {}; {:.1}s (target < 300s)", metric(&trace, "elements"), elapsed.as_secs_f64()),
    });

    let columns: Vec<_> = corpora.iter().map(columns_suite).collect();
    let (even, odd): (Vec<_>, Vec<_>) = columns.into_iter().partition(|r| r.m.unwrap() % 2 == 0);
    let (pass, detail) = summarize(&even);
    lines.push(Line { id: "9 column split, even m", pass, expected_fail: false, detail });
    let (pass, detail) = summarize(&odd);
    lines.push(Line {
        id: "9 column split, odd m",
        pass,
        expected_fail: true,
        detail: format!(
            "{detail}; unattainable: the two modules coincide for odd m; non-exclusive failures {}",
            metric(&odd, "non_exclusive_split_failures")
        ),
    });

    let words = words_suite(1000, SEED);
    let (pass, detail) = summarize(std::slice::from_ref(&words));
    lines.push(Line {
        id: "10 words",
        pass,
        expected_fail: false,
        detail: format!("{detail}; {}", words.metrics["prefix_repetitions"]),
    });

    let crit = criteria_suite();
    let (pass, detail) = summarize(std::slice::from_ref(&crit));
    lines.push(Line {
        id: "11 criteria sanity",
        pass,
        expected_fail: false,
        detail: format!(
            "{detail}; statistic {} vs ln 3",
            crit.metrics["doubly_exponential_statistic"]
        ),
    });

    let mut unexpected = 0;
    for l in &lines {
        let tag = match (l.pass, l.expected_fail) {
            (true, false) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
            (true, true) => {
                unexpected += 1;
                "PASS (unexpected)"
            }
        };
        println!("{tag} criterion {}: {}", l.id, l.detail);
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected outcome(s)");
        ExitCode::FAILURE
    }
}
