//! Randomized and exhaustive verification suites with counters.
//!
//! Every suite is deterministic given its configuration and seed. Per-case
//! work runs in parallel; results are merged in index order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::convergents::{
    approx_bound_check, convergents_of, determinants_ok, growth_constants_for, growth_stats, mirror_check,
    ConvergentState, DEFAULT_WINDOW_START,
};
use crate::cycfield::{field_new, Field, FieldElement};
use crate::error::{Error, Result};
use crate::hecke::{enumerate_elements, proof_traces, trace_dominates, trace_value_dominates, ColumnClass, SplitBases, TraceCheck};
use crate::heights::{domination_check, first_q_above_two, height_bound_check, periodic_limit_enclosure, periodic_value};
use crate::rosen::{self, max_minus_one_run, ExpansionResult, ExpansionStatus, PartialQuotient, Word};
use crate::words::criteria::{growth_criterion, log_bigints, reduced_condition_fires, stammer_criterion};
use crate::words::sturmian::{increasing_quotients, sturmian_word};
use crate::words::{factor_complexity, fractional_power, prefix_repetition_search, repetition_exponents, Repetition};

/// Largest denominator of the random rationals in the corpus.
pub const MAX_DENOMINATOR: i64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Det,
    Mirror,
    Bounds,
    Growth,
    Domination,
    Heights,
    Trace,
    Columns,
    Periodic,
    Words,
    Criteria,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Det,
        Suite::Mirror,
        Suite::Bounds,
        Suite::Growth,
        Suite::Domination,
        Suite::Heights,
        Suite::Trace,
        Suite::Columns,
        Suite::Periodic,
        Suite::Words,
        Suite::Criteria,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Det => "det",
            Suite::Mirror => "mirror",
            Suite::Bounds => "bounds",
            Suite::Growth => "growth",
            Suite::Domination => "domination",
            Suite::Heights => "heights",
            Suite::Trace => "trace",
            Suite::Columns => "columns",
            Suite::Periodic => "periodic",
            Suite::Words => "words",
            Suite::Criteria => "criteria",
        }
    }

    /// Suites that do not depend on `m`.
    pub fn field_free(self) -> bool {
        matches!(self, Suite::Words | Suite::Criteria)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Scale of a suite run.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub m: u32,
    /// Random cases (rationals, words, periodic words) per suite.
    pub cases: usize,
    /// Letters per expansion.
    pub steps: usize,
    pub seed: u64,
    /// Word-length bound for the exhaustive group enumeration.
    pub max_word_len: usize,
    /// Expansions feeding the `M_n T^j`, `M_n T'^j` checks, and the range of `j`.
    pub proof_cases: usize,
    pub proof_j: u32,
}

impl SuiteConfig {
    pub fn new(m: u32) -> Self {
        SuiteConfig { m, cases: 1000, steps: 30, seed: 0, max_word_len: 12, proof_cases: 100, proof_j: 50 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub m: Option<u32>,
    pub cases: usize,
    pub checks: usize,
    pub failures: usize,
    pub passed: bool,
    /// Margins, empirical constants and other numbers worth reporting.
    pub metrics: BTreeMap<String, Value>,
    pub notes: Vec<String>,
    /// The first few failing cases.
    pub examples: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite, m: Option<u32>) -> Self {
        SuiteReport {
            suite,
            m,
            cases: 0,
            checks: 0,
            failures: 0,
            passed: true,
            metrics: BTreeMap::new(),
            notes: Vec::new(),
            examples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < 5 {
                self.examples.push(what());
            }
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.passed && self.failures == 0;
        self
    }

    fn metric(&mut self, key: &str, v: impl Into<Value>) {
        self.metrics.insert(key.to_string(), v.into());
    }
}

fn rng_for(seed: u64, m: u32, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (u64::from(m) << 32));
    rng.set_stream(stream);
    rng
}

/// One random input with its expansion and convergents.
#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub x: FieldElement,
    pub expansion: ExpansionResult,
    /// The expansion unrolled to at most `steps` letters.
    pub word: Word,
    pub states: Vec<ConvergentState>,
}

impl CorpusItem {
    /// `T^n(x)`.
    pub fn tail(&self, n: usize) -> FieldElement {
        let orbit = self.expansion.orbit.as_ref().expect("corpus keeps orbits");
        match self.expansion.status {
            ExpansionStatus::Periodic { mu, nu } if n > mu => orbit[mu + (n - mu) % nu].clone(),
            _ => orbit[n].clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub field: Field,
    pub items: Vec<CorpusItem>,
}

/// Uniform rationals `p/q`, `1 ≤ q ≤ 10⁴`, reduced into `[-λ/2, λ/2)`.
pub fn random_rationals(field: &Field, count: usize, seed: u64) -> Vec<FieldElement> {
    let mut rng = rng_for(seed, field.m(), 1);
    (0..count)
        .map(|_| {
            let q = rng.gen_range(1..=MAX_DENOMINATOR);
            let p = rng.gen_range(-2 * q..=2 * q);
            rosen::rational_in_interval(field, &BigRational::new(p.into(), q.into()))
        })
        .collect()
}

pub fn random_corpus(field: &Field, count: usize, steps: usize, seed: u64) -> Result<Corpus> {
    let xs = random_rationals(field, count, seed);
    let items = xs
        .into_par_iter()
        .map(|x| {
            let expansion = rosen::expand_with_orbit(&x, steps, true)?;
            let word = expansion.prefix(steps);
            let states = convergents_of(field, &word);
            Ok(CorpusItem { x, expansion, word, states })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Corpus { field: field.clone(), items })
}

/// Random words of length `1..=max_len` with `r ≤ 5` and `(-1,1)` runs
/// bounded by `h`.
pub fn random_words(m: u32, count: usize, max_len: usize, seed: u64) -> Vec<Word> {
    let mut rng = rng_for(seed, m, 2);
    let h = max_minus_one_run(m);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            let mut run = 0;
            let mut letters = Vec::with_capacity(len);
            while letters.len() < len {
                let eps = if rng.gen_bool(0.5) { 1 } else { -1 };
                let r = rng.gen_range(1..=5);
                let pq = PartialQuotient::new(eps, r).unwrap();
                if pq.is_minus_one_one() {
                    if run == h {
                        continue;
                    }
                    run += 1;
                } else {
                    run = 0;
                }
                letters.push(pq);
            }
            Word(letters)
        })
        .collect()
}

/// Exact `det M_n = ±1` and `evaluate(prefix_n, T^n x) = x` for every `n`.
pub fn det_suite(corpus: &Corpus) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Det, Some(corpus.field.m()));
    let per_item: Vec<(usize, Vec<String>)> = corpus
        .items
        .par_iter()
        .map(|it| {
            let mut bad = Vec::new();
            let mut checks = 1;
            if !determinants_ok(&it.states) {
                bad.push(format!("det ≠ ±1 along {}", it.word));
            }
            for n in 1..=it.word.len() {
                checks += 1;
                let tail = it.tail(n);
                let ok = rosen::evaluate(&corpus.field, &it.word[..n], Some(&tail)).is_ok_and(|v| v == it.x);
                if !ok {
                    bad.push(format!("evaluate({n} letters, T^n x) ≠ x = {}", it.x));
                }
            }
            if it.expansion.status == ExpansionStatus::Finite {
                checks += 1;
                // The empty expansion belongs to 0 only.
                let ok = if it.word.is_empty() {
                    it.x.is_zero()
                } else {
                    rosen::evaluate(&corpus.field, &it.word, None).is_ok_and(|v| v == it.x)
                };
                if !ok {
                    bad.push(format!("finite word {} does not evaluate to {}", it.word, it.x));
                }
            }
            (checks, bad)
        })
        .collect();
    rep.cases = corpus.items.len();
    merge(&mut rep, per_item);
    rep.finish()
}

fn merge(rep: &mut SuiteReport, per_item: Vec<(usize, Vec<String>)>) {
    for (checks, bad) in per_item {
        rep.checks += checks;
        rep.failures += bad.len();
        for b in bad {
            if rep.examples.len() < 5 {
                rep.examples.push(b);
            }
        }
    }
}

pub fn mirror_suite(field: &Field, count: usize, max_len: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Mirror, Some(field.m()));
    let words = random_words(field.m(), count, max_len, seed);
    let results: Vec<bool> = words.par_iter().map(|w| mirror_check(field, w)).collect();
    rep.cases = words.len();
    for (w, ok) in words.iter().zip(results) {
        rep.check(ok, || format!("mirror formula fails on {w}"));
    }
    rep.finish()
}

pub fn bounds_suite(corpus: &Corpus) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Bounds, Some(corpus.field.m()));
    let gc = growth_constants_for(&corpus.field);
    let reports: Vec<_> = corpus.items.par_iter().map(|it| approx_bound_check(&gc, &it.x, &it.states)).collect();
    let mut min_upper_margin = f64::INFINITY;
    let mut min_c2_margin = f64::INFINITY;
    for (it, r) in corpus.items.iter().zip(&reports) {
        for row in &r.rows {
            rep.check(row.lower_ok && row.upper_ok && row.c2_ok, || {
                format!("x = {}, n = {}: lower {} upper {} c2 {}", it.x, row.n, row.lower_ok, row.upper_ok, row.c2_ok)
            });
            if row.error > 0.0 {
                min_upper_margin = min_upper_margin.min(row.upper / row.error);
                min_c2_margin = min_c2_margin.min(row.c2 / row.error);
            }
        }
    }
    rep.cases = corpus.items.len();
    rep.metric("c1", gc.c1_interval(64).midpoint_f64());
    rep.metric("c2", gc.c2_bound().to_string());
    rep.metric("min_c1_bound_over_error", min_upper_margin);
    rep.metric("min_c2_bound_over_error", min_c2_margin);
    rep.finish()
}

pub fn growth_suite(corpus: &Corpus) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Growth, Some(corpus.field.m()));
    let gc = growth_constants_for(&corpus.field);
    let stats: Vec<_> = corpus.items.par_iter().map(|it| growth_stats(&gc, &it.states, DEFAULT_WINDOW_START)).collect();
    let (mut b_min, mut big_b_max) = (f64::INFINITY, 0.0f64);
    let mut not_increasing = 0;
    for (it, s) in corpus.items.iter().zip(&stats) {
        rep.check(s.min_growth_ok, || format!("q_n < λ^s(n) for x = {}", it.x));
        rep.check(s.step_ok, || format!("q_(n+h+1) < λ q_n for x = {}", it.x));
        if !s.increasing_ok {
            not_increasing += 1;
        }
        if it.states.len() > DEFAULT_WINDOW_START + 1 {
            b_min = b_min.min(s.b_est.0);
            big_b_max = big_b_max.max(s.big_b_est.1);
        }
    }
    rep.cases = corpus.items.len();
    rep.metric("h", gc.h());
    rep.metric("b_est_min", b_min);
    rep.metric("B_est_max", big_b_max);
    rep.metric("lambda", gc.lambda().to_f64());
    rep.metric("not_strictly_increasing", not_increasing);
    rep.finish()
}

pub fn domination_suite(corpus: &Corpus) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Domination, Some(corpus.field.m()));
    let reports: Vec<_> = corpus.items.par_iter().map(|it| domination_check(&corpus.field, &it.states)).collect();
    let mut conjectured = 0;
    let mut min_ratio = f64::INFINITY;
    let mut c3 = (0.0, 0.0);
    for (it, r) in corpus.items.iter().zip(&reports) {
        c3 = r.c3;
        rep.checks += r.checks;
        rep.failures += r.violations.len();
        if let Some(v) = r.violations.first() {
            if rep.examples.len() < 5 {
                rep.examples.push(format!("x = {}: {} at n = {}, embedding {}", it.x, v.which, v.n, v.embedding));
            }
        }
        conjectured += r.conjectured_violations.len();
        min_ratio = min_ratio.min(r.min_ratio);
    }
    rep.cases = corpus.items.len();
    rep.metric("c3", json!([c3.0, c3.1]));
    rep.metric("min_conjugate_ratio", min_ratio);
    rep.metric("c3_equals_1_violations", conjectured);
    rep.notes.push(format!(
        "variant with c3 = 1 (informational, not required): {conjectured} violations"
    ));
    rep.finish()
}

/// Running max of `H(p_n/q_n)/q_n^D` over `n ∈ [5, 20]` and `[5, 30]`, over
/// the whole corpus; passes when the second exceeds the first by at most 5%.
pub fn heights_suite(corpus: &Corpus) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Heights, Some(corpus.field.m()));
    let reports: Vec<_> = corpus.items.par_iter().map(|it| height_bound_check(&corpus.field, &it.states)).collect();
    let (mut upto20, mut upto30, mut c4) = (0.0f64, 0.0f64, 0.0f64);
    for r in &reports {
        upto20 = upto20.max(r.running_max(5, 20));
        upto30 = upto30.max(r.running_max(5, 30));
        c4 = c4.max(r.c4_emp);
    }
    rep.cases = corpus.items.len();
    rep.check(upto30 <= 1.05 * upto20, || format!("running max grew from {upto20:e} to {upto30:e}"));
    rep.metric("running_max_5_20", upto20);
    rep.metric("running_max_5_30", upto30);
    rep.metric("growth_ratio", if upto20 > 0.0 { upto30 / upto20 } else { f64::NAN });
    rep.metric("c4_emp", c4);
    rep.notes.push("empirical proxy for boundedness".into());
    rep.finish()
}

/// Exhaustive trace domination on reduced words up to `max_len`, and on
/// `M_n·(1 jλ; 0 1)`, `M_n·(1 0; jλ 1)` for `n ≥ n₀`, `1 ≤ j ≤ proof_j`.
pub fn trace_suite(field: &Field, corpus: Option<&Corpus>, max_len: usize, proof_cases: usize, proof_j: u32) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Trace, Some(field.m()));
    let elements = enumerate_elements(field, max_len);
    let checks: Vec<TraceCheck> = elements.par_iter().map(|g| trace_dominates(&g.matrix)).collect();
    let (mut hyperbolic, mut skipped) = (0usize, 0usize);
    let mut min_margin = f64::INFINITY;
    for (g, c) in elements.iter().zip(&checks) {
        match c {
            TraceCheck::Skipped => skipped += 1,
            TraceCheck::Dominates { margins } => {
                hyperbolic += 1;
                rep.checks += 1;
                min_margin = margins.iter().skip(1).copied().fold(min_margin, f64::min);
            }
            TraceCheck::Violated { embedding } => {
                hyperbolic += 1;
                rep.check(false, || format!("{} violates at embedding {embedding}", g.word_string()));
            }
        }
    }
    rep.cases = elements.len();
    rep.metric("elements", elements.len());
    rep.metric("trace_above_2", hyperbolic);
    rep.metric("trace_at_most_2", skipped);
    rep.metric("min_margin", min_margin);
    if let Some(corpus) = corpus {
        let per_item: Vec<(usize, Vec<String>)> = corpus
            .items
            .par_iter()
            .take(proof_cases)
            .map(|it| {
                let mut checks = 0;
                let mut bad = Vec::new();
                let Some(n0) = first_q_above_two(&it.states) else { return (0, bad) };
                for st in it.states.iter().filter(|s| s.n >= n0) {
                    for j in 1..=proof_j {
                        let (mj, nj) = proof_traces(st, j);
                        for (name, tr) in [("M", mj), ("N", nj)] {
                            match trace_value_dominates(&tr) {
                                TraceCheck::Skipped => {}
                                TraceCheck::Dominates { .. } => checks += 1,
                                TraceCheck::Violated { embedding } => {
                                    checks += 1;
                                    bad.push(format!("{name}_(n={},j={j}) for x = {} at embedding {embedding}", st.n, it.x));
                                }
                            }
                        }
                    }
                }
                (checks, bad)
            })
            .collect();
        let before = rep.checks;
        merge(&mut rep, per_item);
        rep.metric("proof_matrix_checks", rep.checks - before);
    }
    rep.finish()
}

/// `(p_n, q_n)`, `n ≥ 1`, must split as exactly one entry in `ℤ[λ²]` and the other in
/// `λℤ[λ²]`. For odd `m`, `λ` is a unit and both modules equal `ℤ[λ]`, so no
/// pair can split exclusively; those pairs are counted as failures and the
/// weaker non-exclusive form is reported separately.
pub fn columns_suite(corpus: &Corpus) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Columns, Some(corpus.field.m()));
    let bases = SplitBases::new(&corpus.field);
    let classes: Vec<Vec<ColumnClass>> = corpus
        .items
        .par_iter()
        .map(|it| it.states.iter().skip(1).map(|s| bases.classify(&s.p, &s.q)).collect())
        .collect();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut weak_failures = 0;
    for (it, cl) in corpus.items.iter().zip(&classes) {
        for (i, c) in cl.iter().enumerate() {
            let n = i + 1;
            *counts.entry(format!("{c:?}")).or_default() += 1;
            if *c == ColumnClass::Violation {
                weak_failures += 1;
            }
            let ok = matches!(c, ColumnClass::EvenOdd | ColumnClass::OddEven);
            rep.check(ok, || format!("x = {}, n = {n}: {c:?}", it.x));
        }
    }
    rep.cases = corpus.items.len();
    rep.metric("classes", json!(counts));
    rep.metric("non_exclusive_split_failures", weak_failures);
    if corpus.field.m() % 2 == 1 {
        rep.notes.push(
            "odd m: λ is a unit, so Z[λ²] = λZ[λ²] = Z[λ] and no pair splits exclusively; \
             the non-exclusive split is counted in non_exclusive_split_failures"
                .into(),
        );
    }
    rep.finish()
}

/// Ultimately periodic words with `μ ≤ 3`, `ν ≤ 4`: quadratic value, its
/// degree, agreement with a `10⁻³⁰` enclosure of the limit, and the height
/// constant; plus `x = 1` periodic for even `m`.
pub fn periodic_suite(field: &Field, count: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Periodic, Some(field.m()));
    let mut rng = rng_for(seed, field.m(), 3);
    let max_tries = count * 20;
    let tol = BigRational::new(BigInt::one(), BigInt::from(10).pow(30));
    let (mut accepted, mut tried) = (0, 0);
    let mut c5: f64 = 0.0;
    while accepted < count && tried < max_tries {
        tried += 1;
        let mu = rng.gen_range(0..=3);
        let nu = rng.gen_range(1..=4);
        let w = Word(
            (0..mu + nu)
                .map(|_| PartialQuotient::new(if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=4)).unwrap())
                .collect(),
        );
        // Inadmissible words have no value whose expansion they are.
        let Ok(surd) = periodic_value(field, &w, mu, nu) else { continue };
        accepted += 1;
        let label = format!("{w} (μ={mu}, ν={nu})");
        let encl = periodic_limit_enclosure(field, &w, mu, nu, 110);
        rep.check(encl.hi() - encl.lo() <= tol, || format!("{label}: enclosure wider than 1e-30"));
        let v = surd.value(256);
        let agrees = v.lo() <= encl.hi() && encl.lo() <= v.hi();
        rep.check(agrees, || format!("{label}: quadratic root outside the limit enclosure"));
        rep.check(surd.degree_over_field() <= 2, || format!("{label}: degree over Q(λ) exceeds 2"));
        let ratio = surd.height_ratio();
        rep.check(ratio.is_finite(), || format!("{label}: height ratio not finite"));
        c5 = c5.max(ratio);
    }
    rep.check(accepted == count, || format!("only {accepted} of {count} admissible words found"));
    if field.m() % 2 == 0 {
        let (_, y) = rosen::reduce_into_interval(&FieldElement::one(field));
        let periodic = rosen::expand(&y, 10_000).is_ok_and(|e| matches!(e.status, ExpansionStatus::Periodic { .. }));
        rep.check(periodic, || "x = 1 not detected periodic".into());
    }
    rep.cases = accepted;
    rep.metric("candidates_tried", tried);
    rep.metric("c5_emp", c5);
    rep.finish()
}

/// Plain `O(L³)` scan: for each `(u, v)`, extend while `w[u+v+k] = w[u+k]`.
pub fn naive_repetitions<T: Eq>(word: &[T]) -> Vec<Repetition> {
    let mut out = Vec::new();
    for u in 0..word.len() {
        for v in 1..word.len() - u {
            let mut k = 0;
            while u + v + k < word.len() && word[u + v + k] == word[u + k] {
                k += 1;
            }
            if k > 0 {
                out.push(Repetition { u, v, matched: v + k });
            }
        }
    }
    out
}

fn random_slope(rng: &mut ChaCha8Rng) -> Vec<u64> {
    (0..40).map(|_| rng.gen_range(1..=5)).collect()
}

/// Repetition scan against the naive oracle, Sturmian complexity, and the
/// long-repetition search on the slope `[0; 1, 2, 3, …]`.
pub fn words_suite(count: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Words, None);
    let mut rng = rng_for(seed, 0, 4);
    let words: Vec<Vec<u8>> = (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=40);
            (0..len).map(|_| rng.gen_range(0..3u8)).collect()
        })
        .collect();
    let agree: Vec<bool> = words
        .par_iter()
        .map(|w| {
            let mut a = repetition_exponents(w);
            let mut b = naive_repetitions(w);
            a.sort();
            b.sort();
            a == b
        })
        .collect();
    for (w, ok) in words.iter().zip(agree) {
        rep.check(ok, || format!("repetition scan disagrees with the oracle on {w:?}"));
    }

    let mut complexity_words = 0;
    for i in 0..20 {
        let rcf = if i == 0 { vec![1; 40] } else { random_slope(&mut rng) };
        let rho = BigRational::new(rng.gen_range(0..1000).into(), 1000.into());
        let Ok(w) = sturmian_word(&rcf, &rho, 2000, 0u8, 1u8) else {
            rep.check(false, || format!("could not certify slope {rcf:?}"));
            continue;
        };
        complexity_words += 1;
        for n in 1..=20 {
            let p = factor_complexity(&w, n);
            rep.check(p == n + 1, || format!("p({n}) = {p} for slope {rcf:?}"));
        }
    }

    let mut found_at = Vec::new();
    for n in 1..=5 {
        let mut len = 256;
        let hit = loop {
            let w = sturmian_word(&increasing_quotients(12), &BigRational::from_integer(0.into()), len, 0u8, 1u8)
                .expect("12 quotients certify 10^5 letters");
            if let Some(hit) = prefix_repetition_search(&w, n) {
                break Some((len, hit));
            }
            if len >= 100_000 {
                break None;
            }
            len = (len * 2).min(100_000);
        };
        rep.check(hit.is_some(), || format!("no long repetition for n = {n} within 10^5 letters"));
        if let Some((len, h)) = hit {
            found_at.push(json!({"n": n, "length": len, "u": h.u, "v": h.v, "s": h.s.to_string()}));
        }
    }
    rep.cases = count + complexity_words + 5;
    rep.metric("prefix_repetitions", Value::Array(found_at));
    rep.finish()
}

/// Synthetic sanity checks for the two criteria.
pub fn criteria_suite() -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Criteria, None);
    let q: Vec<BigInt> = (0..=10u32).map(|n| BigInt::one() << 4usize.pow(n)).collect();
    let r = growth_criterion(&log_bigints(&q), 2, None);
    rep.check(r.fires && r.statistic.0 > 3f64.ln(), || format!("q_n = 2^(4^n) does not fire: {r:?}"));
    rep.metric("doubly_exponential_statistic", r.statistic.0);

    let f = field_new(4).expect("m = 4");
    let lam = FieldElement::lambda(&f);
    let mut p = FieldElement::one(&f);
    let mut logs = vec![(0.0, 0.0)];
    for _ in 0..60 {
        p = p.mul_ref(&lam);
        logs.push(p.eval_embedding(0, 64).ln_bounds().expect("positive"));
    }
    let slow = growth_criterion(&logs, 2, None);
    rep.check(!slow.fires, || "q_n = λ^n fires".into());
    rep.metric("lambda_power_statistic", slow.statistic.1);

    let four = BigRational::from_integer(4.into());
    rep.check(reduced_condition_fires(&four, 2), || "w = 4 does not exceed 3D/2 = 3".into());
    rep.check(!reduced_condition_fires(&BigRational::from_integer(3.into()), 2), || "w = 3 fires".into());

    // A purely periodic Rosen word with w ≥ 4: (+1:2)^30 for m = 4.
    let word = Word(fractional_power(&[PartialQuotient::new(1, 2).unwrap()], &BigRational::from_integer(30.into())));
    let states = convergents_of(&f, &word);
    let rep2 = stammer_criterion(&word, &crate::convergents::log_q(&states), 2, None);
    rep.check(rep2.fires, || format!("periodic word does not fire: {rep2:?}"));
    rep.metric("periodic_lhs", rep2.lhs_f64);
    rep.metric("periodic_rhs", json!([rep2.rhs.0, rep2.rhs.1]));
    rep.cases = 5;
    rep.notes.push("criteria are asymptotic; these are finite-scale sanity checks".into());
    rep.finish()
}

/// Runs one suite at the given scale, building the random corpus if needed.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig, corpus: Option<&Corpus>) -> Result<SuiteReport> {
    let field = field_new(cfg.m)?;
    let own;
    let corpus = match corpus {
        Some(c) => c,
        None => {
            own = random_corpus(&field, cfg.cases, cfg.steps, cfg.seed)?;
            &own
        }
    };
    Ok(match suite {
        Suite::Det => det_suite(corpus),
        Suite::Mirror => mirror_suite(&field, cfg.cases, cfg.steps, cfg.seed),
        Suite::Bounds => bounds_suite(corpus),
        Suite::Growth => growth_suite(corpus),
        Suite::Domination => domination_suite(corpus),
        Suite::Heights => heights_suite(corpus),
        Suite::Trace => trace_suite(&field, Some(corpus), cfg.max_word_len, cfg.proof_cases, cfg.proof_j),
        Suite::Columns => columns_suite(corpus),
        Suite::Periodic => periodic_suite(&field, cfg.cases.min(100), cfg.seed),
        Suite::Words => words_suite(cfg.cases, cfg.seed),
        Suite::Criteria => criteria_suite(),
    })
}

/// Runs several suites sharing one corpus.
pub fn run_suites(suites: &[Suite], cfg: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    let field = field_new(cfg.m)?;
    let needs_corpus = suites.iter().any(|s| !s.field_free() && !matches!(s, Suite::Mirror | Suite::Periodic));
    let corpus = if needs_corpus { Some(random_corpus(&field, cfg.cases, cfg.steps, cfg.seed)?) } else { None };
    let empty = Corpus { field, items: Vec::new() };
    suites.iter().map(|&s| run_suite(s, cfg, Some(corpus.as_ref().unwrap_or(&empty)))).collect()
}
