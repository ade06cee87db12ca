//! Finite-scale evaluators for the two transcendence criteria.
//!
//! Both criteria are statements about limits. What is computed here is a
//! proxy over a tail window of a finite expansion, and every report says so.
//! Logarithms are carried as outward-rounded `f64` enclosures; a criterion
//! only "fires" when the enclosures separate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::convergents::{log_q, log_root_range, ConvergentState};
use crate::interval::{ln_big, next_down, next_up};
use crate::words::{stammer_statistic, Repetition};

pub const FINITE_SCALE_NOTE: &str =
    "finite-scale proxy of an asymptotic statement; a finite prefix cannot prove or refute the limit";

/// Inclusive index window `[start, end]` into a `q_n` sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: usize,
    pub end: usize,
}

impl Window {
    /// Tail window `[⌈N/2⌉, N]` where `N` is the last index; never includes 0.
    pub fn tail_half(len: usize) -> Window {
        let end = len.saturating_sub(1);
        Window { start: end.div_ceil(2).max(1), end }
    }

    pub fn clamp(self, len: usize) -> Window {
        let end = self.end.min(len.saturating_sub(1));
        Window { start: self.start.max(1).min(end.max(1)), end }
    }
}

fn widen(lo: f64, hi: f64) -> (f64, f64) {
    (next_down(lo), next_up(hi))
}

/// `ln` enclosures of positive big integers, index-aligned with the input.
pub fn log_bigints(q: &[BigInt]) -> Vec<(f64, f64)> {
    q.iter()
        .map(|x| {
            assert!(x.is_positive(), "q_n must be positive");
            let l = ln_big(x);
            let pad = 1e-12 * l.abs().max(1.0);
            (next_down(l - pad), next_up(l + pad))
        })
        .collect()
}

/// `ln` enclosures of `q_n` for a convergent sequence.
pub fn log_convergents(states: &[ConvergentState]) -> Vec<(f64, f64)> {
    log_q(states)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthCriterionReport {
    pub d: u32,
    pub window: Window,
    /// Enclosure of `max (ln ln q_n)/n` over the window.
    pub statistic: (f64, f64),
    pub argmax: Option<usize>,
    /// Enclosure of `ln(2D - 1)`.
    pub threshold: (f64, f64),
    pub fires: bool,
    /// `D = 1` makes the threshold 0; the growth criterion assumes `D ≥ 2`.
    pub degenerate: bool,
    pub note: String,
}

/// `max (ln ln q_n)/n` over the window against `ln(2D - 1)`. Indices with
/// `q_n ≤ 1` (no positive log) are skipped.
pub fn growth_criterion(log_q: &[(f64, f64)], d: u32, window: Option<Window>) -> GrowthCriterionReport {
    assert!(d >= 1, "degree must be positive");
    let window = window.unwrap_or_else(|| Window::tail_half(log_q.len())).clamp(log_q.len());
    // Enclosure of a max is (max of lower ends, max of upper ends).
    let mut statistic = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut argmax = None;
    for n in window.start..=window.end {
        let Some(&(lo, hi)) = log_q.get(n) else { break };
        if lo <= 0.0 {
            continue;
        }
        let (a, b) = widen(lo.ln(), hi.ln());
        let (a, b) = widen(a / n as f64, b / n as f64);
        statistic.0 = statistic.0.max(a);
        if b > statistic.1 {
            statistic.1 = b;
            argmax = Some(n);
        }
    }
    let t = ((2 * d - 1) as f64).ln();
    let threshold = widen(t, t);
    GrowthCriterionReport {
        d,
        window,
        statistic,
        argmax,
        threshold,
        fires: statistic.0 > threshold.1,
        degenerate: d == 1,
        note: FINITE_SCALE_NOTE.to_string(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StammerCriterionReport {
    pub d: u32,
    pub window: Window,
    /// Exact stammering statistic of the prefix.
    pub lhs: String,
    pub lhs_f64: f64,
    pub witness: Option<Repetition>,
    /// Enclosures of the windowed `min`/`max` of `q_n^{1/n}`.
    pub b_est: (f64, f64),
    pub big_b_est: (f64, f64),
    /// Enclosure of `(3D/2) ln B / ln b`; infinite when `ln b` is not
    /// certified positive.
    pub rhs: (f64, f64),
    pub fires: bool,
    pub note: String,
}

/// The stammering statistic of `word` against `(3D/2) ln B / ln b`, with
/// `b`, `B` the windowed extremes of `q_n^{1/n}`.
pub fn stammer_criterion<T: Eq>(word: &[T], log_q: &[(f64, f64)], d: u32, window: Option<Window>) -> StammerCriterionReport {
    let window = window.unwrap_or_else(|| Window::tail_half(log_q.len())).clamp(log_q.len());
    let stammer = stammer_statistic(word);
    let lhs_f64 = stammer.value.to_f64().unwrap_or(f64::NAN);
    let (ln_b, ln_big_b) = if window.end >= 1 {
        log_root_range(log_q, window.start, window.end)
    } else {
        ((0.0, 0.0), (0.0, 0.0))
    };
    let c = 1.5 * d as f64;
    let rhs = if ln_b.0 > 0.0 {
        widen(c * ln_big_b.0 / ln_b.1, c * ln_big_b.1 / ln_b.0)
    } else {
        (f64::INFINITY, f64::INFINITY)
    };
    // lhs is exact; compare against the upper end with one more ulp of slack.
    let fires = rhs.1.is_finite() && next_down(lhs_f64) > rhs.1;
    StammerCriterionReport {
        d,
        window,
        lhs: stammer.value.to_string(),
        lhs_f64,
        witness: stammer.witness,
        b_est: widen(ln_b.0.exp(), ln_b.1.exp()),
        big_b_est: widen(ln_big_b.0.exp(), ln_big_b.1.exp()),
        rhs,
        fires,
        note: format!(
            "{FINITE_SCALE_NOTE}; the criterion needs infinitely many repetitions, a prefix exhibits finitely many"
        ),
    }
}

/// The case `u = 0`, `b = B`: the inequality reduces to `w > 3D/2`. Exact.
pub fn reduced_condition_fires(w: &BigRational, d: u32) -> bool {
    w * BigRational::from_integer(2.into()) > BigRational::from_integer((3 * d).into())
}

/// One line of the growth table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: usize,
    pub q_n: String,
    /// `q_n^{1/n}`, midpoint of the enclosure.
    pub q_root: f64,
    /// `ln ln q_n / n`, absent when `q_n ≤ 1`.
    pub loglog_over_n: Option<f64>,
}

pub fn growth_table_from_logs(q_text: &[String], logs: &[(f64, f64)]) -> Vec<GrowthRow> {
    logs.iter()
        .zip(q_text)
        .enumerate()
        .skip(1)
        .map(|(n, (&(lo, hi), q))| {
            let l = 0.5 * (lo + hi);
            GrowthRow {
                n,
                q_n: q.clone(),
                q_root: (l / n as f64).exp(),
                loglog_over_n: (lo > 0.0).then(|| l.ln() / n as f64),
            }
        })
        .collect()
}

pub fn growth_table(states: &[ConvergentState]) -> Vec<GrowthRow> {
    let text: Vec<String> = states.iter().map(|s| s.q.to_string()).collect();
    growth_table_from_logs(&text, &log_q(states))
}
