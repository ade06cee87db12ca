//! Convergents `p_n/q_n` over `ℤ[λ]`, the mirror formula, the approximation
//! inequalities and growth statistics of `q_n`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cycfield::{field_new, Field, FieldElement, FieldElementJson};
use crate::error::Result;
use crate::interval::Interval;
use crate::rosen::{self, PartialQuotient};

/// `M_n = (p_{n-1} p_n; q_{n-1} q_n)` at index `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentState {
    pub n: usize,
    pub p_prev: FieldElement,
    pub p: FieldElement,
    pub q_prev: FieldElement,
    pub q: FieldElement,
}

impl ConvergentState {
    /// `(p_{-1}, p_0, q_{-1}, q_0) = (1, 0, 0, 1)`.
    pub fn seed(field: &Field) -> Self {
        ConvergentState {
            n: 0,
            p_prev: FieldElement::one(field),
            p: FieldElement::zero(field),
            q_prev: FieldElement::zero(field),
            q: FieldElement::one(field),
        }
    }

    /// `p_{n-1} q_n - q_{n-1} p_n`, always `±1`.
    pub fn determinant(&self) -> FieldElement {
        self.p_prev.mul_ref(&self.q).sub_ref(&self.q_prev.mul_ref(&self.p))
    }

    pub fn value(&self) -> FieldElement {
        self.p.checked_div(&self.q).expect("q_n is positive")
    }

    pub fn to_json(&self) -> ConvergentJson {
        let q = self.q.eval_embedding(0, 64);
        ConvergentJson {
            n: self.n,
            p: self.p.to_json(),
            q: self.q.to_json(),
            q_approx: format!("{:.12e}", q.midpoint_f64()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergentJson {
    pub n: usize,
    pub p: FieldElementJson,
    pub q: FieldElementJson,
    pub q_approx: String,
}

/// `p_n = λ r_n p_{n-1} + ε_n p_{n-2}` and likewise for `q`.
pub fn advance(state: &ConvergentState, pq: PartialQuotient) -> ConvergentState {
    let field = state.p.field();
    let rl = FieldElement::lambda(field).mul_int(&BigInt::from(pq.r()));
    let e = BigInt::from(pq.eps());
    ConvergentState {
        n: state.n + 1,
        p: rl.mul_ref(&state.p).add_ref(&state.p_prev.mul_int(&e)),
        q: rl.mul_ref(&state.q).add_ref(&state.q_prev.mul_int(&e)),
        p_prev: state.p.clone(),
        q_prev: state.q.clone(),
    }
}

/// Seed plus one state per letter.
pub fn convergents_of(field: &Field, word: &[PartialQuotient]) -> Vec<ConvergentState> {
    let mut out = Vec::with_capacity(word.len() + 1);
    out.push(ConvergentState::seed(field));
    for &pq in word {
        let next = advance(out.last().unwrap(), pq);
        out.push(next);
    }
    out
}

/// Checks `q_{n-1}/q_n = [1:r_n, ε_n:r_{n-1}, …, ε_2:r_1]` exactly.
pub fn mirror_check(field: &Field, word: &[PartialQuotient]) -> bool {
    let Some(last) = word.last() else {
        return false;
    };
    let n = word.len();
    let mut mirrored = vec![PartialQuotient::new(1, last.r()).unwrap()];
    for i in (1..n).rev() {
        mirrored.push(PartialQuotient::new(word[i].eps(), word[i - 1].r()).unwrap());
    }
    let states = convergents_of(field, word);
    let st = &states[n];
    let lhs = st.q_prev.checked_div(&st.q);
    match (lhs, rosen::evaluate(field, &mirrored, None)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

/// The constants governing growth and approximation quality for one `m`.
#[derive(Clone, Debug)]
pub struct GrowthConstants {
    field: Field,
    lambda: FieldElement,
    h: usize,
    c2_bound: BigRational,
}

impl GrowthConstants {
    pub fn m(&self) -> u32 {
        self.field.m()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn lambda(&self) -> &FieldElement {
        &self.lambda
    }

    /// Longest admissible run of `(-1, 1)`.
    pub fn h(&self) -> usize {
        self.h
    }

    /// `1/2 + ⌈m/4⌉`.
    pub fn c2_bound(&self) -> &BigRational {
        &self.c2_bound
    }

    fn even(&self) -> bool {
        self.m() % 2 == 0
    }

    /// `R` exactly when it lies in the field (even `m`, where `R = 1`).
    pub fn r_exact(&self) -> Option<FieldElement> {
        self.even().then(|| FieldElement::one(&self.field))
    }

    /// Enclosure of `R`; for odd `m` the positive root of `t² + (2-λ)t - 1`.
    pub fn r_interval(&self, bits: u32) -> Interval {
        let prec = bits + 16;
        if self.even() {
            return Interval::point_int(&BigInt::one(), prec);
        }
        let lam = self.field.lambda_interval(0, prec);
        let two = Interval::point_int(&BigInt::from(2), prec);
        let four = Interval::point_int(&BigInt::from(4), prec);
        let b = two.sub(&lam);
        let disc = b.mul(&b).add(&four).sqrt();
        let half = Interval::from_rational(&BigRational::new(BigInt::one(), BigInt::from(2)), prec);
        disc.sub(&b).mul(&half)
    }

    /// Exact comparison of `y` with `R`.
    pub fn cmp_r(&self, y: &FieldElement) -> Ordering {
        if self.even() {
            return y.cmp_real(&FieldElement::one(&self.field));
        }
        if y.sign() <= 0 {
            return Ordering::Less;
        }
        // For y > 0, sgn(y - R) = sgn(g(y)) with g(t) = t² + (2-λ)t - 1.
        let b = FieldElement::from_int(&self.field, 2).sub_ref(&self.lambda);
        let g = y.mul_ref(y).add_ref(&b.mul_ref(y)).sub_ref(&FieldElement::one(&self.field));
        g.sign().cmp(&0)
    }

    /// `c₁ = 2/(2 - Rλ)` exactly, for even `m`.
    pub fn c1_exact(&self) -> Option<FieldElement> {
        self.r_exact().map(|r| {
            let den = FieldElement::from_int(&self.field, 2).sub_ref(&r.mul_ref(&self.lambda));
            FieldElement::from_int(&self.field, 2).checked_div(&den).expect("Rλ < 2")
        })
    }

    pub fn c1_interval(&self, bits: u32) -> Interval {
        let prec = bits + 32;
        let r = self.r_interval(prec);
        let lam = self.field.lambda_interval(0, prec);
        let two = Interval::point_int(&BigInt::from(2), prec);
        two.div(&two.sub(&r.mul(&lam))).expect("Rλ < 2")
    }

    /// Exact test of `t < c₁` for `t ∈ ℚ(λ)`.
    pub fn below_c1(&self, t: &FieldElement) -> bool {
        if let Some(c1) = self.c1_exact() {
            return t.cmp_real(&c1) == Ordering::Less;
        }
        if t.sign() <= 0 {
            return true;
        }
        // t(2 - Rλ) < 2  ⇔  R > (2t - 2)/(tλ).
        let two = FieldElement::from_int(&self.field, 2);
        let z = t.mul_ref(&two).sub_ref(&two).checked_div(&t.mul_ref(&self.lambda)).expect("t > 0");
        self.cmp_r(&z) == Ordering::Less
    }

    pub fn to_json(&self) -> GrowthConstantsJson {
        GrowthConstantsJson {
            m: self.m(),
            h: self.h,
            r: self.r_interval(64).to_f64_bounds(),
            c1: self.c1_interval(64).to_f64_bounds(),
            c2_bound: self.c2_bound.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthConstantsJson {
    pub m: u32,
    pub h: usize,
    pub r: (f64, f64),
    pub c1: (f64, f64),
    pub c2_bound: String,
}

pub fn growth_constants_for(field: &Field) -> GrowthConstants {
    let m = field.m();
    GrowthConstants {
        field: field.clone(),
        lambda: FieldElement::lambda(field),
        h: rosen::max_minus_one_run(m),
        c2_bound: BigRational::new(BigInt::one(), BigInt::from(2)) + BigRational::from_integer(BigInt::from(m.div_ceil(4))),
    }
}

pub fn growth_constants(m: u32) -> Result<GrowthConstants> {
    Ok(growth_constants_for(&field_new(m)?))
}

/// Outcome of the three approximation inequalities at one index.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApproxRow {
    pub n: usize,
    /// `1/(q_n(q_{n+1}+q_n)) < |x - p_n/q_n|`
    pub lower_ok: bool,
    /// `|x - p_n/q_n| < c₁/(q_n q_{n+1})`
    pub upper_ok: bool,
    /// `|x - p_n/q_n| < c₂/q_n²`
    pub c2_ok: bool,
    pub error: f64,
    pub lower: f64,
    pub upper: f64,
    pub c2: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ApproxReport {
    pub rows: Vec<ApproxRow>,
}

impl ApproxReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.lower_ok && r.upper_ok && r.c2_ok)
    }

    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| !(r.lower_ok && r.upper_ok && r.c2_ok)).count()
    }
}

/// Exact check of the approximation inequalities for every `n ≥ 1` that has a
/// successor state.
pub fn approx_bound_check(gc: &GrowthConstants, x: &FieldElement, states: &[ConvergentState]) -> ApproxReport {
    let field = x.field();
    let one = FieldElement::one(field);
    let c2 = FieldElement::from_rational(field, &gc.c2_bound);
    let c1 = gc.c1_interval(64).midpoint_f64();
    let mut rows = Vec::new();
    for w in states.windows(2).skip(1) {
        let (cur, next) = (&w[0], &w[1]);
        let diff = x.sub_ref(&cur.value()).abs();
        let qq = cur.q.mul_ref(&next.q);
        let lower = one.checked_div(&cur.q.mul_ref(&next.q.add_ref(&cur.q))).expect("q > 0");
        let c2_bound = c2.checked_div(&cur.q.mul_ref(&cur.q)).expect("q > 0");
        let qq_f = qq.to_f64();
        rows.push(ApproxRow {
            n: cur.n,
            lower_ok: diff.cmp_real(&lower) == Ordering::Greater,
            upper_ok: gc.below_c1(&diff.mul_ref(&qq)),
            c2_ok: diff.cmp_real(&c2_bound) == Ordering::Less,
            error: diff.to_f64(),
            lower: lower.to_f64(),
            upper: c1 / qq_f,
            c2: c2_bound.to_f64(),
        });
    }
    ApproxReport { rows }
}

/// `s(n) = 1 + ⌊(n-1)/(h+1)⌋`.
pub fn s_of(n: usize, h: usize) -> usize {
    1 + (n - 1) / (h + 1)
}

/// Windowed estimates of `liminf`/`limsup q_n^{1/n}` plus the exact growth
/// checks behind them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthStats {
    pub window: (usize, usize),
    /// Enclosure of `min q_n^{1/n}` over the window.
    pub b_est: (f64, f64),
    /// Enclosure of `max q_n^{1/n}` over the window.
    pub big_b_est: (f64, f64),
    /// `q_n ≥ λ^{s(n)}` for every `n ≥ 1`.
    pub min_growth_ok: bool,
    /// `q_{n+h+1} ≥ λ q_n` for every `n` where both exist.
    pub step_ok: bool,
    /// `q_n > q_{n-1}` for every `n ≥ 2`.
    pub increasing_ok: bool,
}

/// Natural-log enclosures of `q_n`, indexed like `states`.
pub fn log_q(states: &[ConvergentState]) -> Vec<(f64, f64)> {
    states
        .iter()
        .map(|s| {
            if s.q.is_one() {
                (0.0, 0.0)
            } else {
                s.q.eval_embedding(0, 64).ln_bounds().expect("q_n > 0")
            }
        })
        .collect()
}

/// Min and max of `ln(q_n)/n` over `n ∈ [start, end]`, outward.
pub fn log_root_range(logs: &[(f64, f64)], start: usize, end: usize) -> ((f64, f64), (f64, f64)) {
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (n, &(a, b)) in logs.iter().enumerate().take(end + 1).skip(start.max(1)) {
        let (a, b) = (a / n as f64, b / n as f64);
        lo = (lo.0.min(a), lo.1.min(b));
        hi = (hi.0.max(a), hi.1.max(b));
    }
    (lo, hi)
}

pub const DEFAULT_WINDOW_START: usize = 5;

pub fn growth_stats(gc: &GrowthConstants, states: &[ConvergentState], window_start: usize) -> GrowthStats {
    let lam = gc.lambda();
    let h = gc.h();
    let end = states.len().saturating_sub(1);
    let start = if window_start <= end { window_start.max(1) } else { 1.min(end) };
    let mut min_growth_ok = true;
    let mut step_ok = true;
    let mut increasing_ok = true;
    let mut lam_pow = FieldElement::one(lam.field());
    let mut pow_exp = 0;
    for n in 1..states.len() {
        let s = s_of(n, h);
        while pow_exp < s {
            lam_pow = lam_pow.mul_ref(lam);
            pow_exp += 1;
        }
        if states[n].q.cmp_real(&lam_pow) == Ordering::Less {
            min_growth_ok = false;
        }
        if n >= 2 && states[n].q.cmp_real(&states[n - 1].q) != Ordering::Greater {
            increasing_ok = false;
        }
    }
    for n in 0..states.len() {
        if let Some(later) = states.get(n + h + 1) {
            if later.q.cmp_real(&lam.mul_ref(&states[n].q)) == Ordering::Less {
                step_ok = false;
            }
        }
    }
    let logs = log_q(states);
    let (lo, hi) = log_root_range(&logs, start, end);
    let exp_bounds = |(a, b): (f64, f64)| (crate::interval::next_down(a.exp()), crate::interval::next_up(b.exp()));
    GrowthStats {
        window: (start, end),
        b_est: if end >= 1 { exp_bounds(lo) } else { (1.0, 1.0) },
        big_b_est: if end >= 1 { exp_bounds(hi) } else { (1.0, 1.0) },
        min_growth_ok,
        step_ok,
        increasing_ok,
    }
}

/// Dominant root of `t² - λ r t - ε`, the growth rate of `q_n` along the
/// constant word `(ε, r)^∞`; used as a reference value.
pub fn constant_word_growth(field: &Field, pq: PartialQuotient) -> f64 {
    let a = FieldElement::lambda(field).to_f64() * pq.r() as f64;
    0.5 * (a + (a * a + 4.0 * pq.eps() as f64).sqrt())
}

/// `true` iff every state has determinant `±1`.
pub fn determinants_ok(states: &[ConvergentState]) -> bool {
    states.iter().all(|s| {
        let d = s.determinant();
        d.is_one() || d.neg_ref().is_one()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq(e: i8, r: u64) -> PartialQuotient {
        PartialQuotient::new(e, r).unwrap()
    }

    #[test]
    fn advance_examples() {
        let f = field_new(4).unwrap();
        let lam = FieldElement::lambda(&f);
        let w = [pq(1, 1), pq(1, 1), pq(1, 2)];
        let st = convergents_of(&f, &w);
        assert_eq!(st.len(), 4);
        assert_eq!((st[1].p.clone(), st[1].q.clone()), (FieldElement::one(&f), lam.clone()));
        assert_eq!(st[2].q, FieldElement::from_int(&f, 3));
        assert_eq!(st[3].q, lam.mul_int(&BigInt::from(7)));
        assert!(determinants_ok(&st));
        assert_eq!(convergents_of(&f, &[]).len(), 1);
        assert_eq!(st[1].value(), lam.inv().unwrap());
    }

    #[test]
    fn mirror_examples() {
        let f = field_new(4).unwrap();
        assert!(mirror_check(&f, &[pq(1, 1)]));
        assert!(mirror_check(&f, &[pq(1, 1), pq(1, 1)]));
        assert!(mirror_check(&f, &[pq(1, 3), pq(-1, 2), pq(1, 1), pq(-1, 4)]));
        assert!(!mirror_check(&f, &[]));
    }

    #[test]
    fn constants() {
        let g4 = growth_constants(4).unwrap();
        assert_eq!(g4.h(), 2);
        assert_eq!(g4.c2_bound(), &BigRational::new(3.into(), 2.into()));
        let c1 = g4.c1_interval(60).to_f64_bounds();
        assert!(c1.0 < 3.41422 && c1.1 > 3.41421);
        let g6 = growth_constants(6).unwrap();
        assert_eq!(g6.h(), 3);
        assert_eq!(g6.c2_bound(), &BigRational::new(5.into(), 2.into()));
        assert!((g6.c1_interval(60).midpoint_f64() - 7.4641).abs() < 1e-3);
        let g5 = growth_constants(5).unwrap();
        assert_eq!(g5.h(), 1);
        let r = g5.r_interval(60).to_f64_bounds();
        assert!((r.0 - 0.8270).abs() < 1e-3);
        let lam = g5.lambda().to_f64();
        assert!(lam / 2.0 < r.0 && r.1 < 1.0);
        // cmp_r agrees with the interval.
        let f5 = g5.field().clone();
        assert_eq!(g5.cmp_r(&FieldElement::from_ratio(&f5, 4, 5)), Ordering::Less);
        assert_eq!(g5.cmp_r(&FieldElement::from_ratio(&f5, 5, 6)), Ordering::Greater);
        assert_eq!(g5.cmp_r(&FieldElement::lambda(&f5).mul_rational(&BigRational::new(1.into(), 2.into()))), Ordering::Less);
    }

    #[test]
    fn approximation_of_half() {
        let f = field_new(4).unwrap();
        let gc = growth_constants_for(&f);
        let x = FieldElement::from_ratio(&f, 1, 2);
        let exp = rosen::expand(&x, 100).unwrap();
        let st = convergents_of(&f, &exp.prefix(12));
        let rep = approx_bound_check(&gc, &x, &st);
        assert_eq!(rep.rows.len(), 11);
        assert!(rep.all_ok(), "{rep:?}");
        let r1 = &rep.rows[0];
        assert!((r1.error - 0.2071).abs() < 1e-3);
        assert!((r1.upper - 0.805).abs() < 1e-3);
        assert!((r1.lower - 0.160).abs() < 1e-3);
    }

    #[test]
    fn growth_of_constant_word() {
        let f = field_new(4).unwrap();
        let gc = growth_constants_for(&f);
        let w = vec![pq(1, 1); 60];
        let st = convergents_of(&f, &w);
        let gs = growth_stats(&gc, &st, 30);
        assert!(gs.min_growth_ok && gs.step_ok && gs.increasing_ok);
        let limit = constant_word_growth(&f, pq(1, 1));
        assert!((limit - 1.9319).abs() < 1e-3);
        assert!(gs.b_est.0 <= gs.big_b_est.1);
        assert!((gs.big_b_est.1 - limit).abs() < 0.05);
    }
}
