//! The Rosen map `T(x) = |1/x| - λ⌊|1/(λx)| + 1/2⌋` on `[-λ/2, λ/2)`,
//! exact and certified expansions, evaluation of finite words, and the
//! natural extension.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::cycfield::{Field, FieldElement, FieldElementJson};
use crate::error::{Error, Result};
use crate::interval::Interval;

pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// A letter `(ε, r)` of the alphabet `{±1} × ℕ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialQuotient {
    eps: i8,
    r: u64,
}

impl PartialQuotient {
    pub fn new(eps: i8, r: u64) -> Result<Self> {
        if eps != 1 && eps != -1 {
            return Err(Error::Parse(format!("sign must be ±1, got {eps}")));
        }
        if r == 0 {
            return Err(Error::Parse("partial quotient r must be at least 1".into()));
        }
        Ok(PartialQuotient { eps, r })
    }

    pub fn eps(&self) -> i8 {
        self.eps
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    /// `(-1, 1)`, the only letter whose runs are bounded.
    pub fn is_minus_one_one(&self) -> bool {
        self.eps == -1 && self.r == 1
    }
}

impl fmt::Display for PartialQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}1:{}", if self.eps > 0 { '+' } else { '-' }, self.r)
    }
}

impl FromStr for PartialQuotient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (e, r) = s.split_once(':').ok_or_else(|| Error::Parse(format!("expected ±1:r, got {s:?}")))?;
        let eps = match e.trim() {
            "+1" | "1" => 1,
            "-1" => -1,
            other => return Err(Error::Parse(format!("bad sign {other:?} in {s:?}"))),
        };
        let r: u64 = r.trim().parse().map_err(|_| Error::Parse(format!("bad r in {s:?}")))?;
        PartialQuotient::new(eps, r)
    }
}

impl Serialize for PartialQuotient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PartialQuotient {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite word of partial quotients; text form `+1:1,+1:1,+1:2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<PartialQuotient>);

impl Word {
    pub fn new(letters: Vec<PartialQuotient>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[PartialQuotient] {
        &self.0
    }

    /// Longest run of `(-1, 1)`.
    pub fn longest_minus_one_run(&self) -> usize {
        let mut best = 0;
        let mut cur = 0;
        for pq in &self.0 {
            if pq.is_minus_one_one() {
                cur += 1;
                best = best.max(cur);
            } else {
                cur = 0;
            }
        }
        best
    }
}

impl std::ops::Deref for Word {
    type Target = [PartialQuotient];

    fn deref(&self) -> &[PartialQuotient] {
        &self.0
    }
}

impl From<Vec<PartialQuotient>> for Word {
    fn from(v: Vec<PartialQuotient>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, pq) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{pq}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::default());
        }
        s.split(',').map(str::parse).collect::<Result<Vec<_>>>().map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum ExpansionStatus {
    Finite,
    Periodic { mu: usize, nu: usize },
    Truncated,
}

impl fmt::Display for ExpansionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionStatus::Finite => f.write_str("Finite"),
            ExpansionStatus::Periodic { mu, nu } => write!(f, "Periodic({mu},{nu})"),
            ExpansionStatus::Truncated => f.write_str("Truncated"),
        }
    }
}

/// Quotients plus termination status. For `Periodic { mu, nu }` the word
/// holds exactly `mu + nu` letters: the preperiod followed by one period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionResult {
    pub quotients: Word,
    pub status: ExpansionStatus,
    /// `x, T(x), …, T^n(x)` with `n = quotients.len()`, when requested.
    pub orbit: Option<Vec<FieldElement>>,
}

impl ExpansionResult {
    /// The first `n` letters, unrolling the period as often as needed.
    pub fn prefix(&self, n: usize) -> Word {
        let q = &self.quotients;
        match self.status {
            ExpansionStatus::Periodic { mu, nu } => {
                Word((0..n).map(|i| if i < mu { q[i] } else { q[mu + (i - mu) % nu] }).collect())
            }
            _ => Word(q[..n.min(q.len())].to_vec()),
        }
    }

    pub fn to_json(&self, m: u32) -> ExpansionJson {
        let (mu, nu) = match self.status {
            ExpansionStatus::Periodic { mu, nu } => (Some(mu), Some(nu)),
            _ => (None, None),
        };
        ExpansionJson {
            m,
            status: match self.status {
                ExpansionStatus::Finite => "finite",
                ExpansionStatus::Periodic { .. } => "periodic",
                ExpansionStatus::Truncated => "truncated",
            }
            .into(),
            mu,
            nu,
            quotients: self.quotients.clone(),
            orbit: self.orbit.as_ref().map(|o| o.iter().map(FieldElement::to_json).collect()),
        }
    }

    pub fn from_json(field: &Field, json: &ExpansionJson) -> Result<Self> {
        let status = match (json.status.as_str(), json.mu, json.nu) {
            ("finite", _, _) => ExpansionStatus::Finite,
            ("truncated", _, _) => ExpansionStatus::Truncated,
            ("periodic", Some(mu), Some(nu)) if nu >= 1 => ExpansionStatus::Periodic { mu, nu },
            (s, _, _) => return Err(Error::Parse(format!("bad expansion status {s:?}"))),
        };
        let orbit = match &json.orbit {
            Some(o) => Some(o.iter().map(|e| FieldElement::from_json(field, e)).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        Ok(ExpansionResult { quotients: json.quotients.clone(), status, orbit })
    }
}

/// Wire form of [`ExpansionResult`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpansionJson {
    pub m: u32,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mu: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nu: Option<usize>,
    pub quotients: Word,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub orbit: Option<Vec<FieldElementJson>>,
}

/// Largest admissible run of `(-1, 1)`: `m/2` for even `m`, `(m-3)/2` for odd.
pub fn max_minus_one_run(m: u32) -> usize {
    if m % 2 == 0 {
        (m / 2) as usize
    } else {
        ((m - 3) / 2) as usize
    }
}

fn half_lambda(field: &Field) -> FieldElement {
    FieldElement::lambda(field).mul_rational(&BigRational::new(BigInt::one(), BigInt::from(2)))
}

/// Exact membership in `[-λ/2, λ/2)`.
pub fn in_interval(x: &FieldElement) -> bool {
    let h = half_lambda(x.field());
    x.add_ref(&h).sign() >= 0 && x.sub_ref(&h).sign() < 0
}

/// Translates `x` by the multiple of `λ` that lands it in `[-λ/2, λ/2)`.
/// Returns the multiple `k` and `x - kλ`.
pub fn reduce_into_interval(x: &FieldElement) -> (BigInt, FieldElement) {
    let lam = FieldElement::lambda(x.field());
    let k = x.checked_div(&lam).expect("λ is nonzero").floor_half_shift();
    let y = x.sub_ref(&lam.mul_int(&k));
    debug_assert!(in_interval(&y));
    (k, y)
}

/// One step of `T`: the letter `(sgn x, ⌊|1/(λx)| + 1/2⌋)` and `T(x)`.
pub fn rosen_step(x: &FieldElement) -> Result<(PartialQuotient, FieldElement)> {
    if x.is_zero() {
        return Err(Error::ZeroStep);
    }
    if !in_interval(x) {
        return Err(Error::OutOfInterval(x.to_string()));
    }
    let eps = x.sign();
    let lam = FieldElement::lambda(x.field());
    // y = 1/(λ|x|); then |1/x| = λy and T(x) = λ(y - r).
    let y = lam.mul_ref(&x.abs()).inv()?;
    let r = y.floor_half_shift();
    let t = lam.mul_ref(&y.sub_ref(&FieldElement::from_bigint(x.field(), r.clone())));
    let r = r.to_u64().filter(|&r| r >= 1).ok_or_else(|| Error::Consistency(format!("partial quotient {r} out of range")))?;
    Ok((PartialQuotient::new(eps, r)?, t))
}

/// Exact expansion of `x ∈ [-λ/2, λ/2)`, stopping at 0, at the first
/// repeated iterate, or after `max_steps` letters.
pub fn expand(x: &FieldElement, max_steps: usize) -> Result<ExpansionResult> {
    expand_with_orbit(x, max_steps, false)
}

pub fn expand_with_orbit(x: &FieldElement, max_steps: usize, keep_orbit: bool) -> Result<ExpansionResult> {
    if !in_interval(x) {
        return Err(Error::OutOfInterval(x.to_string()));
    }
    let mut seen: HashMap<FieldElement, usize> = HashMap::new();
    let mut orbit = vec![x.clone()];
    let mut letters = Vec::new();
    let mut cur = x.clone();
    let status = loop {
        if cur.is_zero() {
            break ExpansionStatus::Finite;
        }
        let n = letters.len();
        if let Some(&mu) = seen.get(&cur) {
            break ExpansionStatus::Periodic { mu, nu: n - mu };
        }
        if n == max_steps {
            break ExpansionStatus::Truncated;
        }
        seen.insert(cur.clone(), n);
        let (pq, next) = rosen_step(&cur)?;
        letters.push(pq);
        if keep_orbit {
            orbit.push(next.clone());
        }
        cur = next;
    };
    let word = Word(letters);
    let h = max_minus_one_run(x.field().m());
    if word.longest_minus_one_run() > h {
        return Err(Error::Inadmissible(format!("run of (-1,1) longer than {h} in {word}")));
    }
    Ok(ExpansionResult { quotients: word, status, orbit: keep_orbit.then_some(orbit) })
}

/// Why a certified expansion stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifiedStop {
    /// The requested number of letters was produced.
    MaxSteps,
    /// An iterate's enclosure contains 0.
    UncertifiedSign { step: usize },
    /// `⌊|1/(λx)| + 1/2⌋` is not constant on the enclosure.
    UncertifiedFloor { step: usize },
    /// Membership in `[-λ/2, λ/2)` of the input is not decidable at this precision.
    UncertifiedDomain,
}

/// Expansion of a real number known only through an enclosure, carried out in
/// interval arithmetic at `prec` bits. Every emitted letter is certified; the
/// status is always `Truncated`, with the reason returned alongside.
pub fn expand_certified(field: &Field, x: &Interval, prec: u32, max_steps: usize) -> (ExpansionResult, CertifiedStop) {
    let lam = field.lambda_interval(0, prec);
    let half = Interval::from_rational(&BigRational::new(BigInt::one(), BigInt::from(2)), prec);
    let half_lam = lam.mul(&half);
    let mut cur = x.with_prec(prec.max(x.prec()));
    let mut letters = Vec::new();
    let truncated = |letters: Vec<PartialQuotient>, why| {
        (ExpansionResult { quotients: Word(letters), status: ExpansionStatus::Truncated, orbit: None }, why)
    };
    let lower_ok = cur.add(&half_lam).sign();
    let upper_ok = cur.sub(&half_lam).sign();
    if lower_ok.is_none_or(|s| s < 0) || upper_ok.is_none_or(|s| s > 0) {
        return truncated(letters, CertifiedStop::UncertifiedDomain);
    }
    while letters.len() < max_steps {
        let step = letters.len();
        let Some(eps) = cur.sign() else {
            return truncated(letters, CertifiedStop::UncertifiedSign { step });
        };
        let y = match cur.abs().mul(&lam).recip() {
            Some(y) => y,
            None => return truncated(letters, CertifiedStop::UncertifiedSign { step }),
        };
        let Some(r) = y.add(&half).floor() else {
            return truncated(letters, CertifiedStop::UncertifiedFloor { step });
        };
        let Some(r_small) = r.to_u64().filter(|&r| r >= 1) else {
            return truncated(letters, CertifiedStop::UncertifiedFloor { step });
        };
        letters.push(PartialQuotient { eps, r: r_small });
        cur = lam.mul(&y.sub(&Interval::point_int(&r, prec)));
    }
    truncated(letters, CertifiedStop::MaxSteps)
}

/// `[ε₁:r₁, …, ε_n:r_n]` with optional tail `t` in the last denominator,
/// computed as `M_n · t` with `M_n = Π (0 ε_i; 1 r_iλ)`.
pub fn evaluate(field: &Field, word: &[PartialQuotient], tail: Option<&FieldElement>) -> Result<FieldElement> {
    if word.is_empty() {
        return tail.cloned().ok_or_else(|| Error::Inadmissible("empty word without tail".into()));
    }
    let lam = FieldElement::lambda(field);
    let zero = FieldElement::zero(field);
    let one = FieldElement::one(field);
    // Columns (a, c) and (b, d) of the running product.
    let (mut a, mut b, mut c, mut d) = (one.clone(), zero.clone(), zero.clone(), one.clone());
    for pq in word {
        let rl = lam.mul_int(&BigInt::from(pq.r));
        let e = BigInt::from(pq.eps);
        // (a b; c d)·(0 ε; 1 rλ) = (b, εa + rλ·b; d, εc + rλ·d)
        let nb = a.mul_int(&e).add_ref(&rl.mul_ref(&b));
        let nd = c.mul_int(&e).add_ref(&rl.mul_ref(&d));
        a = b;
        c = d;
        b = nb;
        d = nd;
    }
    let (num, den) = match tail {
        Some(t) => (a.mul_ref(t).add_ref(&b), c.mul_ref(t).add_ref(&d)),
        None => (b, d),
    };
    num.checked_div(&den)
}

/// The value of the purely periodic word `period^∞`.
pub fn periodic_tail_value(field: &Field, period: &[PartialQuotient]) -> Result<crate::heights::QuadraticSurd> {
    if period.is_empty() {
        return Err(Error::Inadmissible("empty period".into()));
    }
    let s = crate::heights::periodic_value(field, period, 0, period.len())?;
    if !s.value_in_interval() {
        return Err(Error::Inadmissible(format!("fixed point of period {} lies outside the interval", Word(period.to_vec()))));
    }
    Ok(s)
}

/// `𝒯(x, y) = (T(x), 1/(rλ + εy))`.
pub fn natural_extension_step(x: &FieldElement, y: &FieldElement) -> Result<(FieldElement, FieldElement)> {
    if y.is_negative() {
        return Err(Error::OutOfInterval(format!("y = {y} is negative")));
    }
    let gc = crate::convergents::growth_constants_for(x.field());
    if gc.cmp_r(y) == std::cmp::Ordering::Greater {
        return Err(Error::OutOfInterval(format!("y = {y} exceeds R")));
    }
    let (pq, tx) = rosen_step(x)?;
    let lam = FieldElement::lambda(x.field());
    let den = lam.mul_int(&BigInt::from(pq.r)).add_ref(&y.mul_int(&BigInt::from(pq.eps)));
    Ok((tx, den.inv()?))
}

/// Rational `p/q` as a field element, reduced into `[-λ/2, λ/2)`.
pub fn rational_in_interval(field: &Field, q: &BigRational) -> FieldElement {
    reduce_into_interval(&FieldElement::from_rational(field, q)).1
}
