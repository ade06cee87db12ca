//! Naive and logarithmic Weil heights, conjugate domination of convergents,
//! height growth of convergents, and quadratic values of ultimately periodic
//! words.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::convergents::{convergents_of, ConvergentState};
use crate::cycfield::{Field, FieldElement, FieldElementJson};
use crate::error::{Error, Result};
use crate::interval::{ln_big, Interval};
use crate::poly::{self, ZPoly};
use crate::rosen::{self, ExpansionStatus, PartialQuotient, Word};

/// Relative padding for heights computed in floating point.
const LOG_PAD: f64 = 1e-9;

fn pad(x: f64) -> (f64, f64) {
    let p = LOG_PAD * (1.0 + x.abs());
    (x - p, x + p)
}

fn ln_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

/// Largest absolute coefficient of the primitive minimal polynomial.
pub fn naive_height(a: &FieldElement) -> BigInt {
    poly::max_abs_coeff(&a.minimal_polynomial())
}

/// Logarithmic Weil height via the Mahler measure of the minimal polynomial.
pub fn weil_height(a: &FieldElement) -> (f64, f64) {
    let g = a.minimal_polynomial();
    let d = poly::degree_z(&g) as f64;
    let big_d = a.field().degree() as f64;
    let lead = ln_big(&g.last().unwrap().abs());
    // Each root of g appears D/d times among the D conjugates.
    let roots: f64 = a.conjugates(64).iter().map(|c| ln_plus(c.midpoint_f64().abs())).sum();
    pad((lead + roots * d / big_d) / d)
}

/// `log H ≤ deg·h + log 2`, with the Weil height's outward bound.
pub fn height_relation_holds(naive: &BigInt, degree: usize, weil: (f64, f64)) -> bool {
    ln_big(naive) <= degree as f64 * weil.1 + std::f64::consts::LN_2 + LOG_PAD
}

/// `c₃ = min_σ |σ(λ)|/λ`, attained at `embedding`.
#[derive(Clone, Debug)]
pub struct C3 {
    pub embedding: usize,
    /// `|σ(λ)|` at the minimizing embedding, as a field element.
    pub numerator: FieldElement,
    pub value: (f64, f64),
}

pub fn c3_constant(field: &Field) -> C3 {
    let lam = FieldElement::lambda(field);
    let conj: Vec<FieldElement> = lam.galois_conjugates().iter().map(FieldElement::abs).collect();
    let mut best = 0;
    for e in 1..conj.len() {
        if conj[e].cmp_real(&conj[best]) == Ordering::Less {
            best = e;
        }
    }
    let ratio = conj[best].checked_div(&lam).expect("λ ≠ 0").eval_embedding(0, 64);
    C3 { embedding: best, numerator: conj[best].clone(), value: ratio.to_f64_bounds() }
}

/// A failed domination inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationFailure {
    pub n: usize,
    pub embedding: usize,
    /// `"p"` or `"q"`.
    pub which: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeightReport {
    /// First index with `q_n > 2`.
    pub n0: Option<usize>,
    pub c3: (f64, f64),
    pub checks: usize,
    pub violations: Vec<DominationFailure>,
    /// Failures of the stronger inequality with `c₃` replaced by 1.
    pub conjectured_violations: Vec<DominationFailure>,
    /// Smallest `|a|/|σ(a)|` seen, over `a ∈ {p_n, q_n}` and `σ ≠ id`.
    pub min_ratio: f64,
}

impl HeightReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn first_q_above_two(states: &[ConvergentState]) -> Option<usize> {
    let field = states.first()?.q.field().clone();
    let two = FieldElement::from_int(&field, 2);
    states.iter().skip(1).find(|s| s.q.cmp_real(&two) == Ordering::Greater).map(|s| s.n)
}

/// Checks `|a| ≥ c₃|σ(a)|` for `a ∈ {q_n, p_n}`, every `n ≥ n₀` and every
/// embedding, exactly, together with the variant `|a| ≥ |σ(a)|`.
pub fn domination_check(field: &Field, states: &[ConvergentState]) -> HeightReport {
    let c3 = c3_constant(field);
    let lam = FieldElement::lambda(field);
    let n0 = first_q_above_two(states);
    let mut report = HeightReport {
        n0,
        c3: c3.value,
        checks: 0,
        violations: Vec::new(),
        conjectured_violations: Vec::new(),
        min_ratio: f64::INFINITY,
    };
    let Some(n0) = n0 else { return report };
    for st in states.iter().filter(|s| s.n >= n0) {
        for (which, a) in [("q", &st.q), ("p", &st.p)] {
            let abs_a = a.abs();
            for (e, conj) in a.galois_conjugates().iter().enumerate() {
                let abs_c = conj.abs();
                report.checks += 1;
                // λ|a| ≥ |σ*(λ)|·|σ(a)|  ⇔  |a| ≥ c₃|σ(a)|
                if lam.mul_ref(&abs_a).sub_ref(&c3.numerator.mul_ref(&abs_c)).sign() < 0 {
                    report.violations.push(DominationFailure { n: st.n, embedding: e, which: which.into() });
                }
                if abs_a.cmp_real(&abs_c) == Ordering::Less {
                    report.conjectured_violations.push(DominationFailure { n: st.n, embedding: e, which: which.into() });
                }
                if e > 0 && !abs_c.is_zero() {
                    report.min_ratio = report.min_ratio.min(abs_a.to_f64() / abs_c.to_f64());
                }
            }
        }
    }
    report
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeightRow {
    pub n: usize,
    pub naive_height: String,
    /// `ln H(p_n/q_n) - D ln q_n`.
    pub ln_ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeightBoundReport {
    pub n0: Option<usize>,
    pub rows: Vec<HeightRow>,
    /// `max H(p_n/q_n)/q_n^D` over the rows.
    pub c4_emp: f64,
}

impl HeightBoundReport {
    /// Running maximum of the ratio over rows with `n ≤ upto` (and `n ≥ from`).
    pub fn running_max(&self, from: usize, upto: usize) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.n >= from && r.n <= upto)
            .map(|r| r.ln_ratio.exp())
            .fold(0.0, f64::max)
    }
}

/// `H(p_n/q_n)/q_n^D` for every `n ≥ n₀`.
pub fn height_bound_check(field: &Field, states: &[ConvergentState]) -> HeightBoundReport {
    let d = field.degree() as f64;
    let n0 = first_q_above_two(states);
    let mut rows = Vec::new();
    if let Some(n0) = n0 {
        for st in states.iter().filter(|s| s.n >= n0) {
            let h = naive_height(&st.value());
            let ln_q = st.q.eval_embedding(0, 64).ln_bounds().expect("q > 0");
            rows.push(HeightRow { n: st.n, ln_ratio: ln_big(&h) - d * ln_q.0, naive_height: h.to_string() });
        }
    }
    let c4_emp = rows.iter().map(|r| r.ln_ratio.exp()).fold(0.0, f64::max);
    HeightBoundReport { n0, rows, c4_emp }
}

/// Polynomial with field coefficients, constant term first.
type FPoly = Vec<FieldElement>;

fn fpoly_mul(a: &[FieldElement], b: &[FieldElement]) -> FPoly {
    let field = a[0].field();
    let mut out = vec![FieldElement::zero(field); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add_ref(&x.mul_ref(y));
        }
    }
    out
}

/// The fixed point `α` of `M = M_{μ+ν}·M_μ⁻¹`, a root of
/// `f(x) = c x² + (d - a) x - b`.
#[derive(Clone, Debug)]
pub struct QuadraticSurd {
    field: Field,
    /// `[-b, d - a, c]`.
    f: [FieldElement; 3],
    /// `Π_σ σ(f)` exactly, before taking the primitive part.
    norm_poly: ZPoly,
    abs_poly: ZPoly,
    min_poly: ZPoly,
    exact: Option<FieldElement>,
    /// For degree 2: `α = ((a - d) + root_sign·sqrt(Δ))/(2c)`.
    root_sign: i8,
    q_mu: FieldElement,
    q_mu_nu: FieldElement,
}

impl QuadraticSurd {
    /// Coefficients of `f`, constant term first.
    pub fn quadratic(&self) -> &[FieldElement; 3] {
        &self.f
    }

    /// Primitive part of `Π_σ σ(f)`.
    pub fn abs_poly(&self) -> &ZPoly {
        &self.abs_poly
    }

    pub fn min_poly(&self) -> &ZPoly {
        &self.min_poly
    }

    pub fn degree_over_field(&self) -> usize {
        if self.exact.is_some() {
            1
        } else {
            2
        }
    }

    /// `α` itself when it lies in `ℚ(λ)`.
    pub fn exact(&self) -> Option<&FieldElement> {
        self.exact.as_ref()
    }

    fn discriminant(&self) -> FieldElement {
        let [nb, dma, c] = &self.f;
        dma.mul_ref(dma).sub_ref(&c.mul_ref(nb).mul_int(&BigInt::from(4)))
    }

    fn root_interval(&self, sign: i8, bits: u32) -> Interval {
        let prec = bits + 64;
        let [_, dma, c] = &self.f;
        let mut guard = 64;
        loop {
            let p = prec + guard;
            let sq = self.discriminant().eval_embedding(0, p).sqrt();
            let sq = if sign < 0 { sq.neg() } else { sq };
            let num = dma.eval_embedding(0, p).neg().add(&sq);
            let den = c.mul_int(&BigInt::from(2)).eval_embedding(0, p);
            if let Some(v) = num.div(&den) {
                if v.width_at_most(bits) {
                    return v;
                }
            }
            guard *= 2;
        }
    }

    /// Enclosure of `α` of width at most `2^-bits`.
    pub fn value(&self, bits: u32) -> Interval {
        match &self.exact {
            Some(a) => a.eval_embedding(0, bits),
            None => self.root_interval(self.root_sign, bits),
        }
    }

    /// Enclosure of `f(α)`; it must contain 0.
    pub fn residual(&self, bits: u32) -> Interval {
        let v = self.value(bits + 32);
        let [c0, c1, c2] = &self.f;
        let e = |a: &FieldElement| a.eval_embedding(0, bits + 32);
        e(c2).mul(&v).add(&e(c1)).mul(&v).add(&e(c0))
    }

    pub fn value_in_interval(&self) -> bool {
        if let Some(a) = &self.exact {
            return rosen::in_interval(a);
        }
        let mut bits = 64;
        loop {
            let v = self.value(bits);
            let half = self.field.lambda_interval(0, bits + 8).mul(&Interval::from_rational(
                &BigRational::new(BigInt::one(), BigInt::from(2)),
                bits + 8,
            ));
            match (v.compare(&half.neg()), v.compare(&half)) {
                (Some(Ordering::Less), _) | (_, Some(Ordering::Greater)) => return false,
                (Some(Ordering::Greater), Some(Ordering::Less)) => return true,
                _ => bits *= 2,
            }
        }
    }

    pub fn naive_height(&self) -> BigInt {
        poly::max_abs_coeff(&self.min_poly)
    }

    /// `h(α) = (ln M(F) - ln cont(F))/deg F` with `F = Π_σ σ(f)`.
    pub fn weil_height(&self) -> (f64, f64) {
        let field = &self.field;
        let [nb, dma, c] = &self.f;
        let mut ln_m = 0.0;
        for e in 0..field.degree() {
            let (c0, c1, c2) = (nb.galois(e).to_f64(), dma.galois(e).to_f64(), c.galois(e).to_f64());
            if c.is_zero() {
                ln_m += c1.abs().ln() + ln_plus((c0 / c1).abs());
                continue;
            }
            ln_m += c2.abs().ln();
            let disc = c1 * c1 - 4.0 * c2 * c0;
            if disc >= 0.0 {
                let s = disc.sqrt();
                ln_m += ln_plus(((-c1 + s) / (2.0 * c2)).abs()) + ln_plus(((-c1 - s) / (2.0 * c2)).abs());
            } else {
                ln_m += 2.0 * ln_plus((c0 / c2).abs().sqrt());
            }
        }
        let deg = poly::degree_z(&self.norm_poly) as f64;
        pad((ln_m - ln_big(&poly::content(&self.norm_poly))) / deg)
    }

    /// `H(α)/(q_μ q_{μ+ν})^D`, the empirical constant of the height bound.
    pub fn height_ratio(&self) -> f64 {
        let d = self.field.degree() as f64;
        let ln_q = |q: &FieldElement| if q.is_one() { 0.0 } else { q.eval_embedding(0, 64).ln_bounds().unwrap().0 };
        (ln_big(&self.naive_height()) - d * (ln_q(&self.q_mu) + ln_q(&self.q_mu_nu))).exp()
    }

    pub fn to_json(&self) -> QuadraticSurdJson {
        QuadraticSurdJson {
            m: self.field.m(),
            quadratic: self.f.iter().map(FieldElement::to_json).collect(),
            abs_poly: self.abs_poly.iter().map(ToString::to_string).collect(),
            min_poly: self.min_poly.iter().map(ToString::to_string).collect(),
            degree_over_field: self.degree_over_field(),
            exact: self.exact.as_ref().map(FieldElement::to_json),
            value: self.value(64).to_f64_bounds(),
            naive_height: self.naive_height().to_string(),
            height_ratio: self.height_ratio(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadraticSurdJson {
    pub m: u32,
    pub quadratic: Vec<FieldElementJson>,
    pub abs_poly: Vec<String>,
    pub min_poly: Vec<String>,
    pub degree_over_field: usize,
    pub exact: Option<FieldElementJson>,
    pub value: (f64, f64),
    pub naive_height: String,
    pub height_ratio: f64,
}

/// Ultimately periodic word `U V^∞` with `|U| = μ`, `|V| = ν`, unrolled to
/// `len` letters.
pub fn unroll(word: &[PartialQuotient], mu: usize, nu: usize, len: usize) -> Word {
    Word((0..len).map(|i| if i < mu { word[i] } else { word[mu + (i - mu) % nu] }).collect())
}

/// The value of the ultimately periodic word with preperiod `word[..mu]` and
/// period `word[mu..mu + nu]`, as a root of an explicit quadratic.
///
/// The root is selected, and the whole construction cross-checked, by
/// requiring that its own expansion reproduces the word: exactly for roots in
/// `ℚ(λ)`, by certified interval expansion otherwise.
pub fn periodic_value(field: &Field, word: &[PartialQuotient], mu: usize, nu: usize) -> Result<QuadraticSurd> {
    if nu == 0 || word.len() < mu + nu {
        return Err(Error::Inadmissible(format!("need μ+ν = {} letters, have {}", mu + nu, word.len())));
    }
    let h = rosen::max_minus_one_run(field.m());
    if unroll(word, mu, nu, mu + nu * (h + 2)).longest_minus_one_run() > h {
        return Err(Error::Inadmissible(format!("(-1,1) run longer than {h}")));
    }
    let states = convergents_of(field, &word[..mu + nu]);
    let (sm, sn) = (&states[mu], &states[mu + nu]);
    let delta = BigInt::from(sm.determinant().sign());
    // M = M_{μ+ν}·M_μ⁻¹ with M_μ⁻¹ = δ·(q_μ, -p_μ; -q_{μ-1}, p_{μ-1}).
    let (a11, a12, a21, a22) = (&sn.p_prev, &sn.p, &sn.q_prev, &sn.q);
    let a = a11.mul_ref(&sm.q).sub_ref(&a12.mul_ref(&sm.q_prev)).mul_int(&delta);
    let b = a12.mul_ref(&sm.p_prev).sub_ref(&a11.mul_ref(&sm.p)).mul_int(&delta);
    let c = a21.mul_ref(&sm.q).sub_ref(&a22.mul_ref(&sm.q_prev)).mul_int(&delta);
    let d = a22.mul_ref(&sm.p_prev).sub_ref(&a21.mul_ref(&sm.p)).mul_int(&delta);
    let f = [b.neg_ref(), d.sub_ref(&a), c.clone()];
    if f.iter().all(FieldElement::is_zero) {
        return Err(Error::Inadmissible("period acts trivially".into()));
    }

    let fpoly: FPoly = if c.is_zero() { f[..2].to_vec() } else { f.to_vec() };
    let mut prod: FPoly = vec![FieldElement::one(field)];
    for e in 0..field.degree() {
        let conj: FPoly = fpoly.iter().map(|x| x.galois(e)).collect();
        prod = fpoly_mul(&prod, &conj);
    }
    let norm_poly: ZPoly = prod
        .iter()
        .map(|x| {
            x.as_rational()
                .filter(|q| q.is_integer())
                .map(|q| q.to_integer())
                .ok_or_else(|| Error::Consistency("norm of f is not an integer polynomial".into()))
        })
        .collect::<Result<_>>()?;
    let norm_q = poly::to_q(&norm_poly);
    let abs_poly = poly::primitive(&norm_q);

    let target = unroll(word, mu, nu, mu + 3 * nu + 2);
    let mut surd = QuadraticSurd {
        field: field.clone(),
        f,
        norm_poly,
        abs_poly,
        min_poly: Vec::new(),
        exact: None,
        root_sign: 1,
        q_mu: sm.q.clone(),
        q_mu_nu: sn.q.clone(),
    };

    let candidates: Vec<FieldElement> = if c.is_zero() {
        vec![b.checked_div(&d.sub_ref(&a))?]
    } else {
        match surd.discriminant().sqrt()? {
            Some(s) => {
                let two_c = c.mul_int(&BigInt::from(2));
                let base = a.sub_ref(&d);
                vec![base.add_ref(&s).checked_div(&two_c)?, base.sub_ref(&s).checked_div(&two_c)?]
            }
            None => Vec::new(),
        }
    };
    if c.is_zero() || !candidates.is_empty() {
        for alpha in candidates {
            if !rosen::in_interval(&alpha) {
                continue;
            }
            let exp = rosen::expand(&alpha, target.len() + 1)?;
            let reproduces = match exp.status {
                ExpansionStatus::Periodic { .. } | ExpansionStatus::Truncated => exp.prefix(target.len()) == target,
                ExpansionStatus::Finite => false,
            };
            if reproduces {
                surd.min_poly = alpha.minimal_polynomial();
                surd.exact = Some(alpha);
                return Ok(surd);
            }
        }
        return Err(Error::Inadmissible(format!("no fixed point of the period expands to {target}")));
    }

    if surd.discriminant().is_negative() {
        return Err(Error::Inadmissible("the period has no real fixed point".into()));
    }
    surd.min_poly = poly::squarefree_primitive(&norm_q);
    for sign in [1i8, -1] {
        let mut bits = 256;
        while bits <= 8192 {
            let v = surd.root_interval(sign, bits);
            let (cert, _) = rosen::expand_certified(field, &v, bits, target.len());
            let n = cert.quotients.len();
            if cert.quotients[..] != target[..n] {
                break;
            }
            if n == target.len() {
                surd.root_sign = sign;
                return Ok(surd);
            }
            bits *= 2;
        }
    }
    Err(Error::Inadmissible(format!("no fixed point of the period expands to {target}")))
}

/// Enclosure of the value of `U V^∞` from its convergents: the interval
/// `p_N/q_N ± c₂/q_N²` for the first `N ≥ mu + nu` with
/// `2c₂/q_N² ≤ 2^-bits`. Valid for admissible words.
pub fn periodic_limit_enclosure(field: &Field, word: &[PartialQuotient], mu: usize, nu: usize, bits: u32) -> Interval {
    let gc = crate::convergents::growth_constants_for(field);
    let c2 = FieldElement::from_rational(field, gc.c2_bound());
    let target = BigRational::new(BigInt::one(), BigInt::one() << (bits as usize + 1));
    let mut len = mu + nu;
    loop {
        let states = convergents_of(field, &unroll(word, mu, nu, len));
        let st = states.last().unwrap();
        let err = c2.checked_div(&st.q.mul_ref(&st.q)).expect("q > 0");
        let err_hi = err.eval_embedding(0, bits + 16).hi();
        if err_hi <= target {
            let centre = st.value().eval_embedding(0, bits + 16);
            let e = Interval::hull_rational(&-err_hi.clone(), &err_hi, bits + 16);
            return centre.add(&e);
        }
        len += nu.max(4);
    }
}

/// Exact check that `a` is the zero of `p` (used in tests and reports).
pub fn annihilates(p: &ZPoly, a: &FieldElement) -> bool {
    let mut acc = FieldElement::zero(a.field());
    for c in p.iter().rev() {
        acc = acc.mul_ref(a).add_ref(&FieldElement::from_bigint(a.field(), c.clone()));
    }
    acc.is_zero()
}

/// Evaluates `p` on an interval.
pub fn eval_on_interval(p: &ZPoly, x: &Interval) -> Interval {
    let prec = x.prec();
    let mut acc = Interval::point_int(&BigInt::zero(), prec);
    for c in p.iter().rev() {
        acc = acc.mul(x).add(&Interval::point_int(c, prec));
    }
    acc
}
