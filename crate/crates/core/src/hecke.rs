//! The Hecke group `G_m = ⟨T, S⟩` with `T = (1 λ; 0 1)`, `S = (0 -1; 1 0)`:
//! element enumeration, trace domination under the Galois conjugates, the
//! `ℤ[λ²]` / `λℤ[λ²]` column split and the parabolic-point test.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::convergents::ConvergentState;
use crate::cycfield::{Field, FieldElement, FieldElementJson};
use crate::error::Result;
use crate::interval::Interval;
use crate::linalg;
use crate::rosen::{self, ExpansionStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    S,
    T,
    TInv,
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gen::S => "S",
            Gen::T => "T",
            Gen::TInv => "T^-1",
        })
    }
}

/// `(a b; c d)` over `ℤ[λ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl Mat2 {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity(field: &Field) -> Self {
        let (z, o) = (FieldElement::zero(field), FieldElement::one(field));
        Mat2::new(o.clone(), z.clone(), z, o)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a.mul_ref(&o.a).add_ref(&self.b.mul_ref(&o.c)),
            b: self.a.mul_ref(&o.b).add_ref(&self.b.mul_ref(&o.d)),
            c: self.c.mul_ref(&o.a).add_ref(&self.d.mul_ref(&o.c)),
            d: self.c.mul_ref(&o.b).add_ref(&self.d.mul_ref(&o.d)),
        }
    }

    pub fn det(&self) -> FieldElement {
        self.a.mul_ref(&self.d).sub_ref(&self.b.mul_ref(&self.c))
    }

    pub fn trace(&self) -> FieldElement {
        self.a.add_ref(&self.d)
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(self.a.neg_ref(), self.b.neg_ref(), self.c.neg_ref(), self.d.neg_ref())
    }

    pub fn pow(&self, e: u32) -> Mat2 {
        let mut acc = Mat2::identity(self.a.field());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Representative of `±M` whose first nonzero entry is positive.
    pub fn normalized(&self) -> Mat2 {
        let first = [&self.a, &self.b, &self.c, &self.d].into_iter().find(|x| !x.is_zero());
        match first {
            Some(x) if x.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn is_projective_identity(&self) -> bool {
        self.normalized() == Mat2::identity(self.a.field())
    }

    pub fn to_json(&self) -> [FieldElementJson; 4] {
        [self.a.to_json(), self.b.to_json(), self.c.to_json(), self.d.to_json()]
    }
}

#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: Mat2,
    pub word: Vec<Gen>,
}

impl GroupElement {
    pub fn word_string(&self) -> String {
        self.word.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }
}

/// `(T, S)`.
pub fn generators(field: &Field) -> (Mat2, Mat2) {
    let (z, o) = (FieldElement::zero(field), FieldElement::one(field));
    let t = Mat2::new(o.clone(), FieldElement::lambda(field), z.clone(), o.clone());
    let s = Mat2::new(z, o.neg_ref(), o, FieldElement::zero(field));
    (t, s)
}

fn gen_matrix(field: &Field, g: Gen) -> Mat2 {
    let (t, s) = generators(field);
    match g {
        Gen::S => s,
        Gen::T => t,
        Gen::TInv => {
            let o = FieldElement::one(field);
            Mat2::new(o.clone(), FieldElement::lambda(field).neg_ref(), FieldElement::zero(field), o)
        }
    }
}

fn follows(prev: Option<Gen>, next: Gen) -> bool {
    !matches!((prev, next), (Some(Gen::S), Gen::S) | (Some(Gen::T), Gen::TInv) | (Some(Gen::TInv), Gen::T))
}

/// All projectively distinct non-identity elements given by reduced words in
/// `S, T, T⁻¹` of length at most `max_len`, shortest words first.
pub fn enumerate_elements(field: &Field, max_len: usize) -> Vec<GroupElement> {
    let gens = [Gen::S, Gen::T, Gen::TInv].map(|g| (g, gen_matrix(field, g)));
    let mut seen: HashSet<Mat2> = HashSet::new();
    seen.insert(Mat2::identity(field));
    let mut out = Vec::new();
    let mut layer = vec![GroupElement { matrix: Mat2::identity(field), word: Vec::new() }];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for el in &layer {
            for (g, gm) in &gens {
                if !follows(el.word.last().copied(), *g) {
                    continue;
                }
                let matrix = el.matrix.mul(gm);
                let mut word = el.word.clone();
                word.push(*g);
                let cand = GroupElement { matrix, word };
                if seen.insert(cand.matrix.normalized()) {
                    out.push(cand.clone());
                }
                // Keep extending every reduced word, even when its element was
                // already met: a longer word can still reach new elements.
                next.push(cand);
            }
        }
        layer = next;
    }
    out
}

/// Outcome of the trace-domination test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TraceCheck {
    /// `|tr M| ≤ 2`: hypothesis not met.
    Skipped,
    /// `|tr| ≥ |σ(tr)|` for every embedding; margins `|tr| - |σ(tr)|`.
    Dominates { margins: Vec<f64> },
    Violated { embedding: usize },
}

/// Exact check of `|tr M| ≥ |σ(tr M)|` for all embeddings, when `|tr M| > 2`.
pub fn trace_dominates(m: &Mat2) -> TraceCheck {
    trace_value_dominates(&m.trace())
}

/// The same test on a trace value. Interval enclosures settle almost every
/// comparison; ties and near-ties fall back to exact sign tests.
pub fn trace_value_dominates(tr: &FieldElement) -> TraceCheck {
    let conj = tr.conjugates(64);
    let abs0 = conj[0].abs();
    let two = Interval::point_int(&BigInt::from(2), 64);
    let abs_tr = match abs0.compare(&two) {
        Some(Ordering::Less) => return TraceCheck::Skipped,
        Some(Ordering::Greater) => None,
        _ => {
            let a = tr.abs();
            if a.cmp_real(&FieldElement::from_int(tr.field(), 2)) != Ordering::Greater {
                return TraceCheck::Skipped;
            }
            Some(a)
        }
    };
    let mut margins = vec![0.0];
    for (e, c) in conj.iter().enumerate().skip(1) {
        let abs_c = c.abs();
        if abs0.compare(&abs_c) == Some(Ordering::Greater) {
            margins.push(abs0.midpoint_f64() - abs_c.midpoint_f64());
            continue;
        }
        let a = abs_tr.clone().unwrap_or_else(|| tr.abs());
        let gap = a.sub_ref(&tr.galois(e).abs());
        if gap.is_negative() {
            return TraceCheck::Violated { embedding: e };
        }
        margins.push(gap.to_f64());
    }
    TraceCheck::Dominates { margins }
}

/// Traces of `M_n·(1 jλ; 0 1)` and `M_n·(1 0; jλ 1)`, without forming the
/// products: `p_{n-1} + q_n + jλq_{n-1}` and `p_{n-1} + q_n + jλp_n`.
pub fn proof_traces(state: &ConvergentState, j: u32) -> (FieldElement, FieldElement) {
    let jl = FieldElement::lambda(state.q.field()).mul_int(&BigInt::from(j));
    let base = state.p_prev.add_ref(&state.q);
    (base.add_ref(&jl.mul_ref(&state.q_prev)), base.add_ref(&jl.mul_ref(&state.p)))
}

/// `M_n·(1 jλ; 0 1)` and `M_n·(1 0; jλ 1)`.
pub fn proof_matrices(state: &ConvergentState, j: u32) -> (Mat2, Mat2) {
    let field = state.q.field();
    let mn = Mat2::new(state.p_prev.clone(), state.p.clone(), state.q_prev.clone(), state.q.clone());
    let (z, o) = (FieldElement::zero(field), FieldElement::one(field));
    let jl = FieldElement::lambda(field).mul_int(&BigInt::from(j));
    let upper = Mat2::new(o.clone(), jl.clone(), z.clone(), o.clone());
    let lower = Mat2::new(o.clone(), z, jl, o);
    (mn.mul(&upper), mn.mul(&lower))
}

/// Membership of one element in `ℤ[λ²]` and in `λℤ[λ²]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub even: bool,
    pub odd: bool,
}

/// Classification of a pair against the `ℤ[λ²]` / `λℤ[λ²]` split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnClass {
    /// First entry in `ℤ[λ²]` only, second in `λℤ[λ²]` only.
    EvenOdd,
    /// First entry in `λℤ[λ²]` only, second in `ℤ[λ²]` only.
    OddEven,
    /// One entry in each module, but the modules coincide so the split is not
    /// exclusive; happens exactly when `λ` is a unit of `ℤ[λ²]` (odd `m`).
    Degenerate,
    /// Neither assignment works.
    Violation,
}

/// Integer bases of `ℤ[λ²]` and `λℤ[λ²]` in power-basis coordinates.
#[derive(Clone, Debug)]
pub struct SplitBases {
    even: Vec<Vec<BigRational>>,
    odd: Vec<Vec<BigRational>>,
}

impl SplitBases {
    pub fn new(field: &Field) -> Self {
        let lam = FieldElement::lambda(field);
        let lam2 = lam.mul_ref(&lam);
        let k = crate::poly::degree_z(&lam2.minimal_polynomial());
        let even: Vec<FieldElement> = (0..k).map(|i| lam2.pow(i as u32)).collect();
        let odd: Vec<FieldElement> = even.iter().map(|e| e.mul_ref(&lam)).collect();
        let as_columns = |v: &[FieldElement]| -> Vec<Vec<BigRational>> {
            (0..field.degree()).map(|row| v.iter().map(|e| e.coeffs()[row].clone()).collect()).collect()
        };
        SplitBases { even: as_columns(&even), odd: as_columns(&odd) }
    }

    fn integral_in(basis: &[Vec<BigRational>], x: &FieldElement) -> bool {
        linalg::solve(basis, &x.coeffs()).is_some_and(|z| z.iter().all(|c| c.is_integer()))
    }

    pub fn membership(&self, x: &FieldElement) -> Membership {
        Membership { even: Self::integral_in(&self.even, x), odd: Self::integral_in(&self.odd, x) }
    }

    /// Whether `x ∈ λℚ(λ²)`.
    pub fn in_lambda_q_lambda2(&self, x: &FieldElement) -> bool {
        linalg::solve(&self.odd, &x.coeffs()).is_some()
    }

    pub fn classify(&self, first: &FieldElement, second: &FieldElement) -> ColumnClass {
        let (a, b) = (self.membership(first), self.membership(second));
        let even_odd = a.even && b.odd;
        let odd_even = a.odd && b.even;
        match (even_odd, odd_even) {
            (true, false) if !a.odd && !b.even => ColumnClass::EvenOdd,
            (false, true) if !a.even && !b.odd => ColumnClass::OddEven,
            (true, _) | (_, true) => ColumnClass::Degenerate,
            (false, false) => ColumnClass::Violation,
        }
    }
}

/// Classifies a column `(a, c)` (or a convergent pair `(p_n, q_n)`).
pub fn column_split(field: &Field, first: &FieldElement, second: &FieldElement) -> ColumnClass {
    SplitBases::new(field).classify(first, second)
}

/// A point of `ℚ(λ) ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cusp {
    Infinity,
    Finite(FieldElement),
}

fn act(field: &Field, g: Gen, x: &Cusp) -> Cusp {
    let lam = FieldElement::lambda(field);
    match (g, x) {
        (_, Cusp::Infinity) if g != Gen::S => Cusp::Infinity,
        (Gen::S, Cusp::Infinity) => Cusp::Finite(FieldElement::zero(field)),
        (Gen::S, Cusp::Finite(v)) if v.is_zero() => Cusp::Infinity,
        (Gen::S, Cusp::Finite(v)) => Cusp::Finite(v.inv().expect("nonzero").neg_ref()),
        (Gen::T, Cusp::Finite(v)) => Cusp::Finite(v.add_ref(&lam)),
        (Gen::TInv, Cusp::Finite(v)) => Cusp::Finite(v.sub_ref(&lam)),
        _ => unreachable!(),
    }
}

/// The orbit `G_m·∞` reached by words of length at most `depth`, breadth
/// first with exact deduplication.
pub fn orbit_of_infinity(field: &Field, depth: usize) -> HashSet<Cusp> {
    let mut seen = HashSet::new();
    seen.insert(Cusp::Infinity);
    let mut frontier = VecDeque::from([Cusp::Infinity]);
    for _ in 0..depth {
        let mut next = VecDeque::new();
        for x in frontier {
            for g in [Gen::S, Gen::T, Gen::TInv] {
                let y = act(field, g, &x);
                if seen.insert(y.clone()) {
                    next.push_back(y);
                }
            }
        }
        frontier = next;
    }
    seen
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ParabolicVerdict {
    /// The expansion terminates after `length` letters.
    Parabolic { length: usize, orbit_confirmed: bool },
    /// The expansion is eventually periodic, hence infinite.
    NotParabolic { mu: usize, nu: usize },
    /// Neither terminated nor repeated within the search depth, and not found
    /// in the orbit to the given depth.
    Unknown { expansion_depth: usize, orbit_depth: usize },
}

/// Default breadth of the orbit search used to cross-check verdicts.
pub const DEFAULT_ORBIT_DEPTH: usize = 12;

/// Decides whether `x ∈ [-λ/2, λ/2)` is a parabolic point, as far as
/// `search_depth` expansion steps and an orbit search of `orbit_depth` allow.
pub fn is_parabolic_value(x: &FieldElement, search_depth: usize, orbit_depth: usize) -> Result<ParabolicVerdict> {
    let exp = rosen::expand(x, search_depth)?;
    let field = x.field();
    match exp.status {
        ExpansionStatus::Finite => {
            let orbit = orbit_of_infinity(field, orbit_depth);
            Ok(ParabolicVerdict::Parabolic {
                length: exp.quotients.len(),
                orbit_confirmed: orbit.contains(&Cusp::Finite(x.clone())),
            })
        }
        ExpansionStatus::Periodic { mu, nu } => Ok(ParabolicVerdict::NotParabolic { mu, nu }),
        ExpansionStatus::Truncated => {
            let orbit = orbit_of_infinity(field, orbit_depth);
            if orbit.contains(&Cusp::Finite(x.clone())) {
                return Err(crate::error::Error::Consistency(format!(
                    "{x} lies in the orbit of ∞ but its expansion did not terminate"
                )));
            }
            Ok(ParabolicVerdict::Unknown { expansion_depth: search_depth, orbit_depth })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::field_new;
    use crate::rosen::PartialQuotient;
    use std::collections::HashSet;

    #[test]
    fn generator_relations() {
        for m in [4, 5, 6, 7, 8] {
            let f = field_new(m).unwrap();
            let (t, s) = generators(&f);
            assert!(s.mul(&s).is_projective_identity());
            assert_eq!(s.mul(&s), Mat2::identity(&f).neg());
            assert!(t.mul(&s).pow(m).is_projective_identity(), "m={m}");
            for k in 1..m {
                assert!(!t.mul(&s).pow(k).is_projective_identity(), "m={m}, k={k}");
            }
        }
    }

    #[test]
    fn length_one_and_det() {
        let f = field_new(4).unwrap();
        assert_eq!(enumerate_elements(&f, 1).len(), 3);
        for el in enumerate_elements(&f, 6) {
            assert!(el.matrix.det().is_one());
        }
    }

    #[test]
    fn enumeration_matches_naive_products() {
        let f = field_new(4).unwrap();
        let len = 5;
        let mut naive: HashSet<Mat2> = HashSet::new();
        let mut layer = vec![Mat2::identity(&f)];
        for _ in 0..len {
            let mut next = Vec::new();
            for m in &layer {
                for g in [Gen::S, Gen::T, Gen::TInv] {
                    let p = m.mul(&gen_matrix(&f, g));
                    naive.insert(p.normalized());
                    next.push(p);
                }
            }
            layer = next;
        }
        naive.remove(&Mat2::identity(&f));
        let ours: HashSet<Mat2> = enumerate_elements(&f, len).iter().map(|e| e.matrix.normalized()).collect();
        assert_eq!(ours, naive);
    }

    #[test]
    fn trace_examples() {
        let f4 = field_new(4).unwrap();
        let (t, s) = generators(&f4);
        let m = t.mul(&t).mul(&s);
        assert!(matches!(trace_dominates(&m), TraceCheck::Dominates { .. }));
        let f5 = field_new(5).unwrap();
        let (t, s) = generators(&f5);
        let m = t.mul(&t).mul(&s);
        let TraceCheck::Dominates { margins } = trace_dominates(&m) else { panic!() };
        assert!((margins[1] - 2.0).abs() < 1e-9);
        assert_eq!(trace_dominates(&s), TraceCheck::Skipped);
    }

    #[test]
    fn column_examples() {
        let f = field_new(4).unwrap();
        let lam = FieldElement::lambda(&f);
        let one = FieldElement::one(&f);
        assert_eq!(column_split(&f, &one, &lam), ColumnClass::EvenOdd);
        assert_eq!(column_split(&f, &lam, &FieldElement::from_int(&f, 3)), ColumnClass::OddEven);
        assert_eq!(column_split(&f, &one, &one), ColumnClass::Violation);
        let f5 = field_new(5).unwrap();
        let l5 = FieldElement::lambda(&f5);
        assert_eq!(column_split(&f5, &FieldElement::one(&f5), &l5), ColumnClass::Degenerate);
    }

    #[test]
    fn parabolic_examples() {
        let f = field_new(4).unwrap();
        let v = is_parabolic_value(&FieldElement::zero(&f), 100, 4).unwrap();
        assert!(matches!(v, ParabolicVerdict::Parabolic { length: 0, orbit_confirmed: true }));
        let x = FieldElement::lambda(&f).mul_rational(&BigRational::new((-1).into(), 2.into()));
        let v = is_parabolic_value(&x, 100, 6).unwrap();
        assert!(matches!(v, ParabolicVerdict::Parabolic { length: 1, orbit_confirmed: true }), "{v:?}");
    }

    #[test]
    fn orbit_points_terminate() {
        let f = field_new(5).unwrap();
        let bases = SplitBases::new(&f);
        for c in orbit_of_infinity(&f, 8) {
            if let Cusp::Finite(v) = c {
                let (_, y) = rosen::reduce_into_interval(&v);
                assert_eq!(rosen::expand(&y, 1000).unwrap().status, ExpansionStatus::Finite);
                assert!(bases.in_lambda_q_lambda2(&v));
            }
        }
    }

    #[test]
    fn proof_traces_match_products() {
        let f = field_new(7).unwrap();
        let word: Vec<PartialQuotient> = ["+1:2", "-1:3", "+1:1", "+1:4"].iter().map(|t| t.parse().unwrap()).collect();
        let states = crate::convergents::convergents_of(&f, &word);
        for st in &states[1..] {
            for j in 1..6 {
                let (m, n) = proof_matrices(st, j);
                let (tm, tn) = proof_traces(st, j);
                assert_eq!(m.trace(), tm);
                assert_eq!(n.trace(), tn);
                let exact = |t: &FieldElement| {
                    let a = t.abs();
                    a.cmp_real(&FieldElement::from_int(&f, 2)) == Ordering::Greater
                        && t.galois_conjugates().iter().all(|c| !a.sub_ref(&c.abs()).is_negative())
                };
                assert_eq!(matches!(trace_value_dominates(&tm), TraceCheck::Dominates { .. }), exact(&tm));
            }
        }
    }
}
