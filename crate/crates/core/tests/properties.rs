//! Property tests for the invariants of every module.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use rosen_core::convergents::{convergents_of, growth_constants_for, mirror_check};
use rosen_core::cycfield::{field_new, Field, FieldElement};
use rosen_core::hecke::{enumerate_elements, orbit_of_infinity, ColumnClass, Cusp, SplitBases};
use rosen_core::heights::{
    domination_check, eval_on_interval, height_relation_holds, naive_height, periodic_limit_enclosure, periodic_value,
    weil_height,
};
use rosen_core::poly::{self, ZPoly};
use rosen_core::rosen::{
    evaluate, expand, expand_certified, expand_with_orbit, in_interval, max_minus_one_run, natural_extension_step,
    rational_in_interval, reduce_into_interval, ExpansionStatus, PartialQuotient, Word,
};
use rosen_core::words::sturmian::{slope_bounds, sturmian_word};
use rosen_core::words::{factor_complexity, fractional_power, repetition_exponents, stammer_statistic, Repetition};

fn field(m: u32) -> Field {
    field_new(m).unwrap()
}

fn element(f: &Field, coeffs: &[i64], den: i64) -> FieldElement {
    let c: Vec<BigRational> = coeffs.iter().take(f.degree()).map(|&c| BigRational::new(c.into(), den.into())).collect();
    FieldElement::from_poly(f, &c)
}

fn m_any() -> impl Strategy<Value = u32> {
    prop_oneof![Just(4u32), Just(5), Just(6), Just(7), Just(8), Just(9), Just(10), Just(12)]
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-30i64..=30, 6)
}

fn x_in(f: &Field, p: i64, q: i64) -> FieldElement {
    rational_in_interval(f, &BigRational::new(p.into(), q.into()))
}

fn rational() -> impl Strategy<Value = (i64, i64)> {
    (1i64..=10_000).prop_flat_map(|q| (-2 * q..=2 * q, Just(q)))
}

fn letter() -> impl Strategy<Value = PartialQuotient> {
    (prop::bool::ANY, 1u64..=5).prop_map(|(s, r)| PartialQuotient::new(if s { 1 } else { -1 }, r).unwrap())
}

/// `C_m` via `C_{k+1} = x C_k - C_{k-1}`, `C_0 = 2`, `C_1 = x`: `C_m(λ) = 2cos(π) = -2`.
fn cos_annihilator(m: u32) -> ZPoly {
    let (mut a, mut b): (ZPoly, ZPoly) = (vec![BigInt::from(2)], vec![BigInt::zero(), BigInt::one()]);
    for _ in 1..m {
        let mut shifted = vec![BigInt::zero()];
        shifted.extend(b.iter().cloned());
        let next = poly::sub_z(&shifted, &a);
        a = std::mem::replace(&mut b, next);
    }
    b[0] += 2;
    b
}

fn fold_value(f: &Field, word: &[PartialQuotient], tail: &FieldElement) -> FieldElement {
    // Right fold of ε/(rλ + ·), independent of the matrix product.
    let lam = FieldElement::lambda(f);
    word.iter().rev().fold(tail.clone(), |acc, pq| {
        let den = lam.mul_int(&BigInt::from(pq.r())).add_ref(&acc);
        FieldElement::from_int(f, pq.eps().into()).checked_div(&den).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn sign_is_multiplicative(m in m_any(), a in coeffs(), b in coeffs(), da in 1i64..9, db in 1i64..9) {
        let f = field(m);
        let (x, y) = (element(&f, &a, da), element(&f, &b, db));
        prop_assert_eq!(x.mul_ref(&y).sign(), x.sign() * y.sign());
        prop_assert_eq!(x.sign() == 0, x.is_zero());
        // Cross-check against a direct f64 evaluation when it is unambiguous.
        let v = x.to_f64();
        if v.abs() > 1e-9 {
            prop_assert_eq!(x.sign(), if v > 0.0 { 1 } else { -1 });
        }
    }

    #[test]
    fn floor_half_shift_brackets(m in m_any(), a in coeffs(), d in 1i64..9) {
        let f = field(m);
        let x = element(&f, &a, d);
        let n = x.floor_half_shift();
        let half = BigRational::new(1.into(), 2.into());
        let t = x.add_rational(&half);
        prop_assert!(t.sub_ref(&FieldElement::from_bigint(&f, n.clone())).sign() >= 0);
        prop_assert!(t.sub_ref(&FieldElement::from_bigint(&f, n + 1)).sign() < 0);
    }

    #[test]
    fn minimal_polynomial_vanishes_on_conjugates(m in m_any(), a in coeffs(), d in 1i64..9) {
        let f = field(m);
        let x = element(&f, &a, d);
        let g = x.minimal_polynomial();
        for c in x.conjugates(128) {
            prop_assert!(eval_on_interval(&g, &c).contains_zero());
        }
    }

    #[test]
    fn orbit_stays_in_interval_and_reconstructs((p, q) in rational(), m in m_any()) {
        let f = field(m);
        let x = x_in(&f, p, q);
        let e = expand_with_orbit(&x, 25, true).unwrap();
        let orbit = e.orbit.clone().unwrap();
        for (n, t) in orbit.iter().enumerate() {
            prop_assert!(in_interval(t));
            if n >= 1 {
                prop_assert_eq!(evaluate(&f, &e.quotients[..n], Some(t)).unwrap(), x.clone());
                prop_assert_eq!(fold_value(&f, &e.quotients[..n], t), x.clone());
            }
        }
        prop_assert!(e.prefix(60).longest_minus_one_run() <= max_minus_one_run(m));
        prop_assert_eq!(expand(&x, 25).unwrap().quotients, e.quotients);
    }

    #[test]
    fn certified_expansion_is_a_prefix_at_every_precision((p, q) in rational(), m in prop_oneof![Just(4u32), Just(5), Just(7)]) {
        let f = field(m);
        let x = x_in(&f, p, q);
        let exact = expand(&x, 20).unwrap().prefix(20);
        for prec in [128u32, 256, 512] {
            let xi = x.eval_embedding(0, prec + 64);
            let (c, _) = expand_certified(&f, &xi, prec, 20);
            prop_assert!(c.quotients.len() <= exact.len());
            prop_assert_eq!(&c.quotients[..], &exact[..c.quotients.len()]);
        }
    }

    #[test]
    fn convergent_identities((p, q) in rational(), m in m_any()) {
        let f = field(m);
        let gc = growth_constants_for(&f);
        let x = x_in(&f, p, q);
        let e = expand(&x, 30).unwrap();
        let word = e.prefix(30);
        let states = convergents_of(&f, &word);
        let lam = FieldElement::lambda(&f);
        let bases = SplitBases::new(&f);
        for (n, st) in states.iter().enumerate() {
            let det = st.determinant();
            prop_assert!(det.is_one() || det.neg_ref().is_one());
            if n >= 1 {
                prop_assert_eq!(st.value(), evaluate(&f, &word[..n], None).unwrap());
                prop_assert!(st.q.cmp_real(&st.q_prev) != Ordering::Less);
                let class = bases.classify(&st.p, &st.q);
                if m % 2 == 0 {
                    prop_assert!(matches!(class, ColumnClass::EvenOdd | ColumnClass::OddEven));
                } else {
                    prop_assert_ne!(class, ColumnClass::Violation);
                }
            }
            if let Some(later) = states.get(n + gc.h() + 1) {
                prop_assert!(later.q.cmp_real(&lam.mul_ref(&st.q)) != Ordering::Less);
            }
        }
    }

    #[test]
    fn mirror_formula(word in prop::collection::vec(letter(), 1..30), m in m_any()) {
        prop_assert!(mirror_check(&field(m), &word));
    }

    #[test]
    fn natural_extension_tracks_ratio((p, q) in rational(), m in m_any()) {
        let f = field(m);
        let gc = growth_constants_for(&f);
        let x = x_in(&f, p, q);
        let word = expand(&x, 20).unwrap().prefix(20);
        let states = convergents_of(&f, &word);
        let (mut u, mut y) = (x, FieldElement::zero(&f));
        for st in states.iter().skip(1) {
            let (nu, ny) = natural_extension_step(&u, &y).unwrap();
            prop_assert!(!ny.is_negative());
            prop_assert!(gc.cmp_r(&ny) != Ordering::Greater);
            prop_assert_eq!(&ny, &st.q_prev.checked_div(&st.q).unwrap());
            u = nu;
            y = ny;
            if u.is_zero() {
                break;
            }
        }
    }

    #[test]
    fn height_relation(m in m_any(), a in coeffs(), d in 1i64..9) {
        let f = field(m);
        let x = element(&f, &a, d);
        prop_assume!(!x.is_zero());
        let deg = poly::degree_z(&x.minimal_polynomial());
        prop_assert!(height_relation_holds(&naive_height(&x), deg, weil_height(&x)));
    }

    #[test]
    fn domination((p, q) in rational(), m in m_any()) {
        let f = field(m);
        let word = expand(&x_in(&f, p, q), 30).unwrap().prefix(30);
        prop_assert!(domination_check(&f, &convergents_of(&f, &word)).ok());
    }

    #[test]
    fn periodic_values_match_limits(
        pre in prop::collection::vec(letter(), 0..3),
        per in prop::collection::vec((prop::bool::ANY, 2u64..=4), 1..4),
        m in prop_oneof![Just(4u32), Just(5), Just(6), Just(7)],
    ) {
        let f = field(m);
        let mut w = pre.clone();
        w.extend(per.iter().map(|&(s, r)| PartialQuotient::new(if s { 1 } else { -1 }, r).unwrap()));
        let (mu, nu) = (pre.len(), per.len());
        let Ok(s) = periodic_value(&f, &w, mu, nu) else { return Ok(()) };
        let encl = periodic_limit_enclosure(&f, &w, mu, nu, 120);
        let v = s.value(200);
        prop_assert!(v.lo() <= encl.hi() && encl.lo() <= v.hi());
        prop_assert!(poly::degree_z(s.abs_poly()) <= 2 * f.degree());
        prop_assert!(poly::div_exact_z(s.abs_poly(), s.min_poly()).is_some());
        prop_assert!(eval_on_interval(s.min_poly(), &encl).contains_zero());
    }

    #[test]
    fn fractional_power_length(v in prop::collection::vec(0u8..3, 1..8), n in 0i64..40, d in 1i64..9) {
        let s = BigRational::new(n.into(), d.into());
        let whole = (n / d) as usize;
        let frac = &s - BigRational::from_integer((n / d).into());
        let extra = (frac * BigRational::from_integer((v.len() as i64).into())).ceil().to_integer();
        let expect = whole * v.len() + usize::try_from(extra).unwrap();
        prop_assert_eq!(fractional_power(&v, &s).len(), expect);
    }

    #[test]
    fn repetitions_match_brute_force(w in prop::collection::vec(0u8..3, 1..=40)) {
        // Brute force: the largest matched length ℓ > v with word[u..u+ℓ] = V^(ℓ/v).
        let mut brute = Vec::new();
        for u in 0..w.len() {
            for v in 1..w.len() - u {
                let period = &w[u..u + v];
                let best = (v + 1..=w.len() - u)
                    .filter(|&l| fractional_power(period, &BigRational::new(l.into(), v.into()))[..] == w[u..u + l])
                    .max();
                if let Some(l) = best {
                    brute.push(Repetition { u, v, matched: l });
                }
            }
        }
        let mut fast = repetition_exponents(&w);
        fast.sort();
        brute.sort();
        prop_assert_eq!(fast, brute);
    }

    #[test]
    fn stammer_monotone(w in prop::collection::vec(0u8..3, 1..40), extra in prop::collection::vec(0u8..3, 0..10)) {
        let mut longer = w.clone();
        longer.extend(extra);
        prop_assert!(stammer_statistic(&longer).value >= stammer_statistic(&w).value);
    }

    #[test]
    fn sturmian_density_and_complexity(rcf in prop::collection::vec(1u64..6, 30), num in 0i64..100) {
        let rho = BigRational::new(num.into(), 100.into());
        let len = 1500;
        let w = sturmian_word(&rcf, &rho, len, 1u8, 0u8).unwrap();
        let (lo, hi) = slope_bounds(&rcf).unwrap();
        let count = BigRational::from_integer(w.iter().filter(|&&c| c == 1).count().into());
        let n = BigRational::from_integer(len.into());
        let two = BigRational::from_integer(2.into());
        prop_assert!((&count - &n * &lo).abs() < two && (&count - &n * &hi).abs() < two);
        for k in 1..=20 {
            prop_assert_eq!(factor_complexity(&w, k), k + 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn field_degree_and_annihilator(m in 3u32..=30) {
        let f = field(m);
        prop_assert_eq!(poly::degree_z(f.min_poly()), f.degree());
        prop_assert!(poly::div_exact_z(&cos_annihilator(m), f.min_poly()).is_some());
    }
}

#[test]
fn orbit_points_terminate_and_lie_in_lambda_q_lambda2() {
    for m in [4u32, 5, 6, 8] {
        let f = field(m);
        let bases = SplitBases::new(&f);
        for c in orbit_of_infinity(&f, 8) {
            let Cusp::Finite(v) = c else { continue };
            let e = expand(&reduce_into_interval(&v).1, 200).unwrap();
            assert_eq!(e.status, ExpansionStatus::Finite, "m={m}, {v}");
            assert!(bases.in_lambda_q_lambda2(&v), "m={m}, {v}");
        }
    }
}

#[test]
fn group_columns_split() {
    for m in [4u32, 6, 8, 5] {
        let f = field(m);
        let bases = SplitBases::new(&f);
        for g in enumerate_elements(&f, 7) {
            let mat = &g.matrix;
            for (a, c) in [(&mat.a, &mat.c), (&mat.b, &mat.d)] {
                let class = bases.classify(a, c);
                assert_ne!(class, ColumnClass::Violation, "m={m}, {}", g.word_string());
                if m % 2 == 0 && !a.is_zero() && !c.is_zero() {
                    assert!(matches!(class, ColumnClass::EvenOdd | ColumnClass::OddEven), "m={m}, {}", g.word_string());
                }
            }
        }
    }
}

#[test]
fn zero_has_the_empty_expansion() {
    for m in 3u32..=16 {
        let z = expand(&FieldElement::zero(&field(m)), 10).unwrap();
        assert!(z.quotients.is_empty() && z.status == ExpansionStatus::Finite);
    }
}

#[test]
fn word_text_round_trip() {
    let w: Word = "+1:1,-1:2,+1:13".parse().unwrap();
    assert_eq!(w.to_string(), "+1:1,-1:2,+1:13");
    let json = serde_json::to_string(&w).unwrap();
    assert_eq!(serde_json::from_str::<Word>(&json).unwrap(), w);
    assert!("+2:1".parse::<Word>().is_err());
    assert!("+1:0".parse::<Word>().is_err());
}
