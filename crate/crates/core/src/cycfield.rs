//! Exact arithmetic in the real cyclotomic field `Q(λ)`, `λ = 2cos(π/m)`.
//!
//! Elements are stored in the power basis `1, λ, …, λ^{D-1}` as an integer
//! numerator vector over a single positive denominator, reduced modulo the
//! minimal polynomial after every operation. The representation is canonical,
//! so equality and the zero test are exact.
//!
//! Real embeddings `σ_k(λ) = 2cos(kπ/m)` (odd `k` prime to `m`) are handled in
//! two ways. Numerically, each `σ_k(λ)` is isolated as a root of the minimal
//! polynomial and refined by exact bisection, and elements are evaluated with
//! outward-rounded [`Interval`]s. Algebraically, the field is Galois over ℚ and
//! `σ_k(λ) = C_k(λ)` for the Chebyshev-type polynomial `C_k`, so every
//! conjugate is itself an element of the field and comparisons between
//! conjugates reduce to exact sign computations.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg;
use crate::poly::{self, ZPoly};

/// Default upper bound on `m`; `D = φ(2m)/2` grows roughly linearly with it.
pub const DEFAULT_MAX_M: u32 = 100;

const ROOT_SEED_PREC: u32 = 48;

pub type Field = Arc<FieldDescriptor>;

pub struct FieldDescriptor {
    m: u32,
    degree: usize,
    min_poly: ZPoly,
    embedding_args: Vec<u32>,
    /// `galois[e][i]` holds the coefficients of `σ_e(λ^i)`; built on first use.
    galois: OnceLock<Vec<Vec<Vec<BigInt>>>>,
    /// `reduce[j]` holds the coefficients of `λ^{D+j}`.
    reduce: Vec<Vec<BigInt>>,
    roots: Mutex<Vec<RootBracket>>,
}

#[derive(Clone)]
struct RootBracket {
    interval: Interval,
    /// Sign of the minimal polynomial at the lower endpoint; 0 once the root is exact.
    sign_lo: i8,
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDescriptor")
            .field("m", &self.m)
            .field("degree", &self.degree)
            .field("min_poly", &poly::format_z(&self.min_poly))
            .field("embedding_args", &self.embedding_args)
            .finish()
    }
}

/// Builds `Q(λ_m)` with the default cap on `m`.
pub fn field_new(m: u32) -> Result<Field> {
    FieldDescriptor::with_cap(m, DEFAULT_MAX_M)
}

fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

impl FieldDescriptor {
    pub fn with_cap(m: u32, cap: u32) -> Result<Field> {
        if m < 3 {
            return Err(Error::IndexTooSmall(m));
        }
        if m > cap {
            return Err(Error::IndexTooLarge { m, cap });
        }
        let min_poly = poly::real_cyclotomic(2 * m);
        let degree = poly::degree_z(&min_poly);
        debug_assert_eq!(degree as u32, euler_phi(2 * m) / 2);
        let embedding_args: Vec<u32> = (1..m).filter(|k| k.gcd(&(2 * m)) == 1).collect();
        assert_eq!(embedding_args.len(), degree);

        let mut reduce: Vec<Vec<BigInt>> = Vec::with_capacity(degree.saturating_sub(1));
        // λ^D = -(c_0 + c_1 λ + … + c_{D-1} λ^{D-1}) for the monic minimal polynomial.
        let mut cur: Vec<BigInt> = min_poly[..degree].iter().map(|c| -c).collect();
        for _ in 0..degree.saturating_sub(1) {
            reduce.push(cur.clone());
            // multiply by λ
            let top = cur[degree - 1].clone();
            let mut next = vec![BigInt::zero(); degree];
            for i in (1..degree).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..degree {
                next[i] -= &top * &min_poly[i];
            }
            cur = next;
        }

        let mut desc = FieldDescriptor {
            m,
            degree,
            min_poly,
            embedding_args,
            galois: OnceLock::new(),
            reduce,
            roots: Mutex::new(Vec::new()),
        };
        let roots = desc.embedding_args.iter().map(|&k| desc.seed_root(k)).collect();
        desc.roots = Mutex::new(roots);
        Ok(Arc::new(desc))
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Monic minimal polynomial of λ, constant term first.
    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn embedding_args(&self) -> &[u32] {
        &self.embedding_args
    }

    pub fn num_embeddings(&self) -> usize {
        self.embedding_args.len()
    }

    /// Reduces an integer polynomial in λ modulo the minimal polynomial.
    fn reduce_poly(&self, p: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree;
        let mut out = vec![BigInt::zero(); d];
        for (i, c) in p.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i < d {
                out[i] += c;
            } else if i - d < self.reduce.len() {
                for (o, r) in out.iter_mut().zip(&self.reduce[i - d]) {
                    *o += c * r;
                }
            } else {
                // Degrees beyond 2D-2 only arise from user polynomials; fold one step at a time.
                let mut shifted = vec![BigInt::zero(); i - d + 1];
                shifted[i - d] = c.clone();
                let low = self.reduce_poly(&poly::mul_z(&shifted, &self.min_poly[..d].iter().map(|x| -x).collect::<Vec<_>>()));
                for (o, r) in out.iter_mut().zip(&low) {
                    *o += r;
                }
            }
        }
        out
    }

    fn seed_root(&self, k: u32) -> RootBracket {
        let v = 2.0 * (k as f64 * std::f64::consts::PI / self.m as f64).cos();
        let center = BigInt::from((v * (ROOT_SEED_PREC as f64).exp2()).round() as i64);
        for radius in [64i64, 1 << 12, 1 << 20] {
            let lo = &center - radius;
            let hi = &center + radius;
            let s_lo = poly::sign_at_dyadic(&self.min_poly, &lo, ROOT_SEED_PREC);
            let s_hi = poly::sign_at_dyadic(&self.min_poly, &hi, ROOT_SEED_PREC);
            if s_lo == 0 {
                return RootBracket { interval: Interval::from_scaled(lo.clone(), lo, ROOT_SEED_PREC), sign_lo: 0 };
            }
            if s_hi == 0 {
                return RootBracket { interval: Interval::from_scaled(hi.clone(), hi, ROOT_SEED_PREC), sign_lo: 0 };
            }
            if s_lo != s_hi {
                return RootBracket { interval: Interval::from_scaled(lo, hi, ROOT_SEED_PREC), sign_lo: s_lo };
            }
            // A point-valued root (λ = 1 for m = 3) lands exactly on the center.
            if poly::sign_at_dyadic(&self.min_poly, &center, ROOT_SEED_PREC) == 0 {
                return RootBracket {
                    interval: Interval::from_scaled(center.clone(), center, ROOT_SEED_PREC),
                    sign_lo: 0,
                };
            }
        }
        panic!("failed to isolate 2cos({k}π/{})", self.m);
    }

    /// Certified enclosure of `σ_e(λ)` of width at most `2^-prec`.
    pub fn lambda_interval(&self, e: usize, prec: u32) -> Interval {
        let cached = self.roots.lock().expect("root cache poisoned")[e].clone();
        if cached.sign_lo == 0 || cached.interval.prec() >= prec {
            return cached.interval.with_prec(prec);
        }
        let mut lo = cached.interval.with_prec(prec).lo_scaled().clone();
        let mut hi = cached.interval.with_prec(prec).hi_scaled().clone();
        let mut sign_lo = cached.sign_lo;
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) >> 1usize;
            let s = poly::sign_at_dyadic(&self.min_poly, &mid, prec);
            if s == 0 {
                lo = mid.clone();
                hi = mid;
                sign_lo = 0;
                break;
            }
            if s == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let refined = RootBracket { interval: Interval::from_scaled(lo, hi, prec), sign_lo };
        let mut cache = self.roots.lock().expect("root cache poisoned");
        if cache[e].interval.prec() < prec {
            cache[e] = refined.clone();
        }
        refined.interval
    }

    fn galois_tables(&self) -> &[Vec<Vec<BigInt>>] {
        self.galois.get_or_init(|| {
            self.embedding_args
                .iter()
                .map(|&k| {
                    let image = self.reduce_poly(&poly::chebyshev_c(k));
                    let mut powers = Vec::with_capacity(self.degree);
                    let mut p = self.reduce_poly(&[BigInt::one()]);
                    for _ in 0..self.degree {
                        powers.push(p.clone());
                        p = self.reduce_poly(&poly::mul_z(&p, &image));
                    }
                    powers
                })
                .collect()
        })
    }

    pub fn same_field(&self, other: &FieldDescriptor) -> bool {
        self.m == other.m
    }
}

/// An exact element of `Q(λ)`.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.m == other.field.m && self.den == other.den && self.num == other.num
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.m.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement(m={}, {})", self.field.m, self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "l".to_string(),
                _ => format!("l^{i}"),
            };
            if var.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{var}")?;
            } else if a.is_integer() {
                write!(f, "{a}*{var}")?;
            } else if a.numer().is_one() {
                write!(f, "{var}/{}", a.denom())?;
            } else {
                write!(f, "{}*{var}/{}", a.numer(), a.denom())?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact-rational JSON rendering, e.g. `{"m": 4, "coeffs": ["1/2", "0"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldElementJson {
    pub m: u32,
    pub coeffs: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic; mismatched fields and division by zero are errors.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    if !a.field.same_field(&b.field) {
        return Err(Error::FieldMismatch(a.field.m, b.field.m));
    }
    Ok(match op {
        ArithOp::Add => a.add_ref(b),
        ArithOp::Sub => a.sub_ref(b),
        ArithOp::Mul => a.mul_ref(b),
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl FieldElement {
    fn normalized(field: Field, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        assert!(!den.is_zero());
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let g = num.iter().fold(den.clone(), |acc, c| acc.gcd(c));
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= g;
        }
        FieldElement { field, num, den }
    }

    pub fn zero(field: &Field) -> Self {
        FieldElement { field: field.clone(), num: vec![BigInt::zero(); field.degree], den: BigInt::one() }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Field, n: i64) -> Self {
        Self::from_bigint(field, BigInt::from(n))
    }

    pub fn from_bigint(field: &Field, n: BigInt) -> Self {
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = n;
        FieldElement { field: field.clone(), num, den: BigInt::one() }
    }

    pub fn from_rational(field: &Field, q: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = q.numer().clone();
        Self::normalized(field.clone(), num, q.denom().clone())
    }

    pub fn from_ratio(field: &Field, n: i64, d: i64) -> Self {
        Self::from_rational(field, &BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// The generator λ.
    pub fn lambda(field: &Field) -> Self {
        Self::from_poly(field, &[BigRational::zero(), BigRational::one()])
    }

    /// `Σ c_i λ^i` for any number of coefficients, reduced into the power basis.
    pub fn from_poly(field: &Field, coeffs: &[BigRational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let num = field.reduce_poly(&ints);
        Self::normalized(field.clone(), num, den)
    }

    pub fn from_int_coeffs(field: &Field, coeffs: &[i64]) -> Self {
        let q: Vec<BigRational> = coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        Self::from_poly(field, &q)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Power-basis coefficients as exact rationals.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// True when all power-basis coefficients are integers, i.e. the element lies in ℤ[λ].
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    fn check_field(&self, other: &FieldElement) {
        assert!(
            self.field.same_field(&other.field),
            "field mismatch: m = {} vs m = {}",
            self.field.m,
            other.field.m
        );
    }

    pub fn add_ref(&self, other: &FieldElement) -> FieldElement {
        self.check_field(other);
        let num = self.num.iter().zip(&other.num).map(|(a, b)| a * &other.den + b * &self.den).collect();
        Self::normalized(self.field.clone(), num, &self.den * &other.den)
    }

    pub fn sub_ref(&self, other: &FieldElement) -> FieldElement {
        self.check_field(other);
        let num = self.num.iter().zip(&other.num).map(|(a, b)| a * &other.den - b * &self.den).collect();
        Self::normalized(self.field.clone(), num, &self.den * &other.den)
    }

    pub fn neg_ref(&self) -> FieldElement {
        FieldElement { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn mul_ref(&self, other: &FieldElement) -> FieldElement {
        self.check_field(other);
        let prod = poly::mul_z(&self.num, &other.num);
        let num = self.field.reduce_poly(&prod);
        Self::normalized(self.field.clone(), num, &self.den * &other.den)
    }

    pub fn mul_rational(&self, q: &BigRational) -> FieldElement {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::normalized(self.field.clone(), num, &self.den * q.denom())
    }

    pub fn mul_int(&self, k: &BigInt) -> FieldElement {
        let num = self.num.iter().map(|c| c * k).collect();
        Self::normalized(self.field.clone(), num, self.den.clone())
    }

    pub fn add_rational(&self, q: &BigRational) -> FieldElement {
        self.add_ref(&Self::from_rational(&self.field, q))
    }

    pub fn pow(&self, e: u32) -> FieldElement {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }

    /// Image under the `e`-th embedding, as an element of the same field.
    pub fn galois(&self, e: usize) -> FieldElement {
        if e == 0 {
            return self.clone();
        }
        let d = self.field.degree;
        let mut num = vec![BigInt::zero(); d];
        for (c, image) in self.num.iter().zip(&self.field.galois_tables()[e]) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in num.iter_mut().zip(image) {
                *o += c * x;
            }
        }
        Self::normalized(self.field.clone(), num, self.den.clone())
    }

    /// All Galois conjugates, identity first.
    pub fn galois_conjugates(&self) -> Vec<FieldElement> {
        (0..self.field.degree).map(|e| self.galois(e)).collect()
    }

    /// Field norm `Π σ(a)`.
    pub fn norm(&self) -> BigRational {
        let prod = self.galois_conjugates().iter().fold(Self::one(&self.field), |acc, c| acc.mul_ref(c));
        prod.as_rational().expect("the norm of an element is rational")
    }

    /// Field trace `Σ σ(a)`.
    pub fn trace(&self) -> BigRational {
        let sum = self.galois_conjugates().iter().fold(Self::zero(&self.field), |acc, c| acc.add_ref(c));
        sum.as_rational().expect("the trace of an element is rational")
    }

    /// Multiplicative inverse via `a^{-1} = Π_{σ≠id} σ(a) / N(a)`.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let others =
            (1..self.field.degree).map(|e| self.galois(e)).fold(Self::one(&self.field), |acc, c| acc.mul_ref(&c));
        let norm = self
            .mul_ref(&others)
            .as_rational()
            .ok_or_else(|| Error::Consistency("norm is not rational".into()))?;
        Ok(others.mul_rational(&norm.recip()))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other);
        Ok(self.mul_ref(&other.inv()?))
    }

    /// Interval enclosure of `σ_e(self)` of width at most `2^-bits`.
    pub fn eval_embedding(&self, e: usize, bits: u32) -> Interval {
        let d = self.field.degree;
        let size = self.num.iter().map(|c| c.bits()).max().unwrap_or(0) as i64 - self.den.bits() as i64;
        let mut guard = 8 + 2 * d as u32 + size.max(0) as u32;
        loop {
            let w = bits + guard;
            let lam = self.field.lambda_interval(e, w);
            let mut acc = Interval::from_ratio(&self.num[d - 1], &self.den, w);
            for i in (0..d - 1).rev() {
                acc = acc.mul(&lam).add(&Interval::from_ratio(&self.num[i], &self.den, w));
            }
            if acc.width_at_most(bits) {
                return acc;
            }
            guard *= 2;
        }
    }

    /// Enclosures of every real conjugate, identity embedding first.
    pub fn conjugates(&self, bits: u32) -> Vec<Interval> {
        (0..self.field.degree).map(|e| self.eval_embedding(e, bits.max(1))).collect()
    }

    /// Sign under the identity embedding `λ ↦ 2cos(π/m)`; exact.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let mut bits = 32;
        loop {
            if let Some(s) = self.eval_embedding(0, bits).sign() {
                return s;
            }
            bits *= 2;
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> FieldElement {
        if self.sign() < 0 {
            self.neg_ref()
        } else {
            self.clone()
        }
    }

    /// Exact comparison of real values under the identity embedding.
    pub fn cmp_real(&self, other: &FieldElement) -> std::cmp::Ordering {
        self.sub_ref(other).sign().cmp(&0)
    }

    /// Exact `⌊a⌋` under the identity embedding.
    pub fn floor(&self) -> BigInt {
        if let Some(q) = self.as_rational() {
            return q.floor().to_integer();
        }
        let mut bits = 32;
        loop {
            let iv = self.eval_embedding(0, bits);
            if let Some(n) = iv.floor() {
                return n;
            }
            // An irrational value cannot equal the integer the interval straddles.
            bits *= 2;
        }
    }

    /// Exact `⌊a + 1/2⌋`, with ties resolved by the floor definition.
    pub fn floor_half_shift(&self) -> BigInt {
        let shifted = self.add_rational(&BigRational::new(BigInt::one(), BigInt::from(2)));
        let mut bits = 32;
        loop {
            let iv = shifted.eval_embedding(0, bits);
            if let Some(n) = iv.floor() {
                return n;
            }
            let candidate = iv.floor_hi();
            if shifted.sub_ref(&Self::from_bigint(&self.field, candidate.clone())).is_zero() {
                return candidate;
            }
            bits *= 2;
        }
    }

    /// Approximate value under the identity embedding.
    pub fn to_f64(&self) -> f64 {
        self.eval_embedding(0, 64).midpoint_f64()
    }

    /// Primitive integer minimal polynomial over ℚ with positive leading
    /// coefficient, from the first linear dependency among `1, a, a², …`.
    pub fn minimal_polynomial(&self) -> ZPoly {
        let d = self.field.degree;
        let mut powers = vec![Self::one(&self.field)];
        for k in 1..=d {
            let next = powers[k - 1].mul_ref(self);
            powers.push(next);
            let rows: Vec<Vec<BigRational>> = (0..d)
                .map(|i| powers.iter().map(|p| BigRational::new(p.num[i].clone(), p.den.clone())).collect())
                .collect();
            let ns = linalg::nullspace(&rows);
            if let Some(v) = ns.into_iter().next() {
                return poly::primitive(&v);
            }
        }
        unreachable!("1, a, …, a^D are always dependent")
    }

    /// Square root inside the field, if one exists.
    ///
    /// A square root `s` of an integral `b` is integral, so its traces
    /// `Tr(λ^j s)` are integers. For each admissible sign pattern of the
    /// conjugates `±sqrt(σ(b))` those traces are enclosed, rounded, and the
    /// candidate recovered from the integer Gram system `Tr(λ^{i+j})`; the
    /// candidate is accepted only after an exact `s² = b` check.
    pub fn sqrt(&self) -> Result<Option<FieldElement>> {
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        let field = self.field.clone();
        let d = field.degree;
        if d > 20 {
            return Err(Error::Consistency(format!("square root search is limited to degree 20, got {d}")));
        }
        // self = num/den, so self·den² = num·den is integral with root sqrt(self)·den.
        let b = self.mul_int(&(&self.den * &self.den));
        let conj = b.galois_conjugates();
        if conj.iter().any(|c| c.sign() < 0) {
            return Ok(None);
        }
        let lam_pow: Vec<FieldElement> = (0..d).map(|j| Self::lambda(&field).pow(j as u32)).collect();
        let gram: Vec<Vec<BigRational>> =
            (0..d).map(|i| (0..d).map(|j| lam_pow[i].mul_ref(&lam_pow[j]).trace()).collect()).collect();
        let target = self.den.clone();

        'pattern: for mask in 0u32..(1 << (d - 1)) {
            let mut bits = 64;
            let traces = loop {
                let roots: Vec<Interval> = (0..d)
                    .map(|e| {
                        let r = b.eval_embedding(e, bits + 8).sqrt();
                        if e > 0 && mask & (1 << (e - 1)) != 0 {
                            r.neg()
                        } else {
                            r
                        }
                    })
                    .collect();
                let mut traces = Vec::with_capacity(d);
                let mut settled = true;
                for j in 0..d {
                    let mut t = Interval::point_int(&BigInt::zero(), bits);
                    for (e, r) in roots.iter().enumerate() {
                        let lam = field.lambda_interval(e, bits + 8);
                        let mut pw = Interval::point_int(&BigInt::one(), bits + 8);
                        for _ in 0..j {
                            pw = pw.mul(&lam);
                        }
                        t = t.add(&pw.mul(r));
                    }
                    let lo = t.lo().ceil().to_integer();
                    let hi = t.hi().floor().to_integer();
                    if lo > hi {
                        continue 'pattern;
                    }
                    if lo != hi || !t.width_at_most(2) {
                        settled = false;
                        break;
                    }
                    traces.push(BigRational::from_integer(lo));
                }
                if settled {
                    break traces;
                }
                bits *= 2;
                if bits > 1 << 16 {
                    return Err(Error::Consistency("square root traces did not settle".into()));
                }
            };
            let Some(c) = linalg::solve(&gram, &traces) else { continue };
            let s = Self::from_poly(&field, &c);
            if s.mul_ref(&s) == b {
                return Ok(Some(s.mul_rational(&BigRational::from_integer(target).recip())));
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> FieldElementJson {
        FieldElementJson {
            m: self.field.m,
            coeffs: self.coeffs().iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_json(field: &Field, json: &FieldElementJson) -> Result<FieldElement> {
        if json.m != field.m {
            return Err(Error::FieldMismatch(json.m, field.m));
        }
        let coeffs = json
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_poly(field, &coeffs))
    }

    /// Small-integer view of the coefficients when they fit; for diagnostics.
    pub fn int_coeffs(&self) -> Option<Vec<i64>> {
        if !self.den.is_one() {
            return None;
        }
        self.num.iter().map(|c| c.to_i64()).collect()
    }
}

/// Parses `"p"` or `"p/q"` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl std::ops::$trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$inner(rhs)
            }
        }
        impl std::ops::$trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$inner(&rhs)
            }
        }
        impl std::ops::$trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Oracle: decide whether a primitive integer cubic or quadratic has a
    /// rational root by the rational root theorem.
    fn has_rational_root(p: &[BigInt]) -> bool {
        let a0 = p[0].abs().to_i64().unwrap();
        let an = p.last().unwrap().abs().to_i64().unwrap();
        let divisors = |n: i64| (1..=n.max(1)).filter(move |d| n % d == 0);
        for num in divisors(a0) {
            for den in divisors(an) {
                for s in [1, -1] {
                    let x = q(s * num, den);
                    if poly::eval_q(&poly::to_q(p), &x).is_zero() {
                        return true;
                    }
                }
            }
        }
        a0 == 0
    }

    #[test]
    fn field_new_examples() {
        let f4 = field_new(4).unwrap();
        assert_eq!(f4.degree(), 2);
        assert_eq!(f4.min_poly(), &z(&[-2, 0, 1])[..]);
        assert!(!has_rational_root(f4.min_poly()));

        let f5 = field_new(5).unwrap();
        assert_eq!(f5.degree(), 2);
        assert_eq!(f5.min_poly(), &z(&[-1, -1, 1])[..]);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((golden * golden - golden - 1.0).abs() < 1e-12);

        let f7 = field_new(7).unwrap();
        assert_eq!(f7.degree(), 3);
        assert_eq!(f7.min_poly(), &z(&[1, -2, -1, 1])[..]);
        // A cubic without rational roots is irreducible over ℚ.
        assert!(!has_rational_root(f7.min_poly()));
        let lam = f7.lambda_interval(0, 110);
        assert!(lam.width_at_most(100));
        let root = 2.0 * (std::f64::consts::PI / 7.0).cos();
        let (lo, hi) = lam.to_f64_bounds();
        assert!(lo <= root + 1e-15 && root - 1e-15 <= hi);
    }

    #[test]
    fn min_poly_vanishes_at_each_embedding_to_high_precision() {
        for m in 3..=20 {
            let f = field_new(m).unwrap();
            for e in 0..f.degree() {
                let lam = f.lambda_interval(e, 200);
                let mut acc = Interval::point_int(&BigInt::zero(), 200);
                for c in f.min_poly().iter().rev() {
                    acc = acc.mul(&lam).add(&Interval::point_int(c, 200));
                }
                assert!(acc.contains_zero(), "m={m} e={e}");
                assert!(acc.width_at_most(100), "m={m}");
            }
        }
    }

    #[test]
    fn min_poly_divides_chebyshev_annihilator() {
        // 2cos(mθ) = C_m(2cosθ) and cos(m·π/m) = -1, so C_m + 2 vanishes at λ.
        for m in 3..=40 {
            let f = field_new(m).unwrap();
            let mut ann = poly::chebyshev_c(m);
            ann[0] += 2;
            assert!(poly::div_exact_z(&ann, f.min_poly()).is_some(), "m={m}");
            assert_eq!(f.degree() as u32, euler_phi(2 * m) / 2);
        }
    }

    #[test]
    fn rejects_small_and_capped_m() {
        assert!(matches!(field_new(2), Err(Error::IndexTooSmall(2))));
        assert!(matches!(field_new(101), Err(Error::IndexTooLarge { m: 101, cap: 100 })));
        assert!(FieldDescriptor::with_cap(150, 200).is_ok());
    }

    #[test]
    fn arithmetic_examples() {
        let f4 = field_new(4).unwrap();
        let l4 = FieldElement::lambda(&f4);
        assert_eq!(&l4 * &l4, FieldElement::from_int(&f4, 2));
        let f5 = field_new(5).unwrap();
        let l5 = FieldElement::lambda(&f5);
        assert_eq!(&l5 * &l5, &l5 + &FieldElement::one(&f5));
        let two_minus = &FieldElement::from_int(&f4, 2) - &l4;
        let inv = two_minus.inv().unwrap();
        let expected = FieldElement::from_poly(&f4, &[q(1, 1), q(1, 2)]);
        assert_eq!(inv, expected);
        assert!((&inv * &two_minus).is_one());
    }

    #[test]
    fn arithmetic_errors() {
        let f4 = field_new(4).unwrap();
        let f5 = field_new(5).unwrap();
        let a = FieldElement::one(&f4);
        let b = FieldElement::one(&f5);
        assert!(matches!(field_arith(&a, &b, ArithOp::Add), Err(Error::FieldMismatch(4, 5))));
        assert!(matches!(
            field_arith(&a, &FieldElement::zero(&f4), ArithOp::Div),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn sign_examples() {
        let f4 = field_new(4).unwrap();
        let f5 = field_new(5).unwrap();
        assert_eq!(FieldElement::zero(&f4).sign(), 0);
        assert_eq!((FieldElement::lambda(&f4) - FieldElement::one(&f4)).sign(), 1);
        assert_eq!((FieldElement::one(&f5) - FieldElement::lambda(&f5)).sign(), -1);
        // A tiny nonzero difference still gets a sign: (λ - 1)^40 - tiny rational.
        let small = (FieldElement::lambda(&f4) - FieldElement::one(&f4)).pow(40);
        assert_eq!(small.sign(), 1);
        let gap = small.sub_ref(&FieldElement::from_rational(&f4, &small.eval_embedding(0, 200).lo()));
        assert_eq!(gap.sign(), 1);
    }

    #[test]
    fn floor_half_shift_examples() {
        let f4 = field_new(4).unwrap();
        let l = FieldElement::lambda(&f4);
        assert_eq!(FieldElement::from_ratio(&f4, 3, 2).floor_half_shift(), BigInt::from(2));
        assert_eq!(l.floor_half_shift(), BigInt::from(1));
        assert_eq!(l.mul_rational(&q(1, 2)).floor_half_shift(), BigInt::from(1));
        assert_eq!(FieldElement::from_ratio(&f4, -1, 2).floor_half_shift(), BigInt::from(0));
        assert_eq!(FieldElement::from_ratio(&f4, -3, 2).floor_half_shift(), BigInt::from(-1));
    }

    #[test]
    fn conjugate_examples() {
        let f4 = field_new(4).unwrap();
        let c = FieldElement::lambda(&f4).conjugates(60);
        assert!(c[0].contains(&q(141421356, 100000000)) || (c[0].midpoint_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!((c[1].midpoint_f64() + 2f64.sqrt()).abs() < 1e-15);
        let f5 = field_new(5).unwrap();
        let c = FieldElement::lambda(&f5).conjugates(60);
        assert!((c[0].midpoint_f64() - 1.618033988749895).abs() < 1e-14);
        assert!((c[1].midpoint_f64() + 0.618033988749895).abs() < 1e-14);
        let f7 = field_new(7).unwrap();
        for iv in FieldElement::one(&f7).conjugates(30) {
            assert!(iv.contains(&q(1, 1)));
        }
    }

    #[test]
    fn galois_images_match_numeric_conjugates() {
        for m in [4, 5, 7, 9, 12] {
            let f = field_new(m).unwrap();
            let a = FieldElement::from_int_coeffs(&f, &[3, -2, 5, 1]);
            for e in 0..f.degree() {
                let numeric = a.eval_embedding(e, 80);
                let exact = a.galois(e).eval_embedding(0, 80);
                assert!(numeric.compare(&exact).is_none(), "m={m} e={e}");
            }
        }
    }

    #[test]
    fn minimal_polynomial_examples() {
        let f4 = field_new(4).unwrap();
        assert_eq!(FieldElement::one(&f4).minimal_polynomial(), z(&[-1, 1]));
        let half_l = FieldElement::lambda(&f4).mul_rational(&q(1, 2));
        assert_eq!(half_l.minimal_polynomial(), z(&[-1, 0, 2]));
        let a = FieldElement::from_int_coeffs(&f4, &[3, 7]);
        assert_eq!(a.minimal_polynomial(), z(&[-89, -6, 1]));
        let f7 = field_new(7).unwrap();
        assert_eq!(FieldElement::lambda(&f7).minimal_polynomial(), z(&[1, -2, -1, 1]));
    }

    #[test]
    fn square_roots() {
        let f4 = field_new(4).unwrap();
        let l = FieldElement::lambda(&f4);
        let s = FieldElement::from_int_coeffs(&f4, &[3, -5]);
        let sq = &s * &s;
        let r = sq.sqrt().unwrap().unwrap();
        assert!(r == s || r == -&s);
        assert!(l.sqrt().unwrap().is_none()); // σ(√2) < 0
        assert!(FieldElement::from_int(&f4, 3).sqrt().unwrap().is_none());
        let f7 = field_new(7).unwrap();
        let t = FieldElement::from_poly(&f7, &[q(1, 3), q(-2, 1), q(1, 1)]);
        let r = (&t * &t).sqrt().unwrap().unwrap();
        assert!(r == t || r == -&t);
    }

    #[test]
    fn json_shape() {
        let f4 = field_new(4).unwrap();
        let a = FieldElement::from_ratio(&f4, 1, 2);
        let js = serde_json::to_string(&a.to_json()).unwrap();
        assert_eq!(js, r#"{"m":4,"coeffs":["1/2","0"]}"#);
        let back: FieldElementJson = serde_json::from_str(&js).unwrap();
        assert_eq!(FieldElement::from_json(&f4, &back).unwrap(), a);
    }

    #[test]
    fn display() {
        let f4 = field_new(4).unwrap();
        assert_eq!(FieldElement::from_int_coeffs(&f4, &[2, -1]).to_string(), "2 - l");
        assert_eq!(FieldElement::from_poly(&f4, &[q(1, 1), q(1, 2)]).to_string(), "1 + l/2");
        assert_eq!(FieldElement::zero(&f4).to_string(), "0");
    }
}
