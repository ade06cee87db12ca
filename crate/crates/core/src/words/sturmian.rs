//! Mechanical (Sturmian) words `u_n = a` iff `⌊(n+1)θ + ρ⌋ - ⌊nθ + ρ⌋ = 1`,
//! with the slope `θ` given by regular continued-fraction quotients and every
//! floor certified.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Open interval containing `θ = [0; a₁, …, a_k, …]` for every irrational
/// continuation: between `p_k/q_k` and `(p_k + p_{k-1})/(q_k + q_{k-1})`.
pub fn slope_bounds(rcf: &[u64]) -> Result<(BigRational, BigRational)> {
    if rcf.is_empty() || rcf.contains(&0) {
        return Err(Error::Parse("slope quotients must be positive and nonempty".into()));
    }
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    for &a in rcf {
        let a = BigInt::from(a);
        let np = &a * &p + &p_prev;
        let nq = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, np);
        q_prev = std::mem::replace(&mut q, nq);
    }
    let x = BigRational::new(p.clone(), q.clone());
    let y = BigRational::new(p + p_prev, q + q_prev);
    Ok(if x < y { (x, y) } else { (y, x) })
}

/// `⌊nθ + ρ⌋` when it is the same for every `θ` in the open interval.
fn certified_floor(n: usize, lo: &BigRational, hi: &BigRational, rho: &BigRational) -> Option<BigInt> {
    let n = BigRational::from_integer(BigInt::from(n));
    let a = &n * lo + rho;
    let b = &n * hi + rho;
    let f = a.floor();
    // No integer strictly inside (a, b).
    (b <= &f + BigRational::one()).then(|| f.to_integer())
}

/// The mechanical word of slope `θ` and intercept `ρ`, letters `u_1 … u_len`.
pub fn sturmian_word<T: Clone>(rcf: &[u64], intercept: &BigRational, length: usize, letter_a: T, letter_b: T) -> Result<Vec<T>> {
    if length == 0 {
        return Err(Error::Parse("length must be at least 1".into()));
    }
    if intercept.is_negative() || *intercept >= BigRational::one() {
        return Err(Error::Parse(format!("intercept {intercept} is outside [0, 1)")));
    }
    let (lo, hi) = slope_bounds(rcf)?;
    let floor_at = |n: usize| {
        certified_floor(n, &lo, &hi, intercept).ok_or_else(|| {
            Error::InsufficientTerms(format!(
                "{} slope quotients cannot certify floor({n}θ + ρ); supply more",
                rcf.len()
            ))
        })
    };
    let mut prev = floor_at(1)?;
    let mut out = Vec::with_capacity(length);
    for n in 1..=length {
        let next = floor_at(n + 1)?;
        out.push(if &next - &prev == BigInt::one() { letter_a.clone() } else { letter_b.clone() });
        prev = next;
    }
    Ok(out)
}

/// Slope quotients `[1, 2, 3, …, k]`.
pub fn increasing_quotients(k: u64) -> Vec<u64> {
    (1..=k).collect()
}
