//! Dense univariate polynomials over ℤ and ℚ, constant term first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type ZPoly = Vec<BigInt>;
pub type QPoly = Vec<BigRational>;

pub fn trim_z(p: &mut ZPoly) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn trim_q(p: &mut QPoly) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree_z(p: &[BigInt]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

pub fn mul_z(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero()];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_z(&mut out);
    out
}

pub fn add_z(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out: ZPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect();
    trim_z(&mut out);
    out
}

pub fn sub_z(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out: ZPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect();
    trim_z(&mut out);
    out
}

/// Exact division by a monic-up-to-sign divisor; `None` if it leaves a remainder.
pub fn div_exact_z(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = degree_z(b);
    let lead = &b[db];
    let mut rem: ZPoly = a.to_vec();
    trim_z(&mut rem);
    let da = degree_z(&rem);
    if da < db {
        return rem.iter().all(Zero::is_zero).then(|| vec![BigInt::zero()]);
    }
    let mut quot = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let c = &rem[i + db];
        if c.is_zero() {
            continue;
        }
        let (q, r) = c.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            rem[i + j] -= &q * bj;
        }
        quot[i] = q;
    }
    if rem.iter().all(Zero::is_zero) {
        trim_z(&mut quot);
        Some(quot)
    } else {
        None
    }
}

/// The n-th cyclotomic polynomial, by dividing `x^n - 1` by `Φ_d` for proper divisors `d`.
pub fn cyclotomic(n: u32) -> ZPoly {
    assert!(n >= 1);
    let divisors: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    let mut table: Vec<ZPoly> = Vec::with_capacity(divisors.len());
    for (i, &d) in divisors.iter().enumerate() {
        let mut p: ZPoly = vec![BigInt::zero(); d as usize + 1];
        p[0] = -BigInt::one();
        p[d as usize] = BigInt::one();
        for (j, &e) in divisors[..i].iter().enumerate() {
            if d % e == 0 {
                p = div_exact_z(&p, &table[j]).expect("cyclotomic division is exact");
            }
        }
        table.push(p);
    }
    table.pop().unwrap()
}

/// `C_k` with `C_k(z + 1/z) = z^k + z^-k`; `C_0 = 2`, `C_1 = x`.
pub fn chebyshev_c(k: u32) -> ZPoly {
    let mut prev: ZPoly = vec![BigInt::from(2)];
    if k == 0 {
        return prev;
    }
    let mut cur: ZPoly = vec![BigInt::zero(), BigInt::one()];
    for _ in 1..k {
        let mut next = vec![BigInt::zero()];
        next.extend(cur.iter().cloned());
        let next = sub_z(&next, &prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Minimal polynomial of `2cos(2π/n)` for `n >= 3`, obtained by writing the
/// palindromic `z^{-d} Φ_n(z)` as a polynomial in `z + 1/z`.
pub fn real_cyclotomic(n: u32) -> ZPoly {
    let phi = cyclotomic(n);
    let deg = degree_z(&phi);
    assert!(deg % 2 == 0, "Φ_n has even degree for n >= 3");
    let half = deg / 2;
    let mut out: ZPoly = vec![phi[half].clone()];
    for k in 1..=half {
        let c = &phi[half + k];
        if c.is_zero() {
            continue;
        }
        let term: ZPoly = chebyshev_c(k as u32).into_iter().map(|x| x * c).collect();
        out = add_z(&out, &term);
    }
    trim_z(&mut out);
    out
}

/// Sign of `p(a / 2^prec)`, computed exactly.
pub fn sign_at_dyadic(p: &[BigInt], a: &BigInt, prec: u32) -> i8 {
    let d = degree_z(p);
    let mut acc = p[d].clone();
    for i in (0..d).rev() {
        acc = acc * a + (&p[i] << ((prec as usize) * (d - i)));
    }
    match acc.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

pub fn eval_q(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

pub fn to_q(p: &[BigInt]) -> QPoly {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

pub fn derivative_q(p: &[BigRational]) -> QPoly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

pub fn is_zero_q(p: &[BigRational]) -> bool {
    p.iter().all(Zero::is_zero)
}

pub fn divrem_q(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let mut b = b.to_vec();
    trim_q(&mut b);
    assert!(!is_zero_q(&b), "polynomial division by zero");
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    trim_q(&mut rem);
    if rem.len() < b.len() {
        return (vec![BigRational::zero()], rem);
    }
    let lead = b[db].clone();
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] / &lead;
        if !c.is_zero() {
            for j in 0..=db {
                let t = &c * &b[j];
                rem[i + j] -= t;
            }
        }
        quot[i] = c;
    }
    rem.truncate(db.max(1));
    trim_q(&mut rem);
    trim_q(&mut quot);
    (quot, rem)
}

pub fn gcd_q(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim_q(&mut x);
    trim_q(&mut y);
    while !is_zero_q(&y) {
        let (_, r) = divrem_q(&x, &y);
        x = y;
        y = r;
    }
    let lead = x.last().cloned().unwrap_or_else(BigRational::one);
    if lead.is_zero() {
        return x;
    }
    x.iter().map(|c| c / &lead).collect()
}

/// Scales to integer coefficients with content 1 and positive leading coefficient.
pub fn primitive(p: &[BigRational]) -> ZPoly {
    let mut p = p.to_vec();
    trim_q(&mut p);
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut z: ZPoly = p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = z.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() {
        for c in z.iter_mut() {
            *c = &*c / &g;
        }
    }
    if z.last().is_some_and(|c| c.is_negative()) {
        for c in z.iter_mut() {
            *c = -&*c;
        }
    }
    z
}

/// Primitive square-free part `p / gcd(p, p')`.
pub fn squarefree_primitive(p: &[BigRational]) -> ZPoly {
    let g = gcd_q(p, &derivative_q(p));
    let (q, _) = divrem_q(p, &g);
    primitive(&q)
}

pub fn max_abs_coeff(p: &[BigInt]) -> BigInt {
    p.iter().map(|c| c.abs()).max().unwrap_or_default()
}

pub fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

/// Human-readable rendering such as `x^2 - 6*x - 89`.
pub fn format_z(p: &[BigInt]) -> String {
    let mut s = String::new();
    for i in (0..p.len()).rev() {
        let c = &p[i];
        if c.is_zero() && !(i == 0 && s.is_empty()) {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let coeff = if a.is_one() && i > 0 { String::new() } else { a.to_string() };
        let var = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        if !coeff.is_empty() && !var.is_empty() {
            s.push_str(&format!("{coeff}*{var}"));
        } else {
            s.push_str(&coeff);
            s.push_str(&var);
        }
    }
    s
}
