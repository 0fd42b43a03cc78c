//! Dense univariate polynomial arithmetic over the rationals.
//!
//! Coefficient vectors are little-endian (`p[k]` multiplies `x^k`).  Only what
//! the number-field layer needs: ring operations, division with remainder,
//! extended gcd, derivatives and numeric evaluation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::bigfloat::{f_from_rat, CF};

pub fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

pub fn deg(p: &[BigRational]) -> usize {
    let mut d = p.len();
    while d > 1 && p[d - 1].is_zero() {
        d -= 1;
    }
    d - 1
}

pub fn is_zero(p: &[BigRational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

pub fn add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (k, c) in a.iter().enumerate() {
        out[k] += c;
    }
    for (k, c) in b.iter().enumerate() {
        out[k] += c;
    }
    trim(&mut out);
    out
}

pub fn neg(a: &[BigRational]) -> Vec<BigRational> {
    a.iter().map(|c| -c).collect()
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    add(a, &neg(b))
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if is_zero(a) || is_zero(b) {
        return vec![BigRational::zero()];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    trim(&mut out);
    out
}

pub fn scale(a: &[BigRational], c: &BigRational) -> Vec<BigRational> {
    a.iter().map(|x| x * c).collect()
}

/// Division with remainder; the divisor must be nonzero.
pub fn divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!is_zero(den), "polynomial division by zero");
    let dd = deg(den);
    let lead = den[dd].clone();
    let mut rem: Vec<BigRational> = num.to_vec();
    trim(&mut rem);
    if deg(&rem) < dd || is_zero(&rem) {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); deg(&rem) - dd + 1];
    while !is_zero(&rem) && deg(&rem) >= dd {
        let dr = deg(&rem);
        let c = &rem[dr] / &lead;
        quot[dr - dd] = c.clone();
        for k in 0..=dd {
            let t = &den[k] * &c;
            rem[dr - dd + k] -= t;
        }
        trim(&mut rem);
        if dr == 0 {
            break;
        }
    }
    trim(&mut quot);
    (quot, rem)
}

/// Monic gcd over the rationals.
pub fn gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x: Vec<BigRational> = a.to_vec();
    let mut y: Vec<BigRational> = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !is_zero(&y) {
        let (_, r) = divmod(&x, &y);
        x = y;
        y = r;
    }
    if is_zero(&x) {
        return x;
    }
    let lead = x[deg(&x)].clone();
    scale(&x, &lead.recip())
}

/// Extended gcd: returns (g, u, v) with u·a + v·b = g, g monic.
pub fn xgcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let zero = || vec![BigRational::zero()];
    let one = || vec![BigRational::one()];
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1) = (one(), zero());
    let (mut t0, mut t1) = (zero(), one());
    while !is_zero(&r1) {
        let (q, r) = divmod(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        let t = sub(&t0, &mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if is_zero(&r0) {
        return (r0, s0, t0);
    }
    let lead = r0[deg(&r0)].clone();
    let inv = lead.recip();
    (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv))
}

pub fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    let mut out = Vec::with_capacity(p.len() - 1);
    for (k, c) in p.iter().enumerate().skip(1) {
        out.push(c * BigRational::from(BigInt::from(k)));
    }
    trim(&mut out);
    out
}

pub fn from_ints(p: &[BigInt]) -> Vec<BigRational> {
    p.iter().map(|c| BigRational::from(c.clone())).collect()
}

/// Horner evaluation at a complex float.
pub fn eval_cf(p: &[BigRational], z: &CF, prec: u32) -> CF {
    let mut acc = CF::zero(prec);
    for c in p.iter().rev() {
        acc = &(&acc * z) + &CF::new(f_from_rat(c, prec), super::bigfloat::f_from_i64(0, prec));
    }
    acc
}
