//! Recovering exact algebraic numbers from big-float approximations.
//!
//! `recognize_algebraic` searches, in ascending degree, for an integer
//! relation `c_n·zⁿ + … + c_1·z + c_0 ≈ 0` using LLL on the lattice spanned
//! by rows `[eⱼ | ⌊2^τ·Re zʲ⌉ | ⌊2^τ·Im zʲ⌉]` with `τ = prec − 48`.  A
//! candidate is accepted only when the exact evaluation of the recovered
//! polynomial at `z` is below `‖c‖₁ · max(1,|z|)ⁿ · 2^(16−prec)`: a genuine
//! relation sits near `2^(8−prec)` while the best spurious vector stays near
//! `2^(48−prec)`, a separation of two orders of 2¹⁶.  Recognized values are
//! re-evaluated and must reproduce the input within `2^(−prec/2)`.
//!
//! The LLL here runs entirely over exact rationals (Gram–Schmidt data is
//! never floated), with the classical δ = 3/4 Lovász condition.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::bigfloat::{pow2, round_f, CF};
use super::exact::ExactComplex;
use super::numberfield::{quad_value, square_part, NumberField, NumberFieldElement};

/// In-place LLL reduction with δ = 3/4 and exact rational Gram–Schmidt.
/// Zero rows are not supported; rows need not be linearly independent in
/// general LLL, but callers here always pass independent rows.
pub fn lll_reduce(basis: &mut Vec<Vec<BigInt>>) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let (mut mu, mut bnorm) = gso(basis);
    let mut k = 1usize;
    while k < n {
        // size-reduce row k against earlier rows, updating μ incrementally
        for j in (0..k).rev() {
            let r = round_rat(&mu[k][j]);
            if !r.is_zero() {
                let rq = BigRational::from(r.clone());
                for l in 0..basis[k].len() {
                    let t = &basis[j][l] * &r;
                    basis[k][l] -= t;
                }
                for l in 0..=j {
                    let t = &rq * &mu[j][l];
                    mu[k][l] -= t;
                }
            }
        }
        let lhs = bnorm[k].clone();
        let rhs = (&delta - &(&mu[k][k - 1] * &mu[k][k - 1])) * &bnorm[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let g = gso(basis);
            mu = g.0;
            bnorm = g.1;
            k = k.max(2) - 1;
        }
    }
}

/// Gram–Schmidt over the rationals: returns (μ, ‖b*ᵢ‖²).
fn gso(basis: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = basis.len();
    let dim = basis[0].len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut bnorm = vec![BigRational::zero(); n];
    for i in 0..n {
        let mut v: Vec<BigRational> =
            basis[i].iter().map(|x| BigRational::from(x.clone())).collect();
        for j in 0..i {
            let mut dot = BigRational::zero();
            for l in 0..dim {
                dot += BigRational::from(basis[i][l].clone()) * &star[j][l];
            }
            let m = if bnorm[j].is_zero() { BigRational::zero() } else { dot / &bnorm[j] };
            for l in 0..dim {
                let t = &m * &star[j][l];
                v[l] -= t;
            }
            mu[i][j] = m;
        }
        mu[i][i] = BigRational::one();
        let mut nn = BigRational::zero();
        for l in 0..dim {
            nn += &v[l] * &v[l];
        }
        bnorm[i] = nn;
        star.push(v);
    }
    (mu, bnorm)
}

/// Round a rational to the nearest integer (half away from zero).
pub fn round_rat(q: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let n2 = q.numer() * &two;
    let d = q.denom();
    // (2n ± d) / 2d performs half-away-from-zero rounding via truncation
    if q.numer().is_negative() {
        (n2 - d) / (d * &two)
    } else {
        (n2 + d) / (d * &two)
    }
}

/// Try to identify `z` as an algebraic number of degree at most `max_degree`.
///
/// `prec` is the trusted accuracy of `z` in bits (≥ 96 required).  Returns
/// exact rationals for degree 1, canonical quadratic-field values for degree
/// 2, and monic-generator field values above that.  `None` when no relation
/// passes the acceptance and verification gates.
pub fn recognize_algebraic(z: &CF, max_degree: usize, prec: u32) -> Option<ExactComplex> {
    if prec < 96 {
        return None;
    }
    let tau = prec as i64 - 48;
    let wp = prec + 32;
    let scale = pow2(tau, wp);
    // z^j for j = 0..max_degree
    let mut powers = vec![CF::one(wp)];
    for _ in 0..max_degree {
        let nx = &powers[powers.len() - 1] * &z.with_prec(wp);
        powers.push(nx);
    }
    let zabs = z.with_prec(wp).abs();
    let zmax = if zabs > pow2(0, wp) { zabs } else { pow2(0, wp) };

    for n in 1..=max_degree {
        let rows = n + 1;
        let dim = rows + 2;
        let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(rows);
        for (j, pj) in powers.iter().take(rows).enumerate() {
            let mut row = vec![BigInt::zero(); dim];
            row[j] = BigInt::one();
            row[rows] = round_f(&(&pj.re * &scale));
            row[rows + 1] = round_f(&(&pj.im * &scale));
            basis.push(row);
        }
        lll_reduce(&mut basis);
        // examine candidates from shortest to longest
        let mut order: Vec<usize> = (0..rows).collect();
        order.sort_by_key(|&i| basis[i].iter().map(|x| x * x).sum::<BigInt>());
        for &i in &order {
            let coeffs: Vec<BigInt> = basis[i][..rows].to_vec();
            if coeffs.iter().all(|c| c.is_zero()) {
                continue;
            }
            // exact polynomial evaluation at the floated z
            let mut acc = CF::zero(wp);
            for c in coeffs.iter().rev() {
                acc = &(&acc * &z.with_prec(wp))
                    + &CF::from_rats(
                        &BigRational::from(c.clone()),
                        &BigRational::zero(),
                        wp,
                    );
            }
            let l1: BigInt = coeffs.iter().map(|c| c.abs()).sum();
            let mut zn = pow2(0, wp);
            for _ in 0..n {
                zn = &zn * &zmax;
            }
            let bound = &(&super::bigfloat::f_from_bigint(&l1, wp) * &zn)
                * &pow2(16 - prec as i64, wp);
            if acc.abs() > bound {
                continue;
            }
            if let Some(val) = canonical_value(&coeffs, z, prec) {
                // independent check: the recognized value reproduces z
                let back = val.eval(prec);
                if back.dist(&z.with_prec(prec)) <= pow2(-(prec as i64) / 2, wp) {
                    return Some(val.at_prec(prec));
                }
            }
        }
    }
    None
}

/// Turn integer relation coefficients into a canonical exact value matching
/// the numeric input: rationals for degree 1, `x + y·√d` for degree 2,
/// monic-transformed field generators beyond.
fn canonical_value(coeffs: &[BigInt], z: &CF, prec: u32) -> Option<ExactComplex> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
    if c.len() < 2 {
        return None;
    }
    // primitive with positive leading coefficient
    let mut content = BigInt::zero();
    for x in &c {
        content = num_integer::gcd(content, x.clone());
    }
    if c.last().unwrap().is_negative() {
        content = -content;
    }
    for x in &mut c {
        *x /= &content;
    }
    match c.len() {
        2 => {
            let q = BigRational::new(-c[0].clone(), c[1].clone());
            Some(ExactComplex::rat(q))
        }
        3 => {
            let (a, b, c0) = (c[2].clone(), c[1].clone(), c[0].clone());
            let disc = &b * &b - BigInt::from(4) * &a * &c0;
            let two_a = BigRational::from(BigInt::from(2) * &a);
            if disc.is_zero() {
                return Some(ExactComplex::rat(BigRational::from(-b) / two_a));
            }
            let (s, core_abs) = square_part(&disc.abs());
            if core_abs.is_one() && disc.is_positive() {
                // rational roots after all; pick the numerically closer one
                let r1 = ExactComplex::rat(BigRational::from(&(-&b) + &s) / two_a.clone());
                let r2 = ExactComplex::rat(BigRational::from(&(-&b) - &s) / two_a);
                return pick_nearer(r1, r2, z, prec);
            }
            let core = if disc.is_negative() { -core_abs } else { core_abs };
            let x = BigRational::from(-b) / two_a.clone();
            let y = BigRational::from(s) / two_a;
            let plus = ExactComplex::alg(quad_value(&core, &x, &y, true));
            let minus = ExactComplex::alg(quad_value(&core, &x, &y, false));
            pick_nearer(plus, minus, z, prec)
        }
        _ => {
            // monic transform: θ = a_n·z satisfies a monic integer polynomial
            // with coefficients b_i = c_i · a_nⁿ⁻¹⁻ⁱ
            let n = c.len() - 1;
            let lead = c[n].clone();
            let mut monic = vec![BigInt::zero(); n + 1];
            monic[n] = BigInt::one();
            let mut pw = BigInt::one();
            for i in (0..n).rev() {
                monic[i] = &c[i] * &pw;
                pw *= &lead;
            }
            let approx = z.mul_f(&super::bigfloat::f_from_bigint(&lead, prec));
            let field = NumberField::from_minpoly(monic, &approx).ok()?;
            let gen = NumberFieldElement::generator(&field);
            let val = gen.scale(&BigRational::new(BigInt::one(), lead));
            Some(ExactComplex::alg(val))
        }
    }
}

fn pick_nearer(
    a: ExactComplex,
    b: ExactComplex,
    z: &CF,
    prec: u32,
) -> Option<ExactComplex> {
    let da = a.eval(prec).dist(&z.with_prec(prec));
    let db = b.eval(prec).dist(&z.with_prec(prec));
    Some(if da <= db { a } else { b })
}
