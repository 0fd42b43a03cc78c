//! Elliptic factors: modulus reduction and complex multiplication.
//!
//! A one-dimensional factor arrives as a period `(d | w)` with modulus
//! `τ = w/d` in the upper half plane.  The factor's isomorphism class is the
//! `SL₂(ℤ)`-orbit of `τ`; this module walks `τ` into the standard
//! fundamental domain (`|Re τ| ≤ 1/2`, `|τ| ≥ 1`, with `Re τ = +1/2` and
//! `Re τ ≥ 0` on `|τ| = 1` as the canonical boundary choices) while
//! recording the transformation, and detects complex multiplication by a
//! degree-two minimal polynomial — read off exactly for quadratic values,
//! recovered by lattice recognition for floating ones and re-verified
//! exactly whenever the modulus itself is exact.

use dashu_float::ops::Abs;
use num_bigint::BigInt;
use num_integer::{gcd, lcm};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::latalg::IntMat;
use crate::numerics::bigfloat::round_f;
use crate::numerics::{pow2, recognize_algebraic, ExactComplex, Value};
use crate::pav::PolarizedAV;

use super::DecomposeError;

/// Complex multiplication data of a modulus: the primitive integer minimal
/// polynomial `a·τ² + b·τ + c = 0` with `a > 0`, and its discriminant.
#[derive(Clone, Debug, PartialEq)]
pub struct CmData {
    pub minpoly: [BigInt; 3],
    pub discriminant: BigInt,
    /// The relation was established by exact arithmetic, not only by
    /// numerical recognition.
    pub certified: bool,
}

/// Everything reported about an elliptic factor.
#[derive(Clone, Debug)]
pub struct EllipticReport {
    /// The modulus `w/d` exactly as the period presents it.
    pub tau: ExactComplex,
    /// Fundamental-domain representative of the `SL₂(ℤ)`-orbit.
    pub reduced: ExactComplex,
    /// Integer matrix `(a b; c d)` with `reduced = (a·τ + b)/(c·τ + d)`.
    pub transform: IntMat,
    pub cm: Option<CmData>,
}

/// Normalise a one-dimensional period `(d | w)`: raw and reduced modulus,
/// the reducing transformation, and the multiplication report.
pub fn elliptic_normalize(pav: &PolarizedAV) -> Result<EllipticReport, DecomposeError> {
    if pav.dim() != 1 {
        return Err(DecomposeError::NotElliptic(format!(
            "dimension {} period",
            pav.dim()
        )));
    }
    let d = BigRational::from(pav.etype[0].clone());
    let tau = pav.z[(0, 0)].scale(&d.recip());
    let (reduced, transform) = reduce_modulus(&tau, pav.prec)?;
    let cm = cm_data(&tau, pav.prec);
    Ok(EllipticReport { tau, reduced, transform, cm })
}

/// Exact real part and squared modulus, available for rationals and
/// imaginary quadratic values `x + y√d`, `d < 0`.
fn exact_re_abs2(c: &ExactComplex) -> Option<(BigRational, BigRational)> {
    match &c.value {
        Value::Rat(q) => Some((q.clone(), q * q)),
        Value::Alg(e) => {
            let d = e.field.quadratic_radicand()?;
            if !d.is_negative() {
                return None;
            }
            let (x, y) = (&e.coeffs[0], &e.coeffs[1]);
            Some((x.clone(), x * x - BigRational::from(d) * y * y))
        }
        Value::Dec(_) => None,
    }
}

fn mobius_step(m: &IntMat, step: [[i64; 2]; 2]) -> IntMat {
    IntMat::from_fn(2, 2, |i, j| BigInt::from(step[i][j])).matmul(m)
}

/// Walk a modulus into the fundamental domain, alternating translations and
/// inversions.  Decisions are exact for rational/quadratic values and use
/// the carried precision otherwise, treating the unit circle as a band of
/// width `2^(−prec/2)` around 1.
fn reduce_modulus(
    tau: &ExactComplex,
    prec: u32,
) -> Result<(ExactComplex, IntMat), DecomposeError> {
    let minus_one = ExactComplex::from_int(-1);
    let mut t = tau.clone();
    let mut m = IntMat::identity(2);
    let mut settled = false;
    for _ in 0..300 {
        // translate the real part into (−1/2, 1/2]
        let n: BigInt = match exact_re_abs2(&t) {
            Some((re, _)) => (re - BigRational::new(BigInt::one(), BigInt::from(2)))
                .ceil()
                .to_integer(),
            None => round_f(&t.eval(prec).re),
        };
        if !n.is_zero() {
            use num_traits::ToPrimitive;
            let ni = n.to_i64().ok_or_else(|| {
                DecomposeError::NotElliptic("modulus reduction overflow".into())
            })?;
            t = t.sub(&ExactComplex::from_bigint(&n));
            m = mobius_step(&m, [[1, -ni], [0, 1]]);
        }
        let inside = match exact_re_abs2(&t) {
            Some((_, a2)) => a2 < BigRational::one(),
            None => {
                let a2 = t.eval(prec).abs2();
                let one = pow2(0, 64);
                if (&a2 - &one).abs() <= pow2(-(prec as i64) / 2, 64) {
                    false
                } else {
                    a2 < one
                }
            }
        };
        if !inside {
            settled = true;
            break;
        }
        t = minus_one.div(&t)?;
        m = mobius_step(&m, [[0, -1], [1, 0]]);
    }
    if !settled {
        return Err(DecomposeError::NotElliptic(
            "modulus reduction did not converge".into(),
        ));
    }
    // canonical boundary: on |τ| = 1 prefer Re τ ≥ 0 (the inversion mirrors
    // the real part there)
    if let Some((re, a2)) = exact_re_abs2(&t) {
        if a2.is_one() && re.is_negative() {
            t = minus_one.div(&t)?;
            m = mobius_step(&m, [[0, -1], [1, 0]]);
        }
    }
    Ok((t, m))
}

/// Minimal polynomial of `x + y√d` over ℚ, as a primitive integer triple.
fn quad_minpoly(
    x: &BigRational,
    y: &BigRational,
    d: &BigInt,
    certified: bool,
) -> CmData {
    // τ² − 2x·τ + (x² − d·y²) = 0, cleared to integers
    let c0 = x * x - BigRational::from(d.clone()) * y * y;
    let c1 = -(x + x);
    let den = lcm(c0.denom().clone(), c1.denom().clone());
    let a = den.clone();
    let b = (c1 * BigRational::from(den.clone())).to_integer();
    let c = (c0 * BigRational::from(den)).to_integer();
    let g = gcd(gcd(a.clone(), b.abs()), c.abs());
    let (a, b, c) = (&a / &g, &b / &g, &c / &g);
    let discriminant = &b * &b - BigInt::from(4) * &a * &c;
    CmData { minpoly: [a, b, c], discriminant, certified }
}

/// Detect complex multiplication: a degree-two integer relation for the
/// modulus.  Quadratic exact values are read off directly; anything else
/// goes through recognition, upgraded to certified when the relation can be
/// re-verified in exact arithmetic.
fn cm_data(tau: &ExactComplex, prec: u32) -> Option<CmData> {
    if let Value::Alg(e) = &tau.value {
        if let Some(d) = e.field.quadratic_radicand() {
            if d.is_negative() {
                return Some(quad_minpoly(&e.coeffs[0], &e.coeffs[1], &d, true));
            }
            return None;
        }
    }
    if let Value::Rat(_) = &tau.value {
        return None;
    }
    let cand = recognize_algebraic(&tau.eval(prec), 2, prec)?;
    let Value::Alg(e) = &cand.value else { return None };
    let d = e.field.quadratic_radicand()?;
    if !d.is_negative() {
        return None;
    }
    let mut data = quad_minpoly(&e.coeffs[0], &e.coeffs[1], &d, false);
    if tau.is_exact() {
        // the modulus is exact in a larger field: evaluate the candidate
        // relation on it and certify only an identical vanishing
        let [a, b, c] = &data.minpoly;
        let p = tau
            .mul(tau)
            .scale(&BigRational::from(a.clone()))
            .add(&tau.scale(&BigRational::from(b.clone())))
            .add(&ExactComplex::from_bigint(c));
        if !p.is_zero() {
            return None;
        }
        data.certified = true;
    }
    Some(data)
}
