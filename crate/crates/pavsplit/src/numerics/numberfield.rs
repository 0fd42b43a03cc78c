//! Number fields with a chosen complex embedding.
//!
//! A field is a monic squarefree integer polynomial `p` together with a
//! rational approximation of one complex root; the approximation picks the
//! embedding.  Elements are rational coefficient vectors in the power basis
//! of the root.
//!
//! Two shapes get special treatment because the whole pipeline lives in them:
//! canonical quadratics `x² − d` with `d` squarefree (written `ℚ(√d)`, the
//! stored root is the principal branch: positive real part for `d > 0`,
//! positive imaginary part for `d < 0`), and biquadratic composita
//! `ℚ(√a, √b)` generated by `t = √a + √b` with minimal polynomial
//! `x⁴ − 2(a+b)x² + (a−b)²`.  For those, roots are evaluated by square roots
//! alone; generic fields fall back to Durand–Kerner plus Newton refinement.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::bigfloat::{f_from_i64, pow2, rat_from_f, CF, F};
use super::poly;
use super::NumericsError;
use dashu_float::ops::SquareRoot;

/// Largest |d| for which distinct quadratics ℚ(√a), ℚ(√b) are merged into a
/// compositum instead of degrading to floats.
pub const COMPOSITUM_LIMIT: i64 = 50;

#[derive(Clone, Debug)]
pub struct NumberField {
    /// Monic squarefree defining polynomial, little-endian, degree ≥ 2.
    pub poly: Vec<BigInt>,
    /// Rational approximation of the chosen root (within 1e-12).
    pub root_re: BigRational,
    pub root_im: BigRational,
    /// Set when the field was built as ℚ(√a, √b); used for fast embeddings.
    pub parents: Option<(i64, i64)>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        if self.poly != other.poly {
            return false;
        }
        // same defining polynomial: embeddings agree when the stored
        // approximations are close (root separation is far larger than 2e-9)
        let dr = &self.root_re - &other.root_re;
        let di = &self.root_im - &other.root_im;
        let d2 = &dr * &dr + &di * &di;
        d2 < BigRational::new(BigInt::one(), BigInt::from(10u64).pow(17))
    }
}

impl NumberField {
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// For `x² − d` returns `d`.
    pub fn quadratic_radicand(&self) -> Option<BigInt> {
        if self.poly.len() == 3 && self.poly[1].is_zero() && self.poly[2].is_one() {
            Some(-self.poly[0].clone())
        } else {
            None
        }
    }

    /// Canonical field ℚ(√d) for squarefree d ∉ {0, 1}, principal embedding.
    pub fn quadratic(d: &BigInt) -> NumberField {
        assert!(!d.is_zero() && !d.is_one(), "radicand must define a proper extension");
        let (re, im) = principal_sqrt_approx(d);
        NumberField {
            poly: vec![-d.clone(), BigInt::zero(), BigInt::one()],
            root_re: re,
            root_im: im,
            parents: None,
        }
    }

    /// Biquadratic compositum ℚ(√a, √b), a ≠ b squarefree, generated by
    /// t = √a + √b (principal branches).
    pub fn compositum(a: i64, b: i64) -> NumberField {
        assert!(a != b && a != 0 && b != 0);
        let (ar, ai) = principal_sqrt_approx(&BigInt::from(a));
        let (br, bi) = principal_sqrt_approx(&BigInt::from(b));
        let s = BigInt::from(a) + BigInt::from(b);
        let d = BigInt::from(a) - BigInt::from(b);
        NumberField {
            poly: vec![
                &d * &d,
                BigInt::zero(),
                BigInt::from(-2) * s,
                BigInt::zero(),
                BigInt::one(),
            ],
            root_re: ar + br,
            root_im: ai + bi,
            parents: Some((a, b)),
        }
    }

    /// Field defined by an arbitrary monic squarefree integer polynomial and
    /// a complex approximation of the intended root.
    pub fn from_minpoly(poly: Vec<BigInt>, approx: &CF) -> Result<NumberField, NumericsError> {
        if poly.len() < 3 || !poly.last().unwrap().is_one() {
            return Err(NumericsError::BadField(
                "defining polynomial must be monic of degree ≥ 2".into(),
            ));
        }
        let p = poly::from_ints(&poly);
        let g = poly::gcd(&p, &poly::derivative(&p));
        if poly::deg(&g) != 0 {
            return Err(NumericsError::BadField("defining polynomial is not squarefree".into()));
        }
        let (re, im) = (rat_from_f(&approx.re), rat_from_f(&approx.im));
        Ok(NumberField { poly, root_re: re, root_im: im, parents: None })
    }

    pub fn root_approx_cf(&self, prec: u32) -> CF {
        CF::from_rats(&self.root_re, &self.root_im, prec)
    }

    /// The chosen root at `prec` bits.  Errors when the stored approximation
    /// does not single out one root.
    pub fn root_cf(&self, prec: u32) -> Result<CF, NumericsError> {
        let wp = prec + 32;
        if let Some(d) = self.quadratic_radicand() {
            let s = principal_sqrt_cf(&d, wp);
            return self.pick_branch(vec![s.clone(), -&s], prec);
        }
        if let Some((a, b)) = self.parents {
            let sa = principal_sqrt_cf(&BigInt::from(a), wp);
            let sb = principal_sqrt_cf(&BigInt::from(b), wp);
            let combos = vec![&sa + &sb, &sa - &sb, &(-&sa) + &sb, &(-&sa) - &sb];
            return self.pick_branch(combos, prec);
        }
        // generic: coarse Durand–Kerner, then Newton at full precision
        let coarse = durand_kerner(&self.poly, 128);
        let chosen = self.pick_branch(coarse, 96)?;
        Ok(newton_refine(&self.poly, &chosen, wp).with_prec(wp))
    }

    fn pick_branch(&self, candidates: Vec<CF>, prec: u32) -> Result<CF, NumericsError> {
        let target = self.root_approx_cf(prec.max(96));
        // the stored approximation must match exactly one root within 1e-10
        let tol = pow2(-33, 96); // 2^-33 ≈ 1.16e-10
        let mut hit: Option<CF> = None;
        let mut hits = 0usize;
        for c in candidates {
            if c.dist(&target) < tol {
                hits += 1;
                hit = Some(c);
            }
        }
        match (hits, hit) {
            (1, Some(r)) => Ok(r),
            (n, _) => Err(NumericsError::EmbeddingAmbiguous(n)),
        }
    }
}

/// Remove the square part: n = s² · core with core squarefree up to the
/// trial-division bound (10⁴; any remaining square factor of a larger prime
/// is left in place, which only costs a non-canonical field label).
pub fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive());
    let mut s = BigInt::one();
    let mut core = n.clone();
    let mut p = BigInt::from(2);
    let bound = BigInt::from(10_000);
    while &(&p * &p) <= &core && p <= bound {
        let p2 = &p * &p;
        while (&core % &p2).is_zero() {
            core /= &p2;
            s *= &p;
        }
        p += 1u32;
    }
    // leftover perfect square (e.g. a single large prime squared)
    let r = core.sqrt();
    if &(&r * &r) == &core {
        s *= &r;
        core = BigInt::one();
    }
    (s, core)
}

fn principal_sqrt_approx(d: &BigInt) -> (BigRational, BigRational) {
    let v = principal_sqrt_cf(d, 96);
    (rat_from_f(&v.re), rat_from_f(&v.im))
}

/// √d on the principal branch: positive real for d > 0, positive imaginary
/// for d < 0.
pub fn principal_sqrt_cf(d: &BigInt, prec: u32) -> CF {
    let mag = super::bigfloat::f_from_bigint(&d.abs(), prec).sqrt();
    if d.is_negative() {
        CF::new(f_from_i64(0, prec), mag)
    } else {
        CF::new(mag, f_from_i64(0, prec))
    }
}

fn eval_int_poly(p: &[BigInt], z: &CF, prec: u32) -> CF {
    let mut acc = CF::zero(prec);
    for c in p.iter().rev() {
        acc = &(&acc * z) + &CF::new(super::bigfloat::f_from_bigint(c, prec), f_from_i64(0, prec));
    }
    acc
}

/// All complex roots by Durand–Kerner.  Adequate here: polynomials are
/// squarefree of degree ≤ 8 with moderate coefficients.
pub fn durand_kerner(p: &[BigInt], prec: u32) -> Vec<CF> {
    let n = p.len() - 1;
    let wp = prec + 32;
    let lead = p[n].clone();
    // Cauchy bound for |root|
    let mut bound = F::ZERO;
    for c in &p[..n] {
        let a = super::bigfloat::f_from_bigint(&c.abs(), wp)
            / super::bigfloat::f_from_bigint(&lead.abs(), wp);
        if a > bound {
            bound = a;
        }
    }
    let radius = bound + f_from_i64(1, wp);
    // seeds (0.4 + 0.9i)^(k+1) · radius — standard non-symmetric start
    let seed = CF::from_f64s(0.4, 0.9, wp);
    let mut roots = Vec::with_capacity(n);
    let mut acc = seed.clone();
    for _ in 0..n {
        roots.push(acc.mul_f(&radius));
        acc = &acc * &seed;
    }
    let tol = pow2(-(prec as i64), wp);
    for _ in 0..400 {
        let mut delta_max = F::ZERO;
        for k in 0..n {
            let pk = eval_int_poly(p, &roots[k], wp);
            let mut den = CF::new(super::bigfloat::f_from_bigint(&lead, wp), f_from_i64(0, wp));
            for j in 0..n {
                if j != k {
                    den = &den * &(&roots[k] - &roots[j]);
                }
            }
            let step = &pk / &den;
            let d = step.abs();
            if d > delta_max {
                delta_max = d;
            }
            let moved = &roots[k] - &step;
            roots[k] = moved;
        }
        if delta_max < tol {
            break;
        }
    }
    roots.into_iter().map(|r| r.with_prec(prec)).collect()
}

/// Newton refinement with precision doubling, starting from a root accurate
/// to ~1e-20.
pub fn newton_refine(p: &[BigInt], start: &CF, prec: u32) -> CF {
    let pr = poly::from_ints(p);
    let dpr = poly::derivative(&pr);
    let dp: Vec<BigInt> = dpr
        .iter()
        .map(|c| {
            debug_assert!(c.denom().is_one());
            c.numer().clone()
        })
        .collect();
    let mut wp = 128u32;
    let mut z = start.with_prec(wp);
    loop {
        wp = (wp * 2).min(prec + 32);
        z = z.with_prec(wp);
        // two Newton steps per precision level
        for _ in 0..2 {
            let num = eval_int_poly(p, &z, wp);
            let den = eval_int_poly(&dp, &z, wp);
            z = &z - &(&num / &den);
        }
        if wp >= prec + 32 {
            break;
        }
    }
    z.with_prec(prec)
}

/// Element of a number field: rational coordinates in the power basis.
#[derive(Clone, Debug, PartialEq)]
pub struct NumberFieldElement {
    pub field: NumberField,
    pub coeffs: Vec<BigRational>,
}

impl NumberFieldElement {
    pub fn new(field: NumberField, mut coeffs: Vec<BigRational>) -> Self {
        let n = field.degree();
        coeffs.resize(n, BigRational::zero());
        NumberFieldElement { field, coeffs }
    }

    pub fn from_rat(field: &NumberField, q: &BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); field.degree()];
        coeffs[0] = q.clone();
        NumberFieldElement { field: field.clone(), coeffs }
    }

    /// The generator θ of the field.
    pub fn generator(field: &NumberField) -> Self {
        let mut coeffs = vec![BigRational::zero(); field.degree()];
        coeffs[1] = BigRational::one();
        NumberFieldElement { field: field.clone(), coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Some(q) when the element is the rational constant q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn same_field(&self, other: &Self) {
        debug_assert!(self.field == other.field, "operands in different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let coeffs =
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect::<Vec<_>>();
        NumberFieldElement { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        let coeffs =
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect::<Vec<_>>();
        NumberFieldElement { field: self.field.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        NumberFieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        let prod = poly::mul(&self.coeffs, &other.coeffs);
        let modp = poly::from_ints(&self.field.poly);
        let (_, rem) = poly::divmod(&prod, &modp);
        NumberFieldElement::new(self.field.clone(), rem)
    }

    pub fn inv(&self) -> Result<Self, NumericsError> {
        if self.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        let modp = poly::from_ints(&self.field.poly);
        let (g, u, _) = poly::xgcd(&self.coeffs, &modp);
        if poly::deg(&g) != 0 {
            // defining polynomial not irreducible over this element's span
            return Err(NumericsError::BadField(
                "element is a zero divisor; defining polynomial is reducible".into(),
            ));
        }
        let c = g[0].recip();
        let (_, rem) = poly::divmod(&poly::scale(&u, &c), &modp);
        Ok(NumberFieldElement::new(self.field.clone(), rem))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        NumberFieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn eval(&self, prec: u32) -> Result<CF, NumericsError> {
        let root = self.field.root_cf(prec + 16)?;
        Ok(poly::eval_cf(&self.coeffs, &root, prec + 16).with_prec(prec))
    }
}

/// Build `x + y·√d` for arbitrary nonzero integer d (not a perfect square):
/// the square part of d is folded into y and the field is the canonical
/// ℚ(√core).  `positive_branch = false` selects the conjugate embedding by
/// negating y instead of moving the stored root.
pub fn quad_value(
    d: &BigInt,
    x: &BigRational,
    y: &BigRational,
    positive_branch: bool,
) -> NumberFieldElement {
    let (s, core_abs) = square_part(&d.abs());
    let core = if d.is_negative() { -core_abs } else { core_abs };
    assert!(!core.is_one(), "radicand is a perfect square; value is rational");
    let field = NumberField::quadratic(&core);
    let mut y_eff = y * BigRational::from(s);
    if !positive_branch {
        y_eff = -y_eff;
    }
    NumberFieldElement::new(field, vec![x.clone(), y_eff])
}

/// Coordinates of √a inside the compositum ℚ(√a, √b) generated by t = √a+√b:
/// √a = (t³ − (3a+b)·t) / (2(b−a)).
pub fn sqrt_coords_in_compositum(a: i64, b: i64) -> Vec<BigRational> {
    let den = BigRational::from(BigInt::from(2 * (b - a)));
    vec![
        BigRational::zero(),
        BigRational::from(BigInt::from(-(3 * a + b))) / den.clone(),
        BigRational::zero(),
        den.recip(),
    ]
}
