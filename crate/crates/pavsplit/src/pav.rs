//! Polarized abelian varieties given by period matrices.
//!
//! A polarized abelian variety of dimension `g` and type
//! `E = diag(d₁,…,d_g)`, `d₁ | d₂ | … | d_g`, is stored through its period
//! matrix `Π = (E Z)` with `Z` symmetric and `Im Z ≻ 0`.  The columns of `Π`
//! span the period lattice Λ in ℂ^g; the polarization is the alternating
//! form with Gram matrix `J = [[0, E], [−E, 0]]` on that basis.
//!
//! A morphism `f: X → X′` is described by a pair of representations: the
//! rational one `ρ_r(f)` (an integer `2g′ × 2g` matrix on lattice bases) and
//! the analytic one `ρ_a(f)` (a complex `g′ × g` matrix on tangent spaces),
//! linked by the Hurwitz relation `ρ_a(f)·Π = Π′·ρ_r(f)`.  This module
//! derives one representation from the other, measures the residual of the
//! relation, computes isogeny degrees, and checks polarization pullbacks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::latalg::{
    det_bareiss, int_to_cmat, standard_symplectic_gram, CMat, FMat, IntMat, Mat, RatMat,
};
use crate::numerics::bigfloat::pow2;
use crate::numerics::{ExactComplex, CF, F};

#[derive(thiserror::Error, Debug)]
pub enum PavError {
    #[error("invalid polarization type: {0}")]
    BadType(String),
    #[error("Z is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("Im Z is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("period relation violated: residual {0}")]
    RelationViolated(String),
}

/// A polarized abelian variety `(E Z)` with exact (or flagged-float) entries.
#[derive(Clone, Debug)]
pub struct PolarizedAV {
    /// Polarization type `d₁ | d₂ | … | d_g`, all positive.
    pub etype: Vec<BigInt>,
    /// Symmetric Riemann matrix with `Im Z ≻ 0`.
    pub z: CMat,
    /// Working precision in bits for all numeric checks on this variety.
    pub prec: u32,
    /// Scalar prefactor recorded at construction (purely bookkeeping: the
    /// stored `Z` already includes it).
    pub content: BigRational,
}

impl PolarizedAV {
    pub fn dim(&self) -> usize {
        self.etype.len()
    }

    /// `E` as an exact diagonal matrix.
    pub fn e_mat(&self) -> CMat {
        let g = self.dim();
        let mut m = CMat::zero(g, g);
        for i in 0..g {
            m[(i, i)] = ExactComplex::from_bigint(&self.etype[i]);
        }
        m
    }

    /// Gram matrix `[[0, E], [−E, 0]]` of the polarization form.
    pub fn j_gram(&self) -> IntMat {
        standard_symplectic_gram(&self.etype)
    }

    /// Full period matrix `Π = (E Z)`, `g × 2g`.
    pub fn period(&self) -> CMat {
        self.e_mat().hstack(&self.z)
    }

    /// Is every period entry exact (rational or algebraic)?
    pub fn is_exact(&self) -> bool {
        (0..self.z.rows)
            .all(|i| (0..self.z.cols).all(|j| self.z[(i, j)].is_exact()))
    }
}

/// Assemble and validate a polarized abelian variety.
///
/// `scale`, when given, multiplies every entry of `z` before validation and
/// is recorded in `content`; the polarization type is taken as passed.  Fails
/// when the type is not a positive divisibility chain, `Z` is not symmetric
/// (exact mismatch, or numeric deviation above `2^(16−prec)`), or `Im Z` has
/// a Gaussian pivot below `10·2^(−prec/2)`.
pub fn build_period(
    etype: Vec<BigInt>,
    z: CMat,
    scale: Option<BigRational>,
    prec: u32,
) -> Result<PolarizedAV, PavError> {
    let g = etype.len();
    if g == 0 {
        return Err(PavError::BadType("empty type".into()));
    }
    if z.rows != g || z.cols != g {
        return Err(PavError::DimMismatch(format!(
            "type has {} entries but Z is {}×{}",
            g, z.rows, z.cols
        )));
    }
    for d in &etype {
        if !d.is_positive() {
            return Err(PavError::BadType(format!("non-positive entry {d}")));
        }
    }
    for w in etype.windows(2) {
        if !(&w[1] % &w[0]).is_zero() {
            return Err(PavError::BadType(format!("{} does not divide {}", w[0], w[1])));
        }
    }
    let content = scale.clone().unwrap_or_else(BigRational::one);
    let z = match scale {
        Some(s) => z.map(|e| e.scale(&s)),
        None => z,
    };

    // symmetry
    let sym_tol = pow2(16 - prec as i64, 64);
    for i in 0..g {
        for j in i + 1..g {
            let (a, b) = (&z[(i, j)], &z[(j, i)]);
            let ok = match a.eq_exact(b) {
                Some(t) => t,
                None => a.eval(prec).dist(&b.eval(prec)) <= sym_tol,
            };
            if !ok {
                return Err(PavError::NotSymmetric(i, j));
            }
        }
    }

    // Im Z ≻ 0 via Gaussian pivots (no row exchanges: leading minors)
    let mut im = Mat::<F>::from_fn(g, g, |i, j| z[(i, j)].eval(prec).im);
    let floor = {
        let ten = crate::numerics::bigfloat::f_from_i64(10, 64);
        &ten * &pow2(-(prec as i64) / 2, 64)
    };
    for k in 0..g {
        let piv = im[(k, k)].clone();
        if piv <= floor {
            return Err(PavError::NotPositiveDefinite(k));
        }
        for i in k + 1..g {
            let f = &im[(i, k)] / &piv;
            for j in k..g {
                let t = &im[(k, j)] * &f;
                let v = &im[(i, j)] - &t;
                im[(i, j)] = v;
            }
        }
    }

    Ok(PolarizedAV { etype, z, prec, content })
}

/// Divide the whole period matrix by `d₁` when `d₁ > 1`: an isomorphic
/// variety whose polarization type `(1, d₂/d₁, …)` is primitive.  Returns
/// the rescaled variety and the factor taken out.
pub fn primitive_rescale(pav: &PolarizedAV) -> Result<(PolarizedAV, BigInt), PavError> {
    let d1 = pav.etype[0].clone();
    if d1.is_one() {
        return Ok((pav.clone(), d1));
    }
    let inv = BigRational::new(BigInt::one(), d1.clone());
    let etype: Vec<BigInt> = pav.etype.iter().map(|d| d / &d1).collect();
    let z = pav.z.map(|e| e.scale(&inv));
    let scaled = build_period(etype, z, None, pav.prec)?;
    Ok((scaled, d1))
}

/// Analytic representation from a rational one.
///
/// For `f: X → X′` with rational representation `m` (`2g′ × 2g`, columns =
/// images of the Λ_X basis in Λ_X′ coordinates), the Hurwitz relation
/// `C·Π = Π′·m` determines `C = ρ_a(f)` from its first `g` columns:
/// `C = (Π′·m)_left · E⁻¹`.  The remaining `g` columns are verified, exactly
/// for exact entries and within `2^(−prec/2)` numerically.
pub fn analytic_from_rational(
    source: &PolarizedAV,
    target: &PolarizedAV,
    m: &IntMat,
) -> Result<CMat, PavError> {
    let (g, gp) = (source.dim(), target.dim());
    if m.rows != 2 * gp || m.cols != 2 * g {
        return Err(PavError::DimMismatch(format!(
            "rational representation is {}×{}, expected {}×{}",
            m.rows,
            m.cols,
            2 * gp,
            2 * g
        )));
    }
    let rhs = target.period().matmul(&int_to_cmat(m));
    let mut c = CMat::zero(gp, g);
    for i in 0..gp {
        for j in 0..g {
            c[(i, j)] = rhs[(i, j)]
                .scale(&BigRational::new(BigInt::one(), source.etype[j].clone()));
        }
    }
    // verify the Z-side columns
    let prec = source.prec.max(target.prec);
    let lhs_z = c.matmul(&source.z);
    let tol = pow2(-(prec as i64) / 2, 64);
    for i in 0..gp {
        for j in 0..g {
            let (a, b) = (&lhs_z[(i, j)], &rhs[(i, j + g)]);
            let ok = match a.eq_exact(b) {
                Some(t) => t,
                None => a.eval(prec).dist(&b.eval(prec)) <= tol,
            };
            if !ok {
                return Err(PavError::RelationViolated(format!(
                    "Z column mismatch at ({i}, {j})"
                )));
            }
        }
    }
    Ok(c)
}

/// Max-norm of `C·Π_source − Π_target·m` at the working precision.  Exact
/// entries contribute exactly; the result is an upper bound on the numeric
/// violation of the Hurwitz relation.
pub fn hurwitz_residual(
    source: &PolarizedAV,
    target: &PolarizedAV,
    m: &IntMat,
    c: &CMat,
) -> F {
    let prec = source.prec.max(target.prec);
    let lhs = c.matmul(&source.period());
    let rhs = target.period().matmul(&int_to_cmat(m));
    let diff = lhs.sub(&rhs);
    let mut worst = F::ZERO;
    for i in 0..diff.rows {
        for j in 0..diff.cols {
            let e = &diff[(i, j)];
            if e.is_zero() {
                continue;
            }
            let a = e.eval(prec).abs();
            if a > worst {
                worst = a;
            }
        }
    }
    worst
}

/// Degree of the isogeny with rational representation `m`: `|det m|`.
pub fn isogeny_degree(m: &IntMat) -> Result<BigInt, PavError> {
    if m.rows != m.cols {
        return Err(PavError::DimMismatch(format!(
            "degree needs a square representation, got {}×{}",
            m.rows, m.cols
        )));
    }
    Ok(det_bareiss(m).abs())
}

/// Does `m` pull the target polarization back to the source one:
/// `mᵗ · J_target · m = J_source`?
pub fn check_polarization_pullback(
    source: &PolarizedAV,
    target: &PolarizedAV,
    m: &IntMat,
) -> bool {
    if m.rows != 2 * target.dim() || m.cols != 2 * source.dim() {
        return false;
    }
    m.transpose().matmul(&target.j_gram()).matmul(m) == source.j_gram()
}

/// Largest entry magnitude of an evaluated matrix.
pub fn fmat_max_abs(m: &FMat) -> F {
    let mut worst = F::ZERO;
    for i in 0..m.rows {
        for j in 0..m.cols {
            let a = m[(i, j)].abs();
            if a > worst {
                worst = a;
            }
        }
    }
    worst
}

/// Convenience: a purely rational Riemann matrix entry grid → CMat.
pub fn cmat_from_rat(m: &RatMat) -> CMat {
    m.map(|q| ExactComplex::rat(q.clone()))
}

/// Convenience constructor for tests and examples: `Z = i·Y` for a rational
/// positive-definite `Y` gives a valid Riemann matrix.
pub fn imaginary_z(y: &RatMat) -> CMat {
    y.map(|q| ExactComplex::i().scale(q))
}

/// Distance between two complex matrices in max-norm at `prec` bits.
pub fn cmat_dist(a: &CMat, b: &CMat, prec: u32) -> F {
    let mut worst = F::ZERO;
    assert!(a.rows == b.rows && a.cols == b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let d = a[(i, j)].eval(prec).dist(&b[(i, j)].eval(prec));
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Numeric evaluation of a whole complex matrix to CF entries.
pub fn cmat_to_f(m: &CMat, prec: u32) -> Mat<CF> {
    m.map(|e| e.eval(prec))
}
