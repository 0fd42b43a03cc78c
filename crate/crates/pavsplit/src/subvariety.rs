//! Abelian subvarieties cut out by rational endomorphisms.
//!
//! A nonzero `f ∈ End_ℚ(A)` of a polarized abelian variety `A = V/L`
//! determines the subtorus `A_f = Im(f)`.  On lattices, the columns of the
//! rational representation `M = ρ_r(f)` span `L_f = (⟨M⟩ ⊗ ℚ) ∩ L`, the
//! saturated (pure) sublattice, which has even rank `2h` because it carries
//! a complex structure.  Restricting the polarization form of `A` to `L_f`
//! and running the symplectic reduction on the restricted Gram matrix gives
//! a basis `β_f = (β₁ β₂)` of `L_f` in which the form is `[[0, D], [−D, 0]]`
//! with `D = diag(n₁ | … | n_h)`: the induced polarization type.
//!
//! With respect to `β_f` and the complex coordinates `u_i/n_i` on `A_f`, the
//! factor has period matrix `(D W)`: the analytic matrix of the inclusion
//! `i_f : A_f → A` is `ρ_a(i_f) = Π·β₁·D⁻¹`, and `W ∈ H_h` is the unique
//! solution of the full-column-rank system `ρ_a(i_f)·W = Π·β₂`.  The
//! returned data are verified after the fact: symmetry of `W` and positive
//! definiteness of `Im W` are checked on construction, and the Hurwitz
//! relation `ρ_a(i_f)·(D W) = Π·ρ_r(i_f)` holds exactly whenever the host
//! period is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::latalg::{
    csolve, frobenius_symplectic_basis, int_to_cmat, saturate, CMat, IntMat, LatAlgError, RatMat,
};
use crate::pav::{analytic_from_rational, build_period, hurwitz_residual, PavError, PolarizedAV};
use crate::numerics::F;

#[derive(Debug, Error)]
pub enum SubvarietyError {
    /// The endomorphism is zero; there is no image subvariety.
    #[error("endomorphism has zero image")]
    ZeroImage,
    /// The column system for `W` lost rank, which means the input was not
    /// the rational representation of a complex-linear map.
    #[error("embedding system is rank-deficient")]
    RankDeficient,
    #[error(transparent)]
    Pav(#[from] PavError),
    #[error(transparent)]
    Lat(#[from] LatAlgError),
}

/// An abelian subvariety presented by a symplectic basis of its lattice
/// together with its induced period matrix.
#[derive(Clone, Debug)]
pub struct SubvarietyEmbedding {
    /// The ambient variety.
    pub host: PolarizedAV,
    /// `ρ_r(i_f)`, `2g × 2h`: columns are the symplectic basis `β_f` of the
    /// pure sublattice, written in the ambient lattice basis.
    pub basis: IntMat,
    /// The factor itself, with period matrix `(D W)`.
    pub sub: PolarizedAV,
    /// `ρ_a(i_f)`, `g × h`: the inclusion on complex coordinates.
    pub rho_a: CMat,
}

impl SubvarietyEmbedding {
    /// Max-norm violation of `ρ_a(i_f)·Π_sub = Π_host·ρ_r(i_f)`; exactly
    /// zero when every period entry is exact.
    pub fn residual(&self) -> F {
        hurwitz_residual(&self.sub, &self.host, &self.basis, &self.rho_a)
    }
}

/// Strip denominators from a rational matrix: returns the integral matrix
/// `c·f` together with the factor `c` (the lcm of all denominators).
pub fn clear_denominators(f: &RatMat) -> (IntMat, BigInt) {
    let mut c = BigInt::one();
    for i in 0..f.rows {
        for j in 0..f.cols {
            c = c.lcm(f[(i, j)].denom());
        }
    }
    let scale = BigRational::from(c.clone());
    let m = IntMat::from_fn(f.rows, f.cols, |i, j| (&f[(i, j)] * &scale).to_integer());
    (m, c)
}

/// Saturated lattice of the image of a rational endomorphism: a canonical
/// basis of the smallest pure sublattice containing the columns of `ρ_r(f)`.
///
/// The map is validated against the Hurwitz relation first (an integral
/// multiple of `f` must be an actual endomorphism of the host), which also
/// guarantees the image rank `2h` is even.
pub fn image_lattice(pav: &PolarizedAV, f: &RatMat) -> Result<IntMat, SubvarietyError> {
    let g = pav.dim();
    if f.rows != 2 * g || f.cols != 2 * g {
        return Err(PavError::DimMismatch(format!(
            "endomorphism is {}×{}, expected {}×{}",
            f.rows,
            f.cols,
            2 * g,
            2 * g
        ))
        .into());
    }
    let (m, _) = clear_denominators(f);
    if m.is_zero() {
        return Err(SubvarietyError::ZeroImage);
    }
    analytic_from_rational(pav, pav, &m)?;
    let sat = saturate(&m);
    if sat.cols % 2 != 0 {
        return Err(SubvarietyError::RankDeficient);
    }
    Ok(sat)
}

/// Symplectic basis and type of the polarization restricted to a sublattice.
///
/// `basis` is `2g × 2h` with linearly independent columns; the result is
/// `(basis·Q, D)` where `Q` is the unimodular transform bringing the
/// restricted Gram matrix `basisᵗ·J_E·basis` to `[[0, D], [−D, 0]]` and `D`
/// is the divisibility chain of induced elementary divisors.
pub fn induced_polarization(
    pav: &PolarizedAV,
    basis: &IntMat,
) -> Result<(IntMat, Vec<BigInt>), SubvarietyError> {
    let gram = basis.transpose().matmul(&pav.j_gram()).matmul(basis);
    let (q, d) = frobenius_symplectic_basis(&gram)?;
    Ok((basis.matmul(&q), d))
}

/// Period data of the subvariety spanned by an already-symplectic basis.
///
/// `basis` must be `2g × 2h` with `basisᵗ·J_E·basis = [[0, D], [−D, 0]]`,
/// e.g. straight from [`induced_polarization`].  Splitting the columns as
/// `(β₁ β₂)`, the analytic inclusion is `ρ_a = Π·β₁·D⁻¹` and `W` solves
/// `ρ_a·W = Π·β₂`; the pair `(D, W)` is validated as a period matrix.
pub fn embedding_from_basis(
    pav: &PolarizedAV,
    basis: IntMat,
    d: Vec<BigInt>,
) -> Result<SubvarietyEmbedding, SubvarietyError> {
    let h = d.len();
    assert_eq!(basis.cols, 2 * h, "basis must pair off its 2h columns");
    let first: Vec<usize> = (0..h).collect();
    let second: Vec<usize> = (h..2 * h).collect();
    let b1 = int_to_cmat(&basis.select_cols(&first));
    let b2 = int_to_cmat(&basis.select_cols(&second));
    let pi = pav.period();
    let mut rho_a = pi.matmul(&b1);
    for (j, dj) in d.iter().enumerate() {
        let inv = BigRational::new(BigInt::one(), dj.clone());
        for i in 0..rho_a.rows {
            rho_a[(i, j)] = rho_a[(i, j)].scale(&inv);
        }
    }
    let rhs = pi.matmul(&b2);
    let w = csolve(&rho_a, &rhs, pav.prec).map_err(|e| match e {
        LatAlgError::Singular | LatAlgError::Inconsistent => SubvarietyError::RankDeficient,
        other => SubvarietyError::Lat(other),
    })?;
    let sub = build_period(d, w, None, pav.prec)?;
    Ok(SubvarietyEmbedding {
        host: pav.clone(),
        basis,
        sub,
        rho_a,
    })
}

/// Image subvariety of a rational endomorphism: induced polarization,
/// symplectic lattice embedding, and period matrix `(D W)`.
pub fn subvariety_period(
    pav: &PolarizedAV,
    f: &RatMat,
) -> Result<SubvarietyEmbedding, SubvarietyError> {
    let lat = image_lattice(pav, f)?;
    let (basis, d) = induced_polarization(pav, &lat)?;
    embedding_from_basis(pav, basis, d)
}
