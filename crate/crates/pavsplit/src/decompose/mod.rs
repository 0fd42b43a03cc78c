//! Splitting a polarized abelian variety into simple factors.
//!
//! The engine of the decomposition is the correspondence between rational
//! Néron–Severi classes and symmetric endomorphisms: a class `ω` with matrix
//! `E_ω` on the period lattice yields the rational endomorphism
//!
//! ```text
//! f_ω = J_E⁻¹ · E_ω,        J_E = ( 0  E; −E  0 ),
//! ```
//!
//! which is idempotent (after a scalar normalisation) exactly when `ω`
//! separates a complementary pair of subvarieties.  Images of `f_ω` and
//! `1 − f_ω` are then extracted with their induced polarizations, and the
//! process recurses.  For surfaces the search for suitable classes reduces
//! to one rational-linear system plus a quadratic (Pfaffian) condition; in
//! higher dimension the kernel of the wedge condition provides candidates.
//!
//! Submodules: [`wedge`] implements the exterior-algebra membership test,
//! [`search`] the genus-2 criterion solver, [`elliptic`] modulus reduction
//! and complex-multiplication detection for one-dimensional factors, and
//! [`tree`] the recursive driver assembling the full decomposition with its
//! isogeny degree.

pub mod elliptic;
pub mod search;
pub mod tree;
pub mod wedge;

pub use elliptic::{elliptic_normalize, CmData, EllipticReport};
pub use search::{satisfies_criterion, sub_elliptic_search_g2, LinearFamily, SubEllipticSearch};
pub use tree::{poincare_decompose, DecomposeOptions, DecompositionTree, LeafKind, TreeNode};
pub use wedge::{ns_kernel, ns_membership, Exterior, NSForm, NsCheck};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::latalg::{rat_rank, LatAlgError, RatMat};
use crate::numerics::NumericsError;
use crate::pav::{PavError, PolarizedAV};
use crate::subvariety::{subvariety_period, SubvarietyEmbedding, SubvarietyError};

#[derive(Debug, Error)]
pub enum DecomposeError {
    #[error("form is not a Néron–Severi class")]
    NotMember,
    #[error("form does not induce an idempotent endomorphism")]
    NotIdempotent,
    #[error("endomorphism rank {0} does not split off a proper factor")]
    DegenerateRank(usize),
    #[error("dimension {0} is beyond the automated search gate")]
    TooLarge(usize),
    #[error("not an elliptic period: {0}")]
    NotElliptic(String),
    #[error("surface search requires a primitive type, found d₁ = {0}")]
    NotPrimitive(BigInt),
    #[error(transparent)]
    Sub(#[from] SubvarietyError),
    #[error(transparent)]
    Pav(#[from] PavError),
    #[error(transparent)]
    Lat(#[from] LatAlgError),
    #[error(transparent)]
    Num(#[from] NumericsError),
}

/// The symmetric rational endomorphism attached to a Néron–Severi class,
/// normalised to an idempotent.
///
/// Returns `(f, 1 − f, c)`: scaling the class scales the endomorphism, so
/// when `f² = c·f` with `c ≠ 0` the output is `f/c` and the factor is
/// reported.  Rejects classes whose endomorphism is not idempotent up to a
/// scalar, and idempotents of full or zero rank, which split nothing.
pub fn idempotent_from_ns(
    pav: &PolarizedAV,
    form: &NSForm,
) -> Result<(RatMat, RatMat, Option<BigRational>), DecomposeError> {
    wedge::require_member(pav, form)?;
    let n = 2 * pav.dim();
    let e = form.e_matrix();
    // J_E⁻¹ = ( 0  −E⁻¹; E⁻¹  0 ) row-permutes and rescales: no inversion needed
    let g = pav.dim();
    let j_inv = RatMat::from_fn(n, n, |i, j| {
        if i < g && j == i + g {
            -BigRational::new(BigInt::one(), pav.etype[i].clone())
        } else if i >= g && j == i - g {
            BigRational::new(BigInt::one(), pav.etype[i - g].clone())
        } else {
            BigRational::zero()
        }
    });
    let mut f = j_inv.matmul(&e);
    let mut f2 = f.matmul(&f);
    if f2 != f {
        // f² = c·f still cuts a factor after dividing by c
        let pos = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !f[(i, j)].is_zero());
        let Some((i, j)) = pos else { return Err(DecomposeError::NotIdempotent) };
        let c = &f2[(i, j)] / &f[(i, j)];
        if c.is_zero() || f2 != f.map(|x| x * &c) {
            return Err(DecomposeError::NotIdempotent);
        }
        let inv = c.recip();
        f = f.map(|x| x * &inv);
        f2 = f.matmul(&f);
        debug_assert_eq!(f2, f);
        let r = rat_rank(&f);
        if r == 0 || r == n {
            return Err(DecomposeError::DegenerateRank(r));
        }
        return Ok((f.clone(), RatMat::identity(n).sub(&f), Some(c)));
    }
    let r = rat_rank(&f);
    if r == 0 || r == n {
        return Err(DecomposeError::DegenerateRank(r));
    }
    Ok((f.clone(), RatMat::identity(n).sub(&f), None))
}

/// One splitting step: the image subvarieties of a complementary idempotent
/// pair, with their symplectic embeddings and induced polarizations.
pub fn decompose_step(
    pav: &PolarizedAV,
    f: &RatMat,
    complement: &RatMat,
) -> Result<(SubvarietyEmbedding, SubvarietyEmbedding), DecomposeError> {
    let a = subvariety_period(pav, f)?;
    let b = subvariety_period(pav, complement)?;
    if a.sub.dim() + b.sub.dim() != pav.dim() {
        return Err(DecomposeError::DegenerateRank(2 * a.sub.dim()));
    }
    Ok((a, b))
}

/// Height of a rational vector: the largest absolute numerator or
/// denominator appearing in lowest terms.
pub(crate) fn vector_height(v: &[BigRational]) -> BigInt {
    let mut h = BigInt::one();
    for q in v {
        let n = q.numer().abs();
        let d = q.denom().abs();
        if n > h {
            h = n;
        }
        if d > h {
            h = d;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latalg::CMat;
    use crate::numerics::ExactComplex;
    use crate::pav::build_period;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn diag_product() -> PolarizedAV {
        let z = CMat::from_fn(2, 2, |i, j| {
            if i == j {
                ExactComplex::i().scale(&rat(i as i64 + 1, 1))
            } else {
                ExactComplex::zero()
            }
        });
        build_period(vec![BigInt::one(), BigInt::one()], z, None, 128).unwrap()
    }

    #[test]
    fn projection_class_gives_the_coordinate_idempotent() {
        // on the product with periods i and 2i, the class −dx₁∧dx₃ induces
        // the projection onto the first factor
        let pav = diag_product();
        let mut coeffs = vec![BigRational::zero(); NSForm::pair_count(2)];
        coeffs[NSForm::pair_index(2, 0, 2)] = rat(-1, 1);
        let (f, fc, c) = idempotent_from_ns(&pav, &NSForm::new(2, coeffs)).unwrap();
        let expect = RatMat::from_fn(4, 4, |i, j| {
            if i == j && i % 2 == 0 { rat(1, 1) } else { rat(0, 1) }
        });
        assert_eq!(f, expect);
        assert!(c.is_none());
        let (a, b) = decompose_step(&pav, &f, &fc).unwrap();
        assert_eq!(a.sub.z[(0, 0)].eq_exact(&ExactComplex::i()), Some(true));
        assert_eq!(
            b.sub.z[(0, 0)].eq_exact(&ExactComplex::i().scale(&rat(2, 1))),
            Some(true)
        );
    }

    #[test]
    fn scaled_classes_are_renormalised() {
        // 5·ω has f² = 5f; the idempotent must come back rescaled with the
        // factor reported
        let pav = diag_product();
        let mut coeffs = vec![BigRational::zero(); NSForm::pair_count(2)];
        coeffs[NSForm::pair_index(2, 0, 2)] = rat(-5, 1);
        let (f, _, c) = idempotent_from_ns(&pav, &NSForm::new(2, coeffs)).unwrap();
        assert_eq!(c, Some(rat(5, 1)));
        assert_eq!(f.matmul(&f), f);
    }

    #[test]
    fn polarization_class_is_rejected_as_degenerate() {
        // E_ω = J_E gives f = identity: a class, but of full rank
        let pav = diag_product();
        let mut coeffs = vec![BigRational::zero(); NSForm::pair_count(2)];
        coeffs[NSForm::pair_index(2, 0, 2)] = rat(-1, 1);
        coeffs[NSForm::pair_index(2, 1, 3)] = rat(-1, 1);
        let err = idempotent_from_ns(&pav, &NSForm::new(2, coeffs)).unwrap_err();
        assert!(matches!(err, DecomposeError::DegenerateRank(4)));
    }

    #[test]
    fn non_member_and_non_idempotent_forms_are_rejected() {
        let pav = diag_product();
        let mut coeffs = vec![BigRational::zero(); NSForm::pair_count(2)];
        coeffs[NSForm::pair_index(2, 0, 1)] = rat(1, 1);
        assert!(matches!(
            idempotent_from_ns(&pav, &NSForm::new(2, coeffs)),
            Err(DecomposeError::NotMember)
        ));
    }
}
