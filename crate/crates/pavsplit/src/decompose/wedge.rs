//! Exterior algebra over the real covering coordinates and the wedge test
//! for line-bundle classes.
//!
//! With covering coordinates `z = Π·x` (rows `dz_k = Σ_m Π_{k,m} dx_m`), an
//! alternating 2-form `ω = Σ_{i<j} a_ij dx_i ∧ dx_j` on the lattice comes
//! from an element of the rational Néron–Severi space exactly when
//!
//! ```text
//! ω ∧ dz_1 ∧ … ∧ dz_g = 0   in ∧^{g+2}(ℂ^{2g})
//! ```
//!
//! This module provides sparse wedge arithmetic with exact complex scalars,
//! the membership test with its defect vector (the coefficients of the
//! product, all zero exactly when the form is a class), and the rational
//! solution space of the wedge condition, which is the coefficient-space
//! image of the Néron–Severi group and the natural candidate pool for
//! splitting forms.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::latalg::{rat_gauss, RatMat};
use crate::numerics::{pow2, rational_coordinates, ExactComplex};
use crate::pav::PolarizedAV;

use super::DecomposeError;

/// A sparse element of the exterior algebra on `n` symbols with exact
/// complex coefficients, keyed by strictly increasing index tuples.
#[derive(Clone, Debug)]
pub struct Exterior {
    pub n: usize,
    pub terms: BTreeMap<Vec<u8>, ExactComplex>,
}

impl Exterior {
    pub fn zero(n: usize) -> Self {
        Exterior { n, terms: BTreeMap::new() }
    }

    /// A single decomposable term `c · dx_{i₁} ∧ … ∧ dx_{i_k}` given with
    /// strictly increasing indices.
    pub fn term(n: usize, indices: &[u8], c: ExactComplex) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(indices.iter().all(|&i| (i as usize) < n));
        let mut e = Exterior::zero(n);
        if !c.is_zero() {
            e.terms.insert(indices.to_vec(), c);
        }
        e
    }

    /// A 1-form `Σ_m row[m] dx_m`.
    pub fn covector(n: usize, row: &[ExactComplex]) -> Self {
        let mut e = Exterior::zero(n);
        for (m, c) in row.iter().enumerate() {
            if !c.is_zero() {
                e.terms.insert(vec![m as u8], c.clone());
            }
        }
        e
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = match terms.remove(k) {
                Some(prev) => prev.add(c),
                None => c.clone(),
            };
            if !entry.is_zero() {
                terms.insert(k.clone(), entry);
            }
        }
        Exterior { n: self.n, terms }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Exterior::zero(self.n);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let Some((key, sign)) = merge_sign(ka, kb) else { continue };
                let mut c = ca.mul(cb);
                if sign < 0 {
                    c = c.neg();
                }
                let entry = match out.terms.remove(&key) {
                    Some(prev) => prev.add(&c),
                    None => c,
                };
                if !entry.is_zero() {
                    out.terms.insert(key, entry);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Merge two strictly increasing index tuples into one, returning the sign
/// of the permutation that sorts the concatenation, or `None` when they
/// share an index (the wedge vanishes).
fn merge_sign(a: &[u8], b: &[u8]) -> Option<(Vec<u8>, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut sign = 1i32;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] moves past the a.len()−i remaining a-indices
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, sign))
}

/// An alternating 2-form on the period lattice with rational coefficients,
/// stored as `a_ij` for `i < j` in lexicographic pair order.
#[derive(Clone, Debug, PartialEq)]
pub struct NSForm {
    pub g: usize,
    pub coeffs: Vec<BigRational>,
}

impl NSForm {
    pub fn new(g: usize, coeffs: Vec<BigRational>) -> Self {
        assert_eq!(coeffs.len(), Self::pair_count(g));
        NSForm { g, coeffs }
    }

    /// Number of coefficients: pairs from `2g` symbols.
    pub fn pair_count(g: usize) -> usize {
        g * (2 * g - 1)
    }

    /// Position of the pair `(i, j)`, `i < j`, both zero-based below `2g`.
    pub fn pair_index(g: usize, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < 2 * g);
        let n = 2 * g;
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    }

    /// The matrix of the form on lattice basis vectors, with the sign
    /// convention `E_ω(λ_i, λ_j) = −a_ij` for `i < j`.
    pub fn e_matrix(&self) -> RatMat {
        let n = 2 * self.g;
        RatMat::from_fn(n, n, |i, j| {
            if i < j {
                -self.coeffs[Self::pair_index(self.g, i, j)].clone()
            } else if j < i {
                self.coeffs[Self::pair_index(self.g, j, i)].clone()
            } else {
                BigRational::zero()
            }
        })
    }

    /// The 2-form `Σ a_ij dx_i ∧ dx_j` as an exterior-algebra element.
    pub fn exterior(&self) -> Exterior {
        let n = 2 * self.g;
        let mut e = Exterior::zero(n);
        let mut k = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                if !self.coeffs[k].is_zero() {
                    e.terms.insert(
                        vec![i as u8, j as u8],
                        ExactComplex::rat(self.coeffs[k].clone()),
                    );
                }
                k += 1;
            }
        }
        e
    }
}

/// Result of the wedge membership test.
pub struct NsCheck {
    pub member: bool,
    /// Coefficients of `ω ∧ dz_1 ∧ … ∧ dz_g` on `(g+2)`-fold basis products;
    /// empty exactly when the product is identically zero.
    pub defect: Vec<(Vec<u8>, ExactComplex)>,
}

/// Test whether a 2-form lies in the rational Néron–Severi space of `pav`
/// by wedging it with all period differentials.  Exact entries decide
/// exactly; floating entries vanish below `2^(−prec/2)`.
pub fn ns_membership(pav: &PolarizedAV, form: &NSForm) -> NsCheck {
    assert_eq!(form.g, pav.dim());
    let n = 2 * pav.dim();
    let period = pav.period();
    let mut acc = form.exterior();
    for k in 0..pav.dim() {
        let row: Vec<ExactComplex> = (0..n).map(|m| period[(k, m)].clone()).collect();
        acc = acc.wedge(&Exterior::covector(n, &row));
    }
    let member = acc
        .terms
        .values()
        .all(|c| scalar_vanishes(c, pav.prec));
    NsCheck { member, defect: acc.terms.into_iter().collect() }
}

pub(crate) fn scalar_vanishes(c: &ExactComplex, prec: u32) -> bool {
    if c.is_exact() {
        return c.is_zero();
    }
    c.eval(prec).abs() <= pow2(-(prec as i64) / 2, 64)
}

/// Rational solution space of the wedge condition: a basis of the
/// coefficient vectors `a` with `ω_a ∧ dz_1 ∧ … ∧ dz_g = 0`.  This is the
/// image of the Néron–Severi group in coefficient space.  `None` when the
/// period entries cannot be split over a common ℚ-basis (floating point or
/// an unsupported field mix).
pub fn ns_kernel(pav: &PolarizedAV) -> Option<Vec<Vec<BigRational>>> {
    let g = pav.dim();
    let n = 2 * g;
    let period = pav.period();
    // Ψ = dz_1 ∧ … ∧ dz_g once, then one wedge per coefficient slot
    let mut psi = Exterior::term(n, &[], ExactComplex::one());
    for k in 0..g {
        let row: Vec<ExactComplex> = (0..n).map(|m| period[(k, m)].clone()).collect();
        psi = psi.wedge(&Exterior::covector(n, &row));
    }
    let mut columns: Vec<BTreeMap<Vec<u8>, ExactComplex>> = Vec::new();
    let mut keys: Vec<Vec<u8>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w = Exterior::term(n, &[i as u8, j as u8], ExactComplex::one()).wedge(&psi);
            for k in w.terms.keys() {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
            columns.push(w.terms);
        }
    }
    keys.sort();
    // flatten every coefficient into one list so the ℚ-basis is shared
    let mut flat: Vec<ExactComplex> = Vec::new();
    for col in &columns {
        for key in &keys {
            flat.push(col.get(key).cloned().unwrap_or_else(ExactComplex::zero));
        }
    }
    let coords = rational_coordinates(&flat)?;
    let deg = coords.first().map_or(1, |r| r.len());
    let rows = keys.len() * deg;
    let cols = columns.len();
    let a = RatMat::from_fn(rows, cols, |r, c| {
        let key_idx = r / deg;
        let basis_idx = r % deg;
        coords[c * keys.len() + key_idx][basis_idx].clone()
    });
    let sol = rat_gauss(&a, &RatMat::zero(rows, 1));
    let mut basis = Vec::with_capacity(sol.kernel.cols);
    for c in 0..sol.kernel.cols {
        basis.push((0..cols).map(|r| sol.kernel[(r, c)].clone()).collect());
    }
    Some(basis)
}

/// Convenience: membership defect restated as a single error for callers
/// that require membership.
pub fn require_member(pav: &PolarizedAV, form: &NSForm) -> Result<(), DecomposeError> {
    if ns_membership(pav, form).member {
        Ok(())
    } else {
        Err(DecomposeError::NotMember)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latalg::CMat;
    use crate::pav::build_period;
    use num_bigint::BigInt;
    use num_traits::One;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn diag_product() -> PolarizedAV {
        // principal product with periods i and 2i on the diagonal
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
    fn wedge_is_anticommutative_and_kills_repeats() {
        let a = Exterior::term(4, &[0], ExactComplex::one());
        let b = Exterior::term(4, &[2], ExactComplex::from_int(3));
        let ab = a.wedge(&b);
        let ba = b.wedge(&a);
        assert_eq!(ab.terms[&vec![0u8, 2]].as_rational(), Some(rat(3, 1)));
        assert_eq!(ba.terms[&vec![0u8, 2]].as_rational(), Some(rat(-3, 1)));
        assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn merge_sign_counts_transpositions() {
        // dx₂∧dx₃ ∧ dx₀∧dx₁ = +dx₀∧dx₁∧dx₂∧dx₃ (two indices cross two others)
        assert_eq!(merge_sign(&[2, 3], &[0, 1]), Some((vec![0, 1, 2, 3], 1)));
        // dx₁∧dx₃ ∧ dx₀ : dx₀ crosses two, sign +; as dx₀ ∧ (dx₁∧dx₃) sign +
        assert_eq!(merge_sign(&[1, 3], &[0]), Some((vec![0, 1, 3], 1)));
        // dx₁ ∧ dx₀ = −dx₀∧dx₁
        assert_eq!(merge_sign(&[1], &[0]), Some((vec![0, 1], -1)));
        assert_eq!(merge_sign(&[0, 2], &[2]), None);
    }

    #[test]
    fn projection_form_is_a_class_on_the_diagonal_product() {
        // −dx₁∧dx₃ pairs the first factor's coordinates only, so it comes
        // from a line bundle on the product
        let pav = diag_product();
        let mut coeffs = vec![BigRational::zero(); NSForm::pair_count(2)];
        coeffs[NSForm::pair_index(2, 0, 2)] = rat(-1, 1);
        let form = NSForm::new(2, coeffs);
        let check = ns_membership(&pav, &form);
        assert!(check.member);
        assert!(check.defect.is_empty());
    }

    #[test]
    fn skew_form_on_the_product_has_nonzero_defect() {
        // dx₁∧dx₂ mixes the factors incompatibly with the complex structure
        let pav = diag_product();
        let mut coeffs = vec![BigRational::zero(); NSForm::pair_count(2)];
        coeffs[NSForm::pair_index(2, 0, 1)] = rat(1, 1);
        let form = NSForm::new(2, coeffs);
        let check = ns_membership(&pav, &form);
        assert!(!check.member);
        assert!(!check.defect.is_empty());
    }

    #[test]
    fn membership_defect_matches_determinant_expansion() {
        // brute-force oracle: the coefficient of dx_S in ω∧dz₁∧…∧dz_g is
        // Σ_{p<q ⊂ S} ±a_pq · det Π[:, S∖{p,q}], the sign counting the
        // positions of p and q inside S
        let pav = {
            let i = ExactComplex::i();
            let z = CMat::from_fn(2, 2, |r, c| match (r, c) {
                (0, 0) => i.scale(&rat(3, 2)),
                (1, 1) => i.scale(&rat(2, 1)),
                _ => ExactComplex::rat(rat(1, 3)),
            });
            build_period(vec![BigInt::one(), BigInt::from(2)], z, None, 128).unwrap()
        };
        let g = 2;
        let n = 2 * g;
        let coeffs: Vec<BigRational> =
            (0..NSForm::pair_count(g)).map(|k| rat(k as i64 - 2, 3)).collect();
        let form = NSForm::new(g, coeffs.clone());
        let check = ns_membership(&pav, &form);
        let period = pav.period();

        // 2×2 exact determinant of selected period columns
        let det2 = |c0: usize, c1: usize| {
            period[(0, c0)]
                .mul(&period[(1, c1)])
                .sub(&period[(0, c1)].mul(&period[(1, c0)]))
        };
        for s in [[0usize, 1, 2, 3]] {
            let mut expect = ExactComplex::zero();
            for pi in 0..n {
                for qi in pi + 1..n {
                    let (p, q) = (s[pi], s[qi]);
                    let rest: Vec<usize> =
                        s.iter().copied().filter(|&x| x != p && x != q).collect();
                    let a = coeffs[NSForm::pair_index(g, p, q)].clone();
                    // sign of moving dx_p∧dx_q to the front of dx_S
                    let sign = if (pi + qi - 1) % 2 == 0 { 1 } else { -1 };
                    let mut t = ExactComplex::rat(a).mul(&det2(rest[0], rest[1]));
                    if sign < 0 {
                        t = t.neg();
                    }
                    expect = expect.add(&t);
                }
            }
            let got = check
                .defect
                .iter()
                .find(|(k, _)| k.iter().map(|&x| x as usize).eq(s.iter().copied()))
                .map(|(_, c)| c.clone())
                .unwrap_or_else(ExactComplex::zero);
            assert_eq!(got.eq_exact(&expect), Some(true));
        }
    }

    #[test]
    fn kernel_of_the_product_contains_both_projections_and_excludes_junk() {
        let pav = diag_product();
        let basis = ns_kernel(&pav).unwrap();
        // membership of every basis vector
        for b in &basis {
            assert!(ns_membership(&pav, &NSForm::new(2, b.clone())).member);
        }
        // the two projection classes must lie in the span: check by solving
        let dim = basis.len();
        let a = RatMat::from_fn(6, dim, |r, c| basis[c][r].clone());
        for target_pair in [(0usize, 2usize), (1usize, 3usize)] {
            let mut t = RatMat::zero(6, 1);
            t[(NSForm::pair_index(2, target_pair.0, target_pair.1), 0)] = rat(1, 1);
            assert!(rat_gauss(&a, &t).particular.is_some());
        }
        // a non-member stays outside
        let mut t = RatMat::zero(6, 1);
        t[(NSForm::pair_index(2, 0, 1), 0)] = rat(1, 1);
        assert!(rat_gauss(&a, &t).particular.is_none());
    }
}
