//! Group actions on polarized abelian varieties: averaging idempotents,
//! restriction to an invariant subvariety, and fixed Riemann matrices.
//!
//! A finite group acting on `A = V/L` is given here by its rational
//! representation `ρ_r : G → Sp^E(2g, ℤ)` on a symplectic basis.  The
//! averaging idempotent `p_H = (1/|H|)·Σ_{h∈H} ρ_r(h)` of a subgroup is a
//! rational endomorphism whose image is an invariant abelian subvariety.
//!
//! Given a saturated symplectic basis `P` (columns, `2g × 2h`) of an
//! invariant sublattice with induced type `D`, every `ρ_r(g)` descends to
//! the unique `ρ_{r,B}(g) ∈ Sp^D(2h, ℤ)` with
//! `ρ_r(g)·P = P·ρ_{r,B}(g)`.  Writing `ρ_{r,B}(g) = [[α, μ], [γ, δ]]` in
//! `h×h` blocks, a Riemann matrix `Z_B ∈ H_h` of the subvariety is
//! compatible with the restricted action exactly when, for every generator,
//!
//! ```text
//! Z_B·γ·D⁻¹·Z_B + D·α·D⁻¹·Z_B − Z_B·δ − D·μ = 0 ,
//! ```
//!
//! and the restricted analytic representation is then
//! `ρ_{a,B}(g) = (D·α + Z_B·γ)·D⁻¹`.
//!
//! The fixed-point solver attacks the simultaneous quadratic matrix
//! equations over symmetric `Z_B` numerically: damped Newton iteration on
//! the flattened `h(h+1)/2` unknowns from a deterministic battery of
//! starting points, followed by algebraic recognition of each entry and an
//! exact re-verification of the equation.  Positive-dimensional solution
//! loci (which do occur; the constraint is empty for a central action) are
//! detected through the Jacobian rank and flagged as a family rather than
//! silently sampled.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::latalg::{
    int_to_cmat, int_to_rat, rat_is_integral, rat_to_int, solve_exact, standard_symplectic_gram,
    CMat, FMat, IntMat, LatAlgError, RatMat,
};
use crate::numerics::{pow2, recognize_algebraic, ExactComplex, CF, F};
use crate::pav::{build_period, cmat_to_f, PavError};

#[derive(Debug, Error)]
pub enum GactionError {
    /// A generator does not preserve the polarization form.
    #[error("generator {0} is not symplectic for the given type")]
    NotSymplectic(usize),
    /// The element list is not closed under multiplication.
    #[error("element list is not closed under products")]
    NotClosed,
    /// A generator does not map the sublattice into itself.
    #[error("generator {0} does not stabilize the sublattice")]
    NotStable(usize),
    /// The multi-start Newton budget produced no point in the Siegel space.
    #[error("no fixed Riemann matrix found within the search budget")]
    NoSolution,
    /// Fixed-point solving is gated to small dimensions.
    #[error("fixed-point solver supports h ≤ 6, got h = {0}")]
    TooLarge(usize),
    /// The supplied Riemann matrix fails the compatibility equation.
    #[error("Riemann matrix is not fixed by generator {0}")]
    NotFixed(usize),
    #[error(transparent)]
    Pav(#[from] PavError),
    #[error(transparent)]
    Lat(#[from] LatAlgError),
}

/// An integral symplectic representation of a group, given by generators.
#[derive(Clone, Debug)]
pub struct SymplecticRep {
    /// Polarization type defining the form `J_E` the group preserves.
    pub etype: Vec<BigInt>,
    /// Generator matrices in `Sp^E(2g, ℤ)`.
    pub generators: Vec<IntMat>,
}

impl SymplecticRep {
    /// Validate that every generator satisfies `Nᵗ·J_E·N = J_E` exactly.
    pub fn new(etype: Vec<BigInt>, generators: Vec<IntMat>) -> Result<Self, GactionError> {
        let j = standard_symplectic_gram(&etype);
        let n2 = 2 * etype.len();
        for (k, n) in generators.iter().enumerate() {
            if n.rows != n2 || n.cols != n2 || n.transpose().matmul(&j).matmul(n) != j {
                return Err(GactionError::NotSymplectic(k));
            }
        }
        Ok(SymplecticRep { etype, generators })
    }

    pub fn dim(&self) -> usize {
        self.etype.len()
    }
}

/// The restriction of a symplectic representation to an invariant
/// subvariety, expressed in a symplectic basis of the sublattice.
#[derive(Clone, Debug)]
pub struct RestrictedRep {
    /// Induced polarization type `D` on the subvariety.
    pub dtype: Vec<BigInt>,
    /// `ρ_r(i_B)`: the symplectic sublattice basis, `2g × 2h` columns.
    pub embedding: IntMat,
    /// Restricted generators, each in `Sp^D(2h, ℤ)`.
    pub generators: Vec<IntMat>,
}

impl RestrictedRep {
    /// Assemble from parts, validating symplectic membership of every
    /// generator (the embedding is taken on trust; `restrict_action`
    /// produces consistent triples).
    pub fn new(
        dtype: Vec<BigInt>,
        embedding: IntMat,
        generators: Vec<IntMat>,
    ) -> Result<Self, GactionError> {
        let j = standard_symplectic_gram(&dtype);
        let n2 = 2 * dtype.len();
        for (k, n) in generators.iter().enumerate() {
            if n.rows != n2 || n.cols != n2 || n.transpose().matmul(&j).matmul(n) != j {
                return Err(GactionError::NotSymplectic(k));
            }
        }
        Ok(RestrictedRep {
            dtype,
            embedding,
            generators,
        })
    }

    pub fn dim(&self) -> usize {
        self.dtype.len()
    }
}

/// Averaging idempotent `(1/n)·Σ elements` of a finite matrix group given
/// as a complete element list (closure under products is verified).
pub fn subgroup_idempotent(elements: &[IntMat]) -> Result<RatMat, GactionError> {
    if elements.is_empty() {
        return Err(GactionError::NotClosed);
    }
    let n = elements[0].rows;
    if elements.iter().any(|m| m.rows != n || m.cols != n) {
        return Err(GactionError::NotClosed);
    }
    let key = |m: &IntMat| -> Vec<BigInt> {
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].clone())
            .collect()
    };
    let table: std::collections::HashSet<Vec<BigInt>> = elements.iter().map(key).collect();
    if table.len() != elements.len() {
        return Err(GactionError::NotClosed); // repeated elements
    }
    for a in elements {
        for b in elements {
            if !table.contains(&key(&a.matmul(b))) {
                return Err(GactionError::NotClosed);
            }
        }
    }
    let order = BigInt::from(elements.len());
    let mut sum = IntMat::zero(n, n);
    for m in elements {
        sum = sum.add(m);
    }
    let p = RatMat::from_fn(n, n, |i, j| {
        BigRational::new(sum[(i, j)].clone(), order.clone())
    });
    debug_assert_eq!(p.matmul(&p), p, "average of a closed set must be idempotent");
    Ok(p)
}

/// Restrict every generator to an invariant sublattice: solve
/// `ρ_r(g)·P = P·X` exactly and verify `X ∈ Sp^D(2h, ℤ)`.
///
/// `p` must be a saturated symplectic basis (columns) with induced type
/// `dtype`, e.g. from `subvariety::induced_polarization`.  A generator that
/// moves the sublattice off itself yields `NotStable`.
pub fn restrict_action(
    rep: &SymplecticRep,
    p: &IntMat,
    dtype: &[BigInt],
) -> Result<RestrictedRep, GactionError> {
    let g2 = 2 * rep.dim();
    let h2 = p.cols;
    assert_eq!(p.rows, g2, "basis lives in the ambient lattice");
    assert_eq!(h2, 2 * dtype.len(), "basis must pair off");
    let pr = int_to_rat(p);
    let jd = standard_symplectic_gram(dtype);
    let mut restricted = Vec::with_capacity(rep.generators.len());
    for (k, n) in rep.generators.iter().enumerate() {
        let rhs = int_to_rat(&n.matmul(p));
        let x = solve_exact(&pr, &rhs).map_err(|_| GactionError::NotStable(k))?;
        if !rat_is_integral(&x) {
            return Err(GactionError::NotStable(k));
        }
        let xi = rat_to_int(&x);
        if xi.transpose().matmul(&jd).matmul(&xi) != jd {
            return Err(GactionError::NotSymplectic(k));
        }
        debug_assert_eq!(n.matmul(p), p.matmul(&xi));
        restricted.push(xi);
    }
    Ok(RestrictedRep {
        dtype: dtype.to_vec(),
        embedding: p.clone(),
        generators: restricted,
    })
}

/// `h×h` blocks `(α, μ, γ, δ)` of a `2h×2h` matrix `[[α, μ], [γ, δ]]`.
fn blocks(n: &IntMat, h: usize) -> (IntMat, IntMat, IntMat, IntMat) {
    let cut = |ri: usize, ci: usize| IntMat::from_fn(h, h, |i, j| n[(ri + i, ci + j)].clone());
    (cut(0, 0), cut(0, h), cut(h, 0), cut(h, h))
}

/// Multiply row `i` by `d_i`.
fn scale_rows_int(m: &IntMat, d: &[BigInt]) -> CMat {
    CMat::from_fn(m.rows, m.cols, |i, j| {
        ExactComplex::from_bigint(&(&m[(i, j)] * &d[i]))
    })
}

/// Divide column `j` by `d_j`.
fn scale_cols_inv(m: &CMat, d: &[BigInt]) -> CMat {
    CMat::from_fn(m.rows, m.cols, |i, j| {
        m[(i, j)].scale(&BigRational::new(BigInt::one(), d[j].clone()))
    })
}

/// Left-hand side of the compatibility equation
/// `Z·γ·D⁻¹·Z + D·α·D⁻¹·Z − Z·δ − D·μ` for one restricted generator.
pub fn fixed_point_lhs(dtype: &[BigInt], z: &CMat, n: &IntMat) -> CMat {
    let h = dtype.len();
    let (a, m, c, d) = blocks(n, h);
    let gdi = scale_cols_inv(&int_to_cmat(&c), dtype);
    let adi = scale_cols_inv(&scale_rows_int(&a, dtype), dtype);
    let dmu = scale_rows_int(&m, dtype);
    z.matmul(&gdi)
        .matmul(z)
        .add(&adi.matmul(z))
        .sub(&z.matmul(&int_to_cmat(&d)))
        .sub(&dmu)
}

/// Does every entry vanish — exactly for exact entries, below
/// `2^(−prec/2)` for numeric ones?
fn cmat_vanishes(m: &CMat, prec: u32) -> bool {
    let tol = pow2(-(prec as i64) / 2, 64);
    (0..m.rows).all(|i| {
        (0..m.cols).all(|j| {
            let e = &m[(i, j)];
            if e.is_exact() {
                e.is_zero()
            } else {
                e.eval(prec).abs() <= tol
            }
        })
    })
}

/// One solution of the fixed-point equations.
#[derive(Clone, Debug)]
pub struct FixedPoint {
    /// Symmetric `h×h` Riemann matrix in `H_h`; entries are exact when
    /// `recognized` holds, high-precision floats otherwise.
    pub z: CMat,
    /// All entries recognized algebraically and the equation re-verified
    /// exactly.
    pub recognized: bool,
    /// Worst residual of the compatibility equation over all generators.
    pub residual: F,
}

/// Outcome of the fixed-point search.
#[derive(Clone, Debug)]
pub struct FixedRiemann {
    /// Distinct converged solutions, sorted by numeric value.
    pub solutions: Vec<FixedPoint>,
    /// The solution locus has positive dimension (trivial or central
    /// actions, or a genuinely positive-dimensional fixed family).
    pub family: bool,
    /// Observed dimension of the solution locus at the found points
    /// (`h(h+1)/2` minus the Jacobian rank); 0 for isolated solutions.
    pub family_dim: usize,
}

// Precomputed float coefficient matrices of one generator's equation.
struct GenPre {
    gdi: FMat,
    adi: FMat,
    delta: FMat,
    dmu: FMat,
}

fn gen_pre(dtype: &[BigInt], n: &IntMat, prec: u32) -> GenPre {
    let h = dtype.len();
    let (a, m, c, d) = blocks(n, h);
    GenPre {
        gdi: cmat_to_f(&scale_cols_inv(&int_to_cmat(&c), dtype), prec),
        adi: cmat_to_f(&scale_cols_inv(&scale_rows_int(&a, dtype), dtype), prec),
        delta: cmat_to_f(&int_to_cmat(&d), prec),
        dmu: cmat_to_f(&scale_rows_int(&m, dtype), prec),
    }
}

fn lhs_f(z: &FMat, p: &GenPre) -> FMat {
    z.matmul(&p.gdi)
        .matmul(z)
        .add(&p.adi.matmul(z))
        .sub(&z.matmul(&p.delta))
        .sub(&p.dmu)
}

/// Stack the entries of the equation for all generators into one vector.
fn residual_vec(z: &FMat, pres: &[GenPre]) -> Vec<CF> {
    let mut out = Vec::with_capacity(pres.len() * z.rows * z.cols);
    for p in pres {
        let f = lhs_f(z, p);
        for i in 0..f.rows {
            for j in 0..f.cols {
                out.push(f[(i, j)].clone());
            }
        }
    }
    out
}

fn norm_inf(v: &[CF]) -> F {
    let mut worst = F::ZERO;
    for e in v {
        let a = e.abs();
        if a > worst {
            worst = a;
        }
    }
    worst
}

/// Symmetric matrix from the flattened upper triangle (row-major, i ≤ j).
fn unflatten(x: &[CF], h: usize, prec: u32) -> FMat {
    let mut z = FMat::from_fn(h, h, |_, _| CF::zero(prec));
    let mut k = 0;
    for i in 0..h {
        for j in i..h {
            z[(i, j)] = x[k].clone();
            z[(j, i)] = x[k].clone();
            k += 1;
        }
    }
    z
}

/// Dense complex linear solve with partial pivoting; `None` when a pivot
/// collapses numerically.
fn solve_dense_cf(mut a: Vec<Vec<CF>>, mut b: Vec<CF>, prec: u32) -> Option<Vec<CF>> {
    let n = b.len();
    let tiny = pow2(-(prec as i64) + 16, 64);
    for col in 0..n {
        let mut best = col;
        let mut best_abs = a[col][col].abs();
        for r in col + 1..n {
            let ab = a[r][col].abs();
            if ab > best_abs {
                best_abs = ab;
                best = r;
            }
        }
        if best_abs <= tiny {
            return None;
        }
        a.swap(col, best);
        b.swap(col, best);
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if a[r][col].is_exact_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for c in col..n {
                let t = &a[col][c] * &factor;
                a[r][c] = &a[r][c] - &t;
            }
            let t = &b[col] * &factor;
            b[r] = &b[r] - &t;
        }
    }
    for col in (0..n).rev() {
        let mut acc = b[col].clone();
        for c in col + 1..n {
            let t = &a[col][c] * &b[c];
            acc = &acc - &t;
        }
        b[col] = &acc * &a[col][col].recip();
    }
    Some(b)
}

/// Jacobian of the stacked equations with respect to the flattened
/// symmetric unknowns, evaluated at `z`.
fn jacobian(z: &FMat, pres: &[GenPre], prec: u32) -> Vec<Vec<CF>> {
    let h = z.rows;
    let v = h * (h + 1) / 2;
    let n_eq = pres.len() * h * h;
    // per generator: Z·(γD⁻¹) and (γD⁻¹)·Z reused across directions
    let zg: Vec<FMat> = pres.iter().map(|p| z.matmul(&p.gdi)).collect();
    let gz: Vec<FMat> = pres.iter().map(|p| p.gdi.matmul(z)).collect();
    let mut cols: Vec<Vec<CF>> = Vec::with_capacity(v);
    for u in 0..h {
        for w in u..h {
            let dir = FMat::from_fn(h, h, |i, j| {
                if (i, j) == (u, w) || (i, j) == (w, u) {
                    CF::one(prec)
                } else {
                    CF::zero(prec)
                }
            });
            let mut col = Vec::with_capacity(n_eq);
            for (k, p) in pres.iter().enumerate() {
                let df = dir
                    .matmul(&gz[k])
                    .add(&zg[k].matmul(&dir))
                    .add(&p.adi.matmul(&dir))
                    .sub(&dir.matmul(&p.delta));
                for i in 0..h {
                    for j in 0..h {
                        col.push(df[(i, j)].clone());
                    }
                }
            }
            cols.push(col);
        }
    }
    cols
}

/// Numeric column rank of the Jacobian (columns as produced by
/// [`jacobian`]) with a relative pivot threshold.
fn jacobian_rank(cols: &[Vec<CF>], prec: u32) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let n_eq = cols[0].len();
    let mut m: Vec<Vec<CF>> = (0..n_eq)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let mut scale = F::ZERO;
    for row in &m {
        for e in row {
            let a = e.abs();
            if a > scale {
                scale = a;
            }
        }
    }
    if scale == F::ZERO {
        return 0;
    }
    let thresh = scale * pow2(-(prec as i64) / 4, 64);
    let (rows, ncols) = (m.len(), cols.len());
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        let mut best = row;
        let mut best_abs = F::ZERO;
        for r in row..rows {
            let a = m[r][col].abs();
            if a > best_abs {
                best_abs = a;
                best = r;
            }
        }
        if best_abs <= thresh {
            continue;
        }
        m.swap(row, best);
        let inv = m[row][col].recip();
        for r in row + 1..rows {
            if m[r][col].is_exact_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..ncols {
                let t = &m[row][c] * &factor;
                m[r][c] = &m[r][c] - &t;
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Damped Newton iteration from one starting point; returns a converged
/// symmetric matrix when the residual drops below `tol`.
fn newton_run(start: Vec<CF>, pres: &[GenPre], h: usize, prec: u32, tol: &F) -> Option<FMat> {
    let v = h * (h + 1) / 2;
    let mut x = start;
    let mut z = unflatten(&x, h, prec);
    let mut r = residual_vec(&z, pres);
    let mut rn = norm_inf(&r);
    // once below `tol` the point counts as converged, but keep polishing
    // down to the precision noise floor so that later algebraic recognition
    // sees clean coordinates
    let floor = pow2(-(prec as i64) + 24, 64);
    for _ in 0..60 {
        if rn <= floor {
            break;
        }
        let jcols = jacobian(&z, pres, prec);
        // normal equations Jᴴ·J·δ = −Jᴴ·r
        let mut jhj = vec![vec![CF::zero(prec); v]; v];
        let mut jhr = vec![CF::zero(prec); v];
        for (aci, ac) in jcols.iter().enumerate() {
            for (bci, bc) in jcols.iter().enumerate().skip(aci) {
                let mut acc = CF::zero(prec);
                for (ae, be) in ac.iter().zip(bc) {
                    acc = &acc + &(&ae.conj() * be);
                }
                jhj[bci][aci] = acc.conj();
                jhj[aci][bci] = acc;
            }
            let mut acc = CF::zero(prec);
            for (ae, re) in ac.iter().zip(&r) {
                acc = &acc + &(&ae.conj() * re);
            }
            jhr[aci] = -&acc;
        }
        let delta = solve_dense_cf(jhj, jhr, prec)?;
        // backtracking line search on the residual norm
        let mut step = F::ONE;
        let mut improved = false;
        for _ in 0..10 {
            let xt: Vec<CF> = x
                .iter()
                .zip(&delta)
                .map(|(xi, di)| xi + &di.mul_f(&step))
                .collect();
            let zt = unflatten(&xt, h, prec);
            let rt = residual_vec(&zt, pres);
            let rtn = norm_inf(&rt);
            if rtn < rn || rtn <= *tol {
                x = xt;
                z = zt;
                r = rt;
                rn = rtn;
                improved = true;
                break;
            }
            step = step / F::from(2);
        }
        if !improved {
            break; // stagnated: accept only if already converged
        }
    }
    if rn <= *tol {
        Some(z)
    } else {
        None
    }
}

/// Deterministic battery of starting points: `i·I` first, then seeded
/// pseudo-random symmetric matrices with dominant imaginary diagonal.
fn newton_starts(h: usize, count: usize, seed: u64, prec: u32) -> Vec<Vec<CF>> {
    let v = h * (h + 1) / 2;
    let mut starts = Vec::with_capacity(count);
    let mut first = Vec::with_capacity(v);
    for i in 0..h {
        for j in i..h {
            first.push(if i == j {
                CF::from_f64s(0.0, 1.0, prec)
            } else {
                CF::zero(prec)
            });
        }
    }
    starts.push(first);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = move || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    while starts.len() < count {
        let mut x = Vec::with_capacity(v);
        for i in 0..h {
            for j in i..h {
                let (re, im) = if i == j {
                    (unit() - 0.5, 0.3 + 2.7 * unit())
                } else {
                    (0.4 * unit() - 0.2, 0.4 * unit() - 0.2)
                };
                x.push(CF::from_f64s(re, im, prec));
            }
        }
        starts.push(x);
    }
    starts
}

/// Solve the fixed-point equations of a restricted action over `Z_B ∈ H_h`.
///
/// Returns every distinct solution found by the multi-start search, with
/// entries recognized as exact algebraic numbers whenever possible (and the
/// equation then re-verified exactly).  When the solution locus has
/// positive dimension — detected by a rank-deficient Jacobian, e.g. for a
/// trivial or central action — the result is flagged as a family and the
/// points are samples, not an exhaustive list.
pub fn fixed_riemann(
    rep: &RestrictedRep,
    prec: u32,
    seed: u64,
) -> Result<FixedRiemann, GactionError> {
    let h = rep.dim();
    if h > 6 {
        return Err(GactionError::TooLarge(h));
    }
    let v = h * (h + 1) / 2;
    let ident = IntMat::identity(2 * h);
    let active: Vec<&IntMat> = rep.generators.iter().filter(|n| **n != ident).collect();
    if active.is_empty() {
        // trivial action: the whole Siegel space is fixed; report one
        // canonical sample point
        let z = CMat::from_fn(h, h, |i, j| {
            if i == j {
                ExactComplex::i()
            } else {
                ExactComplex::zero()
            }
        });
        return Ok(FixedRiemann {
            solutions: vec![FixedPoint {
                z,
                recognized: true,
                residual: F::ZERO,
            }],
            family: true,
            family_dim: v,
        });
    }

    let pres: Vec<GenPre> = active.iter().map(|n| gen_pre(&rep.dtype, n, prec)).collect();
    let tol = pow2(-(prec as i64) / 2 - 8, 64);
    let mut converged: Vec<FMat> = Vec::new();
    for start in newton_starts(h, 32, seed, prec) {
        if let Some(z) = newton_run(start, &pres, h, prec, &tol) {
            let fresh = converged
                .iter()
                .all(|seen| fmat_dist(seen, &z) > pow2(-66, 64));
            if fresh {
                converged.push(z);
            }
        }
    }

    // the Jacobian rank at the converged points decides between isolated
    // solutions and a positive-dimensional family
    let mut min_rank = v;
    for z in &converged {
        let rank = jacobian_rank(&jacobian(z, &pres, prec), prec);
        if rank < min_rank {
            min_rank = rank;
        }
    }
    let family = min_rank < v;

    let mut solutions: Vec<(Vec<(F, F)>, FixedPoint)> = Vec::new();
    for z in &converged {
        if family && solutions.len() >= 4 {
            break; // family samples are arbitrary; a handful suffices
        }
        // recognition only makes sense for isolated points: coordinates of
        // a random family sample are not small algebraic numbers
        let cand = if family {
            None
        } else {
            recognize_and_verify(z, rep, &active, prec)
        };
        let (zc, recognized) = match cand {
            Some(exact) => (exact, true),
            None => (
                CMat::from_fn(h, h, |i, j| ExactComplex::dec(z[(i, j)].clone())),
                false,
            ),
        };
        // membership in the Siegel space, checked once and exactly
        if build_period(rep.dtype.clone(), zc.clone(), None, prec).is_err() {
            continue;
        }
        let mut residual = F::ZERO;
        for n in &active {
            let r = fixed_point_lhs(&rep.dtype, &zc, n);
            for i in 0..h {
                for j in 0..h {
                    let e = &r[(i, j)];
                    if e.is_zero() {
                        continue;
                    }
                    let a = e.eval(prec).abs();
                    if a > residual {
                        residual = a;
                    }
                }
            }
        }
        let key: Vec<(F, F)> = {
            let mut k = Vec::with_capacity(v);
            for i in 0..h {
                for j in i..h {
                    let e = zc[(i, j)].eval(64);
                    k.push((e.re.clone(), e.im.clone()));
                }
            }
            k
        };
        solutions.push((
            key,
            FixedPoint {
                z: zc,
                recognized,
                residual,
            },
        ));
    }
    if solutions.is_empty() {
        return Err(GactionError::NoSolution);
    }
    solutions.sort_by(|(a, _), (b, _)| {
        for ((ar, ai), (br, bi)) in a.iter().zip(b) {
            match ar.partial_cmp(br).unwrap().then(ai.partial_cmp(bi).unwrap()) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok(FixedRiemann {
        solutions: solutions.into_iter().map(|(_, s)| s).collect(),
        family,
        family_dim: v - min_rank,
    })
}

fn fmat_dist(a: &FMat, b: &FMat) -> F {
    let mut worst = F::ZERO;
    for i in 0..a.rows {
        for j in 0..a.cols {
            let d = a[(i, j)].dist(&b[(i, j)]);
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Try to recognize every entry of a numeric solution as an exact algebraic
/// number; accept only if the fixed-point equation then vanishes exactly.
fn recognize_and_verify(
    z: &FMat,
    rep: &RestrictedRep,
    active: &[&IntMat],
    prec: u32,
) -> Option<CMat> {
    let h = z.rows;
    let mut entries = vec![vec![ExactComplex::zero(); h]; h];
    for i in 0..h {
        for j in i..h {
            let e = recognize_algebraic(&z[(i, j)], 4, prec)?;
            entries[i][j] = e.clone();
            entries[j][i] = e;
        }
    }
    let zc = CMat::from_fn(h, h, |i, j| entries[i][j].clone());
    for n in active {
        if !cmat_vanishes(&fixed_point_lhs(&rep.dtype, &zc, n), prec) {
            return None;
        }
    }
    Some(zc)
}

/// Analytic matrices `ρ_{a,B}(g) = (D·α + Z_B·γ)·D⁻¹` of the restricted
/// action, one per generator; `z_b` must satisfy the fixed-point equation.
pub fn restricted_analytic(
    rep: &RestrictedRep,
    z_b: &CMat,
    prec: u32,
) -> Result<Vec<CMat>, GactionError> {
    let h = rep.dim();
    assert_eq!((z_b.rows, z_b.cols), (h, h));
    for (k, n) in rep.generators.iter().enumerate() {
        if !cmat_vanishes(&fixed_point_lhs(&rep.dtype, z_b, n), prec) {
            return Err(GactionError::NotFixed(k));
        }
    }
    let mut out = Vec::with_capacity(rep.generators.len());
    for n in &rep.generators {
        let (a, _, c, _) = blocks(n, h);
        let da = scale_rows_int(&a, &rep.dtype);
        let zg = z_b.matmul(&int_to_cmat(&c));
        out.push(scale_cols_inv(&da.add(&zg), &rep.dtype));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pav::hurwitz_residual;

    fn im(rows: Vec<Vec<i64>>) -> IntMat {
        IntMat::from_fn(rows.len(), rows[0].len(), |i, j| BigInt::from(rows[i][j]))
    }

    fn principal(n: usize) -> Vec<BigInt> {
        vec![BigInt::one(); n]
    }

    /// The two printed restricted generators of the order-100 quotient
    /// action on the genus-101 invariant surface (stored transposed in the
    /// source, hence the transpose here).
    fn surface_generators() -> (IntMat, IntMat) {
        let a = im(vec![
            vec![0, 0, 1, 1],
            vec![1, -1, -1, 1],
            vec![-1, 0, 1, 0],
            vec![1, -1, -1, 0],
        ])
        .transpose();
        let b = im(vec![
            vec![-1, 1, 1, -1],
            vec![0, 0, 1, 1],
            vec![-1, 1, 0, -1],
            vec![0, -1, 0, 1],
        ])
        .transpose();
        (a, b)
    }

    fn swap_4x4() -> IntMat {
        im(vec![
            vec![0, 1, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 1, 0],
        ])
    }

    #[test]
    fn printed_generators_are_symplectic_and_pin_the_riemann_matrix() {
        let (a, b) = surface_generators();
        let rep = RestrictedRep::new(principal(2), IntMat::identity(4), vec![a, b]).unwrap();
        let fixed = fixed_riemann(&rep, 256, 0x5EED).unwrap();
        assert!(!fixed.family, "the fixed matrix is isolated");
        // the known fixed point: [[(1+i√2)/2, −1/2], [−1/2, (1+i√2)/2]]
        let diag = ExactComplex::one()
            .add(&ExactComplex::sqrt_int(-2))
            .scale(&BigRational::new(1.into(), 2.into()));
        let off = ExactComplex::rat(BigRational::new((-1).into(), 2.into()));
        let hit = fixed.solutions.iter().any(|s| {
            s.recognized
                && s.z[(0, 0)].eq_exact(&diag) == Some(true)
                && s.z[(1, 1)].eq_exact(&diag) == Some(true)
                && s.z[(0, 1)].eq_exact(&off) == Some(true)
                && s.residual == F::ZERO
        });
        assert!(
            hit,
            "expected the exact fixed matrix among {:?}",
            fixed.solutions
        );
    }

    #[test]
    fn surface_fixed_matrix_satisfies_equation_and_analytic_hurwitz() {
        let (a, b) = surface_generators();
        let rep = RestrictedRep::new(principal(2), IntMat::identity(4), vec![a, b]).unwrap();
        let diag = ExactComplex::one()
            .add(&ExactComplex::sqrt_int(-2))
            .scale(&BigRational::new(1.into(), 2.into()));
        let off = ExactComplex::rat(BigRational::new((-1).into(), 2.into()));
        let z = CMat::from_rows(vec![
            vec![diag.clone(), off.clone()],
            vec![off, diag],
        ]);
        for n in &rep.generators {
            assert!(cmat_vanishes(&fixed_point_lhs(&rep.dtype, &z, n), 256));
        }
        // restricted analytic matrices intertwine the period matrix exactly
        let mats = restricted_analytic(&rep, &z, 256).unwrap();
        let s = build_period(rep.dtype.clone(), z, None, 256).unwrap();
        for (n, c) in rep.generators.iter().zip(&mats) {
            assert!(hurwitz_residual(&s, &s, n, c) == F::ZERO);
        }
    }

    #[test]
    fn order_four_generator_pins_tau_i() {
        // Z² + 1 = 0 with Im Z > 0 forces Z = i
        let n = im(vec![vec![0, -1], vec![1, 0]]);
        let rep = RestrictedRep::new(principal(1), IntMat::identity(2), vec![n]).unwrap();
        let fixed = fixed_riemann(&rep, 256, 0x5EED).unwrap();
        assert!(!fixed.family);
        assert_eq!(fixed.solutions.len(), 1);
        let s = &fixed.solutions[0];
        assert!(s.recognized);
        assert_eq!(s.z[(0, 0)].eq_exact(&ExactComplex::i()), Some(true));
        // analytic multiplier of the order-4 automorphism is i itself
        let mats = restricted_analytic(&rep, &s.z, 256).unwrap();
        assert_eq!(mats[0][(0, 0)].eq_exact(&ExactComplex::i()), Some(true));
    }

    #[test]
    fn trivial_group_reports_the_whole_siegel_space() {
        let rep =
            RestrictedRep::new(principal(2), IntMat::identity(4), vec![IntMat::identity(4)])
                .unwrap();
        let fixed = fixed_riemann(&rep, 128, 0x5EED).unwrap();
        assert!(fixed.family);
        assert_eq!(fixed.family_dim, 3);
        assert!(fixed.solutions[0].recognized);
    }

    #[test]
    fn central_minus_one_fixes_a_family() {
        // −I acts centrally: the equation is identically zero, so the fixed
        // locus is all of H₁ and must be flagged as a family
        let n = im(vec![vec![-1, 0], vec![0, -1]]);
        let rep = RestrictedRep::new(principal(1), IntMat::identity(2), vec![n]).unwrap();
        let fixed = fixed_riemann(&rep, 128, 0x5EED).unwrap();
        assert!(fixed.family);
        assert_eq!(fixed.family_dim, 1);
    }

    #[test]
    fn averaging_idempotent_of_swap_group() {
        let swap = swap_4x4();
        let p = subgroup_idempotent(&[IntMat::identity(4), swap.clone()]).unwrap();
        let expected = RatMat::from_fn(4, 4, |i, j| {
            let half = BigRational::new(1.into(), 2.into());
            let id = if i == j { half.clone() } else { BigRational::from(BigInt::from(0)) };
            let sw = if swap[(i, j)] == BigInt::one() {
                half
            } else {
                BigRational::from(BigInt::from(0))
            };
            id + sw
        });
        assert_eq!(p, expected);
        assert_eq!(p.matmul(&p), p);
        // a list missing the identity is not closed
        assert!(matches!(
            subgroup_idempotent(&[swap]),
            Err(GactionError::NotClosed)
        ));
    }

    #[test]
    fn swap_action_restricts_to_identity_on_the_diagonal() {
        let swap = swap_4x4();
        let rep = SymplecticRep::new(principal(2), vec![swap]).unwrap();
        // diagonal sublattice of E × E, spanned by λ₁+λ₂ and μ₁+μ₂
        let p = im(vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]]);
        let d = vec![BigInt::from(2)];
        let restricted = restrict_action(&rep, &p, &d).unwrap();
        assert_eq!(restricted.generators[0], IntMat::identity(2));

        // homomorphism check: swap² = identity restricts to identity
        let sq = rep.generators[0].matmul(&rep.generators[0]);
        let rep2 = SymplecticRep::new(principal(2), vec![sq]).unwrap();
        let r2 = restrict_action(&rep2, &p, &d).unwrap();
        assert_eq!(
            r2.generators[0],
            restricted.generators[0].matmul(&restricted.generators[0])
        );
    }

    #[test]
    fn unstable_sublattice_is_rejected() {
        let swap = swap_4x4();
        let rep = SymplecticRep::new(principal(2), vec![swap]).unwrap();
        // {λ₁, μ₁} is swapped onto {λ₂, μ₂}: not stable
        let p = im(vec![vec![1, 0], vec![0, 0], vec![0, 1], vec![0, 0]]);
        assert!(matches!(
            restrict_action(&rep, &p, &principal(1)),
            Err(GactionError::NotStable(0))
        ));
    }

    #[test]
    fn non_symplectic_generator_is_rejected() {
        let n = im(vec![
            vec![2, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ]);
        assert!(matches!(
            SymplecticRep::new(principal(2), vec![n]),
            Err(GactionError::NotSymplectic(0))
        ));
    }

    #[test]
    fn analytic_restriction_demands_a_fixed_matrix() {
        let n = im(vec![vec![0, -1], vec![1, 0]]);
        let rep = RestrictedRep::new(principal(1), IntMat::identity(2), vec![n]).unwrap();
        let bad = CMat::from_rows(vec![vec![ExactComplex::i()
            .scale(&BigRational::new(2.into(), 1.into()))]]);
        assert!(matches!(
            restricted_analytic(&rep, &bad, 128),
            Err(GactionError::NotFixed(0))
        ));
    }
}
