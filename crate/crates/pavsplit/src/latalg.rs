//! Lattice and exact linear algebra.
//!
//! Integer side: Hermite normal form `H = U·M`, Smith normal form
//! `S = U·M·V` with all four transform matrices, elementary divisors,
//! saturation of a sublattice (the smallest pure sublattice containing it),
//! and a Frobenius reduction turning a nondegenerate alternating Gram matrix
//! into `[[0, D], [−D, 0]]` with `d₁ | d₂ | … | dₙ` by a unimodular change
//! of basis.
//!
//! Rational/complex side: fraction-free (Bareiss) determinants and a general
//! Gauss–Jordan that reports rank, a particular solution and a kernel basis,
//! shared by the exact solvers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numerics::{ExactComplex, NumericsError, CF};

#[derive(thiserror::Error, Debug)]
pub enum LatAlgError {
    #[error("matrix is singular")]
    Singular,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("alternating form is degenerate")]
    DegenerateForm,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Minimal scalar interface shared by the matrix container.  Method names
/// carry an `sc_` prefix to stay out of the way of `num_traits`.
pub trait Scalar: Clone {
    fn sc_zero() -> Self;
    fn sc_one() -> Self;
    fn sc_add(&self, o: &Self) -> Self;
    fn sc_sub(&self, o: &Self) -> Self;
    fn sc_mul(&self, o: &Self) -> Self;
    fn sc_neg(&self) -> Self;
    fn sc_is_zero(&self) -> bool;
}

macro_rules! scalar_via_ops {
    ($t:ty) => {
        impl Scalar for $t {
            fn sc_zero() -> Self {
                <$t as Zero>::zero()
            }
            fn sc_one() -> Self {
                <$t as One>::one()
            }
            fn sc_add(&self, o: &Self) -> Self {
                self + o
            }
            fn sc_sub(&self, o: &Self) -> Self {
                self - o
            }
            fn sc_mul(&self, o: &Self) -> Self {
                self * o
            }
            fn sc_neg(&self) -> Self {
                -self
            }
            fn sc_is_zero(&self) -> bool {
                Zero::is_zero(self)
            }
        }
    };
}

scalar_via_ops!(BigInt);
scalar_via_ops!(BigRational);

impl Scalar for ExactComplex {
    fn sc_zero() -> Self {
        ExactComplex::zero()
    }
    fn sc_one() -> Self {
        ExactComplex::one()
    }
    fn sc_add(&self, o: &Self) -> Self {
        ExactComplex::add(self, o)
    }
    fn sc_sub(&self, o: &Self) -> Self {
        ExactComplex::sub(self, o)
    }
    fn sc_mul(&self, o: &Self) -> Self {
        ExactComplex::mul(self, o)
    }
    fn sc_neg(&self) -> Self {
        ExactComplex::neg(self)
    }
    fn sc_is_zero(&self) -> bool {
        ExactComplex::is_zero(self)
    }
}

impl Scalar for crate::numerics::F {
    fn sc_zero() -> Self {
        Self::ZERO
    }
    fn sc_one() -> Self {
        Self::ONE
    }
    fn sc_add(&self, o: &Self) -> Self {
        self + o
    }
    fn sc_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn sc_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sc_neg(&self) -> Self {
        -self
    }
    fn sc_is_zero(&self) -> bool {
        *self == Self::ZERO
    }
}

impl Scalar for CF {
    fn sc_zero() -> Self {
        CF::zero(0)
    }
    fn sc_one() -> Self {
        CF::one(crate::numerics::DEFAULT_PREC)
    }
    fn sc_add(&self, o: &Self) -> Self {
        self + o
    }
    fn sc_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn sc_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sc_neg(&self) -> Self {
        -self
    }
    fn sc_is_zero(&self) -> bool {
        self.is_exact_zero()
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

pub type IntMat = Mat<BigInt>;
pub type RatMat = Mat<BigRational>;
pub type CMat = Mat<ExactComplex>;
pub type FMat = Mat<CF>;

impl<T: Scalar> Mat<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::sc_zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = T::sc_one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].sc_add(&o[(i, j)]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].sc_sub(&o[(i, j)]))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].sc_neg())
    }

    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in matmul");
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = T::sc_zero();
            for k in 0..self.cols {
                acc = acc.sc_add(&self[(i, k)].sc_mul(&o[(k, j)]));
            }
            acc
        })
    }

    pub fn scalar_mul(&self, s: &T) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].sc_mul(s))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.sc_is_zero())
    }

    /// Columns `sel` in the given order.
    pub fn select_cols(&self, sel: &[usize]) -> Self {
        Self::from_fn(self.rows, sel.len(), |i, j| self[(i, sel[j])].clone())
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { o[(i, j - self.cols)].clone() }
        })
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        Self::from_fn(self.rows + o.rows, self.cols, |i, j| {
            if i < self.rows { self[(i, j)].clone() } else { o[(i - self.rows, j)].clone() }
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat::from_fn(self.rows, self.cols, |i, j| f(&self[(i, j)]))
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

pub fn int_to_rat(m: &IntMat) -> RatMat {
    m.map(|x| BigRational::from(x.clone()))
}

pub fn int_to_cmat(m: &IntMat) -> CMat {
    m.map(ExactComplex::from_bigint)
}

pub fn rat_to_cmat(m: &RatMat) -> CMat {
    m.map(|q| ExactComplex::rat(q.clone()))
}

/// Row-style Hermite normal form: returns `(U, H)` with `H = U·M`, `U`
/// unimodular, `H` in row echelon form with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hermite_form(m: &IntMat) -> (IntMat, IntMat) {
    let mut h = m.clone();
    let mut u = IntMat::identity(m.rows);
    let (rows, cols) = (h.rows, h.cols);
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclidean reduction in column c among rows r..
        loop {
            let mut piv: Option<usize> = None;
            for i in r..rows {
                if !h[(i, c)].is_zero()
                    && piv.is_none_or(|p| h[(i, c)].abs() < h[(p, c)].abs())
                {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            swap_rows(&mut h, r, p);
            swap_rows(&mut u, r, p);
            if h[(r, c)].is_negative() {
                negate_row(&mut h, r);
                negate_row(&mut u, r);
            }
            let mut done = true;
            for i in r + 1..rows {
                if !h[(i, c)].is_zero() {
                    let q = div_round(&h[(i, c)], &h[(r, c)]);
                    row_sub_mul(&mut h, i, r, &q);
                    row_sub_mul(&mut u, i, r, &q);
                    if !h[(i, c)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        // reduce entries above the pivot into [0, pivot)
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                row_sub_mul(&mut h, i, r, &q);
                row_sub_mul(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (u, h)
}

fn swap_rows<T>(m: &mut Mat<T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        m.data.swap(a * m.cols + j, b * m.cols + j);
    }
}

fn negate_row(m: &mut IntMat, r: usize) {
    for j in 0..m.cols {
        let v = -m[(r, j)].clone();
        m[(r, j)] = v;
    }
}

/// row a -= q · row b
fn row_sub_mul(m: &mut IntMat, a: usize, b: usize, q: &BigInt) {
    for j in 0..m.cols {
        let t = &m[(b, j)] * q;
        m[(a, j)] -= t;
    }
}

/// Rounded integer division (nearest; exact halves toward the floor side).
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = a.div_mod_floor(b);
    // remainder satisfies q + r/b ∈ [q, q+1), so round up when |r/b| > 1/2
    if &(&r.abs() * &two) > &b.abs() {
        q + BigInt::one()
    } else {
        q
    }
}

/// Smith normal form with transforms: `S = U·M·V`, plus `U⁻¹` and `V⁻¹`,
/// all unimodular, `S` diagonal with `s₁ | s₂ | …` non-negative.
pub struct Smith {
    pub s: IntMat,
    pub u: IntMat,
    pub u_inv: IntMat,
    pub v: IntMat,
    pub v_inv: IntMat,
}

pub fn smith_form(m: &IntMat) -> Smith {
    let mut s = m.clone();
    let mut u = IntMat::identity(m.rows);
    let mut u_inv = IntMat::identity(m.rows);
    let mut v = IntMat::identity(m.cols);
    let mut v_inv = IntMat::identity(m.cols);
    let n = m.rows.min(m.cols);

    // elementary ops, each mirrored on the inverse from the other side
    let row_swap = |s: &mut IntMat, u: &mut IntMat, ui: &mut IntMat, a: usize, b: usize| {
        swap_rows(s, a, b);
        swap_rows(u, a, b);
        swap_cols(ui, a, b);
    };
    let col_swap = |s: &mut IntMat, v: &mut IntMat, vi: &mut IntMat, a: usize, b: usize| {
        swap_cols(s, a, b);
        swap_cols(v, a, b);
        swap_rows(vi, a, b);
    };

    let mut t = 0usize;
    while t < n {
        // find a smallest nonzero entry in the remaining block
        let mut piv: Option<(usize, usize)> = None;
        for i in t..s.rows {
            for j in t..s.cols {
                if !s[(i, j)].is_zero()
                    && piv.is_none_or(|(pi, pj)| s[(i, j)].abs() < s[(pi, pj)].abs())
                {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        row_swap(&mut s, &mut u, &mut u_inv, t, pi);
        col_swap(&mut s, &mut v, &mut v_inv, t, pj);
        if s[(t, t)].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
            negate_col(&mut u_inv, t);
        }

        let mut clean = true;
        for i in t + 1..s.rows {
            if !s[(i, t)].is_zero() {
                let q = div_round(&s[(i, t)], &s[(t, t)]);
                row_sub_mul(&mut s, i, t, &q);
                row_sub_mul(&mut u, i, t, &q);
                col_add_mul(&mut u_inv, t, i, &q);
                if !s[(i, t)].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..s.cols {
            if !s[(t, j)].is_zero() {
                let q = div_round(&s[(t, j)], &s[(t, t)]);
                col_sub_mul(&mut s, j, t, &q);
                col_sub_mul(&mut v, j, t, &q);
                row_add_mul(&mut v_inv, t, j, &q);
                if !s[(t, j)].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // a smaller pivot now exists; redo this position
        }
        // enforce divisibility s_t | s_{i,j} for the rest of the block
        let mut repaired = false;
        'outer: for i in t + 1..s.rows {
            for j in t + 1..s.cols {
                if !(&s[(i, j)] % &s[(t, t)]).is_zero() {
                    // add row i to row t to pull the offending entry in
                    let minus_one = BigInt::from(-1);
                    row_sub_mul(&mut s, t, i, &minus_one);
                    row_sub_mul(&mut u, t, i, &minus_one);
                    col_add_mul(&mut u_inv, i, t, &minus_one);
                    repaired = true;
                    break 'outer;
                }
            }
        }
        if repaired {
            continue;
        }
        t += 1;
    }
    Smith { s, u, u_inv, v, v_inv }
}

fn swap_cols(m: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        m.data.swap(i * m.cols + a, i * m.cols + b);
    }
}

fn negate_col(m: &mut IntMat, c: usize) {
    for i in 0..m.rows {
        let v = -m[(i, c)].clone();
        m[(i, c)] = v;
    }
}

/// col a -= q · col b
fn col_sub_mul(m: &mut IntMat, a: usize, b: usize, q: &BigInt) {
    for i in 0..m.rows {
        let t = &m[(i, b)] * q;
        m[(i, a)] -= t;
    }
}

/// col a += q · col b
fn col_add_mul(m: &mut IntMat, a: usize, b: usize, q: &BigInt) {
    for i in 0..m.rows {
        let t = &m[(i, b)] * q;
        m[(i, a)] += t;
    }
}

/// row a += q · row b
fn row_add_mul(m: &mut IntMat, a: usize, b: usize, q: &BigInt) {
    for j in 0..m.cols {
        let t = &m[(b, j)] * q;
        m[(a, j)] += t;
    }
}

/// Nonzero diagonal of the Smith form, in divisibility order.
pub fn elementary_divisors(m: &IntMat) -> Vec<BigInt> {
    let smith = smith_form(m);
    let n = m.rows.min(m.cols);
    (0..n).map(|i| smith.s[(i, i)].clone()).filter(|d| !d.is_zero()).collect()
}

/// Saturation: a basis (as columns, column-Hermite reduced) of the smallest
/// pure sublattice of ℤ^rows containing the column span of `m`.
pub fn saturate(m: &IntMat) -> IntMat {
    let smith = smith_form(m);
    let r = (0..m.rows.min(m.cols)).take_while(|&i| !smith.s[(i, i)].is_zero()).count();
    // column span of m = U⁻¹·S·V⁻¹-span = lattice spanned by sᵢ·(U⁻¹ eᵢ);
    // its rational span meets ℤ^rows exactly in the span of those columns
    let sel: Vec<usize> = (0..r).collect();
    let basis = smith.u_inv.select_cols(&sel);
    column_hermite(&basis)
}

/// Column-style Hermite normalisation (unique representative of the column
/// span under right-unimodular action).
pub fn column_hermite(m: &IntMat) -> IntMat {
    let (_, h) = hermite_form(&m.transpose());
    // drop zero rows of h (zero columns after transposing back)
    let nonzero: Vec<usize> = (0..h.rows)
        .filter(|&i| (0..h.cols).any(|j| !h[(i, j)].is_zero()))
        .collect();
    let ht = h.transpose();
    ht.select_cols(&nonzero)
}

/// The Gram matrix `[[0, diag(d)], [−diag(d), 0]]` of the standard
/// symplectic form of type `d`.
/// Recognize a Gram matrix of the exact shape `[[0, D], [−D, 0]]` with a
/// positive divisibility chain `D`, returning the chain.
fn read_standard_gram(a: &IntMat) -> Option<Vec<BigInt>> {
    let m = a.rows;
    if m == 0 || m % 2 != 0 {
        return None;
    }
    let n = m / 2;
    for i in 0..m {
        for j in 0..m {
            let paired = (i < n && j == i + n) || (i >= n && j == i - n);
            if !paired && !a[(i, j)].is_zero() {
                return None;
            }
        }
    }
    let mut d: Vec<BigInt> = Vec::with_capacity(n);
    for i in 0..n {
        let v = a[(i, i + n)].clone();
        if !v.is_positive() || a[(i + n, i)] != -(&v) {
            return None;
        }
        if let Some(prev) = d.last() {
            if !(&v % prev).is_zero() {
                return None;
            }
        }
        d.push(v);
    }
    Some(d)
}

pub fn standard_symplectic_gram(d: &[BigInt]) -> IntMat {
    let g = d.len();
    let mut j = IntMat::zero(2 * g, 2 * g);
    for i in 0..g {
        j[(i, g + i)] = d[i].clone();
        j[(g + i, i)] = -d[i].clone();
    }
    j
}

/// Frobenius reduction of a nondegenerate alternating integer Gram matrix:
/// returns `(Q, d)` with `Qᵗ·A·Q = [[0, diag(d)], [−diag(d), 0]]`, `Q`
/// unimodular and `d₁ | d₂ | … | dₙ` positive.
pub fn frobenius_symplectic_basis(a: &IntMat) -> Result<(IntMat, Vec<BigInt>), LatAlgError> {
    let m = a.rows;
    assert_eq!(a.rows, a.cols);
    if m % 2 != 0 {
        return Err(LatAlgError::DegenerateForm);
    }
    debug_assert!(a.add(&a.transpose()).is_zero(), "form must be alternating");
    // a Gram matrix already in standard shape keeps its basis, so callers
    // that feed a symplectic basis back in get the identity transform
    if let Some(d) = read_standard_gram(a) {
        return Ok((IntMat::identity(m), d));
    }
    let n = m / 2;
    let mut w = a.clone();
    let mut q = IntMat::identity(m);

    // basis change e_a ← e_a + c·e_b: columns and rows both move
    fn basis_add(w: &mut IntMat, q: &mut IntMat, a: usize, b: usize, c: &BigInt) {
        col_add_mul(w, a, b, c);
        row_add_mul(w, a, b, c);
        col_add_mul(q, a, b, c);
    }
    fn basis_swap(w: &mut IntMat, q: &mut IntMat, a: usize, b: usize) {
        swap_cols(w, a, b);
        swap_rows(w, a, b);
        swap_cols(q, a, b);
    }
    fn basis_neg(w: &mut IntMat, q: &mut IntMat, a: usize) {
        negate_col(w, a);
        negate_row(w, a);
        negate_col(q, a);
    }

    'restart: loop {
        for k in 0..n {
            let p = 2 * k;
            loop {
                // smallest nonzero |w[i][j]| with p ≤ i < j
                let mut piv: Option<(usize, usize)> = None;
                for i in p..m {
                    for j in i + 1..m {
                        if !w[(i, j)].is_zero()
                            && piv.is_none_or(|(a_, b_)| w[(i, j)].abs() < w[(a_, b_)].abs())
                        {
                            piv = Some((i, j));
                        }
                    }
                }
                let Some((i, j)) = piv else {
                    return Err(LatAlgError::DegenerateForm);
                };
                // move the pivot pair to (p, p+1)
                if i != p {
                    basis_swap(&mut w, &mut q, p, i);
                }
                let j = if j == p { i } else { j };
                if j != p + 1 {
                    basis_swap(&mut w, &mut q, p + 1, j);
                }
                if w[(p, p + 1)].is_negative() {
                    basis_neg(&mut w, &mut q, p + 1);
                }
                let d = w[(p, p + 1)].clone();
                // clear the rest of rows p and p+1 by rounded division
                let mut clean = true;
                for t in p + 2..m {
                    if !w[(p, t)].is_zero() {
                        let c = div_round(&w[(p, t)], &d);
                        if !c.is_zero() {
                            basis_add(&mut w, &mut q, t, p + 1, &(-c));
                        }
                        if !w[(p, t)].is_zero() {
                            clean = false;
                        }
                    }
                    if !w[(p + 1, t)].is_zero() {
                        let c = div_round(&w[(p + 1, t)], &d);
                        if !c.is_zero() {
                            basis_add(&mut w, &mut q, t, p, &c);
                        }
                        if !w[(p + 1, t)].is_zero() {
                            clean = false;
                        }
                    }
                }
                if clean {
                    break;
                }
            }
        }
        // divisibility chain repair across blocks
        for k in 0..n.saturating_sub(1) {
            let dk = w[(2 * k, 2 * k + 1)].clone();
            let dn = w[(2 * k + 2, 2 * k + 3)].clone();
            if !(&dn % &dk).is_zero() {
                basis_add(&mut w, &mut q, 2 * k, 2 * k + 2, &BigInt::one());
                continue 'restart;
            }
        }
        break;
    }

    let d: Vec<BigInt> = (0..n).map(|k| w[(2 * k, 2 * k + 1)].clone()).collect();
    // interleaved (a₁ b₁ a₂ b₂ …) → blocked (a… | b…)
    let perm: Vec<usize> =
        (0..n).map(|k| 2 * k).chain((0..n).map(|k| 2 * k + 1)).collect();
    let q = q.select_cols(&perm);
    debug_assert_eq!(
        q.transpose().matmul(a).matmul(&q),
        standard_symplectic_gram(&d)
    );
    Ok((q, d))
}

/// Outcome of rational Gauss–Jordan on `A·X = B`.
pub struct RatGauss {
    pub rank: usize,
    /// `None` when the system is inconsistent.
    pub particular: Option<RatMat>,
    /// Kernel basis of `A` as columns (cols = nullity).
    pub kernel: RatMat,
}

/// Full Gauss–Jordan over ℚ handling any shape.
pub fn rat_gauss(a: &RatMat, b: &RatMat) -> RatGauss {
    assert_eq!(a.rows, b.rows);
    let mut m = a.hstack(b);
    let (rows, acols, bcols) = (a.rows, a.cols, b.cols);
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..acols {
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
        swap_rows(&mut m, r, p);
        let inv = m[(r, c)].recip();
        for j in 0..m.cols {
            let t = &m[(r, j)] * &inv;
            m[(r, j)] = t;
        }
        for i in 0..rows {
            if i != r && !m[(i, c)].is_zero() {
                let f = m[(i, c)].clone();
                for j in 0..m.cols {
                    let t = &m[(r, j)] * &f;
                    m[(i, j)] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let rank = r;
    // consistency: a zero row of A-part must have zero B-part
    let consistent = (rank..rows)
        .all(|i| (acols..acols + bcols).all(|j| m[(i, j)].is_zero()));
    let particular = consistent.then(|| {
        let mut x = RatMat::zero(acols, bcols);
        for (pi, &pc) in pivots.iter().enumerate() {
            for j in 0..bcols {
                x[(pc, j)] = m[(pi, acols + j)].clone();
            }
        }
        x
    });
    let free: Vec<usize> = (0..acols).filter(|c| !pivots.contains(c)).collect();
    let mut kernel = RatMat::zero(acols, free.len());
    for (kj, &fc) in free.iter().enumerate() {
        kernel[(fc, kj)] = BigRational::one();
        for (pi, &pc) in pivots.iter().enumerate() {
            kernel[(pc, kj)] = -m[(pi, fc)].clone();
        }
    }
    RatGauss { rank, particular, kernel }
}

/// Unique exact solution of `A·X = B` (requires full column rank and
/// consistency; square invertible systems always qualify).
pub fn solve_exact(a: &RatMat, b: &RatMat) -> Result<RatMat, LatAlgError> {
    let g = rat_gauss(a, b);
    match g.particular {
        None => Err(LatAlgError::Inconsistent),
        Some(x) if g.rank == a.cols => Ok(x),
        Some(_) => Err(LatAlgError::Singular),
    }
}

pub fn rat_kernel(a: &RatMat) -> RatMat {
    rat_gauss(a, &RatMat::zero(a.rows, 0)).kernel
}

pub fn rat_rank(a: &RatMat) -> usize {
    rat_gauss(a, &RatMat::zero(a.rows, 0)).rank
}

pub fn rat_inverse(a: &RatMat) -> Result<RatMat, LatAlgError> {
    assert_eq!(a.rows, a.cols);
    solve_exact(a, &RatMat::identity(a.rows))
}

/// Fraction-free determinant (Bareiss) of an integer matrix.
pub fn det_bareiss(m: &IntMat) -> BigInt {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            swap_rows(&mut a, k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = t;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

pub fn det_rat(m: &RatMat) -> BigRational {
    assert_eq!(m.rows, m.cols);
    // clear denominators and reuse the fraction-free integer path
    let mut lcm = BigInt::one();
    for i in 0..m.rows {
        for j in 0..m.cols {
            lcm = lcm.lcm(m[(i, j)].denom());
        }
    }
    let mi = m.map(|q| (q * BigRational::from(lcm.clone())).to_integer());
    let d = det_bareiss(&mi);
    let mut denom = BigRational::one();
    let l = BigRational::from(lcm);
    for _ in 0..m.rows {
        denom = denom * &l;
    }
    BigRational::from(d) / denom
}

/// Does `m` have integer entries only? (for lattice-stability checks)
pub fn rat_is_integral(m: &RatMat) -> bool {
    (0..m.rows).all(|i| (0..m.cols).all(|j| m[(i, j)].denom().is_one()))
}

pub fn rat_to_int(m: &RatMat) -> IntMat {
    m.map(|q| {
        assert!(q.denom().is_one(), "matrix is not integral");
        q.numer().clone()
    })
}

/// Gauss–Jordan over `ExactComplex` for `A·X = B`: prefers exact nonzero
/// pivots, falls back to the numerically largest entry among inexact ones.
/// Consistency of overdetermined systems is checked exactly when entries are
/// exact, numerically at `2^(−prec/2)` otherwise.
pub fn csolve(a: &CMat, b: &CMat, prec: u32) -> Result<CMat, LatAlgError> {
    assert_eq!(a.rows, b.rows);
    let mut m = a.hstack(b);
    let (rows, acols, bcols) = (a.rows, a.cols, b.cols);
    let tiny = crate::numerics::bigfloat::pow2(-(prec as i64) / 2, 64);
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..acols {
        // pivot choice: any exact nonzero, else max |·|
        let mut choice: Option<usize> = None;
        for i in r..rows {
            if m[(i, c)].is_exact() && !m[(i, c)].is_zero() {
                choice = Some(i);
                break;
            }
        }
        if choice.is_none() {
            let mut best = tiny.clone();
            for i in r..rows {
                if !m[(i, c)].is_zero() {
                    let mag = m[(i, c)].eval(prec).abs();
                    if mag > best {
                        best = mag;
                        choice = Some(i);
                    }
                }
            }
        }
        let Some(p) = choice else { continue };
        swap_rows(&mut m, r, p);
        let inv = ExactComplex::one().div(&m[(r, c)])?;
        for j in 0..m.cols {
            let t = m[(r, j)].mul(&inv);
            m[(r, j)] = t;
        }
        for i in 0..rows {
            if i != r && !m[(i, c)].is_zero() {
                let f = m[(i, c)].clone();
                for j in 0..m.cols {
                    let t = m[(i, j)].sub(&m[(r, j)].mul(&f));
                    m[(i, j)] = t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if r < acols {
        return Err(LatAlgError::Singular);
    }
    // remaining rows must vanish on the B side
    for i in r..rows {
        for j in acols..acols + bcols {
            let e = &m[(i, j)];
            let ok = if e.is_exact() { e.is_zero() } else { e.eval(prec).abs() < tiny };
            if !ok {
                return Err(LatAlgError::Inconsistent);
            }
        }
    }
    let mut x = CMat::zero(acols, bcols);
    for (pi, &pc) in pivots.iter().enumerate() {
        for j in 0..bcols {
            x[(pc, j)] = m[(pi, acols + j)].clone();
        }
    }
    Ok(x)
}
