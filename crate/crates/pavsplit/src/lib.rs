//! Exact-arithmetic decomposition of polarized abelian varieties.
//!
//! A polarized abelian variety (pav) of dimension `g` is described here by a
//! period matrix `Π = (E Z)` where `E = diag(d₁,…,d_g)` is the polarization
//! type and `Z` is a symmetric complex `g×g` matrix with positive-definite
//! imaginary part (a Riemann matrix).  Starting from `Π` alone, this crate
//! computes
//!
//! * induced polarizations and symplectic bases of abelian subvarieties
//!   (Smith/Frobenius reduction on the polarization form),
//! * period matrices `(D W)` of images of rational idempotent endomorphisms,
//! * restrictions of a symplectic group action to an invariant subvariety and
//!   the Riemann matrices fixed by the restricted action,
//! * Néron–Severi classes `ω = Σ a_ij dx_i ∧ dx_j`, the symmetric idempotents
//!   they induce, and the resulting recursive splitting of a pav into simple
//!   factors together with the sum-isogeny matrix and its degree.
//!
//! Matrix entries are exact: rationals, elements of explicit number fields
//! with a chosen complex embedding, or (as a clearly flagged fallback)
//! high-precision dyadic floats.  Whenever a numeric step is unavoidable the
//! result is reconstructed algebraically and re-verified exactly.
//!
//! The `examples/` directory exercises every major capability end to end; the
//! thin `pavsplit` binary exposes the same operations on JSON files.

pub mod cli;
pub mod decompose;
pub mod gaction;
pub mod latalg;
pub mod pav;
pub mod numerics;
pub mod subvariety;
