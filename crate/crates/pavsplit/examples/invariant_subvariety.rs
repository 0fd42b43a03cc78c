//! From a group action to the fixed Riemann matrices of an invariant
//! subvariety, step by step.
//!
//! The involution swapping the two factors of a principally polarized
//! surface has the diagonal as invariant sublattice. Averaging the
//! subgroup gives the projector, saturation gives the lattice, a
//! Frobenius basis gives the induced type (2), and the restricted action
//! (which is trivial here) leaves a one-parameter family of fixed
//! Riemann matrices — the whole modular curve.

use num_bigint::BigInt;
use pavsplit::gaction::{fixed_riemann, restrict_action, subgroup_idempotent, SymplecticRep};
use pavsplit::latalg::{frobenius_symplectic_basis, saturate, standard_symplectic_gram, IntMat};
use pavsplit::subvariety::clear_denominators;

fn main() {
    let swap = IntMat::from_fn(4, 4, |i, j| {
        BigInt::from(u8::from(matches!((i, j), (0, 1) | (1, 0) | (2, 3) | (3, 2))))
    });
    let principal = vec![BigInt::from(1), BigInt::from(1)];
    let rep = SymplecticRep::new(principal, vec![swap.clone()]).expect("swap is symplectic");

    // average over the subgroup {1, swap} and saturate the image
    let projector = subgroup_idempotent(&[IntMat::identity(4), swap]).expect("closed subgroup");
    let (numerator, denom) = clear_denominators(&projector);
    println!("projector denominator: {denom}");
    let lattice = saturate(&numerator);
    println!("invariant sublattice rank: {}", lattice.cols);

    // symplectic coordinates for the restricted polarization
    let j = standard_symplectic_gram(&rep.etype);
    let gram = lattice.transpose().matmul(&j).matmul(&lattice);
    let (frob, dtype) = frobenius_symplectic_basis(&gram).expect("nondegenerate");
    let basis = lattice.matmul(&frob);
    let parts: Vec<String> = dtype.iter().map(|d| d.to_string()).collect();
    println!("induced polarization type: ({})", parts.join(","));

    let restricted = restrict_action(&rep, &basis, &dtype).expect("lattice is stable");
    let fixed = fixed_riemann(&restricted, 128, 7).expect("solver runs");
    println!(
        "fixed locus: family = {}, dimension = {}",
        fixed.family, fixed.family_dim
    );
    for (k, sol) in fixed.solutions.iter().enumerate() {
        let (re, im) = sol.z[(0, 0)].eval(64).to_f64s();
        println!("  sample point {}: Z ≈ {re:+.5}{im:+.5}i", k + 1);
    }
}
