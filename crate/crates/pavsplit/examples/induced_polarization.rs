//! From a rational endomorphism to a polarized subvariety.
//!
//! Given the projector cutting an elliptic curve out of a quaternionic
//! surface, compute the saturated image lattice, a symplectic basis for
//! the induced polarization, and finally the period matrix (D W) of the
//! image together with the Hurwitz-relation residual certifying the
//! complex-analytic embedding.

use num_bigint::BigInt;
use num_rational::BigRational;
use pavsplit::latalg::{CMat, RatMat};
use pavsplit::numerics::{f_to_decimal_string, ExactComplex};
use pavsplit::pav::build_period;
use pavsplit::subvariety::{image_lattice, induced_polarization, subvariety_period};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn main() {
    let half = rat(1, 2);
    let diag = ExactComplex::one().add(&ExactComplex::sqrt_int(-2)).scale(&half);
    let off = ExactComplex::rat(rat(-1, 2));
    let z = CMat::from_rows(vec![
        vec![diag.clone(), off.clone()],
        vec![off, diag],
    ]);
    let pav = build_period(vec![BigInt::from(1); 2], z, None, 256).expect("valid surface");

    // idempotent in End⁰ projecting onto an elliptic subvariety
    let rows: [[i64; 4]; 4] = [[0, 0, 0, 0], [1, 2, 0, 0], [0, 1, 0, 1], [-1, 0, 0, 2]];
    let f = RatMat::from_fn(4, 4, |i, j| rat(rows[i][j], 2));

    let lattice = image_lattice(&pav, &f).expect("image is a sublattice");
    println!("saturated image lattice columns:");
    for j in 0..lattice.cols {
        let col: Vec<String> = (0..lattice.rows).map(|i| lattice[(i, j)].to_string()).collect();
        println!("  ({})", col.join(", "));
    }

    let (basis, dtype) = induced_polarization(&pav, &lattice).expect("nondegenerate restriction");
    let parts: Vec<String> = dtype.iter().map(|d| d.to_string()).collect();
    println!("induced polarization type: ({})", parts.join(","));
    println!("symplectic basis columns:");
    for j in 0..basis.cols {
        let col: Vec<String> = (0..basis.rows).map(|i| basis[(i, j)].to_string()).collect();
        println!("  ({})", col.join(", "));
    }

    let emb = subvariety_period(&pav, &f).expect("embeds");
    let (re, im) = emb.sub.z[(0, 0)].eval(64).to_f64s();
    println!("period of the image curve: W ≈ {re:+.6}{im:+.6}i");
    println!("Hurwitz residual: {}", f_to_decimal_string(&emb.residual()));
}
