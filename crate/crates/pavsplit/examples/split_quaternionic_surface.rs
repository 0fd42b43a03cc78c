//! Decompose a principally polarized surface whose endomorphisms contain
//! a quaternion order.
//!
//! The Riemann matrix [[(1+i√2)/2, −1/2], [−1/2, (1+i√2)/2]] admits a
//! rank-two Néron–Severi class of self-intersection zero; splitting along
//! it produces two elliptic curves with complex multiplication by orders
//! in ℚ(i√2), joined to the surface by an isogeny of degree 4.

use num_bigint::BigInt;
use num_rational::BigRational;
use pavsplit::decompose::{poincare_decompose, DecomposeOptions, LeafKind};
use pavsplit::latalg::CMat;
use pavsplit::numerics::ExactComplex;
use pavsplit::pav::build_period;

fn main() {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let diag = ExactComplex::one().add(&ExactComplex::sqrt_int(-2)).scale(&half);
    let off = ExactComplex::rat(-half);
    let z = CMat::from_rows(vec![
        vec![diag.clone(), off.clone()],
        vec![off, diag],
    ]);
    let principal = vec![BigInt::from(1), BigInt::from(1)];
    let pav = build_period(principal, z, None, 256).expect("valid Riemann matrix");

    let tree = poincare_decompose(&pav, &DecomposeOptions::default()).expect("decomposes");
    let search = tree.search.as_ref().expect("surface search ran");
    println!(
        "splitting classes found at height {}: {}",
        search.searched_height,
        search.hits.len()
    );
    if let Some(rep) = &search.representative {
        let coeffs: Vec<String> = rep.coeffs.iter().map(|q| q.to_string()).collect();
        println!("chosen class: [{}]", coeffs.join(", "));
    }
    println!("total isogeny degree: {}", tree.total_degree());
    for (factor, leaf) in tree.leaves() {
        if let LeafKind::Elliptic(report) = leaf {
            let (re, im) = report.reduced.eval(64).to_f64s();
            print!(
                "  elliptic factor of type ({}), reduced modulus ≈ {re:.6}{im:+.6}i",
                factor.etype[0]
            );
            match &report.cm {
                Some(cm) => println!(", CM discriminant {}", cm.discriminant),
                None => println!(", no CM detected"),
            }
        }
    }
}
