//! Recover the factors of a product of elliptic curves.
//!
//! A diagonal Riemann matrix diag(z₁, …, z_g) with the principal
//! polarization is already a product; the decomposition should peel the
//! factors back off with total isogeny degree 1 and return each modulus
//! unchanged (up to the fundamental-domain reduction it also reports).

use num_bigint::BigInt;
use num_rational::BigRational;
use pavsplit::decompose::{poincare_decompose, DecomposeOptions, LeafKind};
use pavsplit::latalg::CMat;
use pavsplit::numerics::ExactComplex;
use pavsplit::pav::build_period;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn main() {
    let moduli = vec![
        ExactComplex::i(),
        ExactComplex::rat(rat(1, 3)).add(&ExactComplex::i().scale(&rat(5, 2))),
        ExactComplex::sqrt_int(-7).scale(&rat(1, 4)),
    ];
    let g = moduli.len();
    let z = CMat::from_fn(g, g, |i, j| {
        if i == j {
            moduli[i].clone()
        } else {
            ExactComplex::zero()
        }
    });
    let pav = build_period(vec![BigInt::from(1); g], z, None, 192).expect("valid product");

    let tree = poincare_decompose(&pav, &DecomposeOptions::default()).expect("splits");
    println!("total isogeny degree: {}", tree.total_degree());
    // the tree may order the factors differently from the input diagonal
    for (k, (_, leaf)) in tree.leaves().iter().enumerate() {
        match leaf {
            LeafKind::Elliptic(report) => {
                let source = moduli.iter().position(|m| report.tau.eq_exact(m) == Some(true));
                let (re, im) = report.reduced.eval(64).to_f64s();
                println!(
                    "  factor {}: matches input modulus {:?}; reduced ≈ {re:+.5}{im:+.5}i",
                    k + 1,
                    source.map(|s| s + 1)
                );
            }
            other => println!("  factor {}: unexpected leaf {other:?}", k + 1),
        }
    }
}
