//! Normalize one-dimensional factors: fundamental-domain reduction and
//! complex-multiplication detection.
//!
//! A polarized elliptic curve (d, w) has modulus τ = w/d. The reduction
//! walks τ into the usual fundamental domain of SL₂(ℤ) with exact Möbius
//! steps, and when τ is quadratic over ℚ the minimal polynomial and order
//! discriminant of the CM are computed — exactly when τ is exact,
//! heuristically (flagged `certified: false`) when τ is a float.

use num_bigint::BigInt;
use num_rational::BigRational;
use pavsplit::decompose::elliptic_normalize;
use pavsplit::latalg::CMat;
use pavsplit::numerics::ExactComplex;
use pavsplit::pav::build_period;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn curve(d: i64, w: ExactComplex) -> pavsplit::pav::PolarizedAV {
    let z = CMat::from_rows(vec![vec![w]]);
    build_period(vec![BigInt::from(d)], z, None, 256).expect("valid curve")
}

fn main() {
    // (d, w) pairs: polarization degree and the single period entry
    let rows: Vec<(i64, ExactComplex, &str)> = vec![
        (6, ExactComplex::i().scale(&rat(6, 1)), "(6, 6i)"),
        (
            8,
            ExactComplex::rat(rat(4, 1)).add(&ExactComplex::sqrt_int(-3).scale(&rat(4, 1))),
            "(8, 4+4i√3)",
        ),
        (8, ExactComplex::i().scale(&rat(8, 1)), "(8, 8i)"),
        (3, ExactComplex::sqrt_int(-2).scale(&rat(3, 2)), "(3, 3i√2/2)"),
    ];
    for (d, w, label) in rows {
        let report = elliptic_normalize(&curve(d, w)).expect("elliptic input");
        let (tr, ti) = report.tau.eval(64).to_f64s();
        let (rr, ri) = report.reduced.eval(64).to_f64s();
        print!("{label}: τ ≈ {tr:+.4}{ti:+.4}i reduces to {rr:+.4}{ri:+.4}i");
        match &report.cm {
            Some(cm) => println!(
                "; CM with minpoly {}t² {:+}t {:+} (disc {}, certified {})",
                cm.minpoly[0], cm.minpoly[1], cm.minpoly[2], cm.discriminant, cm.certified
            ),
            None => println!("; no quadratic relation"),
        }
    }
}
