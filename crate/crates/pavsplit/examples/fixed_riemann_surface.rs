//! Solve for the Riemann matrices fixed by a finite symplectic group
//! action.
//!
//! Two explicit order-generating matrices act on a principally polarized
//! surface. The fixed-point equations cut out a single isolated Riemann
//! matrix, which the solver recognizes exactly as an element of ℚ(i√2):
//! the matrix [[(1+i√2)/2, −1/2], [−1/2, (1+i√2)/2]].

use num_bigint::BigInt;
use num_rational::BigRational;
use pavsplit::gaction::{fixed_riemann, RestrictedRep};
use pavsplit::latalg::IntMat;
use pavsplit::numerics::{f_to_decimal_string, ExactComplex};

fn im(rows: [[i64; 4]; 4]) -> IntMat {
    IntMat::from_fn(4, 4, |i, j| BigInt::from(rows[i][j]))
}

fn main() {
    let a = im([
        [0, 1, -1, 1],
        [0, -1, 0, -1],
        [1, -1, 1, -1],
        [1, 1, 0, 0],
    ]);
    let b = im([
        [-1, 0, -1, 0],
        [1, 0, 1, -1],
        [1, 1, 0, 0],
        [-1, 1, -1, 1],
    ]);
    let principal = vec![BigInt::from(1), BigInt::from(1)];
    let rep = RestrictedRep::new(principal, IntMat::identity(4), vec![a, b])
        .expect("generators are symplectic");

    let fixed = fixed_riemann(&rep, 256, 1).expect("solver succeeds");
    println!(
        "fixed locus: {} solution(s), positive-dimensional: {}",
        fixed.solutions.len(),
        fixed.family
    );

    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let diag = ExactComplex::one().add(&ExactComplex::sqrt_int(-2)).scale(&half);
    let off = ExactComplex::rat(-half.clone());
    for sol in &fixed.solutions {
        println!(
            "recognized exactly: {} (residual {})",
            sol.recognized,
            f_to_decimal_string(&sol.residual)
        );
        for i in 0..sol.z.rows {
            let row: Vec<String> = (0..sol.z.cols)
                .map(|j| {
                    let (re, im) = sol.z[(i, j)].eval(64).to_f64s();
                    format!("{re:+.6}{im:+.6}i")
                })
                .collect();
            println!("  [ {} ]", row.join("  "));
        }
        let matches = sol.z[(0, 0)].eq_exact(&diag) == Some(true)
            && sol.z[(1, 1)].eq_exact(&diag) == Some(true)
            && sol.z[(0, 1)].eq_exact(&off) == Some(true);
        println!("equals [[(1+i√2)/2, -1/2], [-1/2, (1+i√2)/2]] exactly: {matches}");
    }
}
