//! Acceptance suite: every headline capability checked end to end at its
//! stated tolerance, one test — and so one pass/fail line — per criterion.
//!
//! Ordering follows the pipeline: fixed Riemann matrices from a group
//! action, the two worked surface splits, degree identities, elliptic
//! normalization, exact-arithmetic property loops, the split-product
//! oracle, and the honest negative control.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use pavsplit::decompose::{
    elliptic_normalize, idempotent_from_ns, poincare_decompose, satisfies_criterion,
    sub_elliptic_search_g2, DecomposeOptions, LeafKind, NSForm, TreeNode,
};
use pavsplit::gaction::{fixed_riemann, RestrictedRep};
use pavsplit::latalg::{
    det_bareiss, elementary_divisors, frobenius_symplectic_basis, int_to_rat, rat_gauss,
    rat_is_integral, saturate, standard_symplectic_gram, CMat, IntMat, RatMat,
};
use pavsplit::numerics::{pow2, ExactComplex, CF};
use pavsplit::pav::{build_period, isogeny_degree, PolarizedAV};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rats(v: &[i64], den: i64) -> Vec<BigRational> {
    v.iter().map(|&n| rat(n, den)).collect()
}

fn curve(d: i64, w: ExactComplex) -> PolarizedAV {
    build_period(vec![BigInt::from(d)], CMat::from_rows(vec![vec![w]]), None, 256)
        .expect("valid curve")
}

/// Canonical SL₂(ℤ)-class representative of a modulus.
fn reduced_class(tau: ExactComplex) -> ExactComplex {
    elliptic_normalize(&curve(1, tau)).expect("elliptic").reduced
}

/// The quaternionic surface [[(1+i√2)/2, −1/2], [−1/2, (1+i√2)/2]].
fn quaternionic_surface() -> PolarizedAV {
    let diag = ExactComplex::one().add(&ExactComplex::sqrt_int(-2)).scale(&rat(1, 2));
    let off = ExactComplex::rat(rat(-1, 2));
    let z = CMat::from_rows(vec![vec![diag.clone(), off.clone()], vec![off, diag]]);
    build_period(vec![BigInt::one(), BigInt::one()], z, None, 256).expect("valid surface")
}

fn int_mat(rows: &[&[i64]]) -> IntMat {
    IntMat::from_fn(rows.len(), rows[0].len(), |i, j| BigInt::from(rows[i][j]))
}

/// Riemann matrices fixed by the two explicit order-generating symplectic
/// matrices: the solver must return the exact algebraic matrix with an
/// identically vanishing fixed-point residual, in bounded time.
#[test]
fn fixed_riemann_reproduces_the_exact_invariant_surface() {
    let clock = Instant::now();
    let a = int_mat(&[
        &[0, 1, -1, 1],
        &[0, -1, 0, -1],
        &[1, -1, 1, -1],
        &[1, 1, 0, 0],
    ]);
    let b = int_mat(&[
        &[-1, 0, -1, 0],
        &[1, 0, 1, -1],
        &[1, 1, 0, 0],
        &[-1, 1, -1, 1],
    ]);
    let rep = RestrictedRep::new(
        vec![BigInt::one(), BigInt::one()],
        IntMat::identity(4),
        vec![a, b],
    )
    .expect("symplectic generators");
    let fixed = fixed_riemann(&rep, 256, 1).expect("solver succeeds");
    assert!(!fixed.family, "the fixed matrix is isolated");

    let diag = ExactComplex::one().add(&ExactComplex::sqrt_int(-2)).scale(&rat(1, 2));
    let off = ExactComplex::rat(rat(-1, 2));
    let hit = fixed.solutions.iter().find(|s| {
        s.recognized
            && s.z[(0, 0)].eq_exact(&diag) == Some(true)
            && s.z[(1, 1)].eq_exact(&diag) == Some(true)
            && s.z[(0, 1)].eq_exact(&off) == Some(true)
            && s.z[(1, 0)].eq_exact(&off) == Some(true)
    });
    let hit = hit.expect("the exact algebraic matrix is among the solutions");
    assert!(hit.residual <= pow2(-120, 64), "residual {:?}", hit.residual);
    assert!(clock.elapsed() <= Duration::from_secs(5), "{:?}", clock.elapsed());
}

/// The quaternionic surface splits into two elliptic curves in the
/// SL₂(ℤ)-classes of 1+i√2 and (1+i√2)/3 through a degree-4 isogeny, and
/// the criterion family contains the stated class.
#[test]
fn quaternionic_surface_splits_into_the_expected_classes() {
    let clock = Instant::now();
    let pav = quaternionic_surface();
    let tree = poincare_decompose(&pav, &DecomposeOptions::default()).expect("splits");

    let TreeNode::Split { degree, .. } = &tree.node else {
        panic!("expected a split at the root");
    };
    assert_eq!(*degree, BigInt::from(4), "split degree is exactly 4");

    let targets = [
        reduced_class(ExactComplex::one().add(&ExactComplex::sqrt_int(-2))),
        reduced_class(
            ExactComplex::one().add(&ExactComplex::sqrt_int(-2)).scale(&rat(1, 3)),
        ),
    ];
    let leaves = tree.leaves();
    assert_eq!(leaves.len(), 2);
    for (k, (_, leaf)) in leaves.iter().enumerate() {
        let LeafKind::Elliptic(report) = leaf else {
            panic!("leaf {k} is not elliptic");
        };
        assert_eq!(
            report.reduced.eq_exact(&targets[k]),
            Some(true),
            "leaf {k} lies in the stated isogeny class"
        );
    }

    // the stated member of the solution family, checked by substitution
    // into the criterion equations and by family membership
    let member = rats(&[1, -1, 1, 0, -1, 1], 2);
    assert!(satisfies_criterion(&pav, &member).expect("criterion evaluates"));
    let search = tree.search.as_ref().expect("surface search ran");
    let family = search.family.as_ref().expect("criterion family is nonempty");
    assert!(family.contains(&member));
    assert!(clock.elapsed() <= Duration::from_secs(10), "{:?}", clock.elapsed());
}

/// A type-(4,12) period matrix is content-normalized to (1,3) and splits
/// into two CM curves over ℚ(√−6); the search family contains the stated
/// class and the image leaf has modulus i√6/6.
#[test]
fn scaled_sqrt_six_surface_normalizes_and_splits() {
    let clock = Instant::now();
    let s6 = ExactComplex::sqrt_int(-6);
    // four times the primitive period: type (4,12), Riemann part 4·Z
    let z = CMat::from_rows(vec![
        vec![s6.scale(&rat(6, 1)), s6.scale(&rat(8, 1))],
        vec![s6.scale(&rat(8, 1)), s6.scale(&rat(12, 1))],
    ]);
    let pav = build_period(vec![BigInt::from(4), BigInt::from(12)], z, None, 256)
        .expect("valid scaled period");
    let tree = poincare_decompose(&pav, &DecomposeOptions::default()).expect("splits");

    assert_eq!(tree.content, BigInt::from(4));
    assert_eq!(tree.variety.etype, vec![BigInt::one(), BigInt::from(3)]);

    let search = tree.search.as_ref().expect("surface search ran");
    let family = search.family.as_ref().expect("criterion family is nonempty");
    assert!(family.contains(&rats(&[0, -3, -4, 0, 0, 0], 3)));

    let leaves = tree.leaves();
    assert_eq!(leaves.len(), 2);
    let expected_tau = [s6.scale(&rat(1, 6)), s6.scale(&rat(1, 3))];
    for (k, (_, leaf)) in leaves.iter().enumerate() {
        let LeafKind::Elliptic(report) = leaf else {
            panic!("leaf {k} is not elliptic");
        };
        assert_eq!(report.tau.eq_exact(&expected_tau[k]), Some(true));
        let cm = report.cm.as_ref().expect("CM detected");
        // both orders live in ℚ(√−6), fundamental discriminant −24
        assert_eq!(cm.discriminant, BigInt::from(-24));
        assert!(cm.certified);
    }
    assert!(clock.elapsed() <= Duration::from_secs(10), "{:?}", clock.elapsed());
}

/// Degree identities: the assembled product isogeny of the quaternionic
/// split has degree 4; when the externally published 22×22 representation
/// matrix is supplied on disk, its sum-isogeny degree and polarization
/// pullback are checked as well.
#[test]
fn assembled_isogeny_degrees_match() {
    let pav = quaternionic_surface();
    let tree = poincare_decompose(&pav, &DecomposeOptions::default()).expect("splits");
    let TreeNode::Split { assembled, degree, .. } = &tree.node else {
        panic!("expected a split at the root");
    };
    let det_degree = isogeny_degree(assembled).expect("nonsingular");
    assert_eq!(det_degree, BigInt::from(4));
    assert_eq!(det_degree, *degree);

    // optional: the published genus-11 sum isogeny, supplied as
    // {"matrix": [[…22×22…]]} next to the tests
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/genus11_rep.json");
    let Ok(text) = std::fs::read_to_string(path) else {
        println!("external representation data not supplied; skipping the genus-11 identity");
        return;
    };
    let v: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    let rows = v["matrix"].as_array().expect("matrix rows");
    let n = rows.len();
    assert_eq!(n, 22, "expected a 22×22 matrix");
    let p = IntMat::from_fn(n, n, |i, j| {
        BigInt::from(rows[i].as_array().expect("row")[j].as_i64().expect("integer"))
    });
    assert_eq!(isogeny_degree(&p).expect("nonsingular"), BigInt::from(11943936u64));
    let ones = vec![BigInt::one(); 11];
    let dtype: Vec<BigInt> = [6, 4, 4, 4, 12, 3, 6, 2, 2, 6, 6]
        .iter()
        .map(|&d| BigInt::from(d))
        .collect();
    let gram = p.transpose().matmul(&standard_symplectic_gram(&ones)).matmul(&p);
    assert_eq!(gram, standard_symplectic_gram(&dtype));
}

/// The elliptic normalization table: exact moduli, exact minimal
/// polynomials, and the coincidence of the first and third classes.
#[test]
fn elliptic_normalization_table_is_exact() {
    let i = ExactComplex::i();
    let rows: Vec<(i64, ExactComplex, ExactComplex, [i64; 3])> = vec![
        (6, i.scale(&rat(6, 1)), i.clone(), [1, 0, 1]),
        (
            8,
            ExactComplex::rat(rat(4, 1)).add(&ExactComplex::sqrt_int(-3).scale(&rat(4, 1))),
            ExactComplex::one().add(&ExactComplex::sqrt_int(-3)).scale(&rat(1, 2)),
            [1, -1, 1],
        ),
        (8, i.scale(&rat(8, 1)), i.clone(), [1, 0, 1]),
        (
            3,
            ExactComplex::sqrt_int(-2).scale(&rat(3, 2)),
            ExactComplex::sqrt_int(-2).scale(&rat(1, 2)),
            [2, 0, 1],
        ),
    ];
    let mut reduced = Vec::new();
    for (d, w, tau, minpoly) in rows {
        let report = elliptic_normalize(&curve(d, w)).expect("elliptic");
        assert_eq!(report.tau.eq_exact(&tau), Some(true), "τ = w/{d}");
        let cm = report.cm.expect("CM detected");
        let expect: Vec<BigInt> = minpoly.iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(cm.minpoly.to_vec(), expect);
        assert!(cm.certified);
        reduced.push(report.reduced);
    }
    // the first and third rows land on the same point of the fundamental
    // domain: those factors are isogenous — in fact isomorphic
    assert_eq!(reduced[0].eq_exact(&reduced[2]), Some(true));
}

/// Exactness property loops, ≥200 seeded random instances per property:
/// Frobenius symplectic bases, saturation, splitting idempotents, and
/// elementary divisors against a minor-gcd oracle.
#[test]
fn exact_lattice_routines_hold_on_random_instances() {
    let clock = Instant::now();

    // Frobenius basis: Sᵗ·A·S equals the standard alternating form of the
    // extracted divisor chain, bit for bit
    let mut rng = ChaCha20Rng::seed_from_u64(0xF20B);
    let mut done = 0;
    while done < 200 {
        let h = 1 + (rng.next_u64() % 3) as usize;
        let n = 2 * h;
        let mut a = IntMat::zero(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let e = BigInt::from((rng.next_u64() % 19) as i64 - 9);
                a[(i, j)] = e.clone();
                a[(j, i)] = -e;
            }
        }
        if det_bareiss(&a).is_zero() {
            continue;
        }
        let (s, d) = frobenius_symplectic_basis(&a).expect("nondegenerate");
        assert_eq!(s.transpose().matmul(&a).matmul(&s), standard_symplectic_gram(&d));
        for k in 1..d.len() {
            assert!((&d[k] % &d[k - 1]).is_zero(), "divisor chain");
        }
        done += 1;
    }

    // saturation: idempotent on the nose, and the input columns are
    // integral combinations of the saturated basis
    let mut rng = ChaCha20Rng::seed_from_u64(0x5A7E);
    let mut done = 0;
    while done < 200 {
        let rows = 2 + (rng.next_u64() % 4) as usize;
        let cols = 1 + (rng.next_u64() % 4) as usize;
        let m = IntMat::from_fn(rows, cols, |_, _| BigInt::from((rng.next_u64() % 19) as i64 - 9));
        if m.is_zero() {
            continue;
        }
        let s = saturate(&m);
        assert_eq!(saturate(&s), s, "saturation is idempotent");
        for div in elementary_divisors(&s) {
            assert!(div.is_one(), "a saturated basis has unit divisors");
        }
        let s_rat = int_to_rat(&s);
        for j in 0..m.cols {
            let col = RatMat::from_fn(rows, 1, |i, _| BigRational::from(m[(i, j)].clone()));
            let sol = rat_gauss(&s_rat, &col);
            let x = sol.particular.expect("column lies in the saturated span");
            assert!(rat_is_integral(&x), "integral coordinates");
        }
        done += 1;
    }

    // splitting idempotents from randomly scaled criterion classes on
    // random product surfaces: f² = f and f·(1−f) = 0 exactly
    let mut rng = ChaCha20Rng::seed_from_u64(0x1DE3);
    let mut done = 0;
    while done < 200 {
        let q1 = rat(1 + (rng.next_u64() % 8) as i64, 1 + (rng.next_u64() % 4) as i64);
        let q2 = if rng.next_u64() % 2 == 0 {
            // isogenous pair: the second modulus is a rational multiple
            &q1 * rat(1 + (rng.next_u64() % 4) as i64, 1 + (rng.next_u64() % 3) as i64)
        } else {
            rat(1 + (rng.next_u64() % 8) as i64, 1 + (rng.next_u64() % 4) as i64)
        };
        let z = CMat::from_fn(2, 2, |i, j| {
            if i != j {
                ExactComplex::zero()
            } else if i == 0 {
                ExactComplex::i().scale(&q1)
            } else {
                ExactComplex::i().scale(&q2)
            }
        });
        let pav = build_period(vec![BigInt::one(); 2], z, None, 192).expect("valid product");
        let search = sub_elliptic_search_g2(&pav, 4).expect("search runs");
        let scale = rat(1 + (rng.next_u64() % 5) as i64, 1 + (rng.next_u64() % 5) as i64);
        for hit in &search.hits {
            let scaled: Vec<BigRational> = hit.coeffs.iter().map(|c| c * &scale).collect();
            let form = NSForm::new(2, scaled);
            let Ok((f, fc, _)) = idempotent_from_ns(&pav, &form) else {
                continue;
            };
            let eye = RatMat::from_fn(4, 4, |i, j| {
                if i == j { BigRational::one() } else { BigRational::zero() }
            });
            assert_eq!(f.matmul(&f), f, "f² = f");
            assert_eq!(fc, eye.sub(&f), "complement is 1 − f");
            assert!(f.matmul(&fc).is_zero(), "f·(1−f) = 0");
            done += 1;
        }
    }

    // elementary divisors against the minor-gcd oracle on 4×4 matrices
    // with entries in [−5, 5]
    let mut rng = ChaCha20Rng::seed_from_u64(0x0D1C);
    for _ in 0..200 {
        let m = IntMat::from_fn(4, 4, |_, _| BigInt::from((rng.next_u64() % 11) as i64 - 5));
        let divisors = elementary_divisors(&m);
        let oracle = minor_gcd_divisors(&m);
        assert_eq!(divisors, oracle, "matrix {m:?}");
    }

    assert!(clock.elapsed() <= Duration::from_secs(60), "{:?}", clock.elapsed());
}

/// Brute-force elementary divisors: dₖ = gₖ/gₖ₋₁ where gₖ is the gcd of
/// all k×k minors, stopping at the first k whose minors all vanish.
fn minor_gcd_divisors(m: &IntMat) -> Vec<BigInt> {
    let n = 4;
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=n {
        let mut g = BigInt::zero();
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                let sub = IntMat::from_fn(k, k, |i, j| m[(rows[i], cols[j])].clone());
                g = num_integer::gcd(g, det_bareiss(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        out.push(pick.clone());
        // next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pick[i] != i + n - k {
                break;
            }
        }
        if pick[i] == i + n - k {
            return out;
        }
        pick[i] += 1;
        for j in (i + 1)..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

/// A uniformly random dyadic in [lo, lo+span) with a full 128-bit mantissa.
fn random_dyadic(rng: &mut ChaCha20Rng, lo: i64, span: u64, den: u64) -> BigRational {
    let mut numer = BigInt::zero();
    for _ in 0..2 {
        numer = (numer << 64) + BigInt::from(rng.next_u64());
    }
    // numer / 2¹²⁸ ∈ [0, 1)
    let unit = BigRational::new(numer, BigInt::one() << 128);
    (unit * BigRational::from(BigInt::from(span)) + BigRational::from(BigInt::from(lo)))
        / BigRational::from(BigInt::from(den))
}

fn random_h1_point(rng: &mut ChaCha20Rng, prec: u32) -> ExactComplex {
    // real part in [−1/2, 1/2), imaginary part in [3/4, 11/4)
    let re = random_dyadic(rng, -1, 2, 2);
    let im = random_dyadic(rng, 3, 8, 4);
    ExactComplex::dec(CF::from_rats(&re, &im, prec))
}

/// Products of random elliptic curves round-trip: split degree 1 and each
/// leaf reproduces its input modulus after fundamental-domain reduction,
/// to 2⁻¹⁰⁰.
#[test]
fn random_products_round_trip_through_the_pipeline() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x70D0);
    let tol = pow2(-100, 64);
    for case in 0..50 {
        let z1 = random_h1_point(&mut rng, 128);
        let z2 = random_h1_point(&mut rng, 128);
        let z = CMat::from_fn(2, 2, |i, j| {
            if i != j {
                ExactComplex::zero()
            } else if i == 0 {
                z1.clone()
            } else {
                z2.clone()
            }
        });
        let pav = build_period(vec![BigInt::one(); 2], z, None, 128).expect("valid product");
        let tree = poincare_decompose(&pav, &DecomposeOptions::default())
            .unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert_eq!(tree.total_degree(), BigInt::one(), "case {case}: degree 1");
        let leaves = tree.leaves();
        assert_eq!(leaves.len(), 2, "case {case}");
        for (which, input) in [z1, z2].iter().enumerate() {
            let expected = elliptic_normalize(&curve_dec(input)).expect("elliptic").reduced;
            let matched = leaves.iter().any(|(_, leaf)| match leaf {
                LeafKind::Elliptic(r) => {
                    r.tau.eval(128).dist(&input.eval(128)) <= tol
                        && r.reduced.eval(128).dist(&expected.eval(128)) <= tol
                }
                _ => false,
            });
            assert!(matched, "case {case}: factor {which} recovered");
        }
    }
}

fn curve_dec(w: &ExactComplex) -> PolarizedAV {
    build_period(vec![BigInt::one()], CMat::from_rows(vec![vec![w.clone()]]), None, 128)
        .expect("valid curve")
}

/// Negative control: generic numeric surfaces admit no splitting class up
/// to height 24, and the result says so honestly — search exhausted at
/// the stated height, simplicity not certified, no crash.
#[test]
fn generic_surfaces_exhaust_the_search_honestly() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x8E9A);
    for case in 0..25 {
        let z11 = random_h1_point(&mut rng, 128);
        let z22 = random_h1_point(&mut rng, 128);
        let re = random_dyadic(&mut rng, -1, 2, 4);
        let im = random_dyadic(&mut rng, -1, 2, 4);
        let z12 = ExactComplex::dec(CF::from_rats(&re, &im, 128));
        let z = CMat::from_rows(vec![
            vec![z11.clone(), z12.clone()],
            vec![z12, z22.clone()],
        ]);
        let pav = build_period(vec![BigInt::one(); 2], z, None, 128).expect("valid surface");

        let search = sub_elliptic_search_g2(&pav, 24).unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert!(search.hits.is_empty(), "case {case}: no classes below the bound");
        assert!(!search.certifies_simple(), "case {case}: no simplicity claim");
        assert_eq!(search.searched_height, 24, "case {case}: exhausted height reported");

        let tree = poincare_decompose(&pav, &DecomposeOptions::default())
            .unwrap_or_else(|e| panic!("case {case}: {e}"));
        match &tree.node {
            TreeNode::Leaf(LeafKind::SearchExhausted { height }) => {
                assert_eq!(*height, 24, "case {case}: leaf carries the height");
            }
            other => panic!("case {case}: unexpected node {other:?}"),
        }
    }
}
