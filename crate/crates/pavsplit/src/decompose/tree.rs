//! Recursive splitting into simple factors.
//!
//! Every polarized abelian variety is isogenous to a product of simple
//! polarized varieties, and the factors are unique up to isogeny and order.
//! One step of the reduction is effective here: a decomposable rational
//! class `ω` of the Néron–Severi group induces the scalar-idempotent
//! `f_ω = J_E⁻¹·E_ω`, whose image and complement are complementary abelian
//! subvarieties.  Interleaving their symplectic bases as
//! `P = (β₁ β₁′ β₂ β₂′)` gives the rational representation of the product
//! isogeny `A_ω × A_ω^⊥ → A`; its degree is `|det P|`, and the pullback of
//! the polarization along it is exactly the direct sum of the induced
//! polarizations, which is verified on every split.  Recursing on the two
//! factors yields a binary tree whose leaves are elliptic curves, surfaces
//! whose simplicity was decided in exact arithmetic, or surfaces where a
//! bounded search ran out of height.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::latalg::{standard_symplectic_gram, IntMat};
use crate::pav::{isogeny_degree, primitive_rescale, PavError, PolarizedAV};
use crate::subvariety::SubvarietyEmbedding;

use super::elliptic::{elliptic_normalize, EllipticReport};
use super::search::{sub_elliptic_search_g2, SubEllipticSearch};
use super::wedge::{ns_kernel, ns_membership, NSForm};
use super::{decompose_step, idempotent_from_ns, DecomposeError};

/// Largest dimension the automatic class search will attempt; beyond it a
/// splitting class must be supplied by the caller.
const SEARCH_DIM_GATE: usize = 8;

/// Budget for the exact kernel heuristic above dimension two.
const HEURISTIC_CAP: usize = 500;
const HEURISTIC_BOUND: i64 = 4;

/// Verdict at a tree leaf.
#[derive(Clone, Debug)]
pub enum LeafKind {
    /// Dimension one: the factor is elliptic, with its modulus report.
    Elliptic(EllipticReport),
    /// The factor has no elliptic subvariety; emptiness of the criterion
    /// equations was decided in exact arithmetic.
    SimpleCertified,
    /// No splitting class was found within the height bound (`height = 0`
    /// when no bounded enumeration exists at this dimension).  The factor
    /// may or may not be simple.
    SearchExhausted { height: u32 },
}

/// One node of the splitting tree.
#[derive(Clone, Debug)]
pub enum TreeNode {
    Leaf(LeafKind),
    Split {
        /// The class that produced the splitting idempotent.
        form: NSForm,
        /// Inclusion data and subtree of the image factor.
        image: Box<(SubvarietyEmbedding, DecompositionTree)>,
        /// Inclusion data and subtree of the complementary factor.
        complement: Box<(SubvarietyEmbedding, DecompositionTree)>,
        /// Rational representation of the product isogeny at this step.
        assembled: IntMat,
        /// `|det|` of the assembled matrix: the kernel order of this step.
        degree: BigInt,
    },
}

/// Splitting tree of a polarized abelian variety.
#[derive(Clone, Debug)]
pub struct DecompositionTree {
    /// The variety decomposed at this node, content-normalized so that its
    /// polarization type is primitive.
    pub variety: PolarizedAV,
    /// Content divided out of the incoming type (`1` if it was primitive).
    pub content: BigInt,
    /// The surface criterion search performed at this node, when one ran.
    pub search: Option<SubEllipticSearch>,
    pub node: TreeNode,
}

impl DecompositionTree {
    /// All leaves, left to right, each with the factor it describes.
    pub fn leaves(&self) -> Vec<(&PolarizedAV, &LeafKind)> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<(&'a PolarizedAV, &'a LeafKind)>) {
        match &self.node {
            TreeNode::Leaf(kind) => out.push((&self.variety, kind)),
            TreeNode::Split { image, complement, .. } => {
                image.1.collect(out);
                complement.1.collect(out);
            }
        }
    }

    /// Degree of the composite isogeny from the product of all leaf
    /// factors onto this variety: the product of the split degrees.
    pub fn total_degree(&self) -> BigInt {
        match &self.node {
            TreeNode::Leaf(_) => BigInt::one(),
            TreeNode::Split { degree, image, complement, .. } => {
                degree * image.1.total_degree() * complement.1.total_degree()
            }
        }
    }

    /// Whether every leaf is either elliptic or certified simple.
    pub fn fully_reduced(&self) -> bool {
        self.leaves()
            .iter()
            .all(|(_, k)| !matches!(k, LeafKind::SearchExhausted { .. }))
    }
}

/// Knobs for [`poincare_decompose`].
#[derive(Clone, Debug)]
pub struct DecomposeOptions {
    /// Height bound of the surface quadric enumeration.
    pub height: u32,
    /// Splitting-class coefficient vectors to try before any search; each
    /// is offered at every node whose pair count matches its length.
    pub candidates: Vec<Vec<BigRational>>,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { height: 24, candidates: Vec::new() }
    }
}

/// Decompose a polarized abelian variety into a splitting tree.
///
/// The input is content-normalized first.  Curves become elliptic leaves.
/// On surfaces the criterion search runs up to `opts.height`; a found class
/// splits the surface and the recursion continues on both factors, while an
/// empty search closes the node as certified simple or search-exhausted.
/// Above dimension two, caller-supplied candidates are tried first, then an
/// exact heuristic over a kernel basis of the Néron–Severi space; past
/// dimension eight only candidates are accepted.
pub fn poincare_decompose(
    pav: &PolarizedAV,
    opts: &DecomposeOptions,
) -> Result<DecompositionTree, DecomposeError> {
    let (prim, content) = primitive_rescale(pav)?;
    let g = prim.dim();
    if g == 1 {
        let report = elliptic_normalize(&prim)?;
        return Ok(DecompositionTree {
            variety: prim,
            content,
            search: None,
            node: TreeNode::Leaf(LeafKind::Elliptic(report)),
        });
    }
    for cand in &opts.candidates {
        if cand.len() != NSForm::pair_count(g) {
            continue;
        }
        let form = NSForm::new(g, cand.clone());
        if !ns_membership(&prim, &form).member {
            continue;
        }
        match split_with(&prim, form, opts) {
            Ok(node) => {
                return Ok(DecompositionTree { variety: prim, content, search: None, node })
            }
            Err(DecomposeError::NotIdempotent | DecomposeError::DegenerateRank(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    if g > SEARCH_DIM_GATE {
        return Err(DecomposeError::TooLarge(g));
    }
    if g == 2 {
        let search = sub_elliptic_search_g2(&prim, opts.height)?;
        if let Some(rep) = search.representative.clone() {
            let node = split_with(&prim, rep, opts)?;
            return Ok(DecompositionTree { variety: prim, content, search: Some(search), node });
        }
        let kind = if search.certifies_simple() {
            LeafKind::SimpleCertified
        } else {
            LeafKind::SearchExhausted { height: search.searched_height }
        };
        return Ok(DecompositionTree {
            variety: prim,
            content,
            search: Some(search),
            node: TreeNode::Leaf(kind),
        });
    }
    if let Some(node) = kernel_heuristic(&prim, opts)? {
        return Ok(DecompositionTree { variety: prim, content, search: None, node });
    }
    Ok(DecompositionTree {
        variety: prim,
        content,
        search: None,
        node: TreeNode::Leaf(LeafKind::SearchExhausted { height: 0 }),
    })
}

/// Split off the factor cut out by one class and recurse on both sides.
fn split_with(
    prim: &PolarizedAV,
    form: NSForm,
    opts: &DecomposeOptions,
) -> Result<TreeNode, DecomposeError> {
    let (f, fc, _) = idempotent_from_ns(prim, &form)?;
    let (im, co) = decompose_step(prim, &f, &fc)?;
    let assembled = assemble_product(&im, &co);
    let mut dd = im.sub.etype.clone();
    dd.extend_from_slice(&co.sub.etype);
    let gram = assembled.transpose().matmul(&prim.j_gram()).matmul(&assembled);
    if gram != standard_symplectic_gram(&dd) {
        return Err(DecomposeError::Pav(PavError::RelationViolated(
            "product basis does not pull the polarization back to a direct sum".into(),
        )));
    }
    let degree = isogeny_degree(&assembled)?;
    let image_tree = poincare_decompose(&im.sub, opts)?;
    let complement_tree = poincare_decompose(&co.sub, opts)?;
    Ok(TreeNode::Split {
        form,
        image: Box::new((im, image_tree)),
        complement: Box::new((co, complement_tree)),
        assembled,
        degree,
    })
}

/// Interleave the two factor bases `(β₁ β₂)`, `(β₁′ β₂′)` into the product
/// isogeny representation `(β₁ β₁′ β₂ β₂′)`.
fn assemble_product(a: &SubvarietyEmbedding, b: &SubvarietyEmbedding) -> IntMat {
    let (h1, h2) = (a.sub.dim(), b.sub.dim());
    let cols = |m: &IntMat, lo: usize, hi: usize| {
        m.select_cols(&(lo..hi).collect::<Vec<_>>())
    };
    cols(&a.basis, 0, h1)
        .hstack(&cols(&b.basis, 0, h2))
        .hstack(&cols(&a.basis, h1, 2 * h1))
        .hstack(&cols(&b.basis, h2, 2 * h2))
}

/// Above dimension two, look for a splitting class among small combinations
/// of a kernel basis of the Néron–Severi space.  Exact entries only; the
/// attempt budget keeps the stage bounded.
fn kernel_heuristic(
    prim: &PolarizedAV,
    opts: &DecomposeOptions,
) -> Result<Option<TreeNode>, DecomposeError> {
    let Some(basis) = ns_kernel(prim) else { return Ok(None) };
    let g = prim.dim();
    let mut tried = 0usize;
    let attempt = |v: Vec<BigRational>,
                   tried: &mut usize|
     -> Result<Option<TreeNode>, DecomposeError> {
        *tried += 1;
        match split_with(prim, NSForm::new(g, v), opts) {
            Ok(node) => Ok(Some(node)),
            Err(
                DecomposeError::NotIdempotent
                | DecomposeError::DegenerateRank(_)
                | DecomposeError::NotMember,
            ) => Ok(None),
            Err(e) => Err(e),
        }
    };
    for b in &basis {
        if tried >= HEURISTIC_CAP {
            return Ok(None);
        }
        if let Some(node) = attempt(b.clone(), &mut tried)? {
            return Ok(Some(node));
        }
    }
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            for c1 in 1..=HEURISTIC_BOUND {
                for c2 in -HEURISTIC_BOUND..=HEURISTIC_BOUND {
                    if c2 == 0 {
                        continue;
                    }
                    if tried >= HEURISTIC_CAP {
                        return Ok(None);
                    }
                    let v: Vec<BigRational> = basis[i]
                        .iter()
                        .zip(&basis[j])
                        .map(|(x, y)| {
                            x * BigRational::from(BigInt::from(c1))
                                + y * BigRational::from(BigInt::from(c2))
                        })
                        .collect();
                    if let Some(node) = attempt(v, &mut tried)? {
                        return Ok(Some(node));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latalg::CMat;
    use crate::numerics::{ExactComplex, CF};
    use crate::pav::build_period;
    use num_traits::Zero;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn rats(v: [i64; 6], den: i64) -> Vec<BigRational> {
        v.iter().map(|&n| rat(n, den)).collect()
    }

    /// Principal surface with Riemann matrix
    /// `[[(1+i√2)/2, −1/2], [−1/2, (1+i√2)/2]]`: isogenous to the square of
    /// a curve with multiplication by `√−2`.
    fn quaternionic_surface() -> PolarizedAV {
        let diag = ExactComplex::one()
            .add(&ExactComplex::sqrt_int(-2))
            .scale(&rat(1, 2));
        let off = ExactComplex::rat(rat(-1, 2));
        let z = CMat::from_rows(vec![
            vec![diag.clone(), off.clone()],
            vec![off, diag],
        ]);
        build_period(vec![BigInt::one(), BigInt::one()], z, None, 256).unwrap()
    }

    /// Type-(1,3) surface with Riemann matrix
    /// `[[3i√6/2, 2i√6], [2i√6, 3i√6]]`.
    fn sqrt_six_surface(scale_by: i64) -> PolarizedAV {
        let s6 = ExactComplex::sqrt_int(-6);
        let s = rat(scale_by, 1);
        let z = CMat::from_rows(vec![
            vec![s6.scale(&(rat(3, 2) * &s)), s6.scale(&(rat(2, 1) * &s))],
            vec![s6.scale(&(rat(2, 1) * &s)), s6.scale(&(rat(3, 1) * &s))],
        ]);
        let e = vec![BigInt::from(scale_by), BigInt::from(3 * scale_by)];
        build_period(e, z, None, 256).unwrap()
    }

    fn diag_product(moduli: &[ExactComplex]) -> PolarizedAV {
        let g = moduli.len();
        let z = CMat::from_fn(g, g, |i, j| {
            if i == j {
                moduli[i].clone()
            } else {
                ExactComplex::zero()
            }
        });
        build_period(vec![BigInt::one(); g], z, None, 256).unwrap()
    }

    fn elliptic_leaves(tree: &DecompositionTree) -> Vec<EllipticReport> {
        tree.leaves()
            .iter()
            .filter_map(|(_, k)| match k {
                LeafKind::Elliptic(r) => Some(r.clone()),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn quaternionic_surface_splits_into_isogenous_curves() {
        let s = quaternionic_surface();
        let tree = poincare_decompose(&s, &DecomposeOptions::default()).unwrap();
        assert!(tree.content.is_one());
        let TreeNode::Split { degree, .. } = &tree.node else {
            panic!("expected a split")
        };
        assert_eq!(*degree, BigInt::from(4));
        assert_eq!(tree.total_degree(), BigInt::from(4));
        assert!(tree.fully_reduced());

        // both factors reduce to the modulus i√2 of discriminant −8; that
        // class number is one, so the curves are isomorphic after reduction
        let leaves = elliptic_leaves(&tree);
        assert_eq!(leaves.len(), 2);
        let target = ExactComplex::sqrt_int(-2);
        for leaf in &leaves {
            assert_eq!(leaf.reduced.eq_exact(&target), Some(true));
            let cm = leaf.cm.as_ref().unwrap();
            assert_eq!(cm.discriminant, BigInt::from(-8));
            assert!(cm.certified);
        }

        // the solution family is exact and contains the classical class of
        // the quaternionic splitting
        let search = tree.search.as_ref().unwrap();
        assert!(search.certified);
        let family = search.family.as_ref().unwrap();
        assert!(family.contains(&rats([1, -1, 1, 0, -1, 1], 2)));
    }

    #[test]
    fn sqrt_six_surface_splits_into_the_derived_curves() {
        let s = sqrt_six_surface(1);
        let tree = poincare_decompose(&s, &DecomposeOptions::default()).unwrap();
        assert!(tree.content.is_one());

        let search = tree.search.as_ref().unwrap();
        assert!(search.certified);
        let family = search.family.as_ref().unwrap();
        let known: Vec<BigRational> =
            vec![rat(0, 1), rat(-1, 1), rat(-4, 3), rat(0, 1), rat(0, 1), rat(0, 1)];
        assert!(family.contains(&known));
        // the known class is itself the canonical representative: the only
        // solution of height ≤ 1 in the enumeration
        assert_eq!(search.representative.as_ref().unwrap().coeffs, known);

        let leaves = elliptic_leaves(&tree);
        assert_eq!(leaves.len(), 2);
        let s6 = ExactComplex::sqrt_int(-6);
        // image curve: modulus i√6/6, reduced i√6
        assert_eq!(leaves[0].tau.eq_exact(&s6.scale(&rat(1, 6))), Some(true));
        assert_eq!(leaves[0].reduced.eq_exact(&s6), Some(true));
        // complementary curve: modulus i√6/3, reduced i√6/2
        assert_eq!(leaves[1].tau.eq_exact(&s6.scale(&rat(1, 3))), Some(true));
        assert_eq!(leaves[1].reduced.eq_exact(&s6.scale(&rat(1, 2))), Some(true));
        // both have multiplication by the order of discriminant −24 in
        // ℚ(√−6): isogenous but not isomorphic (class number two)
        for leaf in &leaves {
            let cm = leaf.cm.as_ref().unwrap();
            assert_eq!(cm.discriminant, BigInt::from(-24));
            assert!(cm.certified);
        }
        assert_eq!(tree.total_degree(), BigInt::from(27));
    }

    #[test]
    fn content_is_divided_out_before_splitting() {
        // the same surface scaled by 4: type (4,12) with Riemann matrix 4Z
        let scaled = sqrt_six_surface(4);
        let tree = poincare_decompose(&scaled, &DecomposeOptions::default()).unwrap();
        assert_eq!(tree.content, BigInt::from(4));
        assert_eq!(tree.variety.etype, vec![BigInt::one(), BigInt::from(3)]);
        let plain = sqrt_six_surface(1);
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(
                    tree.variety.z[(r, c)].eq_exact(&plain.z[(r, c)]),
                    Some(true)
                );
            }
        }
        let leaves = elliptic_leaves(&tree);
        let s6 = ExactComplex::sqrt_int(-6);
        assert_eq!(leaves[0].tau.eq_exact(&s6.scale(&rat(1, 6))), Some(true));
    }

    #[test]
    fn product_of_two_curves_splits_with_degree_one() {
        let i = ExactComplex::i();
        let product = diag_product(&[i.clone(), i.scale(&rat(2, 1))]);
        let tree = poincare_decompose(&product, &DecomposeOptions::default()).unwrap();
        assert_eq!(tree.total_degree(), BigInt::one());
        let leaves = elliptic_leaves(&tree);
        assert_eq!(leaves.len(), 2);
        assert_eq!(leaves[0].tau.eq_exact(&i), Some(true));
        assert_eq!(leaves[1].tau.eq_exact(&i.scale(&rat(2, 1))), Some(true));
        // already in the fundamental domain
        assert_eq!(leaves[1].reduced.eq_exact(&i.scale(&rat(2, 1))), Some(true));
    }

    #[test]
    fn threefold_product_recurses_through_the_kernel_heuristic() {
        let i = ExactComplex::i();
        let moduli = [i.clone(), i.scale(&rat(2, 1)), i.scale(&rat(3, 1))];
        let product = diag_product(&moduli);
        let tree = poincare_decompose(&product, &DecomposeOptions::default()).unwrap();
        assert_eq!(tree.total_degree(), BigInt::one());
        let leaves = elliptic_leaves(&tree);
        assert_eq!(leaves.len(), 3);
        // every input modulus appears exactly once among the leaves
        for target in &moduli {
            let found = leaves
                .iter()
                .filter(|r| r.tau.eq_exact(target) == Some(true))
                .count();
            assert_eq!(found, 1, "modulus should appear once among the leaves");
        }
    }

    #[test]
    fn exactly_simple_surface_closes_as_a_certified_leaf() {
        // Im Z positive definite with entries spanning ℚ(√−2, √−3): the
        // criterion equations are exactly inconsistent with the quadric
        let z11 = ExactComplex::sqrt_int(-2);
        let z22 = ExactComplex::sqrt_int(-3);
        let z12 = z11.add(&z22).scale(&rat(1, 4));
        let z = CMat::from_rows(vec![
            vec![z11, z12.clone()],
            vec![z12, z22],
        ]);
        let pav = build_period(vec![BigInt::one(), BigInt::one()], z, None, 256).unwrap();
        let tree = poincare_decompose(&pav, &DecomposeOptions::default()).unwrap();
        assert!(matches!(tree.node, TreeNode::Leaf(LeafKind::SimpleCertified)));
        assert!(tree.fully_reduced());
        assert_eq!(tree.total_degree(), BigInt::one());
        let search = tree.search.as_ref().unwrap();
        assert!(search.certifies_simple());
    }

    #[test]
    fn floating_surface_reports_the_exhausted_height() {
        // generic floating entries admit no discoverable relation: the
        // search exhausts its height without certifying anything
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        let mut dyadic = |lo: i64| {
            let mut n = BigInt::zero();
            for _ in 0..4 {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                n = (n << 64) + BigInt::from(state);
            }
            BigRational::new(n, BigInt::one() << 256u32) + BigRational::from(BigInt::from(lo))
        };
        let z11 = CF::from_rats(&dyadic(0), &dyadic(1), 256);
        let z22 = CF::from_rats(&dyadic(0), &dyadic(2), 256);
        let z12 = CF::from_rats(&(dyadic(0) / rat(4, 1)), &(dyadic(0) / rat(4, 1)), 256);
        let z = CMat::from_rows(vec![
            vec![ExactComplex::dec(z11), ExactComplex::dec(z12.clone())],
            vec![ExactComplex::dec(z12), ExactComplex::dec(z22)],
        ]);
        let pav = build_period(vec![BigInt::one(), BigInt::one()], z, None, 256).unwrap();
        let opts = DecomposeOptions { height: 3, ..DecomposeOptions::default() };
        let tree = poincare_decompose(&pav, &opts).unwrap();
        match &tree.node {
            TreeNode::Leaf(LeafKind::SearchExhausted { height }) => assert_eq!(*height, 3),
            other => panic!("expected an exhausted leaf, got {other:?}"),
        }
        assert!(!tree.fully_reduced());
        assert!(!tree.search.as_ref().unwrap().certified);
    }

    #[test]
    fn candidates_bypass_the_search_and_gate_large_inputs() {
        let i = ExactComplex::i();
        let moduli: Vec<ExactComplex> =
            (1..=3).map(|k| i.scale(&rat(k, 1))).collect();
        let product = diag_product(&moduli);
        // the class of the projection onto the first factor: the pair
        // (0, 3) of a genus-3 period carries coefficient −1
        let mut cand = vec![BigRational::zero(); NSForm::pair_count(3)];
        cand[NSForm::pair_index(3, 0, 3)] = rat(-1, 1);
        let opts = DecomposeOptions { candidates: vec![cand.clone()], ..Default::default() };
        let tree = poincare_decompose(&product, &opts).unwrap();
        let TreeNode::Split { form, image, .. } = &tree.node else {
            panic!("expected a split")
        };
        assert_eq!(form.coeffs, cand);
        assert_eq!(image.0.sub.dim(), 1);
        let leaves = elliptic_leaves(&tree);
        assert_eq!(leaves[0].tau.eq_exact(&i), Some(true));

        // past the dimension gate, no candidates means no decomposition
        let big = diag_product(
            &(1..=9).map(|k| i.scale(&rat(k, 1))).collect::<Vec<_>>(),
        );
        match poincare_decompose(&big, &DecomposeOptions::default()) {
            Err(DecomposeError::TooLarge(9)) => {}
            other => panic!("expected the dimension gate, got {other:?}"),
        }
    }
}
