//! Small named extensions used throughout the tests and examples.

use crate::bruck_reilly::BrContext;
use crate::group::{FiniteGroup, GroupContext, IntMatrix};

/// `BR({e}, id)`, the bicyclic semigroup.
pub fn bicyclic() -> BrContext {
    BrContext::bicyclic()
}

fn finite(group: FiniteGroup, f: impl Fn(usize) -> usize) -> BrContext {
    let ctx = GroupContext::finite(group);
    let alpha = ctx.endo_from_fn(f).expect("valid endomorphism");
    BrContext::new(ctx, alpha).expect("matching backend")
}

/// `Z/2` with the identity map.
pub fn z2_identity() -> BrContext {
    finite(FiniteGroup::cyclic(2), |i| i)
}

/// `Z/4` with `x -> 2x`.
pub fn z4_doubling() -> BrContext {
    finite(FiniteGroup::cyclic(4), |i| (2 * i) % 4)
}

/// `Z/6` with `x -> 5x`.
pub fn z6_negation() -> BrContext {
    finite(FiniteGroup::cyclic(6), |i| (5 * i) % 6)
}

/// `S3` with the identity map.
pub fn s3_identity() -> BrContext {
    finite(FiniteGroup::symmetric(3), |i| i)
}

/// Transpositions of `S3` in index order (the elements of order two).
pub fn s3_transpositions() -> Vec<usize> {
    let s3 = FiniteGroup::symmetric(3);
    (1..6).filter(|&i| s3.mul(i, i) == 0).collect()
}

/// `S3` with even permutations sent to the identity and odd ones to a fixed
/// transposition; the image has order two.
pub fn s3_sign() -> BrContext {
    let t = s3_transpositions()[0];
    let odd = s3_transpositions();
    finite(FiniteGroup::symmetric(3), move |i| if odd.contains(&i) { t } else { 0 })
}

/// `Z` with `x -> 2x`.
pub fn z_doubling() -> BrContext {
    let ctx = GroupContext::free_abelian(1).expect("positive rank");
    let alpha = ctx
        .endo_from_matrix(IntMatrix::from_row_major(1, 1, vec![2]))
        .expect("square matrix");
    BrContext::new(ctx, alpha).expect("matching backend")
}

/// All finite test backends, labelled.
pub fn finite_suite() -> Vec<(&'static str, BrContext)> {
    vec![
        ("trivial/id", bicyclic()),
        ("Z2/id", z2_identity()),
        ("Z4/x2", z4_doubling()),
        ("Z6/x5", z6_negation()),
        ("S3/id", s3_identity()),
        ("S3/sign", s3_sign()),
    ]
}
