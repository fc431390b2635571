//! Congruences on Bruck-Reilly extensions `BR(G, alpha)` and tests for their
//! perfectness.
//!
//! A congruence `rho` on a semigroup is perfect when the product of any two
//! classes is again a whole class. The crate enumerates the
//! idempotent-separating and group congruences of `BR(G, alpha)` for finite
//! groups given by Cayley tables and for `Z^r` with an integer matrix,
//! decides perfectness, and cross-checks the answer on finite windows by
//! brute force.

pub mod backends;
pub mod bicyclic;
pub mod bruck_reilly;
pub mod classifier;
pub mod congruence;
pub mod group;
pub mod oracle;
pub mod record;
pub mod specfile;

pub use bicyclic::{Bicyclic, Side};
pub use bruck_reilly::{forgetful, BrContext, BrElement};
pub use classifier::{classify, coset_coverage, PerfectVerdict, DEFAULT_NMAX};
pub use congruence::{catalog, validate_gc, validate_is, Catalog, CongruenceKind, CongruenceSpec};
pub use group::{Endo, GroupContext, GroupElement, GroupError, Subgroup};
