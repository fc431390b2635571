//! Perfectness decisions for validated congruences, and explicit class
//! representatives with a vanishing left or right index.
//!
//! Idempotent-separating congruences are always perfect. Group congruences of
//! period zero never are. A group congruence `(N, z, k)` with `k >= 1` is
//! perfect exactly when `G alpha^n` meets every coset `Nx` for every `n >= 1`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bruck_reilly::{BrContext, BrElement};
use crate::congruence::{CongruenceKind, CongruenceSpec};
use crate::group::{Endo, GroupContext, GroupElement, Lattice, Subgroup};

/// Default number of powers checked directly alongside the `n = 1` reduction.
pub const DEFAULT_NMAX: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(
        "internal inconsistency: the reduced coset coverage test disagrees with the direct check for alpha^{n}"
    )]
    Inconsistent { n: u64 },
    #[error("n_max must be positive")]
    ZeroNmax,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("class witnesses need a group congruence with positive period")]
    NotPositivePeriod,
    #[error("congruence is not perfect: {0:?}")]
    NotPerfect(PerfectVerdict),
    #[error("no h solves the coset equation for {element}")]
    NoSolution { element: BrElement },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Perfect,
    NotPerfect,
}

/// Why a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    /// Idempotent-separating congruences are perfect.
    IdempotentSeparating,
    /// Group congruences with period zero are never perfect.
    ZeroPeriod,
    /// Positive period and every power image meets every coset of `N`.
    CosetsCovered,
    /// Positive period and some coset `Nx` misses `G alpha^n`.
    CosetMissed,
}

/// A coset `Nx` disjoint from `G alpha^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetGap {
    pub n: u64,
    pub x: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectVerdict {
    pub status: Status,
    pub reason: Reason,
    /// Present exactly when `reason` is [`Reason::CosetMissed`].
    pub evidence: Option<CosetGap>,
}

impl PerfectVerdict {
    pub fn is_perfect(&self) -> bool {
        self.status == Status::Perfect
    }

    fn new(status: Status, reason: Reason) -> Self {
        PerfectVerdict {
            status,
            reason,
            evidence: None,
        }
    }
}

/// Outcome of the coset coverage test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coverage {
    pub holds: bool,
    pub evidence: Option<CosetGap>,
    /// Number of powers that were also checked directly.
    pub powers_checked: u64,
}

/// Decides whether `G alpha^n` meets every coset of `N` for all `n >= 1`.
///
/// Since `N alpha` lies in `N`, `N (G alpha) = G` implies
/// `N (G alpha^{n+1}) = G`, so the case `n = 1` decides the question. That
/// reduction is computed through the induced map on `G/N` (finite) or the
/// lattice sum `N + A Z^r` (free abelian); every `n <= n_max` is then checked
/// again by a direct membership search, and any disagreement is an error.
pub fn coset_coverage(s: &BrContext, normal: &Subgroup, n_max: u64) -> Result<Coverage, ClassifyError> {
    if n_max == 0 {
        return Err(ClassifyError::ZeroNmax);
    }
    let reduced = coverage_reduction(s, normal);
    for n in 1..=n_max {
        let direct = direct_gap(s, normal, n);
        // N alpha in N makes the n = 1 answer hold for every n.
        if reduced.is_some() != direct.is_some() {
            return Err(ClassifyError::Inconsistent { n });
        }
    }
    Ok(Coverage {
        holds: reduced.is_none(),
        evidence: reduced,
        powers_checked: n_max,
    })
}

/// `n = 1` test through the induced coset map; returns a missed coset.
fn coverage_reduction(s: &BrContext, normal: &Subgroup) -> Option<CosetGap> {
    let group = &s.group;
    match (group, normal, &s.alpha) {
        (GroupContext::Finite(g), Subgroup::Finite(_), _) => {
            let mut hit = vec![false; g.order()];
            for a in group.elements().unwrap_or_default() {
                let img = group.endo_apply(&s.alpha, &a);
                if let GroupElement::Index(rep) = group.coset_representative(normal, &img) {
                    hit[rep] = true;
                }
            }
            (0..g.order())
                .map(GroupElement::Index)
                .find(|x| {
                    let rep = group.coset_representative(normal, x);
                    !hit[rep.as_index().expect("finite element")]
                })
                .map(|x| CosetGap { n: 1, x })
        }
        (GroupContext::FreeAbelian { rank }, Subgroup::Lattice(l), Endo::Matrix(a)) => {
            let sum = l.sum(&Lattice::from_matrix(a));
            if sum.is_full() {
                None
            } else {
                let x = (0..*rank)
                    .map(|i| unit_vector(*rank, i))
                    .find(|e| !sum.contains(e))
                    .expect("a proper lattice misses some unit vector");
                Some(CosetGap {
                    n: 1,
                    x: GroupElement::Vector(x),
                })
            }
        }
        _ => panic!("subgroup does not match backend"),
    }
}

/// Direct search for `x` with `Nx` disjoint from `G alpha^n`.
fn direct_gap(s: &BrContext, normal: &Subgroup, n: u64) -> Option<CosetGap> {
    let group = &s.group;
    match (group, normal) {
        (GroupContext::Finite(_), Subgroup::Finite(_)) => {
            let elements = group.elements().unwrap_or_default();
            let image: Vec<GroupElement> = elements.iter().map(|a| s.alpha_pow(n, a)).collect();
            elements
                .iter()
                .find(|x| !image.iter().any(|y| group.in_coset(normal, y, x)))
                .map(|x| CosetGap { n, x: x.clone() })
        }
        (GroupContext::FreeAbelian { rank }, Subgroup::Lattice(l)) => {
            let Endo::Matrix(a) = &s.alpha else {
                panic!("endomorphism does not match backend")
            };
            // Nx meets the image iff x = N-part + A^n y for integers, i.e. x solves [N | A^n] w = x.
            let stacked = l.basis().hconcat(&a.pow(n));
            (0..*rank)
                .map(|i| unit_vector(*rank, i))
                .find(|e| crate::group::lattice::solve_integer(&stacked, e).is_none())
                .map(|x| CosetGap {
                    n,
                    x: GroupElement::Vector(x),
                })
        }
        _ => panic!("subgroup does not match backend"),
    }
}

fn unit_vector(rank: usize, i: usize) -> Vec<num_bigint::BigInt> {
    (0..rank).map(|j| num_bigint::BigInt::from(i64::from(i == j))).collect()
}

/// Perfectness verdict for a validated congruence.
pub fn classify(s: &BrContext, spec: &CongruenceSpec, n_max: u64) -> Result<PerfectVerdict, ClassifyError> {
    match spec.kind() {
        CongruenceKind::IdempotentSeparating { .. } => {
            Ok(PerfectVerdict::new(Status::Perfect, Reason::IdempotentSeparating))
        }
        CongruenceKind::Group { k: 0, .. } => Ok(PerfectVerdict::new(Status::NotPerfect, Reason::ZeroPeriod)),
        CongruenceKind::Group { normal, .. } => {
            let cov = coset_coverage(s, normal, n_max)?;
            if cov.holds {
                Ok(PerfectVerdict::new(Status::Perfect, Reason::CosetsCovered))
            } else {
                Ok(PerfectVerdict {
                    status: Status::NotPerfect,
                    reason: Reason::CosetMissed,
                    evidence: cov.evidence,
                })
            }
        }
    }
}

/// Members `(0, h, q)` and `(m', g', 0)` of the class of `x` for a perfect group
/// congruence of positive period.
///
/// For `x = (i, f, j)` the least `l >= 1` with `q = j - i + k l >= 0` is taken
/// and `h` solves `h alpha^j in N z^l (f alpha^q)`. The right witness is the
/// inverse of the left witness of `x^-1`.
pub fn class_witnesses(
    s: &BrContext,
    spec: &CongruenceSpec,
    x: &BrElement,
    n_max: u64,
) -> Result<(BrElement, BrElement), WitnessError> {
    let CongruenceKind::Group { k, .. } = spec.kind() else {
        return Err(WitnessError::NotPositivePeriod);
    };
    if *k == 0 {
        return Err(WitnessError::NotPositivePeriod);
    }
    let verdict = classify(s, spec, n_max)?;
    if !verdict.is_perfect() {
        return Err(WitnessError::NotPerfect(verdict));
    }
    let left = left_witness(s, spec, x)?;
    let right = s.inv(&left_witness(s, spec, &s.inv(x))?);
    Ok((left, right))
}

fn left_witness(s: &BrContext, spec: &CongruenceSpec, x: &BrElement) -> Result<BrElement, WitnessError> {
    let CongruenceKind::Group { normal, z, k } = spec.kind() else {
        return Err(WitnessError::NotPositivePeriod);
    };
    let group = &s.group;
    let (i, j, k) = (x.m as i64, x.n as i64, *k as i64);
    // least l >= 1 with j - i + k l >= 0
    let l = if j - i + k >= 0 { 1 } else { (i - j + k - 1) / k };
    let q = (j - i + k * l) as u64;
    let target = group.mul(&group.pow(z, l), &s.alpha_pow(q, &x.g));
    let h = solve_in_coset(s, normal, x.n, &target).ok_or_else(|| WitnessError::NoSolution { element: x.clone() })?;
    let w = BrElement::new(0, h, q);
    debug_assert!(spec.contains(s, x, &w));
    Ok(w)
}

/// Some `h` with `h alpha^d` in `N target`.
fn solve_in_coset(s: &BrContext, normal: &Subgroup, d: u64, target: &GroupElement) -> Option<GroupElement> {
    let group = &s.group;
    match (group, normal, &s.alpha) {
        (GroupContext::Finite(_), _, _) => group
            .elements()
            .unwrap_or_default()
            .into_iter()
            .find(|h| group.in_coset(normal, &s.alpha_pow(d, h), target)),
        (GroupContext::FreeAbelian { rank }, Subgroup::Lattice(l), Endo::Matrix(a)) => {
            // A^d h - N c = target
            let stacked = a.pow(d).hconcat(&l.basis().neg());
            let sol = crate::group::lattice::solve_integer(&stacked, target.as_vector()?)?;
            Some(GroupElement::Vector(sol[..*rank].to_vec()))
        }
        _ => None,
    }
}
