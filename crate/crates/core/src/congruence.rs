//! Congruences on `BR(G, alpha)` in symbolic form.
//!
//! Every congruence is either idempotent-separating, determined by an
//! `alpha`-admissible normal subgroup `N`, or a group congruence, determined by
//! an `alpha`-invariant normal subgroup `N`, a coset `Nz` and a period `k`.
//! Specs can only be built through the validating constructors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bicyclic::zeta_contains;
use crate::bruck_reilly::{forgetful, BrContext, BrElement};
use crate::group::{GroupElement, GroupError, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not alpha-admissible")]
    NotAdmissible,
    #[error("subgroup is not alpha-invariant")]
    NotInvariant,
    #[error("coset Nz is not fixed by alpha (N(z alpha) != Nz)")]
    CosetNotFixed,
    #[error("twisted conjugation by g = {g} moves the coset Nz (g^-1 (Nz) (g alpha^k) != Nz)")]
    TwistedConjugation { g: GroupElement },
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl ValidationError {
    /// Short machine-readable name of the failed condition.
    pub fn code(&self) -> &'static str {
        match self {
            ValidationError::NotNormal => "not-normal",
            ValidationError::NotAdmissible => "not-admissible",
            ValidationError::NotInvariant => "not-invariant",
            ValidationError::CosetNotFixed => "coset-not-fixed",
            ValidationError::TwistedConjugation { .. } => "twisted-conjugation-failed",
            ValidationError::Group(_) => "invalid-input",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("window {window} is smaller than the indices of {element}")]
    WindowTooSmall { window: u64, element: BrElement },
    #[error("catalog needs an explicit subgroup pool on the {0} backend")]
    PoolRequired(&'static str),
    #[error("subgroup {0} has infinitely many admissible cosets; cannot enumerate")]
    InfiniteCosets(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Which conditions were checked, and their outcome. Unchecked conditions are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Certificate {
    pub normal: bool,
    pub admissible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coset_fixed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twisted_conjugation: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CongruenceKind {
    IdempotentSeparating { normal: Subgroup },
    Group { normal: Subgroup, z: GroupElement, k: u64 },
}

/// A validated congruence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSpec {
    kind: CongruenceKind,
    certificate: Certificate,
}

impl CongruenceSpec {
    pub fn kind(&self) -> &CongruenceKind {
        &self.kind
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn normal_subgroup(&self) -> &Subgroup {
        match &self.kind {
            CongruenceKind::IdempotentSeparating { normal } | CongruenceKind::Group { normal, .. } => normal,
        }
    }

    pub fn is_group_congruence(&self) -> bool {
        matches!(self.kind, CongruenceKind::Group { .. })
    }

    /// The period `k` of a group congruence.
    pub fn period(&self) -> Option<u64> {
        match &self.kind {
            CongruenceKind::Group { k, .. } => Some(*k),
            CongruenceKind::IdempotentSeparating { .. } => None,
        }
    }

    /// Whether `y` lies in the class of `x`.
    pub fn contains(&self, s: &BrContext, x: &BrElement, y: &BrElement) -> bool {
        match &self.kind {
            CongruenceKind::IdempotentSeparating { normal } => is_contains(s, normal, x, y),
            CongruenceKind::Group { normal, z, k } => gc_contains(s, normal, z, *k, x, y),
        }
    }

    /// Members of the class of `x` with both indices at most `window` and, on
    /// the free abelian backend, group coordinates bounded by `norm_bound`.
    pub fn class_members(
        &self,
        s: &BrContext,
        x: &BrElement,
        window: u64,
        norm_bound: u64,
    ) -> Result<Vec<BrElement>, CongruenceError> {
        if window < x.height() {
            return Err(CongruenceError::WindowTooSmall {
                window,
                element: x.clone(),
            });
        }
        let group = &s.group;
        let mut out = Vec::new();
        match &self.kind {
            CongruenceKind::IdempotentSeparating { normal } => {
                for h in group.element_box(norm_bound) {
                    if group.in_coset(normal, &h, &x.g) {
                        out.push(BrElement::new(x.m, h, x.n));
                    }
                }
            }
            CongruenceKind::Group { k, .. } => {
                let coords = group.element_box(norm_bound);
                for p in 0..=window {
                    for q in 0..=window {
                        let candidate = crate::bicyclic::Bicyclic::new(p, q);
                        if !zeta_contains(*k, forgetful(x), candidate) {
                            continue;
                        }
                        for h in &coords {
                            let y = BrElement::new(p, h.clone(), q);
                            if self.contains(s, x, &y) {
                                out.push(y);
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

/// `m = p`, `n = q` and `g h^-1` in `N`.
pub fn is_contains(s: &BrContext, normal: &Subgroup, x: &BrElement, y: &BrElement) -> bool {
    x.m == y.m && x.n == y.n && s.group.in_coset(normal, &x.g, &y.g)
}

/// Membership for the group congruence `(N, z, k)`: `y = (p,h,q)` is in the
/// class of `x = (m,g,n)` iff `q-p = n-m + k*l` for an integer `l` and
/// `h alpha^n` lies in `N z^l (g alpha^q)`. For `k = 0`, `l = 0`.
pub fn gc_contains(s: &BrContext, normal: &Subgroup, z: &GroupElement, k: u64, x: &BrElement, y: &BrElement) -> bool {
    let d = forgetful(y).drift() - forgetful(x).drift();
    let l = if k == 0 {
        if d != 0 {
            return false;
        }
        0
    } else {
        let k = k as i64;
        if d.rem_euclid(k) != 0 {
            return false;
        }
        d / k
    };
    let group = &s.group;
    let lhs = s.alpha_pow(x.n, &y.g);
    let rhs = group.mul(&group.pow(z, l), &s.alpha_pow(y.n, &x.g));
    group.in_coset(normal, &lhs, &rhs)
}

/// Validates `N` as the kernel data of an idempotent-separating congruence.
pub fn validate_is(s: &BrContext, normal: &Subgroup) -> Result<CongruenceSpec, ValidationError> {
    check_subgroup_backend(s, normal)?;
    if !s.group.is_normal(normal) {
        return Err(ValidationError::NotNormal);
    }
    if !s.group.is_admissible(&s.alpha, normal) {
        return Err(ValidationError::NotAdmissible);
    }
    Ok(CongruenceSpec {
        kind: CongruenceKind::IdempotentSeparating { normal: normal.clone() },
        certificate: Certificate {
            normal: true,
            admissible: true,
            ..Certificate::default()
        },
    })
}

/// Validates a triple `(N, z, k)` describing a group congruence. Conditions are
/// checked in order: normality, invariance, `N(z alpha) = Nz`, and the twisted
/// conjugation condition for every `g` (every element of a finite group, the
/// standard basis of `Z^r`).
pub fn validate_gc(s: &BrContext, normal: &Subgroup, z: &GroupElement, k: u64) -> Result<CongruenceSpec, ValidationError> {
    check_subgroup_backend(s, normal)?;
    let group = &s.group;
    group.validate(z)?;
    if !group.is_normal(normal) {
        return Err(ValidationError::NotNormal);
    }
    if !group.is_invariant(&s.alpha, normal) {
        return Err(ValidationError::NotInvariant);
    }
    if !group.in_coset(normal, &group.endo_apply(&s.alpha, z), z) {
        return Err(ValidationError::CosetNotFixed);
    }
    if let Some(g) = twisted_conjugation_violation(s, normal, z, k) {
        return Err(ValidationError::TwistedConjugation { g });
    }
    Ok(CongruenceSpec {
        kind: CongruenceKind::Group {
            normal: normal.clone(),
            z: z.clone(),
            k,
        },
        certificate: Certificate {
            normal: true,
            admissible: true,
            invariant: Some(true),
            coset_fixed: Some(true),
            twisted_conjugation: Some(true),
        },
    })
}

/// First `g` with `g^-1 z (g alpha^k)` outside `Nz`.
fn twisted_conjugation_violation(s: &BrContext, normal: &Subgroup, z: &GroupElement, k: u64) -> Option<GroupElement> {
    let group = &s.group;
    let testers: Vec<GroupElement> = match group {
        crate::group::GroupContext::Finite(_) => group.elements().unwrap_or_default(),
        crate::group::GroupContext::FreeAbelian { rank } => (0..*rank)
            .map(|i| GroupElement::vector((0..*rank).map(|j| i64::from(i == j))))
            .collect(),
    };
    testers.into_iter().find(|g| {
        let moved = group.mul(&group.mul(&group.inv(g), z), &s.alpha_pow(k, g));
        !group.in_coset(normal, &moved, z)
    })
}

fn check_subgroup_backend(s: &BrContext, h: &Subgroup) -> Result<(), GroupError> {
    let ok = match (&s.group, h) {
        (crate::group::GroupContext::Finite(g), Subgroup::Finite(mask)) => mask.len() == g.order(),
        (crate::group::GroupContext::FreeAbelian { rank }, Subgroup::Lattice(l)) => l.dim() == *rank,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(GroupError::InvalidSubgroup("subgroup does not belong to this group".into()))
    }
}

/// The minimum group congruence: `(N0, e, 0)` with `N0` the stable kernel of alpha.
pub fn sigma_spec(s: &BrContext) -> Result<CongruenceSpec, ValidationError> {
    let n0 = s.group.stable_kernel(&s.alpha);
    validate_gc(s, &n0, &s.group.identity(), 0)
}

/// `{a : (0,a,0) ~ (0,e,0)}` recovered through membership queries alone. On
/// the free abelian backend only coordinates within `norm_bound` are probed
/// and the result is the subgroup they generate.
pub fn recover_normal_subgroup(s: &BrContext, spec: &CongruenceSpec, norm_bound: u64) -> Result<Subgroup, GroupError> {
    let one = s.identity();
    let members: Vec<GroupElement> = s
        .group
        .element_box(norm_bound)
        .into_iter()
        .filter(|a| spec.contains(s, &one, &BrElement::new(0, a.clone(), 0)))
        .collect();
    match &s.group {
        crate::group::GroupContext::Finite(_) => {
            let idx: Vec<usize> = members.iter().filter_map(GroupElement::as_index).collect();
            s.group.subgroup_from_members(&idx)
        }
        crate::group::GroupContext::FreeAbelian { .. } => s.group.subgroup_generated(&members),
    }
}

/// A finite list of congruences: every idempotent-separating one, and the
/// group congruences with period at most `kmax`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub kmax: u64,
    pub specs: Vec<CongruenceSpec>,
}

impl Catalog {
    /// Group congruences with larger periods are not listed.
    pub fn is_truncated(&self) -> bool {
        true
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }
}

/// Maximum number of cosets enumerated for one lattice subgroup.
pub const COSET_LIMIT: usize = 1 << 16;

/// Enumerates congruences. Finite groups enumerate their normal subgroups
/// unless a pool is given; free abelian groups require a pool. One group
/// congruence is listed per valid coset `Nz` (least representative); for
/// `k = 0` the class sets ignore `z`, so only `z = e` is listed.
pub fn catalog(s: &BrContext, kmax: u64, pool: Option<&[Subgroup]>) -> Result<Catalog, CongruenceError> {
    let subgroups: Vec<Subgroup> = match pool {
        Some(p) => {
            let mut seen = Vec::new();
            for h in p {
                check_subgroup_backend(s, h)?;
                if !seen.contains(h) {
                    seen.push(h.clone());
                }
            }
            seen
        }
        None => match s.group.enumerate_normal_subgroups() {
            Ok(list) => list,
            Err(_) => return Err(CongruenceError::PoolRequired(s.group.backend_name())),
        },
    };
    let group = &s.group;
    let normals: Vec<&Subgroup> = subgroups.iter().filter(|h| group.is_normal(h)).collect();

    let mut specs = Vec::new();
    for n in &normals {
        if let Ok(spec) = validate_is(s, n) {
            specs.push(spec);
        }
    }
    for n in normals.iter().filter(|n| group.is_invariant(&s.alpha, n)) {
        for k in 0..=kmax {
            if k == 0 {
                if let Ok(spec) = validate_gc(s, n, &group.identity(), 0) {
                    specs.push(spec);
                }
                continue;
            }
            for z in coset_candidates(s, n)? {
                if let Ok(spec) = validate_gc(s, n, &z, k) {
                    specs.push(spec);
                }
            }
        }
    }
    Ok(Catalog { kmax, specs })
}

/// Canonical representatives of the cosets `Nz` satisfying `N(z alpha) = Nz`.
fn coset_candidates(s: &BrContext, n: &Subgroup) -> Result<Vec<GroupElement>, CongruenceError> {
    let group = &s.group;
    match (group, n, &s.alpha) {
        (crate::group::GroupContext::Finite(_), Subgroup::Finite(_), _) => {
            let mut reps: Vec<GroupElement> = group
                .elements()
                .unwrap_or_default()
                .into_iter()
                .map(|z| group.coset_representative(n, &z))
                .filter(|z| group.in_coset(n, &group.endo_apply(&s.alpha, z), z))
                .collect();
            reps.sort();
            reps.dedup();
            Ok(reps)
        }
        (crate::group::GroupContext::FreeAbelian { rank }, Subgroup::Lattice(l), crate::group::Endo::Matrix(a)) => {
            // (A - I) z in N
            let shifted = a.sub(&crate::group::IntMatrix::identity(*rank));
            let valid = l.preimage(&shifted);
            let reps = valid
                .coset_representatives(l, COSET_LIMIT)
                .ok_or_else(|| CongruenceError::InfiniteCosets(n.to_string()))?;
            Ok(reps.into_iter().map(GroupElement::Vector).collect())
        }
        _ => Err(GroupError::InvalidSubgroup("subgroup does not belong to this group".into()).into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends;
    use num_bigint::BigInt;

    fn e(i: usize) -> GroupElement {
        GroupElement::Index(i)
    }

    fn br(m: u64, g: usize, n: u64) -> BrElement {
        BrElement::new(m, e(g), n)
    }

    fn lattice(s: &BrContext, gen: i64) -> Subgroup {
        s.group.subgroup_from_basis(&[vec![BigInt::from(gen)]]).unwrap()
    }

    fn zero_lattice(s: &BrContext) -> Subgroup {
        s.group.trivial_subgroup()
    }

    #[test]
    fn validate_is_examples() {
        let s = backends::z4_doubling();
        let n = s.group.subgroup_from_members(&[0, 2]).unwrap();
        assert!(validate_is(&s, &n).is_ok());
        assert!(validate_is(&s, &s.group.whole_group()).is_ok());

        let s3 = backends::s3_identity();
        let t = backends::s3_transpositions()[0];
        let h = s3.group.subgroup_from_members(&[0, t]).unwrap();
        assert_eq!(validate_is(&s3, &h).unwrap_err(), ValidationError::NotNormal);
    }

    #[test]
    fn validate_is_rejects_non_admissible() {
        // Z/2 x Z/2 with the swap automorphism; <(1,0)> is normal but not admissible.
        let g = crate::group::FiniteGroup::from_fn(4, 0, |a, b| a ^ b).unwrap();
        let ctx = crate::group::GroupContext::finite(g);
        let swap = ctx.endo_from_table(vec![0, 2, 1, 3]).unwrap();
        let s = BrContext::new(ctx, swap).unwrap();
        let h = s.group.subgroup_from_members(&[0, 1]).unwrap();
        assert_eq!(validate_is(&s, &h).unwrap_err(), ValidationError::NotAdmissible);
    }

    #[test]
    fn is_contains_examples() {
        let s = backends::z4_doubling();
        let n = s.group.subgroup_from_members(&[0, 2]).unwrap();
        let spec = validate_is(&s, &n).unwrap();
        assert!(spec.contains(&s, &br(2, 1, 3), &br(2, 3, 3)));
        assert!(spec.contains(&s, &br(2, 1, 3), &br(2, 1, 3)));
        assert!(!spec.contains(&s, &br(2, 1, 3), &br(3, 1, 2)));
    }

    #[test]
    fn validate_gc_examples() {
        let s = backends::z_doubling();
        let three = lattice(&s, 3);
        let zero = GroupElement::vector([0]);
        assert!(validate_gc(&s, &three, &zero, 2).is_ok());
        assert!(matches!(
            validate_gc(&s, &three, &zero, 1),
            Err(ValidationError::TwistedConjugation { .. })
        ));
        for s in [backends::z4_doubling(), backends::s3_sign(), backends::z_doubling()] {
            assert!(validate_gc(&s, &s.group.whole_group(), &s.group.identity(), 1).is_ok());
        }
    }

    #[test]
    fn validate_gc_failure_order() {
        let s = backends::z4_doubling();
        let n = s.group.subgroup_from_members(&[0, 2]).unwrap();
        assert_eq!(validate_gc(&s, &n, &e(0), 1).unwrap_err(), ValidationError::NotInvariant);
        let s3 = backends::s3_identity();
        let t = backends::s3_transpositions()[0];
        let h = s3.group.subgroup_from_members(&[0, t]).unwrap();
        assert_eq!(validate_gc(&s3, &h, &e(0), 1).unwrap_err(), ValidationError::NotNormal);
        // Z with x -> -x: N = 0, z = 1 gives z alpha = -1, not in N + 1.
        let z = crate::group::GroupContext::free_abelian(1).unwrap();
        let neg = z.endo_from_matrix(crate::group::IntMatrix::from_row_major(1, 1, vec![-1])).unwrap();
        let sneg = BrContext::new(z, neg).unwrap();
        assert_eq!(
            validate_gc(&sneg, &zero_lattice(&sneg), &GroupElement::vector([1]), 2).unwrap_err(),
            ValidationError::CosetNotFixed
        );
    }

    #[test]
    fn gc_contains_examples() {
        let s = backends::bicyclic();
        let triv = s.group.trivial_subgroup();
        let spec = validate_gc(&s, &triv, &e(0), 3).unwrap();
        assert!(spec.contains(&s, &br(0, 0, 1), &br(0, 0, 4)));
        assert!(!spec.contains(&s, &br(0, 0, 1), &br(1, 0, 4)));
        let zeta0 = validate_gc(&s, &triv, &e(0), 0).unwrap();
        assert!(zeta0.contains(&s, &br(2, 0, 5), &br(2, 0, 5)));
    }

    #[test]
    fn gc_negative_power_of_z() {
        // Z/2 with identity, N = {0}, z = 1, k = 1: y in class of x iff h - g = l (mod 2).
        let s = backends::z2_identity();
        let spec = validate_gc(&s, &s.group.trivial_subgroup(), &e(1), 1).unwrap();
        let x = br(0, 0, 3);
        assert!(spec.contains(&s, &x, &br(0, 1, 2)));
        assert!(spec.contains(&s, &x, &br(0, 0, 1)));
        assert!(!spec.contains(&s, &x, &br(0, 1, 1)));
    }

    #[test]
    fn class_members_examples() {
        let s = backends::z4_doubling();
        let n = s.group.subgroup_from_members(&[0, 2]).unwrap();
        let spec = validate_is(&s, &n).unwrap();
        assert_eq!(
            spec.class_members(&s, &br(1, 1, 2), 4, 0).unwrap(),
            vec![br(1, 1, 2), br(1, 3, 2)]
        );

        let b = backends::bicyclic();
        let zeta0 = validate_gc(&b, &b.group.trivial_subgroup(), &e(0), 0).unwrap();
        assert_eq!(
            zeta0.class_members(&b, &br(1, 0, 1), 2, 0).unwrap(),
            vec![br(0, 0, 0), br(1, 0, 1), br(2, 0, 2)]
        );

        let eq = validate_is(&s, &s.group.trivial_subgroup()).unwrap();
        assert_eq!(eq.class_members(&s, &br(2, 3, 1), 2, 0).unwrap(), vec![br(2, 3, 1)]);
        assert!(matches!(
            eq.class_members(&s, &br(2, 3, 1), 1, 0),
            Err(CongruenceError::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn sigma_examples() {
        let s = backends::z4_doubling();
        let sigma = sigma_spec(&s).unwrap();
        assert_eq!(sigma.normal_subgroup(), &s.group.whole_group());
        assert_eq!(sigma.period(), Some(0));

        let s3 = backends::s3_identity();
        assert_eq!(sigma_spec(&s3).unwrap().normal_subgroup(), &s3.group.trivial_subgroup());

        let z = backends::z_doubling();
        assert_eq!(sigma_spec(&z).unwrap().normal_subgroup(), &z.group.trivial_subgroup());
    }

    #[test]
    fn catalog_counts() {
        assert_eq!(catalog(&backends::z4_doubling(), 3, None).unwrap().len(), 7);
        assert_eq!(catalog(&backends::bicyclic(), 2, None).unwrap().len(), 4);
        assert_eq!(catalog(&backends::z2_identity(), 1, None).unwrap().len(), 7);
    }

    #[test]
    fn catalog_needs_pool_on_lattices() {
        let s = backends::z_doubling();
        assert!(matches!(catalog(&s, 2, None), Err(CongruenceError::PoolRequired(_))));
        let pool = vec![zero_lattice(&s), lattice(&s, 3), s.group.whole_group()];
        let cat = catalog(&s, 2, Some(&pool)).unwrap();
        // IS for all three; GC: 0 (k=0), 3Z (k=0, k=2 with z in {0}), Z (k=0,1,2).
        assert_eq!(cat.len(), 3 + 1 + 2 + 3);
    }

    #[test]
    fn lattice_coset_enumeration_for_valid_z() {
        // Z with identity: every z satisfies N(z alpha) = Nz, so 3Z has three cosets.
        let z = crate::group::GroupContext::free_abelian(1).unwrap();
        let s = BrContext::new(z.clone(), z.identity_endo()).unwrap();
        let pool = vec![lattice(&s, 3)];
        let cat = catalog(&s, 1, Some(&pool)).unwrap();
        let zs: Vec<String> = cat
            .specs
            .iter()
            .filter(|c| c.period() == Some(1))
            .map(|c| match c.kind() {
                CongruenceKind::Group { z, .. } => z.to_string(),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(zs, vec!["[0]", "[1]", "[2]"]);
        // The zero subgroup has infinitely many cosets fixed by the identity map.
        let err = catalog(&s, 1, Some(&[zero_lattice(&s)])).unwrap_err();
        assert!(matches!(err, CongruenceError::InfiniteCosets(_)));
    }

    #[test]
    fn recover_normal_subgroup_matches() {
        let s = backends::s3_sign();
        for spec in catalog(&s, 2, None).unwrap().specs {
            if !spec.is_group_congruence() {
                assert_eq!(&recover_normal_subgroup(&s, &spec, 0).unwrap(), spec.normal_subgroup());
            }
        }
        let z = backends::z_doubling();
        let spec = validate_is(&z, &lattice(&z, 3)).unwrap();
        assert_eq!(recover_normal_subgroup(&z, &spec, 6).unwrap(), lattice(&z, 3));
    }
}
