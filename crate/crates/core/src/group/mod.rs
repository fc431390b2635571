//! Coefficient groups, their endomorphisms and subgroups.
//!
//! Two backends are supported: finite groups given by a Cayley table, and
//! free abelian groups `Z^r` whose endomorphisms are integer matrices acting
//! on column vectors and whose subgroups are lattices.

pub mod finite;
pub mod lattice;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use finite::FiniteGroup;
pub use lattice::{hnf, IntMatrix, Lattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("invalid endomorphism: {0}")]
    InvalidEndo(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("element {0} is not valid in this group")]
    ElementOutOfRange(String),
    #[error("operation not supported by the {0} backend")]
    UnsupportedBackend(&'static str),
}

/// An element of the coefficient group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Index(usize),
    Vector(Vec<BigInt>),
}

impl GroupElement {
    pub fn vector<T: Into<BigInt>>(coords: impl IntoIterator<Item = T>) -> Self {
        GroupElement::Vector(coords.into_iter().map(Into::into).collect())
    }

    pub fn as_index(&self) -> Option<usize> {
        match self {
            GroupElement::Index(i) => Some(*i),
            GroupElement::Vector(_) => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[BigInt]> {
        match self {
            GroupElement::Vector(v) => Some(v),
            GroupElement::Index(_) => None,
        }
    }

    /// Largest absolute coordinate; zero for table elements.
    pub fn max_norm(&self) -> BigInt {
        match self {
            GroupElement::Index(_) => BigInt::zero(),
            GroupElement::Vector(v) => v.iter().map(|x| x.abs()).max().unwrap_or_default(),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Index(i) => write!(f, "{i}"),
            GroupElement::Vector(v) => {
                write!(f, "[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An endomorphism of the coefficient group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Endo {
    /// Entry `i` is the image of element `i`.
    Table(Vec<usize>),
    /// Square matrix acting on column vectors.
    Matrix(IntMatrix),
}

impl fmt::Debug for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endo::Table(t) => write!(f, "Endo{t:?}"),
            Endo::Matrix(m) => write!(f, "Endo{m:?}"),
        }
    }
}

/// A subgroup of the coefficient group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Subgroup {
    /// Membership mask over element indices.
    Finite(Vec<bool>),
    Lattice(Lattice),
}

impl Subgroup {
    /// Sorted member indices of a finite subgroup.
    pub fn members(&self) -> Option<Vec<usize>> {
        match self {
            Subgroup::Finite(mask) => Some((0..mask.len()).filter(|&i| mask[i]).collect()),
            Subgroup::Lattice(_) => None,
        }
    }

    pub fn as_lattice(&self) -> Option<&Lattice> {
        match self {
            Subgroup::Lattice(l) => Some(l),
            Subgroup::Finite(_) => None,
        }
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subgroup::Finite(_) => {
                let m = self.members().unwrap_or_default();
                let parts: Vec<String> = m.iter().map(ToString::to_string).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            Subgroup::Lattice(l) => {
                let cols: Vec<String> = l
                    .basis_columns()
                    .iter()
                    .map(|c| GroupElement::Vector(c.clone()).to_string())
                    .collect();
                write!(f, "<{}>", cols.join(","))
            }
        }
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The coefficient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupContext {
    Finite(FiniteGroup),
    FreeAbelian { rank: usize },
}

impl GroupContext {
    pub fn finite(group: FiniteGroup) -> Self {
        GroupContext::Finite(group)
    }

    pub fn free_abelian(rank: usize) -> Result<Self, GroupError> {
        if rank == 0 {
            return Err(GroupError::InvalidSubgroup("rank must be positive".into()));
        }
        Ok(GroupContext::FreeAbelian { rank })
    }

    pub fn backend_name(&self) -> &'static str {
        match self {
            GroupContext::Finite(_) => "finite-cayley",
            GroupContext::FreeAbelian { .. } => "free-abelian",
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GroupContext::Finite(_))
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupContext::Finite(g) => GroupElement::Index(g.identity()),
            GroupContext::FreeAbelian { rank } => GroupElement::Vector(vec![BigInt::zero(); *rank]),
        }
    }

    pub fn validate(&self, a: &GroupElement) -> Result<(), GroupError> {
        let ok = match (self, a) {
            (GroupContext::Finite(g), GroupElement::Index(i)) => *i < g.order(),
            (GroupContext::FreeAbelian { rank }, GroupElement::Vector(v)) => v.len() == *rank,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(GroupError::ElementOutOfRange(a.to_string()))
        }
    }

    /// Group product. Panics on elements of the wrong backend; use
    /// [`GroupContext::try_mul`] at trust boundaries.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (GroupContext::Finite(g), GroupElement::Index(x), GroupElement::Index(y)) => {
                GroupElement::Index(g.mul(*x, *y))
            }
            (GroupContext::FreeAbelian { .. }, GroupElement::Vector(x), GroupElement::Vector(y)) => {
                GroupElement::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            _ => panic!("group element does not match backend: {a}, {b}"),
        }
    }

    pub fn try_mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.mul(a, b))
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (GroupContext::Finite(g), GroupElement::Index(x)) => GroupElement::Index(g.inv(*x)),
            (GroupContext::FreeAbelian { .. }, GroupElement::Vector(x)) => {
                GroupElement::Vector(x.iter().map(|p| -p).collect())
            }
            _ => panic!("group element does not match backend: {a}"),
        }
    }

    /// `a^l` for any integer `l`; negative powers go through the inverse.
    pub fn pow(&self, a: &GroupElement, l: i64) -> GroupElement {
        match (self, a) {
            (GroupContext::FreeAbelian { .. }, GroupElement::Vector(x)) => {
                let l = BigInt::from(l);
                GroupElement::Vector(x.iter().map(|p| p * &l).collect())
            }
            _ => {
                let base = if l < 0 { self.inv(a) } else { a.clone() };
                let mut acc = self.identity();
                for _ in 0..l.unsigned_abs() {
                    acc = self.mul(&acc, &base);
                }
                acc
            }
        }
    }

    /// All elements of a finite group in index order.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        match self {
            GroupContext::Finite(g) => Some((0..g.order()).map(GroupElement::Index).collect()),
            GroupContext::FreeAbelian { .. } => None,
        }
    }

    /// Finite groups: every element. Free abelian: every vector with all
    /// coordinates in `[-norm, norm]`, lexicographic.
    pub fn element_box(&self, norm: u64) -> Vec<GroupElement> {
        match self {
            GroupContext::Finite(g) => (0..g.order()).map(GroupElement::Index).collect(),
            GroupContext::FreeAbelian { rank } => {
                let side: Vec<i64> = (-(norm as i64)..=(norm as i64)).collect();
                let mut out = vec![Vec::<BigInt>::new()];
                for _ in 0..*rank {
                    out = out
                        .into_iter()
                        .flat_map(|prefix| {
                            side.iter().map(move |&x| {
                                let mut p = prefix.clone();
                                p.push(BigInt::from(x));
                                p
                            })
                        })
                        .collect();
                }
                out.into_iter().map(GroupElement::Vector).collect()
            }
        }
    }

    pub fn identity_endo(&self) -> Endo {
        match self {
            GroupContext::Finite(g) => Endo::Table((0..g.order()).collect()),
            GroupContext::FreeAbelian { rank } => Endo::Matrix(IntMatrix::identity(*rank)),
        }
    }

    /// Validates an image table as a homomorphism (checked on every pair).
    pub fn endo_from_table(&self, images: Vec<usize>) -> Result<Endo, GroupError> {
        let GroupContext::Finite(g) = self else {
            return Err(GroupError::UnsupportedBackend(self.backend_name()));
        };
        if images.len() != g.order() {
            return Err(GroupError::InvalidEndo(format!(
                "expected {} images, got {}",
                g.order(),
                images.len()
            )));
        }
        if let Some(bad) = images.iter().find(|&&x| x >= g.order()) {
            return Err(GroupError::InvalidEndo(format!("image {bad} out of range")));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if images[g.mul(a, b)] != g.mul(images[a], images[b]) {
                    return Err(GroupError::InvalidEndo(format!(
                        "not a homomorphism at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Endo::Table(images))
    }

    pub fn endo_from_fn(&self, f: impl Fn(usize) -> usize) -> Result<Endo, GroupError> {
        let GroupContext::Finite(g) = self else {
            return Err(GroupError::UnsupportedBackend(self.backend_name()));
        };
        self.endo_from_table((0..g.order()).map(f).collect())
    }

    pub fn endo_from_matrix(&self, m: IntMatrix) -> Result<Endo, GroupError> {
        let GroupContext::FreeAbelian { rank } = self else {
            return Err(GroupError::UnsupportedBackend(self.backend_name()));
        };
        if m.rows() != *rank || m.cols() != *rank {
            return Err(GroupError::InvalidEndo(format!("matrix must be {rank}x{rank}")));
        }
        Ok(Endo::Matrix(m))
    }

    pub fn endo_apply(&self, alpha: &Endo, a: &GroupElement) -> GroupElement {
        match (alpha, a) {
            (Endo::Table(t), GroupElement::Index(i)) => GroupElement::Index(t[*i]),
            (Endo::Matrix(m), GroupElement::Vector(v)) => GroupElement::Vector(m.mul_vec(v)),
            _ => panic!("endomorphism does not match backend"),
        }
    }

    /// `a` under `alpha^n`; `n = 0` is the identity map.
    pub fn endo_apply_power(&self, alpha: &Endo, n: u64, a: &GroupElement) -> GroupElement {
        let mut x = a.clone();
        for _ in 0..n {
            x = self.endo_apply(alpha, &x);
        }
        x
    }

    /// Matrix or table of `alpha^n`.
    pub fn endo_power(&self, alpha: &Endo, n: u64) -> Endo {
        match alpha {
            Endo::Matrix(m) => Endo::Matrix(m.pow(n)),
            Endo::Table(t) => {
                let mut out: Vec<usize> = (0..t.len()).collect();
                for _ in 0..n {
                    out = out.iter().map(|&i| t[i]).collect();
                }
                Endo::Table(out)
            }
        }
    }

    pub fn is_surjective(&self, alpha: &Endo) -> bool {
        match alpha {
            Endo::Table(t) => {
                let mut hit = vec![false; t.len()];
                t.iter().for_each(|&i| hit[i] = true);
                hit.into_iter().all(|h| h)
            }
            Endo::Matrix(m) => Lattice::from_matrix(m).is_full(),
        }
    }

    /// Some `x` with `x alpha^d = target`, if one exists.
    pub fn solve_endo_power(&self, alpha: &Endo, d: u64, target: &GroupElement) -> Option<GroupElement> {
        match (self, alpha) {
            (GroupContext::Finite(g), _) => (0..g.order())
                .map(GroupElement::Index)
                .find(|x| &self.endo_apply_power(alpha, d, x) == target),
            (GroupContext::FreeAbelian { .. }, Endo::Matrix(m)) => {
                let t = target.as_vector().expect("vector element");
                lattice::solve_integer(&m.pow(d), t).map(GroupElement::Vector)
            }
            _ => panic!("endomorphism does not match backend"),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        match self {
            GroupContext::Finite(g) => {
                let mut mask = vec![false; g.order()];
                mask[g.identity()] = true;
                Subgroup::Finite(mask)
            }
            GroupContext::FreeAbelian { rank } => Subgroup::Lattice(Lattice::zero(*rank)),
        }
    }

    pub fn whole_group(&self) -> Subgroup {
        match self {
            GroupContext::Finite(g) => Subgroup::Finite(vec![true; g.order()]),
            GroupContext::FreeAbelian { rank } => Subgroup::Lattice(Lattice::full(*rank)),
        }
    }

    /// A finite subgroup from its full member list; the list must be closed.
    pub fn subgroup_from_members(&self, members: &[usize]) -> Result<Subgroup, GroupError> {
        let GroupContext::Finite(g) = self else {
            return Err(GroupError::UnsupportedBackend(self.backend_name()));
        };
        let mut mask = vec![false; g.order()];
        for &m in members {
            if m >= g.order() {
                return Err(GroupError::InvalidSubgroup(format!("element {m} out of range")));
            }
            mask[m] = true;
        }
        if !g.is_subgroup(&mask) {
            return Err(GroupError::InvalidSubgroup(format!(
                "{members:?} is not closed under products and inverses"
            )));
        }
        Ok(Subgroup::Finite(mask))
    }

    /// Subgroup generated by the given elements.
    pub fn subgroup_generated(&self, gens: &[GroupElement]) -> Result<Subgroup, GroupError> {
        for a in gens {
            self.validate(a)?;
        }
        match self {
            GroupContext::Finite(g) => {
                let idx: Vec<usize> = gens.iter().filter_map(GroupElement::as_index).collect();
                Ok(Subgroup::Finite(g.generate(&idx)))
            }
            GroupContext::FreeAbelian { rank } => {
                let cols: Vec<Vec<BigInt>> = gens.iter().filter_map(|a| a.as_vector().map(<[BigInt]>::to_vec)).collect();
                Ok(Subgroup::Lattice(Lattice::from_generators(*rank, &cols)))
            }
        }
    }

    pub fn subgroup_from_basis(&self, columns: &[Vec<BigInt>]) -> Result<Subgroup, GroupError> {
        let GroupContext::FreeAbelian { rank } = self else {
            return Err(GroupError::UnsupportedBackend(self.backend_name()));
        };
        if columns.iter().any(|c| c.len() != *rank) {
            return Err(GroupError::InvalidSubgroup(format!("basis vectors must have length {rank}")));
        }
        Ok(Subgroup::Lattice(Lattice::from_generators(*rank, columns)))
    }

    pub fn subgroup_contains(&self, h: &Subgroup, a: &GroupElement) -> bool {
        match (h, a) {
            (Subgroup::Finite(mask), GroupElement::Index(i)) => mask[*i],
            (Subgroup::Lattice(l), GroupElement::Vector(v)) => l.contains(v),
            _ => panic!("subgroup does not match backend"),
        }
    }

    /// `a` lies in the right coset `N b`.
    pub fn in_coset(&self, n: &Subgroup, a: &GroupElement, b: &GroupElement) -> bool {
        self.subgroup_contains(n, &self.mul(a, &self.inv(b)))
    }

    pub fn subgroup_order(&self, h: &Subgroup) -> Option<usize> {
        h.members().map(|m| m.len())
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        match (self, h) {
            (GroupContext::Finite(g), Subgroup::Finite(mask)) => g.is_normal(mask),
            _ => true,
        }
    }

    /// `H alpha` is contained in `H`.
    pub fn is_admissible(&self, alpha: &Endo, h: &Subgroup) -> bool {
        match (alpha, h) {
            (Endo::Table(t), Subgroup::Finite(mask)) => (0..mask.len()).filter(|&i| mask[i]).all(|i| mask[t[i]]),
            (Endo::Matrix(m), Subgroup::Lattice(l)) => l.basis_columns().iter().all(|c| l.contains(&m.mul_vec(c))),
            _ => panic!("endomorphism and subgroup do not match"),
        }
    }

    /// `{g : g alpha in H}`.
    pub fn preimage_subgroup(&self, alpha: &Endo, h: &Subgroup) -> Subgroup {
        match (alpha, h) {
            (Endo::Table(t), Subgroup::Finite(mask)) => Subgroup::Finite(t.iter().map(|&img| mask[img]).collect()),
            (Endo::Matrix(m), Subgroup::Lattice(l)) => Subgroup::Lattice(l.preimage(m)),
            _ => panic!("endomorphism and subgroup do not match"),
        }
    }

    /// `H alpha^{-1} = H`.
    pub fn is_invariant(&self, alpha: &Endo, h: &Subgroup) -> bool {
        &self.preimage_subgroup(alpha, h) == h
    }

    /// `H alpha`, the image subgroup.
    pub fn image_subgroup(&self, alpha: &Endo, h: &Subgroup) -> Subgroup {
        match (alpha, h) {
            (Endo::Table(t), Subgroup::Finite(mask)) => {
                let mut out = vec![false; mask.len()];
                (0..mask.len()).filter(|&i| mask[i]).for_each(|i| out[t[i]] = true);
                Subgroup::Finite(out)
            }
            (Endo::Matrix(m), Subgroup::Lattice(l)) => Subgroup::Lattice(l.image(m)),
            _ => panic!("endomorphism and subgroup do not match"),
        }
    }

    pub fn enumerate_normal_subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        match self {
            GroupContext::Finite(g) => Ok(g.normal_subgroups().into_iter().map(Subgroup::Finite).collect()),
            GroupContext::FreeAbelian { .. } => Err(GroupError::UnsupportedBackend(self.backend_name())),
        }
    }

    /// `{g : g alpha^n = e for some n >= 1}`, the union of the kernel chain.
    pub fn stable_kernel(&self, alpha: &Endo) -> Subgroup {
        let trivial = self.trivial_subgroup();
        let mut power = 1u64;
        let mut current = self.preimage_subgroup(&self.endo_power(alpha, 1), &trivial);
        loop {
            power += 1;
            let next = self.preimage_subgroup(&self.endo_power(alpha, power), &trivial);
            if next == current {
                return current;
            }
            current = next;
        }
    }

    /// Canonical representative of the coset `N a`: the least index for finite
    /// groups, the Hermite-reduced vector for lattices.
    pub fn coset_representative(&self, n: &Subgroup, a: &GroupElement) -> GroupElement {
        match (self, n, a) {
            (GroupContext::Finite(g), Subgroup::Finite(mask), GroupElement::Index(x)) => {
                let rep = (0..g.order())
                    .filter(|&h| mask[h])
                    .map(|h| g.mul(h, *x))
                    .min()
                    .expect("subgroup is nonempty");
                GroupElement::Index(rep)
            }
            (_, Subgroup::Lattice(l), GroupElement::Vector(v)) => GroupElement::Vector(l.reduce(v)),
            _ => panic!("subgroup does not match backend"),
        }
    }
}
