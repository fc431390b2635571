//! Elements and multiplication of the Bruck-Reilly extension `BR(G, alpha)`.

use std::cmp::Ordering;
use std::fmt;

use crate::bicyclic::Bicyclic;
use crate::group::{Endo, GroupContext, GroupElement, GroupError};

/// A triple `(m, g, n)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BrElement {
    pub m: u64,
    pub g: GroupElement,
    pub n: u64,
}

impl BrElement {
    pub fn new(m: u64, g: GroupElement, n: u64) -> Self {
        BrElement { m, g, n }
    }

    /// Largest of the two indices.
    pub fn height(&self) -> u64 {
        self.m.max(self.n)
    }
}

// Enumeration order: m, then n, then the group coordinate.
impl Ord for BrElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.m, self.n, &self.g).cmp(&(other.m, other.n, &other.g))
    }
}

impl PartialOrd for BrElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.m, self.g, self.n)
    }
}

impl fmt::Debug for BrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `BR(G, alpha)` for a coefficient group and one of its endomorphisms.
#[derive(Clone, Debug)]
pub struct BrContext {
    pub group: GroupContext,
    pub alpha: Endo,
}

impl BrContext {
    pub fn new(group: GroupContext, alpha: Endo) -> Result<Self, GroupError> {
        match (&group, &alpha) {
            (GroupContext::Finite(g), Endo::Table(t)) => {
                if t.len() != g.order() {
                    return Err(GroupError::InvalidEndo("image table has the wrong length".into()));
                }
            }
            (GroupContext::FreeAbelian { rank }, Endo::Matrix(m)) => {
                if m.rows() != *rank || m.cols() != *rank {
                    return Err(GroupError::InvalidEndo("matrix has the wrong shape".into()));
                }
            }
            _ => return Err(GroupError::InvalidEndo("endomorphism does not match backend".into())),
        }
        Ok(BrContext { group, alpha })
    }

    /// `BR({e}, id)`, a copy of the bicyclic semigroup.
    pub fn bicyclic() -> Self {
        let group = GroupContext::finite(crate::group::FiniteGroup::trivial());
        let alpha = group.identity_endo();
        BrContext { group, alpha }
    }

    pub fn identity(&self) -> BrElement {
        BrElement::new(0, self.group.identity(), 0)
    }

    pub fn element(&self, m: u64, g: GroupElement, n: u64) -> Result<BrElement, GroupError> {
        self.group.validate(&g)?;
        Ok(BrElement::new(m, g, n))
    }

    pub fn alpha_pow(&self, n: u64, a: &GroupElement) -> GroupElement {
        self.group.endo_apply_power(&self.alpha, n, a)
    }

    /// `(m,g,n)(p,h,q) = (m+p-r, (g alpha^{p-r})(h alpha^{n-r}), n+q-r)`, `r = min(n,p)`.
    pub fn mul(&self, x: &BrElement, y: &BrElement) -> BrElement {
        let r = x.n.min(y.m);
        let left = self.alpha_pow(y.m - r, &x.g);
        let right = self.alpha_pow(x.n - r, &y.g);
        BrElement {
            m: x.m + y.m - r,
            g: self.group.mul(&left, &right),
            n: x.n + y.n - r,
        }
    }

    pub fn inv(&self, x: &BrElement) -> BrElement {
        BrElement {
            m: x.n,
            g: self.group.inv(&x.g),
            n: x.m,
        }
    }

    /// The idempotent `(n, e, n)`.
    pub fn idempotent(&self, n: u64) -> BrElement {
        BrElement::new(n, self.group.identity(), n)
    }

    pub fn is_idempotent(&self, x: &BrElement) -> bool {
        x.m == x.n && x.g == self.group.identity()
    }

    /// Every element with both indices at most `window`; group coordinates are
    /// exhaustive for finite groups and norm-bounded for `Z^r`.
    pub fn elements_up_to(&self, window: u64, norm: u64) -> Vec<BrElement> {
        let box_ = self.group.element_box(norm);
        let mut out = Vec::with_capacity(((window + 1) * (window + 1)) as usize * box_.len());
        for m in 0..=window {
            for n in 0..=window {
                for g in &box_ {
                    out.push(BrElement::new(m, g.clone(), n));
                }
            }
        }
        out
    }
}

/// The group-forgetful homomorphism onto the bicyclic semigroup.
pub fn forgetful(x: &BrElement) -> Bicyclic {
    Bicyclic::new(x.m, x.n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends;
    use crate::group::{FiniteGroup, IntMatrix};

    fn z4_doubling() -> BrContext {
        backends::z4_doubling()
    }

    fn e(i: usize) -> GroupElement {
        GroupElement::Index(i)
    }

    #[test]
    fn multiplication_examples() {
        let s = z4_doubling();
        let x = BrElement::new(2, e(1), 3);
        let y = BrElement::new(1, e(1), 4);
        assert_eq!(s.mul(&x, &y), BrElement::new(2, e(1), 6));
        let g = BrElement::new(3, e(3), 5);
        assert_eq!(s.mul(&s.identity(), &g), g);
        assert_eq!(s.mul(&g, &s.inv(&g)), BrElement::new(3, e(0), 3));
    }

    #[test]
    fn inverse_examples() {
        let s = z4_doubling();
        let x = BrElement::new(2, e(3), 5);
        assert_eq!(s.inv(&x), BrElement::new(5, e(1), 2));
        assert_eq!(s.inv(&s.idempotent(4)), s.idempotent(4));
        assert_eq!(s.inv(&s.inv(&x)), x);
    }

    #[test]
    fn idempotent_examples() {
        let s = z4_doubling();
        assert_eq!(s.idempotent(0), s.identity());
        let f = s.idempotent(3);
        assert_eq!(s.mul(&f, &f), f);
        assert_eq!(s.mul(&f, &s.idempotent(1)), f);
    }

    #[test]
    fn forgetful_examples() {
        let s = z4_doubling();
        assert_eq!(forgetful(&BrElement::new(2, e(3), 6)), Bicyclic::new(2, 6));
        assert_eq!(forgetful(&s.identity()), Bicyclic::IDENTITY);
        let x = BrElement::new(2, e(1), 3);
        let y = BrElement::new(1, e(1), 4);
        assert_eq!(forgetful(&s.mul(&x, &y)), forgetful(&x) * forgetful(&y));
        assert_eq!(forgetful(&s.mul(&x, &y)), Bicyclic::new(2, 6));
    }

    #[test]
    fn exhaustive_laws_on_small_window() {
        for s in [z4_doubling(), backends::s3_sign(), backends::z6_negation()] {
            let els = s.elements_up_to(3, 0);
            for x in &els {
                assert_eq!(s.mul(&s.mul(x, &s.inv(x)), x), *x);
                for y in &els {
                    let xy = s.mul(x, y);
                    assert_eq!(forgetful(&xy), forgetful(x) * forgetful(y));
                    for z in &els {
                        assert_eq!(s.mul(&xy, z), s.mul(x, &s.mul(y, z)));
                    }
                }
            }
            for i in 0..5 {
                for j in 0..5 {
                    let k = i.max(j);
                    assert_eq!(s.mul(&s.idempotent(i), &s.idempotent(j)), s.idempotent(k));
                }
            }
        }
    }

    #[test]
    fn free_abelian_multiplication() {
        let g = GroupContext::free_abelian(1).unwrap();
        let a = g.endo_from_matrix(IntMatrix::from_row_major(1, 1, vec![2])).unwrap();
        let s = BrContext::new(g, a).unwrap();
        let x = BrElement::new(0, GroupElement::vector([1]), 2);
        let y = BrElement::new(3, GroupElement::vector([5]), 0);
        // r = 2: g alpha^1 + h alpha^0 = 2 + 5.
        assert_eq!(s.mul(&x, &y), BrElement::new(1, GroupElement::vector([7]), 0));
    }

    #[test]
    fn rejects_mismatched_endo() {
        let g = GroupContext::finite(FiniteGroup::cyclic(3));
        let z = GroupContext::free_abelian(1).unwrap();
        assert!(BrContext::new(g, z.identity_endo()).is_err());
    }
}
