//! The bicyclic semigroup as pairs of naturals.

use std::fmt;
use std::ops::Mul;

/// The pair `(m, n)`, standing for `b^m a^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bicyclic {
    pub m: u64,
    pub n: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `(m,n)(p,q) = (m+p-r, n+q-r)` with `r = min(n, p)`.
impl Mul for Bicyclic {
    type Output = Bicyclic;

    fn mul(self, other: Bicyclic) -> Bicyclic {
        let r = self.n.min(other.m);
        Bicyclic {
            m: self.m + other.m - r,
            n: self.n + other.n - r,
        }
    }
}

impl Bicyclic {
    pub const IDENTITY: Bicyclic = Bicyclic { m: 0, n: 0 };

    pub fn new(m: u64, n: u64) -> Self {
        Bicyclic { m, n }
    }

    /// Right divisibility: `other` lies in `self * B`. Left: `other` lies in `B * self`.
    pub fn divides(self, other: Bicyclic, side: Side) -> bool {
        match side {
            Side::Right => self.m <= other.m,
            Side::Left => self.n <= other.n,
        }
    }

    /// `n - m` as a signed integer.
    pub fn drift(self) -> i64 {
        self.n as i64 - self.m as i64
    }

    pub fn is_idempotent(self) -> bool {
        self.m == self.n
    }
}

impl fmt::Display for Bicyclic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// Membership in the congruence `zeta_k`: equal drift for `k = 0`, drift
/// congruent modulo `k` otherwise.
pub fn zeta_contains(k: u64, x: Bicyclic, y: Bicyclic) -> bool {
    let d = y.drift() - x.drift();
    if k == 0 {
        d == 0
    } else {
        d.rem_euclid(k as i64) == 0
    }
}
