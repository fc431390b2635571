//! Finite groups given by a validated Cayley table.

use std::collections::BTreeSet;

use super::GroupError;

/// Largest table that is accepted; associativity is always checked in full.
pub const MAX_ORDER: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table: range, identity row and column, Latin square,
    /// full associativity, inverses.
    pub fn from_table(order: usize, table: Vec<Vec<usize>>, identity: usize) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::InvalidTable("order must be positive".into()));
        }
        if order > MAX_ORDER {
            return Err(GroupError::InvalidTable(format!(
                "order {order} exceeds {MAX_ORDER}; associativity cannot be verified exhaustively"
            )));
        }
        if identity >= order {
            return Err(GroupError::InvalidTable(format!("identity {identity} out of range")));
        }
        if table.len() != order || table.iter().any(|r| r.len() != order) {
            return Err(GroupError::InvalidTable(format!("table must be {order}x{order}")));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        if let Some(bad) = flat.iter().find(|&&x| x >= order) {
            return Err(GroupError::InvalidTable(format!("entry {bad} out of range")));
        }
        let at = |a: usize, b: usize| flat[a * order + b];
        for a in 0..order {
            if at(identity, a) != a || at(a, identity) != a {
                return Err(GroupError::InvalidTable(format!(
                    "identity {identity} is not neutral for element {a}"
                )));
            }
        }
        for a in 0..order {
            let mut row = vec![false; order];
            let mut col = vec![false; order];
            for b in 0..order {
                row[at(a, b)] = true;
                col[at(b, a)] = true;
            }
            if row.iter().chain(&col).any(|seen| !seen) {
                return Err(GroupError::InvalidTable(format!(
                    "row or column {a} is not a permutation"
                )));
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::InvalidTable(format!(
                            "not associative: ({a}*{b})*{c} != {a}*({b}*{c})"
                        )));
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; order];
        for (a, inv) in inverse.iter_mut().enumerate() {
            for b in 0..order {
                if at(a, b) == identity {
                    *inv = b;
                    break;
                }
            }
        }
        Ok(FiniteGroup {
            order,
            table: flat,
            identity,
            inverse,
        })
    }

    /// Builds the table of a finite group from an operation on `0..order`.
    pub fn from_fn(order: usize, identity: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        let table = (0..order).map(|a| (0..order).map(|b| op(a, b)).collect()).collect();
        FiniteGroup::from_table(order, table, identity)
    }

    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1)
    }

    /// `Z/n` with element `i` standing for the residue `i`.
    pub fn cyclic(n: usize) -> Self {
        FiniteGroup::from_fn(n, 0, |a, b| (a + b) % n).expect("cyclic table is a group")
    }

    /// Symmetric group on `degree` points; elements are permutations in
    /// lexicographic order (index 0 is the identity). Product `a*b` applies `a`
    /// first, then `b`.
    pub fn symmetric(degree: usize) -> Self {
        let perms = permutations(degree);
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("permutation present");
        let compose = |a: usize, b: usize| {
            let p: Vec<usize> = (0..degree).map(|i| perms[b][perms[a][i]]).collect();
            index(&p)
        };
        FiniteGroup::from_fn(perms.len(), 0, compose).expect("symmetric table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// Closure of a generating set; returns a membership mask.
    pub fn generate(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        mask[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    stack.push(y);
                }
            }
        }
        mask
    }

    pub fn is_subgroup(&self, mask: &[bool]) -> bool {
        if !mask[self.identity] {
            return false;
        }
        let members: Vec<usize> = (0..self.order).filter(|&i| mask[i]).collect();
        members
            .iter()
            .all(|&a| mask[self.inv(a)] && members.iter().all(|&b| mask[self.mul(a, b)]))
    }

    pub fn is_normal(&self, mask: &[bool]) -> bool {
        (0..self.order).all(|g| {
            let gi = self.inv(g);
            (0..self.order)
                .filter(|&h| mask[h])
                .all(|h| mask[self.mul(self.mul(gi, h), g)])
        })
    }

    fn normal_closure(&self, gens: &[usize]) -> Vec<bool> {
        let conjugates: BTreeSet<usize> = gens
            .iter()
            .flat_map(|&h| (0..self.order).map(move |g| (g, h)))
            .map(|(g, h)| self.mul(self.mul(self.inv(g), h), g))
            .collect();
        let list: Vec<usize> = conjugates.into_iter().collect();
        self.generate(&list)
    }

    /// All normal subgroups, each once, ordered by size and then by their
    /// sorted element lists.
    pub fn normal_subgroups(&self) -> Vec<Vec<bool>> {
        let mut closures: Vec<Vec<bool>> = (0..self.order).map(|g| self.normal_closure(&[g])).collect();
        closures.sort();
        closures.dedup();

        let trivial = self.generate(&[]);
        let mut found: BTreeSet<Vec<bool>> = BTreeSet::new();
        found.insert(trivial.clone());
        let mut frontier = vec![trivial];
        while let Some(s) = frontier.pop() {
            for c in &closures {
                if c.iter().zip(&s).all(|(ci, si)| !ci || *si) {
                    continue;
                }
                let gens: Vec<usize> = (0..self.order).filter(|&i| s[i] || c[i]).collect();
                let join = self.generate(&gens);
                if found.insert(join.clone()) {
                    frontier.push(join);
                }
            }
        }
        let mut out: Vec<Vec<bool>> = found.into_iter().collect();
        out.sort_by_key(|mask| {
            let members: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
            (members.len(), members)
        });
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
