//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use perfcong::backends;
use perfcong::{BrContext, BrElement, GroupElement, Subgroup};

/// Subgroups of `Z` offered to the catalog in place of full enumeration.
pub fn z_pool(s: &BrContext) -> Vec<Subgroup> {
    let mut pool = vec![s.group.trivial_subgroup()];
    for g in [2, 3, 6] {
        pool.push(s.group.subgroup_from_basis(&[vec![BigInt::from(g)]]).unwrap());
    }
    pool.push(s.group.whole_group());
    pool
}

pub fn z_subgroup(s: &BrContext, g: i64) -> Subgroup {
    s.group.subgroup_from_basis(&[vec![BigInt::from(g)]]).unwrap()
}

/// Every test backend with the pool the catalog needs (`None` for finite groups).
pub fn all_backends() -> Vec<(&'static str, BrContext, Option<Vec<Subgroup>>)> {
    let mut out: Vec<_> = backends::finite_suite()
        .into_iter()
        .map(|(name, s)| (name, s, None))
        .collect();
    let z = backends::z_doubling();
    let pool = z_pool(&z);
    out.push(("Z/x2", z, Some(pool)));
    out
}

pub fn br(m: u64, g: usize, n: u64) -> BrElement {
    BrElement::new(m, GroupElement::Index(g), n)
}

/// A relation on a finite slice of the semigroup, as a sorted set of index pairs.
pub type WindowRelation = BTreeSet<(usize, usize)>;

/// Counts the distinct congruences visible on the slice of elements with
/// indices at most `window`.
///
/// Candidates are written down straight from the membership conditions
/// without any of the library's validation: every subgroup `H` for the
/// idempotent-separating shape, and every `(H, z, k)` with `k <= kmax` for
/// the group shape. A candidate survives when its restriction to the slice
/// is an equivalence relation compatible with every product that stays in
/// the slice. Survivors are deduplicated by their pair sets.
pub fn brute_force_congruence_count(s: &BrContext, kmax: u64, window: u64) -> usize {
    let group = &s.group;
    let elements = s.elements_up_to(window, 0);
    let index: HashMap<BrElement, usize> = elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let size = elements.len();
    let mut table = vec![None; size * size];
    for (i, x) in elements.iter().enumerate() {
        for (j, y) in elements.iter().enumerate() {
            table[i * size + j] = index.get(&s.mul(x, y)).copied();
        }
    }

    let order = group.elements().expect("finite group").len();
    let mut subgroups: Vec<BTreeSet<usize>> = Vec::new();
    for a in 0..order {
        for b in 0..order {
            let mut h: BTreeSet<usize> = [a, b].into_iter().collect();
            h.insert(group.identity().as_index().unwrap());
            loop {
                let grown: BTreeSet<usize> = h
                    .iter()
                    .flat_map(|&u| h.iter().map(move |&v| (u, v)))
                    .map(|(u, v)| idx(group.mul(&GroupElement::Index(u), &GroupElement::Index(v))))
                    .chain(h.iter().copied())
                    .collect();
                if grown == h {
                    break;
                }
                h = grown;
            }
            if !subgroups.contains(&h) {
                subgroups.push(h);
            }
        }
    }

    let inv = |g: &GroupElement| group.inv(g);
    let mul = |a: &GroupElement, b: &GroupElement| group.mul(a, b);
    let pow = |g: &GroupElement, n: u64| s.alpha_pow(n, g);

    type Pred<'a> = Box<dyn Fn(&BrElement, &BrElement) -> bool + 'a>;
    let mut candidates: Vec<Pred> = Vec::new();
    for h in &subgroups {
        let h1 = h.clone();
        candidates.push(Box::new(move |x: &BrElement, y: &BrElement| {
            x.m == y.m && x.n == y.n && h1.contains(&idx(mul(&x.g, &inv(&y.g))))
        }));
        for z in 0..order {
            for k in 0..=kmax {
                let h2 = h.clone();
                candidates.push(Box::new(move |x: &BrElement, y: &BrElement| {
                    let d = (y.n as i64 - y.m as i64) - (x.n as i64 - x.m as i64);
                    let l = if k == 0 {
                        if d != 0 {
                            return false;
                        }
                        0
                    } else {
                        if d.rem_euclid(k as i64) != 0 {
                            return false;
                        }
                        d / k as i64
                    };
                    let zl = group.pow(&GroupElement::Index(z), -l);
                    let w = mul(&mul(&pow(&y.g, x.n), &inv(&pow(&x.g, y.n))), &zl);
                    h2.contains(&idx(w))
                }));
            }
        }
    }

    let mut found: Vec<WindowRelation> = Vec::new();
    for related in &candidates {
        let mut rel = vec![false; size * size];
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                rel[i * size + j] = related(x, y);
            }
        }
        if is_congruence_on_slice(&rel, &table, size) {
            let pairs: WindowRelation = (0..size * size)
                .filter(|&p| rel[p])
                .map(|p| (p / size, p % size))
                .collect();
            if !found.contains(&pairs) {
                found.push(pairs);
            }
        }
    }
    found.len()
}

fn idx(g: GroupElement) -> usize {
    g.as_index().expect("finite group element")
}

fn is_congruence_on_slice(rel: &[bool], table: &[Option<usize>], size: usize) -> bool {
    for i in 0..size {
        if !rel[i * size + i] {
            return false;
        }
        for j in 0..size {
            if rel[i * size + j] != rel[j * size + i] {
                return false;
            }
            if !rel[i * size + j] {
                continue;
            }
            for k in 0..size {
                if rel[j * size + k] && !rel[i * size + k] {
                    return false;
                }
            }
        }
    }
    for i in 0..size {
        for j in 0..size {
            if !rel[i * size + j] {
                continue;
            }
            for c in 0..size {
                if let (Some(a), Some(b)) = (table[i * size + c], table[j * size + c]) {
                    if !rel[a * size + b] {
                        return false;
                    }
                }
                if let (Some(a), Some(b)) = (table[c * size + i], table[c * size + j]) {
                    if !rel[a * size + b] {
                        return false;
                    }
                }
            }
        }
    }
    true
}
