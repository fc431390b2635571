//! Brute-force perfectness checks on finite slices of `BR(G, alpha)`.
//!
//! Nothing here consults the classification results. Classes are enumerated
//! through the membership predicate, set products are formed by multiplying
//! every pair of enumerated factors, and divisibility is witnessed by an
//! explicit right factor. Since factor indices are unbounded in principle, a
//! missing element is evidence relative to the search bounds; only
//! idempotent-separating classes on finite groups are searched exhaustively.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bicyclic::Side;
use crate::bruck_reilly::{forgetful, BrContext, BrElement};
use crate::congruence::{CongruenceError, CongruenceSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("bounds out of order: need bound ({bound}) >= window ({window}) >= element indices ({needed})")]
    BoundMisordering { window: u64, bound: u64, needed: u64 },
    #[error("fatal: product {product} of class members lies outside the class of {expected}")]
    InclusionViolated { product: BrElement, expected: BrElement },
    #[error("divisibility closure applies to group congruences only")]
    NotGroupCongruence,
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
}

/// Search limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest index of enumerated pairs and of product-class members.
    pub window: u64,
    /// Largest index of enumerated factors.
    pub bound: u64,
    /// Largest absolute coordinate of pair and product-class elements on
    /// `Z^r`; ignored for finite groups.
    pub norm_bound: u64,
    /// Largest absolute coordinate of enumerated factors; never below `norm_bound`.
    pub factor_norm_bound: u64,
}

impl Bounds {
    pub fn new(window: u64, bound: u64, norm_bound: u64) -> Self {
        Bounds {
            window,
            bound,
            norm_bound,
            factor_norm_bound: norm_bound,
        }
    }

    /// Lets factors range over a larger coordinate box than the pairs. On
    /// `Z^r` a left factor's coordinate is multiplied by a power of the
    /// matrix, so matching right factors can lie well outside the pair box.
    pub fn with_factor_norm(mut self, factor_norm_bound: u64) -> Self {
        self.factor_norm_bound = factor_norm_bound.max(self.norm_bound);
        self
    }

    /// `bound = 2 * window + kmax`, with the norm bound tied to `bound`.
    pub fn with_defaults(window: u64, kmax: u64) -> Self {
        let bound = 2 * window + kmax;
        Bounds::new(window, bound, bound)
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::with_defaults(4, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coverage {
    Covered,
    UncoveredWithinBound,
}

/// Result of comparing `(x~)(y~)` against `(xy)~` inside the bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub pair: (BrElement, BrElement),
    /// Index limit actually used for the product class.
    pub window: u64,
    pub bound: u64,
    pub norm_bound: u64,
    pub factor_norm_bound: u64,
    /// Members of the product class that were found as products.
    pub covered: usize,
    pub uncovered: Vec<BrElement>,
    pub status: Coverage,
    /// `false` only when the factor search was exhaustive.
    pub bound_relative: bool,
}

impl VerificationReport {
    pub fn is_covered(&self) -> bool {
        self.status == Coverage::Covered
    }
}

fn is_exhaustive(s: &BrContext, spec: &CongruenceSpec) -> bool {
    !spec.is_group_congruence() && s.group.is_finite()
}

fn product_window(s: &BrContext, x: &BrElement, y: &BrElement, window: u64) -> u64 {
    window.max(s.mul(x, y).height())
}

fn check_bounds(window: u64, bound: u64, needed: u64) -> Result<(), OracleError> {
    if bound < window || window < needed {
        return Err(OracleError::BoundMisordering { window, bound, needed });
    }
    Ok(())
}

/// Class of `x` restricted to factors that can appear in a product inside
/// `limit`: the left factor's `m` and the right factor's `n` never exceed the
/// product's.
struct FactorSets {
    left: Vec<BrElement>,
    right: Vec<BrElement>,
}

fn factor_sets(
    s: &BrContext,
    spec: &CongruenceSpec,
    x: &BrElement,
    y: &BrElement,
    limit: u64,
    bounds: &Bounds,
) -> Result<FactorSets, OracleError> {
    let left = spec
        .class_members(s, x, bounds.bound, bounds.factor_norm_bound)?
        .into_iter()
        .filter(|a| a.m <= limit)
        .collect();
    let right = spec
        .class_members(s, y, bounds.bound, bounds.factor_norm_bound)?
        .into_iter()
        .filter(|b| b.n <= limit)
        .collect();
    Ok(FactorSets { left, right })
}

fn cover(
    s: &BrContext,
    spec: &CongruenceSpec,
    x: &BrElement,
    y: &BrElement,
    limit: u64,
    factors: &FactorSets,
    bounds: &Bounds,
) -> Result<VerificationReport, OracleError> {
    let xy = s.mul(x, y);
    let target = spec.class_members(s, &xy, limit, bounds.norm_bound)?;
    let mut products: HashSet<BrElement> = HashSet::new();
    for a in &factors.left {
        for b in &factors.right {
            let r = a.n.min(b.m);
            if a.m + b.m - r > limit || a.n + b.n - r > limit {
                continue;
            }
            let ab = s.mul(a, b);
            if products.contains(&ab) {
                continue;
            }
            if !spec.contains(s, &xy, &ab) {
                return Err(OracleError::InclusionViolated {
                    product: ab,
                    expected: xy,
                });
            }
            products.insert(ab);
        }
    }
    let uncovered: Vec<BrElement> = target.iter().filter(|w| !products.contains(w)).cloned().collect();
    Ok(VerificationReport {
        pair: (x.clone(), y.clone()),
        window: limit,
        bound: bounds.bound,
        norm_bound: bounds.norm_bound,
        factor_norm_bound: bounds.factor_norm_bound,
        covered: target.len() - uncovered.len(),
        status: if uncovered.is_empty() {
            Coverage::Covered
        } else {
            Coverage::UncoveredWithinBound
        },
        uncovered,
        bound_relative: !is_exhaustive(s, spec),
    })
}

/// Compares the set product of the classes of `x` and `y` with the class of
/// `xy`. The product class is enumerated up to `max(window, indices of xy)`;
/// factors up to `bound`. Every product that lands inside the window is
/// checked to lie in the class of `xy`; a violation is fatal.
pub fn set_product_window(
    s: &BrContext,
    spec: &CongruenceSpec,
    x: &BrElement,
    y: &BrElement,
    bounds: Bounds,
) -> Result<VerificationReport, OracleError> {
    check_bounds(bounds.window, bounds.bound, x.height().max(y.height()))?;
    let limit = product_window(s, x, y, bounds.window);
    check_bounds(limit, bounds.bound, limit)?;
    let factors = factor_sets(s, spec, x, y, limit, &bounds)?;
    cover(s, spec, x, y, limit, &factors, &bounds)
}

/// Outcome of scanning every pair in the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FalsificationSummary {
    pub pairs_checked: usize,
    /// Distinct (class, class, product window) combinations evaluated.
    pub class_pairs: usize,
    /// First uncovered pair in lexicographic order.
    pub witness: Option<VerificationReport>,
}

/// Runs [`set_product_window`] over all pairs with indices at most `window` in
/// lexicographic order and returns the first uncovered report, if any.
pub fn falsify_perfectness(
    s: &BrContext,
    spec: &CongruenceSpec,
    bounds: Bounds,
) -> Result<Option<VerificationReport>, OracleError> {
    Ok(scan_perfectness(s, spec, bounds, true)?.witness)
}

/// Pair scan; reports for pairs whose factor classes and product window agree
/// are computed once. With `stop_at_first` unset every pair is visited.
pub fn scan_perfectness(
    s: &BrContext,
    spec: &CongruenceSpec,
    bounds: Bounds,
    stop_at_first: bool,
) -> Result<FalsificationSummary, OracleError> {
    check_bounds(bounds.window, bounds.bound, 0)?;
    let elements = s.elements_up_to(bounds.window, bounds.norm_bound);

    // Classes are disjoint and each element lies in its own truncated class,
    // so the truncated class identifies the class.
    let mut class_ids: HashMap<Vec<BrElement>, usize> = HashMap::new();
    let mut class_of = Vec::with_capacity(elements.len());
    for x in &elements {
        let key = spec.class_members(s, x, bounds.window, bounds.norm_bound)?;
        let next = class_ids.len();
        class_of.push(*class_ids.entry(key).or_insert(next));
    }

    let mut factor_cache: HashMap<(usize, u64, bool), Vec<BrElement>> = HashMap::new();
    let mut reports: HashMap<(usize, usize, u64), VerificationReport> = HashMap::new();
    let mut pairs_checked = 0;
    let mut first: Option<VerificationReport> = None;

    for (i, x) in elements.iter().enumerate() {
        for (j, y) in elements.iter().enumerate() {
            pairs_checked += 1;
            let limit = product_window(s, x, y, bounds.window);
            check_bounds(limit, bounds.bound, limit)?;
            let key = (class_of[i], class_of[j], limit);
            let report = match reports.get(&key) {
                Some(r) => r.clone(),
                None => {
                    let left = cached_factors(s, spec, x, limit, true, class_of[i], &bounds, &mut factor_cache)?;
                    let right = cached_factors(s, spec, y, limit, false, class_of[j], &bounds, &mut factor_cache)?;
                    let factors = FactorSets { left, right };
                    let r = cover(s, spec, x, y, limit, &factors, &bounds)?;
                    reports.insert(key, r.clone());
                    r
                }
            };
            if !report.is_covered() && first.is_none() {
                let mut r = report;
                r.pair = (x.clone(), y.clone());
                first = Some(r);
                if stop_at_first {
                    return Ok(FalsificationSummary {
                        pairs_checked,
                        class_pairs: reports.len(),
                        witness: first,
                    });
                }
            }
        }
    }
    Ok(FalsificationSummary {
        pairs_checked,
        class_pairs: reports.len(),
        witness: first,
    })
}

#[allow(clippy::too_many_arguments)]
fn cached_factors(
    s: &BrContext,
    spec: &CongruenceSpec,
    x: &BrElement,
    limit: u64,
    is_left: bool,
    class: usize,
    bounds: &Bounds,
    cache: &mut HashMap<(usize, u64, bool), Vec<BrElement>>,
) -> Result<Vec<BrElement>, OracleError> {
    if let Some(v) = cache.get(&(class, limit, is_left)) {
        return Ok(v.clone());
    }
    let members: Vec<BrElement> = spec
        .class_members(s, x, bounds.bound, bounds.factor_norm_bound)?
        .into_iter()
        .filter(|a| if is_left { a.m <= limit } else { a.n <= limit })
        .collect();
    cache.insert((class, limit, is_left), members.clone());
    Ok(members)
}

/// Some `t` with `w t = v`, found by solving the index equations of the
/// forgetful image and then the group coordinate; verified by multiplication.
pub fn right_cofactor(s: &BrContext, w: &BrElement, v: &BrElement) -> Option<BrElement> {
    if !forgetful(w).divides(forgetful(v), Side::Right) {
        return None;
    }
    let group = &s.group;
    let mut candidates = Vec::new();
    // s_idx >= w.n: r = w.n, so v.m = w.m + s_idx - w.n and v.n = t_idx.
    let s_idx = v.m - w.m + w.n;
    let g = group.mul(&group.inv(&s.alpha_pow(s_idx - w.n, &w.g)), &v.g);
    candidates.push(BrElement::new(s_idx, g, v.n));
    // s_idx < w.n needs v.m = w.m; then v.n = w.n + t_idx - s_idx and
    // h alpha^{w.n - s_idx} = w.g^-1 v.g.
    if v.m == w.m {
        for s_idx in 0..w.n {
            let Some(t_idx) = (v.n + s_idx).checked_sub(w.n) else {
                continue;
            };
            let target = group.mul(&group.inv(&w.g), &v.g);
            if let Some(h) = group.solve_endo_power(&s.alpha, w.n - s_idx, &target) {
                candidates.push(BrElement::new(s_idx, h, t_idx));
            }
        }
    }
    candidates.into_iter().find(|t| &s.mul(w, t) == v)
}

/// Whether some `w` in the class of `u` (indices up to `bound`) has `v` as a
/// right multiple.
pub fn divisibility_closure_pair(
    s: &BrContext,
    spec: &CongruenceSpec,
    u: &BrElement,
    v: &BrElement,
    bounds: Bounds,
) -> Result<bool, OracleError> {
    if !spec.is_group_congruence() {
        return Err(OracleError::NotGroupCongruence);
    }
    check_bounds(bounds.window, bounds.bound, u.height().max(v.height()))?;
    for w in spec.class_members(s, u, bounds.bound, bounds.factor_norm_bound)? {
        if w.m > v.m {
            continue;
        }
        if right_cofactor(s, &w, v).is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Checks that every pair `(u, v)` inside the window is in the composite of
/// the congruence followed by right divisibility; returns the first failing
/// pair.
pub fn divisibility_closure_check(
    s: &BrContext,
    spec: &CongruenceSpec,
    bounds: Bounds,
) -> Result<Option<(BrElement, BrElement)>, OracleError> {
    if !spec.is_group_congruence() {
        return Err(OracleError::NotGroupCongruence);
    }
    check_bounds(bounds.window, bounds.bound, 0)?;
    let elements = s.elements_up_to(bounds.window, bounds.norm_bound);
    // The answer depends on u only through its class.
    let mut reachable: HashMap<Vec<BrElement>, BTreeSet<BrElement>> = HashMap::new();
    for u in &elements {
        let class = spec.class_members(s, u, bounds.bound, bounds.factor_norm_bound)?;
        let key = spec.class_members(s, u, bounds.window, bounds.norm_bound)?;
        let multiples = reachable.entry(key).or_insert_with(|| {
            elements
                .iter()
                .filter(|v| class.iter().any(|w| w.m <= v.m && right_cofactor(s, w, v).is_some()))
                .cloned()
                .collect()
        });
        if let Some(v) = elements.iter().find(|v| !multiples.contains(v)) {
            return Ok(Some((u.clone(), v.clone())));
        }
    }
    Ok(None)
}
