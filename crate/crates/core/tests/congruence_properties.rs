mod common;

use perfcong::backends;
use perfcong::bicyclic::Side;
use perfcong::congruence::{recover_normal_subgroup, sigma_spec};
use perfcong::oracle::right_cofactor;
use perfcong::{catalog, forgetful, validate_gc, BrContext, BrElement, CongruenceKind, GroupElement};
use proptest::prelude::*;

use common::{all_backends, brute_force_congruence_count, z_subgroup};

#[test]
fn catalog_counts_match_brute_force() {
    let cases = [
        ("Z4/x2", backends::z4_doubling(), 3, 7),
        ("Z2/id", backends::z2_identity(), 1, 7),
        ("trivial/id", backends::bicyclic(), 3, 5),
        ("Z2/id", backends::z2_identity(), 2, 10),
    ];
    for (name, s, kmax, expected) in cases {
        let listed = catalog(&s, kmax, None).unwrap().len();
        let brute = brute_force_congruence_count(&s, kmax, kmax + 2);
        assert_eq!(listed, expected, "{name} kmax {kmax}");
        assert_eq!(brute, expected, "{name} kmax {kmax}");
    }
}

#[test]
fn congruences_are_compatible_equivalences_on_window_four() {
    for (name, s) in [("Z4/x2", backends::z4_doubling()), ("Z6/x5", backends::z6_negation())] {
        let els = s.elements_up_to(4, 0);
        for spec in catalog(&s, 2, None).unwrap().specs {
            let classes: Vec<Vec<bool>> = els.iter().map(|x| els.iter().map(|y| spec.contains(&s, x, y)).collect()).collect();
            for i in 0..els.len() {
                assert!(classes[i][i]);
                for j in 0..els.len() {
                    assert_eq!(classes[i][j], classes[j][i], "{name}");
                    if classes[i][j] {
                        for (jk, ik) in classes[j].iter().zip(&classes[i]) {
                            assert!(!jk || *ik, "{name}: transitivity");
                        }
                        for c in &els {
                            assert!(spec.contains(&s, &s.mul(&els[i], c), &s.mul(&els[j], c)), "{name}");
                            assert!(spec.contains(&s, &s.mul(c, &els[i]), &s.mul(c, &els[j])), "{name}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn idempotents_and_recovery() {
    for (name, s, pool) in all_backends() {
        for spec in catalog(&s, 3, pool.as_deref()).unwrap().specs {
            for i in 0..5 {
                for j in 0..5 {
                    let related = spec.contains(&s, &s.idempotent(i), &s.idempotent(j));
                    if spec.is_group_congruence() {
                        assert!(related, "{name}: idempotents {i} {j} split");
                    } else {
                        assert_eq!(related, i == j, "{name}: idempotents {i} {j} joined");
                    }
                }
            }
            if let CongruenceKind::IdempotentSeparating { normal } = spec.kind() {
                assert_eq!(&recover_normal_subgroup(&s, &spec, 6).unwrap(), normal, "{name}");
            }
        }
    }
}

#[test]
fn sigma_is_least_group_congruence() {
    for (name, s, pool) in all_backends() {
        let sigma = sigma_spec(&s).unwrap();
        let norm = if s.group.is_finite() { 0 } else { 2 };
        let els = s.elements_up_to(3, norm);
        for spec in catalog(&s, 3, pool.as_deref()).unwrap().specs.iter().filter(|x| x.is_group_congruence()) {
            for x in &els {
                for y in &els {
                    if sigma.contains(&s, x, y) {
                        assert!(spec.contains(&s, x, y), "{name}: sigma pair {x} {y} outside {:?}", spec.kind());
                    }
                }
            }
        }
    }
}

#[test]
fn catalog_has_no_semantic_duplicates() {
    for (name, s) in backends::finite_suite() {
        let kmax = 3;
        let specs = catalog(&s, kmax, None).unwrap().specs;
        let els = s.elements_up_to(kmax + 2, 0);
        let tables: Vec<Vec<bool>> = specs
            .iter()
            .map(|spec| els.iter().flat_map(|x| els.iter().map(move |y| (x, y))).map(|(x, y)| spec.contains(&s, x, y)).collect())
            .collect();
        for i in 0..tables.len() {
            for j in 0..i {
                assert_ne!(tables[i], tables[j], "{name}: {:?} and {:?} coincide", specs[i].kind(), specs[j].kind());
            }
        }
    }
}

#[test]
fn coset_representatives_give_identical_relations() {
    let s = backends::z6_negation();
    let g = &s.group;
    for spec in catalog(&s, 2, None).unwrap().specs {
        let CongruenceKind::Group { normal, z, k } = spec.kind() else {
            continue;
        };
        for other in g.elements().unwrap() {
            if !g.in_coset(normal, &other, z) {
                continue;
            }
            let alt = validate_gc(&s, normal, &other, *k).unwrap();
            for x in s.elements_up_to(3, 0) {
                for y in s.elements_up_to(3, 0) {
                    assert_eq!(spec.contains(&s, &x, &y), alt.contains(&s, &x, &y));
                }
            }
        }
    }
}

#[test]
fn green_h_is_the_forgetful_kernel() {
    let s = backends::s3_sign();
    let els = s.elements_up_to(3, 0);
    for x in &els {
        for y in &els {
            // x R y iff xS = yS, x L y iff Sx = Sy
            let r = right_cofactor(&s, x, y).is_some() && right_cofactor(&s, y, x).is_some();
            let l = right_cofactor(&s, &s.inv(x), &s.inv(y)).is_some() && right_cofactor(&s, &s.inv(y), &s.inv(x)).is_some();
            assert_eq!(r && l, forgetful(x) == forgetful(y), "{x} {y}");
        }
    }
}

#[test]
fn divisibility_projects_to_bicyclic() {
    for (_, s) in backends::finite_suite() {
        let els = s.elements_up_to(3, 0);
        for x in &els {
            for y in &els {
                if right_cofactor(&s, x, y).is_some() {
                    assert!(forgetful(x).divides(forgetful(y), Side::Right));
                }
                if right_cofactor(&s, &s.inv(x), &s.inv(y)).is_some() {
                    assert!(forgetful(x).divides(forgetful(y), Side::Left));
                }
            }
        }
    }
}

fn z_element() -> impl Strategy<Value = BrElement> {
    (0u64..5, -6i64..7, 0u64..5).prop_map(|(m, g, n)| BrElement::new(m, GroupElement::vector([g]), n))
}

fn z_spec(s: &BrContext, gen: i64, k: u64) -> perfcong::CongruenceSpec {
    validate_gc(s, &z_subgroup(s, gen), &GroupElement::vector([0]), k).unwrap()
}

/// `(generator of N, k)` with `(2^k - 1) Z` inside `N`.
fn valid_z_params() -> impl Strategy<Value = (i64, u64)> {
    prop_oneof![Just((0, 0)), Just((1, 0)), Just((1, 1)), Just((1, 3)), Just((3, 0)), Just((3, 2)), Just((3, 4))]
}

proptest! {
    #[test]
    fn abelian_group_congruence_is_compatible(x in z_element(), y in z_element(), c in z_element(), (gen, k) in valid_z_params()) {
        let s = backends::z_doubling();
        let spec = z_spec(&s, gen, k);
        prop_assert!(spec.contains(&s, &x, &x));
        prop_assert_eq!(spec.contains(&s, &x, &y), spec.contains(&s, &y, &x));
        if spec.contains(&s, &x, &y) {
            prop_assert!(spec.contains(&s, &s.mul(&x, &c), &s.mul(&y, &c)));
            prop_assert!(spec.contains(&s, &s.mul(&c, &x), &s.mul(&c, &y)));
        }
    }

    #[test]
    fn abelian_transitivity(x in z_element(), y in z_element(), w in z_element(), (gen, k) in valid_z_params()) {
        let s = backends::z_doubling();
        let spec = z_spec(&s, gen, k);
        if spec.contains(&s, &x, &y) && spec.contains(&s, &y, &w) {
            prop_assert!(spec.contains(&s, &x, &w));
        }
    }

    #[test]
    fn coset_is_fixed_by_alpha_powers(si in 0usize..6, l in 1i64..5, n in 1u64..5) {
        let (_, s) = &backends::finite_suite()[si];
        let g = &s.group;
        for spec in catalog(s, 3, None).unwrap().specs {
            if let CongruenceKind::Group { normal, z, .. } = spec.kind() {
                let zl = g.pow(z, l);
                prop_assert!(g.in_coset(normal, &s.alpha_pow(n, &zl), &zl));
            }
        }
    }

    #[test]
    fn lattice_coset_is_fixed_by_alpha_powers(l in 1i64..5, n in 1u64..5) {
        let s = backends::z_doubling();
        let pool = common::z_pool(&s);
        for spec in catalog(&s, 3, Some(&pool)).unwrap().specs {
            if let CongruenceKind::Group { normal, z, .. } = spec.kind() {
                let zl = s.group.pow(z, l);
                prop_assert!(s.group.in_coset(normal, &s.alpha_pow(n, &zl), &zl));
            }
        }
    }
}
