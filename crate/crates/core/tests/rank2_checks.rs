use kmforge::ffield::FieldSpec;
use kmforge::gcm::GeneralizedCartanMatrix;
use kmforge::pgroup::DEFAULT_CAP;
use kmforge::rank2::{
    level_generation_check, r1_check, r2_check, r4_check, r6_check, CaseTag, RealizationCase,
};
use kmforge::report::Status;
use kmforge::roots::{enumerate_real_roots, RootVector};
use proptest::prelude::*;

fn case(tag: CaseTag, q: u64, n: usize) -> RealizationCase {
    RealizationCase::new(tag, &FieldSpec::from_order(q).unwrap(), n).unwrap()
}

#[test]
fn additivity_up_to_height_eight() {
    for q in [5, 7, 9] {
        for tag in CaseTag::ALL {
            let r = r1_check(&case(tag, q, 6), 8).unwrap();
            assert_eq!(r.status, Status::Pass, "{tag:?} q={q}: {:?}", r.witnesses);
        }
    }
}

#[test]
fn torus_rescaling_and_r6() {
    for tag in CaseTag::ALL {
        let c = case(tag, 7, 4);
        assert_eq!(r4_check(&c, 6).unwrap().status, Status::Pass);
        assert_eq!(r6_check(&c).unwrap().status, Status::Pass);
    }
}

#[test]
fn empty_cone_pairs_commute() {
    for tag in CaseTag::ALL {
        let c = case(tag, 5, 4);
        let datum = enumerate_real_roots(&tag.gcm(), 300).unwrap();
        let roots = c.positive_roots_below_trunc();
        let k = c.field();
        let values = k.elements();
        let mut pairs = 0;
        for x in &roots {
            for y in &roots {
                if x == y || !datum.cone_roots(x, y, 12).unwrap().is_empty() {
                    continue;
                }
                pairs += 1;
                for &u in &values {
                    for &v in &values {
                        let g = c.realize(x, u).unwrap();
                        let h = c.realize(y, v).unwrap();
                        assert!(c.ring().is_identity(&c.ring().commutator(&g, &h).unwrap()), "{tag:?} {x} {y}");
                    }
                }
            }
        }
        assert!(pairs > 0, "{tag:?}");
    }
}

#[test]
fn structure_constants_in_unitriangular_model() {
    let (_, out) = r2_check(CaseTag::FiniteA2, &RootVector(vec![1, 0]), &RootVector(vec![0, 1]), &[5, 7]).unwrap();
    assert_eq!(out.constants, Some(vec![1]));
    let (report, out) = r2_check(CaseTag::Twisted, &RootVector(vec![1, 0]), &RootVector(vec![3, 1]), &[5, 7]).unwrap();
    assert_eq!(report.status, Status::Pass);
    assert_eq!(out.cone.len(), 1);
    assert!(out.constants.is_some());
}

#[test]
fn generation_by_groups_matches_span_criterion() {
    for tag in [CaseTag::NonTwisted, CaseTag::Twisted] {
        let c = case(tag, 5, 3);
        for n in [1, 2] {
            let (by_groups, by_span) = level_generation_check(&c, n, DEFAULT_CAP).unwrap();
            assert_eq!(by_groups, by_span, "{tag:?} n={n}");
            assert!(by_span);
        }
    }
}

/// For symmetric `A`, `gamma` in `Psi_J` and `beta` in `Phi_J^+`, no root lies
/// in the open cone spanned by `beta` and `-gamma`.
#[test]
fn parabolic_complement_cones_are_empty() {
    let systems = [
        vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]],
        vec![vec![2, -2], vec![-2, 2]],
        vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
    ];
    for rows in systems {
        let a = GeneralizedCartanMatrix::new(rows).unwrap();
        let d = enumerate_real_roots(&a, 8 * 13).unwrap();
        let l = a.rank();
        for mask in 1..(1usize << l) - 1 {
            let j: Vec<usize> = (0..l).filter(|i| mask >> i & 1 == 1).collect();
            let positives: Vec<RootVector> = d.positive_roots().filter(|r| r.height() <= 8).cloned().collect();
            let in_j = |r: &RootVector| r.support().iter().all(|s| j.contains(s));
            for gamma in positives.iter().filter(|g| !in_j(g)) {
                if !j.iter().all(|&s| d.pair(gamma, &d.simple(s)).unwrap() <= 0) {
                    continue;
                }
                for beta in positives.iter().filter(|b| in_j(b)) {
                    assert!(d.cone_roots(beta, &gamma.neg(), 12).unwrap().is_empty(), "{beta} {gamma}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn realized_roots_are_additive(tag in prop::sample::select(CaseTag::ALL.to_vec()), q in prop::sample::select(vec![5u64, 7, 9]), idx in any::<usize>(), a in any::<u64>(), b in any::<u64>()) {
        let c = case(tag, q, 4);
        let roots = c.positive_roots_below_trunc();
        let gamma = &roots[idx % roots.len()];
        let k = c.field();
        let elems = k.elements();
        let (u, v) = (elems[(a % q) as usize], elems[(b % q) as usize]);
        let lhs = c.realize(gamma, k.add(u, v)).unwrap();
        let rhs = c.ring().mul(&c.realize(gamma, u).unwrap(), &c.realize(gamma, v).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert!(c.in_ambient_group(&c.realize(gamma, u).unwrap()).unwrap());
    }
}
