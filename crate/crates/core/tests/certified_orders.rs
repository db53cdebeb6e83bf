//! End-to-end checks across the supported orders: build each system, verify
//! the defining property, and run the full premise suite.

use std::collections::BTreeSet;

use sts_core::construct::{construct_over, construct_sts};
use sts_core::group::GroupSpec;
use sts_core::verify::{certify_no_parallel_class, check_sts, uncovered_pairs_of_b0};

#[test]
fn supported_orders_certify_end_to_end() {
    for v in [27u64, 87, 147, 627] {
        let built = construct_sts(v).unwrap();
        assert_eq!(built.system.len() as u64, v * (v - 1) / 6, "v={v}");

        let report = check_sts(&built.system);
        assert!(
            report.is_valid(),
            "v={v}: {:?}",
            &report.violations[..8.min(report.violations.len())]
        );

        let cert =
            certify_no_parallel_class(&built.system, &built.spec, Some(&built.colors)).unwrap();
        assert!(cert.is_valid(), "v={v}");
        assert_eq!(cert.premises.len(), 10);

        let n = v - 2;
        let h = n / 5;
        let counts = built.system.role_counts();
        assert_eq!(counts.zero_sum as u64, (n * n - 3 * n + 2) / 6 - 2, "v={v}");
        assert_eq!(counts.infinity as u64, 5 * (h - 1), "v={v}");
        assert_eq!(counts.seven_point, 7, "v={v}");

        assert_eq!(cert.premise("P1").unwrap().checked, v * (v - 1) / 2);
        assert_eq!(cert.premise("P8").unwrap().checked, 5 * (h - 1));
        assert_eq!(cert.premise("P9").unwrap().checked, 5 * (h - 1));
    }
}

#[test]
fn uncovered_pair_scan_agrees_with_edge_description() {
    // Two independent routes to the deficiency graph: pair-coverage scan of
    // the full zero-sum family versus the closed-form edges {-w, 2w}.
    for v in [27u64, 147, 627] {
        let spec = GroupSpec::from_order(v).unwrap();
        let scanned: BTreeSet<(u32, u32)> = uncovered_pairs_of_b0(&spec).into_iter().collect();
        let edges: BTreeSet<(u32, u32)> = spec
            .elements()
            .skip(1)
            .map(|w| {
                let (a, b) = spec.x_edge(&w);
                (a as u32, b as u32)
            })
            .collect();
        assert_eq!(scanned, edges, "v={v}");
        assert_eq!(scanned.len() as u64, spec.order() - 1, "v={v}");
    }
}

#[test]
fn paired_orbit_components_build_a_certified_system() {
    // Z5 x Z5 x Z17 has orbits that pair up with their negations rather
    // than containing them, exercising the cross-orbit representative rule
    // in a full build. The order 427 is not in the supported enumeration
    // (427 mod 30 = 7), but the assembly and every premise still hold.
    let spec = GroupSpec::new(&[5, 5, 17]).unwrap();
    let built = construct_over(&spec).unwrap();
    assert_eq!(built.system.v(), 427);
    assert!(check_sts(&built.system).is_valid());
    let cert = certify_no_parallel_class(&built.system, &built.spec, Some(&built.colors)).unwrap();
    assert!(cert.is_valid());
}

#[test]
fn short_orbit_components_fail_only_the_symmetry_premise() {
    // Over Z7 the orbit size is 6: even, so the system is still pair-exact,
    // but 6 is not divisible by 4 and negation flips colors. The premise
    // suite must catch exactly that.
    let spec = GroupSpec::new(&[5, 7]).unwrap();
    let built = construct_over(&spec).unwrap();
    assert_eq!(built.system.v(), 37);
    assert!(check_sts(&built.system).is_valid());
    let cert = certify_no_parallel_class(&built.system, &built.spec, Some(&built.colors)).unwrap();
    assert!(!cert.is_valid());
    assert!(cert.premise("P1").unwrap().passed);
    assert!(cert.premise("P8").unwrap().passed);
    assert!(!cert.premise("P9").unwrap().passed);
}

#[test]
fn construction_is_reproducible_across_calls() {
    for v in [27u64, 87] {
        let a = construct_sts(v).unwrap();
        let b = construct_sts(v).unwrap();
        assert_eq!(a.system, b.system);
        assert_eq!(a.colors, b.colors);
    }
}
