mod oracles;

use std::collections::BTreeSet;

use cxp_core::analytics::{ccdf, coverage, greedy_anchors, pair_multiplicity_stats, AsPrefixes, AsRelationships};
use cxp_core::ingest::{build_multigraph, MembershipTable, PathletSynthesisPolicy};
use cxp_core::PathletKind;
use oracles::{addresses, random_coverage, random_rows, reach, shared_member_count};
use proptest::prelude::*;

fn table(rows: &[(String, u32)]) -> MembershipTable {
    rows.iter().map(|(i, a)| (i.as_str(), *a)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn construction_count(seed: u64) {
        let rows = random_rows(seed, 8, 25, 10);
        let g = build_multigraph(&table(&rows), &PathletSynthesisPolicy::default()).unwrap();
        let expected = shared_member_count(&rows);
        let transit = g.pathlets().filter(|p| p.kind == PathletKind::Transit).count();
        prop_assert_eq!(transit, expected.values().sum::<usize>());
        for ((a, b), n) in &expected {
            prop_assert_eq!(g.parallel_edge_count(a, b).unwrap(), *n);
        }
    }

    #[test]
    fn ccdf_shape(values in proptest::collection::vec(0u64..50, 0..200)) {
        let c = ccdf(&values);
        let distinct: BTreeSet<u64> = values.iter().copied().collect();
        prop_assert_eq!(c.points.len(), distinct.len());
        if let Some(first) = c.points.first() {
            prop_assert_eq!(first.fraction, 1.0);
        }
        for w in c.points.windows(2) {
            prop_assert!(w[0].value < w[1].value);
            prop_assert!(w[0].fraction > w[1].fraction);
        }
        for p in &c.points {
            let ge = values.iter().filter(|v| **v >= p.value).count();
            prop_assert_eq!(p.fraction, ge as f64 / values.len() as f64);
        }
    }

    #[test]
    fn multiplicity_ccdf_shape(seed: u64) {
        let rows = random_rows(seed, 10, 15, 10);
        let g = build_multigraph(&table(&rows), &PathletSynthesisPolicy::default()).unwrap();
        if let Ok(s) = pair_multiplicity_stats(&g) {
            for c in [&s.multiplicity_ccdf, &s.degree_ccdf, &s.direct_ccdf] {
                prop_assert_eq!(c.points[0].fraction, 1.0);
                prop_assert!(c.points.windows(2).all(|w| w[0].value < w[1].value && w[0].fraction >= w[1].fraction));
            }
            prop_assert_eq!(s.pairs.iter().map(|p| p.multiplicity).sum::<u64>(), s.transit_pathlets);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn greedy_and_coverage_match_address_sets(seed: u64, cone: bool) {
        let inst = random_coverage(seed, 6);
        let t = table(&inst.rows);
        let pfx: AsPrefixes = inst.prefixes.clone();
        let mut rel = AsRelationships::new();
        for (p, c) in &inst.customers {
            rel.insert(*p, *c).unwrap();
        }
        let ixps: Vec<String> = t.iter().map(|(i, _)| i.clone()).collect();
        let steps = greedy_anchors(&t, &pfx, Some(&rel), ixps.len(), cone).unwrap();
        let mut covered: BTreeSet<u32> = BTreeSet::new();
        let mut chosen: Vec<String> = Vec::new();
        for s in &steps {
            let best = ixps
                .iter()
                .filter(|i| !chosen.contains(i))
                .map(|i| (addresses(&inst.prefixes, &reach(&inst, i, cone)).difference(&covered).count(), i))
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(a.1)))
                .unwrap();
            prop_assert_eq!((s.gain as usize, &s.ixp), (best.0, best.1));
            covered.extend(addresses(&inst.prefixes, &reach(&inst, &s.ixp, cone)));
            chosen.push(s.ixp.clone());
            prop_assert_eq!(s.covered as usize, covered.len());
        }
        let anchors: Vec<&str> = chosen.iter().take(3).map(String::as_str).collect();
        let direct = coverage(&t, &pfx, Some(&rel), &anchors, false).unwrap();
        let with_cone = coverage(&t, &pfx, Some(&rel), &anchors, true).unwrap();
        prop_assert!(with_cone.covered.contains_set(&direct.covered));
        prop_assert!(with_cone.fraction_of_ipv4 >= direct.fraction_of_ipv4);
    }
}
