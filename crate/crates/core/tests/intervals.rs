mod common;

use chronocite::sprinkle::{sprinkle, sprinkle_points, Geometry, SprinkleSpec};
use chronocite::synth::random_dag;
use chronocite::{count_relations, find_midpoint, interval, EndpointConvention, NodeIndex};
use common::{brute_interval, brute_midpoint, brute_relations, load_fixture, reach_matrix};
use proptest::prelude::*;

const EXCL: EndpointConvention = EndpointConvention::Exclusive;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn interval_matches_brute_force(n in 3usize..70, p in 0.02f64..0.5, seed in any::<u64>()) {
        let g = random_dag(n, p, seed);
        let reach = reach_matrix(&g);
        for (s, t) in [(n - 1, 0), (n - 1, n / 2), (n / 2 + 1, 1), (n / 3 + 1, 0)] {
            if s == t { continue; }
            let summary = interval(&g, NodeIndex(s as u32), NodeIndex(t as u32), EXCL).unwrap();
            let want = brute_interval(&reach, s, t);
            let got: Vec<usize> = summary.members.iter().map(|v| v.index()).collect();
            prop_assert_eq!(&got, &want);
            prop_assert_eq!(summary.size, want.len());
            prop_assert_eq!(summary.related, reach[s][t]);
            let pairs = brute_relations(&reach, &want);
            prop_assert_eq!(summary.relations, pairs);
            let n_members = want.len() as u64;
            prop_assert!(summary.relations <= n_members * n_members.saturating_sub(1) / 2);

            if !want.is_empty() {
                let split = find_midpoint(&g, NodeIndex(s as u32), NodeIndex(t as u32), EXCL).unwrap();
                let (m, n1, n2) = brute_midpoint(&reach, &want);
                prop_assert_eq!((split.midpoint.index(), split.n1, split.n2), (m, n1, n2));
                // Nesting: both sub-intervals sit inside the parent.
                let left = brute_interval(&reach, s, m);
                let right = brute_interval(&reach, m, t);
                prop_assert!(left.iter().chain(&right).all(|v| want.contains(v)));
                prop_assert_eq!((left.len(), right.len()), (n1, n2));
            }
        }
    }

    #[test]
    fn relations_of_arbitrary_sets(n in 2usize..60, p in 0.02f64..0.4, seed in any::<u64>(), pick in proptest::collection::vec(any::<prop::sample::Index>(), 0..20)) {
        let g = random_dag(n, p, seed);
        let reach = reach_matrix(&g);
        let mut members: Vec<usize> = pick.iter().map(|i| i.index(n)).collect();
        members.sort_unstable();
        members.dedup();
        let idx: Vec<NodeIndex> = members.iter().map(|&v| NodeIndex(v as u32)).collect();
        prop_assert_eq!(count_relations(&g, &idx), brute_relations(&reach, &members));
    }
}

#[test]
fn total_order_hits_upper_bound() {
    let g = sprinkle(&SprinkleSpec {
        geometry: Geometry::UnitCube,
        dimension: 1,
        n: 40,
        seed: 2,
    })
    .unwrap();
    let s = interval(&g, NodeIndex(39), NodeIndex(0), EXCL).unwrap();
    assert_eq!(s.size, 38);
    assert_eq!(s.relations, 38 * 37 / 2);
}

#[test]
fn diamond_fixture() {
    let g = load_fixture("diamond");
    assert_eq!(g.node_count(), 21);
    let (s, t) = (g.index_of("s").unwrap(), g.index_of("t").unwrap());
    let summary = interval(&g, s, t, EXCL).unwrap();
    assert_eq!(summary.size, 19);
    let reach = reach_matrix(&g);
    let members: Vec<usize> = summary.members.iter().map(|v| v.index()).collect();
    // a->m (4), a->b (24), m->b (6) and the 8-chain (28).
    assert_eq!(summary.relations, 62);
    assert_eq!(brute_relations(&reach, &members), 62);
    let split = find_midpoint(&g, s, t, EXCL).unwrap();
    assert_eq!(g.id(split.midpoint), "m");
    assert_eq!((split.n1, split.n2), (4, 6));

    let incl = interval(&g, s, t, EndpointConvention::Inclusive).unwrap();
    assert_eq!((incl.size, incl.relations), (21, 62 + 2 * 19 + 1));
    let split = find_midpoint(&g, s, t, EndpointConvention::Inclusive).unwrap();
    assert_eq!((split.n1, split.n2), (6, 8));
}

#[test]
fn sprinkled_2d_relation_density() {
    // Whole diamond, N = 2000: expected P / N^2 = (N - 1) / 4N.
    let spec = SprinkleSpec {
        geometry: Geometry::MinkowskiDiamond,
        dimension: 2,
        n: 2000,
        seed: 17,
    };
    let g = sprinkle(&spec).unwrap();
    let all: Vec<NodeIndex> = g.nodes().collect();
    let p = count_relations(&g, &all);

    // Brute force straight from the coordinates.
    let pts = sprinkle_points(&spec).unwrap();
    let mut brute = 0u64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (a, b) = (pts.point(i), pts.point(j));
            if (a[0] - b[0]).abs() > (a[1] - b[1]).abs() {
                brute += 1;
            }
        }
    }
    assert_eq!(p, brute);
    assert_eq!(p as usize, g.edge_count());
    let ratio = p as f64 / (2000.0 * 2000.0);
    assert!((0.23..=0.27).contains(&ratio), "P/N^2 = {ratio}");
}

#[test]
fn midpoint_optimal_on_sprinkled_intervals() {
    let spec = SprinkleSpec {
        geometry: Geometry::MinkowskiDiamond,
        dimension: 2,
        n: 500,
        seed: 5,
    };
    let g = sprinkle(&spec).unwrap();
    let reach = reach_matrix(&g);
    let mut checked = 0;
    for (s, t) in [(499, 0), (480, 30), (450, 100), (400, 10)] {
        let members = brute_interval(&reach, s, t);
        if members.is_empty() {
            continue;
        }
        assert!(members.len() <= 500);
        let split = find_midpoint(&g, NodeIndex(s as u32), NodeIndex(t as u32), EXCL).unwrap();
        let (m, n1, n2) = brute_midpoint(&reach, &members);
        assert_eq!((split.midpoint.index(), split.n1, split.n2), (m, n1, n2));
        checked += 1;
    }
    assert!(checked >= 2);
}

#[test]
fn unknown_and_same_endpoints() {
    let g = random_dag(5, 0.5, 1);
    assert!(interval(&g, NodeIndex(9), NodeIndex(0), EXCL).is_err());
    assert!(interval(&g, NodeIndex(2), NodeIndex(2), EXCL).is_err());
}
