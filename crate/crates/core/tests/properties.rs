//! Property tests over the library surface: format round-trips, grading
//! monotonicity, enumeration equivalence against an independent oracle, and
//! operator invariants on randomly generated networks.

use garoute_core::oracle::dfs_all_simple_paths;
use garoute_core::*;
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vacuous_thresholds() -> QosThresholds<f64> {
    QosThresholds::new(f64::INFINITY, f64::INFINITY, 1.0)
}

/// Deterministic test fixture: a connected random graph plus a demand whose
/// endpoints are spread by the seed.
fn fixture(n: usize, density: f64, seed: u64) -> (Topology<f64>, Demand<f64>) {
    let topo = generate_random_topology(n, density, seed, &QosRanges::default()).unwrap();
    let source = NodeId(seed as usize % n);
    let mut destination = NodeId((seed as usize / 3 + n / 2) % n);
    if destination == source {
        destination = NodeId((destination.0 + 1) % n);
    }
    let demand = Demand::new(source, destination, 60.0, 12_000.0);
    (topo, demand)
}

proptest! {
    #[test]
    fn available_bandwidth_is_affine_in_required_bandwidth(
        utility in 0.0..1000.0f64,
        required in 0.1..500.0f64,
        delta in 0.0..500.0f64,
    ) {
        let link = Link::new(NodeId(0), NodeId(1), utility);
        let base = Demand::new(NodeId(0), NodeId(1), required, 1.0);
        let shifted = Demand::new(NodeId(0), NodeId(1), required + delta, 1.0);
        let lhs = available_bandwidth(&link, &shifted);
        let rhs = available_bandwidth(&link, &base) - delta;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs().max(rhs.abs())));
    }

    #[test]
    fn topology_file_roundtrip(n in 2usize..20, density in 0.05f64..1.0, seed in 0u64..500) {
        let topo: Topology<f64> = generate_random_topology(n, density, seed, &QosRanges::default()).unwrap();
        let text = topo.to_file_string();
        let reparsed = Topology::parse(&text).unwrap();
        prop_assert_eq!(&topo, &reparsed);
        prop_assert_eq!(text, reparsed.to_file_string());
    }

    #[test]
    fn grading_is_monotone_in_thresholds(
        seed in 0u64..200,
        delay in 0.001f64..0.02,
        jitter in 0.5f64..12.0,
        loss in 0.001f64..0.06,
        bump in 0.0f64..0.5,
    ) {
        let (topo, demand) = fixture(10, 0.4, seed);
        let tight = QosThresholds::new(delay, jitter, loss);
        let loose = QosThresholds::new(
            delay * (1.0 + bump),
            jitter * (1.0 + bump),
            loss * (1.0 + bump),
        );
        let a = grade_nodes(&topo, &tight, &demand);
        let b = grade_nodes(&topo, &loose, &demand);
        for v in a.admitted_nodes() {
            prop_assert!(b.is_admitted(v), "raising thresholds removed node {v}");
        }
    }

    #[test]
    fn enumeration_matches_dfs_oracle(
        n in 4usize..=12,
        seed in 0u64..150,
        cap in 2usize..=11,
    ) {
        let (topo, demand) = fixture(n, 0.4, seed);
        let graded = grade_nodes(&topo, &vacuous_thresholds(), &demand);
        let max_hops = cap.min(n - 1);
        let oracle_set = {
            let mut v = dfs_all_simple_paths(&graded, demand.source, demand.destination, max_hops);
            v.sort();
            v
        };
        match enumerate_paths(&graded, &demand, max_hops) {
            Ok(pool) => {
                let mut bfs_set: Vec<Chromosome> = pool.iter().cloned().collect();
                bfs_set.sort();
                prop_assert_eq!(bfs_set, oracle_set);
            }
            Err(RouteError::NoRoute(_)) => prop_assert!(oracle_set.is_empty()),
            Err(e) => prop_assert!(false, "unexpected error {e:?}"),
        }
    }

    #[test]
    fn pool_paths_satisfy_chromosome_invariants(seed in 0u64..100) {
        let (topo, demand) = fixture(9, 0.45, seed);
        let graded = grade_nodes(&topo, &vacuous_thresholds(), &demand);
        if let Ok(pool) = enumerate_paths(&graded, &demand, 8) {
            let mut last_hops = 0;
            for (hops, group) in pool.groups() {
                prop_assert!(*hops > last_hops || last_hops == 0);
                last_hops = *hops;
                for w in group.windows(2) {
                    prop_assert!(w[0] < w[1], "group must be strictly lexicographic");
                }
                for p in group {
                    prop_assert_eq!(p.hops(), *hops);
                    prop_assert!(validate(p, &graded));
                }
            }
        }
    }

    #[test]
    fn pmx_children_are_simple_and_endpoint_fixed(seed in 0u64..300, rng_seed in 0u64..50) {
        let (topo, demand) = fixture(10, 0.5, seed);
        let graded = grade_nodes(&topo, &vacuous_thresholds(), &demand);
        let Ok(pool) = enumerate_paths(&graded, &demand, 9) else { return Ok(()); };
        // Pick the first length group with at least two members.
        let Some((_, group)) = pool.groups().iter().find(|(_, g)| g.len() >= 2) else {
            return Ok(());
        };
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let (p1, p2) = (&group[0], &group[group.len() - 1]);
        let (c1, c2) = multipoint_crossover(p1, p2, &mut rng);
        for child in [&c1, &c2] {
            prop_assert_eq!(child.node_count(), p1.node_count());
            prop_assert_eq!(child.source(), p1.source());
            prop_assert_eq!(child.destination(), p1.destination());
            let mut seen = std::collections::BTreeSet::new();
            for n in child.nodes() {
                prop_assert!(seen.insert(*n), "duplicate gene {n} in {child}");
            }
        }
    }
}

#[test]
fn evolve_invariants_over_many_runs() {
    let mut runs = 0;
    for seed in 1..=40u64 {
        let (topo, demand) = fixture(10, 0.4, seed);
        let thresholds = QosThresholds::default();
        let graded = grade_nodes(&topo, &thresholds, &demand);
        let Ok(pool) = enumerate_paths(&graded, &demand, 9) else {
            continue;
        };
        let config = GaConfig {
            rng_seed: seed,
            ..GaConfig::default()
        };
        let Ok(route) = evolve(&pool, &topo, &graded, &demand, &config, |_| {}) else {
            continue;
        };
        runs += 1;

        let mut prev_elite_ab = 0.0f64;
        for (i, report) in route.trace.iter().enumerate() {
            // Validity closure and endpoint preservation.
            for r in &report.records {
                assert!(validate(&r.chromosome, &graded), "invalid {}", r.chromosome);
                assert_eq!(r.chromosome.source(), demand.source);
                assert_eq!(r.chromosome.destination(), demand.destination);
                assert_eq!(r.nodes_visited, r.chromosome.node_count());
            }
            // Exactly one elite, in slot 0, reported probability 1, and at
            // least as short as every member.
            assert_eq!(report.records.iter().filter(|r| r.elite).count(), 1);
            let elite = &report.records[0];
            assert!(elite.elite);
            assert_eq!(elite.selection_probability, 1.0);
            assert!(report
                .records
                .iter()
                .all(|r| elite.chromosome.hops() <= r.chromosome.hops()));

            // Elite bandwidth never decreases across generations.
            if i > 0 {
                assert!(elite.available_bandwidth >= prev_elite_ab);
            }
            prev_elite_ab = elite.available_bandwidth;

            // Fitness shares sum to 1 whenever any member carries bandwidth.
            let total_ab: f64 = report.records.iter().map(|r| r.available_bandwidth).sum();
            if total_ab > 0.0 {
                let sum_f: f64 = report.records.iter().map(|r| r.fitness).sum();
                assert!((sum_f - 1.0).abs() < 1e-9, "fitness sum {sum_f}");
            }
            // Non-elite probabilities sum to 1 whenever any is positive.
            let non_elite_f: f64 = report.records.iter().skip(1).map(|r| r.fitness).sum();
            if non_elite_f > 0.0 {
                let sum_p: f64 = report
                    .records
                    .iter()
                    .skip(1)
                    .map(|r| r.selection_probability)
                    .sum();
                assert!((sum_p - 1.0).abs() < 1e-9, "probability sum {sum_p}");
            }
        }
        // The returned route is feasible on every link.
        assert!(route.bottleneck > 0.0);
        for pair in route.path.nodes().windows(2) {
            let utility = topo.utility_between(pair[0], pair[1]).unwrap();
            assert!(utility - demand.required_bandwidth > 0.0);
        }
    }
    assert!(runs >= 30, "expected most seeds to produce runs, got {runs}");
}

#[test]
fn oracle_candidates_match_enumerated_feasible_subset() {
    for seed in 1..=20u64 {
        let (topo, demand) = fixture(9, 0.45, seed);
        let graded = grade_nodes(&topo, &vacuous_thresholds(), &demand);
        let Ok(pool) = enumerate_paths(&graded, &demand, 8) else {
            continue;
        };
        let feasible: Vec<&Chromosome> = pool
            .iter()
            .filter(|c| path_available_bandwidth(c, &topo, &demand) > 0.0)
            .collect();
        match brute_force_optimal(&graded, &topo, &demand, 8) {
            Ok(route) => {
                assert!(feasible.contains(&&route.path));
                let best_hops = feasible.iter().map(|c| c.hops()).min().unwrap();
                assert_eq!(route.hop_count, best_hops, "oracle must be hop-minimal");
            }
            Err(_) => assert!(feasible.is_empty()),
        }
    }
}
