mod common;

use evograph::attractor::{basin, enumerate_attractors, is_attractor, EnumerationOptions, Landscape};
use evograph::graph6::{decode_graph6, encode_graph6};
use evograph::rational::frac;
use evograph::statespace::{OrbitStructure, StateSpaceMap, DEFAULT_MAX_N};
use evograph::{Configuration, Execution, Game, Graph, PayoffParams, PhaseMap, System, UpdateOrder, UpdateRule, UtilityKind};
use proptest::prelude::*;

use common::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (Just(n), proptest::collection::vec(any::<bool>(), pairs))
        })
        .prop_filter_map("isolated vertex", |(n, mask)| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 1..=n {
                for j in i + 1..=n {
                    if mask[k] {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            let g = Graph::from_edges(n, &edges).ok()?;
            (!g.has_isolated_vertex()).then_some(g)
        })
}

fn arb_params() -> impl Strategy<Value = PayoffParams> {
    (-59i128..=59, 1i128..=119).prop_filter_map("not admissible", |(b, c)| {
        let p = PayoffParams::new(frac(1, 1), frac(b, 60), frac(c, 60), frac(0, 1));
        p.is_admissible().then_some(p)
    })
}

fn arb_rule() -> impl Strategy<Value = UpdateRule> {
    prop::sample::select(RULES.to_vec())
}

fn arb_order(n: usize) -> impl Strategy<Value = UpdateOrder> {
    prop::sample::select(orders(n))
}

fn arb_system(max_n: usize) -> impl Strategy<Value = System> {
    (arb_graph(max_n), arb_params(), arb_rule(), any::<bool>())
        .prop_flat_map(|(g, p, rule, mean)| {
            let n = g.order();
            (Just(g), Just(p), Just(rule), Just(mean), arb_order(n))
        })
        .prop_map(|(g, p, rule, mean, order)| {
            let kind = if mean { UtilityKind::Mean } else { UtilityKind::Aggregate };
            system(&g, &p, kind, rule, order)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cocycle_identity_on_random_graphs(sys in arb_system(6), bits in any::<u64>(), s in 0usize..6, dr in 0usize..6, dt in 0usize..6) {
        let n = sys.game().order();
        let x = Configuration::from_bits(n, bits & ((1 << n) - 1)).unwrap();
        let (r, t) = (s + dr, s + dr + dt);
        let mid = sys.evolve(s, &x, r).unwrap();
        prop_assert_eq!(sys.evolve(r, &mid, t).unwrap(), sys.evolve(s, &x, t).unwrap());
    }

    #[test]
    fn state_table_matches_direct_steps(sys in arb_system(6)) {
        let map = StateSpaceMap::build(&sys, DEFAULT_MAX_N).unwrap();
        for phase in 0..map.period() {
            for x in 0..1u64 << map.order() {
                prop_assert_eq!(map.next(phase, x), sys.next(phase, x));
            }
        }
    }

    #[test]
    fn parallel_and_sequential_builds_agree(sys in arb_system(6)) {
        let a = StateSpaceMap::build_with(&sys, DEFAULT_MAX_N, Execution::Sequential).unwrap();
        let b = StateSpaceMap::build_with(&sys, DEFAULT_MAX_N, Execution::Parallel).unwrap();
        for phase in 0..a.period() {
            prop_assert_eq!(a.table(phase), b.table(phase));
        }
        let opts = |execution| EnumerationOptions { execution, ..EnumerationOptions::default() };
        let ea = enumerate_attractors(&a, &opts(Execution::Sequential)).unwrap();
        let eb = enumerate_attractors(&b, &opts(Execution::Parallel)).unwrap();
        let sets = |e: &evograph::attractor::Enumeration| {
            e.attractors.iter().map(|r| r.set.sections().to_vec()).collect::<Vec<_>>()
        };
        prop_assert_eq!(sets(&ea), sets(&eb));
    }

    #[test]
    fn basins_partition_the_lifted_space(sys in arb_system(5)) {
        let map = StateSpaceMap::build(&sys, DEFAULT_MAX_N).unwrap();
        let orbits = OrbitStructure::analyze(&map).unwrap();
        let sizes = orbits.basin_sizes();
        prop_assert_eq!(sizes.iter().sum::<usize>(), map.lifted_len());
        for (i, c) in orbits.cycles().iter().enumerate() {
            prop_assert!(!c.is_empty());
            prop_assert!(sizes[i] >= c.len());
        }
    }

    #[test]
    fn minimal_attractors_are_attractors(sys in arb_system(5)) {
        let map = StateSpaceMap::build(&sys, DEFAULT_MAX_N).unwrap();
        let land = Landscape::analyze(&map).unwrap();
        prop_assert!(!land.minimal_attractors().is_empty());
        for ids in land.minimal_attractors() {
            prop_assert!(land.is_closed(ids));
            let set = land.set_of(ids);
            let report = is_attractor(&map, &set).unwrap();
            prop_assert!(report.invariant);
            prop_assert!(report.is_attractor);
            prop_assert_eq!(basin(&map, &set).unwrap().size(), land.basin_size(ids));
        }
    }

    #[test]
    fn affine_rescaling_preserves_dynamics_on_regular_graphs(
        p in arb_params(),
        scale in 1i128..=12,
        shift in -20i128..=20,
        n in 3usize..=7,
        cycle in any::<bool>(),
        rule in arb_rule(),
    ) {
        let g = if cycle { Graph::cycle(n).unwrap() } else { Graph::complete(n).unwrap() };
        let q = p.denormalize(frac(shift + scale, 1), frac(shift, 1)).unwrap();
        let a = Game::new(g.clone(), p, UtilityKind::Aggregate, rule).unwrap();
        let b = Game::new(g, q, UtilityKind::Aggregate, rule).unwrap();
        for x in 0..1u64 << n {
            prop_assert_eq!(a.step_bits(x), b.step_bits(x));
        }
    }

    #[test]
    fn graph6_round_trip(g in arb_graph(12)) {
        let text = encode_graph6(&g);
        prop_assert_eq!(decode_graph6(&text).unwrap(), g);
    }
}

#[test]
fn dependency_radius() {
    check_dependency_radius().unwrap();
}

#[test]
fn semiflow_exhaustive_small_graphs() {
    assert!(check_semiflow().unwrap() > 100_000);
}

#[test]
fn homogeneous_states_are_fixed() {
    check_homogeneous_fixed_points().unwrap();
}

#[test]
fn automorphism_equivariance() {
    check_equivariance().unwrap();
}

#[test]
fn regular_graphs_ignore_utility_kind() {
    check_regular_utility_equivalence().unwrap();
}

#[test]
fn cycle_has_twelve_automorphisms() {
    assert_eq!(automorphisms(&Graph::cycle(6).unwrap()).len(), 12);
    assert_eq!(automorphisms(&Graph::complete(4).unwrap()).len(), 24);
}

#[test]
fn random_points_are_admissible_and_unnormalised() {
    let pts = random_points(50, 3);
    assert!(pts.iter().all(PayoffParams::is_admissible));
    assert!(pts.iter().any(|p| !p.is_normalized()));
}
