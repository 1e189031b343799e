#![allow(dead_code)]

use evograph::attractor::{enumerate_attractors, EnumerationOptions};
use evograph::game::utility;
use evograph::radius::dependency_radius_at_most;
use evograph::rational::{frac, int};
use evograph::verify::grid_points;
use evograph::{Configuration, Game, Graph, PayoffParams, System, UpdateOrder, UpdateRule, UtilityKind, CAYLEY_D24_G6};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const RULES: [UpdateRule; 3] = [UpdateRule::Imitation, UpdateRule::DeathBirth, UpdateRule::BirthDeath];

pub fn params(s: &str) -> PayoffParams {
    s.parse().unwrap()
}

/// Admissible quadruples with arbitrary `a > d`, drawn from a fixed seed.
pub fn random_points(count: usize, seed: u64) -> Vec<PayoffParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let den = rng.gen_range(1..=9i128);
        let d = frac(rng.gen_range(-30..=30), den);
        let span = frac(rng.gen_range(1..=40), rng.gen_range(1..=7));
        let b = frac(rng.gen_range(-59..=59), 60);
        let c = frac(rng.gen_range(1..=119), 60);
        let norm = PayoffParams::new(int(1), b, c, int(0));
        let p = norm.denormalize(d + span, d).unwrap();
        if p.is_admissible() {
            out.push(p);
        }
    }
    out
}

/// The standard sweep: the 20 x 20 grid at `a = 1`, `d = 0` plus 100 random
/// non-normalised points.
pub fn sweep_points() -> Vec<PayoffParams> {
    let mut pts = grid_points(20, 20);
    pts.extend(random_points(100, 0x5eed));
    pts
}

pub fn system(g: &Graph, p: &PayoffParams, kind: UtilityKind, rule: UpdateRule, order: UpdateOrder) -> System {
    System::new(Game::new(g.clone(), *p, kind, rule).unwrap(), order).unwrap()
}

/// Graphs on at most four vertices without isolated vertices.
pub fn small_graphs() -> Vec<Graph> {
    vec![
        Graph::from_edges(2, &[(1, 2)]).unwrap(),
        Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap(),
        Graph::complete(3).unwrap(),
        Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4)]).unwrap(),
        Graph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap(),
        Graph::from_edges(4, &[(1, 2), (3, 4)]).unwrap(),
        Graph::cycle(4).unwrap(),
        Graph::from_edges(4, &[(1, 2), (2, 3), (3, 1), (3, 4)]).unwrap(),
        Graph::complete(4).unwrap(),
    ]
}

pub fn orders(n: usize) -> Vec<UpdateOrder> {
    let mut v = vec![UpdateOrder::Synchronous, UpdateOrder::Sequential];
    if n >= 3 {
        v.push(UpdateOrder::pair_then_rest(n).unwrap());
    }
    v.push(UpdateOrder::Blocks(vec![vec![n], (1..n).collect(), vec![1]]));
    v
}

/// Utility has radius 1 and the imitation map radius 2 on `K_4`, `C_6`, `W_6`.
pub fn check_dependency_radius() -> Result<(), String> {
    let p = params("1,0.88,1.74,0");
    for (name, g) in [
        ("K4", Graph::complete(4).unwrap()),
        ("C6", Graph::cycle(6).unwrap()),
        ("W6", Graph::wheel(6).unwrap()),
    ] {
        for kind in [UtilityKind::Aggregate, UtilityKind::Mean] {
            let u = |x: &Configuration| utility(&g, &p, kind, x).unwrap();
            if !dependency_radius_at_most(u, &g, 1).map_err(|e| e.to_string())? {
                return Err(format!("{kind} utility on {name} depends on vertices beyond distance 1"));
            }
            let game = Game::new(g.clone(), p, kind, UpdateRule::Imitation).unwrap();
            let phi = |x: &Configuration| {
                let y = game.step(x).unwrap();
                (1..=g.order()).map(|i| y.get(i)).collect::<Vec<_>>()
            };
            if !dependency_radius_at_most(phi, &g, 2).map_err(|e| e.to_string())? {
                return Err(format!("imitation on {name} depends on vertices beyond distance 2"));
            }
        }
    }
    let g = Graph::cycle(6).unwrap();
    let game = Game::new(g.clone(), p, UtilityKind::Aggregate, UpdateRule::Imitation).unwrap();
    let phi = |x: &Configuration| {
        let y = game.step(x).unwrap();
        (1..=6).map(|i| y.get(i)).collect::<Vec<_>>()
    };
    if dependency_radius_at_most(phi, &g, 1).unwrap() {
        return Err("imitation on C6 unexpectedly has radius 1".into());
    }
    Ok(())
}

/// `φ(t,t,x) = x` and `φ(t,r,φ(r,s,x)) = φ(t,s,x)` for every graph on at most
/// four vertices, several orders, all rules, all states and `s <= r <= t <= 2T+1`.
pub fn check_semiflow() -> Result<usize, String> {
    let p = params("1,0.3,1.2,0");
    let mut checks = 0;
    for g in small_graphs() {
        let n = g.order();
        for order in orders(n) {
            for rule in RULES {
                let sys = system(&g, &p, UtilityKind::Aggregate, rule, order.clone());
                let horizon = 2 * order.period(n) + 1;
                for bits in 0..1u64 << n {
                    let x = Configuration::from_bits(n, bits).unwrap();
                    for s in 0..=horizon {
                        if sys.evolve(s, &x, s).unwrap() != x {
                            return Err(format!("phi(t,t,x) != x on {g:?}"));
                        }
                        for r in s..=horizon {
                            let mid = sys.evolve(s, &x, r).unwrap();
                            for t in r..=horizon {
                                checks += 1;
                                if sys.evolve(r, &mid, t).unwrap() != sys.evolve(s, &x, t).unwrap() {
                                    return Err(format!(
                                        "cocycle fails on {g:?}, {order}, {rule}, x = {x}, s = {s}, r = {r}, t = {t}"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(checks)
}

/// All-C and all-D are fixed under every rule and order.
pub fn check_homogeneous_fixed_points() -> Result<(), String> {
    let graphs = [
        Graph::complete(5).unwrap(),
        Graph::cycle(6).unwrap(),
        Graph::wheel(7).unwrap(),
        Graph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap(),
    ];
    let points = random_points(25, 7);
    for g in &graphs {
        let n = g.order();
        for p in &points {
            for kind in [UtilityKind::Aggregate, UtilityKind::Mean] {
                for rule in RULES {
                    for order in orders(n) {
                        let sys = system(g, p, kind, rule, order);
                        for x in [Configuration::all_defect(n), Configuration::all_cooperate(n)] {
                            if !sys.is_fixed(x.bits()) {
                                return Err(format!("{x} moves under {rule} with ({p}) on {g:?}"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Automorphisms of a small graph, as 1-based images.
pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.order();
    (1..=n)
        .permutations(n)
        .filter(|perm| g.is_automorphism(perm))
        .collect()
}

/// `φ(πx) = π φ(x)` for all automorphisms of `C_6` and `K_4`, and attractor
/// enumeration commutes with relabelling.
pub fn check_equivariance() -> Result<usize, String> {
    let mut count = 0;
    for g in [Graph::cycle(6).unwrap(), Graph::complete(4).unwrap()] {
        let n = g.order();
        let autos = automorphisms(&g);
        for p in [params("1,0.88,1.74,0"), params("1,0.3,0.6,0"), params("1,-0.5,1.5,0")] {
            for rule in RULES {
                let game = Game::new(g.clone(), p, UtilityKind::Aggregate, rule).unwrap();
                for perm in &autos {
                    count += 1;
                    for bits in 0..1u64 << n {
                        let x = Configuration::from_bits(n, bits).unwrap();
                        let lhs = game.step(&x.permuted(perm)).unwrap();
                        let rhs = game.step(&x).unwrap().permuted(perm);
                        if lhs != rhs {
                            return Err(format!("step not equivariant on {g:?} under {perm:?} at {x}"));
                        }
                    }
                }
                let sys = System::autonomous(game);
                let e = enumerate_attractors(&sys, &EnumerationOptions::default()).map_err(|e| e.to_string())?;
                let key = |sets: Vec<Vec<u64>>| {
                    let mut s = sets;
                    s.sort();
                    s
                };
                let base = key(e.attractors.iter().map(|r| r.set.configurations()).collect());
                for perm in &autos {
                    let moved = key(
                        base.iter()
                            .map(|set| {
                                let mut v: Vec<u64> = set
                                    .iter()
                                    .map(|&b| Configuration::from_bits(n, b).unwrap().permuted(perm).bits())
                                    .collect();
                                v.sort_unstable();
                                v
                            })
                            .collect(),
                    );
                    if moved != base {
                        return Err(format!("attractor family not preserved by {perm:?} on {g:?}"));
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Aggregate and mean utility give the same dynamics on regular graphs.
pub fn check_regular_utility_equivalence() -> Result<(), String> {
    let cayley = evograph::graph6::decode_graph6(CAYLEY_D24_G6).unwrap();
    let petersen = Graph::from_edges(
        10,
        &[
            (1, 2), (2, 3), (3, 4), (4, 5), (5, 1),
            (1, 6), (2, 7), (3, 8), (4, 9), (5, 10),
            (6, 8), (8, 10), (10, 7), (7, 9), (9, 6),
        ],
    )
    .unwrap();
    let points = random_points(20, 11);
    for g in [Graph::cycle(6).unwrap(), Graph::complete(5).unwrap(), petersen] {
        let n = g.order();
        for p in &points {
            for rule in RULES {
                let a = Game::new(g.clone(), *p, UtilityKind::Aggregate, rule).unwrap();
                let m = Game::new(g.clone(), *p, UtilityKind::Mean, rule).unwrap();
                for bits in 0..1u64 << n {
                    if a.step_bits(bits) != m.step_bits(bits) {
                        return Err(format!("aggregate and mean differ on {g:?} at {bits:#x} with ({p})"));
                    }
                }
            }
        }
    }
    // trajectories on the 24-vertex graph from a few starting states
    for p in &points[..5] {
        let a = System::autonomous(Game::new(cayley.clone(), *p, UtilityKind::Aggregate, UpdateRule::Imitation).unwrap());
        let m = System::autonomous(Game::new(cayley.clone(), *p, UtilityKind::Mean, UpdateRule::Imitation).unwrap());
        for seed in 0..20u64 {
            let x = Configuration::from_bits(24, seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) & 0xff_ffff).unwrap();
            if a.trajectory(0, &x, 30).unwrap() != m.trajectory(0, &x, 30).unwrap() {
                return Err(format!("trajectories differ on the 24-vertex graph from {x}"));
            }
        }
    }
    Ok(())
}
