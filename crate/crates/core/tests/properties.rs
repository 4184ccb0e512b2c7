//! Randomized invariants over the core library: evaluator consistency,
//! closure metricity, relaxation bounds, and planner guarantees.

use proptest::prelude::*;

use patrol_core::gen::{gen_euclidean, sample_weights};
use patrol_core::graph::{relax_weight, weight_classes, MetricGraph, MonitorGraph};
use patrol_core::oracle::unrolled_cost_check;
use patrol_core::planner::{self, Algorithm, PlanConfig};
use patrol_core::tsp;
use patrol_core::walk::{is_binary_walk, walk_cost, walk_length};

fn random_instance(n: usize, b: usize, seed: u64) -> MetricGraph {
    let g = gen_euclidean(n, [100.0, 100.0], seed)
        .unwrap()
        .with_weights(sample_weights(n, b, seed ^ 0x9e37_79b9).unwrap())
        .unwrap();
    MetricGraph::close(g).unwrap()
}

fn random_sparse(n: usize, seed: u64) -> MetricGraph {
    // a ring plus seeded chords, guaranteed connected
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let verts: Vec<(String, f64)> =
        (0..n).map(|i| (format!("v{i}"), rng.gen_range(0.1..1.0))).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((format!("v{i}"), format!("v{}", (i + 1) % n), rng.gen_range(0.5..5.0)));
    }
    for _ in 0..n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.push((format!("v{a}"), format!("v{b}"), rng.gen_range(0.5..5.0)));
        }
    }
    let g = MonitorGraph::build(&verts, &edges).unwrap();
    MetricGraph::close(g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn relax_weight_brackets_input(phi in 1e-12f64..=1.0) {
        let r = relax_weight(phi).unwrap();
        prop_assert!(r <= phi && phi < 2.0 * r);
    }

    #[test]
    fn closure_satisfies_triangle_inequality(n in 3usize..10, seed in 0u64..500) {
        let mg = random_sparse(n, seed);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    prop_assert!(mg.dist(a, c) <= mg.dist(a, b) + mg.dist(b, c) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn cost_is_rotation_invariant(n in 2usize..6, seed in 0u64..500, rot in 0usize..8) {
        let mg = random_instance(n, 4, seed);
        let mut kernel: Vec<usize> = (0..n).chain(0..n / 2).collect();
        let base = walk_cost(&mg, &kernel, false).unwrap().max_cost;
        let shift = rot % kernel.len();
        kernel.rotate_left(shift);
        let rotated = walk_cost(&mg, &kernel, false).unwrap().max_cost;
        prop_assert!((base - rotated).abs() <= 1e-9 * (1.0 + base));
    }

    #[test]
    fn unrolled_evaluator_agrees(n in 2usize..6, seed in 0u64..500) {
        let mg = random_instance(n, 4, seed);
        let kernel: Vec<usize> = (0..n).chain((0..n).rev()).collect();
        let a = walk_cost(&mg, &kernel, false).unwrap().max_cost;
        let b = unrolled_cost_check(&mg, &kernel, 3).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn lift_preserves_length_and_order(n in 3usize..10, seed in 0u64..500) {
        let mg = random_sparse(n, seed);
        let kernel: Vec<usize> = (0..n).collect();
        let lifted = mg.lift_walk(&kernel);
        let a = walk_length(&mg, &kernel).unwrap();
        let b = walk_length(&mg, &lifted).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
        // monitored vertices appear in the same order
        let filtered: Vec<usize> = {
            let mut expect = kernel.iter();
            let mut next = expect.next();
            let mut out = Vec::new();
            for &v in &lifted {
                if Some(&v) == next {
                    out.push(v);
                    next = expect.next();
                }
            }
            out
        };
        prop_assert_eq!(filtered, kernel);
    }

    #[test]
    fn tsp_chain_of_bounds(n in 2usize..7, seed in 0u64..500) {
        let mg = random_instance(n, 1, seed);
        let verts: Vec<usize> = (0..n).collect();
        let mst = tsp::mst_length(&mg, &verts);
        let exact = tsp::exact_tsp_small(&mg, &verts, None).unwrap();
        let exact_len = walk_length(&mg, &exact).unwrap();
        let heur = tsp::tsp_path(&mg, &verts, seed).unwrap();
        let heur_len = walk_length(&mg, &heur).unwrap();
        prop_assert!(mst <= exact_len + 1e-9);
        prop_assert!(exact_len <= heur_len + 1e-9);
    }

    #[test]
    fn partition_respects_budget(n in 2usize..12, k in 1usize..6, seed in 0u64..500) {
        let mg = random_instance(n, 1, seed);
        let w: Vec<usize> = (0..n).collect();
        let total = walk_length(&mg, &w).unwrap();
        let pieces = planner::partition(&mg, &w, k);
        prop_assert_eq!(pieces.len(), k);
        let mut flat: Vec<usize> = pieces.iter().flatten().copied().collect();
        if k <= n {
            for p in &pieces {
                let len: f64 = if p.len() < 2 { 0.0 } else { walk_length(&mg, p).unwrap() };
                prop_assert!(len <= total / k as f64 + 1e-9);
            }
        }
        flat.sort_unstable();
        prop_assert_eq!(flat, w);
    }

    #[test]
    fn planners_emit_valid_binary_walks(n in 2usize..24, b in 1usize..9, seed in 0u64..200) {
        let mg = random_instance(n, b, seed);
        for algorithm in [Algorithm::Brute, Algorithm::Smart] {
            let cfg = PlanConfig { algorithm, rng_seed: seed, ..PlanConfig::default() };
            let plan = planner::plan(&mg, &cfg).unwrap();
            prop_assert!(plan.covers_all(n));
            prop_assert!(is_binary_walk(&plan.classes, &plan.blocks).unwrap());
            let cost = walk_cost(&mg, &plan.kernel(), false).unwrap().max_cost;
            let lb = planner::lower_bound_opt(&mg);
            if lb > 0.0 {
                let factor = match algorithm {
                    Algorithm::Brute => planner::brute_factor(&weight_classes(mg.base())),
                    _ => planner::smart_factor(n),
                };
                prop_assert!(cost / lb <= factor + 1e-9, "cost {cost} lb {lb} factor {factor}");
            }
        }
    }

    #[test]
    fn scaling_raw_weights_scales_costs(n in 2usize..6, seed in 0u64..200, c in 0.1f64..50.0) {
        let mg = random_instance(n, 3, seed);
        let scaled = MetricGraph::close(
            mg.base()
                .clone()
                .with_weights((0..n).map(|v| mg.base().raw_weight(v) * c).collect())
                .unwrap(),
        )
        .unwrap();
        let kernel: Vec<usize> = (0..n).collect();
        let a = walk_cost(&mg, &kernel, true).unwrap();
        let b = walk_cost(&scaled, &kernel, true).unwrap();
        prop_assert_eq!(a.argmax_vertex, b.argmax_vertex);
        prop_assert!((b.max_cost - c * a.max_cost).abs() <= 1e-9 * (1.0 + b.max_cost));
    }
}
