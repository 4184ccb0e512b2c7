//! Deterministic instance generators: adversarial families (star, nested,
//! heavy/light), random Euclidean point sets, and the dyadic-bucket
//! weight sampler.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::graph::{MonitorGraph, Vertex};

/// Star instance: a weight-1 center, `n - 1` leaves of weight 1/n,
/// center-leaf edges of length 1 and consecutive-leaf edges of length 2.
/// Any tour costs 2n - 2, yet a cost-2 walk exists.
pub fn gen_star(n: usize) -> Result<MonitorGraph> {
    if n < 3 {
        return Err(Error::BadParam(format!("star needs n >= 3, got {n}")));
    }
    let mut vertices = vec![("v0".to_string(), 1.0)];
    let mut edges = Vec::new();
    for i in 1..n {
        vertices.push((format!("v{i}"), 1.0 / n as f64));
        edges.push(("v0".to_string(), format!("v{i}"), 1.0));
        if i + 1 < n {
            edges.push((format!("v{i}"), format!("v{}", i + 1), 2.0));
        }
    }
    MonitorGraph::build(&vertices, &edges)
}

/// Nested instance: k levels of s vertices each, level i carrying raw
/// weight (s+1)^-i, with unit edges from every level-1 vertex to all
/// others. Returns the graph and the level sets (as vertex indices).
/// Interleaving the levels with [`walk_maker`](crate::planner::walk_maker)
/// keeps every raw-weighted cost at or below 1.
pub fn gen_nested(k: usize, s: usize) -> Result<(MonitorGraph, Vec<Vec<Vertex>>)> {
    if k < 2 || s < 2 {
        return Err(Error::BadParam(format!("nested needs k,s >= 2, got k={k} s={s}")));
    }
    let mut vertices = Vec::new();
    let mut sets = Vec::new();
    for level in 1..=k {
        let w = 1.0 / ((s + 1) as f64).powi(level as i32);
        let mut set = Vec::new();
        for j in 0..s {
            set.push(vertices.len());
            vertices.push((format!("l{level}_{j}"), w));
        }
        sets.push(set);
    }
    let mut edges = Vec::new();
    for &hub in &sets[0] {
        for v in 0..vertices.len() {
            if v != hub && !(sets[0].contains(&v) && v < hub) {
                edges.push((vertices[hub].0.clone(), vertices[v].0.clone(), 1.0));
            }
        }
    }
    let g = MonitorGraph::build(
        &vertices.iter().map(|(l, w)| (l.as_str(), *w)).collect::<Vec<_>>(),
        &edges
            .iter()
            .map(|(a, b, l)| (a.as_str(), b.as_str(), *l))
            .collect::<Vec<_>>(),
    )?;
    Ok((g, sets))
}

/// Heavy/light instance: n/2 vertices of weight 1 pairwise at distance
/// eps, n/2 vertices of weight eps at distance 1 from every heavy vertex
/// (light-light distance 2 via the closure).
pub fn gen_heavy_light(n: usize, eps: f64) -> Result<MonitorGraph> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::BadParam(format!("heavy/light needs even n >= 4, got {n}")));
    }
    if !(eps > 0.0 && eps <= 0.1) {
        return Err(Error::BadParam(format!("heavy/light needs eps in (0, 0.1], got {eps}")));
    }
    let half = n / 2;
    let mut vertices = Vec::new();
    for i in 0..half {
        vertices.push((format!("h{i}"), 1.0));
    }
    for i in 0..half {
        vertices.push((format!("g{i}"), eps));
    }
    let mut edges = Vec::new();
    for i in 0..half {
        for j in i + 1..half {
            edges.push((format!("h{i}"), format!("h{j}"), eps));
        }
        for j in 0..half {
            edges.push((format!("h{i}"), format!("g{j}"), 1.0));
        }
    }
    MonitorGraph::build(&vertices, &edges)
}

/// Uniform random points in `[0, box_size[0]] x [0, box_size[1]]` as a
/// complete Euclidean graph with unit weights.
pub fn gen_euclidean(n: usize, box_size: [f64; 2], seed: u64) -> Result<MonitorGraph> {
    if n < 1 {
        return Err(Error::BadParam("euclidean needs n >= 1".into()));
    }
    if !(box_size[0] > 0.0 && box_size[1] > 0.0) {
        return Err(Error::BadParam("bounding box sides must be positive".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| [rng.gen::<f64>() * box_size[0], rng.gen::<f64>() * box_size[1]])
        .collect();
    MonitorGraph::from_points(points)
}

/// Draws `n` weights in [(1/2)^B, 1] with density proportional to 1/phi:
/// a dyadic bucket k is chosen uniformly in {0..B-1}, then the weight is
/// log-uniform within ((1/2)^(k+1), (1/2)^k]. Deterministic per seed.
pub fn sample_weights(n: usize, b: usize, seed: u64) -> Result<Vec<f64>> {
    if b < 1 {
        return Err(Error::BadParam("weight sampler needs B >= 1".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let k = rng.gen_range(0..b) as i32;
        let u = 1.0 - rng.gen::<f64>(); // uniform in (0, 1]
        out.push(0.5f64.powi(k + 1) * 2.0f64.powf(u));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{relax_exponent, weight_classes, MetricGraph};

    #[test]
    fn star_shape() {
        let g = gen_star(3).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.weight(0), 1.0);
        assert!((g.weight(1) - 1.0 / 3.0).abs() < 1e-12);
        assert!(gen_star(2).is_err());
    }

    #[test]
    fn star_triangle_inequality() {
        let mg = MetricGraph::close(gen_star(7).unwrap()).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                for c in 0..7 {
                    assert!(mg.dist(a, c) <= mg.dist(a, b) + mg.dist(b, c) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn nested_levels_and_distances() {
        let (g, sets) = gen_nested(3, 2).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(sets, vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        assert_eq!(g.raw_weight(0), 1.0 / 3.0);
        assert_eq!(g.raw_weight(2), 1.0 / 9.0);
        assert_eq!(g.raw_weight(4), 1.0 / 27.0);
        // normalization puts level 1 back at weight 1
        assert_eq!(g.weight(0), 1.0);
        let mg = MetricGraph::close(g).unwrap();
        for u in 0..6 {
            for v in 0..6 {
                if u != v {
                    let d = mg.dist(u, v);
                    assert!(d == 1.0 || d == 2.0, "distance {d} out of {{1,2}}");
                }
            }
        }
        assert!(gen_nested(1, 2).is_err());
        assert!(gen_nested(2, 1).is_err());
    }

    #[test]
    fn heavy_light_structure() {
        let g = gen_heavy_light(6, 0.01).unwrap();
        assert_eq!(g.len(), 6);
        assert!((crate::graph::weight_ratio(&g) - 100.0).abs() < 1e-9);
        let mg = MetricGraph::close(g).unwrap();
        assert_eq!(mg.dist(0, 1), 0.01);
        assert_eq!(mg.dist(0, 3), 1.0);
        assert_eq!(mg.dist(3, 4), 2.0);
        assert!(gen_heavy_light(5, 0.01).is_err());
        assert!(gen_heavy_light(6, 0.5).is_err());
    }

    #[test]
    fn euclidean_two_points() {
        let g = gen_euclidean(2, [10.0, 10.0], 1).unwrap();
        let mg = MetricGraph::close(g).unwrap();
        assert!(mg.dist(0, 1) > 0.0 && mg.dist(0, 1) <= (200.0f64).sqrt());
        assert!(gen_euclidean(0, [1.0, 1.0], 0).is_err());
    }

    #[test]
    fn euclidean_deterministic_per_seed() {
        let a = gen_euclidean(5, [1.0, 1.0], 42).unwrap();
        let b = gen_euclidean(5, [1.0, 1.0], 42).unwrap();
        let ma = MetricGraph::close(a).unwrap();
        let mb = MetricGraph::close(b).unwrap();
        for u in 0..5 {
            for v in 0..5 {
                assert_eq!(ma.dist(u, v), mb.dist(u, v));
            }
        }
    }

    #[test]
    fn weights_stay_in_range() {
        let w = sample_weights(1000, 4, 9).unwrap();
        for &x in &w {
            assert!(x > 0.5f64.powi(4) - 1e-15 && x <= 1.0);
            assert!(relax_exponent(x).unwrap() <= 4);
        }
        assert_eq!(w, sample_weights(1000, 4, 9).unwrap());
        assert!(sample_weights(10, 0, 0).is_err());
    }

    #[test]
    fn single_bucket_when_b_is_one() {
        for x in sample_weights(200, 1, 3).unwrap() {
            assert!(x > 0.5 && x <= 1.0);
        }
    }

    #[test]
    fn sampled_weights_spread_over_classes() {
        let g = gen_euclidean(200, [1.0, 1.0], 0)
            .unwrap()
            .with_weights(sample_weights(200, 6, 0).unwrap())
            .unwrap();
        let wc = weight_classes(&g);
        assert!(wc.classes().len() >= 4);
    }
}
