//! Tour construction used as a planning subroutine: nearest-neighbor with
//! 2-opt improvement, fixed-start open paths, an exact solver for tiny
//! vertex sets, and MST lower bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Vertex};
use crate::walk::Walk;

/// Largest vertex set the exact solver accepts.
pub const EXACT_TSP_LIMIT: usize = 10;

/// A closed tour; `seq` holds each vertex exactly once, the closing edge
/// back to `seq[0]` is implicit. `length` includes the closing edge.
#[derive(Debug, Clone)]
pub struct Tour {
    pub seq: Walk,
    pub length: f64,
}

fn closed_length(mg: &MetricGraph, seq: &[Vertex]) -> f64 {
    if seq.len() < 2 {
        return 0.0;
    }
    seq.windows(2).map(|p| mg.dist(p[0], p[1])).sum::<f64>()
        + mg.dist(seq[seq.len() - 1], seq[0])
}

/// Nearest-neighbor order over `verts` from `start`; ties go to the lowest
/// vertex id.
fn nearest_neighbor(mg: &MetricGraph, verts: &[Vertex], start: Vertex) -> Walk {
    let mut remaining: Vec<Vertex> = verts.iter().copied().filter(|&v| v != start).collect();
    remaining.sort_unstable();
    let mut seq = Vec::with_capacity(verts.len());
    seq.push(start);
    while !remaining.is_empty() {
        let cur = *seq.last().unwrap();
        let mut best = 0;
        for i in 1..remaining.len() {
            if mg.dist(cur, remaining[i]) < mg.dist(cur, remaining[best]) {
                best = i;
            }
        }
        seq.push(remaining.swap_remove(best));
    }
    seq
}

/// 2-opt to a local optimum (best-improvement passes, capped). Positions
/// `fixed..` participate; with `fixed = 1` the first vertex never moves.
/// `closed` treats the sequence as a cycle.
fn two_opt(mg: &MetricGraph, seq: &mut Walk, fixed: usize, closed: bool) {
    let n = seq.len();
    if n < 3 {
        return;
    }
    let max_passes = if n > 1500 { 12 } else { 200 };
    let eps = 1e-12;
    for _ in 0..max_passes {
        let mut best_delta = -eps;
        let mut best = None;
        // reversing seq[i..=j]
        for i in fixed..n - 1 {
            let prev = if i == 0 {
                if !closed {
                    // no edge enters position 0 on an open path
                    usize::MAX
                } else {
                    n - 1
                }
            } else {
                i - 1
            };
            for j in i + 1..n {
                if closed && prev == j {
                    continue;
                }
                let after = if j == n - 1 {
                    if closed {
                        0
                    } else {
                        usize::MAX
                    }
                } else {
                    j + 1
                };
                let mut delta = 0.0;
                if prev != usize::MAX {
                    delta += mg.dist(seq[prev], seq[j]) - mg.dist(seq[prev], seq[i]);
                }
                if after != usize::MAX {
                    delta += mg.dist(seq[i], seq[after]) - mg.dist(seq[j], seq[after]);
                }
                if delta < best_delta {
                    best_delta = delta;
                    best = Some((i, j));
                }
            }
        }
        match best {
            Some((i, j)) => seq[i..=j].reverse(),
            None => break,
        }
    }
}

/// Relocation passes for open paths: move short segments to a better
/// position. Position 0 is never disturbed.
fn or_opt(mg: &MetricGraph, seq: &mut Walk) {
    let n = seq.len();
    if n < 4 {
        return;
    }
    let eps = 1e-12;
    let mut improved = true;
    let mut passes = 0;
    while improved && passes < 100 {
        improved = false;
        passes += 1;
        for seg_len in 1..=3usize.min(n - 2) {
            for i in 1..=n - seg_len {
                if i + seg_len > n {
                    break;
                }
                let seg: Vec<Vertex> = seq[i..i + seg_len].to_vec();
                let before = seq[i - 1];
                let removal_gain = {
                    let tail = if i + seg_len < n {
                        mg.dist(seg[seg_len - 1], seq[i + seg_len])
                            - mg.dist(before, seq[i + seg_len])
                    } else {
                        0.0
                    };
                    mg.dist(before, seg[0]) + tail
                };
                // try inserting after each position outside the segment
                let mut rest: Vec<Vertex> = Vec::with_capacity(n - seg_len);
                rest.extend_from_slice(&seq[..i]);
                rest.extend_from_slice(&seq[i + seg_len..]);
                let mut best_cost = -eps;
                let mut best_pos = None;
                for p in 0..rest.len() {
                    if p + 1 == i {
                        continue; // original position
                    }
                    let ins = mg.dist(rest[p], seg[0])
                        + if p + 1 < rest.len() {
                            mg.dist(seg[seg_len - 1], rest[p + 1]) - mg.dist(rest[p], rest[p + 1])
                        } else {
                            0.0
                        };
                    let delta = ins - removal_gain;
                    if delta < best_cost {
                        best_cost = delta;
                        best_pos = Some(p);
                    }
                }
                if let Some(p) = best_pos {
                    let mut next = Vec::with_capacity(n);
                    next.extend_from_slice(&rest[..=p]);
                    next.extend_from_slice(&seg);
                    next.extend_from_slice(&rest[p + 1..]);
                    *seq = next;
                    improved = true;
                }
            }
        }
    }
}

/// Heuristic closed tour over `verts`: nearest neighbor from a seeded
/// start, improved by 2-opt. Deterministic for a fixed seed.
pub fn tsp_tour(mg: &MetricGraph, verts: &[Vertex], rng_seed: u64) -> Result<Tour> {
    if verts.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let start = verts[rng.gen_range(0..verts.len())];
    let mut seq = nearest_neighbor(mg, verts, start);
    two_opt(mg, &mut seq, 0, true);
    let length = closed_length(mg, &seq);
    Ok(Tour { seq, length })
}

/// Open path over `verts`: the heuristic tour rotated so its longest edge
/// becomes the (dropped) closing edge.
pub fn tsp_path(mg: &MetricGraph, verts: &[Vertex], rng_seed: u64) -> Result<Walk> {
    let tour = tsp_tour(mg, verts, rng_seed)?;
    let n = tour.seq.len();
    if n < 2 {
        return Ok(tour.seq);
    }
    let mut worst = n - 1; // closing edge
    let mut worst_len = mg.dist(tour.seq[n - 1], tour.seq[0]);
    for i in 0..n - 1 {
        let l = mg.dist(tour.seq[i], tour.seq[i + 1]);
        if l > worst_len {
            worst_len = l;
            worst = i;
        }
    }
    let mut path = Vec::with_capacity(n);
    path.extend_from_slice(&tour.seq[worst + 1..]);
    path.extend_from_slice(&tour.seq[..=worst]);
    Ok(path)
}

/// Open path that starts at `start` and never moves it: nearest neighbor
/// plus 2-opt and segment relocation over the tail.
pub fn tsp_path_fixed_start(
    mg: &MetricGraph,
    verts: &[Vertex],
    start: Vertex,
    _rng_seed: u64,
) -> Result<Walk> {
    if verts.is_empty() {
        return Err(Error::EmptySet);
    }
    if !verts.contains(&start) {
        return Err(Error::StartNotInSet);
    }
    let mut seq = nearest_neighbor(mg, verts, start);
    two_opt(mg, &mut seq, 1, false);
    or_opt(mg, &mut seq);
    Ok(seq)
}

/// Provably optimal open path over at most [`EXACT_TSP_LIMIT`] vertices,
/// by pruned permutation search. With `start` the first vertex is fixed.
/// Ties resolve to the lexicographically smallest id sequence.
pub fn exact_tsp_small(
    mg: &MetricGraph,
    verts: &[Vertex],
    start: Option<Vertex>,
) -> Result<Walk> {
    if verts.is_empty() {
        return Err(Error::EmptySet);
    }
    if verts.len() > EXACT_TSP_LIMIT {
        return Err(Error::TooLarge(verts.len(), EXACT_TSP_LIMIT));
    }
    if let Some(s) = start {
        if !verts.contains(&s) {
            return Err(Error::StartNotInSet);
        }
    }
    let mut pool: Vec<Vertex> = verts.to_vec();
    pool.sort_unstable();

    struct Search<'a> {
        mg: &'a MetricGraph,
        pool: Vec<Vertex>,
        used: Vec<bool>,
        cur: Vec<Vertex>,
        best: Option<(f64, Vec<Vertex>)>,
    }
    impl Search<'_> {
        fn dfs(&mut self, len: f64) {
            if let Some((best_len, _)) = &self.best {
                if len >= *best_len {
                    return;
                }
            }
            if self.cur.len() == self.pool.len() {
                self.best = Some((len, self.cur.clone()));
                return;
            }
            for i in 0..self.pool.len() {
                if self.used[i] {
                    continue;
                }
                let v = self.pool[i];
                let step = match self.cur.last() {
                    Some(&u) => self.mg.dist(u, v),
                    None => 0.0,
                };
                self.used[i] = true;
                self.cur.push(v);
                self.dfs(len + step);
                self.cur.pop();
                self.used[i] = false;
            }
        }
    }

    let mut search = Search {
        mg,
        used: vec![false; pool.len()],
        cur: Vec::with_capacity(pool.len()),
        pool,
        best: None,
    };
    if let Some(s) = start {
        let i = search.pool.iter().position(|&v| v == s).unwrap();
        search.used[i] = true;
        search.cur.push(s);
        search.dfs(0.0);
    } else {
        search.dfs(0.0);
    }
    Ok(search.best.expect("nonempty set yields a path").1)
}

/// Minimum-spanning-tree length over the induced complete subgraph
/// (Prim). A valid lower bound on any Hamiltonian path over `verts`.
pub fn mst_length(mg: &MetricGraph, verts: &[Vertex]) -> f64 {
    if verts.len() < 2 {
        return 0.0;
    }
    let n = verts.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    in_tree[0] = true;
    for i in 1..n {
        best[i] = mg.dist(verts[0], verts[i]);
    }
    let mut total = 0.0;
    for _ in 1..n {
        let mut pick = usize::MAX;
        for i in 0..n {
            if !in_tree[i] && (pick == usize::MAX || best[i] < best[pick]) {
                pick = i;
            }
        }
        total += best[pick];
        in_tree[pick] = true;
        for i in 0..n {
            if !in_tree[i] {
                best[i] = best[i].min(mg.dist(verts[pick], verts[i]));
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{MetricGraph, MonitorGraph};

    fn unit_square() -> MetricGraph {
        let g = MonitorGraph::from_points(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
            .unwrap();
        MetricGraph::close(g).unwrap()
    }

    #[test]
    fn square_tour_is_optimal() {
        let mg = unit_square();
        let tour = tsp_tour(&mg, &[0, 1, 2, 3], 7).unwrap();
        assert!((tour.length - 4.0).abs() < 1e-9);
    }

    #[test]
    fn square_mst() {
        let mg = unit_square();
        assert!((mst_length(&mg, &[0, 1, 2, 3]) - 3.0).abs() < 1e-9);
        assert_eq!(mst_length(&mg, &[2]), 0.0);
    }

    #[test]
    fn singleton_tour() {
        let mg = unit_square();
        let t = tsp_tour(&mg, &[2], 0).unwrap();
        assert_eq!(t.seq, vec![2]);
        assert_eq!(t.length, 0.0);
        assert!(matches!(tsp_tour(&mg, &[], 0), Err(Error::EmptySet)));
    }

    #[test]
    fn path_not_longer_than_tour() {
        let mg = unit_square();
        for seed in 0..5 {
            let tour = tsp_tour(&mg, &[0, 1, 2, 3], seed).unwrap();
            let path = tsp_path(&mg, &[0, 1, 2, 3], seed).unwrap();
            let plen: f64 = path.windows(2).map(|p| mg.dist(p[0], p[1])).sum();
            assert!(plen <= tour.length + 1e-9);
        }
    }

    #[test]
    fn two_vertex_path() {
        let mg = unit_square();
        let p = tsp_path(&mg, &[0, 2], 1).unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn fixed_start_stays_first() {
        let mg = unit_square();
        let p = tsp_path_fixed_start(&mg, &[0, 1, 2, 3], 2, 0).unwrap();
        assert_eq!(p[0], 2);
        let mut sorted = p.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
        assert!(matches!(
            tsp_path_fixed_start(&mg, &[0, 1], 3, 0),
            Err(Error::StartNotInSet)
        ));
        assert_eq!(tsp_path_fixed_start(&mg, &[2], 2, 0).unwrap(), vec![2]);
    }

    #[test]
    fn exact_collinear_points() {
        let g = MonitorGraph::from_points(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).unwrap();
        let mg = MetricGraph::close(g).unwrap();
        let p = exact_tsp_small(&mg, &[0, 1, 2], None).unwrap();
        assert!(p == vec![0, 1, 2] || p == vec![2, 1, 0]);
        assert_eq!(exact_tsp_small(&mg, &[1], None).unwrap(), vec![1]);
    }

    #[test]
    fn exact_rejects_large_sets() {
        let g = MonitorGraph::from_points((0..11).map(|i| [i as f64, 0.0]).collect()).unwrap();
        let mg = MetricGraph::close(g).unwrap();
        let verts: Vec<_> = (0..11).collect();
        assert!(matches!(exact_tsp_small(&mg, &verts, None), Err(Error::TooLarge(11, _))));
    }

    #[test]
    fn exact_beats_or_matches_heuristic() {
        let g = MonitorGraph::from_points(vec![
            [0.0, 0.0],
            [3.0, 1.0],
            [1.0, 4.0],
            [5.0, 2.0],
            [2.0, 2.0],
            [4.0, 5.0],
        ])
        .unwrap();
        let mg = MetricGraph::close(g).unwrap();
        let verts: Vec<_> = (0..6).collect();
        let exact = exact_tsp_small(&mg, &verts, None).unwrap();
        let elen: f64 = exact.windows(2).map(|p| mg.dist(p[0], p[1])).sum();
        for seed in 0..4 {
            let heur = tsp_path(&mg, &verts, seed).unwrap();
            let hlen: f64 = heur.windows(2).map(|p| mg.dist(p[0], p[1])).sum();
            assert!(elen <= hlen + 1e-9);
        }
        assert!(mst_length(&mg, &verts) <= elen + 1e-9);
    }
}
