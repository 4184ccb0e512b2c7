//! Patrol planning: walk partitioning, the two block-assembly planners
//! (per-class and with low-weight extraction), the recursive interleaving
//! walk for nested instances, and lower bounds on the optimal cost.

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Vertex, WeightClasses};
use crate::tsp;
use crate::walk::{self, BlockPlan, Walk};

/// Which planner to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Brute,
    Smart,
    TspBaseline,
}

#[derive(Debug, Clone, Copy)]
pub struct PlanConfig {
    pub algorithm: Algorithm,
    /// Re-run a fixed-start path solver over each assembled block.
    pub refine: bool,
    /// Classes at most this large get a provably optimal path.
    pub exact_small_tsp_threshold: usize,
    pub rng_seed: u64,
}

impl Default for PlanConfig {
    fn default() -> Self {
        PlanConfig {
            algorithm: Algorithm::Smart,
            refine: true,
            exact_small_tsp_threshold: 8,
            rng_seed: 0,
        }
    }
}

/// Greedy single-traversal cut: pack each piece up to `budget`, cutting
/// before any vertex whose inclusion would exceed it. Minimizes the
/// piece count for the given budget.
fn greedy_cut(mg: &MetricGraph, w: &[Vertex], budget: f64) -> Vec<Walk> {
    let tol = budget * 1e-12;
    let mut out: Vec<Walk> = Vec::new();
    let mut piece: Walk = vec![w[0]];
    let mut plen = 0.0;
    for pair in w.windows(2) {
        let d = mg.dist(pair[0], pair[1]);
        if plen + d > budget + tol {
            out.push(std::mem::take(&mut piece));
            plen = 0.0;
        } else {
            plen += d;
        }
        piece.push(pair[1]);
    }
    out.push(piece);
    out
}

/// Splits `w` into exactly `k` order-preserving pieces whose maximum
/// internal length is minimized (bisection on the piece budget); in
/// particular every piece is at most `l(w)/k` long. With `k > |w|` the
/// pieces are the singletons padded with empty walks.
pub fn partition(mg: &MetricGraph, w: &[Vertex], k: usize) -> Vec<Walk> {
    assert!(k >= 1);
    if k >= w.len() {
        let mut out: Vec<Walk> = w.iter().map(|&v| vec![v]).collect();
        out.resize(k, Vec::new());
        return out;
    }
    let total: f64 = w.windows(2).map(|p| mg.dist(p[0], p[1])).sum();
    // total/k is always feasible (at most k greedy pieces fit), so the
    // bisection converges onto the optimal budget from above
    let mut lo = 0.0;
    let mut hi = total / k as f64;
    for _ in 0..100 {
        let mid = (lo + hi) / 2.0;
        if greedy_cut(mg, w, mid).len() <= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut out = greedy_cut(mg, w, hi);
    debug_assert!(out.len() <= k);
    out.resize(k, Vec::new());
    out
}

fn path_internal_length(mg: &MetricGraph, w: &[Vertex]) -> f64 {
    w.windows(2).map(|p| mg.dist(p[0], p[1])).sum()
}

/// Open path over one weight class: exact below the threshold, heuristic
/// otherwise.
fn class_open_path(mg: &MetricGraph, verts: &[Vertex], cfg: &PlanConfig) -> Result<Walk> {
    if verts.len() <= cfg.exact_small_tsp_threshold {
        tsp::exact_tsp_small(mg, verts, None)
    } else {
        tsp::tsp_path(mg, verts, cfg.rng_seed)
    }
}

/// Assembles `t` blocks over the classed vertices: class i's path is cut
/// into 2^i pieces and block S_k receives piece (k-1) mod 2^i of every
/// class, in increasing class order. Each class path is oriented so that
/// appending its pieces minimizes the longest block built so far, ties
/// going to the lower first-vertex id.
fn assemble_blocks(
    mg: &MetricGraph,
    classes: &WeightClasses,
    t: usize,
    cfg: &PlanConfig,
) -> Result<(Vec<Walk>, Vertex)> {
    let mut blocks: Vec<Walk> = vec![Vec::new(); t];
    let mut lens = vec![0.0f64; t];
    let mut anchor = None;
    for (i, class) in classes.classes().iter().enumerate() {
        if class.is_empty() {
            continue;
        }
        let path = class_open_path(mg, class, cfg)?;
        let mut rev = path.clone();
        rev.reverse();
        let pieces = 1usize << i;
        let eval = |p: &[Vertex]| -> (f64, Vec<Walk>) {
            let parts = partition(mg, p, pieces);
            let mut worst = 0.0f64;
            for (k, block) in blocks.iter().enumerate() {
                let piece = &parts[k % pieces];
                let mut len = lens[k];
                if let Some(&first) = piece.first() {
                    let conn = block.last().map_or(0.0, |&u| mg.dist(u, first));
                    len += conn + path_internal_length(mg, piece);
                }
                worst = worst.max(len);
            }
            (worst, parts)
        };
        let (fw_worst, fw_parts) = eval(&path);
        let (rv_worst, rv_parts) = eval(&rev);
        let pick_forward = if (fw_worst - rv_worst).abs() <= 1e-9 * (1.0 + fw_worst.abs()) {
            path[0] <= rev[0]
        } else {
            fw_worst < rv_worst
        };
        let (chosen, parts) = if pick_forward { (path, fw_parts) } else { (rev, rv_parts) };
        if i == 0 {
            anchor = Some(chosen[0]);
        }
        for (k, block) in blocks.iter_mut().enumerate() {
            let piece = &parts[k % pieces];
            if let Some(&first) = piece.first() {
                let conn = block.last().map_or(0.0, |&u| mg.dist(u, first));
                lens[k] += conn + path_internal_length(mg, piece);
                block.extend_from_slice(piece);
            }
        }
    }
    let anchor = anchor.expect("weight normalization guarantees a weight-1 class");
    Ok((blocks, anchor))
}

/// Runs [`refine_blocks`] and keeps the result only when it does not
/// increase the evaluated kernel cost (open-path local search ignores
/// the wrap edge, so a refined block can occasionally be worse).
fn maybe_refine(mg: &MetricGraph, blocks: &mut Vec<Walk>, anchor: Vertex, cfg: &PlanConfig) -> Result<()> {
    let before = walk::walk_cost(mg, &walk::concat(blocks), false)?.max_cost;
    let mut refined = blocks.clone();
    refine_blocks(mg, &mut refined, anchor, cfg)?;
    let after = walk::walk_cost(mg, &walk::concat(&refined), false)?.max_cost;
    if after <= before {
        *blocks = refined;
    }
    Ok(())
}

fn refine_blocks(mg: &MetricGraph, blocks: &mut [Walk], anchor: Vertex, cfg: &PlanConfig) -> Result<()> {
    // exact per-block solves only pay off while the block count is small;
    // large plans repeat thousands of near-identical blocks
    let exact_ok = blocks.len() <= 64;
    for block in blocks.iter_mut() {
        if block.len() < 3 {
            continue;
        }
        debug_assert_eq!(block[0], anchor);
        *block = if exact_ok && block.len() <= cfg.exact_small_tsp_threshold {
            tsp::exact_tsp_small(mg, block, Some(anchor))?
        } else {
            tsp::tsp_path_fixed_start(mg, block, anchor, cfg.rng_seed)?
        };
    }
    Ok(())
}

/// Per-class planner: t = 2^(m+1) blocks where m is the deepest class,
/// each class path cut into aligned alternating pieces. The result is a
/// binary walk; the kernel is reduced to its shortest period.
pub fn brute_partition(mg: &MetricGraph, cfg: &PlanConfig) -> Result<BlockPlan> {
    let classes = crate::graph::weight_classes(mg.base());
    let t = 1usize << (classes.max_class() + 1);
    let (mut blocks, anchor) = assemble_blocks(mg, &classes, t, cfg)?;
    if cfg.refine {
        maybe_refine(mg, &mut blocks, anchor, cfg)?;
    }
    let blocks = walk::minimize_kernel(&blocks);
    Ok(BlockPlan { blocks, anchor, classes, extras: Vec::new() })
}

/// Like [`brute_partition`] but vertices whose relaxed weight is below
/// 1/2^(floor(log2 n)+1) are pulled out first and re-inserted one per
/// even-indexed block, keeping the kernel polynomial in n.
pub fn smart_partition(mg: &MetricGraph, cfg: &PlanConfig) -> Result<BlockPlan> {
    let g = mg.base();
    let n = g.len();
    let cutoff = (usize::BITS - 1 - n.leading_zeros()) as usize + 1; // floor(log2 n) + 1
    let full = crate::graph::weight_classes(g);
    let mut extras: Vec<Vertex> = Vec::new();
    for class in full.classes().iter().skip(cutoff + 1) {
        extras.extend_from_slice(class);
    }
    if extras.is_empty() {
        return brute_partition(mg, cfg);
    }
    let kept: Vec<Vertex> = (0..n).filter(|&v| full.class_of(v) <= cutoff).collect();
    let classes = WeightClasses::over_subset(g, &kept);
    // enough blocks for both the class windows and one extra per S_{2k}
    let mut t = 1usize << (classes.max_class() + 1);
    while t < 2 * extras.len() {
        t *= 2;
    }
    if 2 * extras.len() > t {
        return Err(Error::TooManySmallWeights { low: extras.len(), blocks: t });
    }
    let (mut blocks, anchor) = assemble_blocks(mg, &classes, t, cfg)?;
    for (k, &u) in extras.iter().enumerate() {
        blocks[2 * (k + 1) - 1].push(u);
    }
    if cfg.refine {
        maybe_refine(mg, &mut blocks, anchor, cfg)?;
    }
    let blocks = walk::minimize_kernel(&blocks);
    Ok(BlockPlan { blocks, anchor, classes, extras })
}

/// Runs the configured planner. The baseline wraps a plain tour as a
/// single-block plan.
pub fn plan(mg: &MetricGraph, cfg: &PlanConfig) -> Result<BlockPlan> {
    match cfg.algorithm {
        Algorithm::Brute => brute_partition(mg, cfg),
        Algorithm::Smart => smart_partition(mg, cfg),
        Algorithm::TspBaseline => {
            let kernel = tsp_baseline(mg, cfg.rng_seed)?;
            let anchor = kernel[0];
            let classes = crate::graph::weight_classes(mg.base());
            Ok(BlockPlan { blocks: vec![kernel], anchor, classes, extras: Vec::new() })
        }
    }
}

/// The recursive interleaving walk over nested vertex sets V_1..V_k:
/// every vertex of V_1 appears in each round, and one vertex of a deeper
/// set is appended per round, set ell recurring every prod_{j<ell}
/// (|V_j|+1) rounds. Empty input gives an empty walk.
pub fn walk_maker(class_sets: &[Vec<Vertex>]) -> Walk {
    let sets: Vec<&Vec<Vertex>> = class_sets.iter().filter(|s| !s.is_empty()).collect();
    if sets.is_empty() {
        return Vec::new();
    }
    if sets.len() == 1 {
        return sets[0].clone();
    }
    let k = sets.len();
    // stride[idx]: rounds between consecutive emissions from sets[idx]
    let mut stride = vec![0usize; k];
    stride[1] = 1;
    for idx in 2..k {
        stride[idx] = stride[idx - 1] * (sets[idx - 1].len() + 1);
    }
    let rounds = stride[k - 1] * sets[k - 1].len();
    let mut counters = vec![0usize; k];
    let mut out = Vec::new();
    for m in 1..=rounds {
        out.extend_from_slice(sets[0]);
        let idx = (1..k).rev().find(|&i| m % stride[i] == 0).unwrap();
        out.push(sets[idx][counters[idx]]);
        counters[idx] = (counters[idx] + 1) % sets[idx].len();
    }
    out
}

/// A certified lower bound on the cost of any infinite patrol walk: the
/// best of (a) twice the farthest distance from a weight-1 vertex, (b)
/// the graph diameter, and (c) per-class MST length over 2^i.
pub fn lower_bound_opt(mg: &MetricGraph) -> f64 {
    let g = mg.base();
    let n = mg.len();
    let mut bound = 0.0f64;
    for v in 0..n {
        let heavy = g.weight(v) == 1.0;
        for u in 0..n {
            let d = mg.dist(u, v);
            bound = bound.max(d);
            if heavy {
                bound = bound.max(2.0 * d);
            }
        }
    }
    let classes = crate::graph::weight_classes(g);
    for (i, class) in classes.classes().iter().enumerate() {
        if class.len() >= 2 {
            // class indices can exceed 63, so keep the divisor in floats
            bound = bound.max(tsp::mst_length(mg, class) / 2f64.powi(i as i32));
        }
    }
    bound
}

/// Comparison kernel: a heuristic tour visiting every vertex once.
pub fn tsp_baseline(mg: &MetricGraph, rng_seed: u64) -> Result<Walk> {
    let all: Vec<Vertex> = (0..mg.len()).collect();
    Ok(tsp::tsp_tour(mg, &all, rng_seed)?.seq)
}

/// Guaranteed approximation factor of [`brute_partition`] in terms of
/// the relaxed weight ratio: 8·log2(relaxed ratio) + 2.
pub fn brute_factor(classes: &WeightClasses) -> f64 {
    8.0 * classes.max_class() as f64 + 2.0
}

/// Guaranteed approximation factor of [`smart_partition`]: 8·log2 n + 16.
pub fn smart_factor(n: usize) -> f64 {
    8.0 * (n as f64).log2() + 16.0
}
