//! Reference implementations for tiny instances: exhaustive kernel search
//! and an independent cost evaluator that unrolls periods explicitly.

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Vertex};
use crate::planner;
use crate::walk::{walk_cost, Walk};

/// Hard instance-size limits for [`brute_force_optimal`].
pub const ORACLE_MAX_N: usize = 6;
pub const ORACLE_MAX_KERNEL: usize = 12;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub best_kernel: Walk,
    pub best_cost: f64,
    /// Complete covering kernels whose cost was evaluated.
    pub kernels_examined: u64,
    /// True when the search space up to the cap was fully enumerated, so
    /// `best_cost` is optimal among kernels of at most that size.
    pub exhausted: bool,
}

struct Search<'a> {
    mg: &'a MetricGraph,
    weights: Vec<f64>,
    n: usize,
    cap: usize,
    seq: Walk,
    prefix: Vec<f64>,
    first: Vec<f64>,
    last: Vec<f64>,
    gap: Vec<f64>,
    visits: Vec<u32>,
    covered: usize,
    best_cost: f64,
    best_kernel: Walk,
    examined: u64,
}

impl Search<'_> {
    fn leaf_cost(&self) -> f64 {
        let cur = *self.prefix.last().unwrap();
        let total = cur + self.mg.dist(*self.seq.last().unwrap(), self.seq[0]);
        let mut cost = 0.0f64;
        for v in 0..self.n {
            let lat = self.gap[v].max(total - self.last[v] + self.first[v]);
            cost = cost.max(self.weights[v] * lat);
        }
        cost
    }

    fn dfs(&mut self) {
        let len = self.seq.len();
        if self.covered == self.n {
            self.examined += 1;
            let cost = self.leaf_cost();
            if cost < self.best_cost {
                self.best_cost = cost;
                self.best_kernel = self.seq.clone();
            }
        }
        if len == self.cap {
            return;
        }
        // a revisit gap already forced open cannot shrink; prune on it
        let cur = *self.prefix.last().unwrap();
        for v in 0..self.n {
            if self.visits[v] > 0 && self.weights[v] * (cur - self.last[v]) >= self.best_cost {
                return;
            }
        }
        let tail = *self.seq.last().unwrap();
        for v in 0..self.n {
            if v == tail {
                continue; // zero-length repeats never help
            }
            let nlen = cur + self.mg.dist(tail, v);
            let (pf, pl, pg) = (self.first[v], self.last[v], self.gap[v]);
            if self.visits[v] == 0 {
                self.first[v] = nlen;
                self.covered += 1;
            } else {
                self.gap[v] = pg.max(nlen - pl);
            }
            self.last[v] = nlen;
            self.visits[v] += 1;
            self.seq.push(v);
            self.prefix.push(nlen);
            self.dfs();
            self.prefix.pop();
            self.seq.pop();
            self.visits[v] -= 1;
            if self.visits[v] == 0 {
                self.covered -= 1;
            }
            self.first[v] = pf;
            self.last[v] = pl;
            self.gap[v] = pg;
        }
    }
}

/// Exhaustively searches all covering kernels of size at most
/// `max_kernel` (rotations collapsed by fixing vertex 0 first) and
/// returns the cheapest. Only feasible for tiny instances.
pub fn brute_force_optimal(mg: &MetricGraph, max_kernel: usize) -> Result<OracleResult> {
    let n = mg.len();
    if n > ORACLE_MAX_N || max_kernel > ORACLE_MAX_KERNEL {
        return Err(Error::SearchSpaceTooLarge { n, cap: max_kernel });
    }
    if max_kernel < n {
        return Err(Error::BadParam(format!(
            "kernel cap {max_kernel} cannot cover {n} vertices"
        )));
    }
    // seed the incumbent with a heuristic tour so pruning bites early;
    // its rotation starting at vertex 0 lies inside the search space
    let mut seed_kernel = planner::tsp_baseline(mg, 0)?;
    let zero = seed_kernel.iter().position(|&v| v == 0).unwrap();
    seed_kernel.rotate_left(zero);
    let seed_cost = walk_cost(mg, &seed_kernel, false)?.max_cost;

    let weights: Vec<f64> = (0..n).map(|v| mg.base().weight(v)).collect();
    let mut search = Search {
        mg,
        weights,
        n,
        cap: max_kernel,
        seq: vec![0],
        prefix: vec![0.0],
        first: vec![0.0; n],
        last: vec![0.0; n],
        gap: vec![0.0; n],
        visits: vec![0; n],
        covered: 1,
        best_cost: seed_cost,
        best_kernel: seed_kernel,
        examined: 0,
    };
    search.visits[0] = 1;
    search.dfs();
    Ok(OracleResult {
        best_kernel: search.best_kernel,
        best_cost: search.best_cost,
        kernels_examined: search.examined,
        exhausted: true,
    })
}

/// Independent evaluator: concatenates `copies` >= 3 explicit periods and
/// scans consecutive-visit gaps per vertex. Agrees with
/// [`walk_cost`](crate::walk::walk_cost) (bit-exactly when all involved
/// distances sum without rounding).
pub fn unrolled_cost_check(mg: &MetricGraph, kernel: &[Vertex], copies: usize) -> Result<f64> {
    if copies < 3 {
        return Err(Error::BadParam(format!("need at least 3 copies, got {copies}")));
    }
    if kernel.is_empty() {
        return Err(Error::EmptyWalk);
    }
    let mut unrolled = Vec::with_capacity(kernel.len() * copies);
    for _ in 0..copies {
        unrolled.extend_from_slice(kernel);
    }
    let mut prefix = Vec::with_capacity(unrolled.len());
    prefix.push(0.0f64);
    for i in 1..unrolled.len() {
        prefix.push(prefix[i - 1] + mg.dist(unrolled[i - 1], unrolled[i]));
    }
    let n = mg.len();
    let mut last = vec![None; n];
    let mut max_gap = vec![0.0f64; n];
    let mut seen = vec![false; n];
    for (i, &v) in unrolled.iter().enumerate() {
        if let Some(j) = last[v] {
            let gap: f64 = prefix[i] - prefix[j];
            max_gap[v] = max_gap[v].max(gap);
        }
        last[v] = Some(i);
        seen[v] = true;
    }
    let mut cost = 0.0f64;
    for v in 0..n {
        if !seen[v] {
            return Err(Error::VertexNeverVisited(mg.base().label(v).to_string()));
        }
        cost = cost.max(mg.base().weight(v) * max_gap[v]);
    }
    Ok(cost)
}
