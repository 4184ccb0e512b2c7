//! Walk semantics: length, concatenation, per-vertex latency and cost of
//! the periodic walk induced by a kernel, binary-walk validation and
//! kernel minimization.

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Vertex, WeightClasses};

/// A walk is an ordered vertex sequence; repeats are allowed. In a metric
/// closure every pair of vertices is adjacent, so any sequence is valid.
pub type Walk = Vec<Vertex>;

/// An ordered list of blocks forming one period of a patrol walk, plus the
/// weight-1 anchor every block starts from and the classes that define its
/// window structure. Vertices in `extras` sit outside the class structure
/// (they were appended after block assembly).
#[derive(Debug, Clone)]
pub struct BlockPlan {
    pub blocks: Vec<Walk>,
    pub anchor: Vertex,
    pub classes: WeightClasses,
    pub extras: Vec<Vertex>,
}

impl BlockPlan {
    /// The plan's kernel: all blocks concatenated.
    pub fn kernel(&self) -> Walk {
        concat(&self.blocks)
    }

    pub fn kernel_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// True if every vertex of the graph appears somewhere in the plan.
    pub fn covers_all(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for b in &self.blocks {
            for &v in b {
                seen[v] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Per-vertex latency/cost of a kernel's periodic expansion.
#[derive(Debug, Clone)]
pub struct EvalReport {
    /// Indexed by vertex: (latency in length units, weight x latency).
    pub per_vertex: Vec<(f64, f64)>,
    pub max_cost: f64,
    pub argmax_vertex: Vertex,
    /// Closed length of one kernel period.
    pub kernel_length: f64,
    pub lower_bound: Option<f64>,
    pub ratio: Option<f64>,
}

/// Sum of consecutive closure distances; 0 for a single vertex.
pub fn walk_length(mg: &MetricGraph, w: &[Vertex]) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::EmptyWalk);
    }
    Ok(w.windows(2).map(|p| mg.dist(p[0], p[1])).sum())
}

/// Length of one full period: internal length plus the wrap edge from the
/// kernel's last vertex back to its first.
pub fn cycle_length(mg: &MetricGraph, kernel: &[Vertex]) -> Result<f64> {
    let open = walk_length(mg, kernel)?;
    Ok(open + mg.dist(kernel[kernel.len() - 1], kernel[0]))
}

/// Maximum gap between consecutive visits to `v` in the periodic walk.
pub fn vertex_latency(mg: &MetricGraph, kernel: &[Vertex], v: Vertex) -> Result<f64> {
    latencies(mg, kernel)?[v]
        .ok_or_else(|| Error::VertexNeverVisited(mg.base().label(v).to_string()))
}

fn latencies(mg: &MetricGraph, kernel: &[Vertex]) -> Result<Vec<Option<f64>>> {
    if kernel.is_empty() {
        return Err(Error::EmptyWalk);
    }
    let k = kernel.len();
    let total = cycle_length(mg, kernel)?;
    // prefix[i] = length from kernel[0] to kernel[i]
    let mut prefix = Vec::with_capacity(k);
    prefix.push(0.0);
    for i in 1..k {
        prefix.push(prefix[i - 1] + mg.dist(kernel[i - 1], kernel[i]));
    }
    let mut first_pos = vec![usize::MAX; mg.len()];
    let mut last_pos = vec![usize::MAX; mg.len()];
    let mut max_gap = vec![0.0f64; mg.len()];
    for (i, &v) in kernel.iter().enumerate() {
        if first_pos[v] == usize::MAX {
            first_pos[v] = i;
        } else {
            let gap = prefix[i] - prefix[last_pos[v]];
            max_gap[v] = max_gap[v].max(gap);
        }
        last_pos[v] = i;
    }
    let mut out = vec![None; mg.len()];
    for v in 0..mg.len() {
        if first_pos[v] == usize::MAX {
            continue;
        }
        // wrap-around gap from the last visit through the wrap edge to the
        // first visit of the next period
        let wrap = total - (prefix[last_pos[v]] - prefix[first_pos[v]]);
        out[v] = Some(if first_pos[v] == last_pos[v] { total } else { max_gap[v].max(wrap) });
    }
    Ok(out)
}

/// Evaluates the periodic expansion of `kernel`: per-vertex latencies and
/// weighted costs. With `use_raw` the pre-normalization weights are used.
pub fn walk_cost(mg: &MetricGraph, kernel: &[Vertex], use_raw: bool) -> Result<EvalReport> {
    let lats = latencies(mg, kernel)?;
    let g = mg.base();
    let mut per_vertex = Vec::with_capacity(mg.len());
    let mut max_cost = f64::NEG_INFINITY;
    let mut argmax = 0;
    for (v, lat) in lats.iter().enumerate() {
        let lat = lat.ok_or_else(|| Error::VertexNeverVisited(g.label(v).to_string()))?;
        let w = if use_raw { g.raw_weight(v) } else { g.weight(v) };
        let cost = w * lat;
        if cost > max_cost {
            max_cost = cost;
            argmax = v;
        }
        per_vertex.push((lat, cost));
    }
    Ok(EvalReport {
        per_vertex,
        max_cost,
        argmax_vertex: argmax,
        kernel_length: cycle_length(mg, kernel)?,
        lower_bound: None,
        ratio: None,
    })
}

/// Checks the aligned-window property: for every vertex of class i, each
/// window of 2^i consecutive blocks (starting at multiples of 2^i)
/// contains it exactly once. Vertices without a class are ignored.
pub fn is_binary_walk(classes: &WeightClasses, blocks: &[Walk]) -> Result<bool> {
    let t = blocks.len();
    for (i, class) in classes.classes().iter().enumerate() {
        if class.is_empty() {
            continue;
        }
        let window = 1usize << i;
        if !t.is_multiple_of(window) {
            return Err(Error::MisalignedBlockCount { count: t, class: i });
        }
    }
    // count per-vertex occurrences per window
    for (i, class) in classes.classes().iter().enumerate() {
        if class.is_empty() {
            continue;
        }
        let window = 1usize << i;
        for start in (0..t).step_by(window) {
            let mut counts = std::collections::HashMap::new();
            for block in &blocks[start..start + window] {
                for &v in block {
                    if classes.contains(v) && classes.class_of(v) == i {
                        *counts.entry(v).or_insert(0usize) += 1;
                    }
                }
            }
            for &v in class {
                if counts.get(&v).copied().unwrap_or(0) != 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Shortest prefix P of `blocks` such that `blocks` is P repeated.
pub fn minimize_kernel(blocks: &[Walk]) -> Vec<Walk> {
    let t = blocks.len();
    for p in 1..t {
        if t.is_multiple_of(p) && (p..t).all(|i| blocks[i] == blocks[i % p]) {
            return blocks[..p].to_vec();
        }
    }
    blocks.to_vec()
}

/// Flattens walks into one, skipping empty ones.
pub fn concat(walks: &[Walk]) -> Walk {
    walks.iter().flatten().copied().collect()
}
