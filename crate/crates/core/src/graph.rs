//! Graph data model: vertex-weighted monitor graphs, their metric closure,
//! weight relaxation and weight-class bucketing.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Vertices are dense indices into the graph's label/weight tables.
pub type Vertex = usize;

#[derive(Debug, Clone)]
enum EdgeStore {
    /// Adjacency lists with explicit symmetric edges.
    Sparse(Vec<Vec<(Vertex, f64)>>),
    /// Complete graph over points in the plane; lengths are Euclidean.
    Euclidean(Vec<[f64; 2]>),
}

/// A vertex-weighted, edge-weighted undirected graph. Weights are
/// normalized so the maximum is 1; the pre-normalization values are kept
/// in `raw_weights` for reporting in the caller's units.
#[derive(Debug, Clone)]
pub struct MonitorGraph {
    labels: Vec<String>,
    weights: Vec<f64>,
    raw_weights: Option<Vec<f64>>,
    edges: EdgeStore,
}

impl MonitorGraph {
    /// Builds a graph from labelled vertices and symmetric edges.
    pub fn build<S: AsRef<str>>(
        vertices: &[(S, f64)],
        edges: &[(S, S, f64)],
    ) -> Result<MonitorGraph> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let labels: Vec<String> = vertices.iter().map(|(l, _)| l.as_ref().to_string()).collect();
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        let index = |l: &str| -> Result<usize> {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownVertex(l.to_string()))
        };
        let raw: Vec<f64> = vertices.iter().map(|(_, w)| *w).collect();
        let mut adj = vec![Vec::new(); labels.len()];
        for (u, v, len) in edges {
            let (ui, vi) = (index(u.as_ref())?, index(v.as_ref())?);
            if *len <= 0.0 {
                return Err(Error::NonPositiveLength(
                    u.as_ref().to_string(),
                    v.as_ref().to_string(),
                ));
            }
            adj[ui].push((vi, *len));
            adj[vi].push((ui, *len));
        }
        Self::from_parts(labels, raw, EdgeStore::Sparse(adj))
    }

    /// Builds a complete graph from a symmetric distance matrix.
    pub fn from_matrix(labels: Vec<String>, weights: Vec<f64>, matrix: &[Vec<f64>]) -> Result<MonitorGraph> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                let len = matrix[i][j];
                if len <= 0.0 {
                    return Err(Error::NonPositiveLength(labels[i].clone(), labels[j].clone()));
                }
                adj[i].push((j, len));
                adj[j].push((i, len));
            }
        }
        Self::from_parts(labels, weights, EdgeStore::Sparse(adj))
    }

    /// Builds a complete Euclidean graph over the given points with unit weights.
    pub fn from_points(points: Vec<[f64; 2]>) -> Result<MonitorGraph> {
        if points.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let labels = (0..points.len()).map(|i| format!("{}", i + 1)).collect();
        let weights = vec![1.0; points.len()];
        Self::from_parts(labels, weights, EdgeStore::Euclidean(points))
    }

    fn from_parts(labels: Vec<String>, raw: Vec<f64>, edges: EdgeStore) -> Result<MonitorGraph> {
        let mut max = f64::NEG_INFINITY;
        for (i, w) in raw.iter().enumerate() {
            if *w <= 0.0 || !w.is_finite() {
                return Err(Error::NonPositiveWeight(labels[i].clone()));
            }
            max = max.max(*w);
        }
        let weights: Vec<f64> = raw.iter().map(|w| w / max).collect();
        let already_normalized = raw.iter().zip(&weights).all(|(a, b)| a == b);
        Ok(MonitorGraph {
            labels,
            weights,
            raw_weights: if already_normalized { None } else { Some(raw) },
            edges,
        })
    }

    /// Replaces all vertex weights (given in raw units) and renormalizes.
    pub fn with_weights(mut self, raw: Vec<f64>) -> Result<MonitorGraph> {
        assert_eq!(raw.len(), self.len());
        let labels = std::mem::take(&mut self.labels);
        let mut g = Self::from_parts(labels, raw, self.edges)?;
        if g.raw_weights.is_none() {
            g.raw_weights = Some(g.weights.clone());
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<Vertex> {
        self.labels.iter().position(|l| l == label)
    }

    /// Normalized weight in (0, 1].
    pub fn weight(&self, v: Vertex) -> f64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Pre-normalization weight, falling back to the normalized one.
    pub fn raw_weight(&self, v: Vertex) -> f64 {
        match &self.raw_weights {
            Some(r) => r[v],
            None => self.weights[v],
        }
    }

    pub fn has_raw_weights(&self) -> bool {
        self.raw_weights.is_some()
    }

    /// Planar coordinates when the graph was built from points.
    pub fn points(&self) -> Option<&[[f64; 2]]> {
        match &self.edges {
            EdgeStore::Euclidean(p) => Some(p),
            EdgeStore::Sparse(_) => None,
        }
    }
}

/// Rounds a weight in (0, 1] down to the nearest power of 1/2.
///
/// Returns 1/2^x with x the smallest integer such that 1/2^x <= phi,
/// so the result r satisfies r <= phi < 2r.
pub fn relax_weight(phi: f64) -> Result<f64> {
    Ok(0.5f64.powi(relax_exponent(phi)? as i32))
}

/// The exponent x of the relaxed weight 1/2^x.
pub fn relax_exponent(phi: f64) -> Result<usize> {
    if !(phi > 0.0 && phi <= 1.0) {
        return Err(Error::OutOfRange(phi));
    }
    let mut x = (-phi.log2()).ceil() as i64;
    if x < 0 {
        x = 0;
    }
    // log2 rounding can be off by one near exact powers of two
    while 0.5f64.powi(x as i32) > phi {
        x += 1;
    }
    while x > 0 && 0.5f64.powi(x as i32 - 1) <= phi {
        x -= 1;
    }
    Ok(x as usize)
}

/// Ratio between the maximum and minimum vertex weights, >= 1.
pub fn weight_ratio(g: &MonitorGraph) -> f64 {
    let max = g.weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = g.weights.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

/// Disjoint buckets V_0, V_1, ... where V_i holds the vertices with
/// relaxed weight 1/2^i (so 1/2^i <= phi(v) < 1/2^(i-1)).
#[derive(Debug, Clone)]
pub struct WeightClasses {
    classes: Vec<Vec<Vertex>>,
    class_of: Vec<usize>,
}

impl WeightClasses {
    pub fn classes(&self) -> &[Vec<Vertex>] {
        &self.classes
    }

    pub fn class_of(&self, v: Vertex) -> usize {
        self.class_of[v]
    }

    /// Largest class index, i.e. ceil(log2 of the relaxed weight ratio).
    pub fn max_class(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.class_of.len() && self.class_of[v] != usize::MAX
    }

    /// Buckets the vertices of a sub-population only; the rest get no class.
    pub fn over_subset(g: &MonitorGraph, verts: &[Vertex]) -> WeightClasses {
        let mut class_of = vec![usize::MAX; g.len()];
        let mut max = 0;
        for &v in verts {
            let x = relax_exponent(g.weight(v)).expect("normalized weight in (0,1]");
            class_of[v] = x;
            max = max.max(x);
        }
        let mut classes = vec![Vec::new(); max + 1];
        for &v in verts {
            classes[class_of[v]].push(v);
        }
        WeightClasses { classes, class_of }
    }
}

/// Buckets every vertex of `g` by relaxed weight.
pub fn weight_classes(g: &MonitorGraph) -> WeightClasses {
    let all: Vec<Vertex> = (0..g.len()).collect();
    WeightClasses::over_subset(g, &all)
}

#[derive(Debug, Clone)]
enum DistStore {
    /// Row-major n x n shortest-path distances plus the predecessor of
    /// column v on the shortest path from row u.
    Dense { n: usize, dist: Vec<f64>, parent: Vec<u32> },
    /// Euclidean points; the graph is complete and already metric.
    Points(Vec<[f64; 2]>),
}

/// The metric closure of a [`MonitorGraph`]: complete graph on the same
/// vertices with shortest-path distances, plus enough predecessor data to
/// lift closure walks back to the base graph.
#[derive(Debug, Clone)]
pub struct MetricGraph {
    base: MonitorGraph,
    store: DistStore,
}

impl MetricGraph {
    /// All-pairs shortest paths over the base graph.
    pub fn close(base: MonitorGraph) -> Result<MetricGraph> {
        let n = base.len();
        let store = match &base.edges {
            EdgeStore::Euclidean(pts) => DistStore::Points(pts.clone()),
            EdgeStore::Sparse(adj) => {
                let mut dist = vec![f64::INFINITY; n * n];
                let mut parent = vec![u32::MAX; n * n];
                for src in 0..n {
                    dijkstra(adj, src, &mut dist[src * n..(src + 1) * n], &mut parent[src * n..(src + 1) * n]);
                    if let Some(bad) = dist[src * n..(src + 1) * n].iter().position(|d| !d.is_finite()) {
                        return Err(Error::DisconnectedGraph(base.labels[bad].clone()));
                    }
                }
                DistStore::Dense { n, dist, parent }
            }
        };
        Ok(MetricGraph { base, store })
    }

    pub fn base(&self) -> &MonitorGraph {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// Shortest-path distance between two vertices.
    pub fn dist(&self, u: Vertex, v: Vertex) -> f64 {
        match &self.store {
            DistStore::Dense { n, dist, .. } => dist[u * n + v],
            DistStore::Points(p) => {
                let (dx, dy) = (p[u][0] - p[v][0], p[u][1] - p[v][1]);
                (dx * dx + dy * dy).sqrt()
            }
        }
    }

    /// Replaces every closure edge of `walk` with a realizing shortest path
    /// in the base graph. Visit order and total length are preserved.
    pub fn lift_walk(&self, walk: &[Vertex]) -> Vec<Vertex> {
        let (n, parent) = match &self.store {
            DistStore::Points(_) => return walk.to_vec(),
            DistStore::Dense { n, parent, .. } => (*n, parent),
        };
        let mut out = Vec::with_capacity(walk.len());
        if let Some(&first) = walk.first() {
            out.push(first);
        }
        for pair in walk.windows(2) {
            let (u, v) = (pair[0], pair[1]);
            // walk the predecessor chain from v back to u, then reverse
            let mut rev = Vec::new();
            let mut cur = v;
            while cur != u {
                rev.push(cur);
                cur = parent[u * n + cur] as usize;
            }
            out.extend(rev.into_iter().rev());
        }
        out
    }
}

fn dijkstra(adj: &[Vec<(Vertex, f64)>], src: Vertex, dist: &mut [f64], parent: &mut [u32]) {
    dist[src] = 0.0;
    parent[src] = src as u32;
    let mut heap: BinaryHeap<Reverse<(ordered::F64, Vertex)>> = BinaryHeap::new();
    heap.push(Reverse((ordered::F64(0.0), src)));
    while let Some(Reverse((ordered::F64(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, len) in &adj[u] {
            let nd = d + len;
            if nd < dist[v] {
                dist[v] = nd;
                parent[v] = u as u32;
                heap.push(Reverse((ordered::F64(nd), v)));
            }
        }
    }
}

mod ordered {
    /// Total order for finite, non-NaN distances.
    #[derive(PartialEq)]
    pub struct F64(pub f64);
    impl Eq for F64 {}
    impl PartialOrd for F64 {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for F64 {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.0.partial_cmp(&other.0).expect("distances are not NaN")
        }
    }
}
