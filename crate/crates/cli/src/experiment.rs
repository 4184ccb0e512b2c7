//! Experiment orchestration: sweeps of the planner against the plain-tour
//! baseline across weight-spread parameters and seeds, with CSV/JSON
//! emission and a sign test for the ratio trend.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use patrol_core::gen::{gen_euclidean, sample_weights};
use patrol_core::graph::weight_classes;
use patrol_core::planner::{self, Algorithm, PlanConfig};
use patrol_core::walk::walk_cost;
use patrol_core::MetricGraph;

use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub n: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub algorithm: String,
    pub seed: u64,
    pub cost: f64,
    pub baseline_cost: f64,
    pub ratio: f64,
    pub lower_bound: f64,
    pub approx_ratio_bound: f64,
    pub runtime_ms: f64,
    pub kernel_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub n: usize,
    pub b_values: Vec<usize>,
    pub seeds: Vec<u64>,
    pub algorithm: Algorithm,
    pub box_size: [f64; 2],
    /// Attach the kernel and block lists to each record (JSON only).
    pub include_walks: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            n: 100,
            b_values: vec![4, 16, 64, 256, 1024],
            seeds: (0..10).collect(),
            algorithm: Algorithm::Smart,
            box_size: [1000.0, 1000.0],
            include_walks: false,
        }
    }
}

fn alg_name(a: Algorithm) -> &'static str {
    match a {
        Algorithm::Brute => "brute",
        Algorithm::Smart => "smart",
        Algorithm::TspBaseline => "tsp",
    }
}

/// One planner-vs-baseline run on a freshly generated instance.
pub fn run_one(spec: &ExperimentSpec, b: usize, seed: u64) -> Result<RunRecord> {
    let weights_seed = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ b as u64;
    let g = gen_euclidean(spec.n, spec.box_size, seed)?
        .with_weights(sample_weights(spec.n, b, weights_seed)?)?;
    let mg = MetricGraph::close(g)?;
    let cfg = PlanConfig { algorithm: spec.algorithm, rng_seed: seed, ..PlanConfig::default() };
    let start = Instant::now();
    let plan = planner::plan(&mg, &cfg)?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1000.0;
    let kernel = plan.kernel();
    let cost = walk_cost(&mg, &kernel, false)?.max_cost;
    let baseline = planner::tsp_baseline(&mg, seed)?;
    let baseline_cost = walk_cost(&mg, &baseline, false)?
        .max_cost;
    let lower_bound = planner::lower_bound_opt(&mg);
    let approx_ratio_bound = match spec.algorithm {
        Algorithm::Brute => planner::brute_factor(&weight_classes(mg.base())),
        _ => planner::smart_factor(spec.n),
    };
    Ok(RunRecord {
        instance: format!("euclidean-n{}-seed{}", spec.n, seed),
        n: spec.n,
        b,
        algorithm: alg_name(spec.algorithm).to_string(),
        seed,
        cost,
        baseline_cost,
        ratio: cost / baseline_cost,
        lower_bound,
        approx_ratio_bound,
        runtime_ms,
        kernel_size: kernel.len(),
        kernel: spec.include_walks.then_some(kernel),
        blocks: spec.include_walks.then(|| plan.blocks.clone()),
    })
}

/// Runs the full sweep in parallel; output order is canonicalized to
/// (B, seed) regardless of scheduling.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    let jobs: Vec<(usize, u64)> = spec
        .b_values
        .iter()
        .flat_map(|&b| spec.seeds.iter().map(move |&s| (b, s)))
        .collect();
    let mut records = jobs
        .par_iter()
        .map(|&(b, s)| run_one(spec, b, s))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|a| (a.b, a.seed));
    Ok(records)
}

pub fn to_json(records: &[RunRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

/// CSV with the flat columns only (kernels and blocks are JSON-only).
pub fn to_csv(records: &[RunRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "instance",
        "n",
        "B",
        "algorithm",
        "seed",
        "cost",
        "baseline_cost",
        "ratio",
        "lower_bound",
        "approx_ratio_bound",
        "runtime_ms",
        "kernel_size",
    ])
    .expect("csv header");
    for r in records {
        w.write_record([
            r.instance.clone(),
            r.n.to_string(),
            r.b.to_string(),
            r.algorithm.clone(),
            r.seed.to_string(),
            r.cost.to_string(),
            r.baseline_cost.to_string(),
            r.ratio.to_string(),
            r.lower_bound.to_string(),
            r.approx_ratio_bound.to_string(),
            r.runtime_ms.to_string(),
            r.kernel_size.to_string(),
        ])
        .expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
}

/// One-sided sign-test p-value: probability of at least `wins` successes
/// in `trials` fair coin flips.
pub fn sign_test_p(wins: usize, trials: usize) -> f64 {
    let mut p = 0.0f64;
    for k in wins..=trials {
        p += binomial(trials, k);
    }
    p / 2.0f64.powi(trials as i32)
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Pairs each seed's ratio at the smallest and largest B and counts how
/// often the ratio decreased; returns (wins, trials, p-value).
pub fn ratio_trend(records: &[RunRecord]) -> (usize, usize, f64) {
    let min_b = records.iter().map(|r| r.b).min().unwrap_or(0);
    let max_b = records.iter().map(|r| r.b).max().unwrap_or(0);
    let mut wins = 0;
    let mut trials = 0;
    for low in records.iter().filter(|r| r.b == min_b) {
        if let Some(high) = records.iter().find(|r| r.b == max_b && r.seed == low.seed) {
            trials += 1;
            if high.ratio < low.ratio {
                wins += 1;
            }
        }
    }
    (wins, trials, sign_test_p(wins, trials))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_test_values() {
        assert!((sign_test_p(10, 10) - 1.0 / 1024.0).abs() < 1e-12);
        assert!((sign_test_p(0, 10) - 1.0).abs() < 1e-12);
        assert!((sign_test_p(5, 10) - 0.623046875).abs() < 1e-9);
    }

    #[test]
    fn uniform_weights_ratio_near_one() {
        // with literally uniform weights the plan degenerates to a
        // repeated tour, so it can never beat or trail the baseline
        let g = gen_euclidean(20, [100.0, 100.0], 5).unwrap();
        let mg = MetricGraph::close(g).unwrap();
        let cfg = PlanConfig { rng_seed: 5, ..Default::default() };
        let plan = planner::plan(&mg, &cfg).unwrap();
        assert_eq!(plan.blocks.len(), 1);
        let cost = walk_cost(&mg, &plan.kernel(), false).unwrap().max_cost;
        let base = planner::tsp_baseline(&mg, 5).unwrap();
        let base_cost = walk_cost(&mg, &base, false).unwrap().max_cost;
        assert!(cost <= base_cost * (1.0 + 1e-9), "cost {cost} baseline {base_cost}");
    }

    #[test]
    fn records_respect_bounds() {
        let spec = ExperimentSpec {
            n: 20,
            b_values: vec![1, 8],
            seeds: vec![0, 1],
            ..Default::default()
        };
        for r in run_experiment(&spec).unwrap() {
            assert!(r.cost >= r.lower_bound - 1e-9);
            assert!(r.cost / r.lower_bound <= r.approx_ratio_bound + 1e-9);
        }
    }

    #[test]
    fn emission_shapes() {
        let spec = ExperimentSpec {
            n: 10,
            b_values: vec![2],
            seeds: vec![3],
            include_walks: true,
            ..Default::default()
        };
        let recs = run_experiment(&spec).unwrap();
        let json = to_json(&recs);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let first = &parsed[0];
        for key in [
            "instance",
            "n",
            "B",
            "algorithm",
            "cost",
            "baseline_cost",
            "ratio",
            "lower_bound",
            "approx_ratio_bound",
            "runtime_ms",
            "kernel",
            "blocks",
        ] {
            assert!(first.get(key).is_some(), "missing key {key}");
        }
        let csv = to_csv(&recs);
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.starts_with("instance,"));
    }

    #[test]
    fn deterministic_given_seed() {
        let spec = ExperimentSpec { n: 15, b_values: vec![4], seeds: vec![7], ..Default::default() };
        let a = run_experiment(&spec).unwrap();
        let b = run_experiment(&spec).unwrap();
        assert_eq!(a[0].cost, b[0].cost);
        assert_eq!(a[0].kernel_size, b[0].kernel_size);
    }
}
