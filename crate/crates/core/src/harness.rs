//! Benchmark suites over generated instances, written as CSV.
//!
//! Every suite runs its instances through [`crate::par`] and emits rows in
//! instance order. Each CSV row starts with a `schema_version` column.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::dalvks::{dalvks_accel_with, dalvks_lp_full_with, dalvks_prop2, pvector_count, DemandVector, LpFullOptions};
use crate::ddsp::{ddsp_approx, DdspParams, GammaSolver, DEFAULT_LP_SIZE_LIMIT};
use crate::dense::greedy_plus_plus;
use crate::error::{Error, Result};
use crate::generators::{gen_er, gen_planted, ColorMode, GenSpec};
use crate::graph::{ColoredGraph, Density, Fraction};
use crate::lp::{LpEngine, SolverError};
use crate::oracle::brute_force_dalvks;
use crate::par;

pub const CSV_SCHEMA_VERSION: u32 = 1;

/// `d / opt` as a float, 1 when the optimum is 0.
pub fn ratio(d: Density, opt: Density) -> f64 {
    if opt.edges == 0 {
        return 1.0;
    }
    (d.edges as f64 * opt.nodes as f64) / (d.nodes as f64 * opt.edges as f64)
}

/// Exact `d >= bound · opt`.
pub fn at_least(d: Density, bound: Fraction, opt: Density) -> bool {
    let lhs = d.edges as u128 * opt.nodes as u128 * *bound.denom() as u128;
    let rhs = *bound.numer() as u128 * opt.edges as u128 * d.nodes as u128;
    lhs >= rhs
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    Some(if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2.0
    })
}

fn write_csv<W: Write, R: Serialize>(out: W, header: &[&str], rows: &[R]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let io = |e: csv::Error| Error::InvalidParameter(format!("cannot write CSV: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidParameter(format!("cannot write CSV: {e}")))?;
    Ok(())
}

/// One named instance of the per-color demand problem.
#[derive(Debug, Clone)]
pub struct DemandInstance {
    pub id: String,
    pub graph: ColoredGraph,
    pub demand: DemandVector,
}

/// Demands `⌊|V_c| / 2⌋`.
pub fn half_demands(g: &ColoredGraph) -> DemandVector {
    let k = g.color_class_sizes().iter().map(|s| s / 2).collect();
    DemandVector::new(g, k).expect("half of each class is available")
}

#[derive(Debug, Clone)]
pub struct RatioSuiteConfig {
    pub instances: usize,
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub edge_prob: f64,
    pub seed: u64,
}

impl Default for RatioSuiteConfig {
    fn default() -> Self {
        Self {
            instances: 100,
            min_nodes: 10,
            max_nodes: 14,
            edge_prob: 0.35,
            seed: 0,
        }
    }
}

/// Two-color Erdős–Rényi instances with colors split evenly and demands of
/// half of each class. Sizes cycle through `min_nodes..=max_nodes`.
pub fn ratio_instances(config: &RatioSuiteConfig) -> Result<Vec<DemandInstance>> {
    if config.min_nodes < 2 || config.max_nodes < config.min_nodes {
        return Err(Error::InvalidParameter("need 2 <= min_nodes <= max_nodes".into()));
    }
    let span = config.max_nodes - config.min_nodes + 1;
    (0..config.instances)
        .map(|i| {
            let n = config.min_nodes + i % span;
            let seed = config.seed.wrapping_add(i as u64);
            let graph = gen_er(&GenSpec::erdos_renyi(n, config.edge_prob, ColorMode::EvenSplit(2), seed))?;
            let demand = half_demands(&graph);
            Ok(DemandInstance {
                id: format!("er-n{n}-s{seed}"),
                graph,
                demand,
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct RatioRow {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub opt: Option<Density>,
    pub accel: Option<Density>,
    pub prop2: Option<Density>,
    pub lp_full: Option<Density>,
    pub accel_lp_solves: usize,
    pub full_lp_solves: usize,
    pub error: Option<String>,
}

impl RatioRow {
    pub fn accel_ratio(&self) -> Option<f64> {
        Some(ratio(self.accel?, self.opt?))
    }

    pub fn prop2_ratio(&self) -> Option<f64> {
        Some(ratio(self.prop2?, self.opt?))
    }

    pub fn lp_full_ratio(&self) -> Option<f64> {
        Some(ratio(self.lp_full?, self.opt?))
    }
}

fn ratio_row(inst: &DemandInstance, lp: &LpEngine) -> RatioRow {
    let g = &inst.graph;
    let mut row = RatioRow {
        id: inst.id.clone(),
        n: g.node_count(),
        m: g.edge_count(),
        opt: None,
        accel: None,
        prop2: None,
        lp_full: None,
        accel_lp_solves: 0,
        full_lp_solves: 0,
        error: None,
    };
    let result = (|| -> Result<()> {
        row.opt = brute_force_dalvks(g, inst.demand.as_slice())?.optimum();
        let accel = dalvks_accel_with(g, &inst.demand, lp, None)?;
        row.accel = Some(accel.best.density());
        row.accel_lp_solves = accel.lp_solves;
        let full = dalvks_lp_full_with(g, &inst.demand, lp, LpFullOptions::default())?;
        row.lp_full = Some(full.best.density());
        row.full_lp_solves = full.lp_solves;
        row.prop2 = Some(dalvks_prop2(g, &inst.demand, lp)?.density());
        Ok(())
    })();
    if let Err(e) = result {
        row.error = Some(e.to_string());
    }
    row
}

/// Runs the oracle and the three approximation algorithms on each instance.
pub fn run_ratio_suite(instances: &[DemandInstance], lp: &LpEngine) -> Vec<RatioRow> {
    par::map(instances, |inst| ratio_row(inst, lp))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSummary {
    pub accel_min: f64,
    pub accel_median: f64,
    pub prop2_min: f64,
    pub prop2_median: f64,
    pub lp_full_min: f64,
    pub lp_full_median: f64,
}

pub fn summarize_ratios(rows: &[RatioRow]) -> Option<RatioSummary> {
    let collect = |f: fn(&RatioRow) -> Option<f64>| rows.iter().filter_map(f).collect::<Vec<_>>();
    let (accel, prop2, full) = (
        collect(RatioRow::accel_ratio),
        collect(RatioRow::prop2_ratio),
        collect(RatioRow::lp_full_ratio),
    );
    let min = |xs: &[f64]| xs.iter().copied().fold(f64::INFINITY, f64::min);
    Some(RatioSummary {
        accel_min: min(&accel),
        accel_median: median(accel)?,
        prop2_min: min(&prop2),
        prop2_median: median(prop2)?,
        lp_full_min: min(&full),
        lp_full_median: median(full)?,
    })
}

#[derive(Serialize)]
struct RatioCsvRow<'a> {
    schema_version: u32,
    kind: &'a str,
    instance: &'a str,
    n: Option<usize>,
    m: Option<usize>,
    opt: Option<String>,
    accel_density: Option<String>,
    prop2_density: Option<String>,
    lp_full_density: Option<String>,
    accel_ratio: Option<f64>,
    prop2_ratio: Option<f64>,
    lp_full_ratio: Option<f64>,
    accel_lp_solves: Option<usize>,
    full_lp_solves: Option<usize>,
    error: Option<&'a str>,
}

const RATIO_HEADER: &[&str] = &[
    "schema_version",
    "kind",
    "instance",
    "n",
    "m",
    "opt",
    "accel_density",
    "prop2_density",
    "lp_full_density",
    "accel_ratio",
    "prop2_ratio",
    "lp_full_ratio",
    "accel_lp_solves",
    "full_lp_solves",
    "error",
];

/// Instance rows followed by `min` and `median` summary rows.
pub fn write_ratio_csv<W: Write>(out: W, rows: &[RatioRow]) -> Result<()> {
    let s = |d: Option<Density>| d.map(|d| d.to_string());
    let mut records: Vec<RatioCsvRow> = rows
        .iter()
        .map(|r| RatioCsvRow {
            schema_version: CSV_SCHEMA_VERSION,
            kind: "instance",
            instance: &r.id,
            n: Some(r.n),
            m: Some(r.m),
            opt: s(r.opt),
            accel_density: s(r.accel),
            prop2_density: s(r.prop2),
            lp_full_density: s(r.lp_full),
            accel_ratio: r.accel_ratio(),
            prop2_ratio: r.prop2_ratio(),
            lp_full_ratio: r.lp_full_ratio(),
            accel_lp_solves: Some(r.accel_lp_solves),
            full_lp_solves: Some(r.full_lp_solves),
            error: r.error.as_deref(),
        })
        .collect();
    if let Some(sum) = summarize_ratios(rows) {
        for (kind, a, p, f) in [
            ("min", sum.accel_min, sum.prop2_min, sum.lp_full_min),
            ("median", sum.accel_median, sum.prop2_median, sum.lp_full_median),
        ] {
            records.push(RatioCsvRow {
                schema_version: CSV_SCHEMA_VERSION,
                kind,
                instance: "",
                n: None,
                m: None,
                opt: None,
                accel_density: None,
                prop2_density: None,
                lp_full_density: None,
                accel_ratio: Some(a),
                prop2_ratio: Some(p),
                lp_full_ratio: Some(f),
                accel_lp_solves: None,
                full_lp_solves: None,
                error: None,
            });
        }
    }
    write_csv(out, RATIO_HEADER, &records)
}

#[derive(Debug, Clone)]
pub struct ScalingConfig {
    pub node_counts: Vec<usize>,
    pub color_counts: Vec<usize>,
    pub seeds: usize,
    pub base_seed: u64,
    /// Instances needing more LP solves than this are recorded as over budget.
    pub lp_budget: Option<usize>,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            node_counts: vec![18, 54, 90, 126],
            color_counts: vec![2, 3, 6],
            seeds: 10,
            base_seed: 0,
            lp_budget: Some(200),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    BudgetExceeded,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingRow {
    pub schema_version: u32,
    pub n: usize,
    pub colors: usize,
    pub seed: u64,
    pub m: usize,
    pub k_c: usize,
    pub accel_density: Option<String>,
    pub accel_lp_solves: usize,
    /// LP(p) solves the unrestricted enumeration performs on this instance.
    pub full_lp_solves: usize,
    pub runtime_ms: f64,
    pub status: RunStatus,
    pub error: Option<String>,
}

/// `p = 5/n` Erdős–Rényi graphs with evenly split colors and
/// `k_c = ⌊n / (2|C|)⌋`, solved by the accelerated algorithm.
pub fn run_scaling_suite(config: &ScalingConfig, lp: &LpEngine) -> Vec<ScalingRow> {
    let mut cells = Vec::new();
    for &n in &config.node_counts {
        for &c in &config.color_counts {
            for s in 0..config.seeds {
                cells.push((n, c, config.base_seed.wrapping_add(s as u64)));
            }
        }
    }
    par::map(&cells, |&(n, c, seed)| scaling_row(n, c, seed, config.lp_budget, lp))
}

fn scaling_row(n: usize, colors: usize, seed: u64, budget: Option<usize>, lp: &LpEngine) -> ScalingRow {
    let k_c = n / (2 * colors);
    let mut row = ScalingRow {
        schema_version: CSV_SCHEMA_VERSION,
        n,
        colors,
        seed,
        m: 0,
        k_c,
        accel_density: None,
        accel_lp_solves: 0,
        full_lp_solves: 0,
        runtime_ms: 0.0,
        status: RunStatus::Ok,
        error: None,
    };
    let start = Instant::now();
    let result = (|| -> Result<()> {
        let g = gen_er(&GenSpec::sparse_even(n, colors, seed))?;
        row.m = g.edge_count();
        let k = DemandVector::new(&g, vec![k_c; g.color_count()])?;
        row.full_lp_solves = pvector_count(&g, &k);
        let run = dalvks_accel_with(&g, &k, lp, budget)?;
        row.accel_density = Some(run.best.density().to_string());
        row.accel_lp_solves = run.lp_solves;
        Ok(())
    })();
    row.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    match result {
        Ok(()) => {}
        Err(Error::Solver(SolverError::ResourceExhausted(msg))) => {
            row.status = RunStatus::BudgetExceeded;
            row.error = Some(msg);
        }
        Err(e) => {
            row.status = RunStatus::Error;
            row.error = Some(e.to_string());
        }
    }
    row
}

const SCALING_HEADER: &[&str] = &[
    "schema_version",
    "n",
    "colors",
    "seed",
    "m",
    "k_c",
    "accel_density",
    "accel_lp_solves",
    "full_lp_solves",
    "runtime_ms",
    "status",
    "error",
];

pub fn write_scaling_csv<W: Write>(out: W, rows: &[ScalingRow]) -> Result<()> {
    write_csv(out, SCALING_HEADER, rows)
}

#[derive(Debug, Clone)]
pub struct PlantedConfig {
    pub seeds: usize,
    pub base_seed: u64,
    pub lp_size_limit: usize,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        Self {
            seeds: 10,
            base_seed: 0,
            lp_size_limit: DEFAULT_LP_SIZE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlantedRow {
    pub schema_version: u32,
    pub seed: u64,
    pub color_mode: String,
    pub n: usize,
    pub m: usize,
    pub colors: usize,
    pub dsp_density: String,
    pub dsp_alpha: String,
    pub dsp_size: usize,
    pub ddsp_alpha_target: String,
    pub ddsp_density: Option<String>,
    pub ddsp_alpha: Option<String>,
    pub ddsp_size: Option<usize>,
    /// DDSP density over the unconstrained density.
    pub price_of_diversity: Option<f64>,
    pub error: Option<String>,
}

/// Planted-cluster graphs: the unconstrained densest subgraph (Greedy++,
/// five rounds) against the diversity-capped solver with `α = 1/|C|`.
pub fn run_planted_suite(config: &PlantedConfig, lp: &LpEngine) -> Vec<PlantedRow> {
    let mut jobs = Vec::new();
    for mode in [ColorMode::PerCluster, ColorMode::UniformRandom(5)] {
        for s in 0..config.seeds {
            jobs.push((mode, config.base_seed.wrapping_add(s as u64)));
        }
    }
    par::map(&jobs, |&(mode, seed)| planted_row(mode, seed, config.lp_size_limit, lp))
}

fn mode_name(mode: ColorMode) -> String {
    match mode {
        ColorMode::EvenSplit(c) => format!("even_split_{c}"),
        ColorMode::PerCluster => "per_cluster".into(),
        ColorMode::UniformRandom(c) => format!("uniform_random_{c}"),
    }
}

/// One planted instance. Errors are reported in the row.
pub fn planted_row(mode: ColorMode, seed: u64, lp_size_limit: usize, lp: &LpEngine) -> PlantedRow {
    let g = match gen_planted(&GenSpec::planted_default(mode, seed)) {
        Ok(g) => g,
        Err(e) => unreachable!("default planted spec is valid: {e}"),
    };
    let dsp = greedy_plus_plus(&g, 5).expect("graph has nodes");
    let alpha = Fraction::new(1, g.color_count() as u64);
    let mut row = PlantedRow {
        schema_version: CSV_SCHEMA_VERSION,
        seed,
        color_mode: mode_name(mode),
        n: g.node_count(),
        m: g.edge_count(),
        colors: g.color_count(),
        dsp_density: dsp.density().to_string(),
        dsp_alpha: dsp.diversity().alpha().to_string(),
        dsp_size: dsp.size(),
        ddsp_alpha_target: alpha.to_string(),
        ddsp_density: None,
        ddsp_alpha: None,
        ddsp_size: None,
        price_of_diversity: None,
        error: None,
    };
    let solver = GammaSolver::auto(&g, lp_size_limit);
    let outcome = DdspParams::new(&g, alpha, solver).and_then(|p| ddsp_approx(&g, p, lp));
    match outcome {
        Ok(out) => {
            if let Some(s) = out.subset() {
                row.ddsp_density = Some(s.density().to_string());
                row.ddsp_alpha = Some(s.diversity().alpha().to_string());
                row.ddsp_size = Some(s.size());
                row.price_of_diversity = Some(ratio(s.density(), dsp.density()));
            } else {
                row.error = Some("infeasible".into());
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

const PLANTED_HEADER: &[&str] = &[
    "schema_version",
    "seed",
    "color_mode",
    "n",
    "m",
    "colors",
    "dsp_density",
    "dsp_alpha",
    "dsp_size",
    "ddsp_alpha_target",
    "ddsp_density",
    "ddsp_alpha",
    "ddsp_size",
    "price_of_diversity",
    "error",
];

pub fn write_planted_csv<W: Write>(out: W, rows: &[PlantedRow]) -> Result<()> {
    write_csv(out, PLANTED_HEADER, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn exact_ratio_bound() {
        let opt = Density::new(3, 2).unwrap();
        assert!(at_least(Density::new(1, 2).unwrap(), Fraction::new(1, 3), opt));
        assert!(!at_least(Density::new(1, 3).unwrap(), Fraction::new(1, 3), opt));
        assert!(at_least(Density::ZERO, Fraction::new(1, 3), Density::ZERO));
    }

    #[test]
    fn empty_ratio_suite_is_header_only() {
        let mut out = Vec::new();
        write_ratio_csv(&mut out, &[]).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("schema_version,kind,instance"));
    }

    #[test]
    fn k4b_ratios_are_one() {
        let g = k4b();
        let demand = DemandVector::new(&g, vec![2, 2]).unwrap();
        let inst = DemandInstance {
            id: "k4b".into(),
            graph: g,
            demand,
        };
        let rows = run_ratio_suite(&[inst], &LpEngine::exact());
        let r = &rows[0];
        assert_eq!((r.accel_ratio(), r.prop2_ratio(), r.lp_full_ratio()), (Some(1.0), Some(1.0), Some(1.0)));
        let mut out = Vec::new();
        write_ratio_csv(&mut out, &rows).unwrap();
        assert_eq!(String::from_utf8(out).unwrap().lines().count(), 4);
    }

    #[test]
    fn scaling_small_cells() {
        let config = ScalingConfig {
            node_counts: vec![18],
            color_counts: vec![2, 6],
            seeds: 10,
            base_seed: 0,
            lp_budget: None,
        };
        let rows = run_scaling_suite(&config, &LpEngine::exact());
        assert_eq!(rows.len(), 20);
        for r in &rows {
            assert_eq!(r.status, RunStatus::Ok, "{:?}", r.error);
            assert!(r.accel_lp_solves >= 1);
            assert!(r.accel_lp_solves <= r.full_lp_solves);
        }
        let two: Vec<f64> = rows.iter().filter(|r| r.colors == 2).map(|r| r.accel_lp_solves as f64).collect();
        let six_min = rows.iter().filter(|r| r.colors == 6).map(|r| r.accel_lp_solves).min().unwrap();
        assert!(six_min as f64 >= median(two).unwrap());
    }

    #[test]
    fn scaling_budget_is_recorded() {
        let config = ScalingConfig {
            node_counts: vec![18],
            color_counts: vec![6],
            seeds: 1,
            base_seed: 0,
            lp_budget: Some(10),
        };
        let rows = run_scaling_suite(&config, &LpEngine::exact());
        assert_eq!(rows[0].status, RunStatus::BudgetExceeded);
        let mut out = Vec::new();
        write_scaling_csv(&mut out, &rows).unwrap();
        assert!(String::from_utf8(out).unwrap().contains("budget_exceeded"));
    }

    #[test]
    fn ratio_instances_cycle_sizes() {
        let config = RatioSuiteConfig {
            instances: 6,
            min_nodes: 10,
            max_nodes: 12,
            ..RatioSuiteConfig::default()
        };
        let sizes: Vec<usize> = ratio_instances(&config).unwrap().iter().map(|i| i.graph.node_count()).collect();
        assert_eq!(sizes, vec![10, 11, 12, 10, 11, 12]);
    }
}
