//! Machine-readable record of one solver run.

use serde::{Deserialize, Serialize};

use crate::ddsp::GammaSolver;
use crate::dense::{dsp_exact, greedy_plus_plus};
use crate::error::Result;
use crate::graph::{ColoredGraph, Density, Subset};
use crate::lp::LpEngine;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    Dsp,
    Ddsp,
    Dalks,
    Dalvks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// The primary algorithm produced a feasible set.
    Solved,
    /// A fallback path produced the feasible set.
    Fallback,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityBound {
    DspExact,
    GreedyPlusPlus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorCount {
    pub color: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub colors: usize,
    pub alpha: String,
    pub color_sizes: Vec<ColorCount>,
}

impl GraphStats {
    pub fn of(g: &ColoredGraph) -> Self {
        Self {
            n: g.node_count(),
            m: g.edge_count(),
            colors: g.color_count(),
            alpha: if g.node_count() == 0 {
                "0".into()
            } else {
                g.diversity().alpha().to_string()
            },
            color_sizes: color_counts(g, &g.color_class_sizes()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub alpha: Option<String>,
    pub k: Option<usize>,
    pub demand: Option<Vec<ColorCount>>,
    pub gamma_solver: Option<GammaSolver>,
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultStats {
    pub members: Vec<usize>,
    pub size: usize,
    pub edge_count: usize,
    pub density: String,
    pub density_float: f64,
    pub normalized_density: f64,
    pub normalized_by: DensityBound,
    pub reference_density: String,
    pub alpha_of_result: String,
    pub color_counts: Vec<ColorCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub problem: Problem,
    pub algorithm: String,
    pub graph: GraphStats,
    pub params: Params,
    pub result: Option<ResultStats>,
    pub runtime_ms: f64,
    pub lp_solve_count: usize,
    pub status: Status,
}

fn color_counts(g: &ColoredGraph, counts: &[usize]) -> Vec<ColorCount> {
    counts
        .iter()
        .enumerate()
        .map(|(c, &count)| ColorCount {
            color: g.color_label(c).to_string(),
            count,
        })
        .collect()
}

/// Demand vector as labeled counts.
pub fn labeled_counts(g: &ColoredGraph, counts: &[usize]) -> Vec<ColorCount> {
    color_counts(g, counts)
}

/// Reference density for normalization: the exact optimum when the graph is
/// within `lp_size_limit` (`n + m`), otherwise five rounds of Greedy++.
pub fn reference_density(g: &ColoredGraph, lp: &LpEngine, lp_size_limit: usize) -> Result<(Density, DensityBound)> {
    if g.node_count() + g.edge_count() <= lp_size_limit {
        Ok((dsp_exact(g, lp)?.density(), DensityBound::DspExact))
    } else {
        Ok((greedy_plus_plus(g, 5)?.density(), DensityBound::GreedyPlusPlus))
    }
}

/// `d / reference`, with 1 when both are zero.
pub fn normalized(d: Density, reference: Density) -> f64 {
    if reference.edges == 0 {
        return 1.0;
    }
    (d.edges as f64 * reference.nodes as f64) / (d.nodes as f64 * reference.edges as f64)
}

impl ResultStats {
    pub fn new(g: &ColoredGraph, s: &Subset, reference: (Density, DensityBound)) -> Self {
        let d = s.density();
        Self {
            members: s.members().to_vec(),
            size: s.size(),
            edge_count: s.edge_count(),
            density: d.to_string(),
            density_float: d.to_f64(),
            normalized_density: normalized(d, reference.0),
            normalized_by: reference.1,
            reference_density: reference.0.to_string(),
            alpha_of_result: s.diversity().alpha().to_string(),
            color_counts: color_counts(g, s.color_counts()),
        }
    }
}

impl SolveReport {
    pub fn new(problem: Problem, algorithm: impl Into<String>, g: &ColoredGraph, params: Params) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            problem,
            algorithm: algorithm.into(),
            graph: GraphStats::of(g),
            params,
            result: None,
            runtime_ms: 0.0,
            lp_solve_count: 0,
            status: Status::Infeasible,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn sample() -> SolveReport {
        let g = k5p();
        let lp = LpEngine::exact();
        let s = Subset::new(&g, vec![0, 5]).unwrap();
        let mut r = SolveReport::new(
            Problem::Ddsp,
            "ddsp_approx",
            &g,
            Params {
                alpha: Some("1/2".into()),
                gamma_solver: Some(GammaSolver::DalksLp),
                ..Params::default()
            },
        );
        r.result = Some(ResultStats::new(&g, &s, reference_density(&g, &lp, 400).unwrap()));
        r.status = Status::Fallback;
        r.runtime_ms = 1.0 / 3.0;
        r
    }

    #[test]
    fn round_trip() {
        let r = sample();
        assert_eq!(SolveReport::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn stable_key_order() {
        let text = sample().to_json();
        let keys = ["schema_version", "problem", "algorithm", "graph", "params", "result", "runtime_ms", "lp_solve_count", "status"];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn stats() {
        let r = sample();
        assert_eq!(r.graph.alpha, "5/6");
        let res = r.result.unwrap();
        assert_eq!((res.density.as_str(), res.alpha_of_result.as_str()), ("1/2", "1/2"));
        assert_eq!(res.reference_density, "2");
        assert_eq!(res.normalized_density, 0.25);
        assert_eq!(res.normalized_by, DensityBound::DspExact);
    }

    #[test]
    fn normalization_of_edgeless_graphs() {
        assert_eq!(normalized(Density::ZERO, Density::ZERO), 1.0);
    }
}
