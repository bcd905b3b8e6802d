//! Densest subgraph under a diversity cap: no color may exceed an `alpha`
//! fraction of the chosen set.

use serde::{Deserialize, Serialize};

use crate::dense::{dalks_lp, dalks_peel};
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, Fraction, Subset};
use crate::grow::Grower;
use crate::lp::LpEngine;

/// Largest `n + m` for which the LP-based at-least-k solver is the default.
/// Above it the peeling solver is used.
pub const DEFAULT_LP_SIZE_LIMIT: usize = 400;

/// Which densest at-least-k approximation seeds Diversify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaSolver {
    /// LP rounding, γ = 1/2.
    DalksLp,
    /// Peeling, γ = 1/3.
    DalksPeel,
}

impl GammaSolver {
    pub fn gamma(self) -> Fraction {
        match self {
            GammaSolver::DalksLp => Fraction::new(1, 2),
            GammaSolver::DalksPeel => Fraction::new(1, 3),
        }
    }

    /// LP when the graph is within `lp_size_limit` (counting `n + m`).
    pub fn auto(g: &ColoredGraph, lp_size_limit: usize) -> Self {
        if g.node_count() + g.edge_count() <= lp_size_limit {
            GammaSolver::DalksLp
        } else {
            GammaSolver::DalksPeel
        }
    }

    pub fn solve(self, g: &ColoredGraph, k: usize, lp: &LpEngine) -> Result<Subset> {
        match self {
            GammaSolver::DalksLp => dalks_lp(g, k, lp),
            GammaSolver::DalksPeel => dalks_peel(g, k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DdspParams {
    pub alpha: Fraction,
    pub gamma_solver: GammaSolver,
}

impl DdspParams {
    /// Checks `1/|C| <= alpha <= 1`.
    pub fn new(g: &ColoredGraph, alpha: Fraction, gamma_solver: GammaSolver) -> Result<Self> {
        check_alpha(g, alpha)?;
        Ok(Self { alpha, gamma_solver })
    }
}

fn check_alpha(g: &ColoredGraph, alpha: Fraction) -> Result<()> {
    let colors = g.color_count().max(1) as u64;
    if *alpha.numer() == 0 || alpha > Fraction::from_integer(1) || alpha * colors < Fraction::from_integer(1) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} must lie in [1/{colors}, 1]"
        )));
    }
    Ok(())
}

/// ⌈1/α⌉ on the exact fraction.
pub fn ceil_inverse(alpha: Fraction) -> usize {
    let (p, q) = (*alpha.numer(), *alpha.denom());
    q.div_ceil(p) as usize
}

/// Adds nodes of the least represented color (ties by color id; colors with
/// no nodes left outside are skipped) until `α(S) <= alpha`. Within the color
/// the node with most edges into the set is taken, then the smallest id.
pub fn diversify(g: &ColoredGraph, s: &Subset, alpha: Fraction) -> Result<Subset> {
    if s.diversity().satisfies(alpha) {
        return Ok(s.clone());
    }
    let mut grower = Grower::new(g, s);
    let mut max_count = s.diversity().c_max;
    loop {
        let color = (0..g.color_count())
            .filter(|&c| grower.has_outside(c))
            .min_by_key(|&c| (grower.color_counts()[c], c));
        let Some(color) = color else {
            return Err(Error::InfeasibleExtension { reached: grower.finish() });
        };
        let v = grower.best_in_color(color).expect("color has outside nodes");
        grower.add(v);
        max_count = max_count.max(grower.color_counts()[color]);
        let size = grower.size() as u64;
        if Fraction::new(max_count as u64, size) <= alpha {
            return Ok(grower.finish());
        }
    }
}

/// Result of the diversity-capped solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DdspOutcome {
    /// Densest at-least-k seed followed by Diversify.
    Solved(Subset),
    /// Diversify could not reach the cap; peeling found a feasible set.
    Fallback(Subset),
    /// No feasible set was found.
    Infeasible,
}

impl DdspOutcome {
    pub fn subset(&self) -> Option<&Subset> {
        match self {
            DdspOutcome::Solved(s) | DdspOutcome::Fallback(s) => Some(s),
            DdspOutcome::Infeasible => None,
        }
    }

    pub fn into_subset(self) -> Option<Subset> {
        match self {
            DdspOutcome::Solved(s) | DdspOutcome::Fallback(s) => Some(s),
            DdspOutcome::Infeasible => None,
        }
    }
}

/// Densest at-least-⌈1/α⌉ subgraph, then Diversify. When the whole graph is
/// not diverse enough and Diversify runs dry, its output is peeled by
/// [`ddsp_fallback_peel`].
pub fn ddsp_approx(g: &ColoredGraph, params: DdspParams, lp: &LpEngine) -> Result<DdspOutcome> {
    check_alpha(g, params.alpha)?;
    let k = ceil_inverse(params.alpha).min(g.node_count());
    let seed = params.gamma_solver.solve(g, k, lp)?;
    match diversify(g, &seed, params.alpha) {
        Ok(s) => Ok(DdspOutcome::Solved(s)),
        Err(Error::InfeasibleExtension { reached }) => Ok(match ddsp_fallback_peel(g, &reached, params.alpha)? {
            Some(s) => DdspOutcome::Fallback(s),
            None => DdspOutcome::Infeasible,
        }),
        Err(e) => Err(e),
    }
}

/// Removes the lowest-degree member (within `s`, ties by id) of the largest
/// color class (ties by color id) until `α(s) <= alpha`. Returns `None` if
/// the set empties first.
pub fn ddsp_fallback_peel(g: &ColoredGraph, s: &Subset, alpha: Fraction) -> Result<Option<Subset>> {
    if s.diversity().satisfies(alpha) {
        return Err(Error::Precondition(format!(
            "fallback peeling needs a set with α(S) > {alpha}"
        )));
    }
    let n = g.node_count();
    let mut inside = s.mask(n);
    let mut deg = vec![0usize; n];
    for &v in s.members() {
        deg[v] = g.neighbors(v).iter().filter(|&&w| inside[w]).count();
    }
    let mut counts = s.color_counts().to_vec();
    let mut size = s.size();
    while size > 0 {
        let c_max = counts.iter().copied().max().unwrap_or(0);
        if Fraction::new(c_max as u64, size as u64) <= alpha {
            let members: Vec<usize> = (0..n).filter(|&v| inside[v]).collect();
            return Ok(Some(Subset::from_mask(g, &inside, members)));
        }
        let color = (0..counts.len()).find(|&c| counts[c] == c_max).expect("nonempty set");
        let v = g
            .color_class(color)
            .iter()
            .copied()
            .filter(|&v| inside[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("dominant color has members");
        inside[v] = false;
        counts[color] -= 1;
        size -= 1;
        for &w in g.neighbors(v) {
            if inside[w] {
                deg[w] -= 1;
            }
        }
    }
    Ok(None)
}

/// Instance families that embed into the diversity-capped problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// Densest at-least-k: every node its own color, α = 1/k.
    AtLeastK(usize),
    /// Densest at-most-k: one color for the graph plus `k` isolated nodes of
    /// a second color, α = 1/2.
    AtMostK(usize),
}

pub fn reduction_instance(kind: Reduction, g: &ColoredGraph) -> Result<(ColoredGraph, Fraction)> {
    let n = g.node_count();
    match kind {
        Reduction::AtLeastK(k) => {
            if k == 0 || k > n {
                return Err(Error::InvalidParameter(format!("k = {k} must lie in 1..={n}")));
            }
            let labels: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
            Ok((ColoredGraph::new(n, g.edges(), &labels)?, Fraction::new(1, k as u64)))
        }
        Reduction::AtMostK(k) => {
            if k == 0 {
                return Err(Error::InvalidParameter("k must be at least 1".into()));
            }
            let mut labels = vec!["graph"; n];
            labels.extend(std::iter::repeat_n("dummy", k));
            Ok((ColoredGraph::new(n + k, g.edges(), &labels)?, Fraction::new(1, 2)))
        }
    }
}
