//! Unconstrained densest subgraph and densest at-least-k subgraph solvers.

use std::collections::BTreeSet;


use crate::error::{Error, Result};
use crate::graph::{keep_better, ColoredGraph, Density, Subset};
use crate::grow::pad_to_size;
use crate::lp::{int, rat, LpEngine, SolverError};
use crate::relax::{level_sets, mass_lp, node_values};

/// Min-degree peeling with smallest-id tie-break, over degree buckets.
struct Peeler<'g> {
    g: &'g ColoredGraph,
    alive: Vec<bool>,
    deg: Vec<usize>,
    buckets: Vec<BTreeSet<usize>>,
    min: usize,
    size: usize,
    edges: usize,
}

impl<'g> Peeler<'g> {
    fn new(g: &'g ColoredGraph) -> Self {
        let n = g.node_count();
        let deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        let max = deg.iter().copied().max().unwrap_or(0);
        let mut buckets = vec![BTreeSet::new(); max + 1];
        for v in 0..n {
            buckets[deg[v]].insert(v);
        }
        Self {
            g,
            alive: vec![true; n],
            deg,
            buckets,
            min: 0,
            size: n,
            edges: g.edge_count(),
        }
    }

    fn edges(&self) -> usize {
        self.edges
    }

    /// Current minimum-degree node, smallest id among ties.
    fn peek_min(&mut self) -> Option<usize> {
        if self.size == 0 {
            return None;
        }
        while self.buckets[self.min].is_empty() {
            self.min += 1;
        }
        self.buckets[self.min].first().copied()
    }

    fn remove(&mut self, v: usize) {
        debug_assert!(self.alive[v]);
        self.buckets[self.deg[v]].remove(&v);
        self.alive[v] = false;
        self.size -= 1;
        self.edges -= self.deg[v];
        for &w in self.g.neighbors(v) {
            if self.alive[w] {
                let d = self.deg[w];
                self.buckets[d].remove(&w);
                self.buckets[d - 1].insert(w);
                self.deg[w] = d - 1;
                self.min = self.min.min(d - 1);
            }
        }
    }
}

/// Full min-degree peeling run.
#[derive(Debug, Clone)]
pub struct PeelTrace {
    pub removal_order: Vec<usize>,
    /// `suffix_edges[i]` is the edge count after removing the first `i`
    /// nodes of `removal_order`.
    pub suffix_edges: Vec<usize>,
    n: usize,
}

impl PeelTrace {
    pub fn new(g: &ColoredGraph) -> Self {
        let mut peeler = Peeler::new(g);
        let mut removal_order = Vec::with_capacity(g.node_count());
        let mut suffix_edges = vec![peeler.edges()];
        while let Some(v) = peeler.peek_min() {
            peeler.remove(v);
            removal_order.push(v);
            suffix_edges.push(peeler.edges());
        }
        Self {
            removal_order,
            suffix_edges,
            n: g.node_count(),
        }
    }

    pub fn suffix_density(&self, removed: usize) -> Density {
        Density {
            edges: self.suffix_edges[removed] as u64,
            nodes: (self.n - removed) as u64,
        }
    }

    /// Number of removals giving the densest suffix of size at least `k`;
    /// the earliest (largest) suffix wins ties.
    pub fn best_prefix(&self, k: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for removed in 0..self.n {
            if self.n - removed < k.max(1) {
                break;
            }
            if best.is_none_or(|b| self.suffix_density(removed) > self.suffix_density(b)) {
                best = Some(removed);
            }
        }
        best
    }

    pub fn suffix(&self, g: &ColoredGraph, removed: usize) -> Subset {
        let mut alive = vec![true; self.n];
        for &v in &self.removal_order[..removed] {
            alive[v] = false;
        }
        let members = (0..self.n).filter(|&v| alive[v]).collect();
        Subset::from_mask(g, &alive, members)
    }

    pub fn best(&self, g: &ColoredGraph) -> Option<Subset> {
        self.best_prefix(1).map(|i| self.suffix(g, i))
    }
}

fn require_nodes(g: &ColoredGraph) -> Result<()> {
    if g.node_count() == 0 {
        return Err(Error::InvalidGraph("graph has no nodes".into()));
    }
    Ok(())
}

fn check_k(g: &ColoredGraph, k: usize) -> Result<()> {
    require_nodes(g)?;
    if k == 0 || k > g.node_count() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} must lie in 1..={}",
            g.node_count()
        )));
    }
    Ok(())
}

/// Greedy peeling for the densest subgraph: ½-approximate.
pub fn dsp_peel(g: &ColoredGraph) -> Result<Subset> {
    require_nodes(g)?;
    Ok(PeelTrace::new(g).best(g).expect("graph has nodes"))
}

/// Load-augmented repeated peeling. Each pass removes the node minimizing
/// load plus current degree and adds its degree at removal to its load; the
/// densest suffix over all passes is returned.
pub fn greedy_plus_plus(g: &ColoredGraph, iterations: usize) -> Result<Subset> {
    require_nodes(g)?;
    if iterations == 0 {
        return Err(Error::InvalidParameter("iterations must be at least 1".into()));
    }
    let n = g.node_count();
    let mut load = vec![0u64; n];
    let mut best: Option<(Density, usize, Vec<usize>)> = None;

    for _ in 0..iterations {
        let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        let mut alive = vec![true; n];
        let mut queue: BTreeSet<(u64, usize)> = (0..n).map(|v| (load[v] + deg[v] as u64, v)).collect();
        let mut edges = g.edge_count();
        let mut order = Vec::with_capacity(n);
        let mut pass_best = (Density { edges: edges as u64, nodes: n as u64 }, 0usize);

        while let Some((_, v)) = queue.pop_first() {
            alive[v] = false;
            load[v] += deg[v] as u64;
            edges -= deg[v];
            order.push(v);
            for &w in g.neighbors(v) {
                if alive[w] {
                    queue.remove(&(load[w] + deg[w] as u64, w));
                    deg[w] -= 1;
                    queue.insert((load[w] + deg[w] as u64, w));
                }
            }
            let remaining = n - order.len();
            if remaining > 0 {
                let d = Density { edges: edges as u64, nodes: remaining as u64 };
                if d > pass_best.0 {
                    pass_best = (d, order.len());
                }
            }
        }
        if best.as_ref().is_none_or(|(d, _, _)| pass_best.0 > *d) {
            best = Some((pass_best.0, pass_best.1, order));
        }
    }

    let (_, removed, order) = best.expect("at least one pass");
    let mut alive = vec![true; n];
    for &v in &order[..removed] {
        alive[v] = false;
    }
    let members = (0..n).filter(|&v| alive[v]).collect();
    Ok(Subset::from_mask(g, &alive, members))
}

/// Exact densest subgraph: solve the unit-mass relaxation and sweep its
/// level sets. Among equally dense level sets the lexicographically
/// smallest is returned.
pub fn dsp_exact(g: &ColoredGraph, lp: &LpEngine) -> Result<Subset> {
    require_nodes(g)?;
    let all: Vec<usize> = (0..g.node_count()).collect();
    let model = mass_lp(g, &[(&all, int(1))], None);
    let solution = lp.solve_lp(&model)?;
    if !solution.is_optimal() {
        return Err(SolverError::Numeric(format!("densest subgraph LP is {:?}", solution.status)).into());
    }
    let y = node_values(g, &solution);
    let mut best = None;
    for level in level_sets(g, &y, lp.feasibility_tol()) {
        keep_better(&mut best, level.members);
    }
    Ok(best.expect("level sets include V"))
}

/// Densest suffix of size at least `k` along min-degree peeling:
/// ⅓-approximate for the densest at-least-k subgraph.
pub fn dalks_peel(g: &ColoredGraph, k: usize) -> Result<Subset> {
    check_k(g, k)?;
    let trace = PeelTrace::new(g);
    let removed = trace.best_prefix(k).expect("k <= n");
    Ok(trace.suffix(g, removed))
}

/// LP rounding for the densest at-least-k subgraph: ½-approximate. Level
/// sets smaller than `k` are padded greedily by edges into the set.
pub fn dalks_lp(g: &ColoredGraph, k: usize, lp: &LpEngine) -> Result<Subset> {
    check_k(g, k)?;
    let all: Vec<usize> = (0..g.node_count()).collect();
    let model = mass_lp(g, &[(&all, int(1))], Some(rat(1, k as i64)));
    let solution = lp.solve_lp(&model)?;
    if !solution.is_optimal() {
        return Err(SolverError::Numeric(format!("at-least-k LP is {:?}", solution.status)).into());
    }
    let y = node_values(g, &solution);
    let mut best = None;
    for level in level_sets(g, &y, lp.feasibility_tol()) {
        keep_better(&mut best, pad_to_size(g, &level.members, k));
    }
    Ok(best.expect("level sets include V"))
}
