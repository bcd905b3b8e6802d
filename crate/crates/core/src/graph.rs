//! Colored simple undirected graphs, node subsets, and the exact density and
//! diversity metrics every solver in this crate is measured by.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact non-negative fraction used for diversity thresholds.
pub type Fraction = Ratio<u64>;

/// Immutable simple undirected graph with one color per node.
///
/// Node ids are `0..n`. Edges are stored once as `(u, v)` with `u < v`,
/// sorted. Color ids are dense, assigned in first-appearance order of the
/// labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    color_of: Vec<usize>,
    color_labels: Vec<String>,
    color_classes: Vec<Vec<usize>>,
}

impl ColoredGraph {
    /// Builds a graph from an edge list and one color label per node.
    ///
    /// Rejects self-loops, out-of-range endpoints and duplicate edges
    /// (`{u, v}` and `{v, u}` count as the same edge).
    pub fn new<S: AsRef<str>>(n: usize, edges: &[(usize, usize)], labels: &[S]) -> Result<Self> {
        if labels.len() != n {
            return Err(Error::InvalidGraph(format!(
                "{} color labels given for {} nodes",
                labels.len(),
                n
            )));
        }
        let mut canonical = Vec::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge #{i} ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("edge #{i} ({u}, {v}) is a self-loop")));
            }
            canonical.push((u.min(v), u.max(v)));
        }
        let mut sorted = canonical.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            let (u, v) = w[0];
            let first = canonical.iter().position(|&e| e == (u, v)).unwrap_or(0);
            let second = canonical
                .iter()
                .enumerate()
                .skip(first + 1)
                .find(|(_, &e)| e == (u, v))
                .map(|(i, _)| i)
                .unwrap_or(first);
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({u}, {v}) at #{first} and #{second}"
            )));
        }

        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &sorted {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let mut ids: HashMap<&str, usize> = HashMap::new();
        let mut color_labels = Vec::new();
        let mut color_of = Vec::with_capacity(n);
        let mut color_classes: Vec<Vec<usize>> = Vec::new();
        for (node, label) in labels.iter().enumerate() {
            let label = label.as_ref();
            let id = *ids.entry(label).or_insert_with(|| {
                color_labels.push(label.to_string());
                color_classes.push(Vec::new());
                color_labels.len() - 1
            });
            color_of.push(id);
            color_classes[id].push(node);
        }

        Ok(Self {
            edges: sorted,
            adjacency,
            color_of,
            color_labels,
            color_classes,
        })
    }

    pub fn node_count(&self) -> usize {
        self.color_of.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn color_count(&self) -> usize {
        self.color_labels.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn color_of(&self, v: usize) -> usize {
        self.color_of[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.color_of
    }

    pub fn color_label(&self, c: usize) -> &str {
        &self.color_labels[c]
    }

    pub fn color_labels(&self) -> &[String] {
        &self.color_labels
    }

    pub fn color_id(&self, label: &str) -> Option<usize> {
        self.color_labels.iter().position(|l| l == label)
    }

    /// Nodes carrying color `c`, ascending.
    pub fn color_class(&self, c: usize) -> &[usize] {
        &self.color_classes[c]
    }

    pub fn color_class_sizes(&self) -> Vec<usize> {
        self.color_classes.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// The whole node set as a subset.
    pub fn full_subset(&self) -> Subset {
        Subset::new(self, (0..self.node_count()).collect()).expect("graph has nodes")
    }

    /// Diversity of the whole node set, α(V). Panics on the empty graph.
    pub fn diversity(&self) -> DiversityStats {
        self.full_subset().diversity()
    }
}

/// Exact ratio `edges / nodes`. Ordered by cross-multiplication, so `1/2`
/// and `2/4` compare equal.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Density {
    pub edges: u64,
    pub nodes: u64,
}

impl Density {
    pub fn new(edges: u64, nodes: u64) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::EmptySubset);
        }
        Ok(Self { edges, nodes })
    }

    pub const ZERO: Density = Density { edges: 0, nodes: 1 };

    pub fn to_f64(self) -> f64 {
        self.edges as f64 / self.nodes as f64
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.edges), BigInt::from(self.nodes))
    }

    pub fn reduced(self) -> Ratio<u64> {
        Ratio::new(self.edges, self.nodes)
    }

    /// Compares against an arbitrary exact rational.
    pub fn cmp_rational(self, other: &BigRational) -> Ordering {
        self.to_rational().cmp(other)
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Density {}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.edges as u128 * other.nodes as u128;
        let rhs = other.edges as u128 * self.nodes as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if *r.denom() == 1 {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())
        }
    }
}

/// Largest monochromatic group of a subset and its share of the subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiversityStats {
    pub c_max: usize,
    pub size: usize,
}

impl DiversityStats {
    /// α(S) = c_max(S) / |S| as an exact fraction.
    pub fn alpha(&self) -> Fraction {
        Fraction::new(self.c_max as u64, self.size as u64)
    }

    /// Whether α(S) ≤ `alpha`, decided by cross-multiplication.
    pub fn satisfies(&self, alpha: Fraction) -> bool {
        self.c_max as u128 * *alpha.denom() as u128 <= *alpha.numer() as u128 * self.size as u128
    }
}

/// A nonempty node set with cached size, induced edge count and per-color
/// counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subset {
    members: Vec<usize>,
    edge_count: usize,
    color_counts: Vec<usize>,
}

impl Subset {
    /// Builds a subset from arbitrary node ids (duplicates are merged).
    pub fn new(g: &ColoredGraph, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::EmptySubset);
        }
        if let Some(&bad) = members.iter().find(|&&v| v >= g.node_count()) {
            return Err(Error::InvalidParameter(format!(
                "node {bad} is not in the graph (n = {})",
                g.node_count()
            )));
        }
        let mut inside = vec![false; g.node_count()];
        for &v in &members {
            inside[v] = true;
        }
        Ok(Self::from_mask(g, &inside, members))
    }

    /// Builds a subset from a membership mask; `members` must list exactly
    /// the set positions, ascending.
    pub(crate) fn from_mask(g: &ColoredGraph, inside: &[bool], members: Vec<usize>) -> Self {
        debug_assert!(!members.is_empty());
        let mut color_counts = vec![0; g.color_count()];
        let mut twice_edges = 0;
        for &v in &members {
            color_counts[g.color_of(v)] += 1;
            twice_edges += g.neighbors(v).iter().filter(|&&w| inside[w]).count();
        }
        Self {
            members,
            edge_count: twice_edges / 2,
            color_counts,
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn color_counts(&self) -> &[usize] {
        &self.color_counts
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn density(&self) -> Density {
        Density {
            edges: self.edge_count as u64,
            nodes: self.members.len() as u64,
        }
    }

    pub fn diversity(&self) -> DiversityStats {
        DiversityStats {
            c_max: self.color_counts.iter().copied().max().unwrap_or(0),
            size: self.members.len(),
        }
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut inside = vec![false; n];
        for &v in &self.members {
            inside[v] = true;
        }
        inside
    }

    /// Denser first; among equal densities the lexicographically smaller
    /// member list wins.
    pub fn is_better_than(&self, other: &Subset) -> bool {
        match self.density().cmp(&other.density()) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => self.members < other.members,
        }
    }
}

/// Keeps the better of `best` and `candidate` under [`Subset::is_better_than`].
pub(crate) fn keep_better(best: &mut Option<Subset>, candidate: Subset) {
    match best {
        Some(b) if !candidate.is_better_than(b) => {}
        _ => *best = Some(candidate),
    }
}

/// `|E(S)| / |S|` for a nonempty subset.
pub fn density(s: &Subset) -> Density {
    s.density()
}

/// c_max(S) and α(S) for a nonempty subset.
pub fn diversity_stats(s: &Subset) -> DiversityStats {
    s.diversity()
}

/// Small named graphs used throughout the tests and docs.
pub mod fixtures {
    use super::ColoredGraph;

    /// Monochromatic triangle.
    pub fn t3() -> ColoredGraph {
        ColoredGraph::new(3, &[(0, 1), (0, 2), (1, 2)], &["a", "a", "a"]).unwrap()
    }

    /// K4 colored a, a, b, b.
    pub fn k4b() -> ColoredGraph {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        ColoredGraph::new(4, &edges, &["a", "a", "b", "b"]).unwrap()
    }

    /// Two disjoint triangles, {0,1,2} red and {3,4,5} blue.
    pub fn two_triangles() -> ColoredGraph {
        let edges = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)];
        ColoredGraph::new(6, &edges, &["r", "r", "r", "b", "b", "b"]).unwrap()
    }

    /// Red K5 on {0..4} plus blue pendant node 5 attached to node 0.
    pub fn k5p() -> ColoredGraph {
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push((u, v));
            }
        }
        edges.push((0, 5));
        ColoredGraph::new(6, &edges, &["r", "r", "r", "r", "r", "b"]).unwrap()
    }

    /// Path 0-1-2-3 colored a, b, a, b.
    pub fn p4() -> ColoredGraph {
        ColoredGraph::new(4, &[(0, 1), (1, 2), (2, 3)], &["a", "b", "a", "b"]).unwrap()
    }
}
