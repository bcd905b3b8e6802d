//! Greedy set growth: repeatedly add the outside node with the most edges
//! into the current set, optionally restricted to one color.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use crate::graph::{ColoredGraph, Subset};

pub(crate) struct Grower<'g> {
    g: &'g ColoredGraph,
    inside: Vec<bool>,
    deg_in: Vec<usize>,
    /// Outside nodes per color keyed by (most edges into the set, smallest id).
    outside: Vec<BTreeSet<(Reverse<usize>, usize)>>,
    color_counts: Vec<usize>,
    size: usize,
}

impl<'g> Grower<'g> {
    pub(crate) fn new(g: &'g ColoredGraph, start: &Subset) -> Self {
        let n = g.node_count();
        let inside = start.mask(n);
        let mut deg_in = vec![0; n];
        for &v in start.members() {
            for &w in g.neighbors(v) {
                deg_in[w] += 1;
            }
        }
        let mut outside = vec![BTreeSet::new(); g.color_count()];
        for v in (0..n).filter(|&v| !inside[v]) {
            outside[g.color_of(v)].insert((Reverse(deg_in[v]), v));
        }
        Self {
            g,
            inside,
            deg_in,
            outside,
            color_counts: start.color_counts().to_vec(),
            size: start.size(),
        }
    }

    pub(crate) fn color_counts(&self) -> &[usize] {
        &self.color_counts
    }

    pub(crate) fn size(&self) -> usize {
        self.size
    }

    pub(crate) fn has_outside(&self, color: usize) -> bool {
        !self.outside[color].is_empty()
    }

    pub(crate) fn best_in_color(&self, color: usize) -> Option<usize> {
        self.outside[color].first().map(|&(_, v)| v)
    }

    /// Best outside node over all colors.
    pub(crate) fn best_any(&self) -> Option<usize> {
        self.outside
            .iter()
            .filter_map(|set| set.first().copied())
            .min()
            .map(|(_, v)| v)
    }

    pub(crate) fn add(&mut self, v: usize) {
        debug_assert!(!self.inside[v]);
        let g = self.g;
        self.outside[g.color_of(v)].remove(&(Reverse(self.deg_in[v]), v));
        self.inside[v] = true;
        self.color_counts[g.color_of(v)] += 1;
        self.size += 1;
        for &w in g.neighbors(v) {
            if !self.inside[w] {
                let set = &mut self.outside[g.color_of(w)];
                set.remove(&(Reverse(self.deg_in[w]), w));
                set.insert((Reverse(self.deg_in[w] + 1), w));
            }
            self.deg_in[w] += 1;
        }
    }

    pub(crate) fn finish(self) -> Subset {
        let members: Vec<usize> = (0..self.g.node_count()).filter(|&v| self.inside[v]).collect();
        Subset::from_mask(self.g, &self.inside, members)
    }
}

/// Adds nodes with the most edges into the set (ties by smallest id) until
/// the set has at least `k` members.
pub(crate) fn pad_to_size(g: &ColoredGraph, s: &Subset, k: usize) -> Subset {
    if s.size() >= k {
        return s.clone();
    }
    let mut grower = Grower::new(g, s);
    while grower.size() < k {
        match grower.best_any() {
            Some(v) => grower.add(v),
            None => break,
        }
    }
    grower.finish()
}
