use ddsg::graph::ColoredGraph;
use proptest::prelude::*;

/// Graphs with `1..=max_n` nodes, each pair an edge with probability 0.45
/// and colors `c0..` drawn uniformly from up to `max_colors`.
pub fn graph(max_n: usize, max_colors: usize) -> impl Strategy<Value = ColoredGraph> {
    (1..=max_n, 1..=max_colors).prop_flat_map(|(n, c)| {
        let pairs = n * (n - 1) / 2;
        (prop::collection::vec(prop::bool::weighted(0.45), pairs), prop::collection::vec(0..c, n)).prop_map(
            move |(keep, colors)| {
                let mut edges = Vec::new();
                let mut i = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if keep[i] {
                            edges.push((u, v));
                        }
                        i += 1;
                    }
                }
                let labels: Vec<String> = colors.iter().map(|c| format!("c{c}")).collect();
                ColoredGraph::new(n, &edges, &labels).unwrap()
            },
        )
    })
}
