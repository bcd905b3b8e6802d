//! Seeded random colored graphs: Erdős–Rényi and planted clusters.
//!
//! Pair `(u, v)` with `u < v` has a fixed index in row-major order and its
//! coin is read from that position of the seed's ChaCha8 stream, so a pair's
//! fate does not depend on which other pairs were drawn. Random colors come
//! from a separate stream of the same seed.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ColoredGraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    ErdosRenyi {
        n: usize,
        p: f64,
    },
    PlantedClusters {
        cluster_sizes: Vec<usize>,
        p_intra: Vec<f64>,
        p_inter: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorMode {
    /// Node `i` gets color `⌊i·c/n⌋`.
    EvenSplit(usize),
    /// One color per planted cluster.
    PerCluster,
    /// Independent uniform colors.
    UniformRandom(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GraphKind,
    pub colors: ColorMode,
    pub seed: u64,
}

impl GenSpec {
    pub fn erdos_renyi(n: usize, p: f64, colors: ColorMode, seed: u64) -> Self {
        Self {
            kind: GraphKind::ErdosRenyi { n, p },
            colors,
            seed,
        }
    }

    /// `n` nodes, `p = 5/n`, colors split evenly.
    pub fn sparse_even(n: usize, colors: usize, seed: u64) -> Self {
        Self::erdos_renyi(n, 5.0 / n as f64, ColorMode::EvenSplit(colors), seed)
    }

    /// Five clusters of 40; cluster 0 has intra probability 0.8, the others
    /// 0.2; 0.02 between clusters.
    pub fn planted_default(colors: ColorMode, seed: u64) -> Self {
        Self {
            kind: GraphKind::PlantedClusters {
                cluster_sizes: vec![40; 5],
                p_intra: vec![0.8, 0.2, 0.2, 0.2, 0.2],
                p_inter: 0.02,
            },
            colors,
            seed,
        }
    }

    pub fn node_count(&self) -> usize {
        match &self.kind {
            GraphKind::ErdosRenyi { n, .. } => *n,
            GraphKind::PlantedClusters { cluster_sizes, .. } => cluster_sizes.iter().sum(),
        }
    }
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("{name} = {p} is not a probability")));
    }
    Ok(())
}

struct PairCoins {
    rng: ChaCha8Rng,
}

impl PairCoins {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in [0, 1) drawn at the pair's own stream position.
    fn uniform(&mut self, pair_index: u64) -> f64 {
        self.rng.set_word_pos(2 * pair_index as u128);
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

fn draw_edges(n: usize, seed: u64, prob: impl Fn(usize, usize) -> f64) -> Vec<(usize, usize)> {
    let mut coins = PairCoins::new(seed);
    let mut edges = Vec::new();
    let mut index = 0u64;
    for u in 0..n {
        for v in u + 1..n {
            let p = prob(u, v);
            if p >= 1.0 || (p > 0.0 && coins.uniform(index) < p) {
                edges.push((u, v));
            }
            index += 1;
        }
    }
    edges
}

fn color_labels(n: usize, mode: ColorMode, seed: u64, cluster_of: &[usize]) -> Result<Vec<String>> {
    let ids: Vec<usize> = match mode {
        ColorMode::EvenSplit(c) => {
            if c == 0 || c > n.max(1) {
                return Err(Error::InvalidParameter(format!("{c} colors for {n} nodes")));
            }
            (0..n).map(|i| i * c / n).collect()
        }
        ColorMode::PerCluster => cluster_of.to_vec(),
        ColorMode::UniformRandom(c) => {
            if c == 0 {
                return Err(Error::InvalidParameter("at least one color is needed".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(1);
            (0..n)
                .map(|_| ((rng.next_u64() as u128 * c as u128) >> 64) as usize)
                .collect()
        }
    };
    Ok(ids.into_iter().map(|c| format!("c{c}")).collect())
}

pub fn gen_er(spec: &GenSpec) -> Result<ColoredGraph> {
    let GraphKind::ErdosRenyi { n, p } = spec.kind else {
        return Err(Error::InvalidParameter("expected an Erdős–Rényi spec".into()));
    };
    check_prob("p", p)?;
    if matches!(spec.colors, ColorMode::PerCluster) {
        return Err(Error::InvalidParameter("per-cluster colors need planted clusters".into()));
    }
    let edges = draw_edges(n, spec.seed, |_, _| p);
    let labels = color_labels(n, spec.colors, spec.seed, &vec![0; n])?;
    ColoredGraph::new(n, &edges, &labels)
}

pub fn gen_planted(spec: &GenSpec) -> Result<ColoredGraph> {
    let GraphKind::PlantedClusters {
        cluster_sizes,
        p_intra,
        p_inter,
    } = &spec.kind
    else {
        return Err(Error::InvalidParameter("expected a planted-cluster spec".into()));
    };
    if cluster_sizes.len() != p_intra.len() {
        return Err(Error::InvalidParameter(format!(
            "{} clusters but {} intra probabilities",
            cluster_sizes.len(),
            p_intra.len()
        )));
    }
    for &p in p_intra {
        check_prob("p_intra", p)?;
    }
    check_prob("p_inter", *p_inter)?;
    let cluster_of: Vec<usize> = cluster_sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &size)| std::iter::repeat_n(c, size))
        .collect();
    let n = cluster_of.len();
    let edges = draw_edges(n, spec.seed, |u, v| {
        if cluster_of[u] == cluster_of[v] {
            p_intra[cluster_of[u]]
        } else {
            *p_inter
        }
    });
    let labels = color_labels(n, spec.colors, spec.seed, &cluster_of)?;
    ColoredGraph::new(n, &edges, &labels)
}

pub fn generate(spec: &GenSpec) -> Result<ColoredGraph> {
    match spec.kind {
        GraphKind::ErdosRenyi { .. } => gen_er(spec),
        GraphKind::PlantedClusters { .. } => gen_planted(spec),
    }
}
