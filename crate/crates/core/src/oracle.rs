//! Exact solvers for small instances: subset enumeration and a per-size
//! mixed-integer program.

use serde::{Deserialize, Serialize};

use crate::dalvks::DemandVector;
use crate::error::{Error, Result};
use crate::graph::{keep_better, ColoredGraph, Density, Fraction, Subset};
use crate::lp::{int, rat, LpEngine, LpModel, Relation, SolverError};
use crate::par;

/// Largest graph the enumeration oracles accept.
pub const BRUTE_FORCE_LIMIT: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    BruteForce,
    Milp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub method: OracleMethod,
    /// An optimal set, or `None` when no set satisfies the constraints.
    pub witness: Option<Subset>,
}

impl OracleResult {
    pub fn optimum(&self) -> Option<Density> {
        self.witness.as_ref().map(Subset::density)
    }

    pub fn status(&self) -> OracleStatus {
        if self.witness.is_some() {
            OracleStatus::Optimal
        } else {
            OracleStatus::Infeasible
        }
    }
}

/// Whether mask `a` lists as a lexicographically smaller member sequence
/// than mask `b`.
fn lex_less(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let bit = diff.trailing_zeros();
    if a >> bit & 1 == 1 {
        // `a` continues with `bit`; `b` is smaller only if it stops here.
        b >> bit != 0
    } else {
        a >> bit == 0
    }
}

#[derive(Clone, Copy)]
struct Best {
    edges: u32,
    size: u32,
    mask: u32,
}

impl Best {
    fn beats(&self, other: &Best) -> bool {
        let lhs = self.edges as u64 * other.size as u64;
        let rhs = other.edges as u64 * self.size as u64;
        lhs > rhs || (lhs == rhs && lex_less(self.mask, other.mask))
    }
}

const CHUNK_BITS: u32 = 14;

/// Densest nonempty subset accepted by `keep(color_counts, size)`, ties to
/// the lexicographically smallest member list. Subsets are walked in Gray
/// code order so each step updates edge and color counts in O(1).
pub fn brute_force_where<F>(g: &ColoredGraph, keep: F) -> Result<OracleResult>
where
    F: Fn(&[u32], u32) -> bool + Sync,
{
    let n = g.node_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            what: "subset enumeration",
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if n == 0 {
        return Ok(OracleResult {
            method: OracleMethod::BruteForce,
            witness: None,
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let colors = g.colors();
    let total: u64 = 1 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n as u32);
    let chunks = (total / chunk) as usize;

    let per_chunk = par::map_range(chunks, |ci| {
        let start = ci as u64 * chunk;
        let gray = |i: u64| (i ^ (i >> 1)) as u32;
        let mut mask = gray(start);
        let mut counts = vec![0u32; g.color_count()];
        let mut edges = 0u32;
        let mut size = 0u32;
        for v in 0..n {
            if mask >> v & 1 == 1 {
                counts[colors[v]] += 1;
                size += 1;
                edges += (adj[v] & mask).count_ones();
            }
        }
        edges /= 2;
        let mut best: Option<Best> = None;
        let mut i = start;
        loop {
            if size > 0 && keep(&counts, size) {
                let cand = Best { edges, size, mask };
                if best.is_none_or(|b| cand.beats(&b)) {
                    best = Some(cand);
                }
            }
            i += 1;
            if i == start + chunk {
                break;
            }
            let v = i.trailing_zeros() as usize;
            let bit = 1u32 << v;
            if mask & bit == 0 {
                edges += (adj[v] & mask).count_ones();
                mask |= bit;
                counts[colors[v]] += 1;
                size += 1;
            } else {
                mask &= !bit;
                edges -= (adj[v] & mask).count_ones();
                counts[colors[v]] -= 1;
                size -= 1;
            }
        }
        best
    });

    let best = per_chunk
        .into_iter()
        .flatten()
        .reduce(|a, b| if b.beats(&a) { b } else { a });
    let witness = best.map(|b| {
        let members = (0..n).filter(|&v| b.mask >> v & 1 == 1).collect();
        Subset::new(g, members).expect("nonempty mask")
    });
    Ok(OracleResult {
        method: OracleMethod::BruteForce,
        witness,
    })
}

/// Densest set with `α(S) <= alpha`.
pub fn brute_force_ddsp(g: &ColoredGraph, alpha: Fraction) -> Result<OracleResult> {
    let (p, q) = (*alpha.numer(), *alpha.denom());
    brute_force_where(g, |counts, size| {
        let c_max = counts.iter().copied().max().unwrap_or(0) as u64;
        c_max * q <= size as u64 * p
    })
}

/// Densest set with `|S_c| >= k_c` for every color.
pub fn brute_force_dalvks(g: &ColoredGraph, k: &[usize]) -> Result<OracleResult> {
    if k.len() != g.color_count() {
        return Err(Error::InvalidParameter(format!(
            "demand vector has {} entries for {} colors",
            k.len(),
            g.color_count()
        )));
    }
    brute_force_where(g, |counts, _| counts.iter().zip(k).all(|(&have, &need)| have as usize >= need))
}

/// Densest set with at least `k` nodes.
pub fn brute_force_dalks(g: &ColoredGraph, k: usize) -> Result<OracleResult> {
    brute_force_where(g, |_, size| size as usize >= k)
}

/// Densest set with at most `k` nodes.
pub fn brute_force_damks(g: &ColoredGraph, k: usize) -> Result<OracleResult> {
    brute_force_where(g, |_, size| size as usize <= k)
}

/// The fixed-size model: binary `y_v`, relaxed `x_e` in [0, 1], objective
/// `sum x_e / size`, `sum y = size` and `sum_{V_c} y >= k_c`.
pub fn build_fixed_size_milp(g: &ColoredGraph, k: &DemandVector, size: usize) -> LpModel {
    let mut model = LpModel::new();
    let m = g.edge_count();
    for &(u, v) in g.edges() {
        let x = model.add_var(format!("x_{u}_{v}"), rat(1, size as i64));
        model.set_upper(x, int(1));
    }
    for v in 0..g.node_count() {
        model.add_binary(format!("y_{v}"), int(0));
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        model.add_constraint(vec![(e, int(1)), (m + u, int(-1))], Relation::Le, int(0));
        model.add_constraint(vec![(e, int(1)), (m + v, int(-1))], Relation::Le, int(0));
    }
    let all = (0..g.node_count()).map(|v| (m + v, int(1))).collect();
    model.add_constraint(all, Relation::Eq, int(size as i64));
    for c in 0..g.color_count() {
        if k.get(c) > 0 {
            let terms = g.color_class(c).iter().map(|&v| (m + v, int(1))).collect();
            model.add_constraint(terms, Relation::Ge, int(k.get(c) as i64));
        }
    }
    model
}

/// Best over every size from `max(‖k‖₁, 1)` to `n` of the fixed-size model.
pub fn milp_dalvks(g: &ColoredGraph, k: &DemandVector, lp: &LpEngine) -> Result<OracleResult> {
    let n = g.node_count();
    let sizes: Vec<usize> = (k.total().max(1)..=n).collect();
    let solved = par::map(&sizes, |&size| {
        let model = build_fixed_size_milp(g, k, size);
        let solution = lp.solve_milp(&model).map_err(|e| match e {
            SolverError::ResourceExhausted(msg) => {
                SolverError::ResourceExhausted(format!("size {size}: {msg}"))
            }
            other => other,
        })?;
        if !solution.is_optimal() {
            return Ok(None);
        }
        let members: Vec<usize> = (0..n)
            .filter(|&v| solution.primal[g.edge_count() + v] > int(0))
            .collect();
        Ok::<_, Error>(Some(Subset::new(g, members)?))
    });
    let mut best = None;
    for s in solved {
        if let Some(s) = s? {
            keep_better(&mut best, s);
        }
    }
    Ok(OracleResult {
        method: OracleMethod::Milp,
        witness: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn d(e: u64, n: u64) -> Density {
        Density::new(e, n).unwrap()
    }

    #[test]
    fn lex_order_on_masks() {
        // {0,1} < {0,2} < {1}
        assert!(lex_less(0b011, 0b101));
        assert!(lex_less(0b101, 0b010));
        // {0} is a prefix of {0,1}
        assert!(lex_less(0b001, 0b011));
        assert!(!lex_less(0b011, 0b001));
        assert!(!lex_less(0b1, 0b1));
    }

    #[test]
    fn ddsp_oracle_fixtures() {
        let r = brute_force_ddsp(&k5p(), Fraction::new(1, 2)).unwrap();
        assert_eq!(r.optimum(), Some(d(1, 2)));
        assert_eq!(r.witness.unwrap().members(), &[0, 5]);
        let r = brute_force_ddsp(&t3(), Fraction::new(1, 2)).unwrap();
        assert_eq!(r.status(), OracleStatus::Infeasible);
        let r = brute_force_ddsp(&k4b(), Fraction::new(1, 2)).unwrap();
        assert_eq!(r.witness.unwrap(), k4b().full_subset());
    }

    #[test]
    fn dalvks_oracle_fixtures() {
        let r = brute_force_dalvks(&two_triangles(), &[1, 1]).unwrap();
        assert_eq!(r.witness.unwrap(), two_triangles().full_subset());
        let r = brute_force_dalvks(&k5p(), &[0, 1]).unwrap();
        assert_eq!((r.optimum(), r.witness.unwrap().size()), (Some(d(11, 6)), 6));
        let r = brute_force_dalvks(&two_triangles(), &[4, 0]).unwrap();
        assert_eq!(r.status(), OracleStatus::Infeasible);
    }

    #[test]
    fn ties_go_to_smallest_member_list() {
        let r = brute_force_dalks(&two_triangles(), 1).unwrap();
        assert_eq!(r.witness.unwrap().members(), &[0, 1, 2]);
    }

    #[test]
    fn size_cap() {
        let g = ColoredGraph::new(26, &[], &vec!["a"; 26]).unwrap();
        assert!(matches!(brute_force_dalks(&g, 1), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn fixed_size_models() {
        let lp = LpEngine::exact();
        let g = two_triangles();
        let k = DemandVector::new(&g, vec![1, 1]).unwrap();
        let sol = lp.solve_milp(&build_fixed_size_milp(&g, &k, 6)).unwrap();
        assert_eq!(sol.value(), Some(&rat(1, 1)));
        let sol = lp.solve_milp(&build_fixed_size_milp(&g, &k, 4)).unwrap();
        assert_eq!(sol.value(), Some(&rat(3, 4)));
    }

    #[test]
    fn milp_oracle_fixtures() {
        let lp = LpEngine::exact();
        let g = two_triangles();
        let r = milp_dalvks(&g, &DemandVector::new(&g, vec![1, 1]).unwrap(), &lp).unwrap();
        assert_eq!(r.optimum(), Some(d(1, 1)));
        let g = k4b();
        let r = milp_dalvks(&g, &DemandVector::new(&g, vec![2, 2]).unwrap(), &lp).unwrap();
        assert_eq!(r.optimum(), Some(d(3, 2)));
    }
}
