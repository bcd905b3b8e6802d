//! Densest subgraph with per-color lower bounds `|S_c| >= k_c`.

use num_traits::Zero;

use crate::dense::{dalks_lp, PeelTrace};
use crate::error::{Error, Result};
use crate::graph::{keep_better, ColoredGraph, Density, Subset};
use crate::grow::Grower;
use crate::lp::{rat, LpEngine, LpModel, LpSolution, Rational, SolverError};
use crate::par;
use crate::relax::{level_sets, mass_lp, node_values};

/// Per-color demands `k_c`, indexed by color id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandVector {
    k: Vec<usize>,
}

impl DemandVector {
    /// Rejects vectors of the wrong length and demands above the color
    /// class size.
    pub fn new(g: &ColoredGraph, k: Vec<usize>) -> Result<Self> {
        if k.len() != g.color_count() {
            return Err(Error::InvalidParameter(format!(
                "demand vector has {} entries for {} colors",
                k.len(),
                g.color_count()
            )));
        }
        for (c, &kc) in k.iter().enumerate() {
            let available = g.color_class(c).len();
            if kc > available {
                return Err(Error::InfeasibleDemand {
                    color: g.color_label(c).to_string(),
                    demand: kc,
                    available,
                });
            }
        }
        Ok(Self { k })
    }

    /// Builds from `(label, count)` pairs; unlisted colors get 0.
    pub fn from_labels<S: AsRef<str>>(g: &ColoredGraph, pairs: &[(S, usize)]) -> Result<Self> {
        let mut k = vec![0; g.color_count()];
        let mut seen = vec![false; g.color_count()];
        for (label, count) in pairs {
            let label = label.as_ref();
            let Some(c) = g.color_id(label) else {
                if *count == 0 {
                    continue;
                }
                return Err(Error::InfeasibleDemand {
                    color: label.to_string(),
                    demand: *count,
                    available: 0,
                });
            };
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidParameter(format!("color `{label}` listed twice")));
            }
            k[c] = *count;
        }
        Self::new(g, k)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.k
    }

    pub fn get(&self, c: usize) -> usize {
        self.k[c]
    }

    pub fn total(&self) -> usize {
        self.k.iter().sum()
    }

    pub fn is_satisfied_by(&self, s: &Subset) -> bool {
        s.color_counts().iter().zip(&self.k).all(|(have, need)| have >= need)
    }

    fn check(&self, g: &ColoredGraph) -> Result<()> {
        Self::new(g, self.k.clone()).map(|_| ())
    }
}

/// Per-color masses `p_c` with `k <= p <= |V_c|` and `‖p‖₁ >= 1`.
pub type PVector = Vec<usize>;

/// All p with `k <= p <= |V_c|` and `‖p‖₁ >= 1`, lexicographically
/// ascending with color 0 most significant.
pub fn enumerate_pvectors(g: &ColoredGraph, k: &DemandVector) -> Vec<PVector> {
    let upper = g.color_class_sizes();
    let mut out = Vec::new();
    let mut p = k.as_slice().to_vec();
    loop {
        if p.iter().any(|&x| x > 0) {
            out.push(p.clone());
        }
        let mut c = p.len();
        loop {
            if c == 0 {
                return out;
            }
            c -= 1;
            if p[c] < upper[c] {
                p[c] += 1;
                break;
            }
            p[c] = k.get(c);
        }
    }
}

/// Number of vectors [`enumerate_pvectors`] would produce, saturating.
pub fn pvector_count(g: &ColoredGraph, k: &DemandVector) -> usize {
    let sizes = g.color_class_sizes();
    let product = sizes
        .iter()
        .zip(k.as_slice())
        .fold(1usize, |acc, (&n, &kc)| acc.saturating_mul(n - kc + 1));
    let zero_included = k.total() == 0;
    product - usize::from(zero_included)
}

/// The relaxation with color masses `p_c / ‖p‖₁` and caps `y_v <= 1/‖p‖₁`.
pub fn build_lp_p(g: &ColoredGraph, p: &[usize]) -> LpModel {
    let total: usize = p.iter().sum();
    assert!(total >= 1 && p.len() == g.color_count(), "invalid p vector");
    let groups: Vec<(&[usize], Rational)> = (0..g.color_count())
        .map(|c| (g.color_class(c), rat(p[c] as i64, total as i64)))
        .collect();
    mass_lp(g, &groups, Some(rat(1, total as i64)))
}

#[derive(Debug, Clone)]
pub struct SweepCandidate {
    pub threshold: Rational,
    pub raw_set: Subset,
    pub feasible_set: Subset,
    /// Colors whose demand the raw set already meets.
    pub c_sat: Vec<usize>,
}

/// One candidate per distinct threshold of the solution's node values,
/// descending, each completed by [`make_it_feasible`].
pub fn sweep_candidates(
    g: &ColoredGraph,
    k: &DemandVector,
    solution: &LpSolution,
    tol: f64,
) -> Vec<SweepCandidate> {
    let y = node_values(g, solution);
    level_sets(g, &y, tol)
        .into_iter()
        .map(|level| {
            let c_sat = (0..g.color_count())
                .filter(|&c| level.members.color_counts()[c] >= k.get(c))
                .collect();
            let feasible_set = make_it_feasible(g, &level.members, k);
            SweepCandidate {
                threshold: level.threshold,
                raw_set: level.members,
                feasible_set,
                c_sat,
            }
        })
        .collect()
}

/// For each color short of its demand, adds the missing number of nodes of
/// that color, most edges into the set first, then smallest id.
pub fn make_it_feasible(g: &ColoredGraph, s: &Subset, k: &DemandVector) -> Subset {
    if k.is_satisfied_by(s) {
        return s.clone();
    }
    let mut grower = Grower::new(g, s);
    for c in 0..g.color_count() {
        while grower.color_counts()[c] < k.get(c) {
            let v = grower.best_in_color(c).expect("demand within color class");
            grower.add(v);
        }
    }
    grower.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpFullOptions {
    /// Skip the sweep for p whose LP value is strictly below the incumbent.
    pub prune: bool,
    /// Keep only p with `p_c = k_c` for some demanded color.
    pub tight_only: bool,
    /// Fail with a resource error instead of solving more LPs than this.
    pub lp_budget: Option<usize>,
}

impl Default for LpFullOptions {
    fn default() -> Self {
        Self {
            prune: true,
            tight_only: false,
            lp_budget: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LpFullRun {
    pub best: Subset,
    pub lp_solves: usize,
    pub sweeps: usize,
}

fn is_tight(p: &[usize], k: &DemandVector) -> bool {
    p.iter().zip(k.as_slice()).any(|(&pc, &kc)| kc >= 1 && pc == kc)
}

/// Enumerates p vectors, solves every LP(p) and sweeps its level sets. LPs
/// run in parallel; the prune and the incumbent update replay in
/// enumeration order, so the result does not depend on scheduling.
pub fn dalvks_lp_full_with(
    g: &ColoredGraph,
    k: &DemandVector,
    lp: &LpEngine,
    options: LpFullOptions,
) -> Result<LpFullRun> {
    k.check(g)?;
    if g.node_count() == 0 {
        return Err(Error::InvalidGraph("graph has no nodes".into()));
    }
    let mut pvectors = enumerate_pvectors(g, k);
    if options.tight_only {
        pvectors.retain(|p| is_tight(p, k));
    }
    if let Some(budget) = options.lp_budget {
        if pvectors.len() > budget {
            return Err(SolverError::ResourceExhausted(format!(
                "{} LP(p) solves exceed the budget of {budget}",
                pvectors.len()
            ))
            .into());
        }
    }

    let solutions = par::map(&pvectors, |p| lp.solve_lp(&build_lp_p(g, p)));
    let tol = lp.feasibility_tol();
    let mut best: Option<Subset> = None;
    let mut sweeps = 0;
    for solution in solutions {
        let solution = solution?;
        let Some(value) = solution.value() else {
            return Err(SolverError::Numeric(format!("LP(p) reported {:?}", solution.status)).into());
        };
        if options.prune {
            if let Some(incumbent) = &best {
                if below(value, incumbent.density(), tol) {
                    continue;
                }
            }
        }
        sweeps += 1;
        for candidate in sweep_candidates(g, k, &solution, tol) {
            keep_better(&mut best, candidate.feasible_set);
        }
    }
    let best = match best {
        Some(b) => b,
        // Only reachable when every p was filtered out.
        None => dalvks_peel(g, k)?,
    };
    Ok(LpFullRun {
        best,
        lp_solves: pvectors.len(),
        sweeps,
    })
}

fn below(value: &Rational, incumbent: Density, tol: f64) -> bool {
    let incumbent = incumbent.to_rational();
    if tol == 0.0 {
        *value < incumbent
    } else {
        let slack = Rational::from_float(tol).unwrap_or_else(Rational::zero);
        value + slack < incumbent
    }
}

/// ⅓-approximation by full enumeration of p vectors, with pruning.
pub fn dalvks_lp_full(g: &ColoredGraph, k: &DemandVector, lp: &LpEngine) -> Result<Subset> {
    Ok(dalvks_lp_full_with(g, k, lp, LpFullOptions::default())?.best)
}

/// Peels the global minimum-degree node while every demanded color keeps
/// more members than its demand, and returns the densest set seen.
pub fn dalvks_peel(g: &ColoredGraph, k: &DemandVector) -> Result<Subset> {
    k.check(g)?;
    if g.node_count() == 0 {
        return Err(Error::InvalidGraph("graph has no nodes".into()));
    }
    let trace = PeelTrace::new(g);
    let mut counts = g.color_class_sizes();
    let demanded: Vec<usize> = (0..g.color_count()).filter(|&c| k.get(c) >= 1).collect();
    let n = g.node_count();
    let mut best_removed = 0;
    for removed in 0..n - 1 {
        if !demanded.iter().all(|&c| counts[c] > k.get(c)) {
            break;
        }
        counts[g.color_of(trace.removal_order[removed])] -= 1;
        if trace.suffix_density(removed + 1) > trace.suffix_density(best_removed) {
            best_removed = removed + 1;
        }
    }
    Ok(trace.suffix(g, best_removed))
}

/// Densest at-least-‖k‖₁ by LP rounding, then [`make_it_feasible`]:
/// ¼-approximate.
pub fn dalvks_prop2(g: &ColoredGraph, k: &DemandVector, lp: &LpEngine) -> Result<Subset> {
    k.check(g)?;
    let s = dalks_lp(g, k.total().max(1), lp)?;
    Ok(make_it_feasible(g, &s, k))
}

#[derive(Debug, Clone)]
pub struct AccelRun {
    pub best: Subset,
    pub peel: Subset,
    pub lp_solves: usize,
}

/// Better of [`dalvks_peel`] and the p enumeration restricted to vectors
/// tight on some demanded color.
pub fn dalvks_accel_with(
    g: &ColoredGraph,
    k: &DemandVector,
    lp: &LpEngine,
    lp_budget: Option<usize>,
) -> Result<AccelRun> {
    let peel = dalvks_peel(g, k)?;
    if k.total() == 0 {
        return Ok(AccelRun {
            best: peel.clone(),
            peel,
            lp_solves: 0,
        });
    }
    let options = LpFullOptions {
        prune: true,
        tight_only: true,
        lp_budget,
    };
    let run = dalvks_lp_full_with(g, k, lp, options)?;
    let best = if run.best.density() > peel.density() {
        run.best
    } else {
        peel.clone()
    };
    Ok(AccelRun {
        best,
        peel,
        lp_solves: run.lp_solves,
    })
}

pub fn dalvks_accel(g: &ColoredGraph, k: &DemandVector, lp: &LpEngine) -> Result<Subset> {
    Ok(dalvks_accel_with(g, k, lp, None)?.best)
}
