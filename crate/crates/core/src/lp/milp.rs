//! Depth-first branch-and-bound over the integer-flagged variables.

use num_traits::{Signed, ToPrimitive};

use super::{LpEngine, LpModel, LpSolution, LpStatus, Rational, SolverError};

#[derive(Debug, Clone, Copy)]
pub struct MilpOptions {
    /// Maximum number of branch-and-bound nodes before giving up.
    pub node_limit: usize,
}

impl Default for MilpOptions {
    fn default() -> Self {
        Self { node_limit: 200_000 }
    }
}

fn fractional_part_is_zero(v: &Rational, tol: f64) -> bool {
    if tol == 0.0 {
        v.is_integer()
    } else {
        (v - v.round()).abs().to_f64().unwrap_or(f64::MAX) <= tol
    }
}

struct Node {
    lower: Vec<Rational>,
    upper: Vec<Option<Rational>>,
}

pub(super) fn branch_and_bound(engine: &LpEngine, model: &LpModel) -> Result<LpSolution, SolverError> {
    let tol = engine.feasibility_tol();
    let limit = engine.milp.node_limit;
    let mut stack = vec![Node {
        lower: model.lower.clone(),
        upper: model.upper.clone(),
    }];
    let mut incumbent: Option<LpSolution> = None;
    let mut explored = 0usize;

    while let Some(node) = stack.pop() {
        explored += 1;
        if explored > limit {
            return Err(SolverError::ResourceExhausted(format!(
                "branch-and-bound node limit {limit} exceeded"
            )));
        }
        let relaxed = engine.relaxation(model, &node.lower, &node.upper)?;
        match relaxed.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => {
                if incumbent.is_none() && explored == 1 {
                    return Ok(relaxed);
                }
                return Err(SolverError::Numeric("unbounded relaxation below the root".into()));
            }
            LpStatus::Optimal => {}
        }
        let bound = relaxed.objective_value.clone().expect("optimal has a value");
        if let Some(best) = &incumbent {
            let best_value = best.objective_value.as_ref().expect("incumbent has a value");
            let tol_r = Rational::from_float(tol).unwrap_or_default();
            if bound <= best_value + tol_r {
                continue;
            }
        }

        let branch_var = (0..model.var_count())
            .find(|&j| model.integer[j] && !fractional_part_is_zero(&relaxed.primal[j], tol));
        let Some(j) = branch_var else {
            incumbent = Some(relaxed);
            continue;
        };
        let v = &relaxed.primal[j];
        let down = v.floor();
        let up = v.ceil();

        let mut up_node = Node {
            lower: node.lower.clone(),
            upper: node.upper.clone(),
        };
        up_node.lower[j] = up;
        let mut down_node = node;
        down_node.upper[j] = Some(down);
        // Popped last-in first-out: the down branch is explored first.
        stack.push(up_node);
        stack.push(down_node);
    }

    Ok(match incumbent {
        Some(mut best) => {
            if tol > 0.0 {
                for (j, v) in best.primal.iter_mut().enumerate() {
                    if model.integer[j] {
                        *v = v.round();
                    }
                }
                best.objective_value = Some(model.objective_at(&best.primal));
            }
            best
        }
        None => LpSolution::without_point(LpStatus::Infeasible),
    })
}
