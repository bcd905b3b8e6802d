//! LP relaxations of density problems and the level-set rounding applied to
//! their optima.
//!
//! Every relaxation here has one variable `x_e` per edge followed by one
//! variable `y_v` per node, maximizes `sum x_e`, and couples them with
//! `x_e <= y_u`, `x_e <= y_v`. Node groups receive a fixed share of the unit
//! mass and, optionally, every `y_v` is capped.

use num_rational::BigRational;
use num_traits::Zero;

use crate::graph::{ColoredGraph, Subset};
use crate::lp::{int, LpModel, LpSolution, Rational, Relation};

/// Builds the relaxation with `sum_{v in group} y_v = mass` for each group and
/// `y_v <= cap` when a cap is given.
pub(crate) fn mass_lp(g: &ColoredGraph, groups: &[(&[usize], Rational)], cap: Option<Rational>) -> LpModel {
    let mut model = LpModel::new();
    for &(u, v) in g.edges() {
        model.add_var(format!("x_{u}_{v}"), int(1));
    }
    let m = g.edge_count();
    for v in 0..g.node_count() {
        model.add_var(format!("y_{v}"), Rational::zero());
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        model.add_constraint(vec![(e, int(1)), (m + u, int(-1))], Relation::Le, Rational::zero());
        model.add_constraint(vec![(e, int(1)), (m + v, int(-1))], Relation::Le, Rational::zero());
    }
    for (members, mass) in groups {
        let terms = members.iter().map(|&v| (m + v, int(1))).collect();
        model.add_constraint(terms, Relation::Eq, mass.clone());
    }
    if let Some(cap) = cap {
        for v in 0..g.node_count() {
            model.add_constraint(vec![(m + v, int(1))], Relation::Le, cap.clone());
        }
    }
    model
}

/// Node values `y_v` of a solution to a [`mass_lp`] model.
pub(crate) fn node_values(g: &ColoredGraph, solution: &LpSolution) -> Vec<Rational> {
    solution.primal[g.edge_count()..g.edge_count() + g.node_count()].to_vec()
}

/// One level set `S(r) = {v : y_v >= r}` of an LP optimum.
#[derive(Debug, Clone)]
pub struct LevelSet {
    pub threshold: Rational,
    pub members: Subset,
}

/// Level sets for every distinct node value plus zero, thresholds
/// descending. Values within `tol` of each other count as one threshold.
pub(crate) fn level_sets(g: &ColoredGraph, y: &[Rational], tol: f64) -> Vec<LevelSet> {
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by(|&a, &b| y[b].cmp(&y[a]).then(a.cmp(&b)));

    let tol_r = BigRational::from_float(tol).unwrap_or_else(Rational::zero);
    let mut thresholds: Vec<Rational> = Vec::new();
    for &v in &order {
        match thresholds.last_mut() {
            Some(last) if (&*last - &y[v]) <= tol_r => {
                // Cluster: lower the representative to the smallest member.
                if y[v] < *last {
                    *last = y[v].clone();
                }
            }
            _ => thresholds.push(y[v].clone()),
        }
    }
    if thresholds.last().is_none_or(|r| *r > tol_r) {
        thresholds.push(Rational::zero());
    }

    let mut sets = Vec::with_capacity(thresholds.len());
    let mut taken = 0;
    for r in thresholds {
        let cut = &r - &tol_r;
        while taken < order.len() && y[order[taken]] >= cut {
            taken += 1;
        }
        if taken == 0 {
            continue;
        }
        let members = Subset::new(g, order[..taken].to_vec()).expect("nonempty level set");
        sets.push(LevelSet { threshold: r, members });
    }
    sets
}
