//! Two-phase primal simplex over a compact tableau with Bland's rule.
//!
//! Upper bounds are handled by complementing: a variable sitting at its
//! upper bound `u` is replaced by `u - x`, so every nonbasic variable is at
//! zero in the current orientation. Single-variable rows are folded into
//! bounds before the tableau is built.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::field::Field;
use super::{LpModel, LpSolution, LpStatus, Rational, Relation, SolverError};

#[derive(Debug)]
pub(crate) enum Failure {
    Overflow,
    Numeric(String),
}

impl Failure {
    pub(crate) fn into_error(self) -> SolverError {
        match self {
            Failure::Overflow => SolverError::Numeric("arithmetic overflow".into()),
            Failure::Numeric(msg) => SolverError::Numeric(msg),
        }
    }
}

type Step<T> = Result<T, Failure>;

fn ck<T>(v: Option<T>) -> Step<T> {
    v.ok_or(Failure::Overflow)
}

/// Pivots allowed per unit of tableau height plus width. Bland's rule
/// terminates in exact arithmetic; the cap only stops a stalled inexact run.
const ITERATIONS_PER_DIM: usize = 100;

/// Sparse row `terms relation rhs`.
type Row<F> = (Vec<(usize, F)>, Relation, F);

/// Variable bounds after folding singleton rows, plus the rows that still
/// need a tableau.
struct Presolved {
    lower: Vec<Rational>,
    upper: Vec<Option<Rational>>,
    rows: Vec<Row<Rational>>,
}

enum Presolve {
    Done(Presolved),
    Infeasible,
}

fn is_fixed(lower: &Rational, upper: &Option<Rational>) -> bool {
    upper.as_ref().is_some_and(|u| u == lower)
}

fn presolve(model: &LpModel, lower: &[Rational], upper: &[Option<Rational>]) -> Presolve {
    let mut lo = lower.to_vec();
    let mut hi = upper.to_vec();
    let mut rows: Vec<Option<Row<Rational>>> = model
        .constraints
        .iter()
        .map(|c| {
            let mut terms = c.terms.clone();
            terms.sort_by_key(|(j, _)| *j);
            let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(terms.len());
            for (j, a) in terms {
                match merged.last_mut() {
                    Some((k, b)) if *k == j => *b += a,
                    _ => merged.push((j, a)),
                }
            }
            merged.retain(|(_, a)| !a.is_zero());
            Some((merged, c.relation, c.rhs.clone()))
        })
        .collect();

    loop {
        let mut changed = false;
        for slot in rows.iter_mut() {
            let Some((terms, rel, rhs)) = slot else { continue };
            let mut free = terms.iter().filter(|(j, _)| !is_fixed(&lo[*j], &hi[*j]));
            let first = free.next().cloned();
            let second = free.next().is_some();
            if second {
                continue;
            }
            let fixed_part: Rational = terms
                .iter()
                .filter(|(j, _)| is_fixed(&lo[*j], &hi[*j]))
                .fold(<Rational as Zero>::zero(), |acc, (j, a)| acc + a * &lo[*j]);
            let rest = &*rhs - fixed_part;
            match first {
                None => {
                    let ok = match rel {
                        Relation::Le => !rest.is_negative(),
                        Relation::Ge => !rest.is_positive(),
                        Relation::Eq => rest.is_zero(),
                    };
                    if !ok {
                        return Presolve::Infeasible;
                    }
                }
                Some((j, a)) => {
                    let bound = &rest / &a;
                    let rel = match (*rel, a.is_negative()) {
                        (Relation::Le, true) => Relation::Ge,
                        (Relation::Ge, true) => Relation::Le,
                        (r, _) => r,
                    };
                    if matches!(rel, Relation::Le | Relation::Eq) && hi[j].as_ref().is_none_or(|u| bound < *u) {
                        hi[j] = Some(bound.clone());
                    }
                    if matches!(rel, Relation::Ge | Relation::Eq) && bound > lo[j] {
                        lo[j] = bound;
                    }
                    if hi[j].as_ref().is_some_and(|u| *u < lo[j]) {
                        return Presolve::Infeasible;
                    }
                    changed = true;
                }
            }
            *slot = None;
        }
        if !changed {
            break;
        }
    }
    if lo.iter().zip(&hi).any(|(l, u)| u.as_ref().is_some_and(|u| u < l)) {
        return Presolve::Infeasible;
    }
    Presolve::Done(Presolved {
        lower: lo,
        upper: hi,
        rows: rows.into_iter().flatten().collect(),
    })
}

/// Variable kinds in Bland order: structural columns, then slacks and
/// surpluses, then artificials.
struct Tableau<F> {
    t: Vec<Vec<F>>,
    b: Vec<F>,
    d: Vec<F>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    upper: Vec<Option<F>>,
    flipped: Vec<bool>,
    artificial_from: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl<F: Field> Tableau<F> {
    /// Artificials never re-enter once they leave the basis.
    fn banned(&self, var: usize) -> bool {
        var >= self.artificial_from
    }

    fn run(&mut self) -> Step<Outcome> {
        let limit = ITERATIONS_PER_DIM * (self.t.len() + self.nonbasic.len()).max(100);
        for _ in 0..limit {
            let entering = (0..self.nonbasic.len())
                .filter(|&s| self.d[s].is_pos() && !self.banned(self.nonbasic[s]))
                .min_by_key(|&s| self.nonbasic[s]);
            let Some(q) = entering else {
                return Ok(Outcome::Optimal);
            };

            // (theta, row, leaves at upper)
            let mut best: Option<(F, usize, bool)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][q];
                let (theta, at_upper) = if a.is_pos() {
                    (ck(self.b[i].div(a))?, false)
                } else if a.is_neg() {
                    match &self.upper[self.basic[i]] {
                        Some(u) => (ck(ck(u.sub(&self.b[i]))?.div(&a.neg()))?, true),
                        None => continue,
                    }
                } else {
                    continue;
                };
                let replace = match &best {
                    None => true,
                    Some((bt, bi, _)) => {
                        theta.lt(bt) || (!bt.lt(&theta) && self.basic[i] < self.basic[*bi])
                    }
                };
                if replace {
                    best = Some((theta, i, at_upper));
                }
            }

            let entering_var = self.nonbasic[q];
            let flip = match (&self.upper[entering_var], &best) {
                (Some(u), Some((bt, _, _))) => !bt.lt(u),
                (Some(_), None) => true,
                (None, _) => false,
            };
            if flip {
                self.flip_nonbasic(q)?;
                continue;
            }
            let Some((_, r, at_upper)) = best else {
                return Ok(Outcome::Unbounded);
            };
            if at_upper {
                self.complement_basic(r)?;
            }
            self.pivot(r, q)?;
        }
        Err(Failure::Numeric("simplex iteration limit reached".into()))
    }

    fn flip_nonbasic(&mut self, q: usize) -> Step<()> {
        let var = self.nonbasic[q];
        let u = self.upper[var].clone().expect("flip needs a finite bound");
        for i in 0..self.t.len() {
            let a = &self.t[i][q];
            if a.is_nil() {
                continue;
            }
            self.b[i] = ck(self.b[i].sub(&ck(a.mul(&u))?))?;
            self.t[i][q] = a.neg();
        }
        self.d[q] = self.d[q].neg();
        self.flipped[var] = !self.flipped[var];
        Ok(())
    }

    fn complement_basic(&mut self, r: usize) -> Step<()> {
        let var = self.basic[r];
        let u = self.upper[var].clone().expect("complement needs a finite bound");
        for a in self.t[r].iter_mut() {
            if !a.is_nil() {
                *a = a.neg();
            }
        }
        self.b[r] = ck(u.sub(&self.b[r]))?;
        self.flipped[var] = !self.flipped[var];
        Ok(())
    }

    fn pivot(&mut self, r: usize, q: usize) -> Step<()> {
        let p = self.t[r][q].clone();
        let mut nz = Vec::new();
        for j in 0..self.nonbasic.len() {
            if j == q {
                self.t[r][j] = ck(F::one().div(&p))?;
            } else if !self.t[r][j].is_nil() {
                self.t[r][j] = ck(self.t[r][j].div(&p))?;
                nz.push(j);
            }
        }
        self.b[r] = ck(self.b[r].div(&p))?;
        let pivot_row = std::mem::take(&mut self.t[r]);
        let inv = pivot_row[q].clone();
        for i in 0..self.t.len() {
            if i == r {
                continue;
            }
            let f = self.t[i][q].clone();
            if f.is_nil() {
                continue;
            }
            let row = &mut self.t[i];
            for &j in &nz {
                row[j] = ck(row[j].sub(&ck(f.mul(&pivot_row[j]))?))?;
            }
            row[q] = ck(f.mul(&inv))?.neg();
            self.b[i] = ck(self.b[i].sub(&ck(f.mul(&self.b[r]))?))?;
        }
        let f = self.d[q].clone();
        if !f.is_nil() {
            for &j in &nz {
                self.d[j] = ck(self.d[j].sub(&ck(f.mul(&pivot_row[j]))?))?;
            }
            self.d[q] = ck(f.mul(&inv))?.neg();
        }
        self.t[r] = pivot_row;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[q]);
        Ok(())
    }

    fn remove_row(&mut self, r: usize) {
        self.t.remove(r);
        self.b.remove(r);
        self.basic.remove(r);
    }

    /// Reduced costs for objective `cost` (indexed by variable, in original
    /// orientation).
    fn set_costs(&mut self, cost: &[F]) -> Step<()> {
        let oriented = |var: usize| -> F {
            let c = cost.get(var).cloned().unwrap_or_else(F::zero);
            if self.flipped[var] {
                c.neg()
            } else {
                c
            }
        };
        let mut d: Vec<F> = self.nonbasic.iter().map(|&v| oriented(v)).collect();
        for (i, &bv) in self.basic.iter().enumerate() {
            let cb = oriented(bv);
            if cb.is_nil() {
                continue;
            }
            for (s, dj) in d.iter_mut().enumerate() {
                let a = &self.t[i][s];
                if !a.is_nil() {
                    *dj = ck(dj.sub(&ck(cb.mul(a))?))?;
                }
            }
        }
        self.d = d;
        Ok(())
    }

    fn values(&self, var_count: usize) -> Vec<F> {
        let mut x = vec![F::zero(); var_count];
        for (i, &v) in self.basic.iter().enumerate() {
            if v < var_count {
                x[v] = self.b[i].clone();
            }
        }
        x
    }
}

pub(crate) fn solve<F: Field>(
    model: &LpModel,
    lower: &[Rational],
    upper: &[Option<Rational>],
) -> Step<LpSolution> {
    let pre = match presolve(model, lower, upper) {
        Presolve::Done(p) => p,
        Presolve::Infeasible => return Ok(LpSolution::without_point(LpStatus::Infeasible)),
    };
    let n = model.var_count();

    // Structural columns are the non-fixed variables, shifted by their lower
    // bound.
    let mut column_of = vec![None; n];
    let mut structural = Vec::new();
    for (j, col) in column_of.iter_mut().enumerate() {
        if !is_fixed(&pre.lower[j], &pre.upper[j]) {
            *col = Some(structural.len());
            structural.push(j);
        }
    }
    let ns = structural.len();

    let mut rows: Vec<Row<F>> = Vec::with_capacity(pre.rows.len());
    for (terms, rel, rhs) in &pre.rows {
        let mut rhs = rhs.clone();
        let mut coeffs = Vec::new();
        for (j, a) in terms {
            rhs -= a * &pre.lower[*j];
            if let Some(c) = column_of[*j] {
                coeffs.push((c, ck(F::from_big(a))?));
            }
        }
        let mut rel = *rel;
        if rhs.is_negative() {
            rhs = -rhs;
            coeffs.iter_mut().for_each(|(_, a)| *a = a.neg());
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        rows.push((coeffs, rel, ck(F::from_big(&rhs))?));
    }

    let m = rows.len();
    let logical = rows.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
    let artificial_from = ns + logical;
    let artificial_count = rows.iter().filter(|(_, r, _)| *r != Relation::Le).count();
    let total = artificial_from + artificial_count;

    let mut upper_f: Vec<Option<F>> = vec![None; total];
    for (c, &j) in structural.iter().enumerate() {
        if let Some(u) = &pre.upper[j] {
            upper_f[c] = Some(ck(F::from_big(&(u - &pre.lower[j])))?);
        }
    }

    let mut nonbasic: Vec<usize> = (0..ns).collect();
    let mut basic = Vec::with_capacity(m);
    let mut next_logical = ns;
    let mut next_artificial = artificial_from;
    let mut surplus_slot = Vec::with_capacity(m);
    for (_, rel, _) in &rows {
        match rel {
            Relation::Le => {
                basic.push(next_logical);
                next_logical += 1;
                surplus_slot.push(None);
            }
            Relation::Ge => {
                surplus_slot.push(Some(nonbasic.len()));
                nonbasic.push(next_logical);
                next_logical += 1;
                basic.push(next_artificial);
                next_artificial += 1;
            }
            Relation::Eq => {
                surplus_slot.push(None);
                basic.push(next_artificial);
                next_artificial += 1;
            }
        }
    }

    let width = nonbasic.len();
    let mut t = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for (i, (coeffs, _, rhs)) in rows.into_iter().enumerate() {
        let mut row = vec![F::zero(); width];
        for (c, a) in coeffs {
            row[c] = ck(row[c].add(&a))?;
        }
        if let Some(s) = surplus_slot[i] {
            row[s] = F::one().neg();
        }
        t.push(row);
        b.push(rhs);
    }

    let mut tab = Tableau {
        t,
        b,
        d: Vec::new(),
        basic,
        nonbasic,
        upper: upper_f,
        flipped: vec![false; total],
        artificial_from,
    };

    if artificial_count > 0 {
        let mut phase_one = vec![F::zero(); total];
        for c in phase_one.iter_mut().skip(artificial_from) {
            *c = F::one().neg();
        }
        tab.set_costs(&phase_one)?;
        if let Outcome::Unbounded = tab.run()? {
            return Err(Failure::Numeric("phase one reported unbounded".into()));
        }
        if tab
            .basic
            .iter()
            .zip(&tab.b)
            .any(|(&v, val)| v >= artificial_from && !val.is_nil())
        {
            return Ok(LpSolution::without_point(LpStatus::Infeasible));
        }
        let mut r = 0;
        while r < tab.basic.len() {
            if tab.basic[r] < artificial_from {
                r += 1;
                continue;
            }
            let slot = (0..tab.nonbasic.len())
                .filter(|&s| tab.nonbasic[s] < artificial_from && !tab.t[r][s].is_nil())
                .min_by_key(|&s| tab.nonbasic[s]);
            match slot {
                Some(s) => {
                    tab.pivot(r, s)?;
                    r += 1;
                }
                None => tab.remove_row(r),
            }
        }
    }

    let mut cost = vec![F::zero(); total];
    for (c, &j) in structural.iter().enumerate() {
        cost[c] = ck(F::from_big(&model.objective[j]))?;
    }
    tab.set_costs(&cost)?;
    if let Outcome::Unbounded = tab.run()? {
        return Ok(LpSolution::without_point(LpStatus::Unbounded));
    }

    let values = tab.values(ns);
    let mut x: Vec<BigRational> = pre.lower.clone();
    for (c, &j) in structural.iter().enumerate() {
        let mut v = values[c].clone();
        if tab.flipped[c] {
            let u = tab.upper[c].as_ref().expect("flipped column has a bound");
            v = ck(u.sub(&v))?;
        }
        x[j] = &pre.lower[j] + v.to_big();
    }
    let objective = model.objective_at(&x);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective_value: Some(objective),
        primal: x,
    })
}
