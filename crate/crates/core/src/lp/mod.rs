//! Linear and mixed-integer programs: a small modeling layer, a bundled
//! exact simplex, branch-and-bound on top of it, and an LP-format dump for
//! debugging.
//!
//! All models are maximizations. Coefficients are exact rationals; the
//! default backend solves in exact arithmetic so level sets of the optimum
//! can be read off without tolerances.

mod dump;
mod field;
mod milp;
mod simplex;

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use dump::write_lp_format;
pub use milp::MilpOptions;

/// Environment variable naming the LP backend (`rational` or `float`).
pub const BACKEND_ENV: &str = "DDSG_LP_BACKEND";

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(v: i64) -> Rational {
    BigRational::from_integer(BigInt::from(v))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("resource limit exceeded: {0}")]
    ResourceExhausted(String),
    #[error("unknown LP backend `{0}` (expected `rational` or `float`)")]
    UnknownBackend(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub terms: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs_at(&self, x: &[Rational]) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (j, a)| acc + a * &x[*j])
    }
}

/// A maximization problem over bounded variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpModel {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Rational>,
    pub upper: Vec<Option<Rational>>,
    pub integer: Vec<bool>,
    pub names: Vec<String>,
}

impl LpModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a continuous variable with bounds `[0, +inf)`.
    pub fn add_var(&mut self, name: impl Into<String>, objective: Rational) -> usize {
        self.objective.push(objective);
        self.lower.push(Rational::zero());
        self.upper.push(None);
        self.integer.push(false);
        self.names.push(name.into());
        self.objective.len() - 1
    }

    /// Adds a binary variable.
    pub fn add_binary(&mut self, name: impl Into<String>, objective: Rational) -> usize {
        let j = self.add_var(name, objective);
        self.upper[j] = Some(Rational::one());
        self.integer[j] = true;
        j
    }

    pub fn set_upper(&mut self, var: usize, upper: Rational) {
        self.upper[var] = Some(upper);
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint { terms, relation, rhs });
    }

    pub fn var_count(&self) -> usize {
        self.objective.len()
    }

    pub fn has_integers(&self) -> bool {
        self.integer.iter().any(|&b| b)
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (c, v)| acc + c * v)
    }

    pub(crate) fn validate(&self) -> Result<(), SolverError> {
        let n = self.objective.len();
        if self.lower.len() != n || self.upper.len() != n || self.integer.len() != n || self.names.len() != n {
            return Err(SolverError::InvalidModel("per-variable vectors disagree in length".into()));
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if let Some((j, _)) = row.terms.iter().find(|(j, _)| *j >= n) {
                return Err(SolverError::InvalidModel(format!(
                    "constraint {i} references undeclared variable {j}"
                )));
            }
        }
        Ok(())
    }

    /// Largest violation of any constraint or bound at `x`, zero when
    /// feasible.
    pub fn max_violation(&self, x: &[Rational]) -> Rational {
        self.max_violation_within(x, &self.lower, &self.upper)
    }

    pub(crate) fn max_violation_within(
        &self,
        x: &[Rational],
        lower: &[Rational],
        upper: &[Option<Rational>],
    ) -> Rational {
        let mut worst = Rational::zero();
        let mut note = |v: Rational| {
            if v > worst {
                worst = v;
            }
        };
        for row in &self.constraints {
            let lhs = row.lhs_at(x);
            match row.relation {
                Relation::Le => note(&lhs - &row.rhs),
                Relation::Ge => note(&row.rhs - &lhs),
                Relation::Eq => note((&lhs - &row.rhs).abs()),
            }
        }
        for (j, v) in x.iter().enumerate() {
            note(&lower[j] - v);
            if let Some(u) = &upper[j] {
                note(v - u);
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective at `primal`; present only when optimal.
    pub objective_value: Option<Rational>,
    pub primal: Vec<Rational>,
}

impl LpSolution {
    pub(crate) fn without_point(status: LpStatus) -> Self {
        Self {
            status,
            objective_value: None,
            primal: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn value(&self) -> Option<&Rational> {
        self.objective_value.as_ref()
    }
}

/// A solver for continuous LPs; branch-and-bound runs on top of any backend.
pub trait LpBackend: Send + Sync {
    fn name(&self) -> &'static str;

    /// Absolute tolerance this backend's answers are accurate to; zero for
    /// exact backends.
    fn feasibility_tol(&self) -> f64;

    /// Solves the continuous relaxation of `model` with the given variable
    /// bounds in place of the model's own.
    fn solve_bounded(
        &self,
        model: &LpModel,
        lower: &[Rational],
        upper: &[Option<Rational>],
    ) -> Result<LpSolution, SolverError>;
}

/// Exact simplex with Bland's rule. Runs in 64-bit rationals and restarts in
/// arbitrary precision when an intermediate value overflows.
#[derive(Debug, Default, Clone, Copy)]
pub struct RationalSimplex;

impl LpBackend for RationalSimplex {
    fn name(&self) -> &'static str {
        "rational"
    }

    fn feasibility_tol(&self) -> f64 {
        0.0
    }

    fn solve_bounded(
        &self,
        model: &LpModel,
        lower: &[Rational],
        upper: &[Option<Rational>],
    ) -> Result<LpSolution, SolverError> {
        let solution = match simplex::solve::<num_rational::Rational64>(model, lower, upper) {
            Err(simplex::Failure::Overflow) => simplex::solve::<BigRational>(model, lower, upper),
            other => other,
        }
        .map_err(simplex::Failure::into_error)?;
        if solution.is_optimal() {
            let violation = model.max_violation_within(&solution.primal, lower, upper);
            if !violation.is_zero() {
                return Err(SolverError::Numeric(format!(
                    "exact solve returned an infeasible point (violation {violation})"
                )));
            }
        }
        Ok(solution)
    }
}

/// Double-precision simplex, for comparison against the exact backend.
#[derive(Debug, Clone, Copy)]
pub struct FloatSimplex {
    pub tol: f64,
}

impl Default for FloatSimplex {
    fn default() -> Self {
        Self { tol: 1e-9 }
    }
}

impl LpBackend for FloatSimplex {
    fn name(&self) -> &'static str {
        "float"
    }

    fn feasibility_tol(&self) -> f64 {
        self.tol
    }

    fn solve_bounded(
        &self,
        model: &LpModel,
        lower: &[Rational],
        upper: &[Option<Rational>],
    ) -> Result<LpSolution, SolverError> {
        let solution = simplex::solve::<f64>(model, lower, upper).map_err(simplex::Failure::into_error)?;
        if solution.is_optimal() {
            let x = &solution.primal;
            let scale = 1.0 + x.iter().map(|v| v.abs().to_f64().unwrap_or(f64::MAX)).fold(0.0, f64::max);
            let violation = model.max_violation_within(x, lower, upper).to_f64().unwrap_or(f64::MAX);
            if violation > self.tol * scale * 1e3 {
                return Err(SolverError::Numeric(format!(
                    "float solve violates constraints by {violation:e}"
                )));
            }
        }
        Ok(solution)
    }
}

/// A backend plus the bookkeeping shared by all solves in one run: an LP
/// counter, an optional dump directory, and the branch-and-bound limits.
pub struct LpEngine {
    backend: Box<dyn LpBackend>,
    dump_dir: Option<PathBuf>,
    solves: AtomicUsize,
    dumps: AtomicUsize,
    pub milp: MilpOptions,
}

impl fmt::Debug for LpEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LpEngine")
            .field("backend", &self.backend.name())
            .field("dump_dir", &self.dump_dir)
            .field("solves", &self.solve_count())
            .finish()
    }
}

impl Default for LpEngine {
    fn default() -> Self {
        Self::exact()
    }
}

impl LpEngine {
    pub fn new(backend: Box<dyn LpBackend>) -> Self {
        Self {
            backend,
            dump_dir: None,
            solves: AtomicUsize::new(0),
            dumps: AtomicUsize::new(0),
            milp: MilpOptions::default(),
        }
    }

    pub fn exact() -> Self {
        Self::new(Box::new(RationalSimplex))
    }

    pub fn float() -> Self {
        Self::new(Box::new(FloatSimplex::default()))
    }

    pub fn by_name(name: &str) -> Result<Self, SolverError> {
        match name.trim().to_ascii_lowercase().as_str() {
            "" | "rational" | "exact" => Ok(Self::exact()),
            "float" | "f64" => Ok(Self::float()),
            other => Err(SolverError::UnknownBackend(other.to_string())),
        }
    }

    /// Backend chosen by `DDSG_LP_BACKEND`, exact when unset.
    pub fn from_env() -> Result<Self, SolverError> {
        match std::env::var(BACKEND_ENV) {
            Ok(name) => Self::by_name(&name),
            Err(_) => Ok(Self::exact()),
        }
    }

    pub fn with_dump_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.dump_dir = Some(dir.into());
        self
    }

    pub fn backend_name(&self) -> &'static str {
        self.backend.name()
    }

    pub fn feasibility_tol(&self) -> f64 {
        self.backend.feasibility_tol()
    }

    /// Number of LP relaxations solved so far, branch-and-bound nodes
    /// included.
    pub fn solve_count(&self) -> usize {
        self.solves.load(Ordering::Relaxed)
    }

    pub fn solve_lp(&self, model: &LpModel) -> Result<LpSolution, SolverError> {
        model.validate()?;
        if model.has_integers() {
            return Err(SolverError::InvalidModel(
                "model has integer variables; use solve_milp".into(),
            ));
        }
        self.dump(model)?;
        self.relaxation(model, &model.lower, &model.upper)
    }

    /// Exact optimum over the integer-flagged variables by depth-first
    /// branch-and-bound.
    pub fn solve_milp(&self, model: &LpModel) -> Result<LpSolution, SolverError> {
        model.validate()?;
        self.dump(model)?;
        milp::branch_and_bound(self, model)
    }

    pub(crate) fn relaxation(
        &self,
        model: &LpModel,
        lower: &[Rational],
        upper: &[Option<Rational>],
    ) -> Result<LpSolution, SolverError> {
        self.solves.fetch_add(1, Ordering::Relaxed);
        self.backend.solve_bounded(model, lower, upper)
    }

    fn dump(&self, model: &LpModel) -> Result<(), SolverError> {
        let Some(dir) = &self.dump_dir else {
            return Ok(());
        };
        let idx = self.dumps.fetch_add(1, Ordering::Relaxed);
        write_dump(dir, idx, model)
            .map_err(|e| SolverError::ResourceExhausted(format!("cannot write LP dump: {e}")))
    }
}

fn write_dump(dir: &Path, idx: usize, model: &LpModel) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(format!("model_{idx:06}.lp")), write_lp_format(model))
}

/// Solves a continuous LP with the exact backend.
pub fn solve_lp(model: &LpModel) -> Result<LpSolution, SolverError> {
    LpEngine::exact().solve_lp(model)
}

/// Solves a mixed-integer program with the exact backend.
pub fn solve_milp(model: &LpModel) -> Result<LpSolution, SolverError> {
    LpEngine::exact().solve_milp(model)
}
