//! Linear programs for the fractional and geometric fractional chromatic
//! numbers.
//!
//! Models are always minimizations with integer coefficients and rational
//! right-hand sides. Small models are solved exactly by a rational simplex;
//! larger ones by a floating simplex or an external solver reached through
//! LP files.

mod colgen;
mod format;
mod simplex;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::congr::{congruence_classes, spanning_pairs, ConstraintSystem};
use crate::error::{Error, Result};
use crate::field::{rat_int, Rational};
use crate::udgraph::{enumerate_independent_sets, UnitGraph, VertexSet};

pub use format::{
    export_lp, import_lp, model_hash, read_solution, ExternalSolution, EXTERNAL_SOLVER_ENV,
};

use simplex::{solve_dense, RawSolution};

/// Default column cap for [`solve_exact`].
pub const DEFAULT_EXACT_CAP: usize = 50_000;
/// Largest dense tableau (rows × columns) the in-process floating solver builds.
pub const DEFAULT_DENSE_CAP: usize = 40_000_000;
pub const DEFAULT_COLGEN_ABOVE: usize = 50_000;
pub const DEFAULT_COLGEN_BATCH: usize = 4_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub name: String,
    /// Sparse `(variable, coefficient)` entries, ascending by variable.
    pub coeffs: Vec<(u32, i64)>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// `minimize ⟨cost, x⟩` subject to `rows`, with `x_j ≥ 0` unless `free[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LpModel {
    pub name: String,
    pub cost: Vec<i64>,
    pub free: Vec<bool>,
    pub rows: Vec<LpRow>,
    /// Independent set behind each variable, for models built from a graph.
    pub columns: Vec<VertexSet>,
}

impl LpModel {
    pub fn n_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.coeffs.len()).sum()
    }

    pub fn objective_of(&self, x: &[Rational]) -> Rational {
        self.cost
            .iter()
            .zip(x)
            .filter(|(c, _)| **c != 0)
            .fold(Rational::zero(), |acc, (c, v)| acc + rat_int(*c) * v)
    }

    /// Exact primal feasibility of `x`.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.n_vars() {
            return false;
        }
        let bounds = x
            .iter()
            .zip(&self.free)
            .all(|(v, f)| *f || *v >= Rational::zero());
        bounds
            && self.rows.iter().all(|r| {
                let lhs = r.coeffs.iter().fold(Rational::zero(), |acc, (j, c)| {
                    acc + rat_int(*c) * &x[*j as usize]
                });
                match r.sense {
                    Sense::Le => lhs <= r.rhs,
                    Sense::Ge => lhs >= r.rhs,
                    Sense::Eq => lhs == r.rhs,
                }
            })
    }

    /// Largest violation of a row or bound by a floating point `x`.
    pub fn primal_residual(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (v, f) in x.iter().zip(&self.free) {
            if !f {
                worst = worst.max(-v);
            }
        }
        for r in &self.rows {
            let lhs: f64 = r
                .coeffs
                .iter()
                .map(|&(j, c)| c as f64 * x[j as usize])
                .sum();
            let rhs = r.rhs.to_f64().unwrap_or(f64::NAN);
            let viol = match r.sense {
                Sense::Le => lhs - rhs,
                Sense::Ge => rhs - lhs,
                Sense::Eq => (lhs - rhs).abs(),
            };
            worst = worst.max(viol);
        }
        worst
    }

    /// Reduced costs `c − Aᵀy` under row duals `y`.
    pub fn reduced_costs(&self, y: &[Rational]) -> Vec<Rational> {
        let mut d: Vec<Rational> = self.cost.iter().map(|&c| rat_int(c)).collect();
        for (r, yi) in self.rows.iter().zip(y) {
            for &(j, c) in &r.coeffs {
                d[j as usize] -= rat_int(c) * yi;
            }
        }
        d
    }

    pub fn reduced_costs_f64(&self, y: &[f64]) -> Vec<f64> {
        let mut d: Vec<f64> = self.cost.iter().map(|&c| c as f64).collect();
        for (r, yi) in self.rows.iter().zip(y) {
            for &(j, c) in &r.coeffs {
                d[j as usize] -= c as f64 * yi;
            }
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    NumericFailure,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
            Status::NumericFailure => "numeric-failure",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    ExactRational,
    Floating,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactValues {
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
    pub objective: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Residuals {
    /// Largest row or bound violation of the primal point.
    pub primal: f64,
    /// Largest negative reduced cost, or NaN when duals are unavailable.
    pub dual: f64,
    /// `|primal objective − dual objective|`, or NaN without duals.
    pub gap: f64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub status: Status,
    pub arithmetic: Arithmetic,
    pub objective: f64,
    pub primal: Vec<f64>,
    /// One value per row; empty if the backend reports none.
    pub dual: Vec<f64>,
    pub exact: Option<ExactValues>,
    pub residuals: Residuals,
    /// Simplex pivots, or rounds when solved by column generation.
    pub pivots: usize,
}

impl Solution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    pub fn exact_objective(&self) -> Option<&Rational> {
        self.exact.as_ref().map(|e| &e.objective)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub feasibility: f64,
    pub value: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            feasibility: 1e-9,
            value: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    InProcess,
    /// Shell command template with `{lp}` and `{sol}` placeholders.
    External(String),
}

impl Backend {
    /// External solver when the environment names one, in-process otherwise.
    pub fn from_env() -> Backend {
        match std::env::var(EXTERNAL_SOLVER_ENV) {
            Ok(cmd) if !cmd.trim().is_empty() => Backend::External(cmd),
            _ => Backend::InProcess,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericConfig {
    pub backend: Backend,
    pub tolerances: Tolerances,
    pub dense_cap: usize,
    /// Models with more columns than this are solved by column generation.
    pub colgen_above: usize,
    /// Columns priced into the restricted model per round.
    pub colgen_batch: usize,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            backend: Backend::InProcess,
            tolerances: Tolerances::default(),
            dense_cap: DEFAULT_DENSE_CAP,
            colgen_above: DEFAULT_COLGEN_ABOVE,
            colgen_batch: DEFAULT_COLGEN_BATCH,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Exact { cap: usize },
    Numeric(NumericConfig),
}

impl Mode {
    pub fn exact() -> Mode {
        Mode::Exact {
            cap: DEFAULT_EXACT_CAP,
        }
    }

    pub fn numeric() -> Mode {
        Mode::Numeric(NumericConfig::default())
    }
}

fn cap_check(columns: usize, mode: &Mode) -> Result<()> {
    if let Mode::Exact { cap } = mode {
        if columns > *cap {
            return Err(Error::CapExceeded {
                what: "LP columns",
                got: columns,
                cap: *cap,
            });
        }
    }
    Ok(())
}

/// Covering LP over the given columns: `min Σx`, `Σ_{S∋v} x_S ≥ 1` per vertex
/// (or `= 1` when `regular`), `x ≥ 0`.
pub fn chi_f_model_over(n_vertices: usize, columns: Vec<VertexSet>, regular: bool) -> LpModel {
    let mut rows: Vec<LpRow> = (0..n_vertices)
        .map(|v| LpRow {
            name: format!("v{}", v),
            coeffs: Vec::new(),
            sense: if regular { Sense::Eq } else { Sense::Ge },
            rhs: rat_int(1),
        })
        .collect();
    for (j, s) in columns.iter().enumerate() {
        for v in s.iter() {
            rows[v].coeffs.push((j as u32, 1));
        }
    }
    LpModel {
        name: if regular {
            "chi_f_regular".into()
        } else {
            "chi_f".into()
        },
        cost: vec![1; columns.len()],
        free: vec![false; columns.len()],
        rows,
        columns,
    }
}

pub fn chi_f_model(g: &UnitGraph, regular: bool) -> LpModel {
    chi_f_model_over(g.len(), enumerate_independent_sets(g), regular)
}

/// `min ⟨1, x⟩` subject to `⟨e, x⟩ = 1`, `C·x = 0`, `x ≥ 0`.
pub fn chi_gf_model_from(sys: &ConstraintSystem) -> LpModel {
    let mut rows = Vec::with_capacity(sys.n_rows() + 1);
    rows.push(LpRow {
        name: "norm".into(),
        coeffs: sys.e.iter().map(|&j| (j, 1)).collect(),
        sense: Sense::Eq,
        rhs: rat_int(1),
    });
    for (i, r) in sys.rows.iter().enumerate() {
        rows.push(LpRow {
            name: format!("c{}", i),
            coeffs: r
                .entries()
                .into_iter()
                .map(|(j, v)| (j as u32, v as i64))
                .collect(),
            sense: Sense::Eq,
            rhs: Rational::zero(),
        });
    }
    LpModel {
        name: "chi_gf".into(),
        cost: vec![1; sys.n_cols],
        free: vec![false; sys.n_cols],
        rows,
        columns: sys.columns.clone(),
    }
}

pub fn chi_gf_model(g: &UnitGraph) -> LpModel {
    chi_gf_model_from(&crate::congr::build_constraints(g))
}

fn nonempty(g: &UnitGraph) -> Result<()> {
    if g.is_empty() {
        Err(Error::EmptySet)
    } else {
        Ok(())
    }
}

pub fn chi_f(g: &UnitGraph, mode: &Mode) -> Result<Solution> {
    nonempty(g)?;
    let columns = enumerate_independent_sets(g);
    cap_check(columns.len(), mode)?;
    solve(&chi_f_model_over(g.len(), columns, false), mode)
}

pub fn chi_gf(g: &UnitGraph, mode: &Mode) -> Result<Solution> {
    nonempty(g)?;
    let columns = enumerate_independent_sets(g);
    cap_check(columns.len(), mode)?;
    let sys = crate::congr::build_constraints_over(g, columns);
    solve(&chi_gf_model_from(&sys), mode)
}

pub fn solve(model: &LpModel, mode: &Mode) -> Result<Solution> {
    match mode {
        Mode::Exact { cap } => solve_exact(model, *cap),
        Mode::Numeric(cfg) => solve_numeric(model, cfg),
    }
}

fn pivot_budget(model: &LpModel) -> usize {
    200 * (model.n_rows() + model.n_vars()) + 10_000
}

/// Exact rational simplex: Dantzig pricing, switching to Bland's rule after a degenerate stall.
pub fn solve_exact(model: &LpModel, cap: usize) -> Result<Solution> {
    if model.n_vars() > cap {
        return Err(Error::CapExceeded {
            what: "LP columns",
            got: model.n_vars(),
            cap,
        });
    }
    let raw: RawSolution<Rational> = solve_dense(model, usize::MAX);
    let to_f = |v: &Rational| v.to_f64().unwrap_or(f64::NAN);
    let exact = ExactValues {
        primal: raw.primal,
        dual: raw.dual,
        objective: raw.objective,
    };
    let ok = raw.status == Status::Optimal;
    Ok(Solution {
        status: raw.status,
        arithmetic: Arithmetic::ExactRational,
        objective: to_f(&exact.objective),
        primal: exact.primal.iter().map(to_f).collect(),
        dual: exact.dual.iter().map(to_f).collect(),
        residuals: Residuals::default(),
        exact: ok.then_some(exact),
        pivots: raw.pivots,
    })
}

/// Checks an exact solution: primal and dual feasibility and equal
/// objectives, all in rational arithmetic.
pub fn verify_exact(model: &LpModel, ex: &ExactValues) -> bool {
    if !model.is_feasible(&ex.primal) || ex.dual.len() != model.n_rows() {
        return false;
    }
    let dual_ok = model.rows.iter().zip(&ex.dual).all(|(r, y)| match r.sense {
        Sense::Ge => *y >= Rational::zero(),
        Sense::Le => *y <= Rational::zero(),
        Sense::Eq => true,
    });
    let reduced = model.reduced_costs(&ex.dual);
    let reduced_ok = reduced.iter().zip(&model.free).all(|(d, f)| {
        if *f {
            d.is_zero()
        } else {
            *d >= Rational::zero()
        }
    });
    let dual_obj = model
        .rows
        .iter()
        .zip(&ex.dual)
        .fold(Rational::zero(), |acc, (r, y)| acc + &r.rhs * y);
    dual_ok
        && reduced_ok
        && dual_obj == ex.objective
        && model.objective_of(&ex.primal) == ex.objective
}

fn numeric_residuals(model: &LpModel, primal: &[f64], dual: &[f64], objective: f64) -> Residuals {
    let primal_res = model.primal_residual(primal);
    if dual.len() != model.n_rows() {
        return Residuals {
            primal: primal_res,
            dual: f64::NAN,
            gap: f64::NAN,
        };
    }
    let reduced = model.reduced_costs_f64(dual);
    let dual_res = reduced
        .iter()
        .zip(&model.free)
        .map(|(d, f)| if *f { d.abs() } else { (-d).max(0.0) })
        .fold(0.0, f64::max);
    let dual_obj: f64 = model
        .rows
        .iter()
        .zip(dual)
        .map(|(r, y)| r.rhs.to_f64().unwrap_or(f64::NAN) * y)
        .sum();
    Residuals {
        primal: primal_res,
        dual: dual_res,
        gap: (objective - dual_obj).abs(),
    }
}

pub fn solve_numeric(model: &LpModel, cfg: &NumericConfig) -> Result<Solution> {
    let (status, primal, dual, pivots) = match &cfg.backend {
        _ if model.n_vars() > cfg.colgen_above => {
            let out = colgen::solve_colgen(model, cfg)?;
            log::info!(
                "column generation: {} rounds, {} active columns",
                out.rounds,
                out.active
            );
            (out.status, out.primal, out.dual, out.rounds)
        }
        Backend::InProcess => {
            let cells = model
                .n_rows()
                .saturating_mul(model.n_vars() + 2 * model.n_rows());
            if cells > cfg.dense_cap {
                return Err(Error::CapExceeded {
                    what: "dense tableau cells",
                    got: cells,
                    cap: cfg.dense_cap,
                });
            }
            let raw: RawSolution<f64> = solve_dense(model, pivot_budget(model));
            (raw.status, raw.primal, raw.dual, raw.pivots)
        }
        Backend::External(cmd) => {
            let sol = format::run_external(model, cmd)?;
            (sol.status, sol.primal, sol.dual, 0)
        }
    };
    let objective: f64 = model
        .cost
        .iter()
        .zip(&primal)
        .map(|(c, x)| *c as f64 * x)
        .sum();
    let residuals = numeric_residuals(model, &primal, &dual, objective);
    if status == Status::Optimal && residuals.primal > cfg.tolerances.feasibility {
        return Err(Error::Numeric(format!(
            "primal residual {:.3e} exceeds tolerance {:.1e}",
            residuals.primal, cfg.tolerances.feasibility
        )));
    }
    Ok(Solution {
        status,
        arithmetic: Arithmetic::Floating,
        objective,
        primal,
        dual,
        exact: None,
        residuals,
        pivots,
    })
}

/// Outcome of checking an integer colouring against the χ_gf constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfcReport {
    /// Colour classes as vertex sets (sorted-vertex indices), by colour.
    pub classes: BTreeMap<usize, VertexSet>,
    pub monochromatic_edges: Vec<(usize, usize)>,
    /// Number of classes containing vertex 0.
    pub e_value: usize,
    pub rows_checked: usize,
    /// Spanning pairs `(Y, Y')` covered by different numbers of classes.
    pub violated: Vec<(VertexSet, VertexSet)>,
}

impl GfcReport {
    pub fn is_proper(&self) -> bool {
        self.monochromatic_edges.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.is_proper() && self.e_value == 1 && self.violated.is_empty()
    }

    /// Number of colour classes, the weight of the indicator colouring.
    pub fn weight(&self) -> usize {
        self.classes.len()
    }
}

/// Checks that an integer colouring, given per vertex in input order with
/// colours `1..=|G|`, is proper and that its class indicator satisfies
/// `⟨e, x⟩ = 1` and `C·x = 0` exactly.
pub fn verify_colouring_in_gfc(g: &UnitGraph, colours: &[usize]) -> Result<GfcReport> {
    if colours.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: g.len(),
            got: colours.len(),
        });
    }
    let mut classes: BTreeMap<usize, VertexSet> = BTreeMap::new();
    for (k, &c) in colours.iter().enumerate() {
        if c == 0 || c > g.len() {
            return Err(Error::ColourOutOfRange {
                vertex: k,
                colour: c,
            });
        }
        let v = g.vertex_of_input(k);
        let e = classes.entry(c).or_default();
        *e = e.with(v);
    }
    let monochromatic_edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(u, v)| classes.values().any(|s| s.contains(u) && s.contains(v)))
        .collect();
    let e_value = classes.values().filter(|s| s.contains(0)).count();
    let columns = enumerate_independent_sets(g);
    let pairs = spanning_pairs(&congruence_classes(g, &columns));
    let covered = |y: VertexSet| classes.values().filter(|s| y.is_subset(**s)).count();
    let violated = pairs
        .iter()
        .map(|&(a, b)| (columns[a], columns[b]))
        .filter(|&(y, yp)| covered(y) != covered(yp))
        .collect();
    Ok(GfcReport {
        classes,
        monochromatic_edges,
        e_value,
        rows_checked: pairs.len(),
        violated,
    })
}
