//! Exact lower-bound certificates for the geometric fractional chromatic
//! number.
//!
//! A rational vector `y` with `yᵀC − t·e + 1 ≥ 0` in every column proves
//! `χ_gf(G) ≥ t` by weak duality. Witnesses are produced from a floating
//! point max-margin dual solution by rationalizing it, pinning the nearly
//! active columns, and projecting orthogonally onto their affine hull.

pub mod linalg;

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::congr::{build_constraints, ConstraintSystem};
use crate::error::{Error, Result};
use crate::field::{rat_int, Rational};
use crate::lp::{solve_numeric, ExactValues, LpModel, LpRow, NumericConfig, Sense, Status};
use crate::udgraph::UnitGraph;

pub const DEFAULT_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualWitness {
    pub target: Rational,
    /// One entry per row of `C`.
    pub y: Vec<Rational>,
}

fn render(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rational(t: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational {:?}", t));
    let (n, d) = t.split_once('/').unwrap_or((t, "1"));
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

impl DualWitness {
    /// `target n/d` followed by one `n/d` per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("target {}\n", render(&self.target));
        for v in &self.y {
            s.push_str(&render(v));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head = lines
            .next()
            .ok_or_else(|| Error::Parse("empty witness file".into()))?;
        let target = head
            .strip_prefix("target ")
            .ok_or_else(|| Error::Parse(format!("bad witness header {:?}", head)))?;
        let target = parse_rational(target.trim())?;
        let y = lines
            .map(|l| parse_rational(l.trim()))
            .collect::<Result<Vec<_>>>()?;
        Ok(DualWitness { target, y })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Witness read off exact duals of the χ_gf model: the first row is
    /// `⟨e, x⟩ = 1`, the rest are the rows of `C`.
    pub fn from_exact_dual(dual: &ExactValues) -> Self {
        DualWitness {
            target: dual.dual[0].clone(),
            y: dual.dual[1..].iter().map(|v| -v).collect(),
        }
    }
}

/// `(yᵀC)_j − t·e_j + 1` for every column, computed exactly.
pub fn witness_slacks(
    sys: &ConstraintSystem,
    y: &[Rational],
    t: &Rational,
) -> Result<Vec<Rational>> {
    if y.len() != sys.n_rows() {
        return Err(Error::DimensionMismatch {
            expected: sys.n_rows(),
            got: y.len(),
        });
    }
    let den = y
        .iter()
        .fold(t.denom().clone(), |acc, v| acc.lcm(v.denom()));
    let scaled: Vec<BigInt> = y.iter().map(|v| v.numer() * (&den / v.denom())).collect();
    let chunk = sys
        .n_rows()
        .div_ceil(rayon::current_num_threads().max(1) * 4)
        .max(1);
    let n = sys.n_cols;
    let acc = sys
        .rows
        .par_chunks(chunk)
        .zip(scaled.par_chunks(chunk))
        .fold(
            || vec![BigInt::zero(); n],
            |mut acc, (rows, ys)| {
                for (r, v) in rows.iter().zip(ys) {
                    if v.is_zero() {
                        continue;
                    }
                    for &j in &r.plus {
                        acc[j as usize] += v;
                    }
                    for &j in &r.minus {
                        acc[j as usize] -= v;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![BigInt::zero(); n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let t_scaled = t * Rational::from_integer(den.clone());
    let t_num = t_scaled.to_integer();
    let e = sys.e_dense();
    Ok(acc
        .into_iter()
        .enumerate()
        .map(|(j, v)| {
            let mut s = v + &den;
            if e[j] {
                s -= &t_num;
            }
            Rational::new(s, den.clone())
        })
        .collect())
}

/// Exact check of `yᵀC − t·e + 1 ≥ 0`.
pub fn check_witness(sys: &ConstraintSystem, y: &[Rational], t: &Rational) -> Result<bool> {
    Ok(witness_slacks(sys, y, t)?.iter().all(|s| !s.is_negative()))
}

/// Variables `y_0..y_{m−1}` (free) and `s`; minimize `s` subject to
/// `(yᵀC)_j ≥ t·e_j − 1` for every column and `|y_i| ≤ s`.
pub fn max_margin_model(sys: &ConstraintSystem, t: &Rational) -> LpModel {
    let m = sys.n_rows();
    let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); sys.n_cols];
    for (i, r) in sys.rows.iter().enumerate() {
        for &j in &r.plus {
            cols[j as usize].push((i as u32, 1));
        }
        for &j in &r.minus {
            cols[j as usize].push((i as u32, -1));
        }
    }
    let e = sys.e_dense();
    let mut rows: Vec<LpRow> = cols
        .into_iter()
        .enumerate()
        .map(|(j, coeffs)| LpRow {
            name: format!("col{}", j),
            coeffs,
            sense: Sense::Ge,
            rhs: if e[j] { t - rat_int(1) } else { rat_int(-1) },
        })
        .collect();
    let s = m as u32;
    for i in 0..m as u32 {
        rows.push(LpRow {
            name: format!("up{}", i),
            coeffs: vec![(i, 1), (s, -1)],
            sense: Sense::Le,
            rhs: Rational::zero(),
        });
        rows.push(LpRow {
            name: format!("lo{}", i),
            coeffs: vec![(i, -1), (s, -1)],
            sense: Sense::Le,
            rhs: Rational::zero(),
        });
    }
    let mut cost = vec![0; m + 1];
    cost[m] = 1;
    let mut free = vec![true; m + 1];
    free[m] = false;
    LpModel {
        name: "max_margin_dual".into(),
        cost,
        free,
        rows,
        columns: Vec::new(),
    }
}

/// Floating point dual point of minimal supremum norm.
pub fn max_margin_dual(
    sys: &ConstraintSystem,
    t: &Rational,
    cfg: &NumericConfig,
) -> Result<Vec<f64>> {
    let model = max_margin_model(sys, t);
    let sol = solve_numeric(&model, cfg)?;
    match sol.status {
        Status::Optimal => Ok(sol.primal[..sys.n_rows()].to_vec()),
        Status::Infeasible => Err(Error::Numeric(format!(
            "dual region is empty at target {}",
            t
        ))),
        st => Err(Error::Numeric(format!(
            "max-margin dual solve ended with status {}",
            st
        ))),
    }
}

/// Each float as the exact binary fraction it denotes.
pub fn rationalize(y: &[f64]) -> Result<Vec<Rational>> {
    y.iter()
        .map(|&v| {
            BigRational::from_float(v)
                .ok_or_else(|| Error::Numeric(format!("non-finite value {}", v)))
        })
        .collect()
}

/// Columns whose slack is at most `eps`, violated ones included.
pub fn sharp_set(
    sys: &ConstraintSystem,
    y: &[Rational],
    t: &Rational,
    eps: f64,
) -> Result<Vec<usize>> {
    let eps = BigRational::from_float(eps).ok_or_else(|| Error::Numeric("bad epsilon".into()))?;
    Ok(witness_slacks(sys, y, t)?
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= eps)
        .map(|(j, _)| j)
        .collect())
}

/// Exact orthogonal projection of `y_bar` onto
/// `{y : (yᵀC)_j = t·e_j − 1 for j ∈ sharp}` via the normal equations.
pub fn project_to_witness(
    sys: &ConstraintSystem,
    y_bar: &[Rational],
    sharp: &[usize],
    t: &Rational,
) -> Result<Vec<Rational>> {
    if y_bar.len() != sys.n_rows() {
        return Err(Error::DimensionMismatch {
            expected: sys.n_rows(),
            got: y_bar.len(),
        });
    }
    let k = sharp.len();
    if k == 0 {
        return Ok(y_bar.to_vec());
    }
    let pos: std::collections::HashMap<usize, usize> =
        sharp.iter().enumerate().map(|(a, &j)| (j, a)).collect();
    // a_rows[a] = column sharp[a] of C as sparse (row, coefficient) entries.
    let mut a_rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); k];
    for (i, r) in sys.rows.iter().enumerate() {
        for &j in &r.plus {
            if let Some(&a) = pos.get(&(j as usize)) {
                a_rows[a].push((i, 1));
            }
        }
        for &j in &r.minus {
            if let Some(&a) = pos.get(&(j as usize)) {
                a_rows[a].push((i, -1));
            }
        }
    }
    let e = sys.e_dense();
    let one = rat_int(1);
    let residual: Vec<Rational> = sharp
        .iter()
        .zip(&a_rows)
        .map(|(&j, row)| {
            let ay = row.iter().fold(Rational::zero(), |acc, &(i, c)| {
                if c > 0 {
                    acc + &y_bar[i]
                } else {
                    acc - &y_bar[i]
                }
            });
            let b = if e[j] { t - &one } else { -one.clone() };
            ay - b
        })
        .collect();
    let gram: Vec<Vec<Rational>> = (0..k)
        .into_par_iter()
        .map(|a| {
            let mut row_a = std::collections::HashMap::with_capacity(a_rows[a].len());
            for &(i, c) in &a_rows[a] {
                row_a.insert(i, c);
            }
            (0..k)
                .map(|b| {
                    let dot: i64 = a_rows[b]
                        .iter()
                        .filter_map(|(i, c)| row_a.get(i).map(|ca| ca * c))
                        .sum();
                    rat_int(dot)
                })
                .collect()
        })
        .collect();
    let lambda = linalg::solve(gram, residual).ok_or_else(|| {
        Error::Inconsistent(format!("{} sharp equalities have no common solution", k))
    })?;
    let mut y = y_bar.to_vec();
    for (row, l) in a_rows.iter().zip(&lambda) {
        if l.is_zero() {
            continue;
        }
        for &(i, c) in row {
            if c > 0 {
                y[i] -= l;
            } else {
                y[i] += l;
            }
        }
    }
    Ok(y)
}

/// SHA-256 over the sorted vertex list, one `a b c d` line per vertex.
pub fn graph_hash(g: &UnitGraph) -> String {
    let mut s = String::new();
    for p in g.vertices() {
        writeln!(s, "{}", p).unwrap();
    }
    hex::encode(Sha256::digest(s.as_bytes()))
}

#[derive(Debug, Clone)]
pub struct CertifyConfig {
    pub numeric: NumericConfig,
    pub epsilon: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            numeric: NumericConfig::default(),
            epsilon: DEFAULT_EPSILON,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Certificate {
    pub graph_hash: String,
    pub target: Rational,
    pub witness: Option<DualWitness>,
    pub verdict: bool,
    pub rows: usize,
    pub columns: usize,
    /// Supremum norm of the numeric dual point.
    pub dual_norm: Option<f64>,
    pub sharp: Vec<usize>,
    /// Whether every sharp equality holds exactly after projection.
    pub projection_exact: Option<bool>,
    pub min_slack: Option<Rational>,
    pub failure: Option<String>,
    pub log: Vec<String>,
}

impl Certificate {
    pub fn report(&self) -> String {
        let mut s = String::new();
        let opt = |v: Option<String>| v.unwrap_or_else(|| "n/a".into());
        writeln!(s, "graph_hash: {}", self.graph_hash).unwrap();
        writeln!(s, "target: {}", render(&self.target)).unwrap();
        writeln!(s, "columns: {}", self.columns).unwrap();
        writeln!(s, "rows: {}", self.rows).unwrap();
        writeln!(
            s,
            "dual_norm: {}",
            opt(self.dual_norm.map(|v| format!("{:.12e}", v)))
        )
        .unwrap();
        writeln!(s, "sharp_count: {}", self.sharp.len()).unwrap();
        let idx: Vec<String> = self.sharp.iter().map(|j| j.to_string()).collect();
        writeln!(s, "sharp: {}", idx.join(",")).unwrap();
        writeln!(
            s,
            "projection_exact: {}",
            opt(self.projection_exact.map(|b| b.to_string()))
        )
        .unwrap();
        writeln!(
            s,
            "min_slack: {}",
            opt(self.min_slack.as_ref().map(|v| format!(
                "{} ({:.6e})",
                render(v),
                v.to_f64().unwrap_or(f64::NAN)
            )))
        )
        .unwrap();
        writeln!(s, "failure: {}", opt(self.failure.clone())).unwrap();
        for line in &self.log {
            writeln!(s, "log: {}", line).unwrap();
        }
        writeln!(
            s,
            "verdict: {}",
            if self.verdict { "valid" } else { "invalid" }
        )
        .unwrap();
        s
    }
}

/// Runs the pipeline on a prepared constraint system.
pub fn certify_system(sys: &ConstraintSystem, t: &Rational, cfg: &CertifyConfig) -> Certificate {
    let mut cert = Certificate {
        target: t.clone(),
        rows: sys.n_rows(),
        columns: sys.n_cols,
        ..Default::default()
    };
    if let Err(e) = run_pipeline(sys, t, cfg, &mut cert) {
        cert.verdict = false;
        cert.failure = Some(e.to_string());
    }
    cert
}

fn run_pipeline(
    sys: &ConstraintSystem,
    t: &Rational,
    cfg: &CertifyConfig,
    cert: &mut Certificate,
) -> Result<()> {
    let backend = match &cfg.numeric.backend {
        crate::lp::Backend::InProcess => "in-process floating simplex".to_string(),
        crate::lp::Backend::External(cmd) => format!("external: {}", cmd),
    };
    let y_bar = max_margin_dual(sys, t, &cfg.numeric)?;
    let norm = y_bar.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    cert.dual_norm = Some(norm);
    cert.log.push(format!("max-margin dual from {}", backend));
    let y_rat = rationalize(&y_bar)?;
    cert.sharp = sharp_set(sys, &y_rat, t, cfg.epsilon)?;
    cert.log.push(format!(
        "{} sharp columns at epsilon {:e}",
        cert.sharp.len(),
        cfg.epsilon
    ));
    let y = project_to_witness(sys, &y_rat, &cert.sharp, t)?;
    let slacks = witness_slacks(sys, &y, t)?;
    cert.projection_exact = Some(cert.sharp.iter().all(|&j| slacks[j].is_zero()));
    cert.min_slack = slacks.iter().min().cloned();
    cert.verdict = cert.projection_exact == Some(true) && slacks.iter().all(|s| !s.is_negative());
    cert.log.push(format!(
        "exact check over {} columns: {}",
        slacks.len(),
        if cert.verdict { "passed" } else { "failed" }
    ));
    cert.witness = Some(DualWitness {
        target: t.clone(),
        y,
    });
    Ok(())
}

pub fn certify_chi_gf(g: &UnitGraph, t: &Rational, cfg: &CertifyConfig) -> Certificate {
    let sys = build_constraints(g);
    let mut cert = certify_system(&sys, t, cfg);
    cert.graph_hash = graph_hash(g);
    cert
}
