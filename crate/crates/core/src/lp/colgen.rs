//! Delayed column generation for models with many columns: solve over a
//! growing subset of columns plus big-M artificials, price the rest with
//! the row duals, and stop once no column has negative reduced cost.

use crate::error::{Error, Result};

use super::simplex::{solve_dense, RawSolution};
use super::{format, Backend, LpModel, LpRow, NumericConfig, Sense, Status};

const PRICE_TOL: f64 = 1e-9;
const MAX_ROUNDS: usize = 1_000;
const BIG_M_START: i64 = 1_000;
const BIG_M_LIMIT: i64 = 1_000_000_000_000;

pub(crate) struct ColgenOutcome {
    pub status: Status,
    pub primal: Vec<f64>,
    pub dual: Vec<f64>,
    pub rounds: usize,
    pub active: usize,
}

fn restricted(model: &LpModel, active: &[usize], big_m: i64) -> LpModel {
    let mut pos = vec![u32::MAX; model.n_vars()];
    for (k, &j) in active.iter().enumerate() {
        pos[j] = k as u32;
    }
    let mut cost: Vec<i64> = active.iter().map(|&j| model.cost[j]).collect();
    let mut free: Vec<bool> = active.iter().map(|&j| model.free[j]).collect();
    let mut next = active.len() as u32;
    let mut art = |signs: &[i64], coeffs: &mut Vec<(u32, i64)>| {
        for &s in signs {
            coeffs.push((next, s));
            cost.push(big_m);
            free.push(false);
            next += 1;
        }
    };
    let rows = model
        .rows
        .iter()
        .map(|r| {
            let mut coeffs: Vec<(u32, i64)> = r
                .coeffs
                .iter()
                .filter(|(j, _)| pos[*j as usize] != u32::MAX)
                .map(|&(j, c)| (pos[j as usize], c))
                .collect();
            match r.sense {
                Sense::Eq => art(&[1, -1], &mut coeffs),
                Sense::Ge => art(&[1], &mut coeffs),
                Sense::Le => art(&[-1], &mut coeffs),
            }
            LpRow {
                name: r.name.clone(),
                coeffs,
                sense: r.sense,
                rhs: r.rhs.clone(),
            }
        })
        .collect();
    LpModel {
        name: model.name.clone(),
        cost,
        free,
        rows,
        columns: Vec::new(),
    }
}

fn run(sub: &LpModel, cfg: &NumericConfig) -> Result<(Status, Vec<f64>, Vec<f64>)> {
    match &cfg.backend {
        Backend::InProcess => {
            let cells = sub.n_rows().saturating_mul(sub.n_vars() + 2 * sub.n_rows());
            if cells > cfg.dense_cap {
                return Err(Error::CapExceeded {
                    what: "dense tableau cells",
                    got: cells,
                    cap: cfg.dense_cap,
                });
            }
            let raw: RawSolution<f64> = solve_dense(sub, super::pivot_budget(sub));
            Ok((raw.status, raw.primal, raw.dual))
        }
        Backend::External(cmd) => {
            let sol = format::run_external(sub, cmd)?;
            Ok((sol.status, sol.primal, sol.dual))
        }
    }
}

pub(crate) fn solve_colgen(model: &LpModel, cfg: &NumericConfig) -> Result<ColgenOutcome> {
    let n = model.n_vars();
    let mut active: Vec<usize> = Vec::new();
    let mut in_active = vec![false; n];
    let mut big_m = BIG_M_START;
    for round in 1..=MAX_ROUNDS {
        let sub = restricted(model, &active, big_m);
        let (status, x, y) = run(&sub, cfg)?;
        if status != Status::Optimal {
            return Ok(ColgenOutcome {
                status,
                primal: Vec::new(),
                dual: Vec::new(),
                rounds: round,
                active: active.len(),
            });
        }
        if y.len() != model.n_rows() {
            return Err(Error::Numeric(
                "column generation needs row duals from the backend".into(),
            ));
        }
        let d = model.reduced_costs_f64(&y);
        let mut entering: Vec<(f64, usize)> = (0..n)
            .filter(|&j| !in_active[j])
            .filter_map(|j| {
                let v = if model.free[j] { -d[j].abs() } else { d[j] };
                (v < -PRICE_TOL).then_some((v, j))
            })
            .collect();
        let art_mass: f64 = x[active.len()..].iter().sum();
        log::info!(
            "column generation round {}: {} active, {} priced in, artificial mass {:.3e}, M {}",
            round,
            active.len(),
            entering.len().min(cfg.colgen_batch),
            art_mass,
            big_m
        );
        if entering.is_empty() {
            if art_mass <= cfg.tolerances.feasibility {
                let mut primal = vec![0.0; n];
                for (k, &j) in active.iter().enumerate() {
                    primal[j] = x[k];
                }
                return Ok(ColgenOutcome {
                    status: Status::Optimal,
                    primal,
                    dual: y,
                    rounds: round,
                    active: active.len(),
                });
            }
            if big_m >= BIG_M_LIMIT {
                return Ok(ColgenOutcome {
                    status: Status::Infeasible,
                    primal: Vec::new(),
                    dual: Vec::new(),
                    rounds: round,
                    active: active.len(),
                });
            }
            big_m = big_m.saturating_mul(1_000);
            continue;
        }
        entering.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        entering.truncate(cfg.colgen_batch.max(1));
        for (_, j) in entering {
            in_active[j] = true;
            active.push(j);
        }
        active.sort_unstable();
    }
    Ok(ColgenOutcome {
        status: Status::NumericFailure,
        primal: Vec::new(),
        dual: Vec::new(),
        rounds: MAX_ROUNDS,
        active: active.len(),
    })
}
