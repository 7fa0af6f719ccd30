#![allow(dead_code)]

use chigf::canon::{extension_candidates, LatticeGraph};
use chigf::field::MoserPoint;
use chigf::lp::{solve, LpModel, LpRow, Mode, Sense, Solution};
use chigf::udgraph::VertexSet;
use chigf::Rational;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Grows a graph from the origin, each step adding the extension candidate
/// picked by the next choice value.
pub fn grow(choices: &[u16], n: usize) -> Vec<MoserPoint> {
    let mut pts = vec![MoserPoint::from_coeffs([0, 0, 0, 0])];
    for &c in choices.iter().take(n.saturating_sub(1)) {
        let cand: Vec<MoserPoint> = extension_candidates(&LatticeGraph::new(pts.clone()))
            .into_iter()
            .collect();
        pts.push(cand[c as usize % cand.len()]);
    }
    pts
}

pub fn lattice_graph(min: usize, max: usize) -> impl Strategy<Value = Vec<MoserPoint>> {
    (min..=max, prop::collection::vec(any::<u16>(), max)).prop_map(|(n, c)| grow(&c, n))
}

pub fn xy(p: MoserPoint) -> (f64, f64) {
    let w1 = (0.5f64, 3f64.sqrt() / 2.0);
    let w3 = (5.0 / 6.0, 11f64.sqrt() / 6.0);
    let w13 = (w1.0 * w3.0 - w1.1 * w3.1, w1.0 * w3.1 + w1.1 * w3.0);
    let [a, b, c, d] = p.coeffs().map(|v| v as f64);
    (
        a + b * w1.0 + c * w3.0 + d * w13.0,
        b * w1.1 + c * w3.1 + d * w13.1,
    )
}

pub fn dist(p: MoserPoint, q: MoserPoint) -> f64 {
    let (a, b) = (xy(p), xy(q));
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Congruence by searching for a distance-preserving bijection in floating point.
pub fn congruent_by_float(y: &[MoserPoint], z: &[MoserPoint]) -> bool {
    y.len() == z.len()
        && permutations(y.len()).into_iter().any(|perm| {
            (0..y.len()).all(|i| {
                (0..i).all(|j| (dist(y[i], y[j]) - dist(z[perm[i]], z[perm[j]])).abs() < 1e-9)
            })
        })
}

/// Independent sets (nonempty, as bitmasks) found by testing every subset
/// against floating-point distances.
pub fn independent_sets_by_float(pts: &[MoserPoint]) -> Vec<u64> {
    let n = pts.len();
    let adjacent = |i: usize, j: usize| (dist(pts[i], pts[j]) - 1.0).abs() < 1e-9;
    (1u64..(1 << n))
        .filter(|s| {
            (0..n)
                .all(|i| (0..i).all(|j| s & (1 << i) == 0 || s & (1 << j) == 0 || !adjacent(i, j)))
        })
        .collect()
}

fn members(pts: &[MoserPoint], s: u64) -> Vec<MoserPoint> {
    (0..pts.len())
        .filter(|i| s & (1 << i) != 0)
        .map(|i| pts[i])
        .collect()
}

/// χ_gf straight from the definition: a regular fractional colouring (every
/// vertex covered exactly once) whose aggregate agrees on every pair of
/// congruent independent sets, with congruence decided in floating point.
pub fn chi_gf_oracle_model(pts: &[MoserPoint]) -> LpModel {
    let sets = independent_sets_by_float(pts);
    let column = |s: u64| sets.binary_search(&s).unwrap() as u32;
    let mut rows = Vec::new();
    for v in 0..pts.len() {
        rows.push(LpRow {
            name: format!("cover{}", v),
            coeffs: sets
                .iter()
                .enumerate()
                .filter(|(_, &s)| s & (1 << v) != 0)
                .map(|(j, _)| (j as u32, 1))
                .collect(),
            sense: Sense::Eq,
            rhs: Rational::one(),
        });
    }
    let supersets = |y: u64| -> Vec<(u32, i64)> {
        sets.iter()
            .filter(|&&s| s & y == y)
            .map(|&s| (column(s), 1))
            .collect()
    };
    let mut reps: Vec<u64> = Vec::new();
    for &z in &sets {
        let zp = members(pts, z);
        match reps
            .iter()
            .find(|&&r| congruent_by_float(&members(pts, r), &zp))
        {
            Some(&r) => {
                let mut coeffs = supersets(r);
                for (j, c) in supersets(z) {
                    match coeffs.iter_mut().find(|(k, _)| *k == j) {
                        Some(e) => e.1 -= c,
                        None => coeffs.push((j, -c)),
                    }
                }
                coeffs.retain(|&(_, c)| c != 0);
                coeffs.sort_unstable();
                rows.push(LpRow {
                    name: format!("congr{}", rows.len()),
                    coeffs,
                    sense: Sense::Eq,
                    rhs: Rational::zero(),
                });
            }
            None => reps.push(z),
        }
    }
    LpModel {
        name: "chi_gf_oracle".into(),
        cost: vec![1; sets.len()],
        free: vec![false; sets.len()],
        rows,
        columns: sets.iter().map(|&s| VertexSet(s)).collect(),
    }
}

pub fn chi_gf_oracle(pts: &[MoserPoint], mode: &Mode) -> Solution {
    let sol = solve(&chi_gf_oracle_model(pts), mode).unwrap();
    assert!(sol.is_optimal(), "oracle LP status {:?}", sol.status);
    sol
}
