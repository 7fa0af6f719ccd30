//! Exact Gaussian elimination over the rationals.

use num_traits::{Signed, Zero};

use crate::field::Rational;

/// Solves `m·x = rhs` for square or rectangular `m`, setting free variables
/// to zero. Returns `None` if the system is inconsistent.
pub fn solve(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        rhs.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut().skip(c) {
            *v *= &inv;
        }
        rhs[r] *= &inv;
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for (k, row) in rest.iter_mut().enumerate() {
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in row.iter_mut().zip(pivot_row).skip(c) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            let delta = &f * &rhs[r];
            rhs[r + 1 + k] -= delta;
        }
        pivots.push((r, c));
        r += 1;
    }
    if rhs[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for &(pr, pc) in pivots.iter().rev() {
        let mut v = rhs[pr].clone();
        for c in pc + 1..cols {
            if !m[pr][c].is_zero() && !x[c].is_zero() {
                v -= &m[pr][c] * &x[c];
            }
        }
        x[pc] = v;
    }
    Some(x)
}

/// Basis of `{z : m·z = 0}`.
pub fn null_space(mut m: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut z = vec![Rational::zero(); cols];
            z[f] = Rational::from_integer(1.into());
            for (k, &pc) in pivot_cols.iter().enumerate() {
                z[pc] = -m[k][f].clone();
            }
            z
        })
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Largest absolute entry.
pub fn max_abs(v: &[Rational]) -> Rational {
    v.iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}
