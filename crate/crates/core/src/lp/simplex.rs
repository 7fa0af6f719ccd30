//! Dense two-phase tableau simplex, generic over exact rationals and `f64`.

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{LpModel, Sense, Status};
use crate::field::Rational;

pub(crate) trait Scalar: Clone + std::fmt::Debug {
    const EXACT: bool;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn is_exact_zero(&self) -> bool;
    /// Large enough to pivot on.
    fn is_pivot(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn lt(&self, o: &Self) -> bool;
    fn abs_gt(&self, o: &Self) -> bool;
    /// `self -= f * o`.
    fn sub_mul_assign(&mut self, f: &Self, o: &Self);
}

impl Scalar for Rational {
    const EXACT: bool = true;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v.into())
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pivot(&self) -> bool {
        self.is_positive()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn abs_gt(&self, o: &Self) -> bool {
        self.abs() > o.abs()
    }
    fn sub_mul_assign(&mut self, f: &Self, o: &Self) {
        if !Zero::is_zero(o) {
            *self -= f * o;
        }
    }
}

const EPS: f64 = 1e-11;

impl Scalar for f64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        self.abs() <= EPS
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_pivot(&self) -> bool {
        *self > 1e-9
    }
    fn is_pos(&self) -> bool {
        *self > EPS
    }
    fn is_neg(&self) -> bool {
        *self < -EPS
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn abs_gt(&self, o: &Self) -> bool {
        self.abs() > o.abs()
    }
    fn sub_mul_assign(&mut self, f: &Self, o: &Self) {
        *self -= f * o;
        if self.abs() < 1e-14 {
            *self = 0.0;
        }
    }
}

pub(crate) struct RawSolution<T> {
    pub status: Status,
    pub primal: Vec<T>,
    pub dual: Vec<T>,
    pub objective: T,
    pub pivots: usize,
}

struct Tableau<T> {
    a: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    /// Reduced costs and the negated objective value.
    d: Vec<T>,
    z: T,
    /// Columns that may enter the basis.
    enterable: usize,
    pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn price(&mut self, cost: &[T]) {
        let n = cost.len();
        self.d = cost.to_vec();
        self.z = T::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for j in 0..n {
                let aij = self.a[i][j].clone();
                self.d[j].sub_mul_assign(cb, &aij);
            }
            self.z.sub_mul_assign(cb, &self.rhs[i].clone());
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let p = self.a[r][q].clone();
        let pivot_row: Vec<T> = self.a[r].iter().map(|v| v.div(&p)).collect();
        let pivot_rhs = self.rhs[r].div(&p);
        for i in 0..self.a.len() {
            if i == r {
                continue;
            }
            let f = self.a[i][q].clone();
            if f.is_exact_zero() {
                continue;
            }
            let row = &mut self.a[i];
            for (v, pr) in row.iter_mut().zip(&pivot_row) {
                v.sub_mul_assign(&f, pr);
            }
            row[q] = T::zero();
            self.rhs[i].sub_mul_assign(&f, &pivot_rhs);
        }
        let f = self.d[q].clone();
        if !f.is_exact_zero() {
            for (v, pr) in self.d.iter_mut().zip(&pivot_row) {
                v.sub_mul_assign(&f, pr);
            }
            self.z.sub_mul_assign(&f, &pivot_rhs);
        }
        self.d[q] = T::zero();
        self.a[r] = pivot_row;
        self.a[r][q] = T::one();
        self.rhs[r] = pivot_rhs;
        self.basis[r] = q;
        self.pivots += 1;
    }

    /// Runs simplex iterations on the current cost row.
    fn optimize(&mut self, max_pivots: usize) -> Status {
        let mut bland = false;
        let mut degenerate_run = 0usize;
        loop {
            if self.pivots >= max_pivots {
                return Status::NumericFailure;
            }
            let q = if bland {
                (0..self.enterable).find(|&j| self.d[j].is_neg())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..self.enterable {
                    if self.d[j].is_neg() && best.is_none_or(|b| self.d[j].lt(&self.d[b])) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(q) = q else { return Status::Optimal };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.a.len() {
                let aiq = &self.a[i][q];
                if !aiq.is_pivot() {
                    continue;
                }
                let ratio = self.rhs[i].div(aiq);
                let better = match &leave {
                    None => true,
                    Some((l, best)) => {
                        let tie = ratio.sub(best).is_zero();
                        if !tie {
                            ratio.lt(best)
                        } else if bland {
                            self.basis[i] < self.basis[*l]
                        } else {
                            aiq.abs_gt(&self.a[*l][q])
                        }
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = leave else {
                return Status::Unbounded;
            };
            if ratio.is_zero() {
                degenerate_run += 1;
                if degenerate_run > 50 {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, q);
        }
    }
}

/// Solves `model` with a dense tableau. Free variables are split, rows are
/// brought to `≥ 0` right-hand sides, and each row gets an identity column
/// that serves both as phase-one artificial (when no slack can start in the
/// basis) and as the handle for reading off the row's dual value.
pub(crate) fn solve_dense<T: Scalar>(model: &LpModel, max_pivots: usize) -> RawSolution<T> {
    let m = model.rows.len();
    let n = model.n_vars();
    let mut col_of_var: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut n_struct = 0;
    for j in 0..n {
        if model.free[j] {
            col_of_var.push((n_struct, Some(n_struct + 1)));
            n_struct += 2;
        } else {
            col_of_var.push((n_struct, None));
            n_struct += 1;
        }
    }
    let slack_rows: Vec<usize> = (0..m)
        .filter(|&i| model.rows[i].sense != Sense::Eq)
        .collect();
    let n_slack = slack_rows.len();
    let ident0 = n_struct + n_slack;
    let total = ident0 + m;

    let mut a = vec![vec![T::zero(); total]; m];
    let mut rhs = vec![T::zero(); m];
    let mut sign = vec![1i64; m];
    let mut basis = vec![0usize; m];
    let mut artificial = vec![false; m];
    let mut slack_col: Vec<Option<usize>> = vec![None; m];
    for (k, &i) in slack_rows.iter().enumerate() {
        slack_col[i] = Some(n_struct + k);
    }
    for (i, row) in model.rows.iter().enumerate() {
        let s = if row.rhs.is_negative() { -1 } else { 1 };
        sign[i] = s;
        for &(j, c) in &row.coeffs {
            let (p, neg) = col_of_var[j as usize];
            a[i][p] = a[i][p].add(&T::from_i64(s * c));
            if let Some(q) = neg {
                a[i][q] = a[i][q].sub(&T::from_i64(s * c));
            }
        }
        rhs[i] = T::from_rational(&(row.rhs.clone() * Rational::from_integer(s.into())));
        let slack_coef = match row.sense {
            Sense::Le => s,
            Sense::Ge => -s,
            Sense::Eq => 0,
        };
        if let Some(sc) = slack_col[i] {
            a[i][sc] = T::from_i64(slack_coef);
        }
        a[i][ident0 + i] = T::one();
        if slack_coef == 1 {
            basis[i] = slack_col[i].unwrap();
        } else {
            basis[i] = ident0 + i;
            artificial[i] = true;
        }
    }
    let mut t = Tableau {
        a,
        rhs,
        basis,
        d: Vec::new(),
        z: T::zero(),
        enterable: ident0,
        pivots: 0,
    };

    if artificial.iter().any(|&b| b) {
        let mut c1 = vec![T::zero(); total];
        for i in 0..m {
            if artificial[i] {
                c1[ident0 + i] = T::one();
            }
        }
        t.price(&c1);
        let st = t.optimize(max_pivots);
        if st != Status::Optimal {
            return failed(st, n, m, t.pivots);
        }
        // z holds minus the phase-one objective.
        if t.z.neg().is_pos() {
            return failed(Status::Infeasible, n, m, t.pivots);
        }
        for i in 0..m {
            if t.basis[i] >= ident0 {
                let mut best: Option<usize> = None;
                for j in 0..ident0 {
                    if !t.a[i][j].is_zero() && best.is_none_or(|b| t.a[i][j].abs_gt(&t.a[i][b])) {
                        best = Some(j);
                        if T::EXACT {
                            break;
                        }
                    }
                }
                if let Some(j) = best {
                    t.pivot(i, j);
                }
            }
        }
    }

    let mut c2 = vec![T::zero(); total];
    for (j, &(p, neg)) in col_of_var.iter().enumerate() {
        let c = T::from_i64(model.cost[j]);
        c2[p] = c.clone();
        if let Some(q) = neg {
            c2[q] = c.neg();
        }
    }
    t.price(&c2);
    let st = t.optimize(max_pivots);
    if st != Status::Optimal {
        return failed(st, n, m, t.pivots);
    }

    let mut value = vec![T::zero(); total];
    for (i, &b) in t.basis.iter().enumerate() {
        value[b] = t.rhs[i].clone();
    }
    let primal = col_of_var
        .iter()
        .map(|&(p, neg)| match neg {
            Some(q) => value[p].sub(&value[q]),
            None => value[p].clone(),
        })
        .collect();
    let dual = (0..m)
        .map(|i| {
            let y = t.d[ident0 + i].neg();
            if sign[i] < 0 {
                y.neg()
            } else {
                y
            }
        })
        .collect();
    RawSolution {
        status: Status::Optimal,
        primal,
        dual,
        objective: t.z.neg(),
        pivots: t.pivots,
    }
}

fn failed<T: Scalar>(status: Status, n: usize, m: usize, pivots: usize) -> RawSolution<T> {
    RawSolution {
        status,
        primal: vec![T::zero(); n],
        dual: vec![T::zero(); m],
        objective: T::zero(),
        pivots,
    }
}
