#!/usr/bin/env python3
"""Solve an LP file written by `chigf lp export` with HiGHS.

Usage: highs_solve.py [--method simplex|ipm|pdlp] [--tol T] [--time-limit S] MODEL.lp SOLUTION.sol

Intended as the external backend template:
    CHIGF_LP_SOLVER='python3 scripts/highs_solve.py {lp} {sol}'

The file is parsed here, streaming constraints into compact row-wise
arrays, and handed to the highspy bindings when installed. Without highspy
the same arrays go through scipy's HiGHS interface.
"""

import argparse
import sys
from array import array
from fractions import Fraction

import numpy as np

SENSES = ("<=", ">=", "=")


class Rows:
    def __init__(self):
        self.start = array("q", [0])
        self.index = array("i")
        self.value = array("d")
        self.sense = []
        self.rhs = array("d")

    def add(self, terms, sense, rhs):
        for j, c in sorted(terms.items()):
            if c != 0:
                self.index.append(j)
                self.value.append(c)
        self.start.append(len(self.index))
        self.sense.append(sense)
        self.rhs.append(rhs)

    def __len__(self):
        return len(self.sense)


def parse_terms(tokens):
    out = {}
    sign, coef = 1, None
    for t in tokens:
        if t == "+":
            sign = 1
        elif t == "-":
            sign = -1
        elif t[0] == "x":
            c = sign * (1 if coef is None else coef)
            j = int(t[1:])
            out[j] = out.get(j, 0) + c
            sign, coef = 1, None
        else:
            coef = int(t)
    return out


def read_lp(path):
    section = None
    objective = []
    rows = Rows()
    free = set()
    n = 0
    pending = []

    def flush():
        if not pending:
            return
        k = next(i for i, t in enumerate(pending) if t in SENSES)
        rows.add(parse_terms(pending[1:k]), pending[k], float(Fraction(pending[k + 1])))
        pending.clear()

    with open(path) as f:
        for line in f:
            if line.startswith("\\"):
                continue
            key = line.strip().lower()
            if key in ("minimize", "subject to", "bounds", "end"):
                flush()
                section = key
                continue
            tokens = line.split()
            if not tokens:
                continue
            if section == "minimize":
                objective.extend(tokens)
            elif section == "subject to":
                if tokens[0].endswith(":"):
                    flush()
                pending.extend(tokens)
            elif section == "bounds":
                j = int(tokens[0][1:])
                n = max(n, j + 1)
                if tokens[1] == "free":
                    free.add(j)
    cost = np.zeros(n)
    if objective[:1] == ["obj:"]:
        objective = objective[1:]
    for j, c in parse_terms(objective).items():
        cost[j] = c
    return cost, rows, free


def row_bounds(rows, inf):
    rhs = np.frombuffer(rows.rhs, dtype=np.float64)
    sense = np.array(rows.sense)
    lower = np.where(sense == "<=", -inf, rhs)
    upper = np.where(sense == ">=", inf, rhs)
    return lower, upper


def write_solution(sol_path, status, objective=None, x=None, y=None):
    with open(sol_path, "w") as out:
        out.write(f"# status {status}\n")
        if status != "optimal":
            return
        out.write(f"# objective {objective!r}\n")
        for j, v in enumerate(x):
            if v != 0.0:
                out.write(f"x{j} {float(v)!r}\n")
        for i, v in enumerate(y):
            out.write(f"y{i} {float(v)!r}\n")


def solve_highspy(highspy, cost, rows, free, args):
    inf = highspy.kHighsInf
    n = len(cost)
    lp = highspy.HighsLp()
    lp.num_col_ = n
    lp.num_row_ = len(rows)
    lp.col_cost_ = cost
    lp.col_lower_ = np.array([-inf if j in free else 0.0 for j in range(n)])
    lp.col_upper_ = np.full(n, inf)
    lp.row_lower_, lp.row_upper_ = row_bounds(rows, inf)
    lp.a_matrix_.format_ = highspy.MatrixFormat.kRowwise
    lp.a_matrix_.num_col_ = n
    lp.a_matrix_.num_row_ = len(rows)
    lp.a_matrix_.start_ = np.frombuffer(rows.start, dtype=np.int64).astype(np.int32)
    lp.a_matrix_.index_ = np.frombuffer(rows.index, dtype=np.int32)
    lp.a_matrix_.value_ = np.frombuffer(rows.value, dtype=np.float64)
    del rows
    h = highspy.Highs()
    h.setOptionValue("output_flag", args.verbose)
    h.setOptionValue("primal_feasibility_tolerance", args.tol)
    h.setOptionValue("dual_feasibility_tolerance", args.tol)
    if args.method != "simplex":
        h.setOptionValue("solver", args.method)
    if args.method == "pdlp":
        h.setOptionValue("optimality_tolerance", max(args.tol, 1e-10))
    if args.time_limit is not None:
        h.setOptionValue("time_limit", args.time_limit)
    if h.passModel(lp) == highspy.HighsStatus.kError:
        sys.exit("highspy rejected the model")
    del lp
    h.run()
    status = h.getModelStatus()
    word = {
        highspy.HighsModelStatus.kOptimal: "optimal",
        highspy.HighsModelStatus.kInfeasible: "infeasible",
        highspy.HighsModelStatus.kUnbounded: "unbounded",
    }.get(status, "failed")
    if word != "optimal":
        return word, None, None, None
    sol = h.getSolution()
    return word, h.getInfo().objective_function_value, sol.col_value, sol.row_dual


def solve_scipy(cost, rows, free, args):
    from scipy.optimize import linprog
    from scipy.sparse import csr_matrix

    n = len(cost)
    m = len(rows)
    a = csr_matrix(
        (np.frombuffer(rows.value, dtype=np.float64), np.frombuffer(rows.index, dtype=np.int32),
         np.frombuffer(rows.start, dtype=np.int64)),
        shape=(m, n),
    )
    sense = np.array(rows.sense)
    rhs = np.frombuffer(rows.rhs, dtype=np.float64)
    eq = np.flatnonzero(sense == "=")
    ub = np.flatnonzero(sense != "=")
    flip = np.where(sense[ub] == ">=", -1.0, 1.0)
    a_ub = a[ub].multiply(flip[:, None]).tocsr() if len(ub) else None
    res = linprog(
        cost,
        A_ub=a_ub,
        b_ub=rhs[ub] * flip if len(ub) else None,
        A_eq=a[eq] if len(eq) else None,
        b_eq=rhs[eq] if len(eq) else None,
        bounds=[(None, None) if j in free else (0, None) for j in range(n)],
        method="highs",
        options={"primal_feasibility_tolerance": args.tol, "dual_feasibility_tolerance": args.tol},
    )
    word = {0: "optimal", 2: "infeasible", 3: "unbounded"}.get(res.status, "failed")
    if word != "optimal":
        return word, None, None, None
    y = np.zeros(m)
    if len(eq):
        y[eq] = res.eqlin.marginals
    if len(ub):
        y[ub] = res.ineqlin.marginals * flip
    return word, res.fun, res.x, y


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--method", choices=("simplex", "ipm", "pdlp"), default="simplex")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--time-limit", type=float, help="seconds")
    p.add_argument("--verbose", action="store_true")
    p.add_argument("lp")
    p.add_argument("sol")
    args = p.parse_args()
    cost, rows, free = read_lp(args.lp)
    try:
        import highspy
    except ImportError:
        highspy = None
    if highspy is not None:
        result = solve_highspy(highspy, cost, rows, free, args)
    else:
        result = solve_scipy(cost, rows, free, args)
    write_solution(args.sol, *result)


if __name__ == "__main__":
    main()
