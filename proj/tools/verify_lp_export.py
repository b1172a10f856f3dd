#!/usr/bin/env python3
"""Cross-check an exported LP model with an external MIP solver.

Parses the LP text written by `deceptiplan plan --export-lp` with an
independent reader and solves it with HiGHS (scipy.optimize.milp). Compare
the reported optimum against the planner's own answer:

    deceptiplan plan department-row3 --export-lp row3.lp
    python3 tools/verify_lp_export.py row3.lp 2
    python3 tools/verify_lp_export.py row5.lp inf
"""

import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import coo_matrix

TERM = re.compile(r"([+-])\s*([0-9.]+)\s+(\S+)")


def parse(path):
    text = "\n".join(
        line for line in open(path).read().splitlines() if not line.strip().startswith("\\")
    )
    m = re.search(r"Minimize(.*?)Subject To(.*?)Bounds(.*?)Binary(.*?)Generals(.*?)End", text, re.S)
    if not m:
        raise SystemExit("unrecognized LP layout")
    obj_s, rows_s, bounds_s, bin_s, gen_s = m.groups()

    def terms_of(s):
        out = {}
        for sign, coef, var in TERM.findall(s):
            out[var] = out.get(var, 0.0) + (1 if sign == "+" else -1) * float(coef)
        return out

    objective = terms_of("+ " + obj_s.split(":", 1)[1].strip())
    rows = []
    for line in rows_s.strip().splitlines():
        name, body = line.split(":", 1)
        rel = re.search(r"(<=|>=|=)\s*(-?[0-9.]+)\s*$", body)
        rows.append((name.strip(), terms_of(body[: rel.start()]), rel.group(1), float(rel.group(2))))
    bounds = {}
    for line in bounds_s.strip().splitlines():
        line = line.strip()
        pair = re.match(r"^(-?[0-9.]+) <= (\S+) <= (-?[0-9.]+)$", line)
        if pair:
            bounds[pair.group(2)] = (float(pair.group(1)), float(pair.group(3)))
            continue
        fixed = re.match(r"^(\S+) = (-?[0-9.]+)$", line)
        if fixed:
            bounds[fixed.group(1)] = (float(fixed.group(2)), float(fixed.group(2)))
            continue
        raise SystemExit("unrecognized bound line: " + line)
    return objective, rows, bounds, bin_s.split(), gen_s.split()


def main():
    if len(sys.argv) != 3:
        raise SystemExit(__doc__)
    path, expect = sys.argv[1], sys.argv[2]
    objective, rows, bounds, binaries, generals = parse(path)

    names = sorted(
        set(binaries) | set(generals) | set(objective) | set(bounds)
        | {v for _, t, _, _ in rows for v in t}
    )
    idx = {v: i for i, v in enumerate(names)}
    n = len(names)
    c = np.zeros(n)
    for v, k in objective.items():
        c[idx[v]] = k
    ri, ci, data, lo, hi = [], [], [], [], []
    for rnum, (_, terms, rel, rhs) in enumerate(rows):
        for v, k in terms.items():
            ri.append(rnum)
            ci.append(idx[v])
            data.append(k)
        lo.append(-np.inf if rel == "<=" else rhs)
        hi.append(np.inf if rel == ">=" else rhs)
    matrix = coo_matrix((data, (ri, ci)), shape=(len(rows), n)).tocsr()
    lb, ub = np.zeros(n), np.full(n, np.inf)
    for v in binaries:
        ub[idx[v]] = 1.0
    for v, (a, b) in bounds.items():
        lb[idx[v]], ub[idx[v]] = a, b

    res = milp(
        c=c,
        constraints=LinearConstraint(matrix, np.array(lo), np.array(hi)),
        bounds=Bounds(lb, ub),
        integrality=np.ones(n),
    )
    if expect == "inf":
        ok = res.status != 0
        print(f"HiGHS: {'infeasible' if ok else res.fun} (expected infeasible)")
    else:
        ok = res.status == 0 and abs(res.fun - float(expect)) < 1e-6
        print(f"HiGHS optimum: {res.fun if res.status == 0 else 'infeasible'} (expected {expect})")
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
