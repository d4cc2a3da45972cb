#!/usr/bin/env python3
"""Solve the LP relaxation of an mbbp-written LP file with scipy.

Usage: lp_relax.py MODEL.lp
Prints `objective: <value>`. Only the subset of the LP format emitted by
`mbbp mip` is understood.
"""
import re
import sys

import numpy as np
from scipy.optimize import linprog

TERM = re.compile(r"([+-])?\s*(\d+)?\s*x(\d+)")


def parse_expr(text):
    terms = {}
    for sign, coef, var in TERM.findall(text):
        value = int(coef) if coef else 1
        if sign == "-":
            value = -value
        terms[int(var)] = terms.get(int(var), 0) + value
    return terms


def main(path):
    section = None
    objective, rows = {}, []
    n = 0
    for raw in open(path):
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        if line in ("Maximize", "Subject To", "Binaries", "Bounds", "End"):
            section = line
            continue
        if section == "Maximize":
            objective = parse_expr(line.split(":", 1)[1])
        elif section == "Subject To":
            body = line.split(":", 1)[1]
            op = "<=" if "<=" in body else "="
            lhs, rhs = body.split(op)
            rows.append((parse_expr(lhs), op, float(rhs)))
        elif section in ("Binaries", "Bounds"):
            n = max(n, max(int(v) for v in re.findall(r"x(\d+)", line)))
    c = np.zeros(n)
    for k, v in objective.items():
        c[k - 1] = -v
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for terms, op, rhs in rows:
        row = np.zeros(n)
        for k, v in terms.items():
            row[k - 1] = v
        (a_ub if op == "<=" else a_eq).append(row)
        (b_ub if op == "<=" else b_eq).append(rhs)
    res = linprog(
        c,
        A_ub=np.array(a_ub) if a_ub else None,
        b_ub=b_ub or None,
        A_eq=np.array(a_eq) if a_eq else None,
        b_eq=b_eq or None,
        bounds=[(0, 1)] * n,
        method="highs",
    )
    if not res.success:
        sys.exit(f"solver failed: {res.message}")
    print(f"objective: {-res.fun:.9f}")


if __name__ == "__main__":
    main(sys.argv[1])
