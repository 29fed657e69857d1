"""Exact phase-one simplex for small cone-membership questions."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .lattice import QVec


def feasible_point(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> QVec | None:
    """Return some x >= 0 with a x = b, or None when the system is infeasible.

    Textbook phase one with artificial variables and Bland's rule, so it
    cannot cycle.  Sizes here are a dozen variables at most.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    rows = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        rows.append([Fraction(sign * x) for x in a[i]]
                    + [Fraction(int(k == i)) for k in range(m)]
                    + [Fraction(sign * b[i])])
    basis = [n + i for i in range(m)]
    width = n + m
    # objective: minimise the sum of artificials, reduced costs kept in ``cost``
    cost = [Fraction(0)] * (width + 1)
    for r in rows:
        for j in range(width + 1):
            cost[j] -= r[j]
    for i in range(m):
        cost[n + i] += 1

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, r in enumerate(rows):
            if r[enter] > 0:
                ratio = r[width] / r[enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            # unbounded direction cannot happen for a phase-one objective bounded below by 0
            break
        i = best[1]
        piv = rows[i][enter]
        rows[i] = [x / piv for x in rows[i]]
        for k, r in enumerate(rows):
            if k != i and r[enter] != 0:
                f = r[enter]
                rows[k] = [x - f * y for x, y in zip(r, rows[i])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, rows[i])]
        basis[i] = enter

    if -cost[width] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rows[i][width]
    return tuple(x)


def cone_contains(generators: Sequence[QVec], target: QVec) -> QVec | None:
    """Non-negative coefficients expressing ``target`` in the cone, if any."""
    if not generators:
        return () if all(t == 0 for t in target) else None
    dim = len(target)
    a = [[g[i] for g in generators] for i in range(dim)]
    return feasible_point(a, list(target))
