"""Discrepancies of exceptional curve configurations.

For a contraction f: Y -> X of curves E_1..E_n with strict transform B of the
boundary, write K_Y + B = f^*(K_X + Delta) + sum a_i E_i.  Intersecting with
each E_j gives the linear system  M a = b  with M the intersection matrix of
the E_i and b_j = K_Y.E_j + B.E_j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import lattice as la

TERMINAL, CANONICAL, KLT, LC, NOT_LC = "Terminal", "Canonical", "KLT", "LC", "NotLC"
_ORDER = (TERMINAL, CANONICAL, KLT, LC, NOT_LC)


class ClusterError(ValueError):
    pass


@dataclass(frozen=True)
class ExceptionalCluster:
    """Negative-definite curve configuration to be contracted.

    ``boundary`` maps a boundary curve id to ``(coefficient, meets)`` where
    ``meets`` lists its intersection numbers with each exceptional curve in
    order.  ``k_degrees`` overrides K.E_j when the ambient surface is already
    singular and adjunction no longer pins K.E_j down.
    """

    ids: tuple[str, ...]
    self_int: tuple[Fraction, ...]
    genus: tuple[int, ...]
    adjacency: tuple[tuple[Fraction, ...], ...]
    boundary: Mapping[str, tuple[Fraction, tuple[Fraction, ...]]] = field(default_factory=dict)
    k_degrees: tuple[Fraction, ...] | None = None

    @classmethod
    def build(cls, curves: Sequence[tuple], adjacency=None, boundary=None, k_degrees=None):
        """``curves`` is a sequence of ``(id, self_intersection, genus)``."""
        ids = tuple(c[0] for c in curves)
        selfs = tuple(la.to_fraction(c[1]) for c in curves)
        genus = tuple(int(c[2]) for c in curves)
        n = len(ids)
        adj = la.gram(adjacency) if adjacency is not None else la.gram([[0] * n] * n)
        bd = {k: (la.to_fraction(v[0]), la.qvec(v[1])) for k, v in (boundary or {}).items()}
        kd = la.qvec(k_degrees) if k_degrees is not None else None
        return cls(ids, selfs, genus, adj, bd, kd)

    def __post_init__(self):
        n = len(self.ids)
        if len(set(self.ids)) != n:
            raise ClusterError("duplicate curve ids in cluster")
        if len(self.adjacency) != n or any(len(r) != n for r in self.adjacency):
            raise ClusterError("adjacency must be square of the cluster size")
        for i in range(n):
            for j in range(n):
                if self.adjacency[i][j] != self.adjacency[j][i]:
                    raise ClusterError(f"adjacency not symmetric ({i + 1},{j + 1})")
                if i != j and self.adjacency[i][j] < 0:
                    raise ClusterError(f"negative intersection between {self.ids[i]} and {self.ids[j]}")
        for bid, (x, meets) in self.boundary.items():
            if not 0 <= x <= 1:
                raise ClusterError(f"boundary coefficient {la.fmt(x)} on {bid} outside [0, 1]")
            if len(meets) != n:
                raise ClusterError(f"boundary curve {bid} needs {n} intersection numbers")

    @property
    def matrix(self) -> la.Gram:
        n = len(self.ids)
        return tuple(tuple(self.self_int[i] if i == j else self.adjacency[i][j] for j in range(n))
                     for i in range(n))

    def canonical_degrees(self) -> tuple[Fraction, ...]:
        if self.k_degrees is not None:
            return self.k_degrees
        return tuple(2 * g - 2 - e for g, e in zip(self.genus, self.self_int))

    def rhs(self) -> tuple[Fraction, ...]:
        b = list(self.canonical_degrees())
        for x, meets in self.boundary.values():
            for j, m in enumerate(meets):
                b[j] += x * m
        return tuple(b)

    def components(self) -> list[list[int]]:
        n = len(self.ids)
        seen, comps = set(), []
        for s in range(n):
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(n):
                    if j not in seen and self.adjacency[i][j] != 0:
                        seen.add(j)
                        stack.append(j)
            comps.append(sorted(comp))
        return comps


@dataclass(frozen=True)
class DiscrepancyReport:
    a: dict[str, Fraction]
    cls: str
    numerically_dlt: bool
    q_factorial: bool
    rational_sing: bool
    kind: str = ""

    @property
    def numerically_dlt_approx(self) -> bool:
        return self.numerically_dlt

    def cite(self) -> str:
        return "Thm-6.4" if self.rational_sing else "Prop-6.3"


def discrepancies(cl: ExceptionalCluster) -> dict[str, Fraction]:
    m = cl.matrix
    if not la.is_negative_definite(m):
        raise ClusterError("cluster intersection matrix is not negative definite")
    if not cl.ids:
        return {}
    b = cl.rhs()
    a = la.solve(m, b)
    # re-substitution; cheap at this size and catches any elimination slip
    for i, row in enumerate(m):
        assert sum(r * x for r, x in zip(row, a)) == b[i]
    return dict(zip(cl.ids, a))


def class_of(values) -> str:
    values = list(values)
    if all(x > 0 for x in values):
        return TERMINAL
    if all(x >= 0 for x in values):
        return CANONICAL
    if all(x > -1 for x in values):
        return KLT
    if all(x >= -1 for x in values):
        return LC
    return NOT_LC


def worst(verdicts) -> str:
    return max(verdicts, key=_ORDER.index, default=TERMINAL)


def _describe(cl: ExceptionalCluster, comp: list[int], a: dict[str, Fraction], verdict: str) -> str:
    if verdict != LC:
        return ""
    vals = [a[cl.ids[i]] for i in comp]
    if any(v != -1 for v in vals):
        return ""
    if len(comp) == 1:
        return "simple elliptic" if cl.genus[comp[0]] == 1 else ""
    rational = all(cl.genus[i] == 0 for i in comp)
    degrees = [sum(cl.adjacency[i][j] for j in comp if j != i) for i in comp]
    if rational and all(d == 2 for d in degrees):
        return "cusp"
    return ""


def classify(cl: ExceptionalCluster, fbar: bool = False) -> DiscrepancyReport:
    """Discrepancies plus the verdict table; disconnected input gets the worst component verdict."""
    a = discrepancies(cl)
    verdicts, kinds = [], []
    for comp in cl.components():
        v = class_of(a[cl.ids[i]] for i in comp)
        verdicts.append(v)
        d = _describe(cl, comp, a, v)
        if d:
            kinds.append(d)
    verdict = worst(verdicts)
    dlt = all(x > -1 for x in a.values())
    return DiscrepancyReport(
        a=a,
        cls=verdict,
        numerically_dlt=dlt,
        q_factorial=dlt or fbar,
        rational_sing=dlt,
        kind=", ".join(sorted(set(kinds))),
    )
