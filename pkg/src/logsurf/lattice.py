"""Exact rational intersection lattices.

A class is a tuple of :class:`fractions.Fraction` coordinates in the basis of
the lattice; a Gram matrix is a tuple of such rows.  Nothing in here ever
touches a float.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, NamedTuple, Sequence

QVec = tuple[Fraction, ...]
Gram = tuple[QVec, ...]


class LatticeError(ValueError):
    pass


def to_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass ints, Fractions or 'a/b' strings")
    return Fraction(x)


def qvec(coords: Iterable) -> QVec:
    return tuple(to_fraction(c) for c in coords)


def gram(rows: Iterable[Iterable]) -> Gram:
    return tuple(qvec(r) for r in rows)


def zero(n: int) -> QVec:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> QVec:
    return tuple(Fraction(int(j == i)) for j in range(n))


def add(a: QVec, b: QVec) -> QVec:
    if len(a) != len(b):
        raise LatticeError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def sub(a: QVec, b: QVec) -> QVec:
    if len(a) != len(b):
        raise LatticeError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: QVec) -> QVec:
    c = to_fraction(c)
    return tuple(c * x for x in a)


def combo(coeffs: Sequence, vecs: Sequence[QVec], n: int) -> QVec:
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vecs):
        c = to_fraction(c)
        for i, x in enumerate(v):
            out[i] += c * x
    return tuple(out)


def is_zero(a: QVec) -> bool:
    return all(x == 0 for x in a)


def is_integral(a: QVec) -> bool:
    return all(x.denominator == 1 for x in a)


def primitive(a: QVec) -> QVec:
    """Positive rational multiple of ``a`` that is a primitive integral vector."""
    if is_zero(a):
        return a
    den = lcm(*(x.denominator for x in a))
    ints = [int(x * den) for x in a]
    g = gcd(*ints)
    return tuple(Fraction(v // g) for v in ints)


def _scaled(v) -> tuple[list[int], int]:
    d = lcm(*(x.denominator for x in v)) if v else 1
    return [x.numerator * (d // x.denominator) for x in v], d


@lru_cache(maxsize=256)
def _scaled_gram(g: Gram) -> tuple[tuple[tuple[int, ...], ...], int]:
    d = lcm(*(x.denominator for row in g for x in row)) if g else 1
    return tuple(tuple(x.numerator * (d // x.denominator) for x in row) for row in g), d


def pair(g: Gram, a: QVec, b: QVec) -> Fraction:
    n = len(g)
    if len(a) != n or len(b) != n:
        raise LatticeError(f"dimension mismatch: gram is {n}x{n}, vectors {len(a)}, {len(b)}")
    # integer arithmetic on a common denominator; Fraction ops per entry are slow
    ia, da = _scaled(a)
    ib, db = _scaled(b)
    ig, dg = _scaled_gram(g)
    total = 0
    for i, x in enumerate(ia):
        if x:
            row = ig[i]
            total += x * sum(row[j] * y for j, y in enumerate(ib) if y)
    return Fraction(total, da * db * dg)


def is_symmetric(g: Gram) -> bool:
    return asymmetric_entry(g) is None


def asymmetric_entry(g: Gram) -> tuple[int, int] | None:
    n = len(g)
    for i in range(n):
        if len(g[i]) != n:
            raise LatticeError(f"gram row {i + 1} has length {len(g[i])}, expected {n}")
        for j in range(i + 1, n):
            if g[i][j] != g[j][i]:
                return i, j
    return None


def submatrix(g: Gram, idx: Sequence[int]) -> Gram:
    return tuple(tuple(g[i][j] for j in idx) for i in idx)


def gram_of(g: Gram, vecs: Sequence[QVec]) -> Gram:
    return tuple(tuple(pair(g, u, v) for v in vecs) for u in vecs)


class Signature(NamedTuple):
    positives: int
    negatives: int
    zeros: int


def signature(g: Gram) -> Signature:
    """Inertia of a symmetric rational matrix by congruence elimination.

    Pivots on a nonzero diagonal entry when one exists.  Otherwise, with a
    nonzero off-diagonal a[i][j], row/column i is replaced by i + j, which puts
    2*a[i][j] on the diagonal without changing the inertia.
    """
    if asymmetric_entry(g) is not None:
        raise LatticeError("signature needs a symmetric matrix")
    a = [list(r) for r in g]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            hit = next(((i, j) for i in active for j in active if i != j and a[i][j] != 0), None)
            if hit is None:
                break
            i, j = hit
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for r in active:
            f = a[r][piv] / d
            if f:
                for c in active:
                    a[r][c] -= f * a[piv][c]
        for r in active:
            a[r][piv] = a[piv][r] = Fraction(0)
    return Signature(pos, neg, n - pos - neg)


def is_negative_definite(g: Gram, subset: Sequence[int] | None = None) -> bool:
    sub_g = g if subset is None else submatrix(g, list(subset))
    n = len(sub_g)
    if n == 0:
        return True
    return signature(sub_g) == Signature(0, n, 0)


def determinant(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(map(Fraction, r)) for r in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


def solve(m: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> QVec:
    """Solve the square nonsingular system m x = b exactly (Gauss-Jordan)."""
    n = len(m)
    a = [list(map(Fraction, row)) + [Fraction(b[i])] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise LatticeError("singular system")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(a[r][n] for r in range(n))


def nullspace(rows: Sequence[Sequence[Fraction]], n: int) -> list[QVec]:
    """Basis of {x : rows . x = 0}, one primitive integral vector per free column."""
    return _nullspace(rows, n)[0]


def _nullspace(rows, n):
    a = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][free]
        basis.append(primitive(tuple(v)))
    return basis, [c for c in range(n) if c not in pivots]


@dataclass(frozen=True)
class NSLattice:
    """Num(X) as a rational quadratic lattice with canonical and ample classes.

    Construction rejects asymmetric and degenerate Gram matrices; the Hodge
    index signature is checked separately by ``surface.validate``.
    """

    gram: Gram
    canonical: QVec
    ample: QVec

    def __post_init__(self):
        n = len(self.gram)
        bad = asymmetric_entry(self.gram)
        if bad is not None:
            i, j = bad
            raise LatticeError(f"gram not symmetric ({i + 1},{j + 1})")
        if determinant(self.gram) == 0:
            raise LatticeError("gram is degenerate (determinant 0)")
        for name, v in (("canonical", self.canonical), ("ample", self.ample)):
            if len(v) != n:
                raise LatticeError(f"{name} class has length {len(v)}, expected rank {n}")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, a: QVec, b: QVec) -> Fraction:
        return pair(self.gram, a, b)

    def square(self, a: QVec) -> Fraction:
        return pair(self.gram, a, a)

    def signature(self) -> Signature:
        return signature(self.gram)


@dataclass(frozen=True)
class Quotient:
    """Result of contracting a negative-definite span.

    ``basis`` lists the complement basis in source coordinates; quotient
    coordinates of a class are its coordinates in that basis after removing the
    component along the contracted span.
    """

    source: Gram
    span: tuple[QVec, ...]
    basis: tuple[QVec, ...]
    gram: Gram
    _free: tuple[int, ...]

    def span_component(self, a: QVec) -> QVec:
        """Orthogonal projection of ``a`` onto the contracted span."""
        if not self.span:
            return zero(len(a))
        m = gram_of(self.source, self.span)
        rhs = [pair(self.source, a, s) for s in self.span]
        x = solve(m, rhs)
        return combo(x, self.span, len(a))

    def span_coefficients(self, a: QVec) -> QVec:
        if not self.span:
            return ()
        m = gram_of(self.source, self.span)
        return solve(m, [pair(self.source, a, s) for s in self.span])

    def project(self, a: QVec) -> QVec:
        """Component of ``a`` orthogonal to the span, in source coordinates."""
        return sub(a, self.span_component(a))

    def pushforward(self, a: QVec) -> QVec:
        p = self.project(a)
        return tuple(p[f] / self.basis[k][f] for k, f in enumerate(self._free))

    def pullback(self, q: QVec) -> QVec:
        return combo(q, self.basis, len(self.source))


def contract_span(g: Gram, span: Sequence[QVec]) -> Quotient:
    span = tuple(qvec(s) for s in span)
    if span and not is_negative_definite(gram_of(g, span)):
        raise LatticeError("contracted span is not negative definite")
    n = len(g)
    rows = [[pair(g, s, unit(n, j)) for j in range(n)] for s in span]
    if rows:
        basis, free = _nullspace(rows, n)
    else:
        basis, free = [unit(n, j) for j in range(n)], list(range(n))
    basis = tuple(basis)
    return Quotient(g, span, basis, gram_of(g, basis), tuple(free))


def contract_quotient(g: Gram, subset: Sequence[int]) -> Quotient:
    """Contract the span of the basis vectors indexed by ``subset``."""
    n = len(g)
    for i in subset:
        if not 0 <= i < n:
            raise LatticeError(f"index {i} out of range for rank {n}")
    return contract_span(g, [unit(n, i) for i in subset])


def fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vec(a: QVec) -> str:
    return "(" + ", ".join(fmt(x) for x in a) + ")"
