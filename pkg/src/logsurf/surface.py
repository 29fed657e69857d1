"""Log surfaces over a closed world of declared curves.

Every positivity predicate here is relative to the declared curve list, which
is assumed to generate the cone of curves.  ``is_nef`` really means "pairs
non-negatively with every declared curve", and so on.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import floor
from typing import Mapping, Sequence

from . import lattice as la
from .lattice import NSLattice, QVec


class SurfaceError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldMode:
    kind: str = "Char0"  # "Char0" or "CharP"
    p: int | None = None
    is_Fp_closure: bool = False

    @classmethod
    def char0(cls) -> FieldMode:
        return cls("Char0")

    @classmethod
    def charp(cls, p: int, fbar: bool = False) -> FieldMode:
        return cls("CharP", p, fbar)

    @property
    def positive_char(self) -> bool:
        return self.kind == "CharP"

    def problems(self) -> list[str]:
        out = []
        if self.kind not in ("Char0", "CharP"):
            out.append(f"field kind {self.kind!r} is not Char0 or CharP")
        if self.kind == "CharP" and (self.p is None or not _is_prime(self.p)):
            out.append(f"field characteristic {self.p} is not prime")
        if self.kind == "Char0" and (self.p is not None or self.is_Fp_closure):
            out.append("Char0 field cannot carry p or fbar")
        return out

    def __str__(self) -> str:
        if self.kind == "Char0":
            return "char 0"
        return f"Fbar_{self.p}" if self.is_Fp_closure else f"char {self.p}"


@dataclass(frozen=True)
class CurveRecord:
    """An irreducible curve.

    ``genus`` is the arithmetic genus on the smooth model the surface was
    declared on.  After a contraction through a singular point, adjunction on
    the new surface picks up a correction term, so such curves carry
    ``through_singularity=True`` and are exempt from the adjunction check.
    """

    id: str
    cls: QVec
    genus: int
    through_singularity: bool = False


@dataclass(frozen=True)
class RoundedDivisor:
    floor: dict[str, Fraction]
    ceil: dict[str, Fraction]
    frac: dict[str, Fraction]


@dataclass(frozen=True)
class LogSurface:
    lattice: NSLattice
    curves: tuple[CurveRecord, ...]
    boundary: tuple[tuple[str, Fraction], ...] = ()
    field: FieldMode = field(default_factory=FieldMode)
    q_factorial: bool = True
    rational_sing: bool = True

    @property
    def rank(self) -> int:
        return self.lattice.rank

    @property
    def K(self) -> QVec:
        return self.lattice.canonical

    @property
    def H(self) -> QVec:
        return self.lattice.ample

    def pair(self, a: QVec, b: QVec) -> Fraction:
        return self.lattice.pair(a, b)

    def curve(self, cid: str) -> CurveRecord:
        for c in self.curves:
            if c.id == cid:
                return c
        raise SurfaceError(f"unknown curve id {cid!r}")

    def ids(self) -> list[str]:
        return [c.id for c in self.curves]

    def boundary_dict(self) -> dict[str, Fraction]:
        return dict(self.boundary)

    def cls(self, cid: str) -> QVec:
        return self.curve(cid).cls

    def gram_on(self, ids: Sequence[str]) -> la.Gram:
        return la.gram_of(self.lattice.gram, [self.cls(i) for i in ids])

    def with_field(self, fm: FieldMode) -> LogSurface:
        qf = True if fm.is_Fp_closure else self.q_factorial
        return replace(self, field=fm, q_factorial=qf)

    def with_boundary(self, terms: Mapping[str, Fraction]) -> LogSurface:
        return replace(self, boundary=tuple((k, Fraction(v)) for k, v in terms.items()))


def make_surface(gram, canonical, ample, curves, boundary=(), field=None,
                 q_factorial=True, rational_sing=True) -> LogSurface:
    """Convenience constructor accepting ints, Fractions and 'a/b' strings.

    ``curves`` is a sequence of ``(id, class, genus)`` triples and ``boundary``
    a mapping or pair-sequence ``id -> coefficient``.
    """
    lat = NSLattice(la.gram(gram), la.qvec(canonical), la.qvec(ample))
    recs = tuple(CurveRecord(cid, la.qvec(c), int(g)) for cid, c, g in curves)
    if isinstance(boundary, Mapping):
        boundary = boundary.items()
    bd = tuple((cid, la.to_fraction(x)) for cid, x in boundary)
    fm = field or FieldMode.char0()
    if fm.is_Fp_closure:
        q_factorial = True
    return LogSurface(lat, recs, bd, fm, q_factorial, rational_sing)


def validate(s: LogSurface) -> list[str]:
    """All invariant violations of ``s``, one human-readable line each."""
    out: list[str] = []
    n = s.rank
    g = s.lattice.gram
    out += s.field.problems()
    sig = la.signature(g)
    if sig != la.Signature(1, n - 1, 0):
        out.append(f"lattice signature {tuple(sig)} is not (1, {n - 1}, 0)")
    h2 = s.pair(s.H, s.H)
    if h2 <= 0:
        out.append(f"ample class has square {la.fmt(h2)} <= 0")

    seen: dict[str, int] = {}
    for c in s.curves:
        seen[c.id] = seen.get(c.id, 0) + 1
        if len(c.cls) != n:
            out.append(f"curve {c.id}: class length {len(c.cls)} != rank {n}")
            continue
        if la.is_zero(c.cls):
            out.append(f"curve {c.id}: class is zero")
        if c.genus < 0:
            out.append(f"curve {c.id}: negative genus {c.genus}")
        hc = s.pair(s.H, c.cls)
        if hc <= 0:
            out.append(f"ample class not positive on curve {c.id} (H.C = {la.fmt(hc)})")
        if not c.through_singularity:
            lhs = s.pair(c.cls, c.cls) + s.pair(s.K, c.cls)
            if lhs.denominator != 1 or lhs.numerator % 2:
                out.append(f"adjunction parity violation on {c.id}: C^2 + K.C = {la.fmt(lhs)}")
            elif lhs != 2 * c.genus - 2:
                out.append(f"adjunction violation on {c.id}: C^2 + K.C = {la.fmt(lhs)}"
                           f" but genus {c.genus} needs {2 * c.genus - 2}")
    for cid, k in seen.items():
        if k > 1:
            out.append(f"curve id {cid} declared {k} times")

    good = [c for c in s.curves if len(c.cls) == n]
    for i, a in enumerate(good):
        for b in good[i + 1:]:
            ab = s.pair(a.cls, b.cls)
            if ab < 0:
                out.append(f"distinct curves {a.id}, {b.id} meet negatively ({la.fmt(ab)})")
            if a.cls == b.cls and s.pair(a.cls, a.cls) < 0:
                out.append(f"negative curves {a.id}, {b.id} have the same class")

    ids = {c.id for c in s.curves}
    bseen = set()
    for cid, x in s.boundary:
        if cid not in ids:
            out.append(f"boundary references undeclared curve {cid}")
        if cid in bseen:
            out.append(f"boundary lists {cid} twice")
        bseen.add(cid)
        if not 0 < x <= 1:
            out.append(f"boundary range violation: coefficient {la.fmt(x)} on {cid} not in (0, 1]")
    if s.field.is_Fp_closure and not s.q_factorial:
        out.append("surface over Fbar_p must be Q-factorial")
    return out


def adjunction_genus(s: LogSurface, c: QVec) -> Fraction:
    return 1 + (s.pair(c, c) + s.pair(s.K, c)) / 2


def log_canonical_class(s: LogSurface) -> QVec:
    d = s.K
    ids = {c.id: c for c in s.curves}
    for cid, x in s.boundary:
        if cid not in ids:
            raise SurfaceError(f"boundary references undeclared curve {cid!r}")
        d = la.add(d, la.scale(x, ids[cid].cls))
    return d


def is_nef(s: LogSurface, d: QVec) -> bool:
    return all(s.pair(d, c.cls) >= 0 for c in s.curves)


def is_ample(s: LogSurface, d: QVec) -> bool:
    return s.pair(d, d) > 0 and all(s.pair(d, c.cls) > 0 for c in s.curves)


def is_big(s: LogSurface, d: QVec) -> bool:
    if is_nef(s, d):
        return s.pair(d, d) > 0
    from .positivity import zariski

    z = zariski(s, d)
    return z is not None and s.pair(z.P, z.P) > 0


def is_pseudo_effective(s: LogSurface, d: QVec) -> bool:
    if la.is_zero(d):
        return True
    from .positivity import zariski

    z = zariski(s, d)
    if z is None:
        return False
    return is_nef(s, z.P) and s.pair(z.P, z.P) >= 0 and s.pair(z.P, s.H) >= 0


def exceptional_locus(s: LogSurface, h: QVec) -> list[str]:
    """Declared curves orthogonal to the nef and big class ``h``."""
    if not is_nef(s, h):
        raise SurfaceError("exceptional locus needs a nef class")
    if s.pair(h, h) <= 0:
        raise SurfaceError("exceptional locus needs a big class")
    ids = [c.id for c in s.curves if s.pair(h, c.cls) == 0]
    for cid in ids:
        c2 = s.pair(s.cls(cid), s.cls(cid))
        if c2 >= 0:
            raise SurfaceError(f"curve {cid} in E(h) has C^2 = {la.fmt(c2)} >= 0; closed world inconsistent")
    if not la.is_negative_definite(s.gram_on(ids)):
        raise SurfaceError("E(h) is not negative definite; closed world inconsistent")
    return ids


def round_divisor(b) -> RoundedDivisor:
    """Coefficient-wise round-down, round-up and fractional part."""
    items = b.items() if isinstance(b, Mapping) else b
    fl, ce, fr = {}, {}, {}
    for cid, x in items:
        x = Fraction(x)
        f = Fraction(floor(x))
        if f:
            fl[cid] = f
        c = -Fraction(floor(-x))
        if c:
            ce[cid] = c
        if x - f:
            fr[cid] = x - f
    return RoundedDivisor(fl, ce, fr)
