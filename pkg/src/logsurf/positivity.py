"""Zariski decomposition, semi-ampleness verdicts, canonical type and kappa."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence

from . import lattice as la
from .birational import ContractionResult, contract
from .citations import tag
from .lattice import QVec
from .surface import (
    LogSurface,
    SurfaceError,
    exceptional_locus,
    is_ample,
    is_nef,
    log_canonical_class,
)

KODAIRA_SPLIT_BOUND = 64

SEMI_AMPLE, NOT_SEMI_AMPLE, UNDECIDABLE = "SemiAmple", "NotSemiAmple", "Undecidable"


@dataclass(frozen=True)
class ZariskiDecomposition:
    P: QVec
    N: dict[str, Fraction]

    def negative_class(self, s: LogSurface) -> QVec:
        return la.combo(list(self.N.values()), [s.cls(i) for i in self.N], s.rank)


def zariski(s: LogSurface, d: QVec) -> ZariskiDecomposition | None:
    """Zariski decomposition d = P + N, or None when d is not pseudo-effective.

    Iterative: grow the support S by every curve the current positive part is
    negative on, then re-solve (d - sum N_i C_i).C_j = 0 over S.
    """
    d = la.qvec(d)
    support: list[str] = []
    P, coeffs = d, ()
    while True:
        bad = [c.id for c in s.curves if c.id not in support and s.pair(P, c.cls) < 0]
        if not bad:
            break
        support += bad
        m = s.gram_on(support)
        if not la.is_negative_definite(m):
            return None
        coeffs = la.solve(m, [s.pair(d, s.cls(i)) for i in support])
        P = la.sub(d, la.combo(coeffs, [s.cls(i) for i in support], s.rank))
    if any(x < 0 for x in coeffs):
        return None
    if s.pair(P, P) < 0 or s.pair(P, s.H) < 0:
        return None
    N = {i: x for i, x in zip(support, coeffs) if x != 0}
    return ZariskiDecomposition(P, N)


def _components(s: LogSurface, ids: Sequence[str]) -> list[list[str]]:
    ids = list(ids)
    seen, comps = set(), []
    for start in ids:
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in ids:
                if j not in seen and s.pair(s.cls(i), s.cls(j)) != 0:
                    seen.add(j)
                    stack.append(j)
        comps.append([i for i in ids if i in comp])
    return comps


def anti_nef_support_divisor(s: LogSurface, ids: Sequence[str]) -> dict[str, Fraction]:
    """Integral D > 0 supported on ``ids`` with D.C < 0 for each C in ``ids``."""
    ids = list(ids)
    if not la.is_negative_definite(s.gram_on(ids)):
        raise SurfaceError("support is not negative definite")
    x: dict[str, Fraction] = {}
    for comp in _components(s, ids):
        sol = la.solve(s.gram_on(comp), [Fraction(-1)] * len(comp))
        x.update(zip(comp, sol))
    den = lcm(*(v.denominator for v in x.values())) if x else 1
    out = {i: x[i] * den for i in ids}
    assert all(v > 0 for v in out.values())
    return out


@dataclass(frozen=True)
class KodairaSplit:
    k: int
    A: QVec
    B: dict[str, Fraction]


def kodaira_split(s: LogSurface, d: QVec) -> KodairaSplit:
    """Smallest k with k*d = A + B, A ample and B the anti-nef divisor on E(d)."""
    if not is_nef(s, d) or s.pair(d, d) <= 0:
        raise SurfaceError("Kodaira split needs a nef and big class")
    E = exceptional_locus(s, d)
    B = anti_nef_support_divisor(s, E) if E else {}
    Bcls = la.combo(list(B.values()), [s.cls(i) for i in B], s.rank)
    for k in range(1, KODAIRA_SPLIT_BOUND + 1):
        A = la.sub(la.scale(k, d), Bcls)
        if is_ample(s, A):
            return KodairaSplit(k, A, B)
    raise SurfaceError(f"no k <= {KODAIRA_SPLIT_BOUND} splits the class")


# -- canonical type ----------------------------------------------------------

KODAIRA_LABELS = ("I0", "I0smooth", "In", "II", "III", "IV", "Istar", "IIstar", "IIIstar",
                  "IVstar", "Unclassified")


@dataclass(frozen=True)
class CanonicalTypeConfig:
    components: dict[str, int]
    kodaira_label: str

    def cls(self, s: LogSurface) -> QVec:
        return la.combo(list(self.components.values()), [s.cls(i) for i in self.components], s.rank)


@dataclass(frozen=True)
class Rejection:
    reasons: tuple[str, ...]

    def __bool__(self) -> bool:
        return False


def _arms(adj: dict[str, set[str]], center: str) -> list[int]:
    arms = []
    for nb in adj[center]:
        length, prev, cur = 1, center, nb
        while len(adj[cur]) == 2:
            nxt = next(x for x in adj[cur] if x != prev)
            prev, cur = cur, nxt
            length += 1
        arms.append(length if len(adj[cur]) == 1 else -1)
    return sorted(arms)


def kodaira_label(s: LogSurface, comps: Mapping[str, int]) -> str:
    ids = list(comps)
    k = len(ids)
    recs = [s.curve(i) for i in ids]
    if k == 1:
        return "I0smooth" if recs[0].genus == 1 else "Unclassified"
    if any(r.genus != 0 or s.pair(r.cls, r.cls) != -2 for r in recs):
        return "Unclassified"
    meet = {(a, b): s.pair(s.cls(a), s.cls(b)) for a in ids for b in ids if a != b}
    if all(comps[i] == 1 for i in ids):
        if k == 2 and meet[(ids[0], ids[1])] == 2:
            return "In(2)"
        if all(v in (0, 1) for v in meet.values()) and all(
                sum(meet[(a, b)] for b in ids if b != a) == 2 for a in ids):
            return f"In({k})"
        return "Unclassified"
    if any(v not in (0, 1) for v in meet.values()):
        return "Unclassified"
    adj = {a: {b for b in ids if b != a and meet[(a, b)] == 1} for a in ids}
    if sum(len(v) for v in adj.values()) // 2 != k - 1:
        return "Unclassified"
    deg = {a: len(adj[a]) for a in ids}
    branch = [a for a in ids if deg[a] >= 3]
    if len(branch) == 1:
        c = branch[0]
        if deg[c] == 4 and k == 5:
            return "Istar(0)"
        if deg[c] == 3:
            arms = _arms(adj, c)
            if arms == [2, 2, 2]:
                return "IVstar"
            if arms == [1, 3, 3]:
                return "IIIstar"
            if arms == [1, 2, 5]:
                return "IIstar"
    if len(branch) == 2 and all(deg[b] == 3 for b in branch):
        if all(sum(1 for x in adj[b] if deg[x] == 1) == 2 for b in branch):
            return f"Istar({k - 5})"
    return "Unclassified"


def detect_canonical_type(s: LogSurface, components: Mapping[str, int]) -> CanonicalTypeConfig | Rejection:
    reasons = []
    comps = {}
    for cid, n in components.items():
        try:
            s.curve(cid)
        except SurfaceError:
            reasons.append(f"undeclared curve {cid}")
            continue
        if int(n) != n or n <= 0:
            reasons.append(f"multiplicity of {cid} must be a positive integer")
            continue
        comps[cid] = int(n)
    if not comps:
        reasons.append("empty configuration")
        return Rejection(tuple(reasons))
    Y = la.combo(list(comps.values()), [s.cls(i) for i in comps], s.rank)
    for cid in comps:
        c = s.cls(cid)
        kc, yc = s.pair(s.K, c), s.pair(Y, c)
        if kc != 0:
            reasons.append(f"K.{cid} = {la.fmt(kc)} != 0")
        if yc != 0:
            reasons.append(f"Y.{cid} = {la.fmt(yc)} != 0")
    if len(_components(s, list(comps))) > 1:
        reasons.append("support is not connected")
    g = gcd(*comps.values())
    if g != 1:
        reasons.append(f"gcd of multiplicities is {g}, not 1")
    if reasons:
        return Rejection(tuple(reasons))
    assert s.pair(Y, Y) == 0
    return CanonicalTypeConfig(comps, kodaira_label(s, comps))


def _proportional(a: QVec, b: QVec) -> Fraction | None:
    """lambda with a = lambda * b, lambda > 0, if one exists."""
    if la.is_zero(b):
        return None
    j = next(i for i, x in enumerate(b) if x != 0)
    lam = a[j] / b[j]
    if lam > 0 and la.scale(lam, b) == tuple(a):
        return lam
    return None


@dataclass(frozen=True)
class FibrationCertificate:
    kind: str  # "canonical-type" or "rational-pencil"
    config: CanonicalTypeConfig | None
    curve: str | None


def fibration_certificate(s: LogSurface, h: QVec) -> FibrationCertificate | None:
    """Look for a declared fibre proportional to the nef, square-zero class ``h``."""
    zero_ids = [c.id for c in s.curves if s.pair(h, c.cls) == 0]
    for comp in _components(s, zero_ids):
        if len(comp) == 1:
            c = s.curve(comp[0])
            if (c.genus == 0 and not c.through_singularity and s.pair(c.cls, c.cls) == 0
                    and _proportional(h, c.cls) is not None):
                return FibrationCertificate("rational-pencil", None, c.id)
        kernel = la.nullspace(s.gram_on(comp), len(comp))
        if len(kernel) != 1:
            continue
        v = kernel[0]
        if all(x < 0 for x in v):
            v = la.scale(-1, v)
        if not all(x > 0 for x in v):
            continue
        mults = {cid: int(x) for cid, x in zip(comp, v)}
        cfg = detect_canonical_type(s, mults)
        if cfg and _proportional(h, cfg.cls(s)) is not None:
            return FibrationCertificate("canonical-type", cfg, None)
    return None


# -- semi-ampleness -----------------------------------------------------------

@dataclass(frozen=True)
class SemiampleVerdict:
    status: str
    reason: str
    witness: ContractionResult | None = None
    detail: str = ""

    def line(self) -> str:
        return f"{self.status} [{self.reason}]"


def _reduced_genus(s: LogSurface, comp: Sequence[str]) -> Fraction | None:
    if any(s.curve(i).through_singularity for i in comp):
        return None
    Y = la.combo([1] * len(comp), [s.cls(i) for i in comp], s.rank)
    return 1 + (s.pair(Y, Y) + s.pair(s.K, Y)) / 2


def _witness(s: LogSurface, h: QVec, E: list[str]) -> ContractionResult:
    w = contract(s, E, override=True)
    assert is_ample(w.target, w.pushforward(h)), "pushforward of h is not Nakai-ample"
    return w


def _big_case(s: LogSurface, h: QVec, positive_tag: str) -> SemiampleVerdict:
    E = exceptional_locus(s, h)
    if not E:
        return SemiampleVerdict(SEMI_AMPLE, tag(positive_tag), None, "ample")
    fm = s.field
    if fm.is_Fp_closure:
        tg = positive_tag if positive_tag == "Thm-3.1" else "Cor-2.3"
        return SemiampleVerdict(SEMI_AMPLE, tag(tg), _witness(s, h, E),
                                "nef and big over Fbar_p")
    if fm.positive_char:
        return SemiampleVerdict(SEMI_AMPLE, tag(positive_tag), _witness(s, h, E),
                                "restriction to E(h) numerically trivial, torsion in char p")
    rational = all(s.curve(i).genus == 0 for i in E) and all(
        _reduced_genus(s, comp) == 0 for comp in _components(s, E))
    if rational:
        return SemiampleVerdict(SEMI_AMPLE, tag(positive_tag), _witness(s, h, E),
                                "E(h) is a rational configuration")
    bad = [i for i in E if s.curve(i).genus > 0] or E
    return SemiampleVerdict(UNDECIDABLE, tag("Prop-2.4"), None,
                            f"char 0 with non-rational curves in E(h): {', '.join(bad)}")


def semiample(s: LogSurface, h: QVec) -> SemiampleVerdict:
    h = la.qvec(h)
    neg = [c.id for c in s.curves if s.pair(h, c.cls) < 0]
    if neg:
        return SemiampleVerdict(NOT_SEMI_AMPLE, tag("Thm-2.1"), None, f"not nef: negative on {neg[0]}")
    if la.is_zero(h):
        return SemiampleVerdict(SEMI_AMPLE, tag("Thm-5.1"), None, "zero class")
    h2 = s.pair(h, h)
    if h2 > 0:
        return _big_case(s, h, "Thm-2.1")
    if h2 < 0:
        return SemiampleVerdict(NOT_SEMI_AMPLE, tag("Thm-2.1"), None, "negative square")
    cert = fibration_certificate(s, h)
    if cert is None:
        return SemiampleVerdict(UNDECIDABLE, tag("Prop-5.3"), None, "no fibre certificate")
    if cert.kind == "rational-pencil":
        return SemiampleVerdict(SEMI_AMPLE, tag("Thm-1.2"), None, f"rational pencil of {cert.curve}")
    label = cert.config.kodaira_label
    if s.field.positive_char:
        return SemiampleVerdict(SEMI_AMPLE, tag("Prop-5.3"), None, f"canonical type {label}, torsion in char p")
    return SemiampleVerdict(UNDECIDABLE, tag("Prop-5.3"), None,
                            f"canonical type {label}; char 0 needs torsion and H^1(O_X) = 0")


def abundance_big(s: LogSurface) -> SemiampleVerdict:
    kd = log_canonical_class(s)
    if not is_nef(s, kd) or s.pair(kd, kd) <= 0:
        raise SurfaceError("abundance_big needs K+Delta nef and big")
    return _big_case(s, kd, "Thm-3.1")


# -- kappa --------------------------------------------------------------------

class Kappa(IntEnum):
    MINUS_INFINITY = -1
    ZERO = 0
    ONE = 1
    TWO = 2

    def __str__(self) -> str:
        return "-inf" if self is Kappa.MINUS_INFINITY else str(int(self))


@dataclass(frozen=True)
class KappaResult:
    value: Kappa
    certificate: str
    cite: str
    zariski: ZariskiDecomposition | None = field(default=None, compare=False)


def kappa(s: LogSurface, d: QVec) -> KappaResult:
    d = la.qvec(d)
    if la.is_zero(d):
        z = ZariskiDecomposition(d, {})
    else:
        z = zariski(s, d)
        if z is None or not is_nef(s, z.P):
            return KappaResult(Kappa.MINUS_INFINITY, "not pseudo-effective", tag("Thm-1.2"), None)
    p2 = s.pair(z.P, z.P)
    if p2 > 0:
        return KappaResult(Kappa.TWO, "positive part is big", tag("Thm-3.1"), z)
    if la.is_zero(z.P):
        cert = "K+Delta ~_Q 0 (torsion)" if s.field.positive_char else "numerically trivial"
        return KappaResult(Kappa.ZERO, cert, tag("Thm-5.1"), z)
    cert = fibration_certificate(s, z.P)
    if cert is None:
        return KappaResult(Kappa.ONE, "numerical", tag("Thm-1.2"), z)
    if cert.kind == "canonical-type":
        return KappaResult(Kappa.ONE, f"canonical-type {cert.config.kodaira_label}", tag("Def-5.2"), z)
    return KappaResult(Kappa.ONE, f"fibration ({cert.curve})", tag("Thm-1.2"), z)
