"""Blow-ups and contractions of log surfaces on the lattice level."""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Sequence

from . import lattice as la
from .lattice import NSLattice, QVec
from .singularities import DiscrepancyReport, ExceptionalCluster, classify
from .surface import CurveRecord, LogSurface, SurfaceError, is_ample, is_nef, log_canonical_class

log = logging.getLogger(__name__)

AMPLE_SEARCH_BOUND = 64


class BirationalError(ValueError):
    pass


@dataclass(frozen=True)
class ContractionResult:
    source: LogSurface
    target: LogSurface
    quotient: la.Quotient
    contracted: tuple[str, ...]
    cluster: ExceptionalCluster
    cluster_report: DiscrepancyReport
    merged: tuple[tuple[str, str], ...] = ()

    def pushforward(self, a: QVec) -> QVec:
        return self.quotient.pushforward(a)


def _fresh_id(s: LogSurface) -> str:
    taken = set(s.ids())
    k = 1
    while f"e{k}" in taken:
        k += 1
    return f"e{k}"


def blow_up(s: LogSurface, multiplicities: Mapping[str, int] | None = None,
            name: str | None = None) -> LogSurface:
    """Blow up one point lying on the listed curves with the given multiplicities.

    The new exceptional class e is appended as the last basis vector.
    """
    mult = {k: int(v) for k, v in (multiplicities or {}).items()}
    known = set(s.ids())
    for cid, m in mult.items():
        if cid not in known:
            raise BirationalError(f"unknown curve {cid!r}")
        if m < 0:
            raise BirationalError(f"negative multiplicity on {cid}")
    name = name or _fresh_id(s)
    if name in known:
        raise BirationalError(f"curve id {name!r} already used")

    n = s.rank
    g = s.lattice.gram
    new_gram = tuple(row + (Fraction(0),) for row in g) + ((Fraction(0),) * n + (Fraction(-1),),)
    e = la.unit(n + 1, n)
    pad = lambda v: v + (Fraction(0),)  # noqa: E731

    curves = []
    for c in s.curves:
        m = mult.get(c.id, 0)
        genus = c.genus - m * (m - 1) // 2
        if genus < 0:
            raise BirationalError(f"strict transform of {c.id} would have genus {genus}")
        curves.append(replace(c, cls=la.sub(pad(c.cls), la.scale(m, e)), genus=genus))
    curves.append(CurveRecord(name, e, 0))

    K = la.add(pad(s.K), e)
    H = pad(s.H)
    for k in range(1, AMPLE_SEARCH_BOUND + 1):
        cand = la.sub(la.scale(k, H), e)
        lat = NSLattice(new_gram, K, cand)
        out = replace(s, lattice=lat, curves=tuple(curves))
        if is_ample(out, cand):
            return out
    raise BirationalError(f"no n <= {AMPLE_SEARCH_BOUND} makes nH - e ample")


def contraction_cluster(s: LogSurface, ids: Sequence[str]) -> ExceptionalCluster:
    recs = [s.curve(i) for i in ids]
    classes = [c.cls for c in recs]
    gm = la.gram_of(s.lattice.gram, classes)
    n = len(recs)
    adj = tuple(tuple(Fraction(0) if i == j else gm[i][j] for j in range(n)) for i in range(n))
    bd = {}
    contracted = set(ids)
    for cid, x in s.boundary:
        if cid in contracted:
            continue
        meets = tuple(s.pair(s.cls(cid), v) for v in classes)
        if any(meets):
            bd[cid] = (x, meets)
    return ExceptionalCluster(
        ids=tuple(ids),
        self_int=tuple(gm[i][i] for i in range(n)),
        genus=tuple(c.genus for c in recs),
        adjacency=adj,
        boundary=bd,
        k_degrees=tuple(s.pair(s.K, v) for v in classes),
    )


def _is_smooth_blowdown(s: LogSurface, ids: Sequence[str]) -> bool:
    if len(ids) != 1:
        return False
    c = s.curve(ids[0])
    return (c.genus == 0 and not c.through_singularity
            and s.pair(c.cls, c.cls) == -1 and s.pair(s.K, c.cls) == -1)


def contract(s: LogSurface, ids: Sequence[str], override: bool = False) -> ContractionResult:
    """Contract a negative-definite set of curves.

    Without ``override`` every contracted curve must be (K+Delta)-negative;
    the semi-ampleness witness path passes ``override=True`` instead.
    """
    ids = list(dict.fromkeys(ids))
    if not ids:
        raise BirationalError("nothing to contract")
    for i in ids:
        s.curve(i)
    classes = [s.cls(i) for i in ids]
    if not la.is_negative_definite(la.gram_of(s.lattice.gram, classes)):
        raise BirationalError(f"curves {ids} do not span a negative definite sublattice")
    if not override:
        kd = log_canonical_class(s)
        for i in ids:
            if s.pair(kd, s.cls(i)) >= 0:
                raise BirationalError(f"(K+Delta).{i} >= 0; pass override to contract anyway")

    cluster = contraction_cluster(s, ids)
    report = classify(cluster, fbar=s.field.is_Fp_closure)
    q = la.contract_span(s.lattice.gram, classes)
    smooth = _is_smooth_blowdown(s, ids)
    gone = set(ids)

    survivors: list[CurveRecord] = []
    for c in s.curves:
        if c.id in gone:
            continue
        pushed = q.pushforward(c.cls)
        if la.is_zero(pushed):
            raise BirationalError(f"curve {c.id} maps to the zero class")
        meets = [s.pair(c.cls, v) for v in classes]
        if smooth:
            m = meets[0]
            genus = c.genus + int(m * (m - 1) / 2)
            thru = c.through_singularity
        else:
            genus = c.genus
            thru = c.through_singularity or any(meets)
        survivors.append(CurveRecord(c.id, pushed, genus, thru))

    bd = {cid: x for cid, x in s.boundary if cid not in gone}
    kept: dict[QVec, CurveRecord] = {}
    merged = []
    curves_out: list[CurveRecord] = []
    for c in survivors:
        keep = kept.get(c.cls)
        # distinct curves may share a class of square >= 0 (two lines); only an equal
        # negative class means one curve.  Two boundary curves stay separate so their
        # coefficients never add up.
        if (keep is not None and q.gram and la.pair(q.gram, c.cls, c.cls) < 0
                and not (keep.id in bd and c.id in bd)):
            merged.append((keep.id, c.id))
            log.info("curves %s and %s have equal classes after contraction; merged", keep.id, c.id)
            if c.id in bd:
                bd[keep.id] = bd.pop(c.id)
            continue
        kept.setdefault(c.cls, c)
        curves_out.append(c)
    curves = tuple(curves_out)

    K = q.pushforward(s.K)
    H = la.primitive(q.pushforward(s.H))
    lat = NSLattice(q.gram, K, H)
    target = LogSurface(
        lattice=lat,
        curves=curves,
        boundary=tuple((cid, bd[cid]) for cid in (c.id for c in curves) if cid in bd),
        field=s.field,
        q_factorial=s.q_factorial and report.q_factorial,
        rational_sing=s.rational_sing and report.rational_sing,
    )
    if not is_ample(target, H):
        raise BirationalError("pushforward of the ample class is not ample on the target")
    if la.signature(q.gram) != la.Signature(1, target.rank - 1, 0):
        raise BirationalError("target lattice violates the Hodge index signature")
    return ContractionResult(s, target, q, tuple(ids), cluster, report, tuple(merged))


def contraction_support_divisor(s: LogSurface, cid: str) -> QVec:
    """L = (-C^2) H + (H.C) C: nef, big, and orthogonal to C exactly."""
    c = s.cls(cid)
    c2 = s.pair(c, c)
    if c2 >= 0:
        raise SurfaceError(f"curve {cid} has C^2 = {la.fmt(c2)} >= 0; nothing to contract")
    L = la.add(la.scale(-c2, s.H), la.scale(s.pair(s.H, c), c))
    assert s.pair(L, c) == 0
    assert is_nef(s, L) and s.pair(L, L) > 0
    return L
