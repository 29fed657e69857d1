"""Log minimal model program driver for lattice-level log surfaces."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import lattice as la
from .birational import ContractionResult, contract
from .conelp import cone_contains
from .lattice import QVec
from .positivity import KappaResult, SemiampleVerdict, abundance_big, kappa, semiample
from .singularities import NOT_LC, DiscrepancyReport
from .surface import LogSurface, SurfaceError, is_nef, log_canonical_class, validate

MINIMAL_MODEL = "MinimalModel"
MFS_CURVE = "MoriFiberSpaceOverCurve"
MFS_POINT = "MoriFiberSpaceOverPoint"


class ModeBAbort(RuntimeError):
    """A contraction produced a non-lc point while running in mode B."""

    def __init__(self, msg: str, steps):
        super().__init__(msg)
        self.steps = steps


class ClosedWorldError(SurfaceError):
    pass


@dataclass(frozen=True)
class MMPStep:
    curve: str
    pre_class: QVec
    degree: Fraction
    self_intersection: Fraction
    cluster_report: DiscrepancyReport
    rank_before: int
    rank_after: int
    merged: tuple[tuple[str, str], ...] = ()
    kind: str = "ContractCurve"
    contraction: ContractionResult | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class MMPOutcome:
    kind: str
    final: LogSurface
    log_canonical: QVec
    semiample_verdict: SemiampleVerdict | None = None
    fiber_class: QVec | None = None
    fiber_curve: str | None = None
    kappa: KappaResult | None = None


def _select(s: LogSurface, kd: QVec, cands, strict: bool):
    """Selection rule: most negative (K+D).C / H.C, then id."""
    def key(c):
        return (s.pair(kd, c.cls) / s.pair(s.H, c.cls), c.id)

    ordered = sorted(cands, key=key)
    if not strict:
        return ordered
    out = []
    for c in ordered:
        others = [o.cls for o in s.curves if o.id != c.id and o.cls != c.cls]
        if cone_contains(others, c.cls) is None:
            out.append(c)
    return out


def run_mmp(s: LogSurface, mode: str = "A", strict_extremal: bool = False,
            check: bool = True) -> tuple[list[MMPStep], MMPOutcome]:
    """Contract (K+Delta)-negative curves until K+Delta is nef or a fibration appears."""
    if mode not in ("A", "B"):
        raise ValueError("mode must be 'A' or 'B'")
    if check:
        bad = validate(s)
        if bad:
            raise SurfaceError("invalid surface: " + "; ".join(bad))
    steps: list[MMPStep] = []
    cur = s
    while True:
        kd = log_canonical_class(cur)
        if is_nef(cur, kd):
            if cur.pair(kd, kd) > 0:
                verdict = abundance_big(cur)
            else:
                verdict = semiample(cur, kd)
            out = MMPOutcome(MINIMAL_MODEL, cur, kd, semiample_verdict=verdict, kappa=kappa(cur, kd))
            return steps, out
        cands = [c for c in cur.curves if cur.pair(kd, c.cls) < 0]
        neg = _select(cur, kd, [c for c in cands if cur.pair(c.cls, c.cls) < 0], strict_extremal)
        if neg:
            c = neg[0]
            res = contract(cur, [c.id])
            if mode == "B" and res.cluster_report.cls == NOT_LC:
                raise ModeBAbort(f"contracting {c.id} gives a non-lc point", steps)
            steps.append(MMPStep(
                curve=c.id,
                pre_class=kd,
                degree=cur.pair(kd, c.cls),
                self_intersection=cur.pair(c.cls, c.cls),
                cluster_report=res.cluster_report,
                rank_before=cur.rank,
                rank_after=res.target.rank,
                merged=res.merged,
                contraction=res,
            ))
            cur = res.target
            continue
        null = _select(cur, kd, [c for c in cands if cur.pair(c.cls, c.cls) == 0], False)
        if null:
            c = null[0]
            return steps, MMPOutcome(MFS_CURVE, cur, kd, fiber_class=c.cls, fiber_curve=c.id,
                                     kappa=kappa(cur, kd))
        if cur.rank == 1:
            return steps, MMPOutcome(MFS_POINT, cur, kd, kappa=kappa(cur, kd))
        raise ClosedWorldError(
            "K+Delta is not nef but no declared curve spans an extremal contraction; "
            "the declared curves do not generate the cone of curves")


def check_outcome(s: LogSurface, steps: list[MMPStep], out: MMPOutcome, mode: str = "A") -> list[str]:
    """Invariant violations of an MMP run (empty when the run is consistent)."""
    errs = []
    if len(steps) > s.rank - 1:
        errs.append("more steps than rank - 1")
    for st in steps:
        if st.rank_after != st.rank_before - 1:
            errs.append(f"step {st.curve} did not drop rank by one")
        if not (st.degree < 0 and st.self_intersection < 0):
            errs.append(f"step {st.curve} is not a (K+D)-negative negative curve")
        if mode == "B" and st.cluster_report.cls == NOT_LC:
            errs.append(f"mode B contracted {st.curve} to a non-lc point")
    f = out.final
    kd = out.log_canonical
    expected_rational = s.rational_sing and all(st.cluster_report.rational_sing for st in steps)
    if f.rational_sing != expected_rational:
        errs.append("rational-singularity flag does not match the step reports")
    if mode == "A" and s.q_factorial and not f.q_factorial:
        errs.append("Q-factoriality lost in mode A")
    if out.kind == MINIMAL_MODEL:
        if not is_nef(f, kd):
            errs.append("minimal model with K+Delta not nef")
    elif out.kind == MFS_CURVE:
        F = out.fiber_class
        if f.pair(F, F) != 0 or not is_nef(f, F) or not f.pair(kd, F) < 0:
            errs.append("fibre class fails F^2 = 0, F nef, (K+D).F < 0")
    elif out.kind == MFS_POINT:
        neg = la.scale(-1, kd)
        if f.rank != 1 or not (f.pair(neg, neg) > 0 and all(f.pair(neg, c.cls) > 0 for c in f.curves)):
            errs.append("Mori fibre space over a point without rank 1 and -(K+D) ample")
    return errs
