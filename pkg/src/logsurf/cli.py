"""Command-line front end.

Exit codes: 0 success, 1 invariant violation, 2 parse or usage error,
3 mode-B abort.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import lattice as la
from .birational import BirationalError, contraction_cluster
from .citations import REGISTRY
from .files import (
    FileFormatError,
    dump_rational,
    dumps_report,
    fmt_class,
    is_cluster_doc,
    loads_cluster,
    loads_surface,
    parse_class,
    surface_to_dict,
)
from .lattice import LatticeError
from .mmp import MFS_CURVE, MINIMAL_MODEL, ClosedWorldError, ModeBAbort, run_mmp
from .positivity import kappa, semiample, zariski
from .singularities import ClusterError, classify
from .surface import (
    SurfaceError,
    exceptional_locus,
    is_ample,
    is_big,
    is_nef,
    is_pseudo_effective,
    validate,
)

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, msg: str, code: int):
        super().__init__(msg)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise CliError(f"{path}: {e}", EXIT_USAGE) from None


def _surface(path: str, check: bool = True):
    text = _read(path)
    try:
        s = loads_surface(text)
    except FileFormatError as e:
        raise CliError(f"{path}: parse error at {e}", EXIT_USAGE) from None
    except LatticeError as e:
        raise CliError(str(e), EXIT_INVALID) from None
    if check:
        bad = validate(s)
        if bad:
            raise CliError("\n".join(bad), EXIT_INVALID)
    return s


def _cluster(path: str):
    try:
        return loads_cluster(_read(path))
    except FileFormatError as e:
        raise CliError(f"{path}: parse error at {e}", EXIT_USAGE) from None
    except ClusterError as e:
        raise CliError(str(e), EXIT_INVALID) from None


def _class(arg: str | None, s):
    if arg is None:
        raise CliError("this query needs a class argument, e.g. 2,0,1", EXIT_USAGE)
    try:
        v = parse_class(arg)
    except FileFormatError as e:
        raise CliError(str(e), EXIT_USAGE) from None
    if len(v) != s.rank:
        raise CliError(f"class has {len(v)} entries but the surface has rank {s.rank}", EXIT_USAGE)
    return v


def _ids(arg: str | None, s):
    ids = [x.strip() for x in (arg or "").split(",") if x.strip()]
    known = set(s.ids())
    for i in ids:
        if i not in known:
            raise CliError(f"unknown curve id {i!r}", EXIT_USAGE)
    return ids


def cmd_validate(path: str, out=None) -> int:
    out = out or sys.stdout
    text = _read(path)
    try:
        s = loads_surface(text) if not is_cluster_doc(text) else None
        if s is None:
            loads_cluster(text)
            print("ok", file=out)
            return EXIT_OK
    except FileFormatError as e:
        raise CliError(f"{path}: parse error at {e}", EXIT_USAGE) from None
    except (LatticeError, ClusterError) as e:
        print(str(e), file=out)
        return EXIT_INVALID
    bad = validate(s)
    for line in bad:
        print(line, file=out)
    if not bad:
        print("ok", file=out)
    return EXIT_INVALID if bad else EXIT_OK


def _report_verdict(rep) -> dict:
    return {
        "discrepancies": {k: dump_rational(v) for k, v in rep.a.items()},
        "verdict": rep.cls + (f" ({rep.kind})" if rep.kind else ""),
        "numerically_dlt_approx": rep.numerically_dlt,
        "q_factorial": rep.q_factorial,
        "rational_sing": rep.rational_sing,
        "cite": rep.cite(),
    }


def build_report(name: str, steps, out, mode: str) -> dict:
    cites = []
    rsteps = []
    for i, st in enumerate(steps, 1):
        rec = {
            "step": i,
            "kind": st.kind,
            "curve": st.curve,
            "rank_before": st.rank_before,
            "rank_after": st.rank_after,
            "log_canonical_before": fmt_class(st.pre_class),
            "degree": dump_rational(st.degree),
            "self_intersection": dump_rational(st.self_intersection),
            "merged": [list(m) for m in st.merged],
            "cluster": _report_verdict(st.cluster_report),
        }
        cites.append(rec["cluster"]["cite"])
        rsteps.append(rec)
    oc = {
        "kind": out.kind,
        "cite": "Thm-1.2",
        "rank": out.final.rank,
        "log_canonical": fmt_class(out.log_canonical),
    }
    cites.append("Thm-1.2")
    if out.kind == MFS_CURVE:
        oc["fiber_curve"] = out.fiber_curve
        oc["fiber_class"] = fmt_class(out.fiber_class)
    if out.semiample_verdict is not None:
        v = out.semiample_verdict
        oc["semiample"] = {
            "status": v.status,
            "cite": v.reason,
            "detail": v.detail,
            "witness_contracts": list(v.witness.contracted) if v.witness else [],
        }
        cites.append(v.reason)
    if out.kappa is not None:
        oc["kappa"] = {"value": str(out.kappa.value), "certificate": out.kappa.certificate,
                       "cite": out.kappa.cite}
        cites.append(out.kappa.cite)
    used = [t for t in REGISTRY if t in cites]
    return {
        "surface": name,
        "mode": mode,
        "steps": rsteps,
        "outcome": oc,
        "final_surface": surface_to_dict(out.final),
        "citations": used,
    }


def cmd_mmp(path: str, trace: str | None = None, strict_extremal: bool = False, mode: str = "A",
            out=None) -> int:
    out = out or sys.stdout
    s = _surface(path)
    try:
        steps, res = run_mmp(s, mode=mode, strict_extremal=strict_extremal)
    except ModeBAbort as e:
        print(f"mode-B abort: {e} [Thm-1.2]", file=out)
        return EXIT_ABORT
    except (ClosedWorldError, BirationalError, SurfaceError) as e:
        print(f"inconsistent closed world: {e}", file=out)
        return EXIT_INVALID
    for i, st in enumerate(steps, 1):
        a = ", ".join(f"{k}={dump_rational(v)}" for k, v in st.cluster_report.a.items())
        print(f"step {i}: contract {st.curve} (rank {st.rank_before} -> {st.rank_after}); "
              f"{st.cluster_report.cls}, a: {a} [{st.cluster_report.cite()}]", file=out)
    line = f"outcome: {res.kind}"
    if res.kind == MFS_CURVE:
        line += f", fibre {res.fiber_curve}"
    print(line + " [Thm-1.2]", file=out)
    if res.kind == MINIMAL_MODEL:
        print(f"semiample: {res.semiample_verdict.line()}", file=out)
    if res.kappa is not None:
        print(f"kappa = {res.kappa.value} ({res.kappa.certificate}) [{res.kappa.cite}]", file=out)
    if trace:
        Path(trace).write_text(dumps_report(build_report(Path(path).name, steps, res, mode)),
                               encoding="utf-8")
    return EXIT_OK


def _sing_line(rep) -> str:
    a = ",".join(la.fmt(v) for v in rep.a.values())
    kind = f" ({rep.kind})" if rep.kind else ""
    dlt = "numerically-dlt(approx)" if rep.numerically_dlt else "not numerically-dlt(approx)"
    rat = "rational" if rep.rational_sing else "not rational"
    return f"{rep.cls}{kind}, a = ({a}), {dlt}, {rat} [{rep.cite()}]"


def cmd_query(sub: str, path: str, arg: str | None = None, out=None) -> int:
    out = out or sys.stdout
    if sub == "sing":
        text = _read(path)
        if is_cluster_doc(text):
            cl, fm = _cluster(path)
        else:
            s = _surface(path)
            ids = _ids(arg, s)
            if not ids:
                raise CliError("sing on a surface needs curve ids", EXIT_USAGE)
            cl, fm = contraction_cluster(s, ids), s.field
        try:
            rep = classify(cl, fbar=fm.is_Fp_closure)
        except ClusterError as e:
            print(str(e), file=out)
            return EXIT_INVALID
        print(_sing_line(rep), file=out)
        return EXIT_OK

    s = _surface(path)
    if sub == "eh":
        h = _class(arg, s)
        try:
            ids = exceptional_locus(s, h)
        except SurfaceError as e:
            print(str(e), file=out)
            return EXIT_INVALID
        print(",".join(ids), file=out)
        return EXIT_OK
    h = _class(arg, s)
    if sub == "nef":
        print(f"{str(is_nef(s, h)).lower()} [Thm-1.2]", file=out)
    elif sub == "ample":
        print(f"{str(is_ample(s, h)).lower()} [Thm-2.1]", file=out)
    elif sub == "big":
        print(f"{str(is_big(s, h)).lower()} [Thm-2.1]", file=out)
    elif sub == "pseff":
        print(f"{str(is_pseudo_effective(s, h)).lower()} [Thm-1.2]", file=out)
    elif sub == "zariski":
        z = zariski(s, h)
        if z is None:
            print("NotPseudoEffective [Thm-1.2]", file=out)
        else:
            n = ", ".join(f"{k}: {dump_rational(v)}" for k, v in z.N.items())
            print(f"P = {la.fmt_vec(z.P)}", file=out)
            print(f"N = {{{n}}}", file=out)
            print("PseudoEffective [Thm-1.2]", file=out)
    elif sub == "semiample":
        v = semiample(s, h)
        print(v.line(), file=out)
        if v.detail:
            print(f"  {v.detail}", file=out)
        if v.witness is not None:
            print(f"  witness contracts {', '.join(v.witness.contracted)}", file=out)
    elif sub == "kappa":
        k = kappa(s, h)
        print(f"kappa = {k.value} ({k.certificate}) [{k.cite}]", file=out)
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown query {sub}", EXIT_USAGE)
    return EXIT_OK


def _dot_quote(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def cmd_dot(path: str, ids=(), out=None) -> int:
    out = out or sys.stdout
    text = _read(path)
    if is_cluster_doc(text):
        cl, _ = _cluster(path)
        names = list(cl.ids)
        unknown = [i for i in ids if i not in names]
        if unknown:
            raise CliError(f"unknown curve id {unknown[0]!r}", EXIT_USAGE)
        pick = list(ids) or names
        idx = [names.index(i) for i in pick]
        nodes = [(cl.ids[i], cl.self_int[i], cl.genus[i]) for i in idx]
        m = cl.matrix
        edges = [(cl.ids[i], cl.ids[j], m[i][j]) for a, i in enumerate(idx) for j in idx[a + 1:] if m[i][j]]
    else:
        s = _surface(path)
        pick = list(ids) or s.ids()
        for i in pick:
            if i not in set(s.ids()):
                raise CliError(f"unknown curve id {i!r}", EXIT_USAGE)
        nodes = [(i, s.pair(s.cls(i), s.cls(i)), s.curve(i).genus) for i in pick]
        edges = []
        for a, i in enumerate(pick):
            for j in pick[a + 1:]:
                w = s.pair(s.cls(i), s.cls(j))
                if w:
                    edges.append((i, j, w))
    print("graph dual {", file=out)
    for i, e, g in nodes:
        print(f"  {_dot_quote(i)} [label={_dot_quote(f'{i} [{la.fmt(e)}, {g}]')}];", file=out)
    for i, j, w in edges:
        print(f"  {_dot_quote(i)} -- {_dot_quote(j)} [label={_dot_quote(la.fmt(w))}, weight={la.fmt(w)}];",
              file=out)
    print("}", file=out)
    return EXIT_OK


QUERIES = ("nef", "ample", "big", "pseff", "eh", "zariski", "semiample", "kappa", "sing")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logsurf", description="Log MMP for surfaces given by intersection lattices.")
    sub = p.add_subparsers(dest="cmd", required=True)
    v = sub.add_parser("validate", help="check a surface or cluster file")
    v.add_argument("path")
    m = sub.add_parser("mmp", help="run the log minimal model program")
    m.add_argument("path")
    m.add_argument("--trace", help="write the JSON report here")
    m.add_argument("--strict-extremal", action="store_true", help="verify extremality by exact LP")
    m.add_argument("--mode", choices=("A", "B"), default="A")
    q = sub.add_parser("query", help="one-off predicates; put '--' before classes starting with '-'")
    q.add_argument("sub", choices=QUERIES)
    q.add_argument("path")
    q.add_argument("arg", nargs="?", help="comma-separated class, or curve ids for sing")
    d = sub.add_parser("dot", help="dual graph in DOT format")
    d.add_argument("path")
    d.add_argument("ids", nargs="*")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "validate":
            return cmd_validate(args.path)
        if args.cmd == "mmp":
            return cmd_mmp(args.path, args.trace, args.strict_extremal, args.mode)
        if args.cmd == "query":
            return cmd_query(args.sub, args.path, args.arg)
        if args.cmd == "dot":
            return cmd_dot(args.path, args.ids)
    except CliError as e:
        print(str(e), file=sys.stderr if e.code == EXIT_USAGE else sys.stdout)
        return e.code
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
