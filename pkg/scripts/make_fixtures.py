"""Regenerate the fixture corpus in src/logsurf/fixtures/.

Run from the repository root: ``python3 scripts/make_fixtures.py``.
"""
from pathlib import Path

from logsurf.files import cluster_to_dict, dumps, save_surface
from logsurf.singularities import ExceptionalCluster
from logsurf.surface import FieldMode, make_surface, validate

OUT = Path(__file__).resolve().parents[1] / "src" / "logsurf" / "fixtures"


def surfaces():
    # P^2: basis h
    p2 = make_surface([[1]], [-3], [1], [("line", [1], 0), ("cubic", [3], 1)])
    yield "p2", make_surface([[1]], [-3], [1], [("line", [1], 0)])
    yield "p2_cubic_boundary", p2.with_boundary({"cubic": 1})
    yield "p2_four_lines", make_surface(
        [[1]], [-3], [1], [(f"l{i}", [1], 0) for i in range(1, 5)], {f"l{i}": 1 for i in range(1, 5)})

    # F_1 = Bl_p P^2: basis (h, e)
    yield "f1", make_surface([[1, 0], [0, -1]], [-3, 1], [2, -1], [("e", [0, 1], 0), ("f", [1, -1], 0)])

    # F_2: basis (s, f), s^2 = -2, s.f = 1, f^2 = 0, K = -2s - 4f
    yield "f2", make_surface([[-2, 1], [1, 0]], [-2, -4], [1, 3], [("s", [1, 0], 0), ("f", [0, 1], 0)])
    # three disjoint-from-s sections t_i = s + 2f as boundary: K + Delta = s + 2f, nef and big, E = {s}
    yield "f2_sections_p3", make_surface(
        [[-2, 1], [1, 0]], [-2, -4], [1, 3],
        [("s", [1, 0], 0), ("f", [0, 1], 0), ("t1", [1, 2], 0), ("t2", [1, 2], 0), ("t3", [1, 2], 0)],
        {"t1": 1, "t2": 1, "t3": 1}, FieldMode.charp(3))

    # P^1 x P^1: basis (f1, f2)
    yield "p1xp1", make_surface([[0, 1], [1, 0]], [-2, -2], [1, 1], [("f1", [1, 0], 0), ("f2", [0, 1], 0)])

    # C x C, g(C) = 2: basis (f1, f2, delta); K = 2 f1 + 2 f2
    cxc = dict(
        gram=[[0, 1, 1], [1, 0, 1], [1, 1, -2]], canonical=[2, 2, 0], ample=[1, 1, 0],
        curves=[("f1", [1, 0, 0], 2), ("f2", [0, 1, 0], 2), ("δ", [0, 0, 1], 2)])
    yield "cxc_p5", make_surface(**cxc, field=FieldMode.charp(5))
    yield "cxc_char0", make_surface(**cxc)
    yield "cxc_fbar", make_surface(**cxc, field=FieldMode.charp(5, fbar=True))

    # ruled surface over an elliptic curve with invariant e = 1: basis (s, f), s^2 = -1,
    # K = -2s - f; sections t = s + f are elliptic with t^2 = 1.  Delta = s + t1 + t2 gives
    # K + Delta = s + f, nef and big, E = {s} with s elliptic.
    yield "elliptic_ruled_char0", make_surface(
        [[-1, 1], [1, 0]], [-2, -1], [1, 2],
        [("s", [1, 0], 1), ("f", [0, 1], 0), ("t1", [1, 1], 1), ("t2", [1, 1], 1)],
        {"s": 1, "t1": 1, "t2": 1})

    # rational elliptic surface with an I3 fibre: P^2 blown up at 9 points, three on each
    # side of a triangle y1, y2, y3.  basis (h, e1..e9), K = -3h + sum e_i = -y.
    n = 10
    g = [[0] * n for _ in range(n)]
    g[0][0] = 1
    for i in range(1, n):
        g[i][i] = -1
    K = [-3] + [1] * 9
    H = [4] + [-1] * 9

    def line(pts):
        return [1] + [-1 if i in pts else 0 for i in range(1, n)]

    curves = [("y", [3] + [-1] * 9, 1),
              ("y1", line({1, 2, 3}), 0), ("y2", line({4, 5, 6}), 0), ("y3", line({7, 8, 9}), 0)]
    curves += [(f"e{i}", [0] * i + [1] + [0] * (n - 1 - i), 0) for i in range(1, n)]
    yield "rational_elliptic_i3", make_surface(g, K, H, curves)


def clusters():
    yield "cusp", ExceptionalCluster.build(
        [("c1", -3, 0), ("c2", -2, 0), ("c3", -2, 0)], [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    yield "a2", ExceptionalCluster.build([("c1", -2, 0), ("c2", -2, 0)], [[0, 1], [1, 0]])
    yield "cone_over_cubic", ExceptionalCluster.build([("c", -3, 1)], [[0]])
    yield "a1", ExceptionalCluster.build([("c", -2, 0)], [[0]])
    yield "minus3", ExceptionalCluster.build([("c", -3, 0)], [[0]])


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, s in surfaces():
        bad = validate(s)
        assert not bad, (name, bad)
        save_surface(s, OUT / f"{name}.surface")
    for name, cl in clusters():
        fm = FieldMode.charp(3, fbar=True) if name == "cone_over_cubic" else None
        (OUT / f"{name}.cluster").write_text(dumps(cluster_to_dict(cl, fm)), encoding="utf-8")


if __name__ == "__main__":
    main()
