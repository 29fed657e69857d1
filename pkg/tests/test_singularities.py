import itertools
import random
from fractions import Fraction as F

import pytest

from logsurf import singularities as sg
from logsurf.lattice import is_negative_definite
from logsurf.singularities import ClusterError, ExceptionalCluster, classify, discrepancies

from generators import cluster_fixture

# Hand-derived oracles.  The system is sum_i a_i (E_i.E_j) = K.E_j + boundary terms,
# with K.E_j = 2g_j - 2 - E_j^2 by adjunction.
#  A1:   E^2 = -2, K.E = 0           ->  -2a = 0                       -> a = 0
#  (-3): E^2 = -3, K.E = 1           ->  -3a = 1                       -> a = -1/3
#  A2:   [[-2,1],[1,-2]] a = (0, 0)  ->  a = (0, 0)
#  cusp: [[-3,1,1],[1,-2,1],[1,1,-2]] a = (1, 0, 0); a = (-1,-1,-1) gives 3-1-1 = 1,
#        -1+2-1 = 0, -1-1+2 = 0
#  elliptic (-3): K.E = 0 + 3 = 3    ->  -3a = 3                       -> a = -1
TABLE = {
    "a1": ({"c": F(0)}, sg.CANONICAL, True),
    "minus3": ({"c": F(-1, 3)}, sg.KLT, True),
    "a2": ({"c1": F(0), "c2": F(0)}, sg.CANONICAL, True),
    "cusp": ({"c1": F(-1), "c2": F(-1), "c3": F(-1)}, sg.LC, False),
    "cone_over_cubic": ({"c": F(-1)}, sg.LC, False),
}


@pytest.mark.parametrize("name", sorted(TABLE))
def test_table(name):
    a, verdict, rational = TABLE[name]
    rep = classify(cluster_fixture(name))
    assert rep.a == a
    assert rep.cls == verdict
    assert rep.rational_sing is rational


def test_kinds_and_citations():
    assert classify(cluster_fixture("cusp")).kind == "cusp"
    cone = classify(cluster_fixture("cone_over_cubic"))
    assert cone.kind == "simple elliptic"
    assert cone.cite() == "Prop-6.3"
    assert classify(cluster_fixture("a2")).cite() == "Thm-6.4"


def test_fbar_keeps_q_factorial():
    cone = cluster_fixture("cone_over_cubic")
    assert not classify(cone).q_factorial
    assert classify(cone, fbar=True).q_factorial


def test_terminal_and_not_lc():
    # (-1)-curve: -a = -1 -> a = 1
    assert classify(ExceptionalCluster.build([("e", -1, 0)])).cls == sg.TERMINAL
    # genus 2, E^2 = -1: K.E = 2 + 1 = 3 -> a = -3
    rep = classify(ExceptionalCluster.build([("e", -1, 2)]))
    assert rep.a == {"e": F(-3)} and rep.cls == sg.NOT_LC


def test_boundary_lowers_discrepancy():
    # A1 with a boundary curve of coefficient 1/2 meeting it once: -2a = 1/2 -> a = -1/4
    cl = ExceptionalCluster.build([("c", -2, 0)], boundary={"b": (F(1, 2), [1])})
    assert discrepancies(cl) == {"c": F(-1, 4)}


def test_rejections():
    with pytest.raises(ClusterError):
        discrepancies(ExceptionalCluster.build([("c", 0, 0)]))
    with pytest.raises(ClusterError):
        ExceptionalCluster.build([("a", -2, 0), ("b", -2, 0)], [[0, 1], [2, 0]])
    with pytest.raises(ClusterError):
        ExceptionalCluster.build([("a", -2, 0)], boundary={"b": (F(3, 2), [1])})


def _cofactor_solve(m, b):
    n = len(m)
    if n == 1:
        return [b[0] / m[0][0]]
    if n == 2:
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        return [(m[1][1] * b[0] - m[0][1] * b[1]) / det, (m[0][0] * b[1] - m[1][0] * b[0]) / det]

    def det3(a):
        return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    d = det3(m)
    out = []
    for j in range(3):  # Cramer
        mj = [[b[i] if k == j else m[i][k] for k in range(3)] for i in range(3)]
        out.append(det3(mj) / d)
    return out


def _random_cluster(rng, n):
    while True:
        selfs = [rng.randint(-5, -1) for _ in range(n)]
        genus = [rng.choice((0, 0, 0, 1)) for _ in range(n)]
        adj = [[0] * n for _ in range(n)]
        for i, j in itertools.combinations(range(n), 2):
            adj[i][j] = adj[j][i] = rng.choice((0, 0, 1))
        cl = ExceptionalCluster.build([(f"c{i}", selfs[i], genus[i]) for i in range(n)], adj)
        if is_negative_definite(cl.matrix):
            return cl


def test_against_cramer_oracle():
    rng = random.Random(7)
    for _ in range(150):
        cl = _random_cluster(rng, rng.randint(1, 3))
        a = discrepancies(cl)
        assert list(a.values()) == _cofactor_solve(cl.matrix, cl.rhs())


def test_permutation_invariance():
    rng = random.Random(11)
    for _ in range(60):
        cl = _random_cluster(rng, rng.randint(2, 4))
        perm = list(range(len(cl.ids)))
        rng.shuffle(perm)
        pc = ExceptionalCluster.build(
            [(cl.ids[p], cl.self_int[p], cl.genus[p]) for p in perm],
            [[cl.adjacency[p][q] for q in perm] for p in perm])
        assert discrepancies(pc) == discrepancies(cl)


def test_boundary_monotone():
    # raising a boundary coefficient never raises a discrepancy
    rng = random.Random(3)
    for _ in range(60):
        cl = _random_cluster(rng, rng.randint(1, 3))
        meets = [rng.randint(0, 2) for _ in cl.ids]
        lo, hi = sorted(rng.sample([F(0), F(1, 3), F(1, 2), F(2, 3), F(1)], 2))
        a_lo = discrepancies(ExceptionalCluster(cl.ids, cl.self_int, cl.genus, cl.adjacency,
                                                {"b": (lo, tuple(map(F, meets)))}))
        a_hi = discrepancies(ExceptionalCluster(cl.ids, cl.self_int, cl.genus, cl.adjacency,
                                                {"b": (hi, tuple(map(F, meets)))}))
        assert all(a_hi[i] <= a_lo[i] for i in cl.ids)


def test_class_of_thresholds():
    assert sg.class_of([F(1, 2)]) == sg.TERMINAL
    assert sg.class_of([F(0), F(1)]) == sg.CANONICAL
    assert sg.class_of([F(-1, 2)]) == sg.KLT
    assert sg.class_of([F(-1)]) == sg.LC
    assert sg.class_of([F(-3, 2)]) == sg.NOT_LC
