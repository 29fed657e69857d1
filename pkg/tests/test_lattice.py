import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logsurf import lattice as la
from logsurf.lattice import LatticeError, NSLattice

from generators import random_unimodular

P1P1 = la.gram([[0, 1], [1, 0]])
F1 = la.gram([[1, 0], [0, -1]])

small = st.integers(-6, 6)
vec3 = st.tuples(small, small, small).map(la.qvec)


def test_pair_basic():
    assert la.pair(F1, la.qvec([1, 0]), la.qvec([1, 0])) == 1
    assert la.pair(F1, la.qvec([1, -1]), la.qvec([1, -1])) == 0
    assert la.pair(P1P1, la.qvec([F(1, 2), 1]), la.qvec([1, F(1, 3)])) == F(1, 6) + 1


def test_pair_dimension_mismatch():
    with pytest.raises(LatticeError):
        la.pair(F1, la.qvec([1]), la.qvec([1, 0]))


def test_floats_refused():
    with pytest.raises(TypeError):
        la.qvec([1.0, 2])


@pytest.mark.parametrize("g,sig", [
    ([[1]], (1, 0, 0)),
    ([[0, 1], [1, 0]], (1, 1, 0)),
    ([[1, 0], [0, -1]], (1, 1, 0)),
    ([[-2, 1], [1, -2]], (0, 2, 0)),
    ([[0, 0], [0, 0]], (0, 0, 2)),
    ([[0, 1, 1], [1, 0, 1], [1, 1, -2]], (1, 2, 0)),
    ([[1, 1], [1, 1]], (1, 0, 1)),
])
def test_signature(g, sig):
    assert tuple(la.signature(la.gram(g))) == sig


def test_negative_definite_subset():
    g = la.gram([[1, 0, 0], [0, -2, 1], [0, 1, -2]])
    assert la.is_negative_definite(g, [1, 2])
    assert not la.is_negative_definite(g, [0, 1])
    assert la.is_negative_definite(g, [])


def test_nslattice_rejects_asymmetric_and_degenerate():
    with pytest.raises(LatticeError, match=r"gram not symmetric \(1,2\)"):
        NSLattice(la.gram([[1, 2], [3, -1]]), la.qvec([0, 0]), la.qvec([1, 0]))
    with pytest.raises(LatticeError, match="degenerate"):
        NSLattice(la.gram([[1, 1], [1, 1]]), la.qvec([0, 0]), la.qvec([1, 0]))


def test_solve_and_nullspace():
    m = la.gram([[-2, 1], [1, -2]])
    x = la.solve(m, [F(0), F(-1)])
    # -2x + y = 0, x - 2y = -1  =>  y = 2x, x = 1/3
    assert x == (F(1, 3), F(2, 3))
    ker = la.nullspace([[F(1), F(1), F(0)]], 3)
    assert len(ker) == 2
    for v in ker:
        assert v[0] + v[1] == 0 and la.is_integral(v)


def test_contract_f1():
    # contracting e on F_1 leaves P^2 with h^2 = 1
    q = la.contract_quotient(F1, [1])
    assert q.gram == ((F(1),),)
    assert q.pushforward(la.qvec([-3, 1])) == (F(-3),)
    assert q.pushforward(la.qvec([1, -1])) == (F(1),)


def test_contract_refuses_non_negative_definite():
    with pytest.raises(LatticeError):
        la.contract_quotient(P1P1, [0])


def test_primitive():
    assert la.primitive(la.qvec([F(2, 3), F(4, 3)])) == (1, 2)
    assert la.primitive(la.qvec([0, -6, 9])) == (0, -2, 3)


@given(vec3, vec3, vec3, small)
def test_bilinear_and_symmetric(a, b, c, k):
    g = la.gram([[0, 1, 1], [1, 0, 1], [1, 1, -2]])
    assert la.pair(g, a, b) == la.pair(g, b, a)
    assert la.pair(g, la.add(a, la.scale(k, c)), b) == la.pair(g, a, b) + k * la.pair(g, c, b)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_congruence_preserves_signature(seed):
    rng = random.Random(seed)
    g = la.gram([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -2]])
    u = random_unimodular(rng, 4)
    gu = tuple(tuple(sum(u[i][k] * g[k][l] * u[j][l] for k in range(4) for l in range(4))
                     for j in range(4)) for i in range(4))
    assert la.signature(gu) == la.signature(g) == la.Signature(1, 3, 0)


@settings(max_examples=60, deadline=None)
@given(vec3)
def test_projection_idempotent_and_orthogonal(a):
    g = la.gram([[1, 0, 0], [0, -1, 0], [0, 0, -1]])
    q = la.contract_span(g, [la.qvec([0, 1, -1])])
    p = q.project(a)
    assert q.project(p) == p
    assert la.pair(g, p, la.qvec([0, 1, -1])) == 0
    assert la.pair(g, q.pullback(q.pushforward(a)), q.pullback(q.pushforward(a))) == \
        la.pair(q.gram, q.pushforward(a), q.pushforward(a))


@given(vec3)
def test_hodge_index_on_cxc(d):
    g = la.gram([[0, 1, 1], [1, 0, 1], [1, 1, -2]])
    h = la.qvec([1, 1, 0])
    if la.pair(g, d, h) == 0 and not la.is_zero(d):
        assert la.pair(g, d, d) < 0


def test_fmt():
    assert la.fmt(F(-1, 3)) == "-1/3"
    assert la.fmt_vec(la.qvec([1, F(1, 2)])) == "(1, 1/2)"
