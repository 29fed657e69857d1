import random

import pytest

from logsurf.mmp import (
    MFS_CURVE, MFS_POINT, MINIMAL_MODEL, ClosedWorldError, check_outcome, run_mmp,
)
from logsurf.positivity import Kappa
from logsurf.surface import make_surface

from generators import fixture, random_blowup_surface


def test_f1_contracts_e_to_p2():
    steps, out = run_mmp(fixture("f1"))
    assert [s.curve for s in steps] == ["e"]
    assert steps[0].cluster_report.a == {"e": 1}
    assert out.kind == MFS_POINT and out.final.rank == 1


def test_p1xp1_is_mfs_over_curve():
    steps, out = run_mmp(fixture("p1xp1"))
    assert steps == [] and out.kind == MFS_CURVE and out.fiber_curve == "f1"


@pytest.mark.parametrize("name,kind,kappa", [
    ("p2_cubic_boundary", MINIMAL_MODEL, Kappa.ZERO),
    ("f2_sections_p3", MINIMAL_MODEL, Kappa.TWO),
    ("cxc_p5", MINIMAL_MODEL, Kappa.TWO),
    ("p2_four_lines", MINIMAL_MODEL, Kappa.TWO),
    ("p2", MFS_POINT, Kappa.MINUS_INFINITY),
])
def test_fixture_outcomes(name, kind, kappa):
    s = fixture(name)
    steps, out = run_mmp(s)
    assert out.kind == kind and out.kappa.value == kappa
    assert check_outcome(s, steps, out) == []


def test_f2_sections_semiample_verdict():
    _, out = run_mmp(fixture("f2_sections_p3"))
    assert out.semiample_verdict.line() == "SemiAmple [Thm-3.1]"


def test_elliptic_ruled_undecidable_in_char0():
    _, out = run_mmp(fixture("elliptic_ruled_char0"))
    assert out.semiample_verdict.status == "Undecidable"


def test_closed_world_error():
    # F_1 with only the curve 2h - e declared: K is negative on it, but its square is 3,
    # so no declared curve can be contracted and none gives a fibration
    s = make_surface([[1, 0], [0, -1]], [-3, 1], [2, -1], [("c", [2, -1], 0)])
    with pytest.raises(ClosedWorldError):
        run_mmp(s)


def test_mode_validation():
    with pytest.raises(ValueError):
        run_mmp(fixture("p2"), mode="C")


def test_strict_extremal_agrees_on_fixtures():
    for name in ("f1", "p1xp1", "f2_sections_p3", "p2_cubic_boundary"):
        a = run_mmp(fixture(name))
        b = run_mmp(fixture(name), strict_extremal=True)
        assert [s.curve for s in a[0]] == [s.curve for s in b[0]] and a[1].kind == b[1].kind


def test_random_runs_satisfy_invariants():
    rng = random.Random(99)
    for _ in range(40):
        s = random_blowup_surface(rng)
        steps, out = run_mmp(s)
        assert check_outcome(s, steps, out) == []
        assert len(steps) <= s.rank - 1


def test_step_degrees_are_negative():
    rng = random.Random(4)
    for _ in range(20):
        s = random_blowup_surface(rng)
        steps, _ = run_mmp(s)
        for st in steps:
            assert st.degree < 0 and st.self_intersection < 0
            assert st.rank_after == st.rank_before - 1
