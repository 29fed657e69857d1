import json
import re
import subprocess
import sys

import pytest

from logsurf import mmp as mmp_mod
from logsurf.citations import REGISTRY
from logsurf.cli import main
from logsurf.files import FileFormatError, dumps_surface, loads_surface, parse_class, parse_rational
from logsurf.singularities import NOT_LC

from generators import CLUSTER_FIXTURES, FIXTURES, SURFACE_FIXTURES


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def fx(name, ext="surface"):
    return FIXTURES / f"{name}.{ext}"


@pytest.mark.parametrize("name", SURFACE_FIXTURES)
def test_validate_fixtures(capsys, name):
    assert run(capsys, "validate", fx(name))[:2] == (0, "ok\n")


@pytest.mark.parametrize("name", CLUSTER_FIXTURES)
def test_validate_clusters(capsys, name):
    assert run(capsys, "validate", fx(name, "cluster"))[0] == 0


def test_asymmetric_gram_exit_1(capsys, tmp_path):
    p = tmp_path / "bad.surface"
    p.write_text('{"gram": [[1, 2], [3, -1]], "canonical": [0, 0], "ample": [1, 0], "curves": []}')
    code, out, _ = run(capsys, "validate", p)
    assert code == 1 and "gram not symmetric (1,2)" in out


def test_garbage_exit_2(capsys, tmp_path):
    p = tmp_path / "junk.surface"
    p.write_text("{ this is not json")
    code, _, err = run(capsys, "validate", p)
    assert code == 2 and "parse error" in err
    code, _, _ = run(capsys, "validate", tmp_path / "missing.surface")
    assert code == 2


def test_float_literal_refused(capsys, tmp_path):
    p = tmp_path / "float.surface"
    p.write_text('{"gram": [[1.0]], "canonical": [-3], "ample": [1], "curves": []}')
    assert run(capsys, "validate", p)[0] == 2


def test_invariant_violation_exit_1(capsys, tmp_path):
    p = tmp_path / "adj.surface"
    p.write_text('{"gram": [[1]], "canonical": [-3], "ample": [1],'
                 ' "curves": [{"id": "c", "class": [2], "genus": 1}]}')
    code, out, _ = run(capsys, "validate", p)
    assert code == 1 and "adjunction" in out


def test_query_outputs(capsys):
    assert run(capsys, "query", "semiample", fx("cxc_p5"), "2,0,1")[1].startswith("SemiAmple [Thm-2.1]")
    assert run(capsys, "query", "semiample", fx("cxc_char0"), "2,0,1")[1].startswith(
        "Undecidable [Prop-2.4]")
    assert run(capsys, "query", "eh", fx("cxc_p5"), "2,0,1")[1] == "δ\n"
    assert run(capsys, "query", "nef", fx("f1"), "1,0")[1] == "true [Thm-1.2]\n"
    assert run(capsys, "query", "zariski", fx("f1"), "1,2")[1] == "P = (1, 0)\nN = {e: 2}\nPseudoEffective [Thm-1.2]\n"
    assert run(capsys, "query", "zariski", fx("f1"), "1,-2")[1] == "NotPseudoEffective [Thm-1.2]\n"
    assert run(capsys, "query", "sing", fx("cusp", "cluster"))[1] == (
        "LC (cusp), a = (-1,-1,-1), not numerically-dlt(approx), not rational [Prop-6.3]\n")
    assert run(capsys, "query", "sing", fx("minus3", "cluster"))[1].startswith("KLT, a = (-1/3)")
    assert run(capsys, "query", "kappa", fx("rational_elliptic_i3"), "3,-1,-1,-1,-1,-1,-1,-1,-1,-1")[1] \
        .startswith("kappa = 1 (canonical-type")


def test_query_usage_errors(capsys):
    assert run(capsys, "query", "nef", fx("f1"), "1,0,0")[0] == 2
    assert run(capsys, "query", "nef", fx("f1"))[0] == 2
    assert run(capsys, "query", "nef", fx("f1"), "1,x")[0] == 2
    assert run(capsys, "query", "sing", fx("f1"), "nope")[0] == 2


def test_negative_class_after_double_dash(capsys):
    assert run(capsys, "query", "pseff", fx("p2"), "--", "-1")[1] == "false [Thm-1.2]\n"


def test_mmp_trace_report(capsys, tmp_path):
    t1, t2 = tmp_path / "a.json", tmp_path / "b.json"
    code, out, _ = run(capsys, "mmp", fx("f1"), "--trace", t1)
    assert code == 0 and "outcome: MoriFiberSpaceOverPoint" in out
    run(capsys, "mmp", fx("f1"), "--trace", t2)
    assert t1.read_bytes() == t2.read_bytes()
    rep = json.loads(t1.read_text())
    assert rep["steps"][0]["curve"] == "e"
    assert rep["steps"][0]["cluster"]["discrepancies"] == {"e": 1}
    assert all(c in REGISTRY for c in rep["citations"])


def test_mode_b_abort_exit_3(capsys, monkeypatch):
    real = mmp_mod.contract

    def fake(s, ids, override=False):
        res = real(s, ids, override)
        rep = res.cluster_report.__class__(res.cluster_report.a, NOT_LC, False, False, False)
        return res.__class__(res.source, res.target, res.quotient, res.contracted, res.cluster, rep)

    monkeypatch.setattr(mmp_mod, "contract", fake)
    assert run(capsys, "mmp", fx("f1"), "--mode", "B")[0] == 3
    assert run(capsys, "mmp", fx("f1"), "--mode", "A")[0] == 0


def test_dot_output(capsys):
    code, out, _ = run(capsys, "dot", fx("a2", "cluster"))
    assert code == 0
    assert out == ('graph dual {\n  "c1" [label="c1 [-2, 0]"];\n  "c2" [label="c2 [-2, 0]"];\n'
                   '  "c1" -- "c2" [label="1", weight=1];\n}\n')
    code, out, _ = run(capsys, "dot", fx("rational_elliptic_i3"), "y1", "y2", "y3")
    assert out.count(" -- ") == 3
    assert run(capsys, "dot", fx("f1"), "zz")[0] == 2


@pytest.mark.parametrize("name", SURFACE_FIXTURES)
def test_parse_serialize_round_trip(name):
    text = fx(name).read_text(encoding="utf-8")
    assert dumps_surface(loads_surface(text)) == text


def test_parse_helpers():
    assert parse_rational("-2/6") == parse_rational(-1) / 3
    with pytest.raises(FileFormatError):
        parse_rational(0.5)
    with pytest.raises(FileFormatError):
        parse_class("1,,2")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "logsurf", "validate", str(fx("p2"))],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "ok\n"


def test_dot_single_node(capsys):
    out = run(capsys, "dot", fx("minus3", "cluster"))[1]
    assert out == 'graph dual {\n  "c" [label="c [-3, 0]"];\n}\n'


def test_every_verdict_line_is_tagged(capsys):
    calls = [("mmp", fx(n)) for n in SURFACE_FIXTURES]
    calls += [("query", "sing", fx(n, "cluster")) for n in CLUSTER_FIXTURES]
    calls += [("query", q, fx("cxc_p5"), "2,0,1") for q in ("nef", "ample", "big", "pseff", "zariski",
                                                            "semiample", "kappa")]
    seen = set()
    for argv in calls:
        code, out, _ = run(capsys, *argv)
        assert code == 0
        for line in out.splitlines():
            if line.startswith(("  ", "P = ", "N = ")):
                continue  # detail and data lines around a verdict
            tags = re.findall(r"\[([A-Za-z]+-[\d.]+)\]", line)
            assert len(tags) == 1, line
            seen.update(tags)
    assert seen <= set(REGISTRY)
