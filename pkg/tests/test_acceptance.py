"""Exit criteria of the build, one PASS/FAIL line each."""

import time
from contextlib import contextmanager

import pytest
from conftest import ACCEPTANCE_LINES
from hypothesis import HealthCheck, settings
from property_suites import COUNTS, SUITES
from test_linsys import C5_PRINTED, C6_PRINTED, parse_printed

from surfinv.classify import enumerate_branch_shapes, enumerate_multiple_fibres
from surfinv.cli import main
from surfinv.linsys import local_intersection, plane_system
from surfinv.pipeline import bicanonical_degree, image_degree

pytestmark = pytest.mark.acceptance


@contextmanager
def criterion(key, title, cap=None):
    info = {"detail": ""}
    start = time.perf_counter()
    try:
        yield info
        elapsed = time.perf_counter() - start
        if cap is not None:
            assert elapsed < cap, f"took {elapsed:.1f} s, cap {cap} s"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        _emit(key, f"FAIL  {title} ({elapsed:.2f} s): {exc}")
        raise
    _emit(key, f"PASS  {title} ({elapsed:.2f} s){': ' + info['detail'] if info['detail'] else ''}")


def _emit(key, line):
    ACCEPTANCE_LINES[key] = f"[{key}] {line}"
    print(ACCEPTANCE_LINES[key])


def test_1_dimension_vector(capsys):
    with criterion("1", "dimension vector", cap=60) as info:
        code = main(["reproduce-appendix"])
        out = capsys.readouterr().out
        assert code == 0
        assert tuple(map(int, out.split())) == (3, 0, 1, 2, 1, 0, 0)
        info["detail"] = out.strip()


def test_2_curve_reconstruction(cfg):
    with criterion("2", "C5 and C6 reconstruction", cap=60) as info:
        for name, printed in (("C5", C5_PRINTED), ("C6", C6_PRINTED)):
            spec = cfg.curves[name]
            system = plane_system(cfg.field, spec.degree, spec.chains)
            assert system.dimension == 1
            assert system.sections()[0].poly.monic() == parse_printed(printed, cfg.field).monic()
        info["detail"] = "both unique sections match coefficient-by-coefficient"


def test_3_local_intersections(cfg):
    with criterion("3", "local intersections", cap=30) as info:
        F5 = plane_system(cfg.field, 5, cfg.curves["C5"].chains).sections()[0].poly
        F6 = plane_system(cfg.field, 6, cfg.curves["C6"].chains).sections()[0].poly
        got = {p: local_intersection(F5, F6, cfg.geometry.points[cfg.point_index[p]]) for p in ("p2", "p3")}
        assert got == {"p2": 12, "p3": 7}
        info["detail"] = f"I_p2 = {got['p2']}, I_p3 = {got['p3']}"


def test_4_invariants(example_report):
    with criterion("4", "invariants of S") as info:
        S = example_report.results["S"]
        got = {k: S[k] for k in ("chi", "p_g", "q", "h0_2K_V", "N_sq", "K_sq", "t")}
        assert got == {"chi": 1, "p_g": 0, "q": 0, "h0_2K_V": 4, "N_sq": -7, "K_sq": 3, "t": 5}
        info["detail"] = " ".join(f"{k}={v}" for k, v in got.items())


def test_5_quotient_classification(example_report):
    with criterion("5", "quotient classification") as info:
        R = example_report.results
        W2, W3 = R["quotients"]["W2"], R["quotients"]["W3"]
        assert W2["P2"] == 1 and W2["P6_lower_bound"] == 2
        assert W2["verdict"]["kodaira"] == "1" and "Kod=1" in W2["verdict"]["fired"]
        h0_6 = [e["value"] for e in example_report.log if e["op"] == "h0" and e["inputs"]["name"] == "6K+6L2"]
        assert h0_6 and set(h0_6) == {2}
        assert W3["verdict"]["label"] == "rational" and "rational-fibration" in W3["verdict"]["fired"]
        assert R["composition"] == {"i1": False, "i2": False, "i3": True}
        info["detail"] = "W2 Kod 1, W3 rational, only i3 composed"


def test_6_classification_tables():
    with criterion("6", "classification tables", cap=5) as info:
        shapes = enumerate_branch_shapes()
        assert [s.label for s in shapes] == list("abcde")
        assert [s.to_json() for s in enumerate_branch_shapes(box=5)] == [s.to_json() for s in shapes]
        fibres = enumerate_multiple_fibres()
        assert {f.mults: f.genus for f in fibres} == {(2, 2, 2): 3, (2, 3): 7, (2, 4): 5, (3, 3): 4}
        assert enumerate_multiple_fibres(max_m=12, max_n=6) == fibres
        info["detail"] = "5 shapes, 4 fibre tuples, larger box adds nothing"


@pytest.mark.slow
def test_7_image_degree(cfg, example_report):
    with criterion("7", "image degree", cap=30 * 60) as info:
        count = image_degree(cfg, tol=1e-8)
        assert count.image_points == 6
        assert count.numeric_image_points == count.eliminant_squarefree_degree == 6
        assert count.tolerance == 1e-8
        K_sq = example_report.results["S"]["K_sq"]
        assert 4 * K_sq == 12 and bicanonical_degree(K_sq, count.image_points) == 2
        info["detail"] = "6 image points (numeric = exact), bicanonical degree 12/6 = 2"


THOUSAND = settings(
    max_examples=1000,
    deadline=None,
    derandomize=True,
    database=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much, HealthCheck.data_too_large],
)


@pytest.mark.parametrize("name", list(SUITES))
def test_8_property_suites(name):
    key = f"8.{list(SUITES).index(name) + 1}"
    with criterion(key, f"property suite: {name}") as info:
        COUNTS.pop(name, None)
        THOUSAND(SUITES[name])()
        assert COUNTS.get(name, 0) >= 1000, f"only {COUNTS.get(name, 0)} instances ran"
        info["detail"] = f"{COUNTS[name]} instances, 0 failures"
