import logging

import pytest
import sympy

from surfinv import linsys
from surfinv.algebra import QQ, MPoly
from surfinv.linsys import (
    INFINITE,
    generic_system,
    impose_chain,
    local_intersection,
    make_chain,
    multiplicity_sequence,
    plane_system,
    sections,
    verify_chain,
)

C5_PRINTED = (
    "3660*x^5+(-900*r+1341)*x^4*y-14640*x^4+(-3550*r-12858)*x^3*y^2+(4500*r-300)*x^3*y+21960*x^3"
    "+(-1550*r-14313)*x^2*y^3+(7800*r+34128)*x^2*y^2+(-6300*r-4338)*x^2*y-14640*x^2+(1350*r-8874)*x*y^4"
    "+29280*x*y^3+(-4050*r-28278)*x*y^2+(2700*r+4212)*x*y+3660*x-915*y^5+3660*y^4-5490*y^3+3660*y^2-915*y"
)
C6_PRINTED = (
    "35882945*x^6+(-161700*r+36034208)*x^5*y-143531780*x^5+(-12929700*r-26583872)*x^4*y^2"
    "+(13414800*r-81518752)*x^4*y+215297670*x^4+(4648050*r-9108022)*x^3*y^3+(16563300*r+71383788)*x^3*y^2"
    "+(-21696450*r+45826858)*x^3*y-143531780*x^3+(12738300*r-1064672)*x^2*y^4+(-34772700*r+20345388)*x^2*y^3"
    "+(18400800*r-64080632)*x^2*y^2+(3795300*r+8765708)*x^2*y+35882945*x^2+(666300*r+36857408)*x*y^5"
    "+(-14737200*r-109507552)*x*y^4+(32123550*r+99334858)*x*y^3+(-22700700*r-17576692)*x*y^2"
    "+(4648050*r-9108022)*x*y+(166050*r+477113)*y^6+(-664200*r-1908452)*y^5+(996300*r+2862678)*y^4"
    "+(-664200*r-1908452)*y^3+(166050*r+477113)*y^2"
)


def parse_printed(text, F):
    """Printed polynomial in x, y with coefficients linear in r, as an MPoly over ``F``."""
    X, Y, R = sympy.symbols("x y r")
    expr = sympy.sympify(text.replace("^", "**"))
    terms = {}
    for (i, j), coeff in sympy.Poly(expr, X, Y).terms():
        cr = sympy.Poly(coeff, R).all_coeffs()[::-1]
        terms[(i, j)] = F([str(sympy.Rational(c)) for c in cr])
    return MPoly(F, ("x", "y"), terms)


def xy(F):
    return MPoly.gens(F, ("x", "y"))


class TestGenericAndImpose:
    @pytest.mark.parametrize("d,dim", [(0, 1), (1, 3), (5, 21)])
    def test_generic_dimension(self, d, dim):
        assert generic_system(QQ, d).dimension == dim

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            generic_system(QQ, -1)

    def test_single_point(self):
        s = impose_chain(generic_system(QQ, 2), make_chain(QQ, (1, 2), [1]))
        assert s.dimension == 5

    def test_unconstrained_line_sections(self):
        polys = {str(s.poly) for s in sections(generic_system(QQ, 1))}
        assert polys == {"x", "y", "1"}

    def test_sections_satisfy_conditions(self):
        chains = [make_chain(QQ, (0, 0), [2, 1], [(1, 1)]), make_chain(QQ, (1, -1), [1])]
        s = plane_system(QQ, 3, chains)
        assert s.sections()
        for f in s.sections():
            for c in chains:
                assert verify_chain(f.poly, c).ok

    def test_condition_bound(self):
        base = generic_system(QQ, 4)
        c = make_chain(QQ, (0, 0), [2, 2, 1], [(1, 0), (0, 1)])
        s = base.impose(c)
        assert base.dimension - c.condition_bound() <= s.dimension <= base.dimension

    def test_pass_through_zero_level(self):
        # a zero level imposes nothing but the blow-up continues along its direction
        c = make_chain(QQ, (0, 0), [1, 0, 1], [(1, 0), (1, 0)])
        s = plane_system(QQ, 2, [c])
        assert s.dimension == 4
        assert verify_chain(MPoly.gens(QQ, ("x", "y"))[1], c).ok

    def test_later_level_may_exceed_earlier(self):
        # [2, 4] violates proximity and is imposed as stated
        c = make_chain(QQ, (0, 0), [2, 4], [(0, 1)])
        s = plane_system(QQ, 6, [c])
        assert 0 < s.dimension < 28
        for f in s.sections():
            assert verify_chain(f.poly, c).ok

    def test_ambiguous_direction_is_flagged(self, caplog):
        c = make_chain(QQ, (0, 0), [1, 1], [(2, 2)])
        assert c.ambiguous_levels() == [1]
        with caplog.at_level(logging.WARNING, logger="surfinv.linsys"):
            generic_system(QQ, 2).impose(c)
        assert any("u == v" in r.message for r in caplog.records)

    def test_chain_validation(self):
        with pytest.raises(ValueError):
            make_chain(QQ, (0, 0), [2, 1], [])
        with pytest.raises(ValueError):
            make_chain(QQ, (0, 0), [1, 1], [(0, 0)])
        with pytest.raises(ValueError):
            make_chain(QQ, (0, 0), [-1])

    def test_field_mismatch(self, Qr):
        with pytest.raises(ValueError):
            generic_system(QQ, 2).impose(make_chain(Qr, (0, 0), [1]))


class TestExampleCurves:
    @pytest.mark.parametrize("name,printed,scale", [("C5", C5_PRINTED, 3660), ("C6", C6_PRINTED, 35882945)], ids=["C5", "C6"])
    def test_matches_printed_equation(self, cfg, name, printed, scale):
        spec = cfg.curves[name]
        system = plane_system(cfg.field, spec.degree, spec.chains)
        assert system.dimension == 1
        ours = system.sections()[0].poly
        theirs = parse_printed(printed, cfg.field)
        assert theirs.leading_coefficient() == scale
        assert ours.monic() == theirs.monic()
        assert ours == theirs.scale(cfg.field(1) / scale)

    def test_base_points_on_C5(self, cfg):
        spec = cfg.curves["C5"]
        F = plane_system(cfg.field, 5, spec.chains).sections()[0].poly
        for p in cfg.geometry.points:
            assert F.evaluate({"x": p[0], "y": p[1]}) == 0

    def test_C6_double_at_p0(self, cfg):
        spec = cfg.curves["C6"]
        F = plane_system(cfg.field, 6, spec.chains).sections()[0].poly
        origin = {"x": 0, "y": 0}
        assert F.evaluate(origin) == 0
        for v in ("x", "y"):
            assert F.diff(v).evaluate(origin) == 0
        assert F.diff("x", 2).evaluate(origin) or F.diff("y", 2).evaluate(origin) or F.diff("x").diff("y").evaluate(origin)

    def test_verify_chain_examples(self, cfg):
        spec = cfg.curves["C6"]
        F = plane_system(cfg.field, 6, spec.chains).sections()[0].poly
        p0 = spec.chains[0]
        assert p0.mults == (2,) and verify_chain(F, p0).ok
        p3 = spec.chains[3]
        assert p3.mults == (3, 2, 2) and verify_chain(F, p3).ok
        x, y = xy(cfg.field)
        line = x + 2 * y
        assert not verify_chain(line, p0).ok


class TestLocalIntersection:
    def test_transverse_lines(self):
        x, y = xy(QQ)
        assert local_intersection(x - y, x + y, (0, 0)) == 1

    def test_missing_point(self):
        x, y = xy(QQ)
        assert local_intersection(x - 1, y, (0, 0)) == 0

    def test_tangency_and_common_component(self):
        x, y = xy(QQ)
        assert local_intersection(y - x**2, y, (0, 0)) == 2
        assert local_intersection(y**2 - x**3, y, (0, 0)) == 3
        assert local_intersection(x * (y - 1), x * (y + 1), (0, 5)) == INFINITE

    def test_nonzero_required(self):
        x, y = xy(QQ)
        with pytest.raises(ValueError):
            local_intersection(x - x, y, (0, 0))

    @pytest.mark.parametrize("point,value", [("p2", 12), ("p3", 7)])
    def test_example_values_and_chain_oracle(self, cfg, point, value):
        F5 = plane_system(cfg.field, 5, cfg.curves["C5"].chains).sections()[0].poly
        F6 = plane_system(cfg.field, 6, cfg.curves["C6"].chains).sections()[0].poly
        k = cfg.point_index[point]
        p = cfg.geometry.points[k]
        assert local_intersection(F5, F6, p) == value
        assert local_intersection(F6, F5, p) == value
        # independent oracle: multiplicities along the shared blow-up chain
        n = len(cfg.geometry.directions[k]) + 1
        chain = cfg.geometry.chain(k, [0] * n)
        m5 = multiplicity_sequence(F5, chain)
        m6 = multiplicity_sequence(F6, chain)
        assert sum(a * b for a, b in zip(m5, m6)) == value

    def test_order_of_chains_irrelevant(self, cfg):
        spec = cfg.curves["C5"]
        a = plane_system(cfg.field, 5, spec.chains)
        b = plane_system(cfg.field, 5, list(reversed(spec.chains)))
        assert [s.poly for s in a.sections()] == [s.poly for s in b.sections()]


def test_condition_matrix_annihilates_basis(Qr):
    s = plane_system(Qr, 3, [make_chain(Qr, (0, Qr.gen), [2]), make_chain(Qr, (1, 1), [1, 1], [(1, Qr.gen)])])
    C = s.condition_matrix()
    for f in s.sections():
        v = [f.poly.coefficient(e) for e in s.monomials]
        assert all(c == 0 for c in C.mul_vec(v))
    assert C.rank() + s.dimension == s.unconstrained_dimension


def test_chart_helpers():
    x, y = xy(QQ)
    f = y - x**2
    g = linsys.chart_substitute(f, (QQ(1), QQ(0)))
    assert g == x * y - x**2
    assert linsys.chart_divide(g, (QQ(1), QQ(0)), 1) == y - x
    h = linsys.chart_substitute(x, (QQ(0), QQ(1)))
    assert h == x * y
