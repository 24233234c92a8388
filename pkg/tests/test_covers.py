import logging

import pytest

from surfinv.covers import (
    BidoubleCoverData,
    ContradictoryRules,
    CoverError,
    DoubleCoverData,
    InvariantSet,
    Kodaira,
    bicanonical_composed,
    bidouble_invariants,
    double_cover_invariants,
    fixed_points_from_h0,
    kodaira_rules,
    ks2_from_bicanonical,
    parity_failures,
    pullback_fibre_genus,
)
from surfinv.piclattice import BlowupLattice, h0


class TestDoubleCover:
    def test_second_quotient(self):
        inv = double_cover_invariants(DoubleCoverData(1, 0, 0, -2, 0))
        assert (inv.chi, inv.p_g, inv.q) == (1, 0, 0)
        assert any("derived" in n for n in inv.notes)

    def test_trivial_cover(self):
        inv = double_cover_invariants(DoubleCoverData(1, 0, 0, 0, 0, split=True))
        assert inv.chi == 2 and inv.components == 2 and inv.q == 0

    def test_known_h1(self):
        inv = double_cover_invariants(DoubleCoverData(1, 0, 0, 2, 3, h1_K_plus_L=1))
        assert (inv.chi, inv.p_g, inv.q) == (3, 3, 1)
        with pytest.raises(CoverError):
            double_cover_invariants(DoubleCoverData(1, 0, 0, 0, 1, h1_K_plus_L=1))

    def test_odd_product(self):
        with pytest.raises(CoverError):
            double_cover_invariants(DoubleCoverData(1, 0, 0, -3, 0))

    def test_K_squared_relation(self):
        inv = double_cover_invariants(DoubleCoverData(1, 0, 0, -2, 0, t=5, KL_sq=-1, K_S_sq=3))
        assert inv.K_sq == 3
        with pytest.raises(CoverError):
            double_cover_invariants(DoubleCoverData(1, 0, 0, -2, 0, t=4, KL_sq=-1, K_S_sq=3))

    def test_bad_data(self):
        with pytest.raises(CoverError):
            DoubleCoverData(1, 0, 0, 0, 0, t=-1)
        with pytest.raises(CoverError):
            DoubleCoverData(2, 0, 0, 0, 0)

    def test_negative_q_rejected(self):
        with pytest.raises(CoverError):
            InvariantSet(p_g=0, q=-1, chi=2)


class TestBidouble:
    def test_example(self, cfg):
        L = tuple(cfg.classes[n] for n in ("L1", "L2", "L3"))
        D = tuple(cfg.classes[n] for n in ("D1", "D2", "D3"))
        b = BidoubleCoverData(L, D, 1, 0)
        K = cfg.lattice.canonical()
        res = bidouble_invariants(b, lambda c: h0(c, cfg.geometry), K)
        assert (res.surface.chi, res.surface.p_g, res.surface.q) == (1, 0, 0)
        assert res.K_V_sq == -7
        assert [res.terms[f"L{i}(K+L{i})"] for i in (1, 2, 3)] == [-2, -2, -2]

    def test_degenerate_zero_L(self):
        lat = BlowupLattice.of_rank(0)
        z = lat.zero()
        b = BidoubleCoverData((z, z, z), (z, z, z), 1, 0)
        res = bidouble_invariants(b, lambda c: 0, lat.canonical())
        assert res.surface.chi == 4 and res.surface.components == 4 and res.surface.q == 0

    def test_parity_violation(self, cfg):
        L = [cfg.classes[n] for n in ("L1", "L2", "L3")]
        D = [cfg.classes[n] for n in ("D1", "D2", "D3")]
        L[1] = L[1] + cfg.lattice.line()
        assert parity_failures(L, D) == [1]
        with pytest.raises(CoverError, match="g=2"):
            BidoubleCoverData(tuple(L), tuple(D), 1, 0)


class TestCriteria:
    def test_composition(self):
        assert bicanonical_composed(0, 0)
        assert not bicanonical_composed(1, 0)
        assert not bicanonical_composed(5, 0)
        with pytest.raises(ValueError):
            bicanonical_composed(-1, 0)

    def test_fixed_points(self):
        assert fixed_points_from_h0(1) == 5
        assert fixed_points_from_h0(0) == 7

    @pytest.mark.parametrize(
        "g,b,cover,genus",
        [(1, 4, "double", 3), (1, 12, "double", 7), (1, 8, "double", 5), (1, 6, "double", 4), (0, 6, "bidouble", 3), (0, 2, "double", 0)],
    )
    def test_fibre_genus(self, g, b, cover, genus):
        assert pullback_fibre_genus(g, b, cover) == genus

    def test_fibre_genus_errors(self, caplog):
        with pytest.raises(CoverError):
            pullback_fibre_genus(0, 3)
        with pytest.raises(ValueError):
            pullback_fibre_genus(0, 2, "triple")
        with caplog.at_level(logging.WARNING):
            pullback_fibre_genus(0, 2, simple_branch=False)
        assert caplog.records

    def test_ks2(self, caplog):
        assert ks2_from_bicanonical(4) == 3
        assert ks2_from_bicanonical(4, lower_bound=-7 + 8) == 3
        with pytest.raises(CoverError):
            ks2_from_bicanonical(4, lower_bound=5)
        with pytest.raises(CoverError):
            ks2_from_bicanonical(0)
        with caplog.at_level(logging.WARNING):
            assert ks2_from_bicanonical(1) == 0
        assert any("general type" in r.message for r in caplog.records)


class TestKodairaRules:
    base = InvariantSet(p_g=0, q=0, chi=1)

    def test_kod_one(self):
        v = kodaira_rules(self.base, P2=1, P6=2)
        assert v.kodaira is Kodaira.ONE
        assert v.fired == ("P6>=2", "P2<=1", "Kod=1")

    def test_rational_fibration(self):
        v = kodaira_rules(self.base, P2=0, P6=0, rational_fibration=True)
        assert v.kodaira is Kodaira.NEG_INF and v.label == "rational"
        assert "rational-fibration" in v.fired

    def test_vanishing_plurigenera(self):
        v = kodaira_rules(InvariantSet(p_g=0, q=1, chi=0), P2=0, P6=0)
        assert v.kodaira is Kodaira.NEG_INF

    def test_enriques_invariants(self):
        v = kodaira_rules(self.base, P2=1, P6=1)
        assert v.kodaira is Kodaira.UNKNOWN and v.label == "Enriques invariants"

    def test_unknown(self):
        v = kodaira_rules(InvariantSet(p_g=1, q=0, chi=2), P2=None, P6=None)
        assert v.label == "unknown"

    def test_contradictions(self):
        with pytest.raises(ContradictoryRules):
            kodaira_rules(self.base, P2=1, P6=3, rational_fibration=True)
        with pytest.raises(ContradictoryRules):
            kodaira_rules(self.base, P2=2, P6=1)
