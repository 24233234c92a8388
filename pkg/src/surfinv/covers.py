"""Invariants of double and bidouble covers, and a small Kodaira-dimension rule engine."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from .piclattice import DivClass

log = logging.getLogger(__name__)


class CoverError(ValueError):
    pass


class Kodaira(enum.Enum):
    NEG_INF = "-inf"
    ZERO = "0"
    ONE = "1"
    TWO = "2"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class InvariantSet:
    p_g: int
    q: int
    chi: int
    K_sq: Optional[int] = None
    kodaira: Kodaira = Kodaira.UNKNOWN
    notes: tuple = ()
    components: int = 1

    def __post_init__(self):
        if self.q < 0:
            raise CoverError(f"derived irregularity q = {self.q} is negative")
        if self.chi != self.components - self.q + self.p_g:
            raise CoverError(f"chi = {self.chi} but h0(O) - q + p_g = {self.components - self.q + self.p_g}")

    def to_json(self) -> dict:
        return {
            "chi": self.chi,
            "p_g": self.p_g,
            "q": self.q,
            "K_sq": self.K_sq,
            "kodaira": str(self.kodaira),
            "notes": list(self.notes),
            **({"components": self.components} if self.components != 1 else {}),
        }


def _from_chi(chi: int, p_g: int, K_sq=None, notes=(), components: int = 1) -> InvariantSet:
    return InvariantSet(p_g=p_g, q=components + p_g - chi, chi=chi, K_sq=K_sq, notes=tuple(notes), components=components)


# ---------------------------------------------------------------------------
# double covers


@dataclass(frozen=True)
class DoubleCoverData:
    """Data of a double cover ``V -> W`` branched on a divisor ``2L`` (plus ``t`` nodes).

    ``h1_K_plus_L`` is usually unknown; ``q`` of the cover is then derived
    from ``chi`` and ``p_g``.  ``KL_sq`` is ``(K_W + L)^2`` and ``K_S_sq`` the
    canonical square of the minimal resolution, both optional.  ``split``
    marks the trivial cover (``L = 0``, no branch locus), two copies of ``W``.
    """

    chi_W: int
    pg_W: int
    q_W: int
    L_K_plus_L: int
    h0_K_plus_L: int
    h1_K_plus_L: Optional[int] = None
    K_W_sq: Optional[int] = None
    t: int = 0
    KL_sq: Optional[int] = None
    K_S_sq: Optional[int] = None
    split: bool = False

    def __post_init__(self):
        if self.t < 0:
            raise CoverError("number of isolated fixed points must be >= 0")
        if 1 - self.q_W + self.pg_W != self.chi_W:
            raise CoverError("base surface violates chi = 1 - q + p_g")


def double_cover_invariants(d: DoubleCoverData) -> InvariantSet:
    if d.L_K_plus_L % 2:
        raise CoverError(f"L(K+L) = {d.L_K_plus_L} is odd; chi would not be an integer")
    chi = 2 * d.chi_W + d.L_K_plus_L // 2
    p_g = d.pg_W + d.h0_K_plus_L
    components = 2 if d.split else 1
    notes = []
    if d.h1_K_plus_L is None:
        q = components + p_g - chi
        notes.append("q derived from chi and p_g (h1(K+L) unavailable)")
    else:
        q = d.q_W + d.h1_K_plus_L
    K_sq = None
    if d.KL_sq is not None:
        K_V_sq = 2 * d.KL_sq
        K_sq = K_V_sq + d.t
        if d.K_S_sq is not None and d.K_S_sq != K_sq:
            raise CoverError(f"t = {d.t} disagrees with K_S^2 - K_V^2 = {d.K_S_sq - K_V_sq}")
    elif d.K_S_sq is not None:
        K_sq = d.K_S_sq
    return InvariantSet(p_g=p_g, q=q, chi=chi, K_sq=K_sq, notes=tuple(notes), components=components)


# ---------------------------------------------------------------------------
# bidouble covers

PERMUTATIONS = ((0, 1, 2), (1, 0, 2), (2, 0, 1))


@dataclass(frozen=True)
class BidoubleCoverData:
    L: tuple
    D: tuple
    chi_X: int
    pg_X: int

    def __post_init__(self):
        if len(self.L) != 3 or len(self.D) != 3:
            raise CoverError("a bidouble cover needs three L-classes and three D-classes")
        bad = parity_failures(self.L, self.D)
        if bad:
            raise CoverError("parity 2L_g = D_j + D_k fails for " + ", ".join(f"g={g + 1}" for g in bad))


def parity_failures(L, D) -> list[int]:
    return [g for g, j, k in PERMUTATIONS if not (L[g] * 2 - D[j] - D[k]).is_zero]


@dataclass(frozen=True)
class BidoubleInvariants:
    surface: InvariantSet
    K_V_sq: int
    terms: Mapping[str, int] = field(default_factory=dict)


def bidouble_invariants(b: BidoubleCoverData, h0: Callable[[DivClass], int], K: DivClass) -> BidoubleInvariants:
    """chi, p_g and q of the cover, and ``K_V^2 = (2K + sum L)^2``.

    ``h0`` maps a divisor class on the base to its number of sections and
    ``K`` is the canonical class of the base.
    """
    sums = [Li.pair(K + Li) for Li in b.L]
    if sum(sums) % 2:
        raise CoverError(f"sum of L_i(K+L_i) = {sum(sums)} is odd")
    chi = 4 * b.chi_X + sum(sums) // 2
    h0s = [h0(K + Li) for Li in b.L]
    p_g = b.pg_X + sum(h0s)
    N = K * 2 + b.L[0] + b.L[1] + b.L[2]
    terms = {f"L{i + 1}(K+L{i + 1})": s for i, s in enumerate(sums)}
    terms.update({f"h0(K+L{i + 1})": h for i, h in enumerate(h0s)})
    # each vanishing L_g makes the corresponding intermediate double cover trivial
    components = {0: 1, 1: 2, 3: 4}[sum(Li.is_zero for Li in b.L)]
    inv = _from_chi(chi, p_g, notes=["q derived from chi and p_g"], components=components)
    return BidoubleInvariants(inv, N.square(), terms)


def bicanonical_composed(h0_a: int, h0_b: int) -> bool:
    """The bicanonical map factors through the involution iff both spaces are empty."""
    if h0_a < 0 or h0_b < 0:
        raise ValueError("h0 values must be non-negative")
    return h0_a == 0 and h0_b == 0


def fixed_points_from_h0(h0_2KL: int) -> int:
    """Isolated fixed points of the involution when ``p_g = 0`` and ``K^2 = 3``."""
    return 7 - 2 * h0_2KL


def pullback_fibre_genus(g_base: int, branch_count: int, cover: str = "double", *, simple_branch: bool = True) -> int:
    if branch_count < 0 or branch_count % 2:
        raise CoverError(f"branch count {branch_count} must be even and non-negative")
    if not simple_branch:
        log.warning("fibre meets the branch locus non-transversally; genus formula assumes simple branching")
    if cover == "double":
        twice = 2 * (2 * g_base - 2) + branch_count
    elif cover == "bidouble":
        twice = 4 * (2 * g_base - 2) + 2 * branch_count
    else:
        raise ValueError(f"unknown cover type {cover!r}")
    return twice // 2 + 1


def ks2_from_bicanonical(h0_2K: int, lower_bound: Optional[int] = None) -> int:
    """``K^2 = P_2 - 1`` for a minimal surface with ``chi = 1``."""
    if h0_2K < 1:
        raise CoverError("h0(2K) must be at least 1")
    K_sq = h0_2K - 1
    if lower_bound is not None and K_sq < lower_bound:
        raise CoverError(f"K^2 = {K_sq} is below the geometric lower bound {lower_bound}")
    if K_sq == 0:
        log.warning("K^2 = 0: the surface is not of general type")
    return K_sq


# ---------------------------------------------------------------------------
# Kodaira dimension


@dataclass(frozen=True)
class KodairaVerdict:
    kodaira: Kodaira
    label: str
    fired: tuple

    def to_json(self) -> dict:
        return {"kodaira": str(self.kodaira), "label": self.label, "fired": list(self.fired)}


class ContradictoryRules(CoverError):
    pass


@dataclass(frozen=True)
class Rule:
    name: str
    reason: str


RULES = {
    "P6": Rule("P6>=2", "some plurigenus >= 2 forces Kod >= 1"),
    "P2": Rule("P2<=1", "a minimal surface of general type with chi = 1 has P2 = K^2 + 1 >= 2"),
    "KOD1": Rule("Kod=1", "Kod >= 1 and not of general type"),
    "RATFIB": Rule("rational-fibration", "a rational fibration with q = 0 means the surface is rational"),
    "CASTELNUOVO": Rule("castelnuovo", "q = P2 = 0 means the surface is rational"),
    "VANISH": Rule("plurigenera-vanish", "P2 = P6 = 0 gives Kod = -inf"),
    "ENRIQUES": Rule("enriques-invariants", "chi = 1 and p_g = q = 0; classification beyond these numbers is cited, not computed"),
}


def kodaira_rules(
    inv: InvariantSet,
    P2: Optional[int] = None,
    P6: Optional[int] = None,
    *,
    rational_fibration: bool = False,
) -> KodairaVerdict:
    """Run the rule chain; ``P6`` is a lower bound for the sixth plurigenus."""
    fired = []
    kod_ge_1 = not_general = rational = False

    if P6 is not None and P6 >= 2:
        kod_ge_1 = True
        fired.append(RULES["P6"].name)
    if P2 is not None and P2 <= 1 and inv.chi == 1:
        not_general = True
        fired.append(RULES["P2"].name)
    if rational_fibration and inv.q == 0:
        rational = True
        fired.append(RULES["RATFIB"].name)
    if P2 == 0 and inv.q == 0:
        rational = True
        fired.append(RULES["CASTELNUOVO"].name)

    if rational and ((P2 or 0) > 0 or (P6 or 0) > 0 or inv.p_g > 0):
        raise ContradictoryRules(f"rational verdict conflicts with P2={P2}, P6>={P6}, p_g={inv.p_g}")
    if P2 is not None and P6 is not None and P2 > 0 and P6 < P2:
        raise ContradictoryRules(f"P6 >= P2 must hold when P2 > 0 (got P2={P2}, P6>={P6})")

    if rational:
        return KodairaVerdict(Kodaira.NEG_INF, "rational", tuple(fired))
    if P2 == 0 and P6 == 0:
        fired.append(RULES["VANISH"].name)
        return KodairaVerdict(Kodaira.NEG_INF, "ruled", tuple(fired))
    if kod_ge_1 and not_general:
        fired.append(RULES["KOD1"].name)
        return KodairaVerdict(Kodaira.ONE, "Kod 1", tuple(fired))
    if inv.chi == 1 and inv.p_g == 0 and inv.q == 0:
        fired.append(RULES["ENRIQUES"].name)
        return KodairaVerdict(Kodaira.UNKNOWN, "Enriques invariants", tuple(fired))
    return KodairaVerdict(Kodaira.UNKNOWN, "unknown", tuple(fired))
