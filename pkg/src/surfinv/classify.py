"""Numerical restrictions on the quotient of an involution and the finite case lists they allow.

Context throughout: ``S`` minimal of general type with ``p_g = 0``,
``K^2 = 3``, an involution ``i`` with quotient resolution ``W`` and minimal
model ``P``.  ``delta`` is the image of ``L`` on ``P`` and ``r_i`` are the
(even) multiplicities of the blown-up singular points of the branch curve.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .covers import fixed_points_from_h0, pullback_fibre_genus

log = logging.getLogger(__name__)


class IdentityViolation(ValueError):
    def __init__(self, which: str, detail: str):
        super().__init__(f"identity ({which}) fails: {detail}")
        self.which = which


@dataclass(frozen=True)
class NumRInput:
    K_P_sq: int
    K_P_delta: int
    delta_sq: int
    r_list: tuple = ()
    h0_2KL: int = 1
    K_W_sq: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "r_list", tuple(int(r) for r in self.r_list))
        if any(r < 2 or r % 2 for r in self.r_list):
            raise ValueError(f"resolution data must be even integers >= 2, got {self.r_list}")
        if self.h0_2KL < 0:
            raise ValueError("h0(2K_W + L) must be >= 0")

    @property
    def sum_r2(self) -> int:
        return sum(r - 2 for r in self.r_list)

    @property
    def sum_r2r4(self) -> int:
        return sum((r - 2) * (r - 4) for r in self.r_list)


@dataclass(frozen=True)
class NumRResult:
    h0_check: bool
    t: int
    K_W_sq: int
    K_W_lower_bound: int


def delta_sq_from(K_P_sq: int, K_P_delta: int, r_list: Sequence[int], h0: int) -> Fraction:
    s = sum((r - 2) * (r - 4) for r in r_list)
    return Fraction(-2 * K_P_sq - 3 * K_P_delta + 2 * h0 - 2) + Fraction(s, 4)


def numr_eval(inp: NumRInput) -> NumRResult:
    lhs_a = Fraction(inp.K_P_sq + inp.K_P_delta) + Fraction(inp.sum_r2, 2)
    if lhs_a != inp.h0_2KL:
        raise IdentityViolation("a", f"K_P(K_P+delta) + sum(r-2)/2 = {lhs_a} != {inp.h0_2KL}")
    rhs_b = delta_sq_from(inp.K_P_sq, inp.K_P_delta, inp.r_list, inp.h0_2KL)
    if rhs_b != inp.delta_sq:
        raise IdentityViolation("b", f"delta^2 = {inp.delta_sq} but the identity gives {rhs_b}")
    K_W_sq = inp.K_W_sq if inp.K_W_sq is not None else inp.K_P_sq - len(inp.r_list)
    bound = 2 * inp.h0_2KL - 4
    if K_W_sq < bound:
        raise IdentityViolation("d", f"K_W^2 = {K_W_sq} < {bound}")
    return NumRResult(True, fixed_points_from_h0(inp.h0_2KL), K_W_sq, bound)


# ---------------------------------------------------------------------------
# case records


@dataclass(frozen=True)
class CaseRecord:
    kodaira: Optional[int]
    label: str = ""
    admissible: bool = True
    reason: str = ""
    K_P_sq: Optional[int] = None
    K_P_delta: Optional[int] = None
    sum_r2: Optional[int] = None
    delta_sq: Optional[int] = None
    B_sq: Optional[int] = None
    K_P_B: Optional[int] = None
    t: Optional[int] = None
    gamma_sq: Optional[int] = None
    gamma_genus: Optional[int] = None
    l: Optional[int] = None
    K_W_sq: Optional[int] = None
    components: tuple = ()
    side_conditions: tuple = ()

    def to_json(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            if v is None or v == () or v == "":
                continue
            out[k] = list(v) if isinstance(v, tuple) else v
        return out


@dataclass(frozen=True)
class FibreCase:
    mults: tuple
    BF: int
    genus: int

    def to_json(self) -> dict:
        return {"mults": list(self.mults), "BF": self.BF, "genus": self.genus}


def _r_list_for(sum_r2: int) -> tuple:
    # the smallest resolution data with the given sum(r - 2)
    return (sum_r2 + 2,) if sum_r2 else ()


def enumerate_quotient_kodaira(h0: int, *, search: int = 6) -> list[CaseRecord]:
    """Kodaira-dimension cases for the minimal model ``P`` of the quotient.

    A search over ``K_P^2, K_P.delta`` in ``[0, search]`` and even
    ``sum(r_i - 2)`` solves identity (a); identity (b) then fixes ``delta^2``.
    """
    if h0 not in (0, 1):
        raise ValueError("h0(2K_W + L) is 0 or 1 in this context")
    t = fixed_points_from_h0(h0)
    out = []

    def solutions(kod):
        for kp2, kpd in itertools.product(range(search + 1), repeat=2):
            if kod in (0, 1) and kp2 != 0:
                continue
            if kod == 0 and kpd != 0:
                continue
            if kod == 2 and kp2 < 1:
                continue
            twice = 2 * (h0 - kp2 - kpd)
            if twice < 0 or twice % 2:
                continue
            yield kp2, kpd, twice

    for kp2, kpd, s in solutions(0):
        r = _r_list_for(s)
        d2 = delta_sq_from(kp2, kpd, r, h0)
        inp = NumRInput(kp2, kpd, int(d2), r, h0, K_W_sq=-len(r))
        numr_eval(inp)
        out.append(
            CaseRecord(0, "Enriques", True, "p_g(P) = q(P) = 0 with K_P numerically trivial",
                       kp2, kpd, s, int(d2), 4 * int(d2), 2 * kpd, t, side_conditions=_enriques_side_conditions() if h0 else ())
        )

    kod1 = list(solutions(1))
    for kp2, kpd, s in kod1:
        d2 = delta_sq_from(kp2, kpd, _r_list_for(s), h0)
        numr_eval(NumRInput(kp2, kpd, int(d2), _r_list_for(s), h0, K_W_sq=kp2 - len(_r_list_for(s))))
        if kpd == 0:
            out.append(CaseRecord(1, "elliptic", False, "K_P.B = 0 puts the branch curve in fibres; S would be elliptic",
                                  kp2, kpd, s, int(d2), 4 * int(d2), 0, t))
        else:
            out.append(CaseRecord(1, "elliptic", True, "K_P.B != 0", kp2, kpd, s, int(d2), 4 * int(d2), 2 * kpd, t))

    kod2 = list(solutions(2))
    if not kod2:
        out.append(CaseRecord(2, "general type", False, "identity (a) has no solution with K_P^2 >= 1", t=t))
    for kp2, kpd, s in kod2:
        d2 = delta_sq_from(kp2, kpd, _r_list_for(s), h0)
        B_sq = 4 * int(d2)
        curves = -B_sq // 2
        admissible = curves == t
        reason = f"branch is {curves} disjoint (-2)-curves, so t = {t} != {curves}" if not admissible else ""
        out.append(CaseRecord(2, "general type", admissible, reason, kp2, kpd, s, int(d2), B_sq, 2 * kpd, t))
    return out


def _enriques_side_conditions() -> tuple:
    return (
        {"B_sq": 10, "singularities": "quadruple point, at most one double point",
         "p_a": list(pa_singularity_check(10, 0, [[4]], optional=[[2]]))},
        {"B_sq": 8, "singularities": "(3,3)-point", "p_a": list(pa_singularity_check(8, 0, [[3, 3]]))},
    )


# ---------------------------------------------------------------------------
# components of the branch curve

SHAPE_LABELS = {(0, -6, -1, 0): "a", (0, -6, -2, 1): "b", (1, -2, -1, 1): "c", (1, -2, -2, 2): "d", (1, -2, 0, 0): "e"}


def _gamma_candidates(box: int):
    """(g, Gamma^2) from ``2 g(Gamma_V) = 3 + Gamma_V^2``, ``Gamma^2 = 2 Gamma_V^2 <= 0``."""
    for gv2 in range(-box, box + 1):
        if gv2 > 0 or (3 + gv2) < 0 or (3 + gv2) % 2:
            continue
        yield (3 + gv2) // 2, 2 * gv2


def enumerate_branch_shapes(*, box: int = 2) -> list[CaseRecord]:
    """Solutions of ``-2K_W^2 + 4 + Gamma^2 = 2g + 2l`` with ``-2 <= K_W^2 <= 0``.

    ``box`` only widens the search ranges; the constraints stay the same.
    """
    out = []
    for g, G2 in _gamma_candidates(max(box, 3)):
        for kw2 in range(-box, box + 1):
            if kw2 < -2 or kw2 > 0:
                continue
            twice_l = -2 * kw2 + 4 + G2 - 2 * g
            if twice_l < 0 or twice_l % 2:
                continue
            l = twice_l // 2
            kod = 1 if kw2 == 0 else None
            comps = (f"Gamma({G2},{g})",) + ("Gamma(-4,0)",) * l
            label = SHAPE_LABELS.get((g, G2, kw2, l), "?")
            out.append(
                CaseRecord(
                    kod,
                    label,
                    True,
                    "Kod(W) = 1" if kw2 == 0 else "",
                    gamma_sq=G2,
                    gamma_genus=g,
                    l=l,
                    K_W_sq=kw2,
                    components=comps,
                )
            )
    out.sort(key=lambda c: c.label)
    return out


# ---------------------------------------------------------------------------
# multiple fibres


@dataclass
class FibreSearchLog:
    rejected: dict = field(default_factory=dict)
    evenness_decisive: list = field(default_factory=list)


def enumerate_multiple_fibres(*, max_m: int = 12, max_n: int = 6, log_to: Optional[FibreSearchLog] = None) -> list[FibreCase]:
    """Multiplicities of the fibres with ``BF(-1 + sum (m-1)/m) = 2``, ``BF >= 2 m_i``, ``BF`` even."""
    found = []
    for n in range(1, max_n + 1):
        for ms in itertools.combinations_with_replacement(range(2, max_m + 1), n):
            excess = sum(Fraction(m - 1, m) for m in ms) - 1
            if excess <= 0:
                reason = "BF would be non-positive"
                _reject(log_to, ms, reason)
                continue
            BF = Fraction(2) / excess
            if BF.denominator != 1:
                _reject(log_to, ms, f"BF = {BF} is not an integer")
                continue
            BF = int(BF)
            if BF < 2 * max(ms):
                _reject(log_to, ms, f"BF = {BF} < 2m = {2 * max(ms)}")
                continue
            if BF % 2:
                _reject(log_to, ms, f"BF = {BF} is odd")
                if log_to is not None:
                    log_to.evenness_decisive.append(ms)
                continue
            found.append(FibreCase(ms, BF, pullback_fibre_genus(1, BF, "double")))
    return found


def _reject(log_to, ms, reason):
    if log_to is not None and len(ms) <= 3:
        log_to.rejected[ms] = reason


# ---------------------------------------------------------------------------


def pa_singularity_check(B_sq: int, K_B: int, sing_types: Sequence[Sequence[int]], optional: Sequence[Sequence[int]] = ()) -> tuple:
    """Arithmetic genus after the given singularities, for every subset of ``optional`` ones."""
    twice = B_sq + K_B
    if twice % 2:
        raise ValueError(f"B^2 + K.B = {twice} is odd")
    base = twice // 2 + 1 - sum(_delta(seq) for seq in sing_types)
    values = {base}
    for k in range(1, len(optional) + 1):
        for sub in itertools.combinations(optional, k):
            values.add(base - sum(_delta(seq) for seq in sub))
    return tuple(sorted(values, reverse=True))


def _delta(seq: Sequence[int]) -> int:
    return sum(m * (m - 1) // 2 for m in seq)
