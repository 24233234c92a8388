"""Linear systems of plane curves with virtual multiplicities at (infinitely near) points.

A condition is a :class:`SingularityChain`: a base point ``p`` with virtual
multiplicities ``m1, m2, ...`` and one direction per blow-up after the first.
Imposing it translates ``p`` to the origin, asks the curve to have
multiplicity ``m1`` there, blows up along the given direction, divides the
transform by the ``m1``-th power of the exceptional coordinate, asks for
multiplicity ``m2`` at the origin of the chart, and so on.

Chart convention for a direction ``(u, v)``: when ``u != 0`` substitute
``(x, y) <- (x, x*(v/u + y))`` and divide by a power of ``x``; when ``u == 0``
substitute ``(x, y) <- (y*x, y)`` and divide by a power of ``y``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import ExactMatrix, MPoly, NFElem, NumberField, kernel_from_rref, rref_rows

log = logging.getLogger(__name__)

VARS = ("x", "y")

INFINITE = float("inf")


@dataclass(frozen=True)
class SingularityChain:
    """An ``(m1, m2, ...)``-point: base point, virtual multiplicities, blow-up directions."""

    base_point: tuple
    mults: tuple
    directions: tuple = ()

    def __post_init__(self):
        mults = tuple(int(m) for m in self.mults)
        if any(m < 0 for m in mults):
            raise ValueError(f"negative multiplicity in chain {mults}")
        dirs = tuple(tuple(d) for d in self.directions)
        if len(mults) > 1 and len(dirs) != len(mults) - 1:
            raise ValueError(f"chain with {len(mults)} levels needs {len(mults) - 1} directions, got {len(dirs)}")
        if len(mults) <= 1 and dirs:
            raise ValueError("single-level chain takes no directions")
        if len(self.base_point) != 2:
            raise ValueError("base point must have two coordinates")
        for d in dirs:
            if len(d) != 2:
                raise ValueError(f"direction {d} must be a pair")
            if not d[0] and not d[1]:
                raise ValueError("direction (0, 0) does not define a point")
        object.__setattr__(self, "mults", mults)
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "base_point", tuple(self.base_point))

    @property
    def field(self) -> NumberField:
        return self.base_point[0].field

    def trimmed(self) -> "SingularityChain":
        """Same conditions with trailing zero levels removed."""
        n = len(self.mults)
        while n > 0 and self.mults[n - 1] == 0:
            n -= 1
        if n == len(self.mults):
            return self
        return SingularityChain(self.base_point, self.mults[:n], self.directions[: max(n - 1, 0)])

    def condition_bound(self) -> int:
        return sum(m * (m + 1) // 2 for m in self.mults)

    def ambiguous_levels(self) -> list[int]:
        """Levels whose direction has u == v != 0 (both charts would apply)."""
        return [i + 1 for i, (u, v) in enumerate(self.directions) if u and u == v]


def make_chain(field: NumberField, point: Sequence, mults: Sequence[int], directions: Sequence = ()) -> SingularityChain:
    return SingularityChain(
        (field(point[0]), field(point[1])),
        tuple(mults),
        tuple((field(u), field(v)) for u, v in directions),
    )


# ---------------------------------------------------------------------------
# chart arithmetic on concrete polynomials


def chart_substitute(f: MPoly, direction: tuple) -> MPoly:
    """Total transform of ``f`` in the chart of the blow-up at the origin selected by ``direction``."""
    u, v = direction
    if u:
        s = v / u
        return f.subs({"y": MPoly.var(f.field, f.vars, "x") * (MPoly.var(f.field, f.vars, "y") + s)})
    return f.subs({"x": MPoly.var(f.field, f.vars, "y") * MPoly.var(f.field, f.vars, "x")})


def chart_divide(f: MPoly, direction: tuple, power: int) -> MPoly:
    u, _ = direction
    exps = (power, 0) if u else (0, power)
    return f.divide_by_monomial(exps)


@dataclass
class LevelReport:
    level: int
    required: int
    multiplicity: int

    @property
    def ok(self) -> bool:
        return self.multiplicity >= self.required


@dataclass
class ChainReport:
    ok: bool
    levels: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def verify_chain(F: MPoly, chain: SingularityChain) -> ChainReport:
    """Check the chain's conditions on a concrete curve by substitution and division."""
    if not F:
        raise ValueError("verify_chain needs a nonzero polynomial")
    px, py = chain.base_point
    g = F.translate({"x": px, "y": py})
    levels = []
    ok = True
    for j, m in enumerate(chain.mults):
        mult = g.low_degree()
        levels.append(LevelReport(j, m, mult))
        if mult < m:
            ok = False
            break
        if j < len(chain.directions):
            d = chain.directions[j]
            g = chart_divide(chart_substitute(g, d), d, m)
    return ChainReport(ok, levels)


def multiplicity_sequence(F: MPoly, chain: SingularityChain) -> list[int]:
    """Actual multiplicities of the strict transforms of ``F`` along the chain's points."""
    px, py = chain.base_point
    g = F.translate({"x": px, "y": py})
    out = []
    for j in range(len(chain.mults)):
        m = g.low_degree()
        out.append(m)
        if j < len(chain.directions):
            d = chain.directions[j]
            g = chart_divide(chart_substitute(g, d), d, m)
    return out


# ---------------------------------------------------------------------------
# plane systems


def monomials(d: int) -> list[tuple[int, int]]:
    """Monomials of degree <= d in graded-lex descending order (x > y)."""
    return [(i, k - i) for k in range(d, -1, -1) for i in range(k, -1, -1)]


@dataclass(frozen=True)
class CurveSection:
    poly: MPoly

    def __str__(self) -> str:
        return str(self.poly)


class PlaneSystem:
    """Curves of degree ``d`` subject to a list of chains, held as an echelon basis."""

    def __init__(self, field: NumberField, degree: int, conditions: Iterable[SingularityChain] = (), *, _basis=None):
        if degree < 0:
            raise ValueError("negative degree")
        self.field = field
        self.degree = degree
        self.conditions: tuple = tuple(conditions)
        self.monomials = monomials(degree)
        self._col = {e: i for i, e in enumerate(self.monomials)}
        if _basis is None:
            one = field.one
            _basis = [MPoly(field, VARS, {e: one}, _clean=False) for e in self.monomials]
        self._basis: list[MPoly] = _basis

    @property
    def dimension(self) -> int:
        return len(self._basis)

    @property
    def unconstrained_dimension(self) -> int:
        return (self.degree + 1) * (self.degree + 2) // 2

    def basis_matrix(self) -> ExactMatrix:
        rows = []
        for f in self._basis:
            row = [self.field.zero] * len(self.monomials)
            for e, c in f.terms.items():
                row[self._col[e]] = c
            rows.append(row)
        return ExactMatrix(self.field, rows, len(self.monomials))

    def condition_matrix(self) -> ExactMatrix:
        """Rows spanning all linear conditions on the monomial coefficients."""
        ann = self.basis_matrix().kernel_basis() if self._basis else None
        if ann is None:
            return ExactMatrix.identity(self.field, len(self.monomials))
        return ExactMatrix(self.field, ann, len(self.monomials))

    def impose(self, chain: SingularityChain) -> "PlaneSystem":
        if chain.field != self.field:
            raise ValueError("chain coordinates are not in the system's field")
        for level in chain.ambiguous_levels():
            log.warning("direction at level %d of chain %s has u == v; using the x-chart", level, chain.mults)
        basis = _impose(self._basis, chain.trimmed())
        return PlaneSystem(self.field, self.degree, self.conditions + (chain,), _basis=_echelon(self, basis))

    def sections(self) -> list[CurveSection]:
        return [CurveSection(f) for f in self._basis]

    def __repr__(self) -> str:
        return f"PlaneSystem(degree={self.degree}, dimension={self.dimension}, conditions={len(self.conditions)})"


def generic_system(field: NumberField, d: int) -> PlaneSystem:
    return PlaneSystem(field, d)


def impose_chain(system: PlaneSystem, chain: SingularityChain) -> PlaneSystem:
    return system.impose(chain)


def _imposition_cost(chain: SingularityChain) -> tuple:
    c = chain.trimmed()
    data = list(c.base_point) + [a for d in c.directions for a in d]
    return (sum(not a.is_rational() for a in data), -c.condition_bound())


def plane_system(field: NumberField, d: int, chains: Iterable[SingularityChain]) -> PlaneSystem:
    """Impose every chain on the degree-``d`` system.

    The echelon basis does not depend on the order of imposition; chains with
    rational data and many conditions go first because that keeps the
    intermediate bases small.
    """
    chains = tuple(chains)
    system = PlaneSystem(field, d)
    for c in sorted(chains, key=_imposition_cost):
        system = system.impose(c)
    return PlaneSystem(field, d, chains, _basis=system._basis)


def sections(system: PlaneSystem) -> list[CurveSection]:
    return system.sections()


def _impose(basis: list[MPoly], chain: SingularityChain) -> list[MPoly]:
    if not basis or not chain.mults:
        return basis
    px, py = chain.base_point
    pairs = [(f, f.translate({"x": px, "y": py})) for f in basis]
    for j, m in enumerate(chain.mults):
        if m > 0:
            pairs = _restrict_low_degree(pairs, m)
            if not pairs:
                return []
        if j < len(chain.directions):
            d = chain.directions[j]
            pairs = [(f, chart_divide(chart_substitute(g, d), d, m)) for f, g in pairs]
    return [f for f, _ in pairs]


def _restrict_low_degree(pairs, m: int):
    """Combinations of the pairs whose current transform has multiplicity >= m at the origin."""
    field = pairs[0][0].field
    low = sorted({e for _, g in pairs for e in g.terms if sum(e) < m})
    if not low:
        return pairs
    idx = {e: i for i, e in enumerate(low)}
    cols = [[field.zero] * len(pairs) for _ in low]
    for k, (_, g) in enumerate(pairs):
        for e, c in g.terms.items():
            if sum(e) < m:
                cols[idx[e]][k] = c
    R, piv = rref_rows(cols, len(pairs))
    kern = kernel_from_rref(field, R, piv, len(pairs))
    out = []
    for v in kern:
        f = g = None
        for k, a in enumerate(v):
            if a:
                fk, gk = pairs[k]
                f = fk * a if f is None else f + fk * a
                g = gk * a if g is None else g + gk * a
        out.append((f, g))
    return out


def _echelon(system: PlaneSystem, basis: list[MPoly]) -> list[MPoly]:
    if not basis:
        return []
    tmp = PlaneSystem(system.field, system.degree, _basis=basis)
    M = tmp.basis_matrix()
    R, piv = M.rref()
    out = []
    for row in R:
        out.append(MPoly(system.field, VARS, {system.monomials[j]: c for j, c in enumerate(row) if c}, _clean=False))
    return out


# ---------------------------------------------------------------------------
# local intersection multiplicity


def local_intersection(F: MPoly, G: MPoly, point: Sequence) -> float | int:
    """Intersection multiplicity of two plane curves at ``point``.

    Fulton's recursion on the restrictions to ``y = 0`` after translating the
    point to the origin.  Returns ``INFINITE`` when the curves share a
    component through the point.
    """
    if not F or not G:
        raise ValueError("local_intersection needs nonzero polynomials")
    field = F.field
    shift = {"x": field(point[0]), "y": field(point[1])}
    stack = [(F.translate(shift), G.translate(shift))]
    total = 0
    origin = (0, 0)
    while stack:
        f, g = stack.pop()
        if not f or not g:
            return INFINITE
        if f.coefficient(origin) or g.coefficient(origin):
            continue
        while True:
            fr, gr = _restrict_y0(f), _restrict_y0(g)
            if not fr and not gr:
                return INFINITE
            if fr and (not gr or max(fr) > max(gr)):
                f, g = g, f
                fr, gr = gr, fr
            if not fr:
                # f = y * h: I(f, g) = I(y, g) + I(h, g)
                total += min(gr)
                h = f.divide_by_monomial((0, 1))
                stack.append((h, g))
                break
            r, s = max(fr), max(gr)
            if r == 0:
                break
            k = gr[s] / fr[r]
            shift_mono = MPoly(field, f.vars, {(s - r, 0): k}, _clean=False)
            g = g - shift_mono * f
            if g.coefficient(origin):
                break
    return total


def _restrict_y0(f: MPoly) -> dict[int, NFElem]:
    return {e[0]: c for e, c in f.terms.items() if e[1] == 0}
