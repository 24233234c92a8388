"""Divisor classes on blow-ups of the plane.

A class ``d*T - sum m_i E_i`` is stored as the degree ``d`` and the vector of
multiplicities ``m_i`` in the orthogonal basis of total transforms, so that
``T^2 = 1``, ``E_i^2 = -1`` and the canonical class is ``-3T + sum E_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import linsys
from .algebra import NumberField
from .linsys import SingularityChain


class LatticeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class DivClass:
    degree: int
    mults: tuple

    def __post_init__(self):
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))

    @property
    def n(self) -> int:
        return len(self.mults)

    def _check(self, other: "DivClass"):
        if not isinstance(other, DivClass):
            raise TypeError(f"expected DivClass, got {type(other).__name__}")
        if other.n != self.n:
            raise LatticeMismatch(f"classes live on blow-ups at {self.n} and {other.n} points")

    def __add__(self, other: "DivClass") -> "DivClass":
        self._check(other)
        return DivClass(self.degree + other.degree, tuple(a + b for a, b in zip(self.mults, other.mults)))

    def __sub__(self, other: "DivClass") -> "DivClass":
        self._check(other)
        return DivClass(self.degree - other.degree, tuple(a - b for a, b in zip(self.mults, other.mults)))

    def __neg__(self) -> "DivClass":
        return DivClass(-self.degree, tuple(-a for a in self.mults))

    def __mul__(self, k: int) -> "DivClass":
        return DivClass(self.degree * k, tuple(a * k for a in self.mults))

    __rmul__ = __mul__

    def pair(self, other: "DivClass") -> int:
        self._check(other)
        return self.degree * other.degree - sum(a * b for a, b in zip(self.mults, other.mults))

    def square(self) -> int:
        return self.pair(self)

    @property
    def is_zero(self) -> bool:
        return self.degree == 0 and not any(self.mults)

    def to_json(self) -> dict:
        return {"deg": self.degree, "mults": list(self.mults)}

    def __str__(self) -> str:
        return f"{self.degree}T - {list(self.mults)}.E"


@dataclass(frozen=True)
class BlowupLattice:
    """Picard lattice of the plane blown up ``n`` times: diag(1, -1, ..., -1)."""

    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def of_rank(cls, n: int) -> "BlowupLattice":
        return cls(tuple(f"E{i}" for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def signature(self) -> tuple[int, int]:
        return (1, self.n)

    def line(self) -> DivClass:
        return DivClass(1, (0,) * self.n)

    def exceptional(self, i: int | str) -> DivClass:
        if isinstance(i, str):
            i = self.labels.index(i)
        m = [0] * self.n
        m[i] = -1
        return DivClass(0, tuple(m))

    def zero(self) -> DivClass:
        return DivClass(0, (0,) * self.n)

    def cls(self, degree: int, mults: Sequence[int]) -> DivClass:
        if len(mults) != self.n:
            raise LatticeMismatch(f"expected {self.n} multiplicities, got {len(mults)}")
        return DivClass(degree, tuple(mults))

    def canonical(self) -> DivClass:
        return DivClass(-3, (-1,) * self.n)

    def intersection_matrix(self) -> list[list[int]]:
        size = self.n + 1
        return [[(1 if i == 0 else -1) if i == j else 0 for j in range(size)] for i in range(size)]


def pair(D: DivClass, E: DivClass) -> int:
    return D.pair(E)


def canonical(lat: BlowupLattice) -> DivClass:
    return lat.canonical()


def arithmetic_genus(D: DivClass) -> int:
    """``D(D+K)/2 + 1`` on a blow-up of the plane."""
    K = DivClass(-3, (-1,) * D.n)
    twice = D.pair(D + K)
    if twice % 2:
        raise ValueError(f"D(D+K) = {twice} is odd; not an integral class")
    return twice // 2 + 1


def genus_from_numbers(D_sq: int, K_D: int) -> int:
    """Arithmetic genus from ``D^2`` and ``K.D`` on any smooth surface."""
    if (D_sq + K_D) % 2:
        raise ValueError(f"D^2 + K.D = {D_sq + K_D} is odd")
    return (D_sq + K_D) // 2 + 1


# ---------------------------------------------------------------------------
# translation to plane linear systems


@dataclass(frozen=True)
class PlaneSpec:
    degree: int
    mults: tuple  # one tuple per base point
    clamped: tuple = ()
    truncated: tuple = ()

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "mults": [list(m) for m in self.mults],
            "clamped": list(self.clamped),
            "truncated": list(self.truncated),
        }


@dataclass
class BlowupGeometry:
    """Base points, blow-up directions and the exceptional labels of each chain.

    ``groups[k]`` lists, in blow-up order, the lattice indices of the
    exceptional classes over ``points[k]``; ``directions[k]`` has one entry
    per level after the first.
    """

    field: NumberField
    lattice: BlowupLattice
    point_names: tuple
    points: tuple
    directions: tuple
    groups: tuple
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        seen = sorted(i for g in self.groups for i in g)
        if seen != list(range(self.lattice.n)):
            raise ValueError("exceptional groups must partition the lattice basis")
        for name, g, d in zip(self.point_names, self.groups, self.directions):
            if len(d) != max(len(g) - 1, 0):
                raise ValueError(f"point {name}: {len(g)} exceptional classes need {len(g) - 1} directions")

    def chain(self, k: int, mults: Sequence[int]) -> SingularityChain:
        return SingularityChain(self.points[k], tuple(mults), self.directions[k][: max(len(mults) - 1, 0)])

    def chains(self, spec: PlaneSpec) -> list[SingularityChain]:
        return [self.chain(k, m) for k, m in enumerate(spec.mults)]

    def permuted(self, order: Sequence[int]) -> "BlowupGeometry":
        """Same geometry with the base points listed in another order."""
        return BlowupGeometry(
            self.field,
            self.lattice,
            tuple(self.point_names[k] for k in order),
            tuple(self.points[k] for k in order),
            tuple(self.directions[k] for k in order),
            tuple(self.groups[k] for k in order),
        )


def class_to_plane_spec(D: DivClass, geometry: BlowupGeometry) -> PlaneSpec:
    """Plane degree and chain multiplicities for a class.

    Positive multiplicities are copied and zeros pass through.  The first
    negative multiplicity of a chain is clamped to 0 and every later entry of
    that chain is set to 0; both events are listed by label.
    """
    if D.degree < 0:
        raise ValueError(f"class of negative degree {D.degree} has no sections")
    if D.n != geometry.lattice.n:
        raise LatticeMismatch("class and geometry have different lattices")
    labels = geometry.lattice.labels
    clamped, truncated, out = [], [], []
    for g in geometry.groups:
        row = []
        cut = False
        for i in g:
            m = D.mults[i]
            if cut:
                if m:
                    truncated.append(labels[i])
                row.append(0)
            elif m < 0:
                clamped.append(labels[i])
                cut = True
                row.append(0)
            else:
                row.append(m)
        out.append(tuple(row))
    return PlaneSpec(D.degree, tuple(out), tuple(clamped), tuple(truncated))


def plane_system_for(D: DivClass, geometry: BlowupGeometry) -> linsys.PlaneSystem:
    spec = class_to_plane_spec(D, geometry)
    return linsys.plane_system(geometry.field, spec.degree, geometry.chains(spec))


def h0(D: DivClass, geometry: BlowupGeometry) -> int:
    """Dimension of the plane system translating ``D``; 0 for negative degree."""
    if D.degree < 0:
        return 0
    spec = class_to_plane_spec(D, geometry)
    key = (spec.degree, spec.mults)
    if key not in geometry._cache:
        system = linsys.plane_system(geometry.field, spec.degree, geometry.chains(spec))
        geometry._cache[key] = system.dimension
    return geometry._cache[key]


def evaluate_expression(expr: Mapping[str, int], named: Mapping[str, DivClass], lattice: BlowupLattice) -> DivClass:
    """Integer combination of named classes; the name ``K`` is the canonical class."""
    total = lattice.zero()
    for name, k in expr.items():
        if name == "K":
            base = lattice.canonical()
        elif name in named:
            base = named[name]
        else:
            raise KeyError(f"unknown class {name!r}")
        total = total + base * int(k)
    return total
