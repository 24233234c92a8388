"""Sparse multivariate polynomials over a :class:`NumberField`."""

from __future__ import annotations

from math import comb
from typing import Iterable, Mapping, Sequence

from .numberfield import NFElem, NumberField


def _grlex_key(e: tuple) -> tuple:
    return (sum(e), e)


class MPoly:
    """Immutable sparse polynomial: exponent tuples mapped to nonzero coefficients.

    All polynomials taking part in one operation must share the field and the
    ordered variable list.
    """

    __slots__ = ("field", "vars", "terms")

    def __init__(self, field: NumberField, variables: Sequence[str], terms: Mapping | None = None, *, _clean=True):
        self.field = field
        self.vars = tuple(variables)
        if terms is None:
            self.terms: dict = {}
        elif _clean:
            n = len(self.vars)
            clean = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match variables {self.vars}")
                c = field(c)
                if c:
                    clean[e] = c
            self.terms = clean
        else:
            self.terms = dict(terms)

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls, field: NumberField, variables: Sequence[str]) -> "MPoly":
        return cls(field, variables)

    @classmethod
    def const(cls, field: NumberField, variables: Sequence[str], value) -> "MPoly":
        return cls(field, variables, {(0,) * len(tuple(variables)): value})

    @classmethod
    def var(cls, field: NumberField, variables: Sequence[str], name: str) -> "MPoly":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(field, variables, {tuple(e): field.one}, _clean=False)

    @classmethod
    def gens(cls, field: NumberField, variables: Sequence[str]) -> tuple["MPoly", ...]:
        return tuple(cls.var(field, variables, v) for v in variables)

    def _new(self, terms: dict) -> "MPoly":
        return MPoly(self.field, self.vars, terms, _clean=False)

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            if other.field is not self.field and other.field != self.field:
                raise ValueError("mismatched number-field contexts")
            return other
        return MPoly.const(self.field, self.vars, self.field(other))

    # -- basic queries --------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r}") from None

    def total_degree(self) -> int:
        """Maximal total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: str) -> int:
        i = self.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def low_degree(self) -> int:
        """Minimal total degree of a term (the multiplicity at the origin)."""
        return min((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exps: Sequence[int]) -> NFElem:
        return self.terms.get(tuple(exps), self.field.zero)

    def leading_exponent(self) -> tuple:
        return max(self.terms, key=_grlex_key)

    def leading_coefficient(self) -> NFElem:
        return self.terms[self.leading_exponent()]

    def monic(self) -> "MPoly":
        """Scale so the graded-lex leading coefficient is 1."""
        if not self.terms:
            return self
        inv = self.leading_coefficient().inverse()
        return self._new({e: c * inv for e, c in self.terms.items()})

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # -- arithmetic -------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.terms.items())))

    def __add__(self, other) -> "MPoly":
        o = self._coerce(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return self._new(out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            k = self.field(other)
            if not k:
                return self._new({})
            return self._new({e: c * k for e, c in self.terms.items()})
        o = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return self._new({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = MPoly.const(self.field, self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, k) -> "MPoly":
        return self * k

    # -- substitution, evaluation, derivatives ---------------------------------
    def subs(self, mapping: Mapping[str, object]) -> "MPoly":
        """Substitute polynomials (or scalars) for variables; unlisted variables stay."""
        for v in mapping:
            self.index(v)
        images = []
        for v in self.vars:
            if v in mapping:
                images.append(self._coerce(mapping[v]))
            else:
                images.append(MPoly.var(self.field, self.vars, v))
        powers: list[dict[int, MPoly]] = [{0: MPoly.const(self.field, self.vars, 1)} for _ in self.vars]

        def power(i: int, k: int) -> MPoly:
            table = powers[i]
            if k not in table:
                top = max(table)
                acc = table[top]
                for j in range(top + 1, k + 1):
                    acc = acc * images[i]
                    table[j] = acc
            return table[k]

        acc: dict = {}
        for e, c in self.terms.items():
            term = MPoly.const(self.field, self.vars, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for te, tc in term.terms.items():
                s = acc.get(te)
                acc[te] = tc if s is None else s + tc
        return self._new({e: c for e, c in acc.items() if c})

    def evaluate(self, point: Mapping[str, object]) -> NFElem:
        """Value at a point; every variable must be assigned."""
        missing = [v for v in self.vars if v not in point]
        if missing:
            raise KeyError(f"no value for variables {missing}")
        vals = [self.field(point[v]) for v in self.vars]
        total = self.field.zero
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t = t * v**k
            total = total + t
        return total

    def translate(self, shift: Mapping[str, object]) -> "MPoly":
        """f(v + shift_v) computed by binomial expansion."""
        idx = [(self.index(v), self.field(a)) for v, a in shift.items()]
        cur = dict(self.terms)
        for i, a in idx:
            if not a:
                continue
            apow = [self.field.one]
            nxt: dict = {}
            for e, c in cur.items():
                k = e[i]
                while len(apow) <= k:
                    apow.append(apow[-1] * a)
                for j in range(k + 1):
                    ne = e[:i] + (j,) + e[i + 1 :]
                    t = c * (apow[k - j] * comb(k, j))
                    s = nxt.get(ne)
                    nxt[ne] = t if s is None else s + t
            cur = {e: c for e, c in nxt.items() if c}
        return self._new(cur)

    def diff(self, var: str, order: int = 1) -> "MPoly":
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        i = self.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k < order:
                continue
            f = 1
            for j in range(order):
                f *= k - j
            ne = e[:i] + (k - order,) + e[i + 1 :]
            out[ne] = c * f
        return self._new(out)

    def divide_by_monomial(self, exps: Sequence[int]) -> "MPoly":
        exps = tuple(exps)
        out = {}
        for e, c in self.terms.items():
            ne = tuple(a - b for a, b in zip(e, exps))
            if min(ne, default=0) < 0:
                raise ArithmeticError(f"monomial {exps} does not divide {self}")
            out[ne] = c
        return self._new(out)

    def coefficients_in(self, var: str) -> dict[int, "MPoly"]:
        """Coefficients with respect to one variable, as polynomials (var exponent 0)."""
        i = self.index(var)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            ne = e[:i] + (0,) + e[i + 1 :]
            out.setdefault(e[i], {})[ne] = c
        return {k: self._new(t) for k, t in out.items()}

    def map_coefficients(self, fn) -> "MPoly":
        return MPoly(self.field, self.vars, {e: fn(c) for e, c in self.terms.items()})

    # -- exact division -----------------------------------------------------------
    def exact_div(self, other: "MPoly") -> "MPoly":
        """Quotient ``self / other``; raises ArithmeticError unless the division is exact."""
        g = self._coerce(other)
        if not g.terms:
            raise ZeroDivisionError("polynomial division by zero")
        if len(g.terms) == 1:
            (ge, gc), = g.terms.items()
            inv = gc.inverse()
            out = {}
            for e, c in self.terms.items():
                ne = tuple(a - b for a, b in zip(e, ge))
                if min(ne, default=0) < 0:
                    raise ArithmeticError("inexact polynomial division")
                out[ne] = c * inv
            return self._new(out)
        ge = g.leading_exponent()
        ginv = g.terms[ge].inverse()
        rem = dict(self.terms)
        quot: dict = {}
        gitems = list(g.terms.items())
        while rem:
            e = max(rem, key=_grlex_key)
            qe = tuple(a - b for a, b in zip(e, ge))
            if min(qe, default=0) < 0:
                raise ArithmeticError("inexact polynomial division")
            qc = rem[e] * ginv
            quot[qe] = qc
            for ce, cc in gitems:
                te = tuple(a + b for a, b in zip(qe, ce))
                s = rem.get(te)
                t = cc * qc
                if s is None:
                    rem[te] = -t
                else:
                    s = s - t
                    if s:
                        rem[te] = s
                    else:
                        del rem[te]
        return self._new(quot)

    def __floordiv__(self, other) -> "MPoly":
        return self.exact_div(self._coerce(other))

    # -- printing ----------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.vars, e) if k
            )
            cs = str(c)
            if not mon:
                parts.append(cs)
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{cs}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MPoly({self})"

    def to_json(self) -> list:
        """Sorted ``[[exponents], [coefficient strings]]`` pairs."""
        return [[list(e), c.to_strings()] for e, c in self.sorted_terms()]


def poly_ring(field: NumberField, variables: str | Iterable[str]):
    """Generators for a polynomial ring: ``x, y = poly_ring(K, "x y")``."""
    if isinstance(variables, str):
        variables = variables.replace(",", " ").split()
    return MPoly.gens(field, tuple(variables))


def from_univariate_coeffs(field: NumberField, variables: Sequence[str], var: str, coeffs: Sequence) -> MPoly:
    """Polynomial sum c_k var^k from an ascending coefficient list."""
    variables = tuple(variables)
    i = variables.index(var)
    terms = {}
    for k, c in enumerate(coeffs):
        e = [0] * len(variables)
        e[i] = k
        terms[tuple(e)] = c
    return MPoly(field, variables, terms)
