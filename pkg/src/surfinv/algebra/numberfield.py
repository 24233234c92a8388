"""Exact arithmetic in Q and in simple extensions Q(a) = Q[t]/(m(t))."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import mpmath
from gmpy2 import mpq

_ZERO = mpq(0)
_ONE = mpq(1)
_SCALARS = (int, type(_ZERO), Fraction, str)


def to_mpq(value) -> mpq:
    """Coerce ints, Fractions, mpq and ``"p/q"`` strings to an exact rational."""
    if isinstance(value, type(_ZERO)):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, (Fraction, Rational)):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        try:
            return mpq(text)
        except ValueError:
            raise ValueError(f"not a rational literal: {value!r}") from None
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


# ---------------------------------------------------------------------------
# dense univariate helpers over Q, coefficient lists in ascending order


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _qdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [_ZERO] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c == 0:
            continue
        c = c / lead
        q[k - db] = c
        for i in range(db + 1):
            a[k - db + i] -= c * b[i]
    return _trim(q), _trim(a[:db])


def _qmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _qsub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else _ZERO) - (b[i] if i < len(b) else _ZERO) for i in range(n)]
    return _trim(out)


def _qinvmod(a: list, m: list) -> list:
    """Inverse of ``a`` modulo ``m`` by the extended Euclidean algorithm."""
    r0, r1 = list(m), _trim(list(a))
    s0, s1 = [], [_ONE]
    while len(r1) > 1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qsub(s0, _qmul(q, s1))
    if not r1:
        raise ZeroDivisionError("element shares a factor with the defining polynomial")
    c = r1[0]
    return [x / c for x in s1]


class NumberField:
    """The field Q[t]/(m) for a monic polynomial ``m`` given in ascending order.

    ``NumberField(["10976/625", "1496/675", 1], name="r")`` is Q(r) with
    r^2 + 1496/675 r + 10976/625 = 0.  A degree-one polynomial gives Q itself.
    """

    def __init__(self, min_poly: Sequence, name: str = "a"):
        coeffs = [to_mpq(c) for c in min_poly]
        _trim(coeffs)
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.min_poly: tuple = tuple(coeffs)
        self.degree: int = len(coeffs) - 1
        self.name = name
        if self.degree == 2:
            c, b = coeffs[0], coeffs[1]
            disc = b * b - 4 * c
            if disc >= 0 and _is_rational_square(disc):
                raise ValueError("quadratic minimal polynomial is reducible over Q")
        self._tail = tuple(-c for c in coeffs[:-1])  # t^n = sum tail[i] t^i
        self._embedding: dict[int, mpmath.mpc] = {}
        self.zero = NFElem(self, (_ZERO,) * self.degree)
        self.one = NFElem(self, (_ONE,) + (_ZERO,) * (self.degree - 1))

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def gen(self) -> "NFElem":
        if self.degree == 1:
            return self(-self.min_poly[0])
        return NFElem(self, (_ZERO, _ONE) + (_ZERO,) * (self.degree - 2))

    def __call__(self, value) -> "NFElem":
        if isinstance(value, NFElem):
            if value.field is not self and value.field != self:
                raise ValueError("element belongs to a different number field")
            return value
        if isinstance(value, (list, tuple)):
            return self.from_coeffs(value)
        c = to_mpq(value)
        return NFElem(self, (c,) + (_ZERO,) * (self.degree - 1))

    def from_coeffs(self, coeffs: Iterable) -> "NFElem":
        """Element c0 + c1 a + c2 a^2 + ..., reduced modulo the minimal polynomial."""
        cs = [to_mpq(c) for c in coeffs]
        if len(cs) > self.degree:
            return NFElem(self, self._reduce(cs))
        cs += [_ZERO] * (self.degree - len(cs))
        return NFElem(self, tuple(cs))

    def _reduce(self, cs: list) -> tuple:
        n = self.degree
        cs = list(cs)
        tail = self._tail
        for k in range(len(cs) - 1, n - 1, -1):
            c = cs[k]
            if c:
                for i in range(n):
                    if tail[i]:
                        cs[k - n + i] += c * tail[i]
        cs = cs[:n]
        cs += [_ZERO] * (n - len(cs))
        return tuple(cs)

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self) -> int:
        return hash(self.min_poly)

    def __repr__(self) -> str:
        if self.degree == 1:
            return "NumberField(QQ)"
        m = " + ".join(f"({c})*{self.name}^{i}" for i, c in enumerate(self.min_poly) if c)
        return f"NumberField({m})"

    def __reduce__(self):
        return (NumberField, ([str(c) for c in self.min_poly], self.name))

    def generator_value(self, dps: int = 30) -> mpmath.mpc:
        """Complex value of the generator under the fixed embedding.

        The embedding sends the generator to the root of its minimal polynomial
        with positive imaginary part (or the largest real root when every root
        is real).
        """
        if dps not in self._embedding:
            with mpmath.workdps(dps + 10):
                coeffs = [mpmath.mpf(int(c.numerator)) / int(c.denominator) for c in reversed(self.min_poly)]
                roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps + 60)
                roots = [mpmath.mpc(z) for z in roots]
                cutoff = mpmath.mpf(10) ** (-dps)
                upper = [z for z in roots if z.imag > cutoff]
                if upper:
                    chosen = max(upper, key=lambda z: (z.imag, z.real))
                else:
                    chosen = mpmath.mpc(max(roots, key=lambda z: z.real).real, 0)
            self._embedding[dps] = chosen
        return self._embedding[dps]


def _is_rational_square(q: mpq) -> bool:
    from gmpy2 import is_square

    return is_square(q.numerator) and is_square(q.denominator)


class NFElem:
    """Immutable element of a :class:`NumberField`, stored by its power-basis coordinates."""

    __slots__ = ("field", "c")

    def __init__(self, field: NumberField, c: tuple):
        self.field = field
        self.c = c

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other) -> "NFElem":
        if isinstance(other, NFElem):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("mismatched number-field contexts")
            return other
        if not isinstance(other, _SCALARS):
            raise TypeError
        return self.field(other)

    # -- predicates -----------------------------------------------------------
    def __bool__(self) -> bool:
        return any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def __eq__(self, other) -> bool:
        if isinstance(other, NFElem):
            return self.c == other.c and (other.field is self.field or other.field == self.field)
        try:
            return self.c == self.field(other).c
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.c[0])
        return hash(self.c)

    # -- ring operations ----------------------------------------------------
    def __add__(self, other) -> "NFElem":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return NFElem(self.field, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other) -> "NFElem":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return NFElem(self.field, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other) -> "NFElem":
        try:
            return self._coerce(other) - self
        except TypeError:
            return NotImplemented

    def __neg__(self) -> "NFElem":
        return NFElem(self.field, tuple(-a for a in self.c))

    def __mul__(self, other) -> "NFElem":
        if isinstance(other, NFElem):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("mismatched number-field contexts")
            oc = other.c
        elif isinstance(other, _SCALARS):
            k = to_mpq(other)
            return NFElem(self.field, tuple(a * k for a in self.c))
        else:
            return NotImplemented
        f = self.field
        n = f.degree
        a = self.c
        if n == 1:
            return NFElem(f, (a[0] * oc[0],))
        if n == 2:
            a0, a1 = a
            b0, b1 = oc
            hi = a1 * b1
            t0, t1 = f._tail
            return NFElem(f, (a0 * b0 + hi * t0, a0 * b1 + a1 * b0 + hi * t1))
        prod = [_ZERO] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(oc):
                    if y:
                        prod[i + j] += x * y
        return NFElem(f, f._reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> "NFElem":
        if not self:
            raise ZeroDivisionError("division by zero in number field")
        f = self.field
        if f.degree == 1:
            return NFElem(f, (1 / self.c[0],))
        if f.degree == 2:
            # conjugate of t is -p - t, norm = a0^2 - a0 a1 p + a1^2 q  for t^2 + p t + q = 0
            a0, a1 = self.c
            q, p = f.min_poly[0], f.min_poly[1]
            norm = a0 * a0 - a0 * a1 * p + a1 * a1 * q
            return NFElem(f, ((a0 - a1 * p) / norm, -a1 / norm))
        inv = _qinvmod(_trim(list(self.c)), list(f.min_poly))
        return f.from_coeffs(inv)

    def __truediv__(self, other) -> "NFElem":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.is_rational():
            if not o.c[0]:
                raise ZeroDivisionError("division by zero in number field")
            k = 1 / o.c[0]
            return NFElem(self.field, tuple(a * k for a in self.c))
        return self * o.inverse()

    def __rtruediv__(self, other) -> "NFElem":
        try:
            return self._coerce(other) * self.inverse()
        except TypeError:
            return NotImplemented

    def __pow__(self, e: int) -> "NFElem":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- conversions ----------------------------------------------------------
    def to_rational(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def to_complex(self, dps: int = 30) -> mpmath.mpc:
        if self.is_rational():
            c = self.c[0]
            return mpmath.mpc(mpmath.mpf(int(c.numerator)) / int(c.denominator))
        z = self.field.generator_value(dps)
        acc = mpmath.mpc(0)
        for c in reversed(self.c):
            acc = acc * z + mpmath.mpf(int(c.numerator)) / int(c.denominator)
        return acc

    def to_strings(self) -> list[str]:
        """Ascending power-basis coordinates as ``"p/q"`` strings (config format)."""
        return [str(c) for c in self.c]

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.c[0])
        parts = []
        for i, c in reversed(list(enumerate(self.c))):
            if not c:
                continue
            mon = "" if i == 0 else (self.field.name if i == 1 else f"{self.field.name}^{i}")
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append(f"-{mon}")
            else:
                parts.append(f"{c}*{mon}")
        return "(" + " + ".join(parts).replace("+ -", "- ") + ")"

    def __repr__(self) -> str:
        return f"NFElem({self})"

    def __reduce__(self):
        return (NFElem, (self.field, self.c))


QQ = NumberField([0, 1], name="q")
