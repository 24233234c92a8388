"""Univariate gcd / squarefree parts and Sylvester resultants."""

from __future__ import annotations

from .linalg import bareiss_determinant
from .numberfield import NFElem
from .poly import MPoly


def _dense(f: MPoly, var: str) -> list[NFElem]:
    i = f.index(var)
    for e in f.terms:
        if any(k for j, k in enumerate(e) if j != i):
            raise ValueError(f"{f} is not univariate in {var}")
    d = f.degree(var)
    out = [f.field.zero] * (d + 1)
    for e, c in f.terms.items():
        out[e[i]] = c
    return out


def _sparse(f_template: MPoly, var: str, coeffs: list[NFElem]) -> MPoly:
    i = f_template.index(var)
    n = len(f_template.vars)
    terms = {}
    for k, c in enumerate(coeffs):
        if c:
            e = [0] * n
            e[i] = k
            terms[tuple(e)] = c
    return MPoly(f_template.field, f_template.vars, terms, _clean=False)


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def dense_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    inv = b[-1].inverse()
    zero = b[0] * 0
    q = [zero] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if not c:
            continue
        c = c * inv
        q[k - db] = c
        for j in range(db + 1):
            if b[j]:
                a[k - db + j] = a[k - db + j] - c * b[j]
    return _trim(q), _trim(a[:db])


def dense_monic(p: list) -> list:
    p = _trim(list(p))
    if not p:
        return p
    inv = p[-1].inverse()
    return [c * inv for c in p]


def dense_gcd(a: list, b: list) -> list:
    a, b = dense_monic(a), dense_monic(b)
    while b:
        _, r = dense_divmod(a, b)
        a, b = b, dense_monic(r)
    return a


def dense_derivative(p: list) -> list:
    return _trim([c * k for k, c in enumerate(p)][1:])


def dense_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    zero = a[0] * 0
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return _trim(out)


def dense_eval(p: list, x):
    acc = x * 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def univariate_var(f: MPoly) -> str:
    """The single variable occurring in ``f`` (first variable for constants)."""
    used = {i for e in f.terms for i, k in enumerate(e) if k}
    if len(used) > 1:
        raise ValueError(f"{f} is not univariate")
    return f.vars[used.pop()] if used else f.vars[0]


def gcd(f: MPoly, g: MPoly, var: str | None = None) -> MPoly:
    """Monic gcd of two univariate polynomials over the field."""
    var = var or univariate_var(f if f else g)
    return _sparse(f, var, dense_gcd(_dense(f, var), _dense(g, var)))


def squarefree_part(f: MPoly, var: str | None = None) -> MPoly:
    """``f / gcd(f, f')`` normalized to be monic."""
    if not f:
        raise ValueError("squarefree part of the zero polynomial")
    var = var or univariate_var(f)
    p = _dense(f, var)
    g = dense_gcd(p, dense_derivative(p))
    q, r = dense_divmod(p, g)
    if r:
        raise ArithmeticError("gcd does not divide polynomial")
    return _sparse(f, var, dense_monic(q))


def divmod_univariate(f: MPoly, g: MPoly, var: str | None = None) -> tuple[MPoly, MPoly]:
    var = var or univariate_var(f if f else g)
    q, r = dense_divmod(_dense(f, var), _dense(g, var))
    return _sparse(f, var, q), _sparse(f, var, r)


def sylvester_matrix(f: MPoly, g: MPoly, var: str) -> list[list[MPoly]]:
    """Sylvester matrix in ``var`` with polynomial entries in the other variables."""
    cf, cg = f.coefficients_in(var), g.coefficients_in(var)
    m, n = f.degree(var), g.degree(var)
    zero = MPoly.zero(f.field, f.vars)
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[i + m - k] = cf.get(k, zero)
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[i + n - k] = cg.get(k, zero)
        rows.append(row)
    return rows


def resultant(f: MPoly, g: MPoly, var: str) -> MPoly:
    """Resultant of ``f`` and ``g`` with respect to ``var`` (Sylvester determinant)."""
    f = f._coerce(f)
    g = f._coerce(g)
    if not f or not g:
        raise ValueError("resultant with the zero polynomial")
    m, n = f.degree(var), g.degree(var)
    if m <= 0 and n <= 0:
        raise ValueError(f"both polynomials are constant in {var}")
    if m == 0:
        return f**n
    if n == 0:
        return g**m
    M = sylvester_matrix(f, g, var)
    zero = MPoly.zero(f.field, f.vars)
    one = MPoly.const(f.field, f.vars, 1)
    return bareiss_determinant(M, lambda a, b: a.exact_div(b), zero, one)
