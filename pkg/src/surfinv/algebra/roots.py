"""Numeric isolation of the distinct complex roots of a univariate polynomial."""

from __future__ import annotations

import mpmath

from .elim import _dense, squarefree_part, univariate_var
from .poly import MPoly

DEFAULT_TOL = 1e-10


class RootSeparationError(ArithmeticError):
    """Raised when roots cannot be separated at the requested tolerance."""


def isolate_complex_roots(f: MPoly, tol: float = DEFAULT_TOL, *, dps: int = 30, max_dps: int = 960) -> list[mpmath.mpc]:
    """One approximation per distinct complex root of ``f``.

    Coefficients are embedded in C through the field's fixed embedding.  The
    working precision doubles until every root is refined below ``tol`` and
    the roots are pairwise farther apart than ``2 * tol``.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    var = univariate_var(f)
    g = squarefree_part(f, var)
    coeffs = _dense(g, var)
    degree = len(coeffs) - 1
    if degree <= 0:
        return []
    prec = dps
    last_error = None
    while prec <= max_dps:
        with mpmath.workdps(prec):
            num = [c.to_complex(prec + 10) for c in reversed(coeffs)]
            try:
                roots = mpmath.polyroots(num, maxsteps=100 + 20 * degree, extraprec=2 * prec + 20, error=False)
            except mpmath.libmp.NoConvergence as exc:
                last_error = exc
                prec *= 2
                continue
            roots = [mpmath.mpc(z) for z in roots]
            if len(roots) != degree:
                prec *= 2
                continue
            # a simple root is certified when the Newton step is far below tol
            dnum = [c * (degree - i) for i, c in enumerate(num[:-1])]
            ok = True
            refined = []
            for z in roots:
                fz = mpmath.polyval(num, z)
                dz = mpmath.polyval(dnum, z)
                if dz == 0 or abs(fz / dz) > tol * 1e-3:
                    ok = False
                    break
                refined.append(z - fz / dz)
            if ok and _separated(refined, tol):
                return sorted(refined, key=lambda z: (float(z.real), float(z.imag)))
            last_error = RootSeparationError(f"roots not separated at tolerance {tol} with {prec} digits")
        prec *= 2
    raise RootSeparationError(str(last_error) if last_error else "root isolation failed")


def _separated(roots, tol: float) -> bool:
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= 2 * tol:
                return False
    return True
