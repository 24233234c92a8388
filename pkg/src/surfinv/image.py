"""Counting the points of a zero-dimensional section of a double-plane image.

The surface is the double plane ``w^2 = f6(x, y)`` in the affine chart
``z = 1`` and the map is ``[l1 : l2 : l3 : w*g]``.  Points of the section
``{l1 = l2 = 0}`` are found by eliminating ``y``; assigned base points are
removed by their known coordinates.  Every residual plane point carries two
preimages ``w = +-sqrt(f6)`` and the image point is determined by
``lambda = w*g/l3``.

Two counts are produced independently and must agree:

* exact: triangular sets ``(Q(t), X(t), Y(t))`` over the base field obtained
  by a dynamic-evaluation gcd, followed by the eliminant
  ``prod Res_t(Q_i, lambda^2 - mu_i(t))`` whose squarefree degree is the
  number of distinct image points;
* numeric: complex roots refined at high precision and clustered in
  projective space at a fixed tolerance.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .algebra import MPoly, NFElem, NumberField, isolate_complex_roots, resultant, squarefree_part
from .algebra.elim import _dense, _trim, dense_divmod, dense_gcd, dense_monic, dense_mul

log = logging.getLogger(__name__)

WORK_DPS = 80
SHEARS = (Fraction(0), Fraction(1, 3), Fraction(-2, 5), Fraction(3, 7), Fraction(5, 4))


class DegenerateImageError(ArithmeticError):
    pass


class ClusteringAmbiguity(ArithmeticError):
    pass


class ImageCountMismatch(ArithmeticError):
    pass


class _Split(Exception):
    def __init__(self, factor):
        self.factor = factor


class _NeedsShear(Exception):
    pass


@dataclass(frozen=True)
class ImageProblem:
    """Map ``[l1 : l2 : l3 : w*g]`` on ``w^2 = f6``; ``degrees`` are the nominal degrees of (l, g, f6)."""

    coords: tuple
    g: MPoly
    f6: MPoly
    base_points: tuple
    degrees: tuple

    @property
    def field(self) -> NumberField:
        return self.f6.field


@dataclass
class TriangularSet:
    Q: list  # squarefree, monic in t
    X: list  # x = X(t) mod Q
    Y: list  # y = Y(t) mod Q
    param: str = "x"  # which coordinate t stands for

    @property
    def degree(self) -> int:
        return len(self.Q) - 1


@dataclass
class ImageCount:
    image_points: int
    eliminant_degree: int
    eliminant_squarefree_degree: int
    plane_points: int
    preimages: int
    numeric_image_points: int
    numeric_plane_points: int
    numeric_preimages: int
    tolerance: float
    resultant_degree: int
    bezout_bound: int
    removed_base_factors: dict = field(default_factory=dict)
    shear: str = "0"
    lambdas: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "image_points": self.image_points,
            "eliminant_degree": self.eliminant_degree,
            "eliminant_squarefree_degree": self.eliminant_squarefree_degree,
            "plane_points": self.plane_points,
            "preimages": self.preimages,
            "numeric": {
                "image_points": self.numeric_image_points,
                "plane_points": self.numeric_plane_points,
                "preimages": self.numeric_preimages,
                "tolerance": self.tolerance,
            },
            "resultant_degree": self.resultant_degree,
            "bezout_bound": self.bezout_bound,
            "removed_base_factors": dict(self.removed_base_factors),
            "shear": self.shear,
        }


# ---------------------------------------------------------------------------
# arithmetic in K[t]/(Q)


def _reduce(a: list, Q: list) -> list:
    a = _trim(list(a))
    if len(a) < len(Q):
        return a
    return dense_divmod(a, Q)[1]


def _mulmod(a: list, b: list, Q: list) -> list:
    return _reduce(dense_mul(a, b), Q)


def _add(a: list, b: list) -> list:
    n = max(len(a), len(b))
    zero = (a or b)[0] * 0 if (a or b) else None
    out = [(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(n)]
    return _trim(out)


def _scale(a: list, c) -> list:
    return _trim([x * c for x in a])


def _invmod(a: list, Q: list) -> list:
    """Inverse modulo ``Q``; raises ``_Split`` when ``a`` shares a factor with ``Q``."""
    a = _reduce(a, Q)
    if not a:
        raise ZeroDivisionError("inverting zero in a quotient ring")
    r0, r1 = list(Q), a
    s0, s1 = [], [Q[0] * 0 + 1]
    while len(r1) > 1:
        q, r = dense_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _add(s0, _scale(dense_mul(q, s1), -1))
    if not r1:
        raise _Split(dense_monic(r0))
    c = r1[0].inverse()
    return _reduce(_scale(s1, c), Q)


def _poly_at(f: MPoly, X: list, Y: list, Q: list) -> list:
    """``f(X(t), Y(t)) mod Q``."""
    px, py = {0: [f.field.one]}, {0: [f.field.one]}

    def power(cache, base, k):
        if k not in cache:
            cache[k] = _mulmod(power(cache, base, k - 1), base, Q)
        return cache[k]

    acc = []
    for (i, j), c in f.terms.items():
        acc = _add(acc, _scale(_mulmod(power(px, X, i), power(py, Y, j), Q), c))
    return _reduce(acc, Q)


def _ypoly_mod(f: MPoly, Q: list) -> list:
    """Coefficients in ``y`` of ``f(t, y)``, each reduced modulo ``Q``."""
    d = f.degree("y")
    rows = [[] for _ in range(d + 1)]
    for (i, j), c in f.terms.items():
        row = rows[j]
        while len(row) <= i:
            row.append(f.field.zero)
        row[i] = row[i] + c
    return [_reduce(r, Q) for r in rows]


def _ygcd_mod(Q: list, A: list, B: list) -> list:
    """Monic gcd in ``(K[t]/Q)[y]``, raising ``_Split`` on a zero divisor."""

    def trim(P):
        P = [_reduce(c, Q) for c in P]
        while P and not P[-1]:
            P.pop()
        return P

    def monic(P):
        inv = _invmod(P[-1], Q)
        return [_mulmod(c, inv, Q) for c in P]

    A, B = trim(A), trim(B)
    if len(A) < len(B):
        A, B = B, A
    if not B:
        return monic(A) if A else []
    B = monic(B)
    while B:
        # A <- A mod B with B monic
        A = list(A)
        db = len(B) - 1
        for k in range(len(A) - 1, db - 1, -1):
            c = A[k]
            if not c:
                continue
            for j in range(db + 1):
                A[k - db + j] = _reduce(_add(A[k - db + j], _scale(dense_mul(c, B[j]), -1)), Q)
        A = trim(A[:db])
        A, B = B, (monic(A) if A else [])
    return A


def triangular_decomposition(l1: MPoly, l2: MPoly, Q: list) -> list[TriangularSet]:
    """Common zeros of ``l1, l2`` whose ``x``-coordinate is a root of the squarefree ``Q``."""
    out = []
    work = [Q]
    while work:
        q = work.pop()
        if len(q) <= 1:
            continue
        try:
            H = _ygcd_mod(q, _ypoly_mod(l1, q), _ypoly_mod(l2, q))
        except _Split as s:
            g = s.factor
            work.append(dense_divmod(q, g)[0])
            work.append(g)
            continue
        if not H:
            raise DegenerateImageError("l1 and l2 share a vertical component: the section is not zero-dimensional")
        if len(H) == 1:
            continue  # resultant root without a common affine zero
        if len(H) > 2:
            raise _NeedsShear()
        out.append(TriangularSet(q, _reduce([l1.field.zero, l1.field.one], q), _scale(H[0], -1)))
    out.sort(key=lambda T: (T.degree, [str(c) for c in T.Q]))
    return out


# ---------------------------------------------------------------------------


def _as_univariate(f: MPoly, var: str) -> list:
    return _dense(f, var)


def _strip_factor(R: list, c: NFElem) -> tuple[list, int]:
    root = [-c, c.field.one]
    k = 0
    while len(R) > 1:
        q, r = dense_divmod(R, root)
        if r:
            break
        R, k = q, k + 1
    return R, k


def _line_residuals(problem: ImageProblem, c: NFElem) -> list[TriangularSet]:
    """Residual common zeros on the vertical line ``x = c`` after removing base points."""
    F = problem.field
    l1, l2 = problem.coords[0], problem.coords[1]
    a = l1.subs({"x": c})
    b = l2.subs({"x": c})
    if not a and not b:
        raise DegenerateImageError(f"the section contains the line x = {c}; it is not zero-dimensional")
    h = dense_gcd(_as_univariate(a, "y") if a else [], _as_univariate(b, "y") if b else [])
    for bx, by in problem.base_points:
        if bx == c:
            h, _ = _strip_factor(h, by)
    if len(h) <= 1:
        return []
    h = _as_univariate(squarefree_part(_from_dense(F, h, "y"), "y"), "y")
    h = dense_monic(h)
    return [TriangularSet(h, _reduce([c], h), _reduce([F.zero, F.one], h), "y")]


def _from_dense(F, coeffs, var):
    from .algebra.poly import from_univariate_coeffs

    return from_univariate_coeffs(F, ("x", "y"), var, coeffs)


@dataclass
class _Exact:
    sets: list
    image_points: int
    eliminant_degree: int
    eliminant_sqf: int
    preimages: int
    resultant_degree: int
    removed: dict


def _exact_count(problem: ImageProblem) -> _Exact:
    F = problem.field
    l1, l2, l3 = problem.coords
    R = resultant(l1, l2, "y")
    if not R:
        raise DegenerateImageError("res_y(l1, l2) vanishes identically: the section is not zero-dimensional")
    Rd = _as_univariate(R, "x")
    res_degree = len(Rd) - 1
    removed = {}
    xs = []
    for bx, _ in problem.base_points:
        if bx not in xs:
            xs.append(bx)
    for c in xs:
        Rd, k = _strip_factor(Rd, c)
        removed[str(c)] = k
    sets = []
    if len(Rd) > 1:
        Q = dense_monic(_as_univariate(squarefree_part(_from_dense(F, Rd, "x"), "x"), "x"))
        sets.extend(triangular_decomposition(l1, l2, Q))
    for c in xs:
        sets.extend(_line_residuals(problem, c))

    T_LAM = ("t", "L")
    lam_factors = []
    point_at_w = False
    preimages = 0
    elim_degree = 0
    for T in sets:
        pieces = [T]
        while pieces:
            P = pieces.pop()
            v3 = _poly_at(l3, P.X, P.Y, P.Q)
            vg = _poly_at(problem.g, P.X, P.Y, P.Q)
            vf = _poly_at(problem.f6, P.X, P.Y, P.Q)
            g3 = dense_gcd(list(P.Q), v3) if v3 else list(P.Q)
            if 1 < len(g3) < len(P.Q):
                for q in (g3, dense_divmod(P.Q, g3)[0]):
                    pieces.append(TriangularSet(q, _reduce(P.X, q), _reduce(P.Y, q), P.param))
                continue
            gf = dense_gcd(list(P.Q), vf) if vf else list(P.Q)
            preimages += 2 * P.degree - (len(gf) - 1)
            if len(g3) == len(P.Q):
                # l3 vanishes on the whole piece: image point [0:0:0:1] unless g vanishes too
                gg = dense_gcd(list(P.Q), vg) if vg else list(P.Q)
                if len(gg) > 1:
                    raise DegenerateImageError("all map components vanish at a residual point")
                point_at_w = True
                continue
            inv3 = _invmod(v3, P.Q)
            mu = _mulmod(_mulmod(vf, _mulmod(vg, vg, P.Q), P.Q), _mulmod(inv3, inv3, P.Q), P.Q)
            Qt = MPoly(F, T_LAM, {(k, 0): c for k, c in enumerate(P.Q) if c})
            lam2 = MPoly(F, T_LAM, {(0, 2): F.one}) - MPoly(F, T_LAM, {(k, 0): c for k, c in enumerate(mu) if c})
            E = resultant(Qt, lam2, "t") if mu else MPoly(F, T_LAM, {(0, 2 * P.degree): F.one})
            lam_factors.append(E)
            elim_degree += E.degree("L")

    total = None
    for E in lam_factors:
        total = E if total is None else total * E
    sqf = 0
    if total is not None:
        sqf = squarefree_part(total, "L").degree("L")
    image_points = sqf + (1 if point_at_w else 0)
    return _Exact(sets, image_points, elim_degree + (1 if point_at_w else 0), image_points, preimages, res_degree, removed)


# ---------------------------------------------------------------------------
# numeric path


def _numeric(f: MPoly, dps: int):
    return [(e, c.to_complex(dps)) for e, c in f.terms.items()]


def _evaluate(nf, x, y):
    return mpmath.fsum(c * x ** e[0] * y ** e[1] for e, c in nf)


def _scale_at(nf, x, y):
    return mpmath.fsum(abs(c) * abs(x) ** e[0] * abs(y) ** e[1] for e, c in nf) + 1


def _polish(coeffs, z, steps=8):
    for _ in range(steps):
        p = mpmath.polyval(coeffs, z, derivative=True)
        if p[1] == 0:
            break
        z -= p[0] / p[1]
    return z


def _projective_distance(u, v):
    nu = mpmath.fsum(abs(a) ** 2 for a in u)
    nv = mpmath.fsum(abs(a) ** 2 for a in v)
    inner = mpmath.fsum(a * mpmath.conj(b) for a, b in zip(u, v))
    c2 = abs(inner) ** 2 / (nu * nv)
    return mpmath.sqrt(max(mpmath.mpf(0), 1 - c2))


def _cluster(items, dist, tol) -> int:
    reps = []
    for it in items:
        near = [dist(it, r) for r in reps]
        close = [d for d in near if d <= tol]
        for d in near:
            if tol * 1e-6 < d <= tol * 1e2:
                raise ClusteringAmbiguity(f"two points are {mpmath.nstr(d, 5)} apart at tolerance {tol}")
        if not close:
            reps.append(it)
    return len(reps)


@dataclass
class _Numeric:
    plane_points: int
    preimages: int
    image_points: int
    lambdas: list


def _ycoeffs_at(nf, x0, dps) -> list:
    """Coefficients of ``f(x0, y)`` in y, highest first, numerically trimmed."""
    ycoef = {}
    for (i, j), c in nf:
        ycoef[j] = ycoef.get(j, 0) + c * x0**i
    deg = max((j for j, c in ycoef.items() if abs(c) > mpmath.mpf(10) ** (-dps // 2)), default=0)
    return [ycoef.get(j, 0) for j in range(deg, -1, -1)]


def _ydegree_at(nf, x0, dps) -> int:
    return len(_ycoeffs_at(nf, x0, dps)) - 1


def _numeric_count(problem: ImageProblem, exact_sets_x: list, tol: float) -> _Numeric:
    dps = WORK_DPS
    with mpmath.workdps(dps):
        l1, l2, l3 = (_numeric(f, dps) for f in problem.coords)
        ng, nf = _numeric(problem.g, dps), _numeric(problem.f6, dps)
        pts = []
        for x0 in exact_sets_x:
            if isinstance(x0, tuple):  # a point on a base line: (x, y) already known numerically
                pts.append(x0)
                continue
            # root whichever section line still depends on y over x0, test on the other
            solve = [f for f in (l1, l2) if _ydegree_at(f, x0, dps) > 0]
            if not solve:
                continue
            f, other = solve[0], (l2 if solve[0] is l1 else l1)
            coeffs = _ycoeffs_at(f, x0, dps)
            ys = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
            for y0 in ys:
                y0 = _polish(coeffs, y0)
                if abs(_evaluate(other, x0, y0)) <= mpmath.mpf(10) ** (-dps // 3) * _scale_at(other, x0, y0):
                    pts.append((x0, y0))
        plane = _cluster(pts, lambda p, q: max(abs(p[0] - q[0]), abs(p[1] - q[1])), tol)
        pre, images, lambdas = [], [], []
        for x0, y0 in pts:
            w = mpmath.sqrt(_evaluate(nf, x0, y0))
            for s in ((1, -1) if abs(w) > tol * 1e-6 else (1,)):
                ws = s * w
                v = [_evaluate(l1, x0, y0), _evaluate(l2, x0, y0), _evaluate(l3, x0, y0), ws * _evaluate(ng, x0, y0)]
                if max(abs(a) for a in v) <= mpmath.mpf(10) ** (-dps // 3) * _scale_at(l3, x0, y0):
                    raise DegenerateImageError("all map components vanish at a residual point")
                pre.append((x0, y0, ws))
                images.append(v)
                if abs(v[2]) > 0:
                    lambdas.append(v[3] / v[2])
        npre = _cluster(pre, lambda p, q: max(abs(a - b) for a, b in zip(p, q)), tol)
        nimg = _cluster(images, _projective_distance, tol)
    return _Numeric(plane, npre, nimg, lambdas)


def _numeric_x_list(problem: ImageProblem, sets: list, tol: float) -> list:
    """Numeric x-roots of the triangular sets, plus explicit points for base-line residuals."""
    dps = WORK_DPS
    out = []
    with mpmath.workdps(dps):
        for T in sets:
            F = problem.field
            Qp = _from_dense(F, T.Q, "x")
            roots = isolate_complex_roots(Qp, tol)
            coeffs = [c.to_complex(dps) for c in reversed(T.Q)]
            Xc = [c.to_complex(dps) for c in reversed(T.X)] or [mpmath.mpc(0)]
            Yc = [c.to_complex(dps) for c in reversed(T.Y)] or [mpmath.mpc(0)]
            for z in roots:
                z = _polish(coeffs, mpmath.mpc(z))
                x0 = mpmath.polyval(Xc, z)
                if T.param == "y":  # residual on a base line: x is constant, y = t
                    out.append((x0, mpmath.polyval(Yc, z)))
                else:
                    out.append(x0)
    return out


# ---------------------------------------------------------------------------


def count_image_points(problem: ImageProblem, tol: float = 1e-8) -> ImageCount:
    """Exact and numeric counts of distinct image points; disagreement is an error."""
    _guard(problem)
    last = None
    for c in SHEARS:
        p = _shear(problem, c) if c else problem
        try:
            exact = _exact_count(p)
        except _NeedsShear as exc:
            last = exc
            log.info("x does not separate the section points; shearing by %s", c)
            continue
        xs = _numeric_x_list(p, exact.sets, tol)
        num = _numeric_count(p, xs, tol)
        plane = sum(T.degree for T in exact.sets)
        if (num.image_points, num.plane_points, num.preimages) != (exact.image_points, plane, exact.preimages):
            raise ImageCountMismatch(
                f"numeric counts (image {num.image_points}, plane {num.plane_points}, preimages {num.preimages}) "
                f"disagree with exact counts (image {exact.image_points}, plane {plane}, preimages {exact.preimages})"
            )
        dl = problem.degrees[0]
        return ImageCount(
            image_points=exact.image_points,
            eliminant_degree=exact.eliminant_degree,
            eliminant_squarefree_degree=exact.eliminant_sqf,
            plane_points=plane,
            preimages=exact.preimages,
            numeric_image_points=num.image_points,
            numeric_plane_points=num.plane_points,
            numeric_preimages=num.preimages,
            tolerance=tol,
            resultant_degree=exact.resultant_degree,
            bezout_bound=dl * dl,
            removed_base_factors=exact.removed,
            shear=str(c),
            lambdas=num.lambdas,
        )
    raise DegenerateImageError(f"no coordinate shear separates the section points ({last})")


def _guard(problem: ImageProblem) -> None:
    if not problem.g:
        raise DegenerateImageError("the w-component vanishes identically: the image lies in a plane")
    if not problem.f6:
        raise DegenerateImageError("w^2 = 0 does not define a double plane")
    l1, l2, l3 = problem.coords
    if not l1 or not l2:
        raise DegenerateImageError("a hyperplane section is the whole surface: the section is not zero-dimensional")
    from .linsys import PlaneSystem

    d = max(f.total_degree() for f in problem.coords)
    sys = PlaneSystem(problem.field, d, _basis=list(problem.coords))
    if sys.basis_matrix().rank() < 3:
        raise DegenerateImageError("the map components are linearly dependent: the image lies in a plane")
    dl, dg, df = problem.degrees
    if df % 2 or df // 2 + dg != dl:
        raise DegenerateImageError(f"weights do not match: deg f6 = {df}, deg g = {dg}, deg l = {dl}")


def _shear(problem: ImageProblem, c: Fraction) -> ImageProblem:
    """Coordinates ``(x', y)`` with ``x = x' + c*y``."""
    F = problem.field
    k = F(f"{c.numerator}/{c.denominator}")
    x, y = MPoly.gens(F, ("x", "y"))
    sub = {"x": x + y * k}
    return ImageProblem(
        tuple(f.subs(sub) for f in problem.coords),
        problem.g.subs(sub),
        problem.f6.subs(sub),
        tuple((px - py * k, py) for px, py in problem.base_points),
        problem.degrees,
    )


def homogenize_into_chart(f: MPoly, degree: int, a: NFElem, b: NFElem) -> MPoly:
    """``F_h(X, Y, 1 + aX + bY)`` for the homogenization ``F_h`` of ``f`` in degree ``degree``."""
    F = f.field
    x, y = MPoly.gens(F, ("x", "y"))
    z = MPoly.const(F, ("x", "y"), F.one) + x * a + y * b
    powers = [MPoly.const(F, ("x", "y"), F.one)]
    for _ in range(degree):
        powers.append(powers[-1] * z)
    out = MPoly.zero(F, ("x", "y"))
    for (i, j), c in f.terms.items():
        if i + j > degree:
            raise ValueError(f"term of degree {i + j} exceeds nominal degree {degree}")
        out = out + MPoly(F, ("x", "y"), {(i, j): c}) * powers[degree - i - j]
    return out


def alternate_chart(problem: ImageProblem, a, b) -> ImageProblem:
    """The same map in the chart ``z - a*x - b*y = 1`` of the plane."""
    F = problem.field
    a, b = F(a), F(b)
    dl, dg, df = problem.degrees
    pts = []
    for px, py in problem.base_points:
        zp = F.one - a * px - b * py
        if not zp:
            raise ValueError("a base point lies on the line at infinity of the alternate chart")
        pts.append((px / zp, py / zp))
    return ImageProblem(
        tuple(homogenize_into_chart(f, dl, a, b) for f in problem.coords),
        homogenize_into_chart(problem.g, dg, a, b),
        homogenize_into_chart(problem.f6, df, a, b),
        tuple(pts),
        problem.degrees,
    )


def generic_combinations(problem: ImageProblem, matrix: Sequence[Sequence]) -> ImageProblem:
    """Replace ``(l1, l2, l3)`` by ``matrix @ (l1, l2, l3)``; the matrix must be invertible."""
    F = problem.field
    rows = [[F(v) for v in row] for row in matrix]
    new = []
    for row in rows:
        acc = MPoly.zero(F, ("x", "y"))
        for c, f in zip(row, problem.coords):
            acc = acc + f * c
        new.append(acc)
    return ImageProblem(tuple(new), problem.g, problem.f6, problem.base_points, problem.degrees)
