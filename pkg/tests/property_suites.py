"""Randomized algebraic properties; run from the acceptance suite at a fixed example count."""

from fractions import Fraction

from hypothesis import assume, given
from hypothesis import strategies as st

from surfinv.algebra import QQ, ExactMatrix, MPoly, NumberField, gcd, kernel_basis, resultant
from surfinv.linsys import generic_system, local_intersection, make_chain, plane_system, verify_chain
from surfinv.piclattice import BlowupLattice, DivClass, canonical, pair

Qr = NumberField(["10976/625", "1496/675", 1], name="r")
COUNTS: dict = {}


def _tick(name):
    COUNTS[name] = COUNTS.get(name, 0) + 1


small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)
elements = st.tuples(small_q, small_q).map(lambda c: Qr([c[0], c[1]]))
nonzero = elements.filter(bool)


@given(elements, elements, elements, nonzero)
def field_axioms(a, b, c, u):
    _tick("field axioms")
    assert (a + b) + c == a + (b + c)
    assert a * (b * c) == (a * b) * c
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == Qr.zero and a * Qr.one == a
    assert u * u.inverse() == Qr.one
    assert (a / u) * u == a


def _upoly(coeffs, var="x"):
    return MPoly(QQ, (var,), {(k,): QQ(c) for k, c in enumerate(coeffs) if c})


coeff_lists = st.lists(st.integers(-6, 6), min_size=2, max_size=5).filter(lambda c: c[-1] != 0)


@given(coeff_lists, coeff_lists, st.lists(st.integers(-4, 4), min_size=1, max_size=3), st.booleans())
def resultant_gcd(fa, ga, ha, plant):
    _tick("resultant/gcd consistency")
    f, g = _upoly(fa), _upoly(ga)
    if plant and ha[-1] != 0 and len(ha) > 1:
        h = _upoly(ha)
        f, g = f * h, g * h
    r = resultant(f, g, "x")
    common = gcd(f, g).degree("x") > 0
    assert (r.is_zero()) == common
    if plant and ha[-1] != 0 and len(ha) > 1:
        assert r.is_zero()


biv_terms = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-4, 4), min_size=1, max_size=6)


@given(biv_terms, biv_terms)
def resultant_degree_bound(ft, gt):
    f = MPoly(QQ, ("x", "y"), {e: QQ(c) for e, c in ft.items() if c})
    g = MPoly(QQ, ("x", "y"), {e: QQ(c) for e, c in gt.items() if c})
    assume(f.degree("y") > 0 and g.degree("y") > 0)
    _tick("resultant degree bound")
    r = resultant(f, g, "y")
    if not r.is_zero():
        assert r.degree("x") <= f.total_degree() * g.total_degree()


@st.composite
def matrices(draw):
    m, n, k = draw(st.integers(1, 5)), draw(st.integers(1, 6)), draw(st.integers(1, 5))
    A = draw(st.lists(st.lists(st.integers(-3, 3), min_size=k, max_size=k), min_size=m, max_size=m))
    B = draw(st.lists(st.lists(small_q, min_size=n, max_size=n), min_size=k, max_size=k))
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(n)] for i in range(m)]


def _frac(c):
    if hasattr(c, "c"):
        (c,) = c.c
    return Fraction(int(c.numerator), int(c.denominator))


def _rank(rows):
    """Rank by plain fraction elimination, independent of the library kernel."""
    rows = [[_frac(c) for c in r] for r in rows]
    rank, col, ncols = 0, 0, len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            f = rows[i][col] / rows[rank][col]
            rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank, col = rank + 1, col + 1
    return rank


@given(matrices())
def kernel_exactness(rows):
    _tick("kernel exactness")
    M = ExactMatrix(QQ, rows)
    ker = kernel_basis(M)
    n = len(rows[0])
    assert len(ker) == n - _rank(rows)
    for v in ker:
        assert all(c == 0 for c in M.mul_vec(v))
    if ker:
        assert _rank(ker) == len(ker)
        # rational row space is orthogonal to the kernel: each v is outside it
        base = _rank(rows)
        for v in ker:
            assert _rank(rows + [v]) == base + 1


classes = st.integers(0, 6).flatmap(
    lambda n: st.tuples(
        *[st.builds(DivClass, st.integers(-8, 8), st.tuples(*[st.integers(-5, 5)] * n).map(tuple)) for _ in range(3)],
        st.integers(-4, 4),
    )
)


@given(classes)
def pairing_bilinearity(data):
    _tick("pairing bilinearity")
    a, b, c, k = data
    assert pair(a + b, c) == pair(a, c) + pair(b, c)
    assert pair(a * k, b) == k * pair(a, b)
    assert pair(a, b) == pair(b, a)
    K = canonical(BlowupLattice.of_rank(a.n))
    assert (pair(a, a) + pair(a, K)) % 2 == 0


points = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
directions = st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(lambda d: d != (0, 0))


@st.composite
def chain_sets(draw):
    d = draw(st.integers(1, 4))
    pts = draw(st.lists(points, min_size=1, max_size=3, unique=True))
    chains = []
    for p in pts:
        mults = draw(st.lists(st.integers(0, 2), min_size=1, max_size=3))
        dirs = draw(st.lists(directions, min_size=len(mults) - 1, max_size=len(mults) - 1))
        chains.append(make_chain(QQ, p, mults, dirs))
    order = draw(st.permutations(range(len(chains))))
    return d, chains, order


@given(chain_sets())
def imposition_order(data):
    _tick("imposition order-independence")
    d, chains, order = data
    a = plane_system(QQ, d, chains)
    b = plane_system(QQ, d, [chains[i] for i in order])
    assert [s.poly for s in a.sections()] == [s.poly for s in b.sections()]
    full = generic_system(QQ, d).dimension
    assert max(0, full - sum(c.condition_bound() for c in chains)) <= a.dimension <= full
    for s in a.sections():
        for c in chains:
            assert verify_chain(s.poly, c).ok


@st.composite
def line_families(draw):
    a, b = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    slopes = draw(st.lists(st.integers(-9, 9), min_size=a + b, max_size=a + b, unique=True))
    offsets = draw(st.lists(st.integers(-3, 3), min_size=a + b, max_size=a + b))
    H = draw(st.dictionaries(st.tuples(st.integers(0, 1), st.integers(0, 1)), st.integers(-2, 2), max_size=3))
    return a, list(zip(slopes, offsets)), H


@given(line_families())
def bezout_sums(data):
    _tick("Bezout sums")
    a, lines, Ht = data
    x, y = MPoly.gens(QQ, ("x", "y"))
    one = MPoly.const(QQ, ("x", "y"), QQ.one)

    def product(ls):
        out = one
        for m, c in ls:
            out = out * (y - x * m - one * c)
        return out

    F, G = product(lines[:a]), product(lines[a:])
    pts = set()
    for m1, c1 in lines[:a]:
        for m2, c2 in lines[a:]:
            px = Fraction(c2 - c1, m1 - m2)
            pts.add((px, m1 * px + c1))
    pts = [(QQ(px), QQ(py)) for px, py in sorted(pts)]
    total = sum(local_intersection(F, G, p) for p in pts)
    assert total == a * (len(lines) - a)
    H = MPoly(QQ, ("x", "y"), {e: QQ(c) for e, c in Ht.items() if c})
    for p in pts:
        v = local_intersection(F, G, p)
        assert v == local_intersection(G, F, p)
        assert local_intersection(F, G + H * F, p) == v


SUITES = {
    "field axioms": field_axioms,
    "resultant/gcd consistency": resultant_gcd,
    "resultant degree bound": resultant_degree_bound,
    "kernel exactness": kernel_exactness,
    "pairing bilinearity": pairing_bilinearity,
    "imposition order-independence": imposition_order,
    "Bezout sums": bezout_sums,
}
