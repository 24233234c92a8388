from .elim import divmod_univariate, gcd, resultant, squarefree_part, sylvester_matrix
from .linalg import ExactMatrix, bareiss_determinant, kernel_from_rref, rref_rows
from .numberfield import QQ, NFElem, NumberField, to_mpq
from .poly import MPoly, poly_ring
from .roots import DEFAULT_TOL, RootSeparationError, isolate_complex_roots


def field_arith(a: NFElem, b: NFElem, op: str) -> NFElem:
    """Apply one of ``+ - * /`` to two elements of the same field."""
    if a.field != b.field:
        raise ValueError("mismatched number-field contexts")
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(f: MPoly, var: str, order: int = 1) -> MPoly:
    return f.diff(var, order)


def poly_eval_subst(f: MPoly, subs) -> MPoly:
    return f.subs(subs)


def kernel_basis(M: ExactMatrix):
    return M.kernel_basis()


__all__ = [
    "QQ",
    "DEFAULT_TOL",
    "ExactMatrix",
    "MPoly",
    "NFElem",
    "NumberField",
    "RootSeparationError",
    "bareiss_determinant",
    "divmod_univariate",
    "field_arith",
    "gcd",
    "isolate_complex_roots",
    "kernel_basis",
    "kernel_from_rref",
    "partial_derivative",
    "poly_eval_subst",
    "poly_ring",
    "resultant",
    "rref_rows",
    "squarefree_part",
    "sylvester_matrix",
    "to_mpq",
]
