"""End-to-end computation for a bidouble cover of a blown-up plane described by a config."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from . import covers, linsys
from .algebra import MPoly
from .config import ExampleConfig
from .covers import BidoubleCoverData, DoubleCoverData, Kodaira, PERMUTATIONS
from .image import ImageCount, ImageProblem, alternate_chart, count_image_points
from .piclattice import DivClass, class_to_plane_spec

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class PipelineError(RuntimeError):
    def __init__(self, step: str, message: str):
        super().__init__(f"step '{step}' failed: {message}")
        self.step = step


@dataclass
class Report:
    results: dict = field(default_factory=dict)
    log: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def record(self, step: str, op: str, value: Any, **inputs) -> Any:
        self.log.append({"step": step, "op": op, "inputs": inputs, "value": value})
        return value

    def warn(self, message: str) -> None:
        if message not in self.warnings:
            self.warnings.append(message)

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "results": self.results, "log": self.log, "warnings": self.warnings}


def thread_count() -> int:
    raw = os.environ.get("SURFINV_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"SURFINV_THREADS must be an integer >= 1, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"SURFINV_THREADS must be >= 1, got {n}")
    return n


# ---------------------------------------------------------------------------
# h0 tables


def _dimension_job(args) -> int:
    F, degree, chains = args
    return linsys.plane_system(F, degree, chains).dimension


class H0Table:
    """Memoized ``h0`` over one geometry, with an audit entry per distinct plane system."""

    def __init__(self, cfg: ExampleConfig, report: Optional[Report] = None):
        self.cfg = cfg
        self.report = report
        self._values: dict = {}
        self._names: dict = {}

    def _key(self, D: DivClass):
        spec = class_to_plane_spec(D, self.cfg.geometry)
        return (spec.degree, spec.mults), spec

    def prefetch(self, named: list, threads: int = 1) -> None:
        pending = {}
        for name, D in named:
            self._names.setdefault(D, name)
            if D.degree < 0:
                continue
            key, spec = self._key(D)
            if key not in self._values and key not in pending:
                pending[key] = (self.cfg.field, spec.degree, tuple(self.cfg.geometry.chains(spec)))
        if not pending:
            return
        keys = sorted(pending, key=lambda k: (k[0], k[1]))
        if threads > 1 and len(keys) > 1:
            with ProcessPoolExecutor(max_workers=min(threads, len(keys))) as pool:
                values = list(pool.map(_dimension_job, [pending[k] for k in keys]))
        else:
            values = [_dimension_job(pending[k]) for k in keys]
        self._values.update(zip(keys, values))

    def __call__(self, D: DivClass, name: str = "") -> int:
        name = self._names.get(D, name)
        if D.degree < 0:
            if self.report is not None:
                self.report.record("h0", "h0", 0, name=name, cls=D.to_json(), reason="negative degree")
            return 0
        key, spec = self._key(D)
        if key not in self._values:
            self._values[key] = _dimension_job((self.cfg.field, spec.degree, tuple(self.cfg.geometry.chains(spec))))
        value = self._values[key]
        if self.report is not None:
            self.report.record("h0", "h0", value, name=name, cls=D.to_json(), plane_spec=spec.to_json())
            if spec.clamped or spec.truncated:
                self.report.warn(
                    f"{name or D}: clamped {', '.join(spec.clamped) or '-'}; truncated {', '.join(spec.truncated) or '-'}"
                )
        return value


def reproduce_appendix(cfg: ExampleConfig, *, threads: Optional[int] = None, report: Optional[Report] = None) -> tuple:
    """``h0`` of the configured targets, in config order."""
    table = H0Table(cfg, report)
    table.prefetch(cfg.targets, threads or thread_count())
    return tuple(table(D, name) for name, D in cfg.targets)


# ---------------------------------------------------------------------------
# curves


def curve_system(cfg: ExampleConfig, name: str) -> linsys.PlaneSystem:
    spec = cfg.curves[name]
    return linsys.plane_system(cfg.field, spec.degree, spec.chains)


def curve_equation(cfg: ExampleConfig, name: str) -> MPoly:
    """Equation of a named curve or line; a curve must be the unique member of its system."""
    if name in cfg.lines:
        return cfg.line_equation(name)
    system = curve_system(cfg, name)
    if system.dimension != 1:
        raise PipelineError("curves", f"{name} spans a system of dimension {system.dimension}, expected 1")
    return system.sections()[0].poly.monic()


def _check_curves(cfg: ExampleConfig, report: Report) -> dict:
    out = {}
    for name, spec in cfg.curves.items():
        system = curve_system(cfg, name)
        report.record("curves", "plane_system", system.dimension, curve=name, degree=spec.degree)
        if system.dimension != 1:
            raise PipelineError("curves", f"{name}: dimension {system.dimension}, expected 1")
        F = system.sections()[0].poly
        chains = []
        for k, ch in enumerate(spec.chains):
            rep = linsys.verify_chain(F, ch)
            seq = linsys.multiplicity_sequence(F, ch)
            report.record("curves", "verify_chain", rep.ok, curve=name, chain=list(ch.mults), sequence=seq)
            if not rep.ok:
                raise PipelineError("curves", f"{name} fails chain {list(ch.mults)} (sequence {seq})")
            chains.append({"required": list(ch.mults), "actual": seq})
        out[name] = {"degree": spec.degree, "dimension": 1, "equation": str(F), "chains": chains}
    return out


def _check_intersections(cfg: ExampleConfig, report: Report, equations: Callable) -> list:
    out = []
    index = cfg.point_index
    for item in cfg.checks.get("intersections", []):
        a, b = item["curves"]
        p = cfg.geometry.points[index[item["point"]]]
        value = linsys.local_intersection(equations(a), equations(b), p)
        value = value if value != linsys.INFINITE else "inf"
        report.record("intersections", "local_intersection", value, curves=[a, b], point=item["point"])
        if value != item["value"]:
            raise PipelineError("intersections", f"I_{item['point']}({a}, {b}) = {value}, expected {item['value']}")
        out.append({"curves": [a, b], "point": item["point"], "value": value})
    return out


# ---------------------------------------------------------------------------
# image degree


def image_problem(cfg: ExampleConfig, equations: Optional[Callable] = None) -> ImageProblem:
    if cfg.image is None:
        raise PipelineError("image", "the configuration has no 'image' section")
    equations = equations or (lambda n: curve_equation(cfg, n))
    spec = cfg.image
    F = cfg.field
    J = _sections(cfg, spec["map_system"])
    G = _sections(cfg, spec["w_system"])
    if len(J) != 3:
        raise PipelineError("image", f"{spec['map_system']} has {len(J)} sections, a map to P^3 needs 3")
    if len(G) != 1:
        raise PipelineError("image", f"{spec['w_system']} has {len(G)} sections, expected exactly 1")
    divisor = MPoly.const(F, linsys.VARS, F.one)
    for n in spec["divide_by"]:
        divisor = divisor * equations(n)
    try:
        coords = tuple(s.exact_div(divisor) for s in J)
        g = G[0].exact_div(divisor)
    except ArithmeticError as exc:
        raise PipelineError("image", f"sections are not divisible by the product of {spec['divide_by']}") from exc
    f6 = MPoly.const(F, linsys.VARS, F.one)
    for n in spec["branch_curves"]:
        f6 = f6 * equations(n)
    dd = divisor.total_degree()
    degrees = (cfg.target(spec["map_system"]).degree - dd, cfg.target(spec["w_system"]).degree - dd, f6.total_degree())
    return ImageProblem(coords, g, f6, cfg.geometry.points, degrees)


def _sections(cfg: ExampleConfig, name: str) -> list:
    spec = class_to_plane_spec(cfg.target(name), cfg.geometry)
    return [s.poly for s in linsys.plane_system(cfg.field, spec.degree, cfg.geometry.chains(spec)).sections()]


def image_degree(cfg: ExampleConfig, *, tol: float = 1e-8, check_chart: bool = True, report: Optional[Report] = None) -> ImageCount:
    problem = image_problem(cfg)
    count = count_image_points(problem, tol)
    if report is not None:
        report.record("image", "count_image_points", count.to_json(), chart="z=1", tol=tol)
        if count.resultant_degree < count.bezout_bound:
            report.warn(f"resultant degree {count.resultant_degree} < {count.bezout_bound}: section points may lie at infinity")
    if check_chart:
        a, b = cfg.image.get("alternate_chart", ("1/7", "2/11"))
        alt = count_image_points(alternate_chart(problem, str(a), str(b)), tol)
        if report is not None:
            report.record("image", "count_image_points", alt.to_json(), chart=f"z - ({a})x - ({b})y = 1", tol=tol)
        if alt.image_points != count.image_points:
            raise PipelineError("image", f"alternate chart gives {alt.image_points} image points, affine chart {count.image_points}")
    return count


def bicanonical_degree(K_sq: int, image_deg: int) -> int:
    if image_deg <= 0 or (4 * K_sq) % image_deg:
        raise ValueError(f"image degree {image_deg} does not divide (2K)^2 = {4 * K_sq}")
    return 4 * K_sq // image_deg


# ---------------------------------------------------------------------------


def _expr_name(coeffs: dict) -> str:
    parts = []
    for k, v in coeffs.items():
        if v:
            parts.append(("" if v == 1 else str(v)) + k)
    return "+".join(parts)


def build_example(cfg: ExampleConfig, *, tol: float = 1e-8, with_image: bool = True, threads: Optional[int] = None) -> Report:
    report = Report()
    threads = threads or thread_count()
    R = report.results
    lat = cfg.lattice
    K = lat.canonical()
    Ls = [cfg.classes[n] for n in cfg.bidouble_L]
    Ds = [cfg.classes[n] for n in cfg.bidouble_D]
    ln = list(cfg.bidouble_L)

    try:
        bidouble = BidoubleCoverData(tuple(Ls), tuple(Ds), cfg.base_chi, cfg.base_pg)
    except covers.CoverError as exc:
        raise PipelineError("parity", str(exc)) from exc
    report.record("parity", "parity_failures", [], L=ln, D=list(cfg.bidouble_D))

    # curves and local intersections
    eq_cache: dict = {}

    def equations(name):
        if name not in eq_cache:
            eq_cache[name] = curve_equation(cfg, name)
        return eq_cache[name]

    R["curves"] = _check_curves(cfg, report)
    R["intersections"] = _check_intersections(cfg, report, equations)

    # every class whose sections are needed
    N = K * 2 + Ls[0] + Ls[1] + Ls[2]
    named = list(cfg.targets)
    extra = {}
    for g in range(3):
        Lg = Ls[g]
        extra[f"K+{ln[g]}"] = K + Lg
        extra[f"2K+{ln[g]}"] = K * 2 + Lg
        extra[f"2K+2{ln[g]}"] = (K + Lg) * 2
        extra[f"6K+6{ln[g]}"] = (K + Lg) * 6
        extra[f"N-{ln[g]}"] = N - Lg
    if cfg.fibration is not None:
        extra["fibre"] = cfg.fibration["class"]
    named += sorted(extra.items())
    table = H0Table(cfg, report)
    table.prefetch(named, threads)

    R["dimensions"] = [{"name": name, "class": D.to_json(), "h0": table(D, name)} for name, D in cfg.targets]

    def h0(D, name=""):
        return table(D, name)

    # the cover S
    bi = covers.bidouble_invariants(bidouble, lambda D: h0(D), K)
    report.record("invariants", "bidouble_invariants", bi.surface.to_json(), terms=dict(bi.terms))
    N_sq = report.record("invariants", "pair", N.square(), lhs="N", rhs="N")
    report.record("invariants", "K_V^2", bi.K_V_sq, terms=dict(bi.terms))
    h0_N = h0(N, "N")
    h0_NL = [h0(N - Lg, f"N-{ln[g]}") for g, Lg in enumerate(Ls)]
    h0_2KV = report.record("invariants", "h0(2K_V)", h0_N + sum(h0_NL), parts=[h0_N] + h0_NL)
    lower = None
    if cfg.minus_one_curves is not None:
        lower = report.record("invariants", "K^2 lower bound", N_sq + cfg.minus_one_curves, minus_one_curves=cfg.minus_one_curves)
    try:
        K_S_sq = report.record("invariants", "ks2_from_bicanonical", covers.ks2_from_bicanonical(h0_2KV, lower), h0_2K=h0_2KV)
    except covers.CoverError as exc:
        raise PipelineError("invariants", str(exc)) from exc
    s = bi.surface
    S = covers.InvariantSet(s.p_g, s.q, s.chi, K_S_sq, Kodaira.TWO if lower is not None and lower > 0 else Kodaira.UNKNOWN, s.notes)
    R["S"] = {**S.to_json(), "N_sq": N_sq, "K_V_sq": bi.K_V_sq, "h0_2K_V": h0_2KV, "K_sq_lower_bound": lower}

    # fibration by the configured pencil
    fib = None
    if cfg.fibration is not None:
        C = cfg.fibration["class"]
        fib = {
            "h0": h0(C, "fibre"),
            "self_intersection": report.record("fibration", "pair", C.square(), lhs="fibre", rhs="fibre"),
            "D_pairings": [C.pair(D) for D in Ds],
            "base_genus": cfg.fibration.get("base_genus", 0),
        }
        report.record("fibration", "pair", fib["D_pairings"], cls=C.to_json())
        if fib["h0"] == 2 and fib["self_intersection"] == 0:
            fib["genus_on_S"] = report.record(
                "fibration", "pullback_fibre_genus", covers.pullback_fibre_genus(fib["base_genus"], sum(fib["D_pairings"]), "bidouble"),
                branch_count=sum(fib["D_pairings"]), cover="bidouble",
            )
        else:
            report.warn("the configured fibration class is not a base-point-free pencil")
        R["fibration"] = fib

    # the three quotients
    quotients = {}
    for g, j, k in PERMUTATIONS:
        name = f"W{g + 1}"
        Lg = Ls[g]
        data = DoubleCoverData(cfg.base_chi, cfg.base_pg, 1 + cfg.base_pg - cfg.base_chi, Lg.pair(K + Lg), h0(K + Lg, f"K+{ln[g]}"))
        inv = covers.double_cover_invariants(data)
        report.record("quotients", "double_cover_invariants", inv.to_json(), surface=name, L_K_plus_L=data.L_K_plus_L)
        ha = h0(K * 2 + Lg + Ls[j], f"2K+{ln[g]}+{ln[j]}")
        hb = h0(K * 2 + Lg + Ls[k], f"2K+{ln[g]}+{ln[k]}")
        composed = report.record("quotients", "bicanonical_composed", covers.bicanonical_composed(ha, hb), surface=name, h0=[ha, hb])
        t = report.record("quotients", "fixed_points_from_h0", covers.fixed_points_from_h0(ha + hb), surface=name, h0_sum=ha + hb)
        P2_parts = [h0(K * 2 + Lg, f"2K+{ln[g]}"), h0((K + Lg) * 2, f"2K+2{ln[g]}")]
        P2 = report.record("quotients", "P2", sum(P2_parts), surface=name, parts=P2_parts)
        P6 = h0((K + Lg) * 6, f"6K+6{ln[g]}")
        rational_fib = False
        fibre_genus = None
        if fib is not None and fib.get("genus_on_S") is not None:
            branch = fib["D_pairings"][j] + fib["D_pairings"][k]
            fibre_genus = report.record(
                "quotients", "pullback_fibre_genus", covers.pullback_fibre_genus(fib["base_genus"], branch, "double"),
                surface=name, branch_count=branch, cover="double",
            )
            rational_fib = fibre_genus == 0 and fib["base_genus"] == 0
        verdict = covers.kodaira_rules(inv, P2, P6, rational_fibration=rational_fib)
        report.record("quotients", "kodaira_rules", verdict.to_json(), surface=name, P2=P2, P6_lower_bound=P6, rational_fibration=rational_fib)
        quotients[name] = {
            "branch": [cfg.bidouble_D[j], cfg.bidouble_D[k]],
            "L": ln[g],
            "invariants": inv.to_json(),
            "h0_2K_plus_L_pairs": [ha, hb],
            "composed": composed,
            "t": t,
            "P2": P2,
            "P6_lower_bound": P6,
            "fibre_genus": fibre_genus,
            "verdict": verdict.to_json(),
        }
    R["quotients"] = quotients
    R["composition"] = {f"i{g + 1}": quotients[f"W{g + 1}"]["composed"] for g in range(3)}
    not_composed = [q for q in quotients.values() if not q["composed"]]
    R["S"]["t"] = not_composed[0]["t"] if not_composed and len({q["t"] for q in not_composed}) == 1 else None

    if with_image and cfg.image is not None:
        count = image_degree(cfg, tol=tol, report=report)
        R["image"] = count.to_json()
        R["image_degree"] = count.image_points
        try:
            R["bicanonical_degree"] = report.record(
                "image", "bicanonical_degree", bicanonical_degree(K_S_sq, count.image_points), K_sq=K_S_sq, image_degree=count.image_points
            )
        except ValueError as exc:
            raise PipelineError("image", str(exc)) from exc
    return report
