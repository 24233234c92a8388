"""``surfinv`` command line.

Exit status is 0 on success, 1 when the configuration is invalid or a
computation fails, and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from . import classify, linsys
from .config import ConfigError, ExampleConfig, load_config
from .covers import CoverError
from .piclattice import class_to_plane_spec
from .pipeline import SCHEMA_VERSION, PipelineError, build_example, image_degree, reproduce_appendix, thread_count

__all__ = ["main", "load_config", "dump_json"]


def dump_json(payload: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **payload}, sort_keys=True, indent=2, ensure_ascii=False)


# ---------------------------------------------------------------------------
# subcommands; each returns (json payload, text lines)


def cmd_linsys(cfg: ExampleConfig, args) -> tuple[dict, list]:
    if args.target:
        D = cfg.target(args.target)
        spec = class_to_plane_spec(D, cfg.geometry)
        degree, chains, what = spec.degree, cfg.geometry.chains(spec), args.target
    elif args.curve:
        if args.curve not in cfg.curves:
            raise ConfigError([("/curves", f"unknown curve {args.curve!r}")])
        c = cfg.curves[args.curve]
        degree, chains, what = c.degree, c.chains, args.curve
    else:
        mults = json.loads(args.mults) if args.mults else []
        if len(mults) > len(cfg.geometry.points):
            raise ConfigError([("", f"--mults lists {len(mults)} chains but there are {len(cfg.geometry.points)} points")])
        degree, what = args.degree, "plane system"
        chains = [cfg.geometry.chain(k, m) for k, m in enumerate(mults)]
    system = linsys.plane_system(cfg.field, degree, chains)
    sections = [str(s.poly) for s in system.sections()]
    payload = {
        "system": what,
        "degree": degree,
        "chains": [list(ch.mults) for ch in chains],
        "dimension": system.dimension,
        "sections": sections,
    }
    lines = [f"{what}: degree {degree}, dimension {system.dimension}"] + [f"  {s}" for s in sections]
    return payload, lines


def cmd_reproduce(cfg: ExampleConfig, args) -> tuple[dict, list]:
    values = reproduce_appendix(cfg)
    names = [n for n, _ in cfg.targets]
    return {"h0": dict(zip(names, values)), "order": names, "vector": list(values)}, [" ".join(map(str, values))]


def cmd_invariants(cfg: ExampleConfig, args) -> tuple[dict, list]:
    report = build_example(cfg, with_image=False)
    R = report.results
    payload = {k: R[k] for k in ("S", "quotients", "composition", "fibration") if k in R}
    payload["log"] = report.log
    payload["warnings"] = report.warnings
    return payload, _invariant_lines(R)


def _invariant_lines(R: dict) -> list:
    S = R["S"]
    out = [
        f"S: chi={S['chi']} p_g={S['p_g']} q={S['q']} K^2={S['K_sq']} N^2={S['N_sq']} h0(2K_V)={S['h0_2K_V']} t={S['t']}",
    ]
    for name, q in R["quotients"].items():
        v = q["verdict"]
        out.append(
            f"{name}: chi={q['invariants']['chi']} p_g={q['invariants']['p_g']} P2={q['P2']} P6>={q['P6_lower_bound']} "
            f"t={q['t']} composed={'yes' if q['composed'] else 'no'} -> {v['label']} [{', '.join(v['fired'])}]"
        )
    if "fibration" in R and "genus_on_S" in R["fibration"]:
        out.append(f"fibration: C.D = {R['fibration']['D_pairings']}, genus on S = {R['fibration']['genus_on_S']}")
    return out


def cmd_classify(cfg: Optional[ExampleConfig], args) -> tuple[dict, list]:
    cases = classify.enumerate_quotient_kodaira(args.h0)
    payload: dict = {"h0": args.h0, "quotient_cases": [c.to_json() for c in cases]}
    lines = [f"h0(2K_W+L) = {args.h0}, t = {cases[0].t}"]
    for c in cases:
        status = "admissible" if c.admissible else "excluded"
        lines.append(f"  Kod {c.kodaira} ({c.label}): {status}" + (f"; {c.reason}" if c.reason else ""))
    if args.h0 == 1:
        shapes = classify.enumerate_branch_shapes()
        fibres = classify.enumerate_multiple_fibres()
        payload["branch_shapes"] = [c.to_json() for c in shapes]
        payload["multiple_fibres"] = [f.to_json() for f in fibres]
        lines.append("branch curve components:")
        for c in shapes:
            lines.append(f"  {c.label}) K_W^2={c.K_W_sq} Gamma^2={c.gamma_sq} g(Gamma)={c.gamma_genus} l={c.l}")
        lines.append("multiple fibres of the elliptic fibration:")
        for f in fibres:
            lines.append(f"  {tuple(f.mults)}: B.F={f.BF} genus={f.genus}")
    return payload, lines


def cmd_image(cfg: ExampleConfig, args) -> tuple[dict, list]:
    count = image_degree(cfg, tol=args.tol)
    payload = count.to_json()
    lines = [
        f"image degree {count.image_points}",
        f"  numeric: {count.numeric_image_points} clusters at tol {args.tol:g}; exact eliminant squarefree degree {count.eliminant_squarefree_degree}",
        f"  {count.plane_points} plane points, {count.preimages} preimages",
    ]
    return payload, lines


def cmd_full(cfg: ExampleConfig, args) -> tuple[dict, list]:
    report = build_example(cfg, tol=args.tol)
    R = report.results
    lines = ["h0: " + " ".join(f"{d['name']}={d['h0']}" for d in R["dimensions"])]
    for name, c in R["curves"].items():
        lines.append(f"{name}: degree {c['degree']}, chains " + " ".join(str(ch["actual"]) for ch in c["chains"]))
    for it in R["intersections"]:
        lines.append(f"I_{it['point']}({it['curves'][0]}, {it['curves'][1]}) = {it['value']}")
    lines += _invariant_lines(R)
    if "image_degree" in R:
        lines.append(f"image degree {R['image_degree']}, bicanonical degree {R['bicanonical_degree']}")
    lines += [f"warning: {w}" for w in report.warnings]
    return report.to_dict(), lines


COMMANDS = {
    "linsys": cmd_linsys,
    "reproduce-appendix": cmd_reproduce,
    "invariants": cmd_invariants,
    "classify": cmd_classify,
    "image-degree": cmd_image,
    "full-report": cmd_full,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="configuration JSON (default: the shipped example)")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="surfinv", description="Invariants of a bidouble cover of a blown-up plane.")
    sub = p.add_subparsers(dest="command", required=True)

    ls = sub.add_parser("linsys", parents=[common], help="dimension and sections of one plane system")
    grp = ls.add_mutually_exclusive_group(required=True)
    grp.add_argument("--target", help="named h0 target from the configuration")
    grp.add_argument("--curve", help="named curve from the configuration")
    grp.add_argument("--degree", type=int, help="plane degree; pair with --mults")
    ls.add_argument("--mults", help='JSON list of chains per point, e.g. "[[1],[2,2]]"')

    sub.add_parser("reproduce-appendix", parents=[common], help="h0 of every configured target")
    sub.add_parser("invariants", parents=[common], help="invariants of the cover and its quotients")
    cl = sub.add_parser("classify", parents=[common], help="case tables for the quotient by an involution")
    cl.add_argument("--h0", type=int, choices=(0, 1), default=1, help="value of h0(2K_W + L)")
    for name, text in (("image-degree", "degree of the bicanonical image"), ("full-report", "every step of the worked example")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("--tol", type=float, default=1e-8, help="numeric clustering tolerance")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "linsys" and args.degree is None and args.mults:
        parser.print_usage(sys.stderr)
        print("surfinv: error: --mults requires --degree", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")

    try:
        thread_count()
        cfg = None if args.command == "classify" else load_config(args.config)
        payload, lines = COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        for pointer, message in exc.errors:
            print(f"config error at {pointer or '/'}: {message}", file=sys.stderr)
        return 1
    except (PipelineError, CoverError, ArithmeticError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = dump_json({"command": args.command, **payload}) if args.json else "\n".join(lines)
    sys.stdout.write(out + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
