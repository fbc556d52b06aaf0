"""Command-line entry point.

Exit codes: 0 success, 1 domain error (invalid curve, unsupported input,
failed check), 2 I/O error (missing or unparseable file).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import io
from .curve import SbvCurve, check_curve, length, validate
from .exceptions import CurveError, EnumerationLimitError, GridError, ReparamError
from .gtransform import jump_embedding
from .matching import GridConfig, correspondences, shape_distance
from .oracle import verify_relaxation
from .relax import s_hat
from .srvt import _radicand, s_functional, scale_invariant_distance
from .svg import render

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2
DEFAULT_EPS = "1e-1,1e-2,1e-3,1e-4"


class _IOFailure(Exception):
    pass


class _DomainFailure(Exception):
    pass


def _load(path: str, check: bool = True) -> SbvCurve:
    try:
        c = io.read_curve(path, validate=False)
    except (OSError, UnicodeDecodeError, io.CurveFileError) as exc:
        raise _IOFailure(f"{path}: {exc}") from exc
    except CurveError as exc:
        raise _DomainFailure(f"{path}: {exc}") from exc
    if check:
        check_curve(c)
    return c


def _envelope(command: str, paths: List[str], results: dict, **options) -> dict:
    return {
        "command": command,
        "options": options,
        "inputs": [{"path": p, "sha256": io.sha256_file(p)} for p in paths],
        "results": results,
    }


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        try:
            io.write_text(out, text)
        except OSError as exc:
            raise _IOFailure(f"{out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    c = _load(args.curve, check=False)
    problems = validate(c)
    for v in problems:
        print(str(v))
    if problems:
        return EXIT_DOMAIN
    print(f"valid: {c.n_nodes} nodes, dimension {c.dimension}, {int(c.jump_mask.sum())} jump(s)")
    return EXIT_OK


def cmd_distance(args) -> int:
    c1, c2 = _load(args.curve1), _load(args.curve2)
    l1, l2 = length(c1), length(c2)
    res = {"mode": args.mode, "length1": l1, "length2": l2}
    if args.mode == "relaxed":
        s = s_hat(c1, c2)
        sq = l1 + l2 - 2.0 * s
        res.update(s_hat=s, distance_squared=sq, distance=_radicand(l1, l2, s) ** 0.5)
    else:
        if not (c1.is_continuous and c2.is_continuous):
            raise _DomainFailure(f"mode {args.mode!r} needs curves without jumps; use relaxed")
        s = s_functional(c1, c2)
        res["s"] = s
        if args.mode == "param":
            sq = _radicand(l1, l2, s)
            res.update(distance_squared=sq, distance=sq**0.5)
        else:
            d = scale_invariant_distance(c1, c2)
            res.update(distance=d, distance_squared=d * d)
    _emit(io.dumps(_envelope("distance", [args.curve1, args.curve2], res, mode=args.mode)), args.out)
    return EXIT_OK


def cmd_shape(args) -> int:
    c1, c2 = _load(args.curve1), _load(args.curve2)
    cfg = GridConfig(n1=args.grid, n2=args.grid, window=args.window, refine_rounds=args.refine)
    m = shape_distance(c1, c2, cfg)
    res = {
        "length1": m.length1,
        "length2": m.length2,
        "s_star": m.s_star,
        "d_shape": m.d_shape,
        "d_shape_rooted": m.d_shape_rooted,
        "rounds": list(m.rounds),
        "grid_values": list(m.grid_values),
        "grid_sizes": [list(g) for g in m.grid_sizes],
        "psi1": io.reparam_to_dict(m.psi1),
        "psi2": io.reparam_to_dict(m.psi2),
        "phi1": io.reparam_to_dict(m.phi1),
        "phi2": io.reparam_to_dict(m.phi2),
        "flags": list(m.flags),
    }
    if args.samples:
        res["correspondences"] = [[p.tolist(), q.tolist()] for p, q in correspondences(m, args.samples)]
    opts = dict(grid=args.grid, window=args.window, refine=args.refine, samples=args.samples)
    _emit(io.dumps(_envelope("shape", [args.curve1, args.curve2], res, **opts)), args.out)
    return EXIT_OK


def cmd_gtransform(args) -> int:
    c = _load(args.curve)
    emb = jump_embedding(c)
    doc = io.curve_to_dict(emb.curve)
    doc.update(
        alpha=emb.alpha,
        xi=io.curve_to_dict(emb.xi),
        zeta=io.reparam_to_dict(emb.zeta),
        command="gtransform",
        inputs=[{"path": args.curve, "sha256": io.sha256_file(args.curve)}],
    )
    _emit(io.dumps(doc), args.out)
    return EXIT_OK


def _parse_eps(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise _DomainFailure(f"cannot parse --eps {text!r}") from exc


def cmd_approx_check(args) -> int:
    c1, c2 = _load(args.curve1), _load(args.curve2)
    rep = verify_relaxation(c1, c2, _parse_eps(args.eps))
    res = {
        "epsilons": list(rep.epsilons),
        "s_values": list(rep.s_values),
        "s_hat_target": rep.s_hat_target,
        "max_overshoot": rep.max_overshoot,
        "final_gap": rep.final_gap,
        "passed": rep.passed,
    }
    _emit(io.dumps(_envelope("approx-check", [args.curve1, args.curve2], res, eps=args.eps)), args.out)
    return EXIT_OK if rep.passed else EXIT_DOMAIN


def _read_chords(path: str):
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise _IOFailure(f"{path}: {exc}") from exc
    results = data.get("results", {}) if isinstance(data, dict) else {}
    chords = results.get("correspondences") if isinstance(results, dict) else None
    if chords is None:
        raise _IOFailure(f"{path}: no correspondences; run 'shape' with --samples")
    return chords


def cmd_plot(args) -> int:
    curves = [_load(p) for p in [args.curve1] + ([args.curve2] if args.curve2 else [])]
    chords = _read_chords(args.match) if args.match else None
    if args.profile and chords:
        raise _DomainFailure("correspondence overlays are not drawn in profile view")
    try:
        text = render(curves, chords, profile=args.profile)
    except ValueError as exc:
        raise _DomainFailure(str(exc)) from exc
    _emit(text, args.svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="srvbv", description="SRV distances and shape matching for curves with jumps.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a curve file")
    v.add_argument("curve")
    v.set_defaults(func=cmd_validate)

    d = sub.add_parser("distance", help="SRV, relaxed or scale-invariant distance")
    d.add_argument("curve1")
    d.add_argument("curve2")
    d.add_argument("--mode", choices=("param", "relaxed", "scale"), default="relaxed")
    d.add_argument("--out")
    d.set_defaults(func=cmd_distance)

    s = sub.add_parser("shape", help="shape distance with optimal reparametrisations")
    s.add_argument("curve1")
    s.add_argument("curve2")
    s.add_argument("--grid", type=int, default=33)
    s.add_argument("--window", type=int, default=8)
    s.add_argument("--refine", type=int, default=3)
    s.add_argument("--samples", type=int, default=0, help="number of correspondence pairs to emit")
    s.add_argument("--out")
    s.set_defaults(func=cmd_shape)

    g = sub.add_parser("gtransform", help="jump embedding of a curve")
    g.add_argument("curve")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gtransform)

    a = sub.add_parser("approx-check", help="check the relaxed similarity against a recovery sequence")
    a.add_argument("curve1")
    a.add_argument("curve2")
    a.add_argument("--eps", default=DEFAULT_EPS, help="comma separated, strictly decreasing")
    a.add_argument("--out")
    a.set_defaults(func=cmd_approx_check)

    pl = sub.add_parser("plot", help="render curves to SVG")
    pl.add_argument("curve1")
    pl.add_argument("curve2", nargs="?")
    pl.add_argument("--match", help="result file of 'shape' with correspondences")
    pl.add_argument("--svg", help="output file (stdout if omitted)")
    pl.add_argument("--profile", action="store_true", help="plot t against value for 1-d curves")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (_DomainFailure, CurveError, GridError, ReparamError, EnumerationLimitError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
