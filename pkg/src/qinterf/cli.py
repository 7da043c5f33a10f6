"""Command-line front end: ``qinterf <command> ...``.

Reports go to stdout as ``key: value`` lines (or one JSON object with
``--json``); diagnostics go to stderr. Exit codes: 0 success, 2 usage error,
3 invalid input, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

import numpy as np

from . import __version__
from . import channels, coherence, interferometer
from .errors import NumericError, ValidationError
from .fileio import (
    digest,
    emit_pattern_csv,
    fmt,
    parse_channel,
    parse_state,
    write_channel,
)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3, 4


class Report:
    """Ordered key/value report; floats are rendered with 12 decimals."""

    def __init__(self, argv: list[str]):
        self.items: list[tuple[str, Any]] = [("command", " ".join(argv))]

    def add(self, key: str, value: Any) -> None:
        self.items.append((key, value))

    def number(self, key: str, x: float) -> None:
        self.items.append((key, float(x)))

    def vector(self, key: str, v: np.ndarray) -> None:
        self.items.append((key, [complex(z) for z in np.asarray(v)]))

    def render(self, as_json: bool) -> str:
        items = [*self.items, ("version", __version__)]
        if as_json:
            return json.dumps({k: _json_value(v) for k, v in items}, indent=2) + "\n"
        return "".join(f"{k}: {_text_value(v)}\n" for k, v in items)


def _text_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return fmt(v)
    if isinstance(v, list):
        return " ".join(f"({fmt(z.real)},{fmt(z.imag)})" for z in v)
    return str(v)


def _json_value(v):
    if isinstance(v, float):
        return float(fmt(v))
    if isinstance(v, list):
        return [[float(fmt(z.real)), float(fmt(z.imag))] for z in v]
    return v


def _load(report: Report, label: str, path: str) -> channels.KrausChannel:
    ch = parse_channel(path)
    report.add(f"input.{label}", f"{path} sha256={digest(path)}")
    return ch


def _rho(report: Report, spec: str, d: int) -> channels.DensityMatrix:
    if spec == "mixed":
        report.add("rho", "mixed")
        return channels.DensityMatrix.maximally_mixed(d)
    if spec.startswith("pure:"):
        path = spec[len("pure:"):]
        rho = parse_state(path)
        if rho.dim != d:
            raise ValidationError(f"state dimension {rho.dim} != channel dimension {d}")
        report.add("rho", f"pure {path} sha256={digest(path)}")
        return rho
    raise ValidationError(f"--rho must be 'mixed' or 'pure:FILE', got {spec!r}")


def cmd_pattern(args, report: Report, out) -> None:
    chU = _load(report, "u", args.u)
    chV = _load(report, "v", args.v)
    rho = _rho(report, args.rho, chU.dim)
    if args.oracle:
        p = interferometer.simulate_pattern_dilated(
            channels.dilate(chU), channels.dilate(chV), rho, args.samples
        )
    else:
        p = interferometer.simulate_pattern(chU, chV, rho, args.samples)
    if args.out == "-":
        emit_pattern_csv(p, out)
        return
    emit_pattern_csv(p, args.out)
    est = interferometer.extract_visibility(p)
    report.add("method", "dilated" if args.oracle else "kraus")
    report.add("samples", len(p))
    report.add("output", args.out)
    report.number("v", est.v)
    report.number("alpha", est.alpha)
    report.add("degenerate", est.degenerate)


def cmd_visibility(args, report: Report, out) -> None:
    chU = _load(report, "u", args.u)
    chV = _load(report, "v", args.v)
    rho = _rho(report, args.rho, chU.dim)
    z = interferometer.complex_visibility(chU, chV, rho)
    degenerate = abs(z) < interferometer.DEGENERATE_VIS
    report.number("v", abs(z))
    report.number("alpha", 0.0 if degenerate else interferometer.wrap_phase(np.angle(z)))
    report.add("degenerate", degenerate)


def cmd_self(args, report: Report, out) -> None:
    ch = _load(report, "ch", args.ch)
    report.number("self_visibility", coherence.self_visibility(ch))
    if args.maximize:
        res = coherence.max_self_coherence(ch)
        report.number("v_max", res.v_max)
        if args.out:
            write_channel(res.realizing, args.out, name="max-self-coherence decomposition")
            report.add("output", args.out)


def cmd_closest_unitary(args, report: Report, out) -> None:
    ch = _load(report, "ch", args.ch)
    if args.after_maximize:
        ch = coherence.max_self_coherence(ch).realizing
    res = coherence.closest_unitary(ch)
    write_channel(channels.unitary_channel(res.unitary), args.out, name="closest unitary")
    report.add("after_maximize", bool(args.after_maximize))
    report.add("output", args.out)
    report.number("v_self", coherence.self_visibility(ch))
    report.number("v_unitary", res.visibility)
    report.add("degenerate", res.degenerate)


def cmd_max_fidelity(args, report: Report, out) -> None:
    chU = _load(report, "u", args.u)
    chV = _load(report, "v", args.v)
    res = coherence.max_coherent_fidelity(chU, chV)
    report.number("max_fidelity", res.max_fidelity)
    report.vector("g0", res.g0)
    report.vector("h0", res.h0)
    report.add("degenerate", res.degenerate)


def cmd_raginsky(args, report: Report, out) -> None:
    chU = _load(report, "u", args.u)
    chV = _load(report, "v", args.v)
    report.number("raginsky_fidelity", coherence.raginsky_fidelity(chU, chV))


def cmd_distance(args, report: Report, out) -> None:
    chU = _load(report, "u", args.u)
    chV = _load(report, "v", args.v)
    for label, ch in (("u", chU), ("v", chV)):
        if len(ch) != 1:
            raise ValidationError(f"--{label} must be a single-Kraus (unitary) channel")
    d2 = interferometer.unitary_distance(chU.first, chV.first)
    rho = channels.DensityMatrix.maximally_mixed(chU.dim)
    z = interferometer.complex_visibility(chU, chV, rho)
    report.number("distance_squared", d2)
    report.number("v", abs(z))
    report.number("alpha", interferometer.wrap_phase(np.angle(z)) if abs(z) >= 1e-12 else 0.0)


def cmd_random(args, report: Report, out) -> None:
    ch = channels.random_channel(args.dim, args.kraus, args.seed)
    meta = {"generator": "random_channel", "seed": args.seed}
    write_channel(ch, args.out, name=f"random d={args.dim} k={args.kraus}", metadata=meta)
    report.add("output", args.out)
    report.add("dim", args.dim)
    report.add("kraus", args.kraus)
    report.add("seed", args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qinterf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def pair(p):
        p.add_argument("--u", required=True, metavar="CH", help="channel in the upper (phase) arm")
        p.add_argument("--v", required=True, metavar="CH", help="channel in the lower arm")

    def common(p):
        p.add_argument("--json", action="store_true", help="emit the report as JSON")

    p = sub.add_parser("pattern", help="sample P0(phi) to CSV")
    pair(p)
    p.add_argument("--rho", default="mixed", help="'mixed' (I/d) or 'pure:FILE'")
    p.add_argument("--samples", type=int, default=interferometer.DEFAULT_SAMPLES)
    p.add_argument("--oracle", action="store_true", help="use the full dilation-space simulation")
    p.add_argument("--out", required=True, help="CSV path, or '-' for stdout")
    common(p)
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("visibility", help="visibility and fringe shift")
    pair(p)
    p.add_argument("--rho", default="mixed")
    common(p)
    p.set_defaults(func=cmd_visibility)

    p = sub.add_parser("self", help="self-visibility of a decomposition")
    p.add_argument("--ch", required=True)
    p.add_argument("--maximize", action="store_true", help="also report the maximum over decompositions")
    p.add_argument("--out", help="write the maximizing decomposition here (with --maximize)")
    common(p)
    p.set_defaults(func=cmd_self)

    p = sub.add_parser("closest-unitary", help="visibility-maximizing unitary")
    p.add_argument("--ch", required=True)
    p.add_argument("--after-maximize", action="store_true", help="first pass to the maximal decomposition")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_closest_unitary)

    p = sub.add_parser("max-fidelity", help="maximum coherent fidelity of two channels")
    pair(p)
    common(p)
    p.set_defaults(func=cmd_max_fidelity)

    p = sub.add_parser("raginsky", help="Uhlmann fidelity of the Choi states")
    pair(p)
    common(p)
    p.set_defaults(func=cmd_raginsky)

    p = sub.add_parser("distance", help="squared Hilbert-Schmidt distance of two unitary channels")
    pair(p)
    common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("random", help="write a seeded random channel")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--kraus", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_random)
    return parser


def run(argv: list[str], stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    report = Report(list(argv))
    try:
        args.func(args, report, stdout)
    except ValidationError as exc:
        print(f"qinterf: invalid input: {exc}", file=stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"qinterf: {exc}", file=stderr)
        return EXIT_INVALID
    except (NumericError, np.linalg.LinAlgError) as exc:
        print(f"qinterf: numeric failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    if not (args.command == "pattern" and args.out == "-"):
        stdout.write(report.render(args.json))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)
