"""Channel/state files, pattern CSV and report formatting.

A channel file is JSON::

    {"dim": 2,
     "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]],
     "name": "identity",          # optional
     "metadata": {...}}           # optional

Every complex entry is a two-element ``[re, im]`` array. A state file is
either a bare list of ``[re, im]`` amplitudes or ``{"state": [...]}``
(with an optional ``"dim"`` that must match).
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .channels import DensityMatrix, KrausChannel
from .errors import ParseError, SchemaError, ValidationError
from .interferometer import InterferencePattern

CHANNEL_KEYS = {"dim", "kraus", "name", "metadata"}
STATE_NORM_TOL = 1e-9


def _reject_constant(name: str):
    raise ParseError(f"non-finite literal {name} is not allowed")


def _load_json(source) -> Any:
    text = _read_source(source)
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _read_source(source) -> str:
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    if isinstance(source, str) and not source.lstrip().startswith(("{", "[")):
        return Path(source).read_text(encoding="utf-8")
    return source


def _complex(entry, where: str) -> complex:
    if (
        not isinstance(entry, list)
        or len(entry) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
    ):
        raise SchemaError(f"{where}: expected [re, im] pair of numbers, got {entry!r}")
    re, im = entry
    if not (math.isfinite(re) and math.isfinite(im)):
        raise SchemaError(f"{where}: non-finite value")
    return complex(re, im)


def _matrix(raw, d: int, where: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != d:
        raise SchemaError(f"{where}: expected {d} rows")
    out = np.empty((d, d), dtype=complex)
    for r, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != d:
            raise SchemaError(f"{where} row {r}: expected {d} entries")
        for c, entry in enumerate(row):
            out[r, c] = _complex(entry, f"{where}[{r}][{c}]")
    return out


def parse_channel_data(data) -> KrausChannel:
    if not isinstance(data, dict):
        raise SchemaError("channel file must be a JSON object")
    missing = {"dim", "kraus"} - data.keys()
    extra = data.keys() - CHANNEL_KEYS
    if missing:
        raise SchemaError(f"missing field(s): {', '.join(sorted(missing))}")
    if extra:
        raise SchemaError(f"unknown field(s): {', '.join(sorted(extra))}")
    d = data["dim"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise SchemaError(f"dim must be a positive integer, got {d!r}")
    if not isinstance(data["kraus"], list) or not data["kraus"]:
        raise SchemaError("kraus must be a non-empty list of matrices")
    if "name" in data and not isinstance(data["name"], str):
        raise SchemaError("name must be a string")
    if "metadata" in data and not isinstance(data["metadata"], dict):
        raise SchemaError("metadata must be an object")
    ops = [_matrix(m, d, f"kraus[{i}]") for i, m in enumerate(data["kraus"])]
    return KrausChannel(d, tuple(ops))


def parse_channel(source) -> KrausChannel:
    """Read a channel from a path or from JSON text; Kraus order is kept as listed."""
    return parse_channel_data(_load_json(source))


def channel_to_data(ch: KrausChannel, name: str | None = None, metadata: dict | None = None) -> dict:
    data: dict[str, Any] = {"dim": ch.dim}
    if name is not None:
        data["name"] = name
    data["kraus"] = [
        [[[float(z.real), float(z.imag)] for z in row] for row in op] for op in ch.ops
    ]
    if metadata:
        data["metadata"] = metadata
    return data


def serialize_channel(ch: KrausChannel, name: str | None = None, metadata: dict | None = None) -> str:
    # json writes floats with repr, so values round-trip exactly
    return json.dumps(channel_to_data(ch, name, metadata)) + "\n"


def write_channel(ch: KrausChannel, path, name: str | None = None, metadata: dict | None = None) -> None:
    Path(path).write_text(serialize_channel(ch, name, metadata), encoding="utf-8", newline="\n")


def parse_state(source) -> DensityMatrix:
    """Pure state from a ``[re, im]`` amplitude list; the norm must be 1 within 1e-9."""
    data = _load_json(source)
    if isinstance(data, dict):
        extra = data.keys() - {"dim", "state"}
        if "state" not in data or extra:
            raise SchemaError("state file object must have a 'state' field and optional 'dim'")
        amps, dim = data["state"], data.get("dim")
    else:
        amps, dim = data, None
    if not isinstance(amps, list) or not amps:
        raise SchemaError("state must be a non-empty list of [re, im] pairs")
    psi = np.array([_complex(a, f"state[{i}]") for i, a in enumerate(amps)])
    if dim is not None and dim != psi.size:
        raise SchemaError(f"dim {dim!r} does not match {psi.size} amplitudes")
    return DensityMatrix.pure(psi, normalize_tol=STATE_NORM_TOL)


def emit_pattern_csv(p: InterferencePattern, path_or_stream) -> None:
    """Write ``phi,p0`` rows (15 significant digits, LF endings, ascending phi)."""
    def write(stream):
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(["phi", "p0"])
        for phi, p0 in zip(p.phases, p.probabilities):
            w.writerow([f"{phi:.15g}", f"{p0:.15g}"])

    if hasattr(path_or_stream, "write"):
        write(path_or_stream)
    else:
        with open(path_or_stream, "w", encoding="utf-8", newline="") as fh:
            write(fh)


def read_pattern_csv(path) -> InterferencePattern:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["phi", "p0"]:
        raise SchemaError("pattern CSV must start with a 'phi,p0' header")
    try:
        vals = np.array([[float(a), float(b)] for a, b in rows[1:]])
    except ValueError as exc:
        raise ParseError(f"bad number in pattern CSV: {exc}") from exc
    return InterferencePattern(vals[:, 0], vals[:, 1])


def fmt(x: float) -> str:
    """Fixed 12-decimal rendering used in reports; never prints negative zero."""
    s = f"{x:.12f}"
    return s[1:] if s.startswith("-") and float(s) == 0.0 else s


def digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
