"""Deterministic JSON serialization and the check orchestration behind ``nwbf check``."""

from __future__ import annotations

import json
import math
from typing import Dict, Tuple

from .characterization import CheckReport, check_nwbf
from .config import RunConfig, build_generators, build_omega
from .frames import bessel_bound

FORMAT_VERSION = 1


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if math.isnan(obj):
            return '"nan"'
        if math.isinf(obj):
            return '"inf"' if obj > 0 else '"-inf"'
        text = format(obj, ".17g")
        # keep floats recognisable as floats after a round trip
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}{_encode(str(k), indent, level + 1)}: {_encode(v, indent, level + 1)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalars
        return _encode(obj.item(), indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with insertion-ordered keys and 17-significant-digit floats."""
    return _encode(obj, indent, 0) + "\n"


def run(config: RunConfig) -> Tuple[CheckReport, str]:
    """Run every check for ``config``; returns the report and its JSON document."""
    grid = config.grid
    primal = build_generators(config.primal, grid, config.s, "primal", config.base_dir)
    dual = build_generators(config.dual if config.dual is not None else config.primal,
                            grid, config.s, "dual", config.base_dir)
    omega = build_omega(config.omega, grid)
    report = check_nwbf(primal, dual, omega, config.ranges, config.tolerances,
                        n_pairs=config.test_pairs, seed=config.seed)
    doc = {"format": FORMAT_VERSION, "config": config.to_dict(), "report": report.to_dict()}
    return report, dumps(doc)


def bounds(config: RunConfig) -> Dict:
    """Frame bounds C (lower) and D (upper) for both sides of ``config``."""
    grid = config.grid
    primal = build_generators(config.primal, grid, config.s, "primal", config.base_dir)
    dual = build_generators(config.dual if config.dual is not None else config.primal,
                            grid, config.s, "dual", config.base_dir)
    omega = build_omega(config.omega, grid)
    out = {"ranges": {"J_max": config.ranges.J_max, "K_max": config.ranges.K_max}, "s": config.s}
    for side, gen in (("primal", primal), ("dual", dual)):
        b = bessel_bound(gen, config.ranges, omega)
        out[side] = {"C": b.lower, "D": b.upper, "rank": b.rank}
    return out
