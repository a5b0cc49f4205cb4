"""
Run configuration: JSON parsing, validation and generator construction.

Example::

    {
      "field": {"p": 2, "c": 1},
      "grid": {"M": 3, "N": 3},
      "ranges": {"J_max": 2, "K_max": 8},
      "s": 0.0,
      "primal": {"name": "haar"},
      "dual": null,
      "omega": "full",
      "tolerances": {"unitary": 1e-12, "identity": 1e-10},
      "seed": 0,
      "test_pairs": 20
    }

``dual: null`` means the dual uses the primal's spectra.  Generator specs
are ``{"name": "haar"}``, ``{"name": "scaled", "base": <spec>, "factors":
{"1": 2.0}}``, ``{"name": "phased", "base": <spec>, "seed": 3}``,
``{"name": "weighted", "base": <spec>, "seed": 3, "side": "primal"}``,
``{"name": "shifted", "base": <spec>, "ell": 1, "by": 1}`` and
``{"name": "file", "psi0": "a.csv", "psis": ["b.csv"]}``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import generators
from .analysis import Grid, OmegaSet
from .characterization import DEFAULT_TOLERANCES
from .errors import ConfigError, NWBFError
from .finite_field import FieldSpec
from .frames import GeneratorSet, Ranges

BUILTINS = ("haar", "scaled", "phased", "weighted", "shifted", "file")
OMEGA_NAMES = ("full", "empty", "nonzero")


@dataclass
class RunConfig:
    field: FieldSpec
    grid: Grid
    ranges: Ranges
    s: float
    primal: Dict
    dual: Optional[Dict]
    omega: object
    tolerances: Dict[str, float]
    seed: int = 0
    test_pairs: int = 20
    base_dir: Path = field(default_factory=Path.cwd, repr=False)

    def to_dict(self) -> Dict:
        """Normalised JSON form; file paths are made absolute."""
        return {
            "field": {"p": self.field.p, "c": self.field.c,
                      "modulus": list(self.field.modulus) if self.field.c > 1 else None},
            "grid": {"M": self.grid.M, "N": self.grid.N},
            "ranges": {"J_max": self.ranges.J_max, "K_max": self.ranges.K_max},
            "s": self.s,
            "primal": _absolute_paths(self.primal, self.base_dir),
            "dual": _absolute_paths(self.dual, self.base_dir) if self.dual is not None else None,
            "omega": self.omega,
            "tolerances": dict(self.tolerances),
            "seed": self.seed,
            "test_pairs": self.test_pairs,
        }


def _absolute_paths(spec, base: Path):
    if not isinstance(spec, dict):
        return spec
    out = {}
    for key, val in spec.items():
        if spec.get("name") == "file" and key == "psi0":
            out[key] = str((base / val).resolve())
        elif spec.get("name") == "file" and key == "psis":
            out[key] = [str((base / v).resolve()) for v in val]
        elif isinstance(val, dict):
            out[key] = _absolute_paths(val, base)
        else:
            out[key] = val
    return out


def _int(section: Dict, key: str, where: str, errors: List[str], minimum=None, default=None):
    val = section.get(key, default)
    if isinstance(val, bool) or not isinstance(val, int):
        errors.append(f"{where}.{key}: expected an integer, got {val!r}")
        return None
    if minimum is not None and val < minimum:
        errors.append(f"{where}.{key}: must be >= {minimum}, got {val}")
        return None
    return val


def _check_generator(spec, where: str, errors: List[str], L_hint: int):
    if not isinstance(spec, dict) or "name" not in spec:
        errors.append(f"{where}: expected an object with a 'name' key")
        return
    name = spec["name"]
    if name not in BUILTINS:
        errors.append(f"{where}.name: unknown generator {name!r}; builtins are {', '.join(BUILTINS)}")
        return
    if name in ("scaled", "phased", "weighted", "shifted"):
        if "base" not in spec:
            errors.append(f"{where}: '{name}' needs a 'base' generator")
        else:
            _check_generator(spec["base"], f"{where}.base", errors, L_hint)
    if name == "scaled":
        factors = spec.get("factors")
        if not isinstance(factors, dict):
            errors.append(f"{where}.factors: expected an object mapping generator index to factor")
        else:
            for key, val in factors.items():
                if not str(key).isdigit() or int(key) > L_hint:
                    errors.append(f"{where}.factors: bad generator index {key!r} (0..{L_hint})")
                if not isinstance(val, (int, float)) or isinstance(val, bool):
                    errors.append(f"{where}.factors[{key}]: expected a number")
    if name in ("phased", "weighted") and not isinstance(spec.get("seed", 0), int):
        errors.append(f"{where}.seed: expected an integer")
    if name == "weighted" and spec.get("side", "primal") not in ("primal", "dual"):
        errors.append(f"{where}.side: expected 'primal' or 'dual'")
    if name == "shifted":
        ell, by = spec.get("ell"), spec.get("by")
        if not isinstance(ell, int) or not 0 <= ell <= L_hint:
            errors.append(f"{where}.ell: expected a generator index in 0..{L_hint}")
        if not isinstance(by, int) or by < 0:
            errors.append(f"{where}.by: expected a nonnegative lattice index")
    if name == "file":
        if not isinstance(spec.get("psi0"), str):
            errors.append(f"{where}.psi0: expected a CSV path")
        psis = spec.get("psis", [])
        if not isinstance(psis, list) or not all(isinstance(v, str) for v in psis):
            errors.append(f"{where}.psis: expected a list of CSV paths")


def parse_config(data: Dict, base_dir: Path = None) -> RunConfig:
    """Validate a config mapping, collecting every violation before raising."""
    base_dir = Path(base_dir or Path.cwd())
    errors: List[str] = []
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    known = {"field", "grid", "ranges", "s", "primal", "dual", "omega", "tolerances", "seed", "test_pairs"}
    for key in data:
        if key not in known:
            errors.append(f"unknown key {key!r}")

    fsec = data.get("field", {})
    spec = None
    if not isinstance(fsec, dict):
        errors.append("field: expected an object")
    else:
        p = _int(fsec, "p", "field", errors, minimum=2)
        c = _int(fsec, "c", "field", errors, minimum=1, default=1)
        modulus = fsec.get("modulus")
        if p is not None and c is not None:
            try:
                spec = FieldSpec(p, c, tuple(modulus) if modulus else None)
            except (NWBFError, TypeError) as exc:
                errors.append(f"field: {exc}")

    gsec = data.get("grid", {})
    grid = None
    M = _int(gsec, "M", "grid", errors, minimum=1) if isinstance(gsec, dict) else None
    N = _int(gsec, "N", "grid", errors, minimum=1) if isinstance(gsec, dict) else None
    if spec is not None and M is not None and N is not None:
        if spec.q ** (M + N) > 4096:
            errors.append(f"grid: q^(M+N) = {spec.q ** (M + N)} cells exceeds the 4096-cell limit")
        else:
            grid = Grid(spec, M, N)

    rsec = data.get("ranges", {})
    ranges = None
    if grid is not None:
        rsec = rsec if isinstance(rsec, dict) else {}
        J = _int(rsec, "J_max", "ranges", errors, minimum=0, default=grid.M - 1)
        K = _int(rsec, "K_max", "ranges", errors, minimum=1, default=grid.q ** grid.N)
        if J is not None and J > M + N - 2:
            errors.append(f"ranges.J_max: must be <= M + N - 2 = {M + N - 2}, got {J}")
        if K is not None and K > grid.q ** grid.N:
            errors.append(f"ranges.K_max: must be <= q^N = {grid.q ** grid.N}, got {K}")
        if J is not None and K is not None and J <= M + N - 2 and K <= grid.q ** grid.N:
            ranges = Ranges(J, K)

    s = data.get("s", 0.0)
    if isinstance(s, bool) or not isinstance(s, (int, float)):
        errors.append(f"s: expected a number, got {s!r}")
        s = 0.0

    L_hint = spec.q - 1 if spec is not None else 0
    if "primal" not in data:
        errors.append("primal: missing generator spec")
    else:
        _check_generator(data["primal"], "primal", errors, max(L_hint, 16))
    if data.get("dual") is not None:
        _check_generator(data["dual"], "dual", errors, max(L_hint, 16))

    omega = data.get("omega", "full")
    if isinstance(omega, str):
        if omega not in OMEGA_NAMES:
            errors.append(f"omega: unknown set {omega!r}; expected one of {', '.join(OMEGA_NAMES)} or {{'cells': [...]}}")
    elif isinstance(omega, dict):
        cells = omega.get("cells")
        if not isinstance(cells, list) or not all(isinstance(c, int) for c in cells):
            errors.append("omega.cells: expected a list of cell indices")
        elif grid is not None and any(not 0 <= c < grid.size for c in cells):
            errors.append(f"omega.cells: indices must lie in 0..{grid.size - 1}")
    else:
        errors.append("omega: expected a name or an object")

    tol = dict(DEFAULT_TOLERANCES)
    tsec = data.get("tolerances", {})
    if not isinstance(tsec, dict):
        errors.append("tolerances: expected an object")
    else:
        for key, val in tsec.items():
            if key not in tol:
                errors.append(f"tolerances.{key}: unknown tolerance")
            elif isinstance(val, bool) or not isinstance(val, (int, float)) or val <= 0:
                errors.append(f"tolerances.{key}: expected a positive number")
            else:
                tol[key] = float(val)

    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        errors.append("seed: expected an integer")
    pairs = data.get("test_pairs", 20)
    if isinstance(pairs, bool) or not isinstance(pairs, int) or pairs < 0:
        errors.append("test_pairs: expected a nonnegative integer")

    if errors:
        raise ConfigError(errors)
    return RunConfig(spec, grid, ranges, float(s), data["primal"], data.get("dual"), omega, tol,
                     seed, pairs, base_dir)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return parse_config(data, path.parent)
    except ConfigError as exc:
        raise ConfigError([f"{path}:{_line_of(text, v)}: {v}" for v in exc.violations]) from None


def _line_of(text: str, violation: str) -> int:
    """Best-effort line of the key a violation names, e.g. ``ranges.K_max``."""
    head = violation.split(":", 1)[0]
    line = 1
    lines = text.splitlines()
    start = 0
    for key in re.findall(r"[A-Za-z_][A-Za-z0-9_]*", head):
        pattern = re.compile(r'"' + re.escape(key) + r'"\s*:')
        for i in range(start, len(lines)):
            if pattern.search(lines[i]):
                line, start = i + 1, i
                break
    return line


def build_spectra(spec: Dict, grid: Grid, base_dir: Path = Path(".")) -> list:
    name = spec["name"]
    if name == "haar":
        return generators.haar_spectra(grid)
    if name == "file":
        paths = [spec["psi0"], *spec.get("psis", [])]
        return [generators.read_spectrum_csv(Path(base_dir) / p, grid) for p in paths]
    base = build_spectra(spec["base"], grid, base_dir)
    if name == "scaled":
        factors = {int(k): float(v) for k, v in spec["factors"].items()}
        if any(k >= len(base) for k in factors):
            raise ConfigError(f"scaled: generator index out of range (have {len(base)} spectra)")
        return generators.scaled(base, factors)
    if name == "phased":
        return generators.phased(base, spec.get("seed", 0))
    if name == "weighted":
        return generators.weighted(base, spec.get("seed", 0), spec.get("side", "primal"))
    if name == "shifted":
        if spec["ell"] >= len(base):
            raise ConfigError(f"shifted: generator index {spec['ell']} out of range")
        return generators.shifted(base, spec["ell"], spec["by"])
    raise ConfigError(f"unknown generator {name!r}; builtins are {', '.join(BUILTINS)}")


def build_generators(spec: Dict, grid: Grid, s: float, side: str = "primal",
                     base_dir: Path = Path(".")) -> GeneratorSet:
    """GeneratorSet for ``side``; the dual side gets exponent -s."""
    spectra = build_spectra(spec, grid, base_dir)
    if side == "dual":
        return GeneratorSet.dual_of(spectra[0], spectra[1:], s)
    return GeneratorSet(spectra[0], spectra[1:], s)


def build_omega(spec, grid: Grid) -> OmegaSet:
    if spec == "full":
        return OmegaSet.full(grid)
    if spec == "empty":
        return OmegaSet.empty(grid)
    if spec == "nonzero":
        member = np.ones(grid.size, dtype=bool)
        member[0] = False
        return OmegaSet(grid, member)
    member = np.zeros(grid.size, dtype=bool)
    member[spec["cells"]] = True
    try:
        return OmegaSet(grid, member, spec.get("require_invariant", True))
    except NWBFError as exc:
        raise ConfigError(f"omega: {exc}") from None
