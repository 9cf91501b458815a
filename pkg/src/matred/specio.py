"""Weight specifications: JSON loading, builtin names and serialization.

A spec is either

* ``{"dimension": N, "base": {...}, "entries": {"i,j": [c0, c1, ...]}}`` where
  entry ``(i, j)`` of ``W(x)`` is ``sum_k c_k x^k``; a coefficient is a real
  number or a ``[re, im]`` pair and missing ``(j, i)`` entries are completed
  by Hermitian symmetry, or
* ``{"builtin": {"name": str, "params": {...}}}``.

The base is ``{"kind": "lebesgue", "a": .., "b": ..}``,
``{"kind": "gegenbauer", "nu": ..}`` or
``{"kind": "atoms", "points": [..], "masses": [..]}``.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import Any

import numpy as np

from .errors import MatredError, SpecError
from .examples import gegenbauer_weight, q_norm_sequence, nonunitary_2x2_weight
from .measure import (
    DiscreteAtoms,
    GammaSequence,
    GegenbauerMeasure,
    LebesgueInterval,
    MatrixWeight,
    validate_weight,
)

MAX_DIMENSION = 64
ENTRY_TOL = 1e-12

BUILTINS = {
    "tirao-variant": (),
    "gegenbauer": ("ell", "nu"),
    "q-gegenbauer-norms": ("ell", "q", "count"),
}


# ---------------------------------------------------------------------------
# builtins


def parse_builtin(text: str) -> dict:
    """``"gegenbauer(1, 1.0)"`` -> ``{"name": "gegenbauer", "params": {"ell": 1.0, "nu": 1.0}}``."""
    m = re.fullmatch(r"\s*([A-Za-z][\w-]*)\s*(?:\((.*)\))?\s*", text)
    if not m:
        raise SpecError(f"builtin {text!r}: expected NAME or NAME(arg, ...)")
    name, args = m.group(1), m.group(2)
    if name not in BUILTINS:
        raise SpecError(f"builtin {text!r}: unknown name {name!r} (known: {', '.join(BUILTINS)})")
    values = [] if args is None or not args.strip() else [a.strip() for a in args.split(",")]
    keys = BUILTINS[name]
    if len(values) != len(keys):
        raise SpecError(f"builtin {text!r}: {name} takes {len(keys)} argument(s) {keys}, got {len(values)}")
    params = {}
    for k, v in zip(keys, values):
        try:
            params[k] = int(v) if k == "count" else float(v)
        except ValueError:
            raise SpecError(f"builtin {text!r}: argument {k}={v!r} is not a number") from None
    return {"name": name, "params": params}


def _builtin_object(desc: dict, where: str):
    name = desc.get("name")
    params = desc.get("params", {}) or {}
    if name not in BUILTINS:
        raise SpecError(f"{where}.name: unknown builtin {name!r}")
    missing = [k for k in BUILTINS[name] if k not in params]
    extra = [k for k in params if k not in BUILTINS[name]]
    if missing or extra:
        raise SpecError(f"{where}.params: expected keys {list(BUILTINS[name])}, "
                        f"missing {missing}, unexpected {extra}")
    try:
        if name == "tirao-variant":
            return nonunitary_2x2_weight()
        if name == "gegenbauer":
            return gegenbauer_weight(float(params["ell"]), float(params["nu"]))
        count = params["count"]
        if isinstance(count, bool) or not float(count).is_integer() or int(count) < 2:
            raise SpecError(f"{where}.params.count: need an integer >= 2, got {count!r}")
        seq = q_norm_sequence(float(params["ell"]), float(params["q"]), int(count))
        return seq
    except SpecError:
        raise
    except (MatredError, ValueError, TypeError) as exc:
        raise SpecError(f"{where}.params: {exc}") from None


# ---------------------------------------------------------------------------
# explicit specs


def _number(v: Any, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecError(f"{where}: expected a number, got {v!r}")
    if not math.isfinite(v):
        raise SpecError(f"{where}: non-finite value {v!r}")
    return float(v)


def _coefficient(v: Any, where: str) -> complex:
    if isinstance(v, list):
        if len(v) != 2:
            raise SpecError(f"{where}: complex coefficients are [re, im] pairs, got {v!r}")
        return complex(_number(v[0], f"{where}[0]"), _number(v[1], f"{where}[1]"))
    return complex(_number(v, where))


def _base(obj: Any, where: str):
    if not isinstance(obj, dict):
        raise SpecError(f"{where}: expected an object")
    kind = obj.get("kind")
    try:
        if kind == "lebesgue":
            return LebesgueInterval(_number(obj.get("a", 0.0), f"{where}.a"),
                                    _number(obj.get("b", 1.0), f"{where}.b"))
        if kind == "gegenbauer":
            if "nu" not in obj:
                raise SpecError(f"{where}.nu: missing")
            return GegenbauerMeasure(_number(obj["nu"], f"{where}.nu"))
        if kind == "atoms":
            pts, ms = obj.get("points"), obj.get("masses")
            if not isinstance(pts, list) or not isinstance(ms, list):
                raise SpecError(f"{where}: atoms need 'points' and 'masses' lists")
            return DiscreteAtoms(tuple(_number(p, f"{where}.points[{k}]") for k, p in enumerate(pts)),
                                 tuple(_number(m, f"{where}.masses[{k}]") for k, m in enumerate(ms)))
    except SpecError:
        raise
    except MatredError as exc:
        raise SpecError(f"{where}: {exc}") from None
    raise SpecError(f"{where}.kind: expected 'lebesgue', 'gegenbauer' or 'atoms', got {kind!r}")


def _entries(obj: Any, N: int, where: str) -> np.ndarray:
    if not isinstance(obj, dict) or not obj:
        raise SpecError(f"{where}: expected a non-empty object of 'i,j' keys")
    given = {}
    for key, coeffs in obj.items():
        loc = f"{where}[{key!r}]"
        m = re.fullmatch(r"\s*(\d+)\s*,\s*(\d+)\s*", key)
        if not m:
            raise SpecError(f"{loc}: key must look like 'i,j'")
        i, j = int(m.group(1)), int(m.group(2))
        if not (i < N and j < N):
            raise SpecError(f"{loc}: index out of range for dimension {N}")
        if (i, j) in given:
            raise SpecError(f"{loc}: duplicate entry")
        if not isinstance(coeffs, list) or not coeffs:
            raise SpecError(f"{loc}: expected a non-empty coefficient list")
        given[(i, j)] = [_coefficient(c, f"{loc}[{k}]") for k, c in enumerate(coeffs)]
    deg = max(len(c) for c in given.values()) - 1
    C = np.zeros((deg + 1, N, N), complex)
    for (i, j), cs in given.items():
        C[: len(cs), i, j] = cs
    for (i, j), cs in given.items():
        loc = f"{where}['{i},{j}']"
        if i == j:
            bad = [k for k, c in enumerate(cs) if abs(c.imag) > ENTRY_TOL * max(1.0, abs(c))]
            if bad:
                raise SpecError(f"{loc}[{bad[0]}]: diagonal coefficients must be real")
            C[:, i, i] = C[:, i, i].real
        elif (j, i) in given:
            if i < j:
                d = C[:, i, j] - C[:, j, i].conj()
                if np.abs(d).max() > ENTRY_TOL * max(1.0, np.abs(C[:, i, j]).max()):
                    k = int(np.argmax(np.abs(d)))
                    raise SpecError(f"{loc}[{k}]: entry is not the conjugate of '{j},{i}' (non-Hermitian)")
        else:
            C[:, j, i] = C[:, i, j].conj()
    return C


def weight_from_dict(obj: Any, where: str = "spec"):
    """Build a :class:`MatrixWeight` (or a :class:`GammaSequence` builtin) from a parsed spec."""
    if not isinstance(obj, dict):
        raise SpecError(f"{where}: expected a JSON object")
    if obj.get("tool") == "matred" and "input" in obj:
        # a report is re-runnable from its own input descriptor
        return weight_from_dict(obj["input"], f"{where}.input")
    if "builtin" in obj:
        desc = obj["builtin"]
        if not isinstance(desc, dict):
            raise SpecError(f"{where}.builtin: expected an object")
        return _builtin_object(desc, f"{where}.builtin")
    for key in ("dimension", "base", "entries"):
        if key not in obj:
            raise SpecError(f"{where}.{key}: missing")
    N = obj["dimension"]
    if isinstance(N, bool) or not isinstance(N, int) or not 1 <= N <= MAX_DIMENSION:
        raise SpecError(f"{where}.dimension: expected an integer in [1, {MAX_DIMENSION}], got {N!r}")
    base = _base(obj["base"], f"{where}.base")
    C = _entries(obj["entries"], N, f"{where}.entries")
    name = obj.get("name", "custom")
    w = MatrixWeight.from_coefficients(tuple(C), base, name=str(name), descriptor=canonical_spec_dict(C, base, name))
    try:
        validate_weight(w)
    except MatredError as exc:
        raise SpecError(f"{where}: {exc}") from None
    return w


def _read_json(path: str | Path):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise SpecError(f"{p}: cannot read ({exc.strerror})") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{p}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from None
    return obj


def load_spec(path: str | Path):
    return weight_from_dict(_read_json(path), str(path))


def load_builtin(text: str):
    return _builtin_object(parse_builtin(text), f"builtin {text!r}")


def load_input(builtin: str | None = None, spec: str | Path | None = None):
    """Load a builtin name or spec file; returns the object and a descriptor that reloads it."""
    if (builtin is None) == (spec is None):
        raise SpecError("give exactly one of a builtin name or a spec file")
    if builtin is not None:
        desc = {"builtin": parse_builtin(builtin)}
        return _builtin_object(desc["builtin"], f"builtin {builtin!r}"), desc
    raw = _read_json(spec)
    obj = weight_from_dict(raw, str(spec))
    if isinstance(obj, MatrixWeight):
        return obj, weight_to_dict(obj)
    while isinstance(raw, dict) and raw.get("tool") == "matred" and "input" in raw:
        raw = raw["input"]
    return obj, raw


# ---------------------------------------------------------------------------
# serialization


def _coef_json(c: complex):
    return float(c.real) if c.imag == 0 else [float(c.real), float(c.imag)]


def base_dict(base) -> dict:
    return {"kind": base.kind, **base.params()}


def canonical_spec_dict(coeffs, base, name: str = "custom") -> dict:
    """Explicit spec of ``sum_k x^k coeffs[k]``; upper triangle only, zero entries omitted."""
    C = np.asarray(coeffs, complex)
    N = C.shape[1]
    entries = {}
    for i in range(N):
        for j in range(i, N):
            col = C[:, i, j].real.astype(complex) if i == j else C[:, i, j]
            if np.any(col):
                last = int(np.flatnonzero(col)[-1])
                entries[f"{i},{j}"] = [_coef_json(c) for c in col[: last + 1]]
    if not entries:
        entries["0,0"] = [0.0]
    return {"name": name, "dimension": N, "base": base_dict(base), "entries": entries}


def weight_to_dict(w: MatrixWeight) -> dict:
    """Spec that reloads to ``w``: its builtin descriptor when it has one."""
    if w.descriptor:
        return w.descriptor
    return canonical_spec_dict(w.monomial_coefficients(), w.base, w.name)
