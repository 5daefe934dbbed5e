"""JSON formats: matrices, states, map configurations and float-exact dumps."""

from __future__ import annotations

import json
import math
import re

import numpy as np

from .hermitian import SpectralState, hermitian
from .maps import (AffineMap, BallMap, compose, extremal_affine, identity_affine, mu_max,
                   random_orthogonal)

MATRIX_KEYS = {"dim", "re", "im"}
MAP_KEYS = {"state", "dim", "mu", "affine"}
AFFINE_KEYS = {
    "identity": {"kind"},
    "extremal": {"kind", "kappa", "delta", "r1_seed", "r2_seed"},
    "rotation_alpha": {"kind", "alpha"},
}


class ConfigError(ValueError):
    """Invalid user input (bad JSON document, unknown key, non-faithful state...)."""


# --- serialization --------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = f"{x:.17g}"
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _encode(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[" + pad + ("," + pad).join(_encode(v, indent, level + 1) for v in obj) + end + "]"
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"


# --- matrices -------------------------------------------------------------

def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"dim": int(a.shape[0]), "re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_json(doc, check_hermitian: bool = True) -> np.ndarray:
    if not isinstance(doc, dict):
        raise ConfigError("matrix must be a JSON object with keys dim, re, im")
    unknown = set(doc) - MATRIX_KEYS
    if unknown:
        raise ConfigError(f"unknown matrix keys: {sorted(unknown)}")
    if "dim" not in doc or "re" not in doc:
        raise ConfigError("matrix needs 'dim' and 're'")
    n = doc["dim"]
    re_part = np.asarray(doc["re"], dtype=float)
    im_part = np.asarray(doc.get("im", np.zeros((n, n))), dtype=float)
    if re_part.shape != (n, n) or im_part.shape != (n, n):
        raise ConfigError(f"matrix entries do not match dim {n}")
    a = re_part + 1j * im_part
    if not check_hermitian:
        return a
    try:
        return hermitian(a)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def state_from_json(doc, dim: int | None = None) -> SpectralState:
    if doc == "maximally_mixed":
        return SpectralState.maximally_mixed(3 if dim is None else int(dim))
    rho = matrix_from_json(doc)
    if dim is not None and rho.shape[0] != dim:
        raise ConfigError(f"state has dimension {rho.shape[0]}, config says {dim}")
    w = np.linalg.eigvalsh(rho)
    if w[0] < -1e-12:
        raise ConfigError(f"state is not positive semidefinite (eigenvalue {w[0]:.3e})")
    try:
        return SpectralState.from_matrix(rho)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


# --- angles and map configs -----------------------------------------------

_ANGLE = re.compile(r"^\s*([+-]?)\s*(\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+))?\s*$")


def parse_angle(value) -> float:
    """Radians from a number or a string like ``"pi/3"``, ``"-2*pi/3"``, ``"choi"``."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"invalid angle: {value!r}")
    text = value.strip().lower()
    if text == "choi":
        from .choi import choi_angle

        return choi_angle()
    try:
        return float(text)
    except ValueError:
        pass
    m = _ANGLE.match(text)
    if not m:
        raise ConfigError(f"invalid angle: {value!r}")
    sign, factor, denom = m.groups()
    out = (float(factor) if factor else 1.0) * math.pi / (float(denom) if denom else 1.0)
    return -out if sign == "-" else out


def _parse_mu(value, state: SpectralState) -> float:
    if value == "max":
        return mu_max(state)
    if value == "-max":
        return -mu_max(state)
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    raise ConfigError(f"invalid mu: {value!r}")


def affine_from_json(doc, m: int, n: int) -> AffineMap:
    if doc is None:
        return identity_affine(m)
    if not isinstance(doc, dict) or doc.get("kind") not in AFFINE_KEYS:
        raise ConfigError(f"affine.kind must be one of {sorted(AFFINE_KEYS)}")
    kind = doc["kind"]
    unknown = set(doc) - AFFINE_KEYS[kind]
    if unknown:
        raise ConfigError(f"unknown keys for affine kind {kind!r}: {sorted(unknown)}")
    try:
        if kind == "identity":
            return identity_affine(m)
        if kind == "extremal":
            r1 = random_orthogonal(m, int(doc.get("r1_seed", 0)))
            r2 = random_orthogonal(m, int(doc.get("r2_seed", 1)))
            return extremal_affine(m, r1, r2, float(doc["kappa"]), float(doc["delta"]))
        if n != 3:
            raise ConfigError("rotation_alpha is defined for n = 3 only")
        from .choi import family_rotation

        return family_rotation(parse_angle(doc["alpha"]))
    except KeyError as exc:
        raise ConfigError(f"affine kind {kind!r} is missing {exc}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def map_from_config(doc) -> BallMap:
    if not isinstance(doc, dict):
        raise ConfigError("map config must be a JSON object")
    unknown = set(doc) - MAP_KEYS
    if unknown:
        raise ConfigError(f"unknown map config keys: {sorted(unknown)}")
    if "state" not in doc or "mu" not in doc:
        raise ConfigError("map config needs 'state' and 'mu'")
    state = state_from_json(doc["state"], doc.get("dim"))
    mu = _parse_mu(doc["mu"], state)
    m = state.dim ** 2 - 1
    return compose(state, mu, affine_from_json(doc.get("affine"), m, state.dim))
