"""JSON file schemas for states and separable mixtures.

State schema: {"dims": [nA, nB] or [n], "re": row-major n x n array,
"im": row-major n x n array}. Mixture schema: {"weights": [...],
"components": [{"a": <state>, "b": <state>}, ...]} reusing the state schema
per component (component dims may be omitted).
"""

from __future__ import annotations

import json

import numpy as np

from .constants import VALIDATION_TOL
from .errors import BadParameter
from .states import BipartiteDims, DensityMatrix, validate_density
from .structure import SeparableMixture


def _matrix_from_parts(re, im, label: str) -> np.ndarray:
    try:
        real = np.array(re, dtype=float)
        imag = np.array(im, dtype=float)
    except (TypeError, ValueError) as exc:
        raise BadParameter(f"{label}: 're'/'im' must be numeric arrays") from exc
    if real.ndim != 2 or real.shape[0] != real.shape[1]:
        raise BadParameter(f"{label}: 're' must be a square array, got shape {real.shape}")
    if imag.shape != real.shape:
        raise BadParameter(
            f"{label}: 'im' shape {imag.shape} does not match 're' shape {real.shape}"
        )
    return real + 1j * imag


def state_from_dict(data: dict, *, tol: float = VALIDATION_TOL, label: str = "state"):
    """Parse one state object; returns (DensityMatrix, BipartiteDims | None)."""
    if not isinstance(data, dict):
        raise BadParameter(f"{label}: expected a JSON object")
    missing = {"re", "im"} - data.keys()
    if missing:
        raise BadParameter(f"{label}: missing keys {sorted(missing)}")
    matrix = _matrix_from_parts(data["re"], data["im"], label)
    dims = None
    if "dims" in data and data["dims"] is not None:
        raw = data["dims"]
        if not isinstance(raw, (list, tuple)) or not all(
            isinstance(d, int) and d > 0 for d in raw
        ):
            raise BadParameter(f"{label}: 'dims' must be a list of positive integers")
        if len(raw) == 2:
            dims = BipartiteDims(raw[0], raw[1])
            expected = dims.joint
        elif len(raw) == 1:
            expected = raw[0]
        else:
            raise BadParameter(f"{label}: 'dims' must have one or two entries")
        if expected != matrix.shape[0]:
            raise BadParameter(
                f"{label}: dims {raw} imply dimension {expected}, matrix is {matrix.shape[0]}"
            )
    return validate_density(matrix, tol=tol), dims


def state_to_dict(sigma: DensityMatrix, dims: BipartiteDims | None = None) -> dict:
    out = {}
    if dims is not None:
        out["dims"] = [dims.dim_a, dims.dim_b]
    else:
        out["dims"] = [sigma.dim]
    out["re"] = sigma.matrix.real.tolist()
    out["im"] = sigma.matrix.imag.tolist()
    return out


def load_state(path, *, tol: float = VALIDATION_TOL):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return state_from_dict(data, tol=tol, label=str(path))


def save_state(path, sigma: DensityMatrix, dims: BipartiteDims | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(sigma, dims), fh)


def mixture_from_dict(data: dict, *, tol: float = VALIDATION_TOL) -> SeparableMixture:
    if not isinstance(data, dict):
        raise BadParameter("mixture: expected a JSON object")
    missing = {"weights", "components"} - data.keys()
    if missing:
        raise BadParameter(f"mixture: missing keys {sorted(missing)}")
    weights = data["weights"]
    components = data["components"]
    if not isinstance(weights, list) or not isinstance(components, list):
        raise BadParameter("mixture: 'weights' and 'components' must be lists")
    if len(weights) != len(components):
        raise BadParameter(
            f"mixture: {len(weights)} weights vs {len(components)} components"
        )
    pairs = []
    for i, entry in enumerate(components):
        if not isinstance(entry, dict) or {"a", "b"} - entry.keys():
            raise BadParameter(f"mixture component {i}: expected keys 'a' and 'b'")
        a, _ = state_from_dict(entry["a"], tol=tol, label=f"component {i} 'a'")
        b, _ = state_from_dict(entry["b"], tol=tol, label=f"component {i} 'b'")
        pairs.append((a, b))
    return SeparableMixture(tuple(float(w) for w in weights), tuple(pairs))


def mixture_to_dict(mixture: SeparableMixture) -> dict:
    return {
        "weights": list(mixture.weights),
        "components": [
            {"a": state_to_dict(a), "b": state_to_dict(b)}
            for a, b in mixture.components
        ],
    }


def load_mixture(path, *, tol: float = VALIDATION_TOL) -> SeparableMixture:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return mixture_from_dict(data, tol=tol)


def save_mixture(path, mixture: SeparableMixture):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(mixture_to_dict(mixture), fh)
