"""Separability structure: convex mixtures of product states, their exact
densities on pairs of subsystem rays, and product/entanglement screens."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, DimensionMismatch, EigenDecompositionFailure
from .projective import ProjectivePoint
from .states import (
    BipartiteDims,
    DensityMatrix,
    matrix_of,
    partial_trace,
    random_mixture_parts,
    tensor,
    validate_density,
)

_WEIGHT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SeparableMixture:
    """Statistical weights paired with per-subsystem density matrices.

    Realizes a separable state sum_n lambda_n sigma_An (x) sigma_Bn without
    assembling it, so the restriction to product rays stays exact.
    """

    weights: tuple
    components: tuple

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        components = tuple((a, b) for a, b in self.components)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "components", components)
        if not components or len(weights) != len(components):
            raise BadParameter(
                f"need equal nonzero counts of weights and components, "
                f"got {len(weights)} and {len(components)}"
            )
        if any(w < 0.0 for w in weights):
            raise BadParameter("mixture weights must be nonnegative")
        total = sum(weights)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise BadParameter(f"mixture weights sum to {total!r}, not 1")
        dim_a = components[0][0].dim
        dim_b = components[0][1].dim
        for a, b in components:
            if a.dim != dim_a or b.dim != dim_b:
                raise DimensionMismatch("mixture components must share dimensions")

    @property
    def dims(self) -> BipartiteDims:
        return BipartiteDims(self.components[0][0].dim, self.components[0][1].dim)


def assemble(mixture: SeparableMixture) -> DensityMatrix:
    """The mixture's density matrix sum_n lambda_n sigma_An (x) sigma_Bn."""
    joint = sum(
        w * tensor(a, b) for w, (a, b) in zip(mixture.weights, mixture.components)
    )
    return validate_density(joint)


@dataclass(frozen=True, eq=False)
class RestrictedDensity:
    """Exact density of a separable mixture on pairs of subsystem rays."""

    mixture: SeparableMixture

    def __call__(self, p_a: ProjectivePoint, p_b: ProjectivePoint) -> float:
        dims = self.mixture.dims
        if p_a.dim != dims.dim_a or p_b.dim != dims.dim_b:
            raise DimensionMismatch(
                f"point dims ({p_a.dim}, {p_b.dim}) != ({dims.dim_a}, {dims.dim_b})"
            )
        return float(self.eval_batch(p_a.vector[None, :], p_b.vector[None, :])[0])

    def eval_batch(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        total = np.zeros(xs.shape[0])
        for w, (a, b) in zip(self.mixture.weights, self.mixture.components):
            va = np.einsum("bi,ij,bj->b", xs.conj(), a.matrix, xs, optimize=True).real
            vb = np.einsum("bi,ij,bj->b", ys.conj(), b.matrix, ys, optimize=True).real
            total += w * va * vb
        return total


def restricted_density(mixture: SeparableMixture) -> RestrictedDensity:
    """(p_a, p_b) -> sum_n lambda_n tr(sigma_An p_a) tr(sigma_Bn p_b), exact."""
    return RestrictedDensity(mixture)


def is_product(sigma, dims: BipartiteDims, tol: float = 1e-9) -> bool:
    """True iff sigma equals the tensor product of its own reductions
    within Frobenius distance ``tol``."""
    m = matrix_of(sigma)
    prod = tensor(partial_trace(m, dims, "A"), partial_trace(m, dims, "B"))
    return float(np.linalg.norm(m - prod)) <= tol


def ppt_check(sigma, dims: BipartiteDims) -> bool:
    """Positive partial transpose on factor B.

    Necessary for separability, but in dimensions 3x3 and above a True
    result is a label, not a separability certificate.
    """
    m = matrix_of(sigma)
    if m.shape[0] != dims.joint:
        raise DimensionMismatch(
            f"state dimension {m.shape[0]} != dim_a*dim_b = {dims.joint}"
        )
    t = m.reshape(dims.dim_a, dims.dim_b, dims.dim_a, dims.dim_b)
    pt = np.transpose(t, (0, 3, 2, 1)).reshape(dims.joint, dims.joint)
    try:
        smallest = float(np.linalg.eigvalsh(pt)[0])
    except np.linalg.LinAlgError as exc:  # pragma: no cover - numpy internal
        raise EigenDecompositionFailure(str(exc)) from exc
    return smallest >= -1e-10


def random_mixture(
    dim_a: int,
    dim_b: int,
    n_components: int,
    rank: int | None = None,
    seed=0,
) -> SeparableMixture:
    """Random separable mixture with Dirichlet weights and mixed components."""
    weights, pairs = random_mixture_parts(dim_a, dim_b, n_components, rank, seed)
    return SeparableMixture(weights, pairs)
