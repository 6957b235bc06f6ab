"""The projective phase space of a finite-dimensional Hilbert space: points,
densities, frames, the Kaehler structure, the Segre embedding, and unitary
flow. Points are rays stored through a unit representative vector; all
operations are invariant under a global phase of the representative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import VALIDATION_TOL
from .errors import (
    BadParameter,
    BaseMismatch,
    DimensionMismatch,
    EigenDecompositionFailure,
    InvalidFrame,
    NotHermitian,
    ProjmiError,
    ZeroVector,
)
from .states import DensityMatrix, HermitianOperator, haar_unitary, matrix_of

_NORM_TOL = 1e-12
_PHASE_EQ_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """A ray, stored as a unit representative vector.

    Equality is phase-invariant: two points are equal iff the overlap
    |<x|y>| of their representatives is 1 within 1e-10.
    """

    vector: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex)
        if v.ndim != 1:
            raise BadParameter(f"representative must be a vector, got shape {v.shape}")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > _NORM_TOL:
            raise BadParameter(
                f"representative must be unit norm within {_NORM_TOL:.0e}, got {norm!r}; "
                "use project() for arbitrary vectors"
            )
        object.__setattr__(self, "vector", v)
        v.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    def projector(self) -> np.ndarray:
        """Rank-1 projector x x^dag realizing the ray as an operator."""
        return np.outer(self.vector, self.vector.conj())

    def overlap(self, other: "ProjectivePoint") -> float:
        """tr(p q) = |<x|y>|^2, the phase-free overlap with another point."""
        if self.dim != other.dim:
            raise DimensionMismatch(f"point dims {self.dim} != {other.dim}")
        return float(np.abs(np.vdot(self.vector, other.vector)) ** 2)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        if self.dim != other.dim:
            return False
        return abs(np.abs(np.vdot(self.vector, other.vector)) - 1.0) <= _PHASE_EQ_TOL


def project(x) -> ProjectivePoint:
    """Canonical projection of a nonzero vector to its ray."""
    v = np.asarray(x, dtype=complex)
    norm = float(np.linalg.norm(v))
    if norm <= _NORM_TOL:
        raise ZeroVector(f"cannot project a vector of norm {norm:.3e}")
    return ProjectivePoint(v / norm)


def fs_distance(p: ProjectivePoint, q: ProjectivePoint) -> float:
    """Geodesic distance arccos(sqrt(tr(pq))), in [0, pi/2]."""
    t = min(max(p.overlap(q), 0.0), 1.0)
    return float(np.arccos(np.sqrt(t)))


@dataclass(frozen=True, eq=False)
class LiouvilleDensity:
    """Evaluatable density p -> tr(sigma p) on projective space for a state sigma."""

    source: DensityMatrix

    def __call__(self, p: ProjectivePoint) -> float:
        if p.dim != self.source.dim:
            raise DimensionMismatch(f"point dim {p.dim} != state dim {self.source.dim}")
        value = complex(np.vdot(p.vector, self.source.matrix @ p.vector))
        if abs(value.imag) > 1e-12:
            raise ProjmiError(f"density evaluated to non-real value {value!r}")
        return float(value.real)

    def eval_batch(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on rows of ``points`` (unit representatives)."""
        if points.shape[1] != self.source.dim:
            raise DimensionMismatch(
                f"batch dim {points.shape[1]} != state dim {self.source.dim}"
            )
        values = np.einsum(
            "bi,ij,bj->b", points.conj(), self.source.matrix, points, optimize=True
        )
        if values.size and float(np.max(np.abs(values.imag))) > 1e-12:
            raise ProjmiError("density evaluated to non-real values in batch")
        return values.real


def liouville_density(sigma: DensityMatrix) -> LiouvilleDensity:
    """Density p -> tr(sigma p); the geometric stand-in for the state sigma."""
    return LiouvilleDensity(sigma)


@dataclass(frozen=True, eq=False)
class ObservableFunction:
    """Scalar phase-space function f_A(p) = (n+1) tr(A p) - tr(A)."""

    operator: HermitianOperator

    @property
    def kappa(self) -> float:
        return float(self.operator.dim + 1)

    def __call__(self, p: ProjectivePoint) -> float:
        if p.dim != self.operator.dim:
            raise DimensionMismatch(f"point dim {p.dim} != operator dim {self.operator.dim}")
        a = self.operator.matrix
        return float(
            self.kappa * np.vdot(p.vector, a @ p.vector).real - np.trace(a).real
        )

    def eval_batch(self, points: np.ndarray) -> np.ndarray:
        a = self.operator.matrix
        if points.shape[1] != self.operator.dim:
            raise DimensionMismatch(
                f"batch dim {points.shape[1]} != operator dim {self.operator.dim}"
            )
        quad = np.einsum("bi,ij,bj->b", points.conj(), a, points, optimize=True).real
        return self.kappa * quad - np.trace(a).real


def observable_function(a) -> ObservableFunction:
    """Phase-space representative of an observable, with kappa fixed at n+1."""
    op = a if isinstance(a, HermitianOperator) else HermitianOperator(a)
    return ObservableFunction(op)


@dataclass(frozen=True, eq=False)
class Frame:
    """Exactly n mutually orthogonal points: an orthonormal basis as rays."""

    points: tuple

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise InvalidFrame("a frame needs at least one point")
        n = pts[0].dim
        if any(p.dim != n for p in pts):
            raise InvalidFrame("frame points must share one dimension")
        if len(pts) != n:
            raise InvalidFrame(f"a frame in dimension {n} needs exactly {n} points, got {len(pts)}")
        for i in range(n):
            for j in range(i + 1, n):
                ov = pts[i].overlap(pts[j])
                if ov > VALIDATION_TOL:
                    raise InvalidFrame(
                        f"points {i} and {j} overlap by {ov:.3e} (> {VALIDATION_TOL:.0e})"
                    )

    @property
    def dim(self) -> int:
        return self.points[0].dim


def random_frame(n: int, rng) -> Frame:
    """Frame from the columns of a Haar-random unitary."""
    u = haar_unitary(n, rng)
    return Frame(tuple(ProjectivePoint(u[:, j].copy()) for j in range(n)))


def frame_sum(f, frame: Frame):
    """Sum of f over the frame's points (the frame-function constant)."""
    return sum(f(p) for p in frame.points)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Tangent vector at ``base`` realized as -i[A, p] for a Hermitian generator A.

    Generators are not unique; equality of tangent vectors is equality of the
    realized matrices, not of generators.
    """

    base: ProjectivePoint
    generator: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.generator, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"generator must be square, got shape {a.shape}")
        if a.shape[0] != self.base.dim:
            raise DimensionMismatch(
                f"generator dim {a.shape[0]} != base dim {self.base.dim}"
            )
        gap = float(np.max(np.abs(a - a.conj().T)))
        if gap > VALIDATION_TOL:
            raise NotHermitian(f"generator is not Hermitian: gap {gap:.3e}")
        object.__setattr__(self, "generator", a)
        a.setflags(write=False)

    def realized(self) -> np.ndarray:
        """The tangent matrix -i[A, p]; Hermitian and traceless."""
        p = self.base.projector()
        return -1j * (self.generator @ p - p @ self.generator)


def _check_based_at(p: ProjectivePoint, *vectors: TangentVector):
    for v in vectors:
        if not v.base == p:
            raise BaseMismatch("tangent vector is not based at the given point")


def symplectic_form(p: ProjectivePoint, u: TangentVector, v: TangentVector) -> float:
    """omega_p(u, v) = -i kappa tr([A_u, A_v] p), kappa = n + 1."""
    _check_based_at(p, u, v)
    kappa = p.dim + 1
    proj = p.projector()
    comm = u.generator @ v.generator - v.generator @ u.generator
    return float((-1j * kappa * np.trace(comm @ proj)).real)


def fs_metric(p: ProjectivePoint, u: TangentVector, v: TangentVector) -> float:
    """g_p(u, v) = -kappa tr(p([A_u,p][A_v,p] + [A_v,p][A_u,p])), kappa = n + 1."""
    _check_based_at(p, u, v)
    kappa = p.dim + 1
    proj = p.projector()
    cu = u.generator @ proj - proj @ u.generator
    cv = v.generator @ proj - proj @ v.generator
    return float((-kappa * np.trace(proj @ (cu @ cv + cv @ cu))).real)


def complex_structure(p: ProjectivePoint, v: TangentVector) -> TangentVector:
    """j_p v with realized matrix i[v, p]; applying twice negates the tangent."""
    _check_based_at(p, v)
    proj = p.projector()
    generator = 1j * (v.generator @ proj - proj @ v.generator)
    return TangentVector(p, generator)


def segre(p_a: ProjectivePoint, p_b: ProjectivePoint) -> ProjectivePoint:
    """Embedding (p_a, p_b) -> ray of x_a (x) x_b in the joint space."""
    return project(np.kron(p_a.vector, p_b.vector))


def schrodinger_flow(
    p: ProjectivePoint, hamiltonian, t: float, steps: int = 1
) -> ProjectivePoint:
    """Evolve a point by exp(-iHt) computed from the eigendecomposition of H.

    Exact up to roundoff at any t; ``steps`` is kept for API symmetry with
    trajectory sampling and must be >= 1.
    """
    if steps < 1:
        raise BadParameter(f"steps must be >= 1, got {steps}")
    h = matrix_of(hamiltonian)
    if h.shape[0] != p.dim:
        raise DimensionMismatch(f"Hamiltonian dim {h.shape[0]} != point dim {p.dim}")
    try:
        vals, vecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - numpy internal
        raise EigenDecompositionFailure(str(exc)) from exc
    phases = np.exp(-1j * vals * t)
    evolved = vecs @ (phases * (vecs.conj().T @ p.vector))
    return project(evolved)
