"""Single-copy local operations: filters, unitaries, and their effect.

Any branch operator a party can apply collapses to unitary * filter, where
the filter nu(1 + a n.sigma) reweights spin components along the axis n.
Applying a pair of branch operators to a shared state succeeds with
probability t = tr[(A+A x B+B) rho] and rescales the concurrence by the
closed factor mu^2 nu^2 (1-a^2)(1-b^2) / t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qlocc import linalg
from qlocc.errors import DomainError, FilteredOut, NotPhysical
from qlocc.states import DensityMatrix, PauliRep

TOL_PROB = 1e-14

_Z_AXIS = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True, eq=False)
class LocalFilter:
    """Filtration nu(1 + a n.sigma): strength a in [0,1], unit axis n,
    scale nu in (0, 1/(1+a)] so both eigenvalues nu(1 +- a) stay in [0,1]."""

    strength: float
    axis: np.ndarray
    scale: float

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float).reshape(3)
        if abs(np.linalg.norm(axis) - 1.0) > 1e-12:
            raise DomainError(f"filter axis {axis.tolist()} is not a unit vector")
        a = float(self.strength)
        nu = float(self.scale)
        if not 0.0 <= a <= 1.0:
            raise DomainError(f"filter strength a={a} outside [0, 1]")
        if not 0.0 < nu <= 1.0 / (1.0 + a) + 1e-12:
            raise DomainError(f"filter scale nu={nu} outside (0, 1/(1+a)]")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "strength", a)
        object.__setattr__(self, "scale", nu)


@dataclass(frozen=True, eq=False)
class LocalOperation:
    """A general single-party branch operator, expressed as unitary * filter."""

    unitary: np.ndarray
    filter: LocalFilter

    def __post_init__(self):
        u = np.ascontiguousarray(self.unitary, dtype=np.complex128)
        if u.shape != (2, 2):
            raise DomainError("unitary must be 2x2")
        if linalg.frobenius(u @ linalg.dagger(u) - linalg.I2) > 1e-10:
            raise DomainError("operator factor is not unitary within 1e-10")
        object.__setattr__(self, "unitary", u)

    @property
    def matrix(self) -> np.ndarray:
        return self.unitary @ filter_matrix(self.filter)


@dataclass(frozen=True, eq=False)
class LoccOutcome:
    """Post-selection result: normalized state plus success probability."""

    state: DensityMatrix
    probability: float


def filter_matrix(f: LocalFilter) -> np.ndarray:
    """The 2x2 positive matrix nu(1 + a n.sigma)."""
    return f.scale * (linalg.I2 + f.strength * linalg.axis_dot_pauli(f.axis))


def trivial_filter() -> LocalFilter:
    return LocalFilter(strength=0.0, axis=_Z_AXIS, scale=1.0)


def trivial_operation() -> LocalOperation:
    return LocalOperation(unitary=linalg.I2.copy(), filter=trivial_filter())


def decompose_local_op(A: np.ndarray) -> LocalOperation:
    """Split an arbitrary 2x2 operator into unitary * filter.

    Uses the polar decomposition A = U P obtained from the SVD; the
    positive factor P = V diag(s1, s2) V+ maps to filter parameters
    nu = (s1+s2)/2, a = (s1-s2)/(s1+s2), with the axis taken from the
    dominant eigenvector. Raises :class:`~qlocc.errors.NotPhysical` when a
    singular value exceeds 1 (the operator could not be a measurement
    branch) and :class:`~qlocc.errors.DomainError` for the zero operator.
    Degenerate s1 = s2 yields a = 0 with the canonical z axis.
    """
    A = np.ascontiguousarray(A, dtype=np.complex128)
    if A.shape != (2, 2):
        raise DomainError("operator must be 2x2")
    w, s, vh = np.linalg.svd(A)
    if s[0] > 1.0 + 1e-12:
        raise NotPhysical(f"largest singular value {s[0]:.12g} exceeds 1")
    if s[0] + s[1] <= 0.0:
        raise DomainError("cannot decompose the zero operator")
    u = w @ vh  # A = (W V+)(V diag(s) V+) = unitary * positive factor
    nu = (s[0] + s[1]) / 2.0
    a = (s[0] - s[1]) / (s[0] + s[1])
    if a < 1e-14:
        a = 0.0
        axis = _Z_AXIS.copy()
    else:
        v1 = vh.conj().T[:, 0]  # dominant eigenvector of the positive factor
        axis = np.array(
            [
                2.0 * (v1[0].conjugate() * v1[1]).real,
                2.0 * (v1[0].conjugate() * v1[1]).imag,
                abs(v1[0]) ** 2 - abs(v1[1]) ** 2,
            ]
        )
        axis /= np.linalg.norm(axis)
    f = LocalFilter(strength=a, axis=axis, scale=nu)
    return LocalOperation(unitary=u, filter=f)


def compose_local_ops(second: LocalOperation, first: LocalOperation) -> LocalOperation:
    """Composite of two branch operators, re-expressed as unitary * filter.

    Rescales the product so its largest singular value is at most 1; the
    overall scale of a branch operator only affects the success
    probability, never the post-selected state.
    """
    m = second.matrix @ first.matrix
    smax = np.linalg.svd(m, compute_uv=False)[0]
    if smax > 1.0:
        m = m / smax
    return decompose_local_op(m)


def apply_local_pair(rho: DensityMatrix, opA: LocalOperation, opB: LocalOperation) -> LoccOutcome:
    """Apply A x B to a shared state, post-selecting on branch success.

    probability = tr[(A+A x B+B) rho]; state = (A x B) rho (A x B)+ / probability.
    Raises :class:`~qlocc.errors.FilteredOut` when the probability is at or
    below ``TOL_PROB`` (the branch removes all particles).
    """
    K = linalg.kron(opA.matrix, opB.matrix)
    raw = K @ rho.mat @ linalg.dagger(K)
    t = float(np.trace(raw).real)
    if t <= TOL_PROB:
        raise FilteredOut(f"branch probability {t:.3e} is at or below {TOL_PROB}")
    return LoccOutcome(state=DensityMatrix(raw / t), probability=t)


def closed_form_t(rep: PauliRep, fA: LocalFilter, fB: LocalFilter) -> float:
    """Branch probability from Pauli coefficients alone.

    t = mu^2 nu^2 [(1+a^2)(1+b^2) + 2a(1+b^2) n.alpha + 2b(1+a^2) m.beta
        + 4ab R_ij n_i m_j].
    """
    a, n, nu = fA.strength, fA.axis, fA.scale
    b, m, mu = fB.strength, fB.axis, fB.scale
    bracket = (
        (1.0 + a * a) * (1.0 + b * b)
        + 2.0 * a * (1.0 + b * b) * float(n @ rep.alpha)
        + 2.0 * b * (1.0 + a * a) * float(m @ rep.beta)
        + 4.0 * a * b * float(n @ rep.R @ m)
    )
    return (mu * mu) * (nu * nu) * bracket


def predicted_concurrence(c_in: float, fA: LocalFilter, fB: LocalFilter, t: float) -> float:
    """Concurrence after filtering: mu^2 nu^2 (1-a^2)(1-b^2) / t * c_in."""
    if t <= 0.0:
        raise DomainError(f"branch probability t={t} must be positive")
    a, nu = fA.strength, fA.scale
    b, mu = fB.strength, fB.scale
    return (mu * mu) * (nu * nu) * (1.0 - a * a) * (1.0 - b * b) / t * c_in


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-random 2x2 unitary (QR of a Ginibre sample, phase-fixed)."""
    g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_axis(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def random_filter(rng: np.random.Generator, max_strength: float = 0.98) -> LocalFilter:
    """Random invertible filter; scale drawn in (0.05, 1] of its maximum."""
    a = max_strength * rng.random()
    nu = (0.05 + 0.95 * rng.random()) / (1.0 + a)
    return LocalFilter(strength=a, axis=random_axis(rng), scale=nu)
