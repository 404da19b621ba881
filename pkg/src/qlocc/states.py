"""Two-qubit states: construction, validation, Pauli representation, JSON forms.

Basis convention: computational product basis ordered |uu>, |ud>, |du>, |dd>
(u = spin up). The singlet has amplitudes (0, 1, -1, 0)/sqrt(2). Bell states
are ordered (Psi-, Psi+, Phi-, Phi+), singlet first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qlocc import linalg
from qlocc.errors import DomainError, NotAState

_SQRT2 = float(np.sqrt(2.0))

SINGLET_AMPS = np.array([0.0, 1.0, -1.0, 0.0], dtype=np.complex128) / _SQRT2

BELL_AMPS = (
    SINGLET_AMPS,                                                        # Psi-
    np.array([0.0, 1.0, 1.0, 0.0], dtype=np.complex128) / _SQRT2,        # Psi+
    np.array([1.0, 0.0, 0.0, -1.0], dtype=np.complex128) / _SQRT2,       # Phi-
    np.array([1.0, 0.0, 0.0, 1.0], dtype=np.complex128) / _SQRT2,        # Phi+
)

SINGLET_PROJ = np.outer(SINGLET_AMPS, SINGLET_AMPS.conj())

TOL_STATE = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A two-qubit density matrix: Hermitian, unit trace, PSD 4x4 matrix."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(self.mat, dtype=np.complex128)
        if m.shape != (4, 4):
            raise DomainError("density matrix must be 4x4")
        object.__setattr__(self, "mat", m)


@dataclass(frozen=True, eq=False)
class PauliRep:
    """Bloch-style decomposition: local vectors alpha, beta and the 3x3
    correlation matrix R, so that
    rho = (1/4)[1 + alpha.sigma x 1 + 1 x beta.sigma + R_ij sigma_i x sigma_j].
    """

    alpha: np.ndarray
    beta: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", np.asarray(self.alpha, dtype=float).reshape(3))
        object.__setattr__(self, "beta", np.asarray(self.beta, dtype=float).reshape(3))
        object.__setattr__(self, "R", np.asarray(self.R, dtype=float).reshape(3, 3))


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized two-qubit state vector (4 complex amplitudes)."""

    amps: np.ndarray

    def __post_init__(self):
        a = np.ascontiguousarray(self.amps, dtype=np.complex128).reshape(4)
        nrm = float(np.sum(np.abs(a) ** 2))
        if abs(nrm - 1.0) > 1e-12:
            raise DomainError(f"state vector norm^2 = {nrm} is not 1")
        object.__setattr__(self, "amps", a)


def density_from_pure(psi: PureState) -> DensityMatrix:
    """Projector onto a pure state."""
    return DensityMatrix(np.outer(psi.amps, psi.amps.conj()))


def make_werner(F: float) -> DensityMatrix:
    """Isotropic mixture of the singlet with white noise.

    W(F) = F S + (1-F)/3 (1 - S), where S is the singlet projector and F
    its overlap with the result. Entangled exactly when F > 1/2.
    """
    F = float(F)
    if not 0.0 <= F <= 1.0:
        raise DomainError(f"Werner fidelity F={F} outside [0, 1]")
    return DensityMatrix(F * SINGLET_PROJ + (1.0 - F) / 3.0 * (linalg.I4 - SINGLET_PROJ))


def make_bell_diagonal(p) -> DensityMatrix:
    """Mixture of the four Bell states with probabilities p (singlet first)."""
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.shape != (4,):
        raise DomainError("expected exactly 4 probabilities")
    if p.min() < -1e-12 or abs(p.sum() - 1.0) > 1e-12:
        raise DomainError(f"invalid probability vector {p.tolist()}")
    m = np.zeros((4, 4), dtype=np.complex128)
    for pi, amps in zip(p, BELL_AMPS):
        m += pi * np.outer(amps, amps.conj())
    return DensityMatrix(m)


def to_pauli(rho: DensityMatrix) -> PauliRep:
    """Pauli-basis coefficients alpha_i = tr(rho sigma_i x 1), etc."""
    m = rho.mat
    alpha = np.array([np.trace(m @ linalg.kron(s, linalg.I2)).real for s in linalg.PAULI])
    beta = np.array([np.trace(m @ linalg.kron(linalg.I2, s)).real for s in linalg.PAULI])
    R = np.array(
        [
            [np.trace(m @ linalg.kron(si, sj)).real for sj in linalg.PAULI]
            for si in linalg.PAULI
        ]
    )
    return PauliRep(alpha, beta, R)


def from_pauli(rep: PauliRep) -> DensityMatrix:
    """Reconstruct the density matrix; rejects non-PSD results.

    Raises :class:`~qlocc.errors.NotAState` when the reconstruction has an
    eigenvalue below -1e-10 (no silent clamping).
    """
    m = linalg.I4.copy()
    for ai, s in zip(rep.alpha, linalg.PAULI):
        m += ai * linalg.kron(s, linalg.I2)
    for bj, s in zip(rep.beta, linalg.PAULI):
        m += bj * linalg.kron(linalg.I2, s)
    for i, si in enumerate(linalg.PAULI):
        for j, sj in enumerate(linalg.PAULI):
            m += rep.R[i, j] * linalg.kron(si, sj)
    m /= 4.0
    w, _ = linalg.eig_hermitian(m)
    if w.min() < -TOL_STATE:
        raise NotAState(f"reconstruction has eigenvalue {w.min():.3e}")
    return DensityMatrix(m)


def fidelity(rho: DensityMatrix) -> float:
    """Overlap tr(rho S) with the singlet projector."""
    return float(np.trace(rho.mat @ SINGLET_PROJ).real)


@dataclass(frozen=True)
class StateReport:
    """Worst violation magnitude per density-matrix invariant."""

    hermiticity_error: float
    trace_error: float
    min_eigenvalue: float
    ok: bool


def validate(rho: DensityMatrix) -> StateReport:
    """Check Hermiticity, unit trace and positivity; never raises."""
    m = rho.mat
    herm = linalg.frobenius(m - linalg.dagger(m))
    tr = abs(float(np.trace(m).real) - 1.0)
    # PSD is judged on the Hermitian part so the report stays meaningful
    # even for inputs that already fail the first check
    w = np.linalg.eigvalsh((m + linalg.dagger(m)) / 2.0)
    ok = herm <= TOL_STATE and tr <= TOL_STATE and w.min() >= -TOL_STATE
    return StateReport(herm, tr, float(w.min()), ok)


def random_density_matrix(rng: np.random.Generator) -> DensityMatrix:
    """Random full-rank state from the Hilbert-Schmidt ensemble."""
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure_state(rng: np.random.Generator) -> PureState:
    """Haar-random two-qubit state vector."""
    a = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return PureState(a / np.linalg.norm(a))


def random_entangled_bell_diagonal(rng: np.random.Generator) -> DensityMatrix:
    """Random Bell-diagonal state with a dominant component above 1/2."""
    top = 0.5 + 0.5 * rng.random()
    rest = rng.random(3)
    rest = (1.0 - top) * rest / rest.sum()
    p = np.concatenate([[top], rest])
    rng.shuffle(p)
    return make_bell_diagonal(p)


# --- JSON forms: complex entries as [re, im] pairs ---

def _c2pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def density_matrix_to_dict(rho: DensityMatrix) -> dict:
    return {"matrix": [[_c2pair(z) for z in row] for row in rho.mat]}


def density_matrix_from_dict(d: dict) -> DensityMatrix:
    try:
        rows = d["matrix"]
        m = np.array([[complex(c[0], c[1]) for c in row] for row in rows])
    except (KeyError, TypeError, IndexError) as exc:
        raise DomainError(f"malformed density-matrix JSON: {exc}") from exc
    rho = DensityMatrix(m)
    rep = validate(rho)
    if not rep.ok:
        raise NotAState(
            "matrix fails state invariants: "
            f"hermiticity {rep.hermiticity_error:.2e}, trace {rep.trace_error:.2e}, "
            f"min eigenvalue {rep.min_eigenvalue:.2e}"
        )
    return rho


def pauli_rep_to_dict(rep: PauliRep) -> dict:
    return {
        "alpha": [float(x) for x in rep.alpha],
        "beta": [float(x) for x in rep.beta],
        "R": [[float(x) for x in row] for row in rep.R],
    }


def pauli_rep_from_dict(d: dict) -> PauliRep:
    try:
        return PauliRep(d["alpha"], d["beta"], d["R"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed Pauli-representation JSON: {exc}") from exc
