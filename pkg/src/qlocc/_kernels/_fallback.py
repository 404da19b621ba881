"""Pure-Python (numpy) implementation of the hot kernels.

Selected at import time when the compiled core is unavailable or when
``QLOCC_PURE_PYTHON`` is set. Must mirror ``_core`` exactly: 4x4 complex
eigenvalues, concurrence of a normalized state, and the filtered-gain
objective used by the no-go search.
"""

from __future__ import annotations

import numpy as np

from qlocc.errors import ConvergenceFailure, SpectrumError

BACKEND_NAME = "python"

# Clamp policy for the spectrum of rho * rho~: the product of two PSD
# matrices has a nonnegative real spectrum exactly; anything beyond these
# bounds signals a bug rather than conditioning. Values below the
# eigensolver's own resolution (ZERO_FLOOR_FACTOR * eps relative to the
# largest eigenvalue) are indistinguishable from zero and are set to zero,
# which keeps the square roots of exact zeros from turning into sqrt(eps)
# noise.
IM_TOL = 1e-9
NEG_TOL = 1e-9
ZERO_FLOOR_FACTOR = 100.0
# concurrence below this is eigensolver noise around zero; snapped to zero
# just as max(0, .) snaps the negative side
CONC_NOISE = 1e-14
_EPS = float(np.finfo(np.float64).eps)

_SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_PAULI = np.stack([_SX, _SY, _SZ])
_I2 = np.eye(2, dtype=np.complex128)
# kron(sy, sy) is real: antidiagonal (-1, 1, 1, -1)
_YY = np.kron(_SY, _SY).real


def eigvals4x4(m):
    """Unordered eigenvalues of a 4x4 complex matrix."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.shape != (4, 4):
        raise ValueError("expected a 4x4 matrix")
    try:
        return np.linalg.eigvals(arr)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails at 4x4
        raise ConvergenceFailure(str(exc)) from exc


def _sqrt_spectrum(w):
    """Descending square roots of clamped eigenvalues of rho * rho~."""
    if w.size and float(np.abs(w.imag).max()) > IM_TOL:
        raise SpectrumError(
            f"eigenvalue imaginary part {np.abs(w.imag).max():.3e} exceeds {IM_TOL}"
        )
    re = w.real
    if re.size and float(re.min()) < -NEG_TOL:
        raise SpectrumError(f"eigenvalue real part {re.min():.3e} below -{NEG_TOL}")
    floor = ZERO_FLOOR_FACTOR * _EPS * np.abs(re).max(axis=-1, keepdims=True)
    lam = np.sqrt(np.where(re < floor, 0.0, re))
    return np.sort(lam, axis=-1)[..., ::-1]


def concurrence4(rho):
    """Concurrence of a normalized two-qubit density matrix (4x4 array)."""
    rho = np.asarray(rho, dtype=np.complex128)
    rt = _YY @ rho.conj() @ _YY
    lam = _sqrt_spectrum(eigvals4x4(rho @ rt))
    c = float(2.0 * lam[0] - lam.sum())
    return c if c >= CONC_NOISE else 0.0


def _filter_mats(a, n):
    """Stack of 2x2 filters (1 + a n.sigma)/(1 + a) for strengths a, axes n."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    n = np.atleast_2d(np.asarray(n, dtype=float))
    nu = 1.0 / (1.0 + a)
    ns = np.einsum("nk,kij->nij", n, _PAULI)
    return nu[:, None, None] * (_I2[None, :, :] + a[:, None, None] * ns)


def filter_gain_batch(rho, c_in, a, n, b, m, tol_prob=1e-14):
    """Concurrence gain and success probability for a batch of filter pairs.

    The scale of each filter is pinned to its maximum 1/(1+strength); it
    cancels between the transformed state and its normalization, so the
    gain does not depend on it. Entries whose branch probability falls at
    or below ``tol_prob`` get gain -inf (the branch filters out).
    """
    rho = np.asarray(rho, dtype=np.complex128)
    fa = _filter_mats(a, n)
    fb = _filter_mats(b, m)
    K = np.einsum("nab,ncd->nacbd", fa, fb).reshape(-1, 4, 4)
    # filters are Hermitian, so K rho K is the transformed (unnormalized) state
    ru = K @ rho @ K
    t = np.einsum("nii->n", ru).real
    gains = np.full(t.shape, -np.inf)
    ok = t > tol_prob
    if ok.any():
        rf = ru[ok] / t[ok, None, None]
        rt = _YY @ rf.conj() @ _YY
        lam = _sqrt_spectrum(np.linalg.eigvals(rf @ rt))
        c = 2.0 * lam[:, 0] - lam.sum(axis=1)
        gains[ok] = np.where(c >= CONC_NOISE, c, 0.0) - c_in
    return gains, t


def filter_gain_single(rho, c_in, a, n, b, m, tol_prob=1e-14):
    """Single-point version of :func:`filter_gain_batch`."""
    gains, t = filter_gain_batch(rho, c_in, [a], [n], [b], [m], tol_prob)
    return float(gains[0]), float(t[0])
