"""Spin-flip operation, concurrence, entanglement of formation, invariants.

The spin flip sends rho to (sy x sy) conj(rho) (sy x sy), with conjugation
taken in the basis where sz is diagonal. The descending square roots of the
eigenvalues of rho * rho~ form the lambda spectrum; concurrence is
max(0, l1 - l2 - l3 - l4) and the entanglement of formation follows from it
through the binary entropy. Ratios of the lambdas are unchanged by any
invertible local filtering, which makes them single-copy invariants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qlocc import _kernels, linalg
from qlocc.errors import SpectrumError
from qlocc.states import DensityMatrix

_YY = linalg.kron(linalg.SY, linalg.SY)


@dataclass(frozen=True)
class LambdaSpectrum:
    """Four nonnegative reals, descending; squares are eigenvalues of rho*rho~."""

    lambdas: tuple[float, float, float, float]


@dataclass(frozen=True)
class InvariantRatios:
    """(l2/l1, l3/l1, l4/l1); zeros when the whole spectrum vanishes."""

    ratios: tuple[float, float, float]


def spin_flip_operator(o: np.ndarray) -> np.ndarray:
    """Tilde of an operator: sy O* sy for 2x2, (sy x sy) O* (sy x sy) for 4x4."""
    o = np.asarray(o, dtype=np.complex128)
    if o.shape == (2, 2):
        return linalg.SY @ o.conj() @ linalg.SY
    if o.shape == (4, 4):
        return _YY @ o.conj() @ _YY
    raise ValueError("expected a 2x2 or 4x4 operator")


def spin_flip(rho: DensityMatrix) -> DensityMatrix:
    """Spin-flipped state rho~; again a valid density matrix."""
    return DensityMatrix(spin_flip_operator(rho.mat))


def lambda_spectrum(rho: DensityMatrix) -> LambdaSpectrum:
    """Descending square roots of the eigenvalues of rho * rho~.

    Eigenvalues are clamped per policy: imaginary parts within 1e-9 are
    dropped, real parts in [-1e-9, 0) are set to zero, and values below
    the eigensolver's resolution (relative to the largest eigenvalue) are
    zero as well, so exact zeros do not pick up sqrt(eps) noise. Larger
    violations raise :class:`~qlocc.errors.SpectrumError`.
    """
    w = linalg.eig_general(rho.mat @ spin_flip(rho).mat)
    reals = []
    for z in w:
        if abs(z.imag) > _kernels.IM_TOL:
            raise SpectrumError(f"eigenvalue {z} has imaginary part beyond {_kernels.IM_TOL}")
        if z.real < -_kernels.NEG_TOL:
            raise SpectrumError(f"eigenvalue {z} has real part below -{_kernels.NEG_TOL}")
        reals.append(z.real)
    floor = _kernels.ZERO_FLOOR_FACTOR * np.finfo(float).eps * max(map(abs, reals))
    lams = sorted((math.sqrt(re) if re >= floor else 0.0 for re in reals), reverse=True)
    return LambdaSpectrum(tuple(lams))


def concurrence(rho: DensityMatrix) -> float:
    """max(0, l1 - l2 - l3 - l4) from the lambda spectrum; in [0, 1].

    Values below the noise scale of the eigensolve are returned as exactly
    zero, the positive-side counterpart of the max with zero.
    """
    l1, l2, l3, l4 = lambda_spectrum(rho).lambdas
    c = l1 - l2 - l3 - l4
    if c < _kernels.CONC_NOISE:
        return 0.0
    return min(1.0, c)


def binary_entropy(p: float) -> float:
    """-p log2 p - (1-p) log2 (1-p), with the endpoint limit value 0."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def eof_from_concurrence(c: float) -> float:
    """Entanglement of formation as a function of concurrence."""
    c = min(1.0, max(0.0, c))
    return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - c * c)))


def entanglement_of_formation(rho: DensityMatrix) -> float:
    """Entanglement of formation in [0, 1]; strictly increasing in concurrence."""
    return eof_from_concurrence(concurrence(rho))


def invariant_ratios(rho: DensityMatrix) -> InvariantRatios:
    """Lambda ratios normalized by the largest entry."""
    lams = lambda_spectrum(rho).lambdas
    if lams[0] == 0.0:
        return InvariantRatios((0.0, 0.0, 0.0))
    return InvariantRatios(tuple(l / lams[0] for l in lams[1:]))
