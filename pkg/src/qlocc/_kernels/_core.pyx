# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled hot kernels.

An allocation-free 4x4 complex eigensolver (Householder Hessenberg
reduction followed by explicitly shifted QR with Wilkinson shifts) plus
the filtered-concurrence objective evaluated by the no-go search. The
pure-Python twin lives in ``_fallback``; both expose the same API.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs, frexp, ldexp, sqrt

from qlocc.errors import ConvergenceFailure, SpectrumError

cnp.import_array()

ctypedef double complex dc

cdef double MACH_EPS = 2.220446049250313e-16
cdef double IM_TOL = 1e-9
cdef double NEG_TOL = 1e-9
# eigenvalues below this times the largest one are numerically zero;
# flooring them keeps sqrt from amplifying solver noise to sqrt(eps)
cdef double ZERO_FLOOR_FACTOR = 100.0
# deflation margin: a subdiagonal this many eps below the local diagonal
# scale is negligible; too tight a margin lets entries creep at the noise
# floor without ever deflating
cdef double K_DEFLATE = 8.0
# absolute deflation floor on the prescaled (unit max-entry) matrix: the
# explicit QR sweeps themselves carry eps * norm rounding, so subdiagonals
# at that level are indistinguishable from zero even when the local
# diagonal entries are far smaller (heavily non-normal inputs)
cdef double ABS_DEFLATE_FLOOR = 4.0 * 2.220446049250313e-16
# concurrence below this is eigensolver noise around zero; snapped to zero
# just as max(0, .) snaps the negative side
cdef double CONC_NOISE = 1e-14
cdef int MAX_ITER = 200

BACKEND_NAME = "cython"


cdef inline double cmod(dc z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef inline dc csqrt_(dc z) nogil:
    # principal branch; adequate accuracy for shift computation
    cdef double r = cmod(z)
    cdef double x, y
    if r == 0.0:
        return 0
    x = sqrt(0.5 * (r + z.real))
    y = sqrt(0.5 * (r - z.real))
    if z.imag < 0.0:
        y = -y
    return x + 1j * y


cdef void _hessenberg(dc h[4][4]) nogil:
    # Householder reduction to upper Hessenberg form, columns 0 and 1.
    cdef int k, i, j, L
    cdef dc v[3]
    cdef dc alpha, s
    cdef double nrm, vnrm, a0
    for k in range(2):
        L = 3 - k
        nrm = 0.0
        for i in range(L):
            nrm += h[k + 1 + i][k].real ** 2 + h[k + 1 + i][k].imag ** 2
        nrm = sqrt(nrm)
        if nrm == 0.0:
            continue
        a0 = cmod(h[k + 1][k])
        if a0 == 0.0:
            alpha = -nrm
        else:
            alpha = -(h[k + 1][k] / a0) * nrm
        for i in range(L):
            v[i] = h[k + 1 + i][k]
        v[0] = v[0] - alpha
        vnrm = 0.0
        for i in range(L):
            vnrm += v[i].real ** 2 + v[i].imag ** 2
        if vnrm == 0.0:
            continue
        vnrm = sqrt(vnrm)
        for i in range(L):
            v[i] = v[i] / vnrm
        # left: rows k+1..3 <- (I - 2 v v+) rows
        for j in range(4):
            s = 0
            for i in range(L):
                s = s + v[i].conjugate() * h[k + 1 + i][j]
            for i in range(L):
                h[k + 1 + i][j] = h[k + 1 + i][j] - 2.0 * v[i] * s
        # right: cols k+1..3 <- cols (I - 2 v v+)
        for i in range(4):
            s = 0
            for j in range(L):
                s = s + h[i][k + 1 + j] * v[j]
            for j in range(L):
                h[i][k + 1 + j] = h[i][k + 1 + j] - 2.0 * s * v[j].conjugate()
        h[k + 1][k] = alpha
        for i in range(k + 2, 4):
            h[i][k] = 0


cdef void _eig2(dc a, dc b, dc c, dc d, dc *l1, dc *l2) nogil:
    # eigenvalues of [[a, b], [c, d]], larger magnitude first
    cdef dc half = 0.5 * (a + d)
    cdef dc det = a * d - b * c
    cdef dc rad = csqrt_(half * half - det)
    cdef dc w1 = half + rad
    cdef dc w2 = half - rad
    if cmod(w1) >= cmod(w2):
        l1[0] = w1
        l2[0] = det / w1 if cmod(w1) > 0.0 else w2
    else:
        l1[0] = w2
        l2[0] = det / w2 if cmod(w2) > 0.0 else w1


cdef int _eigvals4(dc h[4][4], dc *w) nogil:
    # Eigenvalues of a general 4x4 complex matrix into w[0..3].
    # Returns 0 on success, 1 if the sweep budget is exceeded.
    cdef int hi, l, i, j, it_total = 0, stall = 0, expo = 0
    cdef dc mu, l1, l2, f, g, tmp
    cdef double thresh, af, d_, mmax, av
    cdef double cg[3]
    cdef dc sg[3]
    # exact power-of-two prescale: keeps squared magnitudes away from
    # underflow and overflow at extreme input scales
    mmax = 0.0
    for i in range(4):
        for j in range(4):
            av = fabs(h[i][j].real)
            if av > mmax:
                mmax = av
            av = fabs(h[i][j].imag)
            if av > mmax:
                mmax = av
    if mmax == 0.0:
        for i in range(4):
            w[i] = 0
        return 0
    frexp(mmax, &expo)
    for i in range(4):
        for j in range(4):
            h[i][j] = ldexp(h[i][j].real, -expo) + 1j * ldexp(h[i][j].imag, -expo)
    _hessenberg(h)
    hi = 3
    while hi >= 0:
        if it_total > MAX_ITER:
            return 1
        # locate the start l of the active trailing block [l..hi]
        l = hi
        while l > 0:
            thresh = K_DEFLATE * MACH_EPS * (cmod(h[l - 1][l - 1]) + cmod(h[l][l]))
            if thresh < ABS_DEFLATE_FLOOR:
                thresh = ABS_DEFLATE_FLOOR
            if cmod(h[l][l - 1]) <= thresh:
                h[l][l - 1] = 0
                break
            l -= 1
        if l == hi:
            w[hi] = h[hi][hi]
            hi -= 1
            stall = 0
            continue
        if l == hi - 1 and stall > 40:
            # pathological (defective) 2x2 window: fall back to the closed
            # form; iterating is preferred since it resolves nearly equal
            # pairs to full precision instead of sqrt(eps)
            _eig2(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi], &l1, &l2)
            w[hi - 1] = l1
            w[hi] = l2
            hi -= 2
            stall = 0
            continue
        it_total += 1
        stall += 1
        _eig2(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi], &l1, &l2)
        mu = l1 if cmod(l1 - h[hi][hi]) <= cmod(l2 - h[hi][hi]) else l2
        if stall % 16 == 0:
            # exceptional shift to break rare stagnation
            mu = h[hi][hi] + 0.75 * cmod(h[hi][hi - 1])
        for i in range(l, hi + 1):
            h[i][i] = h[i][i] - mu
        # QR of the window by complex Givens rotations on each subdiagonal
        for i in range(l, hi):
            f = h[i][i]
            g = h[i + 1][i]
            if cmod(g) == 0.0:
                cg[i - l] = 1.0
                sg[i - l] = 0
                continue
            af = cmod(f)
            d_ = sqrt(af * af + g.real * g.real + g.imag * g.imag)
            if af == 0.0:
                cg[i - l] = 0.0
                sg[i - l] = g.conjugate() / cmod(g)
            else:
                cg[i - l] = af / d_
                sg[i - l] = (f / af) * g.conjugate() / d_
            for j in range(i, hi + 1):
                tmp = cg[i - l] * h[i][j] + sg[i - l] * h[i + 1][j]
                h[i + 1][j] = -sg[i - l].conjugate() * h[i][j] + cg[i - l] * h[i + 1][j]
                h[i][j] = tmp
            h[i + 1][i] = 0
        # RQ: apply the adjoint rotations from the right
        for i in range(l, hi):
            for j in range(l, hi + 1):
                tmp = h[j][i] * cg[i - l] + h[j][i + 1] * sg[i - l].conjugate()
                h[j][i + 1] = -h[j][i] * sg[i - l] + h[j][i + 1] * cg[i - l]
                h[j][i] = tmp
        for i in range(l, hi + 1):
            h[i][i] = h[i][i] + mu
    for i in range(4):
        w[i] = ldexp(w[i].real, expo) + 1j * ldexp(w[i].imag, expo)
    return 0


cdef int _concurrence4(dc rho[4][4], double *c_out) nogil:
    # 0 ok, 1 no convergence, 2 imaginary-part violation, 3 negative-part violation
    cdef dc rt[4][4]
    cdef dc pr[4][4]
    cdef dc w[4]
    cdef double lam[4]
    cdef double yv[4]
    cdef dc s
    cdef double re, key, wmax, floor_
    cdef int i, j, k
    yv[0] = -1.0
    yv[1] = 1.0
    yv[2] = 1.0
    yv[3] = -1.0
    # rho~ = (sy x sy) conj(rho) (sy x sy), entrywise sign-flipped anti-transpose
    for i in range(4):
        for j in range(4):
            rt[i][j] = yv[i] * yv[j] * rho[3 - i][3 - j].conjugate()
    for i in range(4):
        for j in range(4):
            s = 0
            for k in range(4):
                s = s + rho[i][k] * rt[k][j]
            pr[i][j] = s
    if _eigvals4(pr, w):
        return 1
    wmax = 0.0
    for i in range(4):
        if fabs(w[i].imag) > IM_TOL:
            return 2
        re = w[i].real
        if re < -NEG_TOL:
            return 3
        if fabs(re) > wmax:
            wmax = fabs(re)
    floor_ = ZERO_FLOOR_FACTOR * MACH_EPS * wmax
    for i in range(4):
        re = w[i].real
        lam[i] = sqrt(re) if re >= floor_ else 0.0
    # insertion sort, descending
    for i in range(1, 4):
        key = lam[i]
        j = i - 1
        while j >= 0 and lam[j] < key:
            lam[j + 1] = lam[j]
            j -= 1
        lam[j + 1] = key
    c_out[0] = lam[0] - lam[1] - lam[2] - lam[3]
    if c_out[0] < CONC_NOISE:
        c_out[0] = 0.0
    return 0


cdef int _gain_one(dc rho[4][4], double c_in, double a, double nx, double ny, double nz,
                   double b, double mx, double my, double mz, double tol_prob,
                   double *gain, double *t_out) nogil:
    cdef dc fa[2][2]
    cdef dc fb[2][2]
    cdef dc K[4][4]
    cdef dc tm[4][4]
    cdef dc ru[4][4]
    cdef dc s
    cdef double nu = 1.0 / (1.0 + a)
    cdef double mu = 1.0 / (1.0 + b)
    cdef double t, c
    cdef int i, j, k, p, q, r, u, status
    fa[0][0] = nu * (1.0 + a * nz)
    fa[0][1] = nu * a * (nx - 1j * ny)
    fa[1][0] = nu * a * (nx + 1j * ny)
    fa[1][1] = nu * (1.0 - a * nz)
    fb[0][0] = mu * (1.0 + b * mz)
    fb[0][1] = mu * b * (mx - 1j * my)
    fb[1][0] = mu * b * (mx + 1j * my)
    fb[1][1] = mu * (1.0 - b * mz)
    for p in range(2):
        for q in range(2):
            for r in range(2):
                for u in range(2):
                    K[2 * p + q][2 * r + u] = fa[p][r] * fb[q][u]
    # ru = K rho K (filters Hermitian, so K is too)
    for i in range(4):
        for j in range(4):
            s = 0
            for k in range(4):
                s = s + K[i][k] * rho[k][j]
            tm[i][j] = s
    for i in range(4):
        for j in range(4):
            s = 0
            for k in range(4):
                s = s + tm[i][k] * K[k][j]
            ru[i][j] = s
    t = ru[0][0].real + ru[1][1].real + ru[2][2].real + ru[3][3].real
    t_out[0] = t
    if t <= tol_prob:
        gain[0] = -INFINITY
        return 0
    for i in range(4):
        for j in range(4):
            ru[i][j] = ru[i][j] / t
    status = _concurrence4(ru, &c)
    if status:
        return status
    gain[0] = c - c_in
    return 0


cdef int _load4(object m, dc h[4][4]) except -1:
    cdef cnp.ndarray[dc, ndim=2] arr = np.ascontiguousarray(m, dtype=np.complex128)
    cdef int i, j
    if arr.shape[0] != 4 or arr.shape[1] != 4:
        raise ValueError("expected a 4x4 matrix")
    for i in range(4):
        for j in range(4):
            h[i][j] = arr[i, j]
    return 0


cdef object _raise_status(int status):
    if status == 1:
        raise ConvergenceFailure("4x4 eigenvalue iteration exceeded its sweep budget")
    if status == 2:
        raise SpectrumError(f"eigenvalue imaginary part exceeds {IM_TOL}")
    if status == 3:
        raise SpectrumError(f"eigenvalue real part below -{NEG_TOL}")


def eigvals4x4(m):
    """Unordered eigenvalues of a 4x4 complex matrix."""
    cdef dc h[4][4]
    cdef dc w[4]
    cdef int i
    _load4(m, h)
    if _eigvals4(h, w):
        raise ConvergenceFailure("4x4 eigenvalue iteration exceeded its sweep budget")
    out = np.empty(4, dtype=np.complex128)
    for i in range(4):
        out[i] = w[i]
    return out


def concurrence4(m):
    """Concurrence of a normalized two-qubit density matrix (4x4 array)."""
    cdef dc rho[4][4]
    cdef double c = 0.0
    cdef int status
    _load4(m, rho)
    status = _concurrence4(rho, &c)
    if status:
        _raise_status(status)
    return c


def filter_gain_single(m, double c_in, double a, n, double b, mv, double tol_prob=1e-14):
    """Concurrence gain and success probability for one filter pair."""
    cdef dc rho[4][4]
    cdef double gain = 0.0, t = 0.0
    cdef double nx, ny, nz, mx, my, mz
    cdef int status
    _load4(m, rho)
    nx, ny, nz = float(n[0]), float(n[1]), float(n[2])
    mx, my, mz = float(mv[0]), float(mv[1]), float(mv[2])
    status = _gain_one(rho, c_in, a, nx, ny, nz, b, mx, my, mz, tol_prob, &gain, &t)
    if status:
        _raise_status(status)
    return gain, t


def filter_gain_batch(m, double c_in, a, n, b, mv, double tol_prob=1e-14):
    """Batched version of :func:`filter_gain_single` over parameter arrays."""
    cdef dc rho[4][4]
    cdef double gain = 0.0, t = 0.0
    cdef int status
    cdef Py_ssize_t i, N
    _load4(m, rho)
    cdef cnp.ndarray[double, ndim=1] aa = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] nn = np.ascontiguousarray(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] bb = np.ascontiguousarray(b, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] mm = np.ascontiguousarray(mv, dtype=np.float64)
    N = aa.shape[0]
    if nn.shape[0] != N or bb.shape[0] != N or mm.shape[0] != N:
        raise ValueError("parameter arrays must share their leading dimension")
    if nn.shape[1] != 3 or mm.shape[1] != 3:
        raise ValueError("axis arrays must have shape (N, 3)")
    cdef cnp.ndarray[double, ndim=1] gains = np.empty(N, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] ts = np.empty(N, dtype=np.float64)
    for i in range(N):
        status = _gain_one(rho, c_in, aa[i], nn[i, 0], nn[i, 1], nn[i, 2],
                           bb[i], mm[i, 0], mm[i, 1], mm[i, 2], tol_prob, &gain, &t)
        if status:
            _raise_status(status)
        gains[i] = gain
        ts[i] = t
    return gains, ts
