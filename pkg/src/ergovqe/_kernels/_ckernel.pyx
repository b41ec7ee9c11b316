# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops for the variational work-extraction cost.

Every routine works on the *real components* of the input state: ``psi0`` has
shape ``(r, 2**n)`` with ``r == 1`` for real inputs and ``r == 2`` for the
(real, imag) split of a complex input.  All gates in the ansatz are real, so
the components never mix and energies simply add.

The CNOT block of the ansatz is a fixed permutation ``P``; callers fold it into
the Hamiltonian once (``H' = P^T H P``, CSR) so a cost evaluation is only the
y-rotation layer plus a sparse quadratic form.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, isfinite, fabs, M_PI

cnp.import_array()

BACKEND = "cython"


cdef inline void _rotate(double* psi, Py_ssize_t dim, int q, double c, double s) noexcept nogil:
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << q
    cdef Py_ssize_t base, i
    cdef double a0, a1
    base = 0
    while base < dim:
        for i in range(base, base + stride):
            a0 = psi[i]
            a1 = psi[i + stride]
            psi[i] = c * a0 - s * a1
            psi[i + stride] = s * a0 + c * a1
        base += 2 * stride


cdef inline double _quadratic(const double* psi, Py_ssize_t dim, const double* data,
                              const int* indices, const Py_ssize_t* indptr) noexcept nogil:
    cdef Py_ssize_t i, k
    cdef double acc = 0.0, row
    for i in range(dim):
        if psi[i] == 0.0:
            continue
        row = 0.0
        for k in range(indptr[i], indptr[i + 1]):
            row += data[k] * psi[indices[k]]
        acc += psi[i] * row
    return acc


cdef class _Workspace:
    """Scratch buffers for one cost context; not shared between threads."""
    cdef double[:, ::1] psi0
    cdef double[::1] data
    cdef int[::1] indices
    cdef Py_ssize_t[::1] indptr
    cdef double[:, ::1] rotated
    cdef double[::1] shifted
    cdef Py_ssize_t dim
    cdef int n, r

    def __cinit__(self, psi0, data, indices, indptr):
        self.psi0 = np.ascontiguousarray(psi0, dtype=np.float64)
        self.data = np.ascontiguousarray(data, dtype=np.float64)
        self.indices = np.ascontiguousarray(indices, dtype=np.intc)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.intp)
        self.r = self.psi0.shape[0]
        self.dim = self.psi0.shape[1]
        self.n = 0
        while ((<Py_ssize_t>1) << self.n) < self.dim:
            self.n += 1
        self.rotated = np.empty((self.r, self.dim), dtype=np.float64)
        self.shifted = np.empty(self.dim, dtype=np.float64)

    cdef void rotate_all(self, const double* theta) noexcept nogil:
        cdef int c, q
        for c in range(self.r):
            self.rotated[c, :] = self.psi0[c, :]
            for q in range(self.n):
                _rotate(&self.rotated[c, 0], self.dim, q, cos(theta[q]), sin(theta[q]))

    cdef double energy_rotated(self) noexcept nogil:
        cdef int c
        cdef double e = 0.0
        for c in range(self.r):
            e += _quadratic(&self.rotated[c, 0], self.dim, &self.data[0],
                            &self.indices[0], &self.indptr[0])
        return e

    cdef void gradient_rotated(self, double* out) noexcept nogil:
        # W(theta + pi/4 e_j) - W(theta - pi/4 e_j), built from the rotated state
        # because R_y(a) R_y(b) = R_y(a + b) on the same qubit.
        cdef int c, q
        cdef double quarter = 0.25 * M_PI
        cdef double cq = cos(quarter), sq = sin(quarter)
        cdef double eplus, eminus
        for q in range(self.n):
            eplus = 0.0
            eminus = 0.0
            for c in range(self.r):
                self.shifted[:] = self.rotated[c, :]
                _rotate(&self.shifted[0], self.dim, q, cq, sq)
                eplus += _quadratic(&self.shifted[0], self.dim, &self.data[0],
                                    &self.indices[0], &self.indptr[0])
                self.shifted[:] = self.rotated[c, :]
                _rotate(&self.shifted[0], self.dim, q, cq, -sq)
                eminus += _quadratic(&self.shifted[0], self.dim, &self.data[0],
                                     &self.indices[0], &self.indptr[0])
            out[q] = eminus - eplus


def energy(psi0, data, indices, indptr, theta):
    """Energy of the rotated state under the (conjugated) Hamiltonian."""
    cdef _Workspace ws = _Workspace(psi0, data, indices, indptr)
    cdef double[::1] th = np.ascontiguousarray(theta, dtype=np.float64)
    ws.rotate_all(&th[0])
    return ws.energy_rotated()


def shift_gradient(psi0, data, indices, indptr, theta):
    """Parameter-shift gradient of W = E_ref - E (the offset drops out)."""
    cdef _Workspace ws = _Workspace(psi0, data, indices, indptr)
    cdef double[::1] th = np.ascontiguousarray(theta, dtype=np.float64)
    out = np.empty(ws.n, dtype=np.float64)
    cdef double[::1] g = out
    ws.rotate_all(&th[0])
    ws.gradient_rotated(&g[0])
    return out


def ascend(psi0, data, indices, indptr, double e_ref, theta0, double step,
           int max_iters, double tol, int window):
    """Fixed-step gradient ascent on W.

    Returns ``(w_hist, theta_hist, iterations, converged, finite)``.  Histories
    hold ``iterations + 1`` rows (row 0 is the starting point).
    """
    cdef _Workspace ws = _Workspace(psi0, data, indices, indptr)
    cdef int n = ws.n
    w_arr = np.empty(max_iters + 1, dtype=np.float64)
    th_arr = np.empty((max_iters + 1, n), dtype=np.float64)
    g_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] w_hist = w_arr
    cdef double[:, ::1] th_hist = th_arr
    cdef double[::1] g = g_arr
    cdef int t, q, s
    cdef bint converged = False, finite = True
    cdef double biggest

    th_arr[0] = theta0
    with nogil:
        ws.rotate_all(&th_hist[0, 0])
        w_hist[0] = e_ref - ws.energy_rotated()
        t = 0
        if not isfinite(w_hist[0]):
            finite = False
        while finite and t < max_iters:
            ws.gradient_rotated(&g[0])
            for q in range(n):
                if not isfinite(g[q]):
                    finite = False
            if not finite:
                break
            t += 1
            for q in range(n):
                th_hist[t, q] = th_hist[t - 1, q] + step * g[q]
            ws.rotate_all(&th_hist[t, 0])
            w_hist[t] = e_ref - ws.energy_rotated()
            if not isfinite(w_hist[t]):
                finite = False
                break
            if t >= window:
                biggest = 0.0
                for s in range(t - window + 1, t + 1):
                    if fabs(w_hist[s] - w_hist[s - 1]) > biggest:
                        biggest = fabs(w_hist[s] - w_hist[s - 1])
                if biggest < tol:
                    converged = True
                    break
    return w_arr[:t + 1].copy(), th_arr[:t + 1].copy(), t, bool(converged), bool(finite)


def energies(psi0, data, indices, indptr, thetas):
    """Energies for every row of ``thetas`` (shape ``(B, n)``)."""
    cdef _Workspace ws = _Workspace(psi0, data, indices, indptr)
    cdef double[:, ::1] th = np.ascontiguousarray(thetas, dtype=np.float64)
    out = np.empty(th.shape[0], dtype=np.float64)
    cdef double[::1] e = out
    cdef Py_ssize_t b
    with nogil:
        for b in range(th.shape[0]):
            ws.rotate_all(&th[b, 0])
            e[b] = ws.energy_rotated()
    return out


def shift_gradients(psi0, data, indices, indptr, thetas):
    """Parameter-shift gradients for every row of ``thetas``."""
    cdef _Workspace ws = _Workspace(psi0, data, indices, indptr)
    cdef double[:, ::1] th = np.ascontiguousarray(thetas, dtype=np.float64)
    out = np.empty((th.shape[0], ws.n), dtype=np.float64)
    cdef double[:, ::1] g = out
    cdef Py_ssize_t b
    with nogil:
        for b in range(th.shape[0]):
            ws.rotate_all(&th[b, 0])
            ws.gradient_rotated(&g[b, 0])
    return out
