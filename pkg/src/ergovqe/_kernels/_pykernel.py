"""Pure numpy implementation of the hot loops (same API as ``_ckernel``).

The shifted states of one gradient step are stacked into a single batch so the
quadratic forms reduce to one matrix product per step.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

_QUARTER = math.pi / 4


def _csr_to_dense(data, indices, indptr, dim):
    dense = np.zeros((dim, dim))
    rows = np.repeat(np.arange(dim), np.diff(indptr))
    dense[rows, indices] = data
    return dense


class _Workspace:
    def __init__(self, psi0, data, indices, indptr):
        self.psi0 = np.ascontiguousarray(psi0, dtype=np.float64)
        self.dim = self.psi0.shape[1]
        self.n = self.dim.bit_length() - 1
        self.h = _csr_to_dense(np.asarray(data, dtype=np.float64), np.asarray(indices),
                               np.asarray(indptr), self.dim)

    def rotate(self, batch, q, c, s):
        """Rotate qubit ``q`` of every row in ``batch`` (shape ``(B, dim)``)."""
        view = batch.reshape(batch.shape[0], -1, 2, 1 << q)
        a0 = view[:, :, 0, :].copy()
        a1 = view[:, :, 1, :]
        view[:, :, 0, :] = c * a0 - s * a1
        view[:, :, 1, :] = s * a0 + c * a1

    def rotate_all(self, theta):
        psi = self.psi0.copy()
        for q in range(self.n):
            self.rotate(psi, q, math.cos(theta[q]), math.sin(theta[q]))
        return psi

    def energy_of(self, batch):
        return np.einsum("bi,bi->b", batch @ self.h, batch)

    def gradient(self, rotated):
        r = rotated.shape[0]
        n = self.n
        # rows: [q, sign, component]
        batch = np.broadcast_to(rotated, (n, 2, r, self.dim)).copy()
        c, s = math.cos(_QUARTER), math.sin(_QUARTER)
        for q in range(n):
            block = batch[q]
            self.rotate(block[0], q, c, s)
            self.rotate(block[1], q, c, -s)
        energies = self.energy_of(batch.reshape(-1, self.dim)).reshape(n, 2, r).sum(axis=2)
        return energies[:, 1] - energies[:, 0]


def energy(psi0, data, indices, indptr, theta):
    ws = _Workspace(psi0, data, indices, indptr)
    return float(ws.energy_of(ws.rotate_all(np.asarray(theta, dtype=np.float64))).sum())


def shift_gradient(psi0, data, indices, indptr, theta):
    ws = _Workspace(psi0, data, indices, indptr)
    return ws.gradient(ws.rotate_all(np.asarray(theta, dtype=np.float64)))


def energies(psi0, data, indices, indptr, thetas):
    ws = _Workspace(psi0, data, indices, indptr)
    return np.array([ws.energy_of(ws.rotate_all(th)).sum() for th in np.asarray(thetas, dtype=np.float64)])


def shift_gradients(psi0, data, indices, indptr, thetas):
    ws = _Workspace(psi0, data, indices, indptr)
    thetas = np.asarray(thetas, dtype=np.float64)
    out = np.empty((len(thetas), ws.n))
    for b, th in enumerate(thetas):
        out[b] = ws.gradient(ws.rotate_all(th))
    return out


def ascend(psi0, data, indices, indptr, e_ref, theta0, step, max_iters, tol, window):
    ws = _Workspace(psi0, data, indices, indptr)
    n = ws.n
    w_hist = np.empty(max_iters + 1)
    th_hist = np.empty((max_iters + 1, n))
    th_hist[0] = theta0
    rotated = ws.rotate_all(th_hist[0])
    w_hist[0] = e_ref - ws.energy_of(rotated).sum()
    t = 0
    converged = False
    finite = bool(np.isfinite(w_hist[0]))
    while finite and t < max_iters:
        g = ws.gradient(rotated)
        if not np.all(np.isfinite(g)):
            finite = False
            break
        t += 1
        th_hist[t] = th_hist[t - 1] + step * g
        rotated = ws.rotate_all(th_hist[t])
        w_hist[t] = e_ref - ws.energy_of(rotated).sum()
        if not np.isfinite(w_hist[t]):
            finite = False
            break
        if t >= window and np.max(np.abs(np.diff(w_hist[t - window:t + 1]))) < tol:
            converged = True
            break
    return w_hist[:t + 1].copy(), th_hist[:t + 1].copy(), t, converged, finite
