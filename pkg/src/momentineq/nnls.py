"""Lawson-Hanson active-set solver for non-negative least squares."""

from __future__ import annotations

import numpy as np
from scipy.linalg.lapack import dtrtrs


class NNLSConvergenceError(RuntimeError):
    """Raised when the active-set loop exceeds its iteration budget.

    The best iterate found so far is attached as ``lam``.
    """

    def __init__(self, message, lam):
        super().__init__(message)
        self.lam = lam


def kkt_tolerance(A, b) -> float:
    return max(1e-8 * float(np.max(np.abs(A.T @ b), initial=0.0)), 1e-12)


class _PassiveQR:
    """Thin QR factorization of the passive columns, grown one column at a time.

    Orthogonalization is classical Gram-Schmidt with one re-orthogonalization
    pass, which keeps ``Q`` orthonormal to working precision.
    """

    def __init__(self, A, b):
        self.A = A
        self.b = b
        n = A.shape[0]
        kmax = min(A.shape)
        self.Q = np.empty((n, kmax))
        self.R = np.zeros((kmax, kmax))
        self.qb = np.empty(kmax)
        self.cols = []

    def append(self, j) -> bool:
        k = len(self.cols)
        if k == self.Q.shape[1]:
            return False
        a = self.A[:, j]
        Q = self.Q[:, :k]
        r = Q.T @ a
        v = a - Q @ r
        r2 = Q.T @ v
        v -= Q @ r2
        r += r2
        rho = float(np.sqrt(v @ v))
        if rho <= 1e-12 * float(np.sqrt(a @ a)):
            return False
        self.Q[:, k] = v / rho
        self.R[:k, k] = r
        self.R[k, :k] = 0.0
        self.R[k, k] = rho
        self.qb[k] = self.Q[:, k] @ self.b
        self.cols.append(j)
        return True

    def pop(self):
        self.cols.pop()

    def rebuild(self, cols):
        self.cols = []
        for j in cols:
            self.append(j)

    def solve(self):
        k = len(self.cols)
        z, info = dtrtrs(self.R[:k, :k], self.qb[:k])
        if info != 0:
            raise np.linalg.LinAlgError("singular passive-set factor")
        return z


def nnls(A, b, max_iter=None, tol=None):
    """Solve ``min ||b - A lam||_2`` subject to ``lam >= 0``.

    Parameters
    ----------
    A : array_like, shape (n, p)
    b : array_like, shape (n,)
    max_iter : int, optional
        Budget of active-set iterations (default ``3 * p``).
    tol : float, optional
        Dual feasibility tolerance; defaults to ``1e-8 * ||A'b||_inf``
        (floored at ``1e-12``).

    Returns
    -------
    lam : ndarray, shape (p,)
    residual : ndarray, shape (n,)
        ``b - A @ lam``.

    Raises
    ------
    NNLSConvergenceError
        If the iteration budget is exhausted.

    Notes
    -----
    Classic Lawson & Hanson (1974), chapter 23. Columns enter the passive set
    by largest dual value; infeasible least-squares steps are cut back to the
    boundary and the blocking variables leave.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n, p = A.shape
    if b.shape != (n,):
        raise ValueError(f"b has shape {b.shape}, expected ({n},)")
    if max_iter is None:
        max_iter = 3 * p
    if tol is None:
        tol = kkt_tolerance(A, b)

    lam = np.zeros(p)
    passive = np.zeros(p, dtype=bool)
    qr = _PassiveQR(A, b)
    w = A.T @ b
    it = 0

    while True:
        cand = np.where(passive, -np.inf, w)
        t = int(np.argmax(cand))
        if cand[t] <= tol:
            break
        if it >= max_iter:
            raise NNLSConvergenceError(
                f"NNLS did not converge in {max_iter} iterations", lam.copy())

        if not qr.append(t):
            # numerically dependent on the passive columns
            w[t] = 0.0
            continue
        z = qr.solve()
        if z[-1] <= 0:
            # no descent along the entering column in floating point
            qr.pop()
            w[t] = 0.0
            continue
        passive[t] = True

        while True:
            it += 1
            cols = np.array(qr.cols)
            if np.all(z > 0):
                lam[cols] = z
                break
            if it >= max_iter:
                raise NNLSConvergenceError(
                    f"NNLS did not converge in {max_iter} iterations", lam.copy())
            x = lam[cols]
            blocking = np.flatnonzero(z <= 0)
            ratios = x[blocking] / (x[blocking] - z[blocking])
            x = x + ratios.min() * (z - x)
            leave = np.zeros(cols.size, dtype=bool)
            leave[blocking] = x[blocking] <= 1e-15 * max(1.0, float(np.max(x)))
            # the minimizing ratio hits zero exactly in exact arithmetic
            leave[blocking[np.argmin(ratios)]] = True
            x[leave] = 0.0
            lam[cols] = x
            qr.rebuild(cols[~leave])
            kept = np.zeros(p, dtype=bool)
            kept[qr.cols] = True
            lam[passive & ~kept] = 0.0
            passive = kept
            if not qr.cols:
                break
            z = qr.solve()

        w = A.T @ (b - A @ lam)

    return lam, b - A @ lam
