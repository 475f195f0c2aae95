"""Sample moments of an ``n x p`` observation matrix.

Rows are observations, columns are moments. Covariances use divisor ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# A variance is treated as zero when it is below this fraction of the
# corresponding uncentered second moment. Relative, so invariant to rescaling
# columns, and well above the ~1e-16 cancellation error of m2 - mu**2.
VAR_RTOL = 1e-12


def check_data(X) -> np.ndarray:
    """Validate an observation matrix and return it as a float array.

    Raises
    ------
    ValueError
        If ``X`` is not two-dimensional, has fewer than two rows, no columns,
        or contains non-finite entries.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError(f"data must be a 2-d matrix, got shape {X.shape}")
    n, p = X.shape
    if n < 2:
        raise ValueError(f"need at least 2 observations, got n={n}")
    if p < 1:
        raise ValueError("need at least one column")
    if not np.all(np.isfinite(X)):
        raise ValueError("data contains non-finite entries")
    return X


def is_degenerate(var, second_moment):
    """True where a variance is numerically zero relative to its second moment."""
    return np.asarray(var) <= VAR_RTOL * np.asarray(second_moment)


@dataclass(frozen=True)
class SampleMoments:
    mu_hat: np.ndarray
    sigma_hat: np.ndarray
    sigma_diag: np.ndarray
    n: int

    @property
    def p(self) -> int:
        return self.mu_hat.shape[0]


def sample_moments(X) -> SampleMoments:
    """Mean vector and covariance matrix (divisor ``n``) of the rows of ``X``."""
    X = check_data(X)
    n = X.shape[0]
    mu = X.mean(axis=0)
    Xc = X - mu
    sigma = Xc.T @ Xc / n
    sigma = 0.5 * (sigma + sigma.T)
    diag = np.diag(sigma).copy()
    for a in (mu, sigma, diag):
        a.setflags(write=False)
    return SampleMoments(mu_hat=mu, sigma_hat=sigma, sigma_diag=diag, n=n)


def studentize(mu, var, n):
    """Elementwise ``sqrt(n) * mu / sqrt(var)`` with extended-real conventions.

    Where the variance is degenerate the result is ``+inf``, ``-inf`` or ``0``
    according to the sign of ``mu``. Works on arrays of any matching shape.
    """
    mu = np.asarray(mu, dtype=float)
    var = np.maximum(np.asarray(var, dtype=float), 0.0)
    degen = is_degenerate(var, var + mu * mu)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.sqrt(n) * mu / np.sqrt(var)
    if np.any(degen):
        signed_inf = np.where(mu > 0, np.inf, np.where(mu < 0, -np.inf, 0.0))
        t = np.where(degen, signed_inf, t)
    return t


def t_values(m: SampleMoments) -> np.ndarray:
    """Per-column t statistics ``sqrt(n) * mu_j / sigma_j``.

    Columns with zero variance map to ``+inf`` / ``-inf`` / ``0`` by the sign
    of the mean instead of raising.
    """
    return studentize(m.mu_hat, m.sigma_diag, m.n)


def quadratic_form(m: SampleMoments, lam) -> float:
    """``lam' Sigma_hat lam``, with tiny negative rounding clamped to zero."""
    lam = np.asarray(lam, dtype=float)
    q = float(lam @ m.sigma_hat @ lam)
    if q < 0 and q > -1e-12 * float(lam @ lam):
        return 0.0
    return q
