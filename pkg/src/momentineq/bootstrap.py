"""Empirical bootstrap (EB) critical values for max-type statistics.

Rows are resampled with replacement; the bootstrap statistic is the max over
directions of the recentred mean ``sqrt(n) (mu* - mu_hat)'lam``, studentized
by the original-sample standard deviation along ``lam``. Includes the two-step
version with a preliminary selection of inequalities at level ``beta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .moments import check_data, is_degenerate, sample_moments, t_values
from .outcome import TestOutcome
from .statistics import FiniteSet, StatValue, evaluate_finite, reflected_means


@dataclass(frozen=True)
class BootstrapConfig:
    B: int = 1000
    alpha: float = 0.05
    beta: float = 0.001
    seed: int = 0

    def __post_init__(self):
        if self.B < 1:
            raise ValueError("B must be positive")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if not 0 <= self.beta < self.alpha / 2:
            raise ValueError("beta must lie in [0, alpha/2)")


def resample_counts(n: int, B: int, seed) -> np.ndarray:
    """``(B, n)`` multiplicities of each row in ``B`` resamples of size ``n``."""
    rng = np.random.default_rng(seed)
    return rng.multinomial(n, np.full(n, 1.0 / n), size=B)


def order_statistic(W, level: float) -> float:
    """The ``ceil((1 - level) B)``-th smallest of ``W`` (1-based)."""
    B = W.shape[0]
    k = math.ceil(round((1.0 - level) * B, 9))
    k = min(max(k, 1), B)
    return float(np.partition(W, k - 1)[k - 1])


def bootstrap_max_stats(X, spec: FiniteSet, B: int = 1000, seed=0, counts=None) -> np.ndarray:
    """Bootstrap draws ``W_b = max_lam sqrt(n) (mu*_b - mu_hat)'lam / sd(lam)``.

    Directions with zero sample variance are skipped: every resample has the
    same projection on them, so their recentred mean is identically zero. If
    all directions are skipped every ``W_b`` is 0.
    """
    X = check_data(X)
    if not isinstance(spec, FiniteSet):
        raise TypeError("the empirical bootstrap is defined for finite direction sets only")
    n = X.shape[0]
    m = sample_moments(X)
    if counts is None:
        counts = resample_counts(n, B, seed)
    dev = (counts - 1.0) @ X / n

    D = spec.directions
    num = D @ m.mu_hat
    c = spec.unit_coefs()
    rows, cols = spec._unit_rows, spec._unit_cols
    W = np.full(counts.shape[0], -np.inf)

    var_u = m.sigma_diag[cols] * c * c
    ok = ~is_degenerate(var_u, var_u + num[rows] ** 2)
    if ok.any():
        u = np.unique(cols[ok])
        W = np.maximum(W, (dev[:, u] / np.sqrt(m.sigma_diag[u])).max(axis=1))
    for g in spec._general_rows:
        lam = D[g]
        var = float(lam @ m.sigma_hat @ lam)
        if is_degenerate(var, var + num[g] ** 2):
            continue
        W = np.maximum(W, dev @ lam / math.sqrt(var))

    if np.all(np.isneginf(W)):
        return np.zeros(counts.shape[0])
    return math.sqrt(n) * W


def eb_critical_value(X, spec: FiniteSet, level: float, B: int = 1000, seed=0) -> float:
    """EB critical value: the ``1 - level`` empirical quantile of the ``W_b``."""
    return order_statistic(bootstrap_max_stats(X, spec, B, seed), level)


def _eb_outcome(T: StatValue, W, level, alpha, **kw):
    cv = order_statistic(W, level)
    count = int(np.count_nonzero(W >= T.value))
    return TestOutcome(
        statistic=T,
        p_value=(count + 1) / (W.shape[0] + 1),
        reject=bool(T.value > cv),
        alpha=alpha,
        M=W.shape[0],
        method="eb",
        count=count,
        critical_value=cv,
        **kw,
    )


def eb_test(X, spec: FiniteSet, cfg: BootstrapConfig = BootstrapConfig()):
    """Reject ``mu <= 0`` when T_U exceeds the EB critical value at ``alpha``."""
    X = check_data(X)
    T = evaluate_finite(sample_moments(X), spec)
    W = bootstrap_max_stats(X, spec, cfg.B, cfg.seed)
    return _eb_outcome(T, W, cfg.alpha, cfg.alpha, selected=np.arange(X.shape[1]))


def eb_selection_cutoff(X, beta: float, B: int = 1000, seed=0) -> float:
    """Selection cutoff ``c = -2 * c_beta`` from the EB max-t quantile at ``beta``."""
    X = check_data(X)
    return -2.0 * eb_critical_value(X, FiniteSet.coordinates(X.shape[1]), beta, B, seed)


def eb_test_selected(X, spec: FiniteSet, cfg: BootstrapConfig = BootstrapConfig()):
    """Two-step EB test.

    Keep inequalities with ``t_j > -2 c_beta``, then run the EB test on the
    kept columns at level ``alpha - 2 beta``. ``beta = 0`` switches selection
    off. Nothing kept means no rejection.
    """
    X = check_data(X)
    if cfg.beta == 0:
        out = eb_test(X, spec, cfg)
        return replace(out, cutoff=-np.inf)

    c = eb_selection_cutoff(X, cfg.beta, cfg.B, cfg.seed)
    keep = np.flatnonzero(t_values(sample_moments(X)) > c)
    sub = spec.restrict(keep) if keep.size else None
    if sub is None:
        return TestOutcome(statistic=StatValue.zero(), p_value=1.0, reject=False,
                           alpha=cfg.alpha, M=cfg.B, method="eb", selected=keep, cutoff=c)
    Xj = X[:, keep]
    T = evaluate_finite(sample_moments(Xj), sub)
    W = bootstrap_max_stats(Xj, sub, cfg.B, cfg.seed)
    return _eb_outcome(T, W, cfg.alpha - 2 * cfg.beta, cfg.alpha, selected=keep, cutoff=c)


def reflected_selection_cutoffs(X, signs, beta: float, B: int = 1000, seed=0) -> np.ndarray:
    """EB selection cutoff of ``diag(s) X`` for every sign row ``s``.

    The same resampling draws are used for every reflection, so each cutoff
    is a deterministic function of the reflected data.
    """
    X = check_data(X)
    signs = np.asarray(signs, dtype=float)
    n = X.shape[0]
    V = resample_counts(n, B, seed) - 1.0
    # V diag(s) X = V X - 2 V[:, F] X[F] with F the flipped rows
    VX = V @ X
    VT = np.ascontiguousarray(V.T)
    mu, var, _ = reflected_means(X, signs)
    ok = ~is_degenerate(var, var + mu * mu)
    out = np.empty(signs.shape[0])
    for i, s in enumerate(signs):
        cols = np.flatnonzero(ok[i])
        if cols.size == 0:
            out[i] = 0.0
            continue
        F = np.flatnonzero(s < 0)
        Y = VX - 2.0 * (VT[F].T @ X[F]) if F.size else VX
        inv_sd = 1.0 / np.sqrt(var[i, cols])
        if cols.size == X.shape[1]:
            W = (Y * inv_sd).max(axis=1)
        else:
            W = (Y[:, cols] * inv_sd).max(axis=1)
        W *= math.sqrt(n) / n
        out[i] = -2.0 * order_statistic(W, beta)
    return out
