"""The T_U statistic family: max studentized non-negative combinations of means.

``T_U = sqrt(n) * max_{lam in U} mu_hat'lam / sqrt(lam' Sigma_hat lam)``

Two kinds of direction set are supported: a finite set of non-negative
directions (``t_max``, ``t_max`` plus the all-ones vector, or a custom list),
and the whole non-negative orthant, whose maximizer comes from a non-negative
least squares fit of the ones vector on the data.

Values live on the extended half-line. A statistic is ``0`` when no admissible
direction has a positive mean (in particular when ``mu_hat <= 0``) and ``inf``
when some direction with a positive mean has zero sample variance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .moments import SampleMoments, check_data, is_degenerate, sample_moments, studentize
from .nnls import nnls

ZERO = "zero"
FINITE = "finite"
INFINITE = "infinite"


@dataclass(frozen=True, eq=False)
class StatValue:
    tag: str
    value: float
    maximizer: np.ndarray | None = None

    @property
    def condition_violated(self) -> bool:
        return self.tag == INFINITE

    @classmethod
    def zero(cls):
        return cls(ZERO, 0.0)

    @classmethod
    def infinite(cls, lam=None):
        return cls(INFINITE, np.inf, lam)

    @classmethod
    def finite(cls, value, lam):
        return cls(FINITE, float(value), lam)

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "value": self.value if np.isfinite(self.value) else "inf",
            "maximizer": None if self.maximizer is None else self.maximizer.tolist(),
            "condition_violated": self.condition_violated,
        }


def tag_of(value: float) -> str:
    if value == 0:
        return ZERO
    return INFINITE if np.isinf(value) else FINITE


@dataclass(frozen=True, eq=False)
class FiniteSet:
    """A finite set of non-negative, nonzero directions (rows of ``directions``)."""

    directions: np.ndarray
    name: str = "custom"
    # rows with a single nonzero entry are handled through the diagonal of
    # Sigma_hat; the rest need a full quadratic form
    _unit_rows: np.ndarray = field(init=False, repr=False)
    _unit_cols: np.ndarray = field(init=False, repr=False)
    _general_rows: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        D = np.atleast_2d(np.asarray(self.directions, dtype=float))
        if D.shape[0] == 0 or D.size == 0:
            raise ValueError("empty U")
        if not np.all(np.isfinite(D)) or np.any(D < 0):
            raise ValueError("directions must be finite and non-negative")
        nnz = np.count_nonzero(D, axis=1)
        if np.any(nnz == 0):
            raise ValueError("directions must be nonzero")
        D.setflags(write=False)
        object.__setattr__(self, "directions", D)
        unit = np.flatnonzero(nnz == 1)
        object.__setattr__(self, "_unit_rows", unit)
        object.__setattr__(self, "_unit_cols", np.argmax(D[unit] != 0, axis=1))
        object.__setattr__(self, "_general_rows", np.flatnonzero(nnz > 1))

    @property
    def p(self) -> int:
        return self.directions.shape[1]

    @classmethod
    def coordinates(cls, p: int) -> "FiniteSet":
        """``{e_1, ..., e_p}``: the direction set of ``t_max``."""
        return cls(np.eye(p), name="tmax")

    @classmethod
    def coordinates_and_ones(cls, p: int) -> "FiniteSet":
        """``{e_1, ..., e_p, 1_p}``: one extra direction on top of ``t_max``."""
        return cls(np.vstack([np.eye(p), np.ones((1, p))]), name="tmax-iota")

    def restrict(self, cols) -> "FiniteSet | None":
        """Directions restricted to ``cols``; rows that vanish are dropped."""
        D = self.directions[:, np.asarray(cols, dtype=int)]
        D = D[np.any(D != 0, axis=1)]
        if D.shape[0] == 0 or D.shape[1] == 0:
            return None
        return FiniteSet(D, name=self.name)

    def unit_coefs(self) -> np.ndarray:
        return self.directions[self._unit_rows, self._unit_cols]


@dataclass(frozen=True)
class NonNegativeOrthant:
    """``U = R_+^p``; the resulting statistic is written T_plus."""

    name: str = "tplus"

    def restrict(self, cols) -> "NonNegativeOrthant | None":
        return self if len(cols) else None


StatisticSpec = FiniteSet | NonNegativeOrthant


def make_spec(name: str, p: int) -> StatisticSpec:
    """Build a statistic spec from its short name: tmax, tmax-iota or tplus."""
    if name == "tmax":
        return FiniteSet.coordinates(p)
    if name in ("tmax-iota", "tmax_iota"):
        return FiniteSet.coordinates_and_ones(p)
    if name in ("tplus", "t+"):
        return NonNegativeOrthant()
    raise ValueError(f"unknown statistic {name!r}")


def _direction_moments(m: SampleMoments, spec: FiniteSet):
    D = spec.directions
    num = D @ m.mu_hat
    var = np.empty(D.shape[0])
    c = spec.unit_coefs()
    var[spec._unit_rows] = c * c * m.sigma_diag[spec._unit_cols]
    G = D[spec._general_rows]
    var[spec._general_rows] = np.einsum("kp,pq,kq->k", G, m.sigma_hat, G)
    return num, np.maximum(var, 0.0)


def evaluate_finite(m: SampleMoments, spec: FiniteSet) -> StatValue:
    """T_U for a finite direction set; ties go to the lowest-index direction."""
    if not isinstance(spec, FiniteSet):
        raise TypeError("evaluate_finite needs a FiniteSet")
    if spec.p != m.p:
        raise ValueError(f"directions have {spec.p} columns, data has {m.p}")
    if np.all(m.mu_hat <= 0):
        return StatValue.zero()
    num, var = _direction_moments(m, spec)
    live = np.flatnonzero(num > 0)
    if live.size == 0:
        return StatValue.zero()
    degen = live[is_degenerate(var[live], var[live] + num[live] ** 2)]
    if degen.size:
        return StatValue.infinite(spec.directions[degen[0]].copy())
    ratio = num[live] / np.sqrt(var[live])
    best = live[int(np.argmax(ratio))]
    return StatValue.finite(np.sqrt(m.n) * ratio.max(), spec.directions[best].copy())


def _t_plus(A, s) -> StatValue:
    """T_plus of the data ``diag(s) @ A`` for a sign vector ``s``.

    Uses ``||1 - diag(s) A lam|| = ||s - A lam||`` so reflections never need
    a reflected copy of ``A``.
    """
    n = A.shape[0]
    lam, _ = nnls(A, s)
    if not np.any(lam > 0):
        return StatValue.zero()
    fit = s * (A @ lam)
    d = fit.mean()
    centered = fit - d
    q = centered @ centered / n
    if is_degenerate(q, fit @ fit / n):
        return StatValue.infinite(lam)
    if d <= 0:
        raise ArithmeticError("NNLS optimality violated: mu_hat'lam <= 0 at the optimum")
    return StatValue.finite(np.sqrt(n) * d / np.sqrt(q), lam)


def evaluate_t_plus(X) -> StatValue:
    """T_plus = T_U over the whole non-negative orthant, via NNLS of 1_n on X."""
    X = check_data(X)
    return _t_plus(X, np.ones(X.shape[0]))


def evaluate(X, spec: StatisticSpec) -> StatValue:
    X = check_data(X)
    if isinstance(spec, NonNegativeOrthant):
        return evaluate_t_plus(X)
    return evaluate_finite(sample_moments(X), spec)


def t_star_transform(t, n: int):
    """``t / sqrt(1 + t^2 / n)``, mapping ``[0, inf]`` onto ``[0, sqrt(n)]``."""
    t = np.asarray(t, dtype=float)
    with np.errstate(invalid="ignore"):
        out = np.where(np.isinf(t), np.sqrt(n), t / np.sqrt(1.0 + t * t / n))
    return out if out.ndim else float(out)


# -- batched evaluation over sign reflections --------------------------------

def reflected_means(X, signs):
    """Means and variances of ``diag(s) X`` for every row ``s`` of ``signs``.

    ``(RX)'(RX) = X'X`` so only the means change; variances follow as
    ``diag(X'X)/n - mean^2``.
    """
    n = X.shape[0]
    mu = (signs @ X) / n
    m2 = np.einsum("ij,ij->j", X, X) / n
    return mu, np.maximum(m2 - mu * mu, 0.0), m2


def reflected_t_values(X, signs):
    mu, var, _ = reflected_means(X, signs)
    return studentize(mu, var, X.shape[0])


def _finite_reflection_values(X, spec: FiniteSet, signs, mask):
    n = X.shape[0]
    mu, var, m2 = reflected_means(X, signs)
    M = signs.shape[0]
    k = spec.directions.shape[0]
    num = np.empty((M, k))
    dvar = np.empty((M, k))
    second = np.empty((M, k))

    rows, cols, c = spec._unit_rows, spec._unit_cols, spec.unit_coefs()
    num[:, rows] = mu[:, cols] * c
    dvar[:, rows] = var[:, cols] * (c * c)
    second[:, rows] = m2[cols] * (c * c)
    if mask is not None:
        num[:, rows] = np.where(mask[:, cols], num[:, rows], 0.0)

    for g in spec._general_rows:
        lam = spec.directions[g]
        if mask is None:
            num[:, g] = mu @ lam
            xl = X @ lam
            second[:, g] = xl @ xl / n
        else:
            L = mask * lam
            num[:, g] = np.einsum("mp,mp->m", mu, L)
            XL = X @ L.T
            second[:, g] = np.einsum("im,im->m", XL, XL) / n
        dvar[:, g] = np.maximum(second[:, g] - num[:, g] ** 2, 0.0)

    live = num > 0
    degen = live & is_degenerate(dvar, second)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(live & ~degen, num / np.sqrt(dvar), -np.inf)
    best = ratio.max(axis=1)
    out = np.where(np.isfinite(best), np.sqrt(n) * best, 0.0)
    out[degen.any(axis=1)] = np.inf
    return out


def reflection_values(X, spec: StatisticSpec, signs, mask=None) -> np.ndarray:
    """Statistic values of ``diag(s) X`` for each sign row of ``signs``.

    Parameters
    ----------
    X : ndarray, shape (n, p)
    spec : FiniteSet or NonNegativeOrthant
    signs : ndarray, shape (M, n)
        Entries in {-1, +1}.
    mask : ndarray of bool, shape (M, p), optional
        Columns kept for each reflection; a reflection with no kept columns
        gets the statistic 0.

    Returns
    -------
    ndarray, shape (M,)
        Values in ``[0, inf]``.
    """
    X = check_data(X)
    signs = np.asarray(signs, dtype=float)
    if signs.ndim != 2 or signs.shape[1] != X.shape[0]:
        raise ValueError("signs must have shape (M, n)")
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (signs.shape[0], X.shape[1]):
            raise ValueError("mask must have shape (M, p)")

    if isinstance(spec, FiniteSet):
        if spec.p != X.shape[1]:
            raise ValueError(f"directions have {spec.p} columns, data has {X.shape[1]}")
        return _finite_reflection_values(X, spec, signs, mask)

    out = np.empty(signs.shape[0])
    for i, s in enumerate(signs):
        if mask is None:
            out[i] = _t_plus(X, s).value
        else:
            cols = np.flatnonzero(mask[i])
            out[i] = _t_plus(X[:, cols], s).value if cols.size else 0.0
    return out


# -- diagnostics ---------------------------------------------------------------

@dataclass(frozen=True)
class CopositivityCheck:
    """Outcome of a cheap sufficient check for copositivity of Sigma_hat.

    ``status`` is ``"positive"`` (every entry > 0), ``"submatrix-positive"``
    (removing the indices in ``removed`` leaves a positive principal
    submatrix of size >= 2) or ``"unknown"``.
    """

    status: str
    removed: tuple = ()

    def to_dict(self):
        return {"status": self.status, "removed": list(self.removed)}


def check_copositivity_sufficient(m: SampleMoments) -> CopositivityCheck:
    S = m.sigma_hat
    bad = S <= 0
    if not bad.any():
        return CopositivityCheck("positive")
    keep = np.ones(m.p, dtype=bool)
    removed = []
    while True:
        counts = (bad & keep[None, :] & keep[:, None]).sum(axis=1)
        counts[~keep] = -1
        worst = int(np.argmax(counts))
        if counts[worst] <= 0:
            break
        keep[worst] = False
        removed.append(worst)
    if keep.sum() >= 2:
        return CopositivityCheck("submatrix-positive", tuple(sorted(removed)))
    return CopositivityCheck("unknown")
