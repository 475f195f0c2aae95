"""Sign-reflection randomization tests, with and without inequality selection.

Under ``mu = 0`` and errors whose rows are symmetric about zero, flipping the
sign of any subset of rows leaves the distribution of the data unchanged. The
rank of the observed statistic among its reflected copies then yields an exact
p-value. Reflections are sampled without replacement, always including the
identity.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import ClassVar

import numpy as np

from . import bootstrap
from .moments import check_data
from .outcome import TestOutcome
from .statistics import (
    StatisticSpec,
    StatValue,
    evaluate,
    reflected_t_values,
    reflection_values,
)


@dataclass(frozen=True, eq=False)
class ReflectionPlan:
    """``M`` distinct sign vectors of length ``n``; row 0 is all ones."""

    signs: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.signs, dtype=np.int8)
        if s.ndim != 2 or s.shape[0] < 1:
            raise ValueError("signs must be a non-empty (M, n) array")
        if not np.all(np.abs(s) == 1):
            raise ValueError("signs must be +1 or -1")
        if not np.all(s[0] == 1):
            raise ValueError("the first reflection must be the identity")
        s.setflags(write=False)
        object.__setattr__(self, "signs", s)

    @property
    def M(self) -> int:
        return self.signs.shape[0]

    @property
    def n(self) -> int:
        return self.signs.shape[1]


def _codes_to_signs(codes, n):
    bits = (np.asarray(codes, dtype=np.uint64)[:, None] >> np.arange(n, dtype=np.uint64)) & 1
    return (1 - 2 * bits.astype(np.int8)).astype(np.int8)


def sample_reflections(n: int, M: int, seed: int = 0) -> ReflectionPlan:
    """Identity plus ``M - 1`` distinct non-identity sign vectors.

    Deterministic in ``seed``. For ``n <= 62`` sign patterns are bit-packed
    integers and drawn without replacement exactly. For larger ``n`` draws are
    i.i.d. with duplicates (and the identity) rejected, which is the same
    distribution.
    """
    if n < 1 or M < 1:
        raise ValueError("n and M must be positive")
    rng = np.random.default_rng(seed)
    if n <= 62:
        total = 1 << n
        if M > total:
            raise ValueError(f"group exhausted: M={M} exceeds 2^n={total}")
        if total <= 1 << 20 and 2 * M > total:
            codes = rng.choice(total - 1, size=M - 1, replace=False) + 1
        else:
            seen = {0}
            codes = []
            while len(codes) < M - 1:
                for c in rng.integers(1, total, size=M - 1 - len(codes), dtype=np.int64):
                    c = int(c)
                    if c not in seen:
                        seen.add(c)
                        codes.append(c)
        signs = np.vstack([np.ones((1, n), np.int8), _codes_to_signs(codes, n)])
        return ReflectionPlan(signs)

    rows = [np.ones(n, np.int8)]
    seen = {rows[0].tobytes()}
    while len(rows) < M:
        for r in (1 - 2 * rng.integers(0, 2, size=(M - len(rows), n), dtype=np.int8)):
            key = r.tobytes()
            if key not in seen:
                seen.add(key)
                rows.append(r)
    return ReflectionPlan(np.vstack(rows))


def apply_reflection(X, s) -> np.ndarray:
    """Flip the sign of row ``i`` of ``X`` wherever ``s[i] == -1``."""
    X = np.asarray(X, dtype=float)
    s = np.asarray(s)
    if s.shape != (X.shape[0],):
        raise ValueError("sign vector length must equal the number of rows")
    return X * s[:, None]


def _check_alpha(alpha):
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def _outcome(values, statistic, alpha, **kw) -> TestOutcome:
    # values[0] belongs to the identity, so count >= 1; inf >= inf and 0 >= 0
    count = int(np.count_nonzero(values >= values[0]))
    M = values.shape[0]
    p = count / M
    return TestOutcome(
        statistic=statistic,
        p_value=p,
        reject=p <= alpha,
        alpha=alpha,
        M=M,
        count=count,
        n_infinite_reflections=int(np.count_nonzero(np.isinf(values))),
        values=values,
        **kw,
    )


def randomization_test(X, spec: StatisticSpec, plan: ReflectionPlan, alpha: float = 0.05) -> TestOutcome:
    """Symmetry randomization test of ``mu <= 0`` (no selection).

    The p-value is the fraction of planned reflections ``R`` with
    ``T(RX) >= T(X)``; the null is rejected when it is at most ``alpha``.
    """
    X = check_data(X)
    _check_alpha(alpha)
    if plan.n != X.shape[0]:
        raise ValueError(f"plan is for n={plan.n}, data has n={X.shape[0]}")
    values = reflection_values(X, spec, plan.signs)
    return _outcome(values, evaluate(X, spec), alpha)


# -- selection rules -------------------------------------------------------------

@dataclass(frozen=True)
class KeepAll:
    def cutoffs(self, X, signs):
        return None


@dataclass(frozen=True)
class FixedCutoff:
    """Keep columns with ``t_j > c`` for a constant ``c``."""

    c: float

    def cutoffs(self, X, signs):
        return np.full(signs.shape[0], float(self.c))


@dataclass(frozen=True)
class EBCutoff:
    """Keep columns with ``t_j > c(X)``, ``c`` from the empirical bootstrap.

    ``c = -2 * (1 - beta)`` EB quantile of the max t statistic, recomputed on
    every reflected dataset with the same resampling draws, so the selected
    set is a function of the reflected data alone.

    With ``per_reflection=False`` the cutoff of the observed data is reused
    for every reflection; faster, but the selection map is then no longer a
    function of the reflected data.
    """

    beta: float = 0.001
    B: int = 1000
    seed: int = 0
    per_reflection: bool = True

    def cutoffs(self, X, signs):
        if self.per_reflection:
            return bootstrap.reflected_selection_cutoffs(X, signs, self.beta, self.B, self.seed)
        c = bootstrap.eb_selection_cutoff(X, self.beta, self.B, self.seed)
        return np.full(signs.shape[0], c)


@dataclass(frozen=True)
class ObservedSet:
    """Select ``J(X)`` with the EB cutoff once and keep it on every reflection.

    The reflected statistics are ``T(R X_J(X))``. The selected set is then not
    a function of the reflected data, so the exactness argument for selection
    does not cover this variant. It is provided for comparison only.
    """

    beta: float = 0.001
    B: int = 1000
    seed: int = 0
    freeze_selection: ClassVar[bool] = True

    def cutoffs(self, X, signs):
        c = bootstrap.eb_selection_cutoff(X, self.beta, self.B, self.seed)
        return np.full(signs.shape[0], c)


SelectionRule = KeepAll | FixedCutoff | EBCutoff | ObservedSet


def randomization_test_selected(X, spec: StatisticSpec, selector: SelectionRule,
                                plan: ReflectionPlan, alpha: float = 0.05) -> TestOutcome:
    """Randomization test where inequalities are selected on each reflection.

    For every reflection ``R`` the selection rule is applied to ``RX`` and the
    statistic is computed on the kept columns only (``0`` if none are kept).
    """
    X = check_data(X)
    _check_alpha(alpha)
    if plan.n != X.shape[0]:
        raise ValueError(f"plan is for n={plan.n}, data has n={X.shape[0]}")
    signs = plan.signs.astype(float)
    cutoffs = selector.cutoffs(X, signs)
    if cutoffs is None:
        out = randomization_test(X, spec, plan, alpha)
        return replace(out, selected=np.arange(X.shape[1]))

    mask = reflected_t_values(X, signs) > cutoffs[:, None]
    if getattr(selector, "freeze_selection", False):
        mask = np.repeat(mask[:1], mask.shape[0], axis=0)
    values = reflection_values(X, spec, signs, mask=mask)
    selected = np.flatnonzero(mask[0])
    sub = spec.restrict(selected)
    statistic = StatValue.zero() if sub is None else evaluate(X[:, selected], sub)
    return _outcome(values, statistic, alpha, selected=selected, cutoff=float(cutoffs[0]))
