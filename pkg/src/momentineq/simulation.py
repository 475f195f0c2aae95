"""Monte Carlo designs: data generation and rejection-rate experiments.

Data are ``X = 1_n mu' + E A`` where ``E`` has i.i.d. unit-variance entries
and ``A'A`` is the AR(1) correlation matrix ``rho^|i-j|``. Four mean designs
cover binding, slack, violated and mixed inequalities.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy import stats

from .bootstrap import BootstrapConfig, eb_test, eb_test_selected
from .randomization import EBCutoff, ObservedSet, randomization_test, randomization_test_selected, sample_reflections
from .statistics import INFINITE, make_spec

log = logging.getLogger(__name__)

_SN_C = (4.0 - math.pi) / 2.0
# supremum of the skew-normal skewness, reached as the shape goes to infinity
SKEW_MAX = _SN_C * (2.0 / math.pi) ** 1.5 / (1.0 - 2.0 / math.pi) ** 1.5


# -- error distributions -------------------------------------------------------

@dataclass(frozen=True)
class StudentT4Scaled:
    """Student t with 4 degrees of freedom divided by sqrt(2): variance 1."""

    name: str = field(default="t4", init=False)

    def sample(self, rng, size):
        return rng.standard_t(4, size=size) / math.sqrt(2.0)

    def pdf(self, x):
        r2 = math.sqrt(2.0)
        return stats.t.pdf(np.asarray(x) * r2, df=4) * r2


def skew_normal_params(gamma: float):
    """Location, scale and shape of the skew-normal with mean 0, variance 1
    and skewness ``gamma``.

    Returns
    -------
    xi, omega, a : float
    """
    if not abs(gamma) < SKEW_MAX:
        raise ValueError(f"|skewness| must be below {SKEW_MAX:.5f}, got {gamma}")
    g23 = abs(gamma) ** (2.0 / 3.0)
    delta = math.copysign(math.sqrt(math.pi / 2.0 * g23 / (g23 + _SN_C ** (2.0 / 3.0))), gamma)
    a = delta / math.sqrt(1.0 - delta * delta)
    omega = 1.0 / math.sqrt(1.0 - 2.0 * delta * delta / math.pi)
    xi = -omega * delta * math.sqrt(2.0 / math.pi)
    return xi, omega, a


def skew_normal_moments(xi: float, omega: float, a: float):
    """Mean, variance and skewness of a skew-normal distribution."""
    delta = a / math.sqrt(1.0 + a * a)
    b = delta * math.sqrt(2.0 / math.pi)
    mean = xi + omega * b
    var = omega * omega * (1.0 - b * b)
    skew = _SN_C * b ** 3 / (1.0 - b * b) ** 1.5
    return mean, var, skew


@dataclass(frozen=True)
class SkewNormal:
    """Skew-normal errors standardized to mean 0 and variance 1."""

    gamma: float

    def __post_init__(self):
        skew_normal_params(self.gamma)

    @property
    def name(self) -> str:
        return f"skewnormal:{self.gamma:g}"

    def sample(self, rng, size):
        xi, omega, a = skew_normal_params(self.gamma)
        delta = a / math.sqrt(1.0 + a * a)
        u0 = np.abs(rng.standard_normal(size))
        u1 = rng.standard_normal(size)
        return xi + omega * (delta * u0 + math.sqrt(1.0 - delta * delta) * u1)

    def pdf(self, x):
        xi, omega, a = skew_normal_params(self.gamma)
        return stats.skewnorm.pdf(np.asarray(x, dtype=float), a, loc=xi, scale=omega)


ErrorDist = StudentT4Scaled | SkewNormal


def parse_dist(text: str) -> ErrorDist:
    """``t4`` or ``skewnormal:<gamma>`` (alias ``sn:<gamma>``)."""
    text = text.strip().lower()
    if text in ("t4", "t4scaled", "student-t4"):
        return StudentT4Scaled()
    kind, _, arg = text.partition(":")
    if kind in ("skewnormal", "sn") and arg:
        return SkewNormal(float(arg))
    raise ValueError(f"unknown error distribution {text!r}")


def draw_errors(dist: ErrorDist, n: int, p: int, seed) -> np.ndarray:
    return dist.sample(np.random.default_rng(seed), (n, p))


def density_curve(dist: ErrorDist, grid):
    """``(x, pdf(x))`` pairs over ``grid``."""
    grid = np.asarray(grid, dtype=float)
    return list(zip(grid.tolist(), np.asarray(dist.pdf(grid)).tolist()))


# -- design ----------------------------------------------------------------------

def ar1_factor(p: int, rho: float) -> np.ndarray:
    """Upper-triangular ``A`` with ``A'A = [rho^|i-j|]``.

    Closed form: ``A' = L`` with ``L[i, j] = rho^(i-j) c_j`` for ``i >= j``,
    where ``c_0 = 1`` and ``c_j = sqrt(1 - rho^2)``; this is the AR(1)
    recursion ``x_i = rho x_{i-1} + sqrt(1 - rho^2) e_i``.
    """
    if not -1.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (-1, 1), got {rho}")
    i = np.arange(p)
    lag = i[:, None] - i[None, :]
    L = np.where(lag >= 0, float(rho) ** np.maximum(lag, 0), 0.0)
    c = np.full(p, math.sqrt(1.0 - rho * rho))
    c[0] = 1.0
    return np.ascontiguousarray((L * c[None, :]).T)


@lru_cache(maxsize=8)
def _cached_factor(p, rho):
    A = ar1_factor(p, rho)
    A.setflags(write=False)
    return A


def generate_design_mu(design: int, n: int, p: int) -> np.ndarray:
    """Mean vector of a design.

    1: all zero. 2: a block of zeros, the rest negative. 3: all positive.
    4: a block of positive entries, the rest negative. Block size is
    ``0.1 p`` for ``n = 400`` and 10 for ``n = 30``; designs 2-4 are only
    defined for those two sample sizes.
    """
    if design == 1:
        return np.zeros(p)
    if design not in (2, 3, 4):
        raise ValueError(f"unknown design {design}")
    if n == 400:
        k, lo, hi = int(round(0.1 * p)), -0.8, 0.0
        if design == 3:
            return np.full(p, 0.01)
        if design == 4:
            lo, hi = -0.75, 0.02
    elif n == 30:
        k, lo, hi = 10, -5.0, 0.0
        if design == 3:
            return np.full(p, 0.03)
        if design == 4:
            hi = 0.3
    else:
        raise ValueError(f"no paper mu defined for design {design} with n={n}; pass mu explicitly")
    mu = np.full(p, lo)
    mu[:min(k, p)] = hi
    return mu


def derive_seed(seed: int, *keys: int) -> int:
    """64-bit seed for the substream ``(seed, *keys)``."""
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1, np.uint64)[0])


SELECTION_MODES = ("per-reflection", "fixed", "observed-set")


@dataclass(frozen=True)
class DesignConfig:
    n: int
    p: int
    rho: float = 0.0
    design: int = 1
    dist: ErrorDist = StudentT4Scaled()
    reps: int = 1000
    M: int = 1000
    B: int = 1000
    alpha: float = 0.05
    beta: float = 0.001
    seed: int = 0
    # "per-reflection" recomputes the EB selection cutoff on each reflected
    # dataset; "fixed" reuses the observed-data cutoff (fast mode);
    # "observed-set" keeps the observed selected columns on every reflection
    # (not covered by the exactness argument; for comparison only)
    selection: str = "per-reflection"
    mu: tuple | None = None

    def __post_init__(self):
        if self.n < 2 or self.p < 1:
            raise ValueError("need n >= 2 and p >= 1")
        if not -1.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (-1, 1), got {self.rho}")
        if self.reps < 1 or self.M < 1 or self.B < 1:
            raise ValueError("reps, M and B must be positive")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.selection not in SELECTION_MODES:
            raise ValueError(f"unknown selection mode {self.selection!r}")
        if self.mu is not None and len(self.mu) != self.p:
            raise ValueError("mu must have length p")

    def mean_vector(self) -> np.ndarray:
        if self.mu is not None:
            return np.asarray(self.mu, dtype=float)
        return generate_design_mu(self.design, self.n, self.p)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["dist"] = self.dist.name
        return d


def generate_dataset(cfg: DesignConfig, rep: int) -> np.ndarray:
    E = draw_errors(cfg.dist, cfg.n, cfg.p, derive_seed(cfg.seed, rep, 0))
    X = E if cfg.rho == 0 else E @ _cached_factor(cfg.p, cfg.rho)
    return X + cfg.mean_vector()[None, :]


# -- experiments -----------------------------------------------------------------

STATISTICS = ("tmax", "tmax-iota", "tplus")


def parse_test(label: str):
    """Split ``"sr-tmax-iota-sel"`` into ``("sr", "tmax-iota", True)``."""
    method, _, rest = label.partition("-")
    sel = rest.endswith("-sel")
    stat = rest[:-4] if sel else rest
    if method not in ("sr", "eb") or stat not in STATISTICS:
        raise ValueError(f"unknown test {label!r}")
    if method == "eb" and stat == "tplus":
        raise ValueError("no empirical bootstrap test for tplus")
    return method, stat, sel


def run_test(X, label: str, cfg: DesignConfig, rep: int, plan=None):
    """Run one labelled test on one dataset; returns the TestOutcome."""
    method, stat, sel = parse_test(label)
    n, p = X.shape
    spec = make_spec(stat, p)
    if method == "eb":
        bcfg = BootstrapConfig(B=cfg.B, alpha=cfg.alpha, beta=cfg.beta, seed=derive_seed(cfg.seed, rep, 2))
        return eb_test_selected(X, spec, bcfg) if sel else eb_test(X, spec, bcfg)
    if plan is None:
        plan = sample_reflections(n, cfg.M, derive_seed(cfg.seed, rep, 1))
    if not sel:
        return randomization_test(X, spec, plan, cfg.alpha)
    sel_seed = derive_seed(cfg.seed, rep, 3)
    if cfg.selection == "observed-set":
        selector = ObservedSet(beta=cfg.beta, B=cfg.B, seed=sel_seed)
    else:
        selector = EBCutoff(beta=cfg.beta, B=cfg.B, seed=sel_seed,
                            per_reflection=cfg.selection == "per-reflection")
    return randomization_test_selected(X, spec, selector, plan, cfg.alpha)


def _run_rep(cfg: DesignConfig, rep: int, tests):
    X = generate_dataset(cfg, rep)
    plan = None
    if any(t.startswith("sr-") for t in tests):
        plan = sample_reflections(cfg.n, cfg.M, derive_seed(cfg.seed, rep, 1))
    out = {}
    for label in tests:
        t0 = time.perf_counter()
        try:
            res = run_test(X, label, cfg, rep, plan)
            out[label] = (bool(res.reject), res.statistic.tag == INFINITE,
                          res.n_infinite_reflections / res.M if res.method == "sr" else 0.0,
                          None, time.perf_counter() - t0)
        except Exception as exc:  # recorded per rep; a cell never aborts
            out[label] = (False, False, 0.0, f"{type(exc).__name__}: {exc}", time.perf_counter() - t0)
    return out


@dataclass
class CellResult:
    cfg: DesignConfig
    tests: tuple
    rates: dict
    n_errors: dict
    n_infinite: dict
    inf_reflection_frac: dict
    mean_seconds: dict
    errors: dict

    def rows(self):
        """Flat records, one per test, in the shared CSV schema.

        Timings are left out so that the records are reproducible bit for
        bit; they are available in ``mean_seconds``.
        """
        out = []
        for label in self.tests:
            method, stat, sel = parse_test(label)
            out.append({
                "n": self.cfg.n, "p": self.cfg.p, "rho": self.cfg.rho,
                "design": self.cfg.design, "dist": self.cfg.dist.name,
                "test": f"{method}-{stat}", "sel": int(sel),
                "rejection_rate": self.rates[label],
                "n_errors": self.n_errors[label],
                "n_infinite": self.n_infinite[label],
                "reps": self.cfg.reps,
                "inf_reflection_frac": self.inf_reflection_frac[label],
            })
        return out

    def to_dict(self) -> dict:
        return {"config": self.cfg.to_dict(), "tests": list(self.tests), "rows": self.rows(),
                "mean_seconds": self.mean_seconds, "errors": self.errors}


def run_cell(cfg: DesignConfig, tests, n_jobs: int = 1, progress=None) -> CellResult:
    """Monte Carlo rejection rates of ``tests`` over ``cfg.reps`` datasets.

    Results depend only on ``cfg`` (each replication draws from its own
    seed substream), not on ``n_jobs``.
    """
    tests = tuple(tests)
    if not tests:
        raise ValueError("no tests requested")
    for t in tests:
        parse_test(t)

    if n_jobs == 1:
        results = []
        for rep in range(cfg.reps):
            results.append(_run_rep(cfg, rep, tests))
            if progress is not None:
                progress(rep + 1, cfg.reps)
    else:
        from joblib import Parallel, delayed

        results = Parallel(n_jobs=n_jobs)(delayed(_run_rep)(cfg, rep, tests) for rep in range(cfg.reps))
        if progress is not None:
            progress(cfg.reps, cfg.reps)

    rates, n_err, n_inf, frac, secs, errors = {}, {}, {}, {}, {}, {}
    for label in tests:
        recs = [r[label] for r in results]
        rates[label] = sum(r[0] for r in recs) / cfg.reps
        n_inf[label] = sum(r[1] for r in recs)
        frac[label] = float(np.mean([r[2] for r in recs]))
        n_err[label] = sum(r[3] is not None for r in recs)
        secs[label] = float(np.mean([r[4] for r in recs]))
        msgs = sorted({r[3] for r in recs if r[3] is not None})
        if msgs:
            errors[label] = msgs[:5]
            log.warning("%s: %d replications failed (%s)", label, n_err[label], msgs[0])
    return CellResult(cfg, tests, rates, n_err, n_inf, frac, secs, errors)
