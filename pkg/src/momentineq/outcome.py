"""Result record shared by the randomization and bootstrap tests."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .statistics import StatValue


@dataclass(frozen=True, eq=False)
class TestOutcome:
    __test__ = False  # not a pytest test class

    statistic: StatValue
    p_value: float
    reject: bool
    alpha: float
    M: int
    method: str = "sr"
    n_infinite_reflections: int = 0
    count: int = 0
    selected: np.ndarray | None = None
    cutoff: float | None = None
    critical_value: float | None = None
    values: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        def num(x):
            if x is None:
                return None
            x = float(x)
            return x if np.isfinite(x) else ("inf" if x > 0 else "-inf")

        return {
            "method": self.method,
            "statistic": self.statistic.to_dict(),
            "p_value": self.p_value,
            "reject": self.reject,
            "alpha": self.alpha,
            "M": self.M,
            "count": self.count,
            "n_infinite_reflections": self.n_infinite_reflections,
            "selected": None if self.selected is None else self.selected.tolist(),
            "cutoff": num(self.cutoff),
            "critical_value": num(self.critical_value),
        }
