"""
Ordinary least squares fits of longitudinal statistics against edition gaps.
The slope p-value is the two-sided t-test with n - 2 degrees of freedom.
"""

import math
from dataclasses import asdict, dataclass
from typing import Dict, Sequence, Tuple

import numpy as np
from scipy import stats

from occnet.errors import RegressionError
from occnet.longitudinal.decay import DecayTable
from occnet.longitudinal.persistence import PersistenceTable


@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    r: float
    p_value: float
    n_points: int
    slope_stderr: float = 0.0

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def linear_regression(points: Sequence[Tuple[float, float]]) -> RegressionResult:
    """
    Fit y = slope * x + intercept.

    Args:
        points (list of (x, y)): At least three points, x not all equal.

    Returns:
        RegressionResult

    Raises:
        RegressionError: Fewer than three points, non-finite values or constant x.
    """
    if len(points) < 3:
        raise RegressionError(f"need at least 3 points, got {len(points)}")
    data = np.asarray(points, dtype=np.float64)
    if data.ndim != 2 or data.shape[1] != 2:
        raise RegressionError("points must be (x, y) pairs")
    if not np.all(np.isfinite(data)):
        raise RegressionError("points contain non-finite values")
    x, y = data[:, 0], data[:, 1]
    if np.all(x == x[0]):
        raise RegressionError(f"degenerate x: every point has x = {x[0]}")

    fit = stats.linregress(x, y)
    r = float(fit.rvalue)
    p = float(fit.pvalue)
    if math.isnan(r):
        r, p = 0.0, 1.0
    return RegressionResult(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r=max(-1.0, min(1.0, r)),
        p_value=max(0.0, min(1.0, p)),
        n_points=int(x.size),
        slope_stderr=float(fit.stderr),
    )


def regress_persistence(table: PersistenceTable) -> RegressionResult:
    """Percent of titles absent against gap years."""
    return linear_regression(table.points())


def regress_decay(table: DecayTable) -> RegressionResult:
    """Mean max similarity against gap years."""
    return linear_regression(table.points())
