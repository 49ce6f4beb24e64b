"""
Node bootstrap of the polarization statistic.

A replicate draws n node ids with replacement. Ids never drawn are deleted and
ids drawn several times are duplicated: a copy keeps every incident edge and
the label of its original, and copies are not linked to each other. The network
size stays n.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from occnet.errors import GraphError
from occnet.polarization.modularity import ModularityInput, community_modularity

logger = logging.getLogger(__name__)

DEFAULT_B = 1000
CI_PERCENTILES = (2.5, 97.5)


@dataclass
class BootstrapResult:
    samples: List[float]
    B: int
    seed: int
    mean: float
    ci_low: float
    ci_high: float
    distinct_fraction: List[float] = field(default_factory=list)
    # Replicates without any edge left; their Q is undefined (NaN in samples).
    degenerate: int = 0

    @property
    def mean_distinct_fraction(self) -> float:
        return float(np.mean(self.distinct_fraction)) if self.distinct_fraction else float("nan")

    def to_dict(self) -> Dict:
        return {
            "B": self.B,
            "seed": self.seed,
            "mean": self.mean,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "mean_distinct_fraction": self.mean_distinct_fraction,
            "degenerate": self.degenerate,
        }


def replicate_multiplicity(n: int, seed: int, index: int) -> np.ndarray:
    """How often each node is drawn in replicate `index`."""
    rng = np.random.default_rng([seed, index])
    draws = rng.integers(0, n, size=n)
    return np.bincount(draws, minlength=n)


def percentile_interval(values: np.ndarray) -> tuple:
    low, high = np.percentile(values, CI_PERCENTILES)
    return float(low), float(high)


def bootstrap_polarization(
    data: ModularityInput,
    B: int = DEFAULT_B,
    seed: int = 0,
    jobs: int = 1,
) -> BootstrapResult:
    """
    Bootstrap distribution of the class-partition modularity.

    Replicate r uses a generator seeded with (seed, r), so the sample vector does
    not depend on `jobs`.

    Args:
        data (ModularityInput): Labeled graph.
        B (int): Number of replicates, at least 1.
        seed (int): Base seed.
        jobs (int): Worker threads.

    Returns:
        BootstrapResult: Samples in replicate order, mean and 95% percentile CI.
    """
    if B < 1:
        raise GraphError(f"bootstrap size B must be >= 1, got {B}")

    g = data.graph
    n = g.n_nodes
    weight = data.weights()
    community = data.class_index()

    def run(index: int):
        counts = replicate_multiplicity(n, seed, index)
        distinct = float(np.count_nonzero(counts)) / n
        try:
            q = community_modularity(n, g.src, g.dst, weight, community, multiplicity=counts)
        except GraphError:
            q = float("nan")
        return q, distinct

    if jobs > 1 and B > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, range(B)))
    else:
        results = [run(i) for i in range(B)]

    samples = np.array([r[0] for r in results], dtype=np.float64)
    valid = samples[~np.isnan(samples)]
    degenerate = int(samples.size - valid.size)
    if degenerate:
        logger.warning("%d of %d bootstrap replicates lost every edge", degenerate, B)
    if valid.size:
        mean = float(valid.mean())
        low, high = percentile_interval(valid)
    else:
        mean = low = high = float("nan")

    result = BootstrapResult(
        samples=samples.tolist(),
        B=B,
        seed=seed,
        mean=mean,
        ci_low=low,
        ci_high=high,
        distinct_fraction=[r[1] for r in results],
        degenerate=degenerate,
    )
    logger.info(
        "Bootstrap B=%d: mean Q %.5f, 95%% CI [%.5f, %.5f], mean distinct-node fraction %.4f",
        B, mean, low, high, result.mean_distinct_fraction,
    )
    return result


@dataclass(frozen=True)
class BootstrapComparison:
    """
    Percentile-interval overlap of two editions. A convenience check, not a
    significance test.
    """

    year_a: int
    year_b: int
    mean_a: float
    mean_b: float
    overlap: bool
    non_canonical: bool = True


def compare_bootstrap(
    a: BootstrapResult,
    b: BootstrapResult,
    year_a: Optional[int] = None,
    year_b: Optional[int] = None,
) -> BootstrapComparison:
    overlap = not (a.ci_high < b.ci_low or b.ci_high < a.ci_low)
    return BootstrapComparison(year_a or 0, year_b or 0, a.mean, b.mean, overlap)
