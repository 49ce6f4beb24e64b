"""
Label validation against code metadata and manual labels.

Digits 4-6 of a post-1965 occupational code rate the job's relationship to
Data, People and Things (0 = most complex, 8 = no significant relationship).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from occnet.errors import LabelError
from occnet.job_classifier.labels import Label, LabelAssignment, parse_label

logger = logging.getLogger(__name__)

WORKER_FUNCTION_YEARS = (1965, 1977, 1991)
AXES = ("Data", "People", "Things")

WORKER_FUNCTIONS: Dict[str, Dict[int, str]] = {
    "Data": {
        0: "Synthesizing",
        1: "Coordinating",
        2: "Analyzing",
        3: "Compiling",
        4: "Computing",
        5: "Copying",
        6: "Comparing",
        7: "No significant relationship",
        8: "No significant relationship",
    },
    "People": {
        0: "Mentoring",
        1: "Negotiating",
        2: "Instructing",
        3: "Supervising",
        4: "Diverting",
        5: "Persuading",
        6: "Speaking-Signaling",
        7: "Serving",
        8: "No significant relationship",
    },
    "Things": {
        0: "Setting Up",
        1: "Precision Working",
        2: "Operating-Controlling",
        3: "Driving-Operating",
        4: "Manipulating",
        5: "Tending",
        6: "Feeding-Offbearing",
        7: "Handling",
        8: "No significant relationship",
    },
}


@dataclass(frozen=True)
class WorkerFunctionRow:
    axis: str
    value: int
    name: str
    n: int
    pct_physical: float
    pct_cognitive: float
    ci_low: float
    ci_high: float


@dataclass
class MetadataValidation:
    rows: List[WorkerFunctionRow]
    skipped: int = 0
    skipped_ids: List[str] = field(default_factory=list)


def worker_function_digits(code: str) -> Optional[Tuple[int, int, int]]:
    """Digits 4-6 of a code, or None when it has fewer than six digits."""
    digits = [c for c in str(code or "") if c.isdigit()]
    if len(digits) < 6:
        return None
    return int(digits[3]), int(digits[4]), int(digits[5])


def metadata_validation(
    assignment: LabelAssignment,
    codes: Mapping[str, str],
    bootstrap_n: int = 10000,
    seed: int = 0,
    year: Optional[int] = None,
) -> MetadataValidation:
    """
    Physical/Cognitive percentages per worker-function value, with bootstrap CIs.

    Each (axis, value) group of n jobs with Physical share p is resampled
    bootstrap_n times as Binomial(n, p) / n; the CI is the 2.5/97.5 percentile
    interval of the Physical percentage.

    Args:
        assignment (LabelAssignment): Labels to validate.
        codes (dict): entry_id -> occupational code as printed.
        bootstrap_n (int): Resamples per group.
        seed (int): Seed of the resampling.
        year (int, optional): Edition year, checked against the coded editions.

    Returns:
        MetadataValidation: Rows sorted by axis then value; entries with a
        missing or malformed code are skipped and counted.
    """
    if bootstrap_n < 1:
        raise LabelError(f"bootstrap_n must be >= 1, got {bootstrap_n}")
    if year is not None and year not in WORKER_FUNCTION_YEARS:
        logger.warning("Edition %d predates worker-function codes; validation may be meaningless", year)

    groups: Dict[Tuple[str, int], List[bool]] = {}
    skipped_ids: List[str] = []
    for entry_id, assigned in assignment.items():
        digits = worker_function_digits(codes.get(entry_id, ""))
        if digits is None:
            skipped_ids.append(entry_id)
            continue
        is_physical = assigned.label == Label.PHYSICAL
        for axis, value in zip(AXES, digits):
            groups.setdefault((axis, value), []).append(is_physical)

    if skipped_ids:
        logger.warning("Metadata validation skipped %d entries with malformed codes", len(skipped_ids))

    rng = np.random.default_rng(seed)
    rows: List[WorkerFunctionRow] = []
    for axis in AXES:
        for value in sorted(v for a, v in groups if a == axis):
            flags = groups[(axis, value)]
            n = len(flags)
            share = sum(flags) / n
            resampled = rng.binomial(n, share, size=bootstrap_n) / n * 100.0
            low, high = np.percentile(resampled, [2.5, 97.5])
            rows.append(
                WorkerFunctionRow(
                    axis=axis,
                    value=value,
                    name=WORKER_FUNCTIONS[axis].get(value, "Unknown"),
                    n=n,
                    pct_physical=share * 100.0,
                    pct_cognitive=(1.0 - share) * 100.0,
                    ci_low=float(low),
                    ci_high=float(high),
                )
            )
    return MetadataValidation(rows, len(skipped_ids), skipped_ids)


def evaluate_against_manual(assignment: LabelAssignment, manual: Sequence[Tuple[str, object]]) -> float:
    """
    Agreement rate between assigned and manual labels.

    Raises:
        LabelError: Empty manual set, or manual ids absent from the assignment
        (all missing ids are listed).
    """
    if not manual:
        raise LabelError("no manual labels to evaluate against")
    missing = [entry_id for entry_id, _ in manual if entry_id not in assignment]
    if missing:
        raise LabelError(f"manual labels reference unknown entry ids: {missing}")
    hits = sum(1 for entry_id, label in manual if assignment[entry_id].label == parse_label(label))
    return hits / len(manual)
