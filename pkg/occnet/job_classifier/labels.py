"""
Occupation classes and per-entry label assignments.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, Iterator, Mapping, Optional, Tuple

from occnet.errors import LabelError


class Label(str, Enum):
    PHYSICAL = "Physical"
    COGNITIVE = "Cognitive"


# Class order used everywhere; argmax ties resolve to the first class.
CLASS_ORDER: Tuple[Label, ...] = (Label.PHYSICAL, Label.COGNITIVE)


def parse_label(value) -> Label:
    if isinstance(value, Label):
        return value
    text = str(value).strip().lower()
    for label in CLASS_ORDER:
        if text == label.value.lower():
            return label
    raise LabelError(f"unknown label '{value}' (expected Physical or Cognitive)")


@dataclass(frozen=True)
class LabeledExample:
    description: str
    label: Label

    def __post_init__(self):
        if not self.description or not self.description.strip():
            raise LabelError("labeled example with an empty description")


@dataclass(frozen=True)
class AssignedLabel:
    """
    Class of one entry.

    `posterior` is the classifier's max-class posterior; a title override changes
    `label` but keeps the model's posterior and `model_label`.
    """

    label: Label
    posterior: float
    override_applied: bool = False
    low_confidence: bool = False
    model_label: Optional[Label] = None


class LabelAssignment(Mapping[str, AssignedLabel]):
    """Ordered entry_id -> AssignedLabel mapping."""

    def __init__(self, items: Mapping[str, AssignedLabel]):
        self._items: Dict[str, AssignedLabel] = dict(items)

    def __getitem__(self, key: str) -> AssignedLabel:
        return self._items[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabelAssignment):
            return NotImplemented
        return self._items == other._items

    def labels(self) -> Dict[str, Label]:
        return {k: v.label for k, v in self._items.items()}

    def with_label(self, entry_id: str, label: Label, override_applied: bool) -> "LabelAssignment":
        items = dict(self._items)
        items[entry_id] = replace(items[entry_id], label=label, override_applied=override_applied)
        return LabelAssignment(items)

    @classmethod
    def from_labels(cls, labels: Mapping[str, Label]) -> "LabelAssignment":
        """Assignment with certain labels (manual labels, fixtures)."""
        return cls({k: AssignedLabel(parse_label(v), 1.0, model_label=parse_label(v)) for k, v in labels.items()})


def class_balance(assignment: LabelAssignment) -> Dict[str, float]:
    """Fraction of entries in each class."""
    n = len(assignment)
    if n == 0:
        return {label.value: 0.0 for label in CLASS_ORDER}
    counts = {label: 0 for label in CLASS_ORDER}
    for item in assignment.values():
        counts[item.label] += 1
    return {label.value: counts[label] / n for label in CLASS_ORDER}
