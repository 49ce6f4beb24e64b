"""
CSV and JSON formats of the classifier: training data, manual labels,
label assignments, worker-function tables and saved models.
"""

from dataclasses import asdict
from pathlib import Path
from typing import List, Mapping, Tuple

import pandas as pd

from occnet.corpus_parser.io import read_json, write_json
from occnet.errors import DataError, LabelError, TrainingDataError
from occnet.job_classifier.labels import AssignedLabel, LabeledExample, LabelAssignment, parse_label
from occnet.job_classifier.naive_bayes import ClassifierModel
from occnet.job_classifier.validation import MetadataValidation

ASSIGNMENT_COLUMNS = ["entry_id", "title", "label", "posterior", "override_applied"]


def _read_csv(path: Path, required: List[str]) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise DataError(f"missing CSV file: {path}")
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise DataError(f"{path}: missing columns {missing}")
    return frame


def load_training_csv(path: Path) -> List[LabeledExample]:
    """
    Read a `description,label` CSV.

    Raises:
        TrainingDataError: Empty descriptions or unknown labels, with the row number.
    """
    frame = _read_csv(path, ["description", "label"])
    examples = []
    for row_no, (description, label) in enumerate(zip(frame["description"], frame["label"]), start=2):
        try:
            examples.append(LabeledExample(description, parse_label(label)))
        except LabelError as e:
            raise TrainingDataError(f"{path}:{row_no}: {e}") from e
    return examples


def write_training_csv(examples: List[LabeledExample], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        {"description": [ex.description for ex in examples], "label": [ex.label.value for ex in examples]}
    )
    frame.to_csv(path, index=False, lineterminator="\n")


def load_manual_labels(path: Path) -> List[Tuple[str, str]]:
    """Read an `entry_id,label` CSV of hand-assigned classes."""
    frame = _read_csv(path, ["entry_id", "label"])
    try:
        return [(entry_id, parse_label(label)) for entry_id, label in zip(frame["entry_id"], frame["label"])]
    except LabelError as e:
        raise DataError(f"{path}: {e}") from e


def write_assignment_csv(assignment: LabelAssignment, titles: Mapping[str, str], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = [
        {
            "entry_id": entry_id,
            "title": titles.get(entry_id, ""),
            "label": assigned.label.value,
            "posterior": repr(float(assigned.posterior)),
            "override_applied": str(assigned.override_applied).lower(),
        }
        for entry_id, assigned in assignment.items()
    ]
    pd.DataFrame(rows, columns=ASSIGNMENT_COLUMNS).to_csv(path, index=False, lineterminator="\n")


def read_assignment_csv(path: Path) -> LabelAssignment:
    frame = _read_csv(path, ASSIGNMENT_COLUMNS)
    items = {}
    for row in frame.itertuples(index=False):
        label = parse_label(row.label)
        items[row.entry_id] = AssignedLabel(
            label=label,
            posterior=float(row.posterior),
            override_applied=row.override_applied.strip().lower() == "true",
        )
    return LabelAssignment(items)


def write_worker_functions_csv(validation: MetadataValidation, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = ["axis", "value", "name", "n", "pct_physical", "pct_cognitive", "ci_low", "ci_high"]
    frame = pd.DataFrame([asdict(row) for row in validation.rows], columns=columns)
    frame.to_csv(path, index=False, lineterminator="\n")


def save_model(model: ClassifierModel, accuracy: float, path: Path) -> None:
    payload = model.to_dict()
    payload["held_out_accuracy"] = accuracy
    write_json(payload, path)


def load_model(path: Path) -> ClassifierModel:
    data = read_json(path)
    try:
        return ClassifierModel.from_dict(data)
    except (KeyError, ValueError) as e:
        raise DataError(f"{path}: invalid classifier model: {e}") from e
