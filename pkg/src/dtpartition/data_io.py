"""Dataset loading, seeded splits and result files.

Splits and folds use numpy's PCG64 generator seeded with the 64-bit integer
given by the caller, so they reproduce across machines.
"""
import csv
import json
import math
import os
from dataclasses import asdict, dataclass
from importlib import resources

import numpy as np

from .learner import Sample

__all__ = [
    "DatasetSpec",
    "DatasetError",
    "load",
    "save",
    "split",
    "bundled",
    "RunRecord",
    "write_result",
]


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetSpec:
    path: str
    label_column: int | str = -1
    delimiter: str = ","
    has_header: bool = False
    name: str = ""

    @property
    def display_name(self):
        return self.name or os.path.splitext(os.path.basename(self.path))[0]


_BUNDLED = {
    "iris": dict(label_column=-1),
    "wine": dict(label_column=0),
}


def bundled(name):
    """Spec for one of the bundled UCI datasets ('iris' or 'wine')."""
    try:
        options = _BUNDLED[name]
    except KeyError:
        raise DatasetError(f"no bundled dataset {name!r}; have {sorted(_BUNDLED)}") from None
    path = resources.files("dtpartition") / "data" / f"{name}.csv"
    return DatasetSpec(str(path), name=name, **options)


def _label_index(spec, header, n_columns):
    col = spec.label_column
    if isinstance(col, str):
        if col.lstrip("-").isdigit():
            col = int(col)
        elif header is None:
            raise DatasetError(f"label column {col!r} given by name but the file has no header")
        elif col not in header:
            raise DatasetError(f"label column {col!r} not in header {header}")
        else:
            return header.index(col)
    if not -n_columns <= col < n_columns:
        raise DatasetError(f"label column {col} out of range for {n_columns} columns")
    return col % n_columns


def load(spec):
    """Read a delimited file into a Sample.

    Labels are re-encoded to 0..n-1 in order of first appearance.
    """
    if not os.path.exists(spec.path):
        raise DatasetError(f"{spec.path}: no such file")
    with open(spec.path, newline="") as f:
        rows = [row for row in csv.reader(f, delimiter=spec.delimiter) if row and any(c.strip() for c in row)]
    header = None
    first_row = 1
    if spec.has_header and rows:
        header = [h.strip() for h in rows[0]]
        rows = rows[1:]
        first_row = 2
    if not rows:
        raise DatasetError(f"{spec.path}: empty dataset")
    n_columns = len(rows[0])
    label_col = _label_index(spec, header, n_columns)
    features, labels = [], []
    for offset, row in enumerate(rows):
        rownum = first_row + offset
        if len(row) != n_columns:
            raise DatasetError(f"{spec.path}: row {rownum} has {len(row)} columns, expected {n_columns}")
        values = []
        for j, cell in enumerate(row):
            if j == label_col:
                continue
            try:
                v = float(cell)
            except ValueError:
                raise DatasetError(f"{spec.path}: row {rownum}, column {j + 1}: "
                                   f"cannot parse {cell!r} as a number") from None
            if not math.isfinite(v):
                raise DatasetError(f"{spec.path}: row {rownum}, column {j + 1}: non-finite value")
            values.append(v)
        features.append(values)
        labels.append(row[label_col].strip())
    if n_columns < 2:
        raise DatasetError(f"{spec.path}: need at least one feature column besides the label")
    encoding = {}
    y = np.array([encoding.setdefault(lab, len(encoding)) for lab in labels], dtype=int)
    names = None
    if header is not None:
        names = tuple(h for j, h in enumerate(header) if j != label_col)
    return Sample(np.array(features, dtype=float), y, len(encoding), names)


def save(sample, path, delimiter=","):
    """Write features then label per row; floats use repr so they round-trip."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f, delimiter=delimiter, lineterminator="\n")
        for x, y in zip(sample.x, sample.y):
            w.writerow([repr(float(v)) for v in x] + [int(y)])


def split(sample, train_fraction=0.75, seed=0):
    """Random non-stratified split: the first ceil(fraction m) rows of a seeded
    permutation train, the rest test."""
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    if sample.m < 2:
        raise ValueError("need at least 2 examples to split")
    rng = np.random.Generator(np.random.PCG64(seed))
    perm = rng.permutation(sample.m)
    n_train = min(sample.m - 1, math.ceil(train_fraction * sample.m - 1e-9))
    return sample.subset(perm[:n_train]), sample.subset(perm[n_train:])


@dataclass
class RunRecord:
    dataset: str
    model: str
    seed: int
    train_acc: float
    test_acc: float
    leaves: int
    height: int
    wall_time: float
    bound: float | None = None


def write_result(record, directory):
    """One JSON document per (dataset, model, seed)."""
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"{record.dataset}_{record.model}_seed{record.seed}.json")
    with open(path, "w") as f:
        json.dump(asdict(record), f, indent=2, sort_keys=True)
        f.write("\n")
    return path
