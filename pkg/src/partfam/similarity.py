"""Digit-wise similarity between coded parts and the family objective.

Two parts i, j coded over K attributes are compared attribute by attribute as
``1 - |b_ik - b_jk| / R_k`` and the K values averaged. A family's score is the
sum of its within-family pair similarities divided by ``0.001 + C(n, 2)``, and
a partition's objective is the sum of its family scores (to be maximised).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .dataset import PartCodeMatrix
from .partition import Partition

__all__ = [
    "DIVISION_GUARD",
    "OPITZ_RANGE",
    "SymmetricMatrix",
    "attribute_similarity",
    "column_ranges",
    "distance_matrix",
    "family_pair_sum",
    "family_score",
    "objective",
    "pairwise_similarity",
    "similarity_matrix",
]

OPITZ_RANGE = 9.0
DIVISION_GUARD = 0.001


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense p x p similarity (unit diagonal) or distance (zero diagonal) matrix."""

    values: np.ndarray
    kind: str = "similarity"
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("similarity", "distance"):
            raise ValueError(f"kind must be 'similarity' or 'distance', got {self.kind!r}")
        v = np.array(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"matrix must be square, got shape {v.shape}")
        if not np.array_equal(v, v.T):
            raise ValueError("matrix is not symmetric")
        diag = 1.0 if self.kind == "similarity" else 0.0
        if not np.all(np.diag(v) == diag):
            raise ValueError(f"{self.kind} matrix must have diagonal {diag}")
        if np.any(v < 0.0) or np.any(v > 1.0):
            raise ValueError("entries must lie in [0, 1]")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        labels = tuple(self.labels) or tuple(f"p{i + 1}" for i in range(v.shape[0]))
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, ij):
        return self.values[ij]

    def upper_triangle(self) -> np.ndarray:
        return self.values[np.triu_indices(self.size, 1)]

    def to_csv(self, decimals: int = 6) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["", *self.labels])
        for lab, row in zip(self.labels, self.values):
            w.writerow([lab, *(f"{x:.{decimals}f}" for x in row)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "labels": list(self.labels),
                           "values": self.values.tolist()})


def attribute_similarity(b_ik: float, b_jk: float, r_k: float = OPITZ_RANGE) -> float:
    if r_k <= 0:
        raise ValueError(f"attribute range must be positive, got {r_k}")
    return 1.0 - abs(b_ik - b_jk) / r_k


def pairwise_similarity(row_i: Sequence[float], row_j: Sequence[float],
                        ranges: Sequence[float] | None = None) -> float:
    if len(row_i) != len(row_j):
        raise ValueError(f"rows differ in length: {len(row_i)} vs {len(row_j)}")
    if ranges is None:
        ranges = [OPITZ_RANGE] * len(row_i)
    if len(ranges) != len(row_i):
        raise ValueError(f"{len(ranges)} ranges for {len(row_i)} attributes")
    total = 0.0
    for a, b, r in zip(row_i, row_j, ranges):
        total += attribute_similarity(float(a), float(b), float(r))
    return total / len(row_i)


def column_ranges(matrix: PartCodeMatrix) -> np.ndarray:
    """Observed max - min per attribute; 0 marks a constant column."""
    codes = matrix.codes.astype(np.float64)
    return codes.max(axis=0) - codes.min(axis=0)


def similarity_matrix(matrix: PartCodeMatrix, ranges: Sequence[float] | str | None = None
                      ) -> SymmetricMatrix:
    """All-pairs similarity over the parts of ``matrix``.

    ``ranges`` is one positive value per attribute, ``None`` for the fixed
    Opitz range of 9, or ``"observed"`` to use each column's own range
    (constant columns then count as full agreement).

    The per-attribute terms are accumulated column by column, so every entry
    is summed in the same order as :func:`pairwise_similarity`.
    """
    codes = matrix.codes.astype(np.float64)
    m, k = codes.shape
    constant = np.zeros(k, dtype=bool)
    if ranges is None:
        r = np.full(k, OPITZ_RANGE)
    elif isinstance(ranges, str):
        if ranges != "observed":
            raise ValueError(f"unknown range mode {ranges!r}")
        r = column_ranges(matrix)
        constant = r == 0
    else:
        r = np.asarray(ranges, dtype=np.float64)
        if r.shape != (k,):
            raise ValueError(f"{r.size} ranges for {k} attributes")
        if np.any(r <= 0):
            raise ValueError("attribute ranges must be positive")

    acc = np.zeros((m, m))
    for col in range(k):
        if constant[col]:
            acc += 1.0
            continue
        x = codes[:, col]
        acc += 1.0 - np.abs(x[:, None] - x[None, :]) / r[col]
    return SymmetricMatrix(acc / k, "similarity", matrix.part_ids)


def distance_matrix(sim: SymmetricMatrix) -> SymmetricMatrix:
    if sim.kind != "similarity":
        raise TypeError(f"expected a similarity matrix, got kind={sim.kind!r}")
    return SymmetricMatrix(1.0 - sim.values, "distance", sim.labels)


def family_pair_sum(members: Sequence[int], values: np.ndarray) -> float:
    """Sum of ``values[i, j]`` over member pairs i < j, in index order."""
    idx = np.sort(np.asarray(members, dtype=np.intp))
    n = idx.size
    if n < 2:
        return 0.0
    sub = values[np.ix_(idx, idx)]
    return float(np.sum(sub[np.triu_indices(n, 1)]))


def _score(pair_sum: float, n: int) -> float:
    return pair_sum / (DIVISION_GUARD + n * (n - 1) / 2)


def family_score(members: Iterable[int], sim: SymmetricMatrix) -> float:
    members = list(members)
    if not members:
        raise ValueError("family has no members")
    if min(members) < 0 or max(members) >= sim.size:
        raise IndexError("member index out of range")
    if len(set(members)) != len(members):
        raise ValueError("duplicate member index")
    return _score(family_pair_sum(members, sim.values), len(members))


def objective(partition: Partition, sim: SymmetricMatrix) -> float:
    """Sum of family scores; empty families contribute nothing."""
    if partition.n_parts != sim.size:
        raise ValueError(f"partition covers {partition.n_parts} parts, matrix has {sim.size}")
    total = 0.0
    for fam in partition.families():
        if fam:
            total += _score(family_pair_sum(fam, sim.values), len(fam))
    return total
