"""Assignment of parts to a fixed number of families."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = ["Partition"]


@dataclass(frozen=True)
class Partition:
    """Family label (1..N) for each part, parts indexed from 0.

    Labels with no members are allowed in the representation; see
    :attr:`empty_families`.
    """

    assignment: tuple[int, ...]
    n_families: int

    def __post_init__(self):
        a = tuple(int(x) for x in self.assignment)
        if self.n_families < 1:
            raise ValueError("n_families must be >= 1")
        for i, lab in enumerate(a):
            if not 1 <= lab <= self.n_families:
                raise ValueError(f"part {i} has family {lab} outside 1..{self.n_families}")
        object.__setattr__(self, "assignment", a)

    @classmethod
    def from_labels(cls, labels: Iterable[int], n_families: int | None = None) -> Partition:
        labels = tuple(int(x) for x in labels)
        return cls(labels, n_families if n_families is not None else max(labels))

    @classmethod
    def from_families(cls, families: Sequence[Iterable[int]], n_parts: int | None = None,
                      one_based: bool = False) -> Partition:
        """Build from member lists; ``families[k]`` becomes family ``k + 1``."""
        off = 1 if one_based else 0
        fams = [[int(i) - off for i in f] for f in families]
        p = n_parts if n_parts is not None else sum(len(f) for f in fams)
        labels = [0] * p
        for k, members in enumerate(fams):
            for i in members:
                if not 0 <= i < p:
                    raise ValueError(f"part index {i + off} out of range")
                if labels[i]:
                    raise ValueError(f"part {i + off} assigned to more than one family")
                labels[i] = k + 1
        missing = [i + off for i, lab in enumerate(labels) if lab == 0]
        if missing:
            raise ValueError(f"parts {missing} not assigned to any family")
        return cls(tuple(labels), len(fams))

    @property
    def n_parts(self) -> int:
        return len(self.assignment)

    @property
    def labels(self) -> np.ndarray:
        return np.asarray(self.assignment, dtype=np.intp)

    def members(self, family: int) -> list[int]:
        return [i for i, lab in enumerate(self.assignment) if lab == family]

    def families(self, one_based: bool = False) -> list[list[int]]:
        """Member lists for labels 1..N, in label order (empty lists kept)."""
        out: list[list[int]] = [[] for _ in range(self.n_families)]
        off = 1 if one_based else 0
        for i, lab in enumerate(self.assignment):
            out[lab - 1].append(i + off)
        return out

    @property
    def sizes(self) -> list[int]:
        return [len(f) for f in self.families()]

    @property
    def empty_families(self) -> list[int]:
        return [k + 1 for k, n in enumerate(self.sizes) if n == 0]

    def canonical(self) -> Partition:
        """Relabel families 1..N in order of their smallest member."""
        relabel: dict[int, int] = {}
        for lab in self.assignment:
            if lab not in relabel:
                relabel[lab] = len(relabel) + 1
        nxt = len(relabel) + 1
        for lab in range(1, self.n_families + 1):
            if lab not in relabel:
                relabel[lab] = nxt
                nxt += 1
        return Partition(tuple(relabel[lab] for lab in self.assignment), self.n_families)

    def same_grouping(self, other: Partition) -> bool:
        return self.canonical() == other.canonical()

    def __str__(self):
        return " / ".join(
            "{" + ",".join(str(i) for i in fam) + "}" for fam in self.families(one_based=True)
        )
