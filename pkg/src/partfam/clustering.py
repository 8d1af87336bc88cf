"""Complete-linkage (furthest neighbour) agglomerative clustering of parts.

The tree is recorded MATLAB-style: leaves are nodes 1..p, the cluster formed
by merge s (1-based) is node p + s.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .partition import Partition
from .similarity import SymmetricMatrix

__all__ = [
    "LinkageTree",
    "complete_linkage",
    "cut_tree",
    "default_family_count",
    "export_dendrogram",
    "PARTS_PER_FAMILY",
]

PARTS_PER_FAMILY = 4


@dataclass(frozen=True)
class LinkageTree:
    """``merges[s] = (node_a, node_b, height)``; node ids are 1-based."""

    n_leaves: int
    merges: tuple[tuple[int, int, float], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        p = self.n_leaves
        if len(self.merges) != p - 1:
            raise ValueError(f"{p} leaves need {p - 1} merges, got {len(self.merges)}")
        used = set()
        for s, (a, b, _) in enumerate(self.merges):
            for node in (a, b):
                if not 1 <= node < p + s + 1:
                    raise ValueError(f"merge {s + 1} refers to unknown node {node}")
                if node in used:
                    raise ValueError(f"node {node} merged twice")
                used.add(node)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"p{i + 1}" for i in range(p)))

    @property
    def heights(self) -> np.ndarray:
        return np.array([h for _, _, h in self.merges])

    def members(self) -> dict[int, list[int]]:
        """0-based leaf members of every node id."""
        out = {i + 1: [i] for i in range(self.n_leaves)}
        for s, (a, b, _) in enumerate(self.merges):
            out[self.n_leaves + s + 1] = sorted(out[a] + out[b])
        return out

    def to_scipy(self) -> np.ndarray:
        """Linkage matrix in scipy's 0-based, 4-column convention."""
        sizes = {i + 1: 1 for i in range(self.n_leaves)}
        rows = []
        for s, (a, b, h) in enumerate(self.merges):
            sizes[self.n_leaves + s + 1] = sizes[a] + sizes[b]
            rows.append([a - 1, b - 1, h, sizes[a] + sizes[b]])
        return np.array(rows, dtype=np.float64)

    def to_csv(self) -> str:
        lines = ["node_a,node_b,height"]
        lines += [f"{a},{b},{h:.6f}" for a, b, h in self.merges]
        return "\n".join(lines) + "\n"


def complete_linkage(dist: SymmetricMatrix) -> LinkageTree:
    """Agglomerate parts under the maximum-pairwise-distance linkage.

    Each step merges the two clusters at the smallest linkage distance
    (compared exactly, no tolerance). Among exactly equal candidates the merge
    producing the larger cluster wins, then the one whose union has the
    lexicographically smallest (min member, max member).
    """
    if dist.kind != "distance":
        raise TypeError(f"expected a distance matrix, got kind={dist.kind!r}")
    p = dist.size
    if p < 2:
        raise ValueError("need at least 2 parts")

    d = dist.values.copy()
    np.fill_diagonal(d, np.inf)
    active = np.ones(p, dtype=bool)
    node = list(range(1, p + 1))  # slot -> current node id
    members = [[i] for i in range(p)]
    merges = []
    for s in range(p - 1):
        live = np.flatnonzero(active)
        sub = d[np.ix_(live, live)]
        h = sub.min()
        ii, jj = np.nonzero(np.triu(sub == h, 1))
        best = None
        for i, j in zip(live[ii], live[jj]):
            union = members[i] + members[j]
            key = (-len(union), min(union), max(union))
            if best is None or key < best[0]:
                best = (key, i, j)
        _, i, j = best
        if min(members[j]) < min(members[i]):
            i, j = j, i
        merges.append((node[i], node[j], float(h)))
        # Lance-Williams update for complete linkage
        d[i, :] = np.maximum(d[i, :], d[j, :])
        d[:, i] = d[i, :]
        d[i, i] = np.inf
        active[j] = False
        d[j, :] = np.inf
        d[:, j] = np.inf
        members[i] = sorted(members[i] + members[j])
        node[i] = p + s + 1
    return LinkageTree(p, tuple(merges), dist.labels)


def cut_tree(tree: LinkageTree, n_families: int) -> Partition:
    """Undo the last ``n_families - 1`` merges; families numbered by smallest member."""
    p = tree.n_leaves
    if not 1 <= n_families <= p:
        raise ValueError(f"n_families must be in 1..{p}, got {n_families}")
    comp = {i + 1: [i] for i in range(p)}
    for s, (a, b, _) in enumerate(tree.merges[: p - n_families]):
        comp[p + s + 1] = comp.pop(a) + comp.pop(b)
    groups = sorted(sorted(g) for g in comp.values())
    return Partition.from_families(groups, p)


def default_family_count(p: int) -> int:
    """Roughly four parts per family."""
    if p < 1:
        raise ValueError("part count must be positive")
    return math.ceil(p / PARTS_PER_FAMILY)


def _fmt(x: float) -> str:
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def export_dendrogram(tree: LinkageTree, fmt: str = "newick", leaf_labels: str = "index") -> str:
    """Serialize the tree as ``newick``, ``dot`` or ``json``.

    ``leaf_labels`` is ``"index"`` (1-based part numbers) or ``"id"`` (part ids).
    """
    if not fmt:
        raise ValueError("dendrogram format must be one of newick, dot, json")
    fmt = fmt.lower()
    if leaf_labels not in ("index", "id"):
        raise ValueError(f"leaf_labels must be 'index' or 'id', got {leaf_labels!r}")
    p = tree.n_leaves
    names = {i + 1: (str(i + 1) if leaf_labels == "index" else tree.labels[i]) for i in range(p)}
    height = {i + 1: 0.0 for i in range(p)}
    for s, (_, _, h) in enumerate(tree.merges):
        height[p + s + 1] = h

    if fmt == "newick":
        text = {i + 1: names[i + 1] for i in range(p)}
        for s, (a, b, h) in enumerate(tree.merges):
            text[p + s + 1] = (
                f"({text.pop(a)}:{_fmt(h - height[a])},{text.pop(b)}:{_fmt(h - height[b])})"
            )
        return text[2 * p - 1] + ";"
    if fmt == "dot":
        lines = ["graph dendrogram {"]
        for i in range(1, p + 1):
            lines.append(f'  n{i} [label="{names[i]}", shape=box];')
        for s, (a, b, h) in enumerate(tree.merges):
            k = p + s + 1
            lines.append(f'  n{k} [label="{h:.6f}", shape=point, height={h:.6f}];')
            lines.append(f"  n{k} -- n{a};")
            lines.append(f"  n{k} -- n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps({
            "leaves": [names[i + 1] for i in range(p)],
            "merges": [
                {"node": p + s + 1, "children": [a, b], "height": round(h, 6)}
                for s, (a, b, h) in enumerate(tree.merges)
            ],
        })
    raise ValueError(f"unknown dendrogram format {fmt!r}; use newick, dot or json")
