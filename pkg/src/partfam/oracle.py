"""Exhaustive search over set partitions, for certifying small instances."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from .dataset import PartCodeMatrix
from .partition import Partition
from .similarity import SymmetricMatrix, objective, similarity_matrix

__all__ = [
    "DEFAULT_CAP",
    "EnumerationCapError",
    "brute_force_optimum",
    "enumerate_partitions",
    "stirling2",
]

DEFAULT_CAP = 10**7


class EnumerationCapError(ValueError):
    def __init__(self, p: int, n: int, count: int, cap: int):
        self.p, self.n, self.count, self.cap = p, n, count, cap
        super().__init__(f"S({p},{n}) = {count} ({count:.3e}) partitions exceeds the cap of {cap}")


@lru_cache(maxsize=None)
def stirling2(p: int, n: int) -> int:
    """Stirling number of the second kind via S(p,n) = n S(p-1,n) + S(p-1,n-1)."""
    if p == n:
        return 1
    if n == 0 or n > p:
        return 0
    return n * stirling2(p - 1, n) + stirling2(p - 1, n - 1)


def enumerate_partitions(p: int, n: int, cap: int | None = DEFAULT_CAP) -> Iterator[Partition]:
    """Yield every partition of ``p`` parts into exactly ``n`` nonempty families.

    Partitions come as restricted growth strings (part 0 in family 1, each
    later part in an existing family or the next new one) in lexicographic
    order. The count is checked against ``cap`` before anything is yielded.
    """
    if not 1 <= n <= p:
        raise ValueError(f"need 1 <= n <= p, got p={p}, n={n}")
    count = stirling2(p, n)
    if cap is not None and count > cap:
        raise EnumerationCapError(p, n, count, cap)
    return _rgs(p, n)


def _rgs(p: int, n: int) -> Iterator[Partition]:
    a = [1] * p

    def rec(i: int, used: int):
        if i == p:
            if used == n:
                yield Partition(tuple(a), n)
            return
        # the remaining parts must still be able to open the missing families
        if n - used > p - i:
            return
        for v in range(1, min(used + 1, n) + 1):
            a[i] = v
            yield from rec(i + 1, max(used, v))

    a[0] = 1
    yield from rec(1, 1)


def brute_force_optimum(matrix: PartCodeMatrix | SymmetricMatrix, n: int,
                        cap: int | None = DEFAULT_CAP, ranges=None) -> tuple[Partition, float]:
    """Exact maximiser of the family objective; first one in enumeration order wins ties."""
    sim = matrix if isinstance(matrix, SymmetricMatrix) else similarity_matrix(matrix, ranges)
    best, best_f = None, float("-inf")
    for part in enumerate_partitions(sim.size, n, cap):
        f = objective(part, sim)
        if f > best_f:
            best, best_f = part, f
    return best, best_f
