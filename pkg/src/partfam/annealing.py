"""Simulated-annealing refinement of a part-family partition.

The search starts from the complete-linkage cut and maximizes the
sum-of-similarities objective with single-part moves under geometric cooling.
The family count is held fixed: a move that would empty its donor family is
redrawn.
"""

from __future__ import annotations

import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .clustering import LinkageTree, complete_linkage, cut_tree, default_family_count
from .dataset import PartCodeMatrix
from .partition import Partition
from .similarity import (
    DIVISION_GUARD,
    SymmetricMatrix,
    distance_matrix,
    family_pair_sum,
    objective,
    similarity_matrix,
)

__all__ = [
    "AnnealConfig",
    "AnnealResult",
    "ClusterResult",
    "ConfigError",
    "EQUAL_TOL",
    "PipelineResult",
    "TraceRow",
    "accept",
    "anneal",
    "cluster_stage",
    "make_rng",
    "run_pipeline",
    "seed_sweep",
    "single_move",
]

EQUAL_TOL = 1e-12
# strict-pseudocode mode only counts non-worsening moves toward M; cap proposals per level
STRICT_PROPOSAL_FACTOR = 1000


class ConfigError(ValueError):
    """Invalid annealing parameters."""


@dataclass(frozen=True)
class AnnealConfig:
    """Annealing schedule. Defaults are the tuned values (30, 0.85, 40, 0.002).

    ``strict_count`` reproduces the literal pseudocode, where only improving
    or equal moves advance the per-level move counter. ``debug`` recomputes
    the full objective after every accepted move and checks it against the
    incremental value.
    """

    t_init: float = 30.0
    t_final: float = 0.002
    alpha: float = 0.85
    markov_len: int = 40
    seed: int = 0
    stagnation_limit: int | None = None
    strict_count: bool = False
    debug: bool = False

    def __post_init__(self):
        if not (isinstance(self.t_init, (int, float)) and self.t_init > 0 and math.isfinite(self.t_init)):
            raise ConfigError(f"t_init must be a positive number, got {self.t_init!r}")
        if not (isinstance(self.t_final, (int, float)) and self.t_final > 0):
            raise ConfigError(f"t_final must be positive, got {self.t_final!r}")
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if int(self.markov_len) != self.markov_len or self.markov_len < 1:
            raise ConfigError(f"markov_len must be a positive integer, got {self.markov_len!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.stagnation_limit is not None and self.stagnation_limit < 1:
            raise ConfigError("stagnation_limit must be >= 1 or None")
        object.__setattr__(self, "markov_len", int(self.markov_len))
        object.__setattr__(self, "seed", int(self.seed))

    def replace(self, **changes) -> AnnealConfig:
        return AnnealConfig(**{**asdict(self), **changes})

    def temperature(self, level: int) -> float:
        return self.t_init * self.alpha**level

    def n_levels(self) -> int:
        """Number of temperature levels run before the freeze."""
        level = 0
        while self.temperature(level) >= self.t_final:
            level += 1
        return level


class TraceRow(NamedTuple):
    iteration: int
    temperature: float
    f_current: float
    f_best: float


@dataclass(frozen=True)
class AnnealResult:
    best_partition: Partition
    best_objective: float
    initial_objective: float
    iterations: int
    levels: int
    stop_reason: str
    trace: tuple[TraceRow, ...]
    config: AnnealConfig
    wall_time: float = field(default=0.0, compare=False)

    def trace_csv(self) -> str:
        buf = io.StringIO()
        buf.write("iteration,temperature,f_current,f_best\n")
        for r in self.trace:
            buf.write(f"{r.iteration},{r.temperature!r},{r.f_current!r},{r.f_best!r}\n")
        return buf.getvalue()

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "partition": list(self.best_partition.assignment),
            "families": self.best_partition.families(one_based=True),
            "best_objective": self.best_objective,
            "initial_objective": self.initial_objective,
            "iterations": self.iterations,
            "levels": self.levels,
            "stop_reason": self.stop_reason,
            "config": asdict(self.config),
        }
        if timing:
            out["wall_time"] = self.wall_time
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing))


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 stream; identical seeds give identical draws on every platform."""
    return np.random.Generator(np.random.PCG64(seed))


def _check_movable(sizes: Sequence[int]) -> None:
    if len(sizes) < 2:
        raise ValueError("single-move needs at least 2 families")
    if max(sizes) < 2:
        raise ValueError("no legal move: every family is a singleton")


def _draw_move(labels, sizes, n_families: int, rng: np.random.Generator) -> tuple[int, int]:
    p = len(labels)
    while True:
        part = int(rng.integers(p))
        target = int(rng.integers(n_families - 1)) + 1
        if target >= labels[part]:
            target += 1
        if sizes[labels[part] - 1] > 1:
            return part, target


def single_move(partition: Partition, rng: np.random.Generator) -> Partition:
    """Move one random part to a different random family without emptying its donor."""
    sizes = partition.sizes
    _check_movable(sizes)
    part, target = _draw_move(partition.assignment, sizes, partition.n_families, rng)
    labels = list(partition.assignment)
    labels[part] = target
    return Partition(tuple(labels), partition.n_families)


def accept(delta: float, temperature: float, r: float) -> bool:
    """Metropolis test: ``exp(delta / temperature) > r``."""
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    return math.exp(min(delta / temperature, 700.0)) > r


def _score(pair_sum: float, n: int) -> float:
    return pair_sum / (DIVISION_GUARD + n * (n - 1) / 2)


def _total(scores: Sequence[float]) -> float:
    # same accumulation order as similarity.objective()
    total = 0.0
    for s in scores:
        total += s
    return total


def anneal(initial: Partition, sim: SymmetricMatrix, config: AnnealConfig = AnnealConfig()
           ) -> AnnealResult:
    if sim.kind != "similarity":
        raise TypeError("anneal needs a similarity matrix")
    if initial.n_parts != sim.size:
        raise ValueError(f"partition covers {initial.n_parts} parts, matrix has {sim.size}")
    if initial.empty_families:
        raise ValueError(f"initial partition has empty families {initial.empty_families}")
    _check_movable(initial.sizes)

    start = time.perf_counter()
    values = sim.values
    n = initial.n_families
    labels = list(initial.assignment)
    members = [set(f) for f in initial.families()]
    scores = [_score(family_pair_sum(sorted(f), values), len(f)) for f in members]
    sizes = [len(f) for f in members]
    rng = make_rng(config.seed)

    f_cur = _total(scores)
    f0 = f_cur
    best_labels, f_best = tuple(labels), f_cur
    trace: list[TraceRow] = []
    iteration = level = count1 = 0
    stop = "frozen"

    def evaluate(part: int, target: int) -> tuple[float, float, float]:
        donor = labels[part]
        d_members = sorted(members[donor - 1] - {part})
        r_members = sorted(members[target - 1] | {part})
        d_score = _score(family_pair_sum(d_members, values), len(d_members))
        r_score = _score(family_pair_sum(r_members, values), len(r_members))
        trial = list(scores)
        trial[donor - 1] = d_score
        trial[target - 1] = r_score
        return _total(trial), d_score, r_score

    def apply(part: int, target: int, d_score: float, r_score: float) -> None:
        donor = labels[part]
        members[donor - 1].discard(part)
        members[target - 1].add(part)
        sizes[donor - 1] -= 1
        sizes[target - 1] += 1
        scores[donor - 1] = d_score
        scores[target - 1] = r_score
        labels[part] = target

    while stop == "frozen":
        temp = config.temperature(level)
        if temp < config.t_final:
            break
        count = proposals = 0
        while count < config.markov_len:
            if config.strict_count and proposals >= STRICT_PROPOSAL_FACTOR * config.markov_len:
                break
            proposals += 1
            part, target = _draw_move(labels, sizes, n, rng)
            f_new, d_score, r_score = evaluate(part, target)
            iteration += 1
            if f_new > f_best + EQUAL_TOL:
                apply(part, target, d_score, r_score)
                f_cur = f_new
                f_best, best_labels = f_new, tuple(labels)
                count += 1
                count1 = 0
            elif abs(f_new - f_best) <= EQUAL_TOL:
                apply(part, target, d_score, r_score)
                f_cur = f_new
                count += 1
                count1 += 1
            else:
                if accept(f_new - f_cur, temp, float(rng.random())):
                    apply(part, target, d_score, r_score)
                    f_cur = f_new
                    count1 = 0
                else:
                    count1 += 1
                if not config.strict_count:
                    count += 1
            if config.debug:
                full = objective(Partition(tuple(labels), n), sim)
                if abs(full - f_cur) > 1e-12:
                    raise AssertionError(f"incremental objective {f_cur} != full {full}")
            trace.append(TraceRow(iteration, temp, f_cur, f_best))
            if config.stagnation_limit is not None and count1 >= config.stagnation_limit:
                stop = "stagnation"
                break
        level += 1

    return AnnealResult(
        best_partition=Partition(best_labels, n),
        best_objective=f_best,
        initial_objective=f0,
        iterations=iteration,
        levels=level,
        stop_reason=stop,
        trace=tuple(trace),
        config=config,
        wall_time=time.perf_counter() - start,
    )


def seed_sweep(initial: Partition, sim: SymmetricMatrix, config: AnnealConfig,
               seeds: Sequence[int]) -> list[AnnealResult]:
    """Independent runs, one per seed, in the order given."""
    return [anneal(initial, sim, config.replace(seed=s)) for s in seeds]


@dataclass(frozen=True)
class ClusterResult:
    similarity: SymmetricMatrix
    distance: SymmetricMatrix
    tree: LinkageTree
    clinkage: Partition
    clinkage_objective: float

    @property
    def n_families(self) -> int:
        return self.clinkage.n_families


@dataclass(frozen=True)
class PipelineResult(ClusterResult):
    sa: AnnealResult = None


def cluster_stage(matrix: PartCodeMatrix, n_families: int | None = None, ranges=None
                  ) -> ClusterResult:
    """Similarity -> distance -> complete linkage -> cut (default ceil(m/4) families)."""
    sim = similarity_matrix(matrix, ranges)
    dist = distance_matrix(sim)
    tree = complete_linkage(dist)
    n = n_families if n_families is not None else default_family_count(matrix.m)
    start = cut_tree(tree, n)
    return ClusterResult(sim, dist, tree, start, objective(start, sim))


def run_pipeline(matrix: PartCodeMatrix, n_families: int | None = None,
                 config: AnnealConfig = AnnealConfig(), ranges=None) -> PipelineResult:
    """The clustering stage followed by annealing from its cut."""
    c = cluster_stage(matrix, n_families, ranges)
    return PipelineResult(**vars(c), sa=anneal(c.clinkage, c.similarity, config))
