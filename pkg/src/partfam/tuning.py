"""L9(3^3) Taguchi experiments over the annealing schedule and their analysis.

Three three-level factors (initial temperature, cooling factor, Markov chain
length) are run on the nine rows of the standard L9 array. The responses are
summarised by per-level means, delta/rank, larger-the-better S/N ratios and a
one-way-per-factor ANOVA with two residual degrees of freedom.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .annealing import AnnealConfig, run_pipeline
from .dataset import PartCodeMatrix

__all__ = [
    "DEFAULT_FACTORS",
    "DEFAULT_SEEDS",
    "AnovaRow",
    "AnovaTable",
    "ResponseTable",
    "TaguchiDesign",
    "TaguchiReport",
    "anova",
    "f22_sf",
    "l9_array",
    "response_table",
    "run_design",
    "sn_ratio_larger_better",
    "tune",
]

# (config field, levels)
DEFAULT_FACTORS: tuple[tuple[str, tuple[float, float, float]], ...] = (
    ("t_init", (10.0, 20.0, 30.0)),
    ("alpha", (0.75, 0.85, 0.95)),
    ("markov_len", (20, 30, 40)),
)
DEFAULT_SEEDS = (0, 1, 2, 3, 4)

_L9 = (
    (1, 1, 1),
    (1, 2, 2),
    (1, 3, 3),
    (2, 1, 2),
    (2, 2, 3),
    (2, 3, 1),
    (3, 1, 3),
    (3, 2, 1),
    (3, 3, 2),
)


def l9_array() -> np.ndarray:
    """The 9 x 3 level-index pattern (levels 1..3), first column blocked in triples."""
    return np.array(_L9, dtype=int)


@dataclass(frozen=True)
class TaguchiDesign:
    factors: tuple[tuple[str, tuple], ...] = DEFAULT_FACTORS
    rows: tuple[tuple[int, ...], ...] = _L9

    def __post_init__(self):
        if len(self.factors) != 3:
            raise ValueError(f"L9 design takes exactly 3 factors, got {len(self.factors)}")
        for name, levels in self.factors:
            if len(levels) != 3:
                raise ValueError(f"L9 requires 3 levels; factor {name!r} has {len(levels)}")
        object.__setattr__(self, "factors", tuple((n, tuple(l)) for n, l in self.factors))
        object.__setattr__(self, "rows", tuple(tuple(int(x) for x in r) for r in self.rows))

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.factors]

    def settings(self, row: int) -> dict:
        """Parameter values for experiment ``row`` (0-based)."""
        return {name: levels[lvl - 1]
                for (name, levels), lvl in zip(self.factors, self.rows[row])}

    def to_dict(self) -> dict:
        return {"factors": [{"name": n, "levels": list(l)} for n, l in self.factors],
                "rows": [list(r) for r in self.rows]}


def _check_responses(responses) -> np.ndarray:
    y = np.asarray(responses, dtype=np.float64)
    if y.shape != (9,):
        raise ValueError(f"expected 9 responses, got {y.size}")
    return y


def _level_means(design: TaguchiDesign, y: np.ndarray) -> np.ndarray:
    rows = np.array(design.rows)
    return np.array([[y[rows[:, f] == lvl].mean() for lvl in (1, 2, 3)]
                     for f in range(len(design.factors))])


@dataclass(frozen=True)
class ResponseTable:
    names: tuple[str, ...]
    level_means: np.ndarray  # factors x 3
    delta: np.ndarray
    rank: tuple[int, ...]
    best_level: tuple[int, ...]  # 1-based
    best_settings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            name: {"level_means": self.level_means[i].tolist(), "delta": float(self.delta[i]),
                   "rank": self.rank[i], "best_level": self.best_level[i],
                   "best_value": self.best_settings.get(name)}
            for i, name in enumerate(self.names)
        }


def response_table(design: TaguchiDesign, responses: Sequence[float]) -> ResponseTable:
    """Level means, delta (max - min) and rank (1 = largest delta), larger-is-better."""
    y = _check_responses(responses)
    means = _level_means(design, y)
    delta = means.max(axis=1) - means.min(axis=1)
    # stable sort keeps factor order on ties
    order = sorted(range(len(delta)), key=lambda i: -delta[i])
    rank = [0] * len(delta)
    for r, i in enumerate(order, start=1):
        rank[i] = r
    best = tuple(int(np.argmax(row)) + 1 for row in means)
    settings = {name: levels[b - 1] for (name, levels), b in zip(design.factors, best)}
    return ResponseTable(tuple(design.names), means, delta, tuple(rank), best, settings)


def f22_sf(f: float) -> float:
    """Upper tail of the F(2, 2) distribution, which has the closed form 1/(1+F)."""
    return 1.0 / (1.0 + f)


@dataclass(frozen=True)
class AnovaRow:
    source: str
    df: int
    ss: float
    ms: float
    f_ratio: float | None = None
    p_value: float | None = None
    pct_contribution: float | None = None


@dataclass(frozen=True)
class AnovaTable:
    factors: tuple[AnovaRow, ...]
    residual: AnovaRow
    total: AnovaRow

    def row(self, name: str) -> AnovaRow:
        for r in self.factors:
            if r.source == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"factors": [vars(r) for r in self.factors],
                "residual": vars(self.residual), "total": vars(self.total)}


def anova(design: TaguchiDesign, responses: Sequence[float]) -> AnovaTable:
    """Main-effects ANOVA on the raw responses.

    The F ratio and p-value are ``None`` when the residual sum of squares is
    not positive.
    """
    y = _check_responses(responses)
    g = y.mean()
    means = _level_means(design, y)
    total_ss = float(np.sum((y - g) ** 2))
    factor_ss = [float(3 * np.sum((row - g) ** 2)) for row in means]
    resid_ss = total_ss - sum(factor_ss)
    resid_df = 8 - 2 * len(factor_ss)
    resid_ms = resid_ss / resid_df
    rows = []
    for name, ss in zip(design.names, factor_ss):
        ms = ss / 2
        f = ms / resid_ms if resid_ss > 0 else None
        rows.append(AnovaRow(
            name, 2, ss, ms, f,
            f22_sf(f) if f is not None else None,
            100.0 * ss / total_ss if total_ss > 0 else None,
        ))
    resid = AnovaRow("residual", resid_df, resid_ss, resid_ms,
                     pct_contribution=100.0 * resid_ss / total_ss if total_ss > 0 else None)
    return AnovaTable(tuple(rows), resid, AnovaRow("total", 8, total_ss, total_ss / 8))


def sn_ratio_larger_better(replicates: Sequence[float]) -> float:
    y = np.atleast_1d(np.asarray(replicates, dtype=np.float64))
    if y.size == 0 or np.any(y <= 0):
        raise ValueError("larger-the-better S/N needs positive replicates")
    return float(-10.0 * math.log10(np.mean(1.0 / y**2)))


def _pipeline_runner(matrix: PartCodeMatrix, config: AnnealConfig, n_families: int | None) -> float:
    return run_pipeline(matrix, n_families, config).sa.best_objective


def run_design(matrix: PartCodeMatrix, design: TaguchiDesign = TaguchiDesign(),
               base: AnnealConfig = AnnealConfig(), seeds: Sequence[int] = DEFAULT_SEEDS,
               runner: Callable[[int, AnnealConfig], float] | None = None,
               n_families: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Run every design row over ``seeds``.

    Returns ``(responses, replicates)``: the per-row mean best objective and
    the 9 x len(seeds) array it was averaged from. ``runner(row, config)``
    replaces the full pipeline when given (``row`` is 0-based).
    """
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    reps = np.empty((len(design.rows), len(seeds)))
    for r in range(len(design.rows)):
        cfg = base.replace(**design.settings(r))
        for s, seed in enumerate(seeds):
            cfg_s = cfg.replace(seed=seed)
            reps[r, s] = runner(r, cfg_s) if runner else _pipeline_runner(matrix, cfg_s, n_families)
    return reps.mean(axis=1), reps


@dataclass(frozen=True)
class TaguchiReport:
    design: TaguchiDesign
    responses: np.ndarray
    replicates: np.ndarray | None
    sn_ratios: np.ndarray | None
    table: ResponseTable
    anova: AnovaTable
    recommended: AnnealConfig

    def to_dict(self) -> dict:
        return {
            "design": self.design.to_dict(),
            "responses": self.responses.tolist(),
            "replicates": None if self.replicates is None else self.replicates.tolist(),
            "sn_ratios": None if self.sn_ratios is None else self.sn_ratios.tolist(),
            "response_table": self.table.to_dict(),
            "anova": self.anova.to_dict(),
            "recommended": {n: getattr(self.recommended, n) for n in self.design.names},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        """Design rows with settings, responses and S/N ratios."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["experiment", *self.design.names, "response", "sn_ratio"])
        for r in range(9):
            s = self.design.settings(r)
            sn = "" if self.sn_ratios is None else f"{self.sn_ratios[r]:.5f}"
            w.writerow([r + 1, *(s[n] for n in self.design.names), repr(float(self.responses[r])), sn])
        return buf.getvalue()


def tune(responses: Sequence[float] | None = None, *, matrix: PartCodeMatrix | None = None,
         design: TaguchiDesign = TaguchiDesign(), base: AnnealConfig = AnnealConfig(),
         seeds: Sequence[int] = DEFAULT_SEEDS, n_families: int | None = None) -> TaguchiReport:
    """Analyse given responses, or run the design on ``matrix`` first."""
    replicates = None
    if responses is None:
        if matrix is None:
            raise ValueError("give either responses or a matrix to run")
        responses, replicates = run_design(matrix, design, base, seeds, n_families=n_families)
    y = _check_responses(responses)
    if replicates is not None:
        sn = np.array([sn_ratio_larger_better(r) for r in replicates])
    elif np.all(y > 0):
        sn = np.array([sn_ratio_larger_better([v]) for v in y])
    else:
        sn = None
    table = response_table(design, y)
    return TaguchiReport(design, y, replicates, sn, table, anova(design, y),
                         base.replace(**table.best_settings))
