"""
Annealing away from the linkage cut
===================================

Single-part moves, Metropolis acceptance and geometric cooling. The linkage
objective is a floor: the best partition seen never drops below it.
"""

import numpy as np
from partfam import AnnealConfig, anneal, builtin_dataset, cluster_stage, seed_sweep

parts = builtin_dataset("P5")
stage = cluster_stage(parts)
print("linkage objective:", round(stage.clinkage_objective, 5))

cfg = AnnealConfig(seed=0)
print(f"{cfg.n_levels()} temperature levels x {cfg.markov_len} moves")

run = anneal(stage.clinkage, stage.similarity, cfg)
print("annealed:", round(run.best_objective, 5))
print(run.best_partition.canonical())

# convergence: current vs best objective at the end of each level
trace = np.array([(r.temperature, r.f_current, r.f_best) for r in run.trace])
ends = trace[cfg.markov_len - 1::cfg.markov_len]
for t, cur, best in ends[::6]:
    print(f"T={t:9.4f}  current={cur:.4f}  best={best:.4f}")

# ten seeds
best = [r.best_objective for r in seed_sweep(stage.clinkage, stage.similarity, cfg, range(10))]
print("ten seeds:", np.round(best, 4))
print(f"best gain over linkage: {100 * (max(best) / stage.clinkage_objective - 1):.1f}%")
