"""
Tuning the schedule with an L9 array
====================================

Three factors at three levels in nine runs. Analysing a fixed set of
responses is deterministic; running the design needs a few seconds.
"""

from partfam import AnnealConfig, TaguchiDesign, builtin_dataset, l9_array, run_design, tune

print(l9_array())

responses = [5.44289, 5.4903, 5.50745, 5.45195, 5.49802, 5.524, 5.54252, 5.52575, 5.46335]
report = tune(responses)
t = report.table
for name, means, d, r in zip(t.names, t.level_means, t.delta, t.rank):
    print(f"{name:>10}: levels {means.round(3)}  delta {d:.3f}  rank {r}")

for row in report.anova.factors:
    print(f"{row.source:>10}: SS {row.ss:.6f}  F {row.f_ratio:.2f}  p {row.p_value:.3f}")
print("recommended:", t.best_settings)

# a quick live run on the smallest problem with a short schedule
quick = TaguchiDesign((("t_init", (0.5, 1.0, 2.0)), ("alpha", (0.75, 0.85, 0.95)),
                       ("markov_len", (5, 10, 20))))
y, reps = run_design(builtin_dataset("P2"), quick, AnnealConfig(t_final=0.01), seeds=range(3))
print(tune(y, design=quick).table.best_settings)
