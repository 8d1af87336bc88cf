"""
Complete-linkage families
=========================

Agglomerate parts by furthest-neighbour distance, then cut the tree into
ceil(m / 4) families. The cut is the starting point for annealing.
"""

from partfam import builtin_dataset, cluster_stage, cut_tree, export_dendrogram, objective

parts = builtin_dataset("P2")
stage = cluster_stage(parts)

for a, b, h in stage.tree.merges:
    print(f"merge {a:>2} + {b:>2} at {h:.6f}")

print(export_dendrogram(stage.tree, "newick", leaf_labels="id"))
print("families:", stage.clinkage, " objective:", round(stage.clinkage_objective, 6))

# coarser and finer cuts come from the same tree
for k in range(1, 6):
    part = cut_tree(stage.tree, k)
    print(k, part, round(objective(part, stage.similarity), 4))

# scipy can draw it if matplotlib is around
try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from scipy.cluster.hierarchy import dendrogram

    dendrogram(stage.tree.to_scipy(), labels=list(parts.part_ids), color_threshold=0)
    plt.ylabel("distance")
    plt.savefig("dendrogram_p2.png", dpi=120)
    print("wrote dendrogram_p2.png")
except ImportError:
    pass
