"""
Part similarity from coding digits
==================================

Each part carries nine coding digits. Two parts agree on a digit by
1 - |difference| / 9, and their similarity is the mean over the digits.
"""

import numpy as np
from partfam import builtin_dataset, distance_matrix, pairwise_similarity, similarity_matrix

parts = builtin_dataset("P2")
print(parts.to_csv())

# one pair by hand
p1, p3 = parts.codes[0], parts.codes[2]
print("per-digit agreement:", np.round(1 - np.abs(p1.astype(int) - p3) / 9, 3))
print("similarity(p1, p3) =", pairwise_similarity(p1, p3))

# the whole distance matrix; p1/p5 and p7/p10 are the closest pairs
dist = distance_matrix(similarity_matrix(parts))
print(dist.to_csv())

i, j = np.unravel_index(np.argmin(dist.values + np.eye(10)), dist.values.shape)
print(f"closest pair: {parts.part_ids[i]} and {parts.part_ids[j]} at {dist[i, j]:.6f}")
