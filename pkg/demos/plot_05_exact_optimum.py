"""
Certifying small instances by enumeration
=========================================

For a handful of parts every partition into N families can be scored.
Restricted growth strings list each one exactly once.
"""

from partfam import (EnumerationCapError, brute_force_optimum, builtin_dataset,
                     enumerate_partitions, stirling2)

print([p.assignment for p in enumerate_partitions(4, 2)])
print("S(10,3) =", stirling2(10, 3))

for name, n in (("P1", 2), ("P2", 3)):
    part, f = brute_force_optimum(builtin_dataset(name), n)
    print(name, part, round(f, 6))

# larger problems are refused up front
try:
    brute_force_optimum(builtin_dataset("P5"), 7)
except EnumerationCapError as err:
    print(err)
