#!/usr/bin/env python3
"""From a bottleneck matching to an explicit interleaving of modules.

Two persistence modules on small grids are decomposed into bars, matched at
the bottleneck distance, and the matching is turned into a pair of module
morphisms whose composites are checked against the internal maps.
"""
import numpy as np

from hidist import GridModule, bottleneck, check_interleaving, decompose, matching_to_interleaving
from hidist.matching import candidate_values

# %% a module with a non-monomial map, and a second one nearby
M = GridModule([0, 1, 2, 4], [2, 2, 1, 0], [np.array([[1, 1], [0, 1]]), np.array([[1, 0]]),
                                          np.zeros((0, 1))])
N = GridModule([0.5, 2, 3.5], [1, 2, 0], [np.array([[1], [0]]), np.zeros((0, 2))])
C, D = decompose(M), decompose(N)
print("B M =", C)
print("B N =", D)

# %% bottleneck distance with a certificate matching
delta, sigma = bottleneck(C, D)
print(f"d_B = {delta}; matched pairs {[(C[i], D[j]) for i, j in sigma.pairs]}")

# %% the matching gives an interleaving at delta
f, g = matching_to_interleaving(sigma)
print("interleaving at delta:", check_interleaving(f, g))

# %% the same bar-wise maps just below delta do not interleave
cands = candidate_values(C, D)
eps = min(b - a for a, b in zip(cands, cands[1:])) / 2
f, g = matching_to_interleaving(sigma, delta=delta - eps, validate=False)
print(f"interleaving at {delta - eps}:", check_interleaving(f, g))
