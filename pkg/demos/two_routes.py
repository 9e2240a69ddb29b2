"""
Two ways to find the mode coefficients
======================================

Both routes ask the unknowns inside the interface to vanish.  The Schur route
eliminates the exterior block and solves a small least-squares problem.  The
fixed-point route works with solves of the full system and takes the fixed
point of an affine map on ``k`` directly.  They give close, but not equal,
answers; both converge at second order here.
"""

import numpy as np

from lowreg import assemble, fixed_point_map, fixed_point_recover_k, iterate_k, schur_recover_k
from lowreg.harness import builtin_case

print("   N   k (Schur)         k (fixed point)   difference")
for n in (20, 40, 80, 160, 320):
    blocks = assemble(builtin_case("poisson1d-single", n, 2))
    k_s, _ = schur_recover_k(blocks)
    k_f, _ = fixed_point_recover_k(blocks)
    print(f"{n:4d}   {k_s[0]:.12f}   {k_f[0]:.12f}   {abs(k_s[0] - k_f[0]):.2e}")

# Iterating the map from zero reaches the same fixed point, slowly.
fmap = fixed_point_map(assemble(builtin_case("poisson1d-single", 40, 2)))
k = np.zeros(1)
for step in range(1, 61):
    k = iterate_k(fmap, k)
    if step in (1, 5, 20, 60):
        print(f"iteration {step:2d}: k = {k[0]:.12f}")
print(f"closed form:  k = {fixed_point_recover_k(None, fmap=fmap)[0][0]:.12f}")
