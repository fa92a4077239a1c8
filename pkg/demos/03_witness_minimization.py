"""
Entanglement witnesses and product-state optimization
=====================================================

Minimize observables over the manifold of product states, compute the
smallest shift that keeps an operator a witness, and compare witnesses in
the shifted family.
"""

import numpy as np

from entpow import (
    OptimizerConfig,
    Witness,
    compare_finer_shifted,
    is_optimal,
    is_trivial,
    is_witness,
    lambda_min,
    max_entangled,
    max_over_products,
    min_over_products,
    schmidt_class_max,
    swap_witness,
)

cfg = OptimizerConfig(restarts=48, seed=0)
proj = max_entangled(2, 2).projector()

# The separable ceiling of the maximally entangled projector is 1/2: no
# product state overlaps phi+ by more than that
res = max_over_products(proj, (2, 2), cfg)
print(f"max product overlap with phi+: {res.value:.6f} (converged={res.converged})")
print(f"lambda_min(phi+): {lambda_min(proj, (2, 2), cfg):.6f}")

# So lambda I - phi+ is a witness exactly when lambda >= 1/2; the boundary
# case is optimal, larger shifts are witnesses but not optimal, and from 1
# upward the operator is PSD, i.e. a trivial witness
for lam in (0.5, 0.8, 1.25):
    w = Witness.from_shift(lam, proj, (2, 2), label=f"shift_{lam}")
    chk = is_witness(w, cfg)
    print(
        f"lambda={lam}: witness={chk.is_witness}, optimal={is_optimal(w, cfg)}, "
        f"trivial={is_trivial(w)}"
    )

# Within a fixed test operator, smaller shifts detect strictly more states
tight = Witness.from_shift(0.5, proj, (2, 2))
loose = Witness.from_shift(0.8, proj, (2, 2))
print("0.5-shift finer than 0.8-shift:", compare_finer_shifted(tight, loose))

# The swap operator is itself a witness whose product minimum is exactly 0
sw = swap_witness(2)
res = min_over_products(sw.operator, (2, 2), cfg)
print(f"swap witness product minimum: {res.value:.2e}")

# Schmidt-class ceilings of phi+_3: states of Schmidt rank <= r cannot
# overlap it by more than r/3, reaching 1 only at full rank
for r in (1, 2, 3):
    val = schmidt_class_max(max_entangled(3, 3).projector(), r, (3, 3), cfg)
    print(f"rank-{r} ceiling for phi+_3: {val:.6f} (exact {r}/3)")
