"""
A gallery of quantum channels
=============================

Construct channels from Kraus operators, measurements, unitary mixtures, and
state mixing; verify trace preservation, the duality pairing, and the Choi
matrix reconstruction on each.
"""

import numpy as np

from entpow import (
    DensityMatrix,
    choi_apply,
    dagger,
    max_entangled,
    measurement_channel,
    mixing_channel,
    rank_boost_channel,
    random_separable,
    swap_channel,
    unitary_channel,
)

rng = np.random.default_rng(0)


def random_density(d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ dagger(g)
    return m / np.trace(m).real


# The swap channel exchanges the two parties
swap = swap_channel(2)
rho = random_density(4)
print("swap is trace preserving:", swap.is_trace_preserving)

# Duality: Tr(Lambda*(O) rho) == Tr(O Lambda(rho)) for every O and rho
obs = rng.normal(size=(4, 4))
obs = obs + obs.T
lhs = np.trace(swap.dual_apply(obs) @ rho)
rhs = np.trace(obs @ swap.apply_matrix(rho))
print(f"duality pairing residual: {abs(lhs - rhs):.2e}")

# The Choi matrix reconstructs the channel action
cx = unitary_channel(np.eye(4)[[0, 1, 3, 2]], (2, 2), label="cx")
choi = cx.choi()
recon = choi_apply(choi, rho)
print(f"Choi reconstruction residual: {np.max(np.abs(recon - cx.apply_matrix(rho))):.2e}")

# A measurement channel: detect the singlet, then reprepare
singlet = (np.eye(4)[1] - np.eye(4)[2]) / np.sqrt(2)
proj = np.outer(singlet, singlet)
meas = measurement_channel(
    [proj, np.eye(4) - proj],
    [DensityMatrix(np.eye(4) / 4, (2, 2)), DensityMatrix(proj, (2, 2))],
    (2, 2),
)
print("measurement channel outcomes:", len(meas.effects))

# Mixing toward a fixed state: rho -> p rho + (1-p) sigma
sigma = random_separable((2, 2), terms=3, seed=5)
mix = mixing_channel(0.3, sigma)
out = mix.apply_matrix(rho)
expect = 0.3 * rho + 0.7 * sigma.matrix
print(f"mixing closed form residual: {np.max(np.abs(out - expect)):.2e}")

# The rank-boost channel: detecting the rank-2 maximally entangled state
# triggers a pure output of Schmidt rank 3
boost = rank_boost_channel(2, 3, np.sqrt([0.6, 0.25, 0.15]))
phi2 = max_entangled(2, 3)
out = boost.apply_matrix(phi2.projector())
target = boost.output_state.projector()
print(f"rank-boost on phi+_2 hits its pure target: {np.max(np.abs(out - target)):.2e}")
