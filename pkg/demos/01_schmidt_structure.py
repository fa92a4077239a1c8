"""
Schmidt structure of pure and mixed states
==========================================

Build a few bipartite and tripartite states, read off their Schmidt
decompositions across different cuts, and check the PPT criterion on the
states' density matrices.
"""

import numpy as np

from entpow import (
    DensityMatrix,
    PureState,
    bell_states,
    is_ppt,
    max_entangled,
    partial_transpose,
    schmidt_decompose,
    schmidt_rank,
)

# A maximally entangled pair of qutrits: amplitudes (|00> + |11> + |22>)/sqrt(3)
phi3 = max_entangled(3, 3)
dec = schmidt_decompose(phi3)
print("phi+_3 Schmidt coefficients:", np.round(dec.coefficients, 6))
print("phi+_3 Schmidt rank:", schmidt_rank(phi3))

# A product state has Schmidt rank 1 by definition
product = PureState(np.kron([1.0, 0.0], [0.6, 0.8]), (2, 2))
print("product state rank:", schmidt_rank(product))

# The GHZ state looks maximally entangled across every 1|2 cut ...
amps = np.zeros(8)
amps[0] = amps[7] = 1 / np.sqrt(2)
ghz = PureState(amps, (2, 2, 2))
for cut in [(0,), (1,), (2,), (0, 1)]:
    print(f"GHZ rank across {cut}|rest:", schmidt_rank(ghz, cut=cut))

# ... and the PPT criterion flags its two-party marginal structure: the Bell
# projector has a negative partial transpose eigenvalue of exactly -1/2
bell = bell_states().phi_plus
rho = DensityMatrix(bell.projector(), (2, 2))
pt = partial_transpose(rho.matrix, (2, 2), party=1)
print("PT spectrum of phi+:", np.round(np.linalg.eigvalsh(pt), 6))
print("phi+ is PPT:", is_ppt(rho))

# Separable states always pass PPT; the maximally mixed state trivially so
mixed = DensityMatrix(np.eye(4) / 4, (2, 2))
print("I/4 is PPT:", is_ppt(mixed))
