"""
From curvatures back to a curve
===============================

Integrate the Frenet system for a prescribed profile and compare the frame
with the exact answer for constant curvatures.
"""

import numpy as np
from scipy.linalg import expm

from frenet4 import builtin_profile, frenet_apparatus, frenet_matrix, reconstruct_curve

h, n = 1e-3, 10_001
profile = builtin_profile("constant", [1.0, 1.0, 1.0], (0.0, h, n))
result = reconstruct_curve(profile)

# for constant curvatures the frame is exp(sK) applied to the initial frame
exact = expm((n - 1) * h * frenet_matrix(1.0, 1.0, 1.0))
print("frame error at s = 10:", np.abs(result.apparatus.frames[-1] - exact).max())
print("orthonormality drift:", result.drift)

# a varying profile, and the round trip through finite differences
profile = builtin_profile("sine", [1.0, 0.3, 1.1, 0.8, 0.2, 0.7, 0.5, 0.3, 1.3], (0.0, h, 6001))
curve = reconstruct_curve(profile).curve
app = frenet_apparatus(curve)
truth = profile.kappas[app.offset:app.offset + app.n]
print("relative curvature error after the round trip:", np.max(np.abs(app.kappas / truth - 1)))
