"""Binormal duals exchange curvature with torsion.

Integrating the binormal of a curve with positive torsion gives a curve
whose curvature is the old torsion and vice versa. Normal and osculating
helices trade places under this map, with the angle shifted by pi/2.

    python demos/duality_tour.py
"""

import numpy as np

from genhelix.config import DEFAULT
from genhelix.curvegeom import circular_helix, frenet_series
from genhelix.cylinderlab import SampledCurve, generate_normal_helix, make_cylinder
from genhelix.duality import binormal_dual
from genhelix.helixlaw import classify, integrate_osculating_law

# 1. A circular helix with kappa = 3/25 and tau = 4/25.
helix = frenet_series(circular_helix(3.0, 4.0, (0.0, 4 * np.pi)))
dual = binormal_dual(helix)
print("circular helix:")
print(f"  dual kappa in [{dual.samples.kappa.min():.8f}, {dual.samples.kappa.max():.8f}]  (4/25 = 0.16)")
print(f"  dual tau   in [{dual.samples.tau.min():.8f}, {dual.samples.tau.max():.8f}]  (3/25 = 0.12)")

# 2. The normal helix has tau > 0 only for s < 0, so the dual is taken there.
theta = np.pi / 36
normal = generate_normal_helix(make_cylinder(), theta, s_range=(-10, -0.5)).frenet(DEFAULT)
d = binormal_dual(normal)
verdict = classify(d.samples)
print("normal helix, theta = pi/36:")
print(f"  dual is {verdict.klass!r} with theta = {verdict.theta:.6f} (theta - pi/2 = {theta - np.pi / 2:.6f})")
print(f"  curvature swap residuals {max(d.curvature_swap_residuals):.1e}")

# 3. Solve the osculating law directly, then dualize back to a normal helix.
s = np.linspace(0.0, 4.0, 4001)
curve, _, _ = integrate_osculating_law(lambda x: 1 + 0.2 * np.sin(x), 1.2, 0.5, s)
osc = SampledCurve(s, curve.position).frenet(DEFAULT)
print("osculating helix from its natural equation, theta = 1.2:")
print(f"  classified as {classify(osc).klass!r}")
back = classify(binormal_dual(osc).samples)
print(f"  its dual is {back.klass!r} with theta = {back.theta:.6f} (1.2 - pi/2 = {1.2 - np.pi / 2:.6f})")
