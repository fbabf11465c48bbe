"""Vectors carried along with the Frenet frame.

A field W is frame-constant when W' = D x W, with D = tau T + kappa B the
angular velocity of the frame. Its Frenet coordinates never change, which
gives an exact answer to compare the RK4 integration with.

    python demos/transport_tour.py
"""

import numpy as np

from genhelix.curvegeom import circular_helix, frenet_series, twisted_cubic
from genhelix.transport import frame_coefficients, relative_derivative, transport_field

for name, curve in (("circular helix, 10 turns", circular_helix(3.0, 4.0, (0.0, 20 * np.pi))), ("twisted cubic", twisted_cubic())):
    frame = frenet_series(curve, n=8192).frame()
    field = transport_field(frame, [1.0, 2.0, 2.0])
    rel, inner = relative_derivative(field.W, frame)
    print(name)
    print(f"  |W| drift                    {field.length_drift:.1e}")
    print(f"  RK4 vs frame-coefficient     {field.agreement:.1e}")
    print(f"  Frenet coefficient drift     {frame_coefficients(field.W, frame).score:.1e}")
    print(f"  max |W' - D x W| (interior)  {np.max(np.abs(rel[~inner])):.1e}")
