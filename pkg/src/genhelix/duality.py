"""Binormal duals: integrating the binormal swaps curvature and torsion.

For a unit-speed curve with positive torsion, ``dual(s) = int B ds`` has
Frenet frame ``(B, -N, T)``, curvature ``tau`` and torsion ``kappa``. Under
this exchange the normal-helix law with angle ``theta`` becomes the
osculating-helix law with angle ``theta + pi/2``, and back.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from ._numerics import fd_derivative
from .config import DEFAULT, NumericConfig
from .curvegeom import FrenetSeries, norm
from .cylinderlab import SampledCurve
from .errors import VanishingTorsion


@dataclass(frozen=True)
class DualCurveResult:
    """Dual curve with its independently recomputed Frenet data.

    ``frame_relation_residuals`` are ``max|T' - B|, max|N' + N|, max|B' - T|``
    and ``curvature_swap_residuals`` are ``max|kappa' - tau|, max|tau' - kappa|``
    (primes marking the dual).
    """

    samples: FrenetSeries
    position: np.ndarray
    frame_relation_residuals: tuple
    curvature_swap_residuals: tuple
    speed_error: float

    def report(self) -> dict:
        t, n, b = self.frame_relation_residuals
        k, tau = self.curvature_swap_residuals
        return {
            "frame_T_minus_B": t,
            "frame_N_plus_N": n,
            "frame_B_minus_T": b,
            "kappa_minus_tau": k,
            "tau_minus_kappa": tau,
            "speed_error": self.speed_error,
        }


def binormal_dual(samples: FrenetSeries, config: NumericConfig = DEFAULT) -> DualCurveResult:
    """Integrate the binormal (composite Simpson from the left end) and re-analyze.

    The dual's Frenet data come from a fresh spline fit of the integrated
    positions, so the swap relations are checked rather than assumed.
    """
    if np.any(samples.tau <= config.tau_min):
        raise VanishingTorsion("the dual needs tau > tau_min on the whole grid")
    h = samples.spacing
    position = cumulative_simpson(samples.B, dx=h, axis=0, initial=0.0)
    dual = SampledCurve(samples.s, position).frenet(config)
    speed = norm(fd_derivative(position, h))
    frame = (
        float(np.max(norm(dual.T - samples.B))),
        float(np.max(norm(dual.N + samples.N))),
        float(np.max(norm(dual.B - samples.T))),
    )
    swap = (
        float(np.max(np.abs(dual.kappa - samples.tau))),
        float(np.max(np.abs(dual.tau - samples.kappa))),
    )
    return DualCurveResult(dual, position, frame, swap, float(np.max(np.abs(speed - 1.0))))


def osculating_to_normal_dual(samples: FrenetSeries, config: NumericConfig = DEFAULT) -> DualCurveResult:
    """The inverse direction: the binormal integral of an osculating helix is a normal helix.

    Same construction as :func:`binormal_dual`; applying it twice returns a
    curve congruent to the original.
    """
    return binormal_dual(samples, config)
