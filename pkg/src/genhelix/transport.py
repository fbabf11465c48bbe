"""Frame-constant vector fields and the rotating-frame derivative.

A field ``W`` along a curve is constant with respect to a moving frame
``F`` when ``W' = D x W``, ``D`` being the frame's angular velocity. Such
fields keep their coordinates in the frame, which gives an exact oracle
for the ODE path.
"""

from dataclasses import dataclass

import numpy as np

from ._numerics import boundary_mask, fd_derivative, rk4_sampled
from .config import DEFAULT, NumericConfig
from .curvegeom import FrameField, cross, darboux_of_frame, norm
from .errors import GridTooCoarse


@dataclass(frozen=True)
class FConstantField:
    """Transported field ``W`` (RK4 path) and its frame-coefficient oracle."""

    s: np.ndarray
    W: np.ndarray
    W0: np.ndarray
    coefficients: np.ndarray
    oracle: np.ndarray
    agreement: float

    @property
    def length_drift(self) -> float:
        return float(np.max(np.abs(norm(self.W) - np.linalg.norm(self.W0))))

    def columns(self) -> dict:
        return {"Wx": self.W[:, 0], "Wy": self.W[:, 1], "Wz": self.W[:, 2]}


def _darboux(frame: FrameField, config):
    return frame.darboux if frame.darboux is not None else darboux_of_frame(frame, config).D


def transport_field(frame: FrameField, W0, config: NumericConfig = DEFAULT, strict: bool = True) -> FConstantField:
    """Integrate ``W' = D x W`` from ``W(s0) = W0`` with RK4.

    The angular velocity at half steps comes from cubic interpolation of
    the sampled ``D``. The result is compared with
    ``W = sum_i <W0, Fi(s0)> Fi(s)``; a disagreement above
    ``tol_transport * max(|W0|, 1)`` raises :class:`GridTooCoarse` unless
    ``strict`` is false, in which case it is only reported in ``agreement``.
    """
    W0 = np.asarray(W0, dtype=float)
    if W0.shape != (3,) or not np.all(np.isfinite(W0)):
        raise ValueError("W0 must be a finite 3-vector")
    D = _darboux(frame, config)
    W = rk4_sampled(lambda d, w: np.cross(d, w), W0, frame.spacing, D)
    coeffs = frame.frames[0] @ W0
    oracle = np.einsum("j,njk->nk", coeffs, frame.frames)
    agreement = float(np.max(norm(W - oracle)))
    if strict and agreement > config.tol_transport * max(np.linalg.norm(W0), 1.0):
        raise GridTooCoarse(f"RK4 and frame-coefficient transports differ by {agreement:.3e}")
    return FConstantField(frame.s, W, W0, coeffs, oracle, agreement)


def relative_derivative(W, frame: FrameField, config: NumericConfig = DEFAULT):
    """Rate of change of ``W`` seen from the frame: ``W' - D x W``.

    Returns the series and a mask of the nodes that used one-sided stencils.
    """
    W = np.asarray(W, dtype=float)
    dW = fd_derivative(W, frame.spacing)
    return dW - cross(_darboux(frame, config), W), boundary_mask(len(W))


@dataclass(frozen=True)
class FrameCoefficients:
    a: np.ndarray  # (n, 3): <W, F1>, <W, F2>, <W, F3>
    constancy: np.ndarray  # max_s |a_i(s) - a_i(s0)|

    @property
    def score(self) -> float:
        return float(np.max(self.constancy))


def frame_coefficients(W, frame: FrameField) -> FrameCoefficients:
    W = np.asarray(W, dtype=float)
    if W.shape[0] != frame.s.shape[0]:
        raise ValueError("field and frame grids differ")
    a = np.einsum("nk,nik->ni", W, frame.frames)
    return FrameCoefficients(a, np.max(np.abs(a - a[0]), axis=0))
