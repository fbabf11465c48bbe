"""Numerical settings shared by every module."""

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class NumericConfig:
    """Grid sizes and tolerances.

    Every numeric default used anywhere in the package lives here, so a
    single record is enough to reproduce a run.
    """

    n_grid: int = 2048
    gen_points: int = 0  # 0 means 2 * n_grid
    generator_pad: int = 32  # extra nodes per side kept for spline fitting

    eps_reg: float = 1e-10
    kappa_min: float = 1e-8
    tau_min: float = 1e-8

    quad_order: int = 8
    newton_steps: int = 4

    spline_degree: int = 7
    spline_knot_stride: int = 0  # 0 picks the spacing from the data

    tol_frame: float = 1e-8
    tol_transport: float = 1e-7
    tol_law: float = 1e-5
    tol_axis: float = 1e-6
    tol_planar: float = 1e-7
    tol_fit: float = 1e-5
    tol_surface: float = 1e-7
    tol_denominator: float = 1e-12

    phi_guard: float = 1e-3
    sphere_polar: int = 64
    sphere_azimuth: int = 128

    @property
    def generator_points(self) -> int:
        return self.gen_points if self.gen_points > 0 else 2 * self.n_grid

    def with_overrides(self, **overrides) -> "NumericConfig":
        known = {f.name: f.type for f in fields(self)}
        cast = {}
        for key, value in overrides.items():
            if key not in known:
                raise KeyError(f"unknown numeric setting {key!r}")
            current = getattr(self, key)
            cast[key] = type(current)(value)
        return replace(self, **cast)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["generator_points"] = self.generator_points
        return out


DEFAULT = NumericConfig()
