from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from kleekit.errors import InvalidTolerance


@dataclass(frozen=True)
class ToleranceCfg:
    """Numerical policy threaded through every geometric routine.

    eps_geom: absolute distance tolerance for incidence and containment.
    eps_rel: relative tolerance for unit-norm and support-function checks.
    cluster_radius: linkage radius used when grouping sampled support points
        into candidate polygon vertices.
    threshold_fraction: fraction of the sample count a single neighbourhood
        must hold before it counts as an accumulation of extreme points.
    accumulation_scale: neighbourhood radius for accumulation detection,
        as a fraction of the sampled body's diameter.
    """

    eps_geom: float = 1e-9
    eps_rel: float = 1e-9
    cluster_radius: float = 1e-6
    threshold_fraction: float = 0.05
    accumulation_scale: float = 0.3

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and v > 0 and v == v and v != float("inf")):
                raise InvalidTolerance(f"{f.name} must be a finite positive number, got {v!r}")
        if self.eps_geom > self.cluster_radius:
            raise InvalidTolerance(
                f"eps_geom ({self.eps_geom}) must not exceed cluster_radius ({self.cluster_radius})"
            )
        if self.threshold_fraction >= 1:
            raise InvalidTolerance("threshold_fraction must be < 1")

    def replace(self, **overrides) -> "ToleranceCfg":
        return dataclasses.replace(self, **overrides)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT_TOL = ToleranceCfg()
