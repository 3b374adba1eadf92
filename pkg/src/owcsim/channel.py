"""Per-user optical channel gains: direct path, mirror path, and their sum.

Gains are power fractions of the serving beam, dimensionless in [0, 1].
The mirror path uses the unfolded-path model: an ideal planar specular
reflection preserves the Gaussian profile, so the reflected field is the
same beam continued to the total folded distance, with the finite mirror
entering as a multiplicative intercept fraction. Receiver combining is
select-best across the angle-diversity branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from .beam import GaussianBeam, power_through_circle, power_through_rectangle
from .geometry import (
    MirrorElement,
    Orientation,
    Vec3,
    direction_from_orientation,
    fov_gate,
    incidence_angle,
    mirror_plane_axes,
    specular_reflect,
)


@dataclass(frozen=True)
class AdrBranch:
    """One upward-facing photodiode branch of an angle diversity receiver."""

    orientation: Orientation
    fov_half_angle_deg: float
    pd_area: float  # m^2
    responsivity: float  # A/W

    def __post_init__(self) -> None:
        if self.pd_area <= 0.0:
            raise ValueError(f"pd_area must be positive, got {self.pd_area}")
        if self.responsivity <= 0.0:
            raise ValueError(f"responsivity must be positive, got {self.responsivity}")
        if not 0.0 < self.fov_half_angle_deg <= 90.0:
            raise ValueError(
                f"fov_half_angle_deg must be in (0, 90], got {self.fov_half_angle_deg}"
            )

    def normal(self) -> Vec3:
        return direction_from_orientation(self.orientation, "up")

    def aperture_radius(self) -> float:
        return math.sqrt(self.pd_area / math.pi)

    def fov_half_angle_rad(self) -> float:
        return math.radians(self.fov_half_angle_deg)


@dataclass(frozen=True)
class ChannelGain:
    """Direct gain, summed mirror gain, their total, and serving branches."""

    h_los: float
    h_nlos: float
    q: float
    serving_branch_los: int | None
    serving_branch_nlos: int | None

    def __post_init__(self) -> None:
        if not 0.0 <= self.h_los <= 1.0:
            raise ValueError(f"h_los must be in [0, 1], got {self.h_los}")
        if not 0.0 <= self.h_nlos <= 1.0:
            raise ValueError(f"h_nlos must be in [0, 1], got {self.h_nlos}")
        if self.q != self.h_los + self.h_nlos:
            raise ValueError("q must equal h_los + h_nlos exactly")


def los_gain(
    ap_branch_pos: Vec3,
    user_pos: Vec3,
    user_branches: Sequence[AdrBranch],
    beam: GaussianBeam,
    blocked: bool,
    room_dims: tuple[float, float, float] | None = None,
) -> tuple[float, int | None]:
    """Best-branch direct-path gain and the index of the serving branch.

    The beam is aimed at the user, so the photodiode sits on the beam axis
    and the captured fraction follows the circular-aperture form, gated by
    each branch's field of view. Returns (0.0, None) when the path is
    blocked or no branch sees the arrival direction.
    """
    if room_dims is not None:
        _require_in_room(user_pos, room_dims)
    if blocked:
        return 0.0, None
    separation = ap_branch_pos.distance_to(user_pos)
    arrival = (user_pos - ap_branch_pos).normalized()
    unit_beam = replace(beam, power_pt=1.0)
    return _best_branch(unit_beam, separation, arrival, user_branches)


def irs_gain(
    ap_branch_pos: Vec3,
    mirror: MirrorElement,
    user_pos: Vec3,
    user_branches: Sequence[AdrBranch],
    beam: GaussianBeam,
) -> tuple[float, int | None]:
    """Best-branch mirror-path gain for a beam aimed at the mirror centre.

    The intercept fraction is the power captured by the mirror rectangle
    projected onto the transverse plane at the mirror range. The reflected
    field is the same beam continued to the folded distance d1 + d2, and the
    photodiode capture is clipped so it never exceeds what the mirror
    intercepted. The mirror is expected to be steered for this geometry so
    the reflected axis passes through the user.
    """
    to_mirror = mirror.center - ap_branch_pos
    mirror_range = to_mirror.norm()
    u_in = to_mirror.normalized()
    leg_out = user_pos - mirror.center
    # Either endpoint behind the mirror plane cannot couple through it.
    if leg_out.dot(mirror.normal) <= 0.0:
        return 0.0, None
    if (ap_branch_pos - mirror.center).dot(mirror.normal) <= 0.0:
        return 0.0, None
    arrival = specular_reflect(u_in, mirror.normal)
    width_axis, height_axis = mirror_plane_axes(mirror.normal)
    width_eff = mirror.width * _projected_scale(width_axis, u_in)
    height_eff = mirror.height * _projected_scale(height_axis, u_in)
    if width_eff <= 0.0 or height_eff <= 0.0:
        return 0.0, None
    unit_beam = replace(beam, power_pt=1.0)
    intercept = power_through_rectangle(unit_beam, width_eff, height_eff, mirror_range)
    total_range = mirror_range + leg_out.norm()

    best_gain = 0.0
    best_index: int | None = None
    for index, branch in enumerate(user_branches):
        if not fov_gate(incidence_angle(arrival, branch.normal()), branch.fov_half_angle_rad()):
            continue
        captured = power_through_circle(unit_beam, branch.aperture_radius(), total_range)
        gain = mirror.reflectivity * min(intercept, captured)
        if gain > best_gain:
            best_gain, best_index = gain, index
    return best_gain, best_index


def total_gain(
    h_los: float,
    nlos_contributions: Sequence[float],
    los_branch: int | None = None,
    nlos_branch: int | None = None,
) -> ChannelGain:
    """Sum the direct gain and all assigned mirror contributions."""
    if not 0.0 <= h_los <= 1.0:
        raise ValueError(f"h_los must be in [0, 1], got {h_los}")
    for i, contribution in enumerate(nlos_contributions):
        if not 0.0 <= contribution <= 1.0:
            raise ValueError(
                f"NLoS contribution {i} must be in [0, 1], got {contribution}"
            )
    h_nlos = sum(nlos_contributions)
    return ChannelGain(h_los, h_nlos, h_los + h_nlos, los_branch, nlos_branch)


def _best_branch(
    unit_beam: GaussianBeam,
    total_distance: float,
    arrival: Vec3,
    branches: Sequence[AdrBranch],
) -> tuple[float, int | None]:
    best_gain = 0.0
    best_index: int | None = None
    for index, branch in enumerate(branches):
        if not fov_gate(incidence_angle(arrival, branch.normal()), branch.fov_half_angle_rad()):
            continue
        captured = power_through_circle(unit_beam, branch.aperture_radius(), total_distance)
        if captured > best_gain:
            best_gain, best_index = captured, index
    return best_gain, best_index


def _projected_scale(axis: Vec3, beam_dir: Vec3) -> float:
    along = axis.dot(beam_dir)
    return math.sqrt(max(0.0, 1.0 - along * along))


def _require_in_room(pos: Vec3, room_dims: tuple[float, float, float]) -> None:
    dx, dy, dz = room_dims
    if not (0.0 <= pos.x <= dx and 0.0 <= pos.y <= dy and 0.0 <= pos.z <= dz):
        raise ValueError(f"position out of bounds: {pos.as_tuple()} not in room {room_dims}")
