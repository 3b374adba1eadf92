"""Scenario assembly, mirror assignment, per-user evaluation, and sweeps.

A Scenario is immutable after validation. Every user is served by one
transmitter branch, which devotes one aimed beam to the user's receiver and
one to each mirror assigned to that user; the total transmit power is split
across those beams by the configured rule. Evaluations are pure functions
of the scenario, so sweep points can be computed in any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from .beam import GaussianBeam
from .channel import AdrBranch, ChannelGain, irs_gain, los_gain, total_gain
from .geometry import (
    GeometryError,
    MirrorElement,
    Orientation,
    Vec3,
    steer_mirror,
)
from .link import (
    LinkResult,
    NoiseParams,
    achievable_rate,
    noise_variance,
    sinr,
    sum_rate,
    thermal_noise_variance,
)
from .output import ResultRow, ResultTable

_WALL_INWARD = {
    "x_min": Vec3(1.0, 0.0, 0.0),
    "x_max": Vec3(-1.0, 0.0, 0.0),
    "y_min": Vec3(0.0, 1.0, 0.0),
    "y_max": Vec3(0.0, -1.0, 0.0),
}

POWER_SPLITS = ("equal", "los_priority")


@dataclass(frozen=True)
class AdtSpec:
    """Ceiling transmitter: one central branch plus symmetric side branches."""

    center_pos: Vec3
    branch_orientations: tuple[Orientation, ...]
    vcsels_per_branch: int  # N, each branch is an N x N emitter array
    beam_waist: float  # m
    beam_wavelength: float  # m
    side_offset: float = 0.3  # m, horizontal displacement of side branches

    def __post_init__(self) -> None:
        if not self.branch_orientations:
            raise ValueError("adt must have at least one branch")
        if self.vcsels_per_branch < 1:
            raise ValueError(
                f"adt.vcsels_per_branch must be >= 1, got {self.vcsels_per_branch}"
            )
        if self.beam_waist <= 0.0 or self.beam_wavelength <= 0.0:
            raise ValueError("adt beam waist and wavelength must be positive")
        if self.side_offset < 0.0:
            raise ValueError("adt.side_offset_m must be nonnegative")

    def branch_positions(self) -> tuple[Vec3, ...]:
        """Branch apertures: the first branch sits at the centre, the rest
        are displaced horizontally along their azimuth."""
        positions = [self.center_pos]
        for orientation in self.branch_orientations[1:]:
            az = math.radians(orientation.azimuth_deg)
            offset = Vec3(math.cos(az), math.sin(az), 0.0).scaled(self.side_offset)
            positions.append(self.center_pos + offset)
        return tuple(positions)


@dataclass(frozen=True)
class IrsPanel:
    """M x M contiguous mirror tiling on one wall, normals facing the room."""

    wall: str
    grid_m: int
    element_size: tuple[float, float]  # (width, height), m
    reflectivity: float
    panel_center: Vec3
    elements: tuple[MirrorElement, ...]

    def __post_init__(self) -> None:
        if self.wall not in _WALL_INWARD:
            raise ValueError(f"irs.wall must be one of {sorted(_WALL_INWARD)}, got {self.wall}")
        if len(self.elements) != self.grid_m**2:
            raise ValueError("irs panel must hold exactly grid_m^2 elements")

    def label(self) -> str:
        return f"{self.grid_m}x{self.grid_m}"


@dataclass(frozen=True)
class UserSpec:
    """One user: floor position, blockage flag, and receiver branches."""

    position: Vec3
    blocked: bool
    branches: tuple[AdrBranch, ...]


@dataclass(frozen=True)
class Scenario:
    """Validated room, transmitter, mirror wall, users, and power budget."""

    room_dims: tuple[float, float, float]
    receiver_z: float
    adt: AdtSpec
    irs: IrsPanel | None
    users: tuple[UserSpec, ...]
    noise: NoiseParams
    p_tot: float  # W, total transmit power serving each user
    eye_safety_cap: float  # W, per-beam limit
    power_split: str
    max_mirrors_per_user: int | None
    rng_seed: int

    def __post_init__(self) -> None:
        dx, dy, dz = self.room_dims
        if dx <= 0.0 or dy <= 0.0 or dz <= 0.0:
            raise ValueError(f"room.dims must be positive, got {self.room_dims}")
        if not 0.0 <= self.receiver_z <= dz:
            raise ValueError(
                f"room.receiver_z must be inside the room height, got {self.receiver_z}"
            )
        self._require_inside("adt.center", self.adt.center_pos)
        for b, pos in enumerate(self.adt.branch_positions()):
            self._require_inside(f"adt branch {b}", pos)
        if not self.users:
            raise ValueError("users.k must be >= 1")
        for i, user in enumerate(self.users):
            self._require_inside(f"users[{i}].position", user.position)
            if not user.branches:
                raise ValueError(f"users[{i}] must have at least one receiver branch")
        if self.p_tot <= 0.0:
            raise ValueError(f"power.p_tot_w must be positive, got {self.p_tot}")
        if self.eye_safety_cap <= 0.0:
            raise ValueError(
                f"power.eye_safety_cap_w must be positive, got {self.eye_safety_cap}"
            )
        if self.p_tot > self.eye_safety_cap:
            raise ValueError(
                "power.p_tot_w exceeds power.eye_safety_cap_w: a single-beam user "
                "would receive an unsafe beam"
            )
        if self.power_split not in POWER_SPLITS:
            raise ValueError(
                f"power.split must be one of {POWER_SPLITS}, got {self.power_split}"
            )
        if self.max_mirrors_per_user is not None and self.max_mirrors_per_user < 1:
            raise ValueError("power.max_mirrors_per_user must be >= 1 or null")
        if self.rng_seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.rng_seed}")

    def _require_inside(self, name: str, pos: Vec3) -> None:
        dx, dy, dz = self.room_dims
        if not (0.0 <= pos.x <= dx and 0.0 <= pos.y <= dy and 0.0 <= pos.z <= dz):
            raise ValueError(f"{name}: position out of bounds {pos.as_tuple()}")


@dataclass(frozen=True)
class Assignment:
    """Per-user mirror indices; every mirror serves at most one user."""

    per_user: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for mirrors in self.per_user:
            for index in mirrors:
                if index < 0:
                    raise ValueError(f"mirror index must be nonnegative, got {index}")
                if index in seen:
                    raise ValueError(f"mirror {index} assigned to more than one user")
                seen.add(index)


def default_adr_branches(
    azimuths_deg: Sequence[float] = (0.0, 90.0, 180.0, 270.0),
    elevation_deg: float = 60.0,
    fov_deg: float = 25.0,
    pd_area: float = 2.0e-5,
    responsivity: float = 0.4,
) -> tuple[AdrBranch, ...]:
    return tuple(
        AdrBranch(Orientation(az, elevation_deg), fov_deg, pd_area, responsivity)
        for az in azimuths_deg
    )


def build_irs_panel(
    room_dims: tuple[float, float, float],
    wall: str = "y_max",
    grid_m: int = 5,
    element_width: float = 0.15,
    element_height: float = 0.10,
    reflectivity: float = 0.95,
    center_height: float = 1.5,
    center_along: float | None = None,
) -> IrsPanel:
    """Tile an M x M mirror array on the chosen wall, centred as requested."""
    if wall not in _WALL_INWARD:
        raise ValueError(f"irs.wall must be one of {sorted(_WALL_INWARD)}, got {wall}")
    if grid_m < 1:
        raise ValueError(f"irs.grid_m must be >= 1, got {grid_m}")
    if element_width <= 0.0 or element_height <= 0.0:
        raise ValueError("irs element size must be positive")
    dx, dy, dz = room_dims
    along_span = dx if wall.startswith("y") else dy
    if center_along is None:
        center_along = along_span / 2.0
    half_w = grid_m * element_width / 2.0
    half_h = grid_m * element_height / 2.0
    if center_along - half_w < 0.0 or center_along + half_w > along_span:
        raise ValueError("irs panel exceeds the wall extent along its width")
    if center_height - half_h < 0.0 or center_height + half_h > dz:
        raise ValueError("irs panel exceeds the wall extent along its height")

    inward = _WALL_INWARD[wall]
    plane = {"x_min": 0.0, "x_max": dx, "y_min": 0.0, "y_max": dy}[wall]

    def on_wall(along: float, height: float) -> Vec3:
        if wall.startswith("y"):
            return Vec3(along, plane, height)
        return Vec3(plane, along, height)

    elements = []
    for row in range(grid_m):
        height = center_height + (row - (grid_m - 1) / 2.0) * element_height
        for col in range(grid_m):
            along = center_along + (col - (grid_m - 1) / 2.0) * element_width
            elements.append(
                MirrorElement(
                    on_wall(along, height), inward, element_width, element_height, reflectivity
                )
            )
    return IrsPanel(
        wall,
        grid_m,
        (element_width, element_height),
        reflectivity,
        on_wall(center_along, center_height),
        tuple(elements),
    )


def place_users_uniform(
    k: int,
    room_dims: tuple[float, float, float],
    seed: int,
    plane_z: float = 0.0,
) -> list[Vec3]:
    """Seeded i.i.d. uniform positions on the receiver plane.

    Draws are prefix-stable: the first k positions of a (seed, k + n) draw
    equal the (seed, k) draw, which keeps nested user sweeps consistent.
    """
    if k < 1:
        raise ValueError(f"user count must be >= 1, got {k}")
    rng = np.random.default_rng(seed)
    draws = rng.random((k, 2))
    return [
        Vec3(float(u * room_dims[0]), float(v * room_dims[1]), plane_z)
        for u, v in draws
    ]


# ---------------------------------------------------------------------------
# Default scenario and config-style overrides


def default_settings() -> dict:
    """Nested default configuration; every path here is overridable."""
    return {
        "seed": 7,
        "room": {"dims": [5.0, 5.0, 3.0], "receiver_z": 0.0},
        "adt": {
            "center": None,  # null means the ceiling centre
            "side_offset_m": 0.3,
            "side_elevation_deg": 65.0,
            "vcsels_per_branch": 5,
            "beam_waist_m": 5.0e-6,
            "wavelength_m": 1.55e-6,
        },
        "irs": {
            "enabled": True,
            "wall": "y_max",
            "grid_m": 5,
            "element_width_m": 0.15,
            "element_height_m": 0.10,
            "reflectivity": 0.95,
            "center_height_m": 1.5,
            "center_along_m": None,  # null means the wall midpoint
        },
        "users": {
            "k": 4,
            "positions": None,  # null means seeded uniform placement
            "blocked": [],
            "pd_area_m2": 2.0e-5,
            "responsivity_a_per_w": 0.4,
            "branch_azimuths_deg": [0.0, 90.0, 180.0, 270.0],
            "branch_elevation_deg": 60.0,
            "fov_deg": 25.0,
        },
        "noise": {
            "rin_db_per_hz": -155.0,
            "noise_current_density": 4.47e-12,
            "tia_noise_figure_db": 5.0,
            "bandwidth_b": 1.5e9,
        },
        "power": {
            "p_tot_w": 0.01,
            "eye_safety_cap_w": 1.0,
            "split": "equal",
            "max_mirrors_per_user": None,
        },
    }


def build_default_scenario(overrides: Mapping | None = None) -> Scenario:
    """Default indoor scenario with optional overrides merged over it.

    Unknown keys are rejected with their full path; every violated
    constraint is reported with the offending path as well.
    """
    settings = _merge_settings(default_settings(), dict(overrides or {}), "")
    return _scenario_from_settings(settings)


def _merge_settings(defaults: dict, overrides: Mapping, prefix: str) -> dict:
    merged = dict(defaults)
    for key, value in overrides.items():
        path = f"{prefix}{key}"
        if key not in defaults:
            raise ValueError(f"unknown config key: {path}")
        if isinstance(defaults[key], dict):
            if not isinstance(value, Mapping):
                raise ValueError(f"{path} must be an object")
            merged[key] = _merge_settings(defaults[key], value, f"{path}.")
        else:
            merged[key] = value
    return merged


def _number(settings: Mapping, section: str, key: str) -> float:
    value = settings[section][key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{section}.{key} must be a number, got {value!r}")
    return float(value)


def _positive(settings: Mapping, section: str, key: str) -> float:
    value = _number(settings, section, key)
    if value <= 0.0:
        raise ValueError(f"{section}.{key} must be positive, got {value}")
    return value


def _int_at_least(settings: Mapping, section: str, key: str, minimum: int) -> int:
    value = settings[section][key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{section}.{key} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{section}.{key} must be >= {minimum}, got {value}")
    return value


def _vec3(value: object, path: str) -> Vec3:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 3
        or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in value)
    ):
        raise ValueError(f"{path} must be a list of three numbers")
    return Vec3(float(value[0]), float(value[1]), float(value[2]))


def _scenario_from_settings(settings: dict) -> Scenario:
    room = settings["room"]
    dims_raw = room["dims"]
    dims_vec = _vec3(dims_raw, "room.dims")
    room_dims = (dims_vec.x, dims_vec.y, dims_vec.z)
    if min(room_dims) <= 0.0:
        raise ValueError(f"room.dims must be positive, got {room_dims}")
    receiver_z = _number(settings, "room", "receiver_z")

    adt_cfg = settings["adt"]
    center = (
        Vec3(room_dims[0] / 2.0, room_dims[1] / 2.0, room_dims[2])
        if adt_cfg["center"] is None
        else _vec3(adt_cfg["center"], "adt.center")
    )
    side_elevation = _number(settings, "adt", "side_elevation_deg")
    orientations = (Orientation(0.0, 90.0),) + tuple(
        Orientation(az, side_elevation) for az in (0.0, 90.0, 180.0, 270.0)
    )
    adt = AdtSpec(
        center_pos=center,
        branch_orientations=orientations,
        vcsels_per_branch=_int_at_least(settings, "adt", "vcsels_per_branch", 1),
        beam_waist=_positive(settings, "adt", "beam_waist_m"),
        beam_wavelength=_positive(settings, "adt", "wavelength_m"),
        side_offset=_number(settings, "adt", "side_offset_m"),
    )

    irs_cfg = settings["irs"]
    if not isinstance(irs_cfg["enabled"], bool):
        raise ValueError(f"irs.enabled must be true or false, got {irs_cfg['enabled']!r}")
    irs = None
    if irs_cfg["enabled"]:
        center_along = irs_cfg["center_along_m"]
        if center_along is not None:
            center_along = _number(settings, "irs", "center_along_m")
        reflectivity = _number(settings, "irs", "reflectivity")
        if not 0.0 <= reflectivity <= 1.0:
            raise ValueError(f"irs.reflectivity must be in [0, 1], got {reflectivity}")
        irs = build_irs_panel(
            room_dims,
            wall=irs_cfg["wall"],
            grid_m=_int_at_least(settings, "irs", "grid_m", 1),
            element_width=_positive(settings, "irs", "element_width_m"),
            element_height=_positive(settings, "irs", "element_height_m"),
            reflectivity=reflectivity,
            center_height=_number(settings, "irs", "center_height_m"),
            center_along=center_along,
        )

    seed = settings["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed!r}")

    users_cfg = settings["users"]
    azimuths = users_cfg["branch_azimuths_deg"]
    if not isinstance(azimuths, (list, tuple)) or not azimuths:
        raise ValueError("users.branch_azimuths_deg must be a nonempty list")
    branches = default_adr_branches(
        azimuths_deg=[float(az) for az in azimuths],
        elevation_deg=_number(settings, "users", "branch_elevation_deg"),
        fov_deg=_positive(settings, "users", "fov_deg"),
        pd_area=_positive(settings, "users", "pd_area_m2"),
        responsivity=_positive(settings, "users", "responsivity_a_per_w"),
    )
    k = _int_at_least(settings, "users", "k", 1)
    if users_cfg["positions"] is None:
        positions = place_users_uniform(k, room_dims, seed, receiver_z)
    else:
        raw = users_cfg["positions"]
        if not isinstance(raw, (list, tuple)) or not raw:
            raise ValueError("users.positions must be a nonempty list of [x, y, z]")
        positions = [_vec3(p, f"users.positions[{i}]") for i, p in enumerate(raw)]
        if len(positions) != k:
            raise ValueError(
                f"users.k ({k}) must match the number of users.positions ({len(positions)})"
            )
    blocked_cfg = users_cfg["blocked"]
    if not isinstance(blocked_cfg, (list, tuple)):
        raise ValueError("users.blocked must be a list of user indices")
    blocked = set()
    for index in blocked_cfg:
        if isinstance(index, bool) or not isinstance(index, int) or not 0 <= index < k:
            raise ValueError(f"users.blocked entries must be user indices below k, got {index!r}")
        blocked.add(index)
    users = tuple(
        UserSpec(pos, i in blocked, branches) for i, pos in enumerate(positions)
    )

    rin = _number(settings, "noise", "rin_db_per_hz")
    if rin >= 0.0:
        raise ValueError(f"noise.rin_db_per_hz must be negative, got {rin}")
    density = _number(settings, "noise", "noise_current_density")
    if density < 0.0:
        raise ValueError(f"noise.noise_current_density must be nonnegative, got {density}")
    noise = NoiseParams(
        rin_db_per_hz=rin,
        noise_current_density=density,
        tia_noise_figure_db=_number(settings, "noise", "tia_noise_figure_db"),
        bandwidth_b=_positive(settings, "noise", "bandwidth_b"),
    )

    power = settings["power"]
    max_mirrors = power["max_mirrors_per_user"]
    if max_mirrors is not None:
        max_mirrors = _int_at_least(settings, "power", "max_mirrors_per_user", 1)
    split = power["split"]
    if split not in POWER_SPLITS:
        raise ValueError(f"power.split must be one of {POWER_SPLITS}, got {split!r}")

    return Scenario(
        room_dims=room_dims,
        receiver_z=receiver_z,
        adt=adt,
        irs=irs,
        users=users,
        noise=noise,
        p_tot=_positive(settings, "power", "p_tot_w"),
        eye_safety_cap=_positive(settings, "power", "eye_safety_cap_w"),
        power_split=split,
        max_mirrors_per_user=max_mirrors,
        rng_seed=seed,
    )


def with_irs_grid(scenario: Scenario, grid_m: int) -> Scenario:
    """Same scenario with the mirror wall rebuilt at a new grid size."""
    base = scenario.irs
    if base is not None:
        along, height = _panel_center_coords(base)
        panel = build_irs_panel(
            scenario.room_dims,
            wall=base.wall,
            grid_m=grid_m,
            element_width=base.element_size[0],
            element_height=base.element_size[1],
            reflectivity=base.reflectivity,
            center_height=height,
            center_along=along,
        )
    else:
        panel = build_irs_panel(scenario.room_dims, grid_m=grid_m)
    return replace(scenario, irs=panel)


def without_irs(scenario: Scenario) -> Scenario:
    return replace(scenario, irs=None)


def _panel_center_coords(panel: IrsPanel) -> tuple[float, float]:
    along = panel.panel_center.x if panel.wall.startswith("y") else panel.panel_center.y
    return along, panel.panel_center.z


# ---------------------------------------------------------------------------
# Serving-branch choice, gain matrix, and assignment


def scenario_responsivity(scenario: Scenario) -> float:
    return scenario.users[0].branches[0].responsivity


def _aimed_beam(scenario: Scenario, origin: Vec3, target: Vec3) -> GaussianBeam:
    return GaussianBeam(
        waist_w0=scenario.adt.beam_waist,
        wavelength=scenario.adt.beam_wavelength,
        power_pt=1.0,
        origin=origin,
        axis=(target - origin).normalized(),
    )


def serving_branch_index(scenario: Scenario, user_index: int) -> int:
    """Transmitter branch serving this user.

    The branch with the best unblocked direct gain wins; when every branch
    is blocked or gated out, fall back to the branch best placed for the
    mirror wall (or nearest the user when there is none).
    """
    user = scenario.users[user_index]
    positions = scenario.adt.branch_positions()
    best_index: int | None = None
    best_gain = 0.0
    for index, pos in enumerate(positions):
        gain, _ = los_gain(
            pos,
            user.position,
            user.branches,
            _aimed_beam(scenario, pos, user.position),
            user.blocked,
            room_dims=scenario.room_dims,
        )
        if gain > best_gain:
            best_gain, best_index = gain, index
    if best_index is not None:
        return best_index
    target = scenario.irs.panel_center if scenario.irs is not None else user.position
    distances = [pos.distance_to(target) for pos in positions]
    return min(range(len(positions)), key=lambda b: (distances[b], b))


def irs_gain_matrix(scenario: Scenario) -> list[list[float]]:
    """Reflected-path gain per (user, mirror), each mirror steered per pair."""
    if scenario.irs is None:
        return [[] for _ in scenario.users]
    positions = scenario.adt.branch_positions()
    matrix = []
    for user_index, user in enumerate(scenario.users):
        branch_pos = positions[serving_branch_index(scenario, user_index)]
        row = []
        for mirror in scenario.irs.elements:
            try:
                normal = steer_mirror(branch_pos, mirror.center, user.position)
            except GeometryError:
                # Forward pass-through: no mirror orientation can serve the pair.
                row.append(0.0)
                continue
            gain, _ = irs_gain(
                branch_pos,
                replace(mirror, normal=normal),
                user.position,
                user.branches,
                _aimed_beam(scenario, branch_pos, mirror.center),
            )
            row.append(gain)
        matrix.append(row)
    return matrix


def assign_mirrors(
    scenario: Scenario,
    gains: Sequence[Sequence[float]],
    max_per_user: int | None = None,
) -> Assignment:
    """Greedy assignment: repeatedly grant the largest remaining gain.

    Mirrors stay disjoint across users and each user holds at most
    max_per_user mirrors (unlimited when None). Ties break toward the lowest
    (user index, mirror index). Zero-gain pairs are never assigned.
    """
    if len(gains) != len(scenario.users):
        raise ValueError(
            f"dimension mismatch: gains has {len(gains)} rows for {len(scenario.users)} users"
        )
    widths = {len(row) for row in gains}
    if len(widths) > 1:
        raise ValueError("dimension mismatch: gains rows have unequal lengths")
    if max_per_user is not None and max_per_user < 1:
        raise ValueError(f"max_per_user must be >= 1 or None, got {max_per_user}")

    entries = []
    for user_index, row in enumerate(gains):
        for mirror_index, gain in enumerate(row):
            if gain < 0.0:
                raise ValueError(
                    f"gains must be nonnegative, got {gain} at "
                    f"({user_index}, {mirror_index})"
                )
            if gain > 0.0:
                entries.append((-gain, user_index, mirror_index))
    entries.sort()

    cap = math.inf if max_per_user is None else max_per_user
    taken: set[int] = set()
    counts = [0] * len(gains)
    assigned: list[list[int]] = [[] for _ in gains]
    for _neg_gain, user_index, mirror_index in entries:
        if mirror_index in taken or counts[user_index] >= cap:
            continue
        taken.add(mirror_index)
        counts[user_index] += 1
        assigned[user_index].append(mirror_index)
    return Assignment(tuple(tuple(sorted(m)) for m in assigned))


def scenario_assignment(scenario: Scenario) -> Assignment:
    if scenario.irs is None:
        return Assignment(tuple(() for _ in scenario.users))
    return assign_mirrors(
        scenario, irs_gain_matrix(scenario), scenario.max_mirrors_per_user
    )


# ---------------------------------------------------------------------------
# Per-user evaluation


@dataclass(frozen=True)
class _UserPlan:
    """Power-independent part of a user evaluation."""

    beam_gains: tuple[float, ...]
    has_los_beam: bool
    gain: ChannelGain
    responsivity: float


def _plan_user(scenario: Scenario, assignment: Assignment, user_index: int) -> _UserPlan:
    user = scenario.users[user_index]
    branch_pos = scenario.adt.branch_positions()[serving_branch_index(scenario, user_index)]
    h_los, los_branch = los_gain(
        branch_pos,
        user.position,
        user.branches,
        _aimed_beam(scenario, branch_pos, user.position),
        user.blocked,
        room_dims=scenario.room_dims,
    )
    nlos: list[float] = []
    best_nlos_gain = 0.0
    best_nlos_branch: int | None = None
    for mirror_index in assignment.per_user[user_index]:
        mirror = scenario.irs.elements[mirror_index]
        steered = replace(
            mirror, normal=steer_mirror(branch_pos, mirror.center, user.position)
        )
        gain, branch = irs_gain(
            branch_pos,
            steered,
            user.position,
            user.branches,
            _aimed_beam(scenario, branch_pos, mirror.center),
        )
        nlos.append(gain)
        if gain > best_nlos_gain:
            best_nlos_gain, best_nlos_branch = gain, branch
    combined = total_gain(h_los, nlos, los_branch, best_nlos_branch)
    beam_gains = (() if user.blocked else (h_los,)) + tuple(nlos)
    return _UserPlan(beam_gains, not user.blocked, combined, user.branches[0].responsivity)


def _beam_powers(
    n_beams: int, has_los_beam: bool, p_tot: float, split: str
) -> tuple[float, ...]:
    if n_beams == 0:
        return ()
    if split == "los_priority" and has_los_beam:
        return (p_tot,) + (0.0,) * (n_beams - 1)
    share = p_tot / n_beams
    return (share,) * n_beams


def _finish(plan: _UserPlan, scenario: Scenario, p_tot: float) -> LinkResult:
    powers = _beam_powers(len(plan.beam_gains), plan.has_los_beam, p_tot, scenario.power_split)
    for power in powers:
        if power > scenario.eye_safety_cap:
            raise ValueError(
                f"per-beam power {power:.6g} W exceeds power.eye_safety_cap_w "
                f"{scenario.eye_safety_cap:.6g} W"
            )
    received = sum(g * p for g, p in zip(plan.beam_gains, powers))
    sigma2 = noise_variance(scenario.noise, received, plan.responsivity)
    gamma = sinr(plan.gain, p_tot, plan.responsivity, sigma2)
    rate = achievable_rate(gamma, scenario.noise.bandwidth_b)
    return LinkResult(received, sigma2, gamma, rate, plan.gain)


def evaluate_user(scenario: Scenario, assignment: Assignment, user_index: int) -> LinkResult:
    """Full link for one user: gains, power split, noise, SNR, and rate."""
    plan = _plan_user(scenario, assignment, user_index)
    return _finish(plan, scenario, scenario.p_tot)


def evaluate_scenario(scenario: Scenario) -> list[LinkResult]:
    """Assignment plus per-user link results for the whole scenario."""
    assignment = scenario_assignment(scenario)
    return [evaluate_user(scenario, assignment, i) for i in range(len(scenario.users))]


# ---------------------------------------------------------------------------
# Experiment sweeps


def transmit_snr_db(noise: NoiseParams, responsivity: float, p_tot: float) -> float:
    """Transmit SNR (R P)^2 over the thermal floor, in dB."""
    return 10.0 * math.log10((responsivity * p_tot) ** 2 / thermal_noise_variance(noise))


def power_for_transmit_snr(noise: NoiseParams, responsivity: float, snr_db: float) -> float:
    """Transmit power that realises a given transmit SNR."""
    return math.sqrt(10.0 ** (snr_db / 10.0) * thermal_noise_variance(noise)) / responsivity


def _variant_scenario(scenario: Scenario, label: str) -> Scenario:
    if label == "none":
        return without_irs(scenario)
    head, _, tail = label.partition("x")
    if head.isdigit() and tail == head:
        return with_irs_grid(scenario, int(head))
    raise ValueError(f"unknown variant label: {label!r}")


def sweep_snr(
    scenario: Scenario,
    snr_points_db: Sequence[float],
    variants: Sequence[str] = ("none", "5x5", "10x10"),
) -> ResultTable:
    """Sum rate against transmit SNR for each mirror-wall variant.

    All variants see identical users; per-variant gains and assignments are
    power-independent and computed once.
    """
    points = [float(db) for db in snr_points_db]
    if not points:
        raise ValueError("snr_points_db must be nonempty")
    responsivity = scenario_responsivity(scenario)
    rows = []
    for label in variants:
        variant = _variant_scenario(scenario, label)
        assignment = scenario_assignment(variant)
        plans = [
            _plan_user(variant, assignment, i) for i in range(len(variant.users))
        ]
        for db in points:
            p_tot = power_for_transmit_snr(variant.noise, responsivity, db)
            rates = [_finish(plan, variant, p_tot).rate for plan in plans]
            rows.append(ResultRow(db, label, sum_rate(rates), tuple(rates)))
    return ResultTable.from_rows(rows)


def sweep_users(scenario: Scenario, k_values: Sequence[int]) -> ResultTable:
    """Sum rate against user count, with and without the mirror wall.

    User draws are nested prefixes of one seeded stream, so growing K keeps
    every existing user in place and the curves stay nondecreasing under
    dedicated-beam service.
    """
    ks = [int(k) for k in k_values]
    if not ks:
        raise ValueError("k_values must be nonempty")
    for k in ks:
        if k < 1:
            raise ValueError(f"k_values must be >= 1, got {k}")
    with_panel = scenario if scenario.irs is not None else with_irs_grid(scenario, 5)
    irs_label = with_panel.irs.label()
    positions = place_users_uniform(
        max(ks), scenario.room_dims, scenario.rng_seed, scenario.receiver_z
    )
    template = scenario.users[0].branches
    rows = []
    for k in ks:
        users = tuple(UserSpec(positions[i], False, template) for i in range(k))
        for label, variant in (
            ("none", replace(with_panel, irs=None, users=users)),
            (irs_label, replace(with_panel, users=users)),
        ):
            rates = [result.rate for result in evaluate_scenario(variant)]
            rows.append(ResultRow(float(k), label, sum_rate(rates), tuple(rates)))
    return ResultTable.from_rows(rows)


def simulate_scenario(scenario: Scenario) -> ResultTable:
    """Single evaluation of the configured scenario as a one-variant table."""
    label = "none" if scenario.irs is None else scenario.irs.label()
    rates = [result.rate for result in evaluate_scenario(scenario)]
    snr_db = transmit_snr_db(scenario.noise, scenario_responsivity(scenario), scenario.p_tot)
    return ResultTable.from_rows(
        [ResultRow(snr_db, label, sum_rate(rates), tuple(rates))]
    )
