"""JSON configuration: loading, validation, and the effective-config dump.

A config document is a JSON object with sections room, adt, irs, users,
noise, power, sweep, and output plus a top-level seed. Missing keys take
the built-in defaults; unknown keys are rejected with their full path. The
annotated schema lives in docs/config_schema.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .network import Scenario, build_default_scenario, default_settings

DEFAULT_SNR_POINTS_DB = tuple(float(db) for db in range(60, 121, 5))  # 13 points
DEFAULT_K_VALUES = tuple(range(1, 9))

_SCENARIO_SECTIONS = ("room", "adt", "irs", "users", "noise", "power", "seed")
_TOP_LEVEL_KEYS = set(_SCENARIO_SECTIONS) | {"sweep", "output"}


@dataclass(frozen=True)
class SweepSpec:
    snr_points_db: tuple[float, ...] = DEFAULT_SNR_POINTS_DB
    k_values: tuple[int, ...] = DEFAULT_K_VALUES

    def __post_init__(self) -> None:
        if not self.snr_points_db:
            raise ValueError("sweep.snr_points_db must be nonempty")
        if not self.k_values or any(k < 1 for k in self.k_values):
            raise ValueError("sweep.k_values must be a nonempty list of integers >= 1")


@dataclass(frozen=True)
class OutputSpec:
    svg: bool = True


def load_config(path: str | Path, seed: int | None = None) -> tuple[Scenario, SweepSpec, OutputSpec]:
    """Parse and validate a JSON config file into a ready-to-run triple.

    `seed` overrides the document's seed before user placement happens.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"config parse error in {path}: {exc}") from exc
    return parse_config(document, seed=seed)


def parse_config(
    document: object, seed: int | None = None
) -> tuple[Scenario, SweepSpec, OutputSpec]:
    """Validate an in-memory config document; see load_config."""
    if not isinstance(document, Mapping):
        raise ValueError("config root must be a JSON object")
    for key in document:
        if key not in _TOP_LEVEL_KEYS:
            raise ValueError(f"unknown config key: {key}")

    overrides = {k: document[k] for k in _SCENARIO_SECTIONS if k in document}
    if seed is not None:
        overrides["seed"] = seed
    scenario = build_default_scenario(overrides)
    sweep = _parse_sweep(document.get("sweep", {}))
    output = _parse_output(document.get("output", {}))
    return scenario, sweep, output


def _parse_sweep(section: object) -> SweepSpec:
    if not isinstance(section, Mapping):
        raise ValueError("sweep must be an object")
    for key in section:
        if key not in ("snr_points_db", "k_values"):
            raise ValueError(f"unknown config key: sweep.{key}")
    snr_points = section.get("snr_points_db", list(DEFAULT_SNR_POINTS_DB))
    if not isinstance(snr_points, (list, tuple)) or any(
        isinstance(p, bool) or not isinstance(p, (int, float)) for p in snr_points
    ):
        raise ValueError("sweep.snr_points_db must be a list of numbers")
    k_values = section.get("k_values", list(DEFAULT_K_VALUES))
    if not isinstance(k_values, (list, tuple)) or any(
        isinstance(k, bool) or not isinstance(k, int) for k in k_values
    ):
        raise ValueError("sweep.k_values must be a list of integers")
    return SweepSpec(tuple(float(p) for p in snr_points), tuple(k_values))


def _parse_output(section: object) -> OutputSpec:
    if not isinstance(section, Mapping):
        raise ValueError("output must be an object")
    for key in section:
        if key != "svg":
            raise ValueError(f"unknown config key: output.{key}")
    svg = section.get("svg", True)
    if not isinstance(svg, bool):
        raise ValueError(f"output.svg must be true or false, got {svg!r}")
    return OutputSpec(svg=svg)


def effective_config(
    scenario: Scenario, sweep: SweepSpec | None = None, output: OutputSpec | None = None
) -> dict:
    """Full config document that reproduces the scenario exactly.

    User positions are dumped explicitly, so reloading the result rebuilds
    an identical Scenario regardless of how the original was placed.
    """
    sweep = sweep or SweepSpec()
    output = output or OutputSpec()
    settings = default_settings()
    document: dict = {
        "seed": scenario.rng_seed,
        "room": {
            "dims": list(scenario.room_dims),
            "receiver_z": scenario.receiver_z,
        },
        "adt": {
            "center": list(scenario.adt.center_pos.as_tuple()),
            "side_offset_m": scenario.adt.side_offset,
            "side_elevation_deg": scenario.adt.branch_orientations[1].elevation_deg
            if len(scenario.adt.branch_orientations) > 1
            else settings["adt"]["side_elevation_deg"],
            "vcsels_per_branch": scenario.adt.vcsels_per_branch,
            "beam_waist_m": scenario.adt.beam_waist,
            "wavelength_m": scenario.adt.beam_wavelength,
        },
        "users": {
            "k": len(scenario.users),
            "positions": [list(u.position.as_tuple()) for u in scenario.users],
            "blocked": [i for i, u in enumerate(scenario.users) if u.blocked],
            "pd_area_m2": scenario.users[0].branches[0].pd_area,
            "responsivity_a_per_w": scenario.users[0].branches[0].responsivity,
            "branch_azimuths_deg": [
                b.orientation.azimuth_deg for b in scenario.users[0].branches
            ],
            "branch_elevation_deg": scenario.users[0].branches[0].orientation.elevation_deg,
            "fov_deg": scenario.users[0].branches[0].fov_half_angle_deg,
        },
        "noise": {
            "rin_db_per_hz": scenario.noise.rin_db_per_hz,
            "noise_current_density": scenario.noise.noise_current_density,
            "tia_noise_figure_db": scenario.noise.tia_noise_figure_db,
            "bandwidth_b": scenario.noise.bandwidth_b,
        },
        "power": {
            "p_tot_w": scenario.p_tot,
            "eye_safety_cap_w": scenario.eye_safety_cap,
            "split": scenario.power_split,
            "max_mirrors_per_user": scenario.max_mirrors_per_user,
        },
        "sweep": {
            "snr_points_db": list(sweep.snr_points_db),
            "k_values": list(sweep.k_values),
        },
        "output": {"svg": output.svg},
    }
    if scenario.irs is None:
        document["irs"] = {"enabled": False}
    else:
        panel = scenario.irs
        along = (
            panel.panel_center.x if panel.wall.startswith("y") else panel.panel_center.y
        )
        document["irs"] = {
            "enabled": True,
            "wall": panel.wall,
            "grid_m": panel.grid_m,
            "element_width_m": panel.element_size[0],
            "element_height_m": panel.element_size[1],
            "reflectivity": panel.reflectivity,
            "center_height_m": panel.panel_center.z,
            "center_along_m": along,
        }
    return document


def write_config(document: Mapping, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
