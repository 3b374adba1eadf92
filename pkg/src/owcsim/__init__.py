"""Link-level simulator for indoor laser optical wireless networks assisted
by a wall of steerable specular mirrors."""

from .beam import (
    GaussianBeam,
    intensity,
    power_through_circle,
    power_through_rectangle,
    rayleigh_range,
    waist_at,
)
from .channel import AdrBranch, ChannelGain, irs_gain, los_gain, total_gain
from .config import (
    OutputSpec,
    SweepSpec,
    effective_config,
    load_config,
    parse_config,
)
from .geometry import (
    GeometryError,
    MirrorElement,
    Orientation,
    Vec3,
    direction_from_orientation,
    fov_gate,
    incidence_angle,
    mirror_plane_axes,
    specular_reflect,
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
from .network import (
    AdtSpec,
    Assignment,
    IrsPanel,
    Scenario,
    UserSpec,
    assign_mirrors,
    build_default_scenario,
    build_irs_panel,
    evaluate_scenario,
    evaluate_user,
    irs_gain_matrix,
    place_users_uniform,
    power_for_transmit_snr,
    scenario_assignment,
    simulate_scenario,
    sweep_snr,
    sweep_users,
    transmit_snr_db,
    with_irs_grid,
    without_irs,
)
from .output import ResultRow, ResultTable, read_result_csv, render_line_plot, write_csv

__version__ = "0.1.0"

__all__ = [
    "AdrBranch",
    "AdtSpec",
    "Assignment",
    "ChannelGain",
    "GaussianBeam",
    "GeometryError",
    "IrsPanel",
    "LinkResult",
    "MirrorElement",
    "NoiseParams",
    "Orientation",
    "OutputSpec",
    "ResultRow",
    "ResultTable",
    "Scenario",
    "SweepSpec",
    "UserSpec",
    "Vec3",
    "achievable_rate",
    "assign_mirrors",
    "build_default_scenario",
    "build_irs_panel",
    "direction_from_orientation",
    "effective_config",
    "evaluate_scenario",
    "evaluate_user",
    "fov_gate",
    "incidence_angle",
    "intensity",
    "irs_gain",
    "irs_gain_matrix",
    "load_config",
    "los_gain",
    "mirror_plane_axes",
    "noise_variance",
    "parse_config",
    "place_users_uniform",
    "power_for_transmit_snr",
    "power_through_circle",
    "power_through_rectangle",
    "rayleigh_range",
    "read_result_csv",
    "render_line_plot",
    "scenario_assignment",
    "simulate_scenario",
    "sinr",
    "specular_reflect",
    "steer_mirror",
    "sum_rate",
    "sweep_snr",
    "sweep_users",
    "thermal_noise_variance",
    "total_gain",
    "transmit_snr_db",
    "waist_at",
    "with_irs_grid",
    "without_irs",
    "write_csv",
]
