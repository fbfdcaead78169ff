# SPDX-License-Identifier: Apache-2.0
"""FMCW inter-radar interference channel sounder.

Synthesizes raw dechirped radar frames over a ray-traced multipath scene,
recovers the channel impulse response from the ghost-target interference and
derives power delay profile, RMS delay spread and elevation angle-of-arrival
maps. The heavy lifting lives in the compiled ``_core`` module; this package
just re-exports it.
"""

from isac_sounder._core import (
    SPEED_OF_LIGHT,
    ConfigError,
    DomainError,
    IoError,
    __version__,
    angle_map,
    extract_cir,
    ground_truth,
    path_gain_db,
    read_frame,
    rms_delay_spread,
    run_pipeline,
    synthesize,
    write_frame,
)

__all__ = [
    "SPEED_OF_LIGHT",
    "ConfigError",
    "DomainError",
    "IoError",
    "__version__",
    "angle_map",
    "extract_cir",
    "ground_truth",
    "path_gain_db",
    "read_frame",
    "rms_delay_spread",
    "run_pipeline",
    "synthesize",
    "write_frame",
]
