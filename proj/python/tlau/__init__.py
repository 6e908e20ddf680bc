from ._core import (
    ConfigError,
    PhysicsError,
    StatsError,
    de_broglie,
    design,
    fringe_displacement,
    moire,
    pattern,
    sensitivity,
    talbot_coefficient,
    verify,
    visibility,
)

__all__ = [
    "ConfigError",
    "PhysicsError",
    "StatsError",
    "de_broglie",
    "design",
    "fringe_displacement",
    "moire",
    "pattern",
    "sensitivity",
    "talbot_coefficient",
    "verify",
    "visibility",
]
