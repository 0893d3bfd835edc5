"""Resource bounds with environment overrides."""

import os

DEFAULT_MAX_BALL = 250_000
DEFAULT_MAX_GROUP_ORDER = 10**6
DEFAULT_TREE_RADIUS = 8

_ENV_MAX_BALL = "COVERCALC_MAX_BALL"
_flag_max_ball = None


def set_max_ball(value):
    """Process-wide bound set from the command line; wins over the environment."""
    global _flag_max_ball
    _flag_max_ball = None if value is None else int(value)


def max_ball(override=None):
    """Ball-size bound: explicit override, command-line flag, $COVERCALC_MAX_BALL, default."""
    if override is not None:
        return int(override)
    if _flag_max_ball is not None:
        return _flag_max_ball
    env = os.environ.get(_ENV_MAX_BALL)
    if env:
        return int(env)
    return DEFAULT_MAX_BALL
