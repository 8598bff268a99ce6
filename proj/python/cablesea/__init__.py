"""Cable-driven series elastic actuator: plant models, 2-DOF torque
controller synthesis and closed-loop simulation."""

from ._core import *  # noqa: F401,F403
from ._core import Error

__all__ = [name for name in dir() if not name.startswith("_")]
