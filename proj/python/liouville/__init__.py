from ._liouville import *  # noqa: F401,F403
from ._liouville import LiouvilleError, PeriodicPotential, ActionMap  # noqa: F401
