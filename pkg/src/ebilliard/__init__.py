"""Three-periodic orbits in an elliptic billiard: centers, loci and their motion."""
from ._backend import BACKEND
from .billiard import Billiard, Orbit, caustic, invariant_report, orbit, orbit_family, orbit_oracle
from .centers import catalog, center, entry
from .errors import BilliardError
from .loci import sample_locus, self_intersections
from .kinematics import ballet, motion_profile
from .thresholds import discover_threshold, threshold

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Billiard",
    "BilliardError",
    "Orbit",
    "ballet",
    "catalog",
    "caustic",
    "center",
    "discover_threshold",
    "entry",
    "invariant_report",
    "motion_profile",
    "orbit",
    "orbit_family",
    "orbit_oracle",
    "sample_locus",
    "self_intersections",
    "threshold",
]
