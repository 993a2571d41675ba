"""Continuous cocycles over full shifts on finitely generated groups.

The package builds, for a cocycle given by a local rule, the homomorphism
phi and the continuous transfer function b with
``c(g, x) = b(gx) phi(g) b(x)^-1``, and reports a concrete witness when
the construction breaks down (for instance on groups with two ends).
"""

from .cocycle import LocalCocycle, check_identity, make_hom_cocycle, make_twisted
from .errors import (
    CompletenessError,
    DocumentError,
    EnumerationCapExceeded,
    GroupSpecError,
    NotInDelta,
    PreconditionError,
    RadiusExceeded,
    RigidityError,
)
from .formats import load_cocycle, load_result, parse_group, save_result
from .geometry import CayleyExplorer
from .rigidity import RigidityOptions, check_cohomology, rigidify
from .shift import Alphabet, Configuration

__version__ = "0.1.0"
