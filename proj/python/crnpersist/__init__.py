"""Reaction-network persistence toolkit.

Thin wrapper around the C++ core: parsing, structural analysis,
endotacticity tests, simulation, persistence certification, codimension-2
repulsion reports and the global-attractor check.
"""

try:
    from ._core import *  # noqa: F401,F403  (installed package layout)
    from ._core import __doc__ as _core_doc  # noqa: F401
except ImportError:  # build-tree layout: _core lives on sys.path directly
    from _core import *  # noqa: F401,F403

__all__ = [
    "CrnError",
    "KappaSchedule",
    "ReactionNetwork",
    "analyze",
    "birch_point",
    "certify",
    "check_gac",
    "codim2_repulsion",
    "face_distance_delta",
    "format",
    "is_endotactic",
    "is_lower_endotactic",
    "parse",
    "parse_rates",
    "project",
    "simulate",
    "smallness_lambda",
]
