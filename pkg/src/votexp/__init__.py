"""Formal explanations for winners of scoring-rule elections.

An abductive explanation (AXp) is a set of ballot cells that, kept as
they are, forces the winner whatever the other cells hold; a contrastive
explanation (CXp) is a set of cells whose release can dethrone it.
"""

from .core import (
    PartialRankMatrix,
    ProfileError,
    RankMatrix,
    complement,
    from_names,
    is_extension,
    make_matrix,
    parse_profile,
    read_profile,
    serialize,
    write_profile,
)
from .enumerate import enumerate_xps, find_smallest_cxp, find_smallest_iaxp
from .kernels import BACKEND
from .scoring import (
    RuleError,
    ScoringVector,
    is_necessary_winner,
    parse_rule,
    scores,
    sigma_max,
    sigma_min,
    total_margin,
    winners,
)
from .xplain import (
    Explanation,
    PreconditionError,
    find_cxp,
    find_iaxp,
    verify_axp,
    verify_cxp,
    verify_iaxp,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Explanation",
    "PartialRankMatrix",
    "PreconditionError",
    "ProfileError",
    "RankMatrix",
    "RuleError",
    "ScoringVector",
    "complement",
    "enumerate_xps",
    "find_cxp",
    "find_iaxp",
    "find_smallest_cxp",
    "find_smallest_iaxp",
    "from_names",
    "is_extension",
    "is_necessary_winner",
    "make_matrix",
    "parse_profile",
    "parse_rule",
    "read_profile",
    "scores",
    "serialize",
    "sigma_max",
    "sigma_min",
    "total_margin",
    "verify_axp",
    "verify_cxp",
    "verify_iaxp",
    "winners",
    "write_profile",
]
