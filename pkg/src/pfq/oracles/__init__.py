"""Decision procedures for isotropy, Witt index, hyperbolicity and isometry."""
from pfq.oracles.core import (
    is_hyperbolic,
    is_isotropic,
    isometric,
    signature,
    split_hyperbolic_plane,
    springer_split,
    witt_index,
)
from pfq.oracles.decision import DEFAULT_BUDGET, Decision, SearchBudget, Verdict, WittReport

__all__ = [
    "DEFAULT_BUDGET",
    "Decision",
    "SearchBudget",
    "Verdict",
    "WittReport",
    "is_hyperbolic",
    "is_isotropic",
    "isometric",
    "signature",
    "split_hyperbolic_plane",
    "springer_split",
    "witt_index",
]
