from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from pfq.errors import OracleError
from pfq.forms import QForm, evaluate


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SearchBudget:
    """Limits for the semidecidable searches.

    ``max_total_degree`` bounds polynomial coordinates in characteristic-2
    searches, ``max_coeff_height`` bounds the integer coefficient combinations
    tried when enumerating subspaces, and ``max_candidates`` caps the number
    of enumerated candidates in any single search.
    """

    max_total_degree: int = 4
    max_coeff_height: int = 10
    max_candidates: int = 10**6

    def __post_init__(self):
        if self.max_total_degree < 0 or self.max_coeff_height <= 0 or self.max_candidates <= 0:
            raise ValueError(f"invalid search budget {self}")


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    certificate: tuple | None = None
    bound: dict | None = None
    reason: str = ""

    @property
    def yes(self) -> bool:
        return self.verdict is Verdict.YES

    @property
    def no(self) -> bool:
        return self.verdict is Verdict.NO

    @property
    def unknown(self) -> bool:
        return self.verdict is Verdict.UNKNOWN

    @classmethod
    def isotropic(cls, f: QForm, vector, reason: str = "") -> Decision:
        """A Yes carrying an isotropic vector, checked before it is returned."""
        vector = tuple(f.tower(x) for x in vector)
        if len(vector) != f.dim or not any(vector):
            raise OracleError(f"certificate {vector} is not a nonzero vector of length {f.dim}")
        value = evaluate(f, vector)
        if value:
            raise OracleError(f"certificate does not vanish: f(v) = {value}")
        return cls(Verdict.YES, vector, None, reason)

    @classmethod
    def no_(cls, reason: str = "") -> Decision:
        return cls(Verdict.NO, None, None, reason)

    @classmethod
    def unknown_(cls, bound: dict, reason: str = "") -> Decision:
        return cls(Verdict.UNKNOWN, None, dict(bound), reason)

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.value}
        if self.certificate is not None:
            out["certificate"] = [str(x) for x in self.certificate]
        if self.bound is not None:
            out["bound"] = dict(self.bound)
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class WittReport:
    witt_index: int
    anisotropic_dim: int
    exact: bool = True
    certificates: tuple = field(default=(), compare=False)

    def to_json(self) -> dict:
        return {"witt_index": self.witt_index, "anisotropic_dim": self.anisotropic_dim, "exact": self.exact}
