"""Three-valued certified answers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

YES = "yes"
NO = "no"
UNDETERMINED = "undetermined"

STANDARD = "standard-by-construction"
EXPLICIT = "explicit-isomorphism"


@dataclass
class Certificate:
    """Why a triangle counts as distinguished.

    ``standard-by-construction`` certificates carry the base the triangle was
    built from; ``explicit-isomorphism`` ones carry a vertexwise isomorphism
    from the standard triangle on the same base together with homotopy
    inverses and the homotopies witnessing them.
    """

    kind: str
    data: Any = None            # TriangleMap standard -> T for explicit isomorphisms
    inverses: dict = field(default_factory=dict)   # vertex -> (inverse, gf~1, fg~1)
    standard: Any = None        # the standard NTriangle the isomorphism starts from
    naturality: dict = field(default_factory=dict)  # edge -> homotopy (lhs ~ rhs), None if strict


@dataclass
class Verdict:
    status: str
    certificate: Certificate | None = None
    witness: Any = None
    reason: str = ""
    budget: int = 0
    fingerprint: str | None = None

    @property
    def yes(self) -> bool:
        return self.status == YES

    @property
    def no(self) -> bool:
        return self.status == NO

    @property
    def undetermined(self) -> bool:
        return self.status == UNDETERMINED

    def __bool__(self) -> bool:
        return self.yes

    def __repr__(self):
        extra = f", reason={self.reason!r}" if self.reason else ""
        return f"Verdict({self.status}{extra})"


def yes(certificate=None, witness=None, reason="") -> Verdict:
    return Verdict(YES, certificate=certificate, witness=witness, reason=reason)


def no(reason: str, fingerprint: str | None = None, witness=None) -> Verdict:
    return Verdict(NO, reason=reason, fingerprint=fingerprint, witness=witness)


def undetermined(budget: int, reason: str = "") -> Verdict:
    return Verdict(UNDETERMINED, budget=budget, reason=reason)
