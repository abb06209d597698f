"""Three-valued outcomes shared by every decider, and the package exceptions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

SCHEMA = "orbitkit/1"

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


class OrbitKitError(Exception):
    """Base class for all errors raised by orbitkit."""


class InputError(OrbitKitError, ValueError):
    """Malformed or inconsistent input (bad token, rank or dimension mismatch)."""


class CapacityError(OrbitKitError):
    """A configured resource bound would be exceeded; no answer is given."""


@dataclass(frozen=True)
class Decision:
    """Outcome of a decision procedure.

    ``witness`` is the object proving a yes answer (a conjugator, an exponent,
    a move sequence, ...).  ``certificate`` carries supporting data; for a no
    answer its ``"kind"`` names the argument that closed the search.  ``bound``
    is the exhausted search bound of an unknown answer.
    """

    outcome: str
    witness: Any = None
    certificate: dict = field(default_factory=dict)
    bound: Any = None

    @classmethod
    def yes(cls, witness=None, **certificate) -> "Decision":
        return cls(YES, witness, certificate)

    @classmethod
    def no(cls, kind: str, **certificate) -> "Decision":
        return cls(NO, None, {"kind": kind, **certificate})

    @classmethod
    def unknown(cls, bound, **certificate) -> "Decision":
        return cls(UNKNOWN, None, certificate, bound)

    @property
    def is_yes(self) -> bool:
        return self.outcome == YES

    @property
    def is_no(self) -> bool:
        return self.outcome == NO

    @property
    def is_unknown(self) -> bool:
        return self.outcome == UNKNOWN

    @property
    def decided(self) -> bool:
        return self.outcome != UNKNOWN

    def __repr__(self):
        parts = [self.outcome]
        if self.witness is not None:
            parts.append(f"witness={self.witness!r}")
        if self.certificate:
            parts.append(f"certificate={self.certificate!r}")
        if self.bound is not None:
            parts.append(f"bound={self.bound!r}")
        return f"Decision({', '.join(parts)})"
