"""Exception types raised by the construction pipeline.

Identity-verification failures are never raised; they are reported as
records with ``passed = False``.  Exceptions are reserved for inputs on
which the construction itself is impossible or ill-posed.
"""

from __future__ import annotations


class FracsusyError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(FracsusyError):
    """Malformed run configuration (bad sizes, bad family data, bad flags)."""


class RepresentationInvalid(FracsusyError):
    """The structure functions admit no unitary ladder at the requested depth.

    ``level`` is the deepest truncation dimension for which the ladder
    profile stays non-negative; requesting anything beyond it raises.
    """

    def __init__(self, level: int, message: str | None = None):
        self.level = level
        super().__init__(
            message
            or f"representation terminates at level {level}; "
            f"the ladder profile turns negative beyond it"
        )


class ProjectorDegenerate(FracsusyError):
    """A grade projector failed to come out as an exact 0/1 diagonal.

    Signals a corrupted grading operator or a non-primitive root of unity.
    """

    def __init__(self, s: int, entry: int, value: complex):
        self.s = s
        self.entry = entry
        self.value = value
        super().__init__(
            f"projector {s} has diagonal entry {value!r} at state {entry}; "
            f"expected 0 or 1 within 1e-9"
        )


class FactorizationBroken(FracsusyError):
    """A partner Hamiltonian has a negative physical level and cannot be
    factorized with a real ladder."""

    def __init__(self, s: int, level: int, value: float):
        self.s = s
        self.level = level
        self.value = value
        super().__init__(
            f"partner {s} has negative level {level} "
            f"(value {value:.6g}); no real ladder factorization exists"
        )
