"""Run configuration, identity records, and verification reports.

Every identity check in the package is reported through the same record
shape, using one residual definition throughout:

    residual(A, B) = max|A - B| / max(1, max|A|, max|B|)

entrywise over the stated subspace.  The scaling makes the number meaningful
for operators of any magnitude while reducing to the plain max-norm for
O(1)-scale operators; see README ("Residuals").
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .errors import ConfigError

DEFAULT_TOL = 1e-10
# checks that hold by construction (pure diagonal algebra) use this bound
EXACT_TOL = 1e-12


def max_abs(a: np.ndarray) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def _restrict(a: np.ndarray, size: Optional[int]) -> np.ndarray:
    a = np.asarray(a)
    if size is None:
        return a
    if a.ndim == 1:
        return a[:size]
    return a[:size, :size]


def residual(lhs: np.ndarray, rhs: np.ndarray, size: Optional[int] = None) -> float:
    """Scaled max-norm deviation between two operators on a leading block.

    ``size`` restricts both operands to their leading size×size submatrix
    (or leading slice for vectors); ``None`` compares them whole.
    """
    a = _restrict(lhs, size)
    b = _restrict(rhs, size)
    scale = max(1.0, max_abs(a), max_abs(b))
    return max_abs(a - b) / scale


@dataclass(frozen=True)
class IdentityRecord:
    """One verified identity: its residual, tolerance, and verdict.

    ``subspace`` is "interior" when the comparison excluded the truncation
    edge and "full" when the whole matrix was compared.  For witness records
    (names ending in ``_order_witness``) the sense is inverted: ``residual``
    holds a norm that must EXCEED ``tolerance`` for the record to pass.
    """

    name: str
    residual: float
    tolerance: float
    passed: bool
    subspace: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "subspace": self.subspace,
        }


def make_record(
    name: str,
    lhs: np.ndarray,
    rhs: np.ndarray,
    tol: float,
    subspace: str,
    size: Optional[int] = None,
) -> IdentityRecord:
    r = residual(lhs, rhs, size)
    return IdentityRecord(name, r, tol, r < tol, subspace)


def witness_record(name: str, norm: float, floor: float, subspace: str) -> IdentityRecord:
    """Record for a quantity that must stay ABOVE a floor (e.g. a norm that
    certifies an operator power has not collapsed to zero too early)."""
    return IdentityRecord(name, norm, floor, norm > floor, subspace)


_FAMILY_KINDS = ("affine", "cyclic", "table")


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters of one pipeline run."""

    k: int
    D: int
    family_kind: str
    family_params: dict
    tol: float = DEFAULT_TOL
    out: Optional[str] = None
    fmt: str = "json"

    def validate(self) -> "RunConfig":
        if not isinstance(self.k, int) or self.k < 2:
            raise ConfigError(f"k must be an integer >= 2, got {self.k!r}")
        if not isinstance(self.D, int) or self.D < self.k + 2:
            raise ConfigError(
                f"D must be an integer >= k + 2 = {self.k + 2} "
                f"(nonempty interior), got {self.D!r}"
            )
        if not (self.tol > 0):
            raise ConfigError(f"tolerance must be > 0, got {self.tol!r}")
        if self.family_kind not in _FAMILY_KINDS:
            raise ConfigError(f"unknown family kind {self.family_kind!r}")
        if self.family_kind == "cyclic":
            consts = self.family_params.get("constants", ())
            if len(consts) != self.k:
                raise ConfigError(
                    f"cyclic family needs exactly k = {self.k} constants, "
                    f"got {len(consts)}"
                )
        return self

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "D": self.D,
            "family_kind": self.family_kind,
            "family_params": dict(self.family_params),
            "tol": self.tol,
            "out": self.out,
            "format": self.fmt,
        }


@dataclass
class VerificationReport:
    """Aggregate result of one run: config echo, records, side tables.

    ``error`` is set (and ``records`` may be partial or empty) when the
    construction itself failed; the exit-code mapping lives in
    :meth:`exit_code`.
    """

    config: dict
    records: list = field(default_factory=list)
    classification: Optional[dict] = None
    spectra: Optional[dict] = None
    pairing: Optional[dict] = None
    notes: list = field(default_factory=list)
    error: Optional[dict] = None
    wall_time_seconds: float = 0.0

    @property
    def overall_passed(self) -> bool:
        return self.error is None and all(r.passed for r in self.records)

    def exit_code(self) -> int:
        if self.error is not None:
            return 2
        return 0 if self.overall_passed else 1

    def failed_records(self) -> list:
        return [r for r in self.records if not r.passed]

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "records": [r.to_dict() for r in self.records],
            "classification": self.classification,
            "spectra": self.spectra,
            "pairing": self.pairing,
            "notes": list(self.notes),
            "error": self.error,
            "overall_passed": self.overall_passed,
            "wall_time_seconds": self.wall_time_seconds,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def error_dict(exc: Exception) -> dict:
    """Serializable form of a construction error for embedding in a report."""
    d: dict[str, Any] = {"type": type(exc).__name__, "message": str(exc)}
    for attr in ("level", "s", "entry", "value"):
        if hasattr(exc, attr):
            v = getattr(exc, attr)
            if isinstance(v, complex):
                v = repr(v)
            d[attr] = v
    return d
