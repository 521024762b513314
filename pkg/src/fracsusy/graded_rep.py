"""Truncated graded Fock-space representation of the ladder algebra.

The algebra is generated by a lowering operator X-, its adjoint X+, the
number operator N, and a grading operator K whose k-th power is the
identity (q = exp(2*pi*i/k) the primitive root).  On the basis |0..D-1>:

    X-|n> = sqrt(G(n)) |n-1>,  X-|0> = 0,  X+ = adjoint(X-)
    N |n> = n |n>
    K |n> = q^(grade_of(n)) |n>

with the ladder profile G defined by G(0) = 0 and
G(n+1) = G(n) + f_{grade_of(n)}(n) for a set of k real structure functions
f_0..f_{k-1}.  The grade projectors are the root-of-unity averages
Pi_s = (1/k) * sum_t q^(-s*t) K^t, which come out as exact 0/1 diagonals.

Grading convention: grade_of(n) = (n + v) mod k with vacuum grade v = 0 for
k = 2 and v = 1 for k >= 3.  Placing the vacuum in grade 1 for k >= 3 puts
it in the sector annihilated by the lowering supercharge, which is what
makes the supercharge pair exact adjoints and keeps the ground level of the
decomposed systems at zero energy; for k = 2 both choices work and v = 0
keeps the conventional even/odd grading.  Consequences used throughout:

    Pi_s X+ = X+ Pi_{s-1}        (raising raises the grade by one)
    K X- = conj(q) X- K          (lowering lowers it)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, ProjectorDegenerate, RepresentationInvalid
from .report import IdentityRecord, make_record

NEGATIVE_EPS = 1e-12
PROJECTOR_EPS = 1e-9


def vacuum_grade(k: int) -> int:
    """Grade carried by the vacuum state |0>: 0 for k = 2, 1 for k >= 3."""
    return 0 if k == 2 else 1


def grade_of(n: int, k: int) -> int:
    """Grade index of basis state |n>: the unique s with Pi_s|n> = |n>."""
    return (n + vacuum_grade(k)) % k


@dataclass(frozen=True)
class StructureFunctionSet:
    """The k real functions f_0..f_{k-1} defining one ladder algebra.

    Three families:
      - affine:  f_s(n) = a*n + b for every s
      - cyclic:  f_s(n) = c_s, one constant per grade
      - table:   explicit values keyed by (s, n)
    """

    k: int
    kind: str
    a: float = 0.0
    b: float = 0.0
    constants: Tuple[float, ...] = ()
    table: Optional[Mapping[Tuple[int, int], float]] = None

    @classmethod
    def affine(cls, k: int, a: float, b: float) -> "StructureFunctionSet":
        return cls(k=k, kind="affine", a=float(a), b=float(b))

    @classmethod
    def cyclic(cls, k: int, constants: Sequence[float]) -> "StructureFunctionSet":
        consts = tuple(float(c) for c in constants)
        if len(consts) != k:
            raise ConfigError(
                f"cyclic family needs exactly k = {k} constants, got {len(consts)}"
            )
        return cls(k=k, kind="cyclic", constants=consts)

    @classmethod
    def from_table(
        cls, k: int, values: Mapping[Tuple[int, int], float]
    ) -> "StructureFunctionSet":
        tab: Dict[Tuple[int, int], float] = {
            (int(s), int(n)): float(v) for (s, n), v in values.items()
        }
        for s, _ in tab:
            if not 0 <= s < k:
                raise ConfigError(f"table grade index {s} outside 0..{k - 1}")
        return cls(k=k, kind="table", table=tab)

    def value(self, s: int, n: int) -> float:
        """f_s(n); the grade index is reduced mod k."""
        s = s % self.k
        if self.kind == "affine":
            return self.a * n + self.b
        if self.kind == "cyclic":
            return self.constants[s]
        assert self.table is not None
        try:
            return self.table[(s, n)]
        except KeyError:
            raise ConfigError(
                f"table family has no value for grade {s}, level {n}"
            ) from None

    def values(self, s: int, levels: np.ndarray) -> np.ndarray:
        """Vectorized f_s over an integer level array."""
        levels = np.asarray(levels)
        if self.kind == "affine":
            return self.a * levels.astype(float) + self.b
        if self.kind == "cyclic":
            return np.full(levels.shape, self.constants[s % self.k])
        return np.array([self.value(s, int(n)) for n in levels])

    def required_levels(self, D: int) -> range:
        """Level arguments a size-D run can request: [2-k, D+k-3].

        The assembled operators evaluate f_t at shifted arguments n - s + t
        with n in [0, D-1], s in [1, k], t in [1, k-1]; the extremes of that
        span are 2-k and D+k-3 (for k = 2 this is just [0, D-1]).
        """
        return range(2 - self.k, D + self.k - 2)

    def missing_levels(self, D: int) -> list:
        """Table cells a size-D run needs but the table lacks (empty for
        affine/cyclic families, which are total)."""
        if self.kind != "table":
            return []
        assert self.table is not None
        return [
            (s, n)
            for s in range(self.k)
            for n in self.required_levels(D)
            if (s, n) not in self.table
        ]

    def describe(self) -> dict:
        d: dict = {"kind": self.kind, "k": self.k}
        if self.kind == "affine":
            d.update(a=self.a, b=self.b)
        elif self.kind == "cyclic":
            d.update(constants=list(self.constants))
        else:
            assert self.table is not None
            d.update(cells=len(self.table))
        return d


def build_ladder_profile(f: StructureFunctionSet, D: int) -> np.ndarray:
    """Cumulative profile G[0..D] with G(0) = 0, G(n+1) = G(n) + f_grade(n)(n).

    Raises RepresentationInvalid when the profile turns negative within the
    requested depth; the reported level is the deepest valid truncation
    (first negative index minus one).
    """
    if D < 1:
        raise ValueError(f"D must be >= 1, got {D}")
    G = np.zeros(D + 1)
    for n in range(D):
        G[n + 1] = G[n] + f.value(grade_of(n, f.k), n)
        if G[n + 1] < -NEGATIVE_EPS:
            raise RepresentationInvalid(level=n)
    G.flags.writeable = False
    return G


def build_projectors(grading_op: np.ndarray, k: int) -> list:
    """Grade projectors Pi_0..Pi_{k-1} from the grading operator.

    Each Pi_s = (1/k) * sum_{t=0}^{k-1} q^(-s*t) * K^t, evaluated on the
    diagonal; entries must land on 0 or 1 within 1e-9 (else
    ProjectorDegenerate) and are snapped to exact 0.0/1.0.
    """
    lam = np.diagonal(np.asarray(grading_op, dtype=complex))
    D = lam.shape[0]
    q = np.exp(2j * np.pi / k)
    # powers[t, n] = lam_n^t
    powers = np.vstack([lam**t for t in range(k)])
    projectors = []
    for s in range(k):
        coeff = q ** (-s * np.arange(k))
        vals = coeff @ powers / k
        diag = np.zeros(D)
        for n in range(D):
            v = vals[n]
            if abs(v - 1.0) <= PROJECTOR_EPS:
                diag[n] = 1.0
            elif abs(v) <= PROJECTOR_EPS:
                diag[n] = 0.0
            else:
                raise ProjectorDegenerate(s=s, entry=n, value=complex(v))
        P = np.diag(diag)
        P.flags.writeable = False
        projectors.append(P)
    return projectors


@dataclass(frozen=True)
class GradedRep:
    """Dense truncated representation on the basis |0..D-1>.

    ``interior`` is the number of leading basis states free of truncation
    artifacts (D - k - 1, floored at 0); identity checks compare leading
    interior-square blocks.  All arrays are read-only.
    """

    k: int
    D: int
    q: complex
    lowering: np.ndarray
    raising: np.ndarray
    number_op: np.ndarray
    grading_op: np.ndarray
    projectors: Tuple[np.ndarray, ...]
    profile: np.ndarray
    interior: int

    def projector(self, s: int) -> np.ndarray:
        """Pi_s with the index reduced mod k (Pi_k is Pi_0)."""
        return self.projectors[s % self.k]

    def grades(self) -> np.ndarray:
        return np.array([grade_of(n, self.k) for n in range(self.D)])


def build_rep(f: StructureFunctionSet, D: int) -> GradedRep:
    """Assemble the full representation at truncation dimension D >= k."""
    k = f.k
    if D < k:
        raise ValueError(f"D must be >= k = {k}, got {D}")
    G = build_ladder_profile(f, D)

    amps = np.sqrt(G[1:D])
    lowering = np.zeros((D, D))
    lowering[np.arange(D - 1), np.arange(1, D)] = amps
    raising = lowering.T.copy()
    number_op = np.diag(np.arange(D, dtype=float))

    q = complex(np.exp(2j * np.pi / k))
    roots = np.exp(2j * np.pi * np.arange(k) / k)
    v = vacuum_grade(k)
    grading_op = np.diag(roots[(np.arange(D) + v) % k])

    projectors = tuple(build_projectors(grading_op, k))
    for a in (lowering, raising, number_op, grading_op):
        a.flags.writeable = False

    return GradedRep(
        k=k,
        D=D,
        q=q,
        lowering=lowering,
        raising=raising,
        number_op=number_op,
        grading_op=grading_op,
        projectors=projectors,
        profile=G,
        interior=max(0, D - k - 1),
    )


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def verify_algebra_relations(
    rep: GradedRep, f: StructureFunctionSet, tol: float
) -> list:
    """Residual records for the defining relations of the ladder algebra.

    Five relations, with the conjugate pairs reported separately: the
    ladder commutator against the structure-function diagonal, the number
    commutators with both ladder operators, the two grading q-commutators,
    the grading/number commutator, and the k-th power of the grading
    operator.  All residuals are interior-restricted.
    """
    m = rep.interior
    D, k, q = rep.D, rep.k, rep.q
    X, Xp, N, K = rep.lowering, rep.raising, rep.number_op, rep.grading_op
    zero = np.zeros((D, D), dtype=complex)

    f_diag = np.diag([f.value(grade_of(n, k), n) for n in range(D)])

    records = [
        make_record(
            "ladder_commutator", _comm(X, Xp), f_diag, tol, "interior", m
        ),
        make_record("number_lowering", _comm(N, X), -X, tol, "interior", m),
        make_record("number_raising", _comm(N, Xp), Xp, tol, "interior", m),
        make_record(
            "grading_lowering_qcomm",
            K @ X - np.conj(q) * X @ K,
            zero,
            tol,
            "interior",
            m,
        ),
        make_record(
            "grading_raising_qcomm",
            K @ Xp - q * Xp @ K,
            zero,
            tol,
            "interior",
            m,
        ),
        make_record(
            "number_grading_commutator", _comm(K, N), zero, tol, "interior", m
        ),
        make_record(
            "grading_order",
            np.linalg.matrix_power(K, k),
            np.eye(D, dtype=complex),
            tol,
            "interior",
            m,
        ),
    ]
    return records
