"""Spectral views of the partner hierarchy and family classification.

Every operator in the pipeline is diagonal in the number basis, so spectra
are diagonal reads; the content here is the bookkeeping (interior
restriction, degeneracy grouping), the level-resolved isospectrality check
between adjacent partners, and the sign-based classification of affine
families onto the three named enveloping algebras / potential shapes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import RepresentationInvalid
from .graded_rep import (
    GradedRep,
    StructureFunctionSet,
    build_ladder_profile,
    grade_of,
)
from .fsusy_core import FractionalSystem
from .report import IdentityRecord, make_record

DEGENERACY_ATOL = 1e-9
NEGATIVE_EPS = 1e-12


@dataclass(frozen=True)
class SpectrumTable:
    """Interior eigenvalues of the total Hamiltonian and every partner.

    ``partner_levels`` maps s in 1..k to [(level, eigenvalue), ...] in level
    order; ``total`` is the same for H; ``degeneracies`` groups the total
    spectrum into (representative value, multiplicity) pairs.
    """

    interior: int
    partner_levels: Dict[int, List[Tuple[int, float]]]
    total: List[Tuple[int, float]]
    degeneracies: List[Tuple[float, int]]

    def to_dict(self) -> dict:
        return {
            "interior": self.interior,
            "partner_levels": {
                str(s): [[n, v] for n, v in levels]
                for s, levels in self.partner_levels.items()
            },
            "total": [[n, v] for n, v in self.total],
            "degeneracies": [[v, c] for v, c in self.degeneracies],
        }

    def to_csv(self) -> str:
        """CSV with columns partner_s, level_n, eigenvalue; the total
        Hamiltonian's rows carry partner_s = "total"."""
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["partner_s", "level_n", "eigenvalue"])
        for s in sorted(self.partner_levels):
            for n, v in self.partner_levels[s]:
                w.writerow([s, n, v])
        for n, v in self.total:
            w.writerow(["total", n, v])
        return buf.getvalue()


def _degeneracy_groups(values: np.ndarray) -> List[Tuple[float, int]]:
    groups: List[Tuple[float, int]] = []
    for v in np.sort(values):
        if groups and v - groups[-1][0] <= DEGENERACY_ATOL:
            groups[-1] = (groups[-1][0], groups[-1][1] + 1)
        else:
            groups.append((float(v), 1))
    return groups


def spectrum(sys: FractionalSystem) -> SpectrumTable:
    """Interior spectra of H and of every partner, in level order."""
    m = sys.rep.interior
    h_diag = sys.hamiltonian_diagonal[:m]
    partner_levels = {
        s: [(n, float(sys.partners[s][n])) for n in range(m)]
        for s in range(1, sys.k + 1)
    }
    return SpectrumTable(
        interior=m,
        partner_levels=partner_levels,
        total=[(n, float(v)) for n, v in enumerate(h_diag)],
        degeneracies=_degeneracy_groups(h_diag),
    )


def isospectral_check(
    table: SpectrumTable,
    sys: FractionalSystem,
    tol: float,
    pair_tol: Optional[float] = None,
) -> Tuple[list, dict]:
    """Level-resolved pairing between adjacent partners.

    For every s in 2..k and interior level n >= 1 on the subsystem's own
    grade sector (grade_of(n) = s mod k) with H_s(n) > tol, the partner one
    step down must match: |H_{s-1}(n-1) - H_s(n)| < pair_tol (default
    10*tol, absolute in eigenvalue units).  On-grade levels at or below the
    threshold are zero modes, exempt by construction, and listed.  Returns
    one record plus a detail dict (matched count, exempt and failed levels).
    """
    if pair_tol is None:
        pair_tol = 10 * tol
    rep = sys.rep
    k, m = rep.k, rep.interior
    matched = 0
    max_dev = 0.0
    exempt: List[list] = []
    failed: List[list] = []
    for s in range(2, k + 1):
        Hs, Hu = sys.partners[s], sys.partners[s - 1]
        for n in range(1, m):
            if grade_of(n, k) != s % k:
                continue
            v = float(Hs[n])
            if v <= tol:
                exempt.append([s, n, v])
                continue
            dev = abs(float(Hu[n - 1]) - v)
            max_dev = max(max_dev, dev)
            if dev < pair_tol:
                matched += 1
            else:
                failed.append([s, n, v, float(Hu[n - 1])])
    record = IdentityRecord(
        name="isospectral_pairing",
        residual=max_dev,
        tolerance=pair_tol,
        passed=not failed,
        subspace="interior",
    )
    detail = {
        "matched": matched,
        "exempt": exempt,
        "failed": failed,
        "threshold": tol,
        "pair_tolerance": pair_tol,
    }
    return [record], detail


@dataclass(frozen=True)
class AlgebraClass:
    """Sign-based identification of the ladder algebra's enveloping class.

    Tags: WeylHeisenberg (a = 0, b != 0), su2 (a < 0, b > 0), su11
    (a > 0, b > 0), generic (anything else).  Cyclic families with all
    constants equal reduce to affine(0, c); other cyclic and non-affine
    table families are generic.  ``potential`` names the associated
    single-well shape when one is standard.
    """

    tag: str
    a: Optional[float] = None
    b: Optional[float] = None
    potential: Optional[str] = None
    annotation: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "a": self.a,
            "b": self.b,
            "potential": self.potential,
            "annotation": self.annotation,
        }


def _classify_affine(a: float, b: float, annotation: Optional[str] = None) -> AlgebraClass:
    if a == 0 and b != 0:
        return AlgebraClass(
            "WeylHeisenberg",
            a,
            b,
            "harmonic oscillator" if b > 0 else None,
            annotation,
        )
    if a < 0 and b > 0:
        return AlgebraClass("su2", a, b, "Morse", annotation)
    if a > 0 and b > 0:
        return AlgebraClass("su11", a, b, "Poschl-Teller", annotation)
    return AlgebraClass("generic", a, b, None, annotation)


def _table_affine_params(f: StructureFunctionSet) -> Optional[Tuple[float, float]]:
    # all grade rows must agree and the shared values must sit on one line
    assert f.table is not None
    by_level: Dict[int, float] = {}
    for (s, n), v in f.table.items():
        if n in by_level:
            if by_level[n] != v:
                return None
        else:
            by_level[n] = v
    for s in range(f.k):
        for n in by_level:
            if f.table.get((s, n)) != by_level[n]:
                return None
    levels = sorted(by_level)
    if len(levels) == 1:
        return 0.0, by_level[levels[0]]
    n0, n1 = levels[0], levels[1]
    a = (by_level[n1] - by_level[n0]) / (n1 - n0)
    b = by_level[n0] - a * n0
    for n in levels:
        if not np.isclose(by_level[n], a * n + b, rtol=1e-12, atol=1e-12):
            return None
    return float(a), float(b)


def classify(f: StructureFunctionSet) -> AlgebraClass:
    """Class tag of one structure-function family (pure sign inspection)."""
    if f.kind == "affine":
        return _classify_affine(f.a, f.b)
    if f.kind == "cyclic":
        if len(set(f.constants)) == 1:
            return _classify_affine(0.0, f.constants[0], "constant cyclic family")
        return AlgebraClass("generic", annotation="cyclic shape-invariant")
    params = _table_affine_params(f)
    if params is not None:
        return _classify_affine(*params, "tabulated affine family")
    return AlgebraClass("generic", annotation="tabulated family")


def termination_depth(
    f: StructureFunctionSet, max_depth: int = 1_000_000
) -> Optional[int]:
    """Deepest truncation dimension with a non-negative ladder profile.

    None when the profile stays non-negative through max_depth (true for
    the oscillator-like and su11-like families; finite exactly when the
    increments eventually drive the profile negative).
    """
    g = 0.0
    for n in range(max_depth):
        g += f.value(grade_of(n, f.k), n)
        if g < -NEGATIVE_EPS:
            return n
    return None


def closure_check(rep: GradedRep, cls: AlgebraClass, tol: float) -> Tuple[list, dict]:
    """Records for the affine enveloping-algebra identification.

    Verifies the single commutator underlying all three tags,
    [X-, X+] = a N + b, on the interior; for the su2 tag additionally
    confirms the representation terminates at a finite depth consistent
    with the profile builder (valid at the depth, invalid one past it).
    """
    if cls.a is None or cls.b is None:
        raise ValueError("closure_check needs an affine-derived classification")
    m = rep.interior
    X, Xp, N = rep.lowering, rep.raising, rep.number_op
    target = cls.a * N + cls.b * np.eye(rep.D)
    records = [
        make_record("affine_closure", X @ Xp - Xp @ X, target, tol, "interior", m)
    ]
    detail: dict = {"termination_depth": None}
    if cls.tag == "su2":
        f_eq = StructureFunctionSet.affine(rep.k, cls.a, cls.b)
        depth = termination_depth(f_eq)
        ok = depth is not None
        if ok:
            try:
                build_ladder_profile(f_eq, depth)
            except RepresentationInvalid:
                ok = False
            try:
                build_ladder_profile(f_eq, depth + 1)
                ok = False
            except RepresentationInvalid as exc:
                ok = ok and exc.level == depth
        records.append(
            IdentityRecord(
                name="representation_termination",
                residual=0.0 if ok else 1.0,
                tolerance=tol,
                passed=ok,
                subspace="full",
            )
        )
        detail["termination_depth"] = depth
    return records, detail
