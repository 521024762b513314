"""Order-k supersymmetric system assembly and its decomposition.

From a graded representation this module builds the supercharge pair

    Q- = X- (1 - Pi_1),     Q+ = X+ (1 - Pi_0)

(exact adjoints by the grading convention), the diagonal Hamiltonian H of
the closed algebra

    Q-^k = Q+^k = 0,   sum_{j=0}^{k-1} Q-^(k-1-j) Q+ Q-^j = Q-^(k-2) H,
    [H, Q±] = 0,

the k partner Hamiltonians H_1..H_k (H_k doubling as H_0) with
H = sum_s H_s Pi_s, and the k-1 ordinary supersymmetric subsystems

    q(s)- = X(s)- Pi_s,  q(s)+ = X(s)+ Pi_{s-1},
    h(s)  = X(s)- X(s)+ Pi_{s-1} + X(s)+ X(s)- Pi_s = {q(s)-, q(s)+}

where X(s)- is the positive-amplitude one-step ladder factorizing H_s on
its own grade sector.  H is computed two independent ways — a per-entry
closed form summed with math.fsum, and the vectorized partner expansion —
and their agreement is one of the reported records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import FactorizationBroken
from .graded_rep import GradedRep, StructureFunctionSet, grade_of
from .report import (
    EXACT_TOL,
    IdentityRecord,
    make_record,
    max_abs,
    witness_record,
)

# a supercharge chain of length k-1 must remain visibly nonzero
ORDER_WITNESS_FLOOR = 1e-6
# physical negative levels beyond this magnitude cannot be square-rooted away
BROKEN_EPS = 1e-9


def build_supercharges(rep: GradedRep) -> Tuple[np.ndarray, np.ndarray]:
    """The supercharge pair (Q-, Q+); exact mutual adjoints."""
    D = rep.D
    eye = np.eye(D)
    q_minus = rep.lowering @ (eye - rep.projector(1))
    q_plus = rep.raising @ (eye - rep.projector(0))
    for a in (q_minus, q_plus):
        a.flags.writeable = False
    return q_minus, q_plus


def _partner_label(n: int, k: int) -> int:
    """Partner index in 1..k owning basis state |n>: grade_of(n) mod-k
    lifted so that grade 0 maps to k."""
    s = grade_of(n, k)
    return s if s >= 1 else k


def build_hamiltonian(rep: GradedRep, f: StructureFunctionSet) -> np.ndarray:
    """Diagonal Hamiltonian from the per-entry closed form.

    H(n) = (k-1) G(n) - sum_{t=2}^{s-1} (t-1) f_t(n-s+t)
                      - sum_{t=s}^{k-1} (t-k) f_t(n-s+t)

    with s in 1..k the partner label of |n>; empty sums contribute zero.
    Each entry is accumulated with math.fsum.
    """
    k, D, G = rep.k, rep.D, rep.profile
    diag = np.zeros(D)
    for n in range(D):
        s = _partner_label(n, k)
        terms = [(k - 1) * G[n]]
        for t in range(2, s):
            terms.append(-(t - 1) * f.value(t, n - s + t))
        for t in range(s, k):
            terms.append(-(t - k) * f.value(t, n - s + t))
        diag[n] = math.fsum(terms)
    H = np.diag(diag)
    H.flags.writeable = False
    return H


def partner_hamiltonians(
    rep: GradedRep, f: StructureFunctionSet
) -> Tuple[np.ndarray, ...]:
    """Diagonal vectors H_0..H_k of the partner expansion (H_0 is H_k).

    H_s(n) = (k-1) G(n) - sum_{t=2}^{k-1} (t-1) f_t(n-s+t)
                        + (k-1) sum_{t=s}^{k-1} f_t(n-s+t)

    evaluated vectorized over n; the return tuple has length k+1 and is
    indexed directly by s in 0..k with partners[0] the same vector as
    partners[k].
    """
    k, D, G = rep.k, rep.D, rep.profile
    n = np.arange(D)
    base = (k - 1) * G[:D]
    out: List[np.ndarray] = [None] * (k + 1)  # type: ignore[list-item]
    for s in range(1, k + 1):
        h = base.copy()
        for t in range(2, k):
            h -= (t - 1) * f.values(t, n - s + t)
        acc = np.zeros(D)
        for t in range(s, k):
            acc += f.values(t, n - s + t)
        h += (k - 1) * acc
        h.flags.writeable = False
        out[s] = h
    out[0] = out[k]
    return tuple(out)


@dataclass(frozen=True)
class FractionalSystem:
    """The assembled order-k system over one graded representation."""

    rep: GradedRep
    q_minus: np.ndarray
    q_plus: np.ndarray
    hamiltonian: np.ndarray
    partners: Tuple[np.ndarray, ...]

    @property
    def k(self) -> int:
        return self.rep.k

    @property
    def hamiltonian_diagonal(self) -> np.ndarray:
        return np.diagonal(self.hamiltonian)

    def partner(self, s: int) -> np.ndarray:
        """Diagonal vector of H_s, index reduced mod k."""
        return self.partners[s % self.k if s % self.k else self.k]


def build_system(rep: GradedRep, f: StructureFunctionSet) -> FractionalSystem:
    q_minus, q_plus = build_supercharges(rep)
    return FractionalSystem(
        rep=rep,
        q_minus=q_minus,
        q_plus=q_plus,
        hamiltonian=build_hamiltonian(rep, f),
        partners=partner_hamiltonians(rep, f),
    )


def verify_fractional_relations(sys: FractionalSystem, tol: float) -> list:
    """Residual records for the order-k supercharge algebra.

    Covers: adjointness of the pair, k-th-power nilpotency of both
    supercharges plus the full-space witness that the (k-1)-th power is
    still nonzero, the cyclic-sum algebra identity, both Hamiltonian
    commutators, self-adjointness of H, and the agreement of the two
    independent H constructions (closed form vs partner expansion).
    """
    rep = sys.rep
    k, D, m = rep.k, rep.D, rep.interior
    Qm, Qp, H = sys.q_minus, sys.q_plus, sys.hamiltonian
    zero = np.zeros((D, D))

    pow_m = [np.linalg.matrix_power(Qm, j) for j in range(k + 1)]
    lhs_alg = sum(pow_m[k - 1 - j] @ Qp @ pow_m[j] for j in range(k))
    exact = min(tol, EXACT_TOL)

    recon = np.zeros(D)
    for s in range(1, k + 1):
        recon += sys.partners[s] * np.diagonal(rep.projector(s))

    records = [
        make_record("supercharge_adjoint", Qp, Qm.T.conj(), exact, "full"),
        make_record(
            "lowering_supercharge_nilpotent", pow_m[k], zero, tol, "interior", m
        ),
        make_record(
            "raising_supercharge_nilpotent",
            np.linalg.matrix_power(Qp, k),
            zero,
            tol,
            "interior",
            m,
        ),
        witness_record(
            "lowering_supercharge_order_witness",
            max_abs(pow_m[k - 1]),
            ORDER_WITNESS_FLOOR,
            "full",
        ),
        make_record(
            "supercharge_algebra", lhs_alg, pow_m[k - 2] @ H, tol, "interior", m
        ),
        make_record(
            "hamiltonian_lowering_commutator",
            H @ Qm - Qm @ H,
            zero,
            tol,
            "interior",
            m,
        ),
        make_record(
            "hamiltonian_raising_commutator",
            H @ Qp - Qp @ H,
            zero,
            tol,
            "interior",
            m,
        ),
        make_record("hamiltonian_selfadjoint", H, H.T.conj(), exact, "full"),
        make_record("partner_reconstruction", np.diagonal(H), recon, exact, "full"),
    ]
    return records


def factorize_partner(
    partner_diag: np.ndarray, s: int, rep: GradedRep
) -> Tuple[np.ndarray, np.ndarray]:
    """Positive-amplitude one-step ladder pair factorizing a partner.

    X(s)-|n> = sqrt(H_s(n)) |n-1> for n >= 1, X(s)-|0> = 0, X(s)+ the
    transpose.  Only grade-s levels of H_s are physical (the subsystem
    projectors mask every other column), so negativity is fatal only
    there: an interior level n >= 1 with grade s mod k and
    H_s(n) < -1e-9 raises FactorizationBroken.  All other negative
    entries (off-grade levels, float dust) are clipped to zero.
    """
    h = np.asarray(partner_diag, dtype=float)
    D, k, m = rep.D, rep.k, rep.interior
    for n in range(1, min(m, D)):
        if grade_of(n, k) == s % k and h[n] < -BROKEN_EPS:
            raise FactorizationBroken(s=s, level=n, value=float(h[n]))
    amps = np.sqrt(np.clip(h[1:], 0.0, None))
    Xm = np.zeros((D, D))
    Xm[np.arange(D - 1), np.arange(1, D)] = amps
    Xp = Xm.T.copy()
    for a in (Xm, Xp):
        a.flags.writeable = False
    return Xm, Xp


@dataclass(frozen=True)
class Subsystem:
    """One ordinary supersymmetric pair extracted from the hierarchy.

    ``s`` is the subsystem label; ``partner_pair`` holds the indices
    (upper, lower) of the two partner diagonals the operators actually
    tie together — (s-1, s) for the standard labels s in 2..k.
    """

    s: int
    partner_pair: Tuple[int, int]
    lowering: np.ndarray
    raising: np.ndarray
    q_minus: np.ndarray
    q_plus: np.ndarray
    h: np.ndarray


def _assemble_subsystem(sys: FractionalSystem, label: int, s: int) -> Subsystem:
    rep = sys.rep
    Xm, Xp = factorize_partner(sys.partners[s], s, rep)
    P_lower = rep.projector(s)
    P_upper = rep.projector(s - 1)
    q_minus = Xm @ P_lower
    q_plus = Xp @ P_upper
    h = Xm @ Xp @ P_upper + Xp @ Xm @ P_lower
    for a in (q_minus, q_plus, h):
        a.flags.writeable = False
    return Subsystem(
        s=label,
        partner_pair=(s - 1, s),
        lowering=Xm,
        raising=Xp,
        q_minus=q_minus,
        q_plus=q_plus,
        h=h,
    )


def build_subsystem(sys: FractionalSystem, s: int) -> Subsystem:
    """Subsystem s in 2..k; label s=1 is accepted for k=2 only.

    For the two-grade case the labels 1 and 2 address the same ordinary
    pair (the partner indices wrap mod 2), so s=1 returns the s=2 operator
    content relabeled; its h equals the total Hamiltonian.  For k >= 3 the
    label 1 names no valid ordinary pair (the partner chain has a seam
    between H_k and H_1) and is rejected.
    """
    k = sys.k
    if s == 1:
        if k != 2:
            raise ValueError(
                "subsystem label 1 is only defined for k = 2; use 2..k"
            )
        return _assemble_subsystem(sys, label=1, s=2)
    if not 2 <= s <= k:
        raise ValueError(f"subsystem label must be in 2..k = {k}, got {s}")
    return _assemble_subsystem(sys, label=s, s=s)


def verify_subsystem(sys: FractionalSystem, sub: Subsystem, tol: float) -> list:
    """Residual records for one ordinary pair.

    Covers adjointness and nilpotency of its supercharges, the
    anticommutator assembly of h, the two-partner diagonal form of h, the
    ladder factorization on the physical grade sector, both intertwining
    relations (grade-projected: the partner diagonals only tie together on
    the sector the subsystem acts on), and both [h, q±] commutators.
    """
    rep = sys.rep
    k, D, m = rep.k, rep.D, rep.interior
    su, sl = sub.partner_pair
    Hu, Hl = sys.partners[su], sys.partners[sl]
    P_upper, P_lower = rep.projector(su), rep.projector(sl)
    Xm, Xp = sub.lowering, sub.raising
    qm, qp, h = sub.q_minus, sub.q_plus, sub.h
    zero = np.zeros((D, D))
    exact = min(tol, EXACT_TOL)
    p = f"subsystem{sub.s}"

    grade_sl = np.array(
        [n for n in range(1, m) if grade_of(n, k) == sl % k], dtype=int
    )
    factor_lhs = np.diagonal(Xp @ Xm)[grade_sl] if grade_sl.size else np.zeros(0)
    factor_rhs = Hl[grade_sl] if grade_sl.size else np.zeros(0)

    records = [
        make_record(f"{p}_adjoint", qp, qm.T.conj(), exact, "full"),
        make_record(f"{p}_lower_nilpotent", qm @ qm, zero, exact, "full"),
        make_record(f"{p}_raise_nilpotent", qp @ qp, zero, exact, "full"),
        make_record(
            f"{p}_anticommutator", qm @ qp + qp @ qm, h, tol, "interior", m
        ),
        make_record(
            f"{p}_pair_identity",
            np.diagonal(h),
            Hu * np.diagonal(P_upper) + Hl * np.diagonal(P_lower),
            tol,
            "interior",
            m,
        ),
        make_record(f"{p}_factorization", factor_lhs, factor_rhs, tol, "interior"),
        make_record(
            f"{p}_intertwine_lower",
            (np.diag(Hu) @ Xm - Xm @ np.diag(Hl)) @ P_lower,
            zero,
            tol,
            "interior",
            m,
        ),
        make_record(
            f"{p}_intertwine_raise",
            (np.diag(Hl) @ Xp - Xp @ np.diag(Hu)) @ P_upper,
            zero,
            tol,
            "interior",
            m,
        ),
        make_record(
            f"{p}_h_lower_commutator", h @ qm - qm @ h, zero, tol, "interior", m
        ),
        make_record(
            f"{p}_h_raise_commutator", h @ qp - qp @ h, zero, tol, "interior", m
        ),
    ]
    return records


def verify_superposition(
    sys: FractionalSystem, subsystems: Sequence[Subsystem], tol: float
) -> list:
    """Record for the assembly of H out of the subsystem supercharges:

        H = q(2)- q(2)+ + sum_{s=2}^{k} q(s)+ q(s)-

    (the asymmetric first term covers the sector the lowering supercharges
    cannot reach from above).  Requires all labels 2..k to be present.
    """
    by_label = {sub.s: sub for sub in subsystems if sub.s >= 2}
    missing = [s for s in range(2, sys.k + 1) if s not in by_label]
    if missing:
        raise ValueError(f"superposition needs subsystems 2..k; missing {missing}")
    first = by_label[2]
    total = first.q_minus @ first.q_plus
    for s in range(2, sys.k + 1):
        sub = by_label[s]
        total = total + sub.q_plus @ sub.q_minus
    return [
        make_record(
            "subsystem_superposition",
            total,
            sys.hamiltonian,
            tol,
            "interior",
            sys.rep.interior,
        )
    ]
