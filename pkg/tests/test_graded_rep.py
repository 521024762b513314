"""Representation construction: grading, ladder profile, projectors,
and the defining algebra relations."""

import numpy as np
import pytest

from fracsusy import (
    ProjectorDegenerate,
    RepresentationInvalid,
    StructureFunctionSet,
    build_ladder_profile,
    build_projectors,
    build_rep,
    grade_of,
    residual,
    vacuum_grade,
    verify_algebra_relations,
)

TOL = 1e-10
EXACT = 1e-12


# frozen grade assignments under the package convention
@pytest.mark.parametrize(
    "n,k,expected",
    [(0, 2, 0), (5, 2, 1), (1, 3, 2), (0, 3, 1), (2, 3, 0), (0, 4, 1), (3, 4, 0)],
)
def test_grade_of_frozen(n, k, expected):
    assert grade_of(n, k) == expected


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_grade_of_periodic(k):
    for n in range(3 * k):
        assert grade_of(n, k) == grade_of(n + k, k)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_grade_matches_projector_series(k):
    # independent oracle: evaluate the root-of-unity average
    # (1/k) sum_t q^(-s t) lambda_n^t directly and find the surviving s
    q = np.exp(2j * np.pi / k)
    D = 3 * k
    lam = q ** ((np.arange(D) + vacuum_grade(k)) % k)
    for n in range(D):
        surviving = [
            s
            for s in range(k)
            if abs(sum(q ** (-s * t) * lam[n] ** t for t in range(k)) / k - 1) < 1e-9
        ]
        assert surviving == [grade_of(n, k)]


def test_profile_cyclic_constant():
    f = StructureFunctionSet.cyclic(5, (1, 1, 1, 1, 1))
    assert np.array_equal(build_ladder_profile(f, 5), [0, 1, 2, 3, 4, 5])


def test_profile_affine_triangular():
    f = StructureFunctionSet.affine(2, 1, 1)
    assert np.array_equal(build_ladder_profile(f, 4), [0, 1, 3, 6, 10])


def test_profile_terminating_family():
    f = StructureFunctionSet.affine(2, -1, 3)
    assert np.array_equal(build_ladder_profile(f, 4), [0, 3, 5, 6, 6])
    # deepest valid truncation: the full profile 0,3,5,6,6,5,3,0 at D=7
    assert np.array_equal(build_ladder_profile(f, 7), [0, 3, 5, 6, 6, 5, 3, 0])


@pytest.mark.parametrize("D", [8, 10, 20])
def test_profile_invalid_reports_deepest_valid_level(D):
    f = StructureFunctionSet.affine(2, -1, 3)
    with pytest.raises(RepresentationInvalid) as exc:
        build_ladder_profile(f, D)
    assert exc.value.level == 7


def test_profile_invalid_iff_negative():
    # brute-force the recurrence independently for random families
    rng = np.random.default_rng(20260818)
    for trial in range(40):
        k = int(rng.integers(2, 6))
        if trial % 2:
            f = StructureFunctionSet.affine(k, rng.uniform(-1, 1), rng.uniform(-1, 3))
        else:
            f = StructureFunctionSet.cyclic(k, rng.uniform(-0.5, 2.0, size=k))
        D = int(rng.integers(2, 32))
        g, profile = 0.0, [0.0]
        for n in range(D):
            g += f.value(grade_of(n, k), n)
            profile.append(g)
        should_raise = min(profile) < -1e-12
        try:
            G = build_ladder_profile(f, D)
            assert not should_raise
            assert np.allclose(G, profile, atol=1e-13)
        except RepresentationInvalid:
            assert should_raise


def test_projectors_k2():
    rep = build_rep(StructureFunctionSet.affine(2, 0, 1), 4)
    assert np.array_equal(np.diagonal(rep.projector(0)), [1, 0, 1, 0])
    assert np.array_equal(np.diagonal(rep.projector(1)), [0, 1, 0, 1])


def test_projectors_k3():
    rep = build_rep(StructureFunctionSet.affine(3, 1, 1), 3)
    assert np.array_equal(np.diagonal(rep.projector(0)), [0, 0, 1])
    assert np.array_equal(np.diagonal(rep.projector(1)), [1, 0, 0])
    assert np.array_equal(np.diagonal(rep.projector(2)), [0, 1, 0])


def test_projector_resolution_and_orthogonality(grid_point):
    k, f, D, rep, system, subs = grid_point
    total = sum(rep.projectors)
    assert residual(total, np.eye(D)) < EXACT
    for s in range(k):
        for t in range(k):
            target = rep.projector(s) if s == t else np.zeros((D, D))
            assert residual(rep.projector(s) @ rep.projector(t), target) < EXACT
    # entries are snapped to exact 0/1
    for P in rep.projectors:
        diag = np.diagonal(P)
        assert np.all((diag == 0.0) | (diag == 1.0))


def test_projector_degenerate_on_corrupt_grading():
    bad = np.diag([1.0, -1.0, 0.5, -1.0]).astype(complex)
    with pytest.raises(ProjectorDegenerate):
        build_projectors(bad, 2)


def test_rep_ladder_entries():
    rep = build_rep(StructureFunctionSet.cyclic(2, (1, 1)), 4)
    expected = np.sqrt([1.0, 2.0, 3.0])
    assert np.array_equal(rep.lowering[np.arange(3), np.arange(1, 4)], expected)
    assert np.array_equal(np.diagonal(rep.grading_op).real, [1, -1, 1, -1])
    assert np.allclose(np.diagonal(rep.grading_op).imag, 0)


def test_rep_single_step():
    rep = build_rep(StructureFunctionSet.affine(2, 0, 1), 2)
    assert np.array_equal(rep.lowering, [[0, 1], [0, 0]])


def test_rep_products_match_profile(grid_point):
    k, f, D, rep, system, subs = grid_point
    # sqrt followed by squaring rounds within one ulp of each entry
    G = rep.profile
    assert np.allclose(np.diagonal(rep.raising @ rep.lowering), G[:D],
                       rtol=1e-12, atol=EXACT)
    m = rep.interior
    assert np.allclose(np.diagonal(rep.lowering @ rep.raising)[:m], G[1 : m + 1],
                       rtol=1e-12, atol=EXACT)


def test_rep_basic_shape():
    rep = build_rep(StructureFunctionSet.affine(3, 1, 1), 9)
    assert np.array_equal(np.diagonal(rep.number_op), np.arange(9))
    assert rep.interior == 9 - 3 - 1
    assert np.array_equal(rep.raising, rep.lowering.T)


def test_rep_rejects_small_D():
    with pytest.raises(ValueError):
        build_rep(StructureFunctionSet.affine(4, 0, 1), 3)


def test_rep_arrays_read_only():
    rep = build_rep(StructureFunctionSet.affine(2, 0, 1), 6)
    for a in (rep.lowering, rep.raising, rep.number_op, rep.grading_op,
              rep.profile, *rep.projectors):
        assert not a.flags.writeable


def test_algebra_relations_pass(grid_point):
    k, f, D, rep, system, subs = grid_point
    records = verify_algebra_relations(rep, f, TOL)
    assert len(records) == 7
    for r in records:
        assert r.passed, (r.name, r.residual)


def test_algebra_relation_names():
    rep = build_rep(StructureFunctionSet.affine(2, 0, 1), 8)
    names = [r.name for r in verify_algebra_relations(rep, StructureFunctionSet.affine(2, 0, 1), TOL)]
    assert names == [
        "ladder_commutator",
        "number_lowering",
        "number_raising",
        "grading_lowering_qcomm",
        "grading_raising_qcomm",
        "number_grading_commutator",
        "grading_order",
    ]


def test_ladder_commutator_needs_interior():
    # at the truncation edge the commutator relation fails by construction
    f = StructureFunctionSet.affine(2, 0, 1)
    rep = build_rep(f, 8)
    comm = rep.lowering @ rep.raising - rep.raising @ rep.lowering
    f_diag = np.diag([f.value(grade_of(n, 2), n) for n in range(8)])
    assert residual(comm, f_diag) > 1e-2
    assert residual(comm, f_diag, rep.interior) < EXACT


def test_table_family_round_trip():
    base = StructureFunctionSet.affine(3, 1, 1)
    D = 9
    values = {
        (s, n): base.value(s, n)
        for s in range(3)
        for n in base.required_levels(D)
    }
    tab = StructureFunctionSet.from_table(3, values)
    assert tab.missing_levels(D) == []
    rep_a = build_rep(base, D)
    rep_t = build_rep(tab, D)
    assert np.array_equal(rep_a.lowering, rep_t.lowering)
    assert np.array_equal(rep_a.profile, rep_t.profile)
