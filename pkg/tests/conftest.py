"""Shared grid of representative algebras used across the test modules."""

from functools import lru_cache

import numpy as np
import pytest

from fracsusy import (
    StructureFunctionSet,
    build_rep,
    build_subsystem,
    build_system,
)

RNG_SEED = 20260818

# k in 2..6, three affine families plus one random positive cyclic family,
# shallow and deep truncations
K_VALUES = (2, 3, 4, 5, 6)
AFFINE_PARAMS = ((0.0, 1.0), (1.0, 1.0), (1.0, 2.0))


def cyclic_constants(k: int) -> tuple:
    rng = np.random.default_rng(RNG_SEED + k)
    return tuple(rng.uniform(0.5, 2.0, size=k))


def grid_families(k: int):
    fams = [StructureFunctionSet.affine(k, a, b) for a, b in AFFINE_PARAMS]
    fams.append(StructureFunctionSet.cyclic(k, cyclic_constants(k)))
    return fams


def grid_points():
    pts = []
    for k in K_VALUES:
        for f in grid_families(k):
            for D in (k + 4, 32):
                pts.append((k, f, D))
    return pts


def point_id(point) -> str:
    k, f, D = point
    if f.kind == "affine":
        fam = f"affine({f.a:g},{f.b:g})"
    else:
        fam = "cyclic"
    return f"k{k}-{fam}-D{D}"


GRID = grid_points()
GRID_IDS = [point_id(p) for p in GRID]


@lru_cache(maxsize=None)
def build_point(f: StructureFunctionSet, D: int):
    """Representation, system, and subsystems 2..k for one grid point."""
    rep = build_rep(f, D)
    system = build_system(rep, f)
    subsystems = tuple(build_subsystem(system, s) for s in range(2, f.k + 1))
    return rep, system, subsystems


@pytest.fixture(params=GRID, ids=GRID_IDS)
def grid_point(request):
    k, f, D = request.param
    rep, system, subsystems = build_point(f, D)
    return k, f, D, rep, system, subsystems
