"""Random generators shared by the test modules.

Random valid structures come from the fixtures by a random change of basis
of A and of H, and by dualizing (MA <-> CC, MC <-> CA).  Random deformations
are grown from random 1-cocycles with random kernel choices, and random
automorphisms are solved order by order with random derivation terms.
"""

from __future__ import annotations

import numpy as np

from deforma.actions import ActionKind, ActionStructure, CoactionStructure, ModuleAction, dual_structure
from deforma.complexes import cohomology
from deforma.defcomplex import build_theory
from deforma.deformation import (
    DeformationSeries,
    FormalAutomorphism,
    automorphism_step,
    obstruction,
)
from deforma.fixtures import fixture
from deforma.linalg import GF, Matrix, kron, rank, solve
from deforma.structures import AlgebraData, BialgebraData, CoalgebraData

# fixture -> number of dualizations giving each kind
KIND_SOURCES = {
    ActionKind.MA: [("trivial-ma", 0), ("c2-sign-ma", 0), ("trivial-point-ma", 0), ("grouplike-cc", 1)],
    ActionKind.CC: [("grouplike-cc", 0), ("trivial-ma", 1), ("c2-sign-ma", 1)],
    ActionKind.MC: [("leftmul-mc", 0), ("c2-grading-ca", 1)],
    ActionKind.CA: [("c2-grading-ca", 0), ("leftmul-mc", 1)],
}


def random_invertible(F, n, rng):
    while True:
        m = Matrix(F, [[F(int(x)) for x in rng.integers(-1, 2, n)] for _ in range(n)])
        if rank(m) == n:
            return m


def inverse(m):
    F, n = m.field, m.rows
    cols = [solve(m, np.array([F.one if i == j else F.zero for i in range(n)], dtype=object))[0] for j in range(n)]
    return Matrix(F, np.array(cols, dtype=object).T.copy())


def _algebra(a, P, Pi):
    return AlgebraData(a.field, a.dim, Pi @ a.mul @ kron(P, P), Pi @ a.unit, a.labels)


def _coalgebra(c, P, Pi):
    return CoalgebraData(c.field, c.dim, kron(Pi, Pi) @ c.comul @ P, c.counit @ P, c.labels)


def transport(s, P, Q):
    """The structure in the new bases given by the columns of P (for A) and Q (for H)."""
    Pi, Qi = inverse(P), inverse(Q)
    h = BialgebraData(_algebra(s.h.algebra, Q, Qi), _coalgebra(s.h.coalgebra, Q, Qi))
    carrier = _algebra(s.carrier, P, Pi) if s.kind.algebra_carrier else _coalgebra(s.carrier, P, Pi)
    if s.kind.is_module:
        action = ModuleAction(h, s.a_dim, Pi @ s.action.lam @ kron(Q, P))
    else:
        action = CoactionStructure(h, s.a_dim, kron(Qi, Pi) @ s.action.rho @ P)
    return ActionStructure(s.kind, carrier, action, s.lax_unit)


def random_structure(kind, rng, F=None):
    """A valid structure of the given kind: a transported fixture or dual."""
    name, duals = KIND_SOURCES[kind][int(rng.integers(len(KIND_SOURCES[kind])))]
    s = fixture(name) if F is None else fixture(name, F)
    for _ in range(duals):
        s = dual_structure(s)
    return transport(s, random_invertible(s.field, s.a_dim, rng), random_invertible(s.field, s.h_dim, rng))


def random_combination(F, basis, rng, bound=2):
    if basis.dim == 0:
        return np.zeros(basis.ambient_dim, dtype=object)
    return basis.combine([F(int(x)) for x in rng.integers(-bound, bound + 1, basis.dim)])


def random_cocycle(theory, rng, bound=2):
    return random_combination(theory.field, cohomology(theory.complex, 1).kernel, rng, bound)


def random_series(theory, order, rng, bound=2):
    """A validated series grown from a random 1-cocycle by random extensions.

    Returns the longest series reached (it may stop short at an obstruction).
    """
    series = DeformationSeries.create(theory, [theory.base_cochain().comp0, random_cocycle(theory, rng, bound)])
    kernel = cohomology(theory.complex, 1).kernel
    while series.order < order:
        ob = obstruction(series)
        res = solve(theory.complex.d(1), -ob.cochain.vector)
        if res is None:
            break
        x = theory.field.reduce(res[0] + random_combination(theory.field, kernel, rng, bound))
        series = DeformationSeries.create(theory, list(series.coeffs) + [x])
        assert series.validated
    return series


def random_automorphism(theory, order, rng, bound=2):
    """A validated formal automorphism with random derivation terms at every order.

    Stops early (shorter series) if an order has no solution.
    """
    F, a = theory.field, theory.a_dim
    coeffs = [Matrix.identity(F, a)]
    while len(coeffs) <= order:
        M, r = automorphism_step(theory, coeffs)
        res = solve(M, r)
        if res is None:
            break
        x = F.reduce(res[0] + random_combination(F, theory.f0_basis, rng, bound))
        coeffs.append(Matrix(F, x.reshape(a, a).copy(), trusted=True))
    phi = FormalAutomorphism.create(F, a, coeffs, theory.structure.carrier)
    assert phi.validated
    return phi


# characteristic-2 variants; over QQ most fixtures have Z^1 = 0, and these
# supply nonzero infinitesimals, H^1 classes and real obstructions
EXTRA = {
    "gf2-trivial-ma": lambda: fixture("trivial-ma", GF(2)),
    "gf2-trivial-cc": lambda: dual_structure(fixture("trivial-ma", GF(2))),
    "gf2-c2-grading-ca": lambda: fixture("c2-grading-ca", GF(2)),
    "gf2-c2-grading-mc": lambda: dual_structure(fixture("c2-grading-ca", GF(2))),
}

_THEORIES = {}


def structure_for(name):
    return EXTRA[name]() if name in EXTRA else fixture(name)


def theory_for(name, n_max=4):
    """Cached theory of a fixture or of one of the EXTRA variants."""
    key = (name, n_max)
    if key not in _THEORIES:
        _THEORIES[key] = build_theory(structure_for(name), n_max)
    return _THEORIES[key]
