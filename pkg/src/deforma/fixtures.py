"""Small named structures used by the CLI and the tests.

All fixtures are over the rationals unless a field is passed in; the sign
and grading fixtures need characteristic other than 2.
"""

from __future__ import annotations

from fractions import Fraction

from .actions import ActionKind, ActionStructure, CoactionStructure, ModuleAction
from .linalg import QQ
from .structures import AlgebraData, BialgebraData, CoalgebraData

HALF = Fraction(1, 2)


def ground_field_bialgebra(F=QQ):
    alg = AlgebraData.from_triples(F, 1, [(0, 0, 0, 1)], [1], ("1",))
    coalg = CoalgebraData.from_triples(F, 1, [(0, 0, 0, 1)], [1], ("1",))
    return BialgebraData(alg, coalg)


def ground_field_algebra(F=QQ):
    return AlgebraData.from_triples(F, 1, [(0, 0, 0, 1)], [1], ("1",))


def group_algebra_c2(F=QQ):
    """K[C2] with basis (1, g), g group-like."""
    labels = ("1", "g")
    alg = AlgebraData.from_triples(
        F, 2, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1)], [1, 0], labels
    )
    return BialgebraData(alg, grouplike_coalgebra(F))


def grouplike_coalgebra(F=QQ):
    """The coalgebra on (1, g) with both basis vectors group-like."""
    return CoalgebraData.from_triples(F, 2, [(0, 0, 0, 1), (1, 1, 1, 1)], [1, 1], ("1", "g"))


def dual_numbers(F=QQ):
    """K[x]/(x^2) with basis (1, x)."""
    return AlgebraData.from_triples(
        F, 2, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)], [1, 0], ("1", "x")
    )


def sweedler_h4(F=QQ):
    """Sweedler's four-dimensional Hopf algebra, basis (1, g, h, gh)."""
    labels = ("1", "g", "h", "gh")
    one, g, h, gh = range(4)
    mul = [
        (one, one, one, 1), (one, g, g, 1), (one, h, h, 1), (one, gh, gh, 1),
        (g, one, g, 1), (g, g, one, 1), (g, h, gh, 1), (g, gh, h, 1),
        (h, one, h, 1), (h, g, gh, -1),
        (gh, one, gh, 1), (gh, g, h, -1),
    ]
    comul = [
        (one, one, one, 1),
        (g, g, g, 1),
        (h, h, one, 1), (h, g, h, 1),
        (gh, gh, g, 1), (gh, one, gh, 1),
    ]
    alg = AlgebraData.from_triples(F, 4, mul, [1, 0, 0, 0], labels)
    coalg = CoalgebraData.from_triples(F, 4, comul, [1, 1, 0, 0], labels)
    return BialgebraData(alg, coalg)


def trivial_module_action(h, a_dim):
    """lambda(x) = eps(x) id."""
    eps = h.coalgebra.counit_vector
    triples = [(x, i, i, eps[x]) for x in range(h.dim) for i in range(a_dim) if eps[x] != 0]
    return ModuleAction.from_triples(h, a_dim, triples)


def trivial_coaction(h, a_dim):
    """rho(a) = 1 (x) a."""
    unit = h.algebra.unit
    triples = [(i, x, i, unit[x]) for i in range(a_dim) for x in range(h.dim) if unit[x] != 0]
    return CoactionStructure.from_triples(h, a_dim, triples)


def trivial_ma(F=QQ):
    """K[C2] acting trivially on K[x]/(x^2)."""
    h = group_algebra_c2(F)
    return ActionStructure(ActionKind.MA, dual_numbers(F), trivial_module_action(h, 2))


def c2_sign_ma(F=QQ):
    """g.1 = 1, g.x = -x on K[x]/(x^2)."""
    h = group_algebra_c2(F)
    lam = ModuleAction.from_triples(h, 2, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 0, 1), (1, 1, 1, -1)])
    return ActionStructure(ActionKind.MA, dual_numbers(F), lam)


def sweedler_h4_ma(F=QQ):
    """H4 on K[x]/(x^2): g.x = -x, h.x = 1, h.1 = 0."""
    h = sweedler_h4(F)
    lam = ModuleAction.from_triples(
        h,
        2,
        [
            (0, 0, 0, 1), (0, 1, 1, 1),  # 1 acts as the identity
            (1, 0, 0, 1), (1, 1, 1, -1),  # g
            (2, 1, 0, 1),  # h: x -> 1
            (3, 1, 0, 1),  # gh = g(h): x -> 1
        ],
    )
    return ActionStructure(ActionKind.MA, dual_numbers(F), lam)


def c2_grading_ca(F=QQ):
    """K[x]/(x^2) graded by C2 with x odd: rho(1) = 1 (x) 1, rho(x) = g (x) x."""
    h = group_algebra_c2(F)
    rho = CoactionStructure.from_triples(h, 2, [(0, 0, 0, 1), (1, 1, 1, 1)])
    return ActionStructure(ActionKind.CA, dual_numbers(F), rho)


def grouplike_cc(F=QQ):
    """The group-like coalgebra on (1, g) graded by C2.

    The grading puts u = 1 + g in degree 1 and v = 1 - g in degree g, so
    rho(u) = 1 (x) u and rho(v) = g (x) v.
    """
    h = group_algebra_c2(F)
    half = F(HALF)
    rho = CoactionStructure.from_triples(
        h,
        2,
        [
            (0, 0, 0, half), (0, 0, 1, half), (0, 1, 0, half), (0, 1, 1, -half),
            (1, 0, 0, half), (1, 0, 1, half), (1, 1, 0, -half), (1, 1, 1, half),
        ],
    )
    return ActionStructure(ActionKind.CC, grouplike_coalgebra(F), rho)


def leftmul_mc(F=QQ):
    """K[C2] acting on the group-like coalgebra K[C2] by left multiplication."""
    h = group_algebra_c2(F)
    lam = ModuleAction.from_triples(h, 2, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1)])
    return ActionStructure(ActionKind.MC, grouplike_coalgebra(F), lam)


def trivial_point_ma(F=QQ):
    """H = K acting trivially on A = K."""
    h = ground_field_bialgebra(F)
    return ActionStructure(ActionKind.MA, ground_field_algebra(F), trivial_module_action(h, 1))


FIXTURES = {
    "trivial-ma": trivial_ma,
    "c2-sign-ma": c2_sign_ma,
    "sweedler-h4-ma": sweedler_h4_ma,
    "c2-grading-ca": c2_grading_ca,
    "grouplike-cc": grouplike_cc,
    "leftmul-mc": leftmul_mc,
    "trivial-point-ma": trivial_point_ma,
}

# the six fixtures of the main suite; trivial-point-ma is the rigidity test case
MAIN_FIXTURES = (
    "trivial-ma",
    "c2-sign-ma",
    "sweedler-h4-ma",
    "c2-grading-ca",
    "grouplike-cc",
    "leftmul-mc",
)


def fixture(name, F=QQ):
    try:
        return FIXTURES[name](F)
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}") from None
