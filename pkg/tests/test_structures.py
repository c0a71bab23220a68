import pytest

from deforma.errors import InvalidStructure
from deforma.fixtures import dual_numbers, ground_field_algebra, group_algebra_c2, grouplike_coalgebra, sweedler_h4
from deforma.linalg import GF, QQ, Matrix, SubspaceBasis
from deforma.structures import (
    AlgebraData,
    BialgebraData,
    BicomoduleData,
    BimoduleData,
    CoalgebraData,
    coderivations,
    derivations,
    dual_algebra,
    dual_bialgebra,
    dual_coalgebra,
    iterate_comul,
    validate_algebra,
    validate_bialgebra,
    validate_bicomodule,
    validate_bimodule,
    validate_coalgebra,
)


def test_algebra_examples():
    assert validate_algebra(ground_field_algebra()).ok
    assert validate_algebra(dual_numbers()).ok
    broken = AlgebraData.from_triples(QQ, 2, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1)], [0, 1])
    rep = validate_algebra(broken)
    assert not rep.ok and rep.failed("left unit")
    assert rep.failures[0].witness


def test_coalgebra_examples():
    one = CoalgebraData.from_triples(QQ, 1, [(0, 0, 0, 1)], [1])
    assert validate_coalgebra(one).ok
    assert validate_coalgebra(grouplike_coalgebra()).ok
    bad = CoalgebraData.from_triples(QQ, 2, [(0, 0, 0, 1), (1, 1, 0, 1)], [1, 1])
    rep = validate_coalgebra(bad)
    assert not rep.ok and rep.failed("left counit") and not rep.failed("right counit")
    assert rep.failures[0].witness == ("e1",)


def test_bialgebra_examples():
    assert validate_bialgebra(group_algebra_c2()).ok
    assert validate_bialgebra(sweedler_h4()).ok
    assert validate_bialgebra(sweedler_h4(GF(3))).ok
    c2 = group_algebra_c2()
    primitive = CoalgebraData.from_triples(QQ, 2, [(0, 0, 0, 1), (1, 1, 0, 1), (1, 0, 1, 1)], [1, 0], ("1", "g"))
    rep = validate_bialgebra(BialgebraData(c2.algebra, primitive))
    assert not rep.ok and rep.failed("comultiplicative")
    assert rep.failures[0].witness == ("g", "g")


def test_duals_preserve_validity():
    for h in (group_algebra_c2(), sweedler_h4()):
        assert validate_bialgebra(dual_bialgebra(h)).ok
    assert validate_coalgebra(dual_coalgebra(dual_numbers())).ok
    assert validate_algebra(dual_algebra(grouplike_coalgebra())).ok


def test_iterate_comul():
    c = grouplike_coalgebra()
    assert iterate_comul(c, 0) == Matrix.identity(QQ, 2)
    assert iterate_comul(c, 1) == c.comul
    d3 = iterate_comul(c, 3)
    assert d3.shape == (16, 2)
    # group-likes go to g (x) g (x) g (x) g
    assert d3.array[15, 1] == 1 and sum(d3.array[:, 1]) == 1


def test_derivation_examples():
    assert derivations(ground_field_algebra()).dim == 0
    der = derivations(dual_numbers())
    assert der == SubspaceBasis.span(QQ, 4, [[0, 0, 0, 1]])  # 1 -> 0, x -> x
    assert derivations(group_algebra_c2().algebra).dim == 0
    # in characteristic 2 the map x -> 1 is a derivation as well
    assert derivations(dual_numbers(GF(2))).dim == 2


def test_coderivation_examples():
    one = CoalgebraData.from_triples(QQ, 1, [(0, 0, 0, 1)], [1])
    assert coderivations(one).dim == 0
    assert coderivations(grouplike_coalgebra()).dim == 0
    assert coderivations(dual_coalgebra(dual_numbers())).dim == 1


def test_regular_bimodules():
    assert validate_bimodule(BimoduleData.regular(dual_numbers())).ok
    assert validate_bicomodule(BicomoduleData.regular(grouplike_coalgebra())).ok
    # a coalgebra whose comultiplication is not diagonal
    for F in (QQ, GF(2)):
        c = dual_coalgebra(dual_numbers(F))
        assert validate_bicomodule(BicomoduleData.regular(c)).ok


def test_raise_if_failed():
    broken = AlgebraData.from_triples(QQ, 1, [(0, 0, 0, 2)], [1])
    with pytest.raises(InvalidStructure):
        validate_algebra(broken).raise_if_failed()
