import json

import numpy as np
import pytest

from deforma import io
from deforma.errors import ParseError
from deforma.fixtures import FIXTURES, fixture
from helpers import EXTRA, random_automorphism, random_series, structure_for, theory_for

ALL = sorted(FIXTURES) + sorted(EXTRA)


@pytest.mark.parametrize("name", ALL)
def test_structure_round_trip(name):
    doc = io.structure_to_dict(structure_for(name))
    text = io.dumps(doc)
    again = io.dumps(io.structure_to_dict(io.loads(text).structure))
    assert again == text


@pytest.mark.parametrize("name", ["sweedler-h4-ma", "gf2-trivial-cc", "gf2-c2-grading-mc", "c2-grading-ca"])
def test_series_automorphism_cochain_round_trip(name):
    t = theory_for(name)
    rng = np.random.default_rng(0)
    s = random_series(t, 3, rng)
    raw = io.series_to_dict(s)
    assert io.parse_series(t, json.loads(json.dumps(raw))) == s
    assert io.series_to_dict(io.parse_series(t, raw)) == raw
    phi = random_automorphism(t, 3, rng)
    raw = io.automorphism_to_dict(phi)
    back = io.parse_automorphism(t, json.loads(json.dumps(raw)))
    assert back == phi and back.validated
    v = s.coeffs[1]
    raw = io.cochain_to_dict(1, v)
    n, w = io.parse_cochain(t, raw)
    assert n == 1 and np.all(w == v) and io.cochain_to_dict(n, w) == raw


def test_problem_round_trip():
    t = theory_for("gf2-trivial-ma")
    doc = io.structure_to_dict(t.structure)
    doc.update(
        name="p",
        options={"n_max": 3, "order": 2},
        deformations={"d": io.series_to_dict(random_series(t, 2, np.random.default_rng(1)))},
        expected={"valid": True},
    )
    text = io.dumps(doc)
    assert io.dumps(io.problem_to_dict(io.loads(text))) == text


def test_scalars_are_strings_and_exact():
    doc = io.structure_to_dict(fixture("grouplike-cc"))
    assert {c for *_, c in doc["action"]["map"]} == {"1/2", "-1/2"}
    doc["action"]["map"][0][3] = 0.5  # a JSON float is ambiguous
    with pytest.raises(ParseError, match="action.map"):
        io.parse_problem(doc)
    doc["action"]["map"][0][3] = "0.5"  # a decimal string is exact
    assert io.parse_problem(doc).structure.action.rho == fixture("grouplike-cc").action.rho


def test_json_errors_have_positions():
    with pytest.raises(ParseError, match=r"line 2, column"):
        io.loads('{\n  "schema": 1,,\n}')


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d.update(schema=2), "schema"),
        (lambda d: d.update(field={"prime": 4}), "field"),
        (lambda d: d["action"].update(kind="XY"), "action.kind"),
        (lambda d: d["A"].update(type="coalgebra"), "A.type"),
        (lambda d: d["action"]["map"].append([0, 0, 5, "1"]), "action.map"),
        (lambda d: d.update(options={"n_max": "3"}), "options.n_max"),
        (lambda d: d.update(options={"speed": 1}), "options.speed"),
        (lambda d: d.pop("H"), "H"),
    ],
)
def test_parse_errors(mutate, message):
    doc = io.structure_to_dict(fixture("c2-sign-ma"))
    mutate(doc)
    with pytest.raises(ParseError, match=message):
        io.parse_problem(doc)


def test_series_parse_errors():
    t = theory_for("c2-sign-ma")
    raw = io.series_to_dict(random_series(t, 1, np.random.default_rng(0)))
    with pytest.raises(ParseError, match="kind"):
        io.parse_series(t, dict(raw, kind="CC"))
    with pytest.raises(ParseError, match="order"):
        io.parse_series(t, dict(raw, order=3))
    with pytest.raises(ParseError, match="base action"):
        io.parse_series(t, dict(raw, coeffs=[[]], order=0))
    with pytest.raises(ParseError, match="degree"):
        io.parse_cochain(t, {"degree": 9, "entries": []})
