"""JSON problem files and reports.

Every document carries ``"schema": 1``.  Scalars are strings such as
``"3/7"`` so that no float ever enters; tensors are sparse index tuples
ending in the coefficient.  A problem file looks like::

    {"schema": 1, "field": "rational",
     "H": {"dim": 2, "mul": [[i, j, k, "c"], ...], "unit": ["1", "0"],
           "comul": [[i, k, l, "c"], ...], "counit": ["1", "1"]},
     "A": {"type": "algebra", "dim": 2, "mul": [...], "unit": [...]},
     "action": {"kind": "MA", "map": [[x, a_in, a_out, "c"], ...]},
     "options": {"n_max": 4, "order": 4, "lax_unit": false},
     "deformations": {"d1": {...}}, "automorphisms": {...}, "cochains": {...}}

Module maps use ``(x, a_in, a_out, c)`` and coaction maps ``(a, x, a_out, c)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .actions import ActionKind, ActionStructure, CoactionStructure, ModuleAction
from .errors import DeformaError, ParseError
from .linalg import Matrix, field_from_tag
from .structures import AlgebraData, BialgebraData, CoalgebraData

SCHEMA = 1


# ---------------------------------------------------------------------------
# scalars and sparse blocks


def field_descriptor(F):
    return "rational" if F.characteristic == 0 else {"prime": F.p}


def parse_field(desc):
    try:
        return field_from_tag(desc)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"field: {exc}") from None


def scalar_str(x):
    return str(x)


def parse_scalar(F, raw, where):
    if not isinstance(raw, (str, int)) or isinstance(raw, bool):
        raise ParseError(f"{where}: scalars must be strings or integers, got {raw!r}")
    try:
        return F(raw)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: cannot parse {raw!r} in {F!r} ({exc})") from None


def _triples(F, raw, arity, bounds, where):
    if not isinstance(raw, list):
        raise ParseError(f"{where}: expected a list of index tuples")
    out = []
    for n, t in enumerate(raw):
        if not isinstance(t, list) or len(t) != arity + 1:
            raise ParseError(f"{where}[{n}]: expected {arity} indices and a coefficient")
        idx = t[:arity]
        for i, (v, b) in enumerate(zip(idx, bounds)):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < b:
                raise ParseError(f"{where}[{n}]: index {i} = {v!r} outside 0..{b - 1}")
        out.append((*idx, parse_scalar(F, t[arity], f"{where}[{n}]")))
    return out


def _vector(F, raw, dim, where):
    if not isinstance(raw, list) or len(raw) != dim:
        raise ParseError(f"{where}: expected {dim} scalars")
    return [parse_scalar(F, x, f"{where}[{i}]") for i, x in enumerate(raw)]


def _dim(raw, where):
    d = raw.get("dim") if isinstance(raw, dict) else None
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ParseError(f"{where}.dim: expected a positive integer")
    return d


def _labels(raw, dim, where):
    labels = raw.get("labels", [])
    if labels and (not isinstance(labels, list) or len(labels) != dim):
        raise ParseError(f"{where}.labels: expected {dim} names")
    return tuple(str(x) for x in labels)


def _require(raw, key, where):
    if not isinstance(raw, dict) or key not in raw:
        raise ParseError(f"{where}: missing {key!r}")
    return raw[key]


def matrix_triples(m):
    return [[i, j, scalar_str(v)] for i, j, v in m.nonzero_entries()]


def vector_pairs(v):
    return [[int(i), scalar_str(v[i])] for i in np.flatnonzero(np.asarray(v, dtype=object) != 0)]


def parse_matrix(F, raw, shape, where):
    entries = _triples(F, raw, 2, shape, where)
    return Matrix.from_sparse(F, shape[0], shape[1], entries)


def parse_vector(F, raw, dim, where):
    out = np.array([F.zero] * dim, dtype=object)
    for i, c in _triples(F, raw, 1, (dim,), where):
        out[i] = F.reduce(out[i] + c)
    return out


# ---------------------------------------------------------------------------
# structures


def algebra_to_dict(a):
    d = a.dim
    mul = a.mul_tensor
    triples = [
        [i, j, k, scalar_str(mul[k, i, j])]
        for i in range(d)
        for j in range(d)
        for k in range(d)
        if mul[k, i, j] != 0
    ]
    return {"dim": d, "labels": list(a.labels), "mul": triples, "unit": [scalar_str(x) for x in a.unit]}


def coalgebra_to_dict(c):
    d = c.dim
    de = c.comul_tensor
    triples = [
        [i, k, l, scalar_str(de[k, l, i])]
        for i in range(d)
        for k in range(d)
        for l in range(d)
        if de[k, l, i] != 0
    ]
    return {"dim": d, "labels": list(c.labels), "comul": triples, "counit": [scalar_str(x) for x in c.counit_vector]}


def parse_algebra(F, raw, where):
    d = _dim(raw, where)
    mul = _triples(F, _require(raw, "mul", where), 3, (d, d, d), f"{where}.mul")
    unit = _vector(F, _require(raw, "unit", where), d, f"{where}.unit")
    return AlgebraData.from_triples(F, d, mul, unit, _labels(raw, d, where))


def parse_coalgebra(F, raw, where):
    d = _dim(raw, where)
    comul = _triples(F, _require(raw, "comul", where), 3, (d, d, d), f"{where}.comul")
    counit = _vector(F, _require(raw, "counit", where), d, f"{where}.counit")
    return CoalgebraData.from_triples(F, d, comul, counit, _labels(raw, d, where))


def bialgebra_to_dict(h):
    out = algebra_to_dict(h.algebra)
    co = coalgebra_to_dict(h.coalgebra)
    out["comul"], out["counit"] = co["comul"], co["counit"]
    return out


def parse_bialgebra(F, raw, where="H"):
    return BialgebraData(parse_algebra(F, raw, where), parse_coalgebra(F, raw, where))


def action_to_dict(s):
    a, h = s.a_dim, s.h_dim
    if s.kind.is_module:
        t = s.action.tensor  # (o, x, i)
        triples = [
            [x, i, o, scalar_str(t[o, x, i])]
            for x in range(h)
            for i in range(a)
            for o in range(a)
            if t[o, x, i] != 0
        ]
    else:
        t = s.action.tensor  # (x, o, i)
        triples = [
            [i, x, o, scalar_str(t[x, o, i])]
            for i in range(a)
            for x in range(h)
            for o in range(a)
            if t[x, o, i] != 0
        ]
    return {"kind": s.kind.value, "map": triples}


@dataclass
class ProblemFile:
    structure: ActionStructure
    options: dict = field(default_factory=dict)
    deformations: dict = field(default_factory=dict)  # name -> raw block
    automorphisms: dict = field(default_factory=dict)
    cochains: dict = field(default_factory=dict)
    expected: Optional[dict] = None
    name: str = ""

    @property
    def field(self):
        return self.structure.field


def structure_to_dict(s):
    carrier = algebra_to_dict(s.carrier) if s.kind.algebra_carrier else coalgebra_to_dict(s.carrier)
    carrier = {"type": "algebra" if s.kind.algebra_carrier else "coalgebra", **carrier}
    return {
        "schema": SCHEMA,
        "field": field_descriptor(s.field),
        "H": bialgebra_to_dict(s.h),
        "A": carrier,
        "action": action_to_dict(s),
    }


def problem_to_dict(p):
    out = structure_to_dict(p.structure)
    if p.name:
        out["name"] = p.name
    if p.options:
        out["options"] = dict(p.options)
    for key in ("deformations", "automorphisms", "cochains"):
        block = getattr(p, key)
        if block:
            out[key] = {k: block[k] for k in sorted(block)}
    if p.expected is not None:
        out["expected"] = p.expected
    return out


OPTION_KEYS = {"n_max": int, "order": int, "max_dim": int, "lax_unit": bool}


def parse_problem(raw, lax_unit=None):
    if not isinstance(raw, dict):
        raise ParseError("top level: expected a JSON object")
    if raw.get("schema") != SCHEMA:
        raise ParseError(f"schema: expected {SCHEMA}, got {raw.get('schema')!r}")
    F = parse_field(_require(raw, "field", "top level"))
    h = parse_bialgebra(F, _require(raw, "H", "top level"))
    a_raw = _require(raw, "A", "top level")
    a_type = _require(a_raw, "type", "A")
    act = _require(raw, "action", "top level")
    try:
        kind = ActionKind(_require(act, "kind", "action"))
    except ValueError:
        raise ParseError(f"action.kind: expected one of MA, MC, CA, CC, got {act.get('kind')!r}") from None
    want = "algebra" if kind.algebra_carrier else "coalgebra"
    if a_type != want:
        raise ParseError(f"A.type: a {kind.value} structure needs an {want}, got {a_type!r}")
    carrier = parse_algebra(F, a_raw, "A") if kind.algebra_carrier else parse_coalgebra(F, a_raw, "A")
    a, hd = carrier.dim, h.dim
    if kind.is_module:
        triples = _triples(F, _require(act, "map", "action"), 3, (hd, a, a), "action.map")
        action = ModuleAction.from_triples(h, a, triples)
    else:
        triples = _triples(F, _require(act, "map", "action"), 3, (a, hd, a), "action.map")
        action = CoactionStructure.from_triples(h, a, triples)
    options = raw.get("options", {})
    if not isinstance(options, dict):
        raise ParseError("options: expected an object")
    for k, v in options.items():
        if k not in OPTION_KEYS:
            raise ParseError(f"options.{k}: unknown option")
        if not isinstance(v, OPTION_KEYS[k]) or (OPTION_KEYS[k] is int and isinstance(v, bool)):
            raise ParseError(f"options.{k}: expected {OPTION_KEYS[k].__name__}")
    lax = options.get("lax_unit", False) if lax_unit is None else lax_unit
    s = ActionStructure(kind, carrier, action, lax)
    blocks = {}
    for key in ("deformations", "automorphisms", "cochains"):
        b = raw.get(key, {})
        if not isinstance(b, dict):
            raise ParseError(f"{key}: expected an object of named blocks")
        blocks[key] = b
    return ProblemFile(s, dict(options), name=str(raw.get("name", "")), expected=raw.get("expected"), **blocks)


def loads(text, lax_unit=None):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return parse_problem(raw, lax_unit)
    except ParseError:
        raise
    except DeformaError as exc:
        raise ParseError(str(exc)) from None


def load(path, lax_unit=None):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), lax_unit)


def dumps(doc):
    """Canonical text form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# series, automorphisms and cochains


def coefficient_shape(theory):
    a, h = theory.a_dim, theory.h_dim
    return (a, h * a) if theory.kind.is_module else (h * a, a)


def series_to_dict(series):
    t = series.theory
    shape = coefficient_shape(t)
    coeffs = [matrix_triples(Matrix(t.field, c.reshape(shape), trusted=True)) for c in series.coeffs]
    return {"kind": t.kind.value, "order": series.order, "shape": list(shape), "coeffs": coeffs}


def parse_series(theory, raw, where="deformation"):
    from .deformation import DeformationSeries

    if _require(raw, "kind", where) != theory.kind.value:
        raise ParseError(f"{where}.kind: does not match the {theory.kind.value} structure")
    shape = coefficient_shape(theory)
    coeffs = _require(raw, "coeffs", where)
    if not isinstance(coeffs, list) or not coeffs:
        raise ParseError(f"{where}.coeffs: expected a non-empty list")
    mats = [parse_matrix(theory.field, c, shape, f"{where}.coeffs[{n}]") for n, c in enumerate(coeffs)]
    if "order" in raw and raw["order"] != len(mats) - 1:
        raise ParseError(f"{where}.order: {raw['order']} disagrees with {len(mats)} coefficients")
    try:
        return DeformationSeries.create(theory, [m.array.reshape(-1) for m in mats])
    except DeformaError as exc:
        raise ParseError(f"{where}: {exc}") from None


def automorphism_to_dict(phi):
    return {"dim": phi.a_dim, "order": phi.order, "coeffs": [matrix_triples(c) for c in phi.coeffs]}


def parse_automorphism(theory, raw, where="automorphism"):
    from .deformation import FormalAutomorphism

    a = theory.a_dim
    if raw.get("dim", a) != a:
        raise ParseError(f"{where}.dim: expected {a}")
    coeffs = _require(raw, "coeffs", where)
    if not isinstance(coeffs, list) or not coeffs:
        raise ParseError(f"{where}.coeffs: expected a non-empty list")
    mats = [parse_matrix(theory.field, c, (a, a), f"{where}.coeffs[{n}]") for n, c in enumerate(coeffs)]
    try:
        return FormalAutomorphism.create(theory.field, a, mats, theory.structure.carrier)
    except DeformaError as exc:
        raise ParseError(f"{where}: {exc}") from None


def cochain_to_dict(degree, vec):
    return {"degree": degree, "dim": int(len(vec)), "entries": vector_pairs(vec)}


def parse_cochain(theory, raw, where="cochain"):
    """A flat cochain of the deformation complex as (degree, SplitCochain)."""
    n = _require(raw, "degree", where)
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError(f"{where}.degree: expected a non-negative integer")
    if n > theory.n_max:
        raise ParseError(f"{where}.degree: above the stored maximum {theory.n_max}")
    dim = theory.complex.dims[n]
    if raw.get("dim", dim) != dim:
        raise ParseError(f"{where}.dim: degree {n} cochains have {dim} coordinates")
    vec = parse_vector(theory.field, _require(raw, "entries", where), dim, f"{where}.entries")
    return n, vec
