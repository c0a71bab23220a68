"""Finite-dimensional algebras, coalgebras and bialgebras as structure constants.

Conventions: a linear map V -> W is a (dim W) x (dim V) matrix.  So

* ``mul`` is dim x dim**2 with ``mul[k, i*dim + j]`` the coefficient of
  ``e_k`` in ``e_i e_j``;
* ``comul`` is dim**2 x dim with ``comul[k*dim + l, i]`` the coefficient of
  ``e_k (x) e_l`` in ``Delta(e_i)``;
* ``counit`` is 1 x dim, ``unit`` a coordinate vector.

The ``*_tensor`` properties reshape these into index-per-factor arrays with
output axes first, which is the form the contraction helpers consume.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import InvalidStructure, ShapeError
from .linalg import (
    Matrix,
    SubspaceBasis,
    contract,
    kernel_basis,
    kron,
    operator_matrix,
    vector,
)


@dataclass(frozen=True)
class Failure:
    axiom: str
    witness: tuple
    count: int = 1
    detail: str = ""

    def describe(self):
        w = ", ".join(str(x) for x in self.witness)
        extra = f" ({self.detail})" if self.detail else ""
        many = f" [{self.count} failing tuples]" if self.count > 1 else ""
        return f"{self.axiom}: fails at ({w}){extra}{many}"


@dataclass
class ValidationReport:
    subject: str
    checked: list = dc_field(default_factory=list)
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def __bool__(self):
        return self.ok

    def merge(self, other, prefix=""):
        self.checked.extend(prefix + c for c in other.checked)
        for f in other.failures:
            self.failures.append(
                Failure(prefix + f.axiom, f.witness, f.count, f.detail)
            )
        return self

    def failed(self, axiom):
        return any(f.axiom == axiom or f.axiom.endswith(":" + axiom) for f in self.failures)

    def raise_if_failed(self):
        if self.failures:
            lines = "; ".join(f.describe() for f in self.failures)
            raise InvalidStructure(f"{self.subject} is invalid: {lines}", self)
        return self

    def to_dict(self):
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checked": list(self.checked),
            "failures": [
                {
                    "axiom": f.axiom,
                    "witness": [str(x) for x in f.witness],
                    "count": f.count,
                    "detail": f.detail,
                }
                for f in self.failures
            ],
        }


def _check(report, axiom, lhs, rhs, n_inputs, labels):
    """Compare two tensors laid out as (inputs..., outputs...)."""
    report.checked.append(axiom)
    diff = np.asarray(lhs, dtype=object) - np.asarray(rhs, dtype=object)
    bad = np.argwhere(diff != 0)
    if bad.size == 0:
        return True
    inputs = {tuple(row[:n_inputs]) for row in bad.tolist()}
    first = min(inputs)
    witness = tuple(labels[k][i] for k, i in enumerate(first))
    report.failures.append(Failure(axiom, witness, len(inputs)))
    return False


def _default_labels(dim, stem="e"):
    return tuple(f"{stem}{i}" for i in range(dim))


def _sparse_map(field, rows, cols, triples, arrange):
    entries = []
    for t in triples:
        *idx, c = t
        entries.append((*arrange(*idx), c))
    return Matrix.from_sparse(field, rows, cols, entries)


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True, eq=False)
class AlgebraData:
    field: object
    dim: int
    mul: Matrix
    unit: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        d = self.dim
        if self.mul.shape != (d, d * d):
            raise ShapeError(f"mul must be {d}x{d * d}, got {self.mul.shape}")
        object.__setattr__(self, "unit", vector(self.field, self.unit))
        if self.unit.shape != (d,):
            raise ShapeError(f"unit must have length {d}")
        if not self.labels:
            object.__setattr__(self, "labels", _default_labels(d))

    @classmethod
    def from_triples(cls, field, dim, triples, unit, labels=()):
        """``triples`` are ``(i, j, k, c)``: e_i e_j contains c e_k."""
        mul = _sparse_map(field, dim, dim * dim, triples, lambda i, j, k: (k, i * dim + j))
        return cls(field, dim, mul, unit, tuple(labels))

    @property
    def mul_tensor(self):
        d = self.dim
        return self.mul.array.reshape(d, d, d)

    def product(self, a, b):
        return self.mul @ np.kron(np.asarray(a, dtype=object), np.asarray(b, dtype=object))


@dataclass(frozen=True, eq=False)
class CoalgebraData:
    field: object
    dim: int
    comul: Matrix
    counit: Matrix
    labels: tuple = ()

    def __post_init__(self):
        d = self.dim
        if self.comul.shape != (d * d, d):
            raise ShapeError(f"comul must be {d * d}x{d}, got {self.comul.shape}")
        if self.counit.shape != (1, d):
            raise ShapeError(f"counit must be 1x{d}, got {self.counit.shape}")
        if not self.labels:
            object.__setattr__(self, "labels", _default_labels(d))

    @classmethod
    def from_triples(cls, field, dim, triples, counit, labels=()):
        """``triples`` are ``(i, k, l, c)``: Delta(e_i) contains c e_k (x) e_l."""
        comul = _sparse_map(field, dim * dim, dim, triples, lambda i, k, l: (k * dim + l, i))
        counit = Matrix(field, [list(counit)])
        return cls(field, dim, comul, counit, tuple(labels))

    @property
    def comul_tensor(self):
        d = self.dim
        return self.comul.array.reshape(d, d, d)

    @property
    def counit_vector(self):
        return self.counit.array[0]


@dataclass(frozen=True, eq=False)
class BialgebraData:
    algebra: AlgebraData
    coalgebra: CoalgebraData

    def __post_init__(self):
        if self.algebra.dim != self.coalgebra.dim:
            raise ShapeError("algebra and coalgebra parts of a bialgebra differ in dimension")
        if self.algebra.field != self.coalgebra.field:
            raise ShapeError("algebra and coalgebra parts live over different fields")

    @property
    def field(self):
        return self.algebra.field

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def labels(self):
        return self.algebra.labels


@dataclass(frozen=True, eq=False)
class BimoduleData:
    """A bimodule over ``ring``: ``left`` is M x (R(x)M), ``right`` is M x (M(x)R)."""

    ring: AlgebraData
    space_dim: int
    left: Matrix
    right: Matrix
    labels: tuple = ()

    def __post_init__(self):
        r, m = self.ring.dim, self.space_dim
        if self.left.shape != (m, r * m) or self.right.shape != (m, m * r):
            raise ShapeError("bimodule action matrices have the wrong shape")
        if not self.labels:
            object.__setattr__(self, "labels", _default_labels(m, "m"))

    @classmethod
    def regular(cls, algebra):
        """``algebra`` as a bimodule over itself via multiplication."""
        return cls(algebra, algebra.dim, algebra.mul, algebra.mul, algebra.labels)

    @property
    def left_tensor(self):  # (m_out, r, m_in)
        return self.left.array.reshape(self.space_dim, self.ring.dim, self.space_dim)

    @property
    def right_tensor(self):  # (m_out, m_in, r)
        return self.right.array.reshape(self.space_dim, self.space_dim, self.ring.dim)


@dataclass(frozen=True, eq=False)
class BicomoduleData:
    """``left_coaction`` is (C(x)M) x M, ``right_coaction`` is (M(x)C) x M."""

    coalgebra: CoalgebraData
    space_dim: int
    left_coaction: Matrix
    right_coaction: Matrix
    labels: tuple = ()

    def __post_init__(self):
        c, m = self.coalgebra.dim, self.space_dim
        if self.left_coaction.shape != (c * m, m) or self.right_coaction.shape != (m * c, m):
            raise ShapeError("bicomodule coaction matrices have the wrong shape")
        if not self.labels:
            object.__setattr__(self, "labels", _default_labels(m, "m"))

    @classmethod
    def regular(cls, coalgebra):
        return cls(coalgebra, coalgebra.dim, coalgebra.comul, coalgebra.comul, coalgebra.labels)

    @property
    def left_tensor(self):  # (c, m_out, m_in)
        c, m = self.coalgebra.dim, self.space_dim
        return self.left_coaction.array.reshape(c, m, m)

    @property
    def right_tensor(self):  # (m_out, c, m_in)
        c, m = self.coalgebra.dim, self.space_dim
        return self.right_coaction.array.reshape(m, c, m)


# ---------------------------------------------------------------------------
# validators


def validate_algebra(a):
    F, d, L = a.field, a.dim, a.labels
    mu = a.mul_tensor
    rep = ValidationReport("algebra")
    # (ab)c vs a(bc), laid out (a, b, c, out)
    lhs = contract(F, "abco", (mu, "kab"), (mu, "okc"))
    rhs = contract(F, "abco", (mu, "kbc"), (mu, "oak"))
    _check(rep, "associativity", lhs, rhs, 3, (L, L, L))
    eye = np.eye(d, dtype=int).astype(object)
    left = contract(F, "ao", (a.unit, "u"), (mu, "oua"))
    right = contract(F, "ao", (a.unit, "u"), (mu, "oau"))
    _check(rep, "left unit", left, eye, 1, (L,))
    _check(rep, "right unit", right, eye, 1, (L,))
    return rep


def validate_coalgebra(c):
    F, d, L = c.field, c.dim, c.labels
    de = c.comul_tensor
    eps = c.counit_vector
    rep = ValidationReport("coalgebra")
    lhs = contract(F, "apqr", (de, "kra"), (de, "pqk"))
    rhs = contract(F, "apqr", (de, "pka"), (de, "qrk"))
    _check(rep, "coassociativity", lhs, rhs, 1, (L,))
    eye = np.eye(d, dtype=int).astype(object)
    left = contract(F, "ao", (eps, "k"), (de, "koa"))
    right = contract(F, "ao", (eps, "k"), (de, "oka"))
    _check(rep, "left counit", left, eye, 1, (L,))
    _check(rep, "right counit", right, eye, 1, (L,))
    return rep


def validate_bialgebra(h):
    if h.algebra.dim != h.coalgebra.dim:
        raise ShapeError("dimension mismatch between algebra and coalgebra")
    F, L = h.field, h.labels
    rep = ValidationReport("bialgebra")
    rep.merge(validate_algebra(h.algebra), "algebra:")
    rep.merge(validate_coalgebra(h.coalgebra), "coalgebra:")
    mu = h.algebra.mul_tensor
    de = h.coalgebra.comul_tensor
    eps = h.coalgebra.counit_vector
    unit = h.algebra.unit
    lhs = contract(F, "xypq", (mu, "kxy"), (de, "pqk"))
    rhs = contract(
        F, "xypq", (de, "abx"), (de, "cdy"), (mu, "pac"), (mu, "qbd")
    )
    _check(rep, "comultiplicative", lhs, rhs, 2, (L, L))
    lhs = contract(F, "pq", (unit, "k"), (de, "pqk"))
    rhs = np.multiply.outer(unit, unit)
    _check(rep, "comul of unit", lhs.reshape(1, *lhs.shape), rhs.reshape(1, *rhs.shape), 1, (("1",),))
    lhs = contract(F, "xy", (eps, "k"), (mu, "kxy"))
    rhs = np.multiply.outer(eps, eps)
    _check(rep, "counit multiplicative", lhs, rhs, 2, (L, L))
    eu = contract(F, "", (eps, "k"), (unit, "k"))
    _check(rep, "counit of unit", np.array([eu]), np.array([F.one]), 1, (("1",),))
    return rep


def validate_bimodule(m):
    F = m.ring.field
    R, M = m.ring.labels, m.labels
    mu = m.ring.mul_tensor
    al, ar = m.left_tensor, m.right_tensor
    rep = ValidationReport("bimodule")
    rep.merge(validate_algebra(m.ring), "ring:")
    # x.(y.m) = (xy).m
    lhs = contract(F, "xyno", (al, "kyn"), (al, "oxk"))
    rhs = contract(F, "xyno", (mu, "zxy"), (al, "ozn"))
    _check(rep, "left module", lhs, rhs, 3, (R, R, M))
    lhs = contract(F, "nxyo", (ar, "knx"), (ar, "oky"))
    rhs = contract(F, "nxyo", (mu, "zxy"), (ar, "onz"))
    _check(rep, "right module", lhs, rhs, 3, (M, R, R))
    eye = np.eye(m.space_dim, dtype=int).astype(object)
    unit = m.ring.unit
    _check(rep, "left unit", contract(F, "no", (unit, "u"), (al, "oun")), eye, 1, (M,))
    _check(rep, "right unit", contract(F, "no", (unit, "u"), (ar, "onu")), eye, 1, (M,))
    lhs = contract(F, "xnyo", (ar, "kny"), (al, "oxk"))
    rhs = contract(F, "xnyo", (al, "kxn"), (ar, "oky"))
    _check(rep, "commuting actions", lhs, rhs, 3, (R, M, R))
    return rep


def validate_bicomodule(m):
    F = m.coalgebra.field
    M = m.labels
    de = m.coalgebra.comul_tensor
    eps = m.coalgebra.counit_vector
    pl, pr = m.left_tensor, m.right_tensor
    rep = ValidationReport("bicomodule")
    rep.merge(validate_coalgebra(m.coalgebra), "coalgebra:")
    lhs = contract(F, "npqo", (pl, "kon"), (de, "pqk"))
    rhs = contract(F, "npqo", (pl, "pkn"), (pl, "qok"))
    _check(rep, "left coassociativity", lhs, rhs, 1, (M,))
    lhs = contract(F, "nopq", (pr, "okn"), (de, "pqk"))
    rhs = contract(F, "nopq", (pr, "kqn"), (pr, "opk"))
    _check(rep, "right coassociativity", lhs, rhs, 1, (M,))
    eye = np.eye(m.space_dim, dtype=int).astype(object)
    _check(rep, "left counit", contract(F, "no", (eps, "c"), (pl, "con")), eye, 1, (M,))
    _check(rep, "right counit", contract(F, "no", (eps, "c"), (pr, "ocn")), eye, 1, (M,))
    lhs = contract(F, "npoq", (pl, "pkn"), (pr, "oqk"))
    rhs = contract(F, "npoq", (pr, "kqn"), (pl, "pok"))
    _check(rep, "coaction compatibility", lhs, rhs, 1, (M,))
    return rep


# ---------------------------------------------------------------------------
# Sweedler iteration, derivations, coderivations


def iterate_comul(c, n):
    """Delta^n : C -> C^{(x)(n+1)} with Delta^n = (Delta (x) id^{n-1}) Delta^{n-1}."""
    if n < 0:
        raise ValueError("n must be non-negative")
    F = c.field
    out = Matrix.identity(F, c.dim)
    for k in range(1, n + 1):
        step = kron(c.comul, Matrix.identity(F, c.dim ** (k - 1)))
        out = step @ out
    return out


def derivation_operator(a):
    """Matrix of phi -> phi mu - mu (id (x) phi) - mu (phi (x) id) on End(A)."""
    F, d = a.field, a.dim
    mu = a.mul_tensor
    shape = (d, d)
    ops = [
        operator_matrix(F, "oxy", "ok", shape, [(mu, "kxy")]),
        operator_matrix(F, "oxy", "ky", shape, [(mu, "oxk")]),
        operator_matrix(F, "oxy", "kx", shape, [(mu, "oky")]),
    ]
    return ops[0] - ops[1] - ops[2]


def coderivation_operator(c):
    """Matrix of phi -> Delta phi - (id (x) phi) Delta - (phi (x) id) Delta."""
    F, d = c.field, c.dim
    de = c.comul_tensor
    shape = (d, d)
    ops = [
        operator_matrix(F, "pqa", "ka", shape, [(de, "pqk")]),
        operator_matrix(F, "pqa", "qk", shape, [(de, "pka")]),
        operator_matrix(F, "pqa", "pk", shape, [(de, "kqa")]),
    ]
    return ops[0] - ops[1] - ops[2]


def derivations(a):
    """Canonical basis of Der(A) inside End(A) (row-major matrix coordinates)."""
    validate_algebra(a).raise_if_failed()
    return kernel_basis(derivation_operator(a))


def coderivations(c):
    validate_coalgebra(c).raise_if_failed()
    return kernel_basis(coderivation_operator(c))


def dual_algebra(c):
    """The algebra dual to a coalgebra (transpose every structure map)."""
    return AlgebraData(c.field, c.dim, c.comul.T, c.counit.array[0], c.labels)


def dual_coalgebra(a):
    return CoalgebraData(a.field, a.dim, a.mul.T, Matrix(a.field, [list(a.unit)]), a.labels)


def dual_bialgebra(h):
    return BialgebraData(dual_algebra(h.coalgebra), dual_coalgebra(h.algebra))


def endomorphism(field, dim, vec):
    """Reshape End(A) coordinates into a dim x dim matrix."""
    return Matrix.from_array(field, np.asarray(vec, dtype=object).reshape(dim, dim))


def span_check(basis, dim):
    if not isinstance(basis, SubspaceBasis) or basis.ambient_dim != dim * dim:
        raise ShapeError("expected a subspace of End(A)")
