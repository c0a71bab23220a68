"""The four ways a bialgebra H can act on A, and their validators.

A module structure is stored as ``lam``, the a x (h*a) matrix of
H (x) A -> A; a comodule structure as ``rho``, the (h*a) x a matrix of
A -> H (x) A.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStructure, ShapeError
from .linalg import Matrix, contract, vector
from .structures import (
    AlgebraData,
    BialgebraData,
    CoalgebraData,
    ValidationReport,
    _check,
    dual_bialgebra,
    dual_algebra,
    dual_coalgebra,
    validate_algebra,
    validate_bialgebra,
    validate_coalgebra,
)


class ActionKind(enum.Enum):
    MA = "MA"  # module-algebra
    MC = "MC"  # module-coalgebra
    CA = "CA"  # comodule-algebra
    CC = "CC"  # comodule-coalgebra

    @property
    def is_module(self):
        return self in (ActionKind.MA, ActionKind.MC)

    @property
    def algebra_carrier(self):
        return self in (ActionKind.MA, ActionKind.CA)


@dataclass(frozen=True, eq=False)
class ModuleAction:
    h: BialgebraData
    a_dim: int
    lam: Matrix

    def __post_init__(self):
        if self.lam.shape != (self.a_dim, self.h.dim * self.a_dim):
            raise ShapeError(f"lambda must be {self.a_dim}x{self.h.dim * self.a_dim}")

    @classmethod
    def from_triples(cls, h, a_dim, triples):
        """``triples`` are ``(h, a_in, a_out, c)``: lambda(x_h)(a_in) contains c a_out."""
        entries = [(o, x * a_dim + i, c) for x, i, o, c in triples]
        return cls(h, a_dim, Matrix.from_sparse(h.field, a_dim, h.dim * a_dim, entries))

    @property
    def tensor(self):  # (a_out, h, a_in)
        return self.lam.array.reshape(self.a_dim, self.h.dim, self.a_dim)

    def of(self, x):
        """lambda(e_x) as an a x a matrix."""
        a = self.a_dim
        return Matrix.from_array(self.h.field, self.lam.array[:, x * a:(x + 1) * a])


@dataclass(frozen=True, eq=False)
class CoactionStructure:
    h: BialgebraData
    a_dim: int
    rho: Matrix

    def __post_init__(self):
        if self.rho.shape != (self.h.dim * self.a_dim, self.a_dim):
            raise ShapeError(f"rho must be {self.h.dim * self.a_dim}x{self.a_dim}")

    @classmethod
    def from_triples(cls, h, a_dim, triples):
        """``triples`` are ``(a, h, a_out, c)``: rho(e_a) contains c x_h (x) e_out."""
        entries = [(x * a_dim + o, i, c) for i, x, o, c in triples]
        return cls(h, a_dim, Matrix.from_sparse(h.field, h.dim * a_dim, a_dim, entries))

    @property
    def tensor(self):  # (h, a_out, a_in)
        return self.rho.array.reshape(self.h.dim, self.a_dim, self.a_dim)


@dataclass(frozen=True, eq=False)
class ActionStructure:
    kind: ActionKind
    carrier: object  # AlgebraData or CoalgebraData
    action: object  # ModuleAction or CoactionStructure
    lax_unit: bool = False

    def __post_init__(self):
        want_carrier = AlgebraData if self.kind.algebra_carrier else CoalgebraData
        want_action = ModuleAction if self.kind.is_module else CoactionStructure
        if not isinstance(self.carrier, want_carrier):
            raise ShapeError(f"{self.kind.value} needs a {want_carrier.__name__} carrier")
        if not isinstance(self.action, want_action):
            raise ShapeError(f"{self.kind.value} needs a {want_action.__name__}")
        if self.action.a_dim != self.carrier.dim:
            raise ShapeError("action and carrier disagree on dim A")
        if self.action.h.field != self.carrier.field:
            raise ShapeError("H and A live over different fields")

    @property
    def h(self):
        return self.action.h

    @property
    def field(self):
        return self.carrier.field

    @property
    def a_dim(self):
        return self.carrier.dim

    @property
    def h_dim(self):
        return self.h.dim

    def base_map(self):
        """lambda or rho as a matrix."""
        return self.action.lam if self.kind.is_module else self.action.rho


# ---------------------------------------------------------------------------
# validators


def _pre(s, carrier_ok):
    hrep = validate_bialgebra(s.h)
    if not hrep.ok:
        raise InvalidStructure("H is not a bialgebra", hrep)
    crep = carrier_ok(s.carrier)
    if not crep.ok:
        raise InvalidStructure("carrier is invalid", crep)


def _module_axioms(rep, s):
    F = s.field
    H, A = s.h.labels, s.carrier.labels
    lam = s.action.tensor
    mu_h = s.h.algebra.mul_tensor
    lhs = contract(F, "xyio", (mu_h, "zxy"), (lam, "ozi"))
    rhs = contract(F, "xyio", (lam, "kyi"), (lam, "oxk"))
    _check(rep, "module: lambda(xy) = lambda(x)lambda(y)", lhs, rhs, 3, (H, H, A))
    unit = s.h.algebra.unit
    eye = np.eye(s.a_dim, dtype=int).astype(object)
    lhs = contract(F, "io", (unit, "u"), (lam, "oui"))
    _check(rep, "module: lambda(1) = id", lhs, eye, 1, (A,))


def _comodule_axioms(rep, s):
    F = s.field
    A = s.carrier.labels
    rho = s.action.tensor
    de_h = s.h.coalgebra.comul_tensor
    eps = s.h.coalgebra.counit_vector
    lhs = contract(F, "apqo", (rho, "koa"), (de_h, "pqk"))
    rhs = contract(F, "apqo", (rho, "pka"), (rho, "qok"))
    _check(rep, "comodule: coassociativity", lhs, rhs, 1, (A,))
    eye = np.eye(s.a_dim, dtype=int).astype(object)
    lhs = contract(F, "ao", (eps, "k"), (rho, "koa"))
    _check(rep, "comodule: counit", lhs, eye, 1, (A,))


def validate_module_algebra(s):
    if s.kind is not ActionKind.MA:
        raise ShapeError("expected a module-algebra structure")
    _pre(s, validate_algebra)
    F = s.field
    H, A = s.h.labels, s.carrier.labels
    rep = ValidationReport("module-algebra")
    _module_axioms(rep, s)
    lam = s.action.tensor
    mu_a = s.carrier.mul_tensor
    de_h = s.h.coalgebra.comul_tensor
    lhs = contract(F, "xabo", (mu_a, "kab"), (lam, "oxk"))
    rhs = contract(
        F, "xabo", (de_h, "pqx"), (lam, "spa"), (lam, "tqb"), (mu_a, "ost")
    )
    _check(rep, "lambda(x)(ab) = sum lambda(x1)(a) lambda(x2)(b)", lhs, rhs, 3, (H, A, A))
    return rep


def validate_module_coalgebra(s):
    if s.kind is not ActionKind.MC:
        raise ShapeError("expected a module-coalgebra structure")
    _pre(s, validate_coalgebra)
    F = s.field
    H, A = s.h.labels, s.carrier.labels
    rep = ValidationReport("module-coalgebra")
    _module_axioms(rep, s)
    lam = s.action.tensor
    de_a = s.carrier.comul_tensor
    de_h = s.h.coalgebra.comul_tensor
    lhs = contract(F, "xapq", (lam, "kxa"), (de_a, "pqk"))
    rhs = contract(
        F, "xapq", (de_h, "ghx"), (de_a, "cda"), (lam, "pgc"), (lam, "qhd")
    )
    _check(rep, "Delta(lambda(x)(a)) = sum lambda(x1)(a1) (x) lambda(x2)(a2)", lhs, rhs, 2, (H, A))
    return rep


def validate_comodule_algebra(s):
    if s.kind is not ActionKind.CA:
        raise ShapeError("expected a comodule-algebra structure")
    _pre(s, validate_algebra)
    F = s.field
    A = s.carrier.labels
    rep = ValidationReport("comodule-algebra")
    _comodule_axioms(rep, s)
    rho = s.action.tensor
    mu_a = s.carrier.mul_tensor
    mu_h = s.h.algebra.mul_tensor
    lhs = contract(F, "abho", (mu_a, "kab"), (rho, "hok"))
    rhs = contract(
        F, "abho", (rho, "gpa"), (rho, "jqb"), (mu_h, "hgj"), (mu_a, "opq")
    )
    _check(rep, "rho mu = (mu (x) mu)(id (x) tau (x) id) rho (x) rho", lhs, rhs, 2, (A, A))
    rep.checked.append("rho(1) = 1 (x) 1" + (" [lax: skipped]" if s.lax_unit else ""))
    if not s.lax_unit:
        lhs = s.action.rho @ s.carrier.unit
        rhs = np.kron(s.h.algebra.unit, s.carrier.unit)
        if np.any(lhs != rhs):
            rep.failures.append(_unit_failure(rep))
    return rep


def _unit_failure(rep):
    from .structures import Failure

    rep.checked.pop()
    rep.checked.append("rho(1) = 1 (x) 1")
    return Failure("rho(1) = 1 (x) 1", ("1",))


def validate_comodule_coalgebra(s):
    if s.kind is not ActionKind.CC:
        raise ShapeError("expected a comodule-coalgebra structure")
    _pre(s, validate_coalgebra)
    F = s.field
    A = s.carrier.labels
    rep = ValidationReport("comodule-coalgebra")
    _comodule_axioms(rep, s)
    rho = s.action.tensor
    de_a = s.carrier.comul_tensor
    mu_h = s.h.algebra.mul_tensor
    lhs = contract(F, "ahpq", (rho, "hka"), (de_a, "pqk"))
    rhs = contract(
        F, "ahpq", (de_a, "cda"), (rho, "gpc"), (rho, "jqd"), (mu_h, "hgj")
    )
    _check(rep, "(id (x) Delta) rho = (mu (x) id)(id (x) tau (x) id) rho(x)rho Delta", lhs, rhs, 1, (A,))
    return rep


VALIDATORS = {
    ActionKind.MA: validate_module_algebra,
    ActionKind.MC: validate_module_coalgebra,
    ActionKind.CA: validate_comodule_algebra,
    ActionKind.CC: validate_comodule_coalgebra,
}


def validate_action(s):
    return VALIDATORS[s.kind](s)


def apply_action(s, x, a):
    """lambda(x)(a) for coordinate vectors x in H and a in A."""
    if not s.kind.is_module:
        raise ShapeError("apply_action needs a module structure")
    F = s.field
    x = vector(F, x)
    a = vector(F, a)
    if x.shape != (s.h_dim,) or a.shape != (s.a_dim,):
        raise ShapeError("vector lengths do not match dim H / dim A")
    return s.action.lam @ F.reduce(np.kron(x, a))


def apply_coaction(s, a):
    """rho(a) as a coordinate vector in H (x) A."""
    if s.kind.is_module:
        raise ShapeError("apply_coaction needs a comodule structure")
    a = vector(s.field, a)
    if a.shape != (s.a_dim,):
        raise ShapeError("vector length does not match dim A")
    return s.action.rho @ a


def dual_structure(s):
    """Transpose every structure map: MA <-> CC and MC <-> CA over the dual bialgebra."""
    hd = dual_bialgebra(s.h)
    if s.kind.algebra_carrier:
        carrier = dual_coalgebra(s.carrier)
    else:
        carrier = dual_algebra(s.carrier)
    if s.kind.is_module:
        action = CoactionStructure(hd, s.a_dim, s.action.lam.T)
    else:
        action = ModuleAction(hd, s.a_dim, s.action.rho.T)
    kind = {
        ActionKind.MA: ActionKind.CC,
        ActionKind.CC: ActionKind.MA,
        ActionKind.MC: ActionKind.CA,
        ActionKind.CA: ActionKind.MC,
    }[s.kind]
    return ActionStructure(kind, carrier, action, s.lax_unit)
