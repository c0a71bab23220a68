"""Truncated deformations, formal automorphisms and the obstruction calculus.

A deformation of order N is a list ``[l_0, ..., l_N]`` of 1-cochains (flat
F^1 vectors) with ``l_0`` the base action.  A formal automorphism is a list
``[phi_0 = id, phi_1, ..., phi_N]`` of endomorphisms of A (a x a matrices).
All power-series arithmetic is exact and truncated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .actions import ActionKind
from .complexes import (
    coalgebra_hochschild_complex,
    cohomology,
    hochschild_complex,
)
from .defcomplex import SplitCochain, cup
from .errors import (
    DegreeError,
    NotACocycle,
    NotInF0,
    NotValidated,
    ShapeError,
    TheoryMismatch,
)
from .linalg import Matrix, is_zero_vector, kron, solve, twist_matrix
from .structures import BicomoduleData, BimoduleData, Failure, ValidationReport


def _vec(field, v, n):
    out = field.array(list(np.asarray(v, dtype=object).reshape(-1))).reshape(-1)
    if out.shape[0] != n:
        raise ShapeError(f"expected {n} coordinates, got {out.shape[0]}")
    return out


def _first_nonzero(v):
    idx = np.flatnonzero(np.asarray(v, dtype=object) != 0)
    return int(idx[0]) if idx.size else None


# ---------------------------------------------------------------------------
# series


@dataclass(frozen=True, eq=False)
class DeformationSeries:
    theory: object
    coeffs: tuple  # flat F^1 vectors, coeffs[0] the base action
    validated: bool = False

    @classmethod
    def create(cls, theory, coeffs, validate=True):
        """Build a series; with ``validate`` the flag records whether it passes."""
        n1 = theory.one_cochain_dim
        vs = tuple(_vec(theory.field, c, n1) for c in coeffs)
        if not vs:
            raise ShapeError("a series needs at least its constant term")
        if np.any(vs[0] != theory.base_cochain().comp0):
            raise ShapeError("the constant term must be the base action")
        series = cls(theory, vs, False)
        if validate:
            return cls(theory, vs, validate_deformation(series).ok)
        return series

    @classmethod
    def trivial(cls, theory, order):
        zero = np.zeros(theory.one_cochain_dim, dtype=object)
        base = theory.base_cochain().comp0
        return cls.create(theory, [base] + [zero] * order)

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def kind(self):
        return self.theory.kind

    def coefficient(self, n):
        return SplitCochain.one(self.coeffs[n])

    def truncate(self, order):
        if order > self.order:
            raise DegreeError(f"cannot truncate an order-{self.order} series to order {order}")
        return DeformationSeries(self.theory, self.coeffs[: order + 1], self.validated)

    def is_trivial(self):
        return all(is_zero_vector(c) for c in self.coeffs[1:])

    def __eq__(self, other):
        if not isinstance(other, DeformationSeries):
            return NotImplemented
        return (
            self.theory is other.theory
            and self.order == other.order
            and all(not np.any(a != b) for a, b in zip(self.coeffs, other.coeffs))
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class FormalAutomorphism:
    field: object
    a_dim: int
    coeffs: tuple  # a x a Matrices, coeffs[0] the identity
    validated: bool = False

    @classmethod
    def create(cls, field, a_dim, coeffs, carrier=None):
        mats = []
        for c in coeffs:
            m = c if isinstance(c, Matrix) else Matrix(field, np.asarray(c, dtype=object).reshape(a_dim, a_dim))
            if m.shape != (a_dim, a_dim):
                raise ShapeError("automorphism coefficients must be square")
            mats.append(m)
        if not mats or mats[0] != Matrix.identity(field, a_dim):
            raise ShapeError("phi_0 must be the identity")
        phi = cls(field, a_dim, tuple(mats), False)
        if carrier is not None:
            return cls(field, a_dim, tuple(mats), validate_automorphism(phi, carrier).ok)
        return phi

    @classmethod
    def identity(cls, field, a_dim, order=0):
        zero = Matrix.zeros(field, a_dim, a_dim)
        return cls(field, a_dim, (Matrix.identity(field, a_dim),) + (zero,) * order, True)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def truncate(self, order):
        return FormalAutomorphism(self.field, self.a_dim, self.coeffs[: order + 1], self.validated)

    def padded(self, order):
        zero = Matrix.zeros(self.field, self.a_dim, self.a_dim)
        extra = max(0, order - self.order)
        return FormalAutomorphism(self.field, self.a_dim, self.coeffs + (zero,) * extra, self.validated)

    def is_identity(self):
        return all(c.is_zero() for c in self.coeffs[1:])

    def __eq__(self, other):
        if not isinstance(other, FormalAutomorphism):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None


def compose_automorphisms(phi, psi):
    """The truncated product phi(t) psi(t)."""
    order = min(phi.order, psi.order)
    out = []
    for n in range(order + 1):
        acc = Matrix.zeros(phi.field, phi.a_dim, phi.a_dim)
        for i in range(n + 1):
            acc = acc + phi.coeffs[i] @ psi.coeffs[n - i]
        out.append(acc)
    return FormalAutomorphism(phi.field, phi.a_dim, tuple(out), phi.validated and psi.validated)


def invert_automorphism(phi):
    """psi_0 = id, psi_n = -sum_{k=1}^n phi_k psi_{n-k}; checked against phi."""
    F, a = phi.field, phi.a_dim
    psi = [Matrix.identity(F, a)]
    for n in range(1, phi.order + 1):
        acc = Matrix.zeros(F, a, a)
        for k in range(1, n + 1):
            acc = acc + phi.coeffs[k] @ psi[n - k]
        psi.append(-acc)
    inv = FormalAutomorphism(F, a, tuple(psi), phi.validated)
    if not compose_automorphisms(phi, inv).is_identity():  # pragma: no cover
        raise AssertionError("inverse series failed verification")
    return inv


# ---------------------------------------------------------------------------
# the deformation equations


def _maps(series):
    """The coefficients as linear maps: lambda_n is a x (h a), rho_n is (h a) x a."""
    t = series.theory
    F, a, h = t.field, t.a_dim, t.h_dim
    shape = (a, h * a) if t.kind.is_module else (h * a, a)
    return [Matrix(F, c.reshape(shape).copy(), trusted=True) for c in series.coeffs]


def direct_residuals(series, n):
    """Residuals of the two coefficient-n equations, computed from the maps.

    Each residual is ``sum_{i+j=n} (quadratic term) - (term linear in the
    n-th coefficient)`` flattened row-major; this is an independent route to
    the same numbers as ``d^1 l_n + sum l_i cup l_{n-i}``.
    """
    t = series.theory
    s = t.structure
    F, a, h = t.field, t.a_dim, t.h_dim
    L = _maps(series)
    Ia, Ih = Matrix.identity(F, a), Matrix.identity(F, h)
    mu_h, de_h = s.h.algebra.mul, s.h.coalgebra.comul
    kind = t.kind
    if kind.is_module:
        eq1 = -(L[n] @ kron(mu_h, Ia))
        for i in range(n + 1):
            eq1 = eq1 + L[i] @ kron(Ih, L[n - i])
        shuffle = kron(kron(Ih, twist_matrix(F, h, a)), Ia)  # H H A A -> H A H A
        if kind is ActionKind.MA:
            mu_a = s.carrier.mul
            eq2 = -(L[n] @ kron(Ih, mu_a))
            spread = shuffle @ kron(de_h, Matrix.identity(F, a * a))
            for i in range(n + 1):
                eq2 = eq2 + mu_a @ kron(L[i], L[n - i]) @ spread
        else:
            de_a = s.carrier.comul
            eq2 = -(de_a @ L[n])
            spread = shuffle @ kron(de_h, de_a)
            for i in range(n + 1):
                eq2 = eq2 + kron(L[i], L[n - i]) @ spread
    else:
        eq1 = -(kron(de_h, Ia) @ L[n])
        for i in range(n + 1):
            eq1 = eq1 + kron(Ih, L[i]) @ L[n - i]
        shuffle = kron(kron(Ih, twist_matrix(F, a, h)), Ia)  # H A H A -> H H A A
        if kind is ActionKind.CC:
            de_a = s.carrier.comul
            eq2 = -(kron(Ih, de_a) @ L[n])
            gather = kron(mu_h, Matrix.identity(F, a * a)) @ shuffle
            for i in range(n + 1):
                eq2 = eq2 + gather @ kron(L[i], L[n - i]) @ de_a
        else:
            mu_a = s.carrier.mul
            eq2 = -(L[n] @ mu_a)
            gather = kron(mu_h, mu_a) @ shuffle
            for i in range(n + 1):
                eq2 = eq2 + gather @ kron(L[i], L[n - i])
    return eq1.array.reshape(-1), eq2.array.reshape(-1)


def quadratic_residual(series, n):
    """d^1 l_n + sum_{i=1}^{n-1} l_i cup l_{n-i} as a split 2-cochain."""
    t = series.theory
    total = t.differential(series.coefficient(n))
    for i in range(1, n):
        total = total.plus(cup(t, series.coefficient(i), series.coefficient(n - i)), t.field)
    return total


_EQ_NAMES = {
    ActionKind.MA: ("L(xy) = L(x)L(y)", "L(x)(ab) = sum L(x1)(a) L(x2)(b)"),
    ActionKind.MC: ("L(xy) = L(x)L(y)", "Delta L(x)(a) = sum L(x1)(a1) (x) L(x2)(a2)"),
    ActionKind.CC: ("(id (x) R) R = (Delta (x) id) R", "(id (x) Delta) R = (mu (x) id)(R (x) R) Delta"),
    ActionKind.CA: ("(id (x) R) R = (Delta (x) id) R", "R mu = (mu (x) mu)(R (x) R)"),
}


def validate_deformation(series):
    """Check the coefficient equations for 1 <= n <= order both ways."""
    t = series.theory
    rep = ValidationReport(f"{t.kind.value} deformation of order {series.order}")
    names = _EQ_NAMES[t.kind]
    for n in range(1, series.order + 1):
        r1, r2 = direct_residuals(series, n)
        q = quadratic_residual(series, n)
        if np.any(q.comp0 != r1) or np.any(q.comp1 != r2):  # pragma: no cover
            raise AssertionError(f"the two forms of the order-{n} equation disagree")
        for name, r in zip(names, (r1, r2)):
            axiom = f"order {n}: {name}"
            rep.checked.append(axiom)
            k = _first_nonzero(r)
            if k is not None:
                count = int(np.count_nonzero(np.asarray(r, dtype=object) != 0))
                rep.failures.append(Failure(axiom, (f"entry {k}",), count, f"residual {r[k]}"))
    return rep


def _require_validated(series):
    if not series.validated:
        raise NotValidated("the series has not passed validate_deformation")


def infinitesimal(series):
    """The first nonzero coefficient (or l_1 = 0); always a 1-cocycle."""
    _require_validated(series)
    if series.order < 1:
        raise DegreeError("a series of order 0 has no infinitesimal")
    t = series.theory
    pick = 1
    for k in range(1, series.order + 1):
        if not is_zero_vector(series.coeffs[k]):
            pick = k
            break
    c = series.coefficient(pick)
    if not t.differential(c).is_zero():  # pragma: no cover
        raise AssertionError("the leading coefficient of a deformation is not a cocycle")
    return c


# ---------------------------------------------------------------------------
# obstructions and extension


@dataclass(frozen=True, eq=False)
class ObstructionClass:
    cochain: SplitCochain
    order_from: int
    is_coboundary: bool
    h2_class: Optional[np.ndarray]  # class of -Ob in H^2; None when it is exact


def obstruction(series):
    """Ob = sum_{i=1}^N l_i cup l_{N+1-i}, checked to be a 2-cocycle."""
    _require_validated(series)
    N = series.order
    if N < 1:
        raise DegreeError("obstructions start at order 1")
    t = series.theory
    ob = None
    for i in range(1, N + 1):
        term = cup(t, series.coefficient(i), series.coefficient(N + 1 - i))
        ob = term if ob is None else ob.plus(term, t.field)
    if not t.differential(ob).is_zero():  # pragma: no cover
        raise AssertionError("the obstruction is not a 2-cocycle")
    neg = -ob.vector
    h2 = cohomology(t.complex, 2)
    exact = h2.is_coboundary(neg)
    return ObstructionClass(ob, N, exact, None if exact else h2.class_of(neg))


@dataclass(frozen=True, eq=False)
class ExtensionResult:
    ok: bool
    series: Optional[DeformationSeries]
    obstruction: ObstructionClass
    solution_space_dim: int = 0  # dim ker d^1 when ok


def extend_order(series):
    """Solve d^1 l_{N+1} = -Ob; canonical solution, or the class of -Ob."""
    ob = obstruction(series)
    t = series.theory
    res = solve(t.complex.d(1), -ob.cochain.vector)
    if res is None:
        return ExtensionResult(False, None, ob)
    x, kernel = res
    ext = DeformationSeries.create(t, list(series.coeffs) + [x])
    if not ext.validated:  # pragma: no cover
        raise AssertionError("extension failed to re-validate")
    return ExtensionResult(True, ext, ob, kernel.dim)


@dataclass(frozen=True, eq=False)
class IntegrationResult:
    ok: bool
    series: DeformationSeries  # the longest series reached
    obstruction: Optional[ObstructionClass] = None

    @property
    def reached_order(self):
        return self.series.order


def integrate(theory, l1, n_max):
    """Extend l_1 order by order with canonical choices up to n_max."""
    v = l1.comp0 if isinstance(l1, SplitCochain) else l1
    v = _vec(theory.field, v, theory.one_cochain_dim)
    if not theory.differential(SplitCochain.one(v)).is_zero():
        raise NotACocycle("l_1 is not a 1-cocycle")
    series = DeformationSeries.create(theory, [theory.base_cochain().comp0, v])
    while series.order < n_max:
        step = extend_order(series)
        if not step.ok:
            return IntegrationResult(False, series, step.obstruction)
        series = step.series
    return IntegrationResult(True, series)


# ---------------------------------------------------------------------------
# automorphisms


def _carrier_is_algebra(carrier):
    return hasattr(carrier, "mul")


def validate_automorphism(phi, carrier):
    """(Co)multiplicativity of phi_t, coefficient by coefficient."""
    F, a = phi.field, phi.a_dim
    if carrier.dim != a:
        raise ShapeError("automorphism and carrier disagree on dim A")
    rep = ValidationReport("formal automorphism")
    if phi.coeffs[0] != Matrix.identity(F, a):
        rep.failures.append(Failure("phi_0 = id", ("phi_0",)))
    P = phi.coeffs
    algebra = _carrier_is_algebra(carrier)
    for n in range(1, phi.order + 1):
        if algebra:
            axiom = f"order {n}: phi(ab) = phi(a)phi(b)"
            r = -(P[n] @ carrier.mul)
            for i in range(n + 1):
                r = r + carrier.mul @ kron(P[i], P[n - i])
        else:
            axiom = f"order {n}: Delta phi = (phi (x) phi) Delta"
            r = -(carrier.comul @ P[n])
            for i in range(n + 1):
                r = r + kron(P[i], P[n - i]) @ carrier.comul
        rep.checked.append(axiom)
        if not r.is_zero():
            i, j, v = next(r.nonzero_entries())
            rep.failures.append(Failure(axiom, (f"entry ({i}, {j})",), detail=f"residual {v}"))
    return rep


def carrier_complex(theory):
    """C_h(A, A) for algebra carriers, C_c(A, A) for coalgebra carriers."""
    if "carrier" not in theory.cache:
        A = theory.structure.carrier
        if theory.kind.algebra_carrier:
            cx = hochschild_complex(A, BimoduleData.regular(A), 3)
        else:
            cx = coalgebra_hochschild_complex(A, BicomoduleData.regular(A), 3)
        theory.cache["carrier"] = cx
    return theory.cache["carrier"]


def _quadratic_part(carrier, coeffs, n):
    """sum_{i+j=n, i,j>=1} of mu(phi_i (x) phi_j) or (phi_i (x) phi_j) Delta."""
    a = carrier.dim
    F = carrier.field
    if _carrier_is_algebra(carrier):
        acc = Matrix.zeros(F, a, a * a)
        for i in range(1, n):
            acc = acc + carrier.mul @ kron(coeffs[i], coeffs[n - i])
    else:
        acc = Matrix.zeros(F, a * a, a)
        for i in range(1, n):
            acc = acc + kron(coeffs[i], coeffs[n - i]) @ carrier.comul
    return acc.array.reshape(-1)


def automorphism_step(theory, coeffs):
    """Linear system ``(M, r)`` for the next coefficient phi_n of an automorphism.

    M is the degree-1 differential of the carrier's own Hochschild complex
    and r = -(quadratic part); phi_n must satisfy M phi_n = r.
    """
    n = len(coeffs)
    cx = carrier_complex(theory)
    return cx.d(1), -_quadratic_part(theory.structure.carrier, coeffs, n)


def conjugate(series, phi):
    """Phi^{-1} L Phi (module kinds) or (id (x) Phi^{-1}) R Phi (comodule kinds)."""
    _require_validated(series)
    t = series.theory
    s = t.structure
    if phi.a_dim != t.a_dim or phi.field != t.field:
        raise ShapeError("automorphism does not match the theory")
    if not phi.validated:
        if not validate_automorphism(phi, s.carrier).ok:
            raise NotValidated("the automorphism is not (co)multiplicative")
    order = series.order
    P = phi.padded(order).coeffs[: order + 1]
    full = FormalAutomorphism(phi.field, phi.a_dim, tuple(P), True)
    Q = invert_automorphism(full).coeffs
    L = _maps(series)
    F, h = t.field, t.h_dim
    Ih = Matrix.identity(F, h)
    out = []
    for n in range(order + 1):
        acc = Matrix.zeros(F, *L[0].shape)
        for i in range(n + 1):
            for j in range(n + 1 - i):
                k = n - i - j
                if t.kind.is_module:
                    acc = acc + Q[i] @ L[j] @ kron(Ih, P[k])
                else:
                    acc = acc + kron(Ih, Q[i]) @ L[j] @ P[k]
        out.append(acc.array.reshape(-1))
    bar = DeformationSeries.create(t, out)
    if not bar.validated:  # pragma: no cover
        raise AssertionError("conjugate failed to re-validate")
    if order >= 1:
        shift = F.reduce(out[1] - series.coeffs[1])
        if np.any(shift != t.d0_of_endomorphism(P[1])):  # pragma: no cover
            raise AssertionError("conjugation did not shift l_1 by d^0 phi_1")
    return bar


@dataclass(frozen=True, eq=False)
class CompletionResult:
    ok: bool
    automorphism: Optional[FormalAutomorphism]
    failed_order: Optional[int] = None
    cocycle: Optional[np.ndarray] = None  # the non-exact Hochschild 2-cocycle
    h2_class: Optional[np.ndarray] = None


def _as_end_vector(theory, phi):
    a = theory.a_dim
    if isinstance(phi, Matrix):
        phi = phi.array
    return _vec(theory.field, phi, a * a)


def complete_automorphism(theory, phi, N, order_max):
    """Phi_t = id - phi t^N + O(t^{N+1}), solved order by order up to order_max."""
    if N < 1:
        raise DegreeError("N must be at least 1")
    F, a = theory.field, theory.a_dim
    v = _as_end_vector(theory, phi)
    if not theory.f0_basis.contains(v):
        raise NotInF0("phi is not a derivation" if theory.kind.algebra_carrier else "phi is not a coderivation")
    zero = Matrix.zeros(F, a, a)
    coeffs = [Matrix.identity(F, a)] + [zero] * (N - 1)
    coeffs.append(Matrix(F, (-v).reshape(a, a), trusted=True) if N <= order_max else zero)
    coeffs = coeffs[: order_max + 1]
    for n in range(len(coeffs), order_max + 1):
        M, r = automorphism_step(theory, coeffs)
        res = solve(M, r)
        if res is None:
            h2 = cohomology(carrier_complex(theory), 2)
            return CompletionResult(False, None, n, r, h2.class_of(r))
        coeffs.append(Matrix(F, res[0].reshape(a, a), trusted=True))
    auto = FormalAutomorphism.create(F, a, coeffs, theory.structure.carrier)
    if not auto.validated:  # pragma: no cover
        raise AssertionError("completed automorphism failed validation")
    return CompletionResult(True, auto)


@dataclass(frozen=True, eq=False)
class TrivializationResult:
    ok: bool
    automorphism: FormalAutomorphism  # composite applied so far
    series: DeformationSeries  # conjugated series
    blocked_order: Optional[int] = None
    reason: str = ""
    h1_class: Optional[np.ndarray] = None
    h2_class: Optional[np.ndarray] = None


def trivialize(series, order_max=None):
    """Conjugate away the coefficients one order at a time."""
    _require_validated(series)
    t = series.theory
    order = series.order if order_max is None else min(order_max, series.order)
    current = series.truncate(order)
    total = FormalAutomorphism.identity(t.field, t.a_dim, order)
    d0 = t.complex.d(0)
    for N in range(1, order + 1):
        lam = current.coeffs[N]
        if is_zero_vector(lam):
            continue
        res = solve(d0, lam)
        if res is None:
            h1 = cohomology(t.complex, 1)
            return TrivializationResult(
                False, total, current, N, "coefficient is not a d^0-coboundary", h1_class=h1.class_of(lam)
            )
        phi = t.f0_basis.combine(res[0]) if t.f0_basis.dim else np.zeros(t.a_dim**2, dtype=object)
        comp = complete_automorphism(t, phi, N, order)
        if not comp.ok:
            return TrivializationResult(
                False,
                total,
                current,
                N,
                f"Hochschild obstruction at order {comp.failed_order}",
                h2_class=comp.h2_class,
            )
        current = conjugate(current, comp.automorphism)
        if not is_zero_vector(current.coeffs[N]):  # pragma: no cover
            raise AssertionError("conjugation did not kill the leading coefficient")
        total = compose_automorphisms(total, comp.automorphism)
    return TrivializationResult(True, total, current)


@dataclass(frozen=True, eq=False)
class RigidityReport:
    kind: ActionKind
    h1_dim: int
    h2_carrier_dim: int
    carrier_group: str  # "H2_h(A,A)" or "H2_c(A,A)"

    @property
    def verdict(self):
        return "CERTIFIED-RIGID" if self.h1_dim == 0 and self.h2_carrier_dim == 0 else "INCONCLUSIVE"

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "H1_F": self.h1_dim,
            self.carrier_group: self.h2_carrier_dim,
            "verdict": self.verdict,
            "note": "the criterion is sufficient only; INCONCLUSIVE does not mean non-rigid",
        }


def rigidity_certificate(theory):
    h1 = cohomology(theory.complex, 1).dim_H
    h2 = cohomology(carrier_complex(theory), 2).dim_H
    group = "H2_h(A,A)" if theory.kind.algebra_carrier else "H2_c(A,A)"
    return RigidityReport(theory.kind, h1, h2, group)


@dataclass(frozen=True, eq=False)
class EquivalenceResult:
    automorphism: Optional[FormalAutomorphism]
    failed_order: Optional[int] = None
    note: str = "greedy search: a negative answer does not prove inequivalence"

    @property
    def found(self):
        return self.automorphism is not None


def equivalence_greedy(d1, d2, order=None):
    """Look for Phi with conjugate(d1, Phi) = d2, one coefficient at a time."""
    if d1.theory is not d2.theory:
        raise TheoryMismatch("the two series belong to different theories")
    _require_validated(d1)
    _require_validated(d2)
    t = d1.theory
    N = min(d1.order, d2.order) if order is None else order
    if N > min(d1.order, d2.order):
        raise DegreeError("order exceeds the series lengths")
    F, a = t.field, t.a_dim
    if np.any(d1.coeffs[0] != d2.coeffs[0]):  # pragma: no cover
        raise TheoryMismatch("constant terms differ")
    zero = Matrix.zeros(F, a, a)
    coeffs = [Matrix.identity(F, a)]
    base = d1.truncate(N)
    for k in range(1, N + 1):
        M, r = automorphism_step(t, coeffs)
        trial = FormalAutomorphism(F, a, tuple(coeffs) + (zero,), True)
        c_k = conjugate(base.truncate(k), trial).coeffs[k]
        rhs = np.concatenate([r, d2.coeffs[k] - c_k])
        system = Matrix(F, np.vstack([M.array, t.d0_end.array]), trusted=True)
        res = solve(system, rhs)
        if res is None:
            return EquivalenceResult(None, k)
        coeffs.append(Matrix(F, res[0].reshape(a, a), trusted=True))
    auto = FormalAutomorphism.create(F, a, coeffs, t.structure.carrier)
    if not auto.validated or conjugate(base, auto) != d2.truncate(N):  # pragma: no cover
        raise AssertionError("greedy equivalence witness failed verification")
    return EquivalenceResult(auto)
