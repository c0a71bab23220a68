"""The deformation complexes F(A) of the four kinds of H-structure on A.

Every cochain is stored as the row-major flattening of the matrix of a
linear map (rows index the target basis, columns the source), so the base
action itself is a 1-cochain with no reshuffling:

====  ================================  ===============================
kind  F^n_0 tensor axes                 F^n_1 tensor axes
====  ================================  ===============================
MA    (o, h_1..h_n, i)  H^n (x) A -> A   (o, h, a_1..a_n)  H (x) A^n -> A
MC    (o, h_1..h_n, i)                  (a_1..a_n, h, i)  H (x) A -> A^n
CC    (h_1..h_n, o, i)  A -> H^n (x) A   (h, a_1..a_n, i)  A -> H (x) A^n
CA    (h_1..h_n, o, i)                  (h, o, a_1..a_n)  A^n -> H (x) A
====  ================================  ===============================

In degree 1 the two layouts agree, which is how F^1_0 = F^1_1 = F^1 is
realized.  For n >= 2 a cochain vector is the F^n_0 part followed by the
F^n_1 part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from .actions import ActionKind, validate_action
from .complexes import (
    CochainComplex,
    alternating_operator,
    check_dims,
    cohomology,
    _labels,
)
from .errors import DegreeError, InvalidStructure, ShapeError
from .linalg import Matrix, contract, operator_matrix, vector
from .structures import (
    BimoduleData,
    coderivations,
    derivations,
)


def endA_bimodule(action):
    """End(A) as an H-bimodule: x.f.y = lambda(x) f lambda(y).

    End(A) is flattened row-major, so f has coordinate ``f[o, i]`` at
    ``o*dim A + i``.
    """
    F = action.h.field
    a, h = action.a_dim, action.h.dim
    lam = action.tensor
    eye = np.eye(a, dtype=int).astype(object)
    left = contract(F, ("o", "i", "x", "k", "j"), (lam, "oxk"), (eye, "ij"))
    right = contract(F, ("o", "i", "p", "k", "y"), (eye, "op"), (lam, "kyi"))
    m = a * a
    return BimoduleData(
        action.h.algebra,
        m,
        Matrix(F, left.reshape(m, h * m), trusted=True),
        Matrix(F, right.reshape(m, m * h), trusted=True),
    )


# ---------------------------------------------------------------------------
# per-kind operators


class _Ops:
    """Tensor shapes, differentials and cups of one kind of theory."""

    def __init__(self, s):
        self.s = s
        self.F = s.field
        self.a = s.a_dim
        self.h = s.h_dim
        self.mu_h = s.h.algebra.mul_tensor
        self.de_h = s.h.coalgebra.comul_tensor
        self.base = s.base_map().array.reshape(self.shape(1, 0))

    def shape(self, n, comp):
        raise NotImplementedError

    def dim(self, n, comp):
        return prod(self.shape(n, comp))

    def differential(self, n, comp):
        terms = self.terms(n, comp)
        out = self.out_labels(n + 1, comp)
        return alternating_operator(
            self.F, out, self.shape(n + 1, comp), self.shape(n, comp), terms
        )

    def faces(self, n, comp):
        """Unsigned face maps; the differential is their alternating sum."""
        out = self.out_labels(n + 1, comp)
        phi_shape = self.shape(n, comp)
        return [
            operator_matrix(self.F, out, labels, phi_shape, ops)
            for _, labels, ops in self.terms(n, comp)
        ]


class _ModuleOps(_Ops):
    def __init__(self, s):
        super().__init__(s)
        self.lam = self.base  # (o, h, i)

    def shape(self, n, comp):
        a, h = self.a, self.h
        if comp == 0:
            return (a,) + (h,) * n + (a,)
        return self.shape1(n)

    def out_labels(self, n, comp):
        if comp == 0:
            return ("o",) + _labels("y", n) + ("i",)
        return self.out1(n)

    def d0_terms(self):
        lam = self.lam
        return ("o", "x", "i"), [
            (1, ("k", "i"), [(lam, ("o", "x", "k"))]),
            (-1, ("o", "k"), [(lam, ("k", "x", "i"))]),
        ]

    def terms(self, n, comp):
        if comp == 1:
            return self.terms1(n)
        lam, mu = self.lam, self.mu_h
        y = _labels("y", n + 1)
        terms = [(1, ("k",) + y[1:] + ("i",), [(lam, ("o", y[0], "k"))])]
        for j in range(1, n + 1):
            labels = ("o",) + y[: j - 1] + ("z",) + y[j + 1:] + ("i",)
            terms.append(((-1) ** j, labels, [(mu, ("z", y[j - 1], y[j]))]))
        terms.append(((-1) ** (n + 1), ("o",) + y[:n] + ("k",), [(lam, ("k", y[n], "i"))]))
        return terms

    def cup(self, f, g, m, n, comp):
        if comp == 0:
            x, y = _labels("x", m), _labels("y", n)
            return contract(
                self.F,
                ("o",) + x + y + ("i",),
                (f, ("o",) + x + ("k",)),
                (g, ("k",) + y + ("i",)),
            )
        return self.cup1(f, g, m, n)


class _MAOps(_ModuleOps):
    def __init__(self, s):
        super().__init__(s)
        self.mu_a = s.carrier.mul_tensor

    def shape1(self, n):
        return (self.a, self.h) + (self.a,) * n

    def out1(self, n):
        return ("o", "x") + _labels("b", n)

    def terms1(self, n):
        lam, de, mu = self.lam, self.de_h, self.mu_a
        b = _labels("b", n + 1)
        terms = [
            (1, ("t", "q") + b[1:], [(de, ("p", "q", "x")), (lam, ("s", "p", b[0])), (mu, ("o", "s", "t"))])
        ]
        for j in range(1, n + 1):
            labels = ("o", "x") + b[: j - 1] + ("z",) + b[j + 1:]
            terms.append(((-1) ** j, labels, [(mu, ("z", b[j - 1], b[j]))]))
        terms.append(
            (
                (-1) ** (n + 1),
                ("s", "p") + b[:n],
                [(de, ("p", "q", "x")), (lam, ("t", "q", b[n])), (mu, ("o", "s", "t"))],
            )
        )
        return terms

    def cup1(self, f, g, m, n):
        a, b = _labels("a", m), _labels("b", n)
        return contract(
            self.F,
            ("o", "x") + a + b,
            (self.de_h, ("p", "q", "x")),
            (f, ("s", "p") + a),
            (g, ("t", "q") + b),
            (self.mu_a, ("o", "s", "t")),
        )


class _MCOps(_ModuleOps):
    def __init__(self, s):
        super().__init__(s)
        self.de_a = s.carrier.comul_tensor

    def shape1(self, n):
        return (self.a,) * n + (self.h, self.a)

    def out1(self, n):
        return _labels("b", n) + ("x", "i")

    def terms1(self, n):
        lam, dh, da = self.lam, self.de_h, self.de_a
        b = _labels("b", n + 1)
        terms = [
            (1, b[1:] + ("q", "e"), [(dh, ("p", "q", "x")), (da, ("c", "e", "i")), (lam, (b[0], "p", "c"))])
        ]
        for j in range(1, n + 1):
            labels = b[: j - 1] + ("z",) + b[j + 1:] + ("x", "i")
            terms.append(((-1) ** j, labels, [(da, (b[j - 1], b[j], "z"))]))
        terms.append(
            (
                (-1) ** (n + 1),
                b[:n] + ("p", "c"),
                [(dh, ("p", "q", "x")), (da, ("c", "e", "i")), (lam, (b[n], "q", "e"))],
            )
        )
        return terms

    def cup1(self, f, g, m, n):
        a, b = _labels("a", m), _labels("b", n)
        return contract(
            self.F,
            a + b + ("x", "i"),
            (self.de_h, ("p", "q", "x")),
            (self.de_a, ("c", "e", "i")),
            (f, a + ("p", "c")),
            (g, b + ("q", "e")),
        )


class _ComoduleOps(_Ops):
    def __init__(self, s):
        super().__init__(s)
        self.rho = self.base  # (h, o, i)

    def shape(self, n, comp):
        a, h = self.a, self.h
        if comp == 0:
            return (h,) * n + (a, a)
        return self.shape1(n)

    def out_labels(self, n, comp):
        if comp == 0:
            return _labels("y", n) + ("o", "i")
        return self.out1(n)

    def d0_terms(self):
        rho = self.rho
        return ("h", "o", "i"), [
            (1, ("k", "i"), [(rho, ("h", "o", "k"))]),
            (-1, ("o", "k"), [(rho, ("h", "k", "i"))]),
        ]

    def terms(self, n, comp):
        if comp == 1:
            return self.terms1(n)
        rho, de = self.rho, self.de_h
        y = _labels("y", n + 1)
        terms = [(1, y[:n] + ("k", "i"), [(rho, (y[n], "o", "k"))])]
        for j in range(1, n + 1):
            p = n - j  # Delta_H splits the (n-j+1)-th factor
            labels = y[:p] + ("z",) + y[p + 2:] + ("o", "i")
            terms.append(((-1) ** j, labels, [(de, (y[p], y[p + 1], "z"))]))
        terms.append(((-1) ** (n + 1), y[1:] + ("o", "k"), [(rho, (y[0], "k", "i"))]))
        return terms

    def cup(self, f, g, m, n, comp):
        if comp == 0:
            x, y = _labels("x", m), _labels("y", n)
            return contract(
                self.F,
                y + x + ("o", "i"),
                (f, x + ("o", "k")),
                (g, y + ("k", "i")),
            )
        return self.cup1(f, g, m, n)


class _CCOps(_ComoduleOps):
    def __init__(self, s):
        super().__init__(s)
        self.de_a = s.carrier.comul_tensor

    def shape1(self, n):
        return (self.h,) + (self.a,) * n + (self.a,)

    def out1(self, n):
        return ("h",) + _labels("b", n) + ("i",)

    def terms1(self, n):
        rho, mu, da = self.rho, self.mu_h, self.de_a
        b = _labels("b", n + 1)
        terms = [
            (1, ("j",) + b[1:] + ("e",), [(mu, ("h", "g", "j")), (da, ("c", "e", "i")), (rho, ("g", b[0], "c"))])
        ]
        for j in range(1, n + 1):
            labels = ("h",) + b[: j - 1] + ("z",) + b[j + 1:] + ("i",)
            terms.append(((-1) ** j, labels, [(da, (b[j - 1], b[j], "z"))]))
        terms.append(
            (
                (-1) ** (n + 1),
                ("g",) + b[:n] + ("c",),
                [(mu, ("h", "g", "j")), (da, ("c", "e", "i")), (rho, ("j", b[n], "e"))],
            )
        )
        return terms

    def cup1(self, f, g, m, n):
        a, b = _labels("a", m), _labels("b", n)
        return contract(
            self.F,
            ("h",) + a + b + ("i",),
            (self.mu_h, ("h", "g", "j")),
            (self.de_a, ("c", "e", "i")),
            (f, ("g",) + a + ("c",)),
            (g, ("j",) + b + ("e",)),
        )


class _CAOps(_ComoduleOps):
    def __init__(self, s):
        super().__init__(s)
        self.mu_a = s.carrier.mul_tensor

    def shape1(self, n):
        return (self.h, self.a) + (self.a,) * n

    def out1(self, n):
        return ("h", "o") + _labels("b", n)

    def terms1(self, n):
        rho, mh, ma = self.rho, self.mu_h, self.mu_a
        b = _labels("b", n + 1)
        terms = [
            (1, ("j", "q") + b[1:], [(mh, ("h", "g", "j")), (ma, ("o", "p", "q")), (rho, ("g", "p", b[0]))])
        ]
        for j in range(1, n + 1):
            labels = ("h", "o") + b[: j - 1] + ("z",) + b[j + 1:]
            terms.append(((-1) ** j, labels, [(ma, ("z", b[j - 1], b[j]))]))
        terms.append(
            (
                (-1) ** (n + 1),
                ("g", "p") + b[:n],
                [(mh, ("h", "g", "j")), (ma, ("o", "p", "q")), (rho, ("j", "q", b[n]))],
            )
        )
        return terms

    def cup1(self, f, g, m, n):
        a, b = _labels("a", m), _labels("b", n)
        return contract(
            self.F,
            ("h", "o") + a + b,
            (self.mu_h, ("h", "g", "j")),
            (self.mu_a, ("o", "p", "q")),
            (f, ("g", "p") + a),
            (g, ("j", "q") + b),
        )


_OPS = {
    ActionKind.MA: _MAOps,
    ActionKind.MC: _MCOps,
    ActionKind.CC: _CCOps,
    ActionKind.CA: _CAOps,
}


# ---------------------------------------------------------------------------
# theories


@dataclass(frozen=True, eq=False)
class SplitCochain:
    """A cochain of degree n >= 1 seen through its two components.

    In degree 1 ``comp0`` and ``comp1`` are the same vector.
    """

    degree: int
    comp0: np.ndarray
    comp1: np.ndarray

    def __post_init__(self):
        if self.degree < 1:
            raise DegreeError("split cochains start in degree 1")
        if self.degree == 1 and np.any(self.comp0 != self.comp1):
            raise ShapeError("a degree-1 cochain has a single component")

    @classmethod
    def one(cls, vec):
        v = np.asarray(vec, dtype=object).reshape(-1)
        return cls(1, v, v)

    @property
    def vector(self):
        if self.degree == 1:
            return self.comp0
        return np.concatenate([self.comp0, self.comp1])

    def is_zero(self):
        return not np.any(self.vector != 0)

    def plus(self, other, field):
        """Sum reduced over ``field``."""
        if not isinstance(other, SplitCochain) or other.degree != self.degree:
            raise ShapeError("can only add split cochains of equal degree")
        if self.degree == 1:
            return SplitCochain.one(field.reduce(self.comp0 + other.comp0))
        return SplitCochain(
            self.degree, field.reduce(self.comp0 + other.comp0), field.reduce(self.comp1 + other.comp1)
        )


@dataclass(frozen=True, eq=False)
class DeformationTheory:
    kind: ActionKind
    structure: object
    complex: CochainComplex
    one_cochain_dim: int
    f0_basis: object  # SubspaceBasis of Der(A) or Coder(A) inside End(A)
    d0_end: Matrix  # d^0 extended to all of End(A)
    ops: _Ops
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def field(self):
        return self.structure.field

    @property
    def n_max(self):
        return self.complex.n_max

    @property
    def a_dim(self):
        return self.structure.a_dim

    @property
    def h_dim(self):
        return self.structure.h_dim

    def split_dims(self, n):
        if n < 1:
            raise DegreeError("split dims start in degree 1")
        if n == 1:
            return (self.one_cochain_dim, self.one_cochain_dim)
        return (self.ops.dim(n, 0), self.ops.dim(n, 1))

    def split(self, n, vec):
        """Split a flat degree-n cochain vector into its components."""
        v = self.field.array(list(np.asarray(vec, dtype=object).reshape(-1))).reshape(-1)
        if n == 1:
            if v.shape[0] != self.one_cochain_dim:
                raise ShapeError(f"F^1 has dimension {self.one_cochain_dim}")
            return SplitCochain.one(v)
        d0, d1 = self.split_dims(n)
        if v.shape[0] != d0 + d1:
            raise ShapeError(f"F^{n} has dimension {d0 + d1}, got {v.shape[0]}")
        return SplitCochain(n, v[:d0], v[d0:])

    def base_cochain(self):
        """The action lambda (or coaction rho) as a 1-cochain."""
        return SplitCochain.one(self.structure.base_map().array.reshape(-1).copy())

    def d0_of_endomorphism(self, phi):
        """d^0 applied to any endomorphism (an a x a matrix or flat vector)."""
        v = np.asarray(phi.array if isinstance(phi, Matrix) else phi, dtype=object).reshape(-1)
        return self.d0_end @ v

    def differential(self, f):
        """d f as a split cochain (f of degree n >= 1)."""
        n = f.degree
        out = (self.component_d(n, 0) @ f.comp0, self.component_d(n, 1) @ f.comp1)
        return SplitCochain(n + 1, *out)

    def component_d(self, n, comp):
        return _component_d(self, n, comp)

    def cohomology(self, n):
        return cohomology(self.complex, n)


def _component_d(theory, n, comp):
    """d^n_comp, taken from the stored differential when it is in range."""
    if n < theory.n_max:
        d = theory.complex.d(n)
        rows0 = theory.ops.dim(n + 1, 0)
        if n == 1:
            block = d.array[:rows0] if comp == 0 else d.array[rows0:]
        else:
            cols0 = theory.ops.dim(n, 0)
            block = d.array[:rows0, :cols0] if comp == 0 else d.array[rows0:, cols0:]
        return Matrix(theory.field, np.ascontiguousarray(block), trusted=True)
    return theory.ops.differential(n, comp)


def cup(theory, f, g):
    """f cup g, componentwise; both operands must have degree >= 1."""
    if f.degree < 1 or g.degree < 1:
        raise DegreeError("the cup product is only defined in positive degrees")
    ops = theory.ops
    m, n = f.degree, g.degree
    comps = []
    for c, (fv, gv) in enumerate(((f.comp0, g.comp0), (f.comp1, g.comp1))):
        ft = np.asarray(fv, dtype=object).reshape(ops.shape(m, c))
        gt = np.asarray(gv, dtype=object).reshape(ops.shape(n, c))
        comps.append(ops.cup(ft, gt, m, n, c).reshape(-1))
    return SplitCochain(m + n, comps[0], comps[1])


def face_matrices(theory, n):
    """The unsigned faces d^n_1[0..n+1] of the F_1 component (module-algebra case)."""
    if theory.kind is not ActionKind.MA:
        raise ShapeError("face maps are exposed for module-algebra theories")
    return theory.ops.faces(n, 1)


def _build(s, kind, n_max, max_dim):
    if s.kind is not kind:
        raise ShapeError(f"expected a {kind.value} structure, got {s.kind.value}")
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    rep = validate_action(s)
    if not rep.ok:
        raise InvalidStructure(f"{kind.value} structure is invalid", rep)
    ops = _OPS[kind](s)
    F = s.field
    a = s.a_dim
    f0 = derivations(s.carrier) if kind.algebra_carrier else coderivations(s.carrier)
    dim1 = ops.dim(1, 0)
    dims = [f0.dim, dim1] + [ops.dim(n, 0) + ops.dim(n, 1) for n in range(2, n_max + 1)]
    check_dims(dims, max_dim)
    out, terms = ops.d0_terms()
    d0_end = alternating_operator(F, out, ops.shape(1, 0), (a, a), terms)
    if f0.dim:
        d0 = d0_end @ f0.vectors.T
    else:
        d0 = Matrix.zeros(F, dim1, 0)
    ds = [d0]
    for n in range(1, n_max):
        m0 = ops.differential(n, 0)
        m1 = ops.differential(n, 1)
        if n == 1:
            ds.append(Matrix(F, np.vstack([m0.array, m1.array]), trusted=True))
        else:
            top = np.hstack([m0.array, np.zeros((m0.rows, m1.cols), dtype=object)])
            bot = np.hstack([np.zeros((m1.rows, m0.cols), dtype=object), m1.array])
            ds.append(Matrix(F, np.vstack([top, bot]), trusted=True))
    splits = [None, None] + [(ops.dim(n, 0), ops.dim(n, 1)) for n in range(2, n_max + 1)]
    cx = CochainComplex(F, dims, ds, splits, name=f"F_{kind.value.lower()}")
    return DeformationTheory(kind, s, cx, dim1, f0, d0_end, ops)


def build_ma(s, n_max=4, max_dim=None):
    return _build(s, ActionKind.MA, n_max, max_dim)


def build_mc(s, n_max=4, max_dim=None):
    return _build(s, ActionKind.MC, n_max, max_dim)


def build_ca(s, n_max=4, max_dim=None):
    return _build(s, ActionKind.CA, n_max, max_dim)


def build_cc(s, n_max=4, max_dim=None):
    return _build(s, ActionKind.CC, n_max, max_dim)


BUILDERS = {
    ActionKind.MA: build_ma,
    ActionKind.MC: build_mc,
    ActionKind.CA: build_ca,
    ActionKind.CC: build_cc,
}


def build_theory(s, n_max=4, max_dim=None):
    return BUILDERS[s.kind](s, n_max, max_dim)


def random_cochain(theory, n, rng, bound=3):
    """A random degree-n split cochain with small integer entries."""
    F = theory.field
    if n == 1:
        v = vector(F, [F.random_element(rng, bound) for _ in range(theory.one_cochain_dim)])
        return SplitCochain.one(v)
    d0, d1 = theory.split_dims(n)
    v = vector(F, [F.random_element(rng, bound) for _ in range(d0 + d1)])
    return SplitCochain(n, v[:d0], v[d0:])
