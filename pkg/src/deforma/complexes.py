"""Finite cochain complexes and the two Hochschild complexes.

A complex is a list of space dimensions ``dims[0..n_max]`` and differential
matrices ``d^n : dims[n] -> dims[n+1]`` for ``0 <= n < n_max``.  Cochains of
degree n are coordinate vectors; a Hom-space cochain is the row-major
flattening of its matrix (rows index the target basis, columns the source).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import DegreeOutOfRange, DimensionCap, InvalidStructure, ShapeError
from .linalg import (
    Matrix,
    SubspaceBasis,
    _echelon,
    _null_vectors,
    _sparse_rows,
    is_zero_vector,
    operator_matrix,
    solve,
)
from .structures import (
    Failure,
    ValidationReport,
    validate_bicomodule,
    validate_bimodule,
)

DEFAULT_MAX_DIM = 10**6


def max_dim_default():
    raw = os.environ.get("DEFORMA_MAX_DIM")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"DEFORMA_MAX_DIM must be an integer, got {raw!r}") from None
    return DEFAULT_MAX_DIM


def check_dims(dims, max_dim=None):
    cap = max_dim_default() if max_dim is None else max_dim
    for n, d in enumerate(dims):
        if d > cap:
            raise DimensionCap(f"degree {n} has dimension {d}, above the cap {cap}")


def alternating_operator(field, out, out_shape, phi_shape, terms):
    """Matrix of a signed sum of contractions against an unknown cochain phi.

    ``terms`` holds ``(sign, phi_labels, operands)``; each term is the map
    ``phi -> contract(out, *operands, (phi, phi_labels))``.
    """
    total = None
    for sign, labels, operands in terms:
        m = operator_matrix(field, out, labels, phi_shape, operands)
        if sign < 0:
            m = -m
        total = m if total is None else total + m
    if total is None:
        total = Matrix.zeros(field, prod(out_shape), prod(phi_shape))
    return total


# ---------------------------------------------------------------------------
# complexes


class CochainComplex:
    """Differential matrices with d^{n+1} d^n = 0 checked on construction."""

    def __init__(self, field, dims, differentials, splits=None, name="", check=True):
        self.field = field
        self.dims = tuple(int(d) for d in dims)
        self.differentials = tuple(differentials)
        self.name = name
        if len(self.differentials) != len(self.dims) - 1:
            raise ShapeError("need exactly one differential between consecutive degrees")
        for n, d in enumerate(self.differentials):
            if d.field != field:
                raise ShapeError(f"d^{n} lives over {d.field!r}, not {field!r}")
            if d.shape != (self.dims[n + 1], self.dims[n]):
                raise ShapeError(
                    f"d^{n} has shape {d.shape}, expected {(self.dims[n + 1], self.dims[n])}"
                )
        self.splits = tuple(splits) if splits is not None else (None,) * len(self.dims)
        for n, sp in enumerate(self.splits):
            if sp is not None and sum(sp) != self.dims[n]:
                raise ShapeError(f"split {sp} does not add up to dim {self.dims[n]} in degree {n}")
        self._cache = {}
        if check:
            rep = verify_complex(self)
            if not rep.ok:
                raise InvalidStructure(f"{name or 'complex'}: d o d != 0", rep)

    @property
    def n_max(self):
        return len(self.dims) - 1

    def d(self, n):
        if not 0 <= n < len(self.differentials):
            raise DegreeOutOfRange(f"no differential d^{n} (stored: 0..{len(self.differentials) - 1})")
        return self.differentials[n]

    def incoming(self, n):
        """d^{n-1}, or the zero map into degree 0."""
        if n == 0:
            return Matrix.zeros(self.field, self.dims[0], 0)
        return self.d(n - 1)

    def cochain(self, n, coords):
        return Cochain(self, n, coords)

    def zero(self, n):
        return Cochain(self, n, np.array([self.field.zero] * self.dims[n], dtype=object))


@dataclass(frozen=True, eq=False)
class Cochain:
    complex: CochainComplex
    degree: int
    coords: np.ndarray

    def __post_init__(self):
        c = self.complex
        if not 0 <= self.degree <= c.n_max:
            raise DegreeOutOfRange(f"degree {self.degree} outside 0..{c.n_max}")
        v = c.field.array(list(np.asarray(self.coords, dtype=object).reshape(-1)))
        v = v.reshape(-1)
        if v.shape[0] != c.dims[self.degree]:
            raise ShapeError(
                f"degree-{self.degree} cochain needs {c.dims[self.degree]} coordinates, got {v.shape[0]}"
            )
        object.__setattr__(self, "coords", v)

    def differential(self):
        return Cochain(self.complex, self.degree + 1, self.complex.d(self.degree) @ self.coords)


@dataclass(frozen=True, eq=False)
class CohomologyReport:
    degree: int
    dim_cochains: int
    dim_kernel: int
    dim_image_in: int
    dim_H: int
    representatives: SubspaceBasis
    kernel: SubspaceBasis
    image: SubspaceBasis

    def class_of(self, v):
        """Coordinates of the class of cocycle ``v`` in the representative basis."""
        v = np.asarray(v, dtype=object).reshape(-1)
        if not self.kernel.contains(v):
            raise ValueError("vector is not a cocycle")
        return self.representatives.coordinates(self.image.reduce(v))

    def is_coboundary(self, v):
        return self.image.contains(v)

    def to_dict(self):
        return {
            "degree": self.degree,
            "dim_cochains": self.dim_cochains,
            "dim_kernel": self.dim_kernel,
            "dim_image_in": self.dim_image_in,
            "dim_H": self.dim_H,
            "representatives": [[str(x) for x in r] for r in self.representatives],
        }


def verify_complex(c):
    rep = ValidationReport(c.name or "complex")
    for n in range(len(c.differentials) - 1):
        axiom = f"d^{n + 1} d^{n} = 0"
        rep.checked.append(axiom)
        prodm = c.differentials[n + 1] @ c.differentials[n]
        if not prodm.is_zero():
            bad = next(prodm.nonzero_entries())
            rep.failures.append(
                Failure(axiom, (f"degree {n}",), detail=f"entry ({bad[0]}, {bad[1]}) = {bad[2]}")
            )
    return rep


def _image_basis(m):
    return SubspaceBasis.span(m.field, m.rows, [m.array[:, j] for j in range(m.cols)])


def cohomology(c, n):
    if not 0 <= n < len(c.differentials):
        raise DegreeOutOfRange(
            f"H^{n} needs d^{n}; this complex stores d^0..d^{len(c.differentials) - 1}"
        )
    if n in c._cache:
        return c._cache[n]
    field = c.field
    d = c.d(n)
    piv = _echelon(field, _sparse_rows(d.array))
    kernel = SubspaceBasis.span(field, c.dims[n], _null_vectors(field, piv, c.dims[n]))
    image = _image_basis(c.incoming(n))
    reps = SubspaceBasis.span(field, c.dims[n], [image.reduce(v) for v in kernel])
    report = CohomologyReport(
        degree=n,
        dim_cochains=c.dims[n],
        dim_kernel=kernel.dim,
        dim_image_in=image.dim,
        dim_H=kernel.dim - image.dim,
        representatives=reps,
        kernel=kernel,
        image=image,
    )
    if report.dim_H != reps.dim:  # pragma: no cover - would mean d o d != 0
        raise InvalidStructure("image is not contained in the kernel")
    c._cache[n] = report
    return report


def is_cocycle(phi):
    return is_zero_vector(phi.complex.d(phi.degree) @ phi.coords)


def coboundary_witness(phi):
    """A cochain psi with d psi = phi, or None when phi is not a coboundary."""
    c, n = phi.complex, phi.degree
    if n == 0:
        raise DegreeOutOfRange("degree-0 cochains have no coboundary witnesses")
    res = solve(c.d(n - 1), phi.coords)
    if res is None:
        return None
    psi = Cochain(c, n - 1, res[0])
    if np.any((c.d(n - 1) @ psi.coords) != phi.coords):  # pragma: no cover
        raise AssertionError("coboundary witness failed verification")
    return psi


# ---------------------------------------------------------------------------
# Hochschild complexes


def _labels(stem, n, start=1):
    return tuple((stem, k) for k in range(start, start + n))


def hochschild_differential(r, m, n):
    """b : Hom(R^{(x)n}, M) -> Hom(R^{(x)(n+1)}, M), cochains laid out (m, r_1..r_n)."""
    F = r.field
    mu = r.mul_tensor
    al, ar = m.left_tensor, m.right_tensor
    dm, dr = m.space_dim, r.dim
    y = _labels("y", n + 1)
    out = ("o",) + y
    phi_shape = (dm,) + (dr,) * n
    terms = [(1, ("k",) + y[1:], [(al, ("o", y[0], "k"))])]
    for j in range(1, n + 1):
        labels = ("o",) + y[: j - 1] + ("z",) + y[j + 1:]
        terms.append(((-1) ** j, labels, [(mu, ("z", y[j - 1], y[j]))]))
    terms.append(((-1) ** (n + 1), ("k",) + y[:n], [(ar, ("o", "k", y[n]))]))
    return alternating_operator(F, out, (dm,) + (dr,) * (n + 1), phi_shape, terms)


def hochschild_complex(r, m, n_max=4, max_dim=None):
    """C^n_h(R, M) = Hom(R^{(x)n}, M) with the bar differential b."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    rep = validate_bimodule(m)
    if not rep.ok:
        raise InvalidStructure("not a bimodule", rep)
    if m.ring is not r and m.ring.dim != r.dim:
        raise ShapeError("bimodule is over a different ring")
    dims = [m.space_dim * r.dim**n for n in range(n_max + 1)]
    check_dims(dims, max_dim)
    ds = [hochschild_differential(r, m, n) for n in range(n_max)]
    return CochainComplex(r.field, dims, ds, name="hochschild")


def cohochschild_differential(a, m, n):
    """delta_c : Hom(M, A^{(x)n}) -> Hom(M, A^{(x)(n+1)}), cochains laid out (a_1..a_n, m)."""
    F = a.field
    de = a.comul_tensor
    pl, pr = m.left_tensor, m.right_tensor
    da, dm = a.dim, m.space_dim
    b = _labels("b", n + 1)
    out = b + ("m",)
    phi_shape = (da,) * n + (dm,)
    terms = [(1, b[1:] + ("k",), [(pl, (b[0], "k", "m"))])]
    for j in range(1, n + 1):
        labels = b[: j - 1] + ("z",) + b[j + 1:] + ("m",)
        terms.append(((-1) ** j, labels, [(de, (b[j - 1], b[j], "z"))]))
    terms.append(((-1) ** (n + 1), b[:n] + ("k",), [(pr, ("k", b[n], "m"))]))
    return alternating_operator(F, out, (da,) * (n + 1) + (dm,), phi_shape, terms)


def coalgebra_hochschild_complex(a, m, n_max=4, max_dim=None):
    """C^n_c(M, A) = Hom(M, A^{(x)n}) for n >= 1 and C^0_c = 0."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    rep = validate_bicomodule(m)
    if not rep.ok:
        raise InvalidStructure("not a bicomodule", rep)
    dims = [0] + [m.space_dim * a.dim**n for n in range(1, n_max + 1)]
    check_dims(dims, max_dim)
    ds = [Matrix.zeros(a.field, dims[1], 0)]
    ds += [cohochschild_differential(a, m, n) for n in range(1, n_max)]
    return CochainComplex(a.field, dims, ds, name="coalgebra hochschild")
