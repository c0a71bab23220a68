"""Exact linear algebra over the rationals and prime fields.

Matrices are dense numpy object arrays holding exact field elements
(``gmpy2.mpq`` for the rationals, plain ``int`` in ``[0, p)`` for GF(p)).
Elimination runs on sparse row dictionaries; since the reduced row-echelon
form of a matrix is unique, the canonical outputs do not depend on the
storage used along the way.

Tensor factors are always flattened row-major, leftmost factor slowest.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod
from numbers import Integral, Rational

import gmpy2
import numpy as np
from gmpy2 import mpq

from .errors import FieldMismatch, ShapeError

_MPQ_TYPE = type(mpq(0))


# ---------------------------------------------------------------------------
# fields


class Field:
    """An exact field.  Elements are plain Python/gmpy2 numbers."""

    characteristic = 0

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, x):
        raise NotImplementedError

    def reduce(self, arr):
        """Normalize an object array after ring arithmetic."""
        return arr

    def array(self, data):
        """Coerce arbitrary nested data to a normalized object array."""
        arr = np.array(data, dtype=object)
        if arr.size == 0:
            return arr
        return np.frompyfunc(self, 1, 1)(arr).astype(object)

    def zeros(self, shape):
        return np.zeros(shape, dtype=object)

    def random_element(self, rng, bound=3):
        return self(int(rng.integers(-bound, bound + 1)))


class Rationals(Field):
    tag = "rational"

    def __call__(self, x):
        if isinstance(x, _MPQ_TYPE):
            return x
        if isinstance(x, Integral):  # includes bool and numpy integers
            return mpq(int(x))
        if isinstance(x, Fraction):
            return mpq(x)
        if isinstance(x, Rational):
            return mpq(int(x.numerator), int(x.denominator))
        if isinstance(x, str):
            try:
                return mpq(x.strip())
            except ValueError as exc:
                raise ValueError(f"cannot parse rational {x!r}") from exc
        if type(x).__name__ == "mpz":
            return mpq(x)
        raise TypeError(f"refusing to coerce {type(x).__name__} {x!r} into the rationals")

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return mpq(1) / x

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")


class PrimeField(Field):
    def __init__(self, p):
        p = int(p)
        if p < 2 or not gmpy2.is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.tag = f"prime:{p}"

    def __call__(self, x):
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, Integral) or type(x).__name__ == "mpz":
            return int(x) % self.p
        if isinstance(x, str):
            s = x.strip()
            if "/" in s:
                num, den = s.split("/")
                return int(num) * self.inv(int(den)) % self.p
            return int(s) % self.p
        if isinstance(x, (Fraction, _MPQ_TYPE)):
            return int(x.numerator) * self.inv(int(x.denominator)) % self.p
        raise TypeError(f"refusing to coerce {type(x).__name__} {x!r} into GF({self.p})")

    def inv(self, x):
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def reduce(self, arr):
        if isinstance(arr, np.ndarray):
            return arr % self.p if arr.size else arr
        return arr % self.p

    def random_element(self, rng, bound=None):
        return int(rng.integers(0, self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = Rationals()


@lru_cache(maxsize=None)
def GF(p):
    return PrimeField(p)


def field_from_tag(tag):
    if tag in ("rational", "QQ", "Q"):
        return QQ
    if isinstance(tag, dict) and "prime" in tag:
        return GF(int(tag["prime"]))
    if isinstance(tag, str) and tag.startswith("prime:"):
        return GF(int(tag.split(":", 1)[1]))
    raise ValueError(f"unknown field descriptor {tag!r}")


def _check_same_field(*fields):
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldMismatch(f"{first!r} vs {f!r}")
    return first


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable dense matrix over an exact field."""

    __slots__ = ("field", "_a")

    def __init__(self, field, data, *, trusted=False):
        self.field = field
        if trusted:
            arr = data
        else:
            arr = field.array(data)
            if arr.ndim == 1 and arr.size == 0:
                arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ShapeError(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        arr.flags.writeable = False
        self._a = arr

    # constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, np.zeros((rows, cols), dtype=object), trusted=True)

    @classmethod
    def identity(cls, field, n):
        return cls(field, field.reduce(np.eye(n, dtype=int).astype(object)), trusted=True)

    @classmethod
    def from_array(cls, field, arr):
        """Wrap an object array that already holds normalized field elements."""
        arr = np.array(arr, dtype=object)
        return cls(field, field.reduce(arr), trusted=True)

    @classmethod
    def from_sparse(cls, field, rows, cols, entries):
        arr = np.zeros((rows, cols), dtype=object)
        for i, j, v in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ShapeError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            arr[i, j] = field.reduce(arr[i, j] + field(v))
        return cls(field, arr, trusted=True)

    @classmethod
    def column(cls, field, vec):
        v = np.array(vec, dtype=object).reshape(-1, 1)
        return cls(field, v)

    # basic protocol -------------------------------------------------------

    @property
    def shape(self):
        return self._a.shape

    @property
    def rows(self):
        return self._a.shape[0]

    @property
    def cols(self):
        return self._a.shape[1]

    @property
    def array(self):
        """Read-only view of the underlying object array."""
        return self._a

    def __getitem__(self, idx):
        return self._a[idx]

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self._a)
        return f"Matrix<{self.field!r} {self.rows}x{self.cols}>[{body}]"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self._a == other._a))
        )

    __hash__ = None

    def to_lists(self):
        return [list(row) for row in self._a]

    def is_zero(self):
        return not np.any(self._a != 0)

    def nonzero_entries(self):
        rows, cols = np.nonzero(self._a != 0)
        for i, j in zip(rows.tolist(), cols.tolist()):
            yield i, j, self._a[i, j]

    @property
    def T(self):
        return Matrix(self.field, self._a.T.copy(), trusted=True)

    transpose = T

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Matrix):
            _check_same_field(self.field, other.field)
            return other._a
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None or b.shape != self.shape:
            raise ShapeError(f"cannot add {self.shape} and {getattr(b, 'shape', None)}")
        return Matrix(self.field, self.field.reduce(self._a + b), trusted=True)

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None or b.shape != self.shape:
            raise ShapeError(f"cannot subtract {getattr(b, 'shape', None)} from {self.shape}")
        return Matrix(self.field, self.field.reduce(self._a - b), trusted=True)

    def __neg__(self):
        return Matrix(self.field, self.field.reduce(-self._a), trusted=True)

    def scale(self, c):
        return Matrix(self.field, self.field.reduce(self._a * self.field(c)), trusted=True)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            _check_same_field(self.field, other.field)
            if self.cols != other.rows:
                raise ShapeError(f"cannot compose {self.shape} with {other.shape}")
            return Matrix(self.field, _matmul(self.field, self._a, other._a), trusted=True)
        vec = np.asarray(other, dtype=object)
        if vec.ndim != 1 or vec.shape[0] != self.cols:
            raise ShapeError(f"vector of length {vec.shape} against {self.shape}")
        out = _matmul(self.field, self._a, vec.reshape(-1, 1))
        return out.reshape(-1)

    def kron(self, other):
        return kron(self, other)


def _sparse_rows(arr):
    rows = [dict() for _ in range(arr.shape[0])]
    if arr.size:
        ii, jj = np.nonzero(arr != 0)
        for i, j in zip(ii.tolist(), jj.tolist()):
            rows[i][j] = arr[i, j]
    return rows


def _matmul(field, a, b):
    n, k = a.shape
    m = b.shape[1]
    if n * k * m <= 40_000:
        out = a.dot(b) if k else np.zeros((n, m), dtype=object)
        return field.reduce(out)
    # sparse-by-sparse product; these operators are overwhelmingly zero
    brows = _sparse_rows(b)
    out = np.zeros((n, m), dtype=object)
    ii, kk = np.nonzero(a != 0)
    for i, kx in zip(ii.tolist(), kk.tolist()):
        coef = a[i, kx]
        row = out[i]
        for j, v in brows[kx].items():
            row[j] = row[j] + coef * v
    return field.reduce(out)


def vector(field, values):
    """Normalized 1-D object array."""
    return field.array(list(values)).reshape(-1)


def zero_vector(n):
    return np.zeros(n, dtype=object)


def is_zero_vector(v):
    return not np.any(np.asarray(v, dtype=object) != 0)


# ---------------------------------------------------------------------------
# elimination


def _echelon(field, rows):
    """Incremental Gauss-Jordan over sparse rows.

    Returns ``{pivot_col: row}``; every row has leading entry 1 at its pivot
    and zeros at all other pivot columns.
    """
    p = field.characteristic
    pivots = {}
    for src in rows:
        r = {k: v for k, v in src.items() if v != 0}
        hits = [c for c in r if c in pivots]
        for c in hits:
            coef = r.get(c)
            if not coef:
                continue
            for k, v in pivots[c].items():
                nv = r.get(k, 0) - coef * v
                if p:
                    nv %= p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        if not r:
            continue
        lead = min(r)
        inv = field.inv(r[lead])
        if p:
            r = {k: v * inv % p for k, v in r.items()}
        else:
            r = {k: v * inv for k, v in r.items()}
        for prow in pivots.values():
            coef = prow.get(lead)
            if not coef:
                continue
            for k, v in r.items():
                nv = prow.get(k, 0) - coef * v
                if p:
                    nv %= p
                if nv:
                    prow[k] = nv
                else:
                    prow.pop(k, None)
        pivots[lead] = r
    return pivots


def _rows_of(m):
    if isinstance(m, Matrix):
        return m.field, _sparse_rows(m.array), m.cols
    raise TypeError("expected a Matrix")


def _dense(field, pivots, nrows, ncols):
    arr = np.zeros((nrows, ncols), dtype=object)
    for i, c in enumerate(sorted(pivots)):
        for k, v in pivots[c].items():
            arr[i, k] = v
    return Matrix(field, arr, trusted=True)


def rref(m):
    """Reduced row-echelon form and ascending pivot columns."""
    field, rows, ncols = _rows_of(m)
    piv = _echelon(field, rows)
    return _dense(field, piv, m.rows, ncols), tuple(sorted(piv))


def rank(m):
    field, rows, _ = _rows_of(m)
    return len(_echelon(field, rows))


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """A subspace of ``field**ambient_dim`` held by its canonical RREF basis."""

    field: Field
    ambient_dim: int
    vectors: Matrix  # dim x ambient_dim, reduced row-echelon, no zero rows
    pivots: tuple

    @classmethod
    def span(cls, field, ambient_dim, vectors):
        rows = []
        for v in vectors:
            v = np.asarray(v, dtype=object).reshape(-1)
            if v.shape[0] != ambient_dim:
                raise ShapeError(f"vector of length {v.shape[0]} in ambient {ambient_dim}")
            rows.append({j: x for j, x in enumerate(v.tolist()) if x != 0})
        return cls._from_pivots(field, ambient_dim, _echelon(field, rows))

    @classmethod
    def _from_pivots(cls, field, ambient_dim, piv):
        mat = _dense(field, piv, len(piv), ambient_dim)
        return cls(field, ambient_dim, mat, tuple(sorted(piv)))

    @classmethod
    def full(cls, field, n):
        return cls(field, n, Matrix.identity(field, n), tuple(range(n)))

    @property
    def dim(self):
        return self.vectors.rows

    def __len__(self):
        return self.dim

    def __iter__(self):
        for i in range(self.dim):
            yield self.vectors.array[i].copy()

    def __eq__(self, other):
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.vectors == other.vectors

    __hash__ = None

    def reduce(self, v):
        """Normal form of ``v`` modulo this subspace (zero at every pivot)."""
        v = self.field.reduce(np.array(v, dtype=object).reshape(-1))
        if v.shape[0] != self.ambient_dim:
            raise ShapeError(f"vector of length {v.shape[0]} in ambient {self.ambient_dim}")
        basis = self.vectors.array
        for i, c in enumerate(self.pivots):
            coef = v[c]
            if coef != 0:
                v = v - coef * basis[i]
        return self.field.reduce(v)

    def contains(self, v):
        return is_zero_vector(self.reduce(v))

    def coordinates(self, v):
        """Coefficients of ``v`` in this basis, or None when ``v`` lies outside."""
        v = self.field.reduce(np.array(v, dtype=object).reshape(-1))
        if not self.contains(v):
            return None
        return np.array([v[c] for c in self.pivots], dtype=object)

    def combine(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=object).reshape(-1)
        if coeffs.shape[0] != self.dim:
            raise ShapeError("coefficient count does not match the basis dimension")
        if self.dim == 0:
            return zero_vector(self.ambient_dim)
        return self.field.reduce(coeffs.dot(self.vectors.array))


def kernel_basis(m):
    field, rows, ncols = _rows_of(m)
    piv = _echelon(field, rows)
    return SubspaceBasis.span(field, ncols, _null_vectors(field, piv, ncols))


def _null_vectors(field, piv, ncols):
    free = [c for c in range(ncols) if c not in piv]
    p = field.characteristic
    out = []
    for f in free:
        v = [0] * ncols
        v[f] = field.one
        for c, row in piv.items():
            x = row.get(f)
            if x:
                v[c] = (-x) % p if p else -x
        out.append(v)
    return out


def image_basis(m):
    """Canonical basis of the column space of ``m``."""
    return SubspaceBasis.span(m.field, m.rows, [m.array[:, j] for j in range(m.cols)])


def solve(m, b):
    """Solve ``m x = b``.

    Returns ``(x, kernel)`` with ``x`` the particular solution whose free
    variables are zero, or None when the system is inconsistent.
    """
    b = np.asarray(b, dtype=object).reshape(-1)
    if b.shape[0] != m.rows:
        raise ShapeError(f"right-hand side of length {b.shape[0]} for {m.rows} equations")
    field = m.field
    n = m.cols
    rows = _sparse_rows(m.array)
    for i, x in enumerate(b.tolist()):
        x = field(x)
        if x != 0:
            rows[i][n] = x
    piv = _echelon(field, rows)
    if n in piv:
        return None
    x = np.array([field.zero] * n, dtype=object)
    for c, row in piv.items():
        x[c] = row.get(n, field.zero)
    kernel_piv = {c: {k: v for k, v in row.items() if k != n} for c, row in piv.items()}
    kernel = SubspaceBasis.span(field, n, _null_vectors(field, kernel_piv, n))
    return x, kernel


# ---------------------------------------------------------------------------
# tensor plumbing


def kron(a, b):
    field = _check_same_field(a.field, b.field)
    return Matrix(field, field.reduce(np.kron(a.array, b.array).astype(object)), trusted=True)


def kron_all(field, mats):
    out = Matrix.identity(field, 1)
    for m in mats:
        out = kron(out, m)
    return out


def twist_matrix(field, dim_left, dim_right):
    """Permutation realizing X (x) Y -> Y (x) X on flat indices."""
    n = dim_left * dim_right
    arr = np.zeros((n, n), dtype=object)
    for i in range(dim_left):
        for j in range(dim_right):
            arr[j * dim_left + i, i * dim_right + j] = 1
    return Matrix.from_array(field, arr)


def twist_n_matrix(field, dim_a, n, dim_h):
    """Permutation A^{(x)n} (x) H -> H (x) A^{(x)n} moving the last factor to the front."""
    if n < 1:
        raise ShapeError("twist_n needs n >= 1")
    return twist_matrix(field, dim_a**n, dim_h)


@dataclass(frozen=True)
class TensorIndex:
    """Row-major flat index into a tensor product of spaces."""

    factor_dims: tuple
    flat: int

    @classmethod
    def from_multi(cls, factor_dims, multi):
        factor_dims = tuple(factor_dims)
        if len(multi) != len(factor_dims):
            raise ShapeError("multi-index length does not match the factor count")
        flat = 0
        for i, d in zip(multi, factor_dims):
            if not 0 <= i < d:
                raise ShapeError(f"index {i} out of range for a factor of dimension {d}")
            flat = flat * d + i
        return cls(factor_dims, flat)

    @property
    def multi(self):
        out = []
        flat = self.flat
        for d in reversed(self.factor_dims):
            flat, r = divmod(flat, d)
            out.append(r)
        return tuple(reversed(out))


# ---------------------------------------------------------------------------
# labelled contractions


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def contract(field, out, *operands):
    """``einsum`` with named axes.

    ``operands`` are ``(array, labels)`` pairs; ``out`` lists the output
    labels.  Labels may be any hashable names.
    """
    names = {}

    def letter(name):
        if name not in names:
            if len(names) >= len(_LETTERS):
                raise ShapeError("too many tensor indices in one contraction")
            names[name] = _LETTERS[len(names)]
        return names[name]

    subs = []
    arrays = []
    for arr, labels in operands:
        arr = np.asarray(arr, dtype=object)
        if arr.ndim != len(labels):
            raise ShapeError(f"labels {labels} for an array of shape {arr.shape}")
        subs.append("".join(letter(x) for x in labels))
        arrays.append(arr)
    spec = ",".join(subs) + "->" + "".join(letter(x) for x in out)
    if len(arrays) == 1:
        res = np.einsum(spec, arrays[0])
    else:
        res = np.einsum(spec, *arrays, optimize="greedy")
    return field.reduce(np.asarray(res, dtype=object))


def operator_matrix(field, out, phi_labels, phi_shape, operands):
    """Matrix of ``phi -> contract(out, *operands, (phi, phi_labels))``.

    The unknown tensor is replaced by identity deltas so that the result is
    the (dim out) x (dim phi) matrix of the linear map.
    """
    phi_labels = tuple(phi_labels)
    primed = [(x, "'in") for x in phi_labels]
    rename = {}
    extra = []
    for x, xp, d in zip(phi_labels, primed, phi_shape):
        if x in out:
            extra.append((np.eye(d, dtype=int).astype(object), (x, xp)))
        else:
            rename[x] = xp
    ops = [(arr, tuple(rename.get(x, x) for x in labels)) for arr, labels in operands]
    ops.extend(extra)
    res = contract(field, tuple(out) + tuple(primed), *ops)
    out_dim = prod(res.shape[: len(out)])
    return Matrix(field, np.ascontiguousarray(res).reshape(out_dim, prod(phi_shape)), trusted=True)
