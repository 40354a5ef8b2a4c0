"""Hypercomplex scalars, matrices over R, C, H and small exact linear algebra.

All four normed division algebras share one Cayley-Dickson multiplication
table, built from the doubling rule (p, q)(r, s) = (pr - s*q, sp + qr*),
where * is conjugation. With this rule i*j = k, and the first 2 and 4 basis
units close into copies of C and H.

Matrices are stored as a component array of shape (d, n, n), with entry
(a, b) equal to sum_c comps[c, a, b] e_c. An object dtype holding Fractions
gives exact arithmetic. float64 gives numeric arithmetic.
"""
from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

Scalar = Fraction | float


class Field(enum.Enum):
    """Scalar field tag. The value is the real dimension."""

    R = 1
    C = 2
    H = 4
    O = 8

    @property
    def dim(self) -> int:
        return self.value

    @classmethod
    def parse(cls, name: "str | Field") -> "Field":
        if isinstance(name, Field):
            return name
        return cls[name.upper()]


UNIT_NAMES = ("1", "i", "j", "k")


# ---------------------------------------------------------------- tables


def _cd_product(a: tuple, b: tuple) -> tuple:
    n = len(a)
    if n == 1:
        return (a[0] * b[0],)
    h = n // 2
    p, q, r, s = a[:h], a[h:], b[:h], b[h:]

    def conj(x):
        return (x[0],) + tuple(-c for c in x[1:])

    def add(x, y):
        return tuple(u + v for u, v in zip(x, y))

    def neg(x):
        return tuple(-u for u in x)

    first = add(_cd_product(p, r), neg(_cd_product(conj(s), q)))
    second = add(_cd_product(s, p), _cd_product(q, conj(r)))
    return first + second


@lru_cache(maxsize=None)
def structure_constants(d: int = 8) -> np.ndarray:
    """Array S with e_i e_j = sum_k S[i, j, k] e_k, for the d-dimensional algebra."""
    table = np.zeros((8, 8, 8), dtype=np.int64)
    for i in range(8):
        for j in range(8):
            ei = tuple(int(x == i) for x in range(8))
            ej = tuple(int(x == j) for x in range(8))
            table[i, j] = _cd_product(ei, ej)
    out = table[:d, :d, :d].copy()
    out.flags.writeable = False
    return out


@lru_cache(maxsize=None)
def product_pairs(d: int) -> tuple[tuple[int, int, int, int], ...]:
    """Nonzero structure constants as (i, j, k, sign)."""
    s = structure_constants(d)
    return tuple(
        (i, j, k, int(s[i, j, k]))
        for i in range(d)
        for j in range(d)
        for k in range(d)
        if s[i, j, k]
    )


def signed_table(d: int = 8) -> np.ndarray:
    """Table T[i, j] = +-(k+1) when e_i e_j = +-e_k (1-based signed indices)."""
    s = structure_constants(d)
    out = np.zeros((d, d), dtype=np.int64)
    for i, j, k, sign in product_pairs(d):
        out[i, j] = sign * (k + 1)
    return out


# ---------------------------------------------------------------- scalars


def as_exact(x) -> Fraction:
    """Convert to Fraction. Floats convert exactly, strings are parsed."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational, np.integer)):
        return Fraction(int(x)) if not isinstance(x, Rational) else Fraction(x)
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _is_exact_value(x) -> bool:
    return isinstance(x, (Fraction, int, np.integer, Rational)) and not isinstance(x, bool)


class HyperComplex:
    """Element of R, C, H or O given by real coefficients on 1, e_1, ..., e_{d-1}."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field | str, coeffs: Iterable):
        field = Field.parse(field)
        coeffs = tuple(coeffs)
        if len(coeffs) > field.dim:
            raise ValueError(f"{field.name} has dimension {field.dim}, got {len(coeffs)} coefficients")
        exact = all(_is_exact_value(c) for c in coeffs)
        zero = Fraction(0) if exact else 0.0
        if exact:
            coeffs = tuple(Fraction(c) for c in coeffs)
        else:
            coeffs = tuple(float(c) for c in coeffs)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs + (zero,) * (field.dim - len(coeffs)))

    def __setattr__(self, name, value):
        raise AttributeError("HyperComplex is immutable")

    @classmethod
    def unit(cls, field: Field | str, index: int) -> "HyperComplex":
        field = Field.parse(field)
        return cls(field, [Fraction(int(c == index)) for c in range(field.dim)])

    @classmethod
    def real(cls, field: Field | str, value) -> "HyperComplex":
        return cls(field, [value])

    @property
    def exact(self) -> bool:
        return isinstance(self.coeffs[0], Fraction)

    @property
    def re(self) -> Scalar:
        return self.coeffs[0]

    def conj(self) -> "HyperComplex":
        return HyperComplex(self.field, (self.coeffs[0],) + tuple(-c for c in self.coeffs[1:]))

    def norm2(self) -> Scalar:
        return sum((c * c for c in self.coeffs), Fraction(0) if self.exact else 0.0)

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def is_imaginary(self) -> bool:
        return self.coeffs[0] == 0

    def _coerce(self, other) -> "HyperComplex":
        if isinstance(other, HyperComplex):
            if other.field is not self.field:
                raise ValueError(f"field mismatch: {self.field.name} vs {other.field.name}")
            return other
        return HyperComplex(self.field, [other])

    def __add__(self, other):
        other = self._coerce(other)
        return HyperComplex(self.field, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return HyperComplex(self.field, (-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, HyperComplex):
            return HyperComplex(self.field, (a * other for a in self.coeffs))
        other = self._coerce(other)
        d = self.field.dim
        out = [Fraction(0) if (self.exact and other.exact) else 0.0] * d
        a, b = self.coeffs, other.coeffs
        for i, j, k, s in product_pairs(d):
            if a[i] and b[j]:
                out[k] += s * a[i] * b[j]
        return HyperComplex(self.field, out)

    def __rmul__(self, other):
        return HyperComplex(self.field, (other * a for a in self.coeffs))

    def __truediv__(self, other):
        if isinstance(other, HyperComplex):
            raise TypeError("divide by a real scalar only")
        if self.exact and _is_exact_value(other):
            other = Fraction(other)
        return HyperComplex(self.field, (a / other for a in self.coeffs))

    def __eq__(self, other):
        if isinstance(other, HyperComplex):
            return self.field is other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def close(self, other: "HyperComplex", tol: float = 1e-12) -> bool:
        return max(abs(float(a - b)) for a, b in zip(self.coeffs, other.coeffs)) <= tol

    def __repr__(self):
        return f"HyperComplex({self.field.name}, {format_entry(self)!r})"


def hc_mul(a: HyperComplex, b: HyperComplex) -> HyperComplex:
    return a * b


def hc_conj(a: HyperComplex) -> HyperComplex:
    return a.conj()


def hc_norm2(a: HyperComplex) -> Scalar:
    return a.norm2()


# ---------------------------------------------------------------- matrices


def _fraction_array(a) -> np.ndarray:
    a = np.asarray(a, dtype=object)
    out = np.empty(a.shape, dtype=object)
    flat_in = a.ravel()
    flat_out = out.ravel()
    for idx, x in enumerate(flat_in):
        flat_out[idx] = as_exact(x)
    return out


class MatF:
    """Square matrix over R, C or H with component storage of shape (d, n, n)."""

    __slots__ = ("field", "comps", "_exact")

    def __init__(self, field: Field | str, comps):
        field = Field.parse(field)
        if field is Field.O:
            raise ValueError("matrices over the octonions are not supported")
        comps = np.asarray(comps)
        if comps.ndim != 3 or comps.shape[0] != field.dim or comps.shape[1] != comps.shape[2]:
            raise ValueError(f"expected components of shape ({field.dim}, n, n), got {comps.shape}")
        if comps.dtype != object:
            comps = comps.astype(np.float64, copy=True)
        else:
            comps = comps.copy()
        comps.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "comps", comps)
        # object arrays may mix Fractions with floats (exact first column of a
        # rotated field); only all-rational storage counts as exact
        rational = comps.dtype == object and not any(isinstance(c, float) for c in comps.flat)
        object.__setattr__(self, "_exact", rational)

    def __setattr__(self, name, value):
        raise AttributeError("MatF is immutable")

    # construction
    @classmethod
    def zeros(cls, field: Field | str, n: int, exact: bool = True) -> "MatF":
        field = Field.parse(field)
        if exact:
            comps = np.empty((field.dim, n, n), dtype=object)
            comps.fill(Fraction(0))
        else:
            comps = np.zeros((field.dim, n, n))
        return cls(field, comps)

    @classmethod
    def identity(cls, field: Field | str, n: int, exact: bool = True) -> "MatF":
        m = cls.zeros(field, n, exact)
        comps = m.comps.copy()
        for a in range(n):
            comps[0, a, a] = Fraction(1) if exact else 1.0
        return cls(field, comps)

    @classmethod
    def from_entries(cls, field: Field | str, rows: Sequence[Sequence]) -> "MatF":
        """Build from a nested list of HyperComplex values, entry strings or real numbers."""
        field = Field.parse(field)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        def entry(x):
            if isinstance(x, HyperComplex):
                return x
            if isinstance(x, str):
                return parse_entry(x, field)
            return HyperComplex(field, [x] + [0] * (field.dim - 1))

        entries = [[entry(x) for x in r] for r in rows]
        exact = all(x.exact for r in entries for x in r)
        comps = np.empty((field.dim, n, n), dtype=object if exact else np.float64)
        for a in range(n):
            for b in range(n):
                x = entries[a][b]
                if x.field is not field:
                    raise ValueError("entry field mismatch")
                comps[:, a, b] = x.coeffs
        return cls(field, comps)

    @classmethod
    def from_sparse(cls, field: Field | str, n: int, entries: Iterable[tuple[int, int, int, object]]) -> "MatF":
        """Exact matrix from (row, col, unit index, value) tuples."""
        m = cls.zeros(field, n, exact=True)
        comps = m.comps.copy()
        for a, b, c, v in entries:
            comps[c, a, b] += as_exact(v)
        return cls(field, comps)

    @classmethod
    def from_complex(cls, a) -> "MatF":
        a = np.asarray(a, dtype=np.complex128)
        return cls(Field.C, np.stack([a.real, a.imag]))

    # properties
    @property
    def n(self) -> int:
        return self.comps.shape[1]

    @property
    def exact(self) -> bool:
        return self._exact

    def entry(self, a: int, b: int) -> HyperComplex:
        return HyperComplex(self.field, self.comps[:, a, b])

    def column(self, b: int) -> list[HyperComplex]:
        return [self.entry(a, b) for a in range(self.n)]

    def to_float(self) -> "MatF":
        return MatF(self.field, self.comps.astype(np.float64))

    def to_exact(self) -> "MatF":
        return self if self.exact else MatF(self.field, _fraction_array(self.comps))

    def to_complex(self) -> np.ndarray:
        if self.field is Field.R:
            return self.comps[0].astype(np.float64).astype(np.complex128)
        if self.field is not Field.C:
            raise ValueError("only real or complex matrices convert to numpy complex")
        c = self.comps.astype(np.float64)
        return c[0] + 1j * c[1]

    def with_field(self, field: Field | str) -> "MatF":
        """Embed into a larger field (R in C in H)."""
        field = Field.parse(field)
        if field.dim < self.field.dim:
            raise ValueError("can only embed into a larger field")
        if field is self.field:
            return self
        if self.exact:
            comps = np.empty((field.dim, self.n, self.n), dtype=object)
            comps.fill(Fraction(0))
        else:
            comps = np.zeros((field.dim, self.n, self.n))
        comps[: self.field.dim] = self.comps
        return MatF(field, comps)

    # arithmetic
    def _check(self, other: "MatF"):
        if not isinstance(other, MatF):
            raise TypeError("expected MatF")
        if other.field is not self.field:
            raise ValueError(f"field mismatch: {self.field.name} vs {other.field.name}")
        if other.n != self.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")

    def _mix(self, other: "MatF"):
        a, b = self.comps, other.comps
        if a.dtype != b.dtype or (a.dtype == object and not (self.exact and other.exact)):
            a, b = a.astype(np.float64), b.astype(np.float64)
        return a, b

    def __add__(self, other):
        self._check(other)
        a, b = self._mix(other)
        return MatF(self.field, a + b)

    def __sub__(self, other):
        self._check(other)
        a, b = self._mix(other)
        return MatF(self.field, a - b)

    def __neg__(self):
        return MatF(self.field, -self.comps)

    def __mul__(self, scalar):
        if isinstance(scalar, (MatF, HyperComplex)):
            raise TypeError("use @ for matrix products")
        if self.exact and _is_exact_value(scalar):
            return MatF(self.field, self.comps * Fraction(scalar))
        return MatF(self.field, self.comps.astype(np.float64) * float(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other):
        self._check(other)
        a, b = self._mix(other)
        d = self.field.dim
        out = np.zeros_like(a) if a.dtype != object else _zeros_object(a.shape)
        live_a = [bool(np.any(a[i] != 0)) for i in range(d)]
        live_b = [bool(np.any(b[j] != 0)) for j in range(d)]
        for i, j, k, s in product_pairs(d):
            if live_a[i] and live_b[j]:
                prod = a[i] @ b[j]
                out[k] = out[k] + prod if s > 0 else out[k] - prod
        return MatF(self.field, out)

    def adjoint(self) -> "MatF":
        """Conjugate transpose."""
        c = np.transpose(self.comps, (0, 2, 1)).copy()
        c[1:] = -c[1:]
        return MatF(self.field, c)

    def trace(self) -> HyperComplex:
        return HyperComplex(self.field, [np.trace(self.comps[c]) for c in range(self.field.dim)])

    def sq_norm(self) -> Scalar:
        """Sum of squares of all real components (twice inner(U, U))."""
        if self.exact:
            return sum((x * x for x in self.comps.ravel()), Fraction(0))
        return float(np.sum(self.comps**2))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.comps.astype(np.float64)))) if self.comps.size else 0.0

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.exact and tol == 0.0:
            return not np.any(self.comps != 0)
        return self.max_abs() <= tol

    def equals(self, other: "MatF", tol: float = 0.0) -> bool:
        return (self - other).is_zero(tol)

    def is_skew_hermitian(self, tol: float = 1e-10) -> bool:
        s = self + self.adjoint()
        return s.is_zero(0.0 if self.exact else tol)

    def block(self, rows: slice, cols: slice) -> np.ndarray:
        return self.comps[:, rows, cols]

    def __eq__(self, other):
        if not isinstance(other, MatF):
            return NotImplemented
        return self.field is other.field and self.n == other.n and self.equals(other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return f"MatF({self.field.name}, n={self.n}, exact={self.exact})"


def _zeros_object(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def inner(u: MatF, v: MatF) -> Scalar:
    """Half the real part of tr(U V*)."""
    u._check(v)
    a, b = u._mix(v)
    if a.dtype == object:
        return Fraction(1, 2) * sum((x * y for x, y in zip(a.ravel(), b.ravel())), Fraction(0))
    return 0.5 * float(np.sum(a * b))


def bracket(u: MatF, v: MatF) -> MatF:
    return u @ v - v @ u


def left_mult_matrix(q: HyperComplex) -> np.ndarray:
    """Real d x d matrix of x -> q x."""
    d = q.field.dim
    s = structure_constants(d)
    coeffs = np.array(q.coeffs, dtype=object if q.exact else np.float64)
    # column j holds q e_j
    return np.tensordot(coeffs, s, axes=(0, 0)).T


def realify(u: MatF) -> np.ndarray:
    """Real (n d) x (n d) matrix of x -> U x, coordinates ordered entry-major.

    Index a*d + k is the e_k component of entry a, so x0 = (1, 0, ...) maps to e_0.
    """
    d, n = u.field.dim, u.n
    c = u.comps
    out = _zeros_object((n, d, n, d)) if u.exact else np.zeros((n, d, n, d))
    for i, j, k, s in product_pairs(d):
        # (U x)_a^k += s U_ab^i x_b^j
        if s > 0:
            out[:, k, :, j] = out[:, k, :, j] + c[i]
        else:
            out[:, k, :, j] = out[:, k, :, j] - c[i]
    return out.reshape(n * d, n * d)


def realify_vector(vec: Sequence[HyperComplex]) -> np.ndarray:
    exact = all(x.exact for x in vec)
    return np.array([c for x in vec for c in x.coeffs], dtype=object if exact else np.float64)


def sym_eigvals(s, tol: float = 1e-10) -> np.ndarray:
    """Ascending eigenvalues of a real symmetric matrix."""
    a = s.comps[0] if isinstance(s, MatF) else s
    if isinstance(s, MatF) and s.field is not Field.R:
        raise ValueError("sym_eigvals expects a real matrix; realify first")
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if np.max(np.abs(a - a.T), initial=0.0) > tol * scale:
        raise ValueError("matrix is not symmetric")
    return np.linalg.eigvalsh(0.5 * (a + a.T))


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential of a real (or stacked real) matrix."""
    return scipy.linalg.expm(np.asarray(a, dtype=np.float64))


# ---------------------------------------------------------------- exact linear algebra


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    m = [[as_exact(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Rational basis of the kernel of a matrix."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve a x = b exactly. Raises if inconsistent or underdetermined."""
    aug = [list(r) + [bv] for r, bv in zip(a, b)]
    ncols = len(a[0])
    red, pivots = rref(aug)
    if ncols in pivots:
        raise ValueError("linear system is inconsistent")
    if len(pivots) < ncols:
        raise ValueError("linear system is underdetermined")
    x = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        x[p] = red[r][-1]
    return x


def gram_schmidt(vectors: Sequence[Sequence], weights: Sequence | None = None) -> list[list[Fraction]]:
    """Exact orthogonalization (no normalization) under a diagonal inner product."""
    out: list[list[Fraction]] = []
    norms: list[Fraction] = []
    for v in vectors:
        w = [as_exact(x) for x in v]
        wt = [Fraction(1)] * len(w) if weights is None else [as_exact(x) for x in weights]
        for u, nu in zip(out, norms):
            c = sum((a * b * g for a, b, g in zip(w, u, wt)), Fraction(0)) / nu
            if c:
                w = [a - c * b for a, b in zip(w, u)]
        nw = sum((a * a * g for a, g in zip(w, wt)), Fraction(0))
        if nw != 0:
            out.append(w)
            norms.append(nw)
    return out


def is_psd_exact(rows: Sequence[Sequence]) -> bool:
    """Exact positive semidefiniteness of a symmetric rational matrix.

    Symmetric elimination on the largest remaining diagonal entry; a zero
    pivot is admissible only when its whole row has vanished.
    """
    m = [[as_exact(x) for x in r] for r in rows]
    k = len(m)
    if any(m[i][j] != m[j][i] for i in range(k) for j in range(i)):
        raise ValueError("matrix is not symmetric")
    live = list(range(k))
    while live:
        p = max(live, key=lambda i: m[i][i])
        d = m[p][p]
        if d < 0:
            return False
        live.remove(p)
        if d == 0:
            if any(m[p][j] for j in live):
                return False
            continue
        for i in live:
            f = m[i][p] / d
            if f:
                for j in live:
                    m[i][j] -= f * m[p][j]
    return True


# ---------------------------------------------------------------- text format

_TERM = re.compile(
    r"\s*([+-])?\s*((?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:\s*/\s*\d+)?)?\s*\*?\s*([ijk])?\s*"
)


def parse_entry(text: str, field: Field | str = Field.H) -> HyperComplex:
    """Parse 'a+bi+cj+dk' with rational or decimal coefficients."""
    field = Field.parse(field)
    s = text.strip()
    if not s:
        raise ValueError("empty entry")
    coeffs = [Fraction(0)] * 4
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse entry {text!r} at position {pos}")
        sign, num, unit = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing sign between terms in {text!r}")
        value = Fraction(num.replace(" ", "")) if num else Fraction(1)
        if sign == "-":
            value = -value
        idx = 0 if unit is None else UNIT_NAMES.index(unit)
        coeffs[idx] += value
        pos = m.end()
        first = False
    if any(coeffs[field.dim :]):
        raise ValueError(f"entry {text!r} does not lie in {field.name}")
    return HyperComplex(field, coeffs[: field.dim])


def _format_number(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def format_entry(q: HyperComplex) -> str:
    if q.field is Field.O:
        raise ValueError("octonions have no entry text format")
    parts = []
    for idx, c in enumerate(q.coeffs):
        if c == 0:
            continue
        unit = "" if idx == 0 else UNIT_NAMES[idx]
        neg = c < 0
        mag = -c if neg else c
        if unit and mag == 1:
            body = unit
        else:
            body = _format_number(mag) + unit
        parts.append(("-" if neg else "+") + body)
    if not parts:
        return "0"
    out = "".join(parts)
    return out[1:] if out.startswith("+") else out


def parse_matrix(text: str, field: Field | str | None = None) -> MatF:
    """Parse rows separated by ';' and entries separated by ','."""
    rows = [r for r in (row.strip() for row in text.strip().split(";")) if r]
    cells = [[c.strip() for c in r.split(",")] for r in rows]
    parsed = [[parse_entry(c, Field.H) for c in r] for r in cells]
    if field is None:
        used = max((i for r in parsed for x in r for i, c in enumerate(x.coeffs) if c), default=0)
        field = Field.R if used == 0 else Field.C if used == 1 else Field.H
    field = Field.parse(field)
    entries = []
    for r in parsed:
        row = []
        for x in r:
            if any(x.coeffs[field.dim :]):
                raise ValueError(f"entry {format_entry(x)} does not lie in {field.name}")
            row.append(HyperComplex(field, x.coeffs[: field.dim]))
        entries.append(row)
    return MatF.from_entries(field, entries)


def format_matrix(m: MatF) -> str:
    return "; ".join(", ".join(format_entry(m.entry(a, b)) for b in range(m.n)) for a in range(m.n))


def parse_vector(text: str, field: Field | str | None = None) -> list[HyperComplex]:
    """Parse a vector written as one row (',') or one column (';')."""
    sep = ";" if ";" in text else ","
    cells = [c.strip() for c in text.strip().replace("\n", sep if sep == ";" else ",").split(sep) if c.strip()]
    parsed = [parse_entry(c, Field.H) for c in cells]
    if field is None:
        used = max((i for x in parsed for i, c in enumerate(x.coeffs) if c), default=0)
        field = Field.R if used == 0 else Field.C if used == 1 else Field.H
    field = Field.parse(field)
    out = []
    for x in parsed:
        if any(x.coeffs[field.dim :]):
            raise ValueError(f"entry {format_entry(x)} does not lie in {field.name}")
        out.append(HyperComplex(field, x.coeffs[: field.dim]))
    return out
