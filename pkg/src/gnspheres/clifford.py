"""Clifford algebra Cl^n with e_i e_j + e_j e_i = -2 delta_ij, for n <= 9.

Elements are sparse maps from blade bitmasks to rational coefficients. Bit
k - 1 of a mask stands for the generator e_k, and a blade is the product of
its generators in increasing order.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from math import lcm
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .algebra import Field, MatF, as_exact

MAX_N = 9
_INT_LIMIT = 1 << 62
_SMALL_PRODUCT = 64


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"Clifford dimension must satisfy 1 <= n <= {MAX_N}, got {n}")


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << (i - 1)
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    return tuple(k + 1 for k in range(mask.bit_length()) if mask >> k & 1)


@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Index pairs (i, j), i < j, in lexicographic order."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


class CliffordElement:
    """Element of Cl^n with exact rational coefficients."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[int, object] | None = None):
        _check_n(n)
        clean = {}
        for mask, c in (terms or {}).items():
            if mask < 0 or mask >= 1 << n:
                raise ValueError(f"blade mask {mask} out of range for n={n}")
            c = as_exact(c)
            if c:
                clean[int(mask)] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_terms", MappingProxyType(clean))

    def __setattr__(self, name, value):
        raise AttributeError("CliffordElement is immutable")

    @property
    def terms(self) -> Mapping[int, Fraction]:
        return self._terms

    # constructors
    @classmethod
    def scalar(cls, n: int, c) -> "CliffordElement":
        return cls(n, {0: c})

    @classmethod
    def generator(cls, n: int, i: int) -> "CliffordElement":
        if not 1 <= i <= n:
            raise ValueError(f"generator e{i} out of range for n={n}")
        return cls(n, {1 << (i - 1): 1})

    @classmethod
    def blade(cls, n: int, *indices: int, coeff=1) -> "CliffordElement":
        """Product e_{i1} e_{i2} ... in the given order, times coeff."""
        out = cls.scalar(n, coeff)
        for i in indices:
            out = out * cls.generator(n, i)
        return out

    @classmethod
    def vector(cls, coeffs: Sequence, n: int | None = None) -> "CliffordElement":
        n = len(coeffs) if n is None else n
        if len(coeffs) > n:
            raise ValueError("too many vector coefficients")
        return cls(n, {1 << k: c for k, c in enumerate(coeffs)})

    # queries
    def grades(self) -> set[int]:
        return {m.bit_count() for m in self._terms}

    def grade(self, k: int) -> "CliffordElement":
        return CliffordElement(self.n, {m: c for m, c in self._terms.items() if m.bit_count() == k})

    def scalar_part(self) -> Fraction:
        return self._terms.get(0, Fraction(0))

    def is_scalar(self) -> bool:
        return all(m == 0 for m in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    # arithmetic
    def _same(self, other: "CliffordElement") -> None:
        if not isinstance(other, CliffordElement):
            raise TypeError("expected CliffordElement")
        if other.n != self.n:
            raise ValueError(f"Clifford dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, CliffordElement):
            other = CliffordElement.scalar(self.n, other)
        self._same(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return CliffordElement(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return CliffordElement(self.n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, CliffordElement):
            other = CliffordElement.scalar(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return CliffordElement.scalar(self.n, other) - self

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return cl_mul(self, other)
        c = as_exact(other)
        return CliffordElement(self.n, {m: c * v for m, v in self._terms.items()})

    def __rmul__(self, other):
        c = as_exact(other)
        return CliffordElement(self.n, {m: c * v for m, v in self._terms.items()})

    def __truediv__(self, other):
        return self * (1 / as_exact(other))

    def __eq__(self, other):
        if isinstance(other, CliffordElement):
            return self.n == other.n and dict(self._terms) == dict(other._terms)
        if isinstance(other, (int, Fraction)):
            return self == CliffordElement.scalar(self.n, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self._terms.items())))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(1 << self.n)
        for m, c in self._terms.items():
            out[m] = float(c)
        return out

    def __repr__(self):
        return f"CliffordElement(n={self.n}, {format_clifford(self)!r})"

    def __str__(self):
        return format_clifford(self)


def _mul_python(x: CliffordElement, y: CliffordElement) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            m = a ^ b
            out[m] = out.get(m, Fraction(0)) + kernels.pure.blade_sign(a, b) * ca * cb
    return out


def _integerize(x: CliffordElement) -> tuple[np.ndarray, list[int], int]:
    den = lcm(*(c.denominator for c in x.terms.values())) if x.terms else 1
    masks = np.fromiter(x.terms.keys(), dtype=np.int64, count=len(x.terms))
    nums = [int(c * den) for c in x.terms.values()]
    return masks, nums, den


def cl_mul(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    """Geometric product. Large products go through the integer kernel."""
    x._same(y)
    if len(x) * len(y) <= _SMALL_PRODUCT:
        return CliffordElement(x.n, _mul_python(x, y))
    ia, na, da = _integerize(x)
    ib, nb, db = _integerize(y)
    bound = max(map(abs, na)) * max(map(abs, nb)) * min(len(na), len(nb))
    if bound >= _INT_LIMIT:
        return CliffordElement(x.n, _mul_python(x, y))
    dense = kernels.gp_int64(ia, np.array(na, dtype=np.int64), ib, np.array(nb, dtype=np.int64), x.n)
    den = da * db
    nz = np.flatnonzero(dense)
    return CliffordElement(x.n, {int(m): Fraction(int(dense[m]), den) for m in nz})


def cl_bracket(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    return x * y - y * x


def reversion(x: CliffordElement) -> CliffordElement:
    """Reverse the order of generators in every blade."""
    out = {}
    for m, c in x.terms.items():
        k = m.bit_count()
        out[m] = -c if (k * (k - 1) // 2) % 2 else c
    return CliffordElement(x.n, out)


# ---------------------------------------------------------------- bivectors


class Bivector:
    """Grade-2 element sum_{i<j} gamma_ij e_i e_j of Cl^n."""

    __slots__ = ("n", "_gamma")

    def __init__(self, n: int, gamma: Mapping[tuple[int, int], object] | None = None):
        _check_n(n)
        g: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in (gamma or {}).items():
            if not (1 <= i <= n and 1 <= j <= n) or i == j:
                raise ValueError(f"invalid bivector index pair ({i}, {j}) for n={n}")
            c = as_exact(c)
            if i > j:
                i, j, c = j, i, -c
            g[(i, j)] = g.get((i, j), Fraction(0)) + c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_gamma", MappingProxyType({k: v for k, v in g.items() if v}))

    def __setattr__(self, name, value):
        raise AttributeError("Bivector is immutable")

    @property
    def gamma(self) -> Mapping[tuple[int, int], Fraction]:
        return self._gamma

    @classmethod
    def from_clifford(cls, x: CliffordElement) -> "Bivector":
        if x.grades() - {2}:
            raise ValueError("element is not a pure bivector")
        return cls(x.n, {indices_of(m): c for m, c in x.terms.items()})

    @classmethod
    def from_coords(cls, n: int, coords: Sequence) -> "Bivector":
        ps = pairs(n)
        if len(coords) != len(ps):
            raise ValueError(f"expected {len(ps)} coordinates")
        return cls(n, dict(zip(ps, coords)))

    def coords(self) -> list[Fraction]:
        return [self._gamma.get(p, Fraction(0)) for p in pairs(self.n)]

    @property
    def element(self) -> CliffordElement:
        return CliffordElement(self.n, {mask_of(p): c for p, c in self._gamma.items()})

    def __add__(self, other: "Bivector"):
        return Bivector(self.n, {p: self._gamma.get(p, 0) + other._gamma.get(p, 0) for p in set(self._gamma) | set(other._gamma)})

    def __sub__(self, other: "Bivector"):
        return self + (-other)

    def __neg__(self):
        return Bivector(self.n, {p: -c for p, c in self._gamma.items()})

    def __mul__(self, c):
        c = as_exact(c)
        return Bivector(self.n, {p: c * v for p, v in self._gamma.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Bivector):
            return self.n == other.n and dict(self._gamma) == dict(other._gamma)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self._gamma.items())))

    def __repr__(self):
        return f"Bivector(n={self.n}, {format_clifford(self.element)!r})"


def _as_element(w) -> CliffordElement:
    return w.element if isinstance(w, Bivector) else w


def bivector_bracket(w: Bivector, v: Bivector) -> Bivector:
    return Bivector.from_clifford(cl_bracket(w.element, v.element))


def bivector_from_vectors(v: Sequence, w: Sequence, n: int | None = None) -> Bivector:
    """Bivector v w for orthogonal vectors; gamma_ij = v_i w_j - v_j w_i."""
    if len(v) != len(w):
        raise ValueError("vectors must have equal length")
    n = len(v) if n is None else n
    exact = all(not isinstance(x, float) for x in list(v) + list(w))
    if exact:
        v = [as_exact(x) for x in v]
        w = [as_exact(x) for x in w]
        dot = sum((a * b for a, b in zip(v, w)), Fraction(0))
        if dot != 0:
            raise ValueError(f"vectors are not orthogonal: v w has scalar part -(v, w) = {-dot}")
    else:
        dot = sum(float(a) * float(b) for a, b in zip(v, w))
        if abs(dot) > 1e-12:
            raise ValueError(f"vectors are not orthogonal: v w has scalar part -(v, w) = {-dot:g}")
        v = [as_exact(float(x)) for x in v]
        w = [as_exact(float(x)) for x in w]
    return Bivector(n, {(i, j): v[i - 1] * w[j - 1] - v[j - 1] * w[i - 1] for i, j in pairs(len(v))})


def simple_square(w) -> Fraction | None:
    """C^2 when W^2 = -C^2 (W simple), else None."""
    x = _as_element(w)
    sq = x * x
    if not sq.is_scalar():
        return None
    c2 = -sq.scalar_part()
    return c2 if c2 >= 0 else None


def is_simple(w) -> Fraction | float | None:
    """Return C >= 0 with W^2 = -C^2 if W is simple, else None.

    C is a Fraction when C^2 is the square of a rational, otherwise a float.
    """
    c2 = simple_square(w)
    if c2 is None:
        return None
    p, q = c2.numerator, c2.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return math.sqrt(c2)


def spin_to_so(w) -> MatF:
    """Image in so(n) under e_i e_j -> 2 (E_ji - E_ij)."""
    b = w if isinstance(w, Bivector) else Bivector.from_clifford(w)
    entries = []
    for (i, j), c in b.gamma.items():
        entries.append((j - 1, i - 1, 0, 2 * c))
        entries.append((i - 1, j - 1, 0, -2 * c))
    return MatF.from_sparse(Field.R, b.n, entries)


def spin_inner(u: Bivector, v: Bivector) -> Fraction:
    """Inner product on spin(n) pulled back from so(n): 4 * sum gamma gamma'."""
    return 4 * sum((c * v.gamma.get(p, 0) for p, c in u.gamma.items()), Fraction(0))


def spin9_inner(u: Bivector, v: Bivector) -> Fraction:
    """Inner product on spin(9) pulled back from so(16): 8 * sum gamma gamma'."""
    return 8 * sum((c * v.gamma.get(p, 0) for p, c in u.gamma.items()), Fraction(0))


# ---------------------------------------------------------------- text format

_CL_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*(\*)?\s*)?((?:e\d)*)\s*"
)


def parse_clifford(text: str, n: int = MAX_N) -> CliffordElement:
    """Parse sums such as '-3*e1e2 + e3e4 - 1/2'."""
    s = text.strip()
    if not s:
        raise ValueError("empty Clifford expression")
    out = CliffordElement(n)
    pos = 0
    first = True
    while pos < len(s):
        m = _CL_TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at position {pos}")
        sign, num, star, blade = m.groups()
        if num is None and not blade:
            raise ValueError(f"cannot parse {text!r} at position {pos}")
        if star and not blade:
            raise ValueError(f"dangling '*' in {text!r}")
        if sign is None and not first:
            raise ValueError(f"missing sign between terms in {text!r}")
        coeff = Fraction(num) if num else Fraction(1)
        if sign == "-":
            coeff = -coeff
        idx = [int(d) for d in re.findall(r"e(\d)", blade)]
        if any(i < 1 or i > n for i in idx):
            raise ValueError(f"generator index out of range in {text!r}")
        out = out + CliffordElement.blade(n, *idx, coeff=coeff)
        pos = m.end()
        first = False
    return out


def format_clifford(x) -> str:
    x = _as_element(x)
    items = sorted(x.terms.items(), key=lambda mc: (mc[0].bit_count(), indices_of(mc[0])))
    if not items:
        return "0"
    parts = []
    for m, c in items:
        blade = "".join(f"e{i}" for i in indices_of(m))
        mag = abs(c)
        if blade:
            body = blade if mag == 1 else f"{mag}*{blade}"
        else:
            body = str(mag)
        parts.append(("- " if c < 0 else "+ ") + body)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]
