"""Reductive decompositions g = h + p of sphere presentations and diagonal metrics.

Families (ambient matrices act on F^{n+1}, x0 = e_0):

    so       SO(n+1)/SO(n)                          p = p1
    u        U(n+1)/U(n)                            p = p1 + p2, p2 = Im C at (0, 0)
    su       SU(n+1)/SU(n)                          p2 = i diag(n, -1, ..., -1)
    sp       Sp(n+1)/Sp(n)                          p2 = Im H at (0, 0)
    sp-split Sp(n+1)/Sp(n), p2 = p21 (j, k) + p22 (i)
    sp-sp1   Sp(n+1) x Sp(1) / Sp(n) x diag Sp(1)   p2 = {(X, -X)}
    sp-u1    Sp(n+1) x U(1) / Sp(n) x diag U(1)     p21 (j, k) + p22 = {(X, -X), X in R i}
    spin9    Spin(9)/Spin(7) acting on R^16

The two product families use (n+2) x (n+2) quaternionic matrices whose last
diagonal entry carries the extra factor, which acts on the right:
(A, l) . x = A x - x l infinitesimally.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping

import numpy as np

from .algebra import Field, MatF, Scalar, as_exact, inner, realify

FAMILIES = ("so", "u", "su", "sp", "sp-split", "sp-sp1", "sp-u1", "spin9")
EXTENDED = ("sp-sp1", "sp-u1")


@dataclass(frozen=True)
class FamilyTag:
    kind: str
    n: int = 1

    def __post_init__(self):
        if self.kind not in FAMILIES:
            raise ValueError(f"unknown family {self.kind!r}; expected one of {', '.join(FAMILIES)}")
        if self.kind != "spin9" and self.n < 1:
            raise ValueError("n must be positive")
        if self.kind == "so" and self.n < 1:
            raise ValueError("n must be positive")

    @property
    def field(self) -> Field:
        if self.kind == "so" or self.kind == "spin9":
            return Field.R
        if self.kind in ("u", "su"):
            return Field.C
        return Field.H

    @property
    def size(self) -> int:
        if self.kind == "spin9":
            return 16
        return self.n + 2 if self.kind in EXTENDED else self.n + 1

    @property
    def sphere_dim(self) -> int:
        if self.kind == "spin9":
            return 15
        return self.field.dim * (self.n + 1) - 1

    def label(self) -> str:
        return "spin9" if self.kind == "spin9" else f"{self.kind}(n={self.n})"


def _e(field: Field, N: int, entries) -> MatF:
    return MatF.from_sparse(field, N, entries)


def _lower_block_basis(field: Field, N: int, lo: int, hi: int, traceless: bool = False) -> list[MatF]:
    """Orthogonal basis of u_F on indices lo..hi-1 (traceless diagonal if asked)."""
    d = field.dim
    out = []
    idx = range(lo, hi)
    for a in idx:
        for b in idx:
            if a < b:
                for c in range(d):
                    # entry (a, b) = e_c, entry (b, a) = -conj(e_c)
                    out.append(_e(field, N, [(a, b, c, 1), (b, a, c, -1 if c == 0 else 1)]))
    m = hi - lo
    if traceless:
        for k in range(1, m):
            entries = [(lo + r, lo + r, 1, 1) for r in range(k)] + [(lo + k, lo + k, 1, -k)]
            out.append(_e(field, N, entries))
    else:
        for a in idx:
            for c in range(1, d):
                out.append(_e(field, N, [(a, a, c, 1)]))
    return out


def _p1_basis(field: Field, N: int, n: int) -> list[MatF]:
    out = []
    for k in range(1, n + 1):
        for c in range(field.dim):
            out.append(_e(field, N, [(k, 0, c, 1), (0, k, c, -1 if c == 0 else 1)]))
    return out


@dataclass
class ReductiveDecomposition:
    family: FamilyTag
    parts: Mapping[str, tuple[MatF, ...]]
    p2_parts: tuple[str, ...] = ()
    _norms: dict = field(default_factory=dict, repr=False)

    @property
    def field(self) -> Field:
        return self.family.field

    @property
    def size(self) -> int:
        return self.family.size

    @property
    def p_parts(self) -> tuple[str, ...]:
        return tuple(k for k in self.parts if k != "h")

    def dims(self) -> dict[str, int]:
        return {k: len(v) for k, v in self.parts.items()}

    def basis(self, part: str) -> tuple[MatF, ...]:
        if part == "p":
            return tuple(b for k in self.p_parts for b in self.parts[k])
        if part == "p2" and "p2" not in self.parts:
            return tuple(b for k in self.p2_parts for b in self.parts[k])
        if part == "g":
            return tuple(b for k in self.parts for b in self.parts[k])
        if part not in self.parts:
            raise ValueError(f"unknown part {part!r} for {self.family.label()}")
        return self.parts[part]

    def _norm(self, b: MatF) -> Fraction:
        key = id(b)
        if key not in self._norms:
            self._norms[key] = inner(b, b)
        return self._norms[key]

    def _check(self, u: MatF) -> None:
        if u.field is not self.field or u.n != self.size:
            raise ValueError(
                f"{self.family.label()} expects {self.size}x{self.size} matrices over {self.field.name}, "
                f"got {u.n}x{u.n} over {u.field.name}"
            )

    def coords(self, u: MatF, part: str) -> list[Scalar]:
        self._check(u)
        return [inner(u, b) / self._norm(b) for b in self.basis(part)]

    def project(self, u: MatF, part: str) -> MatF:
        """Orthogonal projection onto a part (h, p1, p2, p21, p22, p or g)."""
        self._check(u)
        out = MatF.zeros(self.field, self.size, exact=u.exact)
        for c, b in zip(self.coords(u, part), self.basis(part)):
            if c:
                out = out + (b if u.exact else b.to_float()) * c
        return out

    def contains(self, u: MatF, tol: float = 1e-9) -> bool:
        """True when U lies in the ambient Lie algebra g."""
        resid = u - self.project(u, "g")
        return resid.is_zero(0.0 if u.exact else tol)

    def tangent(self, u: MatF) -> MatF | np.ndarray:
        """Infinitesimal action of U at x0, as a real vector."""
        self._check(u)
        if self.family.kind in EXTENDED:
            N = self.size
            col = u.comps[:, : N - 1, 0].copy()
            col[:, 0] = col[:, 0] - u.comps[:, N - 1, N - 1]
            return col.T.reshape(-1)
        return u.comps[:, :, 0].T.reshape(-1)

    @cached_property
    def real_frames(self) -> dict[str, np.ndarray]:
        """Per part, rows of unit vectors in flattened realified coordinates.

        With R(U) the realified matrix, inner(U, V) = <R(U), R(V)>_F / (2 d).
        """
        d = self.field.dim
        out = {}
        for name, basis in self.parts.items():
            rows = []
            for b in basis:
                r = realify(b.to_float()).astype(np.float64).ravel()
                rows.append(r / np.linalg.norm(r))
            out[name] = np.array(rows) if rows else np.zeros((0, (self.size * d) ** 2))
        return out


def _family_parts(tag: FamilyTag) -> tuple[dict[str, tuple[MatF, ...]], tuple[str, ...]]:
    kind, n = tag.kind, tag.n
    F, N = tag.field, tag.size
    if kind == "so":
        return {"h": tuple(_lower_block_basis(F, N, 1, n + 1)), "p1": tuple(_p1_basis(F, N, n))}, ()
    if kind in ("u", "sp"):
        h = _lower_block_basis(F, N, 1, n + 1)
        p2 = [_e(F, N, [(0, 0, c, 1)]) for c in range(1, F.dim)]
        return {"h": tuple(h), "p1": tuple(_p1_basis(F, N, n)), "p2": tuple(p2)}, ()
    if kind == "su":
        h = _lower_block_basis(F, N, 1, n + 1, traceless=True)
        p2 = [_e(F, N, [(0, 0, 1, n)] + [(a, a, 1, -1) for a in range(1, n + 1)])]
        return {"h": tuple(h), "p1": tuple(_p1_basis(F, N, n)), "p2": tuple(p2)}, ()
    if kind == "sp-split":
        h = _lower_block_basis(F, N, 1, n + 1)
        p21 = [_e(F, N, [(0, 0, c, 1)]) for c in (2, 3)]
        p22 = [_e(F, N, [(0, 0, 1, 1)])]
        return {"h": tuple(h), "p1": tuple(_p1_basis(F, N, n)), "p21": tuple(p21), "p22": tuple(p22)}, ("p21", "p22")
    if kind == "sp-sp1":
        last = N - 1
        h = _lower_block_basis(F, N, 1, n + 1)
        h += [_e(F, N, [(0, 0, c, 1), (last, last, c, 1)]) for c in (1, 2, 3)]
        p2 = [_e(F, N, [(0, 0, c, 1), (last, last, c, -1)]) for c in (1, 2, 3)]
        return {"h": tuple(h), "p1": tuple(_p1_basis(F, N, n)), "p2": tuple(p2)}, ()
    if kind == "sp-u1":
        last = N - 1
        h = _lower_block_basis(F, N, 1, n + 1)
        h += [_e(F, N, [(0, 0, 1, 1), (last, last, 1, 1)])]
        p21 = [_e(F, N, [(0, 0, c, 1)]) for c in (2, 3)]
        p22 = [_e(F, N, [(0, 0, 1, 1), (last, last, 1, -1)])]
        return {"h": tuple(h), "p1": tuple(_p1_basis(F, N, n)), "p21": tuple(p21), "p22": tuple(p22)}, ("p21", "p22")
    if kind == "spin9":
        from .spin9 import bivector_parts, theta

        parts = bivector_parts()
        return {name: tuple(theta(b) for b in parts[name]) for name in ("h", "p1", "p2")}, ()
    raise ValueError(kind)


@lru_cache(maxsize=None)
def build_decomposition(tag: FamilyTag | str, n: int | None = None) -> ReductiveDecomposition:
    """Orthogonal decomposition of the ambient algebra; verified on construction."""
    if isinstance(tag, str):
        tag = FamilyTag(tag, 1 if n is None else n)
    parts, p2_parts = _family_parts(tag)
    d = ReductiveDecomposition(tag, parts, p2_parts)
    _verify(d)
    return d


def _verify(d: ReductiveDecomposition) -> None:
    allb = [(name, b) for name in d.parts for b in d.parts[name]]
    for b in (b for _, b in allb):
        if not b.is_skew_hermitian():
            raise RuntimeError("basis element is not skew-Hermitian")
    for name, b in allb:
        t = d.tangent(b)
        if name == "h" and any(t):
            raise RuntimeError("isotropy basis element moves x0")
    if d.family.kind != "spin9":
        # orthogonality is exact by construction for the sparse bases; check it
        for a in range(len(allb)):
            for c in range(a):
                if inner(allb[a][1], allb[c][1]) != 0:
                    raise RuntimeError("decomposition basis is not orthogonal")


# ---------------------------------------------------------------- metrics


@dataclass(frozen=True)
class DiagonalMetric:
    """Ad(H)-invariant metric sum_k x_k <.,.>|p_k, parametrized by t (and s).

    ``scale`` multiplies every coefficient (a homothety).
    """

    family: FamilyTag
    t: Fraction | float = Fraction(1)
    s: Fraction | float | None = None
    scale: Fraction | float = Fraction(1)

    def __post_init__(self):
        for name in ("t", "s", "scale"):
            v = getattr(self, name)
            if v is None:
                continue
            if not isinstance(v, float):
                object.__setattr__(self, name, as_exact(v))
        if self.family.kind in ("sp-split", "sp-u1") and self.s is None:
            object.__setattr__(self, "s", self.t)

    def coefficients(self) -> dict[str, Scalar]:
        kind, n, t, s = self.family.kind, self.family.n, self.t, self.s
        one = Fraction(1) if not isinstance(t, float) else 1.0
        if kind == "so":
            c = {"p1": one}
        elif kind in ("u", "sp"):
            c = {"p1": one, "p2": 2 * t}
        elif kind == "su":
            c = {"p1": one, "p2": 2 * n * t / (n + 1) if isinstance(t, float) else Fraction(2 * n, n + 1) * t}
        elif kind == "sp-split":
            c = {"p1": one, "p21": 2 * t, "p22": 2 * s}
        elif kind == "sp-u1":
            c = {"p1": one, "p21": 2 * t, "p22": 4 * s}
        elif kind == "sp-sp1":
            c = {"p1": one, "p2": 4 * t}
        elif kind == "spin9":
            c = {"p1": one / 8, "p2": t / 2}
        else:  # pragma: no cover
            raise ValueError(kind)
        return {k: self.scale * v for k, v in c.items()}

    def canonical_round(self) -> "DiagonalMetric":
        return DiagonalMetric(self.family, Fraction(1), Fraction(1) if self.s is not None else None)


def round_metric(tag: FamilyTag) -> DiagonalMetric:
    return DiagonalMetric(tag, Fraction(1))


def normal_parameter(tag: FamilyTag) -> Fraction:
    """Parameter t of the normal metric of the presentation (s = t/2 for sp-u1)."""
    if tag.kind in ("u", "sp", "sp-split", "sp-u1"):
        return Fraction(1, 2)
    if tag.kind == "su":
        return Fraction(tag.n + 1, 2 * tag.n)
    if tag.kind == "sp-sp1":
        return Fraction(1, 4)
    if tag.kind == "spin9":
        return Fraction(1, 4)
    return Fraction(1)


def metric_inner(m: DiagonalMetric, x: MatF, y: MatF, decomp: ReductiveDecomposition | None = None, tol: float = 1e-9) -> Scalar:
    """(X, Y)_m for X, Y in p. Raises if either has an h-component."""
    d = decomp or build_decomposition(m.family)
    for z in (x, y):
        h = d.project(z, "h")
        if not h.is_zero(0.0 if z.exact else tol * max(1.0, z.max_abs())):
            raise ValueError("argument has a nonzero component in the isotropy algebra")
    total = Fraction(0) if (x.exact and y.exact) else 0.0
    for part, coeff in m.coefficients().items():
        xp, yp = d.project(x, part), d.project(y, part)
        total = total + coeff * inner(xp, yp)
    return total


def batch_metric_norm2(m: DiagonalMetric, real_mats: np.ndarray, decomp: ReductiveDecomposition | None = None) -> np.ndarray:
    """(P U, P U)_m for a stack of realified matrices U, ignoring h-components."""
    d = decomp or build_decomposition(m.family)
    flat = real_mats.reshape(real_mats.shape[0], -1)
    scale = 1.0 / (2 * d.field.dim)
    total = np.zeros(flat.shape[0])
    for part, coeff in m.coefficients().items():
        frame = d.real_frames[part]
        total += float(coeff) * scale * np.sum((flat @ frame.T) ** 2, axis=1)
    return total
