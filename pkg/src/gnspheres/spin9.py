"""The spin(9) representation on R^16 = O + O and its Killing fields.

phi(x)(a, b) = (x b, -conj(x) a) defines anticommuting complex structures
phi_1, ..., phi_8 (for the octonion units o_0, ..., o_7). The Lie algebra
map is theta(e_i e_9) = phi_i and theta(e_i e_j) = phi_i phi_j.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

import numpy as np

from .algebra import (
    Field,
    HyperComplex,
    MatF,
    as_exact,
    gram_schmidt,
    nullspace,
    signed_table,
    solve,
    structure_constants,
)
from .clifford import Bivector, bivector_from_vectors, pairs, simple_square, spin9_inner
from .killing import KillingCertificate

DIM = 16
PAIRS = pairs(9)
_INDEX = {p: k for k, p in enumerate(PAIRS)}


def octonion_table() -> np.ndarray:
    """Signed multiplication table: T[i, j] = +-(k+1) when o_i o_j = +-o_k."""
    return signed_table(8)


def left_mult(x: Sequence[int]) -> np.ndarray:
    """Integer matrix of b -> x b on O for integer coefficients x."""
    s = structure_constants(8)
    return np.tensordot(np.asarray(x, dtype=np.int64), s, axes=(0, 0)).T


@dataclass(frozen=True)
class SpinEmbedding:
    phi: np.ndarray  # (8, 16, 16) int64
    basis: np.ndarray  # (36, 16, 16) int64, theta(e_i e_j) in PAIRS order

    def theta_basis(self, i: int, j: int) -> np.ndarray:
        if i > j:
            return -self.basis[_INDEX[(j, i)]]
        return self.basis[_INDEX[(i, j)]]


def _phi(m: int) -> np.ndarray:
    x = np.zeros(8, dtype=np.int64)
    x[m] = 1
    xbar = -x
    xbar[0] = x[0]
    out = np.zeros((DIM, DIM), dtype=np.int64)
    out[:8, 8:] = left_mult(x)
    out[8:, :8] = -left_mult(xbar)
    return out


@lru_cache(maxsize=1)
def build_embedding() -> SpinEmbedding:
    """Build and verify the embedding. Raises if a defining identity fails."""
    phi = np.stack([_phi(m) for m in range(8)])
    ident = np.eye(DIM, dtype=np.int64)
    for a in range(8):
        for b in range(8):
            anti = phi[a] @ phi[b] + phi[b] @ phi[a]
            expected = -2 * ident if a == b else 0 * ident
            if not np.array_equal(anti, expected):
                raise RuntimeError(f"phi_{a + 1}, phi_{b + 1} violate the Clifford relation")
    basis = []
    for i, j in PAIRS:
        basis.append(phi[i - 1] if j == 9 else phi[i - 1] @ phi[j - 1])
    basis = np.stack(basis)
    for b in basis:
        if not np.array_equal(b.T, -b) or not np.array_equal(b @ b, -ident):
            raise RuntimeError("theta basis element is not a complex structure")
    gram = np.einsum("aij,bij->ab", basis, basis)
    if not np.array_equal(gram, 16 * np.eye(len(PAIRS), dtype=np.int64)):
        raise RuntimeError("theta basis is not orthogonal; rank is below 36")
    phi.flags.writeable = False
    basis.flags.writeable = False
    return SpinEmbedding(phi, basis)


def _as_bivector(w) -> Bivector:
    if isinstance(w, Bivector):
        if w.n != 9:
            raise ValueError("expected a bivector of Cl^9")
        return w
    return Bivector.from_clifford(w)


def theta_int(w) -> tuple[np.ndarray, int]:
    """(M, D) with theta(W) = M / D and M an integer matrix."""
    w = _as_bivector(w)
    coords = w.coords()
    den = lcm(*(c.denominator for c in coords)) if coords else 1
    nums = [int(c * den) for c in coords]
    if max(map(abs, nums), default=0) < 1 << 40:
        m = np.tensordot(np.array(nums, dtype=np.int64), build_embedding().basis, axes=(0, 0))
    else:
        m = np.tensordot(np.array(nums, dtype=object), build_embedding().basis.astype(object), axes=(0, 0))
    return m, den


def theta(w) -> MatF:
    """Exact image of a bivector in so(16)."""
    m, den = theta_int(w)
    comps = np.empty((1, DIM, DIM), dtype=object)
    for a in range(DIM):
        for b in range(DIM):
            comps[0, a, b] = Fraction(int(m[a, b]), den)
    return MatF(Field.R, comps)


def theta_float(w) -> np.ndarray:
    w = _as_bivector(w)
    coords = np.array([float(c) for c in w.coords()])
    return np.tensordot(coords, build_embedding().basis.astype(np.float64), axes=(0, 0))


def theta_inverse(u: MatF) -> Bivector:
    """Bivector W with theta(W) = U; raises if U is not in the image."""
    basis = build_embedding().basis
    c = u.comps[0]
    coords = [Fraction(1, 16) * sum(as_exact(x) * int(y) for x, y in zip(c.ravel(), b.ravel()) if y) for b in basis]
    w = Bivector.from_coords(9, coords)
    if not theta(w).equals(u.to_exact() if not u.exact else u, 0.0 if u.exact else 1e-9):
        raise ValueError("matrix is not in the image of spin(9)")
    return w


def tangent(w) -> list[Fraction]:
    """theta(W) x0, the Killing vector at x0 = (1, 0, ..., 0)."""
    m, den = theta_int(w)
    return [Fraction(int(x), den) for x in m[:, 0]]


@lru_cache(maxsize=1)
def bivector_parts() -> dict[str, tuple[Bivector, ...]]:
    """Exact orthogonal bases of the isotropy algebra h and of p1, p2.

    h is the stabilizer of x0, p2 its complement in spin(8), and p1 the span
    of the e_i e_9.
    """
    basis = build_embedding().basis
    # rows: the 16 components of theta(.) x0 as linear forms in the 36 coords
    rows = [[int(basis[k, r, 0]) for k in range(len(PAIRS))] for r in range(DIM)]
    h = gram_schmidt(nullspace(rows, len(PAIRS)))
    spin8 = [k for k, (i, j) in enumerate(PAIRS) if j != 9]
    # complement of h inside spin(8): kernel of the Gram map against h
    orth_rows = [[vec[k] for k in spin8] for vec in h]
    p2_small = gram_schmidt(nullspace(orth_rows, len(spin8)))
    p2 = []
    for vec in p2_small:
        full = [Fraction(0)] * len(PAIRS)
        for k, x in zip(spin8, vec):
            full[k] = x
        p2.append(full)
    p1 = [Bivector(9, {(i, 9): 1}) for i in range(1, 9)]
    return {
        "h": tuple(Bivector.from_coords(9, v) for v in h),
        "p1": tuple(p1),
        "p2": tuple(Bivector.from_coords(9, v) for v in p2),
    }


def bivector_project(w: Bivector, part: str) -> Bivector:
    """Orthogonal projection onto a part (h, p1, p2 or p)."""
    parts = bivector_parts()
    names = ("p1", "p2") if part == "p" else (part,)
    out = Bivector(9)
    for name in names:
        for b in parts[name]:
            c = spin9_inner(w, b) / spin9_inner(b, b)
            if c:
                out = out + b * c
    return out


@lru_cache(maxsize=1)
def _tangent_frame():
    """Orthogonal images of the p-basis under W -> theta(W) x0."""
    parts = bivector_parts()
    frame = []
    for b in parts["p1"] + parts["p2"]:
        t = tangent(b)
        frame.append((b, t, sum((x * x for x in t), Fraction(0))))
    for a in range(len(frame)):
        for c in range(a):
            if sum((x * y for x, y in zip(frame[a][1], frame[c][1])), Fraction(0)):
                raise RuntimeError("tangent images of the p-basis are not orthogonal")
    return tuple(frame)


def p_preimage(u: Sequence) -> tuple[Bivector, Bivector]:
    """(W1, W2) in p1 + p2 with theta(W1 + W2) x0 = u."""
    u = [as_exact(x) for x in u]
    if len(u) != DIM:
        raise ValueError(f"expected a vector in R^{DIM}")
    if u[0] != 0:
        raise ValueError("tangent vectors at x0 must have zero first coordinate")
    w1, w2 = Bivector(9), Bivector(9)
    for b, t, nt in _tangent_frame():
        c = sum((x * y for x, y in zip(u, t)), Fraction(0)) / nt
        if not c:
            continue
        if any(j == 9 for (_, j) in b.gamma):
            w1 = w1 + b * c
        else:
            w2 = w2 + b * c
    return w1, w2


def _orth_basis(v: Sequence[Fraction]) -> list[list[Fraction]]:
    """Rational basis of the orthogonal complement of v in R^8."""
    return nullspace([list(v)], 8)


def cw_field_spin9(u: Sequence) -> Bivector:
    """Simple bivector W with theta(W) x0 = u; theta(W) has constant length |u|.

    W = v (y + e_9): v in R^8 carries the p1 part and y, orthogonal
    to v, is found by inverting the p2 part of W -> p(v y).
    """
    w1, w2 = p_preimage(u)
    v = [w1.gamma.get((i, 9), Fraction(0)) for i in range(1, 9)]
    if not any(v):
        v = [Fraction(1)] + [Fraction(0)] * 7
    comp = _orth_basis(v)
    parts = bivector_parts()
    p2 = parts["p2"]
    cols = []
    for b in comp:
        z = bivector_from_vectors(list(v) + [0], list(b) + [0])
        cols.append([spin9_inner(z, q) / spin9_inner(q, q) for q in p2])
    target = [spin9_inner(w2, q) / spin9_inner(q, q) for q in p2]
    a = [[cols[c][r] for c in range(len(comp))] for r in range(len(p2))]
    coeffs = solve(a, target)
    y = [sum((c * b[k] for c, b in zip(coeffs, comp)), Fraction(0)) for k in range(8)]
    e9 = Fraction(1) if any(w1.gamma.values()) else Fraction(0)
    w = bivector_from_vectors(list(v) + [0], y + [e9])
    if tangent(w) != [as_exact(x) for x in u]:
        raise RuntimeError("construction does not reproduce the tangent vector")
    return w


@dataclass(frozen=True)
class Spin9Certificate:
    """Exact check of theta(W)^2 = -C^2 Id."""

    W: Bivector
    C2: Fraction
    equations: int
    block_equations: int

    def killing(self) -> KillingCertificate:
        return KillingCertificate(theta(self.W), self.C2, 0.0)


def certify_spin9(w) -> Spin9Certificate | None:
    """Square theta(W) over the integers and compare with -C^2 Id."""
    w = _as_bivector(w)
    c2 = simple_square(w)
    if c2 is None:
        return None
    m, den = theta_int(w)
    if m.dtype != object and np.max(np.abs(m), initial=0) > 1 << 28:
        m = m.astype(object)
    sq = m @ m
    target = -c2 * den * den
    if target.denominator != 1:
        return None
    expected = np.diag([int(target)] * DIM)
    if not np.array_equal(np.asarray(sq, dtype=object), expected.astype(object)):
        return None
    # symmetric 16 x 16 system; the lower 15 x 15 block alone holds
    # 105 off-diagonal equations and 14 diagonal equalities
    return Spin9Certificate(w, c2, DIM * DIM, 15 * 14 // 2 + 14)


def octonion(coeffs: Sequence) -> HyperComplex:
    return HyperComplex(Field.O, coeffs)


# ---------------------------------------------------------------- identities

X1_TEXT = "e7e8 - e1e2 - e3e4 - e5e6"
H_SUMMANDS = ("e1e2 + e7e8", "e3e4 + e7e8", "e5e6 + e7e8")
PAIR_X_TEXT = "e2e9"
PAIR_Y_TEXT = "e1e2 + e3e4 + e5e6 - e7e8"
PAIR_Z_TEXT = "-3*e1e2 + e3e4 + e5e6 - e7e8"


def verify_spin9_identities(core_only: bool = False) -> list:
    """Exact checks of the distinguished spin(9) vectors.

    The four core records cover X1 + Y' = 4 e7e8, its simplicity with C = 4,
    [[Y, X], X] = -4 e1e2 = Z - Y, and (X1, X1)_t = 16 t.
    """
    from .algebra import inner
    from .clifford import cl_bracket, is_simple, parse_clifford
    from .homspace import DiagonalMetric, FamilyTag, build_decomposition, metric_inner
    from .report import CheckRecord

    def cl(text):
        return parse_clifford(text, 9)

    x1 = cl(X1_TEXT)
    y_sum = cl(H_SUMMANDS[0]) + cl(H_SUMMANDS[1]) + cl(H_SUMMANDS[2])
    v = x1 + y_sum
    x, y, z = cl(PAIR_X_TEXT), cl(PAIR_Y_TEXT), cl(PAIR_Z_TEXT)
    m = cl_bracket(cl_bracket(y, x), x)
    tag = FamilyTag("spin9", 1)
    d = build_decomposition(tag)
    tx1 = theta(x1)
    ts = [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3, 2)]
    coeff16 = all(metric_inner(DiagonalMetric(tag, t), tx1, tx1, d) == 16 * t for t in ts)
    simple = is_simple(v)
    anchor_v = "X1 in p2 plus three h basis vectors gives the simple bivector 4 e7e8"
    anchor_pair = "spin(9) upper bound pair X = e2e9, Y = -X1"
    recs = [
        CheckRecord("X1 + (e1e2+e7e8) + (e3e4+e7e8) + (e5e6+e7e8) = 4*e7e8", v == cl("4*e7e8"), str(v), "4*e7e8", anchor_v, "spin9"),
        CheckRecord("is_simple(4*e7e8) = 4", simple == 4, simple, 4, anchor_v, "spin9"),
        CheckRecord("[[Y,X],X] = -4*e1e2 = Z - Y", m == cl("-4*e1e2") and m == z - y, str(m), "-4*e1e2", anchor_pair, "spin9"),
        CheckRecord("(X1,X1)_t = 16 t", coeff16, "16t" if coeff16 else "mismatch", "16t", "p2 coefficient t/2 of the spin(9) metric family", "spin9"),
    ]
    if core_only:
        return recs
    e89 = theta(cl("e8e9"))
    recs += [
        CheckRecord("<X1,X1> = 32", inner(tx1, tx1) == 32, inner(tx1, tx1), 32, "inner product on spin(9) from so(16)", "spin9"),
        CheckRecord("<Z,Z> = 96", inner(theta(z), theta(z)) == 96, inner(theta(z), theta(z)), 96, anchor_pair, "spin9"),
        CheckRecord("<-Y,-Y> = 32", inner(theta(-y), theta(-y)) == 32, inner(theta(-y), theta(-y)), 32, anchor_pair, "spin9"),
        CheckRecord("X1 lies in p2", d.project(tx1, "p2").equals(tx1), None, None, "p2 is the complement of spin(7) in spin(8)", "spin9"),
        CheckRecord("Z lies in h", d.project(theta(z), "h").equals(theta(z)), None, None, anchor_pair, "spin9"),
        CheckRecord("(e8e9,e8e9)_t = 1", all(metric_inner(DiagonalMetric(tag, t), e89, e89, d) == 1 for t in ts), None, 1, "p1 coefficient 1/8", "spin9"),
        CheckRecord("theta([Y,X]) = [theta(Y),theta(X)]",
                    theta(cl_bracket(y, x)).equals(theta(y) @ theta(x) - theta(x) @ theta(y)), None, None, "theta is a Lie algebra map", "spin9"),
    ]
    for text in H_SUMMANDS:
        t0 = tangent(cl(text))
        recs.append(CheckRecord(f"theta({text}) x0 = 0", not any(t0), None, 0, "summands of Y' lie in the isotropy algebra spin(7)", "spin9"))
    return recs
