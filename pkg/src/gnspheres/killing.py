"""Constant-length Killing fields on spheres and round-metric delta-vectors.

A skew-Hermitian U gives the Killing field x -> U x on the unit sphere. It
has constant length iff U^2 = -C^2 Id. It is a delta-vector for the round
metric at x0 = (1, 0, ..., 0) iff |U x0| >= |U x| for every unit x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import Field, HyperComplex, MatF, as_exact, is_psd_exact, realify, sym_eigvals

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class KillingCertificate:
    """U with U^2 = -C^2 Id, up to the recorded residual."""

    U: MatF
    C2: Fraction | float
    residual: float

    @property
    def C(self) -> float:
        return math.sqrt(max(float(self.C2), 0.0))

    @property
    def exact(self) -> bool:
        return isinstance(self.C2, Fraction) and self.residual == 0

    @property
    def in_unit_group(self) -> bool:
        """True when C = 1, so that U is itself unitary."""
        return abs(float(self.C2) - 1.0) <= DEFAULT_TOL


@dataclass(frozen=True)
class DeltaCertificate:
    """Outcome of the round-metric delta-vector test at x0."""

    U: MatF
    lam2: Fraction | float
    psd_margin: float
    offdiag_residual: float
    accepted: bool

    @property
    def lam(self) -> float:
        return math.sqrt(max(float(self.lam2), 0.0))


def _require_skew(u: MatF, tol: float) -> None:
    if not u.is_skew_hermitian(tol):
        raise ValueError("matrix is not skew-Hermitian")


def constant_length_test(u: MatF, tol: float = DEFAULT_TOL) -> KillingCertificate | None:
    """Certificate when U^2 = -C^2 Id, otherwise None."""
    _require_skew(u, tol)
    sq = u @ u
    n = u.n
    diag = [sq.comps[0, a, a] for a in range(n)]
    if u.exact:
        s = diag[0]
        target = MatF.identity(u.field, n, exact=True) * s
        if not sq.equals(target):
            return None
        return KillingCertificate(u, -s, 0.0)
    s = float(np.mean(diag))
    resid = (sq - MatF.identity(u.field, n, exact=False) * s).max_abs()
    scale = max(1.0, abs(s))
    if resid > tol * scale or -s < -tol * scale:
        return None
    return KillingCertificate(u, -s, resid)


def _validate_vector(field: Field, n: int, v: Sequence[HyperComplex]) -> list[HyperComplex]:
    if field is Field.O:
        raise ValueError("use the spin(9) construction for octonionic vectors")
    if len(v) != n + 1:
        raise ValueError(f"expected {n + 1} entries, got {len(v)}")
    out = []
    for x in v:
        if not isinstance(x, HyperComplex):
            x = HyperComplex(field, [x])
        if x.field is not field:
            raise ValueError("vector entries must lie in the family's field")
        out.append(x)
    if not out[0].is_imaginary():
        raise ValueError("first entry must be imaginary: tangent vectors at x0 are orthogonal to x0")
    return out


def _phase(q: HyperComplex) -> HyperComplex:
    n = q.norm()
    if n == 0:
        return HyperComplex.real(q.field, 1.0)
    return HyperComplex(q.field, [float(c) / n for c in q.coeffs])


def unitary_taking_e1_to(field: Field, a: Sequence[HyperComplex]) -> MatF:
    """Unitary g over the field with g e1 = a, for a unit vector a.

    g is a Householder reflection composed with a phase on the first
    coordinate.
    """
    n = len(a)
    mu = _phase(a[0])
    mu_bar = mu.conj()
    ap = [HyperComplex(field, [float(c) for c in x.coeffs]) * mu_bar for x in a]
    w = [(HyperComplex.real(field, 1.0) if k == 0 else HyperComplex.real(field, 0.0)) - ap[k] for k in range(n)]
    w2 = sum(x.norm2() for x in w)
    comps = np.zeros((field.dim, n, n))
    for k in range(n):
        comps[0, k, k] = 1.0
    if w2 > 1e-30:
        for r in range(n):
            for c in range(n):
                comps[:, r, c] -= 2.0 / w2 * np.array((w[r] * w[c].conj()).coeffs, dtype=float)
    h = MatF(field, comps)
    phase = np.zeros((field.dim, n, n))
    for k in range(n):
        phase[0, k, k] = 1.0
    phase[:, 0, 0] = mu.coeffs
    return h @ MatF(field, phase)


def cw_field_for_vector(field: Field | str, n: int, v: Sequence) -> MatF:
    """Constant-length Killing field U on S^{d(n+1)-1} with U x0 = v.

    Real case requires n + 1 even and v[0] = 0. For exact input the first
    row and column hold v as Fractions; the rotated lower block is always
    floating point, so such a U is a mixed (not exact) MatF.
    """
    field = Field.parse(field)
    v = _validate_vector(field, n, v)
    if field is Field.R and (n + 1) % 2:
        raise ValueError("real case requires an even ambient dimension n + 1")
    N = n + 1
    u1, u = v[0], v[1:]
    unorm2 = sum(x.norm2() for x in u)
    if unorm2 == 0:
        # diag(u1, -u1, u1, ...); zero in the real case
        entries = []
        for k in range(N):
            sign = 1 if k % 2 == 0 else -1
            for c, val in enumerate(u1.coeffs):
                if val:
                    entries.append((k, k, c, sign * as_exact(val)))
        out = MatF.from_sparse(field, N, entries)
        return out if all(x.exact for x in v) else out.to_float()
    vnorm = math.sqrt(float(unorm2 + u1.norm2()))
    unorm = math.sqrt(float(unorm2))
    unn = np.zeros((field.dim, n, n))
    if field is Field.R:
        for k in range(1, n - 1, 2):
            unn[0, k, k + 1] = -vnorm
            unn[0, k + 1, k] = vnorm
    else:
        unn[:, 0, 0] = [-float(c) for c in u1.coeffs]
        for k in range(1, n):
            unn[1, k, k] = vnorm if k % 2 else -vnorm
    a = [HyperComplex(field, [float(c) / unorm for c in x.coeffs]) for x in u]
    g = unitary_taking_e1_to(field, a)
    rotated = g @ MatF(field, unn) @ g.adjoint()
    inner_block = 0.5 * (rotated.comps - rotated.adjoint().comps)  # exactly skew in floats
    exact = all(x.exact for x in v)
    comps = np.empty((field.dim, N, N), dtype=object) if exact else np.zeros((field.dim, N, N))
    comps[:, 1:, 1:] = inner_block.astype(object) if exact else inner_block
    conv = as_exact if exact else float
    comps[:, 0, 0] = [conv(c) for c in u1.coeffs]
    for k in range(n):
        col = [conv(c) for c in u[k].coeffs]
        comps[:, k + 1, 0] = col
        comps[:, 0, k + 1] = [-col[0]] + col[1:]
    return MatF(field, comps)


def su_delta_field(n: int, v: Sequence) -> MatF:
    """Traceless delta-vector for the round metric of S^{2n+1} with U x0 = v.

    The lower block is -u1 u u* / |u|^2, so the output is exact for exact input.
    """
    v = _validate_vector(Field.C, n, v)
    N = n + 1
    u1, u = v[0], v[1:]
    exact = all(x.exact for x in v)
    m = MatF.zeros(Field.C, N, exact=True)
    comps = m.comps.copy()
    vals = [[as_exact(c) for c in x.coeffs] for x in v]
    comps[:, 0, 0] = vals[0]
    unorm2 = sum((c * c for x in vals[1:] for c in x), Fraction(0))
    for k in range(1, N):
        comps[0, k, 0] = vals[k][0]
        comps[1, k, 0] = vals[k][1]
        comps[0, 0, k] = -vals[k][0]
        comps[1, 0, k] = vals[k][1]
    if unorm2 == 0:
        comps[:, 1, 1] = [-c for c in vals[0]]
    else:
        # -u1 * u_a * conj(u_b) / |u|^2 with u1 = i*alpha
        alpha = vals[0][1]
        for a in range(1, N):
            for b in range(1, N):
                re = vals[a][0] * vals[b][0] + vals[a][1] * vals[b][1]
                im = vals[a][1] * vals[b][0] - vals[a][0] * vals[b][1]
                # -i alpha (re + i im) = alpha im - i alpha re
                comps[0, a, b] = alpha * im / unorm2
                comps[1, a, b] = -alpha * re / unorm2
    out = MatF(Field.C, comps)
    return out if exact else out.to_float()


def round_delta_test(u: MatF, tol: float = DEFAULT_TOL) -> DeltaCertificate:
    """Check -U^2 = diag(lam^2, B) with lam^2 Id - B positive semidefinite."""
    _require_skew(u, tol)
    s = -(u @ u)
    lam2 = s.comps[0, 0, 0]
    off = s.comps.astype(np.float64).copy()
    off[0, 0, 0] = 0.0
    offdiag = float(max(np.max(np.abs(off[:, 0, :]), initial=0.0), np.max(np.abs(off[:, :, 0]), initial=0.0)))
    off_imag_corner = float(np.max(np.abs(s.comps[1:, 0, 0].astype(np.float64)), initial=0.0))
    offdiag = max(offdiag, off_imag_corner)
    b = MatF(u.field, s.comps[:, 1:, 1:])
    margin = 0.0
    if b.n:
        m = MatF.identity(u.field, b.n, exact=b.exact) * lam2 - b
        margin = float(np.min(sym_eigvals(realify(m.to_float()).astype(np.float64))))
        if m.exact and margin < 0 and is_psd_exact(realify(m)):
            # exact certificate: the negative float eigenvalue is roundoff
            margin = 0.0
    scale = max(1.0, abs(float(lam2)))
    accepted = offdiag <= tol * scale and margin >= -tol * scale
    return DeltaCertificate(u, lam2, margin, offdiag, accepted)


def orbit_label_u(u: MatF, tol: float = DEFAULT_TOL) -> tuple[int, Fraction]:
    """(l, alpha) for a unit constant-length field in u(n+1).

    l is the multiplicity of the eigenvalue +i and U = alpha i Id + V with V
    traceless. l comes from the trace and is cross-checked numerically.
    """
    if u.field is not Field.C:
        raise ValueError("orbit labels are defined for complex matrices")
    cert = constant_length_test(u, tol)
    if cert is None or abs(float(cert.C2) - 1.0) > tol:
        raise ValueError("matrix is not a unit constant-length field")
    N = u.n
    im_tr = u.trace().coeffs[1]
    two_l = im_tr + N
    if u.exact:
        if two_l.denominator != 1 or two_l.numerator % 2:
            raise ValueError("trace is inconsistent with eigenvalues +-i")
        l = int(two_l) // 2
    else:
        l = int(round(float(two_l) / 2))
        if abs(float(two_l) / 2 - l) > 1e-6:
            raise ValueError("trace is inconsistent with eigenvalues +-i")
    herm = -1j * u.to_complex()
    ev = np.linalg.eigvalsh(0.5 * (herm + herm.conj().T))
    if int(np.sum(ev > 0)) != l:
        raise ValueError("spectrum and trace disagree")
    return l, Fraction(2 * l, N) - 1
