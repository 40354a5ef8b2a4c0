"""Support functions of ellipsoids, dual p-means and the metric interpolation calculus.

For the ellipsoid E = {v : (v, A v) <= 1} the support function is
h(u) = sqrt((u, A^{-1} u)). The dual 2-mean of two ellipsoids is again an
ellipsoid, with matrix ((1 - theta) A1^{-1} + theta A2^{-1})^{-1}. On
diagonal invariant metrics this becomes componentwise harmonic-type
interpolation of the coefficients.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import Scalar, as_exact

MAX_COND = 1e12


def _inv_sym(a: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(a)
    if np.min(w) <= 0:
        raise ValueError("matrix is not positive definite")
    if np.max(w) / np.min(w) > MAX_COND:
        raise ValueError("matrix is too ill-conditioned to invert reliably")
    return (v / w) @ v.T


@dataclass(frozen=True)
class Ellipsoid:
    """Unit ball {v : (v, A v) <= 1} of a positive definite quadratic form."""

    A: np.ndarray

    def __post_init__(self):
        a = np.array(self.A, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square matrix")
        scale = max(1.0, float(np.max(np.abs(a))))
        if np.max(np.abs(a - a.T)) > 1e-12 * scale:
            raise ValueError("matrix is not symmetric")
        a = 0.5 * (a + a.T)
        w = np.linalg.eigvalsh(a)
        if np.min(w) <= 0:
            raise ValueError("matrix is not positive definite")
        if np.max(w) / np.min(w) > MAX_COND:
            raise ValueError("condition number above 1e12")
        a.flags.writeable = False
        object.__setattr__(self, "A", a)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def inverse(self) -> np.ndarray:
        return _inv_sym(self.A)

    def boundary(self, m: int = 10_000) -> np.ndarray:
        """m points on the boundary of a planar ellipsoid."""
        if self.dim != 2:
            raise ValueError("boundary meshes are provided for planar ellipsoids")
        w, v = np.linalg.eigh(self.A)
        ang = np.linspace(0.0, 2 * np.pi, m, endpoint=False)
        circle = np.stack([np.cos(ang), np.sin(ang)])
        return (v @ (circle / np.sqrt(w)[:, None])).T


def support(e: Ellipsoid, u) -> float:
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (e.dim,):
        raise ValueError(f"expected a vector of length {e.dim}")
    return float(math.sqrt(max(float(u @ e.inverse() @ u), 0.0)))


def sampled_support(e: Ellipsoid, u, m: int = 2048, refine: bool = True) -> float:
    """max <u, x> over a boundary mesh of a planar ellipsoid, refined locally.

    Independent of the closed form in ``support``: it only uses the
    boundary parametrization.
    """
    from scipy.optimize import minimize_scalar

    u = np.asarray(u, dtype=np.float64)
    pts = e.boundary(m)
    vals = pts @ u
    k = int(np.argmax(vals))
    if not refine:
        return float(vals[k])
    w, v = np.linalg.eigh(e.A)
    axes = v / np.sqrt(w)

    def neg(phi):
        return -float(u @ axes @ np.array([np.cos(phi), np.sin(phi)]))

    step = 2 * np.pi / m
    phi0 = k * step
    res = minimize_scalar(neg, bounds=(phi0 - step, phi0 + step), method="bounded", options={"xatol": 1e-12})
    return max(float(vals[k]), -float(res.fun))


def dual_p_mean_support(h1: float, h2: float, p: float, theta: float) -> float:
    """M_p(h1, h2) = ((1 - theta) h1^p + theta h2^p)^(1/p)."""
    if p < 1:
        raise ValueError("p must be at least 1")
    if h1 < 0 or h2 < 0:
        raise ValueError("support values must be nonnegative")
    if not 0 <= theta <= 1:
        raise ValueError("theta must lie in [0, 1]")
    return float(((1 - theta) * h1**p + theta * h2**p) ** (1.0 / p))


def dual_2_mean_ellipsoid(e1: Ellipsoid, e2: Ellipsoid, theta: float) -> Ellipsoid:
    if e1.dim != e2.dim:
        raise ValueError("ellipsoids have different dimensions")
    if not 0 <= theta <= 1:
        raise ValueError("theta must lie in [0, 1]")
    return Ellipsoid(_inv_sym((1 - theta) * e1.inverse() + theta * e2.inverse()))


def project_ellipsoid(e: Ellipsoid, q: np.ndarray) -> Ellipsoid:
    """Orthogonal projection onto the span of the orthonormal columns of q.

    Support functions restrict, so the projected body has inverse matrix
    q^T A^{-1} q in the coordinates given by q.
    """
    q = np.asarray(q, dtype=np.float64)
    return Ellipsoid(_inv_sym(q.T @ e.inverse() @ q))


# ---------------------------------------------------------------- metric parameters


@dataclass(frozen=True)
class MetricParams:
    """Positive coefficients x_1, ..., x_l of sum_k x_k <.,.>|p_k."""

    x: tuple

    def __init__(self, x: Sequence):
        vals = tuple(v if isinstance(v, float) else as_exact(v) for v in x)
        if not vals:
            raise ValueError("at least one coefficient is required")
        if any(v <= 0 for v in vals):
            raise ValueError("metric coefficients must be positive")
        object.__setattr__(self, "x", vals)

    def __len__(self) -> int:
        return len(self.x)

    def __iter__(self):
        return iter(self.x)

    def scaled(self, alpha) -> "MetricParams":
        return MetricParams([alpha * v for v in self.x])


def _theta(theta) -> Scalar:
    theta = theta if isinstance(theta, float) else as_exact(theta)
    if not 0 <= theta <= 1:
        raise ValueError("theta must lie in [0, 1]")
    return theta


def combine_metrics(x: MetricParams, y: MetricParams, theta) -> MetricParams:
    """((1 - theta) x_k^{-1} + theta y_k^{-1})^{-1} for each k."""
    if len(x) != len(y):
        raise ValueError("parameter sets have different lengths")
    theta = _theta(theta)
    return MetricParams([1 / ((1 - theta) / a + theta / b) for a, b in zip(x, y)])


def dual_params(x: MetricParams) -> MetricParams:
    return MetricParams([1 / v for v in x])


def theta_for_r(beta, gamma, r) -> Scalar:
    """theta whose harmonic combination of (beta, gamma) equals the affine one at r."""
    beta, gamma, r = as_exact(beta), as_exact(gamma), as_exact(r)
    return r * gamma / ((1 - r) * beta + r * gamma)


def s1_for_target(t, s) -> Fraction:
    """s1 with combine((1/2, s1), (1, 1), theta=(2t-1)/t) = (t, s), for 1/2 < t < 1, 0 < s < t."""
    t, s = as_exact(t), as_exact(s)
    if not (Fraction(1, 2) < t < 1):
        raise ValueError("t must satisfy 1/2 < t < 1")
    if not (0 < s < t):
        raise ValueError("s must satisfy 0 < s < t")
    s1 = s * (1 - t) / (t - (2 * t - 1) * s)
    if not (0 < s1 < Fraction(1, 2)):
        raise ValueError("s1 left (0, 1/2); inputs violate s < t")
    return s1


def interpolation_theta(t) -> Fraction:
    """theta = (2t - 1)/t carrying (1/2, .) towards (1, 1)."""
    t = as_exact(t)
    return (2 * t - 1) / t


# coefficient <-> parameter maps for the families with a metric parameter

def family_coefficients(kind: str, t, s=None, n: int = 1) -> MetricParams:
    """Diagonal coefficients (p1, p2 parts) of a family's metric at (t, s)."""
    t = as_exact(t)
    if kind in ("u", "sp"):
        return MetricParams([1, 2 * t])
    if kind == "su":
        return MetricParams([1, Fraction(2 * n, n + 1) * t])
    if kind == "sp-split":
        s = t if s is None else as_exact(s)
        return MetricParams([1, 2 * t, 2 * s])
    if kind == "sp-sp1":
        return MetricParams([1, 4 * t])
    if kind == "spin9":
        return MetricParams([Fraction(1, 8), t / 2])
    raise ValueError(f"family {kind!r} has no metric parameter")


def family_parameters(kind: str, x: MetricParams, n: int = 1) -> tuple:
    """Inverse of family_coefficients, after normalizing the p1 coefficient."""
    base = family_coefficients(kind, 1, 1 if kind == "sp-split" else None, n)
    norm = x.x[0] / base.x[0]
    vals = [v / norm for v in x.x]
    if kind in ("u", "sp"):
        return (vals[1] / 2,)
    if kind == "su":
        return (vals[1] * (n + 1) / (2 * n),)
    if kind == "sp-split":
        return (vals[1] / 2, vals[2] / 2)
    if kind == "sp-sp1":
        return (vals[1] / 4,)
    if kind == "spin9":
        return (vals[1] * 2,)
    raise ValueError(kind)
