"""Verification suites assembled into run reports by the command line."""
from __future__ import annotations

import time
from fractions import Fraction

import numpy as np

from .algebra import Field, HyperComplex, MatF, as_exact, bracket, inner, realify
from .clifford import Bivector, CliffordElement, bivector_from_vectors, cl_bracket, is_simple, pairs, spin9_inner, spin_to_so
from .report import CheckRecord


def random_dyadic(rng: np.random.Generator, size, bits: int = 6, span: int = 4) -> list[Fraction]:
    """Random rationals k / 2^bits in [-span, span]; exactly representable as floats."""
    ks = rng.integers(-span << bits, (span << bits) + 1, size=size)
    return [Fraction(int(k), 1 << bits) for k in np.ravel(ks)]


def random_tangent(rng: np.random.Generator, field: Field, n: int, bits: int = 6) -> list[HyperComplex]:
    """Random tangent vector at x0 of the unit sphere in F^{n+1}."""
    d = field.dim
    vals = random_dyadic(rng, (n + 1) * d, bits)
    out = []
    for k in range(n + 1):
        c = vals[k * d : (k + 1) * d]
        if k == 0:
            c[0] = Fraction(0)
        out.append(HyperComplex(field, c))
    return out


def first_column_matches(u: MatF, v) -> bool:
    col = u.comps[:, :, 0]
    return all(as_exact(col[c, a]) == v[a].coeffs[c] for a in range(u.n) for c in range(u.field.dim))


# ---------------------------------------------------------------- clifford


def clifford_suite() -> list[CheckRecord]:
    recs = []
    n = 9
    e = [None] + [CliffordElement.generator(n, i) for i in range(1, n + 1)]
    one = CliffordElement.scalar(n, 1)
    rel = all(e[i] * e[j] + e[j] * e[i] == (-2 * one if i == j else CliffordElement(n)) for i in range(1, n + 1) for j in range(1, n + 1))
    recs.append(CheckRecord("e_i e_j + e_j e_i = -2 delta_ij (n=9)", rel, anchor="Clifford relation with negative definite form", family="clifford"))
    norms = {spin9_inner(Bivector(9, {p: 1}), Bivector(9, {p: 1})) for p in pairs(9)}
    recs.append(CheckRecord("<f_i f_j, f_i f_j> = 8 for all 36 pairs", norms == {8}, sorted(norms), 8,
                            "inner product on spin(9) pulled back from so(16)", "clifford"))
    ok = True
    for i in range(1, 10):
        for j in range(1, 10):
            for k in range(1, 10):
                if len({i, j, k}) == 3:
                    lhs = cl_bracket(e[i] * e[j], e[i] * e[k])
                    ok &= lhs == 2 * (e[j] * e[k])
    recs.append(CheckRecord("[f_i f_j, f_i f_k] = 2 f_j f_k for distinct i,j,k", ok, anchor="bracket relations of spin(9)", family="clifford"))
    hom = True
    basis = [Bivector(9, {p: 1}) for p in pairs(9)]
    for a in basis[::5]:
        for b in basis[::3]:
            lhs = spin_to_so(Bivector.from_clifford(cl_bracket(a.element, b.element)))
            la, lb = spin_to_so(a), spin_to_so(b)
            hom &= lhs.equals(la @ lb - lb @ la)
    recs.append(CheckRecord("spin(9) -> so(9) preserves brackets", hom, anchor="e_i e_j -> 2(E_ji - E_ij) is a Lie algebra map", family="clifford"))
    w = bivector_from_vectors([1, 2, 0, -1, 0, 0, 0, 0, 3], [2, 0, 1, 2, 0, 0, 0, 0, 0])
    c2 = w.element * w.element
    recs.append(CheckRecord("simple bivector squares to -|v|^2|w|^2", c2 == CliffordElement.scalar(9, -15 * 9), str(c2), -135,
                            "v w with v orthogonal to w is simple", "clifford"))
    ns = Bivector(9, {(1, 2): 1, (3, 4): 1})
    recs.append(CheckRecord("e1e2 + e3e4 is not simple", is_simple(ns) is None, anchor="square has a grade-4 part", family="clifford"))
    return recs


def u_identity_suite(n: int = 2) -> list[CheckRecord]:
    """[[Y, X], X] = -2Y + 2Z in u(n+1) and the norms of its two parts."""
    N = n + 1
    x = MatF.from_sparse(Field.C, N, [(0, 1, 1, 1), (1, 0, 1, 1)])
    y = MatF.from_sparse(Field.C, N, [(0, 0, 1, 1)])
    z = MatF.from_sparse(Field.C, N, [(1, 1, 1, 1)])
    m = bracket(bracket(y, x), x)
    expected = y * -2 + z * 2
    half = inner(y * -2, y * -2), inner(z * 2, z * 2)
    re_tr = tuple(2 * v for v in half)
    r = lambda u: realify(u)  # noqa: E731
    real_norm = tuple(Fraction(1, 2) * sum((a * b for a, b in zip(r(w).ravel(), r(w).ravel())), Fraction(0)) for w in (y * -2, z * 2))
    anchor = "U(n+1) upper bound pair X = offdiag(i), Y = diag(i)"
    return [
        CheckRecord("[[Y,X],X] = -2Y + 2Z in u(n+1)", m.equals(expected), anchor=anchor, family="u", n=n),
        CheckRecord("<-2Y,-2Y> = <2Z,2Z> = 4 in u(n+1)", re_tr == (4, 4), list(re_tr), 4, anchor, "u", n,
                    "inner product Re tr(A B*)"),
        CheckRecord("same norms from the realification in so(2n+2)", real_norm == re_tr, list(real_norm), list(re_tr), anchor, "u", n,
                    "1/2 tr(R(A) R(B)^T) equals Re tr(A B*)"),
        CheckRecord("half-trace form gives 2", half == (2, 2), list(half), 2, anchor, "u", n,
                    "1/2 Re tr(A B*) used internally is half the reported form"),
    ]


# ---------------------------------------------------------------- decompositions


def decomposition_suite(n: int = 2) -> list[CheckRecord]:
    from .homspace import FAMILIES, build_decomposition

    recs = []
    expected = {
        "so": {"h": n * (n - 1) // 2, "p1": n},
        "u": {"h": n * n, "p1": 2 * n, "p2": 1},
        "su": {"h": n * n - 1, "p1": 2 * n, "p2": 1},
        "sp": {"h": n * (2 * n + 1), "p1": 4 * n, "p2": 3},
        "sp-split": {"h": n * (2 * n + 1), "p1": 4 * n, "p21": 2, "p22": 1},
        "sp-sp1": {"h": n * (2 * n + 1) + 3, "p1": 4 * n, "p2": 3},
        "sp-u1": {"h": n * (2 * n + 1) + 1, "p1": 4 * n, "p21": 2, "p22": 1},
        "spin9": {"h": 21, "p1": 8, "p2": 7},
    }
    for kind in FAMILIES:
        d = build_decomposition(kind, n)
        dims = d.dims()
        recs.append(CheckRecord(f"decomposition dims {kind}", dims == expected[kind], dims, expected[kind],
                                "orthogonal reductive decomposition with isotropy fixing x0", kind, n))
    return recs


def spin9_bracket_suite() -> list[CheckRecord]:
    from .spin9 import bivector_parts, bivector_project

    parts = bivector_parts()
    p1, p2 = parts["p1"], parts["p2"]

    def inside(w, part):
        return bivector_project(w, part) == w

    b21 = all(inside(Bivector.from_clifford(cl_bracket(a.element, b.element)), "p1") for a in p2 for b in p1)
    b22 = all(inside(Bivector.from_clifford(cl_bracket(a.element, b.element)), "h") for a in p2 for b in p2)
    return [
        CheckRecord("[p2, p1] in p1", b21, anchor="spin(9) = spin(8) + p1 is a symmetric pair", family="spin9"),
        CheckRecord("[p2, p2] in h", b22, anchor="p2 complements spin(7) in spin(8)", family="spin9"),
    ]


# ---------------------------------------------------------------- killing


def killing_suite(count: int = 20, seed: int = 0, exact_only: bool = False) -> list[CheckRecord]:
    from .killing import constant_length_test, cw_field_for_vector, round_delta_test, su_delta_field
    from .spin9 import certify_spin9, cw_field_spin9, tangent

    rng = np.random.default_rng(seed)
    recs = []
    if not exact_only:
        for kind, field, n in (("so", Field.R, 3), ("u", Field.C, 3), ("sp", Field.H, 2)):
            ok, worst = True, 0.0
            start = time.perf_counter()
            for _ in range(count):
                v = random_tangent(rng, field, n)
                u = cw_field_for_vector(field, n, v)
                cert = constant_length_test(u)
                norm2 = float(sum(x.norm2() for x in v))
                ok &= first_column_matches(u, v) and cert is not None and abs(float(cert.C2) - norm2) <= 1e-9 * max(1, norm2)
                if cert is not None:
                    worst = max(worst, cert.residual)
            recs.append(CheckRecord(f"Clifford-Wolf fields {kind} n={n}: U x0 = v, U^2 = -|v|^2", ok, worst, "<1e-9",
                                    "constant-length field through every tangent vector", kind, n,
                                    f"{count} vectors in {time.perf_counter() - start:.2f}s"))
    ok, margin = True, np.inf
    for _ in range(count):
        v = random_tangent(rng, Field.C, 3)
        u = su_delta_field(3, v)
        cert = round_delta_test(u)
        ok &= u.trace() == HyperComplex(Field.C, [0, 0]) and first_column_matches(u, v) and cert.accepted
        margin = min(margin, cert.psd_margin)
    recs.append(CheckRecord("traceless delta-vectors su(4): trace 0, U x0 = v, lam^2 Id - B >= 0", ok, margin, ">= -1e-9",
                            "round-metric delta-vector through every tangent vector", "su", 3))
    ok = True
    start = time.perf_counter()
    for _ in range(count):
        u = [Fraction(0)] + random_dyadic(rng, 15)
        w = cw_field_spin9(u)
        cert = certify_spin9(w)
        ok &= cert is not None and tangent(w) == u and cert.C2 == sum(x * x for x in u)
    recs.append(CheckRecord("spin(9) Clifford-Wolf fields: exact theta(W)^2 = -|u|^2 Id", ok, None, None,
                            "simple bivector through every tangent vector of S^15", "spin9", None,
                            f"{count} vectors in {time.perf_counter() - start:.2f}s"))
    return recs


def delta_sampling_suite(count: int = 3, samples: int = 2000, seed: int = 0) -> list[CheckRecord]:
    from .deltacheck import sampled_delta_test
    from .homspace import DiagonalMetric, FamilyTag
    from .killing import su_delta_field

    rng = np.random.default_rng(seed)
    tag = FamilyTag("su", 3)
    m = DiagonalMetric(tag, 1)
    worst = -np.inf
    for _ in range(count):
        u = su_delta_field(3, random_tangent(rng, Field.C, 3))
        res = sampled_delta_test(u, m, samples, rng)
        worst = max(worst, res.worst_margin)
    ok = worst <= 1e-8
    bad = MatF.from_sparse(Field.C, 4, [(0, 0, 1, 1), (1, 1, 1, 2)])
    res = sampled_delta_test(bad, m, samples, rng)
    return [
        CheckRecord("sampled Ad-orbit check of su(4) delta-vectors", ok, worst, "<= 1e-8", "delta-vector maximizes the p-norm on its orbit", "su", 3),
        CheckRecord("diag(i, 2i, 0, 0) is not a delta-vector", not res.passed, res.worst_margin, "> 0",
                    "rotating the 2i eigenline onto x0 lengthens the p-part", "su", 3),
    ]


# ---------------------------------------------------------------- firey


def firey_suite(seed: int = 0, exact_only: bool = False) -> list[CheckRecord]:
    from .firey import (
        Ellipsoid,
        MetricParams,
        combine_metrics,
        dual_2_mean_ellipsoid,
        dual_params,
        interpolation_theta,
        s1_for_target,
        support,
        theta_for_r,
    )

    recs = []
    s1 = s1_for_target(Fraction(3, 4), Fraction(1, 2))
    recs.append(CheckRecord("s1(t=3/4, s=1/2) = 1/4", s1 == Fraction(1, 4), s1, Fraction(1, 4), "two-parameter family reached from (1/2, s1) and (1, 1)", "sp-split"))
    back = combine_metrics(MetricParams([1, 1, 2 * s1]), MetricParams([2, 2, 2]), interpolation_theta(Fraction(3, 4)))
    recs.append(CheckRecord("combine((1/2, s1), (1, 1), (2t-1)/t) = (3/4, 1/2)", back.x[1:] == (Fraction(3, 2), Fraction(1)),
                            [x / 2 for x in back.x[1:]], [Fraction(3, 4), Fraction(1, 2)], "interpolation round trip", "sp-split"))
    th = theta_for_r(Fraction(1, 2), 1, Fraction(1, 2))
    comb = combine_metrics(MetricParams([Fraction(1, 2)]), MetricParams([1]), th)
    recs.append(CheckRecord("theta(r=1/2, beta=1/2, gamma=1) = 2/3 reproduces 3/4", th == Fraction(2, 3) and comb.x[0] == Fraction(3, 4),
                            [th, comb.x[0]], [Fraction(2, 3), Fraction(3, 4)], "harmonic combination equals affine combination at r", "firey"))
    rng = np.random.default_rng(seed)
    xs = [MetricParams([Fraction(int(k), 7) for k in rng.integers(1, 30, size=3)]) for _ in range(20)]
    recs.append(CheckRecord("dual(dual(x)) = x", all(dual_params(dual_params(x)) == x for x in xs), anchor="dual metric is an involution", family="firey"))
    if not exact_only:
        worst = 0.0
        for _ in range(20):
            a1 = _random_spd(rng, 3)
            a2 = _random_spd(rng, 3)
            e1, e2 = Ellipsoid(a1), Ellipsoid(a2)
            theta = float(rng.uniform())
            e = dual_2_mean_ellipsoid(e1, e2, theta)
            for _ in range(5):
                u = rng.normal(size=3)
                h = support(e, u)
                m2 = np.sqrt((1 - theta) * support(e1, u) ** 2 + theta * support(e2, u) ** 2)
                worst = max(worst, abs(h - m2))
        recs.append(CheckRecord("support of dual 2-mean ellipsoid = M_2 of supports", worst < 1e-9, worst, "<1e-9",
                                "dual 2-mean of ellipsoids is an ellipsoid", "firey"))
    return recs


def _random_spd(rng: np.random.Generator, m: int, lo: float = 0.25, hi: float = 4.0) -> np.ndarray:
    q, _ = np.linalg.qr(rng.normal(size=(m, m)))
    return (q * rng.uniform(lo, hi, size=m)) @ q.T


# ---------------------------------------------------------------- table 2


def table2_suite(n: int = 2, su_range=range(2, 9)) -> list[CheckRecord]:
    from .deltacheck import TABLE_FAMILIES, family_witnesses, table2_report, theorem_interval, witness_threshold

    recs = []
    expected = {
        "u": ["t <= 1"],
        "su": [f"t >= {Fraction(n + 1, 2 * n)}", "t <= 1"],
        "sp": ["t <= 1", "t >= 1/2"],
        "sp-split": ["t <= 1", "t >= 1/2", "s <= t"],
        "sp-sp1": ["t <= 1"],
        "spin9": ["t <= 1", "t >= 1/4"],
    }
    for kind in TABLE_FAMILIES:
        rep = table2_report(kind, n)
        found = [str(th) for th in rep.thresholds.values()]
        lo, hi, closed = theorem_interval(kind, rep.n)
        interval = f"{'[' if closed else '('}{lo}, {hi}]"
        recs.append(CheckRecord(f"implied thresholds {kind}", found == expected[kind], found, expected[kind],
                                f"classified range t in {interval}", kind, rep.n))
        bad = [p for p in rep.points if not p.consistent]
        recs.append(CheckRecord(f"grid verdicts match the classified range ({kind})", not bad, f"{len(rep.points) - len(bad)}/{len(rep.points)}",
                                "all", f"inside passes all checks, outside fails one; t in {interval}", kind, rep.n))
    for m in su_range:
        w = family_witnesses("su", m)[0]
        th = witness_threshold(w)
        recs.append(CheckRecord(f"su lower bound n={m}", str(th) == f"t >= {Fraction(m + 1, 2 * m)}", str(th),
                                f"t >= {Fraction(m + 1, 2 * m)}", "SU(n+1): lower bound t >= (n+1)/2n", "su", m))
    return recs
