"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""
import time
from fractions import Fraction

import numpy as np

from gnspheres import spin9
from gnspheres.algebra import Field, HyperComplex, MatF, bracket, inner, realify
from gnspheres.clifford import Bivector, cl_bracket, is_simple, pairs, parse_clifford, spin9_inner
from gnspheres.deltacheck import family_witnesses, grid_for, table2_report, theorem_interval, witness_threshold
from gnspheres.deltacheck import sampled_delta_test
from gnspheres.firey import (
    Ellipsoid,
    MetricParams,
    combine_metrics,
    dual_2_mean_ellipsoid,
    interpolation_theta,
    project_ellipsoid,
    s1_for_target,
    sampled_support,
    support,
    theta_for_r,
)
from gnspheres.homspace import DiagonalMetric, FamilyTag, build_decomposition
from gnspheres.killing import cw_field_for_vector, round_delta_test, su_delta_field
from gnspheres.suites import first_column_matches, random_tangent


def cl(text):
    return parse_clifford(text, 9)


def random_rational(rng, size):
    """Rationals with denominators up to 12, mostly not representable as floats."""
    nums = rng.integers(-40, 41, size=size)
    dens = rng.integers(1, 13, size=size)
    return [Fraction(int(a), int(b)) for a, b in zip(nums, dens)]


def rational_tangent(rng, field, n):
    coeffs = random_rational(rng, field.dim * (n + 1))
    coeffs[0] = Fraction(0)
    if field is Field.R:
        return [HyperComplex(field, [c]) for c in coeffs]
    d = field.dim
    return [HyperComplex(field, coeffs[k * d:(k + 1) * d]) for k in range(n + 1)]


def timed(fn):
    start = time.perf_counter()
    ok = fn()
    return ok, time.perf_counter() - start


def test_criterion_1_exact_identities(gate):
    x1, y, z = cl(spin9.X1_TEXT), cl(spin9.PAIR_Y_TEXT), cl(spin9.PAIR_Z_TEXT)
    x = cl(spin9.PAIR_X_TEXT)
    y_prime = sum((cl(t) for t in spin9.H_SUMMANDS[1:]), cl(spin9.H_SUMMANDS[0]))

    def u_identity():
        xs = MatF.from_sparse(Field.C, 3, [(0, 1, 1, 1), (1, 0, 1, 1)])
        ys = MatF.from_sparse(Field.C, 3, [(0, 0, 1, 1)])
        zs = MatF.from_sparse(Field.C, 3, [(1, 1, 1, 1)])
        # Re tr(A B*) is twice the half-trace form returned by inner
        norms = {2 * inner(ys * -2, ys * -2), 2 * inner(zs * 2, zs * 2)}
        return bracket(bracket(ys, xs), xs).equals(ys * -2 + zs * 2) and norms == {4}

    def brackets():
        e = [None] + [cl(f"e{i}") for i in range(1, 10)]
        return all(
            cl_bracket(e[i] * e[j], e[i] * e[k]) == 2 * (e[j] * e[k])
            for i in range(1, 10) for j in range(1, 10) for k in range(1, 10) if len({i, j, k}) == 3
        )

    checks = {
        "<X1,X1> = 32": lambda: inner(spin9.theta(x1), spin9.theta(x1)) == 32,
        "<Z,Z> = 96": lambda: inner(spin9.theta(z), spin9.theta(z)) == 96,
        "X1 + Y' = 4e7e8": lambda: x1 + y_prime == cl("4*e7e8"),
        "is_simple(4e7e8) = 4": lambda: is_simple(x1 + y_prime) == 4,
        "[[Y,X],X] = -4e1e2": lambda: cl_bracket(cl_bracket(y, x), x) == cl("-4*e1e2"),
        "u(n+1): [[Y,X],X] = -2Y+2Z, norms 4": u_identity,
        "<f_i f_j, f_i f_j> = 8": lambda: {spin9_inner(Bivector(9, {p: 1}), Bivector(9, {p: 1})) for p in pairs(9)} == {8},
        "[f_i f_j, f_i f_k] = 2 f_j f_k": brackets,
    }
    results = {name: timed(fn) for name, fn in checks.items()}
    bad = [n for n, (ok, dt) in results.items() if not ok or dt >= 1.0]
    slowest = max(dt for _, dt in results.values())
    gate(1, not bad, f"{len(checks) - len(bad)}/{len(checks)} exact identities, slowest {slowest:.3f}s" + (f"; failing {bad}" if bad else ""))


def test_criterion_2_thresholds(gate):
    got = {}
    for kind, n in (("u", 2), ("sp-sp1", 2)):
        got[kind] = [str(witness_threshold(w)) for w in family_witnesses(kind, n)]
    spin = [str(witness_threshold(w)) for w in family_witnesses("spin9", 1)]
    su = {n: witness_threshold(family_witnesses("su", n)[0]) for n in range(2, 9)}
    ok = got["u"] == ["t <= 1"] and got["sp-sp1"] == ["t <= 1"] and spin == ["t <= 1", "t >= 1/4"]
    ok &= all(th.op == ">=" and th.value == Fraction(n + 1, 2 * n) for n, th in su.items())
    # order relation: on the sp-split grid a point with t in [1/2, 1] passes iff s <= t
    ts = [Fraction(k, 8) for k in range(4, 9)]
    ss = [Fraction(k, 8) for k in range(1, 11)]
    rep = table2_report("sp-split", 2, ts, ss)
    order = [str(th) for name, th in rep.thresholds.items() if "orbit" in name]
    ok &= order == ["s <= t"]
    ok &= all(p.passed_all == (p.s <= p.t) for p in rep.points)
    gate(2, ok, f"u/sp-sp1/spin9 {got['u'][0]}, spin9 {spin[1]}, su (n+1)/2n for n=2..8, sp-split {order} on {len(rep.points)} grid points")


def test_criterion_3_spinor_embedding(gate):
    start = time.perf_counter()
    for f in (spin9.build_embedding, spin9.bivector_parts, spin9._tangent_frame, build_decomposition):
        f.cache_clear()
    emb = spin9.build_embedding()
    d = build_decomposition(FamilyTag("spin9", 1))
    build = time.perf_counter() - start
    basis = emb.basis.astype(float)
    ident = np.eye(16)
    skew = all(np.array_equal(b, -b.T) and np.array_equal(b @ b, -ident) for b in basis)
    rank = np.linalg.matrix_rank(basis.reshape(36, -1))
    dims = tuple(len(d.parts[k]) for k in ("h", "p2", "p1"))

    def span(part):
        return np.stack([realify(b.to_float()).ravel() for b in d.parts[part]], axis=1)

    def residual(a_part, b_part, target):
        mat = span(target)
        worst = 0.0
        for a in d.parts[a_part]:
            for b in d.parts[b_part]:
                ra, rb = realify(a.to_float()), realify(b.to_float())
                c = (ra @ rb - rb @ ra).ravel()
                coef, *_ = np.linalg.lstsq(mat, c, rcond=None)
                worst = max(worst, float(np.max(np.abs(mat @ coef - c))))
        return worst

    res = max(residual("p2", "p1", "p1"), residual("p2", "p2", "h"), residual("h", "p1", "p1"))
    ok = skew and rank == 36 and dims == (21, 7, 8) and res < 1e-10 and build < 5.0
    gate(3, ok, f"{len(basis)} basis matrices of rank {rank}, skew with square -Id: {skew}; dims {dims}; bracket residual {res:.1e}; build {build:.2f}s")


def test_criterion_4_clifford_wolf_suites(gate):
    rng = np.random.default_rng(4)
    count = 1000
    summary, ok = [], True
    start = time.perf_counter()
    for label, field, n in (("R", Field.R, 3), ("C", Field.C, 3), ("H", Field.H, 2)):
        t0 = time.perf_counter()
        worst, exact = 0.0, True
        eye = np.eye(field.dim * (n + 1))
        for _ in range(count):
            v = rational_tangent(rng, field, n)
            u = cw_field_for_vector(field, n, v)
            exact &= first_column_matches(u, v)
            r = realify(u.to_float())
            norm2 = float(sum(x.norm2() for x in v))
            worst = max(worst, float(np.linalg.norm(r @ r + norm2 * eye)))
        ok &= exact and worst < 1e-9
        summary.append(f"{label} n={n} exact={exact} max {worst:.1e} ({time.perf_counter() - t0:.1f}s)")
    t0 = time.perf_counter()
    exact, equations = True, set()
    for _ in range(count):
        u = [Fraction(0)] + random_rational(rng, 15)
        w = spin9.cw_field_spin9(u)
        cert = spin9.certify_spin9(w)
        exact &= cert is not None and spin9.tangent(w) == u and cert.C2 == sum(x * x for x in u)
        if cert is not None:
            equations.add((cert.equations, cert.block_equations))
    ok &= exact and equations == {(256, 119)}
    summary.append(f"spin9 exact={exact} equations {sorted(equations)} ({time.perf_counter() - t0:.1f}s)")
    total = time.perf_counter() - start
    ok &= total < 60
    gate(4, ok, "; ".join(summary) + f"; total {total:.1f}s")


def test_criterion_5_delta_vectors(gate):
    rng = np.random.default_rng(5)
    margins, worst = [], -np.inf
    for n in (2, 3, 4):
        metric = DiagonalMetric(FamilyTag("su", n), 1)
        for k in range(60):
            u = su_delta_field(n, random_tangent(rng, Field.C, n))
            cert = round_delta_test(u)
            margins.append(cert.psd_margin if cert.accepted else -np.inf)
            if k < 8:
                res = sampled_delta_test(u, metric, 10_000, rng)
                worst = max(worst, res.worst_margin)
    ok = min(margins) >= 0 and worst <= 1e-8
    gate(5, ok, f"{len(margins)} fields, min psd margin {min(margins):.3g}; 24 x 10^4 orbit samples, worst excess {worst:.3g}")


def test_criterion_6_firey(gate):
    rng = np.random.default_rng(6)

    def spd(m):
        q, _ = np.linalg.qr(rng.normal(size=(m, m)))
        return (q * rng.uniform(0.25, 4.0, size=m)) @ q.T

    gel = 0.0
    for _ in range(100):
        e1, e2 = Ellipsoid(spd(2)), Ellipsoid(spd(2))
        th = float(rng.uniform())
        e = dual_2_mean_ellipsoid(e1, e2, th)
        u = rng.normal(size=2)
        m2 = np.sqrt((1 - th) * sampled_support(e1, u) ** 2 + th * sampled_support(e2, u) ** 2)
        gel = max(gel, abs(sampled_support(e, u) - m2))
    prpr = 0.0
    for _ in range(100):
        e1, e2 = Ellipsoid(spd(4)), Ellipsoid(spd(4))
        th = float(rng.uniform())
        q, _ = np.linalg.qr(rng.normal(size=(4, 2)))
        lhs = project_ellipsoid(dual_2_mean_ellipsoid(e1, e2, th), q)
        rhs = dual_2_mean_ellipsoid(project_ellipsoid(e1, q), project_ellipsoid(e2, q), th)
        prpr = max(prpr, float(np.max(np.abs(lhs.inverse() - rhs.inverse()))))
        w = rng.normal(size=2)
        prpr = max(prpr, abs(support(lhs, w) - support(rhs, w)))
    s1 = s1_for_target(Fraction(3, 4), Fraction(1, 2))
    back = combine_metrics(MetricParams([1, 1, 2 * s1]), MetricParams([2, 2, 2]), interpolation_theta(Fraction(3, 4)))
    th = theta_for_r(Fraction(1, 2), 1, Fraction(1, 2))
    again = combine_metrics(MetricParams([Fraction(1, 2)]), MetricParams([1]), th).x[0]
    exact = s1 == Fraction(1, 4) and back.x[1:] == (Fraction(3, 2), Fraction(1)) and th == interpolation_theta(Fraction(3, 4)) == Fraction(2, 3) and again == Fraction(3, 4)
    ok = gel < 1e-6 and prpr < 1e-9 and exact
    gate(6, ok, f"ellipsoid identity max err {gel:.1e} on 100 pairs; projection commutation {prpr:.1e}; s1 = {s1}, theta = {th} -> t = {again}")


def test_criterion_7_table2(gate):
    start = time.perf_counter()
    checked, bad = 0, []
    families = [(k, n) for k in ("u", "su", "sp", "sp-split", "sp-sp1") for n in range(1, 5)] + [("spin9", 1)]
    for kind, n in families:
        lo, hi, closed = theorem_interval(kind, n)
        rep = table2_report(kind, n, grid_for(kind, n))
        ts = {p.t for p in rep.points}
        if hi not in ts or (closed and lo not in ts):
            bad.append(f"{kind} n={n}: endpoint missing")
        for p in rep.points:
            checked += 1
            if p.inside and not p.passed_all:
                bad.append(f"{kind} n={n} t={p.t} s={p.s} inside but fails {p.failing}")
            if not p.inside and not p.failing:
                bad.append(f"{kind} n={n} t={p.t} s={p.s} outside but passes")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    gate(7, ok, f"{checked} grid points over {len(families)} family/n pairs in {elapsed:.1f}s" + (f"; {bad[:3]}" if bad else ""))
