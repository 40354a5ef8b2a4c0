"""Necessary conditions for generalized normal homogeneity and the Table-2 grid.

Two inequalities are evaluated:

* for X in p1, Y in p2 and M = [[Y, X], X]:
      x1 <M_h, M_h> >= (x2 - x1) <M_p2, M_p2>;
* for X in p2, U in g and an h-element Y commuting as required (default 0):
      (X, [U, [U, X + Y]]_p) + ([U, X + Y]_p, [U, X + Y]_p) <= 0.

Both sides are affine in the metric parameter, so the implied bound on the
parameter is solved exactly over the rationals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .algebra import Field, MatF, Scalar, bracket, expm, inner, realify
from .homspace import (
    DiagonalMetric,
    FamilyTag,
    ReductiveDecomposition,
    batch_metric_norm2,
    build_decomposition,
    metric_inner,
)

HOLD_TOL = Fraction(1, 10**10)
TABLE_FAMILIES = ("u", "su", "sp", "sp-split", "sp-sp1", "spin9")


@dataclass
class InequalityRecord:
    """One evaluated inequality lhs >= rhs."""

    check: str
    lhs: Scalar
    rhs: Scalar
    threshold: str = ""
    family: str | None = None
    n: int | None = None
    t: Scalar | None = None
    s: Scalar | None = None
    anchor: str = ""

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs - (HOLD_TOL if isinstance(self.lhs - self.rhs, Fraction) else 1e-10)

    @property
    def passed(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        from .report import jsonable

        return {
            "family": self.family,
            "n": self.n,
            "t": jsonable(self.t),
            "s": jsonable(self.s),
            "check": self.check,
            "lhs": jsonable(self.lhs),
            "rhs": jsonable(self.rhs),
            "verdict": "pass" if self.holds else "fail",
            "threshold": self.threshold,
            "anchor": self.anchor,
        }


# ---------------------------------------------------------------- the two inequalities


def _require_part(d: ReductiveDecomposition, u: MatF, part: str, what: str) -> None:
    if not (u - d.project(u, part)).is_zero(0.0 if u.exact else 1e-9):
        raise ValueError(f"{what} does not lie in {part}")


@dataclass(frozen=True)
class Prop22Data:
    """Bracket norms of M = [[Y, X], X] entering the upper-bound inequality."""

    h_norm: Scalar
    p2_norm: Scalar
    p2_part: str


def prop22_data(d: ReductiveDecomposition, x: MatF, y: MatF, p2_part: str = "p2") -> Prop22Data:
    _require_part(d, x, "p1", "X")
    _require_part(d, y, p2_part, "Y")
    m = bracket(bracket(y, x), x)
    if not d.contains(m):
        raise ValueError("bracket leaves the ambient algebra; projection residue too large")
    mh = d.project(m, "h")
    mp = d.project(m, p2_part)
    return Prop22Data(inner(mh, mh), inner(mp, mp), p2_part)


def prop22_check(
    d: ReductiveDecomposition,
    m: DiagonalMetric,
    x: MatF,
    y: MatF,
    p2_part: str = "p2",
    data: Prop22Data | None = None,
    name: str = "prop22",
    anchor: str = "",
) -> InequalityRecord:
    """x1 <M_h, M_h> >= (x2 - x1) <M_p2, M_p2> for M = [[Y, X], X]."""
    data = data or prop22_data(d, x, y, p2_part)
    c = m.coefficients()
    x1, x2 = c["p1"], c[p2_part]
    return InequalityRecord(
        name,
        x1 * data.h_norm,
        (x2 - x1) * data.p2_norm,
        family=m.family.kind,
        n=m.family.n,
        t=m.t,
        s=m.s,
        anchor=anchor,
    )


@dataclass(frozen=True)
class Deltal2Data:
    """Pieces of the lower-bound inequality, exact in the metric coefficients."""

    first: dict  # part -> <X_part, [U, [U, X + Y]]_part>
    second: dict  # part -> <A_part, A_part> with A = [U, X + Y]


def deltal2_data(d: ReductiveDecomposition, x: MatF, u: MatF, y: MatF | None = None) -> Deltal2Data:
    w = x if y is None else x + y
    a = bracket(u, w)
    b = bracket(u, a)
    first, second = {}, {}
    for part in d.p_parts:
        xp = d.project(x, part)
        first[part] = inner(xp, d.project(b, part))
        ap = d.project(a, part)
        second[part] = inner(ap, ap)
    return Deltal2Data(first, second)


def deltal2_value(m: DiagonalMetric, data: Deltal2Data) -> Scalar:
    c = m.coefficients()
    return sum((c[p] * (data.first[p] + data.second[p]) for p in data.first), Fraction(0))


def deltal2_check(
    d: ReductiveDecomposition,
    m: DiagonalMetric,
    x: MatF,
    u: MatF,
    y: MatF | None = None,
    data: Deltal2Data | None = None,
    name: str = "deltal2",
    anchor: str = "",
) -> InequalityRecord:
    """(X, [U, [U, X+Y]]_p)_m + ([U, X+Y]_p, [U, X+Y]_p)_m <= 0, as 0 >= value."""
    data = data or deltal2_data(d, x, u, y)
    value = deltal2_value(m, data)
    zero = Fraction(0) if isinstance(value, Fraction) else 0.0
    return InequalityRecord(name, zero, value, family=m.family.kind, n=m.family.n, t=m.t, s=m.s, anchor=anchor)


# ---------------------------------------------------------------- threshold extraction


@dataclass(frozen=True)
class Threshold:
    """Set of parameter values where an affine margin is nonnegative."""

    param: str
    op: str  # "<=", ">=", "all", "none"
    value: Fraction | None = None
    relative_to: str | None = None

    def admits(self, p: Fraction) -> bool:
        if self.op == "all":
            return True
        if self.op == "none":
            return False
        return p <= self.value if self.op == "<=" else p >= self.value

    def __str__(self) -> str:
        if self.op in ("all", "none"):
            return f"{self.op} {self.param}"
        if self.relative_to:
            factor = "" if self.value == 1 else f"{self.value}*"
            return f"{self.param} {self.op} {factor}{self.relative_to}"
        return f"{self.param} {self.op} {self.value}"


def solve_affine(margin: Callable[[Fraction], Fraction], param: str = "t") -> Threshold:
    """Exact solution of margin(p) >= 0 for a margin affine in p."""
    a = margin(Fraction(0))
    b = margin(Fraction(1)) - a
    if margin(Fraction(2)) != a + 2 * b or margin(Fraction(-3)) != a - 3 * b:
        raise ValueError("margin is not affine in the parameter")
    if b == 0:
        return Threshold(param, "all" if a >= 0 else "none")
    root = -a / b
    return Threshold(param, "<=" if b < 0 else ">=", root)


def record_threshold(make: Callable[[Fraction], InequalityRecord], param: str = "t") -> Threshold:
    return solve_affine(lambda p: (lambda r: r.lhs - r.rhs)(make(p)), param)


# ---------------------------------------------------------------- family witnesses


def _mat(field: Field, N: int, entries) -> MatF:
    return MatF.from_sparse(field, N, entries)


@dataclass
class Witness:
    """A named necessary check for one family: how to evaluate it at (t, s)."""

    name: str
    param: str
    anchor: str
    evaluate: Callable[[Fraction, Fraction | None], InequalityRecord]


def _clifford_mat(text: str) -> MatF:
    from .clifford import parse_clifford
    from .spin9 import theta

    return theta(parse_clifford(text, 9))


@lru_cache(maxsize=None)
def family_witnesses(kind: str, n: int) -> tuple[Witness, ...]:
    """The hard-coded necessary checks used for each Table-2 family."""
    out: list[Witness] = []
    if kind == "u":
        tag = FamilyTag("u", n)
        d = build_decomposition(tag)
        N = tag.size
        x = _mat(Field.C, N, [(0, 1, 1, 1), (1, 0, 1, 1)])
        y = _mat(Field.C, N, [(0, 0, 1, 1)])
        data = prop22_data(d, x, y)
        out.append(Witness("prop22[X=offdiag(i),Y=diag(i)]", "t", "U(n+1): upper bound t <= 1",
                           lambda t, s: prop22_check(d, DiagonalMetric(tag, t), x, y, data=data,
                                                     name="prop22[X=offdiag(i),Y=diag(i)]", anchor="U(n+1): upper bound t <= 1")))
    elif kind == "su":
        tag = FamilyTag("su", n)
        d = build_decomposition(tag)
        N = tag.size
        x2 = d.parts["p2"][0]
        u = _mat(Field.C, N, [(1, 0, 0, 1), (0, 1, 0, -1)])
        ldata = deltal2_data(d, x2, u)
        out.append(Witness("deltal2[X=i diag(n,-1..),U in p1]", "t", "SU(n+1): lower bound t >= (n+1)/2n",
                           lambda t, s: deltal2_check(d, DiagonalMetric(tag, t), x2, u, data=ldata,
                                                      name="deltal2[X=i diag(n,-1..),U in p1]", anchor="SU(n+1): lower bound t >= (n+1)/2n")))
        x = _mat(Field.C, N, [(0, 1, 1, 1), (1, 0, 1, 1)])
        pdata = prop22_data(d, x, x2)
        out.append(Witness("prop22[X=offdiag(i),Y=i diag(n,-1..)]", "t", "SU(n+1): upper bound t <= 1",
                           lambda t, s: prop22_check(d, DiagonalMetric(tag, t), x, x2, data=pdata,
                                                     name="prop22[X=offdiag(i),Y=i diag(n,-1..)]", anchor="SU(n+1): upper bound t <= 1")))
    elif kind == "sp":
        tag = FamilyTag("sp", n)
        d = build_decomposition(tag)
        N = tag.size
        x = _mat(Field.H, N, [(0, 1, 0, 1), (1, 0, 0, -1)])
        y = _mat(Field.H, N, [(0, 0, 1, 1)])
        pdata = prop22_data(d, x, y)
        out.append(Witness("prop22[X=offdiag(1,-1),Y=diag(i)]", "t", "Sp(n+1): upper bound t <= 1",
                           lambda t, s: prop22_check(d, DiagonalMetric(tag, t), x, y, data=pdata,
                                                     name="prop22[X=offdiag(1,-1),Y=diag(i)]", anchor="Sp(n+1): upper bound t <= 1")))
        ldata = deltal2_data(d, y, x)
        out.append(Witness("deltal2[X=diag(i),U in p1]", "t", "Sp(n+1): lower bound t >= 1/2",
                           lambda t, s: deltal2_check(d, DiagonalMetric(tag, t), y, x, data=ldata,
                                                      name="deltal2[X=diag(i),U in p1]", anchor="Sp(n+1): lower bound t >= 1/2")))
    elif kind == "sp-sp1":
        tag = FamilyTag("sp-sp1", n)
        d = build_decomposition(tag)
        N = tag.size
        x = _mat(Field.H, N, [(0, 1, 0, 1), (1, 0, 0, -1)])
        y = _mat(Field.H, N, [(0, 0, 1, 1), (N - 1, N - 1, 1, -1)])
        pdata = prop22_data(d, x, y)
        out.append(Witness("prop22[X=offdiag(1,-1),Y=(diag(i),-i)]", "t", "Sp(n+1)xSp(1): upper bound t <= 1",
                           lambda t, s: prop22_check(d, DiagonalMetric(tag, t), x, y, data=pdata,
                                                     name="prop22[X=offdiag(1,-1),Y=(diag(i),-i)]", anchor="Sp(n+1)xSp(1): upper bound t <= 1")))
    elif kind == "sp-split":
        out.extend(_sp_split_witnesses(n))
    elif kind == "spin9":
        tag = FamilyTag("spin9", 1)
        d = build_decomposition(tag)
        x = _clifford_mat("e2e9")
        y = _clifford_mat("e1e2+e3e4+e5e6-e7e8")
        pdata = prop22_data(d, x, y)
        out.append(Witness("prop22[X=e2e9,Y=e1e2+e3e4+e5e6-e7e8]", "t", "Spin(9): upper bound t <= 1",
                           lambda t, s: prop22_check(d, DiagonalMetric(tag, t), x, y, data=pdata,
                                                     name="prop22[X=e2e9,Y=e1e2+e3e4+e5e6-e7e8]", anchor="Spin(9): upper bound t <= 1")))
        x1 = _clifford_mat("e7e8-e1e2-e3e4-e5e6")
        ldata = deltal2_data(d, x1, x)
        out.append(Witness("deltal2[X=X1,U=e2e9]", "t", "Spin(9): lower bound t >= 1/4",
                           lambda t, s: deltal2_check(d, DiagonalMetric(tag, t), x1, x, data=ldata,
                                                      name="deltal2[X=X1,U=e2e9]", anchor="Spin(9): lower bound t >= 1/4")))
    else:
        raise ValueError(f"no necessary checks for family {kind!r}")
    if kind in COMPLEX_REPORT_SCALE:
        out = [_rescaled(w, COMPLEX_REPORT_SCALE[kind]) for w in out]
    return tuple(out)


# Complex families report norms in the form Re tr(A B*), twice the half-trace
# form used internally. A uniform factor leaves every threshold unchanged.
COMPLEX_REPORT_SCALE = {"u": 2, "su": 2}


def _rescaled(w: Witness, factor) -> Witness:
    def evaluate(t, s):
        rec = w.evaluate(t, s)
        rec.lhs, rec.rhs = factor * rec.lhs, factor * rec.rhs
        return rec

    return Witness(w.name, w.param, w.anchor, evaluate)


def _quadratic_min(f: Callable[[Fraction], Fraction]) -> Fraction:
    """Minimum over c of an exact quadratic f(c) = a c^2 + b c + e with a > 0."""
    e = f(Fraction(0))
    p, q = f(Fraction(1)), f(Fraction(-1))
    a = (p + q) / 2 - e
    b = (p - q) / 2
    if f(Fraction(2)) != 4 * a + 2 * b + e:
        raise ValueError("function is not quadratic")
    if a < 0:
        raise ValueError("quadratic is unbounded below")
    if a == 0:
        if b != 0:
            raise ValueError("linear function is unbounded below")
        return e
    return e - b * b / (4 * a)


def _sp_split_witnesses(n: int) -> list[Witness]:
    """Checks for mu_{t,s} on Sp(n+1) x U(1) / Sp(n) x U(1)."""
    tag = FamilyTag("sp-u1", n)
    d = build_decomposition(tag)
    N = tag.size
    x = _mat(Field.H, N, [(0, 1, 0, 1), (1, 0, 0, -1)])
    yj = _mat(Field.H, N, [(0, 0, 2, 1)])
    pdata = prop22_data(d, x, yj, "p21")
    out = [
        Witness("prop22[X=offdiag(1,-1),Y=diag(j)]", "t", "Sp(n+1)xU(1): upper bound t <= 1",
                lambda t, s: prop22_check(d, DiagonalMetric(tag, t, s), x, yj, "p21", data=pdata,
                                          name="prop22[X=offdiag(1,-1),Y=diag(j)]", anchor="Sp(n+1)xU(1): upper bound t <= 1"))
    ]
    # lower bound: w(X) for X = diag(j) lies on the line c (diag(i), i) of h
    line = d.parts["h"][-1]
    datas = {c: deltal2_data(d, yj, x, line * c) for c in (Fraction(-1), Fraction(0), Fraction(1), Fraction(2))}

    def lower(t, s):
        m = DiagonalMetric(tag, t, s)
        value = _quadratic_min(lambda c: deltal2_value(m, datas[c] if c in datas else deltal2_data(d, yj, x, line * c)))
        return InequalityRecord("deltal2[X=diag(j),U in p1,min over centralizer line]", Fraction(0), value,
                                family="sp-split", n=n, t=m.t, s=m.s, anchor="Sp(n+1)xU(1): lower bound t >= 1/2")

    out.append(Witness("deltal2[X=diag(j),U in p1,min over centralizer line]", "t", "Sp(n+1)xU(1): lower bound t >= 1/2", lower))
    # s <= t: the orbit through x0 of U(2) is totally geodesic with metric t<>|p1 + 2s<>|p2
    otag = FamilyTag("u", 1)
    od = build_decomposition(otag)
    ox = _mat(Field.C, 2, [(0, 1, 1, 1), (1, 0, 1, 1)])
    oy = _mat(Field.C, 2, [(0, 0, 1, 1)])
    odata = prop22_data(od, ox, oy)

    def order(t, s):
        t = Fraction(t)
        s = t if s is None else Fraction(s)
        # prop22 on the orbit with coefficients x1 = t, x2 = 2s
        return InequalityRecord("prop22[U(2) orbit, metric t<>|p1+2s<>|p2]", t * odata.h_norm, (2 * s - t) * odata.p2_norm,
                                family="sp-split", n=n, t=t, s=s, anchor="Sp(n+1)xU(1): order relation s <= t")

    out.append(Witness("prop22[U(2) orbit, metric t<>|p1+2s<>|p2]", "s", "Sp(n+1)xU(1): order relation s <= t", order))
    return out


def witness_threshold(w: Witness, t: Fraction = Fraction(3, 4)) -> Threshold:
    """Exact bound implied by a witness (in s at fixed t for order checks)."""
    if w.param == "s":
        found = [record_threshold(lambda s: w.evaluate(tt, s), "s") for tt in (t, Fraction(1, 2), Fraction(1))]
        ratios = {(th.op, th.value / tt) for th, tt in zip(found, (t, Fraction(1, 2), Fraction(1))) if th.value is not None}
        if len(ratios) == 1 and all(th.value is not None for th in found):
            op, ratio = ratios.pop()
            return Threshold("s", op, ratio, relative_to="t")
        return found[0]
    return record_threshold(lambda p: w.evaluate(p, p), "t")


# ---------------------------------------------------------------- sampled delta test


@dataclass
class SampledDeltaResult:
    passed: bool
    worst_margin: float
    reference: float
    samples: int
    witness: np.ndarray | None = None


def random_algebra_element(d: ReductiveDecomposition, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Realified random element of g with Gaussian coordinates."""
    basis = d.basis("g")
    coeffs = rng.normal(size=len(basis)) * scale
    real = [realify(b.to_float()).astype(np.float64) for b in basis]
    return np.tensordot(coeffs, np.array(real), axes=(0, 0))


@lru_cache(maxsize=None)
def _real_basis(tag: FamilyTag) -> np.ndarray:
    d = build_decomposition(tag)
    return np.array([realify(b.to_float()).astype(np.float64) for b in d.basis("g")])


def sampled_delta_test(
    w: MatF,
    m: DiagonalMetric,
    samples: int = 10_000,
    rng: np.random.Generator | int | None = 0,
    tol: float = 1e-8,
    scale: float = 2.0,
    extra: Sequence[np.ndarray] = (),
    batch: int = 2_000,
) -> SampledDeltaResult:
    """Monte-Carlo search for a with (Ad(a)W)_p longer than W_p under m.

    A violation certifies that W is not a delta-vector. ``extra`` adds
    explicit group elements (realified) to the sample.
    """
    rng = np.random.default_rng(rng)
    d = build_decomposition(m.family)
    rw = realify(w.to_float()).astype(np.float64)
    ref = float(batch_metric_norm2(m, rw[None], d)[0])
    basis = _real_basis(m.family)
    worst = -np.inf
    witness = None
    done = 0
    for chunk in [np.array(extra)] if len(extra) else []:
        vals = batch_metric_norm2(m, chunk @ rw @ np.transpose(chunk, (0, 2, 1)), d) - ref
        k = int(np.argmax(vals))
        worst, witness = float(vals[k]), chunk[k]
    while done < samples:
        size = min(batch, samples - done)
        z = np.tensordot(rng.normal(size=(size, len(basis))) * scale, basis, axes=(1, 0))
        a = expm(z)
        vals = batch_metric_norm2(m, a @ rw @ np.transpose(a, (0, 2, 1)), d) - ref
        k = int(np.argmax(vals))
        if vals[k] > worst:
            worst, witness = float(vals[k]), a[k]
        done += size
    return SampledDeltaResult(worst <= tol * max(1.0, ref), worst, ref, samples + len(extra), witness)


# ---------------------------------------------------------------- Table 2


def theorem_interval(kind: str, n: int) -> tuple[Fraction, Fraction, bool]:
    """(low, high, low_included) of the classified t-range."""
    if kind in ("u", "sp-sp1"):
        return Fraction(0), Fraction(1), False
    if kind == "su":
        return Fraction(n + 1, 2 * n), Fraction(1), True
    if kind in ("sp", "sp-split"):
        return Fraction(1, 2), Fraction(1), True
    if kind == "spin9":
        return Fraction(1, 4), Fraction(1), True
    raise ValueError(kind)


def in_theorem_range(kind: str, n: int, t: Fraction, s: Fraction | None = None) -> bool:
    lo, hi, closed = theorem_interval(kind, n)
    ok = (t >= lo if closed else t > lo) and t <= hi
    if kind == "sp-split":
        ok = ok and s is not None and 0 < s <= t
    return ok


def default_grid(points: int = 41, lo: Fraction = Fraction(1, 20), hi: Fraction = Fraction(5, 4)) -> list[Fraction]:
    step = (hi - lo) / (points - 1)
    return [lo + k * step for k in range(points)]


def grid_for(kind: str, n: int, points: int = 41) -> list[Fraction]:
    lo, hi, _ = theorem_interval(kind, n)
    vals = set(default_grid(points))
    vals |= {hi}
    if lo > 0:
        vals.add(lo)
    return sorted(vals)


@dataclass
class GridPoint:
    t: Fraction
    s: Fraction | None
    inside: bool
    records: list
    consistent: bool

    @property
    def passed_all(self) -> bool:
        return all(r.holds for r in self.records)

    @property
    def failing(self) -> list[str]:
        return [r.check for r in self.records if not r.holds]


@dataclass
class Table2Report:
    family: str
    n: int
    points: list = field(default_factory=list)
    thresholds: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return all(p.consistent for p in self.points)

    def records(self) -> list[InequalityRecord]:
        return [r for p in self.points for r in p.records]


def table2_report(kind: str, n: int = 2, grid: Iterable | None = None, s_grid: Iterable | None = None) -> Table2Report:
    """Evaluate every necessary check at every grid point and compare with the theorem range."""
    if kind not in TABLE_FAMILIES:
        raise ValueError(f"family must be one of {', '.join(TABLE_FAMILIES)}")
    n = 1 if kind == "spin9" else n
    witnesses = family_witnesses(kind, n)
    ts = [Fraction(t) for t in grid] if grid is not None else grid_for(kind, n)
    report = Table2Report(kind, n)
    for w in witnesses:
        report.thresholds[w.name] = witness_threshold(w)
    for t in ts:
        if kind == "sp-split":
            ss = [Fraction(s) for s in s_grid] if s_grid is not None else sorted(set(default_grid()) | {t})
            pairs = [(t, s) for s in ss]
        else:
            pairs = [(t, None)]
        for tt, s in pairs:
            recs = [w.evaluate(tt, s) for w in witnesses]
            for w, r in zip(witnesses, recs):
                r.threshold = str(report.thresholds[w.name])
            inside = in_theorem_range(kind, n, tt, s)
            ok = all(r.holds for r in recs)
            report.points.append(GridPoint(tt, s, inside, recs, ok if inside else not ok))
    return report


def is_interval(report: Table2Report) -> bool:
    """Passing t-values form an interval (for each fixed s in the sp-split case)."""
    by_s: dict = {}
    for p in report.points:
        by_s.setdefault(p.s, []).append(p)
    for pts in by_s.values():
        flags = [p.passed_all for p in sorted(pts, key=lambda p: p.t)]
        if True in flags:
            first = flags.index(True)
            last = len(flags) - 1 - flags[::-1].index(True)
            if not all(flags[first : last + 1]):
                return False
    return True
