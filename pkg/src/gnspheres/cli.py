"""Command-line entry point: ``gnspheres <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import Field, MatF, format_matrix, parse_matrix, parse_vector
from .report import CheckRecord, RunReport

CLI_FAMILIES = ("so", "u", "su", "sp", "sp-split", "sp-sp1", "spin9")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _pair(text: str) -> list[Fraction]:
    return [_fraction(x) for x in text.split(",") if x.strip()]


def _emit(report: RunReport, fmt: str, out=None) -> int:
    out = out or sys.stdout
    out.write((report.to_json() if fmt == "json" else report.to_table()) + "\n")
    return 0 if report.ok else 1


# ---------------------------------------------------------------- verify-paper

SUITES = ("clifford", "identities", "decomposition", "killing", "delta", "firey", "table2")


def cmd_verify_paper(args) -> RunReport:
    from . import suites
    from .spin9 import verify_spin9_identities

    exact = args.mode == "exact"
    only = set(args.only or SUITES)
    fam = args.family
    report = RunReport(args.mode)

    def want(suite: str, families: tuple) -> bool:
        return suite in only and (fam is None or fam in families)

    if want("clifford", ("clifford", "spin9")):
        report.extend(suites.clifford_suite())
    if want("identities", ("spin9",)):
        report.extend(verify_spin9_identities(core_only=fam == "spin9" and args.only == ["identities"]))
        if not (fam == "spin9" and args.only == ["identities"]):
            report.extend(suites.spin9_bracket_suite())
    if want("identities", ("u",)):
        report.extend(suites.u_identity_suite(args.n))
    if want("decomposition", CLI_FAMILIES):
        recs = suites.decomposition_suite(args.n)
        report.extend([r for r in recs if fam is None or r.family == fam])
    if want("killing", ("so", "u", "sp", "su", "spin9")):
        recs = suites.killing_suite(args.samples, args.seed, exact_only=exact)
        report.extend([r for r in recs if fam is None or r.family == fam])
    if not exact and want("delta", ("su",)):
        report.extend(suites.delta_sampling_suite(seed=args.seed))
    if want("firey", ("sp-split", "firey")):
        report.extend(suites.firey_suite(args.seed, exact_only=exact))
    if want("table2", CLI_FAMILIES):
        recs = suites.table2_suite(args.n)
        report.extend([r for r in recs if fam is None or r.family == fam])
    return report


# ---------------------------------------------------------------- construct-killing


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def cmd_construct_killing(args) -> RunReport:
    from .killing import constant_length_test, cw_field_for_vector, round_delta_test, su_delta_field

    report = RunReport("exact" if args.family in ("su", "spin9") else "numeric")
    text = _read(args.vector)
    if args.family == "spin9":
        return _spin9_field(parse_vector(text, Field.R), report)
    field = {"so": Field.R, "u": Field.C, "su": Field.C, "sp": Field.H}.get(args.family)
    if field is None:
        raise SystemExit(f"construct-killing supports so, u, su, sp and spin9, not {args.family}")
    v = parse_vector(text, field)
    n = len(v) - 1
    if args.family == "su":
        u = su_delta_field(n, v)
        cert = round_delta_test(u)
        report.records.append(CheckRecord("su delta-vector field", cert.accepted, format_matrix(u), None,
                                          "round-metric delta-vector with U x0 = v", "su", n,
                                          f"lambda^2 = {cert.lam2}, psd margin = {cert.psd_margin:.3g}, trace = {u.trace().coeffs}"))
        return report
    u = cw_field_for_vector(field, n, v)
    cert = constant_length_test(u)
    ok = cert is not None
    detail = f"C^2 = {cert.C2}, residual = {cert.residual:.3g}" if ok else "U^2 is not scalar"
    report.records.append(CheckRecord(f"Clifford-Wolf field ({args.family})", ok, format_matrix(u), None,
                                      "constant-length Killing field with U x0 = v", args.family, n, detail))
    return report


def _spin9_field(u_vec, report: RunReport) -> RunReport:
    from .clifford import format_clifford
    from .spin9 import certify_spin9, cw_field_spin9

    u = [x.coeffs[0] for x in u_vec]
    w = cw_field_spin9(u)
    cert = certify_spin9(w)
    ok = cert is not None
    detail = (f"C^2 = {cert.C2}; all {cert.equations} entries of theta(W)^2 + C^2 Id vanish, "
              f"{cert.block_equations} of them in the lower 15 x 15 block") if ok else "certificate failed"
    report.records.append(CheckRecord("spin(9) Clifford-Wolf field", ok, format_clifford(w), None,
                                      "simple bivector with theta(W) x0 = u", "spin9", None, detail))
    return report


# ---------------------------------------------------------------- delta-check / table2


def cmd_delta_check(args) -> RunReport:
    from .deltacheck import family_witnesses, witness_threshold

    report = RunReport("exact")
    kind = args.family
    n = 1 if kind == "spin9" else args.n
    t = args.t if args.t is not None else Fraction(1)
    s = args.s if args.s is not None or kind != "sp-split" else t
    for w in family_witnesses(kind, n):
        rec = w.evaluate(t, s)
        rec.threshold = str(witness_threshold(w))
        report.records.append(rec)
    return report


def cmd_table2(args) -> RunReport:
    """One record per grid point: consistent when the verdict pattern matches the classified range."""
    from .deltacheck import TABLE_FAMILIES, grid_for, table2_report

    report = RunReport("exact")
    for kind in [args.family] if args.family else list(TABLE_FAMILIES):
        rep = table2_report(kind, args.n, grid_for(kind, args.n, args.points))
        for name, th in rep.thresholds.items():
            report.records.append(CheckRecord(f"implied threshold {name}", True, str(th), None,
                                              "exact solution of the affine margin", kind, rep.n))
        for p in rep.points:
            failing = ", ".join(p.failing) or "none"
            report.records.append(CheckRecord(
                "grid verdict", p.consistent, "passes all" if p.passed_all else "fails " + failing,
                "inside" if p.inside else "outside", "classified range of the metric family", kind, rep.n,
                f"t={p.t}" + ("" if p.s is None else f" s={p.s}")))
    return report


# ---------------------------------------------------------------- firey


def cmd_firey(args) -> RunReport:
    from .firey import (
        Ellipsoid,
        MetricParams,
        combine_metrics,
        dual_2_mean_ellipsoid,
        family_coefficients,
        family_parameters,
        s1_for_target,
    )

    report = RunReport("exact")
    if args.action == "combine":
        kind, n = args.family, args.n
        theta = args.theta if args.theta is not None else Fraction(1, 2)
        x = family_coefficients(kind, *(_pad(args.x, kind)), n=n)
        y = family_coefficients(kind, *(_pad(args.y, kind)), n=n)
        z = combine_metrics(x, y, theta)
        params = family_parameters(kind, z, n)
        from .deltacheck import family_witnesses, in_theorem_range

        t, s = params[0], params[1] if len(params) > 1 else None
        recs = [w.evaluate(t, s) for w in family_witnesses(kind, 1 if kind == "spin9" else n)]
        inside = in_theorem_range(kind, n, t, s) if kind != "so" else True
        report.records.append(CheckRecord("combined metric", all(r.holds for r in recs),
                                          ", ".join(str(p) for p in params), "classified range" if inside else "outside range",
                                          "harmonic combination of diagonal coefficients", kind, n,
                                          f"coefficients {[str(c) for c in z.x]}"))
        report.records.extend(recs)
    elif args.action == "s1":
        s1 = s1_for_target(args.t, args.s)
        report.records.append(CheckRecord("s1 for target (t, s)", True, s1, None,
                                          "(1/2, s1) combined with (1, 1) at theta=(2t-1)/t", "sp-split"))
    elif args.action == "ellipsoid":
        a1 = parse_matrix(_read(args.a), Field.R)
        a2 = parse_matrix(_read(args.b), Field.R)
        theta = float(args.theta if args.theta is not None else Fraction(1, 2))
        e = dual_2_mean_ellipsoid(Ellipsoid(a1.comps[0].astype(float)), Ellipsoid(a2.comps[0].astype(float)), theta)
        report.mode = "numeric"
        report.records.append(CheckRecord("dual 2-mean ellipsoid", True, np.array2string(e.A, precision=12), None,
                                          "((1-theta) A1^-1 + theta A2^-1)^-1", "firey"))
    return report


def _pad(vals, kind):
    if kind == "sp-split":
        return vals if len(vals) == 2 else [vals[0], vals[0]]
    return vals[:1]


# ---------------------------------------------------------------- spin9


def cmd_spin9(args) -> RunReport:
    from .spin9 import verify_spin9_identities

    report = RunReport("exact")
    if args.action == "verify":
        report.extend(verify_spin9_identities())
    elif args.action == "field":
        _spin9_field(parse_vector(_read(args.vector), Field.R), report)
    elif args.action == "dump-theta":
        text = export_text("theta-basis")
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        report.records.append(CheckRecord("dump theta basis", True, 36, 36, "theta(e_i e_j), i < j <= 9", "spin9"))
    return report


# ---------------------------------------------------------------- export / import


def export_text(what: str, family: str = "spin9", n: int = 2) -> str:
    """Text export. Blocks are '[name]' lines followed by one matrix line."""
    if what == "octonion-table":
        from .spin9 import octonion_table

        table = octonion_table()
        return "# octonion-table\n" + "\n".join(" ".join(f"{x:+d}" for x in row) for row in table) + "\n"
    if what == "theta-basis":
        from .clifford import Bivector, pairs
        from .spin9 import theta

        lines = ["# theta-basis"]
        for p in pairs(9):
            lines.append(f"[e{p[0]}e{p[1]}]")
            lines.append(format_matrix(theta(Bivector(9, {p: 1}))))
        return "\n".join(lines) + "\n"
    if what == "decomposition":
        from .homspace import build_decomposition

        d = build_decomposition(family, n)
        lines = [f"# decomposition {d.family.kind} n={d.family.n} field={d.field.name}"]
        for name, basis in d.parts.items():
            for k, b in enumerate(basis):
                lines.append(f"[{name}:{k}]")
                lines.append(format_matrix(b))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export target {what!r}")


def import_text(text: str) -> dict:
    """Inverse of export_text: name -> MatF, or the octonion table array."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0]
    if header.startswith("# octonion-table"):
        return {"octonion-table": np.array([[int(x) for x in ln.split()] for ln in lines[1:]], dtype=np.int64)}
    field = Field.R
    if "field=" in header:
        field = Field[header.split("field=")[1].split()[0]]
    out = {}
    for name_line, mat_line in zip(lines[1::2], lines[2::2]):
        out[name_line.strip()[1:-1]] = parse_matrix(mat_line, field)
    return out


def cmd_export(args) -> RunReport:
    text = export_text(args.what, args.family or "spin9", args.n)
    report = RunReport("exact")
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise SystemExit(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(text)
    back = import_text(text)
    ok = export_text(args.what, args.family or "spin9", args.n) == text and len(back) > 0
    report.records.append(CheckRecord(f"export {args.what}", ok, len(back), None, "re-importable text export", args.family))
    return report


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=CLI_FAMILIES)
    common.add_argument("--n", type=int, default=2)
    common.add_argument("--t", type=_fraction)
    common.add_argument("--s", type=_fraction)
    common.add_argument("--theta", type=_fraction)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--mode", choices=("exact", "numeric"), default="numeric")
    common.add_argument("--format", choices=("table", "json"), default="table")

    p = argparse.ArgumentParser(prog="gnspheres", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify-paper", parents=[common], help="run every verification suite")
    v.add_argument("--only", action="append", choices=SUITES)
    v.add_argument("--samples", type=int, default=20, help="random vectors per construction suite")
    v.set_defaults(func=cmd_verify_paper)

    k = sub.add_parser("construct-killing", parents=[common], help="build a constant-length Killing field")
    k.add_argument("--vector", required=True, help="file with the tangent vector at x0 ('-' for stdin)")
    k.set_defaults(func=cmd_construct_killing)

    d = sub.add_parser("delta-check", parents=[common], help="evaluate the necessary inequalities at (t, s)")
    d.set_defaults(func=cmd_delta_check)

    f = sub.add_parser("firey", parents=[common], help="metric interpolation calculus")
    f.add_argument("action", choices=("combine", "s1", "ellipsoid"))
    f.add_argument("--x", type=_pair)
    f.add_argument("--y", type=_pair)
    f.add_argument("--a", help="file with the first ellipsoid matrix")
    f.add_argument("--b", help="file with the second ellipsoid matrix")
    f.set_defaults(func=cmd_firey)

    s = sub.add_parser("spin9", parents=[common], help="spin(9) identities, fields and theta basis")
    s.add_argument("action", choices=("verify", "field", "dump-theta"))
    s.add_argument("--vector")
    s.add_argument("--out")
    s.set_defaults(func=cmd_spin9)

    t = sub.add_parser("table2", parents=[common], help="grid report of the necessary checks")
    t.add_argument("--points", type=int, default=41)
    t.set_defaults(func=cmd_table2)

    e = sub.add_parser("export", parents=[common], help="write text exports")
    e.add_argument("what", choices=("theta-basis", "decomposition", "octonion-table"))
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in ("delta-check", "table2") and args.family in ("so",):
        raise SystemExit("the so family has no metric parameter")
    if args.command == "delta-check" and args.family is None:
        raise SystemExit("delta-check needs --family")
    if args.command == "construct-killing" and args.family is None:
        raise SystemExit("construct-killing needs --family")
    if args.command == "firey" and args.action == "combine" and (args.family is None or args.x is None or args.y is None):
        raise SystemExit("firey combine needs --family, --x and --y")
    if args.command == "firey" and args.action == "s1" and (args.t is None or args.s is None):
        raise SystemExit("firey s1 needs --t and --s")
    if args.command == "spin9" and args.action == "field" and not args.vector:
        raise SystemExit("spin9 field needs --vector")
    try:
        report = args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    quiet = args.command in ("export",) and not args.out
    quiet = quiet or (args.command == "spin9" and args.action == "dump-theta" and not args.out)
    if quiet:
        return 0 if report.ok else 1
    return _emit(report, args.format)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
