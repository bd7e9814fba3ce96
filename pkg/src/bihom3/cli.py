"""Command-line front end.

Every subcommand prints a JSON report (or writes it to ``--report``) and
exits with 0 when all evaluated axioms pass, 1 when a violation was found
and 2 on a precondition failure or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .algebra import (
    AxiomReport,
    BihomLieAlgebra,
    PreconditionFailed,
    ThreeBihomLieAlgebra,
    TotallyBihomAssocAlgebra,
    check_bihom_lie,
    check_tensor_condition,
    check_three_bihom_lie,
    check_totally_assoc,
)
from .constructions import direct_sum, induced_binary, power_twist, tensor_product, twist, yau_twist
from .derivations import derivation_space, inner_derivation, is_derivation
from .linalg import DimensionMismatch, SingularMatrix, diag, format_scalar, fraction_array, identity, zeros
from .quadratic import (
    NoIsotropicComplement,
    QuadraticAlgebra,
    check_quadratic,
    coadjoint_rep,
    derived_series,
    descending_series,
    dual_representation,
    ideal_bracket_vanishes,
    is_isometry,
    reconstruct,
    series_length,
    t_star_extension,
)
from .representations import (
    Cocycle,
    Representation,
    adjoint_rep,
    check_cocycle,
    check_representation,
    coboundary_cocycle,
    extension_isomorphism,
    semidirect_product,
    t_theta_extension,
)

EXIT_PASS, EXIT_VIOLATION, EXIT_ERROR = 0, 1, 2


class UsageError(ValueError):
    """Bad command-line value (matrix literal, vector, ideal selector, file kind)."""


# ---------------------------------------------------------------------------
# argument parsing helpers


def _numbers(text: str, what: str) -> list:
    try:
        return [fraction_array([t.strip()])[0] for t in text.split(",") if t.strip()]
    except (ValueError, TypeError) as exc:
        raise UsageError(f"{what}: {exc}") from None


def parse_matrix(spec: str, rows: int, cols: int | None = None) -> np.ndarray:
    """``id``, ``zero``, ``scalar:c``, ``diag:a,b,...``, ``rows:a,b;c,d`` or a
    path to a ``kind matrix`` file."""
    cols = rows if cols is None else cols
    if spec == "id":
        if rows != cols:
            raise UsageError("id needs a square matrix")
        return identity(rows)
    if spec == "zero":
        return zeros((rows, cols))
    if spec.startswith("scalar:"):
        (c,) = _numbers(spec[7:], "scalar")
        return identity(rows) * c
    if spec.startswith("diag:"):
        values = _numbers(spec[5:], "diag")
        if len(values) != rows or rows != cols:
            raise UsageError(f"diag: expected {rows} entries, got {len(values)}")
        return diag(values)
    if spec.startswith("rows:"):
        data = [_numbers(r, "rows") for r in spec[5:].split(";")]
        m = fraction_array(data) if data and all(len(r) == len(data[0]) for r in data) else None
        if m is None or m.shape != (rows, cols):
            raise UsageError(f"rows: expected a {rows}x{cols} matrix")
        return m
    obj = io.load(spec)
    if not isinstance(obj, np.ndarray):
        raise UsageError(f"{spec}: expected a matrix file")
    if obj.shape != (rows, cols):
        raise UsageError(f"{spec}: expected shape {(rows, cols)}, got {obj.shape}")
    return obj


def parse_vector(spec: str, n: int) -> np.ndarray:
    """``e3`` (1-based basis vector), ``0`` or comma-separated coordinates."""
    if spec == "0":
        return zeros(n)
    if spec.startswith("e") and spec[1:].isdigit():
        i = int(spec[1:])
        if not 1 <= i <= n:
            raise UsageError(f"{spec}: index outside 1..{n}")
        v = zeros(n)
        v[i - 1] = 1
        return v
    values = _numbers(spec, "vector")
    if len(values) != n:
        raise UsageError(f"vector: expected {n} coordinates, got {len(values)}")
    return fraction_array(values)


def parse_ideal(spec: str, n: int) -> list[np.ndarray]:
    """``last:k``, ``first:k`` or ``basis:v1;v2;...`` (each ``v`` as in
    :func:`parse_vector`)."""
    kind, _, rest = spec.partition(":")
    if kind in ("last", "first"):
        try:
            k = int(rest)
        except ValueError:
            raise UsageError(f"ideal: bad count {rest!r}") from None
        if not 0 <= k <= n:
            raise UsageError(f"ideal: count outside 0..{n}")
        idx = range(n - k, n) if kind == "last" else range(k)
        return [identity(n)[:, i] for i in idx]
    if kind == "basis":
        return [parse_vector(v.strip(), n) for v in rest.split(";") if v.strip()]
    raise UsageError(f"ideal: unknown selector {spec!r}")


# ---------------------------------------------------------------------------
# report assembly


def _vec(a) -> list:
    return [format_scalar(x) for x in np.asarray(a, dtype=object).ravel()]


def _matrix_json(m: np.ndarray) -> list:
    return [[format_scalar(x) for x in row] for row in m]


def report_json(report: AxiomReport, max_violations: int) -> dict:
    out = {
        "passed": report.passed,
        "axioms": {name: {"passed": count == 0, "violations": count}
                   for name, count in report.axioms.items()},
        "violations": [
            {"axiom": v.axiom, "witness": list(v.witness), "lhs": _vec(v.lhs), "rhs": _vec(v.rhs)}
            for v in report.violations[:max_violations]
        ],
        "violation_count": len(report.violations),
    }
    if report.side_reports:
        out["informational"] = {k: report_json(r, max_violations)
                                for k, r in report.side_reports.items()}
    return out


class Context:
    def __init__(self, args, argv):
        self.args = args
        self.argv = argv
        self.inputs: dict[str, str] = {}
        self.checks: dict[str, AxiomReport] = {}
        self.results: dict = {}
        self.outputs: list[str] = []

    def load(self, path: str, *types):
        obj = io.load(path)
        self.inputs[path] = io.file_digest(path)
        if types and not isinstance(obj, types):
            names = ", ".join(t.__name__ for t in types)
            raise UsageError(f"{path}: expected {names}, got {type(obj).__name__}")
        return obj

    def check(self, name: str, report: AxiomReport) -> AxiomReport:
        self.checks[name] = report
        return report

    def header(self) -> list[str]:
        lines = ["command: bihom3 " + " ".join(self.argv)]
        lines += [f"input sha256 {path}: {digest}" for path, digest in self.inputs.items()]
        return lines

    def emit(self, obj, path: str | None = None, key: str = "output") -> None:
        text = io.dumps(obj, self.header())
        target = path if path is not None else self.args.out
        if target:
            Path(target).write_text(text)
            self.outputs.append(str(target))
        else:
            self.results[key] = text


def _representation(ctx: Context, A: ThreeBihomLieAlgebra, spec: str) -> Representation:
    """A module file, or the keywords ``adjoint`` / ``coadjoint``."""
    if spec == "adjoint":
        return adjoint_rep(A)[0]
    if spec == "coadjoint":
        return coadjoint_rep(A)[0]
    return ctx.load(spec, Representation)


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(ctx: Context) -> None:
    obj = ctx.load(ctx.args.file)
    if isinstance(obj, QuadraticAlgebra):
        ctx.check("three_bihom_lie", check_three_bihom_lie(obj.algebra))
        ctx.check("quadratic", check_quadratic(obj.algebra, obj.form))
    elif isinstance(obj, ThreeBihomLieAlgebra):
        ctx.check("three_bihom_lie", check_three_bihom_lie(obj))
    elif isinstance(obj, BihomLieAlgebra):
        ctx.check("bihom_lie", check_bihom_lie(obj))
    elif isinstance(obj, TotallyBihomAssocAlgebra):
        ctx.check("totally_assoc", check_totally_assoc(obj))
    else:
        raise UsageError(f"check: nothing to check for a {type(obj).__name__}")


def cmd_check_assoc(ctx: Context) -> None:
    T = ctx.load(ctx.args.file, TotallyBihomAssocAlgebra)
    ctx.check("totally_assoc", check_totally_assoc(T))
    ctx.check("tensor_condition", check_tensor_condition(T))


def cmd_check_rep(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    ctx.check("representation", check_representation(A, _representation(ctx, A, ctx.args.rep)))


def cmd_check_cocycle(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    R = _representation(ctx, A, ctx.args.rep)
    ctx.check("cocycle", check_cocycle(A, R, ctx.load(ctx.args.cocycle, Cocycle)))


def _emit_algebra(ctx: Context, A) -> None:
    ctx.emit(A)
    if isinstance(A, BihomLieAlgebra):
        ctx.check("output", check_bihom_lie(A))
    else:
        ctx.check("output", check_three_bihom_lie(A))


def cmd_twist(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    a = parse_matrix(ctx.args.alpha, A.n)
    b = parse_matrix(ctx.args.beta, A.n)
    _emit_algebra(ctx, twist(A, a, b))


def cmd_yau_twist(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    _emit_algebra(ctx, yau_twist(A, parse_matrix(ctx.args.alpha, A.n), parse_matrix(ctx.args.beta, A.n)))


def cmd_power_twist(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    _emit_algebra(ctx, power_twist(A, ctx.args.k))


def cmd_tensor(ctx: Context) -> None:
    T = ctx.load(ctx.args.assoc, TotallyBihomAssocAlgebra)
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    _emit_algebra(ctx, tensor_product(T, A))


def cmd_dsum(ctx: Context) -> None:
    A = ctx.load(ctx.args.first, ThreeBihomLieAlgebra)
    B = ctx.load(ctx.args.second, ThreeBihomLieAlgebra)
    _emit_algebra(ctx, direct_sum(A, B))


def cmd_induce_binary(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    _emit_algebra(ctx, induced_binary(A, parse_vector(ctx.args.vector, A.n)))


def cmd_der_space(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    space = derivation_space(A, ctx.args.k, ctx.args.l)
    ctx.results["dimension"] = space.dim
    ctx.results["basis"] = [_matrix_json(D) for D in space.basis]
    combined = AxiomReport()
    for j, D in enumerate(space.basis):
        combined.merge(is_derivation(D, A, space.k, space.l), f"basis{j + 1}/")
    ctx.check("derivations", combined)


def cmd_inner_der(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    u1, u2 = parse_vector(ctx.args.u1, A.n), parse_vector(ctx.args.u2, A.n)
    D = inner_derivation(A, u1, u2, ctx.args.k, ctx.args.l)
    ctx.emit(D)
    ctx.check("derivation", is_derivation(D, A, ctx.args.k, ctx.args.l + 1))


def cmd_semidirect(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    _emit_algebra(ctx, semidirect_product(A, _representation(ctx, A, ctx.args.rep)))


def cmd_textend(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    R = _representation(ctx, A, ctx.args.rep)
    _emit_algebra(ctx, t_theta_extension(A, R, ctx.load(ctx.args.cocycle, Cocycle)))


def cmd_coboundary(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    R = _representation(ctx, A, ctx.args.rep)
    th = coboundary_cocycle(A, R, parse_matrix(ctx.args.map, R.m, A.n))
    ctx.emit(th)
    ctx.check("cocycle", check_cocycle(A, R, th))


def cmd_sigma(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    R = _representation(ctx, A, ctx.args.rep)
    th = ctx.load(ctx.args.cocycle, Cocycle)
    sigma, report = extension_isomorphism(A, R, th, parse_matrix(ctx.args.map, R.m, A.n))
    ctx.emit(sigma)
    ctx.check("isomorphism", report)


def _emit_dual(ctx: Context, A, dual, report) -> None:
    ctx.emit(dual)
    ctx.check("dual_conditions", report)
    ctx.check("dual_representation", check_representation(A, dual))


def cmd_dual_rep(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    _emit_dual(ctx, A, *dual_representation(A, _representation(ctx, A, ctx.args.rep)))


def cmd_coadjoint(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    _emit_dual(ctx, A, *coadjoint_rep(A))


def cmd_series(ctx: Context) -> None:
    obj = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra, QuadraticAlgebra)
    A = obj.algebra if isinstance(obj, QuadraticAlgebra) else obj
    for name, fn, flag in (("derived", derived_series, "solvable"),
                           ("descending", descending_series, "nilpotent")):
        series = fn(A, ctx.args.max_steps)
        length = series_length(series)
        ctx.results[name] = {"dimensions": [S.shape[1] for S in series], "length": length}
        ctx.results[flag] = length is not None


def cmd_tstar(ctx: Context) -> None:
    A = ctx.load(ctx.args.algebra, ThreeBihomLieAlgebra)
    th = ctx.load(ctx.args.cocycle, Cocycle) if ctx.args.cocycle else None
    Q = t_star_extension(A, th)
    ctx.emit(Q)
    ctx.check("three_bihom_lie", check_three_bihom_lie(Q.algebra))
    ctx.check("quadratic", check_quadratic(Q.algebra, Q.form))


def cmd_reconstruct(ctx: Context) -> None:
    Q = ctx.load(ctx.args.quadratic, QuadraticAlgebra)
    ideal = parse_ideal(ctx.args.ideal, Q.n)
    ideal_bracket = AxiomReport()
    ideal_bracket.mark("ideal-bracket-vanishes")
    rec = reconstruct(Q, ideal)
    if not ideal_bracket_vanishes(Q.algebra, Q.form, ideal):
        ideal_bracket.add("ideal-bracket-vanishes", (), np.array([1]), np.array([0]))
    prefix = ctx.args.out
    for key, obj in (("B", rec.quotient), ("theta", rec.cocycle), ("phi", rec.phi)):
        ctx.emit(obj, f"{prefix}.{key}.alg" if prefix else None, key)
    if prefix:
        ctx.emit(rec.target, f"{prefix}.tstar.alg", "tstar")
    ctx.check("ideal_bracket", ideal_bracket)
    ctx.check("reconstruction", rec.report)


def cmd_isometry(ctx: Context) -> None:
    Q1 = ctx.load(ctx.args.source, QuadraticAlgebra)
    Q2 = ctx.load(ctx.args.target, QuadraticAlgebra)
    ctx.check("isometry", is_isometry(parse_matrix(ctx.args.map, Q2.n, Q1.n), Q1, Q2))


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bihom3", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the constructed object here")
    common.add_argument("--report", help="write the JSON report here instead of stdout")
    common.add_argument("--max-violations", type=int, default=20,
                        help="violation records kept in the report (default 20)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, *positionals):
        p = sub.add_parser(name, parents=[common], help=help_text)
        for pos in positionals:
            p.add_argument(pos)
        p.set_defaults(handler=fn)
        return p

    add("check", cmd_check, "axiom scan of an algebra file", "file")
    add("check-assoc", cmd_check_assoc, "totally Bihom-associative axioms and the tensor condition", "file")
    add("check-rep", cmd_check_rep, "representation conditions", "algebra", "rep")
    add("check-cocycle", cmd_check_cocycle, "3-cocycle conditions", "algebra", "rep", "cocycle")
    for name, fn, text in (("twist", cmd_twist, "twist by commuting multiplicative maps"),
                           ("yau-twist", cmd_yau_twist, "Yau twist of a 3-Lie algebra")):
        p = add(name, fn, text, "algebra")
        p.add_argument("--alpha", default="id", help="matrix literal or file")
        p.add_argument("--beta", default="id", help="matrix literal or file")
    add("power-twist", cmd_power_twist, "twist by powers of the structure maps",
        "algebra").add_argument("--k", type=int, required=True)
    add("tensor", cmd_tensor, "tensor product with a totally Bihom-associative algebra",
        "assoc", "algebra")
    add("dsum", cmd_dsum, "direct sum", "first", "second")
    add("induce-binary", cmd_induce_binary, "binary algebra induced by a fixed vector",
        "algebra").add_argument("--vector", required=True)
    p = add("der-space", cmd_der_space, "basis of the alpha^k beta^l-derivations", "algebra")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--l", type=int, default=0)
    p = add("inner-der", cmd_inner_der, "inner derivation w -> [u1, u2, alpha^k beta^l w]", "algebra")
    p.add_argument("--u1", required=True)
    p.add_argument("--u2", required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--l", type=int, default=0)
    add("semidirect", cmd_semidirect, "semidirect product", "algebra", "rep")
    add("textend", cmd_textend, "T_theta-extension", "algebra", "rep", "cocycle")
    add("coboundary", cmd_coboundary, "cocycle theta_F of an intertwining map",
        "algebra", "rep").add_argument("--map", required=True)
    add("sigma", cmd_sigma, "extension isomorphism for theta and theta + theta_F",
        "algebra", "rep", "cocycle").add_argument("--map", required=True)
    add("dual-rep", cmd_dual_rep, "dual representation and its four conditions", "algebra", "rep")
    add("coadjoint", cmd_coadjoint, "coadjoint representation", "algebra")
    add("series", cmd_series, "derived and descending series",
        "algebra").add_argument("--max-steps", type=int, default=None)
    add("tstar", cmd_tstar, "T*_theta-extension with the hyperbolic form",
        "algebra").add_argument("--cocycle", default=None)
    add("reconstruct", cmd_reconstruct,
        "exhibit a quadratic algebra as a T*_theta-extension (--out is a file prefix)",
        "quadratic").add_argument("--ideal", required=True, help="last:k, first:k or basis:v1;v2")
    add("isometry", cmd_isometry, "check an isometric isomorphism", "source",
        "target").add_argument("--map", required=True)
    return parser


def exit_code(report: dict) -> int:
    """Exit status as a function of the report content alone."""
    if report.get("error") is not None:
        return EXIT_ERROR
    return EXIT_PASS if all(c["passed"] for c in report["checks"].values()) else EXIT_VIOLATION


def run(argv: list[str]) -> tuple[int, dict]:
    """Execute one command line; returns the exit code and the report."""
    return _execute(build_parser().parse_args(argv), argv)


def _execute(args, argv: list[str]) -> tuple[int, dict]:
    ctx = Context(args, argv)
    start = time.perf_counter()
    error = None
    try:
        args.handler(ctx)
    except PreconditionFailed as exc:
        error = {"type": "precondition", "message": str(exc)}
    except io.FormatError as exc:
        error = {"type": "parse", "message": str(exc)}
    except NoIsotropicComplement as exc:
        error = {"type": "no-complement", "message": str(exc)}
    except (UsageError, DimensionMismatch, SingularMatrix, OSError, ValueError, TypeError) as exc:
        error = {"type": type(exc).__name__, "message": str(exc)}
    report = {
        "command": ["bihom3", *argv],
        "inputs": ctx.inputs,
        "checks": {name: report_json(r, args.max_violations) for name, r in ctx.checks.items()},
        "results": ctx.results,
        "outputs": ctx.outputs,
        "error": error,
        "timing_seconds": round(time.perf_counter() - start, 6),
    }
    report["status"] = {EXIT_PASS: "pass", EXIT_VIOLATION: "violation",
                        EXIT_ERROR: "error"}[exit_code(report)]
    return exit_code(report), report


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(argv)
    code, report = _execute(args, argv)
    text = json.dumps(report, indent=2)
    target = args.report
    if target:
        Path(target).write_text(text + "\n")
        print(f"{report['status']}: report written to {target}")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
