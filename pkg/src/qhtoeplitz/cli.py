"""Command-line front end.

Symbols are passed inline, as @path, or as '-' for stdin.  Every command
prints a structured report (stable key-value text; --json for JSON) and
exits 0 on success, 1 on input errors, 2 on mathematical refutations
(square-check failure, nonzero commutator in verify).
"""
from __future__ import annotations

import argparse
import random
import sys
import time
from fractions import Fraction

import mpmath

from .exact import AlgebraError, GR_ZERO, GaussianRational
from .radial import is_admissible, mellin
from .operators import (
    GradedOperator,
    NotToeplitzError,
    PolarSymbol,
    apply_operator,
    commutator,
    compose,
    from_symbol,
    power,
    square_check,
    to_matrix,
    toeplitz_symbol_of,
)
from .commutant import CommutantProblem, solve_ladder
from .report import Report
from .symbols import SymbolDocument, SymbolSyntaxError, format_symbol, parse_symbol


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.handler(args)
    except (SymbolSyntaxError, AlgebraError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(report.to_json() if args.json else report.to_text(), end="")
    return code


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit the report as JSON")

    p = argparse.ArgumentParser(
        prog="qhtoeplitz",
        description="exact calculus for quasihomogeneous Toeplitz operators "
                    "on the Bergman space",
    )
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("mellin", parents=[common],
                       help="Mellin images of a symbol's radial parts")
    q.add_argument("symbol")
    q.set_defaults(handler=_cmd_mellin)

    q = sub.add_parser("apply", parents=[common],
                       help="apply the Toeplitz operator to a basis vector")
    q.add_argument("symbol")
    q.add_argument("--k", type=int, required=True, help="basis index")
    q.set_defaults(handler=_cmd_apply)

    q = sub.add_parser("compose", parents=[common],
                       help="weights of T_f T_g, with symbol recovery")
    q.add_argument("f")
    q.add_argument("g")
    q.set_defaults(handler=_cmd_compose)

    q = sub.add_parser("commutator", parents=[common],
                       help="weights of [T_f, T_g]")
    q.add_argument("f")
    q.add_argument("g")
    q.set_defaults(handler=_cmd_commutator)

    q = sub.add_parser("power", parents=[common],
                       help="weights of (T_f)^n, with symbol recovery")
    q.add_argument("symbol")
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(handler=_cmd_power)

    q = sub.add_parser("square-check", parents=[common],
                       help="decide whether T_g^2 is a Toeplitz operator")
    q.add_argument("symbol")
    q.set_defaults(handler=_cmd_square_check)

    q = sub.add_parser("solve-commutant", parents=[common],
                       help="solve [T_f, T_g] = 0 over a truncated ansatz")
    q.add_argument("symbol", help="the symbol g")
    q.add_argument("--max-degree", type=int, required=True, metavar="N",
                   help="top degree of the f ansatz")
    q.add_argument("--depth", type=int, required=True, metavar="L",
                   help="anti-analytic depth of the f ansatz")
    q.set_defaults(handler=_cmd_solve_commutant)

    q = sub.add_parser("verify", parents=[common],
                       help="matrix commutator check plus quadrature samples")
    q.add_argument("f")
    q.add_argument("g")
    q.add_argument("--dim", type=int, required=True, metavar="K")
    q.add_argument("--tol", type=float, default=1e-10)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(handler=_cmd_verify)
    return p


def _read_symbol(arg: str) -> SymbolDocument:
    if arg == "-":
        return parse_symbol(sys.stdin.read().strip())
    if arg.startswith("@"):
        with open(arg[1:], "r", encoding="utf-8") as fh:
            return parse_symbol(fh.read().strip())
    return parse_symbol(arg)


def _start(command: str, **inputs) -> Report:
    rep = Report(command)
    for key, value in inputs.items():
        rep.put("inputs", key, value)
    return rep


def _warn(rep: Report, doc: SymbolDocument, label: str) -> None:
    if doc.warnings:
        rep.put_sequence(f"warnings_{label}", doc.warnings)


def _weights_node(op: GradedOperator) -> dict:
    out = {}
    for degree, weight in op.parts:
        out[f"degree_{degree}"] = str(weight)
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_mellin(args):
    doc = _read_symbol(args.symbol)
    rep = _start("mellin", symbol=format_symbol(doc.symbol))
    _warn(rep, doc, "symbol")
    node = {}
    for degree, radial in doc.symbol.parts:
        image = mellin(radial)
        adm = is_admissible(radial)
        node[f"degree_{degree}"] = {
            "radial": str(radial),
            "image": str(image.value),
            "admissible": str(bool(adm)).lower(),
        }
        if not adm:
            node[f"degree_{degree}"]["witnesses"] = {
                f"{i:04d}": f"exponent {t[1]}" for i, t in enumerate(adm.witnesses)
            }
    rep.put("results", node)
    return rep, 0


def _cmd_apply(args):
    if args.k < 0:
        raise ValueError("basis index must be nonnegative")
    doc = _read_symbol(args.symbol)
    rep = _start("apply", symbol=format_symbol(doc.symbol), k=args.k)
    _warn(rep, doc, "symbol")
    coeffs = apply_operator(from_symbol(doc.symbol), args.k)
    rep.put("results", "coefficients",
            {f"degree_{d}": str(v) for d, v in sorted(coeffs.items())})
    rep.put("results", "is_zero", str(not coeffs).lower())
    return rep, 0


def _cmd_compose(args):
    fdoc, gdoc = _read_symbol(args.f), _read_symbol(args.g)
    rep = _start("compose", f=format_symbol(fdoc.symbol), g=format_symbol(gdoc.symbol))
    product = compose(from_symbol(fdoc.symbol), from_symbol(gdoc.symbol))
    rep.put("results", "weights", _weights_node(product))
    try:
        sym = toeplitz_symbol_of(product)
        rep.put("results", "toeplitz_symbol", format_symbol(sym))
    except NotToeplitzError as exc:
        rep.put("results", "toeplitz_symbol", f"none ({exc})")
    return rep, 0


def _cmd_commutator(args):
    fdoc, gdoc = _read_symbol(args.f), _read_symbol(args.g)
    rep = _start("commutator", f=format_symbol(fdoc.symbol),
                 g=format_symbol(gdoc.symbol))
    bracket = commutator(from_symbol(fdoc.symbol), from_symbol(gdoc.symbol))
    rep.put("results", "weights", _weights_node(bracket))
    rep.put("results", "is_zero", str(bracket.is_zero).lower())
    return rep, 0


def _cmd_power(args):
    if args.n < 1:
        raise ValueError("power exponent must be >= 1")
    doc = _read_symbol(args.symbol)
    rep = _start("power", symbol=format_symbol(doc.symbol), n=args.n)
    op = power(from_symbol(doc.symbol), args.n)
    rep.put("results", "weights", _weights_node(op))
    try:
        sym = toeplitz_symbol_of(op)
        rep.put("results", "toeplitz_symbol", format_symbol(sym))
    except NotToeplitzError as exc:
        rep.put("results", "toeplitz_symbol", f"none ({exc})")
    return rep, 0


def _cmd_square_check(args):
    doc = _read_symbol(args.symbol)
    rep = _start("square-check", symbol=format_symbol(doc.symbol))
    result = square_check(doc.symbol)
    rep.put("results", "is_toeplitz", str(result.is_toeplitz).lower())
    if result:
        rep.put("results", "square_symbol", format_symbol(result.symbol))
        return rep, 0
    rep.put("results", "failing_degree", str(result.degree))
    rep.put("results", "witness_exponent", str(result.witness_exponent))
    rep.put("results", "reason", result.reason)
    return rep, 2


def _extract_problem(symbol: PolarSymbol, max_degree: int,
                     depth: int) -> CommutantProblem:
    """Validate the g shape e(1)*r^3 + sum a_l zbar^l and build the problem,
    zero-padding the tail so every asserted window equation is known."""
    from .radial import RadialSymbol

    if symbol.radial_part(1) != RadialSymbol.monomial(1, 3):
        raise AlgebraError("g must have analytic part exactly e(1)*r^3")
    tail: dict[int, GaussianRational] = {}
    for degree, radial in symbol.parts:
        if degree == 1:
            continue
        if degree >= 0:
            raise AlgebraError(f"unexpected degree {degree} in g")
        l = -degree
        terms = radial.terms
        if len(terms) != 1 or terms[0][1] != l or terms[0][2] != 0:
            raise AlgebraError(
                f"degree {degree} part of g must be a multiple of zbar^{l}"
            )
        tail[l] = terms[0][0]
    span = max(max_degree + depth, max(tail, default=0))
    coeffs = [tail.get(l, GR_ZERO) for l in range(1, span + 1)]
    return CommutantProblem(coeffs, max_degree, depth)


def _cmd_solve_commutant(args):
    doc = _read_symbol(args.symbol)
    rep = _start("solve-commutant", g=format_symbol(doc.symbol),
                 max_degree=args.max_degree, depth=args.depth)
    _warn(rep, doc, "g")
    problem = _extract_problem(doc.symbol, args.max_degree, args.depth)
    t0 = time.perf_counter()
    result = solve_ladder(problem)
    elapsed = time.perf_counter() - t0
    rep.put("results", "final_top_degree", str(result.final_ansatz))
    rep.put("results", "dimension", str(result.dimension))
    rep.put("results", "tail_extended", str(result.tail_extended).lower())
    rep.put("results", "window_verified_depth", str(result.window_verified_depth))
    basis_node = {}
    for name, sym, cls in zip(result.basis_params, result.basis,
                              result.classification_strings()):
        basis_node[name] = {"symbol": format_symbol(sym), "as_polynomial_in_Tg": cls}
    rep.put("results", "basis", basis_node)
    rep.put_sequence("trace", result.trace)
    rep.put_sequence("ledger", [str(e) for e in result.entries])
    rep.put_sequence("assumption_flags", result.assumption_flags)
    rep.put("timings", "solve_seconds", f"{elapsed:.3f}")
    return rep, 0


def _mat_mul(a, b):
    n = len(a)
    out = [[GR_ZERO] * n for _ in range(n)]
    for i in range(n):
        row_out = out[i]
        for j, aij in enumerate(a[i]):
            if aij.is_zero:
                continue
            row_b = b[j]
            for k in range(n):
                bjk = row_b[k]
                if not bjk.is_zero:
                    row_out[k] = row_out[k] + aij * bjk
    return out


def _cmd_verify(args):
    if args.dim < 1:
        raise ValueError("matrix dimension must be >= 1")
    fdoc, gdoc = _read_symbol(args.f), _read_symbol(args.g)
    rep = _start("verify", f=format_symbol(fdoc.symbol),
                 g=format_symbol(gdoc.symbol), dim=args.dim, tol=args.tol,
                 seed=args.seed)
    tf, tg = from_symbol(fdoc.symbol), from_symbol(gdoc.symbol)
    dim = args.dim
    max_deg = max(tf.max_abs_degree(), tg.max_abs_degree())
    safe = dim - 2 * max_deg
    mf, mg = to_matrix(tf, dim), to_matrix(tg, dim)
    t0 = time.perf_counter()
    fg = _mat_mul(mf, mg)
    gf = _mat_mul(mg, mf)
    worst = Fraction(0)
    worst_at = None
    nonzero = 0
    for i in range(dim + 1):
        for k in range(min(safe, dim) + 1):
            entry = fg[i][k] - gf[i][k]
            if not entry.is_zero:
                nonzero += 1
                a2 = entry.abs2()
                if a2 > worst:
                    worst, worst_at = a2, (i, k)
    elapsed = time.perf_counter() - t0
    rep.put("results", "safe_column_bound", str(safe))
    rep.put("results", "nonzero_entries_on_safe_columns", str(nonzero))
    rep.put("results", "max_abs_entry", repr(float(worst) ** 0.5))
    rep.put("results", "exactly_zero", str(nonzero == 0).lower())
    if worst_at is not None:
        rep.put("results", "max_entry_at", f"row {worst_at[0]}, column {worst_at[1]}")

    checks, failures = _quadrature_checks(fdoc.symbol, gdoc.symbol,
                                          args.tol, args.seed)
    rep.put("results", "quadrature_samples", str(len(checks)))
    rep.put("results", "quadrature_max_rel_error",
            repr(max((c for c in checks), default=0.0)))
    rep.put("results", "quadrature_ok", str(not failures).lower())
    rep.put("timings", "matrix_seconds", f"{elapsed:.3f}")
    code = 0 if (nonzero == 0 and not failures) else 2
    return rep, code


def _quadrature_checks(f: PolarSymbol, g: PolarSymbol, tol: float, seed: int):
    """Cross-check exact Mellin values of the symbols' radial parts against
    adaptive numeric integration at 20 sampled integer arguments."""
    rng = random.Random(seed)
    parts = [(d, r) for sym in (f, g) for d, r in sym.parts if is_admissible(r)]
    rel_errors: list[float] = []
    failures = 0
    if not parts:
        return rel_errors, failures
    with mpmath.workdps(30):
        for _ in range(20):
            degree, radial = parts[rng.randrange(len(parts))]
            k = rng.randrange(0, 9)
            point = 2 * k + abs(degree) + 3  # inside the analyticity region
            exact = complex(mellin(radial).evaluate(point))
            numeric = mpmath.quad(
                lambda r, _rad=radial, _s=point: _rad.evaluate(float(r))
                * mpmath.mpf(r) ** (_s - 1),
                [0, 1],
            )
            numeric = complex(numeric)
            scale = max(abs(exact), 1e-30)
            rel = abs(exact - numeric) / scale
            rel_errors.append(rel)
            if rel > tol:
                failures += 1
    return rel_errors, failures


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
