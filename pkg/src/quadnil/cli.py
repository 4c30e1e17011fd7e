"""Command line: ``python3 -m quadnil <command> ...``.

Exit status is 0 for success or a true verdict, 1 for a false verdict and
2 for usage errors, including malformed input files.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction

from . import linalg
from .algebra import (
    RankDeficientWarning,
    TwoStepAlgebra,
    bi_type,
    check_invariance,
    is_reduced,
    isotropic_index,
    mult_table,
    mult_table_symbolic,
)
from .arith import format_rational
from .family import (
    Assignment,
    SymbolicFamily,
    build_B,
    grid_to_latex,
    grid_to_text,
    is_d_quadratic,
    num_params,
    structure_matrix,
)
from .isometry import hat, verify_iso
from .search import (
    ACHIEVES,
    DEFAULT_LISTING_CAP,
    DEFAULT_SIZE_CAP,
    certify_support,
    impossibility_certificate,
    min_support,
)

FORMATS = ("text", "json", "latex")
LATEX_COMMANDS = {"family", "bmatrix", "table", "hat"}


class UsageError(Exception):
    pass


# -- input ----------------------------------------------------------------

def _read_json(path: str, what: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {what} file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} file {path} is not valid JSON: {exc}") from None


def _read_matrix(path: str, what: str) -> linalg.Matrix:
    doc = _read_json(path, what)
    if not isinstance(doc, dict):
        raise UsageError(f"{what} file {path}: expected a JSON object with fields rows, cols, entries")
    try:
        M = linalg.from_json(doc)
    except ValueError as exc:
        raise UsageError(f"{what} file {path}: {exc}") from None
    if any(not isinstance(x, Fraction) for r in M for x in r):
        raise UsageError(f"{what} file {path} field 'entries': expected rational numbers")
    return M


def _assignment(args, d: int | None) -> Assignment | None:
    if args.assign is not None and args.assignment is not None:
        raise UsageError("give either --assign or --assignment, not both")
    try:
        if args.assign is not None:
            if d is None:
                raise UsageError("--assign needs --d")
            return Assignment.parse(args.assign, d)
        if args.assignment is not None:
            doc = _read_json(args.assignment, "assignment")
            asg = Assignment.from_json(doc)
            if d is not None and asg.d != d:
                raise UsageError(f"assignment file field 'd' is {asg.d} but --d is {d}")
            return asg
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return None


def _family(args, d: int) -> SymbolicFamily:
    if args.family is None:
        return SymbolicFamily.canonical(d)
    try:
        fam = SymbolicFamily.from_json(_read_json(args.family, "family"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if fam.d != d:
        raise UsageError(f"family file field 'd' is {fam.d} but --d is {d}")
    return fam


def _need_d(args) -> int:
    if args.d is None:
        raise UsageError(f"{args.command} needs --d")
    if args.d < 2:
        raise UsageError("--d must be at least 2")
    return args.d


# -- commands -------------------------------------------------------------
# each returns (document, exit code); a document is a str (text/latex) or dict (json)

def cmd_family(args):
    d = _need_d(args)
    fam = _family(args, d)
    if args.format == "json":
        return fam.to_json(), 0
    if args.format == "latex":
        return "\n\n".join(
            f"A_{{{i}}} = {grid_to_latex(A)}" for i, A in enumerate(fam.matrices, start=1)
        ), 0
    return "\n\n".join(f"A{i} =\n{grid_to_text(A)}" for i, A in enumerate(fam.matrices, start=1)), 0


def cmd_bmatrix(args):
    d = _need_d(args)
    C = structure_matrix(_family(args, d)) if args.family else build_B(d)
    asg = _assignment(args, d)
    if asg is not None:
        B = C.evaluate(asg)
        return _emit_matrix(B, args.format), 0
    if args.format == "json":
        return C.to_json(), 0
    return (C.to_latex() if args.format == "latex" else C.to_text()), 0


def _emit_matrix(M: linalg.Matrix, fmt: str):
    if fmt == "json":
        return linalg.to_json(M)
    return linalg.to_latex(M) if fmt == "latex" else linalg.to_text(M)


def _algebra(args, d: int, asg: Assignment) -> TwoStepAlgebra:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RankDeficientWarning)
        if args.family:
            return TwoStepAlgebra.from_family(_family(args, d), asg, args.pad)
        return TwoStepAlgebra.from_assignment(d, asg, args.pad)


def cmd_table(args):
    d = _need_d(args)
    asg = _assignment(args, d)
    if asg is None:
        if args.family:
            raise UsageError("a symbolic table is only available for the canonical family")
        return mult_table_symbolic(d, args.format), 0
    try:
        alg = _algebra(args, d, asg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return mult_table(alg, args.format), 0


def cmd_check(args):
    d = _need_d(args)
    asg = _assignment(args, d)
    if asg is None:
        raise UsageError("check needs --assign or --assignment")
    fam = _family(args, d)
    report = is_d_quadratic(fam, asg)
    doc = {"d": d, "pad": args.pad, **report.to_json()}
    doc.update(invariance=None, bi_type=None, isotropic_index=None, reduced=None)
    if report.cond1 and report.cond2 and report.cond3:
        alg = _algebra(args, d, asg)
        doc.update(
            invariance=check_invariance(alg),
            bi_type=list(bi_type(alg)),
            isotropic_index=isotropic_index(alg),
            reduced=is_reduced(alg),
        )
    code = 0 if report.ok and doc["invariance"] else 1
    if args.format == "json":
        return doc, code
    return "\n".join(f"{k}: {_text_value(v)}" for k, v in doc.items()), code


def _text_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "n/a"
    if isinstance(v, list):
        return "(" + ", ".join(map(str, v)) + ")"
    return str(v)


def cmd_rank(args):
    d = _need_d(args)
    asg = _assignment(args, d)
    if asg is None:
        raise UsageError("rank needs --assign or --assignment")
    report = is_d_quadratic(_family(args, d), asg)
    doc = {
        "d": d,
        "assignment": {f"a{t}": format_rational(v) for t, v in asg.values.items()},
        "rank": report.rank,
        "d_quadratic": report.ok,
    }
    code = 0 if report.ok else 1
    if args.format == "json":
        return doc, code
    return f"rank {report.rank}\nd-quadratic: {_text_value(report.ok)}", code


def cmd_search(args):
    d = _need_d(args)
    if args.listing_cap < 0:
        raise UsageError("--listing-cap must be >= 0 (0 lists every support)")
    try:
        result = min_support(
            d,
            args.max_size,
            listing_cap=args.listing_cap or None,
            seed=args.seed,
            symbolic=args.symbolic,
            allow_large=args.allow_large,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    doc = result.to_json()
    if args.format == "json":
        return doc, 0
    lines = [f"d = {d}", f"min_support = {_text_value(result.min_support)}"]
    for m, n in result.refuted.items():
        lines.append(f"refuted size {m}: {n}")
    if result.achieving_total:
        lines.append(f"achieving supports: {result.achieving_total} (listed {len(result.achieving)})")
    for cert in doc["certificates"]:
        lines.append(_cert_line(cert))
    return "\n".join(lines), 0


def _cert_line(cert: dict) -> str:
    head = "{" + ", ".join(cert["support"]) + "} " + cert["verdict"]
    if "witness" in cert:
        return head + " witness " + ",".join(f"{k}={v}" for k, v in cert["witness"].items())
    return head + ": " + cert["proof"]["statement"]


def cmd_iso(args):
    for flag in ("ba", "be", "q"):
        if getattr(args, flag) is None:
            raise UsageError(f"iso needs --{flag}")
    BA = _read_matrix(args.ba, "B_A")
    BE = _read_matrix(args.be, "B_E")
    Q = _read_matrix(args.q, "Q")
    if args.d is not None and (BA.rows != args.d or Q.rows != args.d):
        raise UsageError(f"matrices do not match --d {args.d}")
    try:
        report = verify_iso(BA, BE, Q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    code = 0 if report.match else 1
    if args.format == "json":
        return report.to_json(), code
    return f"match: {_text_value(report.match)}\nresidual_nonzeros: {report.residual_nonzeros}", code


def cmd_hat(args):
    if args.q is None:
        raise UsageError("hat needs --q")
    Q = _read_matrix(args.q, "Q")
    if not Q.is_square():
        raise UsageError(f"Q file {args.q}: Q must be square, got {Q.rows}x{Q.cols}")
    return _emit_matrix(hat(Q), args.format), 0


def cmd_certify(args):
    d = _need_d(args)
    if args.support is not None:
        support = _parse_support(args.support, d)
        cert = certify_support(build_B(d), support, seed=args.seed, symbolic=args.symbolic)
        doc = cert.to_json()
        code = 0 if cert.verdict == ACHIEVES else 1
        return (doc if args.format == "json" else _cert_line(doc)), code
    cert = impossibility_certificate(d)
    doc = cert.to_json()
    if args.format == "json":
        return doc, 0
    lines = [f"d = {d}", f"minors of order {d}: {len(cert.minors)}"]
    lines += [f"({' '.join(m['columns'])}): {m['value']}" for m in doc["minors"]]
    lines.append("verdict: " + ("IMPOSSIBLE (every minor is zero)" if cert.all_zero else "rank d is attainable"))
    return "\n".join(lines), 0


def _parse_support(text: str, d: int) -> list[int]:
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        name = part[1:] if part.startswith("a") else part
        if not name.isdigit() or not 1 <= int(name) <= num_params(d):
            raise UsageError(f"bad support item {part!r}; expected a1..a{num_params(d)}")
        out.append(int(name))
    if not out:
        raise UsageError("empty support")
    return out


COMMANDS = {
    "family": (cmd_family, "print the adjoint matrices A_1..A_d"),
    "bmatrix": (cmd_bmatrix, "print the structure matrix C[d], optionally evaluated"),
    "table": (cmd_table, "print the multiplication table"),
    "check": (cmd_check, "check the family conditions and the algebra invariants"),
    "rank": (cmd_rank, "rank of C[d] at an assignment"),
    "search": (cmd_search, "minimal supports reaching rank d"),
    "iso": (cmd_iso, "test B_E == Q^t B_A hat(Q)"),
    "hat": (cmd_hat, "second compound of Q"),
    "certify": (cmd_certify, "zero-minor certificate for C[d] or for a support"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadnil", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_text) in COMMANDS.items():
        s = sub.add_parser(name, help=help_text)
        s.add_argument("--d", type=int, help="type d (number of generators)")
        s.add_argument("--format", choices=FORMATS, default="text")
        s.add_argument("--out", help="write the output here instead of standard output")
        if name in ("bmatrix", "table", "check", "rank"):
            s.add_argument("--assign", help="inline assignment, e.g. a1=1,a10=2/3")
            s.add_argument("--assignment", help="assignment JSON file")
        if name in ("family", "bmatrix", "table", "check", "rank"):
            s.add_argument("--family", help="family JSON file (defaults to the canonical family)")
        if name in ("table", "check"):
            s.add_argument("--pad", type=int, default=0, help="dimension of an orthogonal abelian summand")
        if name in ("search", "certify"):
            s.add_argument("--seed", type=int, default=0, help="seed of the random filter")
            s.add_argument("--symbolic", action="store_true", help="disable the random filter")
        if name == "search":
            s.add_argument("--max-size", type=int, default=DEFAULT_SIZE_CAP)
            s.add_argument("--listing-cap", type=int, default=DEFAULT_LISTING_CAP, help="0 lists all")
            s.add_argument("--allow-large", action="store_true", help="allow d > 8")
        if name == "certify":
            s.add_argument("--support", help="comma-separated parameters, e.g. a1,a10,a15")
        if name in ("iso", "hat"):
            s.add_argument("--q", help="Q matrix JSON file")
        if name == "iso":
            s.add_argument("--ba", help="B_A matrix JSON file")
            s.add_argument("--be", help="B_E matrix JSON file")
    return p


def render(doc) -> str:
    if isinstance(doc, dict):
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    return doc if doc.endswith("\n") else doc + "\n"


def run(argv=None) -> tuple[int, str, str | None]:
    """Parse ``argv`` and execute; returns (exit code, output text, output path)."""
    args = build_parser().parse_args(argv)
    if args.format == "latex" and args.command not in LATEX_COMMANDS:
        raise UsageError(f"--format latex is not available for {args.command}")
    if getattr(args, "pad", 0) < 0:
        raise UsageError("--pad must be >= 0")
    doc, code = COMMANDS[args.command][0](args)
    return code, render(doc), args.out


def main(argv=None) -> int:
    try:
        code, text, out = run(argv)
    except UsageError as exc:
        print(f"quadnil: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse
        return exc.code if isinstance(exc.code, int) else 2
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code

