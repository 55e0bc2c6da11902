"""Command-line front end.  Every command prints one JSON document.

Exit codes: 0 success, 1 validation failure, 2 usage or input error,
3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import curves, fusion, moves
from .model import DEFAULT_TOLERANCE, BUILTIN_NAMES, AnyonModel, ModelError, builtin, load, validate

SCHEMA_VERSION = 1

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class NumericFailure(Exception):
    def __init__(self, message: str, document: dict):
        super().__init__(message)
        self.document = document


# ---------------------------------------------------------------------------
# helpers


def _model(args) -> AnyonModel:
    if getattr(args, "model", None) and getattr(args, "builtin", None):
        raise UsageError("give either --builtin or --model, not both")
    if getattr(args, "model", None):
        try:
            return load(args.model)
        except ModelError as exc:
            raise UsageError(str(exc)) from None
    try:
        return builtin(getattr(args, "builtin", None) or "fibonacci")
    except ModelError as exc:
        raise UsageError(str(exc)) from None


def _labels(model: AnyonModel, text: str) -> tuple[int, ...]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    try:
        return tuple(model.index(t) for t in names)
    except ModelError as exc:
        raise UsageError(str(exc)) from None


def _surface(model: AnyonModel, args) -> fusion.StandardSurface:
    exterior = _labels(model, args.exterior)
    if len(exterior) != 1:
        raise UsageError("--exterior takes exactly one label")
    return fusion.StandardSurface(_labels(model, args.interior), exterior[0])


def _shape(args, n: int) -> fusion.TreeShape:
    text = getattr(args, "shape", None)
    if not text:
        return fusion.TreeShape.left_comb(n)
    try:
        shape = fusion.TreeShape.parse(text)
    except fusion.ShapeError as exc:
        raise UsageError(str(exc)) from None
    if shape.n != n:
        raise UsageError(f"shape {text!r} has {shape.n} leaves, surface has {n} holes")
    return shape


def _tolerance(args) -> float:
    tol = getattr(args, "tolerance", None)
    tol = DEFAULT_TOLERANCE if tol is None else tol
    if not tol > 0:
        raise UsageError("--tolerance must be positive")
    return tol


def _diagram(model: AnyonModel, source: str) -> curves.CurveDiagram:
    text = source if source.lstrip().startswith("{") else None
    if text is None:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read diagram file: {exc}") from None
    try:
        return curves.CurveDiagram.from_dict(model, json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, ModelError) as exc:
        raise UsageError(f"bad curve diagram {source!r}: {exc}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> tuple[int, dict]:
    model = _model(args)
    report = validate(model, _tolerance(args))
    return (EXIT_OK if report.passed else EXIT_INVALID), {"report": report.to_dict()}


def cmd_dims(args) -> tuple[int, dict]:
    model = _model(args)
    surface = _surface(model, args)
    shape = _shape(args, surface.n)
    doc = {
        "model": model.name,
        "surface": surface.to_dict(model),
        "dim": fusion.dim(model, surface, shape),
    }
    if args.basis:
        doc["shape"] = str(shape)
        doc["basis"] = [t.describe(model) for t in fusion.enumerate_basis(model, surface, shape)]
    return EXIT_OK, doc


def cmd_fmatrix(args) -> tuple[int, dict]:
    model = _model(args)
    a, b, c, d = _labels(model, ",".join(args.labels)) if len(args.labels) == 4 else (None,) * 4
    if a is None:
        raise UsageError("fmatrix takes four labels a b c d")
    u = moves.f_matrix(model, a, b, c, d)
    return EXIT_OK, {"model": model.name, "labels": list(args.labels), "unitary": u.to_dict(model)}


def _checked(u: moves.Unitary, tol: float, doc: dict) -> dict:
    res = u.unitarity_residual()
    doc["unitarity_residual"] = res
    if res > tol:
        raise NumericFailure(f"unitarity residual {res:.3g} exceeds tolerance {tol:g}", doc)
    return doc


def cmd_compile(args) -> tuple[int, dict]:
    model = _model(args)
    surface = _surface(model, args)
    try:
        word = moves.parse_word(args.word)
        moves.check_word(word, surface.n)
    except moves.WordError as exc:
        raise UsageError(str(exc)) from None
    u = moves.compile_word(model, surface, word)
    doc = {"model": model.name, "word": moves.format_word(word), "unitary": u.to_dict(model)}
    return EXIT_OK, _checked(u, _tolerance(args), doc)


def cmd_twist(args) -> tuple[int, dict]:
    model = _model(args)
    surface = _surface(model, args)
    shape = _shape(args, surface.n)
    try:
        first, _, last = args.node.partition(",")
        span = (int(first) - 1, int(last or first))
        obs = fusion.Observable(shape, span)
    except (ValueError, fusion.ShapeError) as exc:
        raise UsageError(f"bad --node {args.node!r}: {exc}") from None
    u = moves.dehn_twist(model, surface, shape, obs)
    doc = {"model": model.name, "node": [span[0] + 1, span[1]], "unitary": u.to_dict(model)}
    return EXIT_OK, _checked(u, _tolerance(args), doc)


def cmd_refactor(args) -> tuple[int, dict]:
    model = _model(args)
    src, dst = _diagram(model, args.source), _diagram(model, args.target)
    try:
        seq = curves.refactor(src, dst, method=args.method)
    except curves.DiagramMismatchError as exc:
        raise UsageError(str(exc)) from None
    u = curves.induced_unitary(model, src, dst, seq)
    doc = {
        "model": model.name,
        "method": args.method,
        "sequence": [str(m) for m in seq],
        "length": len(seq),
        "unitary": u.to_dict(model),
    }
    if args.verify:
        reached = curves.equal(curves.apply_moves(src, seq), dst)
        res = u.unitarity_residual()
        doc["verify"] = {"equal": reached, "unitarity_residual": res}
        if not reached or res > _tolerance(args):
            raise NumericFailure("verification failed", doc)
    return EXIT_OK, doc


COMMANDS = {
    "validate": cmd_validate,
    "dims": cmd_dims,
    "fmatrix": cmd_fmatrix,
    "compile": cmd_compile,
    "refactor": cmd_refactor,
    "twist": cmd_twist,
}


# ---------------------------------------------------------------------------
# parser


def _global_flags(p: argparse.ArgumentParser, default) -> None:
    p.add_argument("--builtin", choices=BUILTIN_NAMES, default=default,
                   help="use a built-in model (default fibonacci)")
    p.add_argument("--model", metavar="FILE", default=default, help="load a model document")
    p.add_argument("--tolerance", type=float, default=default,
                   help=f"numeric tolerance (default {DEFAULT_TOLERANCE:g})")
    p.add_argument("--output", metavar="FILE", default=default,
                   help="write the document here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modfunctor", description=__doc__.splitlines()[0])
    _global_flags(parser, None)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    def surface_args(p):
        p.add_argument("--interior", required=True, help="comma-separated hole labels")
        p.add_argument("--exterior", required=True, help="exterior label")

    sub.add_parser("validate", parents=[common], help="run the consistency checks")

    p = sub.add_parser("dims", parents=[common], help="fusion-space dimension")
    surface_args(p)
    p.add_argument("--shape", help='decomposition, e.g. "((1 2) 3)" (default left comb)')
    p.add_argument("--basis", action="store_true", help="also list the basis trees")

    p = sub.add_parser("fmatrix", parents=[common], help="F-matrix F^{abc}_d")
    p.add_argument("labels", nargs="+", metavar="LABEL", help="a b c d")

    p = sub.add_parser("compile", parents=[common], help="unitary of a framed braid word")
    surface_args(p)
    p.add_argument("--word", default="", help='e.g. "s1 s2^-1 t1"')

    p = sub.add_parser("refactor", parents=[common], help="move sequence between two diagrams")
    p.add_argument("--from", dest="source", required=True, help="diagram file or inline JSON")
    p.add_argument("--to", dest="target", required=True, help="diagram file or inline JSON")
    p.add_argument("--method", choices=curves.REFACTOR_METHODS, default="word")
    p.add_argument("--verify", action="store_true", help="re-check the result")

    p = sub.add_parser("twist", parents=[common], help="Dehn twist around one node")
    surface_args(p)
    p.add_argument("--shape", help="decomposition (default left comb)")
    p.add_argument("--node", required=True, help='hole range "first,last" (1-based) or a single hole')
    return parser


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, indent=2, allow_nan=True) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    head = {"schema_version": SCHEMA_VERSION, "command": args.command}
    try:
        code, body = COMMANDS[args.command](args)
        doc = {**head, "status": "ok" if code == EXIT_OK else "failed", **body}
    except UsageError as exc:
        code, doc = EXIT_USAGE, {**head, "status": "error", "error": str(exc)}
        print(f"modfunctor: error: {exc}", file=sys.stderr)
    except NumericFailure as exc:
        code, doc = EXIT_NUMERIC, {**head, "status": "error", "error": str(exc), **exc.document}
        print(f"modfunctor: numeric failure: {exc}", file=sys.stderr)
    except (ModelError, moves.MoveError, np.linalg.LinAlgError, ArithmeticError) as exc:
        code, doc = EXIT_NUMERIC, {**head, "status": "error", "error": str(exc)}
        print(f"modfunctor: internal failure: {exc}", file=sys.stderr)
    _emit(doc, getattr(args, "output", None))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
