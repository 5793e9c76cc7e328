"""Command line interface.

Exit codes: 0 ok / check passed, 1 usage error, 2 invalid input,
3 exact Gromov-Hausdorff refused by the size guard, 4 stability check failed.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .errors import GuardExceeded, InputError, InvalidSpaceError
from .persistence import bottleneck
from .spaces import SpaceClass, classify, find_violation, from_digraph, gromov_hausdorff
from .stability import CONSTRUCTIONS, check_stability, compute_barcode

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_GUARD, EXIT_FAIL = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class UsageError(Exception):
    pass


def _emit(payload, out: str | None = None) -> None:
    text = io.dumps(payload) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_space(path, from_digraph_file=False):
    if from_digraph_file:
        return from_digraph(io.read_edge_list(path))
    return io.read_space(path)


def cmd_validate(args) -> int:
    space = io.read_space(args.path)
    cls = classify(space)
    report = {"class": cls.value, "valid": cls is not SpaceClass.INVALID, "violation": None}
    if cls is SpaceClass.INVALID:
        v = find_violation(space)
        report["violation"] = {
            "property": v.prop,
            "witness": [str(space.labels[i]) for i in v.witness],
            "message": v.message,
        }
        _emit(report)
        return EXIT_INVALID
    _emit(report)
    return EXIT_OK


def _check_a(construction, a):
    if construction == "fa" and a is None:
        raise UsageError("--a is required with --construction fa")
    if construction != "fa" and a is not None:
        raise UsageError("--a only applies to --construction fa")
    if a is not None and not 0 <= a <= 1:
        raise UsageError("--a must lie in [0, 1]")


def cmd_barcode(args) -> int:
    _check_a(args.construction, args.a)
    space = _load_space(args.path, args.from_digraph).validate()
    diagram = compute_barcode(space, args.construction, args.maxdim, args.a)
    params = {}
    if args.construction == "fa":
        params["a"] = args.a
    if args.construction != "scc":
        params["maxdim"] = args.maxdim
    _emit(io.diagram_file(args.construction, params, diagram), args.output)
    return EXIT_OK


def cmd_gh(args) -> int:
    x = io.read_space(args.path_x).validate()
    y = io.read_space(args.path_y).validate()
    gh = gromov_hausdorff(x, y)
    witness = [[str(x.labels[i]), str(y.labels[j])] for i, j in gh.witness]
    _emit({"dGH": gh.value, "witness": witness, "exact": gh.exact})
    return EXIT_OK if gh.exact else EXIT_GUARD


def cmd_stability(args) -> int:
    _check_a(args.construction, args.a)
    x = io.read_space(args.path_x).validate()
    y = io.read_space(args.path_y).validate()
    report = check_stability(x, y, args.construction, args.maxdim, args.a)
    _emit(report.to_json())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_bottleneck(args) -> int:
    _, _, d1 = io.read_diagram_file(args.path_a)
    _, _, d2 = io.read_diagram_file(args.path_b)
    dims = [args.dim] if args.dim is not None else sorted(set(d1.dims) | set(d2.dims))
    _emit({"bottleneck": {str(d): bottleneck(d1, d2, d) for d in dims}})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quasiph", description="Persistent homology of finite quasi-metric spaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="classify a distance matrix")
    v.add_argument("path")
    v.set_defaults(func=cmd_validate)

    b = sub.add_parser("barcode", help="persistence diagram of one construction")
    b.add_argument("path")
    b.add_argument("--construction", required=True, choices=CONSTRUCTIONS)
    b.add_argument("--a", type=float)
    b.add_argument("--maxdim", type=int, default=1)
    b.add_argument("--from-digraph", action="store_true", help="read PATH as a src,dst,weight edge list")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_barcode)

    g = sub.add_parser("gh", help="Gromov-Hausdorff distance")
    g.add_argument("path_x")
    g.add_argument("path_y")
    g.set_defaults(func=cmd_gh)

    s = sub.add_parser("stability", help="check bottleneck <= 2 dGH")
    s.add_argument("path_x")
    s.add_argument("path_y")
    s.add_argument("--construction", required=True, choices=CONSTRUCTIONS)
    s.add_argument("--maxdim", type=int, default=1)
    s.add_argument("--a", type=float)
    s.set_defaults(func=cmd_stability)

    bn = sub.add_parser("bottleneck", help="bottleneck distance between two diagram files")
    bn.add_argument("path_a")
    bn.add_argument("path_b")
    bn.add_argument("--dim", type=int)
    bn.set_defaults(func=cmd_bottleneck)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "maxdim", 0) < 0:
        parser.error("--maxdim must be non-negative")
    try:
        return args.func(args)
    except UsageError as e:
        parser.error(str(e))
    except InvalidSpaceError as e:
        print(f"invalid space: {e}", file=sys.stderr)
        return EXIT_INVALID
    except GuardExceeded as e:
        print(str(e), file=sys.stderr)
        return EXIT_GUARD
    except (InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
