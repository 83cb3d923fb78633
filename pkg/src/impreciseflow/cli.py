"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 bad input data, 3 unmet
precondition (for example a non-regular terrain).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats
from .core import InvalidRealization, NodeSet, check_realization
from .flowsim import watershed
from .fuzzy import PreconditionError, fuzzy_boundary_area, fuzzy_ridge
from .propagate import avoiding_potential_watershed, potential_downstream, potential_watershed
from .regular import regularize_sweep
from .watersheds import persistent_watershed

EXIT_USAGE, EXIT_DATA, EXIT_PRECONDITION = 1, 2, 3


class _DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ids(text: str) -> list[int]:
    try:
        ids = [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated node ids, got {text!r}")
    if any(i < 0 for i in ids):
        raise argparse.ArgumentTypeError("node ids must be non-negative")
    return ids


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as exc:
        raise _DataError(f"{path}: {exc}") from None


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def _fmt(args, path: str) -> str:
    if args.format:
        return args.format
    return "igr" if path.endswith(".igr") else "itg"


def _terrain(args):
    text = _read(args.terrain)
    try:
        return formats.parse_terrain(text, _fmt(args, args.terrain))
    except (formats.FormatError, formats.ValidationError) as exc:
        raise _DataError(f"{args.terrain}: {exc}") from None


def _check_ids(t, ids, what):
    bad = [i for i in ids if i >= t.n_nodes]
    if bad:
        raise _DataError(f"{what}: node id {bad[0]} outside 0..{t.n_nodes - 1}")
    return ids


def _nonempty_ids(t, ids, what):
    if not ids:
        raise _DataError(f"{what}: at least one node id is required")
    return _check_ids(t, ids, what)


def _emit_set(args, t, nodes: NodeSet) -> None:
    sys.stdout.write(formats.write_nodeset(nodes))
    if getattr(args, "mask", None):
        if t.grid_shape is None:
            raise _DataError("--mask needs a grid terrain")
        _write(args.mask, formats.write_mask(t, nodes))


def cmd_flow(args):
    t = _terrain(args)
    q = _nonempty_ids(t, args.targets, "--targets")
    try:
        z = formats.parse_realization(_read(args.realization), t.n_nodes)
        check_realization(t, z)
    except (formats.FormatError, InvalidRealization) as exc:
        raise _DataError(f"{args.realization}: {exc}") from None
    _emit_set(args, t, watershed(t, z, q))


def cmd_powershed(args):
    t = _terrain(args)
    q = _nonempty_ids(t, args.targets, "--targets")
    if args.avoid:
        res = avoiding_potential_watershed(t, _check_ids(t, args.avoid, "--avoid"), q)
    else:
        res = potential_watershed(t, q)
    _emit_set(args, t, res.members)
    if args.canonical:
        _write(args.canonical, formats.write_realization(res.realization(t)))


def cmd_downstream(args):
    t = _terrain(args)
    q = _nonempty_ids(t, args.sources, "--sources")
    _emit_set(args, t, potential_downstream(t, q).members)


def cmd_persistent(args):
    t = _terrain(args)
    q = _nonempty_ids(t, args.targets, "--targets")
    _emit_set(args, t, persistent_watershed(t, q))


def cmd_minima(args):
    t = _terrain(args)
    rep = regularize_sweep(t)
    sys.stdout.write(formats.write_minima(rep.proxies, rep.minima))
    sys.stdout.write(formats.write_realization(rep.M))


def cmd_regularize(args):
    t = _terrain(args)
    fmt = _fmt(args, args.terrain)
    t2 = t.with_low(regularize_sweep(t).M)
    _write(args.out, formats.write_terrain(t2, fmt))


def cmd_boundary(args):
    t = _terrain(args)
    q = _nonempty_ids(t, args.targets, "--targets")
    _emit_set(args, t, fuzzy_boundary_area(t, q))


def cmd_ridge(args):
    t = _terrain(args)
    if args.auto_regularize:
        t2 = t.with_low(regularize_sweep(t).M)
        print("note: computed on the regularized terrain", file=sys.stderr)
        t = t2
    ridge = fuzzy_ridge(t)
    k = len(regularize_sweep(t).proxies)
    if k < 2:
        print(f"note: {k} imprecise minima; the fuzzy ridge is empty", file=sys.stderr)
    _emit_set(args, t, ridge)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="impreciseflow", description="Water flow on imprecise terrains.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, targets=None, mask=True):
        s = sub.add_parser(name, help=help)
        s.add_argument("--terrain", required=True, metavar="F", help="terrain file (.itg or .igr)")
        s.add_argument("--format", choices=["itg", "igr"], help="override format detection")
        if targets:
            s.add_argument(f"--{targets}", required=True, type=_ids, metavar="IDS",
                           help="comma-separated node ids")
        if mask:
            s.add_argument("--mask", metavar="OUT", help="also write a 0/1 raster (grid terrains)")
        s.set_defaults(func=func)
        return s

    s = add("flow", cmd_flow, "watershed on one realization", "targets")
    s.add_argument("--realization", required=True, metavar="R")
    s = add("powershed", cmd_powershed, "potential watershed", "targets")
    s.add_argument("--avoid", type=_ids, metavar="IDS", help="discard these nodes when reached")
    s.add_argument("--canonical", metavar="OUT", help="write the canonical realization")
    add("downstream", cmd_downstream, "potential downstream area", "sources")
    add("persistent", cmd_persistent, "persistent watershed", "targets")
    add("minima", cmd_minima, "imprecise minima, proxies and the sweep realization", mask=False)
    s = add("regularize", cmd_regularize, "write the regularized terrain", mask=False)
    s.add_argument("--out", required=True, metavar="G")
    add("boundary", cmd_boundary, "uncertainty area of the watershed boundary", "targets")
    s = add("ridge", cmd_ridge, "fuzzy ridge between imprecise minima")
    s.add_argument("--auto-regularize", action="store_true",
                   help="regularize first; the result then refers to the regularized terrain")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (_DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    return 0


if __name__ == "__main__":
    sys.exit(main())
