"""Command-line interface: ``foldcover <subcommand> ...``.

Inputs are files (or ``-`` for stdin) in the ``foldseq v1``, ``curve v1`` or
``covering v1`` formats, recognized by their header line.  Exit status is 0
on success, 1 when a check fails and 2 on bad input.
"""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import foldseq as fs
from .analysis import (Inconclusive, Pattern, grow_limit, pattern_density,
                       recenter_infinite, seed_search)
from .covering import (CoveringError, CoveringWindow, antiderive_covering, centered_rect,
                       count_curves, derive_covering, dump_covering, parse_covering,
                       rotation_covering, six_curve_completion, vertex_level)
from .lattice import Curve, dump_curve, parse_curve, trace
from .render import EmptyDrawing, RenderStyle, render_svg


class InputError(Exception):
    pass


# -- I/O helpers --------------------------------------------------------------

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_any(path: str):
    """Parse a sequence, curve or covering file according to its header."""
    text = _read(path)
    head = text.lstrip().split("\n", 1)[0].strip()
    if head == "foldseq v1":
        return fs.parse_sequence(text.lstrip())
    if head == "curve v1":
        return parse_curve(text.lstrip())
    if head == "covering v1":
        return parse_covering(text.lstrip())
    raise InputError(f"{path}: unrecognized header {head!r}")


def _load(path: str, kind: type):
    obj = load_any(path)
    if not isinstance(obj, kind):
        raise InputError(f"{path}: expected a {kind.__name__}, got {type(obj).__name__}")
    return obj


def _signs(text: str) -> tuple[int, ...]:
    try:
        return fs.parse_signs(text)
    except fs.FoldSeqError as exc:
        raise InputError(str(exc)) from exc


def _point(text: str) -> tuple[int, int]:
    try:
        x, y = text.split(",")
        return int(x), int(y)
    except ValueError as exc:
        raise InputError(f"bad point {text!r}, expected x,y") from exc


# -- sequence specification shared by gen-seq and cover -----------------------

KINDS = ("dragon", "alternating", "example9", "instructions", "star", "string")


def _add_seq_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seq", help="sequence file (foldseq v1) instead of --kind")
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--base", help="folding string S for --kind star, e.g. +--")
    p.add_argument("--folds", help="fold instructions, e.g. ++--")
    p.add_argument("--period", type=int, help="repeat --folds with this period")


def _generator(args) -> fs.SequenceGenerator:
    if args.seq:
        gen = load_any(args.seq)
        if not isinstance(gen, fs.SequenceGenerator):
            raise InputError(f"{args.seq}: not a sequence file")
        return gen
    kind = args.kind or ("star" if args.base else "instructions" if args.folds else None)
    if kind is None:
        raise InputError("give --seq, --kind, --base or --folds")
    if kind == "dragon":
        return fs.dragon()
    if kind == "alternating":
        return fs.alternating()
    if kind == "example9":
        return fs.example9()
    if kind == "star":
        if not args.base:
            raise InputError("--kind star needs --base")
        return fs.StarSequence(_signs(args.base))
    if kind == "instructions":
        if not args.folds:
            raise InputError("--kind instructions needs --folds")
        return fs.InstructionSequence(_signs(args.folds), args.period)
    if not args.base:
        raise InputError("--kind string needs --base")
    return fs.FiniteString(_signs(args.base))


# -- subcommands --------------------------------------------------------------

def cmd_gen_seq(args) -> int:
    gen = _generator(args)
    if args.power is not None:
        if not isinstance(gen, fs.StarSequence):
            raise InputError("--power applies to star sequences")
        gen = fs.FiniteString(fs.star_power(gen.base, args.power))
    elif args.n is not None:
        gen = fs.FiniteString(gen.prefix((1 << args.n) - 1))
    _write(args.output, fs.dump_sequence(gen))
    return 0


def cmd_trace(args) -> int:
    gen = _load(args.input, fs.SequenceGenerator)
    n = args.terms if args.terms is not None else gen.length
    if n is None:
        raise InputError("infinite sequence: give --terms")
    _write(args.output, dump_curve(trace(gen.prefix(n), dir0=args.dir)))
    return 0


def cmd_cover(args) -> int:
    gen = _generator(args)
    core = centered_rect(args.core) if args.core is not None else None
    if args.construction == "rotation":
        cov = rotation_covering(gen, args.sign, args.depth, core=core)
    elif args.construction == "six":
        cov = six_curve_completion(gen, args.sign, steps=args.steps, core_half=args.core)
    else:
        base = rotation_covering(gen, args.sign, args.depth)
        certs = seed_search(base, args.target, args.p_max, limit=1)
        if not certs:
            print(f"no seed with {args.target} curves for p <= {args.p_max}", file=sys.stderr)
            return 1
        cov = grow_limit(certs[0], min_side=2 * (args.core or 16))
        if core is not None:
            cov = cov.with_window(core)
    _write(args.output, dump_covering(cov))
    return 0


def cmd_derive(args) -> int:
    cov = _load(args.input, CoveringWindow)
    parity = args.parity if args.parity in ("auto", "classA", "classB") else int(args.parity)
    base = _signs(args.base)
    res = cov
    for _ in range(args.times):
        res = derive_covering(res, parity, base)
    _write(args.output, dump_covering(res))
    return 0


def cmd_antiderive(args) -> int:
    cov = _load(args.input, CoveringWindow)
    res = cov
    for _ in range(args.times):
        res = antiderive_covering(res, args.choice, _signs(args.base))
    _write(args.output, dump_covering(res))
    return 0


def cmd_classify(args) -> int:
    cov = _load(args.input, CoveringWindow)
    core = centered_rect(args.core) if args.core is not None else None
    lv = vertex_level(cov, args.max_n, core)
    lines = [f"levels max_n={args.max_n} decided={len(lv.level)} unknown={len(lv.unknown)}"]
    for n in range(args.max_n + 1):
        lines.append(f"E_{n} {len(lv.E(n))}")
    for v in sorted(lv.level):
        lines.append(f"V {v[0]} {v[1]} {lv.level[v]}")
    _write(args.output, "\n".join(lines) + "\n")
    return 0


def cmd_density(args) -> int:
    cov = _load(args.input, CoveringWindow)
    pat = Pattern.from_window(_load(args.pattern, CoveringWindow))
    anchors = [_point(a) for a in args.anchor or ["0,0"]]
    rep = pattern_density(cov, pat, args.sizes, anchors, eps=args.eps)
    lines = [f"s={s} z={z[0]},{z[1]} count={c} density={float(d):.6f}" for s, z, c, d in rep.table]
    lines.append(f"stable={rep.stable}")
    _write(args.output, "\n".join(lines) + "\n")
    return 0 if rep.stable else 1


def cmd_count_curves(args) -> int:
    cov = _load(args.input, CoveringWindow)
    core = centered_rect(args.core) if args.core is not None else None
    n, _ = count_curves(cov, core)
    print(n)
    if args.expect is not None and n != args.expect:
        return 1
    return 0


def cmd_search_seed(args) -> int:
    cov = _load(args.input, CoveringWindow)
    certs = seed_search(cov, args.target, args.p_max, size_cap=args.size_cap, limit=args.limit)
    for c in certs:
        print(f"p={c.p} rotation={c.rotation} tau={c.tau[0]},{c.tau[1]} "
              f"segments={len(c.seed.edges)} curves={c.n_curves}")
    print(f"found {len(certs)}")
    if certs and args.output:
        _write(args.output, dump_covering(certs[0].seed))
    return 0


def cmd_recenter(args) -> int:
    cov = _load(args.input, CoveringWindow)
    r = recenter_infinite(cov, args.depth)
    print(f"center {r.center[0]} {r.center[1]} direction {r.direction}", file=sys.stderr)
    _write(args.output, fs.dump_sequence(fs.FiniteString(r.prefix)))
    return 0


def cmd_render(args) -> int:
    target = load_any(args.input)
    if isinstance(target, fs.SequenceGenerator):
        if target.length is None:
            raise InputError("render of an infinite sequence: trace it first")
        target = trace(target.prefix(target.length))
    if not isinstance(target, (Curve, CoveringWindow)):
        raise InputError("nothing to render")
    style = RenderStyle(corner_radius=Fraction(args.corner_radius),
                        stroke_width=Fraction(args.stroke_width),
                        e_level=args.e_level, show_p=args.show_p,
                        show_uncovered=args.show_uncovered)
    _write(args.output, render_svg(target, style))
    return 0


def cmd_verify(args) -> int:
    from .checks import CHECKS, FAIL, run_suite
    names = None if args.suite == ["all"] else args.suite
    for n in names or []:
        if n not in CHECKS:
            raise InputError(f"unknown check {n!r}; known: {', '.join(CHECKS)}")
    results = run_suite(names, out=lambda line: print(line, flush=True))
    return 1 if any(r.status == FAIL for r in results) else 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="foldcover",
                                 description="Paperfolding curves and plane coverings.")
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, func, help_, input_=True):
        p = sub.add_parser(name, help=help_)
        if input_:
            p.add_argument("input", nargs="?", default="-", help="input file or - (stdin)")
        p.add_argument("-o", "--output", help="output file (default stdout)")
        p.set_defaults(func=func)
        return p

    p = cmd("gen-seq", cmd_gen_seq, "write a folding sequence", input_=False)
    _add_seq_args(p)
    p.add_argument("--n", type=int, help="write the first 2^n - 1 terms")
    p.add_argument("--power", type=int, help="write the star power S^{*power}")

    p = cmd("trace", cmd_trace, "trace the curve of a sequence")
    p.add_argument("--terms", type=int, help="number of turns for infinite sequences")
    p.add_argument("--dir", type=int, default=0, help="first direction 0..3 (E,N,W,S)")

    p = cmd("cover", cmd_cover, "build a covering window", input_=False)
    p.add_argument("--construction", choices=("rotation", "six", "prop1"), default="rotation")
    _add_seq_args(p)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--steps", type=int, default=2, help="limit iterations (six)")
    p.add_argument("--core", type=int, help="half-size of the centered core")
    p.add_argument("--target", type=int, default=3, help="curve count (prop1)")
    p.add_argument("--p-max", type=int, default=4, help="derivation power cap (prop1)")

    p = cmd("derive", cmd_derive, "derive a covering")
    p.add_argument("--parity", default="auto", help="auto, classA, classB or a class index")
    p.add_argument("--base", default="+", help="folding string S of the derivation")
    p.add_argument("--times", type=int, default=1)

    p = cmd("antiderive", cmd_antiderive, "antiderive a covering")
    p.add_argument("--choice", type=int, choices=(1, -1), default=1)
    p.add_argument("--base", default="+", help="folding string S of the antiderivation")
    p.add_argument("--times", type=int, default=1)

    p = cmd("classify", cmd_classify, "vertex levels E_n / F_n")
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--core", type=int)

    p = cmd("density", cmd_density, "pattern density in squares")
    p.add_argument("--pattern", required=True, help="pattern as a covering file")
    p.add_argument("--sizes", type=int, nargs="+", default=[32, 64])
    p.add_argument("--anchor", action="append",
                   help="lower-left corner x,y (repeatable; write --anchor=-8,-8 for negatives)")
    p.add_argument("--eps", type=float, default=0.1)

    p = cmd("count-curves", cmd_count_curves, "number of curves meeting the window")
    p.add_argument("--core", type=int)
    p.add_argument("--expect", type=int, help="exit 1 unless the count matches")

    p = cmd("search-seed", cmd_search_seed, "search seed certificates in a covering")
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--p-max", type=int, default=4)
    p.add_argument("--size-cap", type=int, default=24)
    p.add_argument("--limit", type=int)

    p = cmd("recenter", cmd_recenter, "turn prefix at a deep vertex")
    p.add_argument("--depth", type=int, default=5)

    p = cmd("render", cmd_render, "SVG drawing")
    p.add_argument("--corner-radius", default="1/4")
    p.add_argument("--stroke-width", default="1/2")
    p.add_argument("--e-level", type=int)
    p.add_argument("--show-p", action="store_true")
    p.add_argument("--show-uncovered", action="store_true")

    p = cmd("verify", cmd_verify, "run the acceptance checks", input_=False)
    p.add_argument("--suite", nargs="+", default=["all"], help="all or check names")
    return ap


def _apply_maxmem() -> None:
    raw = os.environ.get("FOLDCOVER_MAXMEM")
    if raw:
        try:
            fs.MAX_TERMS = int(raw)
        except ValueError as exc:
            raise InputError(f"FOLDCOVER_MAXMEM must be an integer, got {raw!r}") from exc


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_maxmem()
        return args.func(args)
    except BrokenPipeError:
        # reader went away (e.g. piped into head)
        sys.stderr.close()
        return 0
    except Inconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 1
    except (InputError, fs.FoldSeqError, fs.ResourceError, CoveringError, EmptyDrawing,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
