"""Command-line driver: check a signature, translate it, or run queries.

Exit codes: 0 success / at least one solution, 1 check failure or no
solution, 2 unusable input (parse, elaboration or file errors), 3
internal invariant violation (an engine answer failed to invert).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import lf
from .engine import SearchStats, solve
from .frontend import ParseError, elaborate_query, elaborate_signature, parse_query, parse_signature
from .invert import NotInvertible, invert_answer
from .lf import LfError, Signature, pretty
from .names import assign_displays
from .translate import Mode, emit_module, emit_program, translate_query, translate_signature
from .typecheck import SignatureError, check_signature


@dataclass
class RunConfig:
    mode: Mode = Mode.OPTIMIZED
    depth: int = 512
    solutions: int = 1
    fuel: int = lf.DEFAULT_FUEL
    emit_lp: str | None = None


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="lf2lp", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("sigfile", help="signature file (.elf subset)")
        sp.add_argument("--naive", action="store_true",
                        help="use the hastype translation instead of the optimized one")
        sp.add_argument("--fuel", type=int, default=lf.DEFAULT_FUEL,
                        help="beta-reduction budget")

    sp = sub.add_parser("check", help="typecheck a signature")
    sp.add_argument("sigfile")
    sp.add_argument("--fuel", type=int, default=lf.DEFAULT_FUEL)

    sp = sub.add_parser("translate", help="print the translated program")
    common(sp)
    sp.add_argument("--emit-lp", metavar="PATH", default=None,
                    help="also write PATH.sig and PATH.mod")

    sp = sub.add_parser("query", help="solve a query against a signature")
    common(sp)
    sp.add_argument("querytext", help="query type, Twelf syntax")
    sp.add_argument("--depth", type=int, default=512, help="backchain depth bound")
    sp.add_argument("--solutions", type=int, default=1, help="maximum answers printed")

    args = p.parse_args(argv)
    cfg = RunConfig()
    if getattr(args, "naive", False):
        cfg.mode = Mode.NAIVE
    cfg.fuel = args.fuel
    cfg.depth = getattr(args, "depth", cfg.depth)
    cfg.solutions = getattr(args, "solutions", cfg.solutions)
    cfg.emit_lp = getattr(args, "emit_lp", None)
    if cfg.depth < 1 or cfg.solutions < 1 or cfg.fuel < 1:
        p.error("--depth, --solutions and --fuel must be at least 1")

    lf.DEFAULT_FUEL = cfg.fuel
    try:
        if args.command == "check":
            return cmd_check(args.sigfile)
        if args.command == "translate":
            return cmd_translate(args.sigfile, cfg)
        return cmd_query(args.sigfile, args.querytext, cfg)
    except (OSError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def _load_signature(path: str) -> Signature:
    text = Path(path).read_text(encoding="utf-8")
    return elaborate_signature(parse_signature(text))


def cmd_check(sigfile: str) -> int:
    """Elaborate and check each declaration, reporting OK or the first error."""
    text = Path(sigfile).read_text(encoding="utf-8")
    raws = parse_signature(text)
    sig = Signature()
    for raw in raws:
        from .frontend import elaborate_decl
        try:
            d = elaborate_decl(raw, sig)
            probe = sig.declare(d.name, d.classifier, d.implicit)
            check_signature(probe)
        except SignatureError as e:
            print(f"{raw.name} : ERROR {e.cause}")
            return 1
        except LfError as e:
            print(f"{raw.name} : ERROR {e}")
            return 1
        sig = probe
        print(f"{raw.name} : OK")
    print(f"{len(sig)} declarations OK")
    return 0


def cmd_translate(sigfile: str, cfg: RunConfig) -> int:
    try:
        sig = _load_signature(sigfile)
        check_signature(sig)
        prog = translate_signature(sig, cfg.mode)
    except LfError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(emit_program(prog))
    if cfg.emit_lp:
        base = Path(cfg.emit_lp)
        sig_text, mod_text = emit_module(prog, base.stem or "program")
        base.with_suffix(".sig").write_text(sig_text, encoding="utf-8")
        base.with_suffix(".mod").write_text(mod_text, encoding="utf-8")
    return 0


def cmd_query(sigfile: str, querytext: str, cfg: RunConfig) -> int:
    try:
        sig = _load_signature(sigfile)
        check_signature(sig)
        query = elaborate_query(parse_query(querytext), sig)
        prog = translate_signature(sig, cfg.mode)
        tq = translate_query(query, cfg.mode, sig)
    except LfError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    stats = SearchStats()
    found = 0
    display = assign_displays(list(query.meta_types), taken=("type",))
    try:
        stream = solve(prog.clauses, tq.goal, depth=cfg.depth,
                       max_solutions=cfg.solutions, stats=stats)
        for answer in stream:
            inv = invert_answer(answer, query, sig, tq.proof_var.name)
            if found:
                print()
            for name in query.meta_types:
                if name in inv.bindings:
                    print(f"{display[name]} = {pretty(inv.bindings[name])}")
            print(f"proof = {pretty(inv.proof)}")
            for pair, inverted in inv.residues:
                s, t = pair
                tag = "" if inverted else " (not inverted)"
                print(f"residual: {s} = {t}{tag}")
            found += 1
    except NotInvertible as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 3

    if found == 0:
        print("no solutions")
        if stats.depth_exceeded:
            print(f"(search incomplete: {stats.depth_exceeded} branches cut "
                  f"at depth {cfg.depth})", file=sys.stderr)
        return 1
    if found < cfg.solutions:
        print()
        print("no more solutions")
    return 0


if __name__ == "__main__":
    sys.exit(main())
