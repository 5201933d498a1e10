"""Command-line entry point.

Exit codes: 0 affirmative / found, 1 negative / conclusively not found,
2 budget exhausted (inconclusive), 3 errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import equations, finite, moves, search, words
from .words import MalformedInput

OK, NEGATIVE, INCONCLUSIVE, ERROR = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ERROR, f"{self.prog}: error: {message}\n")


def _default_threads() -> int:
    raw = os.environ.get("AC_WORKBENCH_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _header(args) -> str:
    return f"# seed={args.seed} threads={args.threads}\n"


def cmd_reduce(args) -> int:
    rank = args.rank
    if rank is None:
        rank = words.MAX_TEXT_RANK
    w = words.parse_word(args.word, rank)
    _emit(words.format_word(w) + "\n", args.out)
    return OK


def cmd_apply(args) -> int:
    t = words.parse_tuple_file(_read(args.tuple))
    seq = moves.parse_moves(_read(args.moves))
    _emit(words.format_tuple_file(moves.apply_sequence(t, seq)), args.out)
    return OK


def cmd_search(args) -> int:
    start = words.parse_tuple_file(_read(args.tuple))
    cap = args.cap if args.cap is not None else words.total_length(start) + 2
    cfg = search.SearchConfig(cap, args.budget, args.strategy, args.dedup, args.seed, args.threads)
    res = search.trivialize(start, cfg)
    if res.found:
        _emit(_header(args) + f"# states={res.states} cap={cap}\n"
              + search.format_certificate(res.certificate), args.out)
        return OK
    sys.stdout.write(_header(args) + f"# not found: {res.status} after {res.states} states "
                     f"(cap={cap}, budget={args.budget})\n")
    return NEGATIVE if res.status == search.EXHAUSTED else INCONCLUSIVE


def cmd_verify(args) -> int:
    cert = search.parse_certificate(_read(args.certificate))
    ok = search.verify(cert)
    trivial = cert.end == words.generator_tuple(cert.start.size) if cert.start.rank == cert.start.size \
        else False
    sys.stdout.write(f"{'valid' if ok else 'invalid'} moves={len(cert.moves)} "
                     f"trivialization={'yes' if ok and trivial else 'no'}\n")
    return OK if ok else NEGATIVE


def cmd_classify(args) -> int:
    cap = args.cap if args.cap is not None else args.enum_cap
    rep = search.classify(args.enum_cap, cap, args.budget, args.k, args.threads)
    _emit(_header(args) + rep.format(), args.out)
    return OK if rep.complete else INCONCLUSIVE


def cmd_ak(args) -> int:
    _emit(words.format_tuple_file(search.ak(args.n)), args.out)
    return OK


def _infer_k(seq, k):
    if k is not None:
        return k
    return max([2] + [max(m.i, m.j) for m in seq])


def cmd_identity(args) -> int:
    seq = moves.parse_moves(_read(args.moves))
    k = _infer_k(seq, args.k)
    rank = args.rank if args.rank is not None else max([k] + [abs(m.c) for m in seq])
    formal = moves.extract_words(seq, k, rank)
    names = [f"W{i + 1} = {equations.format_equation(equations.Equation(rank, k, w))}"
             for i, w in enumerate(formal)]
    ident = moves.identity_check(seq, k, rank)
    _emit("\n".join(names) + f"\nidentity={'yes' if ident else 'no'}\n", args.out)
    return OK if ident else NEGATIVE


def cmd_witness(args) -> int:
    seq = moves.parse_moves(_read(args.moves))
    t = words.parse_tuple_file(_read(args.tuple))
    h = equations.faithfulness_witness(seq, t)
    if h is None:
        _emit("# sequence is the identity; no moved point exists\n", args.out)
        return NEGATIVE
    moved = words.WordTuple(tuple(words.conjugate(u, hi) for u, hi in zip(t.entries, h)), t.rank)
    image = moves.apply_sequence(moved, seq)
    _emit(f"h: ({', '.join(str(x) for x in h)})\npoint: {moved}\nimage: {image}\n", args.out)
    return OK


def cmd_finite(args) -> int:
    g = finite.load_group(_read(args.group))
    orb = finite.orbits(g, args.k)
    try:
        lam = finite.kernel_of_lambda(g, args.k)
    except finite.EmptyNk:
        lam = None
    _emit(_header(args) + finite.format_report(lam, orb) + "\n", args.out)
    return OK if lam is not None and orb.transitive_on_n else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=_default_threads())
    common.add_argument("--cap", type=int, help="prune states longer than this")
    common.add_argument("--budget", type=int, default=10**6, help="maximum stored states")
    common.add_argument("--strategy", choices=search.STRATEGIES, default="bfs")
    common.add_argument("--dedup", choices=search.DEDUP_MODES, default="exact")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="ac-workbench", description="Andrews-Curtis move workbench")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("reduce", parents=[common], help="freely reduce a word")
    s.add_argument("word")
    s.add_argument("--rank", type=int)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("apply", parents=[common], help="apply a move file to a tuple file")
    s.add_argument("tuple")
    s.add_argument("moves")
    s.set_defaults(func=cmd_apply)

    s = sub.add_parser("search", parents=[common], help="search for a trivialization")
    s.add_argument("tuple")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("verify", parents=[common], help="replay a path certificate")
    s.add_argument("certificate")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("classify", parents=[common], help="components of short unimodular pairs")
    s.add_argument("--enum-cap", type=int, required=True)
    s.add_argument("--k", type=int, default=2)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("ak", parents=[common], help="Akbulut-Kirby relator pair")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_ak)

    s = sub.add_parser("identity", parents=[common], help="is a move sequence the identity?")
    s.add_argument("moves")
    s.add_argument("--k", type=int)
    s.add_argument("--rank", type=int)
    s.set_defaults(func=cmd_identity)

    s = sub.add_parser("witness", parents=[common], help="point moved by a move sequence")
    s.add_argument("moves")
    s.add_argument("tuple")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("finite", parents=[common], help="FAC/AC orders for a finite group")
    s.add_argument("group")
    s.add_argument("--k", type=int, default=2)
    s.set_defaults(func=cmd_finite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        sys.stderr.write("error: --threads must be >= 1\n")
        return ERROR
    try:
        return args.func(args)
    except (MalformedInput, finite.GroupError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return ERROR
    except (ValueError, OSError, RuntimeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
