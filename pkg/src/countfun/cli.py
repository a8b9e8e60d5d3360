"""Command-line front end.

Every subcommand builds a JSON-ready payload; ``--format text`` renders the
same payload for people, ``--format dot`` is available where a graph or
tree is produced.  Exit codes: 0 trivial/equal/success, 1 non-trivial or
unequal, 2 error.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .certificates import certificate, homogenized_evaluate, witness_search
from .decision import (
    VARIANTS,
    brooks_equal,
    decide,
    equivalent,
    expand_pure,
    level_dimension,
    paper_algorithm,
    paper_basis_words,
    verify_basis,
)
from .errors import CountfunError, ModeMismatch, ParseError
from .formal import FormalSum, brooks_to_counting, format_coefficient, format_sum
from .graphs import build_graph, extension_matrix, loop_erase, to_dot as graph_dot
from .oracle import growth_profile, naive_rank, random_sum
from .trees import WeightedTree, apply_operation, to_ascii, to_dot as tree_dot
from .words import (
    CyclicWord,
    Mode,
    count,
    cyclic_count,
    cyclic_reduce,
    format_word,
    free_reduce,
    make_word,
    parse_letters,
)

SCHEMA = 1

# -- expression grammar ------------------------------------------------------

_WS = re.compile(r"\s*")
_COEF = re.compile(r"(-?)(\d+)(?:/(\d+))?\s*\*\s*")


def parse_sum(text: str, mode: Mode, brooks: bool = False) -> FormalSum:
    """Parse ``term (('+'|'-') term)*`` into a sum of counting functions.

    A term is ``[coef*][word]`` or ``[coef*]phi[word]``; ``phi`` terms, and
    with ``brooks`` every term, stand for ``rho_w - rho_{w^-1}``.  The text
    ``0`` is the zero sum.
    """
    if text.strip() == "0":
        return FormalSum.zero(mode)
    if not text.strip():
        raise ParseError("empty expression", 0)
    plain = {}
    phi = {}
    pos = _WS.match(text, 0).end()
    sign = 1
    if pos < len(text) and text[pos] in "+-":
        sign = -1 if text[pos] == "-" else 1
        pos = _WS.match(text, pos + 1).end()
    while True:
        coef = Fraction(sign)
        m = _COEF.match(text, pos)
        if m:
            den = int(m.group(3)) if m.group(3) else 1
            if den == 0:
                raise ParseError("zero denominator", m.start(3))
            coef *= Fraction(int(m.group(2)), den) * (-1 if m.group(1) else 1)
            pos = m.end()
        is_phi = text.startswith("phi[", pos)
        if is_phi:
            pos += 3
        if not text.startswith("[", pos):
            raise ParseError("expected '[' to start a word", pos)
        close = text.find("]", pos)
        if close < 0:
            raise ParseError("unterminated '['", pos)
        inner = text[pos + 1:close]
        if not inner.strip():
            raise ParseError("empty word; write [e] for the identity", pos)
        try:
            letters = parse_letters(inner)
        except ParseError as exc:
            offset = exc.position if exc.position is not None else 0
            raise ParseError(str(exc).split(" (at position")[0], pos + 1 + offset) from None
        w = make_word(letters, mode)
        target = phi if (is_phi or brooks) else plain
        target[w] = target.get(w, 0) + coef
        pos = _WS.match(text, close + 1).end()
        if pos == len(text):
            break
        if text[pos] not in "+-":
            raise ParseError(f"expected '+' or '-', found {text[pos]!r}", pos)
        sign = -1 if text[pos] == "-" else 1
        pos = _WS.match(text, pos + 1).end()
    f = FormalSum(mode, plain)
    if phi:
        if not mode.is_group:
            raise ModeMismatch("phi terms need group mode")
        f = f + brooks_to_counting(FormalSum(mode, phi))
    return f


def parse_word_arg(text: str, mode: Mode) -> Tuple[tuple, bool]:
    """Parse an evaluation argument, reducing it if needed; returns (word, was_reduced)."""
    letters = tuple(parse_letters(text))
    w = free_reduce(letters, mode)
    return w, w != letters


def parse_cycle_arg(text: str, mode: Mode) -> Tuple[CyclicWord, bool]:
    w, changed = parse_word_arg(text, mode)
    core, conj = cyclic_reduce(w, mode)
    if not core:
        raise ParseError("cyclic word reduces to the identity", 0)
    return CyclicWord.from_word(core, mode), changed or bool(conj)


# -- payload helpers ---------------------------------------------------------

def _q(c) -> str:
    return format_coefficient(Fraction(c))


def _sum_json(f: FormalSum) -> list:
    return [{"word": format_word(w), "coefficient": _q(c)} for w, c in f.items()]


def _verdict_json(v, equal_words: bool = False) -> dict:
    kind = v.kind
    if equal_words:
        kind = "Equal" if v.is_trivial else "Unequal"
    out = {"verdict": kind, "level": v.level}
    if v.is_trivial:
        out["bound"] = _q(v.bound) if v.bound is not None else None
    else:
        out["witness"] = format_word(v.witness.letters)
        out["value"] = _q(v.value)
        out["cycle"] = [format_word(e) for e in v.cycle]
    return out


def _mode(args) -> Mode:
    return Mode(args.mode, args.rank)


def _sum_arg(args, text: str) -> FormalSum:
    return parse_sum(text, _mode(args), brooks=getattr(args, "brooks", False))


def _lines(path: str) -> List[str]:
    with open(path, encoding="utf-8") as fh:
        return [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]


def _batch(args, one) -> Tuple[int, dict]:
    """Run ``one(line) -> (code, payload)`` over the batch file in input order."""
    results = []
    worst = 0
    for line in _lines(args.batch):
        try:
            code, payload = one(line)
        except CountfunError as exc:
            code, payload = 2, {"error": _error_json(exc)}
        payload = {"input": line, **payload}
        results.append(payload)
        worst = max(worst, code)
    return worst, {"results": results}


# -- subcommands -------------------------------------------------------------

def cmd_count(args):
    mode = _mode(args)
    v = make_word(parse_letters(args.pattern), mode)
    w, changed = parse_word_arg(args.word, mode)
    return 0, {"pattern": format_word(v), "word": format_word(w), "reduced": changed, "count": count(v, w)}


def cmd_cyclic_count(args):
    mode = _mode(args)
    v = make_word(parse_letters(args.pattern), mode)
    c, changed = parse_cycle_arg(args.cycle, mode)
    return 0, {"pattern": format_word(v), "cycle": format_word(c.letters), "reduced": changed,
               "count": cyclic_count(v, c)}


def cmd_decide(args):
    def one(text):
        v = decide(_sum_arg(args, text), level=args.level)
        return (0 if v.is_trivial else 1), _verdict_json(v)

    if args.batch:
        return _batch(args, one)
    return one(args.expr)


def _pair_command(args, fn, brooks_inputs):
    mode = _mode(args)

    def parse(text):
        if brooks_inputs:
            # coefficients of phi_w, kept as raw coefficients
            return parse_sum(text.replace("phi[", "["), mode)
        return _sum_arg(args, text)

    def one(lhs, rhs):
        v = fn(parse(lhs), parse(rhs))
        return (0 if v.is_trivial else 1), _verdict_json(v, equal_words=True)

    if args.batch:
        def line(text):
            if "==" not in text:
                raise ParseError("batch lines for comparisons must read 'lhs == rhs'", 0)
            lhs, rhs = text.split("==", 1)
            return one(lhs, rhs)
        return _batch(args, line)
    if args.rhs is None:
        raise ParseError("two expressions are required", None)
    return one(args.expr, args.rhs)


def cmd_equal(args):
    return _pair_command(args, equivalent, False)


def cmd_brooks_equal(args):
    return _pair_command(args, brooks_equal, True)


def cmd_expand(args):
    f = _sum_arg(args, args.expr)
    level = args.level if args.level is not None else max(int(f.depth) if f else 0, 2)
    co = expand_pure(f, level)
    return 0, {"level": co.level, "basis": [format_word(w) for w in co.basis],
               "coordinates": [{"word": format_word(w), "coefficient": _q(co[w])} for w in co.basis if co[w]]}


def cmd_basis(args):
    mode = _mode(args)
    words = paper_basis_words(mode, args.level, args.variant)
    out = {"variant": args.variant, "level": args.level, "size": len(words),
           "words": [format_word(w) for w in words]}
    code = 0
    if args.verify:
        check = verify_basis(words, args.level, mode, brooks=args.variant == "BrooksThm14")
        out["check"] = check.kind
        out["rank"] = check.rank
        if check.combination is not None:
            out["combination"] = format_sum(check.combination)
            out["combination_verdict"] = decide(check.combination).kind
            code = 1
    if args.level >= 0 and args.variant.startswith("Pure"):
        out["dimension"] = level_dimension(mode, args.level)
    return code, out


def cmd_paper_algo(args):
    def one(text):
        f = _sum_arg(args, text)
        pv = paper_algorithm(f)
        out = {"verdict": pv.kind, "label": "as-printed", "sound_verdict": decide(f).kind}
        if pv.stuck_depth is not None:
            out["stuck_depth"] = pv.stuck_depth
            out["unbalanced"] = None if pv.unbalanced is None else {
                "zero": str(pv.unbalanced.b1), "nonconstant": str(pv.unbalanced.b2)}
        if args.trace:
            out["trace"] = list(pv.trace)
        return (0 if pv.is_trivial else 1), out

    if args.batch:
        return _batch(args, one)
    return one(args.expr)


def cmd_tree(args):
    t = WeightedTree(_sum_arg(args, args.expr))
    for op in args.apply or []:
        t = apply_operation(t, op)
    return 0, {"sum": _sum_json(t.weights), "expression": format_sum(t.weights),
               "_text": to_ascii(t), "_dot": tree_dot(t)}


def cmd_graph(args):
    g = build_graph(_mode(args), args.level)
    payload = {"level": args.level, "vertices": [format_word(v) for v in g.vertices]}
    if args.simple:
        s = loop_erase(g)
        payload["edges"] = [[format_word(a), format_word(b)] for a, b in s.edges]
        payload["_dot"] = graph_dot(g, simple=True)
    else:
        payload["edges"] = [format_word(e) for e in g.edges]
        payload["_dot"] = graph_dot(g)
    payload["_text"] = payload["_dot"]
    return 0, payload


def cmd_certificate(args):
    mode = _mode(args)
    w, changed = parse_word_arg(args.cycle, mode)
    core, conj = cyclic_reduce(w, mode)
    if not core:
        raise ParseError("cyclic word reduces to the identity", 0)
    # keep the reading start the user gave, so entries follow their order
    cert = certificate(core, args.level, mode)
    return 0, {"cycle": format_word(core), "reduced": changed or bool(conj), "level": args.level,
               "entries": [{"word": format_word(w), "multiplicity": k} for w, k in cert.entries.items()],
               "expression": cert.format()}


def cmd_homog_eval(args):
    f = _sum_arg(args, args.expr)
    c, changed = parse_cycle_arg(args.cycle, f.mode)
    return 0, {"cycle": format_word(c.letters), "reduced": changed, "value": _q(homogenized_evaluate(f, c))}


def cmd_witness(args):
    def one(text):
        f = _sum_arg(args, text)
        c = witness_search(f, args.bound)
        if c is None:
            return 0, {"witness": None}
        return 1, {"witness": format_word(c.letters), "value": _q(homogenized_evaluate(f, c))}

    if args.batch:
        return _batch(args, one)
    return one(args.expr)


def cmd_dev_growth(args):
    f = _sum_arg(args, args.expr)
    prof = growth_profile(f, args.horizon)
    return 0, {"horizon": args.horizon,
               "maxima": [{"length": k, "max": _q(m)} for k, m in sorted(prof.maxima.items())]}


def cmd_dev_rank(args):
    mode = _mode(args)
    m = extension_matrix(mode, args.level)
    from .formal import b_relation

    rows = [b_relation(v, mode) for v in m.rows]
    g = build_graph(mode, args.level)
    return 0, {"level": args.level, "rows": len(m.rows), "columns": len(m.columns),
               "naive_rank": naive_rank(rows, args.level), "graph_rank": m.rank(),
               "dimension": len(g.edges) - m.rank()}


def cmd_dev_sample(args):
    rng = random.Random(args.seed)
    mode = _mode(args)
    sums = [random_sum(mode, rng, args.depth, args.terms) for _ in range(args.count)]
    return 0, {"seed": args.seed, "sums": [format_sum(f) for f in sums]}


# -- argument parsing --------------------------------------------------------

def _common(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--mode", choices=["monoid", "group"], default=d("monoid"))
    p.add_argument("--rank", type=int, default=d(2))
    p.add_argument("--format", choices=["json", "text", "dot"], default=d("text"))
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--batch", metavar="FILE", default=d(None))
    p.add_argument("--brooks", action="store_true", default=d(False),
                   help="read plain [w] terms as phi_w")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="countfun", description="Exact computations with sums of counting functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        _common(p, suppress=True)
        p.set_defaults(func=fn)
        return p

    p = add("count", cmd_count, help="occurrences of a pattern in a word")
    p.add_argument("pattern")
    p.add_argument("word")
    p = add("cyclic-count", cmd_cyclic_count, help="cyclic occurrences of a pattern")
    p.add_argument("pattern")
    p.add_argument("cycle")
    p = add("decide", cmd_decide, help="is the sum bounded?")
    p.add_argument("expr", nargs="?")
    p.add_argument("--level", type=int)
    for name, fn in (("equal", cmd_equal), ("brooks-equal", cmd_brooks_equal)):
        p = add(name, fn, help="do two sums differ by a bounded function?")
        p.add_argument("expr", nargs="?")
        p.add_argument("rhs", nargs="?")
    p = add("expand", cmd_expand, help="coordinates in the canonical pure basis")
    p.add_argument("expr")
    p.add_argument("--level", type=int)
    p = add("basis", cmd_basis, help="printed basis word sets")
    p.add_argument("--variant", choices=VARIANTS, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p = add("paper-algo", cmd_paper_algo, help="the tree algorithm as printed (not authoritative)")
    p.add_argument("expr", nargs="?")
    p.add_argument("--trace", action="store_true")
    p = add("tree", cmd_tree, help="render or transform a weighted tree")
    p.add_argument("expr")
    p.add_argument("--apply", action="append", metavar="OP",
                   help="transfer:<father>, reduce:<father> or partial:<father>:<letter>")
    p = add("graph", cmd_graph, help="transition graph at a level")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--simple", action="store_true", help="erase loops and multiple edges")
    p = add("certificate", cmd_certificate, help="L-certificate of a cyclic word")
    p.add_argument("--cycle", required=True)
    p.add_argument("--level", type=int, required=True)
    p = add("homog-eval", cmd_homog_eval, help="homogenization at a cyclic word")
    p.add_argument("expr")
    p.add_argument("--cycle", required=True)
    p = add("witness", cmd_witness, help="search for a cyclic word with nonzero homogenization")
    p.add_argument("expr", nargs="?")
    p.add_argument("--bound", type=int)

    dev = sub.add_parser("dev", help="oracle tools")
    devsub = dev.add_subparsers(dest="dev_command", required=True)

    def add_dev(name, fn, **kw):
        q = devsub.add_parser(name, **kw)
        _common(q, suppress=True)
        q.set_defaults(func=fn)
        return q

    q = add_dev("growth", cmd_dev_growth, help="exact max |f| per word length")
    q.add_argument("expr")
    q.add_argument("--horizon", type=int, default=8)
    q = add_dev("rank", cmd_dev_rank, help="rank of the extension matrix two ways")
    q.add_argument("--level", type=int, required=True)
    q = add_dev("sample", cmd_dev_sample, help="seeded random sums")
    q.add_argument("--count", type=int, default=5)
    q.add_argument("--depth", type=int, default=2)
    q.add_argument("--terms", type=int, default=3)
    return parser


def _error_json(exc: Exception) -> dict:
    out = {"type": getattr(exc, "code", type(exc).__name__), "message": str(exc)}
    if isinstance(exc, ParseError) and exc.position is not None:
        out["position"] = exc.position
    return out


def _render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        clean = {k: v for k, v in payload.items() if not k.startswith("_")}
        return json.dumps({"schema": SCHEMA, **clean}, indent=2, ensure_ascii=False)
    if fmt == "dot":
        if "_dot" not in payload:
            raise ValueError("this command has no DOT output")
        return payload["_dot"].rstrip("\n")
    if "_text" in payload:
        return payload["_text"].rstrip("\n")
    return _text(payload)


def _text(payload, indent=0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in payload.items():
        if k.startswith("_"):
            continue
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text(v, indent + 1))
        elif isinstance(v, list):
            lines.append(f"{pad}{k}:")
            for item in v:
                if isinstance(item, dict):
                    lines.append(f"{pad}  - " + ", ".join(f"{a}={b}" for a, b in item.items()))
                else:
                    lines.append(f"{pad}  - {item}")
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.rank < 2:
            raise ValueError("rank must be >= 2")
        needs_expr = args.command in ("decide", "paper-algo", "witness", "equal", "brooks-equal")
        if needs_expr and not args.batch and args.expr is None:
            raise ParseError("an expression is required (or --batch FILE)", None)
        code, payload = args.func(args)
        print(_render(payload, args.format), file=out)
        return code
    except (CountfunError, ValueError, OSError) as exc:
        if args.format == "json":
            print(json.dumps({"schema": SCHEMA, "error": _error_json(exc)}, indent=2), file=out)
        else:
            print(f"error: {getattr(exc, 'code', type(exc).__name__)}: {exc}", file=err)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
