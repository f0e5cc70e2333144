"""Command-line front end.

Every command prints one JSON document on stdout.  Exit status: 0 when a
question was answered (yes or no), 2 when the answer is unknown within the
budget, 1 on malformed input (a JSON diagnostic goes to stderr).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .acceleration import accelerate, verify_certificates
from .coverability import dead_set
from .errors import FiringError, ParseError, PetriliveError
from .exploration import bfs_reach
from .liveness import (DEFAULT_BUDGET, UNKNOWN, is_live_set, is_weakly_live_set,
                       live_predicate_scan)
from .net import fire_sequence
from .netformat import NetDocument, dumps, parse_marking_literal, parse_net, serialize_net
from .presburger import decide, parse_formula
from .structural import DEFAULT_BUDGET as STRUCTURAL_BUDGET
from .structural import build_reduction, decide_pslp

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2


class UsageError(PetriliveError):
    pass


def _load(args) -> NetDocument:
    path = Path(args.net)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_net(data)


def _marking(doc: NetDocument, args):
    if args.marking is not None:
        return parse_marking_literal(doc.net, args.marking)
    if doc.initial_marking is not None:
        return doc.initial_marking
    raise UsageError("no marking given and the net file has none")


def _transitions(doc: NetDocument, args):
    if not args.transitions:
        return None
    names = [t for t in args.transitions.split(",") if t.strip()]
    return [doc.net.tindex(t.strip()) for t in names]


def _answered(answer) -> int:
    return EXIT_UNKNOWN if answer == UNKNOWN else EXIT_OK


def cmd_parse(args):
    doc = _load(args)
    net = doc.net
    out = {"problem": "parse", "name": net.name, "places": list(net.places),
           "transitions": list(net.transitions),
           "arcs": [[s, d, w] for s, d, w in net.arcs()],
           "marking": None if doc.initial_marking is None else list(doc.initial_marking),
           "metadata": doc.metadata,
           "canonical": serialize_net(doc).decode("utf-8")}
    return out, EXIT_OK


def cmd_fire(args):
    doc = _load(args)
    m = _marking(doc, args)
    seq = [s.strip() for s in (args.sequence or "").split(",") if s.strip()]
    end = fire_sequence(doc.net, m, seq)
    return {"problem": "fire", "start": list(m), "sequence": seq, "marking": list(end)}, EXIT_OK


def cmd_reach(args):
    doc = _load(args)
    m = _marking(doc, args)
    budget = args.budget or 10_000
    if args.accelerate:
        cand = accelerate(doc.net, m, budget=budget)
        verify_certificates(doc.net, cand.set, m, seed=args.seed)
        out = {"problem": "reach", "mode": "accelerate", **cand.to_json()}
        return out, EXIT_OK if cand.status == "closed-exact" else EXIT_UNKNOWN
    g = bfs_reach(doc.net, m, budget)
    if args.emit_dot:
        Path(args.emit_dot).write_text(g.to_dot(doc.net), encoding="utf-8")
    out = {"problem": "reach", "mode": "bfs", "nodes": len(g.nodes), "edges": len(g.edges),
           "truncated": g.truncated, "markings": [list(x) for x in sorted(g.nodes)]}
    return out, EXIT_UNKNOWN if g.truncated else EXIT_OK


def cmd_deadset(args):
    doc = _load(args)
    ts = _transitions(doc, args)
    report = dead_set(doc.net, ts if ts is not None else range(len(doc.net.transitions)))
    return {"problem": "deadset", **report.to_json()}, EXIT_OK


def _live(args, weak):
    doc = _load(args)
    ts = _transitions(doc, args)
    budget = args.budget or DEFAULT_BUDGET
    if args.box is not None:
        scan = live_predicate_scan(doc.net, ts, args.box, budget, weak=weak)
        rows = [{"marking": list(m), "answer": v.answer} for m, v in scan.items()]
        unknown = sum(r["answer"] == UNKNOWN for r in rows)
        out = {"problem": "weaklive-scan" if weak else "live-scan", "box": args.box,
               "verdicts": rows, "unknown": unknown}
        return out, EXIT_UNKNOWN if unknown else EXIT_OK
    m = _marking(doc, args)
    run = is_weakly_live_set if weak else is_live_set
    verdict = run(doc.net, m, ts, budget)
    return verdict.to_json(doc.net), _answered(verdict.answer)


def cmd_live(args):
    return _live(args, args.weak)


def cmd_weaklive(args):
    return _live(args, True)


def cmd_reduce(args):
    doc = _load(args)
    red = build_reduction(doc.net, _transitions(doc, args))
    text = serialize_net(NetDocument(red.net, red.initial))
    if args.emit_reduction:
        Path(args.emit_reduction).write_bytes(text)
    out = {"problem": "reduce", "places": list(red.net.places),
           "transitions": list(red.net.transitions), "initial": list(red.initial),
           "control_places": list(red.control_places),
           "generator": red.generator.to_json(), "net": text.decode("utf-8")}
    return out, EXIT_OK


def cmd_structural(args):
    doc = _load(args)
    ts = _transitions(doc, args)
    if args.emit_reduction:
        red = build_reduction(doc.net, ts)
        Path(args.emit_reduction).write_bytes(serialize_net(NetDocument(red.net, red.initial)))
    verdict = decide_pslp(doc.net, ts, args.budget or STRUCTURAL_BUDGET)
    return verdict.to_json(doc.net), _answered(verdict.answer)


def cmd_decide_formula(args):
    text = args.formula
    if text == "-":
        text = sys.stdin.read()
    value = decide(parse_formula(text))
    return {"problem": "decide-formula", "answer": "yes" if value else "no",
            "value": value}, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="petrilive", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def positive(text):
        v = int(text)
        if v < 1:
            raise argparse.ArgumentTypeError("must be positive")
        return v

    def common(sp, marking=True, transitions=False, budget=False):
        sp.add_argument("--net", required=True, help="net file")
        if marking:
            sp.add_argument("--marking", help='e.g. "p1=3,p2=1"; default: the file\'s marking')
        if transitions:
            sp.add_argument("--transitions", help="comma-separated subset (default: all)")
        if budget:
            sp.add_argument("--budget", type=positive, help="node budget")
        sp.add_argument("--seed", type=int, default=0, help="seed for sampled replays")

    sp = sub.add_parser("parse", help="check a net file and print it canonically")
    common(sp, marking=False)
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("fire", help="fire a sequence of transitions")
    common(sp)
    sp.add_argument("--sequence", default="", help="comma-separated transitions")
    sp.set_defaults(func=cmd_fire)

    sp = sub.add_parser("reach", help="explore the reachability set")
    common(sp, budget=True)
    sp.add_argument("--accelerate", action="store_true", help="compute a semilinear description")
    sp.add_argument("--emit-dot", help="write the explored graph as DOT")
    sp.set_defaults(func=cmd_reach)

    sp = sub.add_parser("deadset", help="dead-marking set of a transition set")
    common(sp, marking=False, transitions=True)
    sp.set_defaults(func=cmd_deadset)

    for name, func in (("live", cmd_live), ("weaklive", cmd_weaklive)):
        sp = sub.add_parser(name, help=f"decide {'weak ' if name == 'weaklive' else ''}liveness")
        common(sp, transitions=True, budget=True)
        if name == "live":
            sp.add_argument("--weak", action="store_true",
                            help="at least one transition must stay not dead")
        sp.add_argument("--box", type=int, help="scan every marking of [0,BOX]^P instead")
        sp.set_defaults(func=func)

    sp = sub.add_parser("reduce", help="build the reduction net")
    common(sp, marking=False, transitions=True)
    sp.add_argument("--emit-reduction", help="write the reduction net to this file")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("structural", help="decide (partial) structural liveness")
    common(sp, marking=False, transitions=True, budget=True)
    sp.add_argument("--emit-reduction", help="write the reduction net to this file")
    sp.set_defaults(func=cmd_structural)

    sp = sub.add_parser("decide-formula", help="decide a closed Presburger sentence")
    sp.add_argument("formula", help="S-expression sentence, or - for stdin")
    sp.set_defaults(func=cmd_decide_formula)
    return p


def _diagnostic(exc) -> dict:
    out = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        out.update(line=exc.line, kind=exc.kind)
    if isinstance(exc, FiringError):
        out.update(transition=exc.transition, place=exc.place, index=exc.index)
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out, code = args.func(args)
    except (PetriliveError, OverflowError, ValueError) as exc:
        sys.stderr.write(dumps(_diagnostic(exc)) + "\n")
        return EXIT_INPUT
    sys.stdout.write(dumps(out) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
