"""Line-oriented text format for nets, plus JSON helpers for results.

Grammar, one directive per line, ``#`` starts a comment::

    net <name>
    places <id> ...
    transitions <id> ...
    arc <src> <dst> [weight]        # weight defaults to 1
    marking <id>=<nat> ...          # unlisted places hold 0 tokens
    meta <key> <value>

Omitted arcs have weight 0.  LF and CRLF line endings are both accepted.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Dict, Optional

from .errors import InputError, ParseError
from .net import Marking, Net

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*\Z")
NAT = re.compile(r"[0-9]+\Z")


@dataclass
class NetDocument:
    net: Net
    initial_marking: Optional[Marking] = None
    metadata: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.initial_marking is not None and len(self.initial_marking) != self.net.dim:
            raise InputError("initial marking is not aligned with the places")


def _ident(tok, lineno):
    if not IDENT.match(tok):
        raise ParseError(f"invalid identifier {tok!r}", lineno, kind="identifier")
    return tok


def _nat(tok, lineno, what):
    if tok.startswith("-") and NAT.match(tok[1:]):
        raise ParseError(f"negative {what} {tok}", lineno, kind="negative")
    if not NAT.match(tok):
        raise ParseError(f"invalid {what} {tok!r}", lineno, kind="number")
    return int(tok)


def parse_net(text) -> NetDocument:
    """Parse a net document from ``bytes`` or ``str``.

    Every failure is reported as :class:`ParseError` carrying the line number.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8 ({exc.reason})", kind="encoding") from None

    name = None
    places, transitions = [], []
    seen = set()
    arcs = {}
    marking = None
    metadata = {}

    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r").split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        head, args = toks[0], toks[1:]
        if head == "net":
            if name is not None:
                raise ParseError("duplicate net declaration", lineno, kind="duplicate")
            if len(args) != 1:
                raise ParseError("net expects exactly one name", lineno)
            name = _ident(args[0], lineno)
        elif head in ("places", "transitions"):
            bucket = places if head == "places" else transitions
            for tok in args:
                _ident(tok, lineno)
                if tok in seen:
                    raise ParseError(f"duplicate declaration of {tok}", lineno, kind="duplicate")
                seen.add(tok)
                bucket.append(tok)
        elif head == "arc":
            if len(args) not in (2, 3):
                raise ParseError("arc expects <src> <dst> [weight]", lineno)
            src, dst = args[0], args[1]
            for tok in (src, dst):
                if tok not in seen:
                    raise ParseError(f"unknown identifier {tok}", lineno, kind="unknown")
            if (src in places) == (dst in places):
                raise ParseError("arc endpoints must alternate place/transition", lineno,
                                 kind="kind-mismatch")
            w = _nat(args[2], lineno, "weight") if len(args) == 3 else 1
            if (src, dst) in arcs:
                raise ParseError(f"duplicate arc {src} {dst}", lineno, kind="duplicate")
            arcs[(src, dst)] = w
        elif head == "marking":
            if marking is not None:
                raise ParseError("duplicate marking declaration", lineno, kind="duplicate")
            marking = {}
            for tok in args:
                key, sep, val = tok.partition("=")
                if not sep:
                    raise ParseError(f"expected <id>=<nat>, got {tok!r}", lineno)
                if key not in places:
                    raise ParseError(f"unknown place {key}", lineno, kind="unknown")
                if key in marking:
                    raise ParseError(f"duplicate marking entry for {key}", lineno,
                                     kind="duplicate")
                marking[key] = _nat(val, lineno, "token count")
        elif head == "meta":
            if len(args) < 1:
                raise ParseError("meta expects <key> [value]", lineno)
            metadata[_ident(args[0], lineno)] = " ".join(args[1:])
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, kind="directive")

    net = Net.build(name or "unnamed", places, transitions, arcs)
    m0 = None
    if marking is not None:
        m0 = tuple(marking.get(p, 0) for p in places)
    return NetDocument(net, m0, metadata)


def serialize_net(doc: NetDocument) -> bytes:
    """Canonical text form; ``parse_net(serialize_net(doc)) == doc``.

    ``places`` is always written (possibly empty); the other directives only
    when they carry something.
    """
    net = doc.net
    lines = [f"net {net.name}", " ".join(["places", *net.places])]
    if net.transitions:
        lines.append(" ".join(["transitions", *net.transitions]))
    for src, dst, w in net.arcs():
        lines.append(f"arc {src} {dst}" + ("" if w == 1 else f" {w}"))
    if doc.initial_marking is not None:
        entries = [f"{p}={v}" for p, v in zip(net.places, doc.initial_marking) if v]
        lines.append(" ".join(["marking", *entries]))
    for key in sorted(doc.metadata):
        lines.append(f"meta {key} {doc.metadata[key]}".rstrip())
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_marking_literal(net: Net, text: str) -> Marking:
    """Parse ``"p1=3,p2=1"`` (commas and/or spaces) into a marking."""
    vec = [0] * net.dim
    for tok in re.split(r"[,\s]+", text.strip()):
        if not tok:
            continue
        key, sep, val = tok.partition("=")
        if not sep:
            raise InputError(f"expected <place>=<nat>, got {tok!r}")
        if not NAT.match(val):
            raise InputError(f"invalid token count {val!r}")
        vec[net.pindex(key)] = int(val)
    return tuple(vec)


# JSON -----------------------------------------------------------------

def omega_json(vec):
    """Encode an omega-vector, writing ω as ``"w"``."""
    return [v if isinstance(v, int) else "w" for v in vec]


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, no trailing spaces)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
