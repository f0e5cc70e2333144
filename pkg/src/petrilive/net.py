"""Place/transition nets, markings and the firing rule.

A net is stored with dense indices: ``pre[t][p]`` is the weight of the arc
from place ``p`` to transition ``t`` and ``post[t][p]`` the weight of the arc
from ``t`` to ``p``.  Names only matter at the boundary (parsing, JSON, CLI);
every analysis works on index tuples.

Markings are plain tuples of non-negative ints aligned with ``net.places``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Tuple, Union

from .errors import FiringError, InputError

Marking = Tuple[int, ...]
TransitionRef = Union[str, int]

# Markings and weights are kept inside signed 64-bit range.
MAX_TOKENS = 2**63 - 1


@dataclass(frozen=True)
class Net:
    name: str
    places: Tuple[str, ...]
    transitions: Tuple[str, ...]
    pre: Tuple[Tuple[int, ...], ...]
    post: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(set(self.places)) != len(self.places):
            raise InputError("duplicate place identifier")
        if len(set(self.transitions)) != len(self.transitions):
            raise InputError("duplicate transition identifier")
        clash = set(self.places) & set(self.transitions)
        if clash:
            raise InputError(f"identifier used as place and transition: {sorted(clash)[0]}")
        n, k = len(self.places), len(self.transitions)
        for table in (self.pre, self.post):
            if len(table) != k or any(len(row) != n for row in table):
                raise InputError("flow table does not match places/transitions")
            for row in table:
                for w in row:
                    if not isinstance(w, int) or w < 0 or w > MAX_TOKENS:
                        raise InputError(f"invalid arc weight {w!r}")

    @classmethod
    def build(cls, name: str, places: Sequence[str], transitions: Sequence[str],
              arcs: Mapping[Tuple[str, str], int] = None) -> "Net":
        """Construct a net from names and an ``{(src, dst): weight}`` map.

        Missing pairs have weight 0.  Every arc must join a place and a
        transition.
        """
        places = tuple(places)
        transitions = tuple(transitions)
        pidx = {p: i for i, p in enumerate(places)}
        tidx = {t: i for i, t in enumerate(transitions)}
        pre = [[0] * len(places) for _ in transitions]
        post = [[0] * len(places) for _ in transitions]
        for (src, dst), w in (arcs or {}).items():
            if src in pidx and dst in tidx:
                pre[tidx[dst]][pidx[src]] = w
            elif src in tidx and dst in pidx:
                post[tidx[src]][pidx[dst]] = w
            else:
                raise InputError(f"arc {src}->{dst} does not join a place and a transition")
        return cls(name, places, transitions,
                   tuple(map(tuple, pre)), tuple(map(tuple, post)))

    @cached_property
    def _pidx(self):
        return {p: i for i, p in enumerate(self.places)}

    @cached_property
    def _tidx(self):
        return {t: i for i, t in enumerate(self.transitions)}

    @cached_property
    def effects(self) -> Tuple[Tuple[int, ...], ...]:
        """Per transition, the constant vector ``W(t,.) - W(.,t)``."""
        return tuple(tuple(b - a for a, b in zip(pr, po))
                     for pr, po in zip(self.pre, self.post))

    @property
    def dim(self) -> int:
        return len(self.places)

    def pindex(self, p: Union[str, int]) -> int:
        if isinstance(p, int):
            if 0 <= p < len(self.places):
                return p
            raise InputError(f"place index out of range: {p}")
        try:
            return self._pidx[p]
        except KeyError:
            raise InputError(f"unknown place: {p}") from None

    def tindex(self, t: TransitionRef) -> int:
        if isinstance(t, int):
            if 0 <= t < len(self.transitions):
                return t
            raise InputError(f"transition index out of range: {t}")
        try:
            return self._tidx[t]
        except KeyError:
            raise InputError(f"unknown transition: {t}") from None

    def weight(self, src: str, dst: str) -> int:
        """``W(src, dst)`` looked up by name."""
        if src in self._pidx and dst in self._tidx:
            return self.pre[self._tidx[dst]][self._pidx[src]]
        if src in self._tidx and dst in self._pidx:
            return self.post[self._tidx[src]][self._pidx[dst]]
        raise InputError(f"{src}->{dst} is not a place/transition pair")

    def arcs(self):
        """Yield ``(src, dst, weight)`` for every non-zero arc, canonical order."""
        for ti, t in enumerate(self.transitions):
            for pi, p in enumerate(self.places):
                if self.pre[ti][pi]:
                    yield p, t, self.pre[ti][pi]
            for pi, p in enumerate(self.places):
                if self.post[ti][pi]:
                    yield t, p, self.post[ti][pi]

    def marking(self, values: Union[Mapping[str, int], Iterable[int], None] = None,
                **kw: int) -> Marking:
        """Build a validated marking from a vector, a name map or keywords."""
        if values is None or isinstance(values, Mapping):
            named = dict(values or {}, **kw)
            vec = [0] * self.dim
            for name, v in named.items():
                vec[self.pindex(name)] = v
        else:
            vec = list(values)
        return check_marking(self, vec)

    def format_marking(self, m: Marking) -> str:
        return ",".join(f"{p}={v}" for p, v in zip(self.places, m) if v)


def check_marking(net: Net, m: Iterable[int]) -> Marking:
    m = tuple(m)
    if len(m) != net.dim:
        raise InputError(f"marking has {len(m)} entries, net has {net.dim} places")
    for v in m:
        if not isinstance(v, int) or v < 0:
            raise InputError(f"marking entries must be non-negative integers, got {v!r}")
        if v > MAX_TOKENS:
            raise OverflowError("marking entry exceeds 64-bit range")
    return m


def enabled(net: Net, m: Marking, t: TransitionRef) -> bool:
    ti = net.tindex(t)
    return all(a >= w for a, w in zip(m, net.pre[ti]))


def fire(net: Net, m: Marking, t: TransitionRef) -> Marking:
    ti = net.tindex(t)
    pre = net.pre[ti]
    for p, (a, w) in enumerate(zip(m, pre)):
        if a < w:
            raise FiringError(
                f"{net.transitions[ti]} is not enabled: {net.places[p]} has {a} < {w}",
                transition=net.transitions[ti], place=net.places[p])
    out = tuple(a + d for a, d in zip(m, net.effects[ti]))
    if any(v > MAX_TOKENS for v in out):
        raise OverflowError(f"firing {net.transitions[ti]} overflows 64-bit token count")
    return out


def fire_sequence(net: Net, m: Marking, u: Sequence[TransitionRef]) -> Marking:
    for i, t in enumerate(u):
        try:
            m = fire(net, m, t)
        except FiringError as exc:
            exc.index = i
            exc.args = (f"step {i}: {exc.args[0]}",)
            raise
    return m


def reverse(net: Net) -> Net:
    """Swap input and output arcs of every transition."""
    return Net(net.name, net.places, net.transitions, net.post, net.pre)


def successors(net: Net, m: Marking):
    """Yield ``(transition index, marking)`` for enabled transitions, declaration order."""
    for ti, (pre, eff) in enumerate(zip(net.pre, net.effects)):
        if all(a >= w for a, w in zip(m, pre)):
            yield ti, tuple(a + d for a, d in zip(m, eff))
