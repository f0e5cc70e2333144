"""Backward saturation: minimal markings from which a transition can fire.

For a transition ``t`` the set of markings where ``t`` is *not* dead is
upward closed; :func:`backward_saturate` computes its minimal elements by
repeatedly adding minimal predecessors until the antichain stabilises
(Dickson's lemma guarantees termination).  Each basis element remembers the
chain of transitions that produced it, so ``chain + [t]`` is a firing
sequence from that element: a replayable certificate.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import InputError
from .net import Marking, Net, TransitionRef, fire_sequence
from .wqo import (DownSet, UpSet, complement_down, complement_up, intersect_up, leq, member_up,
                  union_down)

log = logging.getLogger(__name__)


def min_enabling(net: Net, t: TransitionRef) -> Marking:
    return net.pre[net.tindex(t)]


def pre_min(net: Net, t: TransitionRef, target: Marking) -> Marking:
    """Least ``M`` such that ``M --t--> M' >= target``."""
    ti = net.tindex(t)
    if len(target) != net.dim:
        raise InputError("target marking has wrong dimension")
    return tuple(max(w, x - o + w) for w, o, x in zip(net.pre[ti], net.post[ti], target))


@dataclass(frozen=True)
class Saturation:
    """Result of a backward fixpoint: the basis plus one chain per element.

    ``chains[b]`` is a firing sequence from ``b`` reaching a marking that
    covers one of the initial targets.
    """

    basis: UpSet
    chains: Dict[Marking, Tuple[int, ...]] = field(compare=False)
    rounds: int = 0


def backward_coverability(net: Net, targets: Iterable[Marking]) -> Saturation:
    """Minimal markings from which some marking ``>=`` a target is reachable."""
    targets = [tuple(x) for x in targets]
    chains: Dict[Marking, Tuple[int, ...]] = {}
    basis: List[Marking] = []

    def insert(m, chain):
        if any(leq(b, m) for b in basis):
            return False
        basis[:] = [b for b in basis if not leq(m, b)]
        basis.append(m)
        chains[m] = chain
        return True

    for x in sorted(targets):
        insert(x, ())
    frontier = [b for b in sorted(basis)]
    rounds = 0
    while frontier:
        rounds += 1
        new = []
        for b in frontier:
            if b not in basis:
                continue  # dominated since it was queued
            for ti in range(len(net.transitions)):
                m = pre_min(net, ti, b)
                if insert(m, (ti,) + chains[b]):
                    new.append(m)
        frontier = [m for m in new if m in basis]
    log.debug("saturation finished after %d rounds, %d elements", rounds, len(basis))
    kept = {b: chains[b] for b in basis}
    return Saturation(UpSet(net.dim, basis), kept, rounds)


@functools.lru_cache(maxsize=256)
def _saturate_cached(net: Net, ti: int) -> Saturation:
    return backward_coverability(net, [min_enabling(net, ti)])


def backward_saturate(net: Net, t: TransitionRef) -> UpSet:
    """Minimal markings in which ``t`` is not dead."""
    return _saturate_cached(net, net.tindex(t)).basis


def saturation(net: Net, t: TransitionRef) -> Saturation:
    return _saturate_cached(net, net.tindex(t))


@dataclass(frozen=True)
class DeadSetReport:
    net: Net
    transitions: Tuple[int, ...]
    per_transition: Dict[int, UpSet] = field(compare=False)
    chains: Dict[int, Dict[Marking, Tuple[int, ...]]] = field(compare=False)
    dead_set: DownSet = None
    combined_live_candidates: UpSet = None
    iterations: Dict[int, int] = field(default_factory=dict, compare=False)

    def to_json(self):
        names = self.net.transitions
        return {
            "transitions": [names[t] for t in self.transitions],
            "dead_set": self.dead_set.to_json(),
            "combined_live_candidates": self.combined_live_candidates.to_json(),
            "per_transition": {names[t]: s.to_json() for t, s in self.per_transition.items()},
            "iterations": {names[t]: n for t, n in self.iterations.items()},
        }


def _resolve(net: Net, ts) -> Tuple[int, ...]:
    idx = sorted({net.tindex(t) for t in ts})
    if not idx:
        raise InputError("transition set must be non-empty")
    return tuple(idx)


def dead_set(net: Net, ts: Sequence[TransitionRef]) -> DeadSetReport:
    """Markings where some transition of ``ts`` is dead, plus its complement's basis."""
    idx = _resolve(net, ts)
    sats = {t: saturation(net, t) for t in idx}
    dead = DownSet(net.dim, [])
    live = UpSet(net.dim, [(0,) * net.dim])
    for t in idx:
        dead = union_down(dead, complement_up(sats[t].basis))
        live = intersect_up(live, sats[t].basis)
    return DeadSetReport(
        net=net, transitions=idx,
        per_transition={t: sats[t].basis for t in idx},
        chains={t: sats[t].chains for t in idx},
        dead_set=dead, combined_live_candidates=live,
        iterations={t: sats[t].rounds for t in idx})


def all_dead_set(net: Net, ts: Sequence[TransitionRef]) -> DownSet:
    """Markings where *every* transition of ``ts`` is dead."""
    from .wqo import intersect_down

    idx = _resolve(net, ts)
    out = DownSet.full(net.dim)
    for t in idx:
        out = intersect_down(out, complement_up(saturation(net, t).basis))
    return out


def is_dead(report: DeadSetReport, m: Marking, t: TransitionRef) -> bool:
    ti = report.net.tindex(t)
    if ti not in report.per_transition:
        raise InputError(f"transition {report.net.transitions[ti]} not covered by report")
    return not member_up(report.per_transition[ti], m)


def witness_firing(net: Net, t: TransitionRef, m: Marking) -> Tuple[int, ...]:
    """Firing sequence from ``m`` ending with ``t`` (``m`` must not make ``t`` dead)."""
    ti = net.tindex(t)
    sat = saturation(net, ti)
    for b in sat.basis.basis:
        if leq(b, m):
            seq = sat.chains[b] + (ti,)
            fire_sequence(net, m, seq)
            return seq
    raise InputError(f"{net.transitions[ti]} is dead in {m}")


def _stay_basis(net: Net, ti: int, basis) -> List[Marking]:
    """Basis of ``{v : if t is enabled at v then its successor lies in up(basis)}``.

    The set is not upward closed in general; this returns its largest upward
    closed subset.  ``v`` enabling ``t`` means ``max(v, pre) = v``, so the
    condition is ``v >= c`` on exactly the coordinates where ``c`` exceeds
    ``pre``, for ``c = pre_min(t, b)``.
    """
    pre = net.pre[ti]
    out = []
    for b in basis:
        c = pre_min(net, ti, b)
        out.append(tuple(x if x > w else 0 for x, w in zip(c, pre)))
    return out


def is_post_closed_up(net: Net, u: UpSet) -> bool:
    for b in u.basis:
        for ti in range(len(net.transitions)):
            top = tuple(max(x, w) for x, w in zip(b, net.pre[ti]))
            if not member_up(u, tuple(x + e for x, e in zip(top, net.effects[ti]))):
                return False
    return True


def closed_upset_within(net: Net, d: DownSet, rounds: int = 8) -> UpSet:
    """A post-closed upward closed set disjoint from ``d`` (possibly empty).

    Starts from the complement of ``d`` and shrinks it by the exact
    "every successor stays inside" operator.  The descending chain need not
    stabilise, so after each round the basis elements that survived the
    round unchanged are tried as a candidate on their own.
    """
    cur = complement_down(d)
    for _ in range(rounds):
        if is_post_closed_up(net, cur):
            return cur
        nxt = cur
        for ti in range(len(net.transitions)):
            nxt = intersect_up(nxt, UpSet(net.dim, _stay_basis(net, ti, cur.basis)))
        stable = UpSet(net.dim, [b for b in cur.basis if b in set(nxt.basis)])
        if stable.basis and is_post_closed_up(net, stable):
            return stable
        if nxt == cur or not nxt.basis:
            break
        cur = nxt
    return UpSet(net.dim, [])
