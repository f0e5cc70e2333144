"""Liveness of transitions, transition sets and marked nets.

A set ``T'`` is live in ``M`` iff no reachable marking lies in the dead set
of ``T'``.  Two semi-procedures run side by side on the same node budget:

* a breadth-first search for a path into the dead set (answers *no*);
* acceleration towards an exact reachability set, followed by a
  disjointness test against the dead set (answers *yes*).

They take turns in slices of :data:`SLICE` nodes, so results are
deterministic for a given budget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

from . import acceleration as acc
from .coverability import all_dead_set, closed_upset_within, dead_set
from .errors import CertificateError, InputError
from .exploration import Search
from .net import Marking, Net, check_marking, fire_sequence
from .semilinear import LinearSet, SemilinearSet, empty_intersection_with, iter_points, member
from .wqo import DownSet, UpSet, member_down, member_up

YES, NO, UNKNOWN = "yes", "no", "unknown"

SLICE = 256
DEFAULT_BUDGET = 20_000
MAX_SCAN = 100_000


@dataclass(frozen=True)
class PathCertificate:
    """Replayable evidence for *no*: ``start --sequence--> end`` with ``end`` in ``dead``."""

    start: Marking
    sequence: Tuple[int, ...]
    end: Marking
    dead: DownSet

    def to_json(self, net: Net):
        return {"kind": "path", "start": list(self.start),
                "sequence": [net.transitions[t] for t in self.sequence],
                "end": list(self.end), "dead_set": self.dead.to_json()}


@dataclass(frozen=True)
class InvariantCertificate:
    """Evidence for *yes*: a post-closed set containing the start and missing ``dead``."""

    invariant: SemilinearSet
    dead: DownSet

    def to_json(self, net: Net):
        comps = []
        for c in self.invariant.components:
            d = c.to_json()
            if c.certificate is not None:
                d["certificate"] = c.certificate.to_json(net)
            comps.append(d)
        return {"kind": "invariant", "components": comps, "dead_set": self.dead.to_json()}


@dataclass
class Verdict:
    problem: str
    answer: str
    certificate: Any = None
    stats: Dict[str, Any] = field(default_factory=dict)

    def to_json(self, net: Net):
        cert = self.certificate
        if hasattr(cert, "to_json"):
            cert = cert.to_json(net)
        return {"problem": self.problem, "answer": self.answer, "certificate": cert,
                "stats": self.stats}


def _resolve(net: Net, ts) -> Tuple[int, ...]:
    if ts is None:
        ts = range(len(net.transitions))
    idx = tuple(sorted({net.tindex(t) for t in ts}))
    if not idx:
        raise InputError("transition set must be non-empty")
    return idx


def _finite_invariant(search: Search, safe: UpSet) -> SemilinearSet:
    """Explored markings plus the safe up-set that absorbed the pruned ones."""
    g = search.graph
    dim = len(g.root)
    comps = [LinearSet(m, (), certificate=acc.Derivation(tuple(g.path_to(m)), ()))
             for m in g.nodes if not member_up(safe, m)]
    units = tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))
    comps += [LinearSet(b, units) for b in safe.basis]
    return SemilinearSet(dim, comps)


def _path_from_invariant(net, m, s: SemilinearSet, d: DownSet, limit=50_000):
    """Path to some element of ``s`` inside ``d``, read off the certificates."""
    for _, _, v in itertools.islice(iter_points(s), limit):
        if member_down(d, v):
            try:
                return acc.replay_point(net, s, m, v)
            except CertificateError:
                return None
    return None


def decide_against(net: Net, m: Marking, dead: DownSet, budget: int = DEFAULT_BUDGET,
                   problem: str = "live") -> Verdict:
    """Is the reachability set of ``m`` disjoint from ``dead``?  *yes* / *no* / *unknown*."""
    gen = engine(net, m, dead, budget, problem)
    while True:
        try:
            next(gen)
        except StopIteration as stop:
            return stop.value


def engine(net: Net, m: Marking, dead: DownSet, budget: int = DEFAULT_BUDGET,
           problem: str = "live"):
    """Generator form of :func:`decide_against`.

    Yields the budget spent after every slice so that a caller can interleave
    several engines; the final :class:`Verdict` is the generator's return value.
    """
    if budget < 1:
        raise InputError("budget must be positive")
    m = check_marking(net, m)
    # markings in a post-closed up-set missing the dead set need no exploration
    safe = closed_upset_within(net, dead)
    search = Search(net, m, goal=lambda x: member_down(dead, x),
                    prune=lambda x: member_up(safe, x))
    runner = acc.Accelerator(net, m)
    used = {"search": 0, "accelerate": 0}

    def stats(**extra):
        out = {"nodes": search.expanded + runner.cand.nodes,
               "steps": runner.cand.closure_checks,
               "budget_used": used["search"] + used["accelerate"],
               "budget": budget}
        out.update(extra)
        return out

    def path_verdict(seq):
        end = fire_sequence(net, m, seq)
        return Verdict(problem, NO, PathCertificate(m, tuple(seq), end, dead), stats())

    if member_down(dead, m):
        return path_verdict(())
    remaining = budget
    closed_hit = False
    while remaining > 0:
        # no-side first
        if not search.exhausted:
            before = search.expanded
            hit = search.step(min(SLICE, remaining))
            spent = max(1, search.expanded - before)
            used["search"] += spent
            remaining -= spent
            if hit is not None:
                return path_verdict(search.graph.path_to(hit))
            if search.exhausted:
                inv = _finite_invariant(search, safe)
                return Verdict(problem, YES, InvariantCertificate(inv, dead),
                               stats(engine="exhaustive-search"))
            yield spent
        if remaining <= 0:
            break
        if closed_hit or runner.cand.status == acc.EXHAUSTED:
            continue
        before = runner.cand.nodes
        status = runner.step(min(SLICE, remaining))
        spent = max(1, runner.cand.nodes - before)
        used["accelerate"] += spent
        remaining -= spent
        if status == acc.CLOSED:
            inv = runner.cand.set
            if empty_intersection_with(inv, dead):
                return Verdict(problem, YES, InvariantCertificate(inv, dead),
                               stats(engine="acceleration"))
            seq = _path_from_invariant(net, m, inv, dead)
            if seq is not None:
                return path_verdict(seq)
            closed_hit = True  # let the search use the rest of the budget
        yield spent
    return Verdict(problem, UNKNOWN, None,
                   stats(acceleration=runner.cand.status, note=runner.cand.note))


def is_live_set(net: Net, m: Marking, ts, budget: int = DEFAULT_BUDGET) -> Verdict:
    idx = _resolve(net, ts)
    d = dead_set(net, idx).dead_set
    return decide_against(net, m, d, budget, problem="live")


def is_live_transition(net: Net, m: Marking, t, budget: int = DEFAULT_BUDGET) -> Verdict:
    return is_live_set(net, m, [t], budget)


def is_live_marked_net(net: Net, m: Marking, budget: int = DEFAULT_BUDGET) -> Verdict:
    if not net.transitions:
        raise InputError("net has no transitions")
    return is_live_set(net, m, None, budget)


def is_weakly_live_set(net: Net, m: Marking, ts, budget: int = DEFAULT_BUDGET) -> Verdict:
    """In every reachable marking at least one transition of ``ts`` is not dead."""
    idx = _resolve(net, ts)
    return decide_against(net, m, all_dead_set(net, idx), budget, problem="weaklive")


def live_predicate_scan(net: Net, ts, box_bound: int, budget: int = DEFAULT_BUDGET,
                        weak: bool = False) -> Dict[Marking, Verdict]:
    """Verdict for every marking of ``[0, box_bound]^P``."""
    idx = _resolve(net, ts)
    if box_bound < 0:
        raise InputError("box bound must be non-negative")
    if (box_bound + 1) ** net.dim > MAX_SCAN:
        raise InputError(f"box has more than {MAX_SCAN} markings")
    d = all_dead_set(net, idx) if weak else dead_set(net, idx).dead_set
    out = {}
    for m in itertools.product(range(box_bound + 1), repeat=net.dim):
        out[m] = decide_against(net, m, d, budget, problem="weaklive" if weak else "live")
    return out


def validate_verdict(net: Net, m: Marking, ts, verdict: Verdict, weak: bool = False) -> bool:
    """Re-check a verdict's certificate from scratch; raise :class:`CertificateError`."""
    idx = _resolve(net, ts)
    d = all_dead_set(net, idx) if weak else dead_set(net, idx).dead_set
    m = tuple(m)
    cert = verdict.certificate
    if verdict.answer == NO:
        if not isinstance(cert, PathCertificate):
            raise CertificateError("a no verdict needs a path certificate")
        end = fire_sequence(net, m, cert.sequence)
        if cert.start != m or end != cert.end or not member_down(d, end):
            raise CertificateError("path does not end in the dead set")
        return True
    if verdict.answer == YES:
        if not isinstance(cert, InvariantCertificate):
            raise CertificateError("a yes verdict needs an invariant certificate")
        inv = cert.invariant
        if not member(inv, m):
            raise CertificateError("invariant does not contain the initial marking")
        if acc.is_post_closed(net, inv) is not True:
            raise CertificateError("invariant is not closed under firing")
        if not empty_intersection_with(inv, d):
            raise CertificateError("invariant meets the dead set")
        return True
    if cert is not None:
        raise CertificateError("an unknown verdict carries no certificate")
    return True
