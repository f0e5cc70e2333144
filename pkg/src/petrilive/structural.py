"""Structural liveness: is there *some* marking in which a transition set is live?

The reduction net works in two phases.  A control token starts on
``start``; a generator transition moves it to ``lin_i`` and drops the base
of the ``i``-th linear set of the dead set onto the original places, after
which self-loops on ``lin_i`` add its periods.  A final transition moves the
token to ``rev_N``, where the original transitions run *backwards*.  The
markings seen with the token on ``rev_N``, restricted to the original places,
are exactly the markings from which the dead set is reachable.  The set is
structurally live iff that section is not all of ``N^P``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import acceleration as acc
from .coverability import dead_set
from .errors import InputError
from .exploration import Search
from .liveness import (NO, SLICE, UNKNOWN, YES, InvariantCertificate, Verdict, _resolve,
                       engine)
from .net import Marking, Net, check_marking
from .semilinear import (LinearSet, SemilinearSet, diagonal, from_downset, is_universal,
                         member, project, witness_not_member)

DEFAULT_BUDGET = 50_000
CANDIDATE_BUDGET = 4_096


@dataclass(frozen=True)
class ReductionNet:
    net: Net
    initial: Marking
    place_map: Tuple[int, ...]
    control_places: Tuple[str, ...]
    component_index: Dict[str, int] = field(compare=False)
    generator: SemilinearSet = None

    @property
    def start(self) -> int:
        return self.net.pindex(self.control_places[0])

    @property
    def rev(self) -> int:
        return self.net.pindex(self.control_places[-1])

    def embed(self, m: Marking, control: Optional[str] = None) -> Marking:
        """Reduction-net marking with ``m`` on the original places and one control token."""
        out = [0] * self.net.dim
        for i, p in enumerate(self.place_map):
            out[p] = m[i]
        out[self.net.pindex(control or self.control_places[-1])] = 1
        return tuple(out)


def _fresh_name(base, taken):
    name = base
    k = 0
    while name in taken:
        k += 1
        name = f"{base}_{k}"
    taken.add(name)
    return name


def build_reduction_from_set(net: Net, s: SemilinearSet, name: Optional[str] = None
                             ) -> ReductionNet:
    """Reduction net whose generator phase produces exactly ``s``."""
    if s.dim != net.dim:
        raise InputError("set dimension differs from number of places")
    taken = set(net.places) | set(net.transitions)
    start = _fresh_name("start", taken)
    lins = [_fresh_name(f"lin_{i + 1}", taken) for i in range(len(s.components))]
    rev = _fresh_name("rev_N", taken)
    places = list(net.places) + [start] + lins + [rev]
    transitions = list(net.transitions)
    arcs = {}
    # reversed original transitions, guarded by the rev_N token
    for ti, t in enumerate(net.transitions):
        for pi, p in enumerate(net.places):
            if net.post[ti][pi]:
                arcs[(p, t)] = net.post[ti][pi]
            if net.pre[ti][pi]:
                arcs[(t, p)] = net.pre[ti][pi]
        arcs[(rev, t)] = 1
        arcs[(t, rev)] = 1
    index = {}
    for i, comp in enumerate(s.components):
        rho = _fresh_name(f"t_rho_{i + 1}", taken)
        transitions.append(rho)
        index[rho] = i
        arcs[(start, rho)] = 1
        arcs[(rho, lins[i])] = 1
        for pi, p in enumerate(net.places):
            if comp.base[pi]:
                arcs[(rho, p)] = comp.base[pi]
        for l, per in enumerate(comp.periods):
            pt = _fresh_name(f"t_pi_{i + 1}_{l + 1}", taken)
            transitions.append(pt)
            index[pt] = i
            arcs[(lins[i], pt)] = 1
            arcs[(pt, lins[i])] = 1
            for pi, p in enumerate(net.places):
                if per[pi]:
                    arcs[(pt, p)] = per[pi]
    for i in range(len(s.components)):
        f = _fresh_name(f"f_{i + 1}", taken)
        transitions.append(f)
        index[f] = i
        arcs[(lins[i], f)] = 1
        arcs[(f, rev)] = 1
    red = Net.build(name or f"{net.name}_reduction", places, transitions, arcs)
    initial = tuple(int(p == start) for p in places)
    return ReductionNet(red, initial, tuple(range(net.dim)), (start, *lins, rev), index, s)


def build_reduction(net: Net, ts) -> ReductionNet:
    """Reduction net for the dead set of ``ts``."""
    idx = _resolve(net, ts)
    return build_reduction_from_set(net, from_downset(dead_set(net, idx).dead_set))


def rev_section(red: ReductionNet, s: SemilinearSet) -> SemilinearSet:
    """Vectors of ``s`` with the control token on ``rev_N``, projected to the original places."""
    if s.dim != red.net.dim:
        raise InputError("set dimension differs from the reduction net")
    ctrl = [red.net.pindex(c) for c in red.control_places]
    target = tuple(int(c == red.rev) for c in ctrl)
    comps = []
    for c in s.components:
        fixed = [k for k, p in enumerate(c.periods) if any(p[q] for q in ctrl)]
        free = [p for k, p in enumerate(c.periods) if k not in fixed]
        # control coordinates only take values 0/1, so each such period is used at most once
        for pick in itertools.product((0, 1), repeat=len(fixed)):
            base = list(c.base)
            for x, k in zip(pick, fixed):
                if x:
                    base = [a + b for a, b in zip(base, c.periods[k])]
            if tuple(base[q] for q in ctrl) == target:
                comps.append(LinearSet(tuple(base), tuple(free)))
    return project(SemilinearSet(s.dim, comps), red.place_map)


@dataclass(frozen=True)
class ReductionCertificate:
    """Evidence for *no*: the exact reachability set of the reduction net and its universal section."""

    reduction: ReductionNet
    invariant: acc.InvariantCandidate
    section: SemilinearSet

    def to_json(self, net: Net):
        return {"kind": "reduction-invariant",
                "reduction_invariant": self.invariant.to_json(),
                "rev_section": self.section.to_json()}


@dataclass(frozen=True)
class WitnessCertificate:
    """Evidence for *yes*: a marking together with its liveness verdict."""

    marking: Marking
    verdict: Verdict

    def to_json(self, net: Net):
        return {"kind": "live-marking", "marking": list(self.marking),
                "liveness": self.verdict.to_json(net)}


def _candidates(report, queue: List[Marking], dim: int):
    """Live-marking candidates: minimal non-dead markings, fed witnesses, then all of N^P."""
    seen = set()

    def fresh(m):
        if m not in seen:
            seen.add(m)
            return True
        return False

    for b in report.combined_live_candidates.basis:
        if fresh(b):
            yield b
    diag = diagonal(dim)
    while True:
        while queue:
            m = queue.pop(0)
            if fresh(m):
                yield m
        m = next(diag)
        if fresh(m):
            yield m


def decide_pslp(net: Net, ts, budget: int = DEFAULT_BUDGET,
                candidate_budget: int = CANDIDATE_BUDGET) -> Verdict:
    """Race the reduction-based *no* side against a live-marking search."""
    if budget < 1:
        raise InputError("budget must be positive")
    idx = _resolve(net, ts)
    report = dead_set(net, idx)
    dead = report.dead_set
    red = build_reduction_from_set(net, from_downset(dead))
    runner = acc.Accelerator(red.net, red.initial)
    queue: List[Marking] = []
    cands = _candidates(report, queue, net.dim)
    used = {"no_side": 0, "yes_side": 0}
    tried = []
    no_side_done = False
    current = None  # (marking, generator, spent)
    remaining = budget

    def stats(**extra):
        out = {"nodes": used["no_side"] + used["yes_side"],
               "steps": runner.cand.closure_checks,
               "budget_used": used["no_side"] + used["yes_side"], "budget": budget,
               "reduction": {"places": red.net.dim, "transitions": len(red.net.transitions)},
               "candidates_tried": len(tried),
               "no_side": runner.cand.status}
        out.update(extra)
        return out

    while remaining > 0:
        if not no_side_done:
            before = runner.cand.nodes
            status = runner.step(min(SLICE, remaining))
            spent = max(1, runner.cand.nodes - before)
            used["no_side"] += spent
            remaining -= spent
            if status == acc.CLOSED:
                no_side_done = True
                section = rev_section(red, runner.cand.set)
                if is_universal(section):
                    cert = ReductionCertificate(red, runner.cand, section)
                    return Verdict("structural", NO, cert, stats())
                queue.append(witness_not_member(section))
            elif status == acc.EXHAUSTED:
                no_side_done = True
        if remaining <= 0:
            break
        # yes side: one slice of the current candidate
        if current is None:
            m = next(cands)
            tried.append(m)
            current = [m, engine(net, m, dead, candidate_budget), 0]
        m, gen, _ = current
        try:
            spent = next(gen)
        except StopIteration as stop:
            verdict = stop.value
            spent = verdict.stats.get("budget_used", 0) - current[2]
            current = None
            if verdict.answer == YES:
                used["yes_side"] += max(0, spent)
                return Verdict("structural", YES, WitnessCertificate(m, verdict), stats())
        else:
            current[2] += spent
        spent = max(1, spent)
        used["yes_side"] += spent
        remaining -= spent
    return Verdict("structural", UNKNOWN, None, stats())


def decide_slp(net: Net, budget: int = DEFAULT_BUDGET) -> Verdict:
    if not net.transitions:
        raise InputError("net has no transitions")
    return decide_pslp(net, None, budget)


def check_nonreach(red: ReductionNet, m: Marking, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Is ``m`` unreachable in the reduction net?  *yes* with an invariant, *no* with a path."""
    if budget < 1:
        raise InputError("budget must be positive")
    m = check_marking(red.net, m)
    from .liveness import PathCertificate
    from .wqo import DownSet

    search = Search(red.net, red.initial, goal=lambda x: x == m)
    runner = acc.Accelerator(red.net, red.initial)
    point = DownSet(red.net.dim, [m])
    remaining = budget
    while remaining > 0:
        if not search.exhausted:
            before = search.expanded
            hit = search.step(min(SLICE, remaining))
            remaining -= max(1, search.expanded - before)
            if hit is not None:
                seq = tuple(search.graph.path_to(hit))
                return Verdict("nonreach", NO, PathCertificate(red.initial, seq, m, point),
                               {"nodes": search.expanded + runner.cand.nodes})
        if remaining <= 0:
            break
        if runner.cand.status == acc.GROWING:
            before = runner.cand.nodes
            status = runner.step(min(SLICE, remaining))
            remaining -= max(1, runner.cand.nodes - before)
            if status == acc.CLOSED:
                s = runner.cand.set
                stats = {"nodes": search.expanded + runner.cand.nodes}
                if not member(s, m):
                    return Verdict("nonreach", YES, InvariantCertificate(s, point), stats)
                seq = acc.replay_point(red.net, s, red.initial, m)
                return Verdict("nonreach", NO, PathCertificate(red.initial, seq, m, point),
                               stats)
        elif search.exhausted:
            break
    return Verdict("nonreach", UNKNOWN, None,
                   {"nodes": search.expanded + runner.cand.nodes,
                    "note": "reachability is only semi-decided here"})
