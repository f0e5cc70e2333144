"""Semilinear reachability sets by exploration plus acceleration.

The candidate invariant is a union of linear sets, each carrying a
derivation that proves every denoted vector reachable from ``m0``:

* ``path`` reaches the base from ``m0``;
* every period has a list of insertions ``(pos, seq)``.  Pumping the period
  ``y`` times inserts ``seq`` repeated ``y`` times just before step ``pos``
  of the path.  Insertions only ever add tokens to the markings that follow
  them, so by monotonicity the rest of the path stays enabled.

Growth rules: successors of a component inherit its periods; a new marking
that dominates an ancestor on its path (possibly after pumping existing
periods to cover a deficit) yields a new period.  The candidate is exact once
it is closed under every transition, which is checked with the Presburger
kernel.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from . import presburger as pb
from .errors import BudgetError, CertificateError
from .net import Marking, Net, fire_sequence
from .semilinear import (LinearSet, SemilinearSet, _qf, _vars, iter_points, linear_coefficients,
                         locate, member, solve_coefficients)

log = logging.getLogger(__name__)

CLOSED = "closed-exact"
GROWING = "growing"
EXHAUSTED = "budget-exhausted"

DEFAULT_DEPTH = 12
DEFAULT_CLOSURE_EVERY = 32
DEFAULT_QE_NODES = 200_000
PROBE_POINTS = 128

Insertion = Tuple[int, Tuple[int, ...]]


@dataclass(frozen=True)
class Period:
    vector: Tuple[int, ...]
    insertions: Tuple[Insertion, ...]


@dataclass(frozen=True)
class Derivation:
    """Replayable reachability certificate of one linear set."""

    path: Tuple[int, ...]
    periods: Tuple[Period, ...]

    def expand(self, coeffs: Sequence[int]):
        """Firing sequence for ``coeffs`` and the position map old -> new."""
        blocks: Dict[int, List[Tuple[int, ...]]] = {}
        for x, per in zip(coeffs, self.periods):
            if x:
                for pos, seq in per.insertions:
                    blocks.setdefault(pos, []).append(seq * x)
        out: List[int] = []
        posmap = []
        for pos in range(len(self.path) + 1):
            posmap.append(len(out))
            for seq in blocks.get(pos, ()):
                out.extend(seq)
            if pos < len(self.path):
                out.append(self.path[pos])
        return tuple(out), posmap

    def to_json(self, net: Net):
        names = net.transitions
        return {
            "path": [names[t] for t in self.path],
            "periods": [{"vector": list(p.vector),
                         "insertions": [[pos, [names[t] for t in seq]] for pos, seq in p.insertions]}
                        for p in self.periods],
        }


@dataclass
class Component:
    base: Marking
    derivation: Derivation
    alive: bool = True

    @property
    def periods(self):
        return tuple(p.vector for p in self.derivation.periods)

    def linear_set(self) -> LinearSet:
        return LinearSet(self.base, self.periods, certificate=self.derivation)


@lru_cache(maxsize=1 << 16)
def _in_span(periods, v) -> bool:
    if not any(v):
        return True
    return solve_coefficients((0,) * len(v), periods, v) is not None


def _subsumes(big: Component, small: Component) -> bool:
    if any(a > b for a, b in zip(big.base, small.base)):
        return False
    periods = big.periods
    if solve_coefficients(big.base, periods, small.base) is None:
        return False
    return all(_in_span(periods, p) for p in small.periods)


def _cover(periods, deficit) -> Optional[List[int]]:
    """Small coefficients with ``sum c*p >= deficit`` (greedy, first fitting period)."""
    coeffs = [0] * len(periods)
    need = list(deficit)
    for q in range(len(need)):
        if need[q] <= 0:
            continue
        for k, p in enumerate(periods):
            if p[q] > 0:
                n = -(-need[q] // p[q])
                coeffs[k] += n
                for r in range(len(need)):
                    need[r] -= n * p[r]
                break
        else:
            return None
    return coeffs


def _markings_along(net: Net, m0: Marking, seq):
    out = [m0]
    m = m0
    for t in seq:
        m = tuple(a + d for a, d in zip(m, net.effects[t]))
        out.append(m)
    return out


@dataclass
class InvariantCandidate:
    net: Net
    m0: Marking
    components: List[Component]
    pending: deque
    status: str = GROWING
    nodes: int = 0
    closure_checks: int = 0
    note: str = ""

    @property
    def set(self) -> SemilinearSet:
        return SemilinearSet(self.net.dim, [c.linear_set() for c in self.components if c.alive])

    def to_json(self):
        comps = []
        for c in self.components:
            if c.alive:
                d = c.linear_set().to_json()
                d["certificate"] = c.derivation.to_json(self.net)
                comps.append(d)
        return {"status": self.status, "initial": list(self.m0), "components": comps,
                "stats": {"nodes": self.nodes, "closure_checks": self.closure_checks}}


class Accelerator:
    """Resumable acceleration run; :meth:`step` spends at most ``n`` nodes."""

    def __init__(self, net: Net, m0: Marking, depth: int = DEFAULT_DEPTH,
                 propagate: bool = True, closure_every: int = DEFAULT_CLOSURE_EVERY,
                 qe_nodes: int = DEFAULT_QE_NODES):
        self.net = net
        self.depth = depth
        self.propagate = propagate
        self.closure_every = closure_every
        self.qe_nodes = qe_nodes
        m0 = tuple(m0)
        self.cand = InvariantCandidate(net, m0, [], deque())
        self._since_check = 0
        self._add(m0, Derivation((), ()))

    # growth ------------------------------------------------------------

    def _schedule(self, ci):
        for t in range(len(self.net.transitions)):
            self.cand.pending.append((ci, t))

    def _add(self, base, derivation) -> Optional[int]:
        comp = Component(base, derivation)
        comp = self._accelerate(comp)
        for other in self.cand.components:
            if other.alive and _subsumes(other, comp):
                return None
        for other in self.cand.components:
            if other.alive and _subsumes(comp, other):
                other.alive = False
        self.cand.components.append(comp)
        ci = len(self.cand.components) - 1
        self._schedule(ci)
        self._since_check += 1
        return ci

    def _accelerate(self, comp: Component) -> Component:
        """Install periods from ancestors that the base (almost) dominates."""
        net = self.net
        path = comp.derivation.path
        marks = _markings_along(net, self.cand.m0, path)
        j = len(path)
        m = comp.base
        periods = list(comp.derivation.periods)
        for i in range(j - 1, max(-1, j - 1 - self.depth), -1):
            a = marks[i]
            vecs = tuple(p.vector for p in periods)
            deficit = [max(0, x - y) for x, y in zip(a, m)]
            coeffs = [0] * len(periods) if not any(deficit) else _cover(vecs, deficit)
            if coeffs is None:
                continue
            delta = [y - x for x, y in zip(a, m)]
            for c, v in zip(coeffs, vecs):
                for q in range(len(delta)):
                    delta[q] += c * v[q]
            delta = tuple(delta)
            if not any(delta) or _in_span(vecs, delta):
                continue
            ins = []
            for c, per in zip(coeffs, periods):
                if c:
                    ins.extend((pos, seq * c) for pos, seq in per.insertions)
            segment = path[i:j]
            ins.append((j, segment))
            periods.append(Period(delta, tuple(ins)))
            if self.propagate and not any(coeffs):
                self._propagate(a, delta, segment)
        return Component(comp.base, Derivation(path, tuple(periods)), comp.alive)

    def _propagate(self, start, delta, segment):
        """A non-negative cycle enabled at ``start`` is enabled at every base above it."""
        for ci, other in enumerate(self.cand.components):
            if not other.alive or not all(x >= y for x, y in zip(other.base, start)):
                continue
            if _in_span(other.periods, delta):
                continue
            d = other.derivation
            per = Period(delta, ((len(d.path), segment),))
            other.derivation = Derivation(d.path, d.periods + (per,))
            self._schedule(ci)

    def _successor(self, ci, coeffs, t):
        comp = self.cand.components[ci]
        d = comp.derivation
        seq, posmap = d.expand(coeffs)
        periods = tuple(Period(p.vector, tuple((posmap[pos], s) for pos, s in p.insertions))
                        for p in d.periods)
        v = comp.linear_set().point(coeffs)
        base = tuple(a + e for a, e in zip(v, self.net.effects[t]))
        return self._add(base, Derivation(seq + (t,), periods))

    def _process(self, ci, t):
        comp = self.cand.components[ci]
        if not comp.alive:
            return
        pre = self.net.pre[t]
        deficit = [max(0, w - a) for w, a in zip(pre, comp.base)]
        if any(deficit):
            coeffs = _cover(comp.periods, deficit)
            if coeffs is None:
                return
        else:
            coeffs = [0] * len(comp.periods)
        v = comp.linear_set().point(coeffs)
        nxt = Component(tuple(a + e for a, e in zip(v, self.net.effects[t])), comp.derivation)
        if any(c.alive and _subsumes(c, nxt) for c in self.cand.components):
            return
        self._successor(ci, coeffs, t)

    # closure -----------------------------------------------------------

    def _probe(self, max_total=2, max_points=PROBE_POINTS):
        """Cheap explicit search for a point whose successor leaves the set."""
        s = self.cand.set
        alive = [ci for ci, c in enumerate(self.cand.components) if c.alive]
        for ci_local, coeffs, v in itertools.islice(iter_points(s, max_total), max_points):
            for t in range(len(self.net.transitions)):
                if all(a >= w for a, w in zip(v, self.net.pre[t])):
                    nxt = tuple(a + e for a, e in zip(v, self.net.effects[t]))
                    if not member(s, nxt):
                        return alive[ci_local], coeffs, t
        return None

    def _closure_check(self) -> bool:
        self.cand.closure_checks += 1
        self._since_check = 0
        cex = self._probe()
        if cex is None:
            s = self.cand.set
            res = is_post_closed(self.net, s, max_nodes=self.qe_nodes)
            if res is True:
                self.cand.status = CLOSED
                return True
            v, t = res
            ci_local, coeffs = locate(s, v)
            alive = [ci for ci, c in enumerate(self.cand.components) if c.alive]
            cex = alive[ci_local], coeffs, t
        ci, coeffs, t = cex
        self._successor(ci, coeffs, t)
        return False

    def step(self, n: int) -> str:
        cand = self.cand
        if cand.status != GROWING:
            return cand.status
        try:
            while n > 0:
                if cand.pending and self._since_check < self.closure_every:
                    ci, t = cand.pending.popleft()
                    self._process(ci, t)
                    n -= 1
                    cand.nodes += 1
                    continue
                if self._closure_check():
                    return cand.status
                n -= 1
                cand.nodes += 1
        except BudgetError as exc:
            cand.status = EXHAUSTED
            cand.note = str(exc)
        return cand.status


def accelerate(net: Net, m0: Marking, budget: int = 10_000, **kw) -> InvariantCandidate:
    """Grow a certified semilinear under-approximation of the reachability set.

    Status ``closed-exact`` means the set is closed under all transitions and
    hence equals the reachability set of ``m0``.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    acc = Accelerator(net, m0, **kw)
    status = acc.step(budget)
    if status == GROWING:
        acc.cand.status = EXHAUSTED
    return acc.cand


def is_post_closed(net: Net, s: SemilinearSet, max_nodes: int = pb.DEFAULT_MAX_NODES):
    """``True`` if every step from ``s`` stays in ``s``; else a ``(vector, t)`` counterexample."""
    if s.dim != net.dim:
        raise ValueError("set dimension differs from number of places")
    vs = _vars(s.dim)
    parts = {}

    def qf(i):
        if i not in parts:
            parts[i] = _qf(SemilinearSet(s.dim, [s.components[i]]), vs, max_nodes)
        return parts[i]

    for ci, comp in enumerate(s.components):
        for t in range(len(net.transitions)):
            eff, pre = net.effects[t], net.pre[t]
            if not comp.periods:
                v = comp.base
                if all(a >= w for a, w in zip(v, pre)) and \
                        not member(s, tuple(a + e for a, e in zip(v, eff))):
                    return v, t
                continue
            single = LinearSet(comp.base, comp.periods)
            # a point component matters only if it is the image of an enabled member
            keep = [i for i, c in enumerate(s.components)
                    if c.periods or _is_image(single, c.base, pre, eff)]
            shifted = pb.Or(*[qf(i) for i in keep])
            for v, e in zip(vs, eff):
                if e:
                    shifted = pb.substitute(shifted, v, pb.Term.var(v) + e)
            enabled = pb.And(*[pb.Ge(pb.Term.var(v), w) for v, w in zip(vs, pre) if w])
            body = pb.And(qf(ci), enabled, pb.Not(shifted))
            if pb.exists_block(body, vs, max_nodes):
                return _find_counterexample(net, s, ci, t)
    return True


def _is_image(ls: LinearSet, w, pre, eff) -> bool:
    v = tuple(a - e for a, e in zip(w, eff))
    if any(a < p for a, p in zip(v, pre)):
        return False
    return linear_coefficients(ls, v) is not None


def _find_counterexample(net, s, ci, t):
    single = SemilinearSet(s.dim, [s.components[ci]])
    for _, _, v in iter_points(single):
        if all(a >= w for a, w in zip(v, net.pre[t])):
            nxt = tuple(a + e for a, e in zip(v, net.effects[t]))
            if not member(s, nxt):
                return v, t
    raise AssertionError("decision procedure reported a counterexample that does not exist")


def verify_certificates(net: Net, s: SemilinearSet, m0: Marking, samples: int = 20,
                        seed: int = 0) -> bool:
    """Replay every derivation; raise :class:`CertificateError` on mismatch."""
    rng = random.Random(seed)
    m0 = tuple(m0)
    for ci, comp in enumerate(s.components):
        d = comp.certificate
        if d is None:
            raise CertificateError("component has no certificate", component=ci)
        k = len(comp.periods)
        trials = [(0,) * k]
        for i in range(k):
            trials.append(tuple(int(i == j) for j in range(k)))
            trials.append(tuple(2 * int(i == j) for j in range(k)))
        trials += [tuple(rng.randint(0, 3) for _ in range(k)) for _ in range(samples)]
        if tuple(p.vector for p in d.periods) != comp.periods:
            raise CertificateError("certificate periods differ from the linear set", component=ci)
        for coeffs in trials:
            seq, _ = d.expand(coeffs)
            try:
                reached = fire_sequence(net, m0, seq)
            except Exception as exc:
                raise CertificateError(f"replay failed for coefficients {coeffs}: {exc}",
                                       component=ci) from None
            if reached != comp.point(coeffs):
                raise CertificateError(
                    f"replay for coefficients {coeffs} reached {reached}, "
                    f"expected {comp.point(coeffs)}", component=ci)
    return True


def replay_point(net: Net, s: SemilinearSet, m0: Marking, v) -> Tuple[int, ...]:
    """Firing sequence from ``m0`` to a member ``v`` of a certified set."""
    hit = locate(s, v)
    if hit is None:
        raise CertificateError(f"{v} is not in the set")
    ci, coeffs = hit
    seq, _ = s.components[ci].certificate.expand(coeffs)
    if fire_sequence(net, tuple(m0), seq) != tuple(v):
        raise CertificateError("replay did not reach the requested vector", component=ci)
    return seq
