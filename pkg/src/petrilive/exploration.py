"""Explicit forward exploration: bounded BFS and Karp-Miller trees.

These are the brute-force engines.  They serve as test oracles and as the
search half of the liveness procedures (finding a path into a dead set).
Budgets count explored nodes, never wall-clock time.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from .net import Marking, Net, successors
from .wqo import OMEGA, DownSet, leq, member_down


@dataclass
class ReachGraph:
    root: Marking
    nodes: Dict[Marking, Optional[Tuple[Marking, int]]] = field(default_factory=dict)
    edges: List[Tuple[Marking, int, Marking]] = field(default_factory=list)
    frontier: deque = field(default_factory=deque)
    truncated: bool = False

    def path_to(self, m: Marking) -> List[int]:
        """Transition indices of the BFS-tree path from the root to ``m``."""
        out = []
        while self.nodes[m] is not None:
            m, t = self.nodes[m]
            out.append(t)
        return out[::-1]

    def to_dot(self, net: Net) -> str:
        lines = ["digraph reach {"]
        ids = {m: i for i, m in enumerate(self.nodes)}
        for m, i in ids.items():
            lines.append(f'  n{i} [label="{",".join(map(str, m))}"];')
        for src, t, dst in self.edges:
            lines.append(f'  n{ids[src]} -> n{ids[dst]} [label="{net.transitions[t]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


class Search:
    """Resumable breadth-first search from ``m0``.

    :meth:`step` explores at most ``n`` more nodes; the caller interleaves
    several searches by calling it with small slices.
    """

    def __init__(self, net: Net, m0: Marking, goal=None, record_edges=False, prune=None):
        self.net = net
        self.graph = ReachGraph(m0)
        self.graph.nodes[m0] = None
        if not (prune and prune(m0)):
            self.graph.frontier.append(m0)
        self.goal = goal
        self.record_edges = record_edges
        # pruned nodes are recorded but never expanded
        self.prune = prune
        self.found: Optional[Marking] = m0 if goal and goal(m0) else None
        self.expanded = 0

    @property
    def exhausted(self) -> bool:
        return not self.graph.frontier

    def step(self, n: int) -> Optional[Marking]:
        g = self.graph
        if self.found is not None:
            return self.found
        for _ in range(n):
            if not g.frontier:
                break
            m = g.frontier.popleft()
            self.expanded += 1
            for ti, m2 in successors(self.net, m):
                if self.record_edges:
                    g.edges.append((m, ti, m2))
                if m2 in g.nodes:
                    continue
                g.nodes[m2] = (m, ti)
                if self.goal is not None and self.goal(m2):
                    self.found = m2
                    return m2
                if not (self.prune and self.prune(m2)):
                    g.frontier.append(m2)
        g.truncated = bool(g.frontier)
        return None


def bfs_reach(net: Net, m0: Marking, node_budget: int = 10_000) -> ReachGraph:
    """Breadth-first closure of ``m0`` expanding at most ``node_budget`` nodes."""
    if node_budget < 1:
        raise ValueError("budget must be positive")
    s = Search(net, tuple(m0), record_edges=True)
    s.step(node_budget)
    s.graph.truncated = bool(s.graph.frontier)
    return s.graph


def find_in_downset(net: Net, m0: Marking, d: DownSet, node_budget: int = 10_000
                    ) -> Optional[List[int]]:
    """Firing sequence from ``m0`` into ``d``; None if none found within budget."""
    s = Search(net, tuple(m0), goal=lambda m: member_down(d, m))
    hit = s.step(node_budget)
    return None if hit is None else s.graph.path_to(hit)


# Karp-Miller ----------------------------------------------------------

@dataclass
class KMNode:
    marking: Tuple
    parent: Optional[int]
    transition: Optional[int]
    accelerated: bool = False


@dataclass
class KMTree:
    nodes: List[KMNode]

    def markings(self):
        return [n.marking for n in self.nodes]


def _km_fire(net, m, ti):
    pre = net.pre[ti]
    if any(a is not OMEGA and a < w for a, w in zip(m, pre)):
        return None
    return tuple(a if a is OMEGA else a + d for a, d in zip(m, net.effects[ti]))


def karp_miller(net: Net, m0: Marking, node_limit: int = 100_000) -> KMTree:
    """Karp-Miller coverability tree (with the usual repeated-label pruning)."""
    nodes = [KMNode(tuple(m0), None, None)]
    stack = [0]
    while stack:
        i = stack.pop()
        m = nodes[i].marking
        # a node equal to an ancestor is a leaf
        anc = nodes[i].parent
        repeated = False
        while anc is not None:
            if nodes[anc].marking == m:
                repeated = True
                break
            anc = nodes[anc].parent
        if repeated:
            continue
        for ti in range(len(net.transitions)):
            m2 = _km_fire(net, m, ti)
            if m2 is None:
                continue
            accelerated = False
            anc = i
            lifted = list(m2)
            while anc is not None:
                a = nodes[anc].marking
                if leq(a, lifted) and tuple(a) != tuple(lifted):
                    for p in range(len(lifted)):
                        if lifted[p] is not OMEGA and a[p] is not OMEGA and a[p] < lifted[p]:
                            lifted[p] = OMEGA
                            accelerated = True
                anc = nodes[anc].parent
            nodes.append(KMNode(tuple(lifted), i, ti, accelerated))
            if len(nodes) > node_limit:
                raise RuntimeError("Karp-Miller tree exceeded node limit")
            stack.append(len(nodes) - 1)
    return KMTree(nodes)


def coverable(tree: KMTree, target: Marking) -> bool:
    return any(leq(target, n.marking) for n in tree.nodes)
